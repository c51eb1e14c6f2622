//! Single orthogonal operators: the block normal form, rotations and their angle, and the
//! correspondence between proper rotations and rotations by a right angle.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    check_finite, check_square, direct_sum, orthogonality_defect, rotation_block, symmetric_eigen,
    RealMatrix, RealVector, Tolerance,
};

/// Orthonormal basis in which an orthogonal operator is
/// `R(a_1) + ... + R(a_k) + I_l + (-I_m)`.
#[derive(Debug, Clone)]
pub struct NormalForm {
    /// Block angles in `(0, pi)`, ascending, one entry per 2x2 block.
    pub angles: Vec<f64>,
    pub fix_dim: usize,
    pub neg_dim: usize,
    /// Columns: the block pairs in angle order, then the fixed vectors, then the negated ones.
    pub basis: RealMatrix,
}

impl NormalForm {
    pub fn dim(&self) -> usize {
        2 * self.angles.len() + self.fix_dim + self.neg_dim
    }

    /// The block diagonal matrix the operator takes in `basis`.
    pub fn block_matrix(&self) -> RealMatrix {
        let mut blocks: Vec<RealMatrix> = self.angles.iter().map(|&a| rotation_block(a)).collect();
        if self.fix_dim > 0 {
            blocks.push(RealMatrix::identity(self.fix_dim, self.fix_dim));
        }
        if self.neg_dim > 0 {
            blocks.push(-RealMatrix::identity(self.neg_dim, self.neg_dim));
        }
        direct_sum(&blocks)
    }

    /// The orthonormal pair `(u, w)` spanning the `i`-th rotation block, with
    /// `M u = cos a u + sin a w`.
    pub fn block_pair(&self, i: usize) -> (RealVector, RealVector) {
        (
            self.basis.column(2 * i).into_owned(),
            self.basis.column(2 * i + 1).into_owned(),
        )
    }
}

fn ensure_orthogonal(m: &RealMatrix, tol: &Tolerance) -> Result<usize> {
    check_finite(m)?;
    let n = check_square(m)?;
    let deviation = orthogonality_defect(m);
    if deviation > tol.residual_tol {
        return Err(Error::NotOrthogonal { deviation });
    }
    Ok(n)
}

/// Normal form of an orthogonal matrix.
///
/// The symmetric part `(M + M^T)/2` acts as `cos a` on the plane of each rotation block,
/// so its eigenvectors split the space into clusters of equal angle. Inside a cluster,
/// `(v, P_{v^perp} M v)` gives a block; fixed and negated vectors come from the clusters
/// at angle 0 and pi.
pub fn orthogonal_normal_form(m: &RealMatrix, tol: &Tolerance) -> Result<NormalForm> {
    let n = ensure_orthogonal(m, tol)?;
    let sym = (m + m.transpose()) * 0.5;
    let eig = symmetric_eigen(&sym, tol)?;

    let mut angled: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let v = eig.vectors.column(i);
            let mv = m * v;
            let c = v.dot(&mv);
            let s = (&mv - v * c).norm();
            (s.atan2(c), i)
        })
        .collect();
    angled.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // single linkage clustering on sorted angles
    let mut clusters: Vec<Vec<(f64, usize)>> = Vec::new();
    for item in angled {
        match clusters.last_mut() {
            Some(last) if item.0 - last.last().unwrap().0 <= tol.angle_tol => last.push(item),
            _ => clusters.push(vec![item]),
        }
    }

    let slack = 10.0 * tol.residual_tol + tol.angle_tol;
    let mut fixed = Vec::new();
    let mut negated = Vec::new();
    let mut blocks: Vec<(f64, RealVector, RealVector)> = Vec::new();
    for cluster in clusters {
        let mean = cluster.iter().map(|c| c.0).sum::<f64>() / cluster.len() as f64;
        let vecs: Vec<RealVector> = cluster
            .iter()
            .map(|&(_, i)| eig.vectors.column(i).into_owned())
            .collect();
        if mean <= tol.angle_tol || mean >= PI - tol.angle_tol {
            let sign = if mean <= tol.angle_tol { 1.0 } else { -1.0 };
            for v in vecs {
                let defect = (m * &v - &v * sign).norm();
                if defect > slack {
                    return Err(Error::Numerical(format!(
                        "eigenvector at angle {mean} is not mapped to {sign} times itself (defect {defect:.3e})"
                    )));
                }
                if sign > 0.0 {
                    fixed.push(v);
                } else {
                    negated.push(v);
                }
            }
        } else {
            if !vecs.len().is_multiple_of(2) {
                return Err(Error::Numerical(format!(
                    "angle cluster near {mean} has odd multiplicity {}",
                    vecs.len()
                )));
            }
            blocks.extend(pair_cluster(m, &vecs)?);
        }
    }
    blocks.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut basis = RealMatrix::zeros(n, n);
    let mut col = 0;
    for (_, u, w) in &blocks {
        basis.set_column(col, u);
        basis.set_column(col + 1, w);
        col += 2;
    }
    for v in fixed.iter().chain(negated.iter()) {
        basis.set_column(col, v);
        col += 1;
    }
    Ok(NormalForm {
        angles: blocks.iter().map(|b| b.0).collect(),
        fix_dim: fixed.len(),
        neg_dim: negated.len(),
        basis,
    })
}

/// Splits an `M`-invariant eigenspace of the symmetric part into rotation planes.
fn pair_cluster(m: &RealMatrix, vecs: &[RealVector]) -> Result<Vec<(f64, RealVector, RealVector)>> {
    let mut chosen: Vec<RealVector> = Vec::new();
    let mut out = Vec::new();
    let project_out = |x: &mut RealVector, basis: &[RealVector]| {
        for _ in 0..2 {
            for b in basis {
                let c = b.dot(x);
                x.axpy(-c, b, 1.0);
            }
        }
    };
    // some candidate keeps at least 1/sqrt(m) of its length outside the chosen planes
    let floor = 0.5 / (vecs.len() as f64).sqrt();
    for _ in 0..vecs.len() / 2 {
        // candidate with the largest component outside the planes taken so far
        let mut best: Option<RealVector> = None;
        let mut best_norm = 0.0;
        for v in vecs {
            let mut x = v.clone();
            project_out(&mut x, &chosen);
            let nrm = x.norm();
            if nrm > best_norm {
                best_norm = nrm;
                best = Some(x);
            }
        }
        let u = match best {
            Some(x) if best_norm > floor => x / best_norm,
            _ => {
                return Err(Error::Numerical(
                    "rotation planes could not be separated".into(),
                ))
            }
        };
        let mu = m * &u;
        let c = u.dot(&mu);
        let mut w = &mu - &u * c;
        project_out(&mut w, &chosen);
        let s = w.norm();
        if s == 0.0 {
            return Err(Error::Numerical("degenerate rotation plane".into()));
        }
        w /= s;
        let angle = w.dot(&mu).atan2(c);
        chosen.push(u.clone());
        chosen.push(w.clone());
        out.push((angle, u, w));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationKind {
    Identity,
    NegIdentity,
    Proper,
}

/// An orthogonal operator with a single angle: `<v, M v> = cos(angle)` for every unit `v`.
#[derive(Debug, Clone)]
pub struct Rotation {
    matrix: RealMatrix,
    angle: f64,
    kind: RotationKind,
}

impl Rotation {
    pub fn new(matrix: RealMatrix, tol: &Tolerance) -> Result<Self> {
        as_rotation(&matrix, tol)
    }

    pub fn identity(n: usize) -> Self {
        Rotation {
            matrix: RealMatrix::identity(n, n),
            angle: 0.0,
            kind: RotationKind::Identity,
        }
    }

    pub fn neg_identity(n: usize) -> Self {
        Rotation {
            matrix: -RealMatrix::identity(n, n),
            angle: PI,
            kind: RotationKind::NegIdentity,
        }
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.matrix
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn kind(&self) -> RotationKind {
        self.kind
    }

    pub fn is_proper(&self) -> bool {
        self.kind == RotationKind::Proper
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `+1` for the identity, `-1` for its negative, `None` for proper rotations.
    pub fn scalar(&self) -> Option<f64> {
        match self.kind {
            RotationKind::Identity => Some(1.0),
            RotationKind::NegIdentity => Some(-1.0),
            RotationKind::Proper => None,
        }
    }
}

/// Certifies `m` as a rotation and computes its angle from the normal form.
pub fn as_rotation(m: &RealMatrix, tol: &Tolerance) -> Result<Rotation> {
    let nf = orthogonal_normal_form(m, tol)?;
    if nf.angles.is_empty() {
        return match (nf.fix_dim, nf.neg_dim) {
            (_, 0) => Ok(Rotation {
                matrix: m.clone(),
                angle: 0.0,
                kind: RotationKind::Identity,
            }),
            (0, _) => Ok(Rotation {
                matrix: m.clone(),
                angle: PI,
                kind: RotationKind::NegIdentity,
            }),
            (l, k) => Err(Error::NotARotation(format!(
                "{l} fixed and {k} negated directions"
            ))),
        };
    }
    if nf.fix_dim + nf.neg_dim > 0 {
        return Err(Error::NotARotation(format!(
            "rotation blocks mixed with {} fixed and {} negated directions",
            nf.fix_dim, nf.neg_dim
        )));
    }
    for w in nf.angles.windows(2) {
        if w[1] - w[0] > tol.angle_tol {
            return Err(Error::NotARotation(format!(
                "distinct block angles {} and {}",
                w[0], w[1]
            )));
        }
    }
    let angle = nf.angles.iter().sum::<f64>() / nf.angles.len() as f64;
    Ok(Rotation {
        matrix: m.clone(),
        angle,
        kind: RotationKind::Proper,
    })
}

/// `(M - cos a I) / sin a`, the right-angle rotation attached to a proper rotation.
pub fn rho(d: &Rotation, tol: &Tolerance) -> Result<Rotation> {
    if !d.is_proper() {
        return Err(Error::NotProper { angle: d.angle });
    }
    let n = d.dim();
    let (s, c) = d.angle.sin_cos();
    let m = (&d.matrix - RealMatrix::identity(n, n) * c) / s;
    as_rotation(&m, tol)
}

/// Inverse of [`rho`]: the proper rotation `cos a I + sin a S` with angle `alpha`.
pub fn unrho(s: &Rotation, alpha: f64, tol: &Tolerance) -> Result<Rotation> {
    if (s.angle - FRAC_PI_2).abs() > tol.angle_tol {
        return Err(Error::BadAngle {
            angle: s.angle,
            reason: "the rotation must have angle pi/2",
        });
    }
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::BadAngle {
            angle: alpha,
            reason: "target angle must lie in (0, pi)",
        });
    }
    let n = s.dim();
    let (sn, c) = alpha.sin_cos();
    Ok(Rotation {
        matrix: RealMatrix::identity(n, n) * c + &s.matrix * sn,
        angle: alpha,
        kind: RotationKind::Proper,
    })
}
