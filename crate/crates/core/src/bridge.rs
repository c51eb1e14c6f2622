//! Complexification of a pair of proper rotations.
//!
//! For proper rotations `d` (angle `a`) and `e` (angle `b`) on `R^n`, the complexified
//! operators split `C^n` into eigenplanes `A = ker(d - e^{ia})`, `B = ker(d - e^{-ia})`,
//! `C = ker(e - e^{ib})` and `D = ker(e - e^{-ib})`, each of dimension `n/2`. Complex
//! conjugation swaps `A` with `B` and `C` with `D`. When `A` meets neither `C` nor `D`, the
//! projections `P_A|C` and `P_B|C` are invertible and `T = conj o P_B|C o (P_A|C)^{-1}` is
//! an antilinear bijection of `A`, whose invariant lines correspond to real invariant
//! planes of the pair.

use crate::error::{Error, Result};
use crate::linalg::{
    complex_eigenvalues, max_abs, singular_values, smallest_singular_vector, subspace_meet,
    Complex64, ComplexMatrix, ComplexVector, Tolerance,
};
use crate::orthogonal::{orthogonal_normal_form, Rotation};

/// Orthonormal bases of the four eigenplanes. `b` is the entrywise conjugate of `a` and `d`
/// of `c`, column by column.
#[derive(Debug, Clone)]
pub struct EigenplaneBases {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
    pub alpha: f64,
    pub beta: f64,
}

/// Basis of the `e^{i angle}` eigenspace: each normal-form pair `(u, w)` gives `(u - i w)/sqrt 2`.
fn upper_eigenplane(r: &Rotation, tol: &Tolerance) -> Result<ComplexMatrix> {
    if !r.is_proper() {
        return Err(Error::NotProper { angle: r.angle() });
    }
    let nf = orthogonal_normal_form(r.matrix(), tol)?;
    let n = r.dim();
    let k = nf.angles.len();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = ComplexMatrix::zeros(n, k);
    for j in 0..k {
        let (u, w) = nf.block_pair(j);
        for i in 0..n {
            basis[(i, j)] = Complex64::new(u[i] * h, -w[i] * h);
        }
    }
    Ok(basis)
}

pub fn eigenplanes(d: &Rotation, e: &Rotation, tol: &Tolerance) -> Result<EigenplaneBases> {
    if d.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("dimension {}", d.dim()),
            found: format!("dimension {}", e.dim()),
        });
    }
    let a = upper_eigenplane(d, tol)?;
    let c = upper_eigenplane(e, tol)?;
    Ok(EigenplaneBases {
        b: a.conjugate(),
        d: c.conjugate(),
        a,
        c,
        alpha: d.angle(),
        beta: e.angle(),
    })
}

/// An antilinear map `x -> M conj(x)` written in the coordinates of an orthonormal basis.
#[derive(Debug, Clone)]
pub struct AntilinearOp {
    pub m: ComplexMatrix,
    /// Ambient basis the coordinates refer to (`n x k`).
    pub basis: ComplexMatrix,
}

impl AntilinearOp {
    /// Operator on `C^k` in standard coordinates. Fails unless `m` is square and invertible.
    pub fn from_coordinates(m: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let k = m.nrows();
        if k == 0 || m.ncols() != k {
            return Err(Error::DimensionMismatch {
                expected: "non-empty square matrix".into(),
                found: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        let s = singular_values(&m);
        if s[k - 1] <= tol.rank_tol * s[0] {
            return Err(Error::SingularProjection {
                condition: s[0] / s[k - 1],
            });
        }
        Ok(AntilinearOp {
            m,
            basis: ComplexMatrix::identity(k, k),
        })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn apply(&self, x: &ComplexVector) -> ComplexVector {
        &self.m * x.conjugate()
    }

    /// Coordinates to ambient vector.
    pub fn embed(&self, x: &ComplexVector) -> ComplexVector {
        &self.basis * x
    }
}

/// Builds `T = conj o P_B|C o (P_A|C)^{-1}` on `A`.
///
/// In coordinates `P_A|C` is `G = A^H C` and `P_B|C` is `H = B^H C`; since `B = conj(A)`,
/// conjugation takes `B`-coordinates to `A`-coordinates by conjugating them, so
/// `M = conj(H G^{-1})`.
pub fn build_t(planes: &EigenplaneBases, tol: &Tolerance) -> Result<AntilinearOp> {
    if subspace_meet(&planes.a, &planes.c, tol)?.ncols() > 0
        || subspace_meet(&planes.a, &planes.d, tol)?.ncols() > 0
    {
        return Err(Error::IntersectionNonTrivial);
    }
    let g = planes.a.adjoint() * &planes.c;
    let h = planes.b.adjoint() * &planes.c;
    for proj in [&g, &h] {
        let s = singular_values(proj);
        let k = s.len();
        let condition = s[0] / s[k - 1];
        if !(condition.is_finite() && condition * tol.rank_tol < 1.0) {
            return Err(Error::SingularProjection { condition });
        }
    }
    let g_inv = g.try_inverse().ok_or(Error::SingularProjection {
        condition: f64::INFINITY,
    })?;
    Ok(AntilinearOp {
        m: (h * g_inv).conjugate(),
        basis: planes.a.clone(),
    })
}

/// Coordinate matrix `M conj(M)` of the linear map `T o T`.
pub fn t_squared(t: &AntilinearOp) -> ComplexMatrix {
    &t.m * t.m.conjugate()
}

/// A line invariant under an antilinear operator.
#[derive(Debug, Clone)]
pub struct InvariantLine {
    /// Unit vector in the coordinates of the operator.
    pub vector: ComplexVector,
    /// `T v = mu v`.
    pub mu: Complex64,
    /// The non-negative eigenvalue of `T^2` the line was built from.
    pub lambda: f64,
}

impl InvariantLine {
    pub fn residual(&self, t: &AntilinearOp) -> f64 {
        (t.apply(&self.vector) - &self.vector * self.mu).norm()
    }
}

/// An invariant line of `t`, if one exists.
///
/// `T` has an invariant line iff `T^2` has a non-negative real eigenvalue `lambda`. With
/// `T^2 u = lambda u`, either `T u` is parallel to `u`, or both `T u + sqrt(lambda) u` and
/// `i (T u - sqrt(lambda) u)` are fixed up to the factor `sqrt(lambda)`; the longer one is
/// returned.
pub fn antilinear_invariant_line(t: &AntilinearOp, tol: &Tolerance) -> Option<InvariantLine> {
    let k = t.dim();
    let n_mat = t_squared(t);
    let n_norm = n_mat.norm();
    let eigenvalues = complex_eigenvalues(&n_mat).ok()?;
    // backward error of the eigenvalue solver, on top of the relative threshold
    let im_floor = 64.0 * f64::EPSILON * n_norm;

    let mut candidates: Vec<Complex64> = eigenvalues
        .into_iter()
        .filter(|l| {
            l.im.abs() <= (tol.rank_tol * l.norm()).max(im_floor) && l.re >= -tol.rank_tol * n_norm
        })
        .collect();
    candidates.sort_by(|x, y| y.re.total_cmp(&x.re));

    let bound = 10.0 * tol.residual_tol;
    let mut best: Option<InvariantLine> = None;
    for lambda in candidates {
        let lambda = lambda.re.max(0.0);
        if lambda <= tol.rank_tol * n_norm {
            // T is bijective, so T^2 has no zero eigenvalue
            continue;
        }
        let shifted = &n_mat - ComplexMatrix::identity(k, k) * Complex64::new(lambda, 0.0);
        let (_, u) = smallest_singular_vector(&shifted);
        let tu = t.apply(&u);
        let root = lambda.sqrt();
        let plus = &tu + &u * Complex64::new(root, 0.0);
        let minus = (&tu - &u * Complex64::new(root, 0.0)) * Complex64::new(0.0, 1.0);
        let v = if plus.norm() >= minus.norm() {
            plus
        } else {
            minus
        };
        let norm = v.norm();
        if norm == 0.0 {
            continue;
        }
        let v = v.unscale(norm);
        let tv = t.apply(&v);
        let mu = v.dotc(&tv);
        let line = InvariantLine {
            vector: v,
            mu,
            lambda,
        };
        let res = line.residual(t);
        if res <= bound * mu.norm().max(1.0) {
            return Some(line);
        }
        if best.as_ref().is_none_or(|b| res < b.residual(t)) {
            best = Some(line);
        }
    }
    best.filter(|b| b.residual(t) <= bound * b.mu.norm().max(1.0))
}

/// `max` over columns `c` of `C` of the mismatch between `T(P_A c)` and `conj(P_B c)`.
pub fn well_definedness_defect(planes: &EigenplaneBases, t: &AntilinearOp) -> f64 {
    let x = planes.a.adjoint() * &planes.c;
    let y = (planes.b.adjoint() * &planes.c).conjugate();
    max_abs(&(&t.m * x.conjugate() - y))
}
