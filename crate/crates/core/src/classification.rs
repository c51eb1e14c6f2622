//! Canonical forms of irreducible rotation pairs and isomorphism of rotation pairs.
//!
//! Every irreducible pair is orthogonally isomorphic to exactly one of
//!
//! | family            | pair                                   | parameters                |
//! |-------------------|----------------------------------------|---------------------------|
//! | `Dim1`            | `(r, s)`                               | `r, s = ±1`               |
//! | `Dim2LeftScalar`  | `(r I_2, R_b)`                         | `r = ±1`, `b ∈ (0, pi)`   |
//! | `Dim2RightScalar` | `(R_a, s I_2)`                         | `a ∈ (0, pi)`, `s = ±1`   |
//! | `Dim2Proper`      | `(R_a, R_{r b})`                       | `a, b ∈ (0, pi)`, `r = ±1`|
//! | `Dim4`            | `(R_a + R_a, T_t (R_b + R_b) T_{-t})`  | `a, b, t ∈ (0, pi)`       |
//!
//! with `T_t = 1 + R_t + 1`. A general pair is classified by the multiset of the forms of
//! its irreducible summands.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::decomposition::{decompose, is_irreducible, InvariantBlock};
use crate::error::{Error, Result};
use crate::linalg::{
    direct_sum, max_abs, rotation_block, singular_values, RealMatrix, RealVector, Tolerance,
};
use crate::orthogonal::{as_rotation, rho, Rotation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Rounds to 12 significant digits before serialising.
fn sig12<S: Serializer>(x: &f64, ser: S) -> std::result::Result<S::Ok, S::Error> {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(*x);
    ser.serialize_f64(rounded)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum CanonicalForm {
    Dim1 {
        r: Sign,
        s: Sign,
    },
    Dim2LeftScalar {
        r: Sign,
        #[serde(serialize_with = "sig12")]
        beta: f64,
    },
    Dim2RightScalar {
        #[serde(serialize_with = "sig12")]
        alpha: f64,
        s: Sign,
    },
    Dim2Proper {
        #[serde(serialize_with = "sig12")]
        alpha: f64,
        #[serde(serialize_with = "sig12")]
        beta: f64,
        r: Sign,
    },
    Dim4 {
        #[serde(serialize_with = "sig12")]
        alpha: f64,
        #[serde(serialize_with = "sig12")]
        beta: f64,
        #[serde(serialize_with = "sig12")]
        theta: f64,
    },
}

/// Angles closer than this are tied when ordering canonical forms.
pub const ORDER_TOL: f64 = 1e-7;

fn sign_angle(s: Sign) -> f64 {
    match s {
        Sign::Plus => 0.0,
        Sign::Minus => PI,
    }
}

impl CanonicalForm {
    pub fn dim(&self) -> usize {
        match self {
            CanonicalForm::Dim1 { .. } => 1,
            CanonicalForm::Dim4 { .. } => 4,
            _ => 2,
        }
    }

    fn family_index(&self) -> usize {
        match self {
            CanonicalForm::Dim1 { .. } => 0,
            CanonicalForm::Dim2LeftScalar { .. } => 1,
            CanonicalForm::Dim2RightScalar { .. } => 2,
            CanonicalForm::Dim2Proper { .. } => 3,
            CanonicalForm::Dim4 { .. } => 4,
        }
    }

    /// `(signs, angles)` in the order `(r, s, alpha, beta, theta)`, absent entries zero.
    fn parameters(&self) -> ([f64; 2], [f64; 3]) {
        match *self {
            CanonicalForm::Dim1 { r, s } => ([r.value(), s.value()], [0.0; 3]),
            CanonicalForm::Dim2LeftScalar { r, beta } => ([r.value(), 0.0], [0.0, beta, 0.0]),
            CanonicalForm::Dim2RightScalar { alpha, s } => ([0.0, s.value()], [alpha, 0.0, 0.0]),
            CanonicalForm::Dim2Proper { alpha, beta, r } => ([r.value(), 0.0], [alpha, beta, 0.0]),
            CanonicalForm::Dim4 { alpha, beta, theta } => ([0.0; 2], [alpha, beta, theta]),
        }
    }

    /// Family order, then `(r, s, alpha, beta, theta)` lexicographically. Angles closer than
    /// [`ORDER_TOL`] compare equal so that rounding noise does not decide the order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let (ls, la) = self.parameters();
        let (rs, ra) = other.parameters();
        self.family_index()
            .cmp(&other.family_index())
            .then_with(|| {
                ls.iter()
                    .chain(la.iter())
                    .zip(rs.iter().chain(ra.iter()))
                    .map(|(a, b)| {
                        if (a - b).abs() <= ORDER_TOL {
                            Ordering::Equal
                        } else {
                            a.total_cmp(b)
                        }
                    })
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }

    /// Same family and signs, angles within `angle_tol`.
    pub fn approx_eq(&self, other: &Self, angle_tol: f64) -> bool {
        let (ls, la) = self.parameters();
        let (rs, ra) = other.parameters();
        self.family_index() == other.family_index()
            && ls == rs
            && la
                .iter()
                .zip(ra.iter())
                .all(|(a, b)| (a - b).abs() <= angle_tol)
    }

    /// Angles of the first and second operator of the realised pair.
    pub fn operator_angles(&self) -> (f64, f64) {
        match *self {
            CanonicalForm::Dim1 { r, s } => (sign_angle(r), sign_angle(s)),
            CanonicalForm::Dim2LeftScalar { r, beta } => (sign_angle(r), beta),
            CanonicalForm::Dim2RightScalar { alpha, s } => (alpha, sign_angle(s)),
            CanonicalForm::Dim2Proper { alpha, beta, .. } => (alpha, beta),
            CanonicalForm::Dim4 { alpha, beta, .. } => (alpha, beta),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (_, angles) = self.parameters();
        let used: &[f64] = match self {
            CanonicalForm::Dim1 { .. } => &[],
            CanonicalForm::Dim2LeftScalar { .. } => &angles[1..2],
            CanonicalForm::Dim2RightScalar { .. } => &angles[0..1],
            CanonicalForm::Dim2Proper { .. } => &angles[0..2],
            CanonicalForm::Dim4 { .. } => &angles[..],
        };
        for &a in used {
            if !(a > 0.0 && a < PI) {
                return Err(Error::BadParameter(format!(
                    "angle {a} of {self} is outside (0, pi)"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalForm::Dim1 { r, s } => write!(f, "Dim1(r={r}, s={s})"),
            CanonicalForm::Dim2LeftScalar { r, beta } => {
                write!(f, "Dim2LeftScalar(r={r}, beta={beta:.9})")
            }
            CanonicalForm::Dim2RightScalar { alpha, s } => {
                write!(f, "Dim2RightScalar(alpha={alpha:.9}, s={s})")
            }
            CanonicalForm::Dim2Proper { alpha, beta, r } => {
                write!(f, "Dim2Proper(alpha={alpha:.9}, beta={beta:.9}, r={r})")
            }
            CanonicalForm::Dim4 { alpha, beta, theta } => {
                write!(
                    f,
                    "Dim4(alpha={alpha:.9}, beta={beta:.9}, theta={theta:.9})"
                )
            }
        }
    }
}

/// Isomorphism class of a rotation pair: the sorted multiset of canonical forms of its
/// irreducible summands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassLabel {
    forms: Vec<CanonicalForm>,
}

impl ClassLabel {
    pub fn new(mut forms: Vec<CanonicalForm>) -> Self {
        forms.sort_by(|a, b| a.canonical_cmp(b));
        ClassLabel { forms }
    }

    pub fn forms(&self) -> &[CanonicalForm] {
        &self.forms
    }

    pub fn dim(&self) -> usize {
        self.forms.iter().map(|f| f.dim()).sum()
    }

    /// Multiset equality with angles compared within `angle_tol`.
    pub fn matches(&self, other: &ClassLabel, angle_tol: f64) -> bool {
        if self.forms.len() != other.forms.len() {
            return false;
        }
        let mut used = vec![false; other.forms.len()];
        self.forms.iter().all(|f| {
            let hit = other
                .forms
                .iter()
                .enumerate()
                .find(|(i, g)| !used[*i] && f.approx_eq(g, angle_tol));
            match hit {
                Some((i, _)) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `1 + R_theta + 1` on `R^4`.
pub fn t_theta(theta: f64) -> RealMatrix {
    direct_sum(&[
        RealMatrix::identity(1, 1),
        rotation_block(theta),
        RealMatrix::identity(1, 1),
    ])
}

/// Relative orientation of two proper plane rotations: `+1` iff they turn the same way.
pub fn orientation_sign(d: &RealMatrix, e: &RealMatrix, tol: &Tolerance) -> Result<Sign> {
    for m in [d, e] {
        if m.nrows() != 2 {
            return Err(Error::DimensionMismatch {
                expected: "2x2 matrix".into(),
                found: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        let r = as_rotation(m, tol)?;
        if !r.is_proper() {
            return Err(Error::NotProper { angle: r.angle() });
        }
    }
    let skew = |m: &RealMatrix| m[(1, 0)] - m[(0, 1)];
    Ok(Sign::of(skew(d) * skew(e)))
}

/// Deterministic unit samples: coordinate vectors and normalised sums of pairs of them.
fn unit_samples(n: usize) -> Vec<RealVector> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        let mut v = RealVector::zeros(n);
        v[i] = 1.0;
        out.push(v);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = RealVector::zeros(n);
            v[i] = FRAC_1_SQRT_2;
            v[j] = FRAC_1_SQRT_2;
            out.push(v);
        }
    }
    out
}

/// `arccos <s v, t v>` for two right-angle rotations whose inner product `<s v, t v>` does
/// not depend on the unit vector `v`.
pub fn theta_invariant(s: &Rotation, t: &Rotation, tol: &Tolerance) -> Result<f64> {
    for r in [s, t] {
        if (r.angle() - FRAC_PI_2).abs() > tol.angle_tol {
            return Err(Error::BadAngle {
                angle: r.angle(),
                reason: "theta invariant needs rotations by pi/2",
            });
        }
    }
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("dimension {}", s.dim()),
            found: format!("dimension {}", t.dim()),
        });
    }
    let values: Vec<f64> = unit_samples(s.dim())
        .iter()
        .map(|v| (s.matrix() * v).dot(&(t.matrix() * v)))
        .collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > 10.0 * tol.residual_tol {
        return Err(Error::NotConstant { spread: hi - lo });
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(mean.clamp(-1.0, 1.0).acos())
}

pub fn classify_block(block: &InvariantBlock, tol: &Tolerance) -> Result<CanonicalForm> {
    if !is_irreducible(block, tol)? {
        return Err(Error::NotIrreducible);
    }
    let (d, e) = block.restricted_rotations(tol)?;
    let form = match (block.dim(), d.scalar(), e.scalar()) {
        (1, Some(r), Some(s)) => CanonicalForm::Dim1 {
            r: Sign::of(r),
            s: Sign::of(s),
        },
        (2, Some(r), None) => CanonicalForm::Dim2LeftScalar {
            r: Sign::of(r),
            beta: e.angle(),
        },
        (2, None, Some(s)) => CanonicalForm::Dim2RightScalar {
            alpha: d.angle(),
            s: Sign::of(s),
        },
        (2, None, None) => CanonicalForm::Dim2Proper {
            alpha: d.angle(),
            beta: e.angle(),
            r: orientation_sign(d.matrix(), e.matrix(), tol)?,
        },
        (4, None, None) => {
            let theta = theta_invariant(&rho(&d, tol)?, &rho(&e, tol)?, tol)?;
            if theta <= tol.angle_tol || theta >= PI - tol.angle_tol {
                return Err(Error::NotIrreducible);
            }
            CanonicalForm::Dim4 {
                alpha: d.angle(),
                beta: e.angle(),
                theta,
            }
        }
        _ => return Err(Error::NotIrreducible),
    };
    Ok(form)
}

/// The literal matrix pair of a canonical form.
pub fn realize(form: &CanonicalForm) -> Result<(RealMatrix, RealMatrix)> {
    form.validate()?;
    let scalar = |s: Sign, n: usize| RealMatrix::identity(n, n) * s.value();
    Ok(match *form {
        CanonicalForm::Dim1 { r, s } => (scalar(r, 1), scalar(s, 1)),
        CanonicalForm::Dim2LeftScalar { r, beta } => (scalar(r, 2), rotation_block(beta)),
        CanonicalForm::Dim2RightScalar { alpha, s } => (rotation_block(alpha), scalar(s, 2)),
        CanonicalForm::Dim2Proper { alpha, beta, r } => {
            (rotation_block(alpha), rotation_block(r.value() * beta))
        }
        CanonicalForm::Dim4 { alpha, beta, theta } => (
            direct_sum(&[rotation_block(alpha), rotation_block(alpha)]),
            t_theta(theta)
                * direct_sum(&[rotation_block(beta), rotation_block(beta)])
                * t_theta(-theta),
        ),
    })
}

pub fn classify(d: &Rotation, e: &Rotation, tol: &Tolerance) -> Result<ClassLabel> {
    let dec = decompose(d, e, tol)?;
    let forms = dec
        .blocks
        .iter()
        .map(|b| classify_block(b, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassLabel::new(forms))
}

/// Two rotations on the same space.
#[derive(Debug, Clone)]
pub struct RotationPair {
    pub delta: Rotation,
    pub epsilon: Rotation,
}

impl RotationPair {
    pub fn new(delta: RealMatrix, epsilon: RealMatrix, tol: &Tolerance) -> Result<Self> {
        let delta = as_rotation(&delta, tol)?;
        let epsilon = as_rotation(&epsilon, tol)?;
        Self::from_rotations(delta, epsilon)
    }

    pub fn from_rotations(delta: Rotation, epsilon: Rotation) -> Result<Self> {
        if delta.dim() != epsilon.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("dimension {}", delta.dim()),
                found: format!("dimension {}", epsilon.dim()),
            });
        }
        Ok(RotationPair { delta, epsilon })
    }

    pub fn dim(&self) -> usize {
        self.delta.dim()
    }

    pub fn classify(&self, tol: &Tolerance) -> Result<ClassLabel> {
        classify(&self.delta, &self.epsilon, tol)
    }

    pub fn is_irreducible(&self, tol: &Tolerance) -> Result<bool> {
        let n = self.dim();
        let block = InvariantBlock::from_basis(
            RealMatrix::identity(n, n),
            self.delta.matrix(),
            self.epsilon.matrix(),
        );
        is_irreducible(&block, tol)
    }
}

pub fn isomorphic(p: &RotationPair, q: &RotationPair, tol: &Tolerance) -> Result<bool> {
    if p.dim() != q.dim() {
        return Ok(false);
    }
    Ok(p.classify(tol)?.matches(&q.classify(tol)?, tol.angle_tol))
}

/// Rescales a linear isomorphism between irreducible pairs to an orthogonal one.
///
/// An intertwiner of irreducible rotation pairs stretches every vector by the same factor;
/// dividing by that factor gives an orthogonal intertwiner.
pub fn orthogonalize_intertwiner(
    phi: &RealMatrix,
    from: &RotationPair,
    to: &RotationPair,
    tol: &Tolerance,
) -> Result<RealMatrix> {
    let n = from.dim();
    if phi.nrows() != to.dim() || phi.ncols() != n || n != to.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", to.dim(), n),
            found: format!("{}x{}", phi.nrows(), phi.ncols()),
        });
    }
    let scale = max_abs(phi).max(1.0);
    let residual = max_abs(&(phi * from.delta.matrix() - to.delta.matrix() * phi)).max(max_abs(
        &(phi * from.epsilon.matrix() - to.epsilon.matrix() * phi),
    ));
    if residual > tol.residual_tol * scale {
        return Err(Error::NotIntertwiner { residual });
    }
    let s = singular_values(phi);
    if s[n - 1] <= tol.rank_tol * s[0] {
        return Err(Error::NotIntertwiner {
            residual: f64::INFINITY,
        });
    }
    if !from.is_irreducible(tol)? || !to.is_irreducible(tol)? {
        return Err(Error::NotIrreducible);
    }
    let stretches: Vec<f64> = unit_samples(n).iter().map(|v| (phi * v).norm()).collect();
    let mean = stretches.iter().sum::<f64>() / stretches.len() as f64;
    let spread = stretches
        .iter()
        .map(|x| (x - mean).abs() / mean)
        .fold(0.0, f64::max);
    if spread > 10.0 * tol.residual_tol {
        return Err(Error::ScaleNotConstant { spread });
    }
    Ok(phi / mean)
}
