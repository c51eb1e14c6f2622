//! Seeded instances: random orthogonal matrices, rotations and pairs with a known class.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::classification::{realize, CanonicalForm, ClassLabel, Sign};
use crate::error::{Error, Result};
use crate::linalg::{direct_sum, rotation_block, RealMatrix, Tolerance};
use crate::orthogonal::{as_rotation, Rotation};

use super::io::{PairDocument, PairMetadata};

/// Angles closer than this are merged when checking that summands share an angle.
const SHARED_ANGLE_TOL: f64 = 1e-9;

/// Orthogonal factor of the QR decomposition of a Gaussian matrix, with the signs fixed so
/// that `R` has a positive diagonal. This is Haar distributed.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let g = RealMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `Q (R_a + ... + R_a) Q^T` for a seeded random orthogonal `Q`; `alpha = 0` and `alpha = pi`
/// give `I` and `-I` in any dimension.
pub fn generate_rotation(n: usize, alpha: f64, seed: u64) -> Result<Rotation> {
    if n == 0 {
        return Err(Error::BadDimension {
            n,
            reason: "dimension must be positive",
        });
    }
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::BadAngle {
            angle: alpha,
            reason: "rotation angles lie in [0, pi]",
        });
    }
    if alpha == 0.0 {
        return Ok(Rotation::identity(n));
    }
    if alpha == PI {
        return Ok(Rotation::neg_identity(n));
    }
    if n % 2 == 1 {
        return Err(Error::BadDimension {
            n,
            reason: "proper rotations need even dimension",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(n, &mut rng);
    let blocks = vec![rotation_block(alpha); n / 2];
    let m = &q * direct_sum(&blocks) * q.transpose();
    as_rotation(&m, &Tolerance::default())
}

fn shared_angle(
    forms: &[CanonicalForm],
    pick: impl Fn(&CanonicalForm) -> f64,
    which: &str,
) -> Result<()> {
    let first = pick(&forms[0]);
    match forms
        .iter()
        .find(|f| (pick(f) - first).abs() > SHARED_ANGLE_TOL)
    {
        Some(f) => Err(Error::BadParameter(format!(
            "{which} angles differ between {} and {f}; the direct sum would not be a rotation",
            forms[0]
        ))),
        None => Ok(()),
    }
}

/// Realizes `spec`, shuffles the summands, conjugates by a random orthogonal matrix and
/// records `spec` as the ground-truth label.
///
/// All summands must give their first operators one common angle, and likewise for the
/// second operators, since otherwise the direct sum is not a pair of rotations.
pub fn generate_pair(spec: &[CanonicalForm], seed: u64) -> Result<PairDocument> {
    if spec.is_empty() {
        return Err(Error::BadParameter(
            "spec must list at least one form".into(),
        ));
    }
    for f in spec {
        f.validate()?;
    }
    shared_angle(spec, |f| f.operator_angles().0, "first operator")?;
    shared_angle(spec, |f| f.operator_angles().1, "second operator")?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..spec.len()).collect();
    order.shuffle(&mut rng);
    let mut ds = Vec::with_capacity(spec.len());
    let mut es = Vec::with_capacity(spec.len());
    for &i in &order {
        let (d, e) = realize(&spec[i])?;
        ds.push(d);
        es.push(e);
    }
    let (d, e) = (direct_sum(&ds), direct_sum(&es));
    let q = random_orthogonal(d.nrows(), &mut rng);
    let d = &q * d * q.transpose();
    let e = &q * e * q.transpose();
    let metadata = PairMetadata {
        seed: Some(seed),
        description: None,
        label: Some(ClassLabel::new(spec.to_vec())),
    };
    Ok(PairDocument::from_matrices(&d, &e, Some(metadata)))
}

/// What one operator of a random spec does on every summand.
#[derive(Debug, Clone, Copy)]
enum Action {
    Scalar(Sign),
    Turn(f64),
}

fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(0.1..PI - 0.1)
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn random_action<R: Rng + ?Sized>(rng: &mut R, allow_turn: bool) -> Action {
    if allow_turn && rng.gen_bool(0.6) {
        Action::Turn(random_angle(rng))
    } else {
        Action::Scalar(random_sign(rng))
    }
}

fn random_form<R: Rng + ?Sized>(
    rng: &mut R,
    d: Action,
    e: Action,
    max_dim: usize,
) -> CanonicalForm {
    match (d, e) {
        (Action::Scalar(r), Action::Scalar(s)) => CanonicalForm::Dim1 { r, s },
        (Action::Scalar(r), Action::Turn(beta)) => CanonicalForm::Dim2LeftScalar { r, beta },
        (Action::Turn(alpha), Action::Scalar(s)) => CanonicalForm::Dim2RightScalar { alpha, s },
        (Action::Turn(alpha), Action::Turn(beta)) => {
            if max_dim >= 4 && rng.gen_bool(0.5) {
                CanonicalForm::Dim4 {
                    alpha,
                    beta,
                    theta: random_angle(rng),
                }
            } else {
                CanonicalForm::Dim2Proper {
                    alpha,
                    beta,
                    r: random_sign(rng),
                }
            }
        }
    }
}

/// A random compatible spec of `count` irreducible summands.
///
/// Each operator is drawn once as either `+-1` or a turn by a random angle, and every summand
/// is built from those choices, so [`generate_pair`] always accepts the result.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<CanonicalForm> {
    let d = random_action(rng, true);
    let e = random_action(rng, true);
    (0..count).map(|_| random_form(rng, d, e, 4)).collect()
}

/// A random compatible spec whose summands add up to dimension `n`.
pub fn random_spec_of_dim<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<CanonicalForm> {
    let even = n.is_multiple_of(2);
    let d = random_action(rng, even);
    let e = random_action(rng, even);
    let mut forms = Vec::new();
    let mut left = n;
    while left > 0 {
        let f = random_form(rng, d, e, left);
        left -= f.dim();
        forms.push(f);
    }
    forms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::{classify, isomorphic, RotationPair};
    use crate::linalg::{max_abs, orthogonality_defect};
    use crate::orthogonal::RotationKind;
    use crate::workbench::io::OrthogonalityPolicy;
    use std::f64::consts::FRAC_PI_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn pair(doc: &PairDocument) -> RotationPair {
        doc.to_pair(&tol(), OrthogonalityPolicy::Reject).unwrap().0
    }

    #[test]
    fn random_orthogonal_is_orthogonal_and_seeded() {
        let a = random_orthogonal(5, &mut ChaCha8Rng::seed_from_u64(1));
        let b = random_orthogonal(5, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
        assert!(orthogonality_defect(&a) < 1e-13);
    }

    #[test]
    fn generate_rotation_examples() {
        let r = generate_rotation(2, FRAC_PI_2, 9).unwrap();
        assert!((r.angle() - FRAC_PI_2).abs() < 1e-12);
        let r = generate_rotation(6, 0.7, 1).unwrap();
        assert!((as_rotation(r.matrix(), &tol()).unwrap().angle() - 0.7).abs() < 1e-12);
        let r = generate_rotation(3, PI, 4).unwrap();
        assert_eq!(r.kind(), RotationKind::NegIdentity);
        assert_eq!(r.matrix(), &-RealMatrix::identity(3, 3));
        assert!(matches!(
            generate_rotation(3, 0.7, 1),
            Err(Error::BadDimension { .. })
        ));
        assert!(matches!(
            generate_rotation(2, 4.0, 1),
            Err(Error::BadAngle { .. })
        ));
    }

    #[test]
    fn generate_pair_examples() {
        let doc = generate_pair(
            &[CanonicalForm::Dim1 {
                r: Sign::Plus,
                s: Sign::Plus,
            }],
            0,
        )
        .unwrap();
        assert_eq!((doc.n, doc.delta[0][0], doc.epsilon[0][0]), (1, 1.0, 1.0));

        let spec = [
            CanonicalForm::Dim2Proper {
                alpha: 0.5,
                beta: 1.2,
                r: Sign::Plus,
            },
            CanonicalForm::Dim4 {
                alpha: 0.5,
                beta: 1.2,
                theta: 0.8,
            },
        ];
        let a = generate_pair(&spec, 1).unwrap();
        let b = generate_pair(&spec, 2).unwrap();
        assert_eq!(a.n, 6);
        let pa = pair(&a);
        let label = classify(&pa.delta, &pa.epsilon, &tol()).unwrap();
        assert!(
            label.matches(a.metadata.as_ref().unwrap().label.as_ref().unwrap(), 1e-6),
            "{label}"
        );
        assert!(isomorphic(&pa, &pair(&b), &tol()).unwrap());
        assert!(max_abs(&(a.matrices().unwrap().0 - b.matrices().unwrap().0)) > 1e-3);
    }

    #[test]
    fn generate_pair_rejects_incompatible_specs() {
        assert!(matches!(generate_pair(&[], 0), Err(Error::BadParameter(_))));
        let spec = [
            CanonicalForm::Dim2Proper {
                alpha: 0.5,
                beta: 1.2,
                r: Sign::Plus,
            },
            CanonicalForm::Dim2Proper {
                alpha: 0.6,
                beta: 1.2,
                r: Sign::Plus,
            },
        ];
        assert!(matches!(
            generate_pair(&spec, 0),
            Err(Error::BadParameter(_))
        ));
        let spec = [
            CanonicalForm::Dim1 {
                r: Sign::Plus,
                s: Sign::Plus,
            },
            CanonicalForm::Dim1 {
                r: Sign::Minus,
                s: Sign::Plus,
            },
        ];
        assert!(matches!(
            generate_pair(&spec, 0),
            Err(Error::BadParameter(_))
        ));
        let spec = [CanonicalForm::Dim2LeftScalar {
            r: Sign::Plus,
            beta: 0.0,
        }];
        assert!(matches!(
            generate_pair(&spec, 0),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn random_specs_are_generable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let count = rng.gen_range(1..=4);
            let spec = random_spec(&mut rng, count);
            assert_eq!(spec.len(), count);
            generate_pair(&spec, 0).unwrap();
            let n = rng.gen_range(1..=8);
            let spec = random_spec_of_dim(&mut rng, n);
            assert_eq!(spec.iter().map(|f| f.dim()).sum::<usize>(), n);
            generate_pair(&spec, 0).unwrap();
        }
    }
}
