use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use rotrep::bridge::{
    antilinear_invariant_line, build_t, eigenplanes, well_definedness_defect, AntilinearOp,
};
use rotrep::classification::{
    classify, orthogonalize_intertwiner, realize, theta_invariant, CanonicalForm, ClassLabel,
    RotationPair, Sign,
};
use rotrep::decomposition::{decompose, two_plane_exists, InvariantBlock};
use rotrep::linalg::{
    direct_sum, gram_defect, max_abs, orthogonality_defect, orthonormal_columns, orthonormalize,
    projector_distance, singular_values, subspace_meet, symmetric_eigen, Complex64, ComplexMatrix,
    RealMatrix, RealVector, Tolerance,
};
use rotrep::orthogonal::{as_rotation, orthogonal_normal_form, rho, unrho, Rotation};
use rotrep::workbench::generate::random_spec_of_dim;
use rotrep::workbench::{
    generate_pair, generate_rotation, oracle_two_plane_search, random_orthogonal, random_spec,
    OrthogonalityPolicy,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn loose() -> f64 {
    10.0 * tol().residual_tol
}

fn rot(m: RealMatrix) -> Rotation {
    as_rotation(&m, &tol()).unwrap()
}

fn conjugate(q: &RealMatrix, m: &RealMatrix) -> RealMatrix {
    q * m * q.transpose()
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> RealVector {
    RealVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal)).normalize()
}

fn angle() -> impl Strategy<Value = f64> {
    0.15..(PI - 0.15)
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn form() -> impl Strategy<Value = CanonicalForm> {
    prop_oneof![
        (sign(), sign()).prop_map(|(r, s)| CanonicalForm::Dim1 { r, s }),
        (sign(), angle()).prop_map(|(r, beta)| CanonicalForm::Dim2LeftScalar { r, beta }),
        (angle(), sign()).prop_map(|(alpha, s)| CanonicalForm::Dim2RightScalar { alpha, s }),
        (angle(), angle(), sign()).prop_map(|(alpha, beta, r)| CanonicalForm::Dim2Proper {
            alpha,
            beta,
            r
        }),
        (angle(), angle(), angle()).prop_map(|(alpha, beta, theta)| CanonicalForm::Dim4 {
            alpha,
            beta,
            theta
        }),
    ]
}

fn pair_from(doc: &rotrep::workbench::PairDocument) -> RotationPair {
    doc.to_pair(&tol(), OrthogonalityPolicy::Reject).unwrap().0
}

/// Pair with independently drawn operators, each `I`, `-I` or a random proper rotation.
fn random_operator_pair(rng: &mut ChaCha8Rng, n: usize) -> (Rotation, Rotation) {
    let draw = |rng: &mut ChaCha8Rng| {
        let alpha = match rng.gen_range(0..4) {
            0 => 0.0,
            1 => PI,
            _ => rng.gen_range(0.15..PI - 0.15),
        };
        generate_rotation(n, alpha, rng.gen()).unwrap()
    };
    (draw(rng), draw(rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orthonormal_bases_are_orthonormal(seed in any::<u64>(), n in 1usize..9, k in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<RealVector> = (0..k).map(|_| random_unit(&mut rng, n)).collect();
        let basis = orthonormalize(&cols, &tol());
        prop_assert_eq!(basis.len(), k.min(n));
        prop_assert!(gram_defect(&orthonormal_columns(&RealMatrix::from_columns(&cols), &tol())) <= loose());
    }

    #[test]
    fn meet_with_itself_is_itself(seed in any::<u64>(), n in 2usize..8, k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = k.min(n);
        let u = ComplexMatrix::from_fn(n, k, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let u = orthonormal_columns(&u, &tol());
        let m = subspace_meet(&u, &u, &tol()).unwrap();
        prop_assert_eq!(m.ncols(), k);
        prop_assert!(projector_distance(&m, &u) <= 1e-9);
    }

    #[test]
    fn symmetric_eigen_reconstructs(seed in any::<u64>(), n in 1usize..13) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let s = &a + a.transpose();
        let eig = symmetric_eigen(&s, &tol()).unwrap();
        let back = &eig.vectors * RealMatrix::from_diagonal(&eig.values) * eig.vectors.transpose();
        prop_assert!(max_abs(&(s - back)) <= loose());
        prop_assert!(orthogonality_defect(&eig.vectors) <= loose());
    }

    #[test]
    fn rotations_turn_every_vector_equally(seed in any::<u64>(), half in 1usize..5, alpha in angle()) {
        let r = generate_rotation(2 * half, alpha, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..200 {
            let v = random_unit(&mut rng, r.dim());
            prop_assert!((v.dot(&(r.matrix() * &v)) - alpha.cos()).abs() <= loose());
        }
    }

    #[test]
    fn normal_form_is_a_similarity(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_orthogonal(n, &mut rng);
        let nf = orthogonal_normal_form(&m, &tol()).unwrap();
        prop_assert!(max_abs(&(nf.basis.transpose() * &m * &nf.basis - nf.block_matrix())) <= loose());
    }

    #[test]
    fn rho_round_trips(seed in any::<u64>(), half in 1usize..4, alpha in angle()) {
        let d = generate_rotation(2 * half, alpha, seed).unwrap();
        let s = rho(&d, &tol()).unwrap();
        prop_assert!((s.angle() - FRAC_PI_2).abs() <= tol().angle_tol);
        let back = unrho(&s, d.angle(), &tol()).unwrap();
        prop_assert!(max_abs(&(back.matrix() - d.matrix())) <= loose());
        let again = rho(&back, &tol()).unwrap();
        prop_assert!(max_abs(&(again.matrix() - s.matrix())) <= loose());
    }

    #[test]
    fn eigenplane_invariants(seed in any::<u64>(), half in 1usize..4, alpha in angle(), beta in angle()) {
        let n = 2 * half;
        let d = generate_rotation(n, alpha, seed).unwrap();
        let e = generate_rotation(n, beta, seed.wrapping_add(1)).unwrap();
        let p = eigenplanes(&d, &e, &tol()).unwrap();
        let cd = d.matrix().map(|x| Complex64::new(x, 0.0));
        let ce = e.matrix().map(|x| Complex64::new(x, 0.0));
        let ea = Complex64::from_polar(1.0, alpha);
        let eb = Complex64::from_polar(1.0, beta);
        prop_assert!(max_abs(&(&cd * &p.a - &p.a * ea)) <= loose());
        prop_assert!(max_abs(&(&cd * &p.b - &p.b * ea.conj())) <= loose());
        prop_assert!(max_abs(&(&ce * &p.c - &p.c * eb)) <= loose());
        prop_assert!(max_abs(&(&ce * &p.d - &p.d * eb.conj())) <= loose());
        prop_assert!(projector_distance(&p.a.conjugate(), &p.b) <= 1e-9);
        prop_assert!(projector_distance(&p.c.conjugate(), &p.d) <= 1e-9);
        if let Ok(t) = build_t(&p, &tol()) {
            prop_assert!(well_definedness_defect(&p, &t) <= loose());
            if let Some(line) = antilinear_invariant_line(&t, &tol()) {
                prop_assert!(line.residual(&t) <= loose());
            }
        }
    }

    #[test]
    fn odd_dimensional_antilinear_maps_have_lines(seed in any::<u64>(), k in prop_oneof![Just(1usize), Just(3), Just(5), Just(7)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = ComplexMatrix::from_fn(k, k, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let t = AntilinearOp::from_coordinates(m, &tol()).unwrap();
        let line = antilinear_invariant_line(&t, &tol());
        prop_assert!(line.is_some());
        let line = line.unwrap();
        prop_assert!(line.residual(&t) <= loose() * line.mu.norm().max(1.0));
    }

    #[test]
    fn decomposition_invariants(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, e) = if n % 2 == 0 {
            random_operator_pair(&mut rng, n)
        } else {
            (Rotation::identity(n), Rotation::neg_identity(n))
        };
        let dec = decompose(&d, &e, &tol()).unwrap();
        prop_assert!(dec.blocks.iter().all(|b| matches!(b.dim(), 1 | 2 | 4)));
        prop_assert_eq!(dec.dims().iter().sum::<usize>(), n);
        prop_assert!(dec.invariance_residual(d.matrix(), e.matrix()) <= loose());
        prop_assert!(dec.orthonormality_defect() <= loose());
        for b in &dec.blocks {
            prop_assert!(b.invariance_residual(d.matrix(), e.matrix()) <= loose());
        }
    }

    #[test]
    fn two_plane_always_exists_when_n_is_2_mod_4(seed in any::<u64>(), half in prop_oneof![Just(1usize), Just(3)], alpha in angle(), beta in angle()) {
        let n = 2 * half;
        let d = generate_rotation(n, alpha, seed).unwrap();
        let e = generate_rotation(n, beta, seed.wrapping_add(7)).unwrap();
        let w = two_plane_exists(&d, &e, &tol()).unwrap();
        prop_assert!(w.is_some());
        let block = InvariantBlock::from_basis(w.unwrap(), d.matrix(), e.matrix());
        prop_assert!(block.invariance_residual(d.matrix(), e.matrix()) <= loose());
    }

    #[test]
    fn two_plane_matches_ground_truth(seed in any::<u64>(), alpha in angle(), beta in angle(), theta in angle(), r in sign()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_orthogonal(4, &mut rng);
        let (d, e) = realize(&CanonicalForm::Dim4 { alpha, beta, theta }).unwrap();
        let (d, e) = (rot(conjugate(&q, &d)), rot(conjugate(&q, &e)));
        prop_assert!(two_plane_exists(&d, &e, &tol()).unwrap().is_none());
        prop_assert!(oracle_two_plane_search(&d, &e, 500, seed, &tol()).is_none());

        let (d2, e2) = realize(&CanonicalForm::Dim2Proper { alpha, beta, r }).unwrap();
        let (d2b, e2b) = realize(&CanonicalForm::Dim2Proper { alpha, beta, r: Sign::Plus }).unwrap();
        let d = rot(conjugate(&q, &direct_sum(&[d2, d2b])));
        let e = rot(conjugate(&q, &direct_sum(&[e2, e2b])));
        prop_assert!(two_plane_exists(&d, &e, &tol()).unwrap().is_some());
    }

    #[test]
    fn decompose_is_idempotent(seed in any::<u64>(), count in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng, count);
        let pair = pair_from(&generate_pair(&spec, seed).unwrap());
        let dec = decompose(&pair.delta, &pair.epsilon, &tol()).unwrap();
        let ds: Vec<RealMatrix> = dec.blocks.iter().map(|b| b.d_restricted.clone()).collect();
        let es: Vec<RealMatrix> = dec.blocks.iter().map(|b| b.e_restricted.clone()).collect();
        let (d, e) = (rot(direct_sum(&ds)), rot(direct_sum(&es)));
        let again = classify(&d, &e, &tol()).unwrap();
        let first = classify(&pair.delta, &pair.epsilon, &tol()).unwrap();
        prop_assert!(again.matches(&first, 1e-6), "{} vs {}", again, first);
        prop_assert_eq!(decompose(&d, &e, &tol()).unwrap().dims(), dec.dims());
    }

    #[test]
    fn realize_then_classify_round_trips(f in form()) {
        let (d, e) = realize(&f).unwrap();
        let label = classify(&rot(d), &rot(e), &tol()).unwrap();
        prop_assert!(label.matches(&ClassLabel::new(vec![f]), 1e-6), "{} vs {}", label, f);
    }

    #[test]
    fn classification_is_conjugation_invariant(seed in any::<u64>(), n in prop_oneof![Just(1usize), Just(2), Just(4), Just(6), Just(8)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec_of_dim(&mut rng, n);
        let pair = pair_from(&generate_pair(&spec, seed).unwrap());
        let base = classify(&pair.delta, &pair.epsilon, &tol()).unwrap();
        let q = random_orthogonal(n, &mut rng);
        let d = rot(conjugate(&q, pair.delta.matrix()));
        let e = rot(conjugate(&q, pair.epsilon.matrix()));
        let label = classify(&d, &e, &tol()).unwrap();
        prop_assert!(label.matches(&base, 1e-6), "{} vs {}", label, base);
    }

    #[test]
    fn krull_schmidt(seed in any::<u64>(), count in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng, count);
        let pair = pair_from(&generate_pair(&spec, seed).unwrap());
        let label = classify(&pair.delta, &pair.epsilon, &tol()).unwrap();
        prop_assert!(label.matches(&ClassLabel::new(spec.clone()), 1e-6), "{} vs {:?}", label, spec);
    }

    #[test]
    fn theta_is_constant_and_sigma_inverse_tau_fixes_nothing(seed in any::<u64>(), alpha in angle(), beta in angle(), theta in angle()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_orthogonal(4, &mut rng);
        let (d, e) = realize(&CanonicalForm::Dim4 { alpha, beta, theta }).unwrap();
        let s = rho(&rot(conjugate(&q, &d)), &tol()).unwrap();
        let t = rho(&rot(conjugate(&q, &e)), &tol()).unwrap();
        let values: Vec<f64> = (0..200).map(|_| {
            let v = random_unit(&mut rng, 4);
            (s.matrix() * &v).dot(&(t.matrix() * &v))
        }).collect();
        let mean = values.iter().sum::<f64>() / 200.0;
        let sd = (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 200.0).sqrt();
        prop_assert!(sd <= loose());
        prop_assert!((theta_invariant(&s, &t, &tol()).unwrap() - theta).abs() <= 1e-7);
        let fixed = s.matrix().transpose() * t.matrix() - RealMatrix::identity(4, 4);
        prop_assert!(singular_values(&fixed)[3] > 1e-3);
    }

    #[test]
    fn orthogonalized_intertwiners_are_orthogonal(seed in any::<u64>(), f in form(), c in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, e) = realize(&f).unwrap();
        let n = d.nrows();
        let q = random_orthogonal(n, &mut rng);
        let from = RotationPair::new(d.clone(), e.clone(), &tol()).unwrap();
        let to = RotationPair::new(conjugate(&q, &d), conjugate(&q, &e), &tol()).unwrap();
        let phi = &q * c;
        let got = orthogonalize_intertwiner(&phi, &from, &to, &tol()).unwrap();
        prop_assert!(orthogonality_defect(&got) <= loose());
        prop_assert!(max_abs(&(&got * &d - to.delta.matrix() * &got)) <= loose());
        prop_assert!(max_abs(&(&got * &e - to.epsilon.matrix() * &got)) <= loose());
    }

    #[test]
    fn oracle_witnesses_are_invariant(seed in any::<u64>(), alpha in angle(), beta in angle(), theta in angle(), r in sign()) {
        let (d4, e4) = realize(&CanonicalForm::Dim4 { alpha, beta, theta }).unwrap();
        let (d2, e2) = realize(&CanonicalForm::Dim2Proper { alpha, beta, r }).unwrap();
        let d = rot(direct_sum(&[d2, d4]));
        let e = rot(direct_sum(&[e2, e4]));
        if let Some(v) = oracle_two_plane_search(&d, &e, 200, seed, &tol()) {
            let plane = orthonormal_columns(&RealMatrix::from_columns(&[v.clone(), d.matrix() * &v]), &tol());
            let block = InvariantBlock::from_basis(plane, d.matrix(), e.matrix());
            prop_assert!(block.invariance_residual(d.matrix(), e.matrix()) <= loose());
        }
    }
}

#[test]
fn generated_labels_match_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let count = rng.gen_range(1..=4);
        let spec = random_spec(&mut rng, count);
        let doc = generate_pair(&spec, i).unwrap();
        let stored = doc.metadata.as_ref().unwrap().label.clone().unwrap();
        let pair = pair_from(&doc);
        let label = classify(&pair.delta, &pair.epsilon, &tol()).unwrap();
        assert!(label.matches(&stored, 1e-6), "{label} vs {stored}");
    }
}

#[test]
fn generation_is_deterministic() {
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
    assert_eq!(
        generate_pair(&spec, 3).unwrap().to_json(),
        generate_pair(&spec, 3).unwrap().to_json()
    );
}
