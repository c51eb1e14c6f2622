//! Brute-force search for invariant planes, independent of the eigenplane machinery.
//!
//! A unit vector `v` lies in a plane invariant under two rotations exactly when
//! `v, d v, e v, e d v` span at most two dimensions. The search tests coordinate vectors
//! first and then seeded random unit vectors. It is one-sided: finding nothing proves nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::decomposition::InvariantBlock;
use crate::linalg::{columns_to_matrix, orthonormalize, singular_values, RealVector, Tolerance};
use crate::orthogonal::Rotation;

fn spans_invariant_plane(v: &RealVector, d: &Rotation, e: &Rotation, tol: &Tolerance) -> bool {
    let dv = d.matrix() * v;
    let ev = e.matrix() * v;
    let edv = e.matrix() * &dv;
    let k = columns_to_matrix(v.len(), &[v.clone(), dv.clone(), ev, edv]);
    let s = singular_values(&k);
    if s.len() < 4 || s[2] > tol.rank_tol * s[0] {
        return false;
    }
    let plane = orthonormalize(&[v.clone(), dv], tol);
    if plane.len() != 2 {
        return false;
    }
    let block =
        InvariantBlock::from_basis(columns_to_matrix(v.len(), &plane), d.matrix(), e.matrix());
    block.invariance_residual(d.matrix(), e.matrix()) <= 10.0 * tol.residual_tol
}

/// First sampled unit vector that spans, together with its image under `d`, a plane invariant
/// under both rotations. Every candidate is checked for invariance before it is returned.
pub fn oracle_two_plane_search(
    d: &Rotation,
    e: &Rotation,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Option<RealVector> {
    let n = d.dim();
    if n < 2 || e.dim() != n || !d.is_proper() || !e.is_proper() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|i| {
            if i < n {
                let mut v = RealVector::zeros(n);
                v[i] = 1.0;
                v
            } else {
                RealVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal)).normalize()
            }
        })
        .find(|v| spans_invariant_plane(v, d, e, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::{realize, CanonicalForm, Sign};
    use crate::linalg::{direct_sum, rotation_block, RealMatrix};
    use crate::orthogonal::as_rotation;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn rot(m: RealMatrix) -> Rotation {
        as_rotation(&m, &tol()).unwrap()
    }

    #[test]
    fn finds_coordinate_witness_in_block_diagonal_pair() {
        let d = rot(direct_sum(&[rotation_block(0.5), rotation_block(0.5)]));
        let e = rot(direct_sum(&[rotation_block(1.2), rotation_block(-1.2)]));
        let v = oracle_two_plane_search(&d, &e, 10, 0, &tol()).unwrap();
        assert_eq!(v, RealVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn finds_nothing_in_canonical_four_block() {
        let (d, e) = realize(&CanonicalForm::Dim4 {
            alpha: 0.5,
            beta: 1.2,
            theta: 0.8,
        })
        .unwrap();
        assert!(oracle_two_plane_search(&rot(d), &rot(e), 10_000, 3, &tol()).is_none());
    }

    #[test]
    fn finds_plane_summand_of_six_dimensional_pair() {
        let (d4, e4) = realize(&CanonicalForm::Dim4 {
            alpha: 0.5,
            beta: 1.2,
            theta: 0.8,
        })
        .unwrap();
        let (d2, e2) = realize(&CanonicalForm::Dim2Proper {
            alpha: 0.5,
            beta: 1.2,
            r: Sign::Minus,
        })
        .unwrap();
        let d = rot(direct_sum(&[d4, d2]));
        let e = rot(direct_sum(&[e4, e2]));
        let v = oracle_two_plane_search(&d, &e, 100, 0, &tol()).unwrap();
        assert!(v[4].abs() > 0.9);
    }

    #[test]
    fn non_proper_input_gives_none() {
        assert!(oracle_two_plane_search(
            &Rotation::identity(2),
            &rot(rotation_block(1.0)),
            10,
            0,
            &tol()
        )
        .is_none());
    }
}
