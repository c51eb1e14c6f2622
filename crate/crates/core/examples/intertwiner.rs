//! A scaled orthogonal intertwiner between irreducible pairs, rescaled back.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotrep::classification::{orthogonalize_intertwiner, realize, CanonicalForm, RotationPair};
use rotrep::linalg::{max_abs, Tolerance};
use rotrep::workbench::random_orthogonal;

fn main() -> rotrep::Result<()> {
    let tol = Tolerance::default();
    let (d, e) = realize(&CanonicalForm::Dim4 {
        alpha: 1.0,
        beta: 2.0,
        theta: 0.6,
    })?;
    let q = random_orthogonal(4, &mut ChaCha8Rng::seed_from_u64(5));
    let from = RotationPair::new(d.clone(), e.clone(), &tol)?;
    let to = RotationPair::new(&q * &d * q.transpose(), &q * &e * q.transpose(), &tol)?;

    let phi = &q * 3.7;
    let got = orthogonalize_intertwiner(&phi, &from, &to, &tol)?;
    println!("|result - Q| = {:.1e}", max_abs(&(got - &q)));
    Ok(())
}
