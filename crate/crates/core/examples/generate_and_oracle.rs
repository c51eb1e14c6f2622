//! Generated instances checked against the sampling oracle.
//!
//! The oracle only ever proves reducibility: it returns a vector lying in an invariant plane
//! or nothing.

use rotrep::classification::{CanonicalForm, Sign};
use rotrep::decomposition::two_plane_exists;
use rotrep::linalg::{direct_sum, Tolerance};
use rotrep::orthogonal::as_rotation;
use rotrep::workbench::{generate_pair, oracle_two_plane_search, OrthogonalityPolicy};

fn main() -> rotrep::Result<()> {
    let tol = Tolerance::default();

    let spec = [CanonicalForm::Dim4 {
        alpha: 0.5,
        beta: 1.2,
        theta: 0.8,
    }];
    let doc = generate_pair(&spec, 9)?;
    println!(
        "{}",
        doc.to_json().lines().take(3).collect::<Vec<_>>().join("\n")
    );
    let (pair, _) = doc.to_pair(&tol, OrthogonalityPolicy::Reject)?;
    println!(
        "Dim4 instance: two_plane_exists {}, oracle witness {}",
        two_plane_exists(&pair.delta, &pair.epsilon, &tol)?.is_some(),
        oracle_two_plane_search(&pair.delta, &pair.epsilon, 10_000, 0, &tol).is_some()
    );

    // without conjugation a coordinate vector lies in the plane summand
    let (d4, e4) = rotrep::classification::realize(&spec[0])?;
    let (d2, e2) = rotrep::classification::realize(&CanonicalForm::Dim2Proper {
        alpha: 0.5,
        beta: 1.2,
        r: Sign::Plus,
    })?;
    let d = as_rotation(&direct_sum(&[d4, d2]), &tol)?;
    let e = as_rotation(&direct_sum(&[e4, e2]), &tol)?;
    let witness = oracle_two_plane_search(&d, &e, 100, 0, &tol);
    println!(
        "block diagonal 6-dim pair: witness {:?}",
        witness.map(|v| v.as_slice().to_vec())
    );
    Ok(())
}
