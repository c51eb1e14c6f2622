//! Isomorphism is decided by comparing class labels.

use rotrep::classification::{isomorphic, CanonicalForm, Sign};
use rotrep::linalg::Tolerance;
use rotrep::workbench::{generate_pair, OrthogonalityPolicy};

fn main() -> rotrep::Result<()> {
    let tol = Tolerance::default();
    let load = |spec: &[CanonicalForm], seed| -> rotrep::Result<_> {
        Ok(generate_pair(spec, seed)?
            .to_pair(&tol, OrthogonalityPolicy::Reject)?
            .0)
    };
    let same = [CanonicalForm::Dim2Proper {
        alpha: 0.6,
        beta: 1.3,
        r: Sign::Plus,
    }];
    let flipped = [CanonicalForm::Dim2Proper {
        alpha: 0.6,
        beta: 1.3,
        r: Sign::Minus,
    }];

    let a = load(&same, 1)?;
    let b = load(&same, 2)?;
    let c = load(&flipped, 3)?;
    println!(
        "different conjugates of one form: {}",
        isomorphic(&a, &b, &tol)?
    );
    println!(
        "opposite relative orientation:    {}",
        isomorphic(&a, &c, &tol)?
    );
    Ok(())
}
