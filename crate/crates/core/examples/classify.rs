//! Recover the canonical forms hidden in a conjugated direct sum.

use rotrep::classification::{CanonicalForm, Sign};
use rotrep::linalg::Tolerance;
use rotrep::workbench::{generate_pair, OrthogonalityPolicy};

fn main() -> rotrep::Result<()> {
    let tol = Tolerance::default();
    let spec = [
        CanonicalForm::Dim2Proper {
            alpha: 0.5,
            beta: 1.2,
            r: Sign::Minus,
        },
        CanonicalForm::Dim4 {
            alpha: 0.5,
            beta: 1.2,
            theta: 0.8,
        },
        CanonicalForm::Dim4 {
            alpha: 0.5,
            beta: 1.2,
            theta: 2.0,
        },
    ];
    let doc = generate_pair(&spec, 42)?;
    let (pair, _) = doc.to_pair(&tol, OrthogonalityPolicy::Reject)?;
    let label = pair.classify(&tol)?;
    println!("n = {}", pair.dim());
    for form in label.forms() {
        println!("  {form}");
    }
    let truth = doc
        .metadata
        .and_then(|m| m.label)
        .expect("generated pairs carry their label");
    println!("matches ground truth: {}", label.matches(&truth, 1e-6));
    println!("{}", serde_json::to_string(&label)?);
    Ok(())
}
