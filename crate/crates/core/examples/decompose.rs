//! Split a random pair of rotations on R^8 into irreducible blocks.

use rotrep::decomposition::decompose;
use rotrep::linalg::Tolerance;
use rotrep::workbench::generate_rotation;

fn main() -> rotrep::Result<()> {
    let tol = Tolerance::default();
    for (n, seed) in [(6, 1), (8, 2)] {
        let d = generate_rotation(n, 0.9, seed)?;
        let e = generate_rotation(n, 2.2, seed + 100)?;
        let dec = decompose(&d, &e, &tol)?;
        println!(
            "n = {n}: block dims {:?}, invariance residual {:.1e}, orthonormality defect {:.1e}",
            dec.dims(),
            dec.invariance_residual(d.matrix(), e.matrix()),
            dec.orthonormality_defect()
        );
    }
    Ok(())
}
