//! Complex eigenplanes of a pair of proper rotations and the antilinear operator between them.

use rotrep::bridge::{antilinear_invariant_line, build_t, eigenplanes, well_definedness_defect};
use rotrep::error::Error;
use rotrep::linalg::Tolerance;
use rotrep::workbench::generate_rotation;

fn main() -> rotrep::Result<()> {
    let tol = Tolerance::default();
    let d = generate_rotation(4, 0.6, 1)?;
    let e = generate_rotation(4, 1.4, 2)?;
    let planes = eigenplanes(&d, &e, &tol)?;
    println!("eigenplanes of complex dimension {}", planes.a.ncols());

    match build_t(&planes, &tol) {
        Ok(t) => {
            println!(
                "T well-defined up to {:.1e}",
                well_definedness_defect(&planes, &t)
            );
            match antilinear_invariant_line(&t, &tol) {
                Some(line) => println!(
                    "invariant line: mu = {:.6}, residual {:.1e}",
                    line.mu,
                    line.residual(&t)
                ),
                None => println!("T has no invariant line"),
            }
        }
        Err(Error::IntersectionNonTrivial) => {
            println!("eigenplanes meet: a real invariant plane exists")
        }
        Err(e) => return Err(e),
    }
    Ok(())
}
