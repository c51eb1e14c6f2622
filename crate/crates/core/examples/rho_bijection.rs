//! A proper rotation is determined by its angle and the right-angle rotation `rho`.

use std::f64::consts::FRAC_PI_2;

use rotrep::linalg::{max_abs, Tolerance};
use rotrep::orthogonal::{rho, unrho};
use rotrep::workbench::generate_rotation;

fn main() -> rotrep::Result<()> {
    let tol = Tolerance::default();
    for (n, alpha) in [(2, 0.3), (4, 1.9), (6, 2.8)] {
        let d = generate_rotation(n, alpha, 7)?;
        let s = rho(&d, &tol)?;
        let back = unrho(&s, d.angle(), &tol)?;
        println!(
            "n = {n}, angle {alpha}: rho angle - pi/2 = {:.1e}, |unrho - d| = {:.1e}",
            s.angle() - FRAC_PI_2,
            max_abs(&(back.matrix() - d.matrix()))
        );
    }
    Ok(())
}
