//! Normal form of a random rotation and of a general orthogonal matrix.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotrep::linalg::{max_abs, Tolerance};
use rotrep::orthogonal::{as_rotation, orthogonal_normal_form};
use rotrep::workbench::{generate_rotation, random_orthogonal};

fn main() -> rotrep::Result<()> {
    let tol = Tolerance::default();

    let r = generate_rotation(6, 0.7, 1)?;
    let nf = orthogonal_normal_form(r.matrix(), &tol)?;
    println!("rotation: kind {:?}, angle {:.12}", r.kind(), r.angle());
    println!("block angles {:?}", nf.angles);
    let similarity = max_abs(&(nf.basis.transpose() * r.matrix() * &nf.basis - nf.block_matrix()));
    println!("|B^T M B - blocks| = {similarity:.2e}");

    // a generic orthogonal matrix has distinct block angles and is not a rotation
    let q = random_orthogonal(5, &mut ChaCha8Rng::seed_from_u64(2));
    let nf = orthogonal_normal_form(&q, &tol)?;
    println!(
        "orthogonal 5x5: angles {:?}, +1 x{}, -1 x{}",
        nf.angles, nf.fix_dim, nf.neg_dim
    );
    match as_rotation(&q, &tol) {
        Ok(_) => println!("unexpectedly a rotation"),
        Err(e) => println!("as_rotation: {e}"),
    }
    Ok(())
}
