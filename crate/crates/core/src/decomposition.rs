//! Splitting a pair of rotations into irreducible invariant blocks of dimension 1, 2 or 4.

use crate::bridge::{antilinear_invariant_line, build_t, eigenplanes, t_squared};
use crate::error::{Error, Result};
use crate::linalg::{
    closest_common_vector, complex_eigenvalues, gram_defect, imag_part, max_abs,
    orthogonal_complement, orthonormalize, rank, real_part, singular_values,
    smallest_singular_vector, subspace_meet, ComplexMatrix, ComplexVector, RealMatrix, RealVector,
    Tolerance,
};
use crate::orthogonal::{as_rotation, orthogonal_normal_form, Rotation};

/// An orthonormal basis of a subspace invariant under both operators, with the restrictions
/// of the operators to it.
#[derive(Debug, Clone)]
pub struct InvariantBlock {
    pub basis: RealMatrix,
    pub d_restricted: RealMatrix,
    pub e_restricted: RealMatrix,
}

impl InvariantBlock {
    pub fn from_basis(basis: RealMatrix, d: &RealMatrix, e: &RealMatrix) -> Self {
        let d_restricted = basis.transpose() * d * &basis;
        let e_restricted = basis.transpose() * e * &basis;
        InvariantBlock {
            basis,
            d_restricted,
            e_restricted,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `max(|d B - B d|_B|, |e B - B e|_B|)`, recomputed from the ambient operators.
    pub fn invariance_residual(&self, d: &RealMatrix, e: &RealMatrix) -> f64 {
        let rd = d * &self.basis - &self.basis * &self.d_restricted;
        let re = e * &self.basis - &self.basis * &self.e_restricted;
        max_abs(&rd).max(max_abs(&re))
    }

    pub fn restricted_rotations(&self, tol: &Tolerance) -> Result<(Rotation, Rotation)> {
        Ok((
            as_rotation(&self.d_restricted, tol)?,
            as_rotation(&self.e_restricted, tol)?,
        ))
    }

    /// Angles of the two restrictions, read off their traces.
    pub fn angles(&self) -> (f64, f64) {
        let k = self.dim() as f64;
        let angle = |m: &RealMatrix| (m.trace() / k).clamp(-1.0, 1.0).acos();
        (angle(&self.d_restricted), angle(&self.e_restricted))
    }
}

/// Orthogonal decomposition of the ambient space into invariant blocks.
#[derive(Debug, Clone)]
pub struct InvariantDecomposition {
    pub blocks: Vec<InvariantBlock>,
    pub ambient_dim: usize,
}

impl InvariantDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim()).collect()
    }

    /// All block bases side by side.
    pub fn basis(&self) -> RealMatrix {
        let mut out = RealMatrix::zeros(self.ambient_dim, self.ambient_dim);
        let mut col = 0;
        for b in &self.blocks {
            out.view_mut((0, col), (self.ambient_dim, b.dim()))
                .copy_from(&b.basis);
            col += b.dim();
        }
        out
    }

    pub fn orthonormality_defect(&self) -> f64 {
        gram_defect(&self.basis())
    }

    pub fn invariance_residual(&self, d: &RealMatrix, e: &RealMatrix) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.invariance_residual(d, e))
            .fold(0.0, f64::max)
    }
}

fn same_dim(d: &Rotation, e: &Rotation) -> Result<usize> {
    if d.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("dimension {}", d.dim()),
            found: format!("dimension {}", e.dim()),
        });
    }
    Ok(d.dim())
}

/// Orthonormal basis of the real plane `span_C{v, conj v} ∩ R^n`, i.e. of
/// `{v + conj v, i (v - conj v)}`.
pub fn real_plane_from_complex_line(v: &ComplexVector, tol: &Tolerance) -> Result<RealMatrix> {
    let pair = ComplexMatrix::from_columns(&[v.clone(), v.conjugate()]);
    if rank(&pair, tol) < 2 {
        return Err(Error::DegenerateLine);
    }
    let re: RealVector = v.map(|z| z.re);
    let im: RealVector = v.map(|z| z.im);
    let basis = orthonormalize(&[re, im], tol);
    if basis.len() < 2 {
        return Err(Error::DegenerateLine);
    }
    Ok(RealMatrix::from_columns(&basis))
}

fn plane_residual(plane: &RealMatrix, d: &RealMatrix, e: &RealMatrix) -> f64 {
    InvariantBlock::from_basis(plane.clone(), d, e).invariance_residual(d, e)
}

fn checked_plane(
    v: &ComplexVector,
    d: &Rotation,
    e: &Rotation,
    tol: &Tolerance,
) -> Result<RealMatrix> {
    let plane = real_plane_from_complex_line(v, tol)?;
    let residual = plane_residual(&plane, d.matrix(), e.matrix());
    if residual > 10.0 * tol.residual_tol {
        return Err(Error::Numerical(format!(
            "witness plane is not invariant (residual {residual:.3e})"
        )));
    }
    Ok(plane)
}

/// Decides whether two proper rotations share an invariant 2-plane, returning one if so.
///
/// Either `A` meets `C` or `D` (a common eigenvector gives the plane directly), or both
/// intersections are trivial and the antilinear operator `T` on `A` has an invariant line
/// `v`, in which case `span_C{v, conj v}` meets `R^n` in an invariant plane.
pub fn two_plane_exists(d: &Rotation, e: &Rotation, tol: &Tolerance) -> Result<Option<RealMatrix>> {
    same_dim(d, e)?;
    let planes = eigenplanes(d, e, tol)?;
    for other in [&planes.c, &planes.d] {
        let meet = subspace_meet(&planes.a, other, tol)?;
        if meet.ncols() > 0 {
            let v = meet.column(0).into_owned();
            return checked_plane(&v, d, e, tol).map(Some);
        }
    }
    match build_t(&planes, tol) {
        Ok(t) => match antilinear_invariant_line(&t, tol) {
            Some(line) => checked_plane(&t.embed(&line.vector), d, e, tol).map(Some),
            None => Ok(None),
        },
        Err(Error::SingularProjection { .. }) | Err(Error::IntersectionNonTrivial) => {
            // A is within working precision of meeting C or D
            let (sc, vc) = closest_common_vector(&planes.a, &planes.c);
            let (sd, vd) = closest_common_vector(&planes.a, &planes.d);
            let v = if sc <= sd { vc } else { vd };
            checked_plane(&v, d, e, tol).map(Some)
        }
        Err(err) => Err(err),
    }
}

fn basis_block(n: usize, cols: &[RealVector]) -> RealMatrix {
    let mut b = RealMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        b.set_column(j, c);
    }
    b
}

/// Finds one invariant block of dimension 1, 2 or 4.
pub fn find_block(d: &Rotation, e: &Rotation, tol: &Tolerance) -> Result<InvariantBlock> {
    let n = same_dim(d, e)?;
    if n == 0 {
        return Err(Error::Empty);
    }
    let basis = match (d.scalar(), e.scalar()) {
        (Some(_), Some(_)) => RealMatrix::identity(n, n).columns(0, 1).into_owned(),
        (Some(_), None) => {
            let (u, w) = orthogonal_normal_form(e.matrix(), tol)?.block_pair(0);
            basis_block(n, &[u, w])
        }
        (None, Some(_)) => {
            let (u, w) = orthogonal_normal_form(d.matrix(), tol)?.block_pair(0);
            basis_block(n, &[u, w])
        }
        (None, None) => match two_plane_exists(d, e, tol)? {
            Some(plane) => plane,
            None => four_block(d, e, tol)?,
        },
    };
    let block = InvariantBlock::from_basis(basis, d.matrix(), e.matrix());
    let residual = block.invariance_residual(d.matrix(), e.matrix());
    if residual > 10.0 * tol.residual_tol {
        return Err(Error::Numerical(format!(
            "block of dimension {} is not invariant (residual {residual:.3e})",
            block.dim()
        )));
    }
    Ok(block)
}

/// The 4-dimensional invariant subspace `span{u, Tu, conj u, conj Tu} ∩ R^n` built from an
/// eigenvector `u` of `T^2`.
fn four_block(d: &Rotation, e: &Rotation, tol: &Tolerance) -> Result<RealMatrix> {
    let planes = eigenplanes(d, e, tol)?;
    let t = build_t(&planes, tol).map_err(|err| {
        Error::Numerical(format!("no invariant plane, yet T is not defined: {err}"))
    })?;
    let n_mat = t_squared(&t);
    let k = t.dim();
    let eigenvalues = complex_eigenvalues(&n_mat)?;
    let top = eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let lambda = eigenvalues
        .into_iter()
        .max_by(|x, y| {
            if (x.norm() - y.norm()).abs() <= tol.rank_tol * top {
                (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap()
            } else {
                x.norm().total_cmp(&y.norm())
            }
        })
        .ok_or(Error::Empty)?;
    let shifted = &n_mat - ComplexMatrix::identity(k, k) * lambda;
    let (_, u) = smallest_singular_vector(&shifted);
    let v = t.apply(&u);
    let s = singular_values(&ComplexMatrix::from_columns(&[u.clone(), v.clone()]));
    if s[1] <= tol.rank_tol * s[0] {
        return Err(Error::Numerical(
            "eigenvector of T^2 spans a T-invariant line but no invariant plane was found".into(),
        ));
    }
    let amb = ComplexMatrix::from_columns(&[t.embed(&u), t.embed(&v)]);
    let re = real_part(&amb);
    let im = imag_part(&amb);
    let vecs: Vec<RealVector> = [re.column(0), im.column(0), re.column(1), im.column(1)]
        .iter()
        .map(|c| c.into_owned())
        .collect();
    let basis = orthonormalize(&vecs, tol);
    if basis.len() != 4 {
        return Err(Error::Numerical(format!(
            "real part of span{{u, Tu, conj u, conj Tu}} has dimension {}",
            basis.len()
        )));
    }
    Ok(RealMatrix::from_columns(&basis))
}

/// True iff the block has no proper nonzero invariant subspace.
pub fn is_irreducible(block: &InvariantBlock, tol: &Tolerance) -> Result<bool> {
    let (d, e) = block.restricted_rotations(tol)?;
    Ok(match block.dim() {
        1 => true,
        2 => d.is_proper() || e.is_proper(),
        4 => d.is_proper() && e.is_proper() && two_plane_exists(&d, &e, tol)?.is_none(),
        _ => false,
    })
}

/// Splits a block (given by a basis in the coordinates of `d`, `e`) into irreducible pieces.
fn split_block(
    d: &Rotation,
    e: &Rotation,
    basis: RealMatrix,
    tol: &Tolerance,
) -> Result<Vec<RealMatrix>> {
    let block = InvariantBlock::from_basis(basis, d.matrix(), e.matrix());
    if is_irreducible(&block, tol)? {
        return Ok(vec![block.basis]);
    }
    let (bd, be) = block.restricted_rotations(tol)?;
    let inner = find_block(&bd, &be, tol)?;
    if inner.dim() == block.dim() {
        return Err(Error::Numerical(format!(
            "reducible block of dimension {} could not be split",
            block.dim()
        )));
    }
    let rest = orthogonal_complement(&inner.basis, tol)?;
    let mut out = split_block(d, e, &block.basis * &inner.basis, tol)?;
    out.extend(split_block(d, e, &block.basis * rest, tol)?);
    Ok(out)
}

fn restrict(r: &Rotation, basis: &RealMatrix, tol: &Tolerance) -> Result<Rotation> {
    as_rotation(&(basis.transpose() * r.matrix() * basis), tol)
}

/// Orthogonal decomposition into irreducible invariant blocks.
///
/// Blocks are extracted one at a time; after each extraction both operators are restricted
/// to the orthogonal complement of what has been found. Blocks are returned sorted by
/// dimension, then by the angles of the two restrictions.
pub fn decompose(d: &Rotation, e: &Rotation, tol: &Tolerance) -> Result<InvariantDecomposition> {
    let n = same_dim(d, e)?;
    let mut frame = RealMatrix::identity(n, n);
    let mut dr = d.clone();
    let mut er = e.clone();
    let mut blocks = Vec::new();
    while frame.ncols() > 0 {
        let found = find_block(&dr, &er, tol)?;
        for piece in split_block(&dr, &er, found.basis.clone(), tol)? {
            blocks.push(InvariantBlock::from_basis(
                &frame * piece,
                d.matrix(),
                e.matrix(),
            ));
        }
        if found.dim() == frame.ncols() {
            break;
        }
        let rest = orthogonal_complement(&found.basis, tol)?;
        dr = restrict(&dr, &rest, tol)?;
        er = restrict(&er, &rest, tol)?;
        frame = &frame * rest;
    }
    blocks.sort_by(|x, y| {
        let (xd, xe) = x.angles();
        let (yd, ye) = y.angles();
        x.dim()
            .cmp(&y.dim())
            .then(xd.total_cmp(&yd))
            .then(xe.total_cmp(&ye))
    });
    Ok(InvariantDecomposition {
        blocks,
        ambient_dim: n,
    })
}
