//! Small dense real and complex linear algebra.
//!
//! Everything here works on `nalgebra` dynamic matrices. The problems handled by this
//! crate are tiny (ambient dimension rarely above 16), so the routines favour accuracy and
//! determinism over speed: Gram-Schmidt with re-orthogonalisation, cyclic Jacobi for
//! symmetric eigenproblems, and SVD-based rank decisions relative to the largest singular
//! value.

use nalgebra::{ComplexField, DMatrix, DVector, Schur};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type Complex64 = Complex<f64>;
pub type RealMatrix = DMatrix<f64>;
pub type RealVector = DVector<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Numerical thresholds shared by every routine in the crate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    /// Bound on entrywise residuals such as `|M^T M - I|` or `|S v - lambda v|`.
    pub residual_tol: f64,
    /// Two angles (radians) closer than this are considered equal.
    pub angle_tol: f64,
    /// Relative singular value threshold used for every rank decision.
    pub rank_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            residual_tol: 1e-9,
            angle_tol: 1e-7,
            rank_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(residual_tol: f64, angle_tol: f64, rank_tol: f64) -> Result<Self> {
        for (name, v) in [
            ("residual_tol", residual_tol),
            ("angle_tol", angle_tol),
            ("rank_tol", rank_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::BadParameter(format!(
                    "{name} must be a positive finite number, got {v}"
                )));
            }
        }
        Ok(Tolerance {
            residual_tol,
            angle_tol,
            rank_tol,
        })
    }
}

/// Largest entry modulus.
pub fn max_abs<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|x| x.clone().modulus()).fold(0.0, f64::max)
}

pub fn check_finite(m: &RealMatrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Empty);
    }
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if !m[(r, c)].is_finite() {
                return Err(Error::NotFinite { row: r, col: c });
            }
        }
    }
    Ok(())
}

pub fn check_square(m: &RealMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    Ok(m.nrows())
}

/// `max |M^T M - I|`.
pub fn orthogonality_defect(m: &RealMatrix) -> f64 {
    let gram = m.transpose() * m;
    max_abs(&(gram - RealMatrix::identity(m.ncols(), m.ncols())))
}

/// `max |B^H B - I|` for a column basis.
pub fn gram_defect<T: ComplexField<RealField = f64>>(basis: &DMatrix<T>) -> f64 {
    let k = basis.ncols();
    let gram = basis.adjoint() * basis;
    max_abs(&(gram - DMatrix::<T>::identity(k, k)))
}

/// The plane rotation `[[cos a, -sin a], [sin a, cos a]]`.
pub fn rotation_block(alpha: f64) -> RealMatrix {
    let (s, c) = alpha.sin_cos();
    RealMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Block diagonal matrix with the given square blocks.
pub fn direct_sum(blocks: &[RealMatrix]) -> RealMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = RealMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    out
}

pub fn columns_to_matrix<T: ComplexField<RealField = f64>>(
    rows: usize,
    cols: &[DVector<T>],
) -> DMatrix<T> {
    if cols.is_empty() {
        return DMatrix::zeros(rows, 0);
    }
    DMatrix::from_columns(cols)
}

/// Orthonormal basis of the span of `vectors`, in input order.
///
/// Modified Gram-Schmidt with one re-orthogonalisation pass. A vector whose remaining
/// component is at most `rank_tol` times the largest input norm is dropped.
pub fn orthonormalize<T: ComplexField<RealField = f64>>(
    vectors: &[DVector<T>],
    tol: &Tolerance,
) -> Vec<DVector<T>> {
    let scale = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut basis: Vec<DVector<T>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coef = b.dotc(&w);
                w.axpy(-coef, b, T::one());
            }
        }
        let norm = w.norm();
        if norm > tol.rank_tol * scale {
            w.unscale_mut(norm);
            basis.push(w);
        }
    }
    basis
}

/// Orthonormal basis (as columns) of the column span of `m`.
pub fn orthonormal_columns<T: ComplexField<RealField = f64>>(
    m: &DMatrix<T>,
    tol: &Tolerance,
) -> DMatrix<T> {
    let cols: Vec<DVector<T>> = m.column_iter().map(|c| c.into_owned()).collect();
    columns_to_matrix(m.nrows(), &orthonormalize(&cols, tol))
}

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in descending order.
    pub values: RealVector,
    /// Orthonormal eigenvectors, column `i` belongs to `values[i]`.
    pub vectors: RealMatrix,
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn symmetric_eigen(s: &RealMatrix, tol: &Tolerance) -> Result<SymmetricEigen> {
    check_finite(s)?;
    let n = check_square(s)?;
    let deviation = max_abs(&(s - s.transpose()));
    if deviation > tol.residual_tol {
        return Err(Error::NotSymmetric { deviation });
    }
    let mut a = (s + s.transpose()) * 0.5;
    let mut v = RealMatrix::identity(n, n);
    let scale = a.norm();
    if scale > 0.0 {
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[(p, q)] * a[(p, q)];
                }
            }
            if off.sqrt() <= f64::EPSILON * scale * 1e-2 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let sn = t * c;
                    rotate_columns(&mut a, p, q, c, sn);
                    rotate_rows(&mut a, p, q, c, sn);
                    rotate_columns(&mut v, p, q, c, sn);
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let values = RealVector::from_iterator(n, order.iter().map(|&i| a[(i, i)]));
    let mut vectors = RealMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src).into_owned();
        // deterministic sign: largest component positive
        let imax = col.iamax();
        if col[imax] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    Ok(SymmetricEigen { values, vectors })
}

fn rotate_columns(m: &mut RealMatrix, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.nrows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = c * mp - s * mq;
        m[(k, q)] = s * mp + c * mq;
    }
}

fn rotate_rows(m: &mut RealMatrix, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.ncols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = c * mp - s * mq;
        m[(q, k)] = s * mp + c * mq;
    }
}

/// Singular values (descending) and right singular vectors of `m`.
///
/// Wide matrices are padded with zero rows so that the full right null space is present.
pub(crate) fn right_singular<T: ComplexField<RealField = f64>>(
    m: &DMatrix<T>,
) -> (Vec<f64>, DMatrix<T>) {
    let cols = m.ncols();
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::<T>::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v = svd.v_t.expect("requested right singular vectors").adjoint();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut sorted = DMatrix::<T>::zeros(cols, order.len());
    for (dst, &src) in order.iter().enumerate() {
        sorted.set_column(dst, &v.column(src));
    }
    (values, sorted)
}

/// Singular values of `m` in descending order.
pub fn singular_values<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with the relative threshold `rank_tol * sigma_max`.
pub fn rank<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, tol: &Tolerance) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol.rank_tol * top).count()
}

fn check_same_ambient<T: ComplexField<RealField = f64>>(
    u: &DMatrix<T>,
    w: &DMatrix<T>,
) -> Result<()> {
    if u.nrows() != w.nrows() {
        return Err(Error::DimensionMismatch {
            expected: format!("ambient dimension {}", u.nrows()),
            found: format!("ambient dimension {}", w.nrows()),
        });
    }
    Ok(())
}

/// Null space of the stacked matrix `[U | -W]` with its singular values.
fn stacked_null<T: ComplexField<RealField = f64>>(
    u: &DMatrix<T>,
    w: &DMatrix<T>,
) -> (Vec<f64>, DMatrix<T>) {
    let n = u.nrows();
    let (p, q) = (u.ncols(), w.ncols());
    let mut stacked = DMatrix::<T>::zeros(n, p + q);
    stacked.view_mut((0, 0), (n, p)).copy_from(u);
    stacked.view_mut((0, p), (n, q)).copy_from(&(-w));
    right_singular(&stacked)
}

/// Orthonormal basis of the intersection of two column spans (both bases orthonormal).
///
/// The intersection is read off the null space of `[U | -W]`; singular values at most
/// `rank_tol * sigma_max` count as zero. Returns an `n x 0` matrix when the intersection is
/// trivial.
pub fn subspace_meet<T: ComplexField<RealField = f64>>(
    u: &DMatrix<T>,
    w: &DMatrix<T>,
    tol: &Tolerance,
) -> Result<DMatrix<T>> {
    check_same_ambient(u, w)?;
    let n = u.nrows();
    if u.ncols() == 0 || w.ncols() == 0 {
        return Ok(DMatrix::zeros(n, 0));
    }
    let p = u.ncols();
    let (s, v) = stacked_null(u, w);
    let top = s[0];
    let mut vecs = Vec::new();
    for (i, &sv) in s.iter().enumerate() {
        if sv <= tol.rank_tol * top {
            let x = v.column(i).rows(0, p).into_owned();
            let y = v.column(i).rows(p, w.ncols()).into_owned();
            // average of the two representations of the common vector
            vecs.push((u * x + w * y) * T::from_real(0.5));
        }
    }
    Ok(columns_to_matrix(n, &orthonormalize(&vecs, tol)))
}

/// The unit vector of `span U` closest to `span W`, together with the smallest singular
/// value of `[U | -W]` (about `angle / sqrt 2` for a small principal angle).
pub(crate) fn closest_common_vector<T: ComplexField<RealField = f64>>(
    u: &DMatrix<T>,
    w: &DMatrix<T>,
) -> (f64, DVector<T>) {
    let p = u.ncols();
    let (s, v) = stacked_null(u, w);
    let last = s.len() - 1;
    let x = v.column(last).rows(0, p).into_owned();
    let y = v.column(last).rows(p, w.ncols()).into_owned();
    let mut z = (u * x + w * y) * T::from_real(0.5);
    let norm = z.norm();
    z.unscale_mut(norm);
    (s[last], z)
}

/// `max |P_U - P_W|` for orthonormal bases; zero iff the spans agree.
pub fn projector_distance<T: ComplexField<RealField = f64>>(u: &DMatrix<T>, w: &DMatrix<T>) -> f64 {
    max_abs(&(u * u.adjoint() - w * w.adjoint()))
}

/// Orthonormal basis of the orthogonal complement of an orthonormal column basis.
pub fn orthogonal_complement(basis: &RealMatrix, tol: &Tolerance) -> Result<RealMatrix> {
    let n = basis.nrows();
    let k = basis.ncols();
    if k == n {
        return Ok(RealMatrix::zeros(n, 0));
    }
    let projector = RealMatrix::identity(n, n) - basis * basis.transpose();
    let eig = symmetric_eigen(&projector, tol)?;
    // eigenvalues are 1 (complement) then 0 (span of basis)
    let comp = eig.vectors.columns(0, n - k).into_owned();
    if eig.values[n - k - 1] < 0.5 {
        return Err(Error::Numerical(
            "basis is not orthonormal; complement has wrong dimension".into(),
        ));
    }
    Ok(comp)
}

/// Eigenvalues of a small complex matrix.
///
/// Closed form for sizes 1 and 2; complex Schur (shifted QR) otherwise.
pub fn complex_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let k = m.nrows();
    if k != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    match k {
        0 => Ok(Vec::new()),
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            let half_trace = (m[(0, 0)] + m[(1, 1)]) * 0.5;
            let half_diff = (m[(0, 0)] - m[(1, 1)]) * 0.5;
            let disc = (half_diff * half_diff + m[(0, 1)] * m[(1, 0)]).sqrt();
            Ok(vec![half_trace + disc, half_trace - disc])
        }
        _ => {
            let schur = Schur::try_new(m.clone(), f64::EPSILON, 10_000).ok_or_else(|| {
                Error::Numerical("complex Schur iteration did not converge".into())
            })?;
            let (_, t) = schur.unpack();
            Ok((0..k).map(|i| t[(i, i)]).collect())
        }
    }
}

/// Unit vector minimising `|m x|`, with the attained singular value.
pub(crate) fn smallest_singular_vector<T: ComplexField<RealField = f64>>(
    m: &DMatrix<T>,
) -> (f64, DVector<T>) {
    let (s, v) = right_singular(m);
    let last = s.len() - 1;
    (s[last], v.column(last).into_owned())
}

pub fn real_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|z| z.re)
}

pub fn imag_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|z| z.im)
}

pub fn complexify(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}
