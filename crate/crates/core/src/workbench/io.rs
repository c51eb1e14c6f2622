use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classification::{classify_block, CanonicalForm, ClassLabel, RotationPair};
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::linalg::{check_finite, orthogonality_defect, RealMatrix, Tolerance};
use crate::orthogonal::{orthogonal_normal_form, Rotation, RotationKind};

/// What to do with a matrix that fails the orthogonality check on load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrthogonalityPolicy {
    #[default]
    Reject,
    /// Replace the matrix by its nearest orthogonal matrix and report a warning.
    Warn,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PairMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Ground-truth class of a generated pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<ClassLabel>,
}

/// A pair of operators on `R^n`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub n: usize,
    pub delta: Vec<Vec<f64>>,
    pub epsilon: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<PairMetadata>,
}

fn rows_of(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix_of(name: &str, n: usize, rows: &[Vec<f64>]) -> Result<RealMatrix> {
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{name} with {n} rows"),
            found: format!("{} rows", rows.len()),
        });
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: format!("{name} row {i} with {n} entries"),
            found: format!("{} entries", r.len()),
        });
    }
    let m = RealMatrix::from_fn(n, n, |i, j| rows[i][j]);
    check_finite(&m)?;
    Ok(m)
}

fn nearest_orthogonal(m: &RealMatrix) -> RealMatrix {
    let svd = m.clone().svd(true, true);
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => u * v_t,
        _ => m.clone(),
    }
}

impl PairDocument {
    pub fn from_matrices(
        delta: &RealMatrix,
        epsilon: &RealMatrix,
        metadata: Option<PairMetadata>,
    ) -> Self {
        PairDocument {
            n: delta.nrows(),
            delta: rows_of(delta),
            epsilon: rows_of(epsilon),
            metadata,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pair documents always serialise")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Shape and finiteness checked; no orthogonality check.
    pub fn matrices(&self) -> Result<(RealMatrix, RealMatrix)> {
        if self.n == 0 {
            return Err(Error::Empty);
        }
        Ok((
            matrix_of("delta", self.n, &self.delta)?,
            matrix_of("epsilon", self.n, &self.epsilon)?,
        ))
    }

    /// Validated rotation pair, plus warnings produced under [`OrthogonalityPolicy::Warn`].
    pub fn to_pair(
        &self,
        tol: &Tolerance,
        policy: OrthogonalityPolicy,
    ) -> Result<(RotationPair, Vec<String>)> {
        let (d, e) = self.matrices()?;
        let mut warnings = Vec::new();
        let mut fixed = Vec::with_capacity(2);
        for (name, m) in [("delta", d), ("epsilon", e)] {
            let deviation = orthogonality_defect(&m);
            if deviation <= tol.residual_tol {
                fixed.push(m);
                continue;
            }
            match policy {
                OrthogonalityPolicy::Reject => return Err(Error::NotOrthogonal { deviation }),
                OrthogonalityPolicy::Warn => {
                    warnings.push(format!(
                        "{name} is not orthogonal (max |M^T M - I| = {deviation:.3e}); using its nearest orthogonal matrix"
                    ));
                    fixed.push(nearest_orthogonal(&m));
                }
            }
        }
        let e = fixed.pop().expect("two matrices");
        let d = fixed.pop().expect("two matrices");
        Ok((RotationPair::new(d, e, tol)?, warnings))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalFormReport {
    pub kind: RotationKind,
    pub angle: f64,
    pub block_angles: Vec<f64>,
    pub fix_dim: usize,
    pub neg_dim: usize,
    pub basis: Vec<Vec<f64>>,
}

impl NormalFormReport {
    pub fn new(r: &Rotation, tol: &Tolerance) -> Result<Self> {
        let nf = orthogonal_normal_form(r.matrix(), tol)?;
        Ok(NormalFormReport {
            kind: r.kind(),
            angle: r.angle(),
            block_angles: nf.angles,
            fix_dim: nf.fix_dim,
            neg_dim: nf.neg_dim,
            basis: rows_of(&nf.basis),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub dim: usize,
    /// Columns form an orthonormal basis of the block.
    pub basis: Vec<Vec<f64>>,
    pub delta_restricted: Vec<Vec<f64>>,
    pub epsilon_restricted: Vec<Vec<f64>>,
    pub invariance_residual: f64,
    pub form: CanonicalForm,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalForms {
    pub delta: NormalFormReport,
    pub epsilon: NormalFormReport,
}

/// Everything the workbench computes for one pair.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub n: usize,
    pub normal_forms: NormalForms,
    pub blocks: Vec<BlockReport>,
    pub invariance_residual: f64,
    pub orthonormality_defect: f64,
    pub label: ClassLabel,
    pub tolerances: Tolerance,
}

impl ReportDocument {
    pub fn build(pair: &RotationPair, tol: &Tolerance) -> Result<Self> {
        let (d, e) = (pair.delta.matrix(), pair.epsilon.matrix());
        let dec = decompose(&pair.delta, &pair.epsilon, tol)?;
        let mut blocks = Vec::with_capacity(dec.blocks.len());
        let mut forms = Vec::with_capacity(dec.blocks.len());
        for b in &dec.blocks {
            let form = classify_block(b, tol)?;
            forms.push(form);
            blocks.push(BlockReport {
                dim: b.dim(),
                basis: rows_of(&b.basis),
                delta_restricted: rows_of(&b.d_restricted),
                epsilon_restricted: rows_of(&b.e_restricted),
                invariance_residual: b.invariance_residual(d, e),
                form,
            });
        }
        Ok(ReportDocument {
            n: pair.dim(),
            normal_forms: NormalForms {
                delta: NormalFormReport::new(&pair.delta, tol)?,
                epsilon: NormalFormReport::new(&pair.epsilon, tol)?,
            },
            blocks,
            invariance_residual: dec.invariance_residual(d, e),
            orthonormality_defect: dec.orthonormality_defect(),
            label: ClassLabel::new(forms),
            tolerances: *tol,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialise")
    }
}
