//! Pairs of rotations: invariant decomposition, canonical forms and isomorphism.
//!
//! A *rotation* is an orthogonal operator that turns every vector by the same angle. This
//! crate splits a pair of rotations on `R^n` into irreducible invariant blocks of dimension
//! 1, 2 or 4, labels each block by its canonical form and decides whether two pairs are
//! orthogonally isomorphic.
//!
//! ```
//! use rotrep::classification::{classify, CanonicalForm, Sign};
//! use rotrep::linalg::{rotation_block, Tolerance};
//! use rotrep::orthogonal::as_rotation;
//!
//! let tol = Tolerance::default();
//! let d = as_rotation(&rotation_block(0.7), &tol).unwrap();
//! let e = as_rotation(&rotation_block(-2.1), &tol).unwrap();
//! let label = classify(&d, &e, &tol).unwrap();
//! match label.forms()[0] {
//!     CanonicalForm::Dim2Proper { r, .. } => assert_eq!(r, Sign::Minus),
//!     ref other => panic!("{other}"),
//! }
//! ```

pub mod bridge;
pub mod classification;
pub mod decomposition;
pub mod error;
pub mod linalg;
pub mod orthogonal;
pub mod workbench;

pub use error::{Error, Result};
