//! Files, instance generation, the sampling oracle and the command line.

pub mod cli;
pub mod generate;
pub mod io;
pub mod oracle;

pub use generate::{generate_pair, generate_rotation, random_orthogonal, random_spec};
pub use io::{OrthogonalityPolicy, PairDocument, PairMetadata, ReportDocument};
pub use oracle::oracle_two_plane_search;
