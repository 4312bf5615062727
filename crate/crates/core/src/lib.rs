//! Mining shifting patterns from numeric matrices through monotone Boolean
//! formulas.
//!
//! A matrix is encoded as a monotone CNF over row, column and threshold
//! variables ([`encode`]). Its prime implicants ([`boolcore`]) are in one to
//! one correspondence with the inclusion-maximal patterns of the chosen kind,
//! which [`patterns::decode`] recovers by complement. [`oracle`] enumerates
//! the same patterns by brute force for cross-checking.

pub mod boolcore;
pub mod encode;
pub mod error;
pub mod fixtures;
pub mod matrixio;
pub mod metrics;
pub mod oracle;
pub mod patterns;

pub use boolcore::{prime_implicants, Caps, Cnf, Implicant, PrimeImplicantSet, Universe, Var, VarKind};
pub use encode::{encode, Encoding, EncodingSpec, Mode};
pub use error::{CapKind, Error, Result};
pub use matrixio::{load_matrix, DeltaSet, LoadOptions, Matrix, TextFormat};
pub use metrics::{harmonic_diameter, msr, Score};
pub use patterns::{decode, mine, Bicluster, MineOptions, PatternRecord};
