pub mod cantor;
pub mod coeff;
pub mod crossed;
pub mod error;
pub mod exec;
pub mod fock;
pub mod invariants;
pub mod limits;
pub mod random;
pub mod report;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
pub use exec::Execution;
pub use report::VerificationReport;
