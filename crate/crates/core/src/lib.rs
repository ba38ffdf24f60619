mod dd;
pub mod error;
pub mod exec;
pub mod figures;
pub mod oracle;
pub mod specfun;
pub mod superint2d;
pub mod susy;
pub mod verify;
pub mod weber_spectra;

pub use error::{Error, Result};
pub use exec::Execution;
