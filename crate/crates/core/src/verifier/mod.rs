pub mod checks;
pub mod output;
pub mod report;
pub mod suite;

pub use report::{CheckReport, MarginKind, MarginScale, Quantity};
pub use suite::{run_suite, SuiteConfig, SuiteRun, DEFAULT_SEED};
