//! Command-line front end: analysis reports, perturbation scans, SVG export.

pub mod args;
pub mod report;
pub mod run;
pub mod scan;
pub mod svg;

pub use args::Cli;
pub use report::ReportDocument;
pub use run::run;
