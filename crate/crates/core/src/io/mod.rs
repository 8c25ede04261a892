//! Input documents, example generators, reports, and the command pipeline.

mod document;
pub mod generate;
mod report;
mod run;

pub use document::{parse_spec, DocOptions, InputError, ManifoldError, SpecDocument, FORMAT};
pub use report::{
    PresentationReport, Report, ShellingReport, Status, ValidationReport, REPORT_FORMAT,
};
pub use run::{run, Command, Overrides, RunOptions};
