use std::collections::BTreeMap;
use std::time::Instant;

use super::report::{PresentationReport, Report, ShellingReport, Status, ValidationReport, REPORT_FORMAT};
use super::{InputError, SpecDocument};
use crate::poly::TermOrder;
use crate::presentation::{
    cohomology_presentation, k_presentation, ManifoldSpec, PresentationError, RingPresentation, SignConvention,
};
use crate::shelling::find_shelling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Validate,
    Shell,
    Present,
    Cohomology,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Shell => "shell",
            Command::Present => "present",
            Command::Cohomology => "cohomology",
            Command::Report => "report",
        }
    }
}

/// Command-line settings that take precedence over the document's options.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub order: Option<TermOrder>,
    pub convention: Option<SignConvention>,
    /// Appended to the document's covectors.
    pub extra_t: Vec<Vec<i64>>,
    pub bound: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub overrides: Overrides,
    pub timings: bool,
}

struct Clock {
    enabled: bool,
    stages: BTreeMap<String, f64>,
}

impl Clock {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.stages.insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

fn merged(doc: &SpecDocument, o: &Overrides) -> SpecDocument {
    let mut doc = doc.clone();
    if o.order.is_some() {
        doc.options.order = o.order;
    }
    if o.convention.is_some() {
        doc.options.convention = o.convention;
    }
    doc.options.extra_t.extend(o.extra_t.iter().cloned());
    if o.bound.is_some() {
        doc.options.bound = o.bound;
    }
    doc
}

/// Runs the pipeline up to the stage `command` needs.
///
/// Hypothesis failures and non-conforming rings are reports; only malformed
/// input is an error. The report echoes the document with overrides applied.
pub fn run(command: Command, doc: &SpecDocument, opts: &RunOptions) -> Result<Report, InputError> {
    let doc = merged(doc, &opts.overrides);
    doc.check()?;
    let complex = doc.complex()?;
    let lambda = doc.char_matrix()?;
    let mut clock = Clock {
        enabled: opts.timings,
        stages: BTreeMap::new(),
    };
    let mut report = Report {
        format: REPORT_FORMAT.to_string(),
        command: command.name().to_string(),
        input: doc.clone(),
        status: Status::Conforming,
        exit_code: 0,
        validation: None,
        shelling: None,
        k_theory: None,
        cohomology: None,
        errors: Vec::new(),
        timings_ms: None,
    };

    let validation = clock.time("validate", || -> Result<ValidationReport, InputError> {
        let violations = complex.validate();
        if !violations.is_empty() {
            return Ok(ValidationReport {
                complex_violations: violations.iter().map(ToString::to_string).collect(),
                singular_faces: Vec::new(),
            });
        }
        let singular = lambda
            .validate_nonsingular(&complex)
            .map_err(|e| InputError::Field {
                field: "lambda".into(),
                message: e.to_string(),
            })?;
        Ok(ValidationReport {
            complex_violations: Vec::new(),
            singular_faces: singular,
        })
    })?;
    let valid = validation.is_valid();
    report.validation = Some(validation);
    if !valid {
        report.errors.push("hypotheses fail: see validation".into());
        return Ok(finish(report, Status::HypothesisFailure, clock));
    }
    if command == Command::Validate {
        return Ok(finish(report, Status::Conforming, clock));
    }

    let shelling = clock.time("shell", || find_shelling(&complex));
    let Some(shelling) = shelling else {
        report.shelling = Some(ShellingReport {
            found: false,
            order: Vec::new(),
            restrictions: Vec::new(),
            h_vector: Vec::new(),
            betti: Vec::new(),
            cell_dimensions: Vec::new(),
        });
        report.errors.push("nerve has no shelling".into());
        return Ok(finish(report, Status::HypothesisFailure, clock));
    };
    let h = shelling.h_vector();
    let cell_dimensions = shelling.cell_dimensions(doc.n).map_err(|e| InputError::Field {
        field: "n".into(),
        message: e.to_string(),
    })?;
    report.shelling = Some(ShellingReport {
        found: true,
        order: shelling.order().to_vec(),
        restrictions: shelling.restrictions().to_vec(),
        h_vector: h.0.clone(),
        betti: h.betti(),
        cell_dimensions,
    });
    if command == Command::Shell {
        return Ok(finish(report, Status::Conforming, clock));
    }

    let spec = ManifoldSpec::new(complex, lambda, doc.names.clone()).map_err(|e| InputError::Field {
        field: "names".into(),
        message: e.to_string(),
    })?;
    let mut popts = doc.presentation_options();
    popts.shelling = Some(shelling.order().to_vec());

    let mut conforming = true;
    let mut record = |report: &mut Report, result: Result<RingPresentation, PresentationError>| {
        match result {
            Ok(p) => {
                conforming &= p.is_conforming();
                Some(PresentationReport::from_presentation(&p))
            }
            Err(e) => {
                conforming = false;
                report.errors.push(e.to_string());
                None
            }
        }
    };
    if matches!(command, Command::Present | Command::Report) {
        let result = clock.time("k-theory", || k_presentation(&spec, &popts));
        report.k_theory = record(&mut report, result);
    }
    if matches!(command, Command::Cohomology | Command::Report) {
        let result = clock.time("cohomology", || cohomology_presentation(&spec, &popts));
        report.cohomology = record(&mut report, result);
    }
    let status = if conforming {
        Status::Conforming
    } else {
        Status::NonConforming
    };
    Ok(finish(report, status, clock))
}

fn finish(mut report: Report, status: Status, clock: Clock) -> Report {
    report.status = status;
    report.exit_code = status.exit_code();
    if clock.enabled {
        report.timings_ms = Some(clock.stages);
    }
    report
}
