//! The TOML input document.
//!
//! ```toml
//! format = "kring-spec/1"        # optional
//! n = 2
//! m = 3
//! names = ["Q1", "Q2", "Q3"]     # optional
//! facets = [[1, 2], [2, 3], [1, 3]]
//! lambda = [[1, 0], [0, 1], [-1, -1]]
//!
//! [options]                      # every key optional
//! order = "degrevlex"            # degrevlex | deglex | lex
//! convention = "minus"           # minus | plus
//! extra_t = [[1, 1]]
//! bound = 6
//! ```
//!
//! Facet vertices are 1-based. Row `j` of `lambda` is `a_j`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charmap::CharMatrix;
use crate::complex::{NerveComplex, MAX_VERTICES};
use crate::poly::TermOrder;
use crate::presentation::{ManifoldSpec, PresentationError, PresentationOptions, SignConvention};

pub const FORMAT: &str = "kring-spec/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl InputError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        InputError::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<TermOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<SignConvention>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_t: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

impl DocOptions {
    fn is_default(&self) -> bool {
        *self == DocOptions::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub facets: Vec<Vec<usize>>,
    pub lambda: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "DocOptions::is_default")]
    pub options: DocOptions,
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and checks a document. Structural properties of the nerve
/// (purity, coverage) and nonsingularity are left to validation.
pub fn parse_spec(text: &str) -> Result<SpecDocument, InputError> {
    let doc: SpecDocument = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        InputError::Syntax {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    doc.check()?;
    Ok(doc)
}

impl SpecDocument {
    pub fn new(n: usize, m: usize, facets: Vec<Vec<usize>>, lambda: Vec<Vec<i64>>) -> Self {
        SpecDocument {
            format: Some(FORMAT.to_string()),
            n,
            m,
            names: None,
            facets,
            lambda,
            options: DocOptions::default(),
        }
    }

    pub fn check(&self) -> Result<(), InputError> {
        if let Some(f) = &self.format {
            if f != FORMAT {
                return Err(InputError::field("format", format!("unsupported format `{f}`, expected `{FORMAT}`")));
            }
        }
        if self.n == 0 {
            return Err(InputError::field("n", "must be at least 1"));
        }
        if self.m == 0 || self.m > MAX_VERTICES {
            return Err(InputError::field("m", format!("must be in 1..={MAX_VERTICES}")));
        }
        if let Some(names) = &self.names {
            if names.len() != self.m {
                return Err(InputError::field("names", format!("{} names given, expected m = {}", names.len(), self.m)));
            }
        }
        if self.facets.is_empty() {
            return Err(InputError::field("facets", "no facets given"));
        }
        for (i, facet) in self.facets.iter().enumerate() {
            if let Some(&v) = facet.iter().find(|&&v| v == 0 || v > self.m) {
                return Err(InputError::field(
                    "facets",
                    format!("facet {} has vertex {v} outside 1..={}", i + 1, self.m),
                ));
            }
            let mut sorted = facet.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != facet.len() {
                return Err(InputError::field("facets", format!("facet {} repeats a vertex", i + 1)));
            }
        }
        if self.lambda.len() != self.m {
            return Err(InputError::field(
                "lambda",
                format!("{} rows given, expected m = {}", self.lambda.len(), self.m),
            ));
        }
        if let Some((j, row)) = self.lambda.iter().enumerate().find(|(_, r)| r.len() != self.n) {
            return Err(InputError::field(
                "lambda",
                format!("row {} has {} entries, expected n = {}", j + 1, row.len(), self.n),
            ));
        }
        if let Some((i, t)) = self.options.extra_t.iter().enumerate().find(|(_, t)| t.len() != self.n) {
            return Err(InputError::field(
                "options.extra_t",
                format!("covector {} has {} entries, expected n = {}", i + 1, t.len(), self.n),
            ));
        }
        if self.options.bound == Some(0) {
            return Err(InputError::field("options.bound", "must be at least 1"));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec documents serialize to TOML")
    }

    pub fn complex(&self) -> Result<NerveComplex, InputError> {
        NerveComplex::from_lists(self.m, &self.facets).map_err(|e| InputError::field("facets", e.to_string()))
    }

    pub fn char_matrix(&self) -> Result<CharMatrix, InputError> {
        CharMatrix::from_i64(self.n, &self.lambda).map_err(|e| InputError::field("lambda", e.to_string()))
    }

    /// Validated spec. Dimension mismatches between the nerve and `lambda`
    /// surface as [`PresentationError::CharMap`].
    pub fn to_manifold(&self) -> Result<ManifoldSpec, ManifoldError> {
        let complex = self.complex()?;
        let lambda = self.char_matrix()?;
        Ok(ManifoldSpec::new(complex, lambda, self.names.clone())?)
    }

    pub fn presentation_options(&self) -> PresentationOptions {
        PresentationOptions {
            order: self.options.order.unwrap_or_default(),
            convention: self.options.convention.unwrap_or_default(),
            extra_t: self.options.extra_t.iter().map(|t| crate::linalg::to_big(std::slice::from_ref(t)).remove(0)).collect(),
            bound: self.options.bound,
            shelling: None,
        }
    }
}

/// Failure to turn a document into a [`ManifoldSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}
