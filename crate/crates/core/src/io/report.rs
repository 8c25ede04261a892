//! Machine-readable reports. Integers that can grow without bound are strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::SpecDocument;
use crate::complex::FaceSet;
use crate::poly::QuotientMethod;
use crate::presentation::{PresentationKind, RingPresentation, SignConvention};

pub const REPORT_FORMAT: &str = "kring-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Conforming,
    NonConforming,
    HypothesisFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Conforming => 0,
            Status::NonConforming => 2,
            Status::HypothesisFailure => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Conforming => "conforming",
            Status::NonConforming => "non-conforming",
            Status::HypothesisFailure => "hypothesis-failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub complex_violations: Vec<String>,
    pub singular_faces: Vec<FaceSet>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.complex_violations.is_empty() && self.singular_faces.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingReport {
    pub found: bool,
    pub order: Vec<FaceSet>,
    pub restrictions: Vec<FaceSet>,
    pub h_vector: Vec<usize>,
    /// `b_0, b_2, .., b_{2n}`.
    pub betti: Vec<usize>,
    pub cell_dimensions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TRelationReport {
    pub t: Vec<String>,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub order: String,
    pub convention: SignConvention,
    /// Variables from largest to smallest in the term order.
    pub variable_priority: Vec<usize>,
    pub sr_relations: Vec<String>,
    pub t_relations: Vec<TRelationReport>,
    pub groebner_basis: Vec<String>,
    pub rank: usize,
    pub expected_rank: usize,
    pub free: bool,
    pub torsion: Vec<String>,
    pub method: String,
    pub standard_monomials: Vec<String>,
    /// Shelling monomials `v_{T_i}` in shelling order.
    pub basis: Vec<String>,
    pub basis_determinant: Option<String>,
    /// Shelling basis indices sorted by restriction face.
    pub normalized_order: Vec<usize>,
    /// `(i, j, k, c)` with `i <= j`, 1-based, zeros omitted.
    pub structure_constants: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graded_ranks: Option<Vec<usize>>,
    pub conforming: bool,
    pub diagnostics: Vec<String>,
}

impl PresentationReport {
    pub fn from_presentation(p: &RingPresentation) -> Self {
        let order = p.gb.order();
        let show = |q: &crate::poly::IntPoly| q.display(order);
        PresentationReport {
            order: order.name().to_string(),
            convention: p.convention,
            variable_priority: p.variable_priority(),
            sr_relations: p.sr_relations.iter().map(show).collect(),
            t_relations: p
                .t_relations
                .iter()
                .map(|r| TRelationReport {
                    t: r.t.iter().map(ToString::to_string).collect(),
                    relation: show(&r.poly),
                })
                .collect(),
            groebner_basis: p.groebner_generators().iter().map(show).collect(),
            rank: p.module.rank,
            expected_rank: p.d,
            free: p.module.free,
            torsion: p.module.torsion.iter().map(ToString::to_string).collect(),
            method: match p.module.method {
                QuotientMethod::StandardMonomials => "standard-monomials".to_string(),
                QuotientMethod::TruncatedSmith { bound } => format!("truncated-smith(B={bound})"),
            },
            standard_monomials: p.module.standard_monomials.iter().map(ToString::to_string).collect(),
            basis: p.shelling_basis.iter().map(ToString::to_string).collect(),
            basis_determinant: p.certificate.as_ref().map(|c| c.determinant.to_string()),
            normalized_order: p.normalized_order(),
            structure_constants: p
                .structure_constants
                .as_ref()
                .map(|c| c.entries().into_iter().map(|(i, j, k, x)| (i, j, k, x.to_string())).collect())
                .unwrap_or_default(),
            graded_ranks: (p.kind == PresentationKind::Cohomology).then(|| p.graded_ranks.clone()).flatten(),
            conforming: p.is_conforming(),
            diagnostics: p.diagnostics.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub command: String,
    pub input: SpecDocument,
    pub status: Status,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shelling: Option<ShellingReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_theory: Option<PresentationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<PresentationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    /// Milliseconds per stage; present only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

fn list<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize to JSON");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "status: {} (exit {})", self.status.name(), self.exit_code);
        let _ = writeln!(out, "n = {}, m = {}, facets = {}", self.input.n, self.input.m, self.input.facets.len());
        for e in &self.errors {
            let _ = writeln!(out, "error: {e}");
        }
        if let Some(v) = &self.validation {
            if v.is_valid() {
                let _ = writeln!(out, "validation: ok");
            }
            for x in &v.complex_violations {
                let _ = writeln!(out, "violation: {x}");
            }
            for f in &v.singular_faces {
                let _ = writeln!(out, "singular face: {f}");
            }
        }
        if let Some(s) = &self.shelling {
            if s.found {
                let _ = writeln!(out, "shelling: {}", list(&s.order));
                let _ = writeln!(out, "restrictions: {}", list(&s.restrictions));
                let _ = writeln!(out, "h-vector: ({})", list(&s.h_vector));
                let _ = writeln!(out, "betti (even degrees): ({})", list(&s.betti));
                let _ = writeln!(out, "cell dimensions: ({})", list(&s.cell_dimensions));
            } else {
                let _ = writeln!(out, "shelling: none");
            }
        }
        for (title, p) in [("K-theory", &self.k_theory), ("cohomology", &self.cohomology)] {
            let Some(p) = p else { continue };
            let _ = writeln!(out, "[{title}]");
            let _ = writeln!(out, "  order: {} ({}), convention: {}", p.order, p.method, p.convention.name());
            let _ = writeln!(out, "  relations:");
            for r in &p.sr_relations {
                let _ = writeln!(out, "    {r}");
            }
            for r in &p.t_relations {
                let _ = writeln!(out, "    {}    [t = ({})]", r.relation, list(&r.t));
            }
            let _ = writeln!(out, "  groebner basis:");
            for g in &p.groebner_basis {
                let _ = writeln!(out, "    {g}");
            }
            let _ = writeln!(out, "  rank: {} (expected {}), free: {}", p.rank, p.expected_rank, p.free);
            if !p.torsion.is_empty() {
                let _ = writeln!(out, "  torsion: {}", list(&p.torsion));
            }
            if let Some(g) = &p.graded_ranks {
                let _ = writeln!(out, "  graded ranks: ({})", list(g));
            }
            let _ = writeln!(out, "  basis: {}", list(&p.basis));
            if let Some(d) = &p.basis_determinant {
                let _ = writeln!(out, "  basis determinant: {d}");
            }
            if !p.structure_constants.is_empty() {
                let _ = writeln!(out, "  structure constants (i, j, k, c):");
                for (i, j, k, c) in &p.structure_constants {
                    let _ = writeln!(out, "    {i} {j} {k} {c}");
                }
            }
            for d in &p.diagnostics {
                let _ = writeln!(out, "  diagnostic: {d}");
            }
        }
        if let Some(t) = &self.timings_ms {
            for (stage, ms) in t {
                let _ = writeln!(out, "time {stage}: {ms:.3} ms");
            }
        }
        out
    }
}
