//! Report types shared by the JSON and text output modes.
//!
//! Reports are byte-identical for identical (command, input, seed): every
//! field is a deterministic function of those, exact values render through
//! the COMPLEX/RATIONAL grammar, and maps are ordered. The text mode is a
//! pure rendering of the same data.

use std::collections::BTreeMap;

use serde::Serialize;

use crquad::conditions::{ConditionVerdict, NonexceptionalVerdict};

/// Informational degree bound `(3n + 3k + 2)(k + 1)` on the birational
/// degree of the automorphisms of a type-(n,k) quadric.
pub fn degree_bound(n: usize, k: usize) -> u64 {
    ((3 * n + 3 * k + 2) as u64) * ((k + 1) as u64)
}

#[derive(Serialize, Clone)]
pub struct InputEcho {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct ValidateReport {
    pub command: String,
    pub input: InputEcho,
    pub n: usize,
    pub k: usize,
    pub degree_bound: u64,
    pub common_kernel_trivial: bool,
    pub forms_independent: bool,
    pub nondegenerate: bool,
}

#[derive(Serialize, Clone, Copy)]
pub struct ComponentEntry {
    pub m: i32,
    pub dim: usize,
}

#[derive(Serialize)]
pub struct BasisField {
    pub f: Vec<String>,
    pub g: Vec<String>,
}

#[derive(Serialize)]
pub struct ComponentBasis {
    pub m: i32,
    pub fields: Vec<BasisField>,
}

#[derive(Serialize)]
pub struct ComponentsReport {
    pub command: String,
    pub input: InputEcho,
    pub n: usize,
    pub k: usize,
    pub degree_bound: u64,
    pub components: Vec<ComponentEntry>,
    pub total_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<ComponentBasis>>,
}

#[derive(Serialize)]
pub struct DecideReport {
    pub command: String,
    pub input: InputEcho,
    pub n: usize,
    pub k: usize,
    pub degree_bound: u64,
    pub dim_g1: usize,
    pub dim_g3: usize,
    pub rigid: bool,
    pub exceptional: bool,
    pub nonrigid_via_a: bool,
    pub exceptional_via_a: bool,
    pub rigidity_paths_agree: bool,
    pub exceptionality_paths_agree: bool,
    pub condition_i: ConditionVerdict,
    pub condition_ii: ConditionVerdict,
    pub sufficient_nonexceptional: NonexceptionalVerdict,
    /// `sufficient_nonexceptional` implies not exceptional; a `false` here is
    /// an internal inconsistency.
    pub soundness_ok: bool,
}

#[derive(Serialize)]
pub struct CharmodReport {
    pub command: String,
    pub input: InputEcho,
    pub n: usize,
    pub k: usize,
    pub degree_bound: u64,
    pub max_degree: usize,
    pub quotient_dims: Vec<usize>,
    pub quotient_total: usize,
    pub a_dim_at_k: usize,
    pub a_dim_at_k_plus_2: usize,
    pub a_dims_stable: bool,
    pub quotient_vanishes_above_k: bool,
}

#[derive(Serialize)]
pub struct ExceptionalHit {
    pub index: usize,
    pub seed: u64,
    pub file: String,
}

#[derive(Serialize)]
pub struct CensusTally {
    pub samples: usize,
    pub rigid: usize,
    /// Count of samples per length of the positive part g_+.
    pub by_g_plus_length: BTreeMap<u32, usize>,
    pub exceptional: Vec<ExceptionalHit>,
}

#[derive(Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub seed: u64,
    pub g_plus_length: u32,
    pub components: Vec<ComponentEntry>,
}

#[derive(Serialize)]
pub struct CensusReport {
    pub command: String,
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub degree_bound: u64,
    pub tally: CensusTally,
    pub sample_rows: Vec<SampleRow>,
}

#[derive(Serialize)]
pub struct RaqBuildReport {
    pub command: String,
    pub algebra: InputEcho,
    pub n: usize,
    pub k: usize,
    pub degree_bound: u64,
    pub output: String,
    pub forms: Vec<Vec<Vec<String>>>,
}

#[derive(Serialize)]
pub struct RaqCheckReport {
    pub command: String,
    pub algebra: InputEcho,
    pub n: usize,
    pub k: usize,
    pub degree_bound: u64,
    pub components: Vec<ComponentEntry>,
    pub nonzero_components: usize,
    pub five_components: bool,
    pub exceptional: bool,
    pub exceptional_via_a: bool,
    pub exceptionality_paths_agree: bool,
    pub sufficient_nonexceptional: NonexceptionalVerdict,
    pub soundness_ok: bool,
}

#[derive(Serialize)]
pub struct RaqMapReport {
    pub command: String,
    pub algebra: InputEcho,
    pub n: usize,
    pub a: Vec<String>,
    pub r: Vec<String>,
    pub z: Vec<String>,
    pub w: Vec<String>,
    pub input_on_quadric: bool,
    pub delta_invertible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_star: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_star: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_on_quadric: Option<bool>,
}

#[derive(Serialize)]
pub struct CatalogReport {
    pub command: String,
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub degree_bound: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn verdict_text(v: &ConditionVerdict) -> String {
    match v {
        ConditionVerdict::Holds { witness } => format!("holds at ({})", witness.join(", ")),
        ConditionVerdict::FailsCertified => "fails (certified)".into(),
        ConditionVerdict::Inconclusive => "inconclusive".into(),
    }
}

/// Text mode: pure renderings of the same report data.
pub trait TextRender {
    fn text(&self) -> String;
}

impl TextRender for ValidateReport {
    fn text(&self) -> String {
        format!(
            "quadric {} (type ({}, {}))\n  common kernel trivial: {}\n  forms independent:     {}\n  nondegenerate:         {}\n",
            self.input.path,
            self.n,
            self.k,
            self.common_kernel_trivial,
            self.forms_independent,
            self.nondegenerate
        )
    }
}

fn components_text(components: &[ComponentEntry]) -> String {
    components.iter().map(|c| format!("  g_{:<3} dim {}\n", c.m, c.dim)).collect()
}

impl TextRender for ComponentsReport {
    fn text(&self) -> String {
        let mut s = format!(
            "aut Q components for {} (type ({}, {})), total real dim {}\n",
            self.input.path, self.n, self.k, self.total_dim
        );
        s.push_str(&components_text(&self.components));
        if let Some(basis) = &self.basis {
            for cb in basis {
                s.push_str(&format!("basis of g_{}:\n", cb.m));
                for (i, fld) in cb.fields.iter().enumerate() {
                    s.push_str(&format!(
                        "  [{}] f = ({}); g = ({})\n",
                        i + 1,
                        fld.f.join(", "),
                        fld.g.join(", ")
                    ));
                }
            }
        }
        s
    }
}

impl TextRender for DecideReport {
    fn text(&self) -> String {
        format!(
            "decide {} (type ({}, {}))\n  dim g_1 = {}, dim g_3 = {}\n  rigid: {} (via-a path agrees: {})\n  exceptional: {} (via-a path agrees: {})\n  condition (I):  {}\n  condition (II): {}\n  sufficient nonexceptional: {:?}\n  soundness ok: {}\n",
            self.input.path,
            self.n,
            self.k,
            self.dim_g1,
            self.dim_g3,
            self.rigid,
            self.rigidity_paths_agree,
            self.exceptional,
            self.exceptionality_paths_agree,
            verdict_text(&self.condition_i),
            verdict_text(&self.condition_ii),
            self.sufficient_nonexceptional,
            self.soundness_ok
        )
    }
}

impl TextRender for CharmodReport {
    fn text(&self) -> String {
        format!(
            "characteristic module of {} (type ({}, {}))\n  quotient dims by degree 0..={}: {:?} (total {})\n  a-solution dims: {} at D=k, {} at D=k+2 (stable: {})\n  quotient vanishes above degree k: {}\n",
            self.input.path,
            self.n,
            self.k,
            self.max_degree,
            self.quotient_dims,
            self.quotient_total,
            self.a_dim_at_k,
            self.a_dim_at_k_plus_2,
            self.a_dims_stable,
            self.quotient_vanishes_above_k
        )
    }
}

impl TextRender for CensusReport {
    fn text(&self) -> String {
        let mut s = format!(
            "census type ({}, {}), {} samples, seed {}\n  rigid: {}\n",
            self.n, self.k, self.samples, self.seed, self.tally.rigid
        );
        for (len, count) in &self.tally.by_g_plus_length {
            s.push_str(&format!("  g_+ length {}: {}\n", len, count));
        }
        s.push_str(&format!("  exceptional: {}\n", self.tally.exceptional.len()));
        for hit in &self.tally.exceptional {
            s.push_str(&format!(
                "    sample {} (seed {}) saved to {}\n",
                hit.index, hit.seed, hit.file
            ));
        }
        s
    }
}

impl TextRender for RaqBuildReport {
    fn text(&self) -> String {
        format!(
            "RAQ quadric of algebra {} (n = k = {}) written to {}\n",
            self.algebra.path, self.n, self.output
        )
    }
}

impl TextRender for RaqCheckReport {
    fn text(&self) -> String {
        let mut s = format!(
            "RAQ check of algebra {} (type ({}, {}))\n",
            self.algebra.path, self.n, self.k
        );
        s.push_str(&components_text(&self.components));
        s.push_str(&format!(
            "  nonzero components: {} (five expected: {})\n  exceptional: {} (via-a agrees: {})\n  sufficient nonexceptional: {:?}\n  soundness ok: {}\n",
            self.nonzero_components,
            self.five_components,
            self.exceptional,
            self.exceptionality_paths_agree,
            self.sufficient_nonexceptional,
            self.soundness_ok
        ));
        s
    }
}

impl TextRender for RaqMapReport {
    fn text(&self) -> String {
        let mut s = format!(
            "Poincare map on algebra {} with a = ({}), r = ({})\n  input  Z = ({}), W = ({}) (on quadric: {})\n",
            self.algebra.path,
            self.a.join(", "),
            self.r.join(", "),
            self.z.join(", "),
            self.w.join(", "),
            self.input_on_quadric
        );
        match (&self.z_star, &self.w_star, self.output_on_quadric) {
            (Some(zs), Some(ws), Some(on)) => s.push_str(&format!(
                "  output Z* = ({}), W* = ({}) (on quadric: {})\n",
                zs.join(", "),
                ws.join(", "),
                on
            )),
            _ => s.push_str("  Delta is not invertible at this point\n"),
        }
        s
    }
}

impl TextRender for CatalogReport {
    fn text(&self) -> String {
        match &self.output {
            Some(path) => format!("catalog quadric {} (type ({}, {})) written to {}\n", self.name, self.n, self.k, path),
            None => format!("catalog quadric {} (type ({}, {}))\n", self.name, self.n, self.k),
        }
    }
}
