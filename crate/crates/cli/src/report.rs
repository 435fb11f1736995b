//! Report documents and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::document::{ModelDocument, ParameterValues};

/// Envelope shared by every command. All fields except `elapsed_ms` are a
/// deterministic function of the input file, seed and flags.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    /// Canonical echo of the input model (absent for `compose`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDocument>,
    pub result: CommandResult,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum CommandResult {
    Analyze(AnalyzeResult),
    CheckIcm(IcmResult),
    IoEq(IoEqResult),
    Cycles(CyclesResult),
    Reparam(ReparamResult),
    Suggest(SuggestResult),
    Compose(ComposeResult),
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeResult {
    pub verdict: String,
    /// Set when the verdict rests on rank deficiency at random points only.
    pub probabilistic: bool,
    pub n_params: usize,
    pub n_coeffs: usize,
    pub nonconstant: usize,
    pub rank: usize,
    pub trials: usize,
    pub trial_ranks: Vec<Option<usize>>,
    pub trial_seeds: Vec<Option<u64>>,
    /// Jacobian column order.
    pub parameters: Vec<String>,
    /// Jacobian row order.
    pub coefficients: Vec<String>,
    /// Rank at the document's fixed parameter values, when given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point_rank: Option<usize>,
    pub applicability: Applicability,
    pub diagnostics: Vec<String>,
}

/// Which sufficient conditions for identifiability apply to the model.
#[derive(Debug, Clone, Serialize)]
pub struct Applicability {
    pub strongly_connected: bool,
    /// The `(G, {1}, {1}, V)` ancestor passes the identifiable cycle model
    /// check.
    pub ancestor_is_icm: bool,
    pub ancestor_reasons: Vec<String>,
    pub isc_ordering: Option<Vec<usize>>,
    pub edge_count_is_2n_minus_2: bool,
    /// Ancestor is an icm, `In = Out = {1}` and exactly one leak.
    pub single_leak_guarantee: bool,
    /// Ancestor is an icm, `1 ∈ In ∩ Out` and `Leak ⊆ In ∪ Out`.
    pub io_placement_guarantee: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IcmResult {
    pub is_icm: bool,
    pub reasons: Vec<String>,
    pub rank: Option<usize>,
    pub target_rank: usize,
    pub isc_ordering: Option<Vec<usize>>,
    pub isc_shortcut: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RhsEntry {
    pub input: usize,
    /// Ascending powers of λ.
    pub coeffs: Vec<String>,
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IoEqEntry {
    pub output: usize,
    /// Ascending powers of λ; the last entry is the monic lead.
    pub lhs: Vec<String>,
    pub lhs_degree: usize,
    pub rhs: Vec<RhsEntry>,
    pub gcd_degree: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IoEqResult {
    /// `fixed` or `random`.
    pub point_source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_seed: Option<u64>,
    pub point: ParameterValues,
    pub equations: Vec<IoEqEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleEntry {
    pub vertices: Vec<usize>,
    pub monomial: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclesResult {
    pub strongly_connected: bool,
    pub cycles: Vec<CycleEntry>,
    pub self_cycles: Vec<String>,
    /// Absent when the graph is not strongly connected.
    pub basis: Option<Vec<CycleEntry>>,
    /// `|E| - |V| + 1` for a strongly connected graph.
    pub expected_basis_size: Option<usize>,
    /// Every listed cycle indicator lies in the incidence matrix kernel.
    pub kernel_check: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReparamEntry {
    pub row: usize,
    pub col: usize,
    pub monomial: String,
    pub exponents: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReparamResult {
    /// `parents[v - 1]` is the BFS tree parent of `v` (null for vertex 1).
    pub parents: Vec<Option<usize>>,
    /// `scales[v - 1]` is `s_v`.
    pub scales: Vec<String>,
    /// Transformed matrix; null marks a structural zero.
    pub matrix: Vec<Vec<Option<String>>>,
    /// Nonzero entries with canonical exponent vectors, row-major.
    pub entries: Vec<ReparamEntry>,
    pub negative_entries: Vec<[usize; 2]>,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuggestionEntry {
    pub description: String,
    pub rank: usize,
    pub n_params: usize,
    pub model: ModelDocument,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuggestResult {
    /// The `Leak = V`, `In = Out = {1}` ancestor was used instead of the
    /// model as given.
    pub from_ancestor: bool,
    pub suggestions: Vec<SuggestionEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictSummary {
    pub verdict: String,
    pub rank: usize,
    pub n_params: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComposeResult {
    pub model: ModelDocument,
    pub upper: VerdictSummary,
    pub lower: VerdictSummary,
    pub union: VerdictSummary,
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref()
        .map_or_else(|| String::from("none"), ToString::to_string)
}

fn ordering(v: &Option<Vec<usize>>) -> String {
    v.as_ref()
        .map_or_else(|| String::from("none"), |o| format!("({})", list(o)))
}

impl ReportDocument {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        writeln!(w, "command: {}", self.command).unwrap();
        if let Some(m) = &self.model {
            if let Some(name) = &m.name {
                writeln!(w, "model: {name}").unwrap();
            }
            writeln!(
                w,
                "compartments: {}, edges: {}, In = {{{}}}, Out = {{{}}}, Leak = {{{}}}",
                m.compartments,
                m.edges.len(),
                list(&m.inputs),
                list(&m.outputs),
                list(&m.leaks)
            )
            .unwrap();
        }
        writeln!(w, "seed: {}", self.seed).unwrap();
        match &self.result {
            CommandResult::Analyze(r) => {
                let tag = if r.probabilistic {
                    " (probabilistic)"
                } else {
                    ""
                };
                writeln!(w, "verdict: {}{tag}", r.verdict).unwrap();
                writeln!(w, "rank: {} / {} parameters", r.rank, r.n_params).unwrap();
                writeln!(
                    w,
                    "coefficients: {} ({} nonconstant)",
                    r.n_coeffs, r.nonconstant
                )
                .unwrap();
                let ranks: Vec<String> = r.trial_ranks.iter().map(opt).collect();
                writeln!(w, "trial ranks: {}", ranks.join(",")).unwrap();
                if let Some(fr) = r.fixed_point_rank {
                    writeln!(w, "rank at fixed point: {fr}").unwrap();
                }
                writeln!(w, "parameters: {}", r.parameters.join(" ")).unwrap();
                let a = &r.applicability;
                writeln!(w, "ancestor is icm: {}", a.ancestor_is_icm).unwrap();
                for reason in &a.ancestor_reasons {
                    writeln!(w, "  {reason}").unwrap();
                }
                writeln!(w, "ISC ordering: {}", ordering(&a.isc_ordering)).unwrap();
                writeln!(w, "single-leak guarantee: {}", a.single_leak_guarantee).unwrap();
                writeln!(w, "io-placement guarantee: {}", a.io_placement_guarantee).unwrap();
                for d in &r.diagnostics {
                    writeln!(w, "diagnostic: {d}").unwrap();
                }
            }
            CommandResult::CheckIcm(r) => {
                writeln!(w, "is_icm: {}", r.is_icm).unwrap();
                for reason in &r.reasons {
                    writeln!(w, "  {reason}").unwrap();
                }
                writeln!(w, "rank: {} (target {})", opt(&r.rank), r.target_rank).unwrap();
                writeln!(w, "ISC ordering: {}", ordering(&r.isc_ordering)).unwrap();
                writeln!(w, "ISC shortcut: {}", r.isc_shortcut).unwrap();
            }
            CommandResult::IoEq(r) => {
                writeln!(
                    w,
                    "point: {}{}",
                    r.point_source,
                    r.point_seed
                        .map_or(String::new(), |s| format!(" (seed {s})"))
                )
                .unwrap();
                for e in &r.point.edges {
                    writeln!(w, "  a_{}_{} = {}", e.to, e.from, e.value).unwrap();
                }
                for l in &r.point.leaks {
                    writeln!(w, "  a_0_{} = {}", l.compartment, l.value).unwrap();
                }
                for eq in &r.equations {
                    writeln!(w, "output {}: gcd_degree {}", eq.output, eq.gcd_degree).unwrap();
                    writeln!(
                        w,
                        "  lhs (degree {}): [{}]",
                        eq.lhs_degree,
                        eq.lhs.join(", ")
                    )
                    .unwrap();
                    for rhs in &eq.rhs {
                        writeln!(
                            w,
                            "  rhs u{} (degree {}): [{}]",
                            rhs.input,
                            opt(&rhs.degree),
                            rhs.coeffs.join(", ")
                        )
                        .unwrap();
                    }
                    for warning in &eq.warnings {
                        writeln!(w, "  warning: {warning}").unwrap();
                    }
                }
            }
            CommandResult::Cycles(r) => {
                writeln!(w, "cycles: {}", r.cycles.len()).unwrap();
                for c in &r.cycles {
                    writeln!(w, "  ({}) {}", list(&c.vertices), c.monomial).unwrap();
                }
                writeln!(w, "self-cycles: {}", r.self_cycles.join(" ")).unwrap();
                match &r.basis {
                    Some(b) => {
                        writeln!(
                            w,
                            "basis size: {} (expected {})",
                            b.len(),
                            opt(&r.expected_basis_size)
                        )
                        .unwrap();
                        for c in b {
                            writeln!(w, "  ({}) {}", list(&c.vertices), c.monomial).unwrap();
                        }
                    }
                    None => {
                        writeln!(w, "basis: unavailable, graph not strongly connected").unwrap()
                    }
                }
                writeln!(w, "kernel check: {}", r.kernel_check).unwrap();
            }
            CommandResult::Reparam(r) => {
                writeln!(
                    w,
                    "tree parents: {}",
                    r.parents.iter().map(opt).collect::<Vec<_>>().join(",")
                )
                .unwrap();
                writeln!(w, "scales: {}", r.scales.join(", ")).unwrap();
                writeln!(w, "matrix:").unwrap();
                for row in &r.matrix {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| c.clone().unwrap_or_else(|| String::from("0")))
                        .collect();
                    writeln!(w, "  [{}]", cells.join(", ")).unwrap();
                }
                writeln!(
                    w,
                    "negative exponents at: {}",
                    r.negative_entries
                        .iter()
                        .map(|[i, k]| format!("({i},{k})"))
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .unwrap();
                writeln!(w, "verified: {}", r.verified).unwrap();
            }
            CommandResult::Suggest(r) => {
                writeln!(w, "from ancestor: {}", r.from_ancestor).unwrap();
                writeln!(w, "suggestions: {}", r.suggestions.len()).unwrap();
                for sg in &r.suggestions {
                    writeln!(
                        w,
                        "  {} (rank {} = {} parameters)",
                        sg.description, sg.rank, sg.n_params
                    )
                    .unwrap();
                }
            }
            CommandResult::Compose(r) => {
                let m = &r.model;
                writeln!(
                    w,
                    "union: compartments {}, edges {}, In = {{{}}}, Out = {{{}}}, Leak = {{{}}}",
                    m.compartments,
                    m.edges.len(),
                    list(&m.inputs),
                    list(&m.outputs),
                    list(&m.leaks)
                )
                .unwrap();
                for (label, v) in [
                    ("upper", &r.upper),
                    ("lower", &r.lower),
                    ("union", &r.union),
                ] {
                    writeln!(
                        w,
                        "{label}: {} (rank {} / {})",
                        v.verdict, v.rank, v.n_params
                    )
                    .unwrap();
                }
            }
        }
        writeln!(w, "elapsed_ms: {}", self.elapsed_ms).unwrap();
        s
    }
}
