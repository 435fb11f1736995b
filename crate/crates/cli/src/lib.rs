//! Command-line front end for `linident-core`: JSON model documents,
//! command dispatch and report documents.
//!
//! Exit codes: 0 when the command completed (whatever the verdict), 2 for
//! unreadable or invalid input, 3 when the analysis itself fails.

pub mod document;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use linident_core::arith::{exact_rank, format_rational, Matrix, Rational};
use linident_core::coeff::{io_equation, regular_point};
use linident_core::graph::Cycle;
use linident_core::ident::{self, analyze, check_icm, MapKind, Monomial, Verdict};
use linident_core::model::{param_names, validate, CompartmentModel, ParameterPoint, Symbol};
use linident_core::transform::{
    format_monomial, icm_ancestor, scaling_reparam, suggest_variants, tiered_union, SuggestOptions,
};

use document::{ComposeDocument, ModelDocument, SCHEMA_VERSION};
use report::*;

/// Environment variable read for `--seed` when the flag is absent.
pub const SEED_ENV: &str = "LINIDENT_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("analysis error: {0}")]
    Engine(#[from] linident_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Engine(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exact structural identifiability analysis of linear compartment models.
#[derive(Debug, Parser)]
#[command(name = "linident", version)]
pub struct Cli {
    /// Seed for random evaluation points.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jacobian rank test of the coefficient map.
    Analyze {
        model: PathBuf,
        /// Random points tried.
        #[arg(long, default_value_t = ident::DEFAULT_TRIALS, value_parser = parse_trials)]
        trials: usize,
    },
    /// Identifiable cycle model conditions and ISC ordering.
    CheckIcm { model: PathBuf },
    /// Input-output equation coefficients at an evaluation point.
    Ioeq {
        model: PathBuf,
        /// Only this output compartment (default: every output).
        #[arg(long)]
        output: Option<usize>,
    },
    /// Simple cycles, self-cycles and a cycle-space basis.
    Cycles { model: PathBuf },
    /// Monomial scaling reparametrization of an identifiable cycle model.
    Reparam { model: PathBuf },
    /// Verified identifiable variants of an identifiable cycle model.
    Suggest {
        model: PathBuf,
        /// Largest leak set among placement variants.
        #[arg(long, default_value_t = 2)]
        max_leaks: usize,
        /// Cover extra leaks with inputs instead of outputs.
        #[arg(long)]
        prefer_inputs: bool,
        /// Start from the `Leak = V`, `In = Out = {1}` ancestor of the model.
        #[arg(long)]
        ancestor: bool,
    },
    /// Tiered union of two models joined by bridge edges.
    Compose { spec: PathBuf },
}

fn parse_trials(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err(String::from("at least one trial is required")),
        Ok(t) => Ok(t),
        Err(e) => Err(e.to_string()),
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::CheckIcm { .. } => "check-icm",
            Command::Ioeq { .. } => "ioeq",
            Command::Cycles { .. } => "cycles",
            Command::Reparam { .. } => "reparam",
            Command::Suggest { .. } => "suggest",
            Command::Compose { .. } => "compose",
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Parsed model file: the document, its model and optional fixed point.
pub fn load_model(
    path: &Path,
) -> Result<(ModelDocument, CompartmentModel, Option<ParameterPoint>), CliError> {
    let doc = ModelDocument::parse(&read(path)?)?;
    let model = doc.to_model()?;
    let point = doc.fixed_point(&model)?;
    Ok((doc, model, point))
}

/// Runs one command and builds its report.
pub fn run(cli: &Cli) -> Result<ReportDocument, CliError> {
    let seed = cli.seed;
    let (model_doc, result, elapsed_ms) = match &cli.command {
        Command::Compose { spec } => {
            let doc = ComposeDocument::parse(&read(spec)?)?;
            let spec = doc.to_spec()?;
            let start = Instant::now();
            let result = compose(&doc, &spec, seed)?;
            (None, result, start.elapsed().as_millis())
        }
        command => {
            let path = match command {
                Command::Analyze { model, .. }
                | Command::CheckIcm { model }
                | Command::Ioeq { model, .. }
                | Command::Cycles { model }
                | Command::Reparam { model }
                | Command::Suggest { model, .. } => model,
                Command::Compose { .. } => unreachable!("handled above"),
            };
            let (doc, model, point) = load_model(path)?;
            let start = Instant::now();
            let result = match command {
                Command::Analyze { trials, .. } => {
                    CommandResult::Analyze(analyze_cmd(&model, point.as_ref(), seed, *trials)?)
                }
                Command::CheckIcm { .. } => CommandResult::CheckIcm(icm_result(&model, seed)),
                Command::Ioeq { output, .. } => {
                    CommandResult::IoEq(ioeq_cmd(&model, point, seed, *output)?)
                }
                Command::Cycles { .. } => CommandResult::Cycles(cycles_cmd(&model)),
                Command::Reparam { .. } => CommandResult::Reparam(reparam_cmd(&model, seed)?),
                Command::Suggest {
                    max_leaks,
                    prefer_inputs,
                    ancestor,
                    ..
                } => CommandResult::Suggest(suggest_cmd(
                    &model,
                    seed,
                    *max_leaks,
                    *prefer_inputs,
                    *ancestor,
                )?),
                Command::Compose { .. } => unreachable!("handled above"),
            };
            (Some(doc.canonical()), result, start.elapsed().as_millis())
        }
    };
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: String::from(cli.command.name()),
        seed,
        model: model_doc,
        result,
        elapsed_ms: u64::try_from(elapsed_ms).unwrap_or(u64::MAX),
    })
}

/// Parses `args`, runs the command and renders the report. Returns the
/// exit code and the text for stdout and stderr.
pub fn execute<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                (0, e.to_string(), String::new())
            } else {
                (code, String::new(), e.to_string())
            };
        }
    };
    match run(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            (0, out, String::new())
        }
        Err(e) => (e.exit_code(), String::new(), format!("linident: {e}\n")),
    }
}

fn verdict_name(v: Verdict) -> String {
    v.to_string()
}

fn analyze_cmd(
    model: &CompartmentModel,
    point: Option<&ParameterPoint>,
    seed: u64,
    trials: usize,
) -> Result<AnalyzeResult, CliError> {
    let r = analyze(model, seed, trials)?;
    let fixed_point_rank = match point {
        Some(p) => Some(exact_rank(&ident::jacobian(MapKind::C, model, p)?)),
        None => None,
    };
    Ok(AnalyzeResult {
        verdict: verdict_name(r.verdict),
        probabilistic: r.verdict == Verdict::Unidentifiable,
        n_params: r.n_params,
        n_coeffs: r.n_coeffs,
        nonconstant: r.nonconstant,
        rank: r.rank,
        trials: r.trials,
        trial_ranks: r.trial_ranks,
        trial_seeds: r.trial_seeds,
        parameters: param_names(&model.parameters()),
        coefficients: r.layout.iter().map(ToString::to_string).collect(),
        fixed_point_rank,
        applicability: applicability(model, seed),
        diagnostics: validate(model).iter().map(ToString::to_string).collect(),
    })
}

fn applicability(model: &CompartmentModel, seed: u64) -> Applicability {
    let g = model.graph();
    let ancestor = check_icm(&icm_ancestor(model), seed);
    let ins = model.inputs();
    let outs = model.outputs();
    let one_only = |s: &std::collections::BTreeSet<usize>| s.len() == 1 && s.contains(&1);
    let single_leak_guarantee =
        ancestor.is_icm && one_only(ins) && one_only(outs) && model.leaks().len() == 1;
    let io_placement_guarantee = ancestor.is_icm
        && ins.contains(&1)
        && outs.contains(&1)
        && model
            .leaks()
            .iter()
            .all(|v| ins.contains(v) || outs.contains(v));
    Applicability {
        strongly_connected: g.is_strongly_connected(),
        ancestor_is_icm: ancestor.is_icm,
        ancestor_reasons: ancestor.reasons,
        isc_ordering: ancestor.isc_ordering,
        edge_count_is_2n_minus_2: g.edge_count() + 2 == 2 * g.n(),
        single_leak_guarantee,
        io_placement_guarantee,
    }
}

fn icm_result(model: &CompartmentModel, seed: u64) -> IcmResult {
    let r = check_icm(model, seed);
    IcmResult {
        is_icm: r.is_icm,
        reasons: r.reasons,
        rank: r.rank,
        target_rank: r.target_rank,
        isc_ordering: r.isc_ordering,
        isc_shortcut: r.isc_shortcut,
    }
}

fn coeff_strings(c: &[Rational]) -> Vec<String> {
    c.iter().map(format_rational).collect()
}

fn ioeq_cmd(
    model: &CompartmentModel,
    point: Option<ParameterPoint>,
    seed: u64,
    output: Option<usize>,
) -> Result<IoEqResult, CliError> {
    model.require_io().map_err(linident_core::Error::from)?;
    let outputs: Vec<usize> = match output {
        Some(i) if !model.outputs().contains(&i) => {
            return Err(linident_core::Error::NotAnOutput(i).into())
        }
        Some(i) => vec![i],
        None => model.outputs().iter().copied().collect(),
    };
    let (point, point_source, point_seed) = match point {
        Some(p) => (p, "fixed", None),
        None => {
            let (p, s) = regular_point(model, seed)?;
            (p, "random", Some(s))
        }
    };
    let mut equations = Vec::new();
    for i in outputs {
        let eq = io_equation(model, &point, i)?;
        equations.push(IoEqEntry {
            output: i,
            lhs: coeff_strings(eq.lhs.coeffs()),
            lhs_degree: eq.lhs.degree().unwrap_or(0),
            rhs: eq
                .rhs
                .iter()
                .map(|(&j, p)| RhsEntry {
                    input: j,
                    coeffs: coeff_strings(p.coeffs()),
                    degree: p.degree(),
                })
                .collect(),
            gcd_degree: eq.gcd_degree,
            warnings: eq.warnings.iter().map(ToString::to_string).collect(),
        });
    }
    let echo = ModelDocument::from_model(model, None, Some(&point));
    Ok(IoEqResult {
        point_source: String::from(point_source),
        point_seed,
        point: echo.parameters.unwrap_or_default(),
        equations,
    })
}

fn cycle_entry(c: &Cycle) -> CycleEntry {
    let mono: Monomial = c.edges().map(|e| (Symbol::edge(e.from, e.to), 1)).collect();
    CycleEntry {
        vertices: c.vertices().to_vec(),
        monomial: format_monomial(&mono),
    }
}

fn in_kernel(m: &Matrix<Rational>, v: &[Rational]) -> bool {
    (0..m.rows()).all(|r| {
        m.row(r)
            .iter()
            .zip(v)
            .fold(Rational::from_integer(0.into()), |acc, (a, b)| acc + a * b)
            == Rational::from_integer(0.into())
    })
}

fn cycles_cmd(model: &CompartmentModel) -> CyclesResult {
    let g = model.graph();
    let cycles = g.simple_cycles();
    let basis = g.cycle_space_basis().ok();
    let m = g.incidence_matrix();
    let kernel_check = cycles.iter().all(|c| in_kernel(&m, &g.indicator(c)));
    CyclesResult {
        strongly_connected: g.is_strongly_connected(),
        cycles: cycles.iter().map(cycle_entry).collect(),
        self_cycles: (1..=g.n()).map(|i| Symbol::Diag(i).to_string()).collect(),
        expected_basis_size: basis.as_ref().map(|_| g.edge_count() + 1 - g.n()),
        basis: basis.map(|b| b.iter().map(cycle_entry).collect()),
        kernel_check,
    }
}

fn reparam_cmd(model: &CompartmentModel, seed: u64) -> Result<ReparamResult, CliError> {
    let r = scaling_reparam(model, seed)?;
    let mut entries = Vec::new();
    let matrix = r
        .entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(k, e)| {
                    e.as_ref().map(|m| {
                        let s = format_monomial(m);
                        entries.push(ReparamEntry {
                            row: i + 1,
                            col: k + 1,
                            monomial: s.clone(),
                            exponents: m.iter().map(|(sym, &e)| (sym.to_string(), e)).collect(),
                        });
                        s
                    })
                })
                .collect()
        })
        .collect();
    Ok(ReparamResult {
        parents: r.parent.iter().skip(1).copied().collect(),
        scales: r.scales.iter().map(format_monomial).collect(),
        matrix,
        entries,
        negative_entries: r.negative_entries.iter().map(|&(i, k)| [i, k]).collect(),
        verified: r.verified,
    })
}

fn suggest_cmd(
    model: &CompartmentModel,
    seed: u64,
    max_leaks: usize,
    prefer_inputs: bool,
    from_ancestor: bool,
) -> Result<SuggestResult, CliError> {
    let base = if from_ancestor {
        icm_ancestor(model)
    } else {
        model.clone()
    };
    let options = SuggestOptions {
        max_leaks,
        prefer_inputs,
        seed,
    };
    let suggestions = suggest_variants(&base, options)?
        .into_iter()
        .map(|s| SuggestionEntry {
            n_params: s.model.n_params(),
            model: ModelDocument::from_model(&s.model, None, None),
            description: s.description,
            rank: s.rank,
        })
        .collect();
    Ok(SuggestResult {
        from_ancestor,
        suggestions,
    })
}

fn summary(model: &CompartmentModel, seed: u64) -> Result<VerdictSummary, CliError> {
    let r = analyze(model, seed, ident::DEFAULT_TRIALS)?;
    Ok(VerdictSummary {
        verdict: verdict_name(r.verdict),
        rank: r.rank,
        n_params: r.n_params,
    })
}

fn compose(
    doc: &ComposeDocument,
    spec: &linident_core::transform::TieredUnionSpec,
    seed: u64,
) -> Result<CommandResult, CliError> {
    let union = tiered_union(spec)?;
    Ok(CommandResult::Compose(ComposeResult {
        model: ModelDocument::from_model(&union, doc.name.clone(), None),
        upper: summary(&spec.upper, seed)?,
        lower: summary(&spec.lower, seed)?,
        union: summary(&union, seed)?,
    }))
}
