//! Model surgery with identifiability guarantees: single-leak variants,
//! input/output/leak placement, tiered unions, suggestion lists, and the
//! monomial scaling reparametrization.

mod reparam;
mod tiered;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ident::{analyze, check_icm, Verdict};
use crate::model::CompartmentModel;

pub use reparam::{format_monomial, scaling_reparam, ScalingReparam};
pub use tiered::{tiered_union, TieredUnionSpec};

/// Whether a transform first confirms that the ancestor is an identifiable
/// cycle model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precheck {
    /// Run [`check_icm`] on the `Leak = V`, `In = Out = {1}` ancestor and
    /// fail if it does not pass.
    Require { seed: u64 },
    /// Skip the check; the result carries a warning instead.
    Waive,
}

/// A derived model together with any caveats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variant {
    pub model: CompartmentModel,
    pub warnings: Vec<String>,
}

/// `(G, {1}, {1}, V)` for the graph of `model`.
pub fn icm_ancestor(model: &CompartmentModel) -> CompartmentModel {
    model
        .with_sets([1], [1], 1..=model.n())
        .expect("vertex 1 and 1..=n are in range")
}

fn precheck(model: &CompartmentModel, mode: Precheck) -> Result<Vec<String>> {
    match mode {
        Precheck::Require { seed } => {
            let report = check_icm(&icm_ancestor(model), seed);
            if report.is_icm {
                Ok(Vec::new())
            } else {
                Err(Error::NotIcm(report.reasons.join("; ")))
            }
        }
        Precheck::Waive => Ok(alloc::vec![String::from(
            "identifiable cycle model check waived; identifiability is not guaranteed"
        )]),
    }
}

/// `(G, {1}, {1}, {k})`.
pub fn single_leak_variant(icm: &CompartmentModel, k: usize, mode: Precheck) -> Result<Variant> {
    icm.graph().check_vertex(k)?;
    let warnings = precheck(icm, mode)?;
    Ok(Variant {
        model: icm.with_sets([1], [1], [k])?,
        warnings,
    })
}

/// `(G, In, Out, Leak)` with `1 ∈ In`, `1 ∈ Out` and `Leak ⊆ In ∪ Out`.
pub fn io_leak_variant(
    icm: &CompartmentModel,
    inputs: &BTreeSet<usize>,
    outputs: &BTreeSet<usize>,
    leaks: &BTreeSet<usize>,
    mode: Precheck,
) -> Result<Variant> {
    if !inputs.contains(&1) {
        return Err(Error::Hypothesis(String::from("1 ∈ In violated")));
    }
    if !outputs.contains(&1) {
        return Err(Error::Hypothesis(String::from("1 ∈ Out violated")));
    }
    if !leaks
        .iter()
        .all(|v| inputs.contains(v) || outputs.contains(v))
    {
        return Err(Error::Hypothesis(String::from("Leak ⊆ In ∪ Out violated")));
    }
    let model = icm.with_sets(
        inputs.iter().copied(),
        outputs.iter().copied(),
        leaks.iter().copied(),
    )?;
    let warnings = precheck(icm, mode)?;
    Ok(Variant { model, warnings })
}

/// Options for [`suggest_variants`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuggestOptions {
    /// Largest leak set tried for placement variants.
    pub max_leaks: usize,
    /// Cover extra leaks with new inputs rather than new outputs.
    pub prefer_inputs: bool,
    pub seed: u64,
}

impl Default for SuggestOptions {
    fn default() -> Self {
        Self {
            max_leaks: 2,
            prefer_inputs: false,
            seed: 0,
        }
    }
}

/// A verified identifiable variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suggestion {
    pub description: String,
    pub model: CompartmentModel,
    pub rank: usize,
}

/// Every single-leak variant, then placement variants for each leak set of
/// size `2..=max_leaks` with each leak other than 1 covered by one new
/// output (or input). Each candidate is kept only if [`analyze`] certifies
/// it.
pub fn suggest_variants(
    icm: &CompartmentModel,
    options: SuggestOptions,
) -> Result<Vec<Suggestion>> {
    let report = check_icm(icm, options.seed);
    if !report.is_icm {
        return Err(Error::NotIcm(report.reasons.join("; ")));
    }
    let n = icm.n();
    let mut candidates: Vec<(String, CompartmentModel)> = Vec::new();
    for k in 1..=n {
        candidates.push((format!("single leak at {k}"), icm.with_sets([1], [1], [k])?));
    }
    for size in 2..=options.max_leaks.min(n) {
        for leaks in subsets(n, size) {
            let extra: Vec<usize> = leaks.iter().copied().filter(|&v| v != 1).collect();
            let io: BTreeSet<usize> = core::iter::once(1).chain(extra.iter().copied()).collect();
            let (inputs, outputs, side) = if options.prefer_inputs {
                (io, BTreeSet::from([1]), "In")
            } else {
                (BTreeSet::from([1]), io, "Out")
            };
            let description = format!(
                "Leak = {{{}}}, {side} = {{{}}}",
                join(&leaks),
                join(&core::iter::once(1).chain(extra).collect::<Vec<_>>())
            );
            let v = io_leak_variant(
                icm,
                &inputs,
                &outputs,
                &leaks.iter().copied().collect(),
                Precheck::Waive,
            )?;
            candidates.push((description, v.model));
        }
    }
    let mut out = Vec::new();
    for (description, model) in candidates {
        let r = analyze(&model, options.seed, 1)?;
        let r = if r.verdict == Verdict::GenericallyLocallyIdentifiable {
            r
        } else {
            analyze(&model, options.seed ^ 0x5555_5555, 2)?
        };
        if r.verdict == Verdict::GenericallyLocallyIdentifiable {
            out.push(Suggestion {
                description,
                model,
                rank: r.rank,
            });
        }
    }
    Ok(out)
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            go(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, size, &mut Vec::new(), &mut out);
    out
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}
