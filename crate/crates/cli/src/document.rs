//! JSON model and tiered-union spec documents.
//!
//! Canonical form: edges sorted by `(from, to)`, vertex sets sorted and
//! deduplicated, parameter values reduced and written as `"p/q"`, pretty
//! printed with a trailing newline. Serializing a parsed canonical
//! document reproduces it byte for byte.

use std::collections::BTreeSet;

use linident_core::arith::{format_rational, parse_rational};
use linident_core::graph::{DirectedGraph, Edge};
use linident_core::model::{CompartmentModel, Param, ParameterPoint};
use linident_core::transform::TieredUnionSpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Fixed rate for one edge `from → to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeValue {
    pub from: usize,
    pub to: usize,
    pub value: String,
}

/// Fixed leak rate out of one compartment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeakValue {
    pub compartment: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterValues {
    #[serde(default)]
    pub edges: Vec<EdgeValue>,
    #[serde(default)]
    pub leaks: Vec<LeakValue>,
}

/// A model file. Vertices are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub compartments: usize,
    pub edges: Vec<[usize; 2]>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub leaks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<ParameterValues>,
}

fn sorted_set(v: &[usize]) -> Vec<usize> {
    v.iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn check_version(v: u32) -> Result<(), CliError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "unsupported schema_version {v} (expected {SCHEMA_VERSION})"
        )))
    }
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("model document: {e}")))?;
        check_version(doc.schema_version)?;
        Ok(doc)
    }

    /// Document for a model, with optional name and fixed point.
    pub fn from_model(
        model: &CompartmentModel,
        name: Option<String>,
        point: Option<&ParameterPoint>,
    ) -> Self {
        let parameters = point.map(|p| ParameterValues {
            edges: p
                .edge_rates
                .iter()
                .map(|(e, v)| EdgeValue {
                    from: e.from,
                    to: e.to,
                    value: format_rational(v),
                })
                .collect(),
            leaks: p
                .leak_rates
                .iter()
                .map(|(&i, v)| LeakValue {
                    compartment: i,
                    value: format_rational(v),
                })
                .collect(),
        });
        Self {
            schema_version: SCHEMA_VERSION,
            name,
            compartments: model.n(),
            edges: model
                .graph()
                .edges()
                .iter()
                .map(|e| [e.from, e.to])
                .collect(),
            inputs: model.inputs().iter().copied().collect(),
            outputs: model.outputs().iter().copied().collect(),
            leaks: model.leaks().iter().copied().collect(),
            parameters,
        }
        .canonical()
    }

    /// Sorted edges and sets, reduced parameter values. Values that do not
    /// parse are left untouched so [`Self::to_model`] can report them.
    pub fn canonical(&self) -> Self {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        let parameters = self.parameters.as_ref().map(|p| {
            let reduce =
                |s: &String| parse_rational(s).map_or_else(|_| s.clone(), |r| format_rational(&r));
            let mut edges: Vec<EdgeValue> = p
                .edges
                .iter()
                .map(|e| EdgeValue {
                    value: reduce(&e.value),
                    ..e.clone()
                })
                .collect();
            edges.sort_by_key(|e| (e.from, e.to));
            let mut leaks: Vec<LeakValue> = p
                .leaks
                .iter()
                .map(|l| LeakValue {
                    value: reduce(&l.value),
                    ..l.clone()
                })
                .collect();
            leaks.sort_by_key(|l| l.compartment);
            ParameterValues { edges, leaks }
        });
        Self {
            schema_version: self.schema_version,
            name: self.name.clone(),
            compartments: self.compartments,
            edges,
            inputs: sorted_set(&self.inputs),
            outputs: sorted_set(&self.outputs),
            leaks: sorted_set(&self.leaks),
            parameters,
        }
    }

    /// Canonical pretty JSON with a trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.canonical()).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn to_model(&self) -> Result<CompartmentModel, CliError> {
        let edges = self
            .edges
            .iter()
            .map(|&[from, to]| Edge::new(from, to))
            .collect();
        let graph = DirectedGraph::new(self.compartments, edges)
            .map_err(|e| CliError::Input(e.to_string()))?;
        CompartmentModel::new(
            graph,
            self.inputs.iter().copied(),
            self.outputs.iter().copied(),
            self.leaks.iter().copied(),
        )
        .map_err(|e| CliError::Input(e.to_string()))
    }

    /// The fixed parameter point, validated against `model`.
    pub fn fixed_point(
        &self,
        model: &CompartmentModel,
    ) -> Result<Option<ParameterPoint>, CliError> {
        let Some(values) = &self.parameters else {
            return Ok(None);
        };
        let mut point = ParameterPoint::default();
        let parse = |s: &str| parse_rational(s).map_err(|e| CliError::Input(e.to_string()));
        for e in &values.edges {
            let p = Param::Edge(Edge::new(e.from, e.to));
            if point.get(p).is_some() {
                return Err(CliError::Input(format!("duplicate value for {p}")));
            }
            point.set(p, parse(&e.value)?);
        }
        for l in &values.leaks {
            let p = Param::Leak(l.compartment);
            if point.get(p).is_some() {
                return Err(CliError::Input(format!("duplicate value for {p}")));
            }
            point.set(p, parse(&l.value)?);
        }
        point
            .check(model)
            .map_err(|e| CliError::Input(e.to_string()))?;
        Ok(Some(point))
    }
}

/// A tiered-union spec file: two submodels and the bridge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeDocument {
    pub schema_version: u32,
    /// Name given to the composed model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub upper: ModelDocument,
    pub lower: ModelDocument,
    pub w1: Vec<usize>,
    pub w2: Vec<usize>,
    #[serde(default)]
    pub bridge_leaks: Vec<usize>,
}

impl ComposeDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("compose document: {e}")))?;
        check_version(doc.schema_version)?;
        check_version(doc.upper.schema_version)?;
        check_version(doc.lower.schema_version)?;
        Ok(doc)
    }

    pub fn to_spec(&self) -> Result<TieredUnionSpec, CliError> {
        Ok(TieredUnionSpec {
            upper: self.upper.to_model()?,
            lower: self.lower.to_model()?,
            w1: self.w1.clone(),
            w2: self.w2.clone(),
            bridge_leaks: self.bridge_leaks.iter().copied().collect(),
        })
    }
}
