//! The JSON model file: schema, table, optional graph and t-norm.
//!
//! ```json
//! {
//!   "variables": [{"name": "X", "domain": ["0", "1"]}],
//!   "table": {"default": 0, "entries": [{"assignment": {"X": "0"}, "value": 1}]},
//!   "graph": {"edges": [], "isolated": ["X"]},
//!   "tnorm": {"base": "product"}
//! }
//! ```
//!
//! Values are JSON numbers or `"p/q"` strings.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graphs::GraphSpec;
use crate::{Error, PossibilityTable, Result, Scalar, Schema, TNorm, Tolerance, UndirectedGraph, Variable};

/// A number or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl Value {
    pub fn to_scalar<V: Scalar>(&self) -> Result<V> {
        match self {
            // the shortest decimal round-trips exactly for rationals
            Value::Number(x) => V::parse(&format!("{x}")),
            Value::Text(s) => V::parse(s),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Number(x)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub assignment: BTreeMap<String, String>,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableSpec {
    pub name: String,
    pub domain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    #[serde(default = "zero")]
    pub default: Value,
    #[serde(default)]
    pub entries: Vec<Entry>,
}

fn zero() -> Value {
    Value::Number(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub variables: Vec<VariableSpec>,
    pub table: TableSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tnorm: Option<TNorm>,
    /// Free-form annotations; ignored by the engine.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model: {e}")))
    }

    pub fn read(path: &Path) -> std::io::Result<Result<Self>> {
        Ok(Self::from_json(&std::fs::read_to_string(path)?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    /// Hex SHA-256 of the canonical (compact) serialization.
    pub fn digest(&self) -> String {
        let canon = serde_json::to_vec(self).expect("model serializes");
        hex::encode(Sha256::digest(&canon))
    }

    pub fn schema(&self) -> Result<Schema> {
        Schema::new(
            self.variables
                .iter()
                .map(|v| Variable::new(v.name.clone(), &v.domain.iter().map(String::as_str).collect::<Vec<_>>()))
                .collect(),
        )
    }

    /// The normal possibility table described by the model.
    pub fn table<V: Scalar>(&self, tol: Tolerance) -> Result<PossibilityTable<V>> {
        let schema = self.schema()?;
        let default = self.table.default.to_scalar::<V>()?;
        let entries = self
            .table
            .entries
            .iter()
            .map(|e| Ok((e.assignment.clone(), e.value.to_scalar::<V>()?)))
            .collect::<Result<Vec<_>>>()?;
        PossibilityTable::load(schema, entries, default, tol)
    }

    pub fn graph(&self) -> Result<Option<UndirectedGraph>> {
        match &self.graph {
            None => Ok(None),
            Some(spec) => Ok(Some(UndirectedGraph::from_spec(spec, &self.schema()?)?)),
        }
    }

    /// Builds a model from a table (only cells differing from `default` are
    /// listed).
    pub fn from_table(t: &PossibilityTable<f64>, default: f64) -> Self {
        let schema = t.schema();
        let variables = schema
            .variables()
            .iter()
            .map(|v| VariableSpec { name: v.name.clone(), domain: v.domain.clone() })
            .collect();
        let entries = t
            .values()
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != default)
            .map(|(i, v)| Entry { assignment: schema.assignment(i).to_map(), value: Value::Number(*v) })
            .collect();
        ModelFile {
            variables,
            table: TableSpec { default: Value::Number(default), entries },
            graph: None,
            tnorm: None,
            meta: None,
        }
    }
}
