//! Blow-up scripts over presentations and Rees algebras, and the automatic
//! plane-curve resolver.

mod curve;
mod script;

use serde_json::{json, Value};

pub use curve::{resolve_plane_curve, resolve_plane_curve_with_budget, singular_points, CurveOutcome, DEFAULT_BUDGET};
pub use script::{run_script, BlowupScript, ScriptObject, ScriptSpec, Step, StepSpec};

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Verdict { name: name.to_string(), passed, detail: detail.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

/// Result of [`run_script`] or [`resolve_plane_curve`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub kind: &'static str,
    /// Nested chart tree with the transformed object at every node.
    pub tree: Value,
    /// Max-multiplicity indicator after each stage (stage 0 is the input).
    pub indicators: Vec<u32>,
    pub verdicts: Vec<Verdict>,
    /// Kind-specific summary (leaves, multiplicity sequences, ...).
    pub summary: Value,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "tree": self.tree,
            "indicators": self.indicators,
            "verdicts": self.verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
            "summary": self.summary,
        })
    }
}

/// Nested tree JSON; children are ordered by pivot name.
pub(crate) fn tree_json(nodes: &[(Value, Vec<usize>)], root: usize) -> Value {
    let (node, children) = &nodes[root];
    let mut kids: Vec<Value> = children.iter().map(|&c| tree_json(nodes, c)).collect();
    kids.sort_by(|a, b| a["pivot"].as_str().cmp(&b["pivot"].as_str()));
    let mut node = node.clone();
    node["children"] = Value::Array(kids);
    node
}
