use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{tree_json, RunReport, Verdict};
use crate::blowup::{Center, CenterSpec, Chart, ExceptionalDivisor};
use crate::elimination::tschirnhaus;
use crate::error::{Error, Result};
use crate::json::from_str;
use crate::poly::{format_rational, Ring};
use crate::presentation::{Presentation, PresentationSpec};
use crate::rees::{AlgebraSpec, Grid, ReesAlgebra};

/// The object a script transforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptObject {
    Presentation(Presentation),
    Rees(ReesAlgebra),
}

impl ScriptObject {
    pub fn ring(&self) -> &Ring {
        match self {
            ScriptObject::Presentation(p) => p.base(),
            ScriptObject::Rees(g) => g.ring(),
        }
    }

    /// Why `center` is not permissible, or `None` if it is.
    pub fn permissibility_failure(&self, center: &Center) -> Result<Option<String>> {
        match self {
            ScriptObject::Rees(g) => g.permissibility_failure(center),
            ScriptObject::Presentation(p) => {
                center.indices(p.base())?;
                for f in p.entries() {
                    let t = tschirnhaus(f)?;
                    for j in 2..=f.degree() {
                        let nu = center.order_of(t.b(j))?;
                        if !nu.at_least(j as u32) {
                            return Ok(Some(format!(
                                "entry {}: coefficient b_{j} = {} has order {nu} < {j} along {:?}",
                                f.var(),
                                t.b(j),
                                center.vars
                            )));
                        }
                    }
                }
                Ok(None)
            }
        }
    }

    pub fn transform(&self, chart: &Chart) -> Result<ScriptObject> {
        Ok(match self {
            ScriptObject::Presentation(p) => ScriptObject::Presentation(p.transform(chart)?),
            ScriptObject::Rees(g) => ScriptObject::Rees(g.transform(chart)?),
        })
    }

    /// Pointwise indicator: local multiplicity for presentations, Sing
    /// membership (1 or 0) for Rees algebras.
    pub fn value_at(&self, point: &[BigRational]) -> Result<u32> {
        match self {
            ScriptObject::Presentation(p) => p.multiplicity_at(point),
            ScriptObject::Rees(g) => Ok(u32::from(g.contains_point(point)?)),
        }
    }

    /// Exact indicator value along a permissible center.
    fn center_value(&self) -> u32 {
        match self {
            ScriptObject::Presentation(p) => p.generic_rank() as u32,
            ScriptObject::Rees(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ScriptObject::Presentation(p) => p.to_json(),
            ScriptObject::Rees(g) => g.to_json(),
        }
    }

    fn leaf_json(&self, grid: &Grid, value: u32) -> Result<Value> {
        Ok(match self {
            ScriptObject::Presentation(p) => json!({
                "presentation": p.to_json(),
                "generic_rank": p.generic_rank(),
                "max_multiplicity": value,
                "nfold_present": value as usize == p.generic_rank(),
            }),
            ScriptObject::Rees(g) => {
                let mut max_ord: Option<BigRational> = None;
                for q in g.sing_on_grid(grid)? {
                    let o = g.ord_at(&q)?;
                    if max_ord.as_ref().is_none_or(|m| o > *m) {
                        max_ord = Some(o);
                    }
                }
                json!({
                    "algebra": g.to_json(),
                    "sing_present": value > 0,
                    "sing_status": if value > 0 { "nonempty" } else { "grid-empty (not certified)" },
                    "max_ord": max_ord.map(|o| format_rational(&o)),
                })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectSpec {
    Presentation(PresentationSpec),
    Rees(AlgebraSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSpec {
    #[serde(default)]
    pub chart: Vec<String>,
    pub center: CenterSpec,
}

/// `{"object": ..., "steps": [{"chart": [...], "center": {...}}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptSpec {
    pub object: ObjectSpec,
    #[serde(default)]
    pub steps: Vec<StepSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    /// Pivot names from the root to the chart being blown up.
    pub chart: Vec<String>,
    pub center: Center,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupScript {
    pub object: ScriptObject,
    pub steps: Vec<Step>,
}

impl BlowupScript {
    pub fn from_spec(spec: &ScriptSpec) -> Result<Self> {
        let object = match &spec.object {
            ObjectSpec::Presentation(p) => ScriptObject::Presentation(Presentation::from_spec(p)?),
            ObjectSpec::Rees(a) => ScriptObject::Rees(ReesAlgebra::from_spec(a)?),
        };
        let steps = spec
            .steps
            .iter()
            .map(|s| Ok(Step { chart: s.chart.clone(), center: s.center.to_center()? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(BlowupScript { object, steps })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&from_str(text)?)
    }
}

struct Node {
    chart: Chart,
    object: ScriptObject,
    children: Vec<usize>,
    created: usize,
    blown: Option<usize>,
    grid_value: u32,
}

fn divisor_json(e: &ExceptionalDivisor) -> Value {
    json!({"step": e.step, "poly": e.poly.to_string(), "coordinate": e.is_coordinate()})
}

/// Executes the script, validating every transform.
///
/// Each stage's indicator is the largest pointwise value over the grid in
/// every current leaf; a leaf about to be blown up contributes the exact
/// value along its (permissible) center. After each blow-up every child
/// grid point `q` is checked exactly against its image: `value(q) <=
/// value(pi(q))`.
pub fn run_script(script: &BlowupScript) -> Result<RunReport> {
    let grid = Grid::default();
    let root_chart = Chart::root(script.object.ring());
    let root_value = grid_value(&script.object, &grid)?;
    let mut nodes = vec![Node {
        chart: root_chart,
        object: script.object.clone(),
        children: Vec::new(),
        created: 0,
        blown: None,
        grid_value: root_value,
    }];
    let mut checked_points = 0usize;
    for (k, step) in script.steps.iter().enumerate() {
        let stage = k + 1;
        let idx = nodes
            .iter()
            .position(|n| n.chart.path == step.chart)
            .ok_or_else(|| Error::UnknownChart(step.chart.clone()))?;
        if nodes[idx].blown.is_some() {
            return Err(Error::InvalidArgument(format!("chart {:?} was already blown up", step.chart)));
        }
        if let Some(why) = nodes[idx].object.permissibility_failure(&step.center)? {
            return Err(Error::NotPermissible(format!("step {stage}: {why}")));
        }
        let charts = nodes[idx].chart.blow_up(&step.center, stage)?;
        nodes[idx].blown = Some(stage);
        for chart in charts {
            let object = nodes[idx].object.transform(&chart)?;
            for q in grid.points(chart.ring.nvars())? {
                let image = chart.map_point(&q)?;
                let (below, above) = (object.value_at(&q)?, nodes[idx].object.value_at(&image)?);
                if below > above {
                    return Err(Error::Invariant(
                        json!({
                            "violation": "multiplicity increased under blow-up",
                            "step": stage,
                            "chart": chart.path,
                            "point": q.iter().map(format_rational).collect::<Vec<_>>(),
                            "image": image.iter().map(format_rational).collect::<Vec<_>>(),
                            "value": below,
                            "image_value": above,
                        })
                        .to_string(),
                    ));
                }
                checked_points += 1;
            }
            let grid_value = grid_value(&object, &grid)?;
            nodes.push(Node { chart, object, children: Vec::new(), created: stage, blown: None, grid_value });
            let child = nodes.len() - 1;
            nodes[idx].children.push(child);
        }
    }

    let stages = script.steps.len();
    let mut indicators = Vec::with_capacity(stages + 1);
    for s in 0..=stages {
        let value = nodes
            .iter()
            .filter(|n| n.created <= s && n.blown.is_none_or(|b| b > s))
            .map(|n| if n.blown == Some(s + 1) { n.grid_value.max(n.object.center_value()) } else { n.grid_value })
            .max()
            .unwrap_or(0);
        indicators.push(value);
    }
    if let Some(w) = indicators.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::Invariant(
            json!({"violation": "max-multiplicity indicator increased", "stage": w + 1, "indicators": indicators}).to_string(),
        ));
    }

    let mut leaves = Vec::new();
    let mut crossings_ok = true;
    let mut coordinate_divisors = true;
    for n in nodes.iter().filter(|n| n.blown.is_none()) {
        let mut nc = true;
        for q in grid.points(n.chart.ring.nvars())? {
            nc &= n.chart.normal_crossings_at(&q)?;
        }
        crossings_ok &= nc;
        coordinate_divisors &= n.chart.exceptional.iter().all(ExceptionalDivisor::is_coordinate);
        leaves.push(json!({
            "path": n.chart.path,
            "ring": n.chart.ring.to_string(),
            "exceptional": n.chart.exceptional.iter().map(divisor_json).collect::<Vec<_>>(),
            "normal_crossings_on_grid": nc,
            "object": n.object.leaf_json(&grid, n.grid_value)?,
        }));
    }

    let unshifted = script
        .steps
        .iter()
        .all(|s| s.center.shift.as_ref().is_none_or(|v| v.iter().all(num_traits::Zero::is_zero)));
    let verdicts = vec![
        Verdict::new("permissible centers", true, format!("{stages} step(s) checked before execution")),
        Verdict::new("exact transforms", true, "every division by the exceptional power was exact"),
        Verdict::new("pointwise non-increase", true, format!("{checked_points} chart points compared with their images")),
        Verdict::new("indicator non-increasing", true, format!("{indicators:?}")),
        Verdict::new("normal crossings at leaves", crossings_ok, "independent gradients at every grid point"),
        if unshifted {
            Verdict::new("coordinate exceptional divisors", coordinate_divisors, "each divisor is a single chart variable")
        } else {
            Verdict::new("coordinate exceptional divisors", true, "not applicable: shifted centers, crossings checked by gradients")
        },
    ];

    let flat: Vec<(Value, Vec<usize>)> = nodes
        .iter()
        .map(|n| {
            let mut v = n.chart.to_json();
            v["object"] = n.object.to_json();
            v["indicator"] = json!(n.grid_value);
            v["exceptional"] = n.chart.exceptional.iter().map(divisor_json).collect::<Vec<_>>().into();
            if let Some(c) = &n.chart.center {
                v["center"] = serde_json::to_value(CenterSpec::from_center(c)).expect("center serializes");
            }
            (v, n.children.clone())
        })
        .collect();
    let kind = match script.object {
        ScriptObject::Presentation(_) => "presentation",
        ScriptObject::Rees(_) => "rees",
    };
    Ok(RunReport { kind, tree: tree_json(&flat, 0), indicators, verdicts, summary: json!({"leaves": leaves}) })
}

fn grid_value(object: &ScriptObject, grid: &Grid) -> Result<u32> {
    let mut best = 0;
    for q in grid.points(object.ring().nvars())? {
        best = best.max(object.value_at(&q)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn script(text: &str) -> BlowupScript {
        BlowupScript::from_json(text).unwrap()
    }

    #[test]
    fn whitney_line_blow_up() {
        let s = script(
            r#"{"object": {"base": "Q[x,y]", "entries": [{"var": "X1", "poly": "X1^2 - x^2*y"}]},
                "steps": [{"chart": [], "center": {"vars": ["x"]}}]}"#,
        );
        let r = run_script(&s).unwrap();
        assert_eq!(r.indicators, vec![2, 1]);
        assert!(r.passed());
        let leaf = &r.summary["leaves"][0]["object"];
        assert_eq!(leaf["nfold_present"], json!(false));
        assert_eq!(leaf["presentation"]["entries"][0]["poly"], json!("X1'^2 - y"));
    }

    #[test]
    fn cusp_rees_point_blow_up() {
        let s = script(
            r#"{"object": {"ring": "Q[x,z]", "generators": [{"poly": "z^2 - x^3", "weight": 2}]},
                "steps": [{"chart": [], "center": {"vars": ["x", "z"], "shift": [0, 0]}}]}"#,
        );
        let r = run_script(&s).unwrap();
        assert_eq!(r.indicators, vec![1, 0]);
        assert_eq!(r.summary["leaves"].as_array().unwrap().len(), 2);
        for leaf in r.summary["leaves"].as_array().unwrap() {
            assert_eq!(leaf["object"]["sing_present"], json!(false));
        }
    }

    #[test]
    fn empty_script_and_errors() {
        let r = run_script(&script(r#"{"object": {"ring": "Q[x]", "generators": [{"poly": "x^2", "weight": 2}]}, "steps": []}"#)).unwrap();
        assert_eq!(r.indicators, vec![1]);
        assert!(r.tree["children"].as_array().unwrap().is_empty());

        let bad_path = script(
            r#"{"object": {"ring": "Q[x,y]", "generators": [{"poly": "x^2", "weight": 2}]},
                "steps": [{"chart": ["y"], "center": {"vars": ["x", "y"]}}]}"#,
        );
        assert!(matches!(run_script(&bad_path), Err(Error::UnknownChart(_))));
        let bad_center = script(
            r#"{"object": {"ring": "Q[x,y]", "generators": [{"poly": "x^2 + y", "weight": 2}]},
                "steps": [{"chart": [], "center": {"vars": ["x", "y"]}}]}"#,
        );
        assert!(matches!(run_script(&bad_center), Err(Error::NotPermissible(_))));
    }

    #[test]
    fn reports_are_deterministic() {
        let text = r#"{"object": {"base": "Q[x]", "entries": [{"var": "X1", "poly": "X1^2 - x^4"}]},
                "steps": [{"center": {"vars": ["x"]}}, {"chart": ["x"], "center": {"vars": ["x"]}}]}"#;
        let a = run_script(&script(text)).unwrap();
        let b = run_script(&script(text)).unwrap();
        assert_eq!(a.indicators, vec![2, 2, 1]);
        assert_eq!(crate::json::canonical(&a.to_json()), crate::json::canonical(&b.to_json()));
    }
}
