use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use super::{tree_json, RunReport, Verdict};
use crate::blowup::{Center, CenterSpec, Chart, ExceptionalDivisor};
use crate::error::{Error, Result};
use crate::poly::univariate::UniPoly;
use crate::poly::{format_rational, resultant, Polynomial};
use crate::rees::Grid;

pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveOutcome {
    AlreadySmooth,
    Resolved,
    /// Some singular point may have irrational coordinates.
    Unresolvable(String),
}

impl CurveOutcome {
    fn label(&self) -> &'static str {
        match self {
            CurveOutcome::AlreadySmooth => "already smooth",
            CurveOutcome::Resolved => "resolved",
            CurveOutcome::Unresolvable(_) => "unresolvable over Q",
        }
    }
}

/// Resolution of a plane curve: the report plus the multiplicity sequence
/// of every singular point of the input, in increasing point order.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveResolution {
    pub outcome: CurveOutcome,
    pub blowups: usize,
    pub sequences: Vec<(Vec<BigRational>, Vec<u32>)>,
    pub report: RunReport,
}

/// Rational singular points of a plane curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularSolve {
    pub points: Vec<Vec<BigRational>>,
    /// Set when some candidate has irrational coordinates.
    pub irrational: Option<String>,
}

fn univariate(f: &Polynomial, idx: usize) -> UniPoly {
    UniPoly::from_polynomial(f, idx).expect("resultant eliminates the other variable")
}

/// `f(x0, y)` for `idx = 0`, as a polynomial in `y`.
fn specialize(f: &Polynomial, x0: &BigRational) -> Result<UniPoly> {
    let mut coeffs = Vec::new();
    for c in f.coefficients_at(1) {
        coeffs.push(c.eval(&[x0.clone(), BigRational::zero()])?);
    }
    Ok(UniPoly::new(coeffs))
}

/// Degree of `u` left after removing its rational roots (counted once).
fn irrational_part(u: &UniPoly) -> Result<Option<UniPoly>> {
    if u.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    let mut rest = u.div_rem(&u.gcd(&u.derivative())).0;
    for r in rest.rational_roots()? {
        rest = rest.div_rem(&UniPoly::linear_root(&r)).0;
    }
    Ok((rest.degree().unwrap_or(0) > 0).then_some(rest))
}

/// Square-free check for a plane curve: a repeated factor involving `y`
/// kills `Res_y(f, f_y)`; a repeated factor in `x` alone shows up in the
/// content.
pub fn check_square_free(f: &Polynomial) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("plane curve".into()));
    }
    let y = 1;
    if !f.involves(y) {
        return if univariate(f, 0).is_square_free() { Ok(()) } else { Err(Error::NotSquareFree) };
    }
    let content = f
        .coefficients_at(y)
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| univariate(c, 0))
        .fold(UniPoly::zero(), |acc, c| acc.gcd(&c));
    if !content.is_square_free() {
        return Err(Error::NotSquareFree);
    }
    let name = f.ring().variables()[y].clone();
    if resultant(f, &f.differentiate_at(y, 1), &name)?.is_zero() {
        return Err(Error::NotSquareFree);
    }
    Ok(())
}

/// Rational common zeros of `f`, `f_x`, `f_y`, by resultants in `y`.
pub fn singular_points(f: &Polynomial) -> Result<SingularSolve> {
    let ring = f.ring();
    if ring.nvars() != 2 || ring.characteristic() != 0 {
        return Err(Error::InvalidArgument(format!("plane curves live in Q[x,y], got {ring}")));
    }
    let none = SingularSolve { points: Vec::new(), irrational: None };
    if f.is_constant() {
        return Ok(none);
    }
    check_square_free(f)?;
    let fx = f.differentiate_at(0, 1);
    let fy = f.differentiate_at(1, 1);
    // A square-free curve in one variable is a union of smooth parallel lines.
    if fx.is_zero() || fy.is_zero() {
        return Ok(none);
    }
    let y = ring.variables()[1].clone();
    let r1 = univariate(&resultant(f, &fy, &y)?, 0);
    let r2 = univariate(&resultant(f, &fx, &y)?, 0);
    let cand = if r2.is_zero() { r1 } else { r1.gcd(&r2) };
    let mut out = SingularSolve { points: Vec::new(), irrational: None };
    if let Some(q) = irrational_part(&cand)? {
        out.irrational = Some(format!("x-candidates {q:?}"));
    }
    if cand.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    for x0 in cand.rational_roots()? {
        let h = specialize(f, &x0)?.gcd(&specialize(&fx, &x0)?).gcd(&specialize(&fy, &x0)?);
        if h.is_zero() {
            return Err(Error::NotSquareFree);
        }
        if h.degree().unwrap_or(0) == 0 {
            continue;
        }
        for y0 in h.rational_roots()? {
            out.points.push(vec![x0.clone(), y0]);
        }
        if let Some(q) = irrational_part(&h)? {
            out.irrational = Some(format!("x = {}, y-candidates {q:?}", format_rational(&x0)));
        }
    }
    out.points.sort();
    Ok(out)
}

struct Node {
    chart: Chart,
    curve: Polynomial,
    /// The node is responsible only for points where all of these vanish.
    region: Vec<Polynomial>,
    children: Vec<usize>,
    sing: Option<Vec<(Vec<BigRational>, u32)>>,
    blown: bool,
}

struct Record {
    path: Vec<String>,
    point: Vec<BigRational>,
    root_point: Vec<BigRational>,
    multiplicity: u32,
    parent: Option<usize>,
    children: Vec<usize>,
}

fn point_json(p: &[BigRational]) -> Value {
    p.iter().map(format_rational).collect::<Vec<_>>().into()
}

fn divisor_json(e: &ExceptionalDivisor) -> Value {
    json!({"step": e.step, "poly": e.poly.to_string(), "coordinate": e.is_coordinate()})
}

pub fn resolve_plane_curve(f: &Polynomial) -> Result<CurveResolution> {
    resolve_plane_curve_with_budget(f, DEFAULT_BUDGET)
}

/// Resolves a square-free plane curve by blowing up, at each step, the
/// lexicographically smallest singular point of maximal multiplicity
/// (ordered by its image in the original plane, then by chart path).
pub fn resolve_plane_curve_with_budget(f: &Polynomial, budget: usize) -> Result<CurveResolution> {
    if f.ring().nvars() != 2 || f.ring().characteristic() != 0 {
        return Err(Error::InvalidArgument(format!("plane curves live in Q[x,y], got {}", f.ring())));
    }
    check_square_free(f)?;
    let mut nodes = vec![Node {
        chart: Chart::root(f.ring()),
        curve: f.clone(),
        region: Vec::new(),
        children: Vec::new(),
        sing: None,
        blown: false,
    }];
    let mut records: Vec<Record> = Vec::new();
    let mut outcome = None;
    loop {
        for n in nodes.iter_mut().filter(|n| !n.blown && n.sing.is_none()) {
            let solve = singular_points(&n.curve)?;
            if let Some(msg) = solve.irrational {
                outcome = Some(CurveOutcome::Unresolvable(format!("chart {:?}: {msg}", n.chart.path)));
                break;
            }
            let mut pts = Vec::new();
            for p in solve.points {
                let mut inside = true;
                for r in &n.region {
                    inside &= r.eval(&p)?.is_zero();
                }
                if inside {
                    let m = n.curve.order_at_point(&p)?.finite().expect("nonzero curve");
                    pts.push((p, m));
                }
            }
            n.sing = Some(pts);
        }
        if outcome.is_some() {
            break;
        }
        // (multiplicity, image in the original plane, chart path, node, point)
        type Candidate = (u32, Vec<BigRational>, Vec<String>, usize, Vec<BigRational>);
        let mut best: Option<Candidate> = None;
        for (i, n) in nodes.iter().enumerate().filter(|(_, n)| !n.blown) {
            for (p, m) in n.sing.as_ref().expect("computed above") {
                let root = f
                    .ring()
                    .variables()
                    .iter()
                    .map(|v| n.chart.root_map[v].eval(p))
                    .collect::<Result<Vec<_>>>()?;
                let better = match &best {
                    None => true,
                    Some((bm, broot, bpath, _, _)) => {
                        m > bm || (m == bm && (&root, &n.chart.path) < (broot, bpath))
                    }
                };
                if better {
                    best = Some((*m, root, n.chart.path.clone(), i, p.clone()));
                }
            }
        }
        let Some((mult, root_point, path, idx, point)) = best else {
            break;
        };
        if records.len() >= budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let step = records.len() + 1;
        let parent = nodes[idx]
            .chart
            .exceptional
            .iter()
            .filter(|e| e.poly.eval(&point).is_ok_and(|v| v.is_zero()))
            .map(|e| e.step)
            .max()
            .map(|s| s - 1);
        if let Some(p) = parent {
            if mult > records[p].multiplicity {
                return Err(Error::Invariant(format!(
                    "infinitely near point of multiplicity {mult} above a point of multiplicity {}",
                    records[p].multiplicity
                )));
            }
            let id = records.len();
            records[p].children.push(id);
        }
        records.push(Record { path: path.clone(), point: point.clone(), root_point, multiplicity: mult, parent, children: Vec::new() });

        let vars = nodes[idx].chart.ring.variables().to_vec();
        let center = Center::shifted(&vars, point.clone());
        let charts = nodes[idx].chart.blow_up(&center, step)?;
        nodes[idx].blown = true;
        for chart in charts {
            let t = chart.pivot.expect("blown-up chart has a pivot");
            let total = chart.total_transform(&nodes[idx].curve)?;
            let curve = total.divide_by_var_power(t, mult).ok_or_else(|| {
                Error::Invariant(format!("strict transform of {} is not divisible by the exceptional power", nodes[idx].curve))
            })?;
            let mut region = nodes[idx]
                .region
                .iter()
                .map(|r| chart.total_transform(r))
                .collect::<Result<Vec<_>>>()?;
            if t != 0 {
                region.push(Polynomial::var_at(&chart.ring, 0));
            }
            nodes.push(Node { chart, curve, region, children: Vec::new(), sing: None, blown: false });
            let child = nodes.len() - 1;
            nodes[idx].children.push(child);
        }
    }

    let outcome = outcome.unwrap_or(if records.is_empty() { CurveOutcome::AlreadySmooth } else { CurveOutcome::Resolved });
    let mut indicators: Vec<u32> = records.iter().map(|r| r.multiplicity).collect();
    if outcome != CurveOutcome::AlreadySmooth || indicators.is_empty() {
        indicators.push(1);
    }
    if let Some(w) = indicators.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::Invariant(format!("multiplicity indicator increased at stage {}: {indicators:?}", w + 1)));
    }

    let mut sequences = Vec::new();
    let mut roots: Vec<usize> = (0..records.len()).filter(|&i| records[i].parent.is_none()).collect();
    roots.sort_by(|&a, &b| records[a].root_point.cmp(&records[b].root_point));
    for r in roots {
        let mut seq = Vec::new();
        let mut cur = Some(r);
        while let Some(i) = cur {
            seq.push(records[i].multiplicity);
            cur = records[i].children.iter().copied().max_by(|&a, &b| {
                records[a].multiplicity.cmp(&records[b].multiplicity).then(b.cmp(&a))
            });
        }
        seq.push(1);
        sequences.push((records[r].root_point.clone(), seq));
    }

    let grid = Grid::default();
    let mut leaves = Vec::new();
    let mut smooth = true;
    let mut crossings = true;
    for n in nodes.iter().filter(|n| !n.blown) {
        let remaining = n.sing.as_ref().map_or(0, Vec::len);
        smooth &= remaining == 0;
        let mut nc = true;
        for q in grid.points(2)? {
            nc &= n.chart.normal_crossings_at(&q)?;
        }
        crossings &= nc;
        leaves.push(json!({
            "path": n.chart.path,
            "ring": n.chart.ring.to_string(),
            "curve": n.curve.to_string(),
            "region": n.region.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "exceptional": n.chart.exceptional.iter().map(divisor_json).collect::<Vec<_>>(),
            "normal_crossings_on_grid": nc,
        }));
    }
    let resolved = !matches!(outcome, CurveOutcome::Unresolvable(_));
    let mut verdicts = vec![
        Verdict::new("square-free input", true, "content square-free and Res_y(f, f_y) != 0"),
        Verdict::new("indicator non-increasing", true, format!("{indicators:?}")),
        Verdict::new("normal crossings at leaves", crossings, "independent gradients at every grid point"),
    ];
    if resolved {
        verdicts.push(Verdict::new(
            "leaves smooth",
            smooth,
            "no rational singular point in any leaf region (resultant solve, no irrational candidates)",
        ));
    }

    let flat: Vec<(Value, Vec<usize>)> = nodes
        .iter()
        .map(|n| {
            let mut v = n.chart.to_json();
            v["curve"] = json!(n.curve.to_string());
            v["region"] = n.region.iter().map(ToString::to_string).collect::<Vec<_>>().into();
            v["exceptional"] = n.chart.exceptional.iter().map(divisor_json).collect::<Vec<_>>().into();
            if let Some(c) = &n.chart.center {
                v["center"] = serde_json::to_value(CenterSpec::from_center(c)).expect("center serializes");
            }
            (v, n.children.clone())
        })
        .collect();
    let summary = json!({
        "input": f.to_string(),
        "outcome": outcome.label(),
        "message": match &outcome { CurveOutcome::Unresolvable(m) => Value::from(m.clone()), _ => Value::Null },
        "blowups": records.len(),
        "sequences": sequences.iter().map(|(p, s)| json!({"point": point_json(p), "sequence": s})).collect::<Vec<_>>(),
        "infinitely_near": records.iter().enumerate().map(|(i, r)| json!({
            "id": i,
            "chart": r.path,
            "point": point_json(&r.point),
            "root_point": point_json(&r.root_point),
            "multiplicity": r.multiplicity,
            "parent": r.parent,
        })).collect::<Vec<_>>(),
        "leaves": leaves,
    });
    let report = RunReport { kind: "plane_curve", tree: tree_json(&flat, 0), indicators, verdicts, summary };
    Ok(CurveResolution { outcome, blowups: records.len(), sequences, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, rat, RingCtx};

    fn curve(s: &str) -> Polynomial {
        parse(s, &RingCtx::parse("Q[x,y]").unwrap()).unwrap()
    }

    fn seqs(r: &CurveResolution) -> Vec<Vec<u32>> {
        r.sequences.iter().map(|(_, s)| s.clone()).collect()
    }

    #[test]
    fn singular_points_by_resultants() {
        let s = singular_points(&curve("y^2 - x^3")).unwrap();
        assert_eq!(s.points, vec![vec![rat(0), rat(0)]]);
        let s = singular_points(&curve("y^2 - x^2*(x+1)")).unwrap();
        assert_eq!(s.points, vec![vec![rat(0), rat(0)]]);
        let s = singular_points(&curve("(y-1)^2 - (x-2)^3")).unwrap();
        assert_eq!(s.points, vec![vec![rat(2), rat(1)]]);
        assert!(singular_points(&curve("y - x^2")).unwrap().points.is_empty());
        let s = singular_points(&curve("y^2 - (x^2-2)^2*(x+5)")).unwrap();
        assert!(s.irrational.is_some());
        assert!(matches!(singular_points(&curve("(y - x)^2")), Err(Error::NotSquareFree)));
        assert!(matches!(check_square_free(&curve("x^2*(y+1)")), Err(Error::NotSquareFree)));
    }

    #[test]
    fn cusp_tacnode_node_e6() {
        let r = resolve_plane_curve(&curve("y^2 - x^3")).unwrap();
        assert_eq!((r.blowups, seqs(&r)), (1, vec![vec![2, 1]]));
        assert_eq!(r.report.indicators, vec![2, 1]);
        let r = resolve_plane_curve(&curve("y^2 - x^4")).unwrap();
        assert_eq!((r.blowups, seqs(&r)), (2, vec![vec![2, 2, 1]]));
        let r = resolve_plane_curve(&curve("y^2 - x^2*(x+1)")).unwrap();
        assert_eq!((r.blowups, seqs(&r)), (1, vec![vec![2, 1]]));
        let r = resolve_plane_curve(&curve("y^3 - x^4")).unwrap();
        assert_eq!((r.blowups, seqs(&r)), (1, vec![vec![3, 1]]));
        assert!(r.report.passed());
    }

    #[test]
    fn smooth_and_shifted() {
        let r = resolve_plane_curve(&curve("y - x^2")).unwrap();
        assert_eq!(r.outcome, CurveOutcome::AlreadySmooth);
        assert_eq!(r.blowups, 0);
        assert_eq!(r.report.summary["outcome"], json!("already smooth"));
        let r = resolve_plane_curve(&curve("(y-1)^2 - (x+1)^5")).unwrap();
        assert_eq!(r.sequences, vec![(vec![rat(-1), rat(1)], vec![2, 2, 1])]);
    }

    #[test]
    fn two_singular_points_in_order() {
        // Cusp at the origin, nodes where the line x = 1 meets it.
        let r = resolve_plane_curve(&curve("(y^2 - x^3)*(x - 1)")).unwrap();
        assert_eq!(seqs(&r), vec![vec![2, 1]; 3]);
        let pts: Vec<_> = r.sequences.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(pts, vec![vec![rat(0), rat(0)], vec![rat(1), rat(-1)], vec![rat(1), rat(1)]]);
        assert_eq!(r.report.indicators, vec![2, 2, 2, 1]);
        assert!(r.report.passed());
    }

    #[test]
    fn budget_and_errors() {
        assert!(matches!(resolve_plane_curve_with_budget(&curve("y^2 - x^4"), 1), Err(Error::BudgetExceeded(1))));
        assert!(matches!(resolve_plane_curve(&curve("0")), Err(Error::ZeroPolynomial(_))));
        let r3 = RingCtx::parse("Q[x,y,z]").unwrap();
        assert!(resolve_plane_curve(&parse("x", &r3).unwrap()).is_err());
        let r = resolve_plane_curve(&curve("y^2 - (x^2-2)^2*(x+5)")).unwrap();
        assert!(matches!(r.outcome, CurveOutcome::Unresolvable(_)));
    }
}
