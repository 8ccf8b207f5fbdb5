//! Affine charts of blow-ups of affine space along translated coordinate
//! subspaces.
//!
//! Blowing up `V(x_1 - c_1, ..., x_r - c_r)` gives one chart per pivot
//! `x_t`, with substitution `x_t -> x_t + c_t`, `x_j -> x_t * x_j' + c_j`
//! for the other center variables, and every other variable fixed. Charts are
//! never glued; an atlas is a tree keyed by pivot names.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{format_rational, Order, Polynomial, Ring, SubstitutionMap};

/// Blow-up center `V(x - c : x in vars)`. Shift coordinates are aligned with
/// `vars`; a missing shift means the coordinate subspace through the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Center {
    pub vars: Vec<String>,
    pub shift: Option<Vec<BigRational>>,
}

impl Center {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Self {
        Center { vars: vars.iter().map(|s| s.as_ref().to_string()).collect(), shift: None }
    }

    pub fn shifted<S: AsRef<str>>(vars: &[S], shift: Vec<BigRational>) -> Self {
        Center { vars: vars.iter().map(|s| s.as_ref().to_string()).collect(), shift: Some(shift) }
    }

    /// A blow-up along a hypersurface is an isomorphism.
    pub fn is_trivial(&self) -> bool {
        self.vars.len() == 1
    }

    /// Shift value of the `k`-th center variable.
    pub fn shift_at(&self, k: usize) -> BigRational {
        self.shift.as_ref().map_or_else(BigRational::zero, |s| s[k].clone())
    }

    /// Checks the center against `ring`, returning variable indices.
    pub fn indices(&self, ring: &Ring) -> Result<Vec<usize>> {
        if self.vars.is_empty() {
            return Err(Error::InvalidArgument("center needs at least one variable".into()));
        }
        if let Some(s) = &self.shift {
            if s.len() != self.vars.len() {
                return Err(Error::DimensionMismatch { expected: self.vars.len(), got: s.len() });
            }
        }
        let mut idx = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let i = ring.index_of(v)?;
            if idx.contains(&i) {
                return Err(Error::InvalidArgument(format!("repeated center variable `{v}`")));
            }
            idx.push(i);
        }
        Ok(idx)
    }

    /// Moves the center to the coordinate subspace through the origin:
    /// `x -> x + c` for each center variable.
    pub fn translate(&self, f: &Polynomial) -> Result<Polynomial> {
        let idx = self.indices(f.ring())?;
        let mut point = vec![BigRational::zero(); f.ring().nvars()];
        for (k, &i) in idx.iter().enumerate() {
            point[i] = self.shift_at(k);
        }
        f.translate_to_origin(&point)
    }

    /// Order of `f` at the generic point of the center.
    pub fn order_of(&self, f: &Polynomial) -> Result<Order> {
        let g = self.translate(f)?;
        g.order_along_coordinate_prime(&self.vars)
    }

    /// Full coordinate vector of the center point when it is a point
    /// (all variables listed), otherwise `None`.
    pub fn as_point(&self, ring: &Ring) -> Option<Vec<BigRational>> {
        let idx = self.indices(ring).ok()?;
        if idx.len() != ring.nvars() {
            return None;
        }
        let mut p = vec![BigRational::zero(); ring.nvars()];
        for (k, &i) in idx.iter().enumerate() {
            p[i] = self.shift_at(k);
        }
        Some(p)
    }
}

/// One exceptional hypersurface, tagged with the blow-up step that created it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalDivisor {
    pub step: usize,
    pub poly: Polynomial,
}

impl ExceptionalDivisor {
    /// True if the divisor is `a * v + b` for a single chart variable `v`.
    pub fn is_coordinate(&self) -> bool {
        let mut var = None;
        for (m, _) in self.poly.terms() {
            let e = m.exponents();
            match m.degree() {
                0 => {}
                1 => {
                    let i = e.iter().position(|&k| k == 1).unwrap();
                    if var.is_some_and(|v| v != i) {
                        return false;
                    }
                    var = Some(i);
                }
                _ => return false,
            }
        }
        var.is_some()
    }
}

/// One affine chart of an iterated blow-up.
#[derive(Debug, Clone)]
pub struct Chart {
    pub parent_ring: Ring,
    pub ring: Ring,
    /// Pivot names from the root down to this chart.
    pub path: Vec<String>,
    /// Center whose blow-up produced this chart (`None` at the root).
    pub center: Option<Center>,
    /// Pivot variable index in `ring` (same position as in `parent_ring`).
    pub pivot: Option<usize>,
    /// Parent variable -> polynomial in `ring`.
    pub substitution: SubstitutionMap,
    /// Root variable -> polynomial in `ring` (all substitutions composed).
    pub root_map: SubstitutionMap,
    pub exceptional: Vec<ExceptionalDivisor>,
    pub trivial: bool,
}

fn identity_map(ring: &Ring) -> SubstitutionMap {
    ring.variables()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), Polynomial::var_at(ring, i)))
        .collect()
}

impl Chart {
    /// The identity chart of `ring`.
    pub fn root(ring: &Ring) -> Chart {
        Chart {
            parent_ring: ring.clone(),
            ring: ring.clone(),
            path: Vec::new(),
            center: None,
            pivot: None,
            substitution: identity_map(ring),
            root_map: identity_map(ring),
            exceptional: Vec::new(),
            trivial: true,
        }
    }

    pub fn pivot_name(&self) -> Option<&str> {
        self.pivot.map(|i| self.ring.variables()[i].as_str())
    }

    /// The newest exceptional divisor (the pivot variable).
    pub fn newest_exceptional(&self) -> Option<&ExceptionalDivisor> {
        self.exceptional.last()
    }

    /// Blows up this chart along `center`, one child per center variable.
    /// `step` tags the new exceptional divisor.
    pub fn blow_up(&self, center: &Center, step: usize) -> Result<Vec<Chart>> {
        let idx = center.indices(&self.ring)?;
        let parent = &self.ring;
        let mut charts = Vec::with_capacity(idx.len());
        for &t in &idx {
            let mut names: Vec<String> = parent.variables().to_vec();
            let mut taken: Vec<String> = parent.variables().to_vec();
            for &j in &idx {
                if j != t {
                    let mut fresh = format!("{}'", names[j]);
                    while taken.contains(&fresh) {
                        fresh.push('\'');
                    }
                    taken.push(fresh.clone());
                    names[j] = fresh;
                }
            }
            let ring = parent.with_variables(&names)?;
            let pivot = Polynomial::var_at(&ring, t);
            let mut substitution = SubstitutionMap::new();
            for (i, v) in parent.variables().iter().enumerate() {
                let img = match idx.iter().position(|&j| j == i) {
                    Some(kk) => {
                        let c = Polynomial::constant(&ring, ring.reduce(&center.shift_at(kk))?);
                        if i == t {
                            &pivot + &c
                        } else {
                            &(&pivot * &Polynomial::var_at(&ring, i)) + &c
                        }
                    }
                    None => Polynomial::var_at(&ring, i),
                };
                substitution.insert(v.clone(), img);
            }
            let root_map = self
                .root_map
                .iter()
                .map(|(v, f)| Ok((v.clone(), f.substitute(&substitution, &ring)?)))
                .collect::<Result<SubstitutionMap>>()?;
            let mut exceptional = Vec::with_capacity(self.exceptional.len() + 1);
            for e in &self.exceptional {
                let nu = center.order_of(&e.poly)?.finite().unwrap_or(0);
                let pulled = e.poly.substitute(&substitution, &ring)?;
                let strict = pulled
                    .divide_by_var_power(t, nu)
                    .ok_or_else(|| Error::Invariant("strict transform of a divisor".into()))?;
                if !strict.is_constant() {
                    exceptional.push(ExceptionalDivisor { step: e.step, poly: strict });
                }
            }
            exceptional.push(ExceptionalDivisor { step, poly: pivot.clone() });
            let mut path = self.path.clone();
            path.push(parent.variables()[t].clone());
            charts.push(Chart {
                parent_ring: parent.clone(),
                ring,
                path,
                center: Some(center.clone()),
                pivot: Some(t),
                substitution,
                root_map,
                exceptional,
                trivial: center.is_trivial(),
            });
        }
        Ok(charts)
    }

    /// Image of a parent polynomial under the chart substitution.
    pub fn total_transform(&self, f: &Polynomial) -> Result<Polynomial> {
        if *f.ring() != self.parent_ring {
            return Err(Error::RingMismatch(format!(
                "polynomial over {}, chart parent is {}",
                f.ring(),
                self.parent_ring
            )));
        }
        f.substitute(&self.substitution, &self.ring)
    }

    /// Image of a parent point: evaluates the substitution at a chart point.
    pub fn map_point(&self, point: &[BigRational]) -> Result<Vec<BigRational>> {
        self.parent_ring
            .variables()
            .iter()
            .map(|v| self.substitution[v].eval(point))
            .collect()
    }

    /// Pairwise normal crossings of the exceptional divisors at `point`:
    /// the divisors through the point have linearly independent gradients.
    pub fn normal_crossings_at(&self, point: &[BigRational]) -> Result<bool> {
        self.independent_gradients(point)
    }

    fn independent_gradients(&self, point: &[BigRational]) -> Result<bool> {
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for e in &self.exceptional {
            if !e.poly.eval(point)?.is_zero() {
                continue;
            }
            let grad = (0..self.ring.nvars())
                .map(|i| e.poly.differentiate_at(i, 1).eval(point))
                .collect::<Result<Vec<_>>>()?;
            rows.push(grad);
        }
        let n = rows.len();
        Ok(rank(rows) == n)
    }

    /// Chart-tree node JSON without children.
    pub fn to_json(&self) -> Value {
        let substitution: BTreeMap<&String, String> =
            self.substitution.iter().map(|(k, v)| (k, v.to_string())).collect();
        let exceptional: Vec<Value> = self
            .exceptional
            .iter()
            .map(|e| json!({"step": e.step, "poly": e.poly.to_string()}))
            .collect();
        json!({
            "pivot": self.path.last().cloned().unwrap_or_default(),
            "path": self.path,
            "ring": self.ring.to_string(),
            "substitution": substitution,
            "exceptional": exceptional,
            "trivial": self.trivial,
        })
    }
}

/// Rank of a rational matrix by Gaussian elimination.
fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Charts of the blow-up of `ring` along `center`.
pub fn make_charts(ring: &Ring, center: &Center) -> Result<Vec<Chart>> {
    Chart::root(ring).blow_up(center, 1)
}

/// Strict transform of a monic polynomial `Z^s + c_1 Z^{s-1} + ... + c_s`
/// given by its coefficients `c_1..c_s` over the chart's parent ring:
/// returns `c_j / x_t^j` pushed into the chart, after checking that each
/// `c_j` has order at least `j` along the center.
pub fn strict_transform_coefficients(
    coefficients: &[Polynomial],
    chart: &Chart,
) -> Result<Vec<Polynomial>> {
    let center = chart
        .center
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("root chart has no center".into()))?;
    let t = chart.pivot.expect("non-root chart has a pivot");
    for (k, c) in coefficients.iter().enumerate() {
        let j = k as u32 + 1;
        if !center.order_of(c)?.at_least(j) {
            return Err(Error::NotPermissible(format!(
                "center not permissible for this hypersurface: coefficient {j} ({c}) has order {} < {j} along {:?}",
                center.order_of(c)?,
                center.vars
            )));
        }
    }
    coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let j = k as u32 + 1;
            chart.total_transform(c)?.divide_by_var_power(t, j).ok_or_else(|| {
                Error::Invariant(format!("x_t^{j} does not divide the transform of {c}"))
            })
        })
        .collect()
}

/// Serializable center, as used in script files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterSpec {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<Coordinate>>,
}

/// A coordinate in JSON: either an integer or a rational string like `"1/2"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Int(i64),
    Text(String),
}

impl Coordinate {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Coordinate::Int(n) => Ok(crate::poly::rat(*n)),
            Coordinate::Text(s) => crate::poly::parse_rational(s),
        }
    }

    pub fn from_rational(c: &BigRational) -> Self {
        use num_traits::ToPrimitive;
        match (c.is_integer(), c.numer().to_i64()) {
            (true, Some(n)) => Coordinate::Int(n),
            _ => Coordinate::Text(format_rational(c)),
        }
    }
}

impl CenterSpec {
    pub fn to_center(&self) -> Result<Center> {
        let shift = match &self.shift {
            None => None,
            Some(s) => Some(s.iter().map(Coordinate::to_rational).collect::<Result<Vec<_>>>()?),
        };
        Ok(Center { vars: self.vars.clone(), shift })
    }

    pub fn from_center(c: &Center) -> Self {
        CenterSpec {
            vars: c.vars.clone(),
            shift: c.shift.as_ref().map(|s| s.iter().map(Coordinate::from_rational).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, rat, RingCtx};

    fn chart_for<'a>(charts: &'a [Chart], pivot: &str) -> &'a Chart {
        charts.iter().find(|c| c.pivot_name() == Some(pivot)).unwrap()
    }

    #[test]
    fn line_center_in_three_space() {
        let r = RingCtx::parse("Q[x1,x2,x3]").unwrap();
        let charts = make_charts(&r, &Center::new(&["x1", "x2"])).unwrap();
        assert_eq!(charts.len(), 2);
        let c = chart_for(&charts, "x1");
        assert_eq!(c.ring.variables(), ["x1", "x2'", "x3"]);
        assert_eq!(c.substitution["x2"].to_string(), "x1*x2'");
        assert_eq!(c.substitution["x1"].to_string(), "x1");
        assert_eq!(c.substitution["x3"].to_string(), "x3");
        assert_eq!(c.exceptional.len(), 1);
        assert_eq!(c.exceptional[0].poly.to_string(), "x1");
        assert!(!c.trivial);
    }

    #[test]
    fn shifted_center_matches_translate_then_blow_up() {
        let r = RingCtx::parse("Q[x,z]").unwrap();
        let f = parse("z^2 - x^3 + 3*x^2 - 3*x + 1", &r).unwrap();
        let shifted = make_charts(&r, &Center::shifted(&["x", "z"], vec![rat(1), rat(0)])).unwrap();
        let g = f.translate_to_origin(&[rat(1), rat(0)]).unwrap();
        let plain = make_charts(&r, &Center::new(&["x", "z"])).unwrap();
        for (a, b) in shifted.iter().zip(&plain) {
            assert_eq!(a.total_transform(&f).unwrap(), b.total_transform(&g).unwrap());
        }
        let xc = chart_for(&shifted, "x");
        assert_eq!(xc.substitution["x"].to_string(), "x + 1");
    }

    #[test]
    fn hypersurface_center_is_identity() {
        let r = RingCtx::parse("Q[x,y]").unwrap();
        let charts = make_charts(&r, &Center::new(&["x"])).unwrap();
        assert_eq!(charts.len(), 1);
        assert!(charts[0].trivial);
        assert_eq!(charts[0].ring, r);
        let f = parse("x^2*y + 1", &r).unwrap();
        assert_eq!(charts[0].total_transform(&f).unwrap(), f);
        assert!(make_charts(&r, &Center::new::<&str>(&[])).is_err());
        assert!(make_charts(&r, &Center::new(&["w"])).is_err());
    }

    #[test]
    fn total_transform_examples() {
        let r = RingCtx::parse("Q[x,z]").unwrap();
        let charts = make_charts(&r, &Center::new(&["x", "z"])).unwrap();
        let f = parse("z^2 - x^3", &r).unwrap();
        let xc = chart_for(&charts, "x");
        assert_eq!(xc.total_transform(&f).unwrap(), parse("x^2*z'^2 - x^3", &xc.ring).unwrap());
        let c = parse("5", &r).unwrap();
        assert_eq!(xc.total_transform(&c).unwrap().to_string(), "5");

        let r = RingCtx::parse("Q[x,y,z]").unwrap();
        let charts = make_charts(&r, &Center::new(&["x", "z"])).unwrap();
        let zc = chart_for(&charts, "z");
        let f = parse("z^2 - x^2*y", &r).unwrap();
        assert_eq!(zc.total_transform(&f).unwrap(), parse("z^2 - x'^2*z^2*y", &zc.ring).unwrap());
        let other = RingCtx::parse("Q[a]").unwrap();
        assert!(zc.total_transform(&parse("a", &other).unwrap()).is_err());
    }

    #[test]
    fn root_map_composes_substitutions() {
        let r = RingCtx::parse("Q[x,y]").unwrap();
        let first = make_charts(&r, &Center::new(&["x", "y"])).unwrap();
        let xc = chart_for(&first, "x");
        let second = xc.blow_up(&Center::new(&["x", "y'"]), 2).unwrap();
        let f = parse("y^2 - x^4 + x*y", &r).unwrap();
        for c in &second {
            let stepwise = c.total_transform(&xc.total_transform(&f).unwrap()).unwrap();
            assert_eq!(f.substitute(&c.root_map, &c.ring).unwrap(), stepwise);
            assert!(c.exceptional.iter().all(ExceptionalDivisor::is_coordinate));
        }
        // The strict transform of the first divisor misses the x-chart.
        assert_eq!(chart_for(&second, "x").exceptional.len(), 1);
        let yc = chart_for(&second, "y'");
        assert_eq!(yc.path, ["x", "y'"]);
        assert_eq!(yc.exceptional[0].poly.to_string(), "x'");
        assert_eq!(yc.exceptional[1].poly.to_string(), "y'");
    }

    #[test]
    fn strict_transform_needs_order() {
        let r = RingCtx::parse("Q[x]").unwrap();
        let charts = make_charts(&r, &Center::new(&["x"])).unwrap();
        let c = vec![parse("0", &r).unwrap(), parse("x", &r).unwrap()];
        let err = strict_transform_coefficients(&c, &charts[0]).unwrap_err();
        assert!(err.to_string().contains("center not permissible for this hypersurface"));
    }

    #[test]
    fn center_spec_round_trip() {
        let spec: CenterSpec = serde_json::from_str(r#"{"vars":["x","y"],"shift":[0,"1/2"]}"#).unwrap();
        let c = spec.to_center().unwrap();
        assert_eq!(c.shift_at(1), crate::poly::ratio(1, 2));
        assert_eq!(CenterSpec::from_center(&c), spec);
    }
}
