//! Rees algebras `G = O[f_1 W^{n_1}, ..., f_s W^{n_s}]` on affine space.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blowup::{Center, Chart};
use crate::error::{Error, Result};
use crate::json::{ring_json, RingSpec};
use crate::poly::{parse, Polynomial, Ring, RingCtx};

/// Largest number of points a sampling grid may contain.
pub const MAX_GRID_POINTS: usize = 200_000;

/// A weighted generator `f W^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub poly: Polynomial,
    pub weight: u32,
}

impl Generator {
    pub fn new(poly: Polynomial, weight: u32) -> Self {
        Generator { poly, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesAlgebra {
    ring: Ring,
    generators: Vec<Generator>,
}

/// The closed set `V(generators)`; no generators means the whole space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingIdeal {
    pub ring: Ring,
    pub generators: Vec<Polynomial>,
}

impl SingIdeal {
    pub fn contains(&self, point: &[BigRational]) -> Result<bool> {
        for g in &self.generators {
            if !g.eval(point)?.is_zero() {
                return Ok(false);
            }
        }
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch { expected: self.ring.nvars(), got: point.len() });
        }
        Ok(true)
    }

    /// Contains a nonzero constant, so the set is empty.
    pub fn is_obviously_empty(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": ring_json(&self.ring),
            "generators": self.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

/// All partial derivatives of `f` of total order at most `max_order`,
/// `f` first, then by increasing order; zeros and repeats are dropped.
pub fn derivatives_up_to(f: &Polynomial, max_order: u32) -> Vec<Polynomial> {
    let nvars = f.ring().nvars();
    let mut out: Vec<Polynomial> = Vec::new();
    let mut level: Vec<(Polynomial, usize)> = vec![(f.clone(), 0)];
    for order in 0..=max_order {
        for (g, _) in &level {
            if !g.is_zero() && !out.contains(g) {
                out.push(g.clone());
            }
        }
        if order == max_order {
            break;
        }
        let mut next = Vec::new();
        for (g, from) in &level {
            for i in *from..nvars {
                let d = g.differentiate_at(i, 1);
                if !d.is_zero() {
                    next.push((d, i));
                }
            }
        }
        level = next;
    }
    out
}

impl ReesAlgebra {
    pub fn new(ring: &Ring, generators: Vec<Generator>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument("a Rees algebra needs at least one generator".into()));
        }
        for g in &generators {
            if g.poly.is_zero() {
                return Err(Error::ZeroPolynomial("Rees algebra generator".into()));
            }
            if g.weight == 0 {
                return Err(Error::InvalidArgument("generator weights must be at least 1".into()));
            }
            if g.poly.ring() != ring {
                return Err(Error::RingMismatch(format!("generator over {}, algebra over {ring}", g.poly.ring())));
            }
        }
        Ok(ReesAlgebra { ring: ring.clone(), generators })
    }

    /// Builds from `(expression, weight)` pairs.
    pub fn parse(ring: &Ring, generators: &[(&str, u32)]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|(s, w)| Ok(Generator::new(parse(s, ring)?, *w)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Differential generators of `Sing G`: every derivative of `f_i` of
    /// order below `n_i`. Characteristic zero only.
    pub fn sing_generators(&self) -> Result<SingIdeal> {
        if self.ring.characteristic() != 0 {
            return Err(Error::Characteristic {
                characteristic: self.ring.characteristic(),
                reason: "the differential Sing criterion needs characteristic 0; use contains_point".into(),
            });
        }
        let mut generators: Vec<Polynomial> = Vec::new();
        for g in &self.generators {
            for d in derivatives_up_to(&g.poly, g.weight - 1) {
                if !generators.contains(&d) {
                    generators.push(d);
                }
            }
        }
        Ok(SingIdeal { ring: self.ring.clone(), generators })
    }

    /// `ord_p(f_i) >= n_i` for every generator.
    pub fn contains_point(&self, point: &[BigRational]) -> Result<bool> {
        for g in &self.generators {
            if !g.poly.order_at_point(point)?.at_least(g.weight) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `min ord_p(f_i) / n_i`, defined on `Sing G`.
    pub fn ord_at(&self, point: &[BigRational]) -> Result<BigRational> {
        if !self.contains_point(point)? {
            return Err(Error::NotInSing);
        }
        let mut best: Option<BigRational> = None;
        for g in &self.generators {
            let nu = g.poly.order_at_point(point)?.finite().expect("generators are nonzero");
            let q = BigRational::new(BigInt::from(nu), BigInt::from(g.weight));
            if best.as_ref().is_none_or(|b| q < *b) {
                best = Some(q);
            }
        }
        Ok(best.expect("at least one generator"))
    }

    /// The generic point of the center lies in `Sing G`.
    pub fn is_permissible(&self, center: &Center) -> Result<bool> {
        center.indices(&self.ring)?;
        for g in &self.generators {
            if !center.order_of(&g.poly)?.at_least(g.weight) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First generator failing permissibility, for diagnostics.
    pub fn permissibility_failure(&self, center: &Center) -> Result<Option<String>> {
        for g in &self.generators {
            let nu = center.order_of(&g.poly)?;
            if !nu.at_least(g.weight) {
                return Ok(Some(format!("({})W^{} has order {nu} < {} along {:?}", g.poly, g.weight, g.weight, center.vars)));
            }
        }
        Ok(None)
    }

    /// Weighted transform: pull back through the chart and divide each
    /// `f_i` by the `n_i`-th power of the new exceptional variable.
    pub fn transform(&self, chart: &Chart) -> Result<ReesAlgebra> {
        let center = chart
            .center
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("root chart has no center".into()))?;
        if chart.parent_ring != self.ring {
            return Err(Error::RingMismatch(format!("algebra over {}, chart parent is {}", self.ring, chart.parent_ring)));
        }
        if let Some(why) = self.permissibility_failure(center)? {
            return Err(Error::NotPermissible(why));
        }
        let t = chart.pivot.expect("non-root chart has a pivot");
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let total = chart.total_transform(&g.poly)?;
                let poly = total.divide_by_var_power(t, g.weight).ok_or_else(|| {
                    Error::Invariant(format!("weighted transform of {} is not divisible", g.poly))
                })?;
                Ok(Generator::new(poly, g.weight))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&chart.ring, generators)
    }

    /// Pull-back to `ring x A^k`.
    pub fn extend_affine<S: AsRef<str>>(&self, new_vars: &[S]) -> Result<ReesAlgebra> {
        let ring = self.ring.extend(new_vars)?;
        let generators = self
            .generators
            .iter()
            .map(|g| Ok(Generator::new(g.poly.to_ring(&ring)?, g.weight)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&ring, generators)
    }

    /// Same generators with coefficients reduced modulo `p`.
    pub fn reduce_mod(&self, p: u32) -> Result<ReesAlgebra> {
        let target = RingCtx::new(self.ring.variables(), p)?;
        let generators = self
            .generators
            .iter()
            .map(|g| Ok(Generator::new(g.poly.reduce_mod(&target)?, g.weight)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&target, generators)
    }

    /// Grid points lying in `Sing G`.
    pub fn sing_on_grid(&self, grid: &Grid) -> Result<Vec<Vec<BigRational>>> {
        let mut out = Vec::new();
        for p in grid.points(self.ring.nvars())? {
            if self.contains_point(&p)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": ring_json(&self.ring),
            "generators": self
                .generators
                .iter()
                .map(|g| json!({"poly": g.poly.to_string(), "weight": g.weight}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self> {
        let ring = spec.ring.to_ring()?;
        let gens = spec
            .generators
            .iter()
            .map(|g| Ok(Generator::new(parse(&g.poly, &ring)?, g.weight)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&ring, gens)
    }
}

impl fmt::Display for ReesAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| format!("({})W^{}", g.poly, g.weight)).collect();
        write!(f, "[{}] over {}", parts.join(", "), self.ring)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub poly: String,
    pub weight: u32,
}

/// `{"ring": ..., "generators": [{"poly": ..., "weight": ...}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub ring: RingSpec,
    pub generators: Vec<GeneratorSpec>,
}

/// Sampling grid for pointwise comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    /// Integer points of `[lo, hi]^dim`.
    Box { lo: i64, hi: i64 },
    /// All of `F_p^dim`, after reducing coefficients mod `p`.
    FiniteField { p: u32 },
}

impl Default for Grid {
    fn default() -> Self {
        Grid::Box { lo: -2, hi: 2 }
    }
}

impl Grid {
    fn values(&self) -> Vec<BigRational> {
        let (lo, hi) = match *self {
            Grid::Box { lo, hi } => (lo, hi),
            Grid::FiniteField { p } => (0, i64::from(p) - 1),
        };
        (lo..=hi).map(crate::poly::rat).collect()
    }

    pub fn size(&self, dim: usize) -> Option<usize> {
        self.values().len().checked_pow(dim as u32)
    }

    pub fn points(&self, dim: usize) -> Result<Vec<Vec<BigRational>>> {
        match self.size(dim) {
            Some(n) if n <= MAX_GRID_POINTS => {}
            _ => return Err(Error::InvalidArgument(format!("grid too large in dimension {dim}"))),
        }
        let values = self.values();
        let mut points = vec![Vec::with_capacity(dim)];
        for _ in 0..dim {
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }
}

/// `Sing G1` and `Sing G2` agree at every grid point.
pub fn sing_equal_on_samples(g1: &ReesAlgebra, g2: &ReesAlgebra, grid: &Grid) -> Result<bool> {
    if g1.ring != g2.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", g1.ring, g2.ring)));
    }
    let (a, b) = match grid {
        Grid::FiniteField { p } => (g1.reduce_mod(*p)?, g2.reduce_mod(*p)?),
        Grid::Box { .. } => (g1.clone(), g2.clone()),
    };
    for p in grid.points(g1.ring.nvars())? {
        if a.contains_point(&p)? != b.contains_point(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::make_charts;
    use crate::poly::{rat, ratio};

    fn pt(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&v| rat(v)).collect()
    }

    fn whitney() -> ReesAlgebra {
        let r = RingCtx::parse("Q[x,y,z]").unwrap();
        ReesAlgebra::parse(&r, &[("z^2 - x^2*y", 2)]).unwrap()
    }

    #[test]
    fn sing_generators_examples() {
        let g = whitney();
        let s = g.sing_generators().unwrap();
        let got: Vec<String> = s.generators.iter().map(ToString::to_string).collect();
        assert_eq!(got, ["-x^2*y + z^2", "-2*x*y", "-x^2", "2*z"]);
        for p in Grid::default().points(3).unwrap() {
            let on_line = p[0].is_zero() && p[2].is_zero();
            assert_eq!(s.contains(&p).unwrap(), on_line);
            assert_eq!(g.contains_point(&p).unwrap(), on_line);
        }

        let r = RingCtx::parse("Q[x,y]").unwrap();
        let g = ReesAlgebra::parse(&r, &[("x", 1)]).unwrap();
        assert_eq!(g.sing_generators().unwrap().generators, vec![parse("x", &r).unwrap()]);

        let r = RingCtx::parse("Q[x,z]").unwrap();
        let g = ReesAlgebra::parse(&r, &[("z^2 - x^3", 2)]).unwrap();
        let got: Vec<String> = g.sing_generators().unwrap().generators.iter().map(ToString::to_string).collect();
        assert_eq!(got, ["-x^3 + z^2", "-3*x^2", "2*z"]);

        let f7 = RingCtx::parse("F7[x]").unwrap();
        let g = ReesAlgebra::parse(&f7, &[("x^2", 2)]).unwrap();
        assert!(matches!(g.sing_generators(), Err(Error::Characteristic { .. })));
        assert!(g.contains_point(&pt(&[0])).unwrap());
    }

    #[test]
    fn membership_and_ord() {
        let g = whitney();
        assert!(g.contains_point(&pt(&[0, 5, 0])).unwrap());
        assert!(!g.contains_point(&pt(&[1, 1, 1])).unwrap());
        assert!(!g.contains_point(&pt(&[1, 0, 0])).unwrap());
        assert!(g.contains_point(&pt(&[0, 0])).is_err());

        let r = RingCtx::parse("Q[x,y]").unwrap();
        let g = ReesAlgebra::parse(&r, &[("x^2*y", 2)]).unwrap();
        assert_eq!(g.ord_at(&pt(&[0, 0])).unwrap(), ratio(3, 2));
        let g = ReesAlgebra::parse(&r, &[("x", 1), ("y^3", 2)]).unwrap();
        assert_eq!(g.ord_at(&pt(&[0, 0])).unwrap(), rat(1));
        assert_eq!(g.ord_at(&pt(&[1, 0])), Err(Error::NotInSing));
        let r = RingCtx::parse("Q[x,z]").unwrap();
        let g = ReesAlgebra::parse(&r, &[("z^2 - x^3", 2)]).unwrap();
        assert_eq!(g.ord_at(&pt(&[0, 0])).unwrap(), rat(1));
    }

    #[test]
    fn permissibility() {
        let g = whitney();
        assert!(g.is_permissible(&Center::new(&["x", "z"])).unwrap());
        assert!(!g.is_permissible(&Center::new(&["z"])).unwrap());
        assert!(g.is_permissible(&Center::shifted(&["x", "z"], vec![rat(0), rat(0)])).unwrap());
        assert!(!g.is_permissible(&Center::shifted(&["x", "z"], vec![rat(1), rat(0)])).unwrap());
        assert!(g.is_permissible(&Center::new(&["q"])).is_err());
        let r = RingCtx::parse("Q[x,z]").unwrap();
        let g = ReesAlgebra::parse(&r, &[("z^2 - x^3", 2)]).unwrap();
        assert!(g.is_permissible(&Center::new(&["x", "z"])).unwrap());
    }

    #[test]
    fn transform_examples() {
        let r = RingCtx::parse("Q[x,z]").unwrap();
        let g = ReesAlgebra::parse(&r, &[("z^2 - x^3", 2)]).unwrap();
        let charts = make_charts(&r, &Center::new(&["x", "z"])).unwrap();
        let t = g.transform(&charts[0]).unwrap();
        assert_eq!(t.generators[0].poly, parse("z'^2 - x", &t.ring).unwrap());
        assert_eq!(t.generators[0].weight, 2);
        assert!(t.sing_on_grid(&Grid::default()).unwrap().is_empty());

        let g = whitney();
        let charts = make_charts(g.ring(), &Center::new(&["x", "z"])).unwrap();
        let t = g.transform(&charts[0]).unwrap();
        assert_eq!(t.generators[0].poly, parse("z'^2 - y", &t.ring).unwrap());
        let t = g.transform(&charts[1]).unwrap();
        assert_eq!(t.generators[0].poly, parse("1 - x'^2*y", &t.ring).unwrap());
        assert!(t.sing_on_grid(&Grid::default()).unwrap().is_empty());

        let charts = make_charts(g.ring(), &Center::new(&["y", "z"])).unwrap();
        assert!(matches!(g.transform(&charts[0]), Err(Error::NotPermissible(_))));
    }

    #[test]
    fn affine_extension() {
        let r = RingCtx::parse("Q[x]").unwrap();
        let g = ReesAlgebra::parse(&r, &[("x", 1)]).unwrap();
        let e = g.extend_affine(&["t"]).unwrap();
        assert_eq!(e.ring().variables(), ["x", "t"]);
        assert!(e.contains_point(&pt(&[0, 7])).unwrap());
        assert_eq!(g.extend_affine::<&str>(&[]).unwrap(), g);
        assert!(matches!(g.extend_affine(&["x"]), Err(Error::NameCollision(_))));
        let e = whitney().extend_affine(&["t"]).unwrap();
        assert!(e.contains_point(&pt(&[0, 3, 0, 9])).unwrap());
    }

    #[test]
    fn sampled_sing_comparison() {
        let r = RingCtx::parse("Q[x,y]").unwrap();
        let a = ReesAlgebra::parse(&r, &[("x", 1)]).unwrap();
        let b = ReesAlgebra::parse(&r, &[("x^2", 2)]).unwrap();
        let c = ReesAlgebra::parse(&r, &[("y", 1)]).unwrap();
        let grid = Grid::default();
        assert!(sing_equal_on_samples(&a, &a, &grid).unwrap());
        assert!(sing_equal_on_samples(&a, &b, &grid).unwrap());
        assert!(!sing_equal_on_samples(&a, &c, &grid).unwrap());
        assert!(sing_equal_on_samples(&a, &b, &Grid::FiniteField { p: 5 }).unwrap());
        let half = ReesAlgebra::parse(&r, &[("1/5*x", 1)]).unwrap();
        assert!(matches!(
            sing_equal_on_samples(&a, &half, &Grid::FiniteField { p: 5 }),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = whitney();
        let spec: AlgebraSpec = serde_json::from_value(g.to_json()).unwrap();
        assert_eq!(ReesAlgebra::from_spec(&spec).unwrap(), g);
        let spec: AlgebraSpec =
            serde_json::from_str(r#"{"ring":"Q[x]","generators":[{"poly":"x^2","weight":2}]}"#).unwrap();
        assert_eq!(ReesAlgebra::from_spec(&spec).unwrap().generators()[0].weight, 2);
    }
}
