//! Local presentations `B = S[X_1, ..., X_M] / (f_1(X_1), ..., f_M(X_M))`
//! of the maximal multiplicity locus.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blowup::{Center, Chart};
use crate::elimination::tschirnhaus;
use crate::error::{Error, Result};
use crate::json::{ring_json, RingSpec};
use crate::monic::{strict_transform_monic, MonicPoly};
use crate::poly::univariate::UniPoly;
use crate::poly::{format_rational, Order, Polynomial, Ring};
use crate::rees::{Generator, Grid, ReesAlgebra};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    base: Ring,
    entries: Vec<MonicPoly>,
}

/// `T = S[X_1..X_M]` with the Rees algebra `[f_i(X_i) W^{d_i}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationAlgebra {
    pub ambient: Ring,
    pub algebra: ReesAlgebra,
}

/// Per-factor result of [`Presentation::transversality_test`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTest {
    pub var: String,
    pub degree: usize,
    /// Tschirnhaus shift `a_1/d`.
    pub shift: Polynomial,
    /// Orders at the point of `b_2, ..., b_d`.
    pub orders: Vec<Order>,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversality {
    pub holds: bool,
    pub factors: Vec<FactorTest>,
    /// `(p, -shift_1(p), ..., -shift_M(p))`, the only candidate n-fold point above `p`.
    pub lifted: Vec<BigRational>,
}

impl Transversality {
    pub fn satisfied_count(&self) -> usize {
        self.factors.iter().filter(|f| f.satisfied).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "lifted_point": self.lifted.iter().map(format_rational).collect::<Vec<_>>(),
            "factors": self.factors.iter().map(|f| json!({
                "var": f.var,
                "degree": f.degree,
                "shift": f.shift.to_string(),
                "orders": f.orders,
                "satisfied": f.satisfied,
            })).collect::<Vec<_>>(),
        })
    }
}

impl Presentation {
    pub fn new(base: &Ring, entries: Vec<MonicPoly>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("a presentation needs at least one polynomial".into()));
        }
        let mut seen: Vec<&str> = Vec::new();
        for f in &entries {
            if f.base() != base {
                return Err(Error::RingMismatch(format!("entry over {}, base is {base}", f.base())));
            }
            if f.degree() < 2 {
                return Err(Error::InvalidArgument(format!("entry {f} has degree below 2")));
            }
            if base.contains(f.var()) || seen.contains(&f.var()) {
                return Err(Error::NameCollision(f.var().to_string()));
            }
            seen.push(f.var());
        }
        Ok(Presentation { base: base.clone(), entries })
    }

    /// Builds from `(variable, expression)` pairs.
    pub fn parse(base: &Ring, entries: &[(&str, &str)]) -> Result<Self> {
        let fs = entries
            .iter()
            .map(|(v, s)| MonicPoly::parse(s, v, base))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, fs)
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn entries(&self) -> &[MonicPoly] {
        &self.entries
    }

    /// Generic rank of the complete-intersection model, `prod d_i`.
    pub fn generic_rank(&self) -> usize {
        self.entries.iter().map(MonicPoly::degree).product()
    }

    pub fn ambient(&self) -> Ring {
        let vars: Vec<&str> = self.entries.iter().map(MonicPoly::var).collect();
        self.base.extend(&vars).expect("checked at construction")
    }

    pub fn attach_algebra(&self) -> Result<PresentationAlgebra> {
        let ambient = self.ambient();
        let generators = self
            .entries
            .iter()
            .map(|f| Ok(Generator::new(f.to_polynomial_in(&ambient)?, f.degree() as u32)))
            .collect::<Result<Vec<_>>>()?;
        let algebra = ReesAlgebra::new(&ambient, generators)?;
        Ok(PresentationAlgebra { ambient, algebra })
    }

    /// Each `f_i` in its Tschirnhaus coordinates `f_i(Z - a_1/d_i)`.
    pub fn witness_form(&self) -> Result<Vec<MonicPoly>> {
        self.entries
            .iter()
            .map(|f| Ok(tschirnhaus(f)?.reduced(f)))
            .collect()
    }

    /// Decides whether the point above `p` is `n`-fold: every reduced
    /// coefficient `b_j` of every factor has order at least `j` at `p`.
    pub fn transversality_test(&self, p: &[BigRational]) -> Result<Transversality> {
        if p.len() != self.base.nvars() {
            return Err(Error::DimensionMismatch { expected: self.base.nvars(), got: p.len() });
        }
        let mut factors = Vec::with_capacity(self.entries.len());
        let mut lifted = p.to_vec();
        for f in &self.entries {
            let t = tschirnhaus(f)?;
            let mut orders = Vec::with_capacity(f.degree() - 1);
            let mut satisfied = true;
            for j in 2..=f.degree() {
                let nu = t.b(j).order_at_point(p)?;
                satisfied &= nu.at_least(j as u32);
                orders.push(nu);
            }
            lifted.push(-t.shift.eval(p)?);
            factors.push(FactorTest { var: f.var().to_string(), degree: f.degree(), shift: t.shift, orders, satisfied });
        }
        let holds = factors.iter().all(|f| f.satisfied);
        Ok(Transversality { holds, factors, lifted })
    }

    /// Membership at the generic point of the center: `nu_center(b_j) >= j`
    /// for every factor.
    pub fn generic_member(&self, center: &Center) -> Result<bool> {
        for f in &self.entries {
            let t = tschirnhaus(f)?;
            for j in 2..=f.degree() {
                if !center.order_of(t.b(j))?.at_least(j as u32) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Strict transform of every factor in witness coordinates.
    pub fn transform(&self, chart: &Chart) -> Result<Presentation> {
        if chart.parent_ring != self.base {
            return Err(Error::RingMismatch(format!("presentation over {}, chart parent is {}", self.base, chart.parent_ring)));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for h in self.witness_form()? {
            let g = strict_transform_monic(&h, chart)?;
            let name = format!("{}'", h.var());
            let taken = chart.ring.contains(&name) || entries.iter().any(|e: &MonicPoly| e.var() == name);
            entries.push(if taken { g } else { g.with_var(&name)? });
        }
        Presentation::new(&chart.ring, entries)
    }

    /// Multiplicity indicator at a rational point `p` of `S`: the generic
    /// rank `prod d_i` if the point above `p` is n-fold, otherwise the
    /// product over factors of the largest order of `f_i` at a rational
    /// point of its fiber (0 when some fiber has no rational point).
    pub fn multiplicity_at(&self, p: &[BigRational]) -> Result<u32> {
        if self.transversality_test(p)?.holds {
            return Ok(self.generic_rank() as u32);
        }
        let mut product = 1;
        for f in &self.entries {
            let poly = f.to_polynomial();
            let z = self.base.nvars();
            let mut q = p.to_vec();
            q.push(BigRational::zero());
            let mut best = 0;
            for c in fiber_polynomial(&poly, p, z)?.rational_roots()? {
                q[z] = c;
                if let Some(k) = poly.order_at_point(&q)?.finite() {
                    best = best.max(k);
                }
            }
            product *= best;
        }
        Ok(product)
    }

    /// Largest [`multiplicity_at`](Self::multiplicity_at) over the grid.
    pub fn max_multiplicity_on_grid(&self, grid: &Grid) -> Result<u32> {
        let mut best = 0;
        for p in grid.points(self.base.nvars())? {
            best = best.max(self.multiplicity_at(&p)?);
        }
        Ok(best)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": ring_json(&self.base),
            "entries": self.entries.iter().map(|f| json!({
                "var": f.var(),
                "poly": f.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_spec(spec: &PresentationSpec) -> Result<Self> {
        let base = spec.base.to_ring()?;
        let entries = spec
            .entries
            .iter()
            .map(|e| MonicPoly::parse(&e.poly, &e.var, &base))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&base, entries)
    }
}

/// `f(p, Z)` as a univariate polynomial in `Z`.
fn fiber_polynomial(f: &Polynomial, p: &[BigRational], z: usize) -> Result<UniPoly> {
    let parts = f.coefficients_at(z);
    let mut coeffs = Vec::with_capacity(parts.len());
    for c in &parts {
        let mut q = p.to_vec();
        q.push(BigRational::zero());
        coeffs.push(c.eval(&q)?);
    }
    Ok(UniPoly::new(coeffs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySpec {
    pub var: String,
    pub poly: String,
}

/// `{"base": ..., "entries": [{"var": "X1", "poly": "X1^2 - x^2*y"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub base: RingSpec,
    pub entries: Vec<EntrySpec>,
}

/// Both sides of the multiplicity formula at a rational point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiReport {
    /// Generic rank of `S[Z]/(f)` over `S`.
    pub rank: usize,
    /// Rational roots of the residue polynomial with their local multiplicities.
    pub roots: Vec<(BigRational, u32)>,
    pub sum: u32,
    /// False when the residue polynomial does not split over the rationals.
    pub conclusive: bool,
}

impl ZariskiReport {
    pub fn holds(&self) -> bool {
        self.conclusive && self.rank == self.sum as usize
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "sum": self.sum,
            "conclusive": self.conclusive,
            "holds": self.holds(),
            "roots": self.roots.iter().map(|(c, m)| json!({"root": format_rational(c), "multiplicity": m})).collect::<Vec<_>>(),
        })
    }
}

/// Rank of `S[Z]/(f)` over `S` equals the sum over the points of the fiber
/// above `m` of their local multiplicities.
///
/// The rank is read off the expanded polynomial; the local multiplicity at a root `c` is the length of the
/// fiber ring at `c`, i.e. the first non-vanishing derivative of the
/// residue polynomial.
pub fn zariski_check(f: &MonicPoly, m: &[BigRational]) -> Result<ZariskiReport> {
    let base = f.base();
    if base.characteristic() != 0 {
        return Err(Error::Characteristic {
            characteristic: base.characteristic(),
            reason: "rational root finding needs characteristic 0".into(),
        });
    }
    if m.len() != base.nvars() {
        return Err(Error::DimensionMismatch { expected: base.nvars(), got: m.len() });
    }
    let rank = standard_monomials(f);
    let residue: Vec<BigRational> = {
        let mut c = vec![BigRational::one()];
        for a in f.coeffs() {
            c.push(a.eval(m)?);
        }
        c.reverse();
        c
    };
    let fbar = UniPoly::new(residue);
    let mut roots = Vec::new();
    let mut sum = 0;
    for c in fbar.rational_roots()? {
        let k = first_nonvanishing_derivative(&fbar, &c);
        sum += k;
        roots.push((c, k));
    }
    let conclusive = sum as usize == fbar.degree().unwrap_or(0);
    Ok(ZariskiReport { rank, roots, sum, conclusive })
}

/// `S[Z]/(f)` is free on `1, Z, ..., Z^{n-1}`, `n` the `Z`-degree of `f`.
fn standard_monomials(f: &MonicPoly) -> usize {
    let z = f.ambient().nvars() - 1;
    f.to_polynomial().coefficients_at(z).len() - 1
}

fn first_nonvanishing_derivative(f: &UniPoly, c: &BigRational) -> u32 {
    let mut d = f.clone();
    let mut k = 0;
    while !d.is_zero() && d.eval(c).is_zero() {
        d = d.derivative();
        k += 1;
    }
    k
}

/// Upper bound and specialization checks on a grid.
///
/// At every grid point and every factor, the order of `f_i` at the lifted
/// point never exceeds `d_i` and reaches it exactly when the factor's
/// transversality condition holds. For every translated coordinate
/// subvariety through a grid point, membership at its generic point
/// implies membership at the point.
pub fn max_mult_upper_bound_check(p: &Presentation, grid: &Grid) -> Result<bool> {
    let dim = p.base.nvars();
    let subsets: Vec<Vec<usize>> = (1u32..(1 << dim)).map(|mask| (0..dim).filter(|i| mask & (1 << i) != 0).collect()).collect();
    let ambients: Vec<(Ring, Polynomial)> = p.witness_form()?.iter().map(|h| (h.ambient(), h.to_polynomial())).collect();
    for point in grid.points(dim)? {
        let t = p.transversality_test(&point)?;
        for (k, (_, h)) in ambients.iter().enumerate() {
            let mut q = point.clone();
            q.push(BigRational::zero());
            let nu = h.order_at_point(&q)?;
            let d = p.entries[k].degree() as u32;
            let bounded = nu.finite().is_some_and(|v| v <= d);
            if !bounded || (nu == Order::Finite(d)) != t.factors[k].satisfied {
                return Ok(false);
            }
        }
        for s in &subsets {
            let vars: Vec<&str> = s.iter().map(|&i| p.base.variables()[i].as_str()).collect();
            let shift = s.iter().map(|&i| point[i].clone()).collect();
            if p.generic_member(&Center::shifted(&vars, shift))? && !t.holds {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::make_charts;
    use crate::poly::{parse, rat, RingCtx};

    fn pt(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&v| rat(v)).collect()
    }

    fn whitney() -> Presentation {
        Presentation::parse(&RingCtx::parse("Q[x,y]").unwrap(), &[("X1", "X1^2 - x^2*y")]).unwrap()
    }

    #[test]
    fn attached_algebra() {
        let a = whitney().attach_algebra().unwrap();
        assert_eq!(a.ambient.variables(), ["x", "y", "X1"]);
        for q in Grid::default().points(3).unwrap() {
            let on = q[0].is_zero() && q[2].is_zero();
            assert_eq!(a.algebra.contains_point(&q).unwrap(), on);
        }
        let s = RingCtx::parse("Q[x,y]").unwrap();
        let p = Presentation::parse(&s, &[("X1", "X1^2 - x^3"), ("X2", "X2^2 - y^3")]).unwrap();
        let a = p.attach_algebra().unwrap();
        let sing = a.algebra.sing_on_grid(&Grid::default()).unwrap();
        assert_eq!(sing, vec![pt(&[0, 0, 0, 0])]);
        assert!(Presentation::new(&s, vec![]).is_err());
        assert!(Presentation::parse(&s, &[("x", "x^2 - y")]).is_err());
        assert!(Presentation::parse(&s, &[("X", "X^2 - y"), ("X", "X^2 - x")]).is_err());
        assert!(Presentation::parse(&s, &[("X", "X - y")]).is_err());
    }

    #[test]
    fn transversality_examples() {
        let w = whitney();
        assert!(w.transversality_test(&pt(&[0, 0])).unwrap().holds);
        let t = w.transversality_test(&pt(&[0, 1])).unwrap();
        assert!(t.holds);
        assert_eq!(t.factors[0].orders, vec![Order::Finite(2)]);
        assert!(!w.transversality_test(&pt(&[1, 1])).unwrap().holds);

        let s = RingCtx::parse("Q[x]").unwrap();
        let p = Presentation::parse(&s, &[("X", "X^2 - 2*x*X + x^2")]).unwrap();
        let t = p.transversality_test(&pt(&[3])).unwrap();
        assert!(t.holds);
        assert_eq!(t.lifted, pt(&[3, 3]));
    }

    #[test]
    fn transform_examples() {
        let w = whitney();
        let charts = make_charts(w.base(), &Center::new(&["x"])).unwrap();
        let t = w.transform(&charts[0]).unwrap();
        assert_eq!(t.entries()[0].to_polynomial(), parse("X1'^2 - y", &t.ambient()).unwrap());
        assert!(Grid::default().points(2).unwrap().iter().all(|p| !t.transversality_test(p).unwrap().holds));
        assert_eq!(t.max_multiplicity_on_grid(&Grid::default()).unwrap(), 1);

        let s = RingCtx::parse("Q[x]").unwrap();
        let cusp = Presentation::parse(&s, &[("X1", "X1^2 - x^3")]).unwrap();
        assert_eq!(cusp.max_multiplicity_on_grid(&Grid::default()).unwrap(), 2);
        let charts = make_charts(&s, &Center::new(&["x"])).unwrap();
        let t = cusp.transform(&charts[0]).unwrap();
        assert_eq!(t.entries()[0].to_string(), "X1'^2 - x");
        assert_eq!(t.max_multiplicity_on_grid(&Grid::default()).unwrap(), 1);

        let s = RingCtx::parse("Q[x,y]").unwrap();
        let p = Presentation::parse(&s, &[("X1", "X1^3 + x^2*y*X1 + x^3*y")]).unwrap();
        let charts = make_charts(&s, &Center::new(&["x", "y"])).unwrap();
        let t = p.transform(&charts[0]).unwrap();
        assert_eq!(t.entries()[0].to_polynomial(), parse("X1'^3 + x*y'*X1' + x*y'", &t.ambient()).unwrap());

        let bad = Presentation::parse(&s, &[("X1", "X1^2 + x")]).unwrap();
        assert!(matches!(bad.transform(&charts[0]), Err(Error::NotPermissible(_))));
    }

    #[test]
    fn zariski_examples() {
        let s = RingCtx::parse("Q[x]").unwrap();
        let f = MonicPoly::parse("Z^2 - x*Z", "Z", &s).unwrap();
        let r = zariski_check(&f, &pt(&[0])).unwrap();
        assert_eq!((r.rank, r.sum), (2, 2));
        assert_eq!(r.roots, vec![(rat(0), 2)]);
        let f = MonicPoly::parse("Z^2 - 3*Z + 2", "Z", &s).unwrap();
        let r = zariski_check(&f, &pt(&[0])).unwrap();
        assert_eq!(r.roots, vec![(rat(1), 1), (rat(2), 1)]);
        assert!(r.holds());
        let f = MonicPoly::parse("Z^2 - x", "Z", &s).unwrap();
        assert!(zariski_check(&f, &pt(&[0])).unwrap().holds());
        let r = zariski_check(&f, &pt(&[2])).unwrap();
        assert!(!r.conclusive);
        assert!(zariski_check(&f, &pt(&[0, 0])).is_err());
    }

    #[test]
    fn upper_bound_and_specialization() {
        let grid = Grid::default();
        assert!(max_mult_upper_bound_check(&whitney(), &grid).unwrap());
        assert!(whitney().generic_member(&Center::new(&["x"])).unwrap());
        assert!(!whitney().generic_member(&Center::new(&["y"])).unwrap());
        let s = RingCtx::parse("Q[x]").unwrap();
        let smooth = Presentation::parse(&s, &[("X1", "X1^2 - x")]).unwrap();
        assert!(grid.points(1).unwrap().iter().all(|p| !smooth.transversality_test(p).unwrap().holds));
        assert!(max_mult_upper_bound_check(&smooth, &grid).unwrap());
        let fat = Presentation::parse(&s, &[("X1", "X1^2")]).unwrap();
        assert!(grid.points(1).unwrap().iter().all(|p| fat.transversality_test(p).unwrap().holds));
        assert!(max_mult_upper_bound_check(&fat, &grid).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let w = whitney();
        let spec: PresentationSpec = serde_json::from_value(w.to_json()).unwrap();
        assert_eq!(Presentation::from_spec(&spec).unwrap(), w);
    }
}
