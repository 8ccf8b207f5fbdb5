//! Characteristic-zero elimination algebras of monic polynomials.
//!
//! The generators are the Tschirnhaus coefficients: after `Z -> Z - a_1/n`
//! the polynomial reads `Z^n + b_2 Z^{n-2} + ... + b_n`, and `b_j W^j`
//! generate the elimination algebra on the base.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::blowup::{Center, Chart};
use crate::error::{Error, Result};
use crate::json::ring_json;
use crate::monic::MonicPoly;
use crate::poly::{Polynomial, Ring, RingCtx};
use crate::presentation::Presentation;
use crate::rees::{derivatives_up_to, Generator, Grid, ReesAlgebra, SingIdeal};

/// Output of [`tschirnhaus`]: the shift `a_1/n` and the coefficients
/// `b_1 = 0, b_2, ..., b_n` of `f(Z - a_1/n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tschirnhaus {
    pub shift: Polynomial,
    pub coeffs: Vec<Polynomial>,
}

impl Tschirnhaus {
    /// `b_j`, for `1 <= j <= n`.
    pub fn b(&self, j: usize) -> &Polynomial {
        &self.coeffs[j - 1]
    }

    /// The reduced polynomial in the same variable.
    pub fn reduced(&self, f: &MonicPoly) -> MonicPoly {
        MonicPoly::new(f.base(), f.var(), self.coeffs.clone()).expect("same base and variable")
    }
}

fn check_characteristic(ring: &Ring, n: usize) -> Result<()> {
    let p = ring.characteristic();
    if p != 0 && n.is_multiple_of(p as usize) {
        return Err(Error::Characteristic {
            characteristic: p,
            reason: format!("the characteristic divides the degree {n}"),
        });
    }
    Ok(())
}

fn require_char_zero(ring: &Ring) -> Result<()> {
    match ring.characteristic() {
        0 => Ok(()),
        p => Err(Error::Characteristic {
            characteristic: p,
            reason: "elimination algebras are only available in characteristic 0".into(),
        }),
    }
}

/// Kills the `Z^{n-1}` term: `b_k = sum_{i<=k} a_i C(n-i, k-i) (-a_1/n)^{k-i}`.
pub fn tschirnhaus(f: &MonicPoly) -> Result<Tschirnhaus> {
    let base = f.base();
    let n = f.degree();
    check_characteristic(base, n)?;
    let inv_n = base.inverse(&base.from_int(n as i64))?;
    let shift = f.coeffs()[0].scale(&inv_n);
    let minus = -&shift;
    let mut powers = vec![Polynomial::one(base)];
    for k in 1..=n {
        powers.push(&powers[k - 1] * &minus);
    }
    let a = |i: usize| -> Polynomial {
        if i == 0 {
            Polynomial::one(base)
        } else {
            f.coeffs()[i - 1].clone()
        }
    };
    let mut coeffs = Vec::with_capacity(n);
    for k in 1..=n {
        let mut b = Polynomial::zero(base);
        for i in 0..=k {
            let c = binomial(BigInt::from(n - i), BigInt::from(k - i));
            let c = base.reduce(&BigRational::from_integer(c))?;
            b = &b + &(&a(i) * &powers[k - i]).scale(&c);
        }
        coeffs.push(b);
    }
    debug_assert!(coeffs[0].is_zero());
    Ok(Tschirnhaus { shift, coeffs })
}

/// A Rees algebra on the base given by weighted generators; unlike
/// [`ReesAlgebra`] the list may be empty (Sing is then the whole base).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElimAlgebra {
    base: Ring,
    generators: Vec<Generator>,
}

impl ElimAlgebra {
    pub fn new(base: &Ring, generators: Vec<Generator>) -> Result<Self> {
        for g in &generators {
            if g.poly.ring() != base || g.poly.is_zero() || g.weight == 0 {
                return Err(Error::InvalidArgument(format!("bad elimination generator ({})W^{}", g.poly, g.weight)));
            }
        }
        Ok(ElimAlgebra { base: base.clone(), generators })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// As a plain Rees algebra; `None` when there are no generators.
    pub fn to_rees(&self) -> Option<ReesAlgebra> {
        ReesAlgebra::new(&self.base, self.generators.clone()).ok()
    }

    pub fn sing_generators(&self) -> SingIdeal {
        let mut generators: Vec<Polynomial> = Vec::new();
        for g in &self.generators {
            for d in derivatives_up_to(&g.poly, g.weight - 1) {
                if !generators.contains(&d) {
                    generators.push(d);
                }
            }
        }
        SingIdeal { ring: self.base.clone(), generators }
    }

    pub fn contains_point(&self, point: &[BigRational]) -> Result<bool> {
        if point.len() != self.base.nvars() {
            return Err(Error::DimensionMismatch { expected: self.base.nvars(), got: point.len() });
        }
        match self.to_rees() {
            Some(r) => r.contains_point(point),
            None => Ok(true),
        }
    }

    pub fn is_permissible(&self, center: &Center) -> Result<bool> {
        center.indices(&self.base)?;
        for g in &self.generators {
            if !center.order_of(&g.poly)?.at_least(g.weight) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Weighted transform at a chart.
    pub fn transform(&self, chart: &Chart) -> Result<ElimAlgebra> {
        match self.to_rees() {
            Some(r) => {
                let t = r.transform(chart)?;
                ElimAlgebra::new(&chart.ring, t.generators().to_vec())
            }
            None => {
                if chart.parent_ring != self.base {
                    return Err(Error::RingMismatch(format!("{} vs {}", self.base, chart.parent_ring)));
                }
                Ok(ElimAlgebra { base: chart.ring.clone(), generators: Vec::new() })
            }
        }
    }

    /// Canonical generator list: monic, sorted by (weight, polynomial), no repeats.
    pub fn normalized(&self) -> Vec<Generator> {
        normalize(&self.generators)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": ring_json(&self.base),
            "generators": self
                .generators
                .iter()
                .map(|g| json!({"poly": g.poly.to_string(), "weight": g.weight}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Sort by weight then canonical polynomial order, scale to leading
/// coefficient 1, drop duplicates.
pub fn normalize(generators: &[Generator]) -> Vec<Generator> {
    let mut out: Vec<Generator> = generators
        .iter()
        .map(|g| Generator::new(g.poly.monic_normalized(), g.weight))
        .collect();
    out.sort_by(|a, b| match a.weight.cmp(&b.weight) {
        Ordering::Equal => a.poly.canonical_cmp(&b.poly),
        o => o,
    });
    out.dedup();
    out
}

/// `[b_j W^j : j = 2..n, b_j != 0]` over the base.
pub fn elim_algebra(f: &MonicPoly) -> Result<ElimAlgebra> {
    require_char_zero(f.base())?;
    let t = tschirnhaus(f)?;
    let generators = t
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, b)| !b.is_zero())
        .map(|(k, b)| Generator::new(b.clone(), k as u32 + 1))
        .collect();
    ElimAlgebra::new(f.base(), generators)
}

/// Generators of the image of the `n`-fold locus of `{f = 0}` in the base.
pub fn image_nfold(f: &MonicPoly) -> Result<SingIdeal> {
    Ok(elim_algebra(f)?.sing_generators())
}

/// The elimination generators of `f` and of `f(Z - lambda)` coincide.
pub fn check_translation_invariance(f: &MonicPoly, lambda: &Polynomial) -> Result<bool> {
    let g = f.translate_var(lambda)?;
    Ok(elim_algebra(f)?.normalized() == elim_algebra(&g)?.normalized())
}

/// `b_j(u a_1, ..., u^n a_n) = u^j b_j(a_1, ..., a_n)` with a fresh `u`.
pub fn check_scaling_law(f: &MonicPoly) -> Result<bool> {
    require_char_zero(f.base())?;
    let ext = f.base().extend(&["u"])?;
    let u = Polynomial::var(&ext, "u")?;
    let scaled: Vec<Polynomial> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| Ok(&a.to_ring(&ext)? * &u.pow(k as u32 + 1)))
        .collect::<Result<_>>()?;
    let fu = MonicPoly::new(&ext, f.var(), scaled)?;
    let lhs = tschirnhaus(&fu)?;
    let rhs = tschirnhaus(f)?;
    for j in 1..=f.degree() {
        let expected = &rhs.b(j).to_ring(&ext)? * &u.pow(j as u32);
        if *lhs.b(j) != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Union of the elimination algebras of every entry.
pub fn elim_of_presentation(p: &Presentation) -> Result<ElimAlgebra> {
    let mut generators: Vec<Generator> = Vec::new();
    for f in p.entries() {
        for g in elim_algebra(f)?.generators {
            if !generators.contains(&g) {
                generators.push(g);
            }
        }
    }
    ElimAlgebra::new(p.base(), generators)
}

/// Per-chart outcome of [`check_commutation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationCase {
    pub chart: Vec<String>,
    pub transformed_elim: Vec<Generator>,
    pub elim_of_transform: Vec<Generator>,
    pub exact: bool,
    pub on_samples: bool,
}

impl CommutationCase {
    pub fn holds(&self) -> bool {
        self.exact || self.on_samples
    }

    pub fn to_json(&self) -> Value {
        let gens = |v: &[Generator]| -> Value {
            v.iter()
                .map(|g| json!({"poly": g.poly.to_string(), "weight": g.weight}))
                .collect::<Vec<_>>()
                .into()
        };
        json!({
            "chart": self.chart,
            "transform_then_elim": gens(&self.elim_of_transform),
            "elim_then_transform": gens(&self.transformed_elim),
            "exact": self.exact,
            "on_samples": self.on_samples,
        })
    }
}

/// Elimination commutes with blowing up: for every chart of the center,
/// the transform of the elimination algebra equals the elimination algebra
/// of the transformed presentation.
pub fn check_commutation(p: &Presentation, center: &Center) -> Result<Vec<CommutationCase>> {
    let elim = elim_of_presentation(p)?;
    if !elim.is_permissible(center)? {
        return Err(Error::NotPermissible(format!(
            "center {:?} is not permissible for the elimination algebra",
            center.vars
        )));
    }
    let charts = crate::blowup::make_charts(p.base(), center)?;
    let mut cases = Vec::with_capacity(charts.len());
    for chart in &charts {
        let left = elim.transform(chart)?;
        let right = elim_of_presentation(&p.transform(chart)?)?;
        let exact = left.normalized() == right.normalized();
        let on_samples = exact || sampled_agreement(&left, &right)?;
        cases.push(CommutationCase {
            chart: chart.path.clone(),
            transformed_elim: left.normalized(),
            elim_of_transform: right.normalized(),
            exact,
            on_samples,
        });
    }
    Ok(cases)
}

fn sampled_agreement(a: &ElimAlgebra, b: &ElimAlgebra) -> Result<bool> {
    let grid = Grid::default();
    for p in grid.points(a.base.nvars())? {
        if a.contains_point(&p)? != b.contains_point(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Z^n + a_1 Z^{n-1} + ... + a_n` over `Q[a_1, ..., a_n]`.
pub fn universal_monic(n: usize) -> Result<MonicPoly> {
    let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let base = RingCtx::rational(&names)?;
    let coeffs = names.iter().map(|v| Polynomial::var(&base, v)).collect::<Result<Vec<_>>>()?;
    MonicPoly::new(&base, "Z", coeffs)
}

/// Weights `a_i -> i` for the universal base.
pub fn universal_weights(n: usize) -> BTreeMap<String, u32> {
    (1..=n).map(|i| (format!("a{i}"), i as u32)).collect()
}

/// `{"shift": ..., "generators": [...]}` as printed by the CLI.
pub fn elim_report(f: &MonicPoly) -> Result<Value> {
    let t = tschirnhaus(f)?;
    let e = elim_algebra(f)?;
    Ok(json!({
        "shift": t.shift.to_string(),
        "generators": e
            .generators
            .iter()
            .map(|g| json!({"poly": g.poly.to_string(), "weight": g.weight}))
            .collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, rat};

    fn monic(text: &str, base: &str) -> MonicPoly {
        MonicPoly::parse(text, "Z", &RingCtx::parse(base).unwrap()).unwrap()
    }

    #[test]
    fn tschirnhaus_examples() {
        let f = universal_monic(2).unwrap();
        let t = tschirnhaus(&f).unwrap();
        assert!(t.b(1).is_zero());
        assert_eq!(*t.b(2), parse("a2 - 1/4*a1^2", f.base()).unwrap());
        assert_eq!(t.shift, parse("1/2*a1", f.base()).unwrap());

        let f = monic("Z^3 + x*Z + y", "Q[x,y]");
        let t = tschirnhaus(&f).unwrap();
        assert!(t.shift.is_zero());
        assert_eq!(t.coeffs, f.coeffs());

        let f = monic("Z^2 - x^2*y", "Q[x,y]");
        assert_eq!(*tschirnhaus(&f).unwrap().b(2), parse("-x^2*y", f.base()).unwrap());

        let f = monic("Z^7 + x*Z", "F7[x]");
        assert!(matches!(tschirnhaus(&f), Err(Error::Characteristic { .. })));
    }

    #[test]
    fn tschirnhaus_matches_direct_substitution() {
        for n in 2..=5 {
            let f = universal_monic(n).unwrap();
            let t = tschirnhaus(&f).unwrap();
            let direct = f.translate_var(&t.shift).unwrap();
            assert_eq!(direct.coeffs(), &t.coeffs[..]);
            let w = universal_weights(n);
            for j in 2..=n {
                let d = t.b(j).weighted_degree(&w).unwrap();
                assert!(d.homogeneous);
                assert_eq!(d.min.finite(), Some(j as u32));
            }
        }
    }

    #[test]
    fn elim_algebra_examples() {
        let f = monic("Z^2 - x^2*y", "Q[x,y]");
        let e = elim_algebra(&f).unwrap();
        assert_eq!(e.generators().len(), 1);
        assert_eq!(e.generators()[0].weight, 2);
        for p in Grid::default().points(2).unwrap() {
            assert_eq!(e.contains_point(&p).unwrap(), p[0] == rat(0));
        }

        let u = universal_monic(2).unwrap();
        let e = elim_algebra(&u).unwrap();
        let disc = parse("a1^2 - 4*a2", u.base()).unwrap();
        assert_eq!(&e.generators()[0].poly.scale(&rat(-4)), &disc);

        let f = monic("Z^3 + 3*p*Z + 2*q", "Q[p,q]");
        let e = elim_algebra(&f).unwrap();
        let got: Vec<(String, u32)> = e.generators().iter().map(|g| (g.poly.to_string(), g.weight)).collect();
        assert_eq!(got, [("3*p".to_string(), 2), ("2*q".to_string(), 3)]);

        let f = monic("Z^2 + x", "F5[x]");
        assert!(matches!(elim_algebra(&f), Err(Error::Characteristic { .. })));
    }

    #[test]
    fn image_of_nfold_points() {
        let f = monic("Z^2 - x^3", "Q[x]");
        let s = image_nfold(&f).unwrap();
        for p in Grid::default().points(1).unwrap() {
            assert_eq!(s.contains(&p).unwrap(), p[0] == rat(0));
        }
        let s = image_nfold(&monic("Z^2 - 1", "Q[x]")).unwrap();
        assert!(s.is_obviously_empty());

        // Projection of Sing[(Z^2 - x^2 y) W^2] computed in the ambient.
        let f = monic("Z^2 - x^2*y", "Q[x,y]");
        let s = image_nfold(&f).unwrap();
        let full = ReesAlgebra::new(&f.ambient(), vec![Generator::new(f.to_polynomial(), 2)]).unwrap();
        for p in Grid::default().points(2).unwrap() {
            let above = Grid::default().points(1).unwrap().into_iter().any(|z| {
                let mut q = p.clone();
                q.extend(z);
                full.contains_point(&q).unwrap()
            });
            assert_eq!(s.contains(&p).unwrap(), above);
        }
    }

    #[test]
    fn invariance_and_scaling() {
        let f = monic("Z^2 - x^2*y", "Q[x,y]");
        assert!(check_translation_invariance(&f, &parse("x + y", f.base()).unwrap()).unwrap());
        assert!(check_translation_invariance(&f, &Polynomial::zero(f.base())).unwrap());
        for n in 2..=4 {
            assert!(check_scaling_law(&universal_monic(n).unwrap()).unwrap());
        }
        assert!(check_scaling_law(&monic("Z^3 + x*Z + y^2", "Q[x,y]")).unwrap());
        assert!(matches!(check_scaling_law(&monic("Z^2 + u", "Q[u]")), Err(Error::NameCollision(_))));
    }

    #[test]
    fn normalization_is_canonical() {
        let r = RingCtx::parse("Q[x,y]").unwrap();
        let g = |s: &str, w| Generator::new(parse(s, &r).unwrap(), w);
        let a = normalize(&[g("-2*y^3", 3), g("x^2", 2), g("3*x^2", 2)]);
        let b = normalize(&[g("x^2", 2), g("y^3", 3)]);
        assert_eq!(a, b);
    }
}
