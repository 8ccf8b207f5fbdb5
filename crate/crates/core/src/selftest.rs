//! The acceptance suite, runnable from the library, the CLI and the test
//! harness. Every criterion is exact; random instances come from a seeded
//! ChaCha stream so reports are reproducible.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::blowup::{make_charts, Center, CenterSpec};
use crate::driver::{resolve_plane_curve, run_script, BlowupScript, CurveOutcome, ScriptSpec};
use crate::elimination::{check_commutation, check_scaling_law, check_translation_invariance, universal_monic};
use crate::error::{Error, Result};
use crate::json::from_value;
use crate::monic::{strict_transform_monic, MonicPoly};
use crate::poly::{format_rational, parse, rat, ratio, Polynomial, Ring, RingCtx};
use crate::presentation::{zariski_check, Presentation, PresentationSpec};
use crate::rees::{AlgebraSpec, Grid, ReesAlgebra};

pub const DEFAULT_SEED: u64 = 1;

/// The built-in fixture file.
pub const BUILTIN_CATALOG: &str = include_str!("../catalog/catalog.json");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    pub fn line(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        format!("[{mark}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub criteria: Vec<Criterion>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "passed": self.passed(),
            "criteria": self.criteria.iter().map(|c| json!({
                "id": c.id,
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out: String = self.criteria.iter().map(|c| c.line() + "\n").collect();
        let n = self.criteria.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{n}/{} criteria passed (seed {})\n", self.criteria.len(), self.seed));
        out
    }
}

/// Parsed fixture file. A malformed file is kept as an error so that only
/// the criteria that read it fail.
#[derive(Debug, Clone)]
pub struct Catalog(std::result::Result<Value, String>);

impl Catalog {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_CATALOG)
    }

    pub fn from_json(text: &str) -> Self {
        Catalog(serde_json::from_str(text).map_err(|e| e.to_string()))
    }

    fn section(&self, key: &str) -> Result<&Value> {
        let v = self.0.as_ref().map_err(|e| Error::Format(format!("catalog: {e}")))?;
        v.get(key).ok_or_else(|| Error::Format(format!("catalog has no `{key}` section")))
    }

    pub fn presentation(&self, name: &str) -> Result<Presentation> {
        let spec = self
            .section("presentations")?
            .get(name)
            .ok_or_else(|| Error::Format(format!("catalog has no presentation `{name}`")))?;
        Presentation::from_spec(&from_value::<PresentationSpec>(spec.clone())?)
    }

    fn names(&self, key: &str) -> Result<Vec<String>> {
        from_value(self.section(key)?.clone())
    }

    pub fn algebras(&self) -> Result<Vec<(String, ReesAlgebra)>> {
        let specs: BTreeMap<String, AlgebraSpec> = from_value(self.section("algebras")?.clone())?;
        specs.into_iter().map(|(k, s)| Ok((k, ReesAlgebra::from_spec(&s)?))).collect()
    }
}

type Check = fn(&mut ChaCha8Rng, &Catalog) -> Result<(bool, String)>;

const CRITERIA: [(&str, Check); 10] = [
    ("transform law", transform_law),
    ("translation invariance", translation_invariance),
    ("scaling law", scaling_law),
    ("commutation", commutation),
    ("local presentation", local_presentation),
    ("monotonicity", monotonicity),
    ("semicontinuity", semicontinuity),
    ("zariski formula", zariski_formula),
    ("differential criterion", differential_criterion),
    ("curve resolver", curve_resolver),
];

pub fn run_selftest(seed: u64, catalog: &Catalog) -> SelftestReport {
    let criteria = CRITERIA
        .iter()
        .enumerate()
        .map(|(k, (name, check))| {
            let id = k as u32 + 1;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(u64::from(id));
            let (passed, detail) = check(&mut rng, catalog).unwrap_or_else(|e| (false, format!("error: {e}")));
            Criterion { id, name, passed, detail }
        })
        .collect();
    SelftestReport { seed, criteria }
}

/// Run a single criterion by number.
pub fn run_criterion(id: u32, seed: u64, catalog: &Catalog) -> Option<Criterion> {
    let (name, check) = *CRITERIA.get((id as usize).checked_sub(1)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(id));
    let (passed, detail) = check(&mut rng, catalog).unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(Criterion { id, name, passed, detail })
}

fn tally(ok: usize, total: usize, first_failure: Option<String>) -> (bool, String) {
    let mut detail = format!("{ok}/{total}");
    if let Some(f) = first_failure {
        detail.push_str(&format!("; first failure: {f}"));
    }
    (ok == total, detail)
}

fn qxy() -> Ring {
    RingCtx::parse("Q[x,y]").expect("valid ring")
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> BigRational {
    let mut n = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    if rng.gen_bool(0.2) {
        ratio(n, rng.gen_range(2..=3))
    } else {
        rat(n)
    }
}

/// Random polynomial in `(x - s0)^a (y - s1)^b` with `a + b <= max_deg`,
/// keeping only exponents accepted by `keep`.
fn random_poly(
    rng: &mut ChaCha8Rng,
    ring: &Ring,
    shift: &[BigRational],
    max_deg: u32,
    density: f64,
    keep: impl Fn(u32, u32) -> bool,
) -> Polynomial {
    let u = &Polynomial::var_at(ring, 0) - &Polynomial::constant(ring, shift[0].clone());
    let v = &Polynomial::var_at(ring, 1) - &Polynomial::constant(ring, shift[1].clone());
    let mut p = Polynomial::zero(ring);
    for d in 0..=max_deg {
        for a in 0..=d {
            let b = d - a;
            if keep(a, b) && rng.gen_bool(density) {
                let c = Polynomial::constant(ring, random_coefficient(rng));
                p = &p + &(&c * &(&u.pow(a) * &v.pow(b)));
            }
        }
    }
    p
}

/// Criterion 1: coefficient-wise strict transform against substituting
/// `Z -> x_t Z'` in the whole polynomial and dividing by `x_t^n`.
fn transform_law(rng: &mut ChaCha8Rng, _: &Catalog) -> Result<(bool, String)> {
    let base = qxy();
    let (mut ok, mut total, mut failure) = (0, 0, None);
    while total < 100 {
        let n = rng.gen_range(1..=4u32);
        let kind = rng.gen_range(0..3);
        let shift: Vec<BigRational> = (0..2).map(|_| if rng.gen_bool(0.5) { rat(0) } else { rat(rng.gen_range(-1..=1)) }).collect();
        let (vars, cshift): (Vec<&str>, Vec<BigRational>) = match kind {
            0 => (vec!["x", "y"], shift.clone()),
            1 => (vec!["x"], vec![shift[0].clone()]),
            _ => (vec!["y"], vec![shift[1].clone()]),
        };
        let center = Center::shifted(&vars, cshift.clone());
        let coeffs: Vec<Polynomial> = (1..=n)
            .map(|i| {
                random_poly(rng, &base, &shift, 3, 0.4, |a, b| match kind {
                    0 => a + b >= i,
                    1 => a >= i,
                    _ => b >= i,
                })
            })
            .collect();
        let mut filtered = true;
        for (k, c) in coeffs.iter().enumerate() {
            filtered &= center.order_of(c)?.at_least(k as u32 + 1);
        }
        if !filtered {
            continue;
        }
        let f = MonicPoly::new(&base, "Z", coeffs)?;
        total += 1;

        let ambient = f.ambient();
        let mut avars = vars.clone();
        avars.push("Z");
        let mut ashift = cshift;
        ashift.push(rat(0));
        let ambient_charts = make_charts(&ambient, &Center::shifted(&avars, ashift))?;
        let whole = f.to_polynomial();
        let mut agree = true;
        for chart in make_charts(&base, &center)? {
            let strict = strict_transform_monic(&f, &chart)?.to_polynomial();
            let pivot = chart.pivot_name().expect("chart has a pivot");
            let amb = ambient_charts
                .iter()
                .find(|c| c.pivot_name() == Some(pivot))
                .expect("same pivot in the ambient blow-up");
            let t = amb.pivot.expect("chart has a pivot");
            let oracle = amb.total_transform(&whole)?.divide_by_var_power(t, n);
            if oracle.as_ref() != Some(&strict) {
                agree = false;
                failure.get_or_insert_with(|| format!("{} at {:?}, chart {:?}", whole, center.vars, chart.path));
            }
        }
        ok += usize::from(agree);
    }
    Ok(tally(ok, total, failure))
}

fn random_monic(rng: &mut ChaCha8Rng, base: &Ring, n: u32) -> Result<MonicPoly> {
    let zero = [rat(0), rat(0)];
    let coeffs = (0..n).map(|_| random_poly(rng, base, &zero, 3, 0.35, |_, _| true)).collect();
    MonicPoly::new(base, "Z", coeffs)
}

/// Criterion 2.
fn translation_invariance(rng: &mut ChaCha8Rng, _: &Catalog) -> Result<(bool, String)> {
    let base = qxy();
    let (mut ok, mut failure) = (0, None);
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let f = random_monic(rng, &base, n)?;
        let lambda = random_poly(rng, &base, &[rat(0), rat(0)], 2, 0.5, |_, _| true);
        if check_translation_invariance(&f, &lambda)? {
            ok += 1;
        } else {
            failure.get_or_insert_with(|| format!("f = {f}, lambda = {lambda}"));
        }
    }
    Ok(tally(ok, 100, failure))
}

/// Criterion 3.
fn scaling_law(_: &mut ChaCha8Rng, _: &Catalog) -> Result<(bool, String)> {
    let mut failed = Vec::new();
    for n in 2..=4 {
        if !check_scaling_law(&universal_monic(n)?)? {
            failed.push(n);
        }
    }
    Ok((failed.is_empty(), if failed.is_empty() { "n = 2, 3, 4".into() } else { format!("fails for n in {failed:?}") }))
}

/// Criterion 4.
fn commutation(_: &mut ChaCha8Rng, catalog: &Catalog) -> Result<(bool, String)> {
    let cases = catalog.section("commutation")?.as_array().ok_or_else(|| Error::Format("commutation must be a list".into()))?;
    let (mut ok, mut total, mut failure) = (0, 0, None);
    for case in cases {
        let name = case["presentation"].as_str().ok_or_else(|| Error::Format("commutation case needs a presentation".into()))?;
        let p = catalog.presentation(name)?;
        let center = from_value::<CenterSpec>(case["center"].clone())?.to_center()?;
        for c in check_commutation(&p, &center)? {
            total += 1;
            if c.exact {
                ok += 1;
            } else {
                failure.get_or_insert_with(|| format!("{name} chart {:?}", c.chart));
            }
        }
    }
    Ok(tally(ok, total, failure))
}

/// Criterion 5.
fn local_presentation(_: &mut ChaCha8Rng, catalog: &Catalog) -> Result<(bool, String)> {
    let grid = Grid::default();
    let (mut ok, mut total, mut failure) = (0, 0, None);
    for name in catalog.names("transversality")? {
        let p = catalog.presentation(&name)?;
        let attached = p.attach_algebra()?;
        for q in grid.points(p.base().nvars())? {
            let t = p.transversality_test(&q)?;
            total += 1;
            if t.holds == attached.algebra.contains_point(&t.lifted)? {
                ok += 1;
            } else {
                failure.get_or_insert_with(|| format!("{name} at {}", point_text(&q)));
            }
        }
    }
    Ok(tally(ok, total, failure))
}

/// Criterion 6.
fn monotonicity(_: &mut ChaCha8Rng, catalog: &Catalog) -> Result<(bool, String)> {
    #[derive(serde::Deserialize)]
    struct Entry {
        name: String,
        expected: Vec<u32>,
        script: ScriptSpec,
    }
    let entries: Vec<Entry> = from_value(catalog.section("scripts")?.clone())?;
    let (mut ok, mut failure) = (0, None);
    let mut seen = Vec::new();
    for e in &entries {
        let report = run_script(&BlowupScript::from_spec(&e.script)?)?;
        let non_increasing = report.indicators.windows(2).all(|w| w[1] <= w[0]);
        if non_increasing && report.indicators == e.expected && report.passed() {
            ok += 1;
        } else {
            failure.get_or_insert_with(|| format!("{}: got {:?}, expected {:?}", e.name, report.indicators, e.expected));
        }
        seen.push(format!("{} {:?}", e.name, report.indicators));
    }
    let (passed, mut detail) = tally(ok, entries.len(), failure);
    detail.push_str(&format!(" ({})", seen.join(", ")));
    Ok((passed, detail))
}

/// Criterion 7: membership at the generic point of a translated coordinate
/// subvariety implies membership at rational points of it.
fn semicontinuity(rng: &mut ChaCha8Rng, catalog: &Catalog) -> Result<(bool, String)> {
    let mut pool = Vec::new();
    for name in catalog.names("specialization")? {
        let p = catalog.presentation(&name)?;
        let dim = p.base().nvars();
        for mask in 1u32..(1 << dim) {
            let idx: Vec<usize> = (0..dim).filter(|i| mask & (1 << i) != 0).collect();
            let vars: Vec<&str> = idx.iter().map(|&i| p.base().variables()[i].as_str()).collect();
            for shift in (Grid::Box { lo: -1, hi: 1 }).points(idx.len())? {
                let center = Center::shifted(&vars, shift.clone());
                if p.generic_member(&center)? {
                    pool.push((name.clone(), p.clone(), idx.clone(), shift));
                }
            }
        }
    }
    if pool.is_empty() {
        return Ok((false, "no generic n-fold centers in the catalog".into()));
    }
    let (mut ok, mut failure) = (0, None);
    for _ in 0..20 {
        let (name, p, idx, shift) = &pool[rng.gen_range(0..pool.len())];
        let mut q: Vec<BigRational> = (0..p.base().nvars()).map(|_| rat(rng.gen_range(-3..=3))).collect();
        for (k, &i) in idx.iter().enumerate() {
            q[i] = shift[k].clone();
        }
        if p.transversality_test(&q)?.holds {
            ok += 1;
        } else {
            failure.get_or_insert_with(|| format!("{name} at {}", point_text(&q)));
        }
    }
    Ok(tally(ok, 20, failure))
}

/// Criterion 8: `f = prod (Z - r_i)^{e_i}`; the expected fiber is read off
/// the factors, the check recomputes it from the expanded coefficients.
fn zariski_formula(rng: &mut ChaCha8Rng, _: &Catalog) -> Result<(bool, String)> {
    let base = qxy();
    let ambient = base.extend(&["Z"])?;
    let z = Polynomial::var(&ambient, "Z")?;
    let (mut ok, mut failure) = (0, None);
    for _ in 0..20 {
        let m: Vec<BigRational> = (0..2).map(|_| rat(rng.gen_range(-2..=2))).collect();
        let mut f = Polynomial::one(&ambient);
        let mut expected: BTreeMap<BigRational, u32> = BTreeMap::new();
        let mut n = 0;
        for _ in 0..rng.gen_range(1..=3) {
            let r = random_poly(rng, &base, &[rat(0), rat(0)], 2, 0.4, |_, _| true);
            let e = rng.gen_range(1..=3u32);
            f = &f * &(&z - &r.to_ring(&ambient)?).pow(e);
            *expected.entry(r.eval(&m)?).or_default() += e;
            n += e as usize;
        }
        let report = zariski_check(&MonicPoly::from_polynomial(&f, "Z", &base)?, &m)?;
        let got: BTreeMap<BigRational, u32> = report.roots.iter().cloned().collect();
        if report.holds() && report.rank == n && got == expected {
            ok += 1;
        } else {
            failure.get_or_insert_with(|| format!("{f} at {}", point_text(&m)));
        }
    }
    Ok(tally(ok, 20, failure))
}

/// Criterion 9.
fn differential_criterion(_: &mut ChaCha8Rng, catalog: &Catalog) -> Result<(bool, String)> {
    let grid = Grid::default();
    let (mut ok, mut total, mut failure) = (0, 0, None);
    for (name, g) in catalog.algebras()? {
        let sing = g.sing_generators()?;
        for q in grid.points(g.ring().nvars())? {
            total += 1;
            if g.contains_point(&q)? == sing.contains(&q)? {
                ok += 1;
            } else {
                failure.get_or_insert_with(|| format!("{name} at {}", point_text(&q)));
            }
        }
    }
    Ok(tally(ok, total, failure))
}

/// Criterion 10.
fn curve_resolver(_: &mut ChaCha8Rng, catalog: &Catalog) -> Result<(bool, String)> {
    #[derive(serde::Deserialize)]
    struct Expected {
        point: Vec<i64>,
        sequence: Vec<u32>,
    }
    #[derive(serde::Deserialize)]
    struct Entry {
        name: String,
        poly: String,
        blowups: usize,
        sequences: Vec<Expected>,
    }
    let entries: Vec<Entry> = from_value(catalog.section("curves")?.clone())?;
    let ring = qxy();
    let (mut ok, mut failure) = (0, None);
    let mut seen = Vec::new();
    for e in &entries {
        let r = resolve_plane_curve(&parse(&e.poly, &ring)?)?;
        let expected: Vec<(Vec<BigRational>, Vec<u32>)> = e
            .sequences
            .iter()
            .map(|s| (s.point.iter().map(|&c| rat(c)).collect(), s.sequence.clone()))
            .collect();
        if r.outcome == CurveOutcome::Resolved && r.blowups == e.blowups && r.sequences == expected && r.report.passed() {
            ok += 1;
        } else {
            failure.get_or_insert_with(|| format!("{}: {} blow-ups, sequences {:?}", e.name, r.blowups, r.sequences));
        }
        let seqs: Vec<&Vec<u32>> = r.sequences.iter().map(|(_, s)| s).collect();
        seen.push(format!("{} {:?}", e.name, seqs));
    }
    let (passed, mut detail) = tally(ok, entries.len(), failure);
    detail.push_str(&format!(" ({})", seen.join(", ")));
    Ok((passed, detail))
}

fn point_text(p: &[BigRational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}
