//! Exact sparse multivariate polynomials over `Q` or a small prime field.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic on the ring's declared variable order. The map never
//! stores a zero coefficient, so structural equality is mathematical equality.

mod parse;
mod resultant;
mod ring;
pub mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use parse::parse;
pub use resultant::resultant;
pub use ring::{
    format_rational, parse_point, parse_rational, rat, ratio, Coefficient, Ring, RingCtx,
    MAX_CHARACTERISTIC,
};

/// Exponent vector, one entry per ring variable.
///
/// `Ord` is graded lexicographic: total degree first, then exponents compared
/// lexicographically with the first variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Order of vanishing; the zero polynomial has order [`Order::Infinity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinity,
}

impl Order {
    pub fn at_least(self, n: u32) -> bool {
        match self {
            Order::Finite(k) => k >= n,
            Order::Infinity => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinity => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(k) => s.serialize_u32(*k),
            Order::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Result of [`Polynomial::weighted_degree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightedDegree {
    pub min: Order,
    pub max: Order,
    pub homogeneous: bool,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Coefficient>,
}

/// Substitution `variable -> image`, keyed by source variable name.
pub type SubstitutionMap = BTreeMap<String, Polynomial>;

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn constant(ring: &Ring, c: BigRational) -> Self {
        let c = ring.reduce_unchecked_or_panic(c);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.nvars()), c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn from_int(ring: &Ring, n: i64) -> Self {
        Self::constant(ring, rat(n))
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self> {
        let idx = ring.index_of(name)?;
        Ok(Self::var_at(ring, idx))
    }

    pub(crate) fn var_at(ring: &Ring, idx: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ring.nvars(), idx), BigRational::one());
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut p = Polynomial::zero(ring);
        for (c, e) in terms {
            if e.len() != ring.nvars() {
                return Err(Error::DimensionMismatch { expected: ring.nvars(), got: e.len() });
            }
            let c = ring.reduce(&c)?;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        let ring = self.ring.clone();
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = ring.reduce_unchecked(&*existing + c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Coefficient> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest term in graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Coefficient)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Order {
        match self.terms.keys().map(Monomial::degree).max() {
            Some(d) => Order::Finite(d),
            None => Order::Infinity,
        }
    }

    /// Minimum total degree of the support (the order at the origin).
    pub fn min_degree(&self) -> Order {
        match self.terms.keys().map(Monomial::degree).min() {
            Some(d) => Order::Finite(d),
            None => Order::Infinity,
        }
    }

    pub fn degree_in(&self, var: &str) -> Result<Option<u32>> {
        let idx = self.ring.index_of(var)?;
        Ok(self.terms.keys().map(|m| m.0[idx]).max())
    }

    /// True iff the variable occurs in the support.
    pub fn involves(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let neg = self.ring.reduce_unchecked(-c.clone());
            out.add_term(m.clone(), neg);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = self.ring.reduce_unchecked(c1 * c2);
                out.add_term(m1.mul(m2), c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        let c = self.ring.reduce_unchecked_or_panic(c.clone());
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.ring.reduce_unchecked(a * &c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Scales so that the leading coefficient is 1; zero stays zero.
    pub fn monic_normalized(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.ring.inverse(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Formal partial derivative with respect to `var`, iterated `times`.
    pub fn differentiate(&self, var: &str, times: u32) -> Result<Polynomial> {
        let idx = self.ring.index_of(var)?;
        Ok(self.differentiate_at(idx, times))
    }

    pub(crate) fn differentiate_at(&self, idx: usize, times: u32) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e < times {
                continue;
            }
            let falling: BigInt = (0..times).map(|k| BigInt::from(e - k)).product();
            let mut m2 = m.clone();
            m2.0[idx] -= times;
            let c2 = self.ring.reduce_unchecked(c * BigRational::from_integer(falling));
            out.add_term(m2, c2);
        }
        out
    }

    /// Ring homomorphism sending each variable of this ring to its image in
    /// `target`. Every variable must be mapped.
    pub fn substitute(&self, map: &SubstitutionMap, target: &Ring) -> Result<Polynomial> {
        if target.characteristic() != self.ring.characteristic() {
            return Err(Error::RingMismatch(format!(
                "cannot map {} into {}",
                self.ring, target
            )));
        }
        let mut images = Vec::with_capacity(self.ring.nvars());
        for v in self.ring.variables() {
            let img = map.get(v).ok_or_else(|| Error::IncompleteMap(v.clone()))?;
            if img.ring != *target {
                return Err(Error::RingMismatch(format!(
                    "image of `{v}` lives in {}, expected {}",
                    img.ring, target
                )));
            }
            images.push(img);
        }
        Ok(self.substitute_images(&images, target))
    }

    /// Substitution by position: `images[i]` is the image of variable `i`.
    pub(crate) fn substitute_images(&self, images: &[&Polynomial], target: &Ring) -> Polynomial {
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|img| vec![Polynomial::one(target), (*img).clone()])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            for (m2, c2) in term.terms {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// `g(v) = f(v + point)`, so that `g(0) = f(point)`.
    pub fn translate_to_origin(&self, point: &[BigRational]) -> Result<Polynomial> {
        self.check_point(point)?;
        if point.iter().all(Zero::is_zero) {
            return Ok(self.clone());
        }
        let shifted: Vec<Polynomial> = point
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = self.ring.reduce(c)?;
                Ok(&Polynomial::var_at(&self.ring, i) + &Polynomial::constant(&self.ring, c))
            })
            .collect::<Result<_>>()?;
        let refs: Vec<&Polynomial> = shifted.iter().collect();
        Ok(self.substitute_images(&refs, &self.ring))
    }

    fn check_point(&self, point: &[BigRational]) -> Result<()> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch { expected: self.ring.nvars(), got: point.len() });
        }
        Ok(())
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<Coefficient> {
        self.check_point(point)?;
        let point: Vec<Coefficient> = point.iter().map(|c| self.ring.reduce(c)).collect::<Result<_>>()?;
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(self.ring.reduce_unchecked(acc))
    }

    /// Order of `f` in the local ring at `point`.
    pub fn order_at_point(&self, point: &[BigRational]) -> Result<Order> {
        Ok(self.translate_to_origin(point)?.min_degree())
    }

    /// Order at the generic point of the coordinate subspace `V(vars)`.
    pub fn order_along_coordinate_prime<S: AsRef<str>>(&self, vars: &[S]) -> Result<Order> {
        if vars.is_empty() {
            return Err(Error::InvalidArgument("empty variable subset".into()));
        }
        let idx: Vec<usize> = vars
            .iter()
            .map(|v| self.ring.index_of(v.as_ref()))
            .collect::<Result<_>>()?;
        Ok(self.order_along_indices(&idx))
    }

    pub(crate) fn order_along_indices(&self, idx: &[usize]) -> Order {
        self.terms
            .keys()
            .map(|m| idx.iter().map(|&i| m.0[i]).sum::<u32>())
            .min()
            .map_or(Order::Infinity, Order::Finite)
    }

    /// Minimum and maximum weighted degree over the support.
    pub fn weighted_degree(&self, weights: &BTreeMap<String, u32>) -> Result<WeightedDegree> {
        let mut w = Vec::with_capacity(self.ring.nvars());
        for v in self.ring.variables() {
            match weights.get(v) {
                Some(&k) if k > 0 => w.push(k),
                Some(_) => return Err(Error::InvalidArgument(format!("weight of `{v}` must be positive"))),
                None => return Err(Error::InvalidArgument(format!("missing weight for `{v}`"))),
            }
        }
        let degs: Vec<u32> = self
            .terms
            .keys()
            .map(|m| m.0.iter().zip(&w).map(|(e, k)| e * k).sum())
            .collect();
        let (min, max) = match (degs.iter().min(), degs.iter().max()) {
            (Some(&a), Some(&b)) => (Order::Finite(a), Order::Finite(b)),
            _ => (Order::Infinity, Order::Infinity),
        };
        Ok(WeightedDegree { min, max, homogeneous: min == max })
    }

    /// Exact division by `var^k`; `None` if some term has a smaller exponent.
    pub fn divide_by_var_power(&self, idx: usize, k: u32) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[idx] < k {
                return None;
            }
            let mut m2 = m.clone();
            m2.0[idx] -= k;
            terms.insert(m2, c.clone());
        }
        Some(Polynomial { ring: self.ring.clone(), terms })
    }

    /// Exact multivariate division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        self.check_ring(divisor).ok()?;
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = self.ring.inverse(lc).ok()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(lm);
            let qc = self.ring.reduce_unchecked(c * &lc_inv);
            let mut t = Polynomial::zero(&self.ring);
            t.terms.insert(qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`.
    /// The coefficients stay in this ring (they do not involve `var`).
    pub fn coefficients_in(&self, var: &str) -> Result<Vec<Polynomial>> {
        let idx = self.ring.index_of(var)?;
        Ok(self.coefficients_at(idx))
    }

    pub(crate) fn coefficients_at(&self, idx: usize) -> Vec<Polynomial> {
        let deg = self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0) as usize;
        let mut out = vec![Polynomial::zero(&self.ring); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let k = m.0[idx] as usize;
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            out[k].terms.insert(m2, c.clone());
        }
        out
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    pub fn to_ring(&self, target: &Ring) -> Result<Polynomial> {
        if target.characteristic() != self.ring.characteristic() {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, target)));
        }
        let mut positions = Vec::with_capacity(self.ring.nvars());
        for (i, v) in self.ring.variables().iter().enumerate() {
            match target.index_of(v) {
                Ok(j) => positions.push(Some(j)),
                Err(_) if !self.involves(i) => positions.push(None),
                Err(e) => return Err(e),
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.nvars()];
            for (i, &k) in m.0.iter().enumerate() {
                if let Some(j) = positions[i] {
                    e[j] = k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Maps every coefficient through `reduce` of `target` (same variables).
    pub fn reduce_mod(&self, target: &Ring) -> Result<Polynomial> {
        if target.variables() != self.ring.variables() {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, target)));
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), target.reduce(c)?);
        }
        Ok(out)
    }

    /// Canonical total order on polynomials of one ring: compare term
    /// sequences from the largest monomial down.
    pub fn canonical_cmp(&self, other: &Polynomial) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }

    /// Canonical text form; re-parseable by [`parse`].
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

impl RingCtx {
    fn reduce_unchecked_or_panic(&self, c: BigRational) -> Coefficient {
        self.reduce(&c).expect("coefficient is not integral at the ring characteristic")
    }
}

fn format_monomial(ring: &RingCtx, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (name, &e) in ring.variables().iter().zip(&m.0) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = format_monomial(&self.ring, m);
            if mono.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Add for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch in +")
    }
}

impl<'a> Sub for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch in -")
    }
}

impl<'a> Mul for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch in *")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&rat(-1))
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(vars: &[&str]) -> Ring {
        RingCtx::rational(vars).unwrap()
    }

    fn p(s: &str, r: &Ring) -> Polynomial {
        parse(s, r).unwrap()
    }

    #[test]
    fn ring_ops_examples() {
        let r = q(&["x", "y"]);
        assert_eq!(&p("x+y", &r) * &p("x-y", &r), p("x^2 - y^2", &r));
        let f = p("3*x*y - 1/2", &r);
        assert_eq!(&f + &Polynomial::zero(&r), f);
        // (x+1)^3 by repeated multiplication
        let a = p("x+1", &r);
        let by_hand = &(&a * &a) * &a;
        assert_eq!(a.pow(3), by_hand);
        assert_eq!(by_hand, p("x^3+3*x^2+3*x+1", &r));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = p("x", &q(&["x"]));
        let b = p("x", &q(&["x", "y"]));
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn differentiate_examples() {
        let r = q(&["x", "y", "z"]);
        let f = p("z^2 - x^2*y", &r);
        assert_eq!(f.differentiate("z", 1).unwrap(), p("2*z", &r));
        let twice = f.differentiate("x", 1).unwrap().differentiate("x", 1).unwrap();
        assert_eq!(f.differentiate("x", 2).unwrap(), twice);
        assert_eq!(twice, p("-2*y", &r));
        assert!(p("7", &r).differentiate("y", 1).unwrap().is_zero());
        assert!(matches!(f.differentiate("w", 1), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn substitute_examples() {
        let r = q(&["x", "y", "z"]);
        let chart = q(&["x", "y", "z'"]);
        let f = p("z^2 - x^2*y", &r);
        let mut map = SubstitutionMap::new();
        map.insert("x".into(), p("x", &chart));
        map.insert("y".into(), p("y", &chart));
        map.insert("z".into(), p("x*z'", &chart));
        assert_eq!(f.substitute(&map, &chart).unwrap(), p("x^2*z'^2 - x^2*y", &chart));

        let ident: SubstitutionMap = r.variables().iter().map(|v| (v.clone(), p(v, &r))).collect();
        assert_eq!(f.substitute(&ident, &r).unwrap(), f);

        map.remove("y");
        assert!(matches!(f.substitute(&map, &chart), Err(Error::IncompleteMap(_))));

        let s = q(&["Z", "a1", "a2"]);
        let g = p("Z^2 + a1*Z + a2", &s);
        let mut m = SubstitutionMap::new();
        m.insert("Z".into(), p("Z - 1/2*a1", &s));
        m.insert("a1".into(), p("a1", &s));
        m.insert("a2".into(), p("a2", &s));
        assert_eq!(g.substitute(&m, &s).unwrap(), p("Z^2 + a2 - 1/4*a1^2", &s));
    }

    #[test]
    fn translate_examples() {
        let r = q(&["x", "z"]);
        let f = p("z^2 - x^3", &r);
        let g = f.translate_to_origin(&[rat(1), rat(1)]).unwrap();
        assert_eq!(g, p("z^2 + 2*z - x^3 - 3*x^2 - 3*x", &r));
        assert_eq!(f.translate_to_origin(&[rat(0), rat(0)]).unwrap(), f);
        let c = p("5/3", &r);
        assert_eq!(c.translate_to_origin(&[rat(4), ratio(1, 2)]).unwrap(), c);
        assert!(f.translate_to_origin(&[rat(1)]).is_err());
    }

    #[test]
    fn order_examples() {
        let r = q(&["x", "y", "z"]);
        let f = p("z^2 - x^2*y", &r);
        assert_eq!(f.order_at_point(&[rat(0), rat(0), rat(0)]).unwrap(), Order::Finite(2));
        let r2 = q(&["x", "z"]);
        let g = p("z^2 - x^3", &r2);
        assert_eq!(g.order_at_point(&[rat(1), rat(1)]).unwrap(), Order::Finite(1));
        assert_eq!(Polynomial::zero(&r).order_at_point(&[rat(0), rat(1), rat(2)]).unwrap(), Order::Infinity);

        assert_eq!(f.order_along_coordinate_prime(&["x", "z"]).unwrap(), Order::Finite(2));
        assert_eq!(f.order_along_coordinate_prime(&["z"]).unwrap(), Order::Finite(0));
        let r3 = q(&["x", "y"]);
        assert_eq!(p("x^3*y", &r3).order_along_coordinate_prime(&["x", "y"]).unwrap(), Order::Finite(4));
        assert!(f.order_along_coordinate_prime(&["w"]).is_err());
    }

    #[test]
    fn weighted_degree_examples() {
        let r = q(&["a1", "a2"]);
        let w: BTreeMap<String, u32> = [("a1".to_string(), 1), ("a2".to_string(), 2)].into();
        let d = p("a1^2 - 4*a2", &r).weighted_degree(&w).unwrap();
        assert_eq!(d, WeightedDegree { min: Order::Finite(2), max: Order::Finite(2), homogeneous: true });

        let r2 = q(&["x", "y"]);
        let unit: BTreeMap<String, u32> = [("x".to_string(), 1), ("y".to_string(), 1)].into();
        let d = p("x + y^2", &r2).weighted_degree(&unit).unwrap();
        assert_eq!((d.min, d.max, d.homogeneous), (Order::Finite(1), Order::Finite(2), false));
        let d = Polynomial::zero(&r2).weighted_degree(&unit).unwrap();
        assert!(d.homogeneous && d.min == Order::Infinity);
        assert!(p("x", &r2).weighted_degree(&w).is_err());
    }

    #[test]
    fn exact_division() {
        let r = q(&["x", "y"]);
        let a = p("x^2 + x*y - 3", &r);
        let b = p("y - 2*x + 1/3", &r);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(p("x^2 + 1", &r).div_exact(&p("x", &r)).is_none());
        assert_eq!(p("x^3*y + x^2", &r).divide_by_var_power(0, 2).unwrap(), p("x*y + 1", &r));
        assert!(p("x^3*y + x", &r).divide_by_var_power(0, 2).is_none());
    }

    #[test]
    fn char_p_arithmetic() {
        let r = RingCtx::parse("F5[x]").unwrap();
        let f = p("x + 1", &r);
        assert_eq!(f.pow(5), p("x^5 + 1", &r));
        assert_eq!(p("1/2*x", &r), p("3*x", &r));
        assert!(p("x^5", &r).differentiate("x", 1).unwrap().is_zero());
    }

    #[test]
    fn printing_is_canonical() {
        let r = q(&["x", "y", "z"]);
        assert_eq!(p("-x^2*y + z^2", &r).to_string(), "-x^2*y + z^2");
        assert_eq!(p("1/2 - 3/4*x*y", &r).to_string(), "-3/4*x*y + 1/2");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }
}
