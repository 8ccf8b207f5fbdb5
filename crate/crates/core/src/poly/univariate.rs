//! Dense univariate polynomials over `Q`, used for exact root finding.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Polynomial, Ring};
use crate::error::{Error, Result};

/// Coefficients from the constant term up; never has a zero leading entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::new(vec![BigRational::one()])
    }

    /// `x - r`.
    pub fn linear_root(r: &BigRational) -> Self {
        UniPoly::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&n| BigRational::from_integer(n.into())).collect())
    }

    /// Reads a polynomial that involves at most the variable at `idx`.
    pub fn from_polynomial(f: &Polynomial, idx: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (m, c) in f.terms() {
            let e = m.exponents();
            if e.iter().enumerate().any(|(i, &k)| i != idx && k > 0) {
                return None;
            }
            let k = e[idx] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn to_polynomial(&self, ring: &Ring, idx: usize) -> Polynomial {
        let n = ring.nvars();
        let terms = self.coeffs.iter().enumerate().map(|(k, c)| {
            let mut e = vec![0; n];
            e[idx] = k as u32;
            (c.clone(), e)
        });
        Polynomial::from_terms(ring, terms).expect("rational coefficients")
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        UniPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.lead().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() * &lead_inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) && rem.len() > dd {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => UniPoly::zero(),
        }
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: returns `(g_i, i)` with
    /// `self = lead * prod g_i^i`, each `g_i` monic, square-free and of
    /// positive degree.
    pub fn square_free_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            b = b.div_rem(&g).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&g).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn is_square_free(&self) -> bool {
        self.square_free_decomposition().iter().all(|(_, m)| *m == 1)
    }

    /// Distinct rational roots in increasing order.
    pub fn rational_roots(&self) -> Result<Vec<BigRational>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("root finding".into()));
        }
        let sf = self.div_rem(&self.gcd(&self.derivative())).0;
        let mut roots = Vec::new();
        let mut coeffs = integer_coefficients(&sf);
        let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            roots.push(BigRational::zero());
            coeffs.drain(..zeros);
        }
        if coeffs.len() > 1 {
            let a0 = coeffs[0].abs();
            let an = coeffs.last().unwrap().abs();
            let ps = divisors(&a0)?;
            let qs = divisors(&an)?;
            let g = UniPoly::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect());
            for p in &ps {
                for q in &qs {
                    if !p.gcd(q).is_one() {
                        continue;
                    }
                    for sign in [1, -1] {
                        let r = BigRational::new(p * BigInt::from(sign), q.clone());
                        if g.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }

    /// Multiplicity of `r` as a root (0 if not a root).
    pub fn root_multiplicity(&self, r: &BigRational) -> u32 {
        let lin = UniPoly::linear_root(r);
        let mut f = self.clone();
        let mut m = 0;
        while !f.is_zero() {
            let (q, rem) = f.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            f = q;
            m += 1;
        }
        m
    }

    /// Rational roots with multiplicities, via the square-free decomposition.
    pub fn rational_roots_with_multiplicity(&self) -> Result<Vec<(BigRational, u32)>> {
        let mut out = Vec::new();
        for (g, m) in self.square_free_decomposition() {
            for r in g.rational_roots()? {
                out.push((r, m));
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Primitive integer multiple of the coefficient vector.
fn integer_coefficients(f: &UniPoly) -> Vec<BigInt> {
    let lcm = f
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

const TRIAL_LIMIT: u64 = 2_000_000;

/// Positive divisors of `n > 0` by trial division.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut rest = n.clone();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d: u64 = 2;
    while d <= TRIAL_LIMIT && BigInt::from(d) * BigInt::from(d) <= rest {
        let bd = BigInt::from(d);
        let mut k = 0;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            k += 1;
        }
        if k > 0 {
            factors.push((bd, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let limit = BigInt::from(TRIAL_LIMIT);
        if rest > &limit * &limit {
            return Err(Error::InvalidArgument(format!(
                "coefficient {n} too large for rational root search"
            )));
        }
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in factors {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})*t^{k}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Approximate value for display purposes only.
pub fn approx(c: &BigRational) -> f64 {
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_ints(&[-1, 0, 1]); // t^2 - 1
        let b = UniPoly::from_ints(&[1, 1]); // t + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, UniPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&UniPoly::from_ints(&[2, 2])), b);
    }

    #[test]
    fn square_free_parts() {
        // (t-1)^2 (t+2)^3 t
        let f = UniPoly::linear_root(&rat(1))
            .mul(&UniPoly::linear_root(&rat(1)))
            .mul(&UniPoly::linear_root(&rat(-2)).mul(&UniPoly::linear_root(&rat(-2))).mul(&UniPoly::linear_root(&rat(-2))))
            .mul(&UniPoly::linear_root(&rat(0)));
        let dec = f.square_free_decomposition();
        let mults: Vec<u32> = dec.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        assert_eq!(
            f.rational_roots_with_multiplicity().unwrap(),
            vec![(rat(-2), 3), (rat(0), 1), (rat(1), 2)]
        );
        assert!(!f.is_square_free());
    }

    #[test]
    fn rational_roots_found() {
        // 6t^2 - t - 1 = (3t+1)(2t-1)
        let f = UniPoly::from_ints(&[-1, -1, 6]);
        assert_eq!(f.rational_roots().unwrap(), vec![ratio(-1, 3), ratio(1, 2)]);
        assert!(UniPoly::from_ints(&[-2, 0, 1]).rational_roots().unwrap().is_empty());
        assert_eq!(UniPoly::from_ints(&[0, 0, 1]).root_multiplicity(&rat(0)), 2);
    }
}
