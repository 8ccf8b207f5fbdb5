use std::fmt;

use crate::blowup::{strict_transform_coefficients, Chart};
use crate::error::{Error, Result};
use crate::poly::{parse, Polynomial, Ring, SubstitutionMap};

/// Monic polynomial `Z^n + a_1 Z^{n-1} + ... + a_n` with `a_i` in a base ring `S`.
#[derive(Clone, PartialEq, Eq)]
pub struct MonicPoly {
    base: Ring,
    var: String,
    coeffs: Vec<Polynomial>,
}

impl MonicPoly {
    /// Builds from the coefficients `a_1, ..., a_n` (all over `base`).
    pub fn new(base: &Ring, var: &str, coeffs: Vec<Polynomial>) -> Result<Self> {
        if base.contains(var) {
            return Err(Error::NameCollision(var.to_string()));
        }
        base.extend(&[var])?;
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("monic polynomial of degree 0".into()));
        }
        for c in &coeffs {
            if c.ring() != base {
                return Err(Error::RingMismatch(format!("coefficient over {}, base is {}", c.ring(), base)));
            }
        }
        Ok(MonicPoly { base: base.clone(), var: var.to_string(), coeffs })
    }

    /// Reads a polynomial over `base[var]` that must be monic in `var`.
    pub fn from_polynomial(f: &Polynomial, var: &str, base: &Ring) -> Result<Self> {
        let idx = f.ring().index_of(var)?;
        let parts = f.coefficients_at(idx);
        let n = parts.len().checked_sub(1).ok_or_else(|| Error::NotMonic("zero polynomial".into()))?;
        if n == 0 {
            return Err(Error::NotMonic(format!("{f} has degree 0 in {var}")));
        }
        if parts[n].as_constant().is_none_or(|c| c != crate::poly::rat(1)) {
            return Err(Error::NotMonic(format!("leading coefficient of {f} in {var} is {}", parts[n])));
        }
        let coeffs = (0..n)
            .map(|k| parts[n - 1 - k].to_ring(base))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, var, coeffs)
    }

    /// Parses `text` over `base[var]`.
    pub fn parse(text: &str, var: &str, base: &Ring) -> Result<Self> {
        let ambient = base.extend(&[var])?;
        Self::from_polynomial(&parse(text, &ambient)?, var, base)
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_1, ..., a_n`.
    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// `S[Z]` with `Z` appended after the base variables.
    pub fn ambient(&self) -> Ring {
        self.base.extend(&[&self.var]).expect("checked at construction")
    }

    /// The polynomial itself in `S[Z]`.
    pub fn to_polynomial(&self) -> Polynomial {
        let ring = self.ambient();
        self.to_polynomial_in(&ring).expect("ambient contains base and var")
    }

    /// The polynomial in any ring containing the base variables and `Z`.
    pub fn to_polynomial_in(&self, ring: &Ring) -> Result<Polynomial> {
        let z = Polynomial::var(ring, &self.var)?;
        let n = self.degree();
        let mut acc = z.pow(n as u32);
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = (n - 1 - k) as u32;
            acc = &acc + &(&c.to_ring(ring)? * &z.pow(e));
        }
        Ok(acc)
    }

    /// Same coefficients, different variable name.
    pub fn with_var(&self, var: &str) -> Result<Self> {
        Self::new(&self.base, var, self.coeffs.clone())
    }

    /// Applies a base-ring substitution to every coefficient.
    pub fn map_coefficients(&self, map: &SubstitutionMap, target: &Ring) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.substitute(map, target))
            .collect::<Result<Vec<_>>>()?;
        let var = target.fresh_name(&self.var);
        Self::new(target, &var, coeffs)
    }

    /// `f(Z - lambda)` as a monic polynomial in the same variable.
    pub fn translate_var(&self, lambda: &Polynomial) -> Result<Self> {
        if lambda.ring() != &self.base {
            return Err(Error::RingMismatch(format!("shift over {}, base is {}", lambda.ring(), self.base)));
        }
        let ring = self.ambient();
        let f = self.to_polynomial();
        let mut map = SubstitutionMap::new();
        for (i, v) in ring.variables().iter().enumerate() {
            let img = if *v == self.var {
                &Polynomial::var_at(&ring, i) - &lambda.to_ring(&ring)?
            } else {
                Polynomial::var_at(&ring, i)
            };
            map.insert(v.clone(), img);
        }
        Self::from_polynomial(&f.substitute(&map, &ring)?, &self.var, &self.base)
    }
}

/// Strict transform of a monic polynomial at a blow-up chart of its base:
/// `Z'^s + (c_1/x_t) Z'^{s-1} + ... + c_s/x_t^s`.
///
/// Fails with [`Error::NotPermissible`] unless every `c_j` has order at least
/// `j` along the center.
pub fn strict_transform_monic(f: &MonicPoly, chart: &Chart) -> Result<MonicPoly> {
    if f.base() != &chart.parent_ring {
        return Err(Error::RingMismatch(format!(
            "polynomial over {}, chart parent is {}",
            f.base(),
            chart.parent_ring
        )));
    }
    let coeffs = strict_transform_coefficients(f.coeffs(), chart)?;
    let var = chart.ring.fresh_name(&format!("{}'", f.var()));
    MonicPoly::new(&chart.ring, &var, coeffs)
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

impl fmt::Debug for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (monic in {} over {})", self.to_polynomial(), self.var, self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{make_charts, Center, Chart};
    use crate::poly::RingCtx;

    fn chart<'a>(charts: &'a [Chart], pivot: &str) -> &'a Chart {
        charts.iter().find(|c| c.pivot_name() == Some(pivot)).unwrap()
    }

    #[test]
    fn reads_monic_polynomials() {
        let s = RingCtx::parse("Q[x,y]").unwrap();
        let f = MonicPoly::parse("Z^3 + x^2*y*Z + x^3*y", "Z", &s).unwrap();
        assert_eq!(f.degree(), 3);
        assert!(f.coeffs()[0].is_zero());
        assert_eq!(f.coeffs()[1].to_string(), "x^2*y");
        assert_eq!(f.to_string(), "x^3*y + x^2*y*Z + Z^3");
        assert!(matches!(MonicPoly::parse("2*Z^2 + x", "Z", &s), Err(Error::NotMonic(_))));
        assert!(matches!(MonicPoly::parse("x*Z^2 + 1", "Z", &s), Err(Error::NotMonic(_))));
        assert!(MonicPoly::parse("Z^2", "x", &s).is_err());
    }

    #[test]
    fn strict_transform_examples() {
        let s = RingCtx::parse("Q[x]").unwrap();
        let f = MonicPoly::parse("Z^2 - x^3", "Z", &s).unwrap();
        let charts = make_charts(&s, &Center::new(&["x"])).unwrap();
        assert_eq!(strict_transform_monic(&f, &charts[0]).unwrap().to_string(), "Z'^2 - x");

        let s = RingCtx::parse("Q[x,y]").unwrap();
        let charts = make_charts(&s, &Center::new(&["x", "y"])).unwrap();
        let xc = chart(&charts, "x");
        let f = MonicPoly::parse("Z^2 - x^2*y", "Z", &s).unwrap();
        assert_eq!(strict_transform_monic(&f, xc).unwrap().to_string(), "-x*y' + Z'^2");
        let f = MonicPoly::parse("Z^3 + x^2*y*Z + x^3*y", "Z", &s).unwrap();
        assert_eq!(strict_transform_monic(&f, xc).unwrap().to_string(), "x*y'*Z' + Z'^3 + x*y'");
    }

    #[test]
    fn rejects_non_permissible_center() {
        let s = RingCtx::parse("Q[x]").unwrap();
        let f = MonicPoly::parse("Z^2 + x", "Z", &s).unwrap();
        let charts = make_charts(&s, &Center::new(&["x"])).unwrap();
        let err = strict_transform_monic(&f, &charts[0]).unwrap_err();
        assert!(err.to_string().contains("center not permissible for this hypersurface"));
    }

    #[test]
    fn translation_of_the_variable() {
        let s = RingCtx::parse("Q[a1,a2]").unwrap();
        let f = MonicPoly::parse("Z^2 + a1*Z + a2", "Z", &s).unwrap();
        let half = crate::poly::parse("1/2*a1", &s).unwrap();
        let g = f.translate_var(&half).unwrap();
        assert_eq!(g.to_string(), "-1/4*a1^2 + Z^2 + a2");
    }
}
