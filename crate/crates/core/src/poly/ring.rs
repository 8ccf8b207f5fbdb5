use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact coefficient. In characteristic 0 this is a reduced rational; in
/// characteristic p it is an integer in `[0, p)`.
pub type Coefficient = BigRational;

/// Shared handle to a ring; polynomials over the same ring share it.
pub type Ring = Arc<RingCtx>;

/// Polynomial ring `k[x_1, ..., x_n]` with `k = Q` or `F_p`, `p <= 97`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingCtx {
    variables: Vec<String>,
    characteristic: u32,
}

pub const MAX_CHARACTERISTIC: u32 = 97;

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl RingCtx {
    pub fn new<S: AsRef<str>>(variables: &[S], characteristic: u32) -> Result<Ring> {
        let variables: Vec<String> = variables.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in variables.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::InvalidRing(format!("bad variable name `{v}`")));
            }
            if variables[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if characteristic != 0 && (characteristic > MAX_CHARACTERISTIC || !is_prime(characteristic)) {
            return Err(Error::InvalidRing(format!(
                "characteristic must be 0 or a prime <= {MAX_CHARACTERISTIC}, got {characteristic}"
            )));
        }
        Ok(Arc::new(RingCtx { variables, characteristic }))
    }

    /// Rational polynomial ring.
    pub fn rational<S: AsRef<str>>(variables: &[S]) -> Result<Ring> {
        Self::new(variables, 0)
    }

    /// Parses `Q[x,y,z]`, `F7[x,y]` or `GF(7)[x,y]`.
    pub fn parse(spec: &str) -> Result<Ring> {
        let spec = spec.trim();
        let open = spec
            .find('[')
            .ok_or_else(|| Error::InvalidRing(format!("expected `K[vars]`, got `{spec}`")))?;
        if !spec.ends_with(']') {
            return Err(Error::InvalidRing(format!("missing `]` in `{spec}`")));
        }
        let field = spec[..open].trim();
        let characteristic = match field {
            "Q" | "QQ" => 0,
            _ => {
                let digits = field
                    .strip_prefix("GF(")
                    .and_then(|s| s.strip_suffix(')'))
                    .or_else(|| field.strip_prefix('F'))
                    .ok_or_else(|| Error::InvalidRing(format!("unknown field `{field}`")))?;
                digits
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidRing(format!("unknown field `{field}`")))?
            }
        };
        let inner = &spec[open + 1..spec.len() - 1];
        let vars: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::new(&vars, characteristic)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.variables.iter().any(|v| v == name)
    }

    /// Ring with `names` appended; fails on collision.
    pub fn extend<S: AsRef<str>>(&self, names: &[S]) -> Result<Ring> {
        let mut vars = self.variables.clone();
        for n in names {
            let n = n.as_ref();
            if vars.iter().any(|v| v == n) {
                return Err(Error::NameCollision(n.to_string()));
            }
            vars.push(n.to_string());
        }
        Self::new(&vars, self.characteristic)
    }

    /// Ring with the given variables removed (order preserved).
    pub fn without<S: AsRef<str>>(&self, names: &[S]) -> Result<Ring> {
        for n in names {
            self.index_of(n.as_ref())?;
        }
        let vars: Vec<&String> = self
            .variables
            .iter()
            .filter(|v| !names.iter().any(|n| n.as_ref() == v.as_str()))
            .collect();
        Self::new(&vars, self.characteristic)
    }

    /// Same field, different variables.
    pub fn with_variables<S: AsRef<str>>(&self, names: &[S]) -> Result<Ring> {
        Self::new(names, self.characteristic)
    }

    /// A name not yet used in the ring, obtained by appending primes.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.contains(&name) {
            name.push('\'');
        }
        name
    }

    /// Maps an arbitrary rational into the coefficient field.
    pub fn reduce(&self, c: &BigRational) -> Result<Coefficient> {
        if self.characteristic == 0 {
            return Ok(c.clone());
        }
        let p = BigInt::from(self.characteristic);
        let den = c.denom().mod_floor(&p);
        if den.is_zero() {
            return Err(Error::NonIntegral(c.to_string()));
        }
        let num = c.numer().mod_floor(&p);
        let inv = mod_inverse(&den, &p);
        Ok(BigRational::from_integer((num * inv).mod_floor(&p)))
    }

    /// Reduction for values already known to be integral at p.
    pub(crate) fn reduce_unchecked(&self, c: BigRational) -> Coefficient {
        if self.characteristic == 0 || (c.is_integer() && !c.is_negative() && *c.numer() < BigInt::from(self.characteristic)) {
            return c;
        }
        self.reduce(&c).expect("coefficient arithmetic stays integral mod p")
    }

    pub fn inverse(&self, c: &Coefficient) -> Result<Coefficient> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("division by zero coefficient".into()));
        }
        if self.characteristic == 0 {
            Ok(c.recip())
        } else {
            let p = BigInt::from(self.characteristic);
            Ok(BigRational::from_integer(mod_inverse(&c.numer().mod_floor(&p), &p)))
        }
    }

    /// `n * 1` in the coefficient field.
    pub fn from_int(&self, n: i64) -> Coefficient {
        self.reduce_unchecked(BigRational::from_integer(BigInt::from(n)))
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(p)
}

impl fmt::Display for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.characteristic == 0 {
            write!(f, "Q[{}]", self.variables.join(","))
        } else {
            write!(f, "F{}[{}]", self.characteristic, self.variables.join(","))
        }
    }
}

/// Parses a coordinate such as `3`, `-1/2`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses a comma separated point such as `0,1/2,-3`.
pub fn parse_point(s: &str) -> Result<Vec<BigRational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

pub fn format_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_ring_specs() {
        let r = RingCtx::parse("Q[x,y,z]").unwrap();
        assert_eq!(r.variables(), ["x", "y", "z"]);
        assert_eq!(r.characteristic(), 0);
        assert_eq!(RingCtx::parse("F7[a]").unwrap().characteristic(), 7);
        assert_eq!(RingCtx::parse("GF(5)[a,b]").unwrap().characteristic(), 5);
        assert_eq!(RingCtx::parse("Q[]").unwrap().nvars(), 0);
        assert!(RingCtx::parse("F8[x]").is_err());
        assert!(RingCtx::parse("F101[x]").is_err());
        assert!(RingCtx::parse("Q[x,x]").is_err());
        assert!(RingCtx::parse("Q[1x]").is_err());
    }

    #[test]
    fn reduction_mod_p() {
        let r = RingCtx::parse("F7[x]").unwrap();
        assert_eq!(r.reduce(&ratio(1, 2)).unwrap(), rat(4));
        assert_eq!(r.reduce(&rat(-1)).unwrap(), rat(6));
        assert!(r.reduce(&ratio(1, 14)).is_err());
        assert_eq!(r.inverse(&rat(3)).unwrap(), rat(5));
    }

    #[test]
    fn fresh_names_get_primes() {
        let r = RingCtx::rational(&["x", "z", "z'"]).unwrap();
        assert_eq!(r.fresh_name("z"), "z''");
        assert_eq!(r.fresh_name("y"), "y");
    }
}
