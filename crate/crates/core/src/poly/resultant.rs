use super::{Polynomial, Ring};
use crate::error::{Error, Result};

/// Sylvester resultant of `f` and `g` eliminating `var`.
///
/// The matrix has the `deg g` shifted rows of `f` first, then the `deg f`
/// shifted rows of `g`; the raw determinant is returned with no sign
/// normalization. The result lives in the same ring and does not involve
/// `var`.
pub fn resultant(f: &Polynomial, g: &Polynomial, var: &str) -> Result<Polynomial> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial("resultant input".into()));
    }
    if f.ring() != g.ring() {
        return Err(Error::RingMismatch(format!("{} vs {}", f.ring(), g.ring())));
    }
    let ring = f.ring().clone();
    let idx = ring.index_of(var)?;
    let fc = f.coefficients_at(idx);
    let gc = g.coefficients_at(idx);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    if size == 0 {
        return Ok(Polynomial::one(&ring));
    }
    let zero = Polynomial::zero(&ring);
    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(size);
    // Columns are ordered by descending power of `var`.
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in fc.iter().enumerate() {
            row[shift + m - k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in gc.iter().enumerate() {
            row[shift + n - k] = c.clone();
        }
        rows.push(row);
    }
    Ok(bareiss_determinant(rows, &ring))
}

/// Fraction-free determinant; every intermediate division is exact.
pub(crate) fn bareiss_determinant(mut a: Vec<Vec<Polynomial>>, ring: &Ring) -> Polynomial {
    let n = a.len();
    if n == 0 {
        return Polynomial::one(ring);
    }
    let mut negate = false;
    let mut prev = Polynomial::one(ring);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Polynomial::zero(ring),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, RingCtx};

    #[test]
    fn resultant_examples() {
        let r = RingCtx::parse("Q[x,y]").unwrap();
        let p = |s: &str| parse(s, &r).unwrap();
        assert_eq!(resultant(&p("y^2 - x^3"), &p("2*y"), "y").unwrap(), p("-4*x^3"));
        assert_eq!(resultant(&p("y - x"), &p("y + x"), "y").unwrap(), p("2*x"));
        assert_eq!(resultant(&p("y^3 + x*y - 1"), &p("1"), "y").unwrap(), p("1"));
        assert!(resultant(&p("0"), &p("y"), "y").is_err());
        assert!(resultant(&p("y"), &p("y"), "z").is_err());
    }

    #[test]
    fn common_root_kills_resultant() {
        let r = RingCtx::parse("Q[x,y]").unwrap();
        let p = |s: &str| parse(s, &r).unwrap();
        let f = &p("y - x") * &p("y^2 + x + 1");
        let g = &p("y - x") * &p("y + 3");
        assert!(resultant(&f, &g, "y").unwrap().is_zero());
    }
}
