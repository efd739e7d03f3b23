//! Integer polynomials: dense univariate in `x`, sparse bivariate in `(x, y)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::trunc::TruncSeries;
use crate::error::{Error, Result};

/// Dense `Z[x]` polynomial, coefficient of `x^i` at index `i`, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UPoly(Vec<BigInt>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    /// `c x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        UPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut v: Vec<BigInt>) -> Self {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        UPoly(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let len = self.0.len().max(other.0.len());
        let zero = BigInt::zero();
        let v = (0..len)
            .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
            .collect();
        UPoly::from_coeffs(v)
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(v)
    }

    pub fn scale(&self, c: &BigInt) -> UPoly {
        UPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    /// Divides every coefficient by `d`, failing unless all divisions are exact.
    pub fn div_exact(&self, d: &BigInt) -> Result<UPoly> {
        let mut v = Vec::with_capacity(self.0.len());
        for a in &self.0 {
            let (q, r) = a.div_rem(d);
            if !r.is_zero() {
                return Err(Error::Degenerate(format!("{a} is not divisible by {d}")));
            }
            v.push(q);
        }
        Ok(UPoly::from_coeffs(v))
    }
}

/// Sparse polynomial in `Z[x, y]`, keyed by `(x exponent, y exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl IntPoly2 {
    pub fn zero() -> Self {
        IntPoly2::default()
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), BigInt)>,
    {
        let mut p = IntPoly2::zero();
        for (exp, c) in terms {
            p.add_term(exp, c);
        }
        p
    }

    /// `sum_k c_k(x) y^k`
    pub fn from_y_coeffs(coeffs: &[UPoly]) -> Self {
        let mut p = IntPoly2::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (i, a) in c.coeffs().iter().enumerate() {
                p.add_term((exp32(i), exp32(k)), a.clone());
            }
        }
        p
    }

    pub fn add_term(&mut self, exp: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, x: u32, y: u32) -> BigInt {
        self.terms.get(&(x, y)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, y)| y).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(x, _)| x).max()
    }

    /// Degree of the lowest nonzero homogeneous part, i.e. the multiplicity at the origin.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(x, y)| x + y).min()
    }

    pub fn add(&self, other: &IntPoly2) -> IntPoly2 {
        let mut out = self.clone();
        for (&exp, c) in &other.terms {
            out.add_term(exp, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly2 {
        IntPoly2::from_terms(self.terms.iter().map(|(&e, a)| (e, a * c)))
    }

    pub fn derivative_x(&self) -> IntPoly2 {
        IntPoly2::from_terms(
            self.terms
                .iter()
                .filter(|(&(x, _), _)| x > 0)
                .map(|(&(x, y), c)| ((x - 1, y), c * x)),
        )
    }

    pub fn derivative_y(&self) -> IntPoly2 {
        IntPoly2::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, y), _)| y > 0)
                .map(|(&(x, y), c)| ((x, y - 1), c * y)),
        )
    }

    /// `P(x(t), y(t))` modulo `t^order`.
    pub fn eval_series(&self, x: &TruncSeries, y: &TruncSeries, order: usize) -> TruncSeries {
        let x = x.truncate(order);
        let y = y.truncate(order);
        let max_x = self.degree_x().unwrap_or(0) as usize;
        let max_y = self.degree_y().unwrap_or(0) as usize;
        let powers = |base: &TruncSeries, top: usize| {
            let mut out = vec![TruncSeries::one().truncate(order)];
            for k in 1..=top {
                let next = out[k - 1].mul(base).truncate(order);
                out.push(next);
            }
            out
        };
        let xs = powers(&x, max_x);
        let ys = powers(&y, max_y);
        let mut acc = TruncSeries::zero().truncate(order);
        for (&(i, j), c) in &self.terms {
            let term = xs[i as usize].mul(&ys[j as usize]).scale_int(c).truncate(order);
            acc = acc.add(&term);
        }
        acc
    }
}

fn exp32(i: usize) -> u32 {
    u32::try_from(i).expect("exponent fits in u32")
}

impl fmt::Display for IntPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest total degree first, then by y degree
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(x, y)| (std::cmp::Reverse(x + y), std::cmp::Reverse(y)));
        for (idx, &&(x, y)) in keys.iter().enumerate() {
            let c = &self.terms[&(x, y)];
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            let mut parts = Vec::new();
            if !abs.is_one() || (x == 0 && y == 0) {
                parts.push(abs.to_string());
            }
            for (var, e) in [("x", x), ("y", y)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn cusp() -> IntPoly2 {
        IntPoly2::from_terms([((0, 2), b(1)), ((3, 0), b(-1))])
    }

    #[test]
    fn upoly_arithmetic() {
        let p = UPoly::from_coeffs(vec![b(1), b(1)]);
        let sq = p.mul(&p);
        assert_eq!(sq.coeffs(), [b(1), b(2), b(1)]);
        assert_eq!(sq.add(&p.scale(&b(-2))).coeffs(), [b(-1), b(0), b(1)]);
        assert_eq!(sq.scale(&b(4)).div_exact(&b(2)).unwrap().coeffs(), [b(2), b(4), b(2)]);
        assert!(sq.div_exact(&b(2)).is_err());
        assert!(p.add(&p.scale(&b(-1))).is_zero());
    }

    #[test]
    fn derivatives_of_cusp() {
        let f = cusp();
        assert_eq!(f.derivative_x(), IntPoly2::from_terms([((2, 0), b(-3))]));
        assert_eq!(f.derivative_y(), IntPoly2::from_terms([((0, 1), b(2))]));
        let polar = f.derivative_x().add(&f.derivative_y());
        assert_eq!(polar.to_string(), "-3*x^2 + 2*y");
        assert_eq!(polar.order(), Some(1));
        assert_eq!(f.order(), Some(2));
        assert_eq!(f.degree_y(), Some(2));
    }

    #[test]
    fn terms_cancel() {
        let mut p = cusp();
        p.add_term((3, 0), b(1));
        assert_eq!(p, IntPoly2::from_terms([((0, 2), b(1))]));
        assert!(p.add(&p.scale(&b(-1))).is_zero());
    }

    #[test]
    fn eval_on_parametrization() {
        let x = TruncSeries::monomial_int(&b(1), 2);
        let y = TruncSeries::monomial_int(&b(1), 3);
        let v = cusp().eval_series(&x, &y, 20);
        // exact inputs of low degree give an exact zero
        assert_eq!(v, TruncSeries::zero());
        let long_y = TruncSeries::from_int_terms([(3, &b(1)), (40, &b(1))]);
        let w = cusp().eval_series(&x, &long_y, 20);
        assert_eq!(w.order(), Some(20));
        assert_eq!(w.valuation(), None);
        let fy = cusp().derivative_y().eval_series(&x, &y, 20);
        assert_eq!(fy.valuation(), Some(3));
    }
}
