//! Power series in `t` with exact rational coefficients.
//!
//! A series either is exact (a polynomial) or is known only modulo
//! `t^order`. Arithmetic never claims more precision than its inputs give.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    /// No trailing zeros; shorter than `order` when that is set.
    coeffs: Vec<Rational>,
    /// `None` for an exact polynomial.
    order: Option<usize>,
}

fn min_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<Rational>, order: Option<usize>) -> Self {
        if let Some(o) = order {
            coeffs.truncate(o);
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TruncSeries { coeffs, order }
    }

    pub fn exact(coeffs: Vec<Rational>) -> Self {
        TruncSeries::new(coeffs, None)
    }

    /// Exact polynomial from `(exponent, integer coefficient)` pairs.
    pub fn from_int_terms<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, &'a BigInt)>,
    {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (k, c) in terms {
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] += Rational::from_integer(c.clone());
        }
        TruncSeries::exact(coeffs)
    }

    pub fn zero() -> Self {
        TruncSeries::exact(Vec::new())
    }

    pub fn one() -> Self {
        TruncSeries::exact(vec![Rational::one()])
    }

    /// `c t^k`
    pub fn monomial_int(c: &BigInt, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::from_integer(c.clone());
        TruncSeries::exact(coeffs)
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Coefficient of `t^k`, `None` when `k` is beyond the known range.
    pub fn coeff(&self, k: usize) -> Option<Rational> {
        if self.order.is_some_and(|o| k >= o) {
            return None;
        }
        Some(self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero))
    }

    /// Degree of the last nonzero coefficient known.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the first nonzero coefficient, `None` if every known coefficient vanishes.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Lower bound for the true valuation; `None` for the exact zero series.
    fn valuation_bound(&self) -> Option<usize> {
        self.valuation().or(self.order)
    }

    /// The series modulo `t^n`.
    pub fn truncate(&self, n: usize) -> Self {
        let order = min_order(self.order, Some(n));
        if self.order.is_none() && self.coeffs.len() <= n {
            // an exact polynomial of low degree stays exact
            return self.clone();
        }
        TruncSeries::new(self.coeffs.clone(), order)
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let order = min_order(self.order, other.order);
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        TruncSeries::new(coeffs, order)
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.neg())
    }

    /// Product; an unknown tail in one factor is shifted by the other's valuation.
    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let (va, vb) = match (self.valuation_bound(), other.valuation_bound()) {
            (Some(a), Some(b)) => (a, b),
            // an exact zero factor
            _ => return TruncSeries::zero(),
        };
        let order = min_order(self.order.map(|o| o + vb), other.order.map(|o| o + va));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return TruncSeries::new(Vec::new(), order);
        }
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(o) = order {
            len = len.min(o);
        }
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        TruncSeries::new(coeffs, order)
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        TruncSeries::new(self.coeffs.iter().map(|a| a * c).collect(), self.order)
    }

    pub fn scale_int(&self, c: &BigInt) -> TruncSeries {
        self.scale(&Rational::from_integer(c.clone()))
    }

    pub fn pow(&self, k: u32) -> TruncSeries {
        let mut acc = TruncSeries::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let body = match (abs.is_one(), k) {
                (_, 0) => abs.to_string(),
                (true, 1) => "t".to_string(),
                (true, _) => format!("t^{k}"),
                (false, 1) => format!("{abs}*t"),
                (false, _) => format!("{abs}*t^{k}"),
            };
            f.write_str(&body)?;
        }
        if first {
            f.write_str("0")?;
        }
        if let Some(o) = self.order {
            write!(f, " + O(t^{o})")?;
        }
        Ok(())
    }
}
