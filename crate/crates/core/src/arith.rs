//! Euclidean expansions, even-length continued fractions and convergents.
//!
//! An expansion of `num / den` records the quotient table
//!
//! ```text
//! num     = h0 * den + n1
//! den     = h1 * n1  + n2
//! ...
//! n_{s-1} = h_s * n_s
//! ```
//!
//! and stops at the last divisor `n_s`, which is `gcd(num, den)`. Cluster
//! rows are read off the raw table; branch data uses the normalized form in
//! which the number of quotients is odd.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclidExpansion {
    numerator: BigInt,
    denominator: BigInt,
    quotients: Vec<BigInt>,
    /// `n_1, ..., n_s`; a normalized expansion repeats its last entry.
    remainders: Vec<BigInt>,
    terminal: BigInt,
}

impl EuclidExpansion {
    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn remainders(&self) -> &[BigInt] {
        &self.remainders
    }

    /// The last divisor, equal to `gcd(numerator, denominator)`.
    pub fn terminal(&self) -> &BigInt {
        &self.terminal
    }

    /// Index `s` of the last quotient.
    pub fn last_index(&self) -> usize {
        self.quotients.len() - 1
    }

    pub fn is_even(&self) -> bool {
        self.last_index().is_multiple_of(2)
    }

    /// The divisor `n_a` of row `a`: `n_0` is the denominator.
    pub fn row_value(&self, a: usize) -> &BigInt {
        if a == 0 {
            &self.denominator
        } else {
            &self.remainders[a - 1]
        }
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.numerator.clone(), self.denominator.clone())
    }
}

/// Plain Euclid on `(num, den)`, stopping at the gcd.
pub fn euclid_expansion(num: &BigInt, den: &BigInt) -> Result<EuclidExpansion> {
    if !den.is_positive() {
        return Err(Error::NonPositiveDenominator(den.clone()));
    }
    if num.is_negative() {
        return Err(Error::NegativeNumerator(num.clone()));
    }
    let mut quotients = Vec::new();
    let mut remainders = Vec::new();
    let (mut a, mut b) = (num.clone(), den.clone());
    let terminal = loop {
        let (q, r) = a.div_rem(&b);
        quotients.push(q);
        if r.is_zero() {
            break b;
        }
        remainders.push(r.clone());
        a = std::mem::replace(&mut b, r);
    };
    Ok(EuclidExpansion {
        numerator: num.clone(),
        denominator: den.clone(),
        quotients,
        remainders,
        terminal,
    })
}

/// Rewrite `[h0, ..., h_s]` with `s` odd as `[h0, ..., h_s - 1, 1]`.
///
/// Plain Euclid ends with `h_s >= 2` whenever `s >= 1`, so the rewritten
/// quotient stays positive. Expansions that already have even `s` are
/// returned unchanged.
pub fn normalize_even(e: &EuclidExpansion) -> EuclidExpansion {
    if e.is_even() {
        return e.clone();
    }
    let mut out = e.clone();
    let last = out.quotients.last_mut().expect("expansions are never empty");
    debug_assert!(*last >= BigInt::from(2));
    *last -= 1;
    out.quotients.push(BigInt::one());
    let tail = out.row_value(out.last_index() - 1).clone();
    out.remainders.push(tail);
    out
}

/// Convergent `q_i / p_i = [h0, ..., h_i]` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn ratio(&self) -> Rational {
        Rational::new(self.q.clone(), self.p.clone())
    }
}

pub fn convergent(e: &EuclidExpansion, i: usize) -> Result<Convergent> {
    if i > e.last_index() {
        return Err(Error::IndexOutOfRange {
            index: i,
            min: 0,
            max: e.last_index(),
        });
    }
    Ok(convergent_of(&e.quotients[..=i]))
}

/// Convergent of a nonempty quotient list, via the usual three-term recurrence.
pub(crate) fn convergent_of(quotients: &[BigInt]) -> Convergent {
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    for h in quotients {
        let q_next = h * &q + &q_prev;
        let p_next = h * &p + &p_prev;
        q_prev = std::mem::replace(&mut q, q_next);
        p_prev = std::mem::replace(&mut p, p_next);
    }
    Convergent {
        index: quotients.len() - 1,
        p,
        q,
    }
}

/// Remainder sequence forced by a quotient list on the pair `(q, p)`.
///
/// Runs `rho_{a+1} = rho_{a-1} - h_a * rho_a` from `rho_{-1} = q`,
/// `rho_0 = p` and returns `rho_0, ..., rho_j`. For `q / p = [h0, ..., h_j]`
/// every entry is positive, the last is 1 and the next would be 0; anything
/// else means the precondition was violated.
pub fn forced_remainders(quotients: &[BigInt], q: &BigInt, p: &BigInt) -> Result<Vec<BigInt>> {
    if quotients.is_empty() {
        return Err(Error::ForcedRemainder {
            step: 0,
            reason: "empty quotient list".into(),
        });
    }
    let mut rho = Vec::with_capacity(quotients.len());
    let (mut before, mut current) = (q.clone(), p.clone());
    for (step, h) in quotients.iter().enumerate() {
        if !current.is_positive() {
            return Err(Error::ForcedRemainder {
                step,
                reason: format!("nonpositive value {current}"),
            });
        }
        let next = &before - h * &current;
        rho.push(current.clone());
        before = std::mem::replace(&mut current, next);
    }
    let last = quotients.len() - 1;
    if !before.is_one() {
        return Err(Error::ForcedRemainder {
            step: last,
            reason: format!("final value {before} is not 1"),
        });
    }
    if !current.is_zero() {
        return Err(Error::ForcedRemainder {
            step: last + 1,
            reason: format!("sequence does not terminate ({current} left)"),
        });
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn expand(a: i64, b: i64) -> EuclidExpansion {
        euclid_expansion(&a.into(), &b.into()).unwrap()
    }

    // Folds the continued fraction from the back; independent of the
    // convergent recurrence.
    fn fold(quotients: &[BigInt]) -> Rational {
        let mut it = quotients.iter().rev();
        let mut acc = Rational::from_integer(it.next().unwrap().clone());
        for h in it {
            acc = Rational::from_integer(h.clone()) + acc.recip();
        }
        acc
    }

    #[test]
    fn euclid_examples() {
        let e = expand(12, 8);
        assert_eq!(e.quotients(), ints(&[1, 2]).as_slice());
        assert_eq!(e.terminal(), &BigInt::from(4));
        assert_eq!(e.remainders(), ints(&[4]).as_slice());

        let e = expand(9, 1);
        assert_eq!(e.quotients(), ints(&[9]).as_slice());
        assert_eq!(e.terminal(), &BigInt::from(1));

        let e = expand(7, 5);
        assert_eq!(e.quotients(), ints(&[1, 2, 2]).as_slice());
        assert_eq!(e.remainders(), ints(&[2, 1]).as_slice());
        assert_eq!(e.terminal(), &BigInt::from(1));
    }

    #[test]
    fn numerator_below_denominator() {
        let e = expand(2, 4);
        assert_eq!(e.quotients(), ints(&[0, 2]).as_slice());
        assert_eq!(e.terminal(), &BigInt::from(2));
    }

    #[test]
    fn euclid_rejects_bad_input() {
        assert!(matches!(
            euclid_expansion(&3.into(), &0.into()),
            Err(Error::NonPositiveDenominator(_))
        ));
        assert!(matches!(
            euclid_expansion(&(-3).into(), &2.into()),
            Err(Error::NegativeNumerator(_))
        ));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_even(&expand(12, 8)).quotients(), ints(&[1, 1, 1]).as_slice());
        assert_eq!(normalize_even(&expand(7, 5)).quotients(), ints(&[1, 2, 2]).as_slice());
        assert_eq!(normalize_even(&expand(3, 1)).quotients(), ints(&[3]).as_slice());
        let n = normalize_even(&expand(1, 2));
        assert_eq!(n.quotients(), ints(&[0, 1, 1]).as_slice());
        assert_eq!(n.remainders(), ints(&[1, 1]).as_slice());
    }

    #[test]
    fn convergent_examples() {
        let c = convergent(&normalize_even(&expand(12, 8)), 1).unwrap();
        assert_eq!((c.p, c.q), (1.into(), 2.into()));
        let c = convergent(&expand(7, 5), 1).unwrap();
        assert_eq!((c.p, c.q), (2.into(), 3.into()));
        let c = convergent(&expand(6, 1), 0).unwrap();
        assert_eq!((c.p, c.q), (1.into(), 6.into()));
        assert!(matches!(
            convergent(&expand(6, 1), 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn forced_remainder_examples() {
        assert_eq!(
            forced_remainders(&ints(&[1, 2]), &3.into(), &2.into()).unwrap(),
            ints(&[2, 1])
        );
        assert_eq!(
            forced_remainders(&ints(&[1, 1]), &2.into(), &1.into()).unwrap(),
            ints(&[1, 1])
        );
        assert_eq!(
            forced_remainders(&ints(&[5]), &5.into(), &1.into()).unwrap(),
            ints(&[1])
        );
    }

    #[test]
    fn forced_remainders_detects_mismatch() {
        // 3/2 != [1, 1]
        assert!(forced_remainders(&ints(&[1, 1]), &3.into(), &2.into()).is_err());
        // overshoot gives a negative value
        assert!(forced_remainders(&ints(&[3, 1]), &5.into(), &2.into()).is_err());
    }

    proptest! {
        #[test]
        fn expansion_reconstructs(a in 0i64..5000, b in 1i64..5000) {
            let e = expand(a, b);
            let s = e.last_index();
            let chain = |k: isize| -> BigInt {
                match k {
                    -1 => BigInt::from(a),
                    k if k as usize > s => BigInt::zero(),
                    k => e.row_value(k as usize).clone(),
                }
            };
            for idx in 0..=s {
                let k = idx as isize;
                prop_assert_eq!(chain(k - 1), &e.quotients()[idx] * chain(k) + chain(k + 1));
            }
            prop_assert!(e.remainders().windows(2).all(|w| w[0] > w[1]));
            if s >= 1 {
                prop_assert!(e.quotients()[s] >= BigInt::from(2));
            }
            prop_assert_eq!(e.terminal(), &BigInt::from(a).gcd(&BigInt::from(b)));
            prop_assert_eq!(fold(e.quotients()), e.value());
        }

        #[test]
        fn normalization_preserves_value(a in 0i64..5000, b in 1i64..5000) {
            let e = expand(a, b);
            let n = normalize_even(&e);
            prop_assert!(n.is_even());
            prop_assert_eq!(fold(n.quotients()), e.value());
            prop_assert_eq!(normalize_even(&n), n.clone());
            prop_assert!(n.quotients()[1..].iter().all(|h| h >= &BigInt::one()));
        }

        #[test]
        fn odd_convergents_force_clean_remainders(a in 1i64..5000, b in 1i64..5000) {
            let n = normalize_even(&expand(a, b));
            let mut previous: Option<Convergent> = None;
            for idx in (1..n.last_index()).step_by(2) {
                let c = convergent(&n, idx).unwrap();
                prop_assert!(c.p.gcd(&c.q).is_one());
                prop_assert_eq!(c.ratio(), fold(&n.quotients()[..=idx]));
                let rho = forced_remainders(&n.quotients()[..=idx], &c.q, &c.p).unwrap();
                prop_assert_eq!(rho.len(), idx + 1);
                prop_assert!(rho.last().unwrap().is_one());
                if let Some(prev) = previous {
                    prop_assert!(&prev.q * &c.p > &c.q * &prev.p);
                    prop_assert!(prev.p <= c.p);
                }
                previous = Some(c);
            }
        }
    }
}
