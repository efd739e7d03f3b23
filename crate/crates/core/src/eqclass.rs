//! Equisingularity classes `K(n; m1, ..., mr)` of irreducible plane germs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{euclid_expansion, EuclidExpansion};
use crate::error::{ClassViolation, Error, Result};
use crate::Rational;

/// Multiplicity and characteristic exponents of a branch, with the gcd chain
/// `e0 = n, e_k = gcd(e_{k-1}, m_k)` and ratios `d_k = e_{k-1} / e_k`.
///
/// Validated classes have genus at least 1. The only genus-0 value is the
/// smooth class `K(1)`, produced when canonicalizing polar branch tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EqClass {
    n: BigInt,
    m: Vec<BigInt>,
    e: Vec<BigInt>,
}

impl EqClass {
    /// The class of a smooth germ.
    pub fn smooth() -> Self {
        EqClass {
            n: BigInt::one(),
            m: Vec::new(),
            e: vec![BigInt::one()],
        }
    }

    // Callers guarantee validity.
    fn from_valid_parts(n: BigInt, m: Vec<BigInt>) -> Self {
        let mut e = Vec::with_capacity(m.len() + 1);
        e.push(n.clone());
        for mk in &m {
            let next = e.last().unwrap().gcd(mk);
            e.push(next);
        }
        EqClass { n, m, e }
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// `m1, ..., mr`.
    pub fn exponents(&self) -> &[BigInt] {
        &self.m
    }

    pub fn genus(&self) -> usize {
        self.m.len()
    }

    pub fn is_smooth(&self) -> bool {
        self.m.is_empty()
    }

    /// `m_k` with the convention `m_0 = 0`.
    pub fn m(&self, k: usize) -> BigInt {
        if k == 0 {
            BigInt::zero()
        } else {
            self.m[k - 1].clone()
        }
    }

    /// `e_0, ..., e_r`.
    pub fn e_chain(&self) -> &[BigInt] {
        &self.e
    }

    pub fn e(&self, k: usize) -> &BigInt {
        &self.e[k]
    }

    /// `d_k = e_{k-1} / e_k`, with `d_0 = 1`.
    pub fn d(&self, k: usize) -> BigInt {
        if k == 0 {
            BigInt::one()
        } else {
            &self.e[k - 1] / &self.e[k]
        }
    }

    /// `d_1, ..., d_r`.
    pub fn d_chain(&self) -> Vec<BigInt> {
        (1..=self.genus()).map(|k| self.d(k)).collect()
    }

    /// `n, m1, ..., mr` as one tuple.
    pub fn tuple(&self) -> Vec<BigInt> {
        std::iter::once(self.n.clone()).chain(self.m.iter().cloned()).collect()
    }

    fn check_block(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.genus() {
            return Err(Error::IndexOutOfRange {
                index: k,
                min: 1,
                max: self.genus(),
            });
        }
        Ok(())
    }

    /// Expansion of `(m_k - m_{k-1}, e_{k-1})`; its terminal value is `e_k`.
    pub fn block_expansion(&self, k: usize) -> Result<EuclidExpansion> {
        self.check_block(k)?;
        let diff = self.m(k) - self.m(k - 1);
        let exp = euclid_expansion(&diff, &self.e[k - 1])?;
        debug_assert_eq!(exp.terminal(), &self.e[k]);
        Ok(exp)
    }

    /// `m_k - m_{k-1} > e_{k-1}`; the opposite strict inequality holds otherwise.
    pub fn block_exceeds(&self, k: usize) -> bool {
        self.m(k) - self.m(k - 1) > self.e[k - 1]
    }

    /// `sum_{w=1}^{l-1} m_w (e_{w-1} - e_w) + m_l e_{l-1}`, the numerator of
    /// the `l`-th polar quotient.
    pub(crate) fn polar_numerator(&self, l: usize) -> BigInt {
        let mut acc = &self.m[l - 1] * &self.e[l - 1];
        for w in 1..l {
            acc += &self.m[w - 1] * (&self.e[w - 1] - &self.e[w]);
        }
        acc
    }

    /// Polar quotient of package `l`: `I(branch, f) / m(branch)`.
    pub fn polar_quotient(&self, l: usize) -> Result<Rational> {
        self.check_block(l)?;
        Ok(Rational::new(self.polar_numerator(l), self.n.clone()))
    }

    /// The polar quotient formula in the form `(1/n) sum_{k<l} (e_{k-1} - e_k) m_k + m_l`.
    ///
    /// Kept for diagnostics only: it disagrees with branch intersections
    /// computed by Noether's formula as soon as `l >= 2`.
    pub fn polar_quotient_as_printed(&self, l: usize) -> Result<Rational> {
        self.check_block(l)?;
        let mut acc = BigInt::zero();
        for k in 1..l {
            acc += (&self.e[k - 1] - &self.e[k]) * &self.m[k - 1];
        }
        Ok(Rational::new(acc, self.n.clone()) + Rational::from_integer(self.m(l)))
    }

    /// Semigroup generators, conductor and Milnor number.
    pub fn semigroup(&self) -> Semigroup {
        let mut generators = vec![self.n.clone()];
        if let Some(m1) = self.m.first() {
            generators.push(m1.clone());
        }
        for k in 1..self.genus() {
            let next = self.d(k) * &generators[k] + &self.m[k] - &self.m[k - 1];
            generators.push(next);
        }
        let mut conductor = BigInt::one() - &self.n;
        for k in 1..=self.genus() {
            conductor += (self.d(k) - 1) * &generators[k];
        }
        if self.is_smooth() {
            conductor = BigInt::zero();
        }
        Semigroup {
            milnor: conductor.clone(),
            conductor,
            generators,
        }
    }

    pub fn conductor(&self) -> BigInt {
        self.semigroup().conductor
    }

    pub fn milnor(&self) -> BigInt {
        self.semigroup().milnor
    }
}

impl fmt::Display for EqClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({}", self.n)?;
        for m in &self.m {
            write!(f, ",{m}")?;
        }
        write!(f, ")")
    }
}

/// Parses `n:m1,m2,...`.
impl FromStr for EqClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (n, ms) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| parse_err("expected n:m1,m2,..."))?;
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| parse_err("multiplicity is not an integer"))?;
        let m = ms
            .split(',')
            .map(|x| x.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| parse_err("exponent is not an integer"))?;
        validate(n, m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    /// Minimal generators `v0 = n, v1 = m1, v_{k+1} = d_k v_k + m_{k+1} - m_k`.
    pub generators: Vec<BigInt>,
    pub conductor: BigInt,
    pub milnor: BigInt,
}

/// Checks every class invariant and derives the gcd chain.
pub fn validate<N, M, I>(n: N, m: I) -> Result<EqClass>
where
    N: Into<BigInt>,
    M: Into<BigInt>,
    I: IntoIterator<Item = M>,
{
    let n: BigInt = n.into();
    let m: Vec<BigInt> = m.into_iter().map(Into::into).collect();
    if n < BigInt::from(2) {
        return Err(ClassViolation::MultiplicityTooSmall { n }.into());
    }
    if m.is_empty() {
        return Err(ClassViolation::NoExponents.into());
    }
    for (idx, mk) in m.iter().enumerate() {
        if !mk.is_positive() {
            return Err(ClassViolation::NonPositiveExponent { index: idx + 1 }.into());
        }
        if idx > 0 && mk <= &m[idx - 1] {
            return Err(ClassViolation::NotIncreasing { index: idx + 1 }.into());
        }
    }
    if m[0] <= n {
        return Err(ClassViolation::FirstExponentTooSmall { n, m1: m[0].clone() }.into());
    }
    let mut e = n.clone();
    for (idx, mk) in m.iter().enumerate() {
        if mk.is_multiple_of(&e) {
            return Err(ClassViolation::Divides {
                index: idx + 1,
                e,
                m: mk.clone(),
            }
            .into());
        }
        e = e.gcd(mk);
    }
    if !e.is_one() {
        return Err(ClassViolation::FinalGcd { e }.into());
    }
    Ok(EqClass::from_valid_parts(n, m))
}

/// Reduces an exponent tuple `(n', a1 < a2 < ...)` to characteristic form by
/// dropping every entry that does not lower the running gcd.
pub fn canonicalize_exponents(n: &BigInt, exps: &[BigInt]) -> Result<EqClass> {
    if !n.is_positive() {
        return Err(Error::Canonicalize(format!("multiplicity {n} is not positive")));
    }
    if let Some(first) = exps.first() {
        if first <= n {
            return Err(Error::Canonicalize(format!(
                "first exponent {first} does not exceed {n}"
            )));
        }
    }
    if exps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Canonicalize("exponents not strictly increasing".into()));
    }
    let mut running = n.clone();
    let mut kept = Vec::new();
    for a in exps {
        let next = running.gcd(a);
        if next < running {
            kept.push(a.clone());
            running = next;
        }
    }
    if !running.is_one() {
        return Err(Error::Canonicalize(format!("final gcd is {running}, not 1")));
    }
    if n.is_one() {
        return Ok(EqClass::smooth());
    }
    Ok(EqClass::from_valid_parts(n.clone(), kept))
}

/// Bounds for class enumeration: `n <= max_n`, `m_r <= max_m`, genus `<= max_genus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_n: u64,
    pub max_m: u64,
    pub max_genus: usize,
}

impl Bounds {
    pub fn new(max_n: u64, max_m: u64, max_genus: usize) -> Self {
        Bounds {
            max_n,
            max_m,
            max_genus,
        }
    }
}

/// Every valid class within the bounds, once each, in lexicographic order
/// of `(n, m1, m2, ...)`.
pub fn enumerate_classes(bounds: Bounds) -> ClassEnumerator {
    ClassEnumerator {
        bounds,
        next_n: 2,
        buffer: Vec::new().into_iter(),
    }
}

#[derive(Clone, Debug)]
pub struct ClassEnumerator {
    bounds: Bounds,
    next_n: u64,
    buffer: std::vec::IntoIter<EqClass>,
}

impl ClassEnumerator {
    fn fill(&mut self, n: u64) {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        extend_exponents(n, n, n, self.bounds, &mut stack, &mut out);
        self.buffer = out.into_iter();
    }
}

fn extend_exponents(
    n: u64,
    gcd: u64,
    previous: u64,
    bounds: Bounds,
    stack: &mut Vec<u64>,
    out: &mut Vec<EqClass>,
) {
    if stack.len() >= bounds.max_genus {
        return;
    }
    for m in previous + 1..=bounds.max_m {
        if m % gcd == 0 {
            continue;
        }
        let g = gcd.gcd(&m);
        stack.push(m);
        if g == 1 {
            out.push(EqClass::from_valid_parts(
                n.into(),
                stack.iter().map(|&x| BigInt::from(x)).collect(),
            ));
        } else {
            extend_exponents(n, g, m, bounds, stack, out);
        }
        stack.pop();
    }
}

impl Iterator for ClassEnumerator {
    type Item = EqClass;

    fn next(&mut self) -> Option<EqClass> {
        loop {
            if let Some(c) = self.buffer.next() {
                return Some(c);
            }
            if self.next_n > self.bounds.max_n || self.bounds.max_genus == 0 {
                return None;
            }
            let n = self.next_n;
            self.next_n += 1;
            self.fill(n);
        }
    }
}

/// Converts a small nonnegative count, failing loudly on absurd sizes.
pub(crate) fn to_count(x: &BigInt) -> usize {
    x.to_usize().expect("count does not fit in memory")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn validate_examples() {
        let k = validate(8, [12, 14, 15]).unwrap();
        assert_eq!(k.e_chain(), ints(&[8, 4, 2, 1]).as_slice());
        assert_eq!(k.d_chain(), ints(&[2, 2, 2]));
        assert_eq!(k.genus(), 3);
        assert_eq!(k.to_string(), "K(8,12,14,15)");

        let err = validate(4, [6, 8]).unwrap_err();
        assert!(err.to_string().contains("e1 divides m2"), "{err}");

        let k = validate(10, [15, 22]).unwrap();
        assert_eq!(k.e_chain(), ints(&[10, 5, 1]).as_slice());
    }

    #[test]
    fn validate_reports_each_violation() {
        let named = |n: i64, m: &[i64]| validate(n, m.iter().copied()).unwrap_err().to_string();
        assert!(named(1, &[3]).contains("below 2"));
        assert!(named(3, &[]).contains("genus 0"));
        assert!(named(3, &[5, 5]).contains("m2 does not exceed m1"));
        assert!(named(5, &[3]).contains("n < m1"));
        assert!(named(4, &[8]).contains("e0 divides m1"));
        assert!(named(4, &[6]).contains("e_r = 2"));
        assert!(named(4, &[-6]).contains("not positive"));
    }

    #[test]
    fn parse_class_spec() {
        let k: EqClass = "8:12,14,15".parse().unwrap();
        assert_eq!(k, validate(8, [12, 14, 15]).unwrap());
        assert!(matches!("8;12".parse::<EqClass>(), Err(Error::Parse { .. })));
        assert!(matches!("8:x".parse::<EqClass>(), Err(Error::Parse { .. })));
        assert!(matches!("4:6,8".parse::<EqClass>(), Err(Error::InvalidClass(_))));
    }

    #[test]
    fn block_expansions() {
        let k = validate(8, [12, 14, 15]).unwrap();
        let b1 = k.block_expansion(1).unwrap();
        assert_eq!(b1.quotients(), ints(&[1, 2]).as_slice());
        assert_eq!(b1.terminal(), &BigInt::from(4));
        let b3 = k.block_expansion(3).unwrap();
        assert_eq!(b3.quotients(), ints(&[0, 2]).as_slice());
        assert_eq!(b3.terminal(), &BigInt::from(1));
        assert!(k.block_expansion(4).is_err());
        assert!(k.block_expansion(0).is_err());

        let k = validate(10, [15, 22]).unwrap();
        assert_eq!(k.block_expansion(2).unwrap().quotients(), ints(&[1, 2, 2]).as_slice());
    }

    #[test]
    fn polar_quotients() {
        let k = validate(8, [12, 14, 15]).unwrap();
        assert_eq!(k.polar_quotient(3).unwrap(), Rational::new(53.into(), 4.into()));
        assert_eq!(k.polar_quotient(1).unwrap(), Rational::from_integer(12.into()));
        assert_eq!(
            k.polar_quotient_as_printed(3).unwrap(),
            Rational::new(49.into(), 2.into())
        );
        let k = validate(5, [7]).unwrap();
        assert_eq!(k.polar_quotient(1).unwrap(), Rational::from_integer(7.into()));
    }

    #[test]
    fn semigroup_examples() {
        let s = validate(8, [12, 14, 15]).unwrap().semigroup();
        assert_eq!(s.generators, ints(&[8, 12, 26, 53]));
        assert_eq!(s.conductor, BigInt::from(84));
        assert_eq!(s.milnor, BigInt::from(84));
        assert_eq!(validate(5, [7]).unwrap().milnor(), BigInt::from(24));
        for (n, m) in [(2, 3), (3, 7), (7, 12), (9, 20)] {
            assert_eq!(
                validate(n, [m]).unwrap().conductor(),
                BigInt::from((n - 1) * (m - 1))
            );
        }
    }

    #[test]
    fn canonicalize_examples() {
        let k = canonicalize_exponents(&4.into(), &ints(&[6, 7, 8])).unwrap();
        assert_eq!(k, validate(4, [6, 7]).unwrap());
        let k = canonicalize_exponents(&2.into(), &ints(&[3, 4])).unwrap();
        assert_eq!(k, validate(2, [3]).unwrap());
        let k = canonicalize_exponents(&4.into(), &ints(&[6, 7])).unwrap();
        assert_eq!(k, validate(4, [6, 7]).unwrap());
        let k = canonicalize_exponents(&1.into(), &ints(&[2])).unwrap();
        assert!(k.is_smooth());
        assert!(canonicalize_exponents(&4.into(), &ints(&[6, 10])).is_err());
        assert!(canonicalize_exponents(&4.into(), &ints(&[3, 5])).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let all: Vec<String> = enumerate_classes(Bounds::new(4, 10, 1))
            .map(|k| k.to_string())
            .collect();
        for want in ["K(2,3)", "K(3,4)", "K(4,5)", "K(4,7)", "K(3,5)"] {
            assert!(all.contains(&want.to_string()), "{want}");
        }
        assert!(!all.contains(&"K(4,6)".to_string()));

        let two: Vec<String> = enumerate_classes(Bounds::new(2, 9, 1))
            .map(|k| k.to_string())
            .collect();
        assert_eq!(two, ["K(2,3)", "K(2,5)", "K(2,7)", "K(2,9)"]);

        assert!(enumerate_classes(Bounds::new(8, 15, 3)).any(|k| k.to_string() == "K(8,12,14,15)"));
        assert_eq!(enumerate_classes(Bounds::new(1, 10, 3)).count(), 0);
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let bounds = Bounds::new(8, 30, 3);
        let listed: Vec<Vec<BigInt>> = enumerate_classes(bounds).map(|k| k.tuple()).collect();
        let mut sorted = listed.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(listed, sorted);
        // brute force over all increasing tuples of length <= 3
        let mut brute = 0;
        for n in 2..=8i64 {
            for a in 1..=30i64 {
                brute += validate(n, [a]).is_ok() as usize;
                for b in a + 1..=30 {
                    brute += validate(n, [a, b]).is_ok() as usize;
                    for c in b + 1..=30 {
                        brute += validate(n, [a, b, c]).is_ok() as usize;
                    }
                }
            }
        }
        assert_eq!(brute, listed.len());
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(n in 2i64..30, raw in proptest::collection::btree_set(1i64..120, 1..6)) {
            let exps: Vec<BigInt> = raw.into_iter().filter(|&a| a > n).map(BigInt::from).collect();
            if let Ok(k) = canonicalize_exponents(&n.into(), &exps) {
                let again = canonicalize_exponents(k.n(), k.exponents()).unwrap();
                prop_assert_eq!(&again, &k);
                prop_assert!(validate(k.n().clone(), k.exponents().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn enumerated_classes_satisfy_invariants() {
        for k in enumerate_classes(Bounds::new(12, 60, 4)) {
            assert!(k.e(k.genus()).is_one());
            for j in 1..=k.genus() {
                assert!(k.d(j) >= BigInt::from(2));
                assert_eq!(k.block_expansion(j).unwrap().terminal(), k.e(j));
                assert!(!(k.m(j) - k.m(j - 1)).is_multiple_of(k.e(j - 1)));
            }
            assert_eq!(k.milnor(), k.conductor());
        }
    }
}
