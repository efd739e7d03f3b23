//! Explicit check of `I(f, P(f))` on a sampled member of a class.
//!
//! A Puiseux parametrization `(t^n, y(t))` with small random integer
//! coefficients is drawn, its implicit equation `F` computed exactly, and
//! the order in `t` of `a F_x + b F_y` along the parametrization compared
//! with the total predicted by the decomposition.

pub mod poly;
pub mod trunc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use poly::{IntPoly2, UPoly};
pub use trunc::TruncSeries;

use crate::decompose::decompose;
use crate::eqclass::{to_count, EqClass};
use crate::error::{Error, Result};
use crate::intersect::closed_form_report;

/// Coefficients are drawn from `-COEFF_RANGE..=COEFF_RANGE`.
pub const COEFF_RANGE: i64 = 3;
pub const MAX_N: u64 = 10;
pub const MAX_CONDUCTOR: u64 = 120;
pub const DEFAULT_RETRIES: usize = 5;

fn nonzero_coeff<R: Rng>(rng: &mut R) -> BigInt {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-COEFF_RANGE..=COEFF_RANGE);
    }
    BigInt::from(c)
}

/// `y(t) = t^{m1} + sum a_i t^i` for a random member of `class`.
///
/// Between `m_k` and `m_{k+1}` only exponents divisible by `e_k` carry
/// coefficients, so the characteristic exponents are exactly those of the
/// class; `a_{m_k}` is never zero. Exponents run up to the conductor (and at
/// least to `m_r`).
pub fn sample_parametrization<R: Rng>(class: &EqClass, rng: &mut R) -> TruncSeries {
    let r = class.genus();
    let m: Vec<usize> = (1..=r).map(|k| to_count(&class.m(k))).collect();
    let e: Vec<u64> = (0..=r).map(|k| class.e(k).to_u64().expect("small gcd")).collect();
    let top = to_count(&class.conductor()).max(m[r - 1] + 1);
    let mut terms = vec![(m[0], BigInt::from(1))];
    let mut level = 1;
    for i in m[0] + 1..top {
        while level < r && m[level] <= i {
            level += 1;
        }
        if !(i as u64).is_multiple_of(e[level]) {
            continue;
        }
        let c = if m.contains(&i) {
            nonzero_coeff(rng)
        } else {
            BigInt::from(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE))
        };
        terms.push((i, c));
    }
    TruncSeries::from_int_terms(terms.iter().map(|(k, c)| (*k, c)))
}

pub fn sample_with_seed(class: &EqClass, seed: u64) -> TruncSeries {
    sample_parametrization(class, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Integer coefficients of an exact series.
fn integer_terms(y: &TruncSeries) -> Result<Vec<(usize, BigInt)>> {
    if !y.is_exact() {
        return Err(Error::NotPolynomial);
    }
    let mut out = Vec::new();
    for k in 0..=y.degree().unwrap_or(0) {
        let c = y.coeff(k).expect("exact series");
        if c.is_zero() {
            continue;
        }
        if !c.is_integer() {
            return Err(Error::Degenerate(format!("coefficient {c} of t^{k} is not an integer")));
        }
        out.push((k, c.to_integer()));
    }
    Ok(out)
}

type PolyMatrix = Vec<Vec<UPoly>>;

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let mut out = vec![vec![UPoly::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

/// The polynomial `F(x, y)`, monic of degree `n` in `y`, vanishing on
/// `(t^n, y(t))`.
///
/// `F` is the characteristic polynomial of multiplication by `y(t)` on
/// `Z[x][t] / (t^n - x)` with basis `1, t, ..., t^{n-1}`, computed by the
/// Faddeev-LeVerrier recursion with exact division.
pub fn implicitize(n: usize, y: &TruncSeries) -> Result<IntPoly2> {
    if n == 0 {
        return Err(Error::Degenerate("multiplicity 0".into()));
    }
    let terms = integer_terms(y)?;
    // column j holds y(t) t^j reduced with t^n = x
    let mut a: PolyMatrix = vec![vec![UPoly::zero(); n]; n];
    for j in 0..n {
        for (i, c) in &terms {
            let k = i + j;
            let entry = &mut a[k % n][j];
            *entry = entry.add(&UPoly::monomial(c.clone(), k / n));
        }
    }
    // coefficients c_0..c_n of det(yI - A)
    let mut coeffs = vec![UPoly::zero(); n + 1];
    coeffs[n] = UPoly::constant(BigInt::from(1));
    let mut m: PolyMatrix = vec![vec![UPoly::zero(); n]; n];
    for k in 1..=n {
        let mut next = if k == 1 { m.clone() } else { mat_mul(&a, &m) };
        for (d, row) in next.iter_mut().enumerate() {
            row[d] = row[d].add(&coeffs[n - k + 1]);
        }
        m = next;
        let am = mat_mul(&a, &m);
        let mut trace = UPoly::zero();
        for (d, row) in am.iter().enumerate() {
            trace = trace.add(&row[d]);
        }
        coeffs[n - k] = trace.scale(&BigInt::from(-1)).div_exact(&BigInt::from(k))?;
    }
    Ok(IntPoly2::from_y_coeffs(&coeffs))
}

/// `a F_x + b F_y`.
pub fn polar_poly(f: &IntPoly2, a: &BigInt, b: &BigInt) -> IntPoly2 {
    f.derivative_x().scale(a).add(&f.derivative_y().scale(b))
}

/// One sampled member and polar direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub parametrization: TruncSeries,
    pub direction: (BigInt, BigInt),
    /// Working truncation in `t`.
    pub truncation: usize,
    pub equation_terms: usize,
    /// `F(t^n, y(t))` vanishes modulo `t^truncation`.
    pub vanishes: bool,
    pub degree_y: Option<u32>,
    pub curve_multiplicity: Option<u32>,
    pub polar_multiplicity: Option<u32>,
    /// `ord_t (a F_x + b F_y)(t^n, y(t))`, `None` if beyond the truncation.
    pub polar_order: Option<usize>,
    /// `ord_t F_y(t^n, y(t))`.
    pub fy_order: Option<usize>,
}

impl Attempt {
    fn passes(&self, n: usize, expected: usize) -> bool {
        self.vanishes
            && self.degree_y == Some(n as u32)
            && self.curve_multiplicity == Some(n as u32)
            && self.polar_multiplicity == Some(n as u32 - 1)
            && self.polar_order == Some(expected)
            && self.fy_order == Some(expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport {
    pub class: EqClass,
    pub seed: u64,
    /// `sum_b I(b, f)` over the branches of the decomposition.
    pub expected: BigInt,
    pub attempts: Vec<Attempt>,
    pub passed: bool,
}

impl SeriesReport {
    pub fn resamples(&self) -> usize {
        self.attempts.len().saturating_sub(1)
    }

    pub fn observed(&self) -> Option<usize> {
        self.attempts.last().and_then(|a| a.polar_order)
    }
}

/// Rejects classes too large for exact elimination at interactive speed.
pub fn check_desk_scale(class: &EqClass) -> Result<()> {
    let c = class.conductor();
    if class.n() > &BigInt::from(MAX_N) || c > BigInt::from(MAX_CONDUCTOR) {
        return Err(Error::DeskScale(format!(
            "{class} has n = {}, conductor {c}; limits are n <= {MAX_N}, conductor <= {MAX_CONDUCTOR}",
            class.n()
        )));
    }
    Ok(())
}

fn attempt<R: Rng>(class: &EqClass, expected: usize, rng: &mut R) -> Result<Attempt> {
    let n = to_count(class.n());
    let y = sample_parametrization(class, rng);
    let a = BigInt::from(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE));
    let b = nonzero_coeff(rng);
    let f = implicitize(n, &y)?;
    let polar = polar_poly(&f, &a, &b);
    let fy = f.derivative_y();
    let x = TruncSeries::monomial_int(&BigInt::from(1), n);
    let ceiling = 8 * (expected + n + 1);
    let mut truncation = expected + n + 1;
    loop {
        let polar_order = polar.eval_series(&x, &y, truncation).valuation();
        let fy_order = fy.eval_series(&x, &y, truncation).valuation();
        let settled = polar_order.is_some() && fy_order.is_some();
        if settled || truncation >= ceiling {
            return Ok(Attempt {
                vanishes: f.eval_series(&x, &y, truncation).valuation().is_none(),
                parametrization: y,
                direction: (a, b),
                truncation,
                equation_terms: f.len(),
                degree_y: f.degree_y(),
                curve_multiplicity: f.order(),
                polar_multiplicity: polar.order(),
                polar_order,
                fy_order,
            });
        }
        truncation *= 2;
    }
}

/// Samples members of `class` until one confirms the predicted total, at
/// most `retries + 1` times. A persistent mismatch is a theorem violation.
pub fn verify_class(class: &EqClass, seed: u64, retries: usize) -> Result<SeriesReport> {
    check_desk_scale(class)?;
    let d = decompose(class);
    let expected = closed_form_report(&d)?.total;
    let target = to_count(&expected);
    let n = to_count(class.n());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = Vec::new();
    for _ in 0..=retries {
        let att = attempt(class, target, &mut rng)?;
        let ok = att.passes(n, target);
        attempts.push(att);
        if ok {
            return Ok(SeriesReport {
                class: class.clone(),
                seed,
                expected,
                attempts,
                passed: true,
            });
        }
    }
    let last = attempts.last().expect("at least one attempt");
    Err(Error::TheoremViolation(format!(
        "{class}: ord_t of the polar is {:?} after {} samples, predicted {expected}",
        last.polar_order,
        attempts.len()
    )))
}
