//! Intersection multiplicities between polar branches and with the curve.
//!
//! Closed forms, with `S_k = n m_1 + sum_{w=1}^{k-2} e_w (m_{w+1} - m_w)`
//! (the sum of `m_P(f)^2` over the blocks before `k`, zero for `k = 1`):
//!
//! * same package `k`, chains `i <= u`:
//!   `p_i p_u S_k / e_{k-1}^2 + q_u p_i`; for `k = 1` this is
//!   `min(p_i q_u, p_u q_i)`;
//! * packages `l < k`:
//!   `p_l p_k / (e_{l-1} e_{k-1}) (sum_{w<l} m_w (e_{w-1} - e_w) + m_l e_{l-1})`.
//!
//! The oracle recomputes every value with Noether's formula on branch traces.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cluster::{noether_sum, singularity_cluster, Cluster, PointId, Trace};
use crate::decompose::{check_branch, decompose, trace_on, PolarBranch, PolarDecomposition};
use crate::eqclass::EqClass;
use crate::error::{Error, Result};
use crate::Rational;

/// Sum of `m_P(f)^2` over the blocks before `k`.
pub fn prefix_square_sum(class: &EqClass, k: usize) -> BigInt {
    if k <= 1 {
        return BigInt::zero();
    }
    let mut acc = class.n() * class.m(1);
    for w in 1..=k - 2 {
        acc += class.e(w) * (class.m(w + 1) - class.m(w));
    }
    acc
}

fn exact(num: BigInt, den: &BigInt, what: impl FnOnce() -> String) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::TheoremViolation(format!("{}: {num}/{den} is not an integer", what())))
    }
}

/// Orders two same-package branches so the first has the smaller chain index.
fn by_chain<'a>(a: &'a PolarBranch, b: &'a PolarBranch) -> (&'a PolarBranch, &'a PolarBranch) {
    if a.chain <= b.chain {
        (a, b)
    } else {
        (b, a)
    }
}

/// Closed-form `I(a, b)` for two branches of the general polar of `class`.
pub fn pair_intersection(class: &EqClass, a: &PolarBranch, b: &PolarBranch) -> Result<BigInt> {
    check_branch(class, a)?;
    check_branch(class, b)?;
    Ok(closed_form(class, a, b))
}

fn closed_form(class: &EqClass, a: &PolarBranch, b: &PolarBranch) -> BigInt {
    match a.package.cmp(&b.package) {
        Ordering::Equal => same_package(class, a, b),
        Ordering::Less => cross_package(class, a, b),
        Ordering::Greater => cross_package(class, b, a),
    }
}

fn same_package(class: &EqClass, a: &PolarBranch, b: &PolarBranch) -> BigInt {
    let (lo, hi) = by_chain(a, b);
    let k = lo.package;
    if k == 1 {
        return (lo.p() * hi.q()).min(hi.p() * lo.q());
    }
    let e = class.e(k - 1);
    let head = lo.p() * hi.p() * prefix_square_sum(class, k);
    let (head, rem) = head.div_rem(&(e * e));
    debug_assert!(rem.is_zero(), "{class}: same-package head not integral");
    head + hi.q() * lo.p()
}

fn cross_package(class: &EqClass, lower: &PolarBranch, upper: &PolarBranch) -> BigInt {
    let (l, k) = (lower.package, upper.package);
    let num = lower.p() * upper.p() * class.polar_numerator(l);
    let (value, rem) = num.div_rem(&(class.e(l - 1) * class.e(k - 1)));
    debug_assert!(rem.is_zero(), "{class}: cross-package value not integral");
    value
}

/// The same-package value with the leading `n m_1` replaced by `lead`, for
/// comparing against alternative written forms of the formula. Returns a
/// rational because those forms need not be integral.
pub fn same_package_with_lead(
    class: &EqClass,
    a: &PolarBranch,
    b: &PolarBranch,
    lead: &BigInt,
) -> Result<Rational> {
    check_branch(class, a)?;
    check_branch(class, b)?;
    if a.package != b.package {
        return Err(Error::BranchMismatch(format!("{a} and {b} lie in different packages")));
    }
    let (lo, hi) = by_chain(a, b);
    let k = lo.package;
    let e = class.e(k - 1);
    let mut bracket = lead.clone();
    for w in 1..k.saturating_sub(1) {
        bracket += class.e(w) * (class.m(w + 1) - class.m(w));
    }
    let head = Rational::new(lo.p() * hi.p() * bracket, e * e);
    Ok(head + Rational::from_integer(hi.q() * lo.p()))
}

/// Alternative same-package values: leading term `n` and leading term
/// `e_1 m_1`. Neither agrees with Noether's formula in general.
pub fn same_package_variants(
    class: &EqClass,
    a: &PolarBranch,
    b: &PolarBranch,
) -> Result<(Rational, Rational)> {
    let with_n = same_package_with_lead(class, a, b, class.n())?;
    let with_e1m1 = same_package_with_lead(class, a, b, &(class.e(1) * class.m(1)))?;
    Ok((with_n, with_e1m1))
}

/// `I(b, f) = m(b) * polar_quotient(package(b))`.
pub fn branch_vs_f(class: &EqClass, b: &PolarBranch) -> Result<BigInt> {
    check_branch(class, b)?;
    let num = &b.multiplicity * class.polar_numerator(b.package);
    exact(num, class.n(), || format!("I({b}, f) for {class}"))
}

/// Points the two branches have in common by construction: every block
/// before the lower package, then rows `0..=2i-1` of the lower package's
/// block, `i` the smaller chain index when the packages agree.
pub fn shared_prefix(curve: &Cluster, a: &PolarBranch, b: &PolarBranch) -> Vec<PointId> {
    let (lower, upper) = if a.package <= b.package { (a, b) } else { (b, a) };
    let chain = if lower.package == upper.package {
        lower.chain.min(upper.chain)
    } else {
        lower.chain
    };
    let blocks = curve.blocks();
    let mut ids: Vec<PointId> = blocks[..lower.package - 1]
        .iter()
        .flat_map(|blk| blk.rows.iter().flatten().copied())
        .collect();
    let block = &blocks[lower.package - 1];
    for row in &block.rows[..=(2 * chain - 1)] {
        ids.extend(row.iter().copied());
    }
    debug_assert_eq!(ids.first(), Some(&PointId(0)));
    ids
}

fn restricted_noether(ta: &Trace, tb: &Trace, ids: &[PointId]) -> BigInt {
    ids.iter()
        .map(|&id| ta.get(id) * tb.get(id))
        .sum()
}

/// Noether's formula on the two branch traces over their shared prefix.
pub fn oracle_pair_intersection(
    class: &EqClass,
    a: &PolarBranch,
    b: &PolarBranch,
) -> Result<BigInt> {
    check_branch(class, a)?;
    check_branch(class, b)?;
    let curve = singularity_cluster(class);
    let ta = trace_on(&curve, class, a)?;
    let tb = trace_on(&curve, class, b)?;
    Ok(restricted_noether(&ta, &tb, &shared_prefix(&curve, a, b)))
}

/// Noether's formula for `I(b, f)` on the singularity cluster.
pub fn oracle_branch_vs_f(class: &EqClass, b: &PolarBranch) -> Result<BigInt> {
    check_branch(class, b)?;
    let curve = singularity_cluster(class);
    let t = trace_on(&curve, class, b)?;
    Ok(noether_sum(&t, &curve.valuation_trace()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairEntry {
    /// Flattened 0-based branch indices, `a < b`.
    pub a: usize,
    pub b: usize,
    pub value: BigInt,
}

/// Pairwise intersections over all branches of the polar, the column of
/// `I(branch, f)` and their total `I(f, P(f))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionReport {
    pub branch_count: usize,
    pub pairs: Vec<PairEntry>,
    pub with_f: Vec<BigInt>,
    pub total: BigInt,
}

impl IntersectionReport {
    /// Symmetric lookup; `None` on the diagonal or out of range.
    pub fn get(&self, a: usize, b: usize) -> Option<&BigInt> {
        let (a, b) = (a.min(b), a.max(b));
        if a == b || b >= self.branch_count {
            return None;
        }
        // row-major upper triangle
        let n = self.branch_count;
        let idx = a * (2 * n - a - 1) / 2 + (b - a - 1);
        self.pairs.get(idx).map(|e| &e.value)
    }
}

/// Closed-form report, every entry checked against the Noether oracle and
/// the total against `mu + n - 1`.
pub fn intersection_report(class: &EqClass) -> Result<IntersectionReport> {
    let d = decompose(class);
    let curve = singularity_cluster(class);
    checked_report(&d, &curve)
}

/// As [`intersection_report`], from a decomposition and the matching
/// singularity cluster.
pub fn checked_report(d: &PolarDecomposition, curve: &Cluster) -> Result<IntersectionReport> {
    let class = &d.class;
    let report = closed_form_report(d)?;
    let branches: Vec<&PolarBranch> = d.branches().collect();
    let traces = branches
        .iter()
        .map(|b| trace_on(curve, class, b))
        .collect::<Result<Vec<_>>>()?;
    for entry in &report.pairs {
        let (a, b) = (branches[entry.a], branches[entry.b]);
        let oracle = restricted_noether(&traces[entry.a], &traces[entry.b], &shared_prefix(curve, a, b));
        if oracle != entry.value {
            return Err(Error::TheoremViolation(format!(
                "{class}: I({a}, {b}) closed form {} but Noether gives {oracle}",
                entry.value
            )));
        }
    }
    let valuation = curve.valuation_trace();
    for ((b, t), value) in branches.iter().zip(&traces).zip(&report.with_f) {
        let oracle = noether_sum(t, &valuation);
        if &oracle != value {
            return Err(Error::TheoremViolation(format!(
                "{class}: I({b}, f) closed form {value} but Noether gives {oracle}"
            )));
        }
    }
    let expected = class.milnor() + class.n() - BigInt::one();
    if report.total != expected {
        return Err(Error::TheoremViolation(format!(
            "{class}: I(f, P(f)) = {} but mu + n - 1 = {expected}",
            report.total
        )));
    }
    Ok(report)
}

/// Closed forms only, no oracle.
pub fn closed_form_report(d: &PolarDecomposition) -> Result<IntersectionReport> {
    let class = &d.class;
    let branches: Vec<&PolarBranch> = d.branches().collect();
    let mut pairs = Vec::new();
    for (ia, a) in branches.iter().enumerate() {
        for (ib, b) in branches.iter().enumerate().skip(ia + 1) {
            pairs.push(PairEntry {
                a: ia,
                b: ib,
                value: closed_form(class, a, b),
            });
        }
    }
    let with_f = branches
        .iter()
        .map(|b| branch_vs_f(class, b))
        .collect::<Result<Vec<_>>>()?;
    let total = with_f.iter().sum();
    Ok(IntersectionReport {
        branch_count: branches.len(),
        pairs,
        with_f,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqclass::{enumerate_classes, validate, Bounds};

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn worked_example_pairs() {
        let k = validate(8, [12, 14, 15]).unwrap();
        let d = decompose(&k);
        let b: Vec<&PolarBranch> = d.branches().collect();
        assert_eq!(pair_intersection(&k, b[0], b[1]).unwrap(), int(3));
        assert_eq!(pair_intersection(&k, b[0], b[2]).unwrap(), int(6));
        assert_eq!(pair_intersection(&k, b[1], b[2]).unwrap(), int(13));
        assert_eq!(pair_intersection(&k, b[2], b[1]).unwrap(), int(13));
        for (x, y, v) in [(0, 1, 3), (0, 2, 6), (1, 2, 13)] {
            assert_eq!(oracle_pair_intersection(&k, b[x], b[y]).unwrap(), int(v));
        }
        assert_eq!(branch_vs_f(&k, b[2]).unwrap(), int(53));
        assert_eq!(oracle_branch_vs_f(&k, b[2]).unwrap(), int(53));
        let report = intersection_report(&k).unwrap();
        assert_eq!(report.with_f, [int(12), int(26), int(53)]);
        assert_eq!(report.total, int(91));
        assert_eq!(report.get(2, 0), Some(&int(6)));
        assert_eq!(report.get(1, 1), None);
    }

    #[test]
    fn same_package_examples() {
        let k = validate(10, [15, 22]).unwrap();
        let d = decompose(&k);
        let b = &d.packages[1].branches;
        assert_eq!(pair_intersection(&k, &b[0], &b[1]).unwrap(), int(30));
        assert_eq!(oracle_pair_intersection(&k, &b[0], &b[1]).unwrap(), int(30));
        let (with_n, with_e1m1) = same_package_variants(&k, &b[0], &b[1]).unwrap();
        assert!(!with_n.is_integer());
        assert_eq!(with_e1m1, Rational::from_integer(int(18)));

        let k = validate(5, [7]).unwrap();
        let d = decompose(&k);
        let b = &d.packages[0].branches;
        assert_eq!(pair_intersection(&k, &b[0], &b[1]).unwrap(), int(6));
        assert_eq!(oracle_pair_intersection(&k, &b[0], &b[1]).unwrap(), int(6));
        assert_eq!(branch_vs_f(&k, &b[0]).unwrap(), int(14));
        assert_eq!(intersection_report(&k).unwrap().total, int(28));
    }

    #[test]
    fn cusp_branch() {
        let k = validate(2, [3]).unwrap();
        let d = decompose(&k);
        let b = &d.packages[0].branches[0];
        assert_eq!(branch_vs_f(&k, b).unwrap(), int(3));
        assert_eq!(oracle_pair_intersection(&k, b, b).unwrap(), int(2));
        let curve = singularity_cluster(&k);
        let t = trace_on(&curve, &k, b).unwrap();
        // a smooth branch through the first two points of the cusp cluster
        assert_eq!(noether_sum(&t, &t), int(2));
        assert_eq!(noether_sum(&curve.valuation_trace(), &curve.valuation_trace()), int(6));
        assert_eq!(intersection_report(&k).unwrap().total, int(3));
    }

    #[test]
    fn foreign_branches_rejected() {
        let k57 = validate(5, [7]).unwrap();
        let d = decompose(&k57);
        let k = validate(2, [3]).unwrap();
        let b = &d.packages[0].branches[1];
        assert!(pair_intersection(&k, b, b).is_err());
        assert!(branch_vs_f(&k, b).is_err());
    }

    #[test]
    fn package_one_min_form_is_uniform_form_with_empty_prefix() {
        for k in enumerate_classes(Bounds::new(12, 60, 1)) {
            let d = decompose(&k);
            let b: Vec<&PolarBranch> = d.branches().collect();
            for x in &b {
                for y in &b {
                    let (lo, hi) = by_chain(x, y);
                    assert_eq!(closed_form(&k, x, y), hi.q() * lo.p(), "{k}");
                }
            }
        }
    }

    #[test]
    fn enumerated_reports() {
        for k in enumerate_classes(Bounds::new(12, 80, 4)) {
            let report = intersection_report(&k).unwrap_or_else(|e| panic!("{k}: {e}"));
            assert!(report.pairs.iter().all(|p| p.value > BigInt::zero()));
            let b = report.branch_count;
            assert_eq!(report.pairs.len(), b * b.saturating_sub(1) / 2);
            for p in &report.pairs {
                assert_eq!(report.get(p.b, p.a), Some(&p.value));
            }
        }
    }
}
