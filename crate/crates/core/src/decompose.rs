//! Factorization of the general polar into Merle packages and branches.
//!
//! Package `k` is read off the even-normalized expansion
//! `[h0, ..., h_s]` of `(m_k - m_{k-1}) / e_{k-1}`: for every odd index
//! `2i - 1` it holds `h_{2i}` equisingular branches whose data come from the
//! convergent `q / p = [h0, ..., h_{2i-1}]`. Each such branch has exponent
//! tuple
//!
//! ```text
//! (p n / e_{k-1}, p m_1 / e_{k-1}, ..., p m_{k-1} / e_{k-1}, p m_{k-1} / e_{k-1} + q)
//! ```
//!
//! which becomes a characteristic-exponent class after dropping the entries
//! that do not lower the running gcd.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{convergent, forced_remainders, normalize_even, Convergent, EuclidExpansion};
use crate::cluster::{singularity_cluster, Cluster, Trace};
use crate::eqclass::{canonicalize_exponents, to_count, EqClass};
use crate::error::{Error, Result};
use crate::Rational;

/// Which of the two block shapes a package comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockCase {
    /// `m_k - m_{k-1} > e_{k-1}`
    Above,
    /// `m_k - m_{k-1} < e_{k-1}`; the block has no free row and starts at the
    /// previous block's terminal point.
    Below,
}

impl fmt::Display for BlockCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockCase::Above => ">",
            BlockCase::Below => "<",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarBranch {
    /// Package index `k`, 1-based.
    pub package: usize,
    /// Chain index `i`: the branch follows rows `0..=2i-1` of block `k`.
    pub chain: usize,
    /// Copy index `j` among the `h_{2i}` equisingular branches.
    pub copy: usize,
    pub convergent: Convergent,
    pub case: BlockCase,
    pub raw_exponents: Vec<BigInt>,
    pub class: EqClass,
    pub multiplicity: BigInt,
}

impl PolarBranch {
    pub fn genus(&self) -> usize {
        self.class.genus()
    }

    pub fn p(&self) -> &BigInt {
        &self.convergent.p
    }

    pub fn q(&self) -> &BigInt {
        &self.convergent.q
    }

    /// Index of the last block row the branch follows.
    pub fn top_row(&self) -> usize {
        2 * self.chain - 1
    }
}

impl fmt::Display for PolarBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi^{}_({},{})", self.package, self.chain, self.copy)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Package {
    pub index: usize,
    /// Even-normalized expansion of the block.
    pub expansion: EuclidExpansion,
    pub branches: Vec<PolarBranch>,
    pub multiplicity: BigInt,
    pub polar_quotient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarDecomposition {
    pub class: EqClass,
    pub packages: Vec<Package>,
    pub multiplicity: BigInt,
}

impl PolarDecomposition {
    /// All branches, package by package.
    pub fn branches(&self) -> impl Iterator<Item = &PolarBranch> + '_ {
        self.packages.iter().flat_map(|p| p.branches.iter())
    }

    pub fn branch_count(&self) -> usize {
        self.packages.iter().map(|p| p.branches.len()).sum()
    }

    pub fn max_genus(&self) -> usize {
        self.branches().map(PolarBranch::genus).max().unwrap_or(0)
    }

    /// Every structural identity the decomposition must satisfy; empty when
    /// all hold.
    pub fn check_invariants(&self) -> Vec<String> {
        let class = &self.class;
        let mut problems = Vec::new();
        let mut total = BigInt::zero();
        for pkg in &self.packages {
            let k = pkg.index;
            let merle = merle_multiplicity(class, k);
            let summed: BigInt = pkg.branches.iter().map(|b| &b.multiplicity).sum();
            if pkg.multiplicity != merle || summed != merle {
                problems.push(format!(
                    "package {k}: multiplicity {} / branch sum {summed}, expected {merle}",
                    pkg.multiplicity
                ));
            }
            let count = count_from_expansion(&pkg.expansion);
            if BigInt::from(pkg.branches.len()) != count {
                problems.push(format!(
                    "package {k}: {} branches, expected {count}",
                    pkg.branches.len()
                ));
            }
            for b in &pkg.branches {
                let expect_mult = b.p() * class.n() / class.e(k - 1);
                if b.multiplicity != expect_mult || b.class.n() != &expect_mult {
                    problems.push(format!("{b}: multiplicity {}", b.multiplicity));
                }
                let expect_genus = if b.p().is_one() { k - 1 } else { k };
                if b.genus() != expect_genus {
                    problems.push(format!("{b}: genus {} expected {expect_genus}", b.genus()));
                }
                let below = b.case == BlockCase::Below;
                if below != pkg.expansion.quotients()[0].is_zero() || below != (b.q() <= b.p()) {
                    problems.push(format!("{b}: case tag {} inconsistent", b.case));
                }
            }
            total += &pkg.multiplicity;
        }
        if total != class.n() - 1 || self.multiplicity != total {
            problems.push(format!("total multiplicity {total}, expected {}", class.n() - 1));
        }
        problems
    }
}

/// `d_0 d_1 ... d_{i-1} (d_i - 1)`.
pub fn merle_multiplicity(class: &EqClass, i: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..i {
        acc *= class.d(j);
    }
    acc * (class.d(i) - 1)
}

fn count_from_expansion(normalized: &EuclidExpansion) -> BigInt {
    normalized.quotients().iter().skip(2).step_by(2).sum()
}

pub fn decompose(class: &EqClass) -> PolarDecomposition {
    let packages: Vec<Package> = (1..=class.genus()).map(|k| package(class, k)).collect();
    let multiplicity = packages.iter().map(|p| &p.multiplicity).sum();
    PolarDecomposition {
        class: class.clone(),
        packages,
        multiplicity,
    }
}

fn package(class: &EqClass, k: usize) -> Package {
    let raw = class.block_expansion(k).expect("package index within genus");
    let expansion = normalize_even(&raw);
    let case = if class.block_exceeds(k) {
        BlockCase::Above
    } else {
        BlockCase::Below
    };
    let e = class.e(k - 1);
    let mut branches = Vec::new();
    for chain in 1..=expansion.last_index() / 2 {
        let conv = convergent(&expansion, 2 * chain - 1).expect("odd index within expansion");
        let raw_exponents = branch_tuple(class, k, &conv);
        let canonical = canonicalize_exponents(&raw_exponents[0], &raw_exponents[1..])
            .expect("branch tuple ends with a coprime exponent");
        let copies = to_count(&expansion.quotients()[2 * chain]);
        for copy in 1..=copies {
            branches.push(PolarBranch {
                package: k,
                chain,
                copy,
                convergent: conv.clone(),
                case,
                raw_exponents: raw_exponents.clone(),
                class: canonical.clone(),
                multiplicity: &conv.p * class.n() / e,
            });
        }
    }
    let multiplicity = branches.iter().map(|b| &b.multiplicity).sum();
    Package {
        index: k,
        expansion,
        branches,
        multiplicity,
        polar_quotient: class.polar_quotient(k).expect("package index within genus"),
    }
}

fn branch_tuple(class: &EqClass, k: usize, conv: &Convergent) -> Vec<BigInt> {
    let e = class.e(k - 1);
    let scale = |x: &BigInt| &conv.p * x / e;
    let mut tuple = vec![scale(class.n())];
    tuple.extend(class.exponents()[..k - 1].iter().map(scale));
    tuple.push(scale(&class.m(k - 1)) + &conv.q);
    tuple
}

/// Number of branches in package `j`: the sum of the even-indexed quotients
/// `h_2 + h_4 + ...` of the normalized block expansion.
pub fn branch_count(class: &EqClass, j: usize) -> Result<BigInt> {
    let raw = class.block_expansion(j)?;
    Ok(count_from_expansion(&normalize_even(&raw)))
}

/// Number of branches [`decompose`] would produce.
pub fn total_branch_count(class: &EqClass) -> BigInt {
    (1..=class.genus())
        .map(|k| branch_count(class, k).expect("package index within genus"))
        .sum()
}

/// Per-package multiplicity, polar quotient and branch count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MerleEntry {
    pub package: usize,
    pub multiplicity: BigInt,
    pub polar_quotient: Rational,
    pub branch_count: BigInt,
}

pub fn merle_summary(class: &EqClass) -> Vec<MerleEntry> {
    (1..=class.genus())
        .map(|k| MerleEntry {
            package: k,
            multiplicity: merle_multiplicity(class, k),
            polar_quotient: class.polar_quotient(k).expect("package index within genus"),
            branch_count: branch_count(class, k).expect("package index within genus"),
        })
        .collect()
}

/// Confirms that `b` is one of the branches `decompose(class)` produces.
pub fn check_branch(class: &EqClass, b: &PolarBranch) -> Result<()> {
    let mismatch = |what: &str| Err(Error::BranchMismatch(format!("{b} of {class}: {what}")));
    if b.package == 0 || b.package > class.genus() {
        return mismatch("package index out of range");
    }
    let expansion = normalize_even(&class.block_expansion(b.package)?);
    if b.chain == 0 || 2 * b.chain > expansion.last_index() {
        return mismatch("chain index out of range");
    }
    if b.copy == 0 || BigInt::from(b.copy) > expansion.quotients()[2 * b.chain] {
        return mismatch("copy index out of range");
    }
    let conv = convergent(&expansion, 2 * b.chain - 1)?;
    if conv != b.convergent {
        return mismatch("convergent differs");
    }
    if branch_tuple(class, b.package, &conv) != b.raw_exponents {
        return mismatch("exponent tuple differs");
    }
    if b.multiplicity != &conv.p * class.n() / class.e(b.package - 1) {
        return mismatch("multiplicity differs");
    }
    Ok(())
}

/// Multiplicities of `b` on the support of the singularity cluster of `class`.
pub fn branch_trace(class: &EqClass, b: &PolarBranch) -> Result<Trace> {
    check_branch(class, b)?;
    trace_on(&singularity_cluster(class), class, b)
}

/// As [`branch_trace`], reusing an already built singularity cluster of
/// `class`. The branch itself is not re-validated.
///
/// On blocks before `k` the branch has `m_P(f) p / e_{k-1}`. On block `k` it
/// follows rows `0..=2i-1` (rows `1..=2i-1` when the block starts at the
/// previous terminal) with the remainders forced by its convergent, and it
/// leaves the cluster after that.
pub fn trace_on(curve: &Cluster, class: &EqClass, b: &PolarBranch) -> Result<Trace> {
    let k = b.package;
    if curve.blocks().len() != class.genus() {
        return Err(Error::BranchMismatch(format!(
            "cluster has {} blocks, {class} needs {}",
            curve.blocks().len(),
            class.genus()
        )));
    }
    let e = class.e(k - 1);
    let (p, q) = (b.p(), b.q());
    let mut trace = Trace::zeros(curve.len());
    for block in &curve.blocks()[..k - 1] {
        for &id in block.rows.iter().flatten() {
            let (value, rem) = (curve.value(id) * p).div_rem(e);
            debug_assert!(rem.is_zero());
            trace.0[id.0] = value;
        }
    }
    let block = &curve.blocks()[k - 1];
    let normalized = normalize_even(&block.expansion);
    let top = b.top_row();
    let chain = &normalized.quotients()[..=top];
    let (rho, first_row) = match b.case {
        BlockCase::Above => (forced_remainders(chain, q, p)?, 0),
        BlockCase::Below => {
            let mut shifted = chain.to_vec();
            shifted[0] = BigInt::one();
            (forced_remainders(&shifted, &(p + q), p)?, 1)
        }
    };
    if b.case == BlockCase::Below && trace.get(block.anchor) != &rho[0] {
        return Err(Error::TheoremViolation(format!(
            "{b}: anchor value {} differs from forced value {}",
            trace.get(block.anchor),
            rho[0]
        )));
    }
    for row in first_row..=top {
        let count = to_count(&normalized.quotients()[row]);
        for &id in block.rows[row].iter().take(count) {
            trace.0[id.0] = rho[row].clone();
        }
    }
    Ok(trace)
}
