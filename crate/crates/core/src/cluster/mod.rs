//! Clusters of infinitely near points.
//!
//! A cluster is a rooted tree of infinitely near points (each point lies in
//! the first neighbourhood of its parent) together with proximity relations
//! and an integer valuation. The singularity cluster of a branch is built
//! block by block from the Euclidean tables of `(m_k - m_{k-1}, e_{k-1})`;
//! the cluster of its general polar shares the support and lowers the
//! valuations according to row parity.

pub mod render;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::EuclidExpansion;
use crate::eqclass::{to_count, EqClass};
use crate::error::{Error, Result};

pub use render::{render, RenderFormat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Position `P^block_{row,pos}` of a point; the origin is `P^1_{0,1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointLabel {
    pub block: usize,
    pub row: usize,
    pub pos: usize,
}

impl PointLabel {
    pub fn new(block: usize, row: usize, pos: usize) -> Self {
        PointLabel { block, row, pos }
    }

    pub fn is_origin(&self) -> bool {
        (self.block, self.row, self.pos) == (1, 0, 1)
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{},{})", self.block, self.row, self.pos)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Free,
    Satellite,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKind::Free => "free",
            PointKind::Satellite => "satellite",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfNearPoint {
    pub id: PointId,
    pub label: PointLabel,
    pub parent: Option<PointId>,
    /// Points this one is proximate to: the parent, plus one earlier point
    /// for satellites. Empty for the origin.
    pub proximate_to: Vec<PointId>,
}

impl InfNearPoint {
    pub fn kind(&self) -> PointKind {
        if self.proximate_to.len() == 2 {
            PointKind::Satellite
        } else {
            PointKind::Free
        }
    }
}

/// Row structure of one block of a singularity cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub index: usize,
    /// Raw Euclidean table of `(m_k - m_{k-1}, e_{k-1})`.
    pub expansion: EuclidExpansion,
    /// Point ids per row; row 0 is empty when `m_k - m_{k-1} < e_{k-1}`.
    pub rows: Vec<Vec<PointId>>,
    /// `P^k_{0,h0}`, or the previous block's terminal point when `h0 = 0`.
    pub anchor: PointId,
    pub terminal: PointId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    points: Vec<InfNearPoint>,
    valuation: Vec<BigInt>,
    blocks: Vec<Block>,
}

impl Cluster {
    pub fn points(&self) -> &[InfNearPoint] {
        &self.points
    }

    pub fn point(&self, id: PointId) -> &InfNearPoint {
        &self.points[id.0]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn valuation(&self) -> &[BigInt] {
        &self.valuation
    }

    pub fn value(&self, id: PointId) -> &BigInt {
        &self.valuation[id.0]
    }

    /// Empty for hand-built clusters.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_terminals(&self) -> Vec<PointId> {
        self.blocks.iter().map(|b| b.terminal).collect()
    }

    pub fn valuation_trace(&self) -> Trace {
        Trace(self.valuation.clone())
    }

    /// Same support and proximities, new valuation.
    pub fn with_valuation(&self, valuation: Vec<BigInt>) -> Result<Cluster> {
        if valuation.len() != self.points.len() {
            return Err(Error::MalformedCluster(format!(
                "{} values for {} points",
                valuation.len(),
                self.points.len()
            )));
        }
        Ok(Cluster {
            points: self.points.clone(),
            valuation,
            blocks: self.blocks.clone(),
        })
    }

    pub fn same_support(&self, other: &Cluster) -> bool {
        self.points == other.points
    }
}

/// Incremental construction of a cluster; points must be added parents first.
#[derive(Debug, Default)]
pub struct ClusterBuilder {
    points: Vec<InfNearPoint>,
    labels: HashSet<PointLabel>,
    valuation: Vec<BigInt>,
    blocks: Vec<Block>,
}

impl ClusterBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn check(&self, id: PointId) -> Result<()> {
        if id.0 >= self.points.len() {
            return Err(Error::MalformedCluster(format!("unknown point {id}")));
        }
        Ok(())
    }

    fn push(
        &mut self,
        label: PointLabel,
        parent: Option<PointId>,
        proximate_to: Vec<PointId>,
        value: BigInt,
    ) -> Result<PointId> {
        if value.is_negative() {
            return Err(Error::MalformedCluster(format!("negative value at {label}")));
        }
        if !self.labels.insert(label) {
            return Err(Error::MalformedCluster(format!("duplicate label {label}")));
        }
        let id = PointId(self.points.len());
        self.points.push(InfNearPoint {
            id,
            label,
            parent,
            proximate_to,
        });
        self.valuation.push(value);
        Ok(id)
    }

    pub fn origin(&mut self, label: PointLabel, value: BigInt) -> Result<PointId> {
        if !self.points.is_empty() {
            return Err(Error::MalformedCluster("origin must come first".into()));
        }
        self.push(label, None, Vec::new(), value)
    }

    /// A free point in the first neighbourhood of `parent`.
    pub fn free(&mut self, parent: PointId, label: PointLabel, value: BigInt) -> Result<PointId> {
        self.check(parent)?;
        self.push(label, Some(parent), vec![parent], value)
    }

    /// A satellite point in the first neighbourhood of `parent`, also
    /// proximate to the earlier point `other`.
    pub fn satellite(
        &mut self,
        parent: PointId,
        other: PointId,
        label: PointLabel,
        value: BigInt,
    ) -> Result<PointId> {
        self.check(parent)?;
        self.check(other)?;
        if other == parent {
            return Err(Error::MalformedCluster(format!(
                "satellite {label} needs two distinct proximities"
            )));
        }
        self.push(label, Some(parent), vec![parent, other], value)
    }

    pub fn build(self) -> Cluster {
        Cluster {
            points: self.points,
            valuation: self.valuation,
            blocks: self.blocks,
        }
    }
}

/// The cluster of singularities of a general member of `class`, valued by
/// the effective multiplicities `m_P(f)`.
pub fn singularity_cluster(class: &EqClass) -> Cluster {
    let mut b = ClusterBuilder::new();
    let mut previous_terminal: Option<PointId> = None;
    for k in 1..=class.genus() {
        let expansion = class
            .block_expansion(k)
            .expect("block index within genus");
        let quotients: Vec<usize> = expansion.quotients().iter().map(to_count).collect();
        let mut rows: Vec<Vec<PointId>> = Vec::with_capacity(quotients.len());
        let mut current = previous_terminal;
        for (row, &count) in quotients.iter().enumerate() {
            let value = expansion.row_value(row).clone();
            let mut ids = Vec::with_capacity(count);
            for pos in 1..=count {
                let label = PointLabel::new(k, row, pos);
                let id = match current {
                    None => b.origin(label, value.clone()),
                    Some(parent) if row == 0 || (row == 1 && pos == 1) => {
                        b.free(parent, label, value.clone())
                    }
                    Some(parent) => {
                        let other = if pos == 1 {
                            last_of_row(&rows, row - 2, previous_terminal)
                        } else {
                            last_of_row(&rows, row - 1, previous_terminal)
                        };
                        b.satellite(parent, other, label, value.clone())
                    }
                }
                .expect("construction respects builder rules");
                ids.push(id);
                current = Some(id);
            }
            rows.push(ids);
        }
        let terminal = current.expect("every block adds points");
        let anchor = last_of_row(&rows, 0, previous_terminal);
        b.blocks.push(Block {
            index: k,
            expansion,
            rows,
            anchor,
            terminal,
        });
        previous_terminal = Some(terminal);
    }
    b.build()
}

/// Number of points [`singularity_cluster`] would create: the sum of all
/// block quotients.
pub fn cluster_size(class: &EqClass) -> BigInt {
    (1..=class.genus())
        .map(|k| {
            let expansion = class.block_expansion(k).expect("block index within genus");
            expansion.quotients().iter().sum::<BigInt>()
        })
        .sum()
}

/// `P_{row, h_row}`, where an empty row 0 stands for the previous terminal.
fn last_of_row(rows: &[Vec<PointId>], row: usize, previous_terminal: Option<PointId>) -> PointId {
    rows[row]
        .last()
        .copied()
        .or(previous_terminal)
        .expect("an empty row 0 only occurs after a previous block")
}

/// The cluster of the general polar of a general member of `class`: same
/// support, value `m_P(f) - 1` on even rows and at each block's terminal
/// point, `m_P(f)` on odd rows.
pub fn casas_polar_cluster(class: &EqClass) -> Cluster {
    let curve = singularity_cluster(class);
    casas_valuation(&curve)
}

pub(crate) fn casas_valuation(curve: &Cluster) -> Cluster {
    let terminals = curve.block_terminals();
    let valuation = curve
        .points
        .iter()
        .map(|p| {
            let v = &curve.valuation[p.id.0];
            if p.label.row % 2 == 0 || terminals.contains(&p.id) {
                v - 1
            } else {
                v.clone()
            }
        })
        .collect();
    curve
        .with_valuation(valuation)
        .expect("valuation has one entry per point")
}

/// Values on the points of a cluster, indexed by point id; zero off support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace(pub Vec<BigInt>);

impl Trace {
    pub fn zeros(len: usize) -> Self {
        Trace(vec![BigInt::zero(); len])
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    pub fn get(&self, id: PointId) -> &BigInt {
        &self.0[id.0]
    }

    pub fn support(&self) -> impl Iterator<Item = PointId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_positive())
            .map(|(i, _)| PointId(i))
    }

    /// Last point in tree order with a positive value.
    pub fn last_point(&self) -> Option<PointId> {
        self.support().last()
    }
}

/// Noether's formula: the sum of `a(P) b(P)` over points where both are positive.
pub fn noether_sum(a: &Trace, b: &Trace) -> BigInt {
    a.0.iter()
        .zip(&b.0)
        .filter(|(x, y)| x.is_positive() && y.is_positive())
        .map(|(x, y)| x * y)
        .sum()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProximityReport {
    /// Points with `v(P) < sum_{Q -> P} v(Q)`.
    pub violations: Vec<PointId>,
    /// Points with `v(P) > sum_{Q -> P} v(Q)`.
    pub strict: Vec<PointId>,
}

impl ProximityReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    /// For each point, the values summed over the points proximate to it.
    pub fn proximate_sums(cluster: &Cluster, values: &[BigInt]) -> Vec<BigInt> {
        let mut sums = vec![BigInt::zero(); cluster.len()];
        for q in cluster.points() {
            for target in &q.proximate_to {
                sums[target.0] += &values[q.id.0];
            }
        }
        sums
    }

    pub fn for_values(cluster: &Cluster, values: &[BigInt]) -> Self {
        let sums = Self::proximate_sums(cluster, values);
        let mut report = ProximityReport::default();
        for (idx, (v, s)) in values.iter().zip(&sums).enumerate() {
            if v < s {
                report.violations.push(PointId(idx));
            } else if v > s {
                report.strict.push(PointId(idx));
            }
        }
        report
    }
}

/// Proximity inequalities `v(P) >= sum_{Q -> P} v(Q)` for the cluster's own valuation.
pub fn check_proximity(cluster: &Cluster) -> ProximityReport {
    ProximityReport::for_values(cluster, &cluster.valuation)
}
