//! Every structural check on one class, gathered in one place.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::classify::Predicate;
use crate::cluster::{casas_valuation, singularity_cluster, ProximityReport};
use crate::decompose::{decompose, trace_on};
use crate::eqclass::EqClass;
use crate::intersect::checked_report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassAudit {
    pub class: EqClass,
    pub branches: usize,
    pub pairs: usize,
    pub failures: Vec<String>,
}

impl ClassAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the decomposition invariants, the closed-form versus Noether
/// comparison for every pair and for every branch against the curve, the
/// aggregate valuation check and both classification predicates.
pub fn audit_class(class: &EqClass) -> ClassAudit {
    let d = decompose(class);
    let mut failures = d.check_invariants();
    let curve = singularity_cluster(class);
    let branches = d.branch_count();
    let pairs = branches * branches.saturating_sub(1) / 2;

    if let Err(e) = checked_report(&d, &curve) {
        failures.push(e.to_string());
    }

    let mut aggregate = vec![BigInt::zero(); curve.len()];
    for b in d.branches() {
        match trace_on(&curve, class, b) {
            Ok(t) => {
                if !ProximityReport::for_values(&curve, t.values()).is_consistent() {
                    failures.push(format!("{b}: trace breaks a proximity inequality"));
                }
                for (acc, v) in aggregate.iter_mut().zip(t.values()) {
                    *acc += v;
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    let polar = casas_valuation(&curve);
    if aggregate.as_slice() != polar.valuation() {
        failures.push(format!("{class}: summed branch traces differ from the polar valuation"));
    }

    for p in [Predicate::GenusDrop, Predicate::Smooth] {
        let (formula, constructive) = p.verdicts(class);
        if formula != constructive {
            failures.push(format!(
                "{class}: {p} formula says {formula}, branches say {constructive}"
            ));
        }
    }

    ClassAudit {
        class: class.clone(),
        branches,
        pairs,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqclass::{enumerate_classes, validate, Bounds};

    #[test]
    fn worked_example_audits_clean() {
        let a = audit_class(&validate(8, [12, 14, 15]).unwrap());
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!((a.branches, a.pairs), (3, 3));
    }

    #[test]
    fn small_range_audits_clean() {
        for k in enumerate_classes(Bounds::new(8, 40, 3)) {
            let a = audit_class(&k);
            assert!(a.passed(), "{k}: {:?}", a.failures);
        }
    }
}
