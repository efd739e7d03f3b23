//! When the polar loses genus or consists of smooth branches only.
//!
//! Each predicate has an arithmetic form and a constructive form (read off
//! the branches of [`decompose`]); [`scan`] evaluates both and insists they
//! agree.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::decompose::decompose;
use crate::eqclass::{enumerate_classes, validate, Bounds, EqClass};
use crate::error::{Error, Result};

/// `m_r = m_{r-1} + lambda e_{r-1} - 1` for some `lambda >= 1`.
pub fn genus_drop(class: &EqClass) -> bool {
    lambda(class).is_some()
}

/// The `lambda` with `m_r = m_{r-1} + lambda e_{r-1} - 1`, if there is one.
pub fn lambda(class: &EqClass) -> Option<BigInt> {
    let r = class.genus();
    if r == 0 {
        return None;
    }
    let step = class.m(r) - class.m(r - 1) + BigInt::one();
    let (lambda, rem) = step.div_rem(class.e(r - 1));
    rem.is_zero().then_some(lambda)
}

/// `m = lambda n - 1` for genus-one data `(n, m)`.
pub fn smooth_polar(n: &BigInt, m: &BigInt) -> Result<bool> {
    validate(n.clone(), [m.clone()])?;
    Ok(((m + 1u32) % n).is_zero())
}

/// Every branch of the polar has genus at most `r - 1`.
pub fn genus_drop_constructive(class: &EqClass) -> bool {
    decompose(class).max_genus() < class.genus()
}

/// Every branch of the polar is smooth.
pub fn smooth_polar_constructive(class: &EqClass) -> bool {
    decompose(class).branches().all(|b| b.class.is_smooth())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    GenusDrop,
    Smooth,
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::GenusDrop => "genus-drop",
            Predicate::Smooth => "smooth",
        })
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "genus-drop" => Ok(Predicate::GenusDrop),
            "smooth" => Ok(Predicate::Smooth),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

impl Predicate {
    /// Arithmetic and constructive verdicts, in that order.
    pub fn verdicts(self, class: &EqClass) -> (bool, bool) {
        match self {
            Predicate::GenusDrop => (genus_drop(class), genus_drop_constructive(class)),
            Predicate::Smooth => {
                let formula = class.genus() == 1
                    && smooth_polar(class.n(), &class.m(1)).expect("valid genus-one class");
                (formula, class.genus() == 1 && smooth_polar_constructive(class))
            }
        }
    }

    /// Bounds the scan enumerates: the smooth predicate is about genus one.
    pub fn scan_bounds(self, bounds: Bounds) -> Bounds {
        match self {
            Predicate::GenusDrop => bounds,
            Predicate::Smooth => Bounds {
                max_genus: bounds.max_genus.min(1),
                ..bounds
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEntry {
    pub class: EqClass,
    pub max_branch_genus: usize,
    /// Reported for the genus-drop predicate.
    pub lambda: Option<BigInt>,
}

/// Classes within `bounds` satisfying `predicate`, in enumeration order.
/// Both verdicts are computed for every class enumerated, flagged or not.
pub fn scan(bounds: Bounds, predicate: Predicate) -> Result<Vec<ScanEntry>> {
    enumerate_classes(predicate.scan_bounds(bounds))
        .filter_map(|class| scan_one(&class, predicate).transpose())
        .collect()
}

/// Verdict for a single class; `Ok(None)` when the predicate fails.
pub fn scan_one(class: &EqClass, predicate: Predicate) -> Result<Option<ScanEntry>> {
    let (formula, constructive) = predicate.verdicts(class);
    if formula != constructive {
        return Err(Error::TheoremViolation(format!(
            "{class}: {predicate} formula says {formula}, branches say {constructive}"
        )));
    }
    if !formula {
        return Ok(None);
    }
    Ok(Some(ScanEntry {
        max_branch_genus: decompose(class).max_genus(),
        lambda: match predicate {
            Predicate::GenusDrop => lambda(class),
            Predicate::Smooth => None,
        },
        class: class.clone(),
    }))
}
