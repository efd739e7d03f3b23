use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use polardec_core::cluster::{casas_polar_cluster, singularity_cluster};
use polardec_core::decompose::{branch_trace, decompose};
use polardec_core::eqclass::{enumerate_classes, validate, Bounds, EqClass};
use polardec_core::intersect::{
    branch_vs_f, intersection_report, oracle_pair_intersection, pair_intersection,
};

fn small(v: &BigInt) -> i64 {
    v.to_i64().unwrap()
}

/// Continued fraction of `a / b` by repeated division.
fn partial_quotients(mut a: i64, mut b: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while b != 0 {
        out.push(a / b);
        (a, b) = (b, a % b);
    }
    out
}

/// Convergents `(p, q)` with `q / p = [h0, ..., h_i]`, every index.
fn convergents(h: &[i64]) -> Vec<(i64, i64)> {
    (0..h.len())
        .map(|i| {
            // fold from the back: x = h_i, then x = h_j + 1/x
            let (mut num, mut den) = (h[i], 1);
            for &hj in h[..i].iter().rev() {
                (num, den) = (hj * num + den, num);
            }
            (den, num)
        })
        .collect()
}

/// Largest gap plus one, from the generators by brute force.
fn conductor_by_gaps(generators: &[i64]) -> i64 {
    let limit = 4000;
    let mut member = vec![false; limit];
    member[0] = true;
    for s in 1..limit {
        member[s] = generators
            .iter()
            .any(|&g| s as i64 >= g && member[s - g as usize]);
    }
    let last_gap = (0..limit).rev().find(|&s| !member[s]).unwrap_or(0);
    last_gap as i64 + 1
}

#[test]
fn genus_one_branches_follow_odd_convergents() {
    for n in 2..=12i64 {
        for m in n + 1..=50 {
            if n.gcd(&m) != 1 {
                continue;
            }
            let class = validate(n, [m]).unwrap();
            // normalize [h0, ..., h_s] to even length
            let mut h = partial_quotients(m, n);
            if h.len().is_multiple_of(2) {
                *h.last_mut().unwrap() -= 1;
                h.push(1);
            }
            let conv = convergents(&h);
            let mut expected = Vec::new();
            for i in (1..h.len()).step_by(2) {
                let (p, q) = conv[i];
                for _ in 0..h[i + 1] {
                    expected.push((p, q));
                }
            }
            let d = decompose(&class);
            let got: Vec<(i64, i64)> = d.branches().map(|b| (small(b.p()), small(b.q()))).collect();
            assert_eq!(got, expected, "{class}");
            for b in d.branches() {
                let (p, q) = (small(b.p()), small(b.q()));
                if p == 1 {
                    assert!(b.class.is_smooth());
                } else {
                    assert_eq!(b.class, validate(p, [q]).unwrap());
                }
            }
            let branches: Vec<_> = d.branches().collect();
            for (x, a) in branches.iter().enumerate() {
                for b in &branches[x + 1..] {
                    let min = (small(a.p()) * small(b.q())).min(small(b.p()) * small(a.q()));
                    assert_eq!(small(&pair_intersection(&class, a, b).unwrap()), min);
                    assert_eq!(small(&oracle_pair_intersection(&class, a, b).unwrap()), min);
                }
            }
        }
    }
}

#[test]
fn worked_example_end_to_end() {
    let class: EqClass = "8:12,14,15".parse().unwrap();
    let d = decompose(&class);
    let names: Vec<String> = d.branches().map(|b| b.class.to_string()).collect();
    assert_eq!(names, ["K(1)", "K(2,3)", "K(4,6,7)"]);
    let curve: Vec<i64> = singularity_cluster(&class).valuation().iter().map(small).collect();
    assert_eq!(curve, [8, 4, 4, 2, 2, 1, 1]);
    let polar: Vec<i64> = casas_polar_cluster(&class).valuation().iter().map(small).collect();
    assert_eq!(polar, [7, 4, 3, 2, 1, 1, 0]);
    let report = intersection_report(&class).unwrap();
    let pairs: Vec<i64> = report.pairs.iter().map(|p| small(&p.value)).collect();
    assert_eq!(pairs, [3, 6, 13]);
    assert_eq!(small(&report.total), 91);
    // Noether sum 8*4 + 4*2 + 4*2 + 2 + 2 + 1
    let top = d.packages[2].branches[0].clone();
    assert_eq!(small(&branch_vs_f(&class, &top).unwrap()), 53);
    let trace: Vec<i64> = branch_trace(&class, &top).unwrap().values().iter().map(small).collect();
    assert_eq!(trace, [4, 2, 2, 1, 1, 1, 0]);
}

#[test]
fn conductor_matches_semigroup_gaps() {
    for class in enumerate_classes(Bounds::new(10, 60, 3)) {
        let sg = class.semigroup();
        let gens: Vec<i64> = sg.generators.iter().map(small).collect();
        assert_eq!(small(&sg.conductor), conductor_by_gaps(&gens), "{class}");
    }
}

#[test]
fn curve_cluster_squares_and_conductor() {
    for class in enumerate_classes(Bounds::new(12, 80, 4)) {
        let curve = singularity_cluster(&class);
        let squares: BigInt = curve.valuation().iter().map(|v| v * v).sum();
        let minus: BigInt = curve.valuation().iter().map(|v| v * (v - 1)).sum();
        let mut expect = class.n() * class.m(1);
        for w in 1..class.genus() {
            expect += class.e(w) * (class.m(w + 1) - class.m(w));
        }
        assert_eq!(squares, expect, "{class}");
        assert_eq!(minus, class.conductor(), "{class}");
    }
}

fn arb_class() -> impl Strategy<Value = EqClass> {
    (2u64..=16, prop::collection::vec(1u64..40, 1..=4)).prop_map(|(n, steps)| {
        let mut e = n;
        let mut prev = n;
        let mut m = Vec::new();
        for (idx, step) in steps.iter().enumerate() {
            let last = idx + 1 == steps.len();
            let mut next = prev + step;
            // the gcd has to drop, and reach 1 on the final exponent
            while next % e == 0 || (last && e.gcd(&next) != 1) {
                next += 1;
            }
            m.push(next);
            e = e.gcd(&next);
            prev = next;
            if e == 1 {
                break;
            }
        }
        while e != 1 {
            let mut next = prev + 1;
            while e.gcd(&next) != 1 {
                next += 1;
            }
            m.push(next);
            e = 1;
            prev = next;
        }
        validate(n, m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn totals_and_multiplicities(class in arb_class()) {
        let d = decompose(&class);
        prop_assert!(d.check_invariants().is_empty());
        let mult: BigInt = d.branches().map(|b| &b.multiplicity).sum();
        prop_assert_eq!(mult, class.n() - 1);
        let report = intersection_report(&class).unwrap();
        prop_assert_eq!(report.total, class.milnor() + class.n() - 1);
        prop_assert!(report.pairs.iter().all(|p| !p.value.is_zero()));
    }

    #[test]
    fn branch_genus_bounds(class in arb_class()) {
        for b in decompose(&class).branches() {
            prop_assert!(b.genus() == b.package || b.genus() + 1 == b.package);
        }
    }

    #[test]
    fn traces_sum_to_polar_valuation(class in arb_class()) {
        let curve = singularity_cluster(&class);
        let mut sum = vec![BigInt::zero(); curve.len()];
        for b in decompose(&class).branches() {
            for (acc, v) in sum.iter_mut().zip(branch_trace(&class, b).unwrap().values()) {
                *acc += v;
            }
        }
        let polar = casas_polar_cluster(&class);
        prop_assert_eq!(sum.as_slice(), polar.valuation());
    }
}
