//! Everything the commands print, as JSON values and as text.

use std::fmt::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use polardec_core::audit::ClassAudit;
use polardec_core::classify::ScanEntry;
use polardec_core::decompose::{PolarBranch, PolarDecomposition};
use polardec_core::eqclass::EqClass;
use polardec_core::intersect::{same_package_variants, IntersectionReport};
use polardec_core::series::SeriesReport;
use polardec_core::Rational;

/// Integers go out as JSON numbers of any size.
pub fn int(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("decimal integer is a JSON number"))
}

fn ints(vs: &[BigInt]) -> Value {
    Value::Array(vs.iter().map(int).collect())
}

fn rational(r: &Rational) -> Value {
    json!({ "num": int(r.numer()), "den": int(r.denom()) })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn class_json(class: &EqClass) -> Value {
    json!({
        "n": int(class.n()),
        "m": ints(class.exponents()),
        "e": ints(class.e_chain()),
        "d": ints(&class.d_chain()),
        "genus": class.genus(),
        "conductor": int(&class.conductor()),
    })
}

fn branch_json(b: &PolarBranch) -> Value {
    json!({
        "i": b.chain,
        "j": b.copy,
        "p": int(b.p()),
        "q": int(b.q()),
        "exponents": ints(&b.class.tuple()),
        "genus": b.genus(),
        "multiplicity": int(&b.multiplicity),
    })
}

pub fn intersections_json(report: &IntersectionReport) -> Value {
    let pairs: Vec<Value> = report
        .pairs
        .iter()
        .map(|p| json!({ "a": p.a, "b": p.b, "value": int(&p.value) }))
        .collect();
    json!({
        "pairs": pairs,
        "with_f": ints(&report.with_f),
        "total": int(&report.total),
    })
}

/// Alternative written forms, reported next to the values actually used.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    /// `(package, used, alternative)`
    pub quotients: Vec<(usize, Rational, Rational)>,
    /// `(a, b, used, with leading n, with leading e1 m1)`
    pub same_package: Vec<(usize, usize, BigInt, Rational, Rational)>,
}

impl Diagnostics {
    pub fn collect(d: &PolarDecomposition, report: &IntersectionReport) -> Self {
        let class = &d.class;
        let quotients = d
            .packages
            .iter()
            .map(|p| {
                let alt = class
                    .polar_quotient_as_printed(p.index)
                    .expect("package index within genus");
                (p.index, p.polar_quotient.clone(), alt)
            })
            .collect();
        let branches: Vec<&PolarBranch> = d.branches().collect();
        let same_package = report
            .pairs
            .iter()
            .filter(|e| branches[e.a].package == branches[e.b].package)
            .map(|e| {
                let (with_n, with_e1m1) = same_package_variants(class, branches[e.a], branches[e.b])
                    .expect("branches of this decomposition");
                (e.a, e.b, e.value.clone(), with_n, with_e1m1)
            })
            .collect();
        Diagnostics {
            quotients,
            same_package,
        }
    }

    fn to_json(&self) -> Value {
        let quotients: Vec<Value> = self
            .quotients
            .iter()
            .map(|(k, used, alt)| {
                json!({ "package": k, "used": rational(used), "alternative": rational(alt) })
            })
            .collect();
        let pairs: Vec<Value> = self
            .same_package
            .iter()
            .map(|(a, b, used, n, e1m1)| {
                json!({
                    "a": a,
                    "b": b,
                    "used": int(used),
                    "leading_n": rational(n),
                    "leading_e1m1": rational(e1m1),
                })
            })
            .collect();
        json!({ "polar_quotients": quotients, "same_package_pairs": pairs })
    }
}

pub fn decomposition_json(
    d: &PolarDecomposition,
    report: &IntersectionReport,
    diagnostics: Option<&Diagnostics>,
) -> Value {
    let packages: Vec<Value> = d
        .packages
        .iter()
        .map(|p| {
            json!({
                "index": p.index,
                "multiplicity": int(&p.multiplicity),
                "polar_quotient": rational(&p.polar_quotient),
                "branches": p.branches.iter().map(branch_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut top = Map::new();
    top.insert("class".into(), class_json(&d.class));
    top.insert("packages".into(), Value::Array(packages));
    top.insert("intersections".into(), intersections_json(report));
    if let Some(diag) = diagnostics {
        top.insert("diagnostics".into(), diag.to_json());
    }
    Value::Object(top)
}

fn join(vs: &[BigInt]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn decomposition_text(
    d: &PolarDecomposition,
    report: &IntersectionReport,
    diagnostics: Option<&Diagnostics>,
) -> String {
    let class = &d.class;
    let mut out = String::new();
    writeln!(
        out,
        "{class}  e=({})  d=({})  genus {}  conductor {}",
        join(class.e_chain()),
        join(&class.d_chain()),
        class.genus(),
        class.conductor()
    )
    .unwrap();
    let mut idx = 0;
    for p in &d.packages {
        writeln!(
            out,
            "package {}: multiplicity {}, polar quotient {}, {} branch{}",
            p.index,
            p.multiplicity,
            p.polar_quotient,
            p.branches.len(),
            if p.branches.len() == 1 { "" } else { "es" }
        )
        .unwrap();
        for b in &p.branches {
            let shown = if b.class.is_smooth() {
                "smooth".to_string()
            } else {
                b.class.to_string()
            };
            writeln!(
                out,
                "  [{idx}] {b}  (p,q)=({},{})  {}  genus {}  multiplicity {}  I(.,f)={}",
                b.p(),
                b.q(),
                shown,
                b.genus(),
                b.multiplicity,
                report.with_f[idx]
            )
            .unwrap();
            idx += 1;
        }
    }
    out.push_str(&matrix_text(report));
    if let Some(diag) = diagnostics {
        out.push_str("diagnostics:\n");
        for (k, used, alt) in &diag.quotients {
            writeln!(out, "  package {k}: polar quotient {used}, alternative form {alt}").unwrap();
        }
        for (a, b, used, n, e1m1) in &diag.same_package {
            writeln!(
                out,
                "  I([{a}],[{b}]) = {used}; leading n gives {n}, leading e1*m1 gives {e1m1}"
            )
            .unwrap();
        }
    }
    out
}

/// Square matrix with `-` on the diagonal, then the curve column and the total.
pub fn matrix_text(report: &IntersectionReport) -> String {
    let n = report.branch_count;
    let cell = |a: usize, b: usize| {
        report
            .get(a, b)
            .map_or_else(|| "-".to_string(), ToString::to_string)
    };
    let mut width = 1;
    for a in 0..n {
        for b in 0..n {
            width = width.max(cell(a, b).len());
        }
    }
    let mut out = String::from("intersections:\n");
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| format!("{:>width$}", cell(a, b))).collect();
        writeln!(out, "  {}  | f: {}", row.join(" "), report.with_f[a]).unwrap();
    }
    writeln!(out, "I(f, P(f)) = {}", report.total).unwrap();
    out
}

pub fn audit_json(audits: &[ClassAudit], verbose: bool) -> Value {
    let failures: Vec<Value> = audits
        .iter()
        .filter(|a| !a.passed())
        .map(|a| json!({ "class": a.class.to_string(), "failures": a.failures }))
        .collect();
    let mut top = Map::new();
    top.insert("classes".into(), json!(audits.len()));
    top.insert("branches".into(), json!(audits.iter().map(|a| a.branches).sum::<usize>()));
    top.insert("pairs".into(), json!(audits.iter().map(|a| a.pairs).sum::<usize>()));
    top.insert("pass".into(), json!(failures.is_empty()));
    top.insert("failures".into(), Value::Array(failures));
    if verbose {
        let per: Vec<Value> = audits
            .iter()
            .map(|a| {
                json!({
                    "class": a.class.to_string(),
                    "branches": a.branches,
                    "pairs": a.pairs,
                    "pass": a.passed(),
                })
            })
            .collect();
        top.insert("per_class".into(), Value::Array(per));
    }
    Value::Object(top)
}

pub fn series_json(reports: &[SeriesReport]) -> Value {
    let items: Vec<Value> = reports
        .iter()
        .map(|r| {
            let last = r.attempts.last().expect("at least one attempt");
            json!({
                "class": r.class.to_string(),
                "seed": r.seed,
                "predicted": int(&r.expected),
                "observed": last.polar_order,
                "fy_order": last.fy_order,
                "resamples": r.resamples(),
                "truncation": last.truncation,
                "parametrization": last.parametrization.to_string(),
                "direction": [int(&last.direction.0), int(&last.direction.1)],
                "pass": r.passed,
            })
        })
        .collect();
    Value::Array(items)
}

pub fn series_text(r: &SeriesReport) -> String {
    let last = r.attempts.last().expect("at least one attempt");
    let observed = last
        .polar_order
        .map_or_else(|| "none".to_string(), |o| o.to_string());
    format!(
        "{}\tseed {}\tpredicted {}\tobserved {}\tresamples {}\t{}\n",
        r.class,
        r.seed,
        r.expected,
        observed,
        r.resamples(),
        if r.passed { "pass" } else { "FAIL" }
    )
}

pub fn scan_json(entries: &[ScanEntry]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| {
                json!({
                    "class": e.class.to_string(),
                    "n": int(e.class.n()),
                    "m": ints(e.class.exponents()),
                    "max_branch_genus": e.max_branch_genus,
                    "lambda": e.lambda.as_ref().map(int),
                })
            })
            .collect(),
    )
}

pub fn scan_tsv(entries: &[ScanEntry]) -> String {
    let mut out = String::from("class\tn\tm\tmax_branch_genus\tlambda\n");
    for e in entries {
        let lambda = e.lambda.as_ref().map_or_else(|| "-".to_string(), ToString::to_string);
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            e.class,
            e.class.n(),
            join(e.class.exponents()),
            e.max_branch_genus,
            lambda
        )
        .unwrap();
    }
    out
}
