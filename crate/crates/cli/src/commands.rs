use std::io::Write;

use num_bigint::BigInt;
use rayon::prelude::*;

use polardec_core::audit::{audit_class, ClassAudit};
use polardec_core::classify::{scan_one, Predicate, ScanEntry};
use polardec_core::cluster::render::{render, RenderFormat};
use polardec_core::cluster::{casas_polar_cluster, cluster_size, singularity_cluster};
use polardec_core::decompose::{decompose, total_branch_count};
use polardec_core::eqclass::{enumerate_classes, Bounds, EqClass};
use polardec_core::intersect::{checked_report, closed_form_report};
use polardec_core::series::verify_class;
use polardec_core::Error;

use crate::args::{
    BoundArgs, Cli, Command, DecomposeArgs, EnriquesArgs, ScanArgs, ScanPredicate, VerifyMode,
    Which,
};
use crate::report::{self, Diagnostics};
use crate::Failure;

/// Environment variable holding the worker count for scans and sweeps.
pub const WORKERS_VAR: &str = "POLARDEC_WORKERS";

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose(args) => decompose_cmd(&args, out),
        Command::Matrix(args) => decompose_cmd(
            &DecomposeArgs {
                class: args.class,
                output: args.output,
                matrix_only: true,
                diagnostics: false,
            },
            out,
        ),
        Command::Enriques(args) => enriques_cmd(&args, out),
        Command::Verify { mode } => match mode {
            VerifyMode::Cluster {
                bounds,
                verbose,
                json,
            } => verify_cluster(bounds, verbose, json, out),
            VerifyMode::Series {
                classes,
                seed,
                retries,
                json,
            } => verify_series(&classes, seed, retries, json, out),
        },
        Command::Scan(args) => scan_cmd(&args, out),
    }
}

fn parse_class(spec: &str) -> Result<EqClass, Failure> {
    spec.parse().map_err(|e: Error| Failure::Invalid(e.to_string()))
}

fn bounds(b: BoundArgs) -> Bounds {
    Bounds::new(b.max_n, b.max_m, b.genus)
}

fn pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(WORKERS_VAR) {
        let workers: usize = raw
            .parse()
            .ok()
            .filter(|&w| w > 0)
            .ok_or_else(|| Failure::Invalid(format!("{WORKERS_VAR}={raw:?} is not a positive integer")))?;
        builder = builder.num_threads(workers);
    }
    builder
        .build()
        .map_err(|e| Failure::Invalid(format!("cannot start workers: {e}")))
}

fn emit(out: &mut dyn Write, s: &str) -> Result<(), Failure> {
    out.write_all(s.as_bytes()).map_err(Failure::Io)
}

/// Branches are listed one by one; beyond this the output is useless anyway.
pub const MAX_BRANCHES: u64 = 1 << 16;
/// Above this many cluster points the Noether cross-check is skipped.
pub const MAX_CLUSTER_POINTS: u64 = 1 << 20;

fn check_branch_total(class: &EqClass) -> Result<(), Failure> {
    let total = total_branch_count(class);
    if total > BigInt::from(MAX_BRANCHES) {
        return Err(Failure::Invalid(format!(
            "{class}: the polar has {total} branches, more than {MAX_BRANCHES} can be listed"
        )));
    }
    Ok(())
}

fn check_cluster_size(class: &EqClass) -> Result<(), Failure> {
    let size = cluster_size(class);
    if size > BigInt::from(MAX_CLUSTER_POINTS) {
        return Err(Failure::Invalid(format!(
            "{class}: the cluster has {size} points, more than {MAX_CLUSTER_POINTS}"
        )));
    }
    Ok(())
}

fn decompose_cmd(args: &DecomposeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let class = parse_class(&args.class)?;
    check_branch_total(&class)?;
    let d = decompose(&class);
    let problems = d.check_invariants();
    if !problems.is_empty() {
        return Err(Failure::Verification(problems.join("; ")));
    }
    let report = if check_cluster_size(&class).is_ok() {
        checked_report(&d, &singularity_cluster(&class))
    } else {
        eprintln!("polardec: note: cluster too large for the Noether cross-check; closed forms only");
        closed_form_report(&d)
    }
    .map_err(|e| Failure::Verification(e.to_string()))?;
    let diagnostics = args.diagnostics.then(|| Diagnostics::collect(&d, &report));
    let text = match (args.output.json, args.matrix_only) {
        (true, true) => report::to_pretty(&serde_json::json!({
            "intersections": report::intersections_json(&report)
        })),
        (true, false) => {
            report::to_pretty(&report::decomposition_json(&d, &report, diagnostics.as_ref()))
        }
        (false, true) => report::matrix_text(&report),
        (false, false) => report::decomposition_text(&d, &report, diagnostics.as_ref()),
    };
    emit(out, &text)
}

fn enriques_cmd(args: &EnriquesArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let class = parse_class(&args.class)?;
    check_cluster_size(&class)?;
    let cluster = match args.which {
        Which::Curve => singularity_cluster(&class),
        Which::Polar => casas_polar_cluster(&class),
    };
    let format = if args.text {
        RenderFormat::Text
    } else {
        RenderFormat::Dot
    };
    emit(out, &render(&cluster, format))
}

fn verify_cluster(
    b: BoundArgs,
    verbose: bool,
    json: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let classes: Vec<EqClass> = enumerate_classes(bounds(b)).collect();
    let audits: Vec<ClassAudit> =
        pool()?.install(|| classes.par_iter().map(audit_class).collect());
    let first_failure = audits.iter().find(|a| !a.passed());
    if json {
        emit(out, &report::to_pretty(&report::audit_json(&audits, verbose)))?;
    } else {
        if verbose {
            for a in &audits {
                let status = if a.passed() { "ok" } else { "FAIL" };
                emit(
                    out,
                    &format!("{}\tbranches {}\tpairs {}\t{status}\n", a.class, a.branches, a.pairs),
                )?;
            }
        }
        let branches: usize = audits.iter().map(|a| a.branches).sum();
        let pairs: usize = audits.iter().map(|a| a.pairs).sum();
        let status = if first_failure.is_none() { "pass" } else { "FAIL" };
        emit(
            out,
            &format!(
                "{} classes, {branches} branches, {pairs} pairs: {status}\n",
                audits.len()
            ),
        )?;
    }
    match first_failure {
        None => Ok(()),
        Some(a) => Err(Failure::Verification(format!("{}: {}", a.class, a.failures[0]))),
    }
}

fn verify_series(
    specs: &[String],
    seed: u64,
    retries: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let classes = specs
        .iter()
        .map(|s| parse_class(s))
        .collect::<Result<Vec<_>, _>>()?;
    let mut reports = Vec::new();
    for class in &classes {
        match verify_class(class, seed, retries) {
            Ok(r) => {
                if !json {
                    emit(out, &report::series_text(&r))?;
                }
                reports.push(r);
            }
            Err(e @ Error::DeskScale(_)) => return Err(Failure::Invalid(e.to_string())),
            Err(e) => return Err(Failure::Verification(e.to_string())),
        }
    }
    if json {
        emit(out, &report::to_pretty(&report::series_json(&reports)))?;
    }
    Ok(())
}

fn scan_cmd(args: &ScanArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let predicate = match args.predicate {
        ScanPredicate::GenusDrop => Predicate::GenusDrop,
        ScanPredicate::Smooth => Predicate::Smooth,
    };
    let classes: Vec<EqClass> =
        enumerate_classes(predicate.scan_bounds(bounds(args.bounds))).collect();
    let verdicts: Vec<Result<Option<ScanEntry>, Error>> =
        pool()?.install(|| classes.par_iter().map(|c| scan_one(c, predicate)).collect());
    let mut entries = Vec::new();
    for v in verdicts {
        match v {
            Ok(Some(e)) => entries.push(e),
            Ok(None) => {}
            Err(e) => return Err(Failure::Verification(e.to_string())),
        }
    }
    let text = if args.json {
        report::to_pretty(&report::scan_json(&entries))
    } else {
        report::scan_tsv(&entries)
    };
    emit(out, &text)
}
