//! The per-instance pipeline and expectation checks behind `corpus-run`.

use std::path::{Path, PathBuf};
use std::time::Duration;

use galois_core::fixlocus::fixed_locus;
use galois_core::galois::{certificate_from_automorphism, same_point};
use galois_core::hypersurface::{AutWitness, SmoothStatus};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::instance::{Instance, InstanceFile, SCHEMA};
use crate::report;
use crate::CliError;

pub const DEFAULT_SMOOTH_DEADLINE: f64 = 60.0;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the smoothness deadline of every instance.
    pub deadline: Option<Duration>,
    pub field: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: Value, actual: Value) -> Check {
        let pass = expected == actual;
        Check {
            name: name.into(),
            expected,
            actual,
            pass,
        }
    }

    fn json(&self) -> Value {
        json!({
            "check": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.pass,
        })
    }
}

#[derive(Clone, Debug)]
pub struct InstanceOutcome {
    pub name: String,
    pub report: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn smooth_deadline(inst: &Instance, opts: &RunOptions) -> Duration {
    opts.deadline.unwrap_or_else(|| {
        Duration::from_secs_f64(inst.file.smooth_deadline.unwrap_or(DEFAULT_SMOOTH_DEADLINE))
    })
}

/// Runs every computation the instance supports and compares against its
/// expectations.
pub fn run_instance(inst: &Instance, opts: &RunOptions) -> Result<InstanceOutcome, CliError> {
    let x = &inst.x;
    let exp = inst.file.expect.clone().unwrap_or_default();
    let mut checks = Vec::new();
    let deadline = smooth_deadline(inst, opts);

    let (status, smooth_json) = report::smoothness(x, Some(deadline))?;
    if let Some(s) = &exp.smooth {
        if s == "optional" {
            let ok = !matches!(status, SmoothStatus::CertifiedSingular { .. });
            checks.push(Check {
                name: "smoothness (timeout accepted)".into(),
                expected: json!("certified_smooth or timeout"),
                actual: json!(status.label()),
                pass: ok,
            });
        } else {
            checks.push(Check::new("smoothness", json!(s), json!(status.label())));
        }
    }

    let mut auts = Vec::new();
    let mut cert_points = Vec::new();
    for (name, a) in &inst.automorphisms {
        let entry = report::automorphism_entry(inst, name, a, Some(deadline))?;
        let w = x.verify_automorphism(a)?;
        if let Some(w) = &w {
            if x.degree() >= 4 {
                if let Some(c) = certificate_from_automorphism(x, w)? {
                    cert_points.push(c.point);
                }
            }
        }
        if let Some(e) = exp.automorphisms.get(name) {
            aut_checks(inst, name, &entry, w.as_ref(), e, &mut checks)?;
        }
        auts.push(entry);
    }

    let mut points = Vec::new();
    for (name, p) in &inst.candidates {
        let entry = report::point_entry(x, name, p)?;
        if let Some(e) = exp.points.get(name) {
            checks.push(Check::new(
                format!("point {name} verdict"),
                json!(e),
                entry["verdict"].clone(),
            ));
        }
        points.push(entry);
    }

    let mut counts = Value::Null;
    if x.degree() >= 4 {
        let cands = report::candidate_set(inst, &cert_points)?;
        let (c, v) = report::counts(x, &cands)?;
        checks.push(Check {
            name: "counts within bounds".into(),
            expected: report::bounds_json(&c.bounds),
            actual: json!({ "inner": c.inner, "outer": c.outer }),
            pass: report::bound_audit(&c).is_ok(),
        });
        if exp.no_galois_points == Some(true) {
            checks.push(Check::new(
                "no Galois point among candidates",
                json!({ "inner": 0, "outer": 0 }),
                json!({ "inner": c.inner, "outer": c.outer }),
            ));
        }
        if let Some(ce) = &exp.counts {
            if let Some(i) = ce.inner {
                checks.push(Check::new("inner count", json!(i), json!(c.inner)));
            }
            if let Some(o) = ce.outer {
                checks.push(Check::new("outer count", json!(o), json!(c.outer)));
            }
        }
        counts = v;
    }

    let mut groups = Vec::new();
    for (name, gens) in &inst.file.groups {
        let entry = report::group_entry(inst, name, gens)?;
        if let Some(e) = exp.groups.get(name) {
            let mut push = |label: &str, expected: Option<Value>, actual: &Value| {
                if let Some(ev) = expected {
                    checks.push(Check::new(
                        format!("group {name} {label}"),
                        ev,
                        actual.clone(),
                    ));
                }
            };
            let rh = entry.get("riemann_hurwitz").cloned().unwrap_or(Value::Null);
            push("order", e.order.map(|v| json!(v)), &entry["order"]);
            push("abelian", e.abelian.map(|v| json!(v)), &entry["abelian"]);
            push("cyclic", e.cyclic.map(|v| json!(v)), &entry["cyclic"]);
            push("genus", e.genus.map(|v| json!(v)), &rh["genus"]);
            push("2-2g", e.euler_term.map(|v| json!(v)), &rh["euler_term"]);
            push(
                "stabilizer sum",
                e.stabilizer_sum.map(|v| json!(v)),
                &rh["stabilizer_sum"],
            );
            push(
                "stabilizer sum by points",
                e.stabilizer_sum.map(|v| json!(v)),
                &rh["stabilizer_sum_by_points"],
            );
            push(
                "riemann-hurwitz left side",
                e.lhs.map(|v| json!(v)),
                &rh["lhs"],
            );
            push(
                "quotient genus",
                e.quotient_genus.map(|v| json!(v)),
                &rh["quotient_genus"],
            );
            push(
                "fixed counts",
                e.fixed_counts.clone().map(|v| json!(v)),
                &rh["fixed_counts"],
            );
            let ab = entry
                .get("abelian_check")
                .map(|v| v["verdict"].clone())
                .unwrap_or(Value::Null);
            push(
                "abelian check",
                e.abelian_check.clone().map(|v| json!(v)),
                &ab,
            );
        }
        groups.push(entry);
    }

    let mut discrepancies = Vec::new();
    if let Some(dsc) = &exp.discrepancy {
        let a = inst.automorphism(&dsc.automorphism)?;
        let w = x.verify_automorphism(a)?.ok_or_else(|| {
            CliError::Input(format!("{} is not an automorphism", dsc.automorphism))
        })?;
        let locus = fixed_locus(x, &w)?;
        let computed = json!({
            "fixed_points": locus.total_finite_count,
            "max_component_dim": locus.max_component_dim,
        });
        checks.push(Check::new(
            format!("computed fixed locus of {}", dsc.automorphism),
            json!({ "fixed_points": dsc.computed_fixed_points, "max_component_dim": dsc.computed_max_dim }),
            computed.clone(),
        ));
        discrepancies.push(json!({
            "automorphism": dsc.automorphism,
            "statement": dsc.statement,
            "computed": computed,
            "status": "open_question",
        }));
    }

    let passed = checks.iter().all(|c| c.pass);
    let report = json!({
        "schema": SCHEMA,
        "instance": inst.name(),
        "hash": inst.hash,
        "n": x.n(),
        "d": x.degree(),
        "field": inst.field.conductor(),
        "smoothness": smooth_json,
        "automorphisms": auts,
        "points": points,
        "counts": counts,
        "groups": groups,
        "discrepancies": discrepancies,
        "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok(InstanceOutcome {
        name: inst.name().to_string(),
        report,
        checks,
        passed,
    })
}

fn aut_checks(
    inst: &Instance,
    name: &str,
    entry: &Value,
    w: Option<&AutWitness>,
    e: &crate::instance::AutExpect,
    checks: &mut Vec<Check>,
) -> Result<(), CliError> {
    let x = &inst.x;
    let label = |s: &str| format!("automorphism {name} {s}");
    if let Some(v) = e.invariant {
        checks.push(Check::new(
            label("invariant"),
            json!(v),
            entry["invariant"].clone(),
        ));
    }
    if let Some(v) = e.order {
        checks.push(Check::new(label("order"), json!(v), entry["order"].clone()));
    }
    let Some(w) = w else {
        return Ok(());
    };
    if let Some(v) = &e.certificate {
        let actual = entry["certificate"]
            .get("kind")
            .cloned()
            .unwrap_or(json!("none"));
        checks.push(Check::new(label("certificate"), json!(v), actual));
    }
    if let Some(p) = &e.certificate_point {
        let expected = crate::instance::parse_point(p, &inst.field)?;
        let actual = match certificate_from_automorphism(x, w)? {
            Some(c) => same_point(&c.point, &expected)?,
            None => false,
        };
        checks.push(Check::new(
            label("certificate point"),
            json!(true),
            json!(actual),
        ));
    }
    if e.no_certificate_in_powers == Some(true) {
        let powers = report::certified_powers(x, w)?;
        checks.push(Check::new(
            label("powers with a certificate"),
            json!([]),
            json!(powers),
        ));
    }
    if let Some(v) = e.fixed_points {
        checks.push(Check::new(
            label("fixed points"),
            json!(v),
            entry["fixed_locus"]["cardinality"].clone(),
        ));
    }
    if let Some(v) = e.fixed_max_dim {
        checks.push(Check::new(
            label("fixed max dimension"),
            json!(v),
            entry["fixed_locus"]["max_component_dim"].clone(),
        ));
    }
    for (k, v) in &e.power_fixed_max_dim {
        let k: u64 = k
            .parse()
            .map_err(|_| CliError::Input(format!("power {k:?} is not an integer")))?;
        let pw = x
            .verify_automorphism(&w.matrix.pow(k))?
            .ok_or_else(|| CliError::Input("power is not invariant".into()))?;
        let locus = fixed_locus(x, &pw)?;
        checks.push(Check::new(
            label(&format!("power {k} fixed max dimension")),
            json!(v),
            json!(locus.max_component_dim),
        ));
    }
    if let Some(v) = e.n_of_g {
        checks.push(Check::new(
            label("n(g)"),
            json!(v),
            entry["table1"]["n_of_g"].clone(),
        ));
    }
    if let Some(rows) = &e.table1_rows {
        let got: Vec<u64> = entry["table1"]["rows"]
            .as_array()
            .map(|a| a.iter().filter_map(|r| r["row"].as_u64()).collect())
            .unwrap_or_default();
        let ok = rows.iter().all(|r| got.contains(&(*r as u64)));
        checks.push(Check {
            name: label("classification rows"),
            expected: json!(rows),
            actual: json!(got),
            pass: ok,
        });
    }
    if let Some(v) = &e.predicate {
        checks.push(Check::new(
            label("criterion verdict"),
            json!(v),
            entry["predicate"]["verdict"].clone(),
        ));
        checks.push(Check::new(
            label("criterion agrees with certificate"),
            json!(true),
            entry["predicate"]["agrees"].clone(),
        ));
    }
    Ok(())
}

/// The `.json` files of a directory, sorted; a single file stands for itself.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if dir.is_file() {
        return Ok(vec![dir.to_path_buf()]);
    }
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

/// Source of one corpus entry.
#[derive(Clone, Debug)]
pub enum Source {
    File(PathBuf),
    Generated(Box<InstanceFile>),
}

fn outcome_or_error(name: String, r: Result<InstanceOutcome, CliError>) -> InstanceOutcome {
    match r {
        Ok(o) => o,
        Err(e) => InstanceOutcome {
            report: json!({
                "schema": SCHEMA,
                "instance": name,
                "error": e.to_string(),
                "passed": false,
            }),
            name,
            checks: Vec::new(),
            passed: false,
        },
    }
}

/// Runs the sources on `jobs` threads; results keep the input order.
pub fn run_all(
    sources: &[Source],
    opts: &RunOptions,
    jobs: usize,
) -> Result<Vec<InstanceOutcome>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    Ok(pool.install(|| {
        sources
            .par_iter()
            .map(|s| match s {
                Source::File(p) => {
                    let name = p
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    outcome_or_error(
                        name,
                        Instance::load(p, opts.field).and_then(|i| run_instance(&i, opts)),
                    )
                }
                Source::Generated(f) => {
                    let text = serde_json::to_string(f).expect("serializable");
                    outcome_or_error(
                        f.name.clone(),
                        Instance::from_json(&text, opts.field).and_then(|i| run_instance(&i, opts)),
                    )
                }
            })
            .collect()
    }))
}

/// Pass/fail matrix over all outcomes.
pub fn summary(outcomes: &[InstanceOutcome]) -> Value {
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name.as_str())
        .collect();
    json!({
        "schema": SCHEMA,
        "instances": outcomes.len(),
        "passed": outcomes.len() - failed.len(),
        "failed": failed,
        "matrix": outcomes.iter().map(|o| json!({
            "instance": o.name,
            "checks": o.checks.len(),
            "failed_checks": o.checks.iter().filter(|c| !c.pass).map(Check::json).collect::<Vec<_>>(),
            "passed": o.passed,
        })).collect::<Vec<_>>(),
        "reports": outcomes.iter().map(|o| o.report.clone()).collect::<Vec<_>>(),
    })
}
