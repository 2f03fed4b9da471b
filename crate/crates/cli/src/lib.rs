//! Command-line surface over `galois-core`: instance files, JSON reports and
//! the corpus runner.

pub mod corpus;
pub mod family;
pub mod instance;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use galois_core::hypersurface::SmoothStatus;
use galois_core::Error;
use indexmap::IndexMap;
use serde_json::{json, Value};

use crate::corpus::{RunOptions, Source};
use crate::instance::{parse_point, split_matrix_text, Instance, InstanceFile, SCHEMA};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RANDOM: usize = 12;
pub const BUNDLED_CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Timeout) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(Error::Timeout) => "timeout",
            CliError::Core(
                Error::TheoremViolation(_)
                | Error::Inconsistency(_)
                | Error::BoundViolation(_)
                | Error::NonIntegralGenus(_),
            ) => "consistency",
            _ => "input",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "galois-scope",
    version,
    about = "Galois points of smooth hypersurfaces, exactly"
)]
pub struct Cli {
    /// Enlarge the coefficient field to contain the N-th roots of unity.
    #[arg(long, global = true, value_name = "N")]
    pub field: Option<u32>,
    /// Deadline in seconds for smoothness certification.
    #[arg(long, global = true, value_name = "SECONDS")]
    pub deadline: Option<f64>,
    /// Worker threads for corpus-run.
    #[arg(long, global = true, default_value_t = 1, value_name = "K")]
    pub jobs: usize,
    /// Seed for the random normal-form family.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_name = "S")]
    pub seed: u64,
    /// JSON object of extra named candidate points.
    #[arg(long, global = true, value_name = "FILE")]
    pub candidates: Option<PathBuf>,
    /// Also write the JSON output to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// An instance file, or an inline instance built from flags.
#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Instance file (JSON).
    pub instance: Option<PathBuf>,
    /// Inline defining polynomial, e.g. "x0^4 + x1^4 + x2^4".
    #[arg(long)]
    pub poly: Option<String>,
    /// Dimension n of the hypersurface in P^{n+1} for --poly.
    #[arg(long)]
    pub n: Option<usize>,
    /// Inline automorphism, rows separated by ';', entries by ','; named g1, g2, ...
    #[arg(long = "matrix")]
    pub matrices: Vec<String>,
    /// Inline point, coordinates separated by ','; named p1, p2, ...
    #[arg(long = "point")]
    pub points: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify smoothness through the Jacobian ideal.
    CheckSmooth(InstanceArgs),
    /// Check F(AX) = lambda F(X) for the automorphisms.
    VerifyAut {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        aut: Option<String>,
    },
    /// Projective orders of the automorphisms.
    Order {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        aut: Option<String>,
    },
    /// Fixed loci of the automorphisms (or of a power).
    FixLocus {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        aut: Option<String>,
        #[arg(long, default_value_t = 1)]
        power: u64,
    },
    /// Automorphism-side detection: does the matrix have the shape of a Galois group generator?
    GaloisDetect {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        aut: Option<String>,
        /// Also scan every power of the automorphism.
        #[arg(long)]
        all_powers: bool,
    },
    /// Point-side test: is the point Galois?
    GaloisAtPoint {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        point: Option<String>,
    },
    /// Classification rows of diagonal automorphisms of plane curves.
    ClassifyCyclic {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        aut: Option<String>,
    },
    /// Finite group generated by automorphisms.
    GroupClosure {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        group: Option<String>,
        /// Comma-separated generator names, instead of a named group.
        #[arg(long)]
        gens: Option<String>,
        #[arg(long, default_value_t = report::CLOSURE_BOUND)]
        bound: usize,
    },
    /// Genus of the quotient of a plane curve by a group.
    RhGenus {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
    },
    /// Certified inner and outer points among the candidates, against the bounds.
    CountPoints(InstanceArgs),
    /// Run every instance of a corpus directory and the random family.
    CorpusRun {
        /// Corpus directory or a single instance file; defaults to the bundled corpus.
        dir: Option<PathBuf>,
        /// Number of random normal-form instances to add.
        #[arg(long, default_value_t = DEFAULT_RANDOM)]
        random: usize,
    },
}

/// Exit code and JSON document for a parsed command line.
pub fn run(cli: &Cli) -> (i32, Value) {
    match dispatch(cli) {
        Ok(v) => v,
        Err(e) => (
            e.exit_code(),
            json!({ "schema": SCHEMA, "error": { "kind": e.kind(), "message": e.to_string() } }),
        ),
    }
}

fn deadline(cli: &Cli) -> Option<Duration> {
    cli.deadline.map(Duration::from_secs_f64)
}

fn load(cli: &Cli, args: &InstanceArgs) -> Result<Instance, CliError> {
    let mut inst = match (&args.instance, &args.poly) {
        (Some(path), None) => Instance::load(path, cli.field)?,
        (None, Some(poly)) => inline_instance(cli, args, poly)?,
        (Some(_), Some(_)) => {
            return Err(CliError::Input(
                "give an instance file or --poly, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Input(
                "an instance file or --poly is required".into(),
            ))
        }
    };
    if let Some(path) = &cli.candidates {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let extra: IndexMap<String, Vec<String>> =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("candidates: {e}")))?;
        for (name, coords) in extra {
            let p = parse_point(&coords, &inst.field)?;
            if p.len() != inst.x.nvars() {
                return Err(CliError::Input(format!(
                    "candidate {name} has {} coordinates",
                    p.len()
                )));
            }
            inst.candidates.push((name, p));
        }
    }
    Ok(inst)
}

fn inline_instance(cli: &Cli, args: &InstanceArgs, poly: &str) -> Result<Instance, CliError> {
    let n = args
        .n
        .ok_or_else(|| CliError::Input("--n is required with --poly".into()))?;
    let field = cli.field.unwrap_or(1);
    let probe = galois_core::text::parse_polynomial(
        poly,
        n + 2,
        &galois_core::exactnum::CycloField::new(field)?,
    )?;
    let mut file = InstanceFile {
        schema: SCHEMA.into(),
        name: "inline".into(),
        n,
        d: probe.degree(),
        field,
        polynomial: poly.into(),
        ..InstanceFile::default()
    };
    for (i, m) in args.matrices.iter().enumerate() {
        file.automorphisms
            .insert(format!("g{}", i + 1), split_matrix_text(m));
    }
    for (i, p) in args.points.iter().enumerate() {
        file.candidates.insert(
            format!("p{}", i + 1),
            p.split(',').map(|s| s.trim().to_string()).collect(),
        );
    }
    let text = serde_json::to_string(&file).expect("serializable");
    Instance::from_json(&text, None)
}

fn header(inst: &Instance) -> Value {
    json!({
        "schema": SCHEMA,
        "instance": inst.name(),
        "hash": inst.hash,
        "n": inst.x.n(),
        "d": inst.x.degree(),
        "field": inst.field.conductor(),
    })
}

fn selected<'a>(
    inst: &'a Instance,
    aut: &'a Option<String>,
) -> Result<Vec<(&'a str, &'a galois_core::projlin::ProjMatrix)>, CliError> {
    match aut {
        Some(name) => Ok(vec![(name.as_str(), inst.automorphism(name)?)]),
        None => {
            if inst.automorphisms.is_empty() {
                return Err(CliError::Input("the instance has no automorphisms".into()));
            }
            Ok(inst
                .automorphisms
                .iter()
                .map(|(n, m)| (n.as_str(), m))
                .collect())
        }
    }
}

fn generators(
    inst: &Instance,
    group: &Option<String>,
    gens: &Option<String>,
) -> Result<(String, Vec<String>), CliError> {
    match (group, gens) {
        (Some(g), None) => {
            let list = inst
                .file
                .groups
                .get(g)
                .ok_or_else(|| CliError::Input(format!("no group named {g}")))?;
            Ok((g.clone(), list.clone()))
        }
        (None, Some(list)) => Ok((
            "generated".into(),
            list.split(',').map(|s| s.trim().to_string()).collect(),
        )),
        (None, None) => {
            let (g, list) = inst
                .file
                .groups
                .first()
                .map(|(g, l)| (g.clone(), l.clone()))
                .unwrap_or_else(|| {
                    (
                        "generated".into(),
                        inst.automorphisms.iter().map(|(n, _)| n.clone()).collect(),
                    )
                });
            Ok((g, list))
        }
        (Some(_), Some(_)) => Err(CliError::Input("give --group or --gens, not both".into())),
    }
}

fn require_witness(
    inst: &Instance,
    name: &str,
    a: &galois_core::projlin::ProjMatrix,
) -> Result<galois_core::hypersurface::AutWitness, CliError> {
    inst.x
        .verify_automorphism(a)?
        .ok_or_else(|| CliError::Input(format!("{name} is not an automorphism of X")))
}

fn dispatch(cli: &Cli) -> Result<(i32, Value), CliError> {
    match &cli.command {
        Command::CheckSmooth(args) => {
            let inst = load(cli, args)?;
            let dl = deadline(cli)
                .or_else(|| inst.file.smooth_deadline.map(Duration::from_secs_f64))
                .or(Some(Duration::from_secs_f64(
                    corpus::DEFAULT_SMOOTH_DEADLINE,
                )));
            let (status, v) = report::smoothness(&inst.x, dl)?;
            let mut out = header(&inst);
            out["smoothness"] = v;
            let code = if status == SmoothStatus::Timeout {
                3
            } else {
                0
            };
            Ok((code, out))
        }
        Command::VerifyAut { inst: args, aut } => {
            let inst = load(cli, args)?;
            let mut list = Vec::new();
            for (name, a) in selected(&inst, aut)? {
                let w = report::witness_or_none(&inst.x, a)?;
                let mut v = json!({ "name": name });
                for (k, val) in report::verification(w.as_ref())
                    .as_object()
                    .expect("object")
                {
                    v[k] = val.clone();
                }
                list.push(v);
            }
            let mut out = header(&inst);
            out["automorphisms"] = json!(list);
            Ok((0, out))
        }
        Command::Order { inst: args, aut } => {
            let inst = load(cli, args)?;
            let mut list = Vec::new();
            for (name, a) in selected(&inst, aut)? {
                let order = a.projective_order(galois_core::hypersurface::DEFAULT_ORDER_BOUND)?;
                list.push(json!({ "name": name, "order": order }));
            }
            let mut out = header(&inst);
            out["automorphisms"] = json!(list);
            Ok((0, out))
        }
        Command::FixLocus {
            inst: args,
            aut,
            power,
        } => {
            let inst = load(cli, args)?;
            let mut list = Vec::new();
            for (name, a) in selected(&inst, aut)? {
                let w = require_witness(&inst, name, &a.pow(*power))?;
                let locus = galois_core::fixlocus::fixed_locus(&inst.x, &w)?;
                list.push(json!({ "name": name, "power": power, "fixed_locus": report::fixed_locus_json(&locus) }));
            }
            let mut out = header(&inst);
            out["automorphisms"] = json!(list);
            Ok((0, out))
        }
        Command::GaloisDetect {
            inst: args,
            aut,
            all_powers,
        } => {
            let inst = load(cli, args)?;
            let mut list = Vec::new();
            for (name, a) in selected(&inst, aut)? {
                let w = require_witness(&inst, name, a)?;
                let mut v = json!({ "name": name, "certificate": report::detect(&inst.x, &w)? });
                if *all_powers {
                    v["certified_powers"] = json!(report::certified_powers(&inst.x, &w)?);
                }
                list.push(v);
            }
            let mut out = header(&inst);
            out["automorphisms"] = json!(list);
            Ok((0, out))
        }
        Command::GaloisAtPoint { inst: args, point } => {
            let inst = load(cli, args)?;
            let pts: Vec<(String, Vec<galois_core::exactnum::CycloNum>)> = match point {
                Some(name) => vec![(name.clone(), inst.candidate(name)?.clone())],
                None => {
                    if inst.candidates.is_empty() {
                        let nv = inst.x.nvars();
                        (0..nv)
                            .map(|i| {
                                (
                                    format!("e{i}"),
                                    galois_core::projlin::unit_vector(&inst.field, nv, i),
                                )
                            })
                            .collect()
                    } else {
                        inst.candidates.clone()
                    }
                }
            };
            let list = pts
                .iter()
                .map(|(n, p)| report::point_entry(&inst.x, n, p))
                .collect::<Result<Vec<_>, _>>()?;
            let mut out = header(&inst);
            out["points"] = json!(list);
            Ok((0, out))
        }
        Command::ClassifyCyclic { inst: args, aut } => {
            let inst = load(cli, args)?;
            if inst.x.n() != 1 {
                return Err(CliError::Input(
                    "classification applies to plane curves".into(),
                ));
            }
            let mut list = Vec::new();
            for (name, a) in selected(&inst, aut)? {
                require_witness(&inst, name, a)?;
                if !a.is_diagonal() {
                    return Err(CliError::Input(format!("{name} is not diagonal")));
                }
                let order = a.projective_order(galois_core::hypersurface::DEFAULT_ORDER_BOUND)?;
                list.push(
                    json!({ "name": name, "order": order, "table1": report::table1(&inst.x, a)? }),
                );
            }
            let mut out = header(&inst);
            out["automorphisms"] = json!(list);
            Ok((0, out))
        }
        Command::GroupClosure {
            inst: args,
            group,
            gens,
            bound,
        } => {
            let inst = load(cli, args)?;
            let (name, list) = generators(&inst, group, gens)?;
            let ms = list
                .iter()
                .map(|g| inst.automorphism(g).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let g = galois_core::planecurves::group_closure(&ms, *bound)?;
            let mut v = json!({ "name": name, "generators": list });
            for (k, val) in report::closure_json(&g).as_object().expect("object") {
                v[k] = val.clone();
            }
            let mut out = header(&inst);
            out["group"] = v;
            Ok((0, out))
        }
        Command::RhGenus {
            inst: args,
            group,
            gens,
        } => {
            let inst = load(cli, args)?;
            if inst.x.n() != 1 {
                return Err(CliError::Input(
                    "the genus computation applies to plane curves".into(),
                ));
            }
            let (name, list) = generators(&inst, group, gens)?;
            let mut out = header(&inst);
            out["group"] = report::group_entry(&inst, &name, &list)?;
            Ok((0, out))
        }
        Command::CountPoints(args) => {
            let inst = load(cli, args)?;
            let mut certs = Vec::new();
            for (_, a) in &inst.automorphisms {
                if let Some(w) = inst.x.verify_automorphism(a)? {
                    if let Some(c) =
                        galois_core::galois::certificate_from_automorphism(&inst.x, &w)?
                    {
                        certs.push(c.point);
                    }
                }
            }
            let cands = report::candidate_set(&inst, &certs)?;
            let (_, v) = report::counts(&inst.x, &cands)?;
            let mut out = header(&inst);
            out["counts"] = v;
            Ok((0, out))
        }
        Command::CorpusRun { dir, random } => {
            let dir = dir.clone().unwrap_or_else(|| PathBuf::from(BUNDLED_CORPUS));
            let outcomes = run_corpus(
                &dir,
                *random,
                cli.seed,
                cli.jobs,
                &RunOptions {
                    deadline: deadline(cli),
                    field: cli.field,
                },
            )?;
            let summary = corpus::summary(&outcomes);
            let code = if outcomes.iter().all(|o| o.passed) {
                0
            } else {
                1
            };
            Ok((code, summary))
        }
    }
}

/// Corpus files of `dir` followed by `random` generated instances.
pub fn run_corpus(
    dir: &Path,
    random: usize,
    seed: u64,
    jobs: usize,
    opts: &RunOptions,
) -> Result<Vec<corpus::InstanceOutcome>, CliError> {
    let mut sources: Vec<Source> = corpus::corpus_files(dir)?
        .into_iter()
        .map(Source::File)
        .collect();
    for (file, _) in family::normal_form_family(seed, random)? {
        sources.push(Source::Generated(Box::new(file)));
    }
    corpus::run_all(&sources, opts, jobs)
}

/// Parses arguments, runs, prints and writes JSON; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (code, value) = run(&cli);
    let text = serde_json::to_string_pretty(&value).expect("serializable");
    // a closed pipe (e.g. `| head`) is not an error of the command
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("{}: {e}", path.display());
            return 2;
        }
    }
    code
}
