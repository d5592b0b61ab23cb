use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use choquet_core::axioms::{
    Analysis, AxiomId, AxiomReport, CheckOptions, NECESSARY, Status, TableError, check_a3, interaction_cliques_from_prefs,
    run_checks,
};
use choquet_core::fit::{FitProblem, FitStatus, fit_capacity};
use choquet_core::generate::random_case;
use choquet_core::roundtrip::{RoundtripOptions, roundtrip_suite};
use choquet_core::{
    DEFAULT_TOLERANCE, PreferenceStructure, choquet_mobius, choquet_sorted, classify_special, enumerate_grid,
    induced_order, sorted_permutation,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Value, json};

mod formats;

use formats::{ModelFile, PrefsFile, SetFunctionFile, read_json, read_values};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] choquet_core::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

mod exit {
    pub const PASS: u8 = 0;
    pub const FAIL: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const INCONSISTENT: u8 = 3;
    pub const UNDETERMINED: u8 = 4;
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "choquet", version, about = "Choquet-integral models on finite product sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the integral of one alternative in both forms.
    Integrate {
        #[arg(long)]
        model: PathBuf,
        /// Level indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        alt: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Audit preference data against the axioms.
    Check {
        #[arg(long)]
        prefs: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Axiom ids, comma separated; defaults to all.
        #[arg(long, value_delimiter = ',')]
        axioms: Vec<String>,
        #[arg(long, default_value_t = CheckOptions::default().budget)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// List the cells and interaction cliques of preference data.
    Partition {
        #[arg(long)]
        prefs: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Fit a capacity to preferences with fixed value functions.
    Fit {
        #[arg(long)]
        prefs: PathBuf,
        #[arg(long)]
        values: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the end-to-end suite on random models.
    Roundtrip {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        /// Use these scale values instead of random ones.
        #[arg(long)]
        values: Option<PathBuf>,
        #[arg(long, default_value_t = CheckOptions::default().budget)]
        budget: u64,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Write a random model with its capacity.
    Generate {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Write the order a model induces on its full grid.
    Induce {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

/// Result of a command: what to print and the exit code.
struct Done {
    json: Value,
    text: String,
    code: u8,
}

fn emit(done: &Done, output: &Output) -> Result<(), CliError> {
    let body = match output.format {
        Format::Json => serde_json::to_string_pretty(&done.json).expect("json values serialize") + "\n",
        Format::Text => done.text.clone(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Write { path: path.clone(), source }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn load_model(path: &Path) -> Result<(ModelFile, choquet_core::ProductModel), CliError> {
    let file: ModelFile = read_json(path)?;
    let model = file.to_model()?;
    Ok((file, model))
}

fn load_prefs(prefs: &Path, model: Option<&Path>) -> Result<PreferenceStructure, CliError> {
    let file: PrefsFile = read_json(prefs)?;
    let model = model.map(load_model).transpose()?.map(|(_, m)| m);
    file.to_structure(model)
}

fn report_json(r: &AxiomReport, seed: u64) -> Value {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            let points: Vec<Value> = w.points.iter().map(|(label, x)| json!({ "label": label, "alternative": x })).collect();
            json!({ "summary": w.summary, "points": points })
        })
        .collect();
    json!({
        "axiom": r.axiom.name(),
        "status": r.status.to_string(),
        "witnesses": witnesses,
        "checked": r.checked,
        "violated": r.violated,
        "coverage": r.coverage,
        "note": r.note,
        "seed": seed,
    })
}

fn report_text(r: &AxiomReport) -> String {
    let mut s = format!(
        "{:<8} {:<14} checked={} violated={} coverage={:.3}",
        r.axiom.name(),
        r.status,
        r.checked,
        r.violated,
        r.coverage
    );
    if let Some(note) = &r.note {
        let _ = write!(s, "  ({note})");
    }
    if let Some(w) = r.witnesses.first() {
        let _ = write!(s, "\n    {}:", w.summary);
        for (label, x) in &w.points {
            let _ = write!(s, " {label}={x:?}");
        }
    }
    s.push('\n');
    s
}

fn integrate(model: &Path, alt: &[usize], tolerance: f64) -> Result<Done, CliError> {
    let (file, model) = load_model(model)?;
    let m = file
        .capacity
        .as_ref()
        .ok_or_else(|| CliError::Input("model file has no capacity".into()))?
        .to_mobius()?;
    if m.n() != model.n() {
        return Err(CliError::Input(format!("capacity on {} criteria, model has {}", m.n(), model.n())));
    }
    let violations = m.validate(tolerance);
    if let Some(v) = violations.first() {
        return Err(CliError::Input(format!("not a capacity: {v}")));
    }
    let f = model.scores(alt)?;
    let sorted = choquet_sorted(&m.to_capacity(), &f)?;
    let mobius = choquet_mobius(&m, &f)?;
    let perm = sorted_permutation(&f);
    let agree = (sorted - mobius).abs() <= tolerance;
    let text = format!("sorted {sorted}\nmobius {mobius}\nascending order {perm:?}\n");
    let json = json!({ "alternative": alt, "scores": f, "sorted": sorted, "mobius": mobius, "permutation": perm, "agree": agree });
    Ok(Done { json, text, code: if agree { exit::PASS } else { exit::INCONSISTENT } })
}

fn check(prefs: &Path, model: Option<&Path>, axioms: &[String], opts: &CheckOptions) -> Result<Done, CliError> {
    let p = load_prefs(prefs, model)?;
    let which: Vec<AxiomId> = if axioms.is_empty() {
        NECESSARY.iter().copied().chain([AxiomId::A7, AxiomId::A8, AxiomId::A9]).collect()
    } else {
        axioms
            .iter()
            .map(|a| AxiomId::parse(a).ok_or_else(|| CliError::Input(format!("unknown axiom {a:?}"))))
            .collect::<Result<_, _>>()?
    };
    let reports = run_checks(&p, &which, opts);
    let code = if reports.iter().any(|r| r.status == Status::Fail) {
        exit::FAIL
    } else if reports.iter().any(|r| r.status == Status::Undetermined) {
        exit::UNDETERMINED
    } else {
        exit::PASS
    };
    let json = Value::Array(reports.iter().map(|r| report_json(r, opts.seed)).collect());
    let mut text: String = reports.iter().map(report_text).collect();
    let _ = writeln!(text, "seed {}", opts.seed);
    Ok(Done { json, text, code })
}

fn partition(prefs: &Path, model: Option<&Path>) -> Result<Done, CliError> {
    let p = load_prefs(prefs, model)?;
    let a = match Analysis::new(&p) {
        Ok(a) => a,
        Err(TableError::Data(e)) => return Err(e.into()),
        Err(TableError::Marginal(f)) => {
            let text = format!("marginal orders unavailable: {f}\n");
            return Ok(Done { json: json!({ "error": text.trim_end() }), text, code: exit::FAIL });
        }
    };
    let a3 = check_a3(&a.table, Some(&a.rel), &CheckOptions::default());
    if a3.status == Status::Fail {
        return Ok(Done { json: json!([report_json(&a3, 0)]), text: report_text(&a3), code: exit::FAIL });
    }
    let grid = a.table.grid();
    let cliques: Vec<Vec<usize>> = interaction_cliques_from_prefs(&a.table).iter().map(|c| c.members().collect()).collect();
    let mut text = String::new();
    let mut cells = Vec::new();
    for (k, c) in a.partition.cells.iter().enumerate() {
        let order: Vec<String> = c.order.iter().map(|(i, j)| format!("{i} S {j}")).collect();
        let essential: Vec<usize> = (0..grid.n()).filter(|&i| c.essential[i]).collect();
        let _ = writeln!(text, "cell {k} [{}] size {} essential {essential:?}", order.join(", "), c.len());
        cells.push(json!({
            "order_id": k,
            "order": c.order,
            "size": c.len(),
            "essential": essential,
            "members": c.members.iter().map(|&z| grid.coords(z)).collect::<Vec<_>>(),
        }));
    }
    let uncovered: Vec<Vec<usize>> = a.partition.uncovered.iter().map(|&z| grid.coords(z)).collect();
    let undecided: Vec<Vec<usize>> = a.partition.undecided.iter().map(|&z| grid.coords(z)).collect();
    let _ = writeln!(text, "cliques {cliques:?}\nuncovered {}, undecided {}", uncovered.len(), undecided.len());
    let json = json!({ "cells": cells, "cliques": cliques, "uncovered": uncovered, "undecided": undecided });
    let code = if a3.status == Status::Undetermined { exit::UNDETERMINED } else { exit::PASS };
    Ok(Done { json, text, code })
}

fn fit(prefs: &Path, values: &Path, epsilon: Option<f64>) -> Result<Done, CliError> {
    let values = read_values(values)?;
    let file: PrefsFile = read_json(prefs)?;
    let model = choquet_core::ProductModel::from_values(values)?;
    let p = file.to_structure(Some(model))?;
    let problem = match epsilon {
        Some(e) => FitProblem::new(p, e)?,
        None => FitProblem::with_default_epsilon(p)?,
    };
    let result = fit_capacity(&problem)?;
    let feasible = result.status == FitStatus::Feasible;
    let status = if feasible { "FEASIBLE" } else { "INFEASIBLE" };
    let mut json = json!({
        "status": status,
        "epsilon": problem.epsilon,
        "max_violation": result.max_violation,
        "min_slack": result.min_slack,
        "active_constraints": result.active_constraints,
    });
    let mut text = format!("{status} epsilon {} max violation {:.3e}\n", problem.epsilon, result.max_violation);
    if let Some(m) = &result.mobius {
        json["mobius"] = serde_json::to_value(SetFunctionFile::from_mobius(m)).expect("serializable");
        json["capacity"] = serde_json::to_value(SetFunctionFile::from_capacity(&m.to_capacity())).expect("serializable");
        let _ = writeln!(text, "kind {:?}", classify_special(m, DEFAULT_TOLERANCE));
        for (key, v) in SetFunctionFile::from_capacity(&m.to_capacity()).values {
            let _ = writeln!(text, "nu({{{key}}}) = {v:.6}");
        }
    }
    Ok(Done { json, text, code: if feasible { exit::PASS } else { exit::FAIL } })
}

struct RoundtripArgs {
    n: usize,
    levels: usize,
    seed: u64,
    trials: u64,
    values: Option<PathBuf>,
    opts: RoundtripOptions,
}

fn roundtrip(args: RoundtripArgs) -> Result<Done, CliError> {
    if args.n == 0 || args.levels == 0 {
        return Err(CliError::Input("--n and --levels must be positive".into()));
    }
    let fixed = args.values.as_deref().map(read_values).transpose()?;
    let mut trials = Vec::new();
    let mut text = String::new();
    let mut first_failure = None;
    for t in 0..args.trials {
        let seed = args.seed.wrapping_add(t);
        let n = fixed.as_ref().map_or(args.n, Vec::len);
        let (m, model) = random_case(seed, n, args.levels..=args.levels)?;
        let values = match &fixed {
            Some(v) => v.clone(),
            None => model.scales().iter().map(|s| s.values.clone().unwrap_or_default()).collect(),
        };
        let opts = RoundtripOptions { seed, check: CheckOptions { seed, ..args.opts.check }, ..args.opts.clone() };
        let report = roundtrip_suite(&values, &m, &opts);
        let stages: Vec<Value> =
            report.stages.iter().map(|s| json!({ "stage": s.stage.to_string(), "passed": s.passed, "detail": s.detail })).collect();
        let verdict = match report.first_failure() {
            None => "PASS".to_string(),
            Some(s) => {
                first_failure.get_or_insert((seed, s.stage.to_string()));
                format!("FAIL at {}: {}", s.stage, s.detail)
            }
        };
        let _ = writeln!(text, "seed {seed}: {verdict}");
        trials.push(json!({
            "seed": seed,
            "passed": report.passed(),
            "stages": stages,
            "axioms": report.axioms.iter().map(|r| report_json(r, seed)).collect::<Vec<_>>(),
            "fitted": report.fitted.as_ref().map(SetFunctionFile::from_mobius),
        }));
    }
    let failing = trials.iter().filter(|t| t["passed"] == false).count();
    let _ = writeln!(text, "{} of {} trials pass", trials.len() - failing, trials.len());
    let json = json!({
        "seed": args.seed,
        "trials": trials,
        "first_failure": first_failure.as_ref().map(|(s, stage)| json!({ "seed": s, "stage": stage })),
    });
    Ok(Done { json, text, code: if failing == 0 { exit::PASS } else { exit::FAIL } })
}

fn generate(n: usize, levels: usize, seed: u64) -> Result<Done, CliError> {
    if n == 0 || levels == 0 {
        return Err(CliError::Input("--n and --levels must be positive".into()));
    }
    let (m, model) = random_case(seed, n, levels..=levels)?;
    let file = ModelFile::from_model(&model, Some(&m));
    let json = serde_json::to_value(&file).expect("serializable");
    let text = format!("model with {n} criteria and {levels} levels from seed {seed}\n");
    Ok(Done { json, text, code: exit::PASS })
}

fn induce(model: &Path) -> Result<Done, CliError> {
    let (file, model) = load_model(model)?;
    let m = file
        .capacity
        .as_ref()
        .ok_or_else(|| CliError::Input("model file has no capacity".into()))?
        .to_mobius()?;
    let p = induced_order(&m, &model, &enumerate_grid(&model)?)?;
    let prefs = PrefsFile::from_structure(&p);
    let text = format!("{} alternatives ranked\n", prefs.alternatives.len());
    Ok(Done { json: serde_json::to_value(&prefs).expect("serializable"), text, code: exit::PASS })
}

fn run(cli: Cli) -> Result<(Done, Output), CliError> {
    Ok(match cli.command {
        Command::Integrate { model, alt, tolerance, output } => (integrate(&model, &alt, tolerance)?, output),
        Command::Check { prefs, model, axioms, budget, seed, output } => {
            let opts = CheckOptions { budget, seed, ..CheckOptions::default() };
            (check(&prefs, model.as_deref(), &axioms, &opts)?, output)
        }
        Command::Partition { prefs, model, output } => (partition(&prefs, model.as_deref())?, output),
        Command::Fit { prefs, values, epsilon, output } => (fit(&prefs, &values, epsilon)?, output),
        Command::Roundtrip { n, levels, seed, trials, values, budget, epsilon, tolerance, output } => {
            let opts = RoundtripOptions {
                seed,
                check: CheckOptions { budget, seed, ..CheckOptions::default() },
                epsilon,
                tolerance,
                ..RoundtripOptions::default()
            };
            (roundtrip(RoundtripArgs { n, levels, seed, trials, values, opts })?, output)
        }
        Command::Generate { n, levels, seed, output } => (generate(n, levels, seed)?, output),
        Command::Induce { model, output } => (induce(&model)?, output),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).and_then(|(done, output)| emit(&done, &output).map(|()| done.code)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT)
        }
    }
}
