//! `solve`: one framework, or every framework in a directory.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use argqubo::encodings::encode_task;
use argqubo::{
    decide, AcceptanceMode, Answer, ArgumentationFramework, EncodeOptions, Oracle, Semantics, Task,
    DEFAULT_ORACLE_LIMIT,
};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{read_framework, AnnealArgs, FileConfig, InputArgs};
use crate::Outcome;

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub task: Task,
    /// Queried argument for DC and SC tasks
    #[arg(long)]
    pub arg: Option<String>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    /// Compare with the exhaustive oracle when the framework is small enough
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub json: bool,
    /// Solve every framework file in this directory and print one report
    #[arg(long, conflicts_with = "input")]
    pub dir: Option<PathBuf>,
    /// Concurrent instances in batch mode
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub answer: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub instance: String,
    pub task: Task,
    pub arg: Option<String>,
    pub arguments: usize,
    pub attacks: usize,
    pub variables: usize,
    /// Answer to the task as asked.
    pub answer: bool,
    /// Outcome of the zero-energy search on the encoded function.
    pub search: Answer,
    pub certified: bool,
    pub witness: Option<Vec<String>>,
    pub witness_verified: bool,
    pub energy: i64,
    pub restarts: usize,
    pub reads: usize,
    pub sweeps: usize,
    pub elapsed_ms: f64,
    pub oracle: Option<OracleCheck>,
}

impl SolveReport {
    pub fn outcome(&self) -> Outcome {
        let confirmed = self.oracle.as_ref().is_some_and(|o| o.agrees);
        if self.certified || confirmed {
            Outcome::Solved
        } else {
            Outcome::Uncertified
        }
    }

    pub fn plain(&self) -> String {
        let mut out = String::from(if self.answer { "YES" } else { "NO" });
        if let Some(w) = &self.witness {
            out.push_str("\nw");
            for name in w {
                out.push(' ');
                out.push_str(name);
            }
        }
        out
    }
}

fn oracle_answer(af: &ArgumentationFramework, task: Task, arg: Option<usize>) -> Result<bool> {
    let oracle = Oracle::default();
    let sigma = task.semantics();
    Ok(match task {
        Task::DcCo | Task::DcPr | Task::DcSt => {
            oracle.decide(af, arg.expect("checked"), sigma, AcceptanceMode::Credulous)?
        }
        Task::ScNegCo => oracle.decide(af, arg.expect("checked"), sigma, AcceptanceMode::Skeptical)?,
        Task::ExSt => oracle.exists(af, Semantics::Stable, false)?,
        Task::NeAd | Task::NeCo | Task::NePr | Task::NeSst => oracle.exists(af, sigma, true)?,
    })
}

pub fn solve_framework(
    af: &ArgumentationFramework,
    instance: String,
    task: Task,
    arg: Option<&str>,
    anneal: &AnnealArgs,
    cfg: &FileConfig,
    check: bool,
) -> Result<SolveReport> {
    let start = Instant::now();
    let arg_index = match arg {
        Some(name) => Some(
            af.index_of(name)
                .with_context(|| format!("unknown argument `{name}`"))?,
        ),
        None if task.needs_argument() => anyhow::bail!("{task} needs --arg"),
        None => None,
    };
    let encoded = encode_task(af, task, arg_index, EncodeOptions::default())?;
    let params = anneal.params(af.len(), cfg)?;
    let decision = decide(af, &encoded, &params)?;
    let zero = decision.answer == Answer::Yes;
    let answer = zero != task.negated();
    let oracle = if check && af.len() <= DEFAULT_ORACLE_LIMIT {
        let truth = oracle_answer(af, task, arg_index)?;
        Some(OracleCheck {
            answer: truth,
            agrees: truth == answer,
        })
    } else {
        None
    };
    Ok(SolveReport {
        instance,
        task,
        arg: arg.map(String::from),
        arguments: af.len(),
        attacks: af.num_attacks(),
        variables: encoded.problem().num_vars(),
        answer,
        search: decision.answer,
        certified: decision.certified(),
        witness: decision
            .witness
            .as_ref()
            .map(|w| af.names_of(w).into_iter().map(String::from).collect()),
        witness_verified: decision.witness.is_some(),
        energy: decision.energy,
        restarts: decision.restarts,
        reads: decision.reads,
        sweeps: decision.sweeps,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        oracle,
    })
}

pub fn run(args: &SolveArgs) -> Result<Outcome> {
    let cfg = FileConfig::load(args.input.config.as_deref())?;
    let check = args.check || cfg.check.unwrap_or(false);
    if let Some(dir) = &args.dir {
        return run_batch(args, dir, &cfg, check);
    }
    let path = args.input.required_input()?;
    let (af, _) = read_framework(path, args.input.format(&cfg)?)?;
    let report = solve_framework(
        &af,
        path.display().to_string(),
        args.task,
        args.arg.as_deref(),
        &args.anneal,
        &cfg,
        check,
    )?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{}", report.plain());
    }
    if let Some(o) = &report.oracle {
        if !o.agrees {
            eprintln!("note: annealer missed a solution the oracle finds (uncertified {})", report.plain());
        }
    }
    Ok(report.outcome())
}

#[derive(Debug, Serialize)]
struct BatchError {
    instance: String,
    error: String,
}

#[derive(Debug, Default, Serialize)]
struct Summary {
    instances: usize,
    yes: usize,
    no: usize,
    timeouts: usize,
    certified: usize,
    errors: usize,
    checked: usize,
    oracle_agreement: Option<f64>,
    /// Certified answers the oracle rejects; 0 unless an encoding is broken.
    wrong_certified: usize,
    mean_ms: f64,
    total_ms: f64,
}

#[derive(Debug, Serialize)]
struct BatchReport {
    task: Task,
    summary: Summary,
    results: Vec<SolveReport>,
    errors: Vec<BatchError>,
}

fn framework_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("apx" | "af" | "i23")
                )
        })
        .collect();
    files.sort();
    Ok(files)
}

fn run_batch(args: &SolveArgs, dir: &Path, cfg: &FileConfig, check: bool) -> Result<Outcome> {
    let files = framework_files(dir)?;
    let jobs = args.jobs.or(cfg.jobs).unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let format = args.input.format(cfg)?;
    let start = Instant::now();
    let outcomes: Vec<(String, Result<SolveReport>)> = pool.install(|| {
        files
            .par_iter()
            .map(|path| {
                let name = path.display().to_string();
                let res = read_framework(path, format).and_then(|(af, _)| {
                    solve_framework(&af, name.clone(), args.task, args.arg.as_deref(), &args.anneal, cfg, check)
                });
                (name, res)
            })
            .collect()
    });

    let mut results = Vec::new();
    let mut errors = Vec::new();
    let mut inconsistent = false;
    for (instance, res) in outcomes {
        match res {
            Ok(r) => results.push(r),
            Err(e) => {
                inconsistent |= crate::is_inconsistency(&e);
                errors.push(BatchError {
                    instance,
                    error: format!("{e:#}"),
                });
            }
        }
    }
    let checked: Vec<&OracleCheck> = results.iter().filter_map(|r| r.oracle.as_ref()).collect();
    let summary = Summary {
        instances: files.len(),
        yes: results.iter().filter(|r| r.answer).count(),
        no: results.iter().filter(|r| !r.answer).count(),
        timeouts: results.iter().filter(|r| r.search == Answer::TimeoutNo).count(),
        certified: results.iter().filter(|r| r.certified).count(),
        errors: errors.len(),
        checked: checked.len(),
        oracle_agreement: (!checked.is_empty())
            .then(|| checked.iter().filter(|o| o.agrees).count() as f64 / checked.len() as f64),
        wrong_certified: results
            .iter()
            .filter(|r| r.certified && r.oracle.as_ref().is_some_and(|o| !o.agrees))
            .count(),
        mean_ms: if results.is_empty() {
            0.0
        } else {
            results.iter().map(|r| r.elapsed_ms).sum::<f64>() / results.len() as f64
        },
        total_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let report = BatchReport {
        task: args.task,
        summary,
        results,
        errors,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for r in &report.results {
            let tag = if r.certified { "" } else { " (uncertified)" };
            println!("{} {}{tag}", r.instance, if r.answer { "YES" } else { "NO" });
        }
        for e in &report.errors {
            println!("{} ERROR {}", e.instance, e.error);
        }
        let s = &report.summary;
        println!(
            "# {} instances, {} yes, {} no, {} timeouts, {} errors, {:.1} ms mean",
            s.instances, s.yes, s.no, s.timeouts, s.errors, s.mean_ms
        );
        if let Some(a) = s.oracle_agreement {
            println!("# oracle agreement {:.1}% on {} checked", 100.0 * a, s.checked);
        }
    }
    Ok(if inconsistent {
        Outcome::Inconsistent
    } else if report.errors.is_empty() {
        Outcome::Solved
    } else {
        Outcome::Invalid
    })
}
