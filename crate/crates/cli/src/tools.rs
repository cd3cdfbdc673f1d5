//! `enforce`, `gen`, `encode`, `verify` and `enumerate`.

use std::path::PathBuf;

use anyhow::{Context, Result};
use argqubo::benchgen::{generate, GenSpec, Variant};
use argqubo::encodings::{build, encode_task};
use argqubo::enforcement::{self, default_lambda, min_lambda, BASE_LAMBDA};
use argqubo::{af, ArgumentSet, ArgumentationFramework, EncodeOptions, Format, Oracle, Semantics, Task};
use clap::Args;
use serde::Serialize;

use crate::config::{parse_name_list, read_framework, AnnealArgs, FileConfig, InputArgs};
use crate::Outcome;

fn write_framework(af: &ArgumentationFramework, format: Format) -> String {
    match format {
        Format::Apx => af::write_apx(af),
        Format::Iccma => af::write_iccma(af),
    }
}

fn names(af: &ArgumentationFramework, set: &ArgumentSet) -> Vec<String> {
    af.names_of(set).into_iter().map(String::from).collect()
}

#[derive(Debug, Args)]
pub struct EnforceArgs {
    /// Target set: comma-separated names, or a file with one name per line
    #[arg(long)]
    pub target: String,
    /// Constraint weight [default: max(100, n^2 + 1)]
    #[arg(long)]
    pub lambda: Option<i64>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Serialize)]
struct EnforceReport {
    instance: String,
    target: Vec<String>,
    lambda: i64,
    verified: bool,
    distance: usize,
    energy: i64,
    constraint_penalty: i64,
    /// Distance and penalty of the best sample before polishing.
    annealed_distance: usize,
    annealed_penalty: i64,
    added: Vec<(String, String)>,
    removed: Vec<(String, String)>,
    estimate_vars: i64,
    constructed_vars: usize,
    live_vars: usize,
    restarts: usize,
    reads: usize,
    elapsed_ms: f64,
    framework: String,
}

pub fn enforce(args: &EnforceArgs) -> Result<Outcome> {
    let start = std::time::Instant::now();
    let cfg = FileConfig::load(args.input.config.as_deref())?;
    let path = args.input.required_input()?;
    let (af, format) = read_framework(path, args.input.format(&cfg)?)?;
    let target = af.set_from_names(&parse_name_list(&args.target)?)?;
    let n = af.len();
    let lambda = match args.lambda.or(cfg.lambda) {
        Some(l) => l,
        None => {
            let l = default_lambda(n);
            if l > BASE_LAMBDA {
                eprintln!(
                    "warning: lambda {BASE_LAMBDA} is below n^2 + 1 = {} for {n} arguments; using {l}",
                    min_lambda(n)
                );
            }
            l
        }
    };
    let task = enforcement::build_strict_complete(&af, &target, lambda)?;
    let params = args.anneal.params(n, &cfg)?;
    let rep = enforcement::solve(&task, &params)?;
    let res = &rep.result;
    let edited = res.framework(&af);
    let pair = |&(a, b): &(usize, usize)| (af.name(a).to_string(), af.name(b).to_string());
    let counts = task.variable_counts();
    let report = EnforceReport {
        instance: path.display().to_string(),
        target: names(&af, &target),
        lambda,
        verified: res.verified,
        distance: res.distance,
        energy: res.energy,
        constraint_penalty: res.constraint_penalty,
        annealed_distance: rep.annealed.distance,
        annealed_penalty: rep.annealed.constraint_penalty,
        added: res.added.iter().map(pair).collect(),
        removed: res.removed.iter().map(pair).collect(),
        estimate_vars: counts.estimate,
        constructed_vars: counts.constructed,
        live_vars: counts.live,
        restarts: rep.restarts,
        reads: rep.reads,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        framework: write_framework(&edited, format),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.framework);
        for (a, b) in &report.added {
            println!("+att({a},{b})");
        }
        for (a, b) in &report.removed {
            println!("-att({a},{b})");
        }
        println!("distance {}", report.distance);
        if !report.verified {
            println!("unverified: constraint penalty {}", report.constraint_penalty);
        }
    }
    Ok(if report.verified {
        Outcome::Solved
    } else {
        Outcome::Uncertified
    })
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of arguments
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Connectivity constant in p = c log10(n) / n
    #[arg(long, default_value_t = 2.5)]
    pub c: f64,
    #[arg(long, default_value_t = Variant::Er)]
    pub variant: Variant,
    /// Shortest odd cycle added by b3
    #[arg(long, default_value_t = 1)]
    pub cycle_min: usize,
    /// Longest odd cycle added by b3
    #[arg(long, default_value_t = 7)]
    pub cycle_max: usize,
    #[arg(long, default_value_t = Format::Apx)]
    pub format: Format,
    /// Instances to generate, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Write instances and manifest.json here instead of printing
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Argument limit for the b4 enumeration
    #[arg(long, default_value_t = argqubo::DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: usize,
}

#[derive(Debug, Serialize)]
struct Manifest {
    file: Option<String>,
    spec: GenSpec,
    arguments: usize,
    attacks: usize,
}

pub fn gen(args: &GenArgs) -> Result<Outcome> {
    let oracle = Oracle::with_limit(args.oracle_limit);
    let mut manifests = Vec::new();
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for i in 0..args.count {
        let spec = GenSpec {
            n: args.n,
            c: args.c,
            seed: args.seed + i,
            variant: args.variant,
            cycle_lengths: (args.cycle_min, args.cycle_max),
        };
        spec.validate().map_err(anyhow::Error::msg)?;
        let af = generate(&spec, &oracle)?;
        let text = write_framework(&af, args.format);
        let file = match &args.out_dir {
            Some(dir) => {
                let ext = match args.format {
                    Format::Apx => "apx",
                    Format::Iccma => "af",
                };
                let name = format!("{}_{}_{}.{ext}", spec.variant, spec.n, spec.seed);
                std::fs::write(dir.join(&name), &text)?;
                Some(name)
            }
            None => {
                print!("{text}");
                None
            }
        };
        manifests.push(Manifest {
            file,
            spec,
            arguments: af.len(),
            attacks: af.num_attacks(),
        });
    }
    let manifest = serde_json::to_string_pretty(&manifests)?;
    match &args.out_dir {
        Some(dir) => std::fs::write(dir.join("manifest.json"), manifest + "\n")?,
        None => eprintln!("{manifest}"),
    }
    Ok(Outcome::Solved)
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Decision task to encode
    #[arg(long, conflicts_with = "semantics", required_unless_present = "semantics")]
    pub task: Option<Task>,
    /// Encode a bare semantics (cf, ad, co, pr, sst, st) instead of a task
    #[arg(long)]
    pub semantics: Option<Semantics>,
    #[arg(long)]
    pub arg: Option<String>,
    /// Skip constant propagation and dangling-auxiliary elimination
    #[arg(long)]
    pub raw: bool,
    #[command(flatten)]
    pub input: InputArgs,
    /// JSON with role names instead of the text format
    #[arg(long)]
    pub json: bool,
}

pub fn encode(args: &EncodeArgs) -> Result<Outcome> {
    let cfg = FileConfig::load(args.input.config.as_deref())?;
    let (af, _) = read_framework(args.input.required_input()?, args.input.format(&cfg)?)?;
    let options = EncodeOptions { simplify: !args.raw };
    let encoded = match (args.task, args.semantics) {
        (Some(task), _) => {
            let arg = match &args.arg {
                Some(name) => Some(af.index_of(name).with_context(|| format!("unknown argument `{name}`"))?),
                None => None,
            };
            encode_task(&af, task, arg, options)?
        }
        (None, Some(sigma)) => build(&af, sigma, options)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let q = encoded.problem();
    if args.json {
        println!("{}", serde_json::to_string_pretty(&q.to_json())?);
    } else {
        print!("{}", q.to_text());
        for (i, role) in q.registry().roles().iter().enumerate() {
            println!("# var {i} {role}");
        }
    }
    Ok(Outcome::Solved)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub semantics: Semantics,
    /// Candidate set: comma-separated names (may be empty), or a file
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    #[command(flatten)]
    pub input: InputArgs,
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let cfg = FileConfig::load(args.input.config.as_deref())?;
    let (af, _) = read_framework(args.input.required_input()?, args.input.format(&cfg)?)?;
    let set = af.set_from_names(&parse_name_list(&args.set)?)?;
    let ok = af::verify(&af, &set, args.semantics)?;
    println!("{}", if ok { "YES" } else { "NO" });
    Ok(Outcome::Solved)
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub semantics: Semantics,
    #[arg(long, default_value_t = argqubo::DEFAULT_ORACLE_LIMIT)]
    pub limit: usize,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub json: bool,
}

pub fn enumerate(args: &EnumerateArgs) -> Result<Outcome> {
    let cfg = FileConfig::load(args.input.config.as_deref())?;
    let (af, _) = read_framework(args.input.required_input()?, args.input.format(&cfg)?)?;
    let exts = Oracle::with_limit(args.limit).enumerate(&af, args.semantics)?;
    let named: Vec<Vec<String>> = exts.iter().map(|e| names(&af, e)).collect();
    if args.json {
        println!("{}", serde_json::to_string_pretty(&named)?);
    } else {
        for e in &named {
            println!("[{}]", e.join(","));
        }
    }
    Ok(Outcome::Solved)
}
