//! Single-flip simulated annealing over integer QUBO problems.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::af::{ArgumentSet, ArgumentationFramework};
use crate::encodings::EncodedTask;
use crate::error::AnnealError;
use crate::qubo::QuboProblem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub num_reads: usize,
    pub num_sweeps: usize,
    /// `(beta_hot, beta_cold)`; derived from the coefficients when absent.
    pub beta_range: Option<(f64, f64)>,
    pub seed: u64,
    pub max_restarts: usize,
    pub timeout_secs: f64,
    /// Run the reads of one restart on the rayon pool.
    pub parallel: bool,
}

impl AnnealParams {
    /// `2n` reads and `min(50n, 1000)` sweeps for `n` decision variables.
    pub fn for_size(n: usize) -> Self {
        let n = n.max(1);
        Self {
            num_reads: 2 * n,
            num_sweeps: (50 * n).min(1000),
            beta_range: None,
            seed: 0,
            max_restarts: 100,
            timeout_secs: 60.0,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<(), AnnealError> {
        if self.num_reads == 0 || self.num_sweeps == 0 || self.max_restarts == 0 {
            return Err(AnnealError::InvalidParams(
                "reads, sweeps and restarts must be at least 1".into(),
            ));
        }
        if let Some((hot, cold)) = self.beta_range {
            if !(hot > 0.0 && hot < cold && cold.is_finite()) {
                return Err(AnnealError::InvalidParams(format!(
                    "need 0 < beta_hot < beta_cold, got ({hot}, {cold})"
                )));
            }
        }
        if !(self.timeout_secs > 0.0) {
            return Err(AnnealError::InvalidParams("timeout must be positive".into()));
        }
        Ok(())
    }

    fn deadline(&self, start: Instant) -> Instant {
        start + Duration::from_secs_f64(self.timeout_secs.min(1e9))
    }
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self::for_size(1)
    }
}

/// Inverse temperatures accepting the largest possible uphill flip with
/// probability 1/2 and the smallest with probability 1/100.
pub fn beta_range(q: &QuboProblem) -> (f64, f64) {
    let max_delta = q.flip_bounds().into_iter().max().unwrap_or(0);
    match q.min_nonzero_coefficient() {
        Some(min_delta) if max_delta > 0 => {
            let hot = std::f64::consts::LN_2 / max_delta as f64;
            let cold = 100f64.ln() / min_delta as f64;
            (hot, cold.max(hot * 1.0001))
        }
        _ => (1.0, 10.0),
    }
}

/// Adjacency-array copy of a problem for the inner loop.
struct Compiled {
    offset: i64,
    linear: Vec<i64>,
    start: Vec<usize>,
    nbr: Vec<u32>,
    weight: Vec<i64>,
}

impl Compiled {
    fn new(q: &QuboProblem) -> Self {
        let n = q.num_vars();
        let mut start = Vec::with_capacity(n + 1);
        let mut nbr = Vec::new();
        let mut weight = Vec::new();
        start.push(0);
        for i in 0..n {
            for (j, c) in q.neighbors(i) {
                nbr.push(j as u32);
                weight.push(c);
            }
            start.push(nbr.len());
        }
        Self {
            offset: q.offset(),
            linear: (0..n).map(|i| q.linear(i)).collect(),
            start,
            nbr,
            weight,
        }
    }

    fn len(&self) -> usize {
        self.linear.len()
    }

    fn fields(&self, x: &[bool]) -> (Vec<i64>, i64) {
        let mut h = self.linear.clone();
        let mut e = self.offset;
        for i in 0..self.len() {
            if !x[i] {
                continue;
            }
            e += self.linear[i];
            for k in self.start[i]..self.start[i + 1] {
                let j = self.nbr[k] as usize;
                h[j] += self.weight[k];
                if j > i && x[j] {
                    e += self.weight[k];
                }
            }
        }
        (h, e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub read: usize,
    pub energy: i64,
    pub assignment: Vec<bool>,
    /// Sweeps completed before the read ended.
    pub sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    pub beta_range: (f64, f64),
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SampleSet {
    pub fn best(&self) -> Option<&Sample> {
        self.samples.iter().min_by_key(|s| (s.energy, s.read))
    }

    pub fn best_energy(&self) -> Option<i64> {
        self.best().map(|s| s.energy)
    }
}

struct ReadLimits {
    target: Option<i64>,
    deadline: Option<Instant>,
}

fn anneal_read(c: &Compiled, sweeps: usize, betas: (f64, f64), seed: u64, read: usize, lim: &ReadLimits) -> Sample {
    let n = c.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(read as u64);
    let mut x: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let (mut h, mut e) = c.fields(&x);
    let mut best = x.clone();
    let mut best_e = e;
    let mut order: Vec<u32> = (0..n as u32).collect();
    let (hot, cold) = betas;
    let ratio = if sweeps > 1 {
        (cold / hot).powf(1.0 / (sweeps - 1) as f64)
    } else {
        1.0
    };
    let mut beta = if sweeps > 1 { hot } else { cold };
    let mut done = 0;
    let reached = |e: i64| lim.target.is_some_and(|t| e <= t);

    'sweeps: for _ in 0..sweeps {
        if reached(best_e) || lim.deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        order.shuffle(&mut rng);
        for &i in &order {
            let i = i as usize;
            let delta = if x[i] { -h[i] } else { h[i] };
            let accept = delta <= 0 || {
                let z = beta * delta as f64;
                z < 30.0 && rng.random::<f64>() < (-z).exp()
            };
            if !accept {
                continue;
            }
            x[i] = !x[i];
            e += delta;
            let sign = if x[i] { 1 } else { -1 };
            for k in c.start[i]..c.start[i + 1] {
                h[c.nbr[k] as usize] += sign * c.weight[k];
            }
            if reached(e) {
                best.copy_from_slice(&x);
                best_e = e;
                done += 1;
                break 'sweeps;
            }
        }
        if e < best_e {
            best.copy_from_slice(&x);
            best_e = e;
        }
        beta *= ratio;
        done += 1;
    }
    Sample {
        read,
        energy: best_e,
        assignment: best,
        sweeps: done,
    }
}

fn run(q: &QuboProblem, params: &AnnealParams, lim: &ReadLimits) -> Result<SampleSet, AnnealError> {
    params.validate()?;
    let start = Instant::now();
    let c = Compiled::new(q);
    let betas = params.beta_range.unwrap_or_else(|| beta_range(q));
    let one = |r: usize| anneal_read(&c, params.num_sweeps, betas, params.seed, r, lim);
    let samples: Vec<Sample> = if params.parallel {
        (0..params.num_reads).into_par_iter().map(one).collect()
    } else {
        let mut out = Vec::with_capacity(params.num_reads);
        for r in 0..params.num_reads {
            let s = one(r);
            let stop = lim.target.is_some_and(|t| s.energy <= t);
            out.push(s);
            if stop || lim.deadline.is_some_and(|d| Instant::now() >= d) {
                break;
            }
        }
        out
    };
    Ok(SampleSet {
        samples,
        beta_range: betas,
        wall_time: start.elapsed(),
    })
}

/// `num_reads` independent reads from uniform random starts; read `r` is
/// seeded by `(seed, r)`, so results do not depend on execution order.
pub fn sample(q: &QuboProblem, params: &AnnealParams) -> Result<SampleSet, AnnealError> {
    run(q, params, &ReadLimits { target: None, deadline: None })
}

/// Like [`sample`], but a read stops once it reaches `target`, later reads
/// are skipped (sequential mode), and no new sweep starts after `deadline`.
pub fn sample_until(
    q: &QuboProblem,
    params: &AnnealParams,
    target: Option<i64>,
    deadline: Option<Instant>,
) -> Result<SampleSet, AnnealError> {
    run(q, params, &ReadLimits { target, deadline })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "NO")]
    No,
    #[serde(rename = "TIMEOUT-NO")]
    TimeoutNo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    /// Whether the encoded function reached 0. Negated tasks flip this for the final answer.
    pub answer: Answer,
    pub witness: Option<ArgumentSet>,
    pub energy: i64,
    pub restarts: usize,
    pub reads: usize,
    pub sweeps: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl DecisionReport {
    /// YES comes with a verified witness; NO never does.
    pub fn certified(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// Restarts with seed `seed + i` until a zero-energy sample appears, the
/// restart limit is reached, or time runs out.
pub fn decide(
    af: &ArgumentationFramework,
    task: &EncodedTask,
    params: &AnnealParams,
) -> Result<DecisionReport, AnnealError> {
    if !task.expected_zero() {
        return Err(AnnealError::InvalidParams(
            "decide needs a penalty function whose minimum 0 certifies the answer".into(),
        ));
    }
    params.validate()?;
    let start = Instant::now();
    let deadline = params.deadline(start);
    let q = task.problem();
    let mut best = i64::MAX;
    let (mut reads, mut sweeps) = (0, 0);
    for it in 0..params.max_restarts {
        let round = AnnealParams {
            seed: params.seed.wrapping_add(it as u64),
            ..params.clone()
        };
        let set = sample_until(q, &round, Some(0), Some(deadline))?;
        reads += set.samples.len();
        sweeps += set.samples.iter().map(|s| s.sweeps).sum::<usize>();
        for s in &set.samples {
            best = best.min(s.energy);
            if s.energy != 0 {
                continue;
            }
            let w = task.decode(&s.assignment);
            if !task.check_witness(af, &w).unwrap_or(false) {
                return Err(AnnealError::InconsistentWitness {
                    witness: w.iter().collect(),
                });
            }
            return Ok(DecisionReport {
                answer: Answer::Yes,
                witness: Some(w),
                energy: 0,
                restarts: it + 1,
                reads,
                sweeps,
                elapsed: start.elapsed(),
            });
        }
        if Instant::now() >= deadline {
            return Ok(DecisionReport {
                answer: Answer::TimeoutNo,
                witness: None,
                energy: best,
                restarts: it + 1,
                reads,
                sweeps,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(DecisionReport {
        answer: Answer::No,
        witness: None,
        energy: best,
        restarts: params.max_restarts,
        reads,
        sweeps,
        elapsed: start.elapsed(),
    })
}
