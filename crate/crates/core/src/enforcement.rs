//! Strict enforcement of a target set as a complete extension by editing the
//! attack relation as little as possible.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::af::{verify, ArgumentSet, ArgumentationFramework, Semantics};
use crate::anneal::{sample_until, AnnealParams};
use crate::encodings::circuit::{AuxNaming, Circuit};
use crate::encodings::EncodeOptions;
use crate::error::{EnforceError, SolveError};
use crate::qubo::{Binding, GateKind, Lit, QuboProblem, Role};

/// Penalty weight used in the published experiments.
pub const BASE_LAMBDA: i64 = 100;

/// Smallest weight for which every constraint violation outweighs any edit count.
pub fn min_lambda(n: usize) -> i64 {
    (n * n) as i64 + 1
}

pub fn default_lambda(n: usize) -> i64 {
    BASE_LAMBDA.max(min_lambda(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableCounts {
    /// `3n² + n(k - 3)` as published.
    pub estimate: i64,
    /// Every symbol and chain auxiliary as constructed, before fixing `r_ij = 0` inside the target.
    pub constructed: usize,
    /// Variables left after propagation and elimination.
    pub live: usize,
}

/// `2n² + n + n·max(k-2, 0) + (n-k)·max(n-2, 0)`.
pub fn constructed_variable_count(n: usize, k: usize) -> usize {
    2 * n * n + n + n * k.saturating_sub(2) + (n - k) * n.saturating_sub(2)
}

#[derive(Debug, Clone)]
pub struct EnforcementTask {
    problem: QuboProblem,
    af: ArgumentationFramework,
    target: ArgumentSet,
    /// Internal order: target members first.
    order: Vec<usize>,
    lambda: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnforcementResult {
    pub attacks: BTreeSet<(usize, usize)>,
    pub added: Vec<(usize, usize)>,
    pub removed: Vec<(usize, usize)>,
    pub distance: usize,
    /// The target is a complete extension of the edited framework.
    pub verified: bool,
    /// `distance + λ·constraint_penalty`, with auxiliaries at their forced values.
    pub energy: i64,
    pub constraint_penalty: i64,
}

impl EnforcementResult {
    pub fn framework(&self, original: &ArgumentationFramework) -> ArgumentationFramework {
        original
            .with_attacks(self.attacks.iter().copied())
            .expect("decoded attacks are in range")
    }
}

/// Size of the symmetric difference.
pub fn hamming(a: &BTreeSet<(usize, usize)>, b: &BTreeSet<(usize, usize)>) -> usize {
    a.symmetric_difference(b).count()
}

pub fn build_strict_complete(
    af: &ArgumentationFramework,
    target: &ArgumentSet,
    lambda: i64,
) -> Result<EnforcementTask, EnforceError> {
    build_strict_complete_with(af, target, lambda, EncodeOptions::default())
}

pub fn build_strict_complete_with(
    af: &ArgumentationFramework,
    target: &ArgumentSet,
    lambda: i64,
    options: EncodeOptions,
) -> Result<EnforcementTask, EnforceError> {
    let n = af.len();
    assert_eq!(target.universe(), n, "target universe differs from framework size");
    if target.is_empty() {
        return Err(EnforceError::EmptyTarget);
    }
    if lambda < min_lambda(n) {
        return Err(EnforceError::LambdaTooSmall {
            lambda,
            min: min_lambda(n),
        });
    }
    let order: Vec<usize> = target
        .iter()
        .chain((0..n).filter(|&i| !target.contains(i)))
        .collect();
    let k = target.len();
    let inside = |i: usize| i < k;

    let mut c = Circuit::default();
    // r[i][j]: order[i] attacks order[j]
    let r: Vec<Vec<usize>> = order
        .iter()
        .map(|&from| {
            order
                .iter()
                .map(|&to| c.symbol(Role::Attack { from, to }))
                .collect()
        })
        .collect();
    let t: Vec<usize> = order.iter().map(|&i| c.symbol(Role::Attacked(i))).collect();
    let s: Vec<Vec<usize>> = order
        .iter()
        .map(|&attacker| {
            order
                .iter()
                .map(|&target| c.symbol(Role::Undefended { attacker, target }))
                .collect()
        })
        .collect();

    for i in 0..k {
        for j in 0..k {
            c.fix(r[i][j], false);
        }
    }
    // t_i = OR_{j in T} r_ji
    for i in 0..n {
        let inputs = (0..k).map(|j| Lit::pos(r[j][i])).collect();
        c.gate(GateKind::Or, t[i], inputs, lambda, AuxNaming::Or(order[i]));
    }
    // s_ji = r_ji AND NOT t_j
    for j in 0..n {
        for i in 0..n {
            let inputs = vec![Lit::pos(r[j][i]), Lit::neg(t[j])];
            c.gate(GateKind::And, s[j][i], inputs, lambda, AuxNaming::And(order[i]));
        }
    }
    // undefended attackers of the target
    for i in 0..k {
        for j in k..n {
            c.terms().add_linear(s[j][i], lambda);
        }
    }
    // every outsider has an undefended attacker
    for i in (0..n).filter(|&i| !inside(i)) {
        let inputs = (0..n).map(|j| Lit::pos(s[j][i])).collect();
        c.clause(inputs, lambda, AuxNaming::Nd(order[i]));
    }
    // edit distance
    for i in 0..n {
        for j in 0..n {
            if af.attacks_contains(order[i], order[j]) {
                c.terms().add_lit(Lit::neg(r[i][j]), 1);
            } else {
                c.terms().add_lit(Lit::pos(r[i][j]), 1);
            }
        }
    }

    let problem = if options.simplify { c.lower() } else { c.lower_raw() };
    Ok(EnforcementTask {
        problem,
        af: af.clone(),
        target: target.clone(),
        order,
        lambda,
    })
}

impl EnforcementTask {
    pub fn problem(&self) -> &QuboProblem {
        &self.problem
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn target(&self) -> &ArgumentSet {
        &self.target
    }

    /// Original argument indices in internal order (target first).
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn variable_counts(&self) -> VariableCounts {
        let n = self.af.len();
        let k = self.target.len();
        VariableCounts {
            estimate: 3 * (n * n) as i64 + n as i64 * (k as i64 - 3),
            constructed: constructed_variable_count(n, k),
            live: self.problem.num_vars(),
        }
    }

    fn attack_value(&self, a: &[bool], from: usize, to: usize) -> bool {
        match self.problem.registry().resolve(Role::Attack { from, to }) {
            Some((Binding::Var(v), neg)) => a[v] != neg,
            Some((Binding::Const(b), _)) => b,
            _ => false,
        }
    }

    /// Reads the attack relation off `a`, recomputes the auxiliaries it forces,
    /// and checks the target polynomially.
    pub fn decode_attacks(&self, a: &[bool]) -> EnforcementResult {
        let n = self.af.len();
        let attacks: BTreeSet<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.attack_value(a, i, j))
            .collect();
        let mut completed = a.to_vec();
        self.problem.forced_completion(&mut completed);
        let energy = self.problem.energy(&completed).expect("assignment length");
        let original = self.af.attacks();
        let distance = hamming(original, &attacks);
        let edited = self.af.with_attacks(attacks.iter().copied()).expect("in range");
        EnforcementResult {
            added: attacks.difference(original).copied().collect(),
            removed: original.difference(&attacks).copied().collect(),
            verified: verify(&edited, &self.target, Semantics::Complete).expect("polynomial check"),
            constraint_penalty: (energy - distance as i64) / self.lambda,
            energy,
            distance,
            attacks,
        }
    }

    /// Assignment encoding the attack relation `attacks`, auxiliaries forced.
    pub fn encode_attacks(&self, attacks: &BTreeSet<(usize, usize)>) -> Vec<bool> {
        let mut a = vec![false; self.problem.num_vars()];
        for (v, role) in self.problem.registry().roles().iter().enumerate() {
            if let Role::Attack { from, to } = *role {
                a[v] = attacks.contains(&(from, to));
            }
        }
        self.problem.forced_completion(&mut a);
        a
    }
}

/// Edit-space view of the constraint penalty, with `t` and `s` at their forced
/// values: attackers of the target not attacked back, plus outsiders lacking
/// an attacker the target leaves alone.
struct EditState<'a> {
    inside: &'a [bool],
    r: Vec<Vec<bool>>,
    /// target members attacking `i`
    hits: Vec<usize>,
    /// attackers of `i` not attacked by the target
    free_attackers: Vec<usize>,
    penalty: i64,
}

impl<'a> EditState<'a> {
    fn new(n: usize, inside: &'a [bool], attacks: &BTreeSet<(usize, usize)>) -> Self {
        let mut r = vec![vec![false; n]; n];
        for &(j, i) in attacks {
            r[j][i] = true;
        }
        let hits: Vec<usize> = (0..n)
            .map(|i| (0..n).filter(|&j| inside[j] && r[j][i]).count())
            .collect();
        let free_attackers: Vec<usize> = (0..n)
            .map(|i| (0..n).filter(|&j| r[j][i] && hits[j] == 0).count())
            .collect();
        let mut st = Self {
            inside,
            r,
            hits,
            free_attackers,
            penalty: 0,
        };
        st.penalty = (0..n).map(|i| st.cost(i)).sum();
        st
    }

    fn cost(&self, i: usize) -> i64 {
        if self.inside[i] {
            self.free_attackers[i] as i64
        } else {
            (self.free_attackers[i] == 0) as i64
        }
    }

    fn shift(&mut self, i: usize, up: bool) {
        self.penalty -= self.cost(i);
        if up {
            self.free_attackers[i] += 1;
        } else {
            self.free_attackers[i] -= 1;
        }
        self.penalty += self.cost(i);
    }

    /// Toggles `j -> i`; its own inverse.
    fn flip(&mut self, j: usize, i: usize) {
        let on = !self.r[j][i];
        self.r[j][i] = on;
        if self.hits[j] == 0 {
            self.shift(i, on);
        }
        if self.inside[j] {
            let was = self.hits[i] > 0;
            if on {
                self.hits[i] += 1;
            } else {
                self.hits[i] -= 1;
            }
            if was != (self.hits[i] > 0) {
                for m in 0..self.r.len() {
                    if self.r[i][m] {
                        self.shift(m, was);
                    }
                }
            }
        }
    }
}

impl EnforcementTask {
    /// First-improvement descent over single attack edits, scoring
    /// `distance + λ·penalty` with the auxiliaries recomputed after each edit.
    pub fn polish(&self, attacks: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
        let n = self.af.len();
        let inside: Vec<bool> = (0..n).map(|i| self.target.contains(i)).collect();
        let mut st = EditState::new(n, &inside, attacks);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (0..n).map(move |i| (j, i)))
            .filter(|&(j, i)| !(inside[j] && inside[i]))
            .collect();
        loop {
            let mut improved = false;
            for &(j, i) in &pairs {
                let step = if st.r[j][i] == self.af.attacks_contains(j, i) { 1 } else { -1 };
                let before = st.penalty;
                st.flip(j, i);
                if step + self.lambda * (st.penalty - before) < 0 {
                    improved = true;
                } else {
                    st.flip(j, i);
                }
            }
            if !improved {
                break;
            }
        }
        pairs.into_iter().filter(|&(j, i)| st.r[j][i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnforcementReport {
    pub result: EnforcementResult,
    /// Best sample as annealed, before polishing.
    pub annealed: EnforcementResult,
    pub restarts: usize,
    pub reads: usize,
}

fn keep_better(best: &mut Option<EnforcementResult>, r: EnforcementResult) {
    let better = match best {
        None => true,
        Some(b) => (r.energy, &r.added, &r.removed) < (b.energy, &b.added, &b.removed),
    };
    if better {
        *best = Some(r);
    }
}

/// Anneals the enforcement problem and returns the best decoded relation.
pub fn enforce(
    af: &ArgumentationFramework,
    target: &ArgumentSet,
    lambda: i64,
    params: &AnnealParams,
) -> Result<EnforcementReport, SolveError> {
    let task = build_strict_complete(af, target, lambda)?;
    solve(&task, params)
}

/// Every sample is decoded and polished; restarts (seed + i) happen only while
/// nothing verifies.
pub fn solve(task: &EnforcementTask, params: &AnnealParams) -> Result<EnforcementReport, SolveError> {
    params.validate()?;
    let start = Instant::now();
    let deadline = start + std::time::Duration::from_secs_f64(params.timeout_secs.min(1e9));
    let mut best: Option<EnforcementResult> = None;
    let mut annealed: Option<EnforcementResult> = None;
    let mut reads = 0;
    let mut restarts = 0;
    for it in 0..params.max_restarts {
        restarts = it + 1;
        let round = AnnealParams {
            seed: params.seed.wrapping_add(it as u64),
            ..params.clone()
        };
        let set = sample_until(task.problem(), &round, None, Some(deadline))?;
        reads += set.samples.len();
        for s in &set.samples {
            let raw = task.decode_attacks(&s.assignment);
            let r = task.decode_attacks(&task.encode_attacks(&task.polish(&raw.attacks)));
            keep_better(&mut best, r);
            keep_better(&mut annealed, raw);
        }
        if best.as_ref().is_some_and(|b| b.verified) || Instant::now() >= deadline {
            break;
        }
    }
    Ok(EnforcementReport {
        result: best.expect("at least one read"),
        annealed: annealed.expect("at least one read"),
        restarts,
        reads,
    })
}
