//! Penalty functions for argumentation semantics and the decision tasks built on them.

pub(crate) mod circuit;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::af::{verify, ArgumentSet, ArgumentationFramework, Semantics};
use crate::error::{AfError, EncodeError};
use crate::qubo::{Binding, GateKind, Lit, QuboProblem, Role, VariableRegistry};
use circuit::{AuxNaming, Circuit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodeOptions {
    /// Propagate constants and drop unused gadgets. Off gives the textbook
    /// variable layout, one variable per symbol.
    pub simplify: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self { simplify: true }
    }
}

/// What the penalty function of an [`EncodedTask`] expresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskDescriptor {
    pub semantics: Semantics,
    pub nonempty: bool,
    /// Decision variable fixed by a credulous (`true`) or negated skeptical (`false`) query.
    pub fixed: Option<(usize, bool)>,
}

#[derive(Debug, Clone)]
pub struct EncodedTask {
    problem: QuboProblem,
    circuit: Circuit,
    n: usize,
    descriptor: TaskDescriptor,
    options: EncodeOptions,
}

impl EncodedTask {
    fn from_circuit(circuit: Circuit, n: usize, descriptor: TaskDescriptor, options: EncodeOptions) -> Self {
        let problem = if options.simplify {
            circuit.lower()
        } else {
            circuit.lower_raw()
        };
        Self {
            problem,
            circuit,
            n,
            descriptor,
            options,
        }
    }

    pub fn problem(&self) -> &QuboProblem {
        &self.problem
    }

    pub fn registry(&self) -> &VariableRegistry {
        self.problem.registry()
    }

    pub fn descriptor(&self) -> TaskDescriptor {
        self.descriptor
    }

    pub fn num_args(&self) -> usize {
        self.n
    }

    /// Minimum 0 certifies YES. False for the maximizing pr/sst functions.
    pub fn expected_zero(&self) -> bool {
        !matches!(
            self.descriptor.semantics,
            Semantics::Preferred | Semantics::SemiStable
        )
    }

    /// `(argument, variable)` for every decision variable still live.
    pub fn decision_vars(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .filter_map(|i| self.registry().var(Role::Decision(i)).map(|v| (i, v)))
            .collect()
    }

    fn decision_value(&self, i: usize, a: &[bool]) -> bool {
        match self.registry().resolve(Role::Decision(i)) {
            Some((Binding::Var(v), neg)) => a[v] != neg,
            Some((Binding::Const(b), _)) => b,
            _ => false,
        }
    }

    /// The argument set an assignment selects, fixed arguments included.
    pub fn decode(&self, a: &[bool]) -> ArgumentSet {
        ArgumentSet::from_indices(self.n, (0..self.n).filter(|&i| self.decision_value(i, a)))
    }

    /// Assignment selecting `set` with every gadget output at its forced value.
    pub fn assignment_for(&self, set: &ArgumentSet) -> Vec<bool> {
        let mut a = vec![false; self.problem.num_vars()];
        for (i, v) in self.decision_vars() {
            a[v] = set.contains(i);
        }
        self.problem.forced_completion(&mut a);
        a
    }

    /// Energy of `set` under the forced completion of the auxiliaries.
    pub fn completion_energy(&self, set: &ArgumentSet) -> i64 {
        self.problem
            .energy(&self.assignment_for(set))
            .expect("assignment has problem length")
    }

    /// Polynomial check that `set` is a witness for this task. For pr/sst
    /// encodings this only checks completeness.
    pub fn check_witness(&self, af: &ArgumentationFramework, set: &ArgumentSet) -> Result<bool, AfError> {
        let sigma = match self.descriptor.semantics {
            Semantics::Preferred | Semantics::SemiStable => Semantics::Complete,
            s => s,
        };
        let fixed_ok = self
            .descriptor
            .fixed
            .is_none_or(|(arg, v)| set.contains(arg) == v);
        Ok(fixed_ok && (!self.descriptor.nonempty || !set.is_empty()) && verify(af, set, sigma)?)
    }

    fn rebuilt(&self, circuit: Circuit, descriptor: TaskDescriptor) -> Self {
        Self::from_circuit(circuit, self.n, descriptor, self.options)
    }
}

fn constraint_weight(n: usize, sigma: Semantics) -> i64 {
    match sigma {
        Semantics::Preferred | Semantics::SemiStable => n as i64 + 1,
        _ => 1,
    }
}

fn circuit_for(af: &ArgumentationFramework, sigma: Semantics) -> Result<Circuit, EncodeError> {
    if sigma == Semantics::Grounded {
        return Err(EncodeError::Unsupported(
            "no penalty function for grounded semantics".into(),
        ));
    }
    let n = af.len();
    let w = constraint_weight(n, sigma);
    let mut c = Circuit::default();
    let x: Vec<usize> = (0..n).map(|i| c.symbol(Role::Decision(i))).collect();

    // one term per conflicting unordered pair
    for &(i, j) in af.attacks() {
        if i == j {
            c.terms().add_linear(x[i], w);
        } else if i < j || !af.attacks_contains(j, i) {
            c.terms().add_quad(x[i], x[j], w);
        }
    }
    if sigma == Semantics::ConflictFree {
        return Ok(c);
    }

    let t: Vec<usize> = (0..n).map(|i| c.symbol(Role::Attacked(i))).collect();
    let d: Vec<usize> = (0..n).map(|i| c.symbol(Role::Defended(i))).collect();
    for i in 0..n {
        let inputs = af.attackers(i).iter().map(|&j| Lit::pos(x[j])).collect();
        c.gate(GateKind::Or, t[i], inputs, w, AuxNaming::Or(i));
    }
    for i in 0..n {
        let inputs = af.attackers(i).iter().map(|&j| Lit::pos(t[j])).collect();
        c.gate(GateKind::And, d[i], inputs, w, AuxNaming::And(i));
    }
    for i in 0..n {
        // x_i (1 - d_i)
        c.terms().add_lit_product(Lit::pos(x[i]), Lit::neg(d[i]), w);
    }
    if sigma == Semantics::Admissible {
        return Ok(c);
    }
    for i in 0..n {
        c.terms().add_lit_product(Lit::neg(x[i]), Lit::pos(d[i]), w);
    }
    match sigma {
        Semantics::Stable => {
            for i in 0..n {
                c.terms().add_lit_product(Lit::neg(x[i]), Lit::neg(t[i]), w);
            }
        }
        Semantics::Preferred => {
            for &xi in &x {
                c.terms().add_lit(Lit::neg(xi), 1);
            }
        }
        Semantics::SemiStable => {
            for &ti in &t {
                c.terms().add_lit(Lit::neg(ti), 1);
            }
        }
        _ => {}
    }
    Ok(c)
}

/// Penalty function for `sigma`; grounded has none.
pub fn build(
    af: &ArgumentationFramework,
    sigma: Semantics,
    options: EncodeOptions,
) -> Result<EncodedTask, EncodeError> {
    let circuit = circuit_for(af, sigma)?;
    let descriptor = TaskDescriptor {
        semantics: sigma,
        nonempty: false,
        fixed: None,
    };
    Ok(EncodedTask::from_circuit(circuit, af.len(), descriptor, options))
}

fn build_default(af: &ArgumentationFramework, sigma: Semantics) -> EncodedTask {
    build(af, sigma, EncodeOptions::default()).expect("semantics has an encoding")
}

/// Number of attacks inside the set.
pub fn build_cf(af: &ArgumentationFramework) -> EncodedTask {
    build_default(af, Semantics::ConflictFree)
}

pub fn build_adm(af: &ArgumentationFramework) -> EncodedTask {
    build_default(af, Semantics::Admissible)
}

pub fn build_co(af: &ArgumentationFramework) -> EncodedTask {
    build_default(af, Semantics::Complete)
}

/// `Σ(1 - x_i) + (n+1)·P_co`: minimum `n - max|E|` over complete `E`.
pub fn build_pr(af: &ArgumentationFramework) -> EncodedTask {
    build_default(af, Semantics::Preferred)
}

/// `Σ(1 - t_i) + (n+1)·P_co`: minimizers attack as many arguments as possible.
pub fn build_sst(af: &ArgumentationFramework) -> EncodedTask {
    build_default(af, Semantics::SemiStable)
}

pub fn build_st(af: &ArgumentationFramework) -> EncodedTask {
    build_default(af, Semantics::Stable)
}

/// Adds the clause `x_1 ∨ … ∨ x_n`, which needs `n - 2` auxiliaries.
pub fn add_nonempty(task: &EncodedTask) -> Result<EncodedTask, EncodeError> {
    if task.n == 0 {
        return Err(EncodeError::EmptyFramework);
    }
    if task.descriptor.nonempty {
        return Ok(task.clone());
    }
    let mut circuit = task.circuit.clone();
    let inputs = (0..task.n)
        .map(|i| Lit::pos(circuit.lookup(Role::Decision(i)).expect("decision symbol")))
        .collect();
    let w = constraint_weight(task.n, task.descriptor.semantics);
    circuit.clause(inputs, w, AuxNaming::NonEmpty);
    Ok(task.rebuilt(
        circuit,
        TaskDescriptor {
            nonempty: true,
            ..task.descriptor
        },
    ))
}

fn fix_argument(task: &EncodedTask, arg: usize, value: bool) -> Result<EncodedTask, EncodeError> {
    if arg >= task.n {
        return Err(AfError::UnknownArgument(format!("#{arg}")).into());
    }
    if !task.expected_zero() || task.descriptor.semantics == Semantics::ConflictFree {
        return Err(EncodeError::Unsupported(format!(
            "acceptance queries need an ad, co or st encoding, not {}",
            task.descriptor.semantics
        )));
    }
    if task.descriptor.fixed.is_some() {
        return Err(EncodeError::Unsupported("task already has a fixed argument".into()));
    }
    let mut circuit = task.circuit.clone();
    let x = circuit.lookup(Role::Decision(arg)).expect("decision symbol");
    circuit.fix(x, value);
    Ok(task.rebuilt(
        circuit,
        TaskDescriptor {
            fixed: Some((arg, value)),
            ..task.descriptor
        },
    ))
}

/// Forces `x_arg = 1`: minimum 0 iff `arg` is credulously accepted.
pub fn fix_credulous(task: &EncodedTask, arg: usize) -> Result<EncodedTask, EncodeError> {
    fix_argument(task, arg, true)
}

/// Forces `x_arg = 0`: minimum 0 iff `arg` is *not* skeptically accepted.
pub fn fix_skeptical_negative(task: &EncodedTask, arg: usize) -> Result<EncodedTask, EncodeError> {
    fix_argument(task, arg, false)
}

/// Variable count before simplification: `3n + 2·Σ max(h_i - 2, 0)`, plus
/// `n - 2` for the non-emptiness clause.
pub fn variable_count(af: &ArgumentationFramework, nonempty: bool) -> usize {
    let n = af.len();
    let chains: usize = (0..n).map(|i| af.in_degree(i).saturating_sub(2)).sum();
    let base = 3 * n + 2 * chains;
    if nonempty {
        base + n.saturating_sub(2)
    } else {
        base
    }
}

/// Decision problems answered through a penalty function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "DC-CO")]
    DcCo,
    #[serde(rename = "DC-PR")]
    DcPr,
    #[serde(rename = "DC-ST")]
    DcSt,
    #[serde(rename = "SCneg-CO")]
    ScNegCo,
    #[serde(rename = "EX-ST")]
    ExSt,
    #[serde(rename = "NE-AD")]
    NeAd,
    #[serde(rename = "NE-CO")]
    NeCo,
    #[serde(rename = "NE-PR")]
    NePr,
    #[serde(rename = "NE-SST")]
    NeSst,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::DcCo,
        Task::DcPr,
        Task::DcSt,
        Task::ScNegCo,
        Task::ExSt,
        Task::NeAd,
        Task::NeCo,
        Task::NePr,
        Task::NeSst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::DcCo => "DC-CO",
            Task::DcPr => "DC-PR",
            Task::DcSt => "DC-ST",
            Task::ScNegCo => "SCneg-CO",
            Task::ExSt => "EX-ST",
            Task::NeAd => "NE-AD",
            Task::NeCo => "NE-CO",
            Task::NePr => "NE-PR",
            Task::NeSst => "NE-SST",
        }
    }

    pub fn needs_argument(self) -> bool {
        matches!(self, Task::DcCo | Task::DcPr | Task::DcSt | Task::ScNegCo)
    }

    /// Semantics the task is stated in.
    pub fn semantics(self) -> Semantics {
        match self {
            Task::DcCo | Task::ScNegCo | Task::NeCo => Semantics::Complete,
            Task::DcPr | Task::NePr => Semantics::Preferred,
            Task::DcSt | Task::ExSt => Semantics::Stable,
            Task::NeAd => Semantics::Admissible,
            Task::NeSst => Semantics::SemiStable,
        }
    }

    /// Semantics of the penalty function used; pr and sst questions reduce to ad.
    pub fn encoding(self) -> Semantics {
        match self.semantics() {
            Semantics::Preferred | Semantics::SemiStable => Semantics::Admissible,
            s => s,
        }
    }

    /// The reported answer is the negation of "minimum is 0".
    pub fn negated(self) -> bool {
        self == Task::ScNegCo
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = Task::ALL.iter().map(|t| t.name()).collect();
                format!("unknown task `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Builds the penalty function for `task`; `arg` is required for DC/SC tasks.
pub fn encode_task(
    af: &ArgumentationFramework,
    task: Task,
    arg: Option<usize>,
    options: EncodeOptions,
) -> Result<EncodedTask, EncodeError> {
    let base = build(af, task.encoding(), options)?;
    match (task, arg) {
        (Task::DcCo | Task::DcPr | Task::DcSt, Some(a)) => fix_credulous(&base, a),
        (Task::ScNegCo, Some(a)) => fix_skeptical_negative(&base, a),
        (t, None) if t.needs_argument() => Err(EncodeError::Unsupported(format!("{t} needs an argument"))),
        (Task::ExSt, _) => Ok(base),
        (Task::NeAd | Task::NeCo | Task::NePr | Task::NeSst, _) => add_nonempty(&base),
        _ => unreachable!("argument tasks handled above"),
    }
}
