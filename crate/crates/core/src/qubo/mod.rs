//! Integer QUBO model: `f(x) = offset + Σ linear_i x_i + Σ_{i<j} quad_ij x_i x_j`.
//!
//! Besides the merged coefficients a problem remembers which terms were
//! contributed by each logic gadget, so that gadgets whose output variable is
//! used nowhere else can be dropped without changing the minimum.

mod export;
pub mod gadgets;
mod poly;
mod registry;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Deref, DerefMut};

pub use export::{QuboJson, QuadTerm};
pub use gadgets::{and_chain, and_gadget, equality_gadget, or_chain, or_gadget, require_any};
pub use poly::{Lit, Poly, Signal};
pub use registry::{Binding, Role, VariableRegistry};

use crate::error::QuboError;

/// A full 0/1 assignment to the variables of a problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }
}

impl Deref for Assignment {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.0
    }
}

impl DerefMut for Assignment {
    fn deref_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Or,
    And,
    Equal,
}

impl GateKind {
    pub fn apply(self, inputs: impl IntoIterator<Item = bool>) -> bool {
        let mut it = inputs.into_iter();
        match self {
            GateKind::Or => it.any(|b| b),
            GateKind::And => it.all(|b| b),
            GateKind::Equal => it.next().expect("equality gadget has one input"),
        }
    }
}

/// Terms added by one gadget, with the relation they encode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetGroup {
    pub kind: GateKind,
    pub output: usize,
    pub inputs: Vec<Signal>,
    pub terms: Poly,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuboProblem {
    offset: i64,
    linear: Vec<i64>,
    /// Symmetric adjacency: `adj[i][j] == adj[j][i] == quad_ij`.
    adj: Vec<BTreeMap<usize, i64>>,
    registry: VariableRegistry,
    groups: Vec<GadgetGroup>,
}

enum Fate {
    Keep,
    Fix(bool),
    Drop,
}

impl QuboProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// `n` unlabelled variables.
    pub fn with_vars(n: usize) -> Self {
        let mut q = Self::new();
        for _ in 0..n {
            q.add_aux_variable();
        }
        q
    }

    pub fn add_variable(&mut self, role: Role) -> usize {
        let i = self.registry.push(role);
        self.linear.push(0);
        self.adj.push(BTreeMap::new());
        i
    }

    pub(crate) fn bind(&mut self, role: Role, binding: Binding) {
        self.registry.bind(role, binding);
    }

    pub fn add_aux_variable(&mut self) -> usize {
        let role = self.registry.fresh_aux();
        self.add_variable(role)
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn registry(&self) -> &VariableRegistry {
        &self.registry
    }

    pub fn groups(&self) -> &[GadgetGroup] {
        &self.groups
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn linear(&self, i: usize) -> i64 {
        self.linear[i]
    }

    pub fn quadratic(&self, i: usize, j: usize) -> i64 {
        self.adj[i].get(&j).copied().unwrap_or(0)
    }

    /// Neighbours of `i` with their coupling coefficients.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.adj[i].iter().map(|(&j, &c)| (j, c))
    }

    /// Upper-triangular quadratic terms `(i, j, c)` with `i < j`, sorted.
    pub fn quadratic_terms(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, row)| {
            row.range(i + 1..).map(move |(&j, &c)| (i, j, c))
        })
    }

    pub fn num_quadratic_terms(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn add_offset(&mut self, c: i64) {
        self.offset += c;
    }

    pub fn add_linear(&mut self, i: usize, c: i64) {
        self.linear[i] += c;
    }

    /// `c·x_i·x_j`; the diagonal folds into the linear coefficient.
    pub fn add_quadratic(&mut self, i: usize, j: usize, c: i64) {
        if i == j {
            self.add_linear(i, c);
            return;
        }
        if c == 0 {
            return;
        }
        for (a, b) in [(i, j), (j, i)] {
            let e = self.adj[a].entry(b).or_insert(0);
            *e += c;
            if *e == 0 {
                self.adj[a].remove(&b);
            }
        }
    }

    pub fn add_poly(&mut self, p: &Poly, scale: i64) {
        self.offset += scale * p.offset;
        for (&v, &c) in &p.linear {
            self.add_linear(v, scale * c);
        }
        for (&(a, b), &c) in &p.quad {
            self.add_quadratic(a, b, scale * c);
        }
    }

    pub(crate) fn add_group(&mut self, group: GadgetGroup) {
        self.add_poly(&group.terms, 1);
        self.groups.push(group);
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::constant(self.offset);
        for (i, &c) in self.linear.iter().enumerate() {
            p.add_linear(i, c);
        }
        for (i, j, c) in self.quadratic_terms() {
            p.add_quad(i, j, c);
        }
        p
    }

    fn check_len(&self, a: &[bool]) -> Result<(), QuboError> {
        if a.len() != self.num_vars() {
            return Err(QuboError::LengthMismatch {
                expected: self.num_vars(),
                got: a.len(),
            });
        }
        Ok(())
    }

    pub fn energy(&self, a: &[bool]) -> Result<i64, QuboError> {
        self.check_len(a)?;
        let mut e = self.offset;
        for i in (0..a.len()).filter(|&i| a[i]) {
            e += self.linear[i];
            e += self.adj[i].range(i + 1..).filter(|(&j, _)| a[j]).map(|(_, &c)| c).sum::<i64>();
        }
        Ok(e)
    }

    /// Energy change from flipping bit `i`, using only terms incident to `i`.
    pub fn delta_energy(&self, a: &[bool], i: usize) -> i64 {
        let field: i64 = self.linear[i]
            + self.adj[i].iter().filter(|(&j, _)| a[j]).map(|(_, &c)| c).sum::<i64>();
        if a[i] {
            -field
        } else {
            field
        }
    }

    /// Sets every gadget output to the value its inputs force, in creation order.
    pub fn forced_completion(&self, a: &mut [bool]) {
        for g in &self.groups {
            let v = g.kind.apply(g.inputs.iter().map(|s| s.eval(|k| a[k])));
            a[g.output] = v;
        }
    }

    fn occurs(&self, i: usize) -> bool {
        self.linear[i] != 0 || !self.adj[i].is_empty()
    }

    /// Substitutes `x_i = value`, folds constants, and renumbers the remaining variables.
    pub fn fix_variable(&self, i: usize, value: bool) -> Result<QuboProblem, QuboError> {
        self.fix_variables(&[(i, value)])
    }

    pub fn fix_variables(&self, fixes: &[(usize, bool)]) -> Result<QuboProblem, QuboError> {
        let mut fates: Vec<Fate> = (0..self.num_vars()).map(|_| Fate::Keep).collect();
        for &(i, v) in fixes {
            if i >= self.num_vars() {
                return Err(QuboError::VariableOutOfRange {
                    index: i,
                    len: self.num_vars(),
                });
            }
            fates[i] = Fate::Fix(v);
        }
        Ok(self.transform(&fates))
    }

    fn transform(&self, fates: &[Fate]) -> QuboProblem {
        let mut next = 0;
        let signals: Vec<Signal> = fates
            .iter()
            .map(|f| match f {
                Fate::Keep => {
                    next += 1;
                    Signal::Lit(Lit::pos(next - 1))
                }
                Fate::Fix(b) => Signal::Const(*b),
                Fate::Drop => Signal::Const(false),
            })
            .collect();
        let reg_fates: Vec<Result<usize, Binding>> = fates
            .iter()
            .zip(&signals)
            .map(|(f, s)| match (f, s) {
                (Fate::Keep, Signal::Lit(l)) => Ok(l.var),
                (Fate::Fix(b), _) => Err(Binding::Const(*b)),
                _ => Err(Binding::Eliminated),
            })
            .collect();

        let mut registry = self.registry.clone();
        registry.remap(&reg_fates);
        let mut out = QuboProblem {
            offset: 0,
            linear: vec![0; next],
            adj: vec![BTreeMap::new(); next],
            registry,
            groups: Vec::new(),
        };
        out.add_poly(&self.to_poly().rewrite(|v| signals[v]), 1);

        for g in &self.groups {
            let Signal::Lit(out_lit) = signals[g.output] else {
                // output fixed: the terms stay as plain penalties
                continue;
            };
            out.groups.push(GadgetGroup {
                kind: g.kind,
                output: out_lit.var,
                inputs: g
                    .inputs
                    .iter()
                    .map(|s| match *s {
                        Signal::Lit(l) => match signals[l.var] {
                            Signal::Lit(m) => Signal::Lit(Lit { var: m.var, negated: l.negated }),
                            Signal::Const(b) => Signal::Const(b != l.negated),
                        },
                        c => c,
                    })
                    .collect(),
                terms: g.terms.rewrite(|v| signals[v]),
            });
        }
        out
    }

    /// Whether group `g` is the only place its output variable occurs.
    fn is_dangling(&self, g: &GadgetGroup) -> bool {
        let z = g.output;
        if self.registry.role(z).is_pinned() {
            return false;
        }
        if self.linear[z] != g.terms.linear.get(&z).copied().unwrap_or(0) {
            return false;
        }
        self.adj[z].iter().all(|(&j, &c)| {
            let key = if z < j { (z, j) } else { (j, z) };
            c == g.terms.quad.get(&key).copied().unwrap_or(0)
        })
    }

    /// Drops every gadget whose output occurs in no other term, repeatedly,
    /// then compacts away variables that no longer occur.
    pub fn eliminate_dangling_aux(&self) -> QuboProblem {
        let mut q = self.clone();
        let mut alive = vec![true; q.groups.len()];
        let mut by_output: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, g) in q.groups.iter().enumerate() {
            by_output.insert(g.output, k);
        }
        let mut work: Vec<usize> = (0..q.groups.len()).rev().collect();
        let mut queued: BTreeSet<usize> = work.iter().copied().collect();
        while let Some(k) = work.pop() {
            queued.remove(&k);
            if !alive[k] || !q.is_dangling(&q.groups[k]) {
                continue;
            }
            alive[k] = false;
            let terms = std::mem::take(&mut q.groups[k].terms);
            q.add_poly(&terms, -1);
            for v in terms.vars() {
                if let Some(&other) = by_output.get(&v) {
                    if alive[other] && queued.insert(other) {
                        work.push(other);
                    }
                }
            }
        }
        let mut keep = alive.into_iter();
        q.groups.retain(|_| keep.next().unwrap());
        q.compact()
    }

    /// Removes variables that occur in no term, except pinned roles.
    pub fn compact(&self) -> QuboProblem {
        let mut in_group = vec![false; self.num_vars()];
        for g in &self.groups {
            in_group[g.output] = true;
        }
        let fates: Vec<Fate> = (0..self.num_vars())
            .map(|i| {
                if self.occurs(i) || in_group[i] || self.registry.role(i).is_pinned() {
                    Fate::Keep
                } else {
                    Fate::Drop
                }
            })
            .collect();
        self.transform(&fates)
    }

    /// Largest possible single-flip change per variable: `|linear_i| + Σ_j |quad_ij|`.
    pub fn flip_bounds(&self) -> Vec<i64> {
        (0..self.num_vars())
            .map(|i| self.linear[i].abs() + self.adj[i].values().map(|c| c.abs()).sum::<i64>())
            .collect()
    }

    /// Smallest nonzero coefficient magnitude.
    pub fn min_nonzero_coefficient(&self) -> Option<i64> {
        self.linear
            .iter()
            .copied()
            .chain(self.adj.iter().flat_map(|row| row.values().copied()))
            .filter(|&c| c != 0)
            .map(i64::abs)
            .min()
    }
}
