//! Logic-level description of a penalty function: named symbols, n-ary gates,
//! required disjunctions and plain quadratic terms. Constant propagation runs
//! here, before anything is turned into gadgets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::qubo::gadgets::{chain_lits, clause_lits};
use crate::qubo::{Binding, GateKind, Lit, Poly, QuboProblem, Role, Signal};

/// How chain auxiliaries of a gate or clause are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AuxNaming {
    Or(usize),
    And(usize),
    NonEmpty,
    Nd(usize),
}

impl AuxNaming {
    fn role(self, k: usize) -> Role {
        match self {
            AuxNaming::Or(owner) => Role::OrAux { owner, k },
            AuxNaming::And(owner) => Role::AndAux { owner, k },
            AuxNaming::NonEmpty => Role::NonEmptyAux(k),
            AuxNaming::Nd(target) => Role::NdAux { target, k },
        }
    }
}

#[derive(Debug, Clone)]
struct Gate {
    kind: GateKind,
    out: usize,
    inputs: Vec<Lit>,
    weight: i64,
    naming: AuxNaming,
}

#[derive(Debug, Clone)]
struct Clause {
    inputs: Vec<Lit>,
    weight: i64,
    naming: AuxNaming,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Circuit {
    roles: Vec<Role>,
    index: HashMap<Role, usize>,
    gates: Vec<Gate>,
    clauses: Vec<Clause>,
    terms: Poly,
    fixed: BTreeMap<usize, bool>,
}

impl Circuit {
    pub fn symbol(&mut self, role: Role) -> usize {
        if let Some(&s) = self.index.get(&role) {
            return s;
        }
        let s = self.roles.len();
        self.roles.push(role);
        self.index.insert(role, s);
        s
    }

    pub fn lookup(&self, role: Role) -> Option<usize> {
        self.index.get(&role).copied()
    }

    /// `out = kind(inputs)`. Gates must be added after the gates defining their inputs.
    pub fn gate(&mut self, kind: GateKind, out: usize, inputs: Vec<Lit>, weight: i64, naming: AuxNaming) {
        debug_assert!(self.gates.iter().all(|g| g.out != out));
        self.gates.push(Gate {
            kind,
            out,
            inputs,
            weight,
            naming,
        });
    }

    /// Penalty `weight` unless some input literal holds.
    pub fn clause(&mut self, inputs: Vec<Lit>, weight: i64, naming: AuxNaming) {
        self.clauses.push(Clause {
            inputs,
            weight,
            naming,
        });
    }

    pub fn terms(&mut self) -> &mut Poly {
        &mut self.terms
    }

    pub fn fix(&mut self, symbol: usize, value: bool) {
        assert!(
            self.gates.iter().all(|g| g.out != symbol),
            "gate outputs cannot be fixed"
        );
        self.fixed.insert(symbol, value);
    }

    /// One QUBO variable per symbol and gadget chains exactly as written;
    /// fixings are applied afterwards by substitution.
    pub fn lower_raw(&self) -> QuboProblem {
        let mut q = QuboProblem::new();
        for &role in &self.roles {
            q.add_variable(role);
        }
        for g in &self.gates {
            chain_lits(&mut q, g.kind, g.out, &g.inputs, g.weight, &mut |q, k| {
                q.add_variable(g.naming.role(k))
            });
        }
        for c in &self.clauses {
            if c.inputs.is_empty() {
                q.add_offset(c.weight);
            } else {
                clause_lits(&mut q, &c.inputs, c.weight, &mut |q, k| {
                    q.add_variable(c.naming.role(k))
                });
            }
        }
        q.add_poly(&self.terms, 1);
        let fixes: Vec<(usize, bool)> = self.fixed.iter().map(|(&s, &v)| (s, v)).collect();
        q.fix_variables(&fixes).expect("symbols are in range")
    }

    /// Propagates constants and single-input gates, lowers what is left, and
    /// drops gadgets whose output is unused.
    pub fn lower(&self) -> QuboProblem {
        let n = self.roles.len();
        let mut val: Vec<Option<Signal>> = vec![None; n];
        for (&s, &v) in &self.fixed {
            val[s] = Some(Signal::Const(v));
        }
        let resolve = |val: &[Option<Signal>], l: Lit| -> Signal {
            match val[l.var] {
                None => Signal::Lit(l),
                Some(Signal::Const(b)) => Signal::Const(b != l.negated),
                Some(Signal::Lit(m)) => Signal::Lit(Lit {
                    var: m.var,
                    negated: m.negated != l.negated,
                }),
            }
        };

        let mut live_gates = Vec::new();
        for g in &self.gates {
            let dominant = g.kind == GateKind::Or;
            match reduce(g.inputs.iter().map(|&l| resolve(&val, l)), dominant) {
                Reduced::Const(b) => val[g.out] = Some(Signal::Const(b)),
                Reduced::Lits(lits) if lits.len() == 1 => val[g.out] = Some(Signal::Lit(lits[0])),
                Reduced::Lits(lits) => live_gates.push((g, lits)),
            }
        }

        let mut terms = self.terms.rewrite(|s| resolve(&val, Lit::pos(s)));
        let mut live_clauses = Vec::new();
        for c in &self.clauses {
            match reduce(c.inputs.iter().map(|&l| resolve(&val, l)), true) {
                Reduced::Const(true) => {}
                Reduced::Const(false) => terms.add_const(c.weight),
                Reduced::Lits(lits) => live_clauses.push((c, lits)),
            }
        }

        let mut q = QuboProblem::new();
        let mut var_of = vec![usize::MAX; n];
        for (s, &role) in self.roles.iter().enumerate() {
            if val[s].is_none() {
                var_of[s] = q.add_variable(role);
            }
        }
        let to_var = |l: Lit| Lit {
            var: var_of[l.var],
            negated: l.negated,
        };
        for (g, lits) in live_gates {
            let lits: Vec<Lit> = lits.into_iter().map(to_var).collect();
            chain_lits(&mut q, g.kind, var_of[g.out], &lits, g.weight, &mut |q, k| {
                q.add_variable(g.naming.role(k))
            });
        }
        for (c, lits) in live_clauses {
            let lits: Vec<Lit> = lits.into_iter().map(to_var).collect();
            clause_lits(&mut q, &lits, c.weight, &mut |q, k| q.add_variable(c.naming.role(k)));
        }
        q.add_poly(&terms.rewrite(|s| Signal::Lit(Lit::pos(var_of[s]))), 1);

        for (s, v) in val.iter().enumerate() {
            match *v {
                None => {}
                Some(Signal::Const(b)) => q.bind(self.roles[s], Binding::Const(b)),
                Some(Signal::Lit(m)) => q.bind(
                    self.roles[s],
                    Binding::Alias {
                        role: self.roles[m.var],
                        negated: m.negated,
                    },
                ),
            }
        }
        q.eliminate_dangling_aux()
    }
}

enum Reduced {
    Const(bool),
    Lits(Vec<Lit>),
}

/// Simplifies an OR (`dominant = true`) or AND (`dominant = false`) over signals.
fn reduce(inputs: impl Iterator<Item = Signal>, dominant: bool) -> Reduced {
    let mut lits = BTreeSet::new();
    for s in inputs {
        match s {
            Signal::Const(b) if b == dominant => return Reduced::Const(dominant),
            Signal::Const(_) => {}
            Signal::Lit(l) => {
                if lits.contains(&!l) {
                    return Reduced::Const(dominant);
                }
                lits.insert(l);
            }
        }
    }
    if lits.is_empty() {
        Reduced::Const(!dominant)
    } else {
        Reduced::Lits(lits.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn or3() -> Circuit {
        let mut c = Circuit::default();
        let xs: Vec<usize> = (0..3).map(|i| c.symbol(Role::Decision(i))).collect();
        let t = c.symbol(Role::Attacked(0));
        c.gate(GateKind::Or, t, xs.iter().map(|&x| Lit::pos(x)).collect(), 1, AuxNaming::Or(0));
        // reward t so the gate is kept
        c.terms().add_linear(t, -1);
        c
    }

    #[test]
    fn true_input_makes_or_constant() {
        let mut c = or3();
        c.fix(1, true);
        let q = c.lower();
        assert_eq!(q.registry().get(Role::Attacked(0)), Some(Binding::Const(true)));
        assert_eq!(q.offset(), -1);
        assert!(q.groups().is_empty());
    }

    #[test]
    fn false_inputs_shrink_or_to_alias() {
        let mut c = or3();
        c.fix(0, false);
        c.fix(2, false);
        let q = c.lower();
        assert_eq!(
            q.registry().get(Role::Attacked(0)),
            Some(Binding::Alias {
                role: Role::Decision(1),
                negated: false
            })
        );
        let x1 = q.registry().var(Role::Decision(1)).unwrap();
        assert_eq!(q.linear(x1), -1);
    }

    #[test]
    fn raw_lowering_keeps_every_symbol() {
        let q = or3().lower_raw();
        // 3 inputs, output, one chain auxiliary
        assert_eq!(q.num_vars(), 5);
        assert!(q.registry().var(Role::OrAux { owner: 0, k: 0 }).is_some());
    }

    #[test]
    fn reduce_rules() {
        let a = Lit::pos(0);
        let sig = |l| Signal::Lit(l);
        assert!(matches!(reduce([sig(a), sig(!a)].into_iter(), true), Reduced::Const(true)));
        assert!(matches!(reduce([sig(a), sig(!a)].into_iter(), false), Reduced::Const(false)));
        assert!(matches!(reduce(std::iter::empty(), false), Reduced::Const(true)));
        assert!(matches!(reduce([sig(a), sig(a)].into_iter(), true), Reduced::Lits(v) if v == [a]));
    }
}
