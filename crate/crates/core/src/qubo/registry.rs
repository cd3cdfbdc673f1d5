use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

/// Semantic role of a binary variable. Argument indices are 0-based and
/// refer to the original framework order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// `x_i`: argument `i` is in the set.
    Decision(usize),
    /// `t_i`: argument `i` is attacked by the set.
    Attacked(usize),
    /// `d_i`: argument `i` is defended by the set.
    Defended(usize),
    /// Chain auxiliary of the disjunction that defines `t_owner`.
    OrAux { owner: usize, k: usize },
    /// Chain auxiliary of the conjunction that defines `d_owner`.
    AndAux { owner: usize, k: usize },
    /// Chain auxiliary of the non-emptiness disjunction.
    NonEmptyAux(usize),
    /// `r_ij`: `from` attacks `to` in the edited framework.
    Attack { from: usize, to: usize },
    /// `s_ji`: `attacker` attacks `target` and is not counter-attacked by the target set.
    Undefended { attacker: usize, target: usize },
    /// Chain auxiliary of the "not defended" disjunction for `target`.
    NdAux { target: usize, k: usize },
    /// Unlabelled variable created directly through the gadget API.
    Aux(usize),
}

impl Role {
    /// Pinned roles carry the answer and survive compaction even when unused.
    pub fn is_pinned(self) -> bool {
        matches!(self, Role::Decision(_) | Role::Attack { .. })
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::Decision(i) => write!(f, "x_{}", i + 1),
            Role::Attacked(i) => write!(f, "t_{}", i + 1),
            Role::Defended(i) => write!(f, "d_{}", i + 1),
            Role::OrAux { owner, k } => write!(f, "or_{}_{}", owner + 1, k + 1),
            Role::AndAux { owner, k } => write!(f, "and_{}_{}", owner + 1, k + 1),
            Role::NonEmptyAux(k) => write!(f, "ne_{}", k + 1),
            Role::Attack { from, to } => write!(f, "r_{}_{}", from + 1, to + 1),
            Role::Undefended { attacker, target } => write!(f, "s_{}_{}", attacker + 1, target + 1),
            Role::NdAux { target, k } => write!(f, "nd_{}_{}", target + 1, k + 1),
            Role::Aux(k) => write!(f, "aux_{k}"),
        }
    }
}

impl Serialize for Role {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Where a role ended up after simplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    /// A live QUBO variable.
    Var(usize),
    /// Fixed by propagation or by the caller.
    Const(bool),
    /// Equal to (or the complement of) another role.
    Alias { role: Role, negated: bool },
    /// Removed: occurs in no term, so any value is optimal.
    Eliminated,
}

/// Bidirectional map between live variable indices and roles, plus the fate
/// of every role that no longer has a variable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariableRegistry {
    live: Vec<Role>,
    lookup: HashMap<Role, Binding>,
    next_aux: usize,
}

impl VariableRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    /// Role of live variable `i`.
    pub fn role(&self, i: usize) -> Role {
        self.live[i]
    }

    pub fn roles(&self) -> &[Role] {
        &self.live
    }

    pub fn get(&self, role: Role) -> Option<Binding> {
        self.lookup.get(&role).copied()
    }

    /// Live variable for `role`, if it has one.
    pub fn var(&self, role: Role) -> Option<usize> {
        match self.get(role) {
            Some(Binding::Var(i)) => Some(i),
            _ => None,
        }
    }

    /// Follows aliases down to a variable, constant or elimination.
    pub fn resolve(&self, role: Role) -> Option<(Binding, bool)> {
        let mut negated = false;
        let mut current = role;
        loop {
            match self.get(current)? {
                Binding::Alias { role, negated: n } => {
                    negated ^= n;
                    current = role;
                }
                Binding::Const(b) => return Some((Binding::Const(b != negated), false)),
                other => return Some((other, negated)),
            }
        }
    }

    pub(crate) fn push(&mut self, role: Role) -> usize {
        let i = self.live.len();
        let prev = self.lookup.insert(role, Binding::Var(i));
        assert!(
            !matches!(prev, Some(Binding::Var(_))),
            "role {role} already has a live variable"
        );
        self.live.push(role);
        i
    }

    pub(crate) fn fresh_aux(&mut self) -> Role {
        let role = Role::Aux(self.next_aux);
        self.next_aux += 1;
        role
    }

    pub(crate) fn bind(&mut self, role: Role, binding: Binding) {
        self.lookup.insert(role, binding);
    }

    /// Applies a renumbering: `fates[i]` is the new index of live variable `i`
    /// or the binding it receives when removed.
    pub(crate) fn remap(&mut self, fates: &[Result<usize, Binding>]) {
        let old = std::mem::take(&mut self.live);
        for (i, role) in old.into_iter().enumerate() {
            match fates[i] {
                Ok(j) => {
                    debug_assert_eq!(j, self.live.len());
                    self.live.push(role);
                    self.lookup.insert(role, Binding::Var(j));
                }
                Err(b) => {
                    self.lookup.insert(role, b);
                }
            }
        }
    }

    /// Every role that was ever registered, with its binding.
    pub fn bindings(&self) -> impl Iterator<Item = (Role, Binding)> + '_ {
        self.lookup.iter().map(|(&r, &b)| (r, b))
    }
}
