//! Abstract argumentation frameworks: the attack graph, argument sets,
//! input formats and the exhaustive semantics oracle.

mod parse;
mod semantics;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use parse::{parse, parse_apx, parse_iccma, write_apx, write_iccma, Format};
pub use semantics::{grounded, range, verify, AcceptanceMode, Oracle, Semantics, DEFAULT_ORACLE_LIMIT};

use crate::error::AfError;

/// An argumentation framework `(A, →)`.
///
/// Arguments are identified by their position in [`names`](Self::names);
/// attacks are ordered `(attacker, target)` index pairs. Self-attacks are
/// allowed and duplicate attacks collapse.
#[derive(Clone, PartialEq, Eq)]
pub struct ArgumentationFramework {
    names: Vec<String>,
    index: HashMap<String, usize>,
    attacks: BTreeSet<(usize, usize)>,
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl ArgumentationFramework {
    pub fn new<S, I>(names: Vec<S>, attacks: I) -> Result<Self, AfError>
    where
        S: Into<String>,
        I: IntoIterator<Item = (usize, usize)>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(AfError::DuplicateArgument(name.clone()));
            }
        }
        let n = names.len();
        let mut set = BTreeSet::new();
        for (a, b) in attacks {
            if a >= n || b >= n {
                return Err(AfError::AttackOutOfRange { from: a, to: b, n });
            }
            set.insert((a, b));
        }
        let mut attackers = vec![Vec::new(); n];
        let mut targets = vec![Vec::new(); n];
        for &(a, b) in &set {
            attackers[b].push(a);
            targets[a].push(b);
        }
        Ok(Self {
            names,
            index,
            attacks: set,
            attackers,
            targets,
        })
    }

    /// Framework with arguments named `a1..an`.
    pub fn with_generated_names<I>(n: usize, attacks: I) -> Result<Self, AfError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new((1..=n).map(|i| format!("a{i}")).collect(), attacks)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn attacks(&self) -> &BTreeSet<(usize, usize)> {
        &self.attacks
    }

    pub fn num_attacks(&self) -> usize {
        self.attacks.len()
    }

    pub fn attacks_contains(&self, from: usize, to: usize) -> bool {
        self.attacks.contains(&(from, to))
    }

    /// Attackers of argument `i`, ascending.
    pub fn attackers(&self, i: usize) -> &[usize] {
        &self.attackers[i]
    }

    /// Arguments attacked by `i`, ascending.
    pub fn targets(&self, i: usize) -> &[usize] {
        &self.targets[i]
    }

    /// Attacker count `h_i`.
    pub fn in_degree(&self, i: usize) -> usize {
        self.attackers[i].len()
    }

    /// Same arguments, different attack relation.
    pub fn with_attacks<I>(&self, attacks: I) -> Result<Self, AfError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(self.names.clone(), attacks)
    }

    /// Resolves a list of argument names into a set.
    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ArgumentSet, AfError> {
        let mut set = ArgumentSet::empty(self.len());
        for name in names {
            let name = name.as_ref();
            let i = self
                .index_of(name)
                .ok_or_else(|| AfError::UnknownArgument(name.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    /// Member names of `set` in index order.
    pub fn names_of(&self, set: &ArgumentSet) -> Vec<&str> {
        set.iter().map(|i| self.name(i)).collect()
    }
}

impl fmt::Debug for ArgumentationFramework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let attacks: Vec<String> = self
            .attacks
            .iter()
            .map(|&(a, b)| format!("{}->{}", self.names[a], self.names[b]))
            .collect();
        f.debug_struct("ArgumentationFramework")
            .field("arguments", &self.names)
            .field("attacks", &attacks)
            .finish()
    }
}

/// A subset of the arguments of a framework with `n` arguments.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArgumentSet {
    bits: FixedBitSet,
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    universe: usize,
    members: Vec<usize>,
}

impl Serialize for ArgumentSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SetRepr {
            universe: self.universe(),
            members: self.iter().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArgumentSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SetRepr::deserialize(d)?;
        if let Some(&bad) = repr.members.iter().find(|&&i| i >= repr.universe) {
            return Err(serde::de::Error::custom(format!(
                "member {bad} outside universe of {}",
                repr.universe
            )));
        }
        Ok(ArgumentSet::from_indices(repr.universe, repr.members))
    }
}

impl ArgumentSet {
    pub fn empty(n: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Self {
        let mut set = Self::empty(n);
        for i in members {
            set.insert(i);
        }
        set
    }

    /// Set whose members are the one-bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.universe() <= 64, "mask view needs at most 64 arguments");
        self.iter().fold(0u64, |m, i| m | 1 << i)
    }

    /// Size of the argument universe, not the set.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe(), "argument {i} outside universe of {}", self.universe());
        self.bits.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.bits.set(i, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &ArgumentSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &ArgumentSet) {
        self.bits.union_with(&other.bits);
    }
}

impl Ord for ArgumentSet {
    /// Canonical order: cardinality first, then the sorted member lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.universe().cmp(&other.universe()))
    }
}

impl PartialOrd for ArgumentSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ArgumentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
