//! Random benchmark frameworks: Erdős–Rényi graphs, graphs with an attached
//! odd cycle (no stable extension), and graphs whose only admissible set is ∅.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::af::{ArgumentSet, ArgumentationFramework, Oracle, Semantics};
use crate::error::AfError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Er,
    B3,
    B4,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Er => "er",
            Variant::B3 => "b3",
            Variant::B4 => "b4",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "er" | "b2" => Ok(Variant::Er),
            "b3" => Ok(Variant::B3),
            "b4" => Ok(Variant::B4),
            _ => Err(format!("unknown variant `{s}` (expected er, b3 or b4)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    /// Connectivity constant in `p = c·log10(n)/n`.
    pub c: f64,
    pub seed: u64,
    pub variant: Variant,
    /// Inclusive bounds on the odd cycle length added by `B3`.
    pub cycle_lengths: (usize, usize),
}

impl GenSpec {
    pub fn er(n: usize, seed: u64) -> Self {
        Self {
            n,
            c: 2.5,
            seed,
            variant: Variant::Er,
            cycle_lengths: (1, 7),
        }
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        Self { variant, ..self }
    }

    pub fn edge_probability(&self) -> f64 {
        if self.n <= 1 {
            return 0.0;
        }
        (self.c * (self.n as f64).log10() / self.n as f64).clamp(0.0, 1.0)
    }

    fn odd_lengths(&self) -> Vec<usize> {
        let (lo, hi) = self.cycle_lengths;
        (lo.max(1)..=hi.min(7)).filter(|l| l % 2 == 1).collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 {
            return Err("n must be at least 1".into());
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(format!("connectivity constant must be positive, got {}", self.c));
        }
        if self.variant == Variant::B3 && self.odd_lengths().is_empty() {
            return Err(format!(
                "no odd cycle length in {:?} within 1..=7",
                self.cycle_lengths
            ));
        }
        Ok(())
    }
}

/// Every ordered pair `(i, j)`, `i != j`, is an attack with probability `p`.
pub fn gen_er(spec: &GenSpec) -> ArgumentationFramework {
    let p = spec.edge_probability();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut attacks = Vec::new();
    for i in 0..spec.n {
        for j in 0..spec.n {
            if i != j && rng.random_bool(p) {
                attacks.push((i, j));
            }
        }
    }
    ArgumentationFramework::with_generated_names(spec.n, attacks).expect("indices in range")
}

/// Appends an odd cycle that nothing outside it attacks; each cycle member
/// attacks one random original argument.
pub fn transform_b3(af: &ArgumentationFramework, spec: &GenSpec) -> ArgumentationFramework {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(3);
    let lengths = spec.odd_lengths();
    let len = lengths[rng.random_range(0..lengths.len())];

    let taken: HashSet<&str> = af.names().iter().map(String::as_str).collect();
    let mut prefix = String::from("cyc");
    while (1..=len).any(|k| taken.contains(format!("{prefix}{k}").as_str())) {
        prefix.push('_');
    }
    let n = af.len();
    let mut names: Vec<String> = af.names().to_vec();
    names.extend((1..=len).map(|k| format!("{prefix}{k}")));
    let mut attacks: Vec<(usize, usize)> = af.attacks().iter().copied().collect();
    for k in 0..len {
        attacks.push((n + k, n + (k + 1) % len));
        if n > 0 {
            attacks.push((n + k, rng.random_range(0..n)));
        }
    }
    ArgumentationFramework::new(names, attacks).expect("fresh names are unique")
}

/// Adds a self-attack to every argument in some admissible set.
pub fn transform_b4(af: &ArgumentationFramework, oracle: &Oracle) -> Result<ArgumentationFramework, AfError> {
    let mut accepted = ArgumentSet::empty(af.len());
    for e in oracle.enumerate(af, Semantics::Admissible)? {
        accepted.union_with(&e);
    }
    af.with_attacks(af.attacks().iter().copied().chain(accepted.iter().map(|i| (i, i))))
}

/// Builds the framework described by `spec`.
pub fn generate(spec: &GenSpec, oracle: &Oracle) -> Result<ArgumentationFramework, AfError> {
    let af = gen_er(spec);
    match spec.variant {
        Variant::Er => Ok(af),
        Variant::B3 => Ok(transform_b3(&af, spec)),
        Variant::B4 => transform_b4(&af, oracle),
    }
}
