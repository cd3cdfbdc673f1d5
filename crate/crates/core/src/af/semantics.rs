use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ArgumentSet, ArgumentationFramework};
use crate::error::AfError;

/// Largest framework the exhaustive oracle accepts by default (2^20 subsets).
pub const DEFAULT_ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Semantics {
    ConflictFree,
    Admissible,
    Complete,
    Preferred,
    SemiStable,
    Stable,
    Grounded,
}

impl Semantics {
    pub const ALL: [Semantics; 7] = [
        Semantics::ConflictFree,
        Semantics::Admissible,
        Semantics::Complete,
        Semantics::Preferred,
        Semantics::SemiStable,
        Semantics::Stable,
        Semantics::Grounded,
    ];

    pub fn abbrev(self) -> &'static str {
        match self {
            Semantics::ConflictFree => "CF",
            Semantics::Admissible => "AD",
            Semantics::Complete => "CO",
            Semantics::Preferred => "PR",
            Semantics::SemiStable => "SST",
            Semantics::Stable => "ST",
            Semantics::Grounded => "GR",
        }
    }

    /// Membership needs comparison against other extensions.
    pub fn needs_enumeration(self) -> bool {
        matches!(self, Semantics::Preferred | Semantics::SemiStable)
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbrev())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Semantics::ALL
            .into_iter()
            .find(|sem| sem.abbrev().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown semantics `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AcceptanceMode {
    Credulous,
    Skeptical,
}

/// `E⁺`: the set together with everything it attacks.
pub fn range(af: &ArgumentationFramework, e: &ArgumentSet) -> ArgumentSet {
    let mut out = e.clone();
    for a in e.iter() {
        for &t in af.targets(a) {
            out.insert(t);
        }
    }
    out
}

fn attacked_by(af: &ArgumentationFramework, e: &ArgumentSet) -> ArgumentSet {
    let mut out = ArgumentSet::empty(af.len());
    for a in e.iter() {
        for &t in af.targets(a) {
            out.insert(t);
        }
    }
    out
}

fn conflict_free(af: &ArgumentationFramework, e: &ArgumentSet) -> bool {
    e.iter().all(|a| af.targets(a).iter().all(|&t| !e.contains(t)))
}

/// Arguments all of whose attackers are attacked by `e`.
fn defended_by(af: &ArgumentationFramework, e: &ArgumentSet) -> ArgumentSet {
    let hit = attacked_by(af, e);
    ArgumentSet::from_indices(
        af.len(),
        (0..af.len()).filter(|&a| af.attackers(a).iter().all(|&b| hit.contains(b))),
    )
}

fn admissible(af: &ArgumentationFramework, e: &ArgumentSet) -> bool {
    conflict_free(af, e) && e.is_subset(&defended_by(af, e))
}

fn complete(af: &ArgumentationFramework, e: &ArgumentSet) -> bool {
    conflict_free(af, e) && defended_by(af, e) == *e
}

fn stable(af: &ArgumentationFramework, e: &ArgumentSet) -> bool {
    conflict_free(af, e) && range(af, e).len() == af.len()
}

/// Least fixpoint of the defense operator, iterated from the empty set.
pub fn grounded(af: &ArgumentationFramework) -> ArgumentSet {
    let mut current = ArgumentSet::empty(af.len());
    loop {
        let next = defended_by(af, &current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Membership test with the default oracle limit for the maximality-based semantics.
pub fn verify(
    af: &ArgumentationFramework,
    e: &ArgumentSet,
    sigma: Semantics,
) -> Result<bool, AfError> {
    Oracle::default().verify(af, e, sigma)
}

/// Exhaustive extension enumerator over all `2^n` subsets.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self {
            limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

struct Masks {
    n: usize,
    attackers: Vec<u64>,
    targets: Vec<u64>,
}

impl Masks {
    fn new(af: &ArgumentationFramework) -> Self {
        let n = af.len();
        let mut attackers = vec![0u64; n];
        let mut targets = vec![0u64; n];
        for &(a, b) in af.attacks() {
            attackers[b] |= 1 << a;
            targets[a] |= 1 << b;
        }
        Self {
            n,
            attackers,
            targets,
        }
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn hit(&self, set: u64) -> u64 {
        let mut out = 0;
        let mut rest = set;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            out |= self.targets[a];
            rest &= rest - 1;
        }
        out
    }

    fn defended(&self, hit: u64) -> u64 {
        let mut out = 0;
        for (a, &att) in self.attackers.iter().enumerate() {
            if att & !hit == 0 {
                out |= 1 << a;
            }
        }
        out
    }
}

impl Oracle {
    pub fn with_limit(limit: usize) -> Self {
        Self { limit: limit.min(63) }
    }

    fn check(&self, af: &ArgumentationFramework) -> Result<(), AfError> {
        if af.len() > self.limit {
            return Err(AfError::OracleLimit {
                n: af.len(),
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn verify(
        &self,
        af: &ArgumentationFramework,
        e: &ArgumentSet,
        sigma: Semantics,
    ) -> Result<bool, AfError> {
        assert_eq!(e.universe(), af.len(), "set universe differs from framework size");
        Ok(match sigma {
            Semantics::ConflictFree => conflict_free(af, e),
            Semantics::Admissible => admissible(af, e),
            Semantics::Complete => complete(af, e),
            Semantics::Stable => stable(af, e),
            Semantics::Grounded => grounded(af) == *e,
            Semantics::Preferred | Semantics::SemiStable => {
                complete(af, e) && self.enumerate(af, sigma)?.contains(e)
            }
        })
    }

    /// All σ-extensions in canonical order (cardinality, then member lists).
    pub fn enumerate(
        &self,
        af: &ArgumentationFramework,
        sigma: Semantics,
    ) -> Result<Vec<ArgumentSet>, AfError> {
        self.check(af)?;
        let n = af.len();
        let masks = Masks::new(af);
        let full = masks.full();

        if sigma == Semantics::Grounded {
            return Ok(vec![grounded(af)]);
        }

        // (set, range) pairs of complete extensions, used by pr/sst
        let mut selected: Vec<(u64, u64)> = Vec::new();
        for set in 0..=full {
            let hit = masks.hit(set);
            if hit & set != 0 {
                continue;
            }
            let keep = match sigma {
                Semantics::ConflictFree => true,
                Semantics::Admissible => set & !masks.defended(hit) == 0,
                Semantics::Stable => (set | hit) == full,
                Semantics::Complete | Semantics::Preferred | Semantics::SemiStable => {
                    masks.defended(hit) == set
                }
                Semantics::Grounded => unreachable!(),
            };
            if keep {
                selected.push((set, set | hit));
            }
            if set == full {
                break;
            }
        }

        let maximal = |key: fn(&(u64, u64)) -> u64, all: &[(u64, u64)]| -> Vec<(u64, u64)> {
            all.iter()
                .copied()
                .filter(|c| {
                    let k = key(c);
                    !all.iter().any(|o| {
                        let ko = key(o);
                        ko != k && ko & k == k
                    })
                })
                .collect()
        };
        let selected = match sigma {
            Semantics::Preferred => maximal(|c| c.0, &selected),
            Semantics::SemiStable => maximal(|c| c.1, &selected),
            _ => selected,
        };

        let mut out: Vec<ArgumentSet> = selected
            .into_iter()
            .map(|(set, _)| ArgumentSet::from_mask(n, set))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Credulous: in some extension. Skeptical: in every extension (vacuous when none exist).
    pub fn decide(
        &self,
        af: &ArgumentationFramework,
        arg: usize,
        sigma: Semantics,
        mode: AcceptanceMode,
    ) -> Result<bool, AfError> {
        assert!(arg < af.len(), "argument {arg} out of range");
        let exts = self.enumerate(af, sigma)?;
        Ok(match mode {
            AcceptanceMode::Credulous => exts.iter().any(|e| e.contains(arg)),
            AcceptanceMode::Skeptical => exts.iter().all(|e| e.contains(arg)),
        })
    }

    /// Existence of an extension, optionally a non-empty one.
    pub fn exists(
        &self,
        af: &ArgumentationFramework,
        sigma: Semantics,
        non_empty: bool,
    ) -> Result<bool, AfError> {
        Ok(self
            .enumerate(af, sigma)?
            .iter()
            .any(|e| !non_empty || !e.is_empty()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::tests::five_args;
    use proptest::prelude::*;

    fn named(af: &ArgumentationFramework, sets: &[ArgumentSet]) -> Vec<String> {
        sets.iter().map(|s| af.names_of(s).concat()).collect()
    }

    fn set(af: &ArgumentationFramework, names: &[&str]) -> ArgumentSet {
        af.set_from_names(names).unwrap()
    }

    #[test]
    fn five_args_range() {
        let af = five_args();
        assert_eq!(af.names_of(&range(&af, &set(&af, &["a", "d"]))), ["a", "b", "c", "d", "e"]);
        assert!(range(&af, &ArgumentSet::empty(5)).is_empty());
        assert_eq!(af.names_of(&range(&af, &set(&af, &["c"]))), ["b", "c", "d"]);
    }

    #[test]
    fn five_args_verify() {
        let af = five_args();
        assert!(verify(&af, &set(&af, &["a", "d"]), Semantics::Complete).unwrap());
        assert!(verify(&af, &set(&af, &["b"]), Semantics::ConflictFree).unwrap());
        assert!(!verify(&af, &set(&af, &["a", "c"]), Semantics::Stable).unwrap());
    }

    #[test]
    fn five_args_lists() {
        let af = five_args();
        let o = Oracle::default();
        let list = |s| named(&af, &o.enumerate(&af, s).unwrap());
        assert_eq!(
            list(Semantics::ConflictFree),
            ["", "a", "b", "c", "d", "e", "ac", "ad", "ae", "bd", "be", "ce", "ace"]
        );
        assert_eq!(list(Semantics::Admissible), ["", "a", "c", "d", "ac", "ad", "ce", "ace"]);
        assert_eq!(list(Semantics::Complete), ["a", "ad", "ace"]);
        assert_eq!(list(Semantics::Preferred), ["ad", "ace"]);
        assert_eq!(list(Semantics::SemiStable), ["ad", "ace"]);
        assert_eq!(list(Semantics::Stable), ["ad", "ace"]);
        assert_eq!(list(Semantics::Grounded), ["a"]);
    }

    #[test]
    fn self_attacker_has_no_stable_extension() {
        let af = ArgumentationFramework::new(vec!["a"], [(0, 0)]).unwrap();
        assert!(Oracle::default().enumerate(&af, Semantics::Stable).unwrap().is_empty());
    }

    #[test]
    fn five_args_acceptance() {
        let af = five_args();
        let o = Oracle::default();
        use AcceptanceMode::*;
        assert!(o.decide(&af, 2, Semantics::Complete, Credulous).unwrap());
        assert!(!o.decide(&af, 1, Semantics::Complete, Credulous).unwrap());
        let skeptical: Vec<usize> = (0..5)
            .filter(|&a| o.decide(&af, a, Semantics::Complete, Skeptical).unwrap())
            .collect();
        assert_eq!(skeptical, [0]);
    }

    #[test]
    fn oracle_limit_enforced() {
        let af = ArgumentationFramework::with_generated_names(21, []).unwrap();
        assert!(matches!(
            Oracle::default().enumerate(&af, Semantics::Complete),
            Err(AfError::OracleLimit { n: 21, limit: 20 })
        ));
        assert!(matches!(
            verify(&af, &ArgumentSet::full(21), Semantics::Preferred),
            Err(AfError::OracleLimit { .. })
        ));
        // polynomial checks are not limited
        assert!(verify(&af, &ArgumentSet::full(21), Semantics::Stable).unwrap());
    }

    fn arb_af(max_n: usize) -> impl Strategy<Value = ArgumentationFramework> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..=2 * n).prop_map(move |atts| {
                ArgumentationFramework::with_generated_names(n, atts).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn semantics_relations(af in arb_af(8), mask in any::<u64>()) {
            let n = af.len();
            let e = ArgumentSet::from_mask(n, mask & ((1 << n) - 1));
            let v = |s| verify(&af, &e, s).unwrap();
            if v(Semantics::Admissible) {
                prop_assert!(v(Semantics::ConflictFree));
            }
            prop_assert_eq!(
                v(Semantics::Stable),
                v(Semantics::Complete) && range(&af, &e).len() == n
            );
        }

        #[test]
        fn enumeration_invariants(af in arb_af(8)) {
            let o = Oracle::default();
            let gr = o.enumerate(&af, Semantics::Grounded).unwrap();
            prop_assert_eq!(gr.len(), 1);
            let co = o.enumerate(&af, Semantics::Complete).unwrap();
            // grounded is the least complete extension
            prop_assert!(co.contains(&gr[0]));
            prop_assert!(co.iter().all(|e| gr[0].is_subset(e)));
            let pr = o.enumerate(&af, Semantics::Preferred).unwrap();
            for p in &pr {
                prop_assert!(co.contains(p));
                for q in &pr {
                    prop_assert!(p == q || !p.is_subset(q));
                }
            }
            // every enumerated set passes the polynomial check
            for s in [Semantics::Admissible, Semantics::Complete, Semantics::Stable] {
                for e in o.enumerate(&af, s).unwrap() {
                    prop_assert!(verify(&af, &e, s).unwrap());
                }
            }
        }
    }
}
