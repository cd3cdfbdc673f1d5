use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::Not;

/// A binary variable or its complement `1 - v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    pub fn value(self, var_value: bool) -> bool {
        var_value != self.negated
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit {
            var: self.var,
            negated: !self.negated,
        }
    }
}

impl From<usize> for Lit {
    fn from(var: usize) -> Self {
        Lit::pos(var)
    }
}

/// Sparse multilinear polynomial of degree at most two over binary variables,
/// with exact integer coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    pub offset: i64,
    pub linear: BTreeMap<usize, i64>,
    /// Keys are ordered `(i, j)` with `i < j`.
    pub quad: BTreeMap<(usize, usize), i64>,
}

fn bump<K: Ord>(map: &mut BTreeMap<K, i64>, key: K, c: i64) {
    if c == 0 {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if *e.get() == 0 {
                e.remove();
            }
        }
    }
}

impl Poly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self {
            offset: c,
            ..Self::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.offset == 0 && self.linear.is_empty() && self.quad.is_empty()
    }

    pub fn add_const(&mut self, c: i64) {
        self.offset += c;
    }

    pub fn add_linear(&mut self, v: usize, c: i64) {
        bump(&mut self.linear, v, c);
    }

    /// `c·a·b`; `a == b` folds into the linear term since `v² = v`.
    pub fn add_quad(&mut self, a: usize, b: usize, c: i64) {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => self.add_linear(a, c),
            std::cmp::Ordering::Less => bump(&mut self.quad, (a, b), c),
            std::cmp::Ordering::Greater => bump(&mut self.quad, (b, a), c),
        }
    }

    /// `c·l`.
    pub fn add_lit(&mut self, l: Lit, c: i64) {
        if l.negated {
            self.add_const(c);
            self.add_linear(l.var, -c);
        } else {
            self.add_linear(l.var, c);
        }
    }

    /// `c·l1·l2`, expanded over the underlying variables.
    pub fn add_lit_product(&mut self, l1: Lit, l2: Lit, c: i64) {
        match (l1.negated, l2.negated) {
            (false, false) => self.add_quad(l1.var, l2.var, c),
            (false, true) => {
                self.add_linear(l1.var, c);
                self.add_quad(l1.var, l2.var, -c);
            }
            (true, false) => {
                self.add_linear(l2.var, c);
                self.add_quad(l1.var, l2.var, -c);
            }
            (true, true) => {
                self.add_const(c);
                self.add_linear(l1.var, -c);
                self.add_linear(l2.var, -c);
                self.add_quad(l1.var, l2.var, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, k: i64) {
        self.offset += k * other.offset;
        for (&v, &c) in &other.linear {
            self.add_linear(v, k * c);
        }
        for (&(a, b), &c) in &other.quad {
            self.add_quad(a, b, k * c);
        }
    }

    pub fn scaled(&self, k: i64) -> Poly {
        let mut out = Poly::new();
        out.add_scaled(self, k);
        out
    }

    pub fn eval(&self, value: impl Fn(usize) -> bool) -> i64 {
        let lin: i64 = self
            .linear
            .iter()
            .filter(|(&v, _)| value(v))
            .map(|(_, &c)| c)
            .sum();
        let quad: i64 = self
            .quad
            .iter()
            .filter(|(&(a, b), _)| value(a) && value(b))
            .map(|(_, &c)| c)
            .sum();
        self.offset + lin + quad
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.linear.keys().copied().collect();
        for &(a, b) in self.quad.keys() {
            out.insert(a);
            out.insert(b);
        }
        out
    }

    pub fn mentions(&self, v: usize) -> bool {
        self.linear.contains_key(&v) || self.quad.keys().any(|&(a, b)| a == v || b == v)
    }

    /// Rewrites every variable through `map`: a literal over a new variable or a constant.
    pub fn rewrite(&self, map: impl Fn(usize) -> Signal) -> Poly {
        let mut out = Poly::constant(self.offset);
        for (&v, &c) in &self.linear {
            match map(v) {
                Signal::Const(b) => out.add_const(if b { c } else { 0 }),
                Signal::Lit(l) => out.add_lit(l, c),
            }
        }
        for (&(a, b), &c) in &self.quad {
            match (map(a), map(b)) {
                (Signal::Const(x), Signal::Const(y)) => out.add_const(if x && y { c } else { 0 }),
                (Signal::Const(x), Signal::Lit(l)) | (Signal::Lit(l), Signal::Const(x)) => {
                    if x {
                        out.add_lit(l, c)
                    }
                }
                (Signal::Lit(l1), Signal::Lit(l2)) => out.add_lit_product(l1, l2, c),
            }
        }
        out
    }
}

/// A value feeding a gate: a literal over a live variable, or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signal {
    Const(bool),
    Lit(Lit),
}

impl Signal {
    pub fn eval(self, value: impl Fn(usize) -> bool) -> bool {
        match self {
            Signal::Const(b) => b,
            Signal::Lit(l) => l.value(value(l.var)),
        }
    }
}

impl Not for Signal {
    type Output = Signal;

    fn not(self) -> Signal {
        match self {
            Signal::Const(b) => Signal::Const(!b),
            Signal::Lit(l) => Signal::Lit(!l),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn literal_products_expand() {
        let mut p = Poly::new();
        // x·(1 - x) = 0
        p.add_lit_product(Lit::pos(0), Lit::neg(0), 5);
        assert!(p.is_zero());
        // (1 - x)(1 - y) = 1 - x - y + xy
        p.add_lit_product(Lit::neg(0), Lit::neg(1), 1);
        assert_eq!(p.offset, 1);
        assert_eq!(p.linear.get(&0), Some(&-1));
        assert_eq!(p.quad.get(&(0, 1)), Some(&1));
    }

    proptest! {
        #[test]
        fn lit_product_matches_pointwise(a in 0usize..3, b in 0usize..3, na: bool, nb: bool, c in -5i64..5, bits in 0u8..8) {
            let l1 = Lit { var: a, negated: na };
            let l2 = Lit { var: b, negated: nb };
            let mut p = Poly::new();
            p.add_lit_product(l1, l2, c);
            let val = |v: usize| bits >> v & 1 == 1;
            let expect = c * (l1.value(val(a)) as i64) * (l2.value(val(b)) as i64);
            prop_assert_eq!(p.eval(val), expect);
        }

        #[test]
        fn rewrite_preserves_values(
            terms in proptest::collection::vec((0usize..4, 0usize..4, -3i64..4), 0..10),
            fixed in proptest::collection::vec(proptest::option::of(any::<bool>()), 4),
            bits in 0u8..16,
        ) {
            let mut p = Poly::new();
            for &(a, b, c) in &terms {
                p.add_quad(a, b, c);
            }
            let val = |v: usize| fixed[v].unwrap_or(bits >> v & 1 == 1);
            let q = p.rewrite(|v| match fixed[v] {
                Some(b) => Signal::Const(b),
                None => Signal::Lit(Lit::pos(v)),
            });
            prop_assert_eq!(q.eval(val), p.eval(val));
        }
    }
}
