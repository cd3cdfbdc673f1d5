//! Exact QUBO minimization: every assignment of the chosen variables, each
//! completed by branch and bound over the rest.

use argqubo::QuboProblem;

pub struct Exact {
    pub min: i64,
    /// One minimizer for each assignment of the enumerated variables that attains `min`.
    pub minimizers: Vec<Vec<bool>>,
    pub nodes: u64,
}

/// Minimum over the free variables given a fixed part, by depth-first branch and bound.
struct Rest<'a> {
    free: &'a [usize],
    /// couplings of `free[k]` to `free[m]`, m > k
    later: Vec<Vec<(usize, i64)>>,
    later_neg: Vec<i64>,
    later_pos: Vec<i64>,
    field: Vec<i64>,
    x: Vec<bool>,
    best: i64,
    arg: Option<Vec<bool>>,
    nodes: u64,
}

impl Rest<'_> {
    fn go(&mut self, k: usize, energy: i64) {
        self.nodes += 1;
        if k == self.free.len() {
            if energy < self.best {
                self.best = energy;
                self.arg = Some(self.x.clone());
            }
            return;
        }
        let bound: i64 = (k..self.free.len()).map(|m| (self.field[m] + self.later_neg[m]).min(0)).sum();
        if energy + bound >= self.best {
            return;
        }
        let h = self.field[k];
        // a value that is never worse whatever the later variables do is taken alone
        let choices: &[bool] = if h + self.later_neg[k] >= 0 {
            &[false]
        } else if h + self.later_pos[k] <= 0 {
            &[true]
        } else if h < 0 {
            &[true, false]
        } else {
            &[false, true]
        };
        for &on in choices {
            if on {
                self.x[k] = true;
                for &(m, c) in &self.later[k] {
                    self.field[m] += c;
                }
                self.go(k + 1, energy + h);
                for &(m, c) in &self.later[k] {
                    self.field[m] -= c;
                }
                self.x[k] = false;
            } else {
                self.go(k + 1, energy);
            }
        }
    }
}

/// Enumerates every assignment of `vars` (at most 16 of them).
pub fn minimize(q: &QuboProblem, vars: &[usize]) -> Exact {
    let n = q.num_vars();
    assert!(vars.len() <= 16);
    let mut fixed = vec![false; n];
    for &v in vars {
        fixed[v] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&v| !fixed[v]).collect();
    let mut slot = vec![usize::MAX; n];
    for (k, &v) in free.iter().enumerate() {
        slot[v] = k;
    }
    let later: Vec<Vec<(usize, i64)>> = free
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            q.neighbors(v)
                .filter(|&(u, _)| !fixed[u] && slot[u] > k)
                .map(|(u, c)| (slot[u], c))
                .collect()
        })
        .collect();
    let later_neg: Vec<i64> = later.iter().map(|l| l.iter().map(|&(_, c)| c.min(0)).sum()).collect();
    let later_pos: Vec<i64> = later.iter().map(|l| l.iter().map(|&(_, c)| c.max(0)).sum()).collect();

    let mut min = i64::MAX;
    let mut minimizers = Vec::new();
    let mut nodes = 0;
    for mask in 0u32..1 << vars.len() {
        let mut a = vec![false; n];
        for (b, &v) in vars.iter().enumerate() {
            a[v] = mask >> b & 1 == 1;
        }
        let mut base = q.offset();
        for &v in vars {
            if a[v] {
                base += q.linear(v);
                base += q.neighbors(v).filter(|&(u, _)| fixed[u] && a[u] && u > v).map(|(_, c)| c).sum::<i64>();
            }
        }
        let field = free
            .iter()
            .map(|&v| q.linear(v) + q.neighbors(v).filter(|&(u, _)| fixed[u] && a[u]).map(|(_, c)| c).sum::<i64>())
            .collect();
        let mut rest = Rest {
            free: &free,
            later: later.clone(),
            later_neg: later_neg.clone(),
            later_pos: later_pos.clone(),
            field,
            x: vec![false; free.len()],
            // anything above the current minimum is of no interest
            best: min.saturating_add(1),
            arg: None,
            nodes: 0,
        };
        rest.go(0, base);
        nodes += rest.nodes;
        let Some(x) = rest.arg else { continue };
        if rest.best < min {
            min = rest.best;
            minimizers.clear();
        }
        for (k, &v) in free.iter().enumerate() {
            a[v] = x[k];
        }
        minimizers.push(a);
    }
    Exact { min, minimizers, nodes }
}

/// Plain enumeration, for cross-checking the search on small problems.
pub fn brute_force(q: &QuboProblem) -> i64 {
    let n = q.num_vars();
    assert!(n <= 22);
    (0u64..1 << n)
        .map(|m| {
            let a: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
            q.energy(&a).unwrap()
        })
        .min()
        .unwrap()
}
