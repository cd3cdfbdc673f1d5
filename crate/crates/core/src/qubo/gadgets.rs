//! Penalty gadgets for binary gates. Each is zero exactly when the output
//! matches the gate and at least one otherwise.

use super::{GadgetGroup, GateKind, Lit, Poly, QuboProblem, Signal};
use crate::error::QuboError;

fn check(q: &QuboProblem, vars: impl IntoIterator<Item = usize>) -> Result<(), QuboError> {
    let mut seen = std::collections::HashSet::new();
    for v in vars {
        if v >= q.num_vars() {
            return Err(QuboError::VariableOutOfRange {
                index: v,
                len: q.num_vars(),
            });
        }
        if !seen.insert(v) {
            return Err(QuboError::DuplicateVariable(v));
        }
    }
    Ok(())
}

/// `weight·G(z, x, y)` for a two-input gate over literals.
pub(crate) fn gate_terms(kind: GateKind, z: usize, inputs: &[Lit], weight: i64) -> Poly {
    let zl = Lit::pos(z);
    let mut p = Poly::new();
    match (kind, inputs) {
        (GateKind::Equal, &[x]) => {
            // z + x - 2zx
            p.add_lit(zl, weight);
            p.add_lit(x, weight);
            p.add_lit_product(zl, x, -2 * weight);
        }
        (GateKind::Or, &[x, y]) => {
            // z + x + y + xy - 2z(x + y)
            p.add_lit(zl, weight);
            p.add_lit(x, weight);
            p.add_lit(y, weight);
            p.add_lit_product(x, y, weight);
            p.add_lit_product(zl, x, -2 * weight);
            p.add_lit_product(zl, y, -2 * weight);
        }
        (GateKind::And, &[x, y]) => {
            // 3z + xy - 2z(x + y)
            p.add_lit(zl, 3 * weight);
            p.add_lit_product(x, y, weight);
            p.add_lit_product(zl, x, -2 * weight);
            p.add_lit_product(zl, y, -2 * weight);
        }
        _ => panic!("{kind:?} gadget with {} inputs", inputs.len()),
    }
    p
}

pub(crate) fn push_gate(q: &mut QuboProblem, kind: GateKind, z: usize, inputs: &[Lit], weight: i64) {
    q.add_group(GadgetGroup {
        kind,
        output: z,
        inputs: inputs.iter().map(|&l| Signal::Lit(l)).collect(),
        terms: gate_terms(kind, z, inputs, weight),
    });
}

/// `out = kind(inputs)` as a left fold of two-input gadgets. Creates
/// `max(h - 2, 0)` auxiliaries; the k-th is created by `new_aux(q, k)`.
pub(crate) fn chain_lits(
    q: &mut QuboProblem,
    kind: GateKind,
    out: usize,
    inputs: &[Lit],
    weight: i64,
    new_aux: &mut dyn FnMut(&mut QuboProblem, usize) -> usize,
) -> Vec<usize> {
    match inputs {
        [] => {
            // constant output: OR() = 0, AND() = 1
            let mut terms = Poly::new();
            let lit = if kind == GateKind::And { Lit::neg(out) } else { Lit::pos(out) };
            terms.add_lit(lit, weight);
            q.add_group(GadgetGroup {
                kind,
                output: out,
                inputs: Vec::new(),
                terms,
            });
            Vec::new()
        }
        [x] => {
            push_gate(q, GateKind::Equal, out, &[*x], weight);
            Vec::new()
        }
        [x, y] => {
            push_gate(q, kind, out, &[*x, *y], weight);
            Vec::new()
        }
        _ => {
            let h = inputs.len();
            let mut aux = Vec::with_capacity(h - 2);
            let mut prev = inputs[0];
            for (k, &next) in inputs[1..h - 1].iter().enumerate() {
                let u = new_aux(q, k);
                push_gate(q, kind, u, &[prev, next], weight);
                aux.push(u);
                prev = Lit::pos(u);
            }
            push_gate(q, kind, out, &[prev, inputs[h - 1]], weight);
            aux
        }
    }
}

/// `weight·[OR(inputs) = 0]`: the clause is satisfied iff some input holds.
/// Uses `max(h - 2, 0)` auxiliaries.
pub(crate) fn clause_lits(
    q: &mut QuboProblem,
    inputs: &[Lit],
    weight: i64,
    new_aux: &mut dyn FnMut(&mut QuboProblem, usize) -> usize,
) -> Vec<usize> {
    let mut p = Poly::new();
    let aux = match inputs {
        [] => panic!("empty clause"),
        [x] => {
            p.add_lit(!*x, weight);
            Vec::new()
        }
        [x, y] => {
            p.add_lit_product(!*x, !*y, weight);
            Vec::new()
        }
        _ => {
            let sigma = new_aux(q, 0);
            let mut aux = vec![sigma];
            aux.extend(chain_lits(q, GateKind::Or, sigma, &inputs[1..], weight, &mut |q, k| {
                new_aux(q, k + 1)
            }));
            p.add_lit_product(!inputs[0], Lit::neg(sigma), weight);
            aux
        }
    };
    q.add_poly(&p, 1);
    aux
}

/// Adds `OR(z, x, y)`.
pub fn or_gadget(q: &mut QuboProblem, z: usize, x: usize, y: usize) -> Result<(), QuboError> {
    check(q, [z, x, y])?;
    push_gate(q, GateKind::Or, z, &[x.into(), y.into()], 1);
    Ok(())
}

/// Adds `AND(z, x, y)`.
pub fn and_gadget(q: &mut QuboProblem, z: usize, x: usize, y: usize) -> Result<(), QuboError> {
    check(q, [z, x, y])?;
    push_gate(q, GateKind::And, z, &[x.into(), y.into()], 1);
    Ok(())
}

/// Adds `z + x - 2zx`, zero iff `z = x`.
pub fn equality_gadget(q: &mut QuboProblem, z: usize, x: usize) -> Result<(), QuboError> {
    check(q, [z, x])?;
    push_gate(q, GateKind::Equal, z, &[x.into()], 1);
    Ok(())
}

fn fresh(q: &mut QuboProblem, _: usize) -> usize {
    q.add_aux_variable()
}

fn checked_chain(
    q: &mut QuboProblem,
    kind: GateKind,
    out: usize,
    inputs: &[usize],
) -> Result<Vec<usize>, QuboError> {
    if inputs.is_empty() {
        return Err(QuboError::EmptyInputs);
    }
    check(q, std::iter::once(out).chain(inputs.iter().copied()))?;
    let lits: Vec<Lit> = inputs.iter().map(|&v| Lit::pos(v)).collect();
    Ok(chain_lits(q, kind, out, &lits, 1, &mut fresh))
}

/// `out = OR(inputs)`; returns the auxiliaries created.
pub fn or_chain(q: &mut QuboProblem, out: usize, inputs: &[usize]) -> Result<Vec<usize>, QuboError> {
    checked_chain(q, GateKind::Or, out, inputs)
}

/// `out = AND(inputs)`; returns the auxiliaries created.
pub fn and_chain(q: &mut QuboProblem, out: usize, inputs: &[usize]) -> Result<Vec<usize>, QuboError> {
    checked_chain(q, GateKind::And, out, inputs)
}

/// Penalty 1 unless at least one input is 1; returns the auxiliaries created.
pub fn require_any(q: &mut QuboProblem, inputs: &[usize]) -> Result<Vec<usize>, QuboError> {
    if inputs.is_empty() {
        return Err(QuboError::EmptyInputs);
    }
    check(q, inputs.iter().copied())?;
    let lits: Vec<Lit> = inputs.iter().map(|&v| Lit::pos(v)).collect();
    Ok(clause_lits(q, &lits, 1, &mut fresh))
}
