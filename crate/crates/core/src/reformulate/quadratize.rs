//! Degree reduction by pair substitution.
//!
//! Each step picks a variable pair `(a, b)`, replaces the product `a·b` by a
//! fresh variable `y` in every monomial of the reduced polynomial, and adds
//! `λ·pen_lin(a, b, y)`, which is 0 exactly when `y = a·b` and at least `λ`
//! otherwise. The gadget terms are quadratic and are never substituted into.

use std::collections::BTreeMap;

use crate::pbf::{Polynomial, VarId};

/// `a·b − 2a·y − 2b·y + 3y`.
pub fn pen_lin(a: VarId, b: VarId, y: VarId) -> Polynomial {
    Polynomial::from_terms([
        (vec![a, b], 1.0),
        (vec![a, y], -2.0),
        (vec![b, y], -2.0),
        (vec![y], 3.0),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub a: VarId,
    pub b: VarId,
    pub y: VarId,
}

/// Ordered record of the substitutions made by [`reduce_to_quadratic`].
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionMap {
    pub lambda: f64,
    pub records: Vec<Substitution>,
}

impl SubstitutionMap {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Re-applies the substitutions and gadgets to `p`.
    pub fn replay(&self, p: &Polynomial) -> Polynomial {
        let mut core = p.clone();
        let mut gadgets = Polynomial::zero();
        for s in &self.records {
            core = replace_pair(&core, s.a, s.b, s.y);
            gadgets = &gadgets + &pen_lin(s.a, s.b, s.y).scale(self.lambda);
        }
        core + gadgets
    }

    /// Extends an assignment of the original variables with the consistent
    /// value `y = a·b` of every auxiliary variable. `bits` must be long enough
    /// to index every auxiliary.
    pub fn complete(&self, bits: &mut [bool]) {
        for s in &self.records {
            bits[s.y.index()] = bits[s.a.index()] && bits[s.b.index()];
        }
    }
}

fn replace_pair(p: &Polynomial, a: VarId, b: VarId, y: VarId) -> Polynomial {
    Polynomial::from_terms(p.terms().map(|(vars, c)| {
        if vars.binary_search(&a).is_ok() && vars.binary_search(&b).is_ok() {
            let mut vs: Vec<VarId> = vars.iter().copied().filter(|&v| v != a && v != b).collect();
            vs.push(y);
            (vs, c)
        } else {
            (vars.to_vec(), c)
        }
    }))
}

/// Most frequent pair among monomials of degree above `target`; ties go to the
/// lexicographically smallest pair.
fn pick_pair(p: &Polynomial, target: usize) -> Option<(VarId, VarId)> {
    let mut counts: BTreeMap<(VarId, VarId), usize> = BTreeMap::new();
    for (vars, _) in p.terms().filter(|(vs, _)| vs.len() > target) {
        for (i, &a) in vars.iter().enumerate() {
            for &b in &vars[i + 1..] {
                *counts.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    let mut best: Option<((VarId, VarId), usize)> = None;
    for (pair, n) in counts {
        if best.is_none_or(|(_, m)| n > m) {
            best = Some((pair, n));
        }
    }
    best.map(|(pair, _)| pair)
}

/// Reduces `p` until no monomial has degree above `target` (`target >= 1`),
/// numbering auxiliary variables from `first_free`.
///
/// The global minimum over the extended hypercube equals the minimum of `p`
/// whenever `lambda` is at least the sum of the absolute non-constant
/// coefficients of `p`.
pub fn reduce_degree(
    p: &Polynomial,
    lambda: f64,
    first_free: VarId,
    target: usize,
) -> (Polynomial, SubstitutionMap) {
    assert!(target >= 1, "cannot reduce below degree 1");
    let mut core = p.clone();
    let mut gadgets = Polynomial::zero();
    let mut records = Vec::new();
    let mut next = first_free.0;
    while let Some((a, b)) = pick_pair(&core, target) {
        let y = VarId(next);
        next += 1;
        core = replace_pair(&core, a, b, y);
        gadgets = &gadgets + &pen_lin(a, b, y).scale(lambda);
        records.push(Substitution { a, b, y });
    }
    (core + gadgets, SubstitutionMap { lambda, records })
}

/// Quadratizes `p`, numbering auxiliaries after `p`'s largest variable.
pub fn reduce_to_quadratic(p: &Polynomial, lambda: f64) -> (Polynomial, SubstitutionMap) {
    reduce_degree(p, lambda, VarId(p.var_span() as u32), 2)
}
