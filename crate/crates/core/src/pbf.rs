//! Multilinear pseudo-Boolean polynomials.
//!
//! Every variable is binary, so `x * x = x` and a monomial is just the set of
//! variables it multiplies. Terms are kept in a `BTreeMap` keyed by the sorted
//! variable list, which gives a deterministic iteration order; evaluation sums
//! the active terms in that order, so two evaluations of the same polynomial on
//! the same assignment are bit-identical no matter which entry point is used.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients smaller than this in magnitude are dropped.
pub const PRUNE_EPS: f64 = 1e-12;

/// Index of a binary variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub u32);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl From<u32> for VarId {
    fn from(v: u32) -> Self {
        VarId(v)
    }
}

/// One term of a polynomial, as handed out by [`Polynomial::monomials`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub vars: Vec<VarId>,
    pub coeff: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Vec<VarId>, f64>,
}

fn normalize_vars(mut vars: Vec<VarId>) -> Vec<VarId> {
    vars.sort_unstable();
    vars.dedup();
    vars
}

/// Union of two strictly sorted variable lists.
fn merge_vars(a: &[VarId], b: &[VarId]) -> Vec<VarId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(vec![v], 1.0)
    }

    /// `coeff * Π vars`; repeated variables collapse.
    pub fn monomial(vars: Vec<VarId>, coeff: f64) -> Self {
        Self::from_terms([(vars, coeff)])
    }

    /// Builds a polynomial from raw terms, merging duplicates and applying
    /// multilinear reduction to each variable list.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<VarId>, f64)>,
    {
        let mut acc = BTreeMap::new();
        for (vars, coeff) in terms {
            *acc.entry(normalize_vars(vars)).or_insert(0.0) += coeff;
        }
        Self::pruned(acc)
    }

    /// `constant + Σ coeff·v`.
    pub fn linear<I>(terms: I, constant: f64) -> Self
    where
        I: IntoIterator<Item = (VarId, f64)>,
    {
        Self::from_terms(
            terms
                .into_iter()
                .map(|(v, c)| (vec![v], c))
                .chain(std::iter::once((Vec::new(), constant))),
        )
    }

    /// Plain sum of the given variables.
    pub fn sum_of<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Self::linear(vars.into_iter().map(|v| (v, 1.0)), 0.0)
    }

    fn pruned(mut terms: BTreeMap<Vec<VarId>, f64>) -> Self {
        terms.retain(|_, c| c.abs() >= PRUNE_EPS);
        Polynomial { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[VarId], f64)> + '_ {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms()
            .map(|(vars, coeff)| Monomial {
                vars: vars.to_vec(),
                coeff,
            })
            .collect()
    }

    /// Coefficient of the monomial over `vars` (0 if absent).
    pub fn coeff(&self, vars: &[VarId]) -> f64 {
        let key = normalize_vars(vars.to_vec());
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(&[])
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flatten().copied().collect()
    }

    /// One past the largest variable index, i.e. the length an assignment
    /// slice needs to cover every variable.
    pub fn var_span(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|k| k.last())
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0)
    }

    /// True when every coefficient is within `tol` of an integer.
    pub fn is_integral(&self, tol: f64) -> bool {
        self.terms.values().all(|c| (c - c.round()).abs() <= tol)
    }

    pub fn evaluate(&self, assignment: &[bool]) -> Result<f64> {
        if let Some(v) = self.variables().into_iter().find(|v| v.index() >= assignment.len()) {
            return Err(Error::MissingVariable(v));
        }
        Ok(self.evaluate_with(|v| assignment[v.index()]))
    }

    pub fn evaluate_with<F: Fn(VarId) -> bool>(&self, value: F) -> f64 {
        let mut acc = 0.0;
        for (vars, &c) in &self.terms {
            if vars.iter().all(|&v| value(v)) {
                acc += c;
            }
        }
        acc
    }

    /// Evaluates on the basis state `z`, variable `k` being bit `k` of `z`.
    ///
    /// Variables with index >= 64 read as 0.
    pub fn evaluate_bits(&self, z: u64) -> f64 {
        self.evaluate_with(|v| v.0 < 64 && (z >> v.0) & 1 == 1)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::pruned(self.terms.iter().map(|(v, c)| (v.clone(), c * k)).collect())
    }

    /// Product with multilinear reduction.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Vec<VarId>, f64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *acc.entry(merge_vars(a, b)).or_insert(0.0) += ca * cb;
            }
        }
        Self::pruned(acc)
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        let mut acc = self.terms.clone();
        for (k, c) in &other.terms {
            *acc.entry(k.clone()).or_insert(0.0) += c;
        }
        Self::pruned(acc)
    }

    /// Replaces `v` by `r` in every monomial containing it.
    pub fn substitute(&self, v: VarId, r: &Polynomial) -> Self {
        let mut acc: BTreeMap<Vec<VarId>, f64> = BTreeMap::new();
        for (vars, &c) in &self.terms {
            match vars.binary_search(&v) {
                Err(_) => *acc.entry(vars.clone()).or_insert(0.0) += c,
                Ok(pos) => {
                    let mut rest = vars.clone();
                    rest.remove(pos);
                    for (rv, rc) in &r.terms {
                        *acc.entry(merge_vars(&rest, rv)).or_insert(0.0) += c * rc;
                    }
                }
            }
        }
        Self::pruned(acc)
    }

    /// Simultaneous substitution of several variables. Variables not in `map`
    /// are kept.
    pub fn compose(&self, map: &BTreeMap<VarId, Polynomial>) -> Self {
        let mut out = Polynomial::zero();
        for (vars, &c) in &self.terms {
            let mut term = Polynomial::constant(c);
            let mut kept = Vec::new();
            for v in vars {
                match map.get(v) {
                    Some(r) => term = term.multiply(r),
                    None => kept.push(*v),
                }
            }
            if !kept.is_empty() {
                term = term.multiply(&Polynomial::monomial(kept, 1.0));
            }
            out = out.add_poly(&term);
        }
        out
    }

    /// Renames variables; `rename` must be injective on this polynomial's
    /// variables.
    pub fn relabel<F: Fn(VarId) -> VarId>(&self, rename: F) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(vars, &c)| (vars.iter().map(|&v| rename(v)).collect(), c)),
        )
    }

    /// Cheap bounds on the value range over the whole hypercube: every
    /// non-constant monomial contributes either 0 or its coefficient.
    pub fn interval_bounds(&self) -> (f64, f64) {
        let c0 = self.constant_term();
        let (mut lo, mut hi) = (c0, c0);
        for (vars, &c) in &self.terms {
            if vars.is_empty() {
                continue;
            }
            if c < 0.0 {
                lo += c;
            } else {
                hi += c;
            }
        }
        (lo, hi)
    }

    /// Coefficient-wise comparison.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let keys: BTreeSet<&Vec<VarId>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).copied().unwrap_or(0.0);
            let b = other.terms.get(k).copied().unwrap_or(0.0);
            (a - b).abs() <= tol
        })
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_poly(rhs)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        self.add_poly(&rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.add_poly(&rhs.scale(-1.0))
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.multiply(rhs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self.multiply(&rhs)
    }
}

impl Mul<f64> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, k: f64) -> Polynomial {
        self.scale(k)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        let mut acc = BTreeMap::new();
        for p in iter {
            for (k, c) in p.terms {
                *acc.entry(k).or_insert(0.0) += c;
            }
        }
        Polynomial::pruned(acc)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (vars, &c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c < 0.0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if vars.is_empty() || mag != 1.0 {
                write!(f, "{mag}")?;
                if !vars.is_empty() {
                    write!(f, " ")?;
                }
            }
            let names: Vec<String> = vars.iter().map(ToString::to_string).collect();
            write!(f, "{}", names.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VarId {
        VarId(i)
    }

    fn x(i: u32) -> Polynomial {
        Polynomial::var(v(i))
    }

    fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..1u64 << n).map(move |z| (0..n).map(|k| (z >> k) & 1 == 1).collect())
    }

    #[test]
    fn evaluate_eq_penalty_shape() {
        // 1 - x0 - x1 + 2 x0 x1
        let p = Polynomial::from_terms([
            (vec![], 1.0),
            (vec![v(0)], -1.0),
            (vec![v(1)], -1.0),
            (vec![v(0), v(1)], 2.0),
        ]);
        let expected = [1.0, 0.0, 0.0, 1.0];
        for (z, a) in assignments(2).enumerate() {
            assert_eq!(p.evaluate(&a).unwrap(), expected[z]);
        }
        assert_eq!(p.evaluate(&[true, false]).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_trivial_cases() {
        assert_eq!(Polynomial::zero().evaluate(&[]).unwrap(), 0.0);
        assert_eq!(Polynomial::zero().evaluate(&[true, false]).unwrap(), 0.0);
        let p = Polynomial::monomial(vec![v(0), v(1), v(2)], 3.0);
        assert_eq!(p.evaluate(&[true, true, true]).unwrap(), 3.0);
    }

    #[test]
    fn evaluate_reports_missing_variable() {
        let p = x(0) + x(3);
        match p.evaluate(&[true, false]) {
            Err(Error::MissingVariable(id)) => assert_eq!(id, v(3)),
            other => panic!("expected missing variable, got {other:?}"),
        }
    }

    #[test]
    fn add_cancels_and_merges() {
        assert!((x(0) + -&x(0)).is_zero());
        let p = (Polynomial::constant(1.0) + x(0)) + Polynomial::monomial(vec![v(0), v(1)], 1.0);
        assert_eq!(p.len(), 3);
        assert_eq!(p.constant_term(), 1.0);
        assert_eq!(p.coeff(&[v(0)]), 1.0);
        assert_eq!(p.coeff(&[v(1), v(0)]), 1.0);
    }

    #[test]
    fn multiply_is_multilinear() {
        assert_eq!(x(0) * x(0), x(0));
        // (x0 + x1 - 1)(x0 + x1) = 2 x0 x1
        let p = (x(0) + x(1) - Polynomial::constant(1.0)) * (x(0) + x(1));
        assert_eq!(p, Polynomial::monomial(vec![v(0), v(1)], 2.0));
        for a in assignments(2) {
            let s = a.iter().filter(|&&b| b).count() as f64;
            assert_eq!(p.evaluate(&a).unwrap(), (s - 1.0) * s);
        }
        let q = x(2) + Polynomial::monomial(vec![v(0), v(1)], -4.0);
        assert_eq!(Polynomial::constant(1.0) * q.clone(), q);
    }

    #[test]
    fn substitute_pair_product() {
        // x0 x1 x2 with x0 -> y (as a helper replacing the pair via x1 -> 1)
        let p = Polynomial::monomial(vec![v(0), v(1), v(2)], 1.0);
        let step = p.substitute(v(0), &x(9)).substitute(v(1), &Polynomial::constant(1.0));
        assert_eq!(step, Polynomial::monomial(vec![v(2), v(9)], 1.0));
        assert_eq!(p.substitute(v(5), &x(7)), p);
        assert_eq!(x(0).substitute(v(0), &Polynomial::constant(1.0)), Polynomial::constant(1.0));
    }

    #[test]
    fn interval_bounds_basic() {
        assert_eq!(Polynomial::zero().interval_bounds(), (0.0, 0.0));
        let p = Polynomial::from_terms([
            (vec![], 2.0),
            (vec![v(0)], -3.0),
            (vec![v(0), v(1)], 5.0),
        ]);
        assert_eq!(p.interval_bounds(), (-1.0, 7.0));
    }

    #[test]
    fn evaluate_bits_matches_slice_evaluation() {
        let p = Polynomial::from_terms([
            (vec![], 0.5),
            (vec![v(0), v(2)], -1.25),
            (vec![v(1)], 3.0),
            (vec![v(0), v(1), v(2)], 7.0),
        ]);
        for (z, a) in assignments(3).enumerate() {
            assert_eq!(p.evaluate_bits(z as u64).to_bits(), p.evaluate(&a).unwrap().to_bits());
        }
    }

    #[test]
    fn display_is_readable() {
        let p = Polynomial::from_terms([
            (vec![], 1.0),
            (vec![v(0)], -1.0),
            (vec![v(0), v(1)], 2.0),
        ]);
        assert_eq!(p.to_string(), "1 - v0 + 2 v0 v1");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn compose_replaces_simultaneously() {
        // swap x0 and x1 in x0 + 2 x1
        let p = x(0) + &x(1) * 2.0;
        let map = BTreeMap::from([(v(0), x(1)), (v(1), x(0))]);
        assert_eq!(p.compose(&map), x(1) + &x(0) * 2.0);
    }
}
