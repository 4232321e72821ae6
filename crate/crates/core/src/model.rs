//! Integer programs with polynomial objective and constraints, and their
//! binary encoding.
//!
//! Objectives are always minimized. Constraints are stored in canonical
//! `lhs <= 0` form together with an [`Origin`] tag recording how the user wrote
//! them, so that the reformulation step can pick a binary-valued penalty for
//! plain sums of binary variables.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::pbf::{Polynomial, VarId};

const INT_TOL: f64 = 1e-9;

/// General polynomial over integer variables: each monomial maps variables to
/// exponents.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntPolynomial {
    terms: BTreeMap<Vec<(VarId, u32)>, f64>,
}

fn normalize_powers(mut powers: Vec<(VarId, u32)>) -> Vec<(VarId, u32)> {
    powers.sort_unstable();
    let mut out: Vec<(VarId, u32)> = Vec::with_capacity(powers.len());
    for (v, e) in powers {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some((last, exp)) if *last == v => *exp += e,
            _ => out.push((v, e)),
        }
    }
    out
}

impl IntPolynomial {
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<(VarId, u32)>, f64)>,
    {
        let mut acc = BTreeMap::new();
        for (powers, c) in terms {
            *acc.entry(normalize_powers(powers)).or_insert(0.0) += c;
        }
        acc.retain(|_, c: &mut f64| c.abs() >= crate::pbf::PRUNE_EPS);
        IntPolynomial { terms: acc }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms([(Vec::new(), c)])
    }

    pub fn var(v: VarId) -> Self {
        Self::from_terms([(vec![(v, 1)], 1.0)])
    }

    pub fn linear<I: IntoIterator<Item = (VarId, f64)>>(terms: I, constant: f64) -> Self {
        Self::from_terms(
            terms
                .into_iter()
                .map(|(v, c)| (vec![(v, 1)], c))
                .chain(std::iter::once((Vec::new(), constant))),
        )
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[(VarId, u32)], f64)> + '_ {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flatten().map(|(v, _)| *v).collect()
    }

    pub fn constant_term(&self) -> f64 {
        self.terms.get(&Vec::new()).copied().unwrap_or(0.0)
    }

    /// Evaluates at integer point `values` (indexed by `VarId`).
    pub fn evaluate(&self, values: &[u64]) -> Result<f64> {
        let mut acc = 0.0;
        for (powers, &c) in &self.terms {
            let mut t = c;
            for &(v, e) in powers {
                let x = *values.get(v.index()).ok_or(Error::MissingVariable(v))?;
                t *= (x as f64).powi(e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, c)| (p.clone(), c * k)))
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(p, c)| (p.clone(), *c)),
        )
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.push((a.iter().chain(b).copied().collect(), ca * cb));
            }
        }
        Self::from_terms(out)
    }
}

impl From<&Polynomial> for IntPolynomial {
    fn from(p: &Polynomial) -> Self {
        Self::from_terms(
            p.terms()
                .map(|(vars, c)| (vars.iter().map(|&v| (v, 1)).collect(), c)),
        )
    }
}

/// Operations the constraint machinery needs from a polynomial type.
pub trait ConstraintPoly: Clone {
    fn constant_term(&self) -> f64;
    fn shifted(&self, c: f64) -> Self;
    fn negated(&self) -> Self;
    fn integral(&self) -> std::result::Result<(), f64>;
    fn variables(&self) -> BTreeSet<VarId>;
    /// The variables of `self - constant_term()` when that part is a plain sum
    /// of distinct degree-one variables with unit coefficients.
    fn unit_sum_vars(&self) -> Option<Vec<VarId>>;
}

impl ConstraintPoly for Polynomial {
    fn constant_term(&self) -> f64 {
        Polynomial::constant_term(self)
    }
    fn shifted(&self, c: f64) -> Self {
        self + &Polynomial::constant(c)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn integral(&self) -> std::result::Result<(), f64> {
        match self.terms().find(|(_, c)| (c - c.round()).abs() > INT_TOL) {
            Some((_, c)) => Err(c),
            None => Ok(()),
        }
    }
    fn variables(&self) -> BTreeSet<VarId> {
        Polynomial::variables(self)
    }
    fn unit_sum_vars(&self) -> Option<Vec<VarId>> {
        let mut vars = Vec::new();
        for (vs, c) in self.terms() {
            match vs {
                [] => {}
                [v] if c == 1.0 => vars.push(*v),
                _ => return None,
            }
        }
        Some(vars)
    }
}

impl ConstraintPoly for IntPolynomial {
    fn constant_term(&self) -> f64 {
        IntPolynomial::constant_term(self)
    }
    fn shifted(&self, c: f64) -> Self {
        self.add_poly(&IntPolynomial::constant(c))
    }
    fn negated(&self) -> Self {
        self.scale(-1.0)
    }
    fn integral(&self) -> std::result::Result<(), f64> {
        match self.terms().find(|(_, c)| (c - c.round()).abs() > INT_TOL) {
            Some((_, c)) => Err(c),
            None => Ok(()),
        }
    }
    fn variables(&self) -> BTreeSet<VarId> {
        IntPolynomial::variables(self)
    }
    fn unit_sum_vars(&self) -> Option<Vec<VarId>> {
        // Integer variables other than binaries are not unit sums in the binary
        // sense; `binarize` re-derives the structure on the encoded constraint.
        let mut vars = Vec::new();
        for (ps, c) in self.terms() {
            match ps {
                [] => {}
                [(v, 1)] if c == 1.0 => vars.push(*v),
                _ => return None,
            }
        }
        Some(vars)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    /// `Σ vars (relation) rhs` with unit coefficients and `rhs >= 0`.
    UnitSum(Vec<VarId>),
    General,
}

/// How a canonical constraint was written by the user.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Origin {
    pub relation: Relation,
    /// Right-hand side after moving the user's lhs constant across.
    pub rhs: i64,
    pub structure: Structure,
    /// Set on the `c - lhs <= 0` half of a split equality.
    pub mirror: bool,
}

/// `lhs <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<P = Polynomial> {
    pub lhs: P,
    pub origin: Origin,
}

impl<P: ConstraintPoly> Constraint<P> {
    /// The user-facing left-hand side, i.e. the polynomial compared against
    /// `origin.rhs`.
    pub fn user_lhs(&self) -> P {
        let flip = matches!(self.origin.relation, Relation::Ge) || self.origin.mirror;
        let body = if flip { self.lhs.negated() } else { self.lhs.clone() };
        body.shifted(self.origin.rhs as f64)
    }

    /// Rebuilds the constraint around a new user-facing lhs with the same
    /// relation, right-hand side and mirror flag.
    fn rebuild<Q: ConstraintPoly>(&self, user_lhs: Q) -> Constraint<Q> {
        let [mut c] = canonical_parts(self.origin.relation, &user_lhs, self.origin.rhs)
            .into_iter()
            .filter(|c| c.origin.mirror == self.origin.mirror)
            .collect::<Vec<_>>()
            .try_into()
            .unwrap_or_else(|_| unreachable!("one canonical part per mirror flag"));
        c.origin.mirror = self.origin.mirror;
        c
    }
}

fn canonical_parts<P: ConstraintPoly>(relation: Relation, lhs: &P, rhs: i64) -> Vec<Constraint<P>> {
    let c0 = lhs.constant_term();
    let c = rhs - c0.round() as i64;
    let structure = match lhs.unit_sum_vars() {
        Some(vars) if c >= 0 && !vars.is_empty() => Structure::UnitSum(vars),
        _ => Structure::General,
    };
    let body = lhs.shifted(-c0);
    let le = body.shifted(-(c as f64));
    let ge = body.negated().shifted(c as f64);
    let origin = |mirror| Origin {
        relation,
        rhs: c,
        structure: structure.clone(),
        mirror,
    };
    match relation {
        Relation::Le => vec![Constraint { lhs: le, origin: origin(false) }],
        Relation::Ge => vec![Constraint { lhs: ge, origin: origin(false) }],
        Relation::Eq => vec![
            Constraint { lhs: le, origin: origin(false) },
            Constraint { lhs: ge, origin: origin(true) },
        ],
    }
}

/// Turns `lhs (relation) rhs` into one (`<=`, `>=`) or two (`=`) canonical
/// `<= 0` constraints. Coefficients must be integers.
pub fn canonicalize<P: ConstraintPoly>(
    relation: Relation,
    lhs: &P,
    rhs: i64,
) -> Result<Vec<Constraint<P>>> {
    lhs.integral().map_err(Error::NonIntegerCoefficient)?;
    Ok(canonical_parts(relation, lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntVar {
    pub id: VarId,
    /// Inclusive upper bound; the lower bound is always 0.
    pub upper: Option<u64>,
}

impl IntVar {
    pub fn bounded(id: VarId, upper: u64) -> Self {
        IntVar { id, upper: Some(upper) }
    }

    pub fn binary(id: VarId) -> Self {
        Self::bounded(id, 1)
    }
}

/// Minimization problem over non-negative integer variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem<P = IntPolynomial> {
    pub vars: Vec<IntVar>,
    pub objective: P,
    pub constraints: Vec<Constraint<P>>,
}

impl<P: ConstraintPoly> Problem<P> {
    pub fn new(vars: Vec<IntVar>, objective: P) -> Result<Self> {
        let problem = Problem {
            vars,
            objective,
            constraints: Vec::new(),
        };
        problem.check_declared(&problem.objective.variables())?;
        Ok(problem)
    }

    fn check_declared(&self, used: &BTreeSet<VarId>) -> Result<()> {
        let declared: BTreeSet<VarId> = self.vars.iter().map(|v| v.id).collect();
        match used.iter().find(|v| !declared.contains(v)) {
            Some(&v) => Err(Error::UndeclaredVariable(v)),
            None => Ok(()),
        }
    }

    pub fn add_constraint(&mut self, relation: Relation, lhs: P, rhs: i64) -> Result<()> {
        self.check_declared(&lhs.variables())?;
        let parts = canonicalize(relation, &lhs, rhs)?;
        self.constraints.extend(parts);
        Ok(())
    }

    pub fn with_constraint(mut self, relation: Relation, lhs: P, rhs: i64) -> Result<Self> {
        self.add_constraint(relation, lhs, rhs)?;
        Ok(self)
    }
}

impl Problem<IntPolynomial> {
    /// Checks every constraint at an integer point.
    pub fn is_feasible(&self, values: &[u64]) -> Result<bool> {
        for c in &self.constraints {
            if c.lhs.evaluate(values)? > INT_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Problem<Polynomial> {
    pub fn num_bits(&self) -> usize {
        self.vars.iter().map(|v| v.id.index() + 1).max().unwrap_or(0)
    }

    pub fn is_feasible(&self, bits: &[bool]) -> Result<bool> {
        for c in &self.constraints {
            if c.lhs.evaluate(bits)? > INT_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodecEntry {
    pub var: VarId,
    pub upper: u64,
    /// Bit variables, least significant first; bit `j` weighs `2^j`.
    pub bits: Vec<VarId>,
}

/// Maps integer variables to their binary expansions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BinCodec {
    pub entries: Vec<CodecEntry>,
}

/// `⌊log2 upper⌋ + 1`, and 0 bits for a variable fixed at 0.
pub fn bit_count(upper: u64) -> usize {
    (u64::BITS - upper.leading_zeros()) as usize
}

impl BinCodec {
    pub fn num_bits(&self) -> usize {
        self.entries.iter().map(|e| e.bits.len()).sum()
    }

    /// Bit assignment (indexed by new `VarId`) for integer values given in
    /// declaration order.
    pub fn encode(&self, values: &[u64]) -> Result<Vec<bool>> {
        if values.len() != self.entries.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {} variables",
                values.len(),
                self.entries.len()
            )));
        }
        let mut out = vec![false; self.num_bits()];
        for (e, &x) in self.entries.iter().zip(values) {
            if x > e.upper {
                return Err(Error::ShapeMismatch(format!(
                    "value {x} above bound {} of {}",
                    e.upper, e.var
                )));
            }
            for (j, b) in e.bits.iter().enumerate() {
                out[b.index()] = (x >> j) & 1 == 1;
            }
        }
        Ok(out)
    }

    /// Integer values in declaration order. Overshoot patterns decode to
    /// values above the declared bound.
    pub fn decode(&self, bits: &[bool]) -> Vec<u64> {
        self.entries
            .iter()
            .map(|e| {
                e.bits
                    .iter()
                    .enumerate()
                    .map(|(j, b)| u64::from(bits[b.index()]) << j)
                    .sum()
            })
            .collect()
    }

    /// Decoded values laid out by original `VarId`, for evaluating the
    /// integer problem.
    pub fn decode_by_id(&self, bits: &[bool]) -> Vec<u64> {
        let span = self.entries.iter().map(|e| e.var.index() + 1).max().unwrap_or(0);
        let mut out = vec![0; span];
        for (e, x) in self.entries.iter().zip(self.decode(bits)) {
            out[e.var.index()] = x;
        }
        out
    }
}

fn binarize_poly(p: &IntPolynomial, enc: &BTreeMap<VarId, Polynomial>) -> Polynomial {
    p.terms()
        .map(|(powers, c)| {
            let mut term = Polynomial::constant(c);
            for &(v, e) in powers {
                let x = &enc[&v];
                for _ in 0..e {
                    term = term.multiply(x);
                }
            }
            term
        })
        .sum()
}

/// Replaces every integer variable by its binary expansion. New bit ids are
/// dense, in declaration order, least-significant bit first.
pub fn binarize(problem: &Problem<IntPolynomial>) -> Result<(Problem<Polynomial>, BinCodec)> {
    let mut next = 0u32;
    let mut codec = BinCodec::default();
    let mut enc = BTreeMap::new();
    let mut vars = Vec::new();
    for iv in &problem.vars {
        let upper = iv.upper.ok_or(Error::MissingUpperBound(iv.id))?;
        let bits: Vec<VarId> = (0..bit_count(upper))
            .map(|_| {
                let b = VarId(next);
                next += 1;
                b
            })
            .collect();
        let expansion = Polynomial::linear(
            bits.iter().enumerate().map(|(j, &b)| (b, (1u64 << j) as f64)),
            0.0,
        );
        vars.extend(bits.iter().map(|&b| IntVar::binary(b)));
        enc.insert(iv.id, expansion);
        codec.entries.push(CodecEntry {
            var: iv.id,
            upper,
            bits,
        });
    }
    let objective = binarize_poly(&problem.objective, &enc);
    let constraints = problem
        .constraints
        .iter()
        .map(|c| c.rebuild(binarize_poly(&c.user_lhs(), &enc)))
        .collect();
    Ok((
        Problem {
            vars,
            objective,
            constraints,
        },
        codec,
    ))
}
