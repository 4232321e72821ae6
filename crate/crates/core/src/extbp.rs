//! Extended bin packing: trains (bins) with a cost, customer groups (items)
//! with a per-train benefit, and a per-train capacity of `cmax` groups.
//!
//! Decision bits are laid out as `x_0..x_{n-1}` (train used) followed by one
//! `y` bit per eligible (train, group) pair, train-major with groups in
//! ascending order. Slack bits of the QUBO encoding come after those: the
//! `s_j` of every non-trivial group constraint, then `r_i` bits per train,
//! least significant first.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{canonicalize, Relation};
use crate::pbf::{Polynomial, VarId};
use crate::reformulate::{eq_penalty, lambda_default, le_penalty, slack_penalty};

const VALUE_TOL: f64 = 1e-9;

/// Largest `n + q` accepted by [`brute_force`].
pub const BRUTE_FORCE_CAP: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Train {
    pub cost: f64,
    pub benefit: f64,
    /// Groups that accept this train.
    pub groups: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EbpInstance {
    pub name: String,
    pub cmax: u64,
    pub num_groups: usize,
    pub trains: Vec<Train>,
}

impl EbpInstance {
    /// Validates the instance and sorts each train's group list.
    pub fn new(name: impl Into<String>, cmax: u64, num_groups: usize, trains: Vec<Train>) -> Result<Self> {
        let mut inst = EbpInstance {
            name: name.into(),
            cmax,
            num_groups,
            trains,
        };
        inst.normalize()?;
        Ok(inst)
    }

    /// Validation for instances that came in through deserialization.
    pub fn normalize(&mut self) -> Result<()> {
        if self.cmax < 1 {
            return Err(Error::InvalidInstance("cmax must be at least 1".into()));
        }
        for (i, t) in self.trains.iter_mut().enumerate() {
            if !(t.cost >= 0.0 && t.benefit >= 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "train {i}: cost and benefit must be non-negative"
                )));
            }
            if let Some(&g) = t.groups.iter().find(|&&g| g >= self.num_groups) {
                return Err(Error::InvalidInstance(format!(
                    "train {i}: group {g} out of range (num_groups = {})",
                    self.num_groups
                )));
            }
            t.groups.sort_unstable();
            if t.groups.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInstance(format!("train {i}: repeated group")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut inst: EbpInstance = serde_json::from_str(text)?;
        inst.normalize()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The three small instances used in the experiments: unit costs and
    /// benefits, `cmax = 2`.
    pub fn builtin(name: &str) -> Result<Self> {
        let groups: &[&[usize]] = match name.to_ascii_uppercase().as_str() {
            "A" => &[&[0], &[1], &[0, 1]],
            "B" => &[&[0, 1], &[2, 3], &[0, 3]],
            // group 0 sits where the two large trains overlap
            "C" => &[&[0, 3, 4], &[0, 1, 2], &[3, 4]],
            _ => return Err(Error::UnknownInstance(name.to_string())),
        };
        let m = groups.iter().flat_map(|g| g.iter()).max().map_or(0, |g| g + 1);
        let trains = groups
            .iter()
            .map(|g| Train {
                cost: 1.0,
                benefit: 1.0,
                groups: g.to_vec(),
            })
            .collect();
        Self::new(name.to_ascii_uppercase(), 2, m, trains)
    }

    pub fn num_trains(&self) -> usize {
        self.trains.len()
    }

    /// Eligible (train, group) pairs in `y` order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.trains
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.groups.iter().map(move |&j| (i, j)))
            .collect()
    }

    /// `q`, the number of `y` variables.
    pub fn num_pairs(&self) -> usize {
        self.trains.iter().map(|t| t.groups.len()).sum()
    }

    pub fn num_decision_vars(&self) -> usize {
        self.num_trains() + self.num_pairs()
    }

    /// Pair indices of each train.
    pub fn pairs_of_train(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_trains()];
        for (p, (i, _)) in self.pairs().into_iter().enumerate() {
            out[i].push(p);
        }
        out
    }

    /// Pair indices of each group (the trains it accepts).
    pub fn pairs_of_group(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_groups];
        for (p, (_, j)) in self.pairs().into_iter().enumerate() {
            out[j].push(p);
        }
        out
    }

    pub fn x_var(&self, i: usize) -> VarId {
        VarId(i as u32)
    }

    pub fn y_var(&self, pair: usize) -> VarId {
        VarId((self.num_trains() + pair) as u32)
    }

    /// `Σ c_i x_i − Σ p_i y_ij` as a polynomial over the decision bits.
    pub fn objective(&self) -> Polynomial {
        let xs = self
            .trains
            .iter()
            .enumerate()
            .map(|(i, t)| (self.x_var(i), t.cost));
        let ys = self
            .pairs()
            .into_iter()
            .enumerate()
            .map(|(p, (i, _))| (self.y_var(p), -self.trains[i].benefit));
        Polynomial::linear(xs.chain(ys), 0.0)
    }
}

/// Values of the decision bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EbpAssignment {
    pub x: Vec<bool>,
    /// One entry per eligible pair, in [`EbpInstance::pairs`] order.
    pub y: Vec<bool>,
}

impl EbpAssignment {
    pub fn empty(inst: &EbpInstance) -> Self {
        EbpAssignment {
            x: vec![false; inst.num_trains()],
            y: vec![false; inst.num_pairs()],
        }
    }

    /// Reads the first `n + q` entries of a bit vector (further entries, such
    /// as slack bits, are ignored).
    pub fn from_bits(inst: &EbpInstance, bits: &[bool]) -> Result<Self> {
        let n = inst.num_trains();
        let nq = inst.num_decision_vars();
        if bits.len() < nq {
            return Err(Error::ShapeMismatch(format!("{} bits for {nq} decision variables", bits.len())));
        }
        Ok(EbpAssignment {
            x: bits[..n].to_vec(),
            y: bits[n..nq].to_vec(),
        })
    }

    /// Decision bits of basis state `z` (bit `k` = variable `k`).
    pub fn from_index(inst: &EbpInstance, z: u64) -> Self {
        let n = inst.num_trains();
        let q = inst.num_pairs();
        EbpAssignment {
            x: (0..n).map(|k| (z >> k) & 1 == 1).collect(),
            y: (n..n + q).map(|k| (z >> k) & 1 == 1).collect(),
        }
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    fn check_shape(&self, inst: &EbpInstance) -> Result<()> {
        if self.x.len() != inst.num_trains() || self.y.len() != inst.num_pairs() {
            return Err(Error::ShapeMismatch(format!(
                "assignment has {}+{} bits, instance needs {}+{}",
                self.x.len(),
                self.y.len(),
                inst.num_trains(),
                inst.num_pairs()
            )));
        }
        Ok(())
    }
}

pub fn objective_value(inst: &EbpInstance, a: &EbpAssignment) -> Result<f64> {
    a.check_shape(inst)?;
    let cost: f64 = inst
        .trains
        .iter()
        .zip(&a.x)
        .filter(|(_, &x)| x)
        .map(|(t, _)| t.cost)
        .sum();
    let benefit: f64 = inst
        .pairs()
        .into_iter()
        .zip(&a.y)
        .filter(|(_, &y)| y)
        .map(|((i, _), _)| inst.trains[i].benefit)
        .sum();
    Ok(cost - benefit)
}

/// Every group boards at most one train, and a train carries at most `cmax`
/// groups and none unless it is used.
pub fn is_feasible(inst: &EbpInstance, a: &EbpAssignment) -> Result<bool> {
    a.check_shape(inst)?;
    let by_group = inst.pairs_of_group();
    let uni = by_group
        .iter()
        .all(|ps| ps.iter().filter(|&&p| a.y[p]).count() <= 1);
    let capa = inst.pairs_of_train().iter().enumerate().all(|(i, ps)| {
        let load = ps.iter().filter(|&&p| a.y[p]).count() as u64;
        load <= if a.x[i] { inst.cmax } else { 0 }
    });
    Ok(uni && capa)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Optimal,
    FeasibleNonOptimal,
    Infeasible,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Optimal => "optimal",
            Classification::FeasibleNonOptimal => "feasible_non_optimal",
            Classification::Infeasible => "infeasible",
        })
    }
}

impl FromStr for Classification {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(Classification::Optimal),
            "feasible_non_optimal" => Ok(Classification::FeasibleNonOptimal),
            "infeasible" => Ok(Classification::Infeasible),
            other => Err(Error::InvalidConfig(format!("unknown classification `{other}`"))),
        }
    }
}

pub fn classify(inst: &EbpInstance, a: &EbpAssignment, optimum: f64) -> Result<Classification> {
    if !is_feasible(inst, a)? {
        return Ok(Classification::Infeasible);
    }
    if (objective_value(inst, a)? - optimum).abs() <= VALUE_TOL {
        Ok(Classification::Optimal)
    } else {
        Ok(Classification::FeasibleNonOptimal)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForce {
    pub optimum: f64,
    /// All optimal assignments, in increasing basis-index order.
    pub optima: Vec<EbpAssignment>,
}

/// Exhaustive search over all `2^(n+q)` decision patterns.
pub fn brute_force(inst: &EbpInstance) -> Result<BruteForce> {
    let n = inst.num_trains();
    let nq = inst.num_decision_vars();
    if nq > BRUTE_FORCE_CAP {
        return Err(Error::SizeCap {
            what: "brute force (n + q)",
            size: nq,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mask_of = |ps: &Vec<usize>| ps.iter().fold(0u64, |m, &p| m | 1 << (n + p));
    let group_masks: Vec<u64> = inst.pairs_of_group().iter().map(mask_of).collect();
    let train_masks: Vec<u64> = inst.pairs_of_train().iter().map(mask_of).collect();
    let objective = inst.objective();
    let feasible = |z: u64| {
        group_masks.iter().all(|m| (z & m).count_ones() <= 1)
            && train_masks.iter().enumerate().all(|(i, m)| {
                let cap = if (z >> i) & 1 == 1 { inst.cmax } else { 0 };
                u64::from((z & m).count_ones()) <= cap
            })
    };

    const CHUNK: u64 = 1 << 14;
    let total = 1u64 << nq;
    let chunks: Vec<(f64, Vec<u64>)> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut best = f64::INFINITY;
            let mut arg = Vec::new();
            for z in c * CHUNK..((c + 1) * CHUNK).min(total) {
                if !feasible(z) {
                    continue;
                }
                let val = objective.evaluate_bits(z);
                if val < best - VALUE_TOL {
                    best = val;
                    arg.clear();
                }
                if (val - best).abs() <= VALUE_TOL {
                    arg.push(z);
                }
            }
            (best, arg)
        })
        .collect();
    let optimum = chunks.iter().map(|(b, _)| *b).fold(f64::INFINITY, f64::min);
    let optima = chunks
        .into_iter()
        .filter(|(b, _)| (b - optimum).abs() <= VALUE_TOL)
        .flat_map(|(_, arg)| arg)
        .map(|z| EbpAssignment::from_index(inst, z))
        .collect();
    Ok(BruteForce { optimum, optima })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Pubo,
    Qubo,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::Pubo => "pubo",
            Formulation::Qubo => "qubo",
        })
    }
}

impl FromStr for Formulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pubo" => Ok(Formulation::Pubo),
            "qubo" => Ok(Formulation::Qubo),
            other => Err(Error::InvalidConfig(format!("unknown formulation `{other}`"))),
        }
    }
}

/// An unconstrained encoding of an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Encoding {
    pub formulation: Formulation,
    pub poly: Polynomial,
    /// Name of each variable, indexed by `VarId`.
    pub var_names: Vec<String>,
    pub qubit_count: usize,
    /// `n + q`; bits past this are slack.
    pub num_decision_vars: usize,
    pub lambda_uni: f64,
    pub lambda_capa: f64,
}

impl Encoding {
    pub fn project(&self, inst: &EbpInstance, bits: &[bool]) -> Result<EbpAssignment> {
        EbpAssignment::from_bits(inst, bits)
    }
}

fn decision_names(inst: &EbpInstance) -> Vec<String> {
    (0..inst.num_trains())
        .map(|i| format!("x_{i}"))
        .chain(inst.pairs().into_iter().map(|(i, j)| format!("y_{i}_{j}")))
        .collect()
}

fn check_lambdas(lambda_uni: f64, lambda_capa: f64) -> Result<()> {
    for l in [lambda_uni, lambda_capa] {
        if !(l > 0.0) {
            return Err(Error::NonPositiveLambda(l));
        }
    }
    Ok(())
}

/// Both penalty weights set to [`lambda_default`] of the objective.
pub fn default_lambda(inst: &EbpInstance) -> f64 {
    lambda_default(&inst.objective())
}

/// `penUni_j`: at most one train per group, binary-valued.
pub fn uni_penalty(inst: &EbpInstance, group: usize) -> Result<Polynomial> {
    let vars: Vec<VarId> = inst.pairs_of_group()[group].iter().map(|&p| inst.y_var(p)).collect();
    Ok(le_penalty(&vars, 1)?.poly)
}

/// `penCapa_i = (1 − x_i)·[no group boards] + x_i·[at most cmax board]`.
pub fn capa_penalty(inst: &EbpInstance, train: usize) -> Result<Polynomial> {
    let vars: Vec<VarId> = inst.pairs_of_train()[train].iter().map(|&p| inst.y_var(p)).collect();
    let x = Polynomial::var(inst.x_var(train));
    let not_x = &Polynomial::constant(1.0) - &x;
    let empty = eq_penalty(&vars, 0)?.poly;
    let within = le_penalty(&vars, inst.cmax)?.poly;
    Ok(&not_x * &empty + &x * &within)
}

/// Objective plus binary-valued penalties; no auxiliary variables.
pub fn to_pubo(inst: &EbpInstance, lambda_uni: f64, lambda_capa: f64) -> Result<Encoding> {
    check_lambdas(lambda_uni, lambda_capa)?;
    let mut poly = inst.objective();
    for j in 0..inst.num_groups {
        poly = &poly + &uni_penalty(inst, j)?.scale(lambda_uni);
    }
    for i in 0..inst.num_trains() {
        poly = &poly + &capa_penalty(inst, i)?.scale(lambda_capa);
    }
    let names = decision_names(inst);
    Ok(Encoding {
        formulation: Formulation::Pubo,
        poly,
        qubit_count: names.len(),
        num_decision_vars: names.len(),
        var_names: names,
        lambda_uni,
        lambda_capa,
    })
}

/// Objective plus squared-slack penalties. Group constraints with a single
/// eligible train can never be violated and get no term or slack bit.
pub fn to_qubo(inst: &EbpInstance, lambda_uni: f64, lambda_capa: f64) -> Result<Encoding> {
    check_lambdas(lambda_uni, lambda_capa)?;
    let mut names = decision_names(inst);
    let mut next = names.len() as u32;
    let mut poly = inst.objective();

    for (j, ps) in inst.pairs_of_group().iter().enumerate() {
        let lhs = Polynomial::sum_of(ps.iter().map(|&p| inst.y_var(p)));
        let c = canonicalize(Relation::Le, &lhs, 1)?.remove(0);
        let t = slack_penalty(&c, VarId(next))?;
        if t.poly.is_zero() {
            continue;
        }
        debug_assert_eq!(t.slack_vars.len(), 1);
        names.push(format!("s_{j}"));
        next += t.slack_vars.len() as u32;
        poly = &poly + &t.poly.scale(lambda_uni);
    }
    for (i, ps) in inst.pairs_of_train().iter().enumerate() {
        let lhs = Polynomial::linear(
            ps.iter()
                .map(|&p| (inst.y_var(p), 1.0))
                .chain(std::iter::once((inst.x_var(i), -(inst.cmax as f64)))),
            0.0,
        );
        let c = canonicalize(Relation::Le, &lhs, 0)?.remove(0);
        let t = slack_penalty(&c, VarId(next))?;
        if t.poly.is_zero() {
            continue;
        }
        names.extend((0..t.slack_vars.len()).map(|k| format!("r_{i}_{k}")));
        next += t.slack_vars.len() as u32;
        poly = &poly + &t.poly.scale(lambda_capa);
    }
    Ok(Encoding {
        formulation: Formulation::Qubo,
        poly,
        qubit_count: names.len(),
        num_decision_vars: inst.num_decision_vars(),
        var_names: names,
        lambda_uni,
        lambda_capa,
    })
}

pub fn encode(inst: &EbpInstance, formulation: Formulation, lambda_uni: f64, lambda_capa: f64) -> Result<Encoding> {
    match formulation {
        Formulation::Pubo => to_pubo(inst, lambda_uni, lambda_capa),
        Formulation::Qubo => to_qubo(inst, lambda_uni, lambda_capa),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assignment(inst: &EbpInstance, x: &[usize], boardings: &[(usize, usize)]) -> EbpAssignment {
        let mut a = EbpAssignment::empty(inst);
        for &i in x {
            a.x[i] = true;
        }
        let pairs = inst.pairs();
        for b in boardings {
            let p = pairs.iter().position(|q| q == b).expect("eligible pair");
            a.y[p] = true;
        }
        a
    }

    #[test]
    fn builtin_shapes() {
        let a = EbpInstance::builtin("A").unwrap();
        assert_eq!((a.num_trains(), a.num_groups, a.num_pairs()), (3, 2, 4));
        let b = EbpInstance::builtin("b").unwrap();
        assert_eq!((b.num_groups, b.num_pairs()), (4, 6));
        let c = EbpInstance::builtin("C").unwrap();
        assert_eq!((c.num_groups, c.num_pairs()), (5, 8));
        assert!(matches!(EbpInstance::builtin("D"), Err(Error::UnknownInstance(_))));
    }

    #[test]
    fn objective_values() {
        let a = EbpInstance::builtin("A").unwrap();
        let best = assignment(&a, &[2], &[(2, 0), (2, 1)]);
        assert_eq!(objective_value(&a, &best).unwrap(), -1.0);
        assert_eq!(objective_value(&a, &EbpAssignment::empty(&a)).unwrap(), 0.0);
        let b = EbpInstance::builtin("B").unwrap();
        let two = assignment(&b, &[0, 1], &[(0, 0), (0, 1), (1, 2), (1, 3)]);
        assert_eq!(objective_value(&b, &two).unwrap(), -2.0);
    }

    #[test]
    fn feasibility_rules() {
        let a = EbpInstance::builtin("A").unwrap();
        let twice = assignment(&a, &[0, 2], &[(0, 0), (2, 0)]);
        assert!(!is_feasible(&a, &twice).unwrap());
        let closed = assignment(&a, &[], &[(2, 0)]);
        assert!(!is_feasible(&a, &closed).unwrap());
        assert_eq!(classify(&a, &closed, -1.0).unwrap(), Classification::Infeasible);

        let c = EbpInstance::builtin("C").unwrap();
        let opt = assignment(&c, &[0, 1], &[(0, 0), (0, 3), (1, 1), (1, 2)]);
        assert_eq!(classify(&c, &opt, -2.0).unwrap(), Classification::Optimal);
        let one = assignment(&c, &[1], &[(1, 1)]);
        assert_eq!(classify(&c, &one, -2.0).unwrap(), Classification::FeasibleNonOptimal);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = EbpInstance::builtin("A").unwrap();
        let bad = EbpAssignment { x: vec![true], y: vec![] };
        assert!(matches!(objective_value(&a, &bad), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn brute_force_builtins() {
        let a = brute_force(&EbpInstance::builtin("A").unwrap()).unwrap();
        assert_eq!((a.optimum, a.optima.len()), (-1.0, 1));
        let b = brute_force(&EbpInstance::builtin("B").unwrap()).unwrap();
        assert_eq!((b.optimum, b.optima.len()), (-2.0, 1));
        let c = brute_force(&EbpInstance::builtin("C").unwrap()).unwrap();
        assert_eq!((c.optimum, c.optima.len()), (-2.0, 11));
        let mut train_sets: Vec<Vec<bool>> = c.optima.iter().map(|o| o.x.clone()).collect();
        train_sets.sort();
        train_sets.dedup();
        assert_eq!(train_sets.len(), 3);
    }

    #[test]
    fn pubo_penalty_shapes() {
        let a = EbpInstance::builtin("A").unwrap();
        // group 0 is accepted by trains 0 and 2: y_0_0 (v3) and y_2_0 (v5)
        assert_eq!(uni_penalty(&a, 0).unwrap(), Polynomial::monomial(vec![VarId(3), VarId(5)], 1.0));
        // train 2 carries groups 0, 1 (v5, v6); cmax = 2 makes the x = 1 branch vanish
        let x = Polynomial::var(VarId(2));
        let or = Polynomial::from_terms([
            (vec![VarId(5)], 1.0),
            (vec![VarId(6)], 1.0),
            (vec![VarId(5), VarId(6)], -1.0),
        ]);
        let expected = &(&Polynomial::constant(1.0) - &x) * &or;
        assert_eq!(capa_penalty(&a, 2).unwrap(), expected);
    }

    #[test]
    fn qubit_counts() {
        let expected = [("A", 7, 15), ("B", 9, 17), ("C", 11, 20)];
        for (name, pubo, qubo) in expected {
            let inst = EbpInstance::builtin(name).unwrap();
            let l = default_lambda(&inst);
            let p = to_pubo(&inst, l, l).unwrap();
            let q = to_qubo(&inst, l, l).unwrap();
            assert_eq!(p.qubit_count, pubo, "{name}");
            assert_eq!(q.qubit_count, qubo, "{name}");
            assert_eq!(p.poly.var_span(), pubo);
            assert_eq!(q.poly.var_span(), qubo);
            assert!(q.poly.degree() <= 2);
            let bits = (inst.cmax as f64).log2().floor() as usize + 1;
            let multi = inst.pairs_of_group().iter().filter(|g| g.len() >= 2).count();
            assert_eq!(qubo, inst.num_decision_vars() + multi + inst.num_trains() * bits);
        }
    }

    #[test]
    fn qubo_names_follow_layout() {
        let a = EbpInstance::builtin("A").unwrap();
        let q = to_qubo(&a, 8.0, 8.0).unwrap();
        assert_eq!(
            q.var_names,
            [
                "x_0", "x_1", "x_2", "y_0_0", "y_1_1", "y_2_0", "y_2_1", "s_0", "s_1", "r_0_0",
                "r_0_1", "r_1_0", "r_1_1", "r_2_0", "r_2_1"
            ]
        );
    }

    #[test]
    fn uni_square_contributes_lambda() {
        let a = EbpInstance::builtin("A").unwrap();
        let q = to_qubo(&a, 8.0, 1000.0).unwrap();
        // both boardings of group 0 set (y_0_0, y_2_0), s_0 = 0; capa kept at zero by
        // opening trains 0 and 2 and choosing r so each capa square vanishes
        let mut bits = vec![false; q.qubit_count];
        for name in ["x_0", "x_2", "y_0_0", "y_2_0", "s_1", "r_0_0", "r_2_0"] {
            bits[q.var_names.iter().position(|n| n == name).unwrap()] = true;
        }
        let obj = 2.0 - 2.0;
        assert_eq!(q.poly.evaluate(&bits).unwrap(), obj + 8.0);
    }

    #[test]
    fn rejects_bad_lambda_and_instances() {
        let a = EbpInstance::builtin("A").unwrap();
        assert!(to_pubo(&a, 0.0, 1.0).is_err());
        let err = EbpInstance::new("bad", 2, 2, vec![Train { cost: 1.0, benefit: 1.0, groups: vec![2] }]);
        assert!(matches!(err, Err(Error::InvalidInstance(_))));
        let json = r#"{"name":"t","cmax":1,"num_groups":1,"trains":[{"cost":1,"benefit":2,"groups":[0]}]}"#;
        let inst = EbpInstance::from_json(json).unwrap();
        assert_eq!(inst.trains[0].benefit, 2.0);
    }
}
