//! Penalty functions and assembly of unconstrained objectives.
//!
//! A penalty `π` for a constraint is 0 on satisfying points and at least 1 on
//! violating ones. Adding `λ·π` with `λ > f_max − f_min` to the objective keeps
//! the optimum and ranks every feasible point below every infeasible one.

mod product;
mod quadratize;
mod slack;
mod symmetric;

pub use product::{lhs_magnitude_bound, product_penalty, PRODUCT_UB_CAP};
pub use quadratize::{pen_lin, reduce_degree, reduce_to_quadratic, Substitution, SubstitutionMap};
pub use slack::{slack_penalty, slack_square};
pub use symmetric::{elementary_symmetric, eq_penalty, ge_penalty, le_penalty, MAX_SYMMETRIC_VARS};

use crate::error::{Error, Result};
use crate::model::{Constraint, Problem, Relation, Structure};
use crate::pbf::{Polynomial, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PenaltyKind {
    /// Takes only the values 0 and 1.
    BinaryValued,
    ProductForm,
    /// `(lhs + s)^2`; zero for some slack value iff the constraint holds.
    SlackQuadratic,
    LinearizationGadget,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PenaltyTerm {
    pub poly: Polynomial,
    pub kind: PenaltyKind,
    pub slack_vars: Vec<VarId>,
    pub lambda: f64,
}

impl PenaltyTerm {
    pub fn new(poly: Polynomial, kind: PenaltyKind) -> Self {
        PenaltyTerm {
            poly,
            kind,
            slack_vars: Vec::new(),
            lambda: 1.0,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }
}

/// `(f_max − f_min) + 1` using interval bounds of the objective.
pub fn lambda_default(objective: &Polynomial) -> f64 {
    let (lo, hi) = objective.interval_bounds();
    hi - lo + 1.0
}

/// `objective + Σ λ_k·π_k`.
pub fn compose_unconstrained(objective: &Polynomial, penalties: &[PenaltyTerm]) -> Result<Polynomial> {
    if let Some(t) = penalties.iter().find(|t| !(t.lambda > 0.0)) {
        return Err(Error::NonPositiveLambda(t.lambda));
    }
    Ok(std::iter::once(objective.clone())
        .chain(penalties.iter().map(|t| t.poly.scale(t.lambda)))
        .sum())
}

/// Binary-valued penalty for a unit-sum constraint, product penalty for
/// anything else. `None` when the constraint can never bind (`Σ <= c` with
/// `c >= n`, `Σ >= 0`) or is the mirrored half of an equality already covered
/// by the primary half.
pub fn pubo_penalty(c: &Constraint) -> Result<Option<PenaltyTerm>> {
    let origin = &c.origin;
    match (&origin.structure, origin.relation) {
        (Structure::UnitSum(_), Relation::Eq) if origin.mirror => Ok(None),
        (Structure::UnitSum(vars), relation) => {
            let k = origin.rhs as u64;
            let term = match relation {
                Relation::Le => le_penalty(vars, k)?,
                Relation::Ge if k == 0 => return Ok(None),
                Relation::Ge => ge_penalty(vars, k)?,
                Relation::Eq => eq_penalty(vars, k)?,
            };
            Ok((!term.poly.is_zero()).then_some(term))
        }
        (Structure::General, _) => {
            let term = product_penalty(c, PRODUCT_UB_CAP)?;
            Ok((!term.poly.is_zero()).then_some(term))
        }
    }
}

/// Result of turning a binary problem into an unconstrained one.
#[derive(Clone, Debug, PartialEq)]
pub struct Reformulation {
    pub poly: Polynomial,
    pub penalties: Vec<PenaltyTerm>,
    /// Number of decision bits; auxiliary variables come after them.
    pub num_decision_vars: usize,
    pub num_vars: usize,
    pub substitutions: Option<SubstitutionMap>,
}

impl Reformulation {
    pub fn aux_vars(&self) -> usize {
        self.num_vars - self.num_decision_vars
    }
}

fn check_lambda(lambda: f64) -> Result<f64> {
    if lambda > 0.0 {
        Ok(lambda)
    } else {
        Err(Error::NonPositiveLambda(lambda))
    }
}

/// PUBO via binary-valued or product penalties, all weighted by `lambda`
/// (default [`lambda_default`] of the objective).
pub fn to_pubo(problem: &Problem<Polynomial>, lambda: Option<f64>) -> Result<Reformulation> {
    let lambda = check_lambda(lambda.unwrap_or_else(|| lambda_default(&problem.objective)))?;
    let mut penalties = Vec::new();
    for c in &problem.constraints {
        if let Some(t) = pubo_penalty(c)? {
            penalties.push(t.with_lambda(lambda));
        }
    }
    let poly = compose_unconstrained(&problem.objective, &penalties)?;
    let n = problem.num_bits();
    Ok(Reformulation {
        poly,
        penalties,
        num_decision_vars: n,
        num_vars: n,
        substitutions: None,
    })
}

/// QUBO by quadratizing the PUBO. The gadget weight defaults to one more than
/// the sum of absolute non-constant coefficients of the PUBO, which is enough
/// to keep its minimum.
pub fn to_qubo_quadratized(
    problem: &Problem<Polynomial>,
    lambda: Option<f64>,
    gadget_lambda: Option<f64>,
) -> Result<Reformulation> {
    let pubo = to_pubo(problem, lambda)?;
    let (lo, hi) = pubo.poly.interval_bounds();
    let g = check_lambda(gadget_lambda.unwrap_or(hi - lo + 1.0))?;
    let (poly, map) = reduce_degree(&pubo.poly, g, VarId(pubo.num_vars as u32), 2);
    Ok(Reformulation {
        poly,
        num_vars: pubo.num_vars + map.records.len(),
        substitutions: Some(map),
        ..pubo
    })
}

/// QUBO with squared-slack penalties. Constraints must be linear in the bits.
/// An objective above degree 2 is quadratized afterwards.
pub fn to_qubo_slack(
    problem: &Problem<Polynomial>,
    lambda: Option<f64>,
    gadget_lambda: Option<f64>,
) -> Result<Reformulation> {
    let lambda = check_lambda(lambda.unwrap_or_else(|| lambda_default(&problem.objective)))?;
    let n = problem.num_bits();
    let mut next = n as u32;
    let mut penalties = Vec::new();
    for c in &problem.constraints {
        let t = slack_penalty(c, VarId(next))?;
        if t.poly.is_zero() {
            continue;
        }
        next += t.slack_vars.len() as u32;
        penalties.push(t.with_lambda(lambda));
    }
    let composed = compose_unconstrained(&problem.objective, &penalties)?;
    let (poly, substitutions) = if composed.degree() > 2 {
        let (lo, hi) = composed.interval_bounds();
        let g = check_lambda(gadget_lambda.unwrap_or(hi - lo + 1.0))?;
        let (q, map) = reduce_degree(&composed, g, VarId(next), 2);
        next += map.records.len() as u32;
        (q, Some(map))
    } else {
        (composed, None)
    };
    Ok(Reformulation {
        poly,
        penalties,
        num_decision_vars: n,
        num_vars: next as usize,
        substitutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{IntVar, Problem};

    fn v(i: u32) -> VarId {
        VarId(i)
    }

    #[test]
    fn compose_without_penalties_is_identity() {
        let f = Polynomial::linear([(v(0), 2.0)], 1.0);
        assert_eq!(compose_unconstrained(&f, &[]).unwrap(), f);
    }

    #[test]
    fn compose_rejects_non_positive_lambda() {
        let t = eq_penalty(&[v(0)], 1).unwrap().with_lambda(0.0);
        assert!(matches!(
            compose_unconstrained(&Polynomial::zero(), &[t]),
            Err(Error::NonPositiveLambda(_))
        ));
    }

    #[test]
    fn exactly_one_of_two() {
        let t = eq_penalty(&[v(0), v(1)], 1).unwrap();
        let p = compose_unconstrained(&Polynomial::zero(), &[t]).unwrap();
        let minimizers: Vec<u64> = (0..4).filter(|&z| p.evaluate_bits(z) == 0.0).collect();
        assert_eq!(minimizers, vec![0b01, 0b10]);
    }

    #[test]
    fn lambda_default_from_bounds() {
        // x0 + x1 - y0 - y1 - y2: range (-3, 2)
        let f = Polynomial::linear(
            [(v(0), 1.0), (v(1), 1.0), (v(2), -1.0), (v(3), -1.0), (v(4), -1.0)],
            0.0,
        );
        assert_eq!(lambda_default(&f), 6.0);
    }

    fn small_problem() -> Problem<Polynomial> {
        // min -x0 - x1 - 2 x2  s.t. x0 + x1 + x2 <= 1,  x0 + 2 x2 <= 2
        let vars = (0..3).map(|i| IntVar::binary(v(i))).collect();
        let f = Polynomial::linear([(v(0), -1.0), (v(1), -1.0), (v(2), -2.0)], 0.0);
        Problem::new(vars, f)
            .unwrap()
            .with_constraint(Relation::Le, Polynomial::sum_of([v(0), v(1), v(2)]), 1)
            .unwrap()
            .with_constraint(Relation::Le, Polynomial::linear([(v(0), 1.0), (v(2), 2.0)], 0.0), 2)
            .unwrap()
    }

    fn argmin_projected(r: &Reformulation) -> (f64, Vec<u64>) {
        let mask = (1u64 << r.num_decision_vars) - 1;
        let mut best = f64::INFINITY;
        let mut arg = Vec::new();
        for z in 0..1u64 << r.num_vars {
            let val = r.poly.evaluate_bits(z);
            if val < best - 1e-9 {
                best = val;
                arg.clear();
            }
            if (val - best).abs() <= 1e-9 {
                arg.push(z & mask);
            }
        }
        arg.sort_unstable();
        arg.dedup();
        (best, arg)
    }

    #[test]
    fn three_routes_agree() {
        let p = small_problem();
        let pubo = to_pubo(&p, None).unwrap();
        assert_eq!(pubo.penalties[0].kind, PenaltyKind::BinaryValued);
        assert_eq!(pubo.penalties[1].kind, PenaltyKind::ProductForm);
        let quad = to_qubo_quadratized(&p, None, None).unwrap();
        let slack = to_qubo_slack(&p, None, None).unwrap();
        assert!(quad.poly.degree() <= 2);
        assert!(slack.poly.degree() <= 2);
        for r in [&pubo, &quad, &slack] {
            assert_eq!(argmin_projected(r), (-2.0, vec![0b100]));
        }
    }

    #[test]
    fn mirrored_equality_penalized_once() {
        let vars = (0..2).map(|i| IntVar::binary(v(i))).collect();
        let p = Problem::new(vars, Polynomial::zero())
            .unwrap()
            .with_constraint(Relation::Eq, Polynomial::sum_of([v(0), v(1)]), 1)
            .unwrap();
        let r = to_pubo(&p, Some(1.0)).unwrap();
        assert_eq!(r.penalties.len(), 1);
        assert_eq!(r.poly, eq_penalty(&[v(0), v(1)], 1).unwrap().poly);
    }
}
