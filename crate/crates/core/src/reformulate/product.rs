use std::collections::BTreeMap;

use super::{PenaltyKind, PenaltyTerm};
use crate::error::{Error, Result};
use crate::model::{ConstraintPoly, Constraint};
use crate::pbf::{Polynomial, VarId};

/// Default cap on `UB`; the product has `UB + 1` factors.
pub const PRODUCT_UB_CAP: u64 = 20;

/// Largest `Σ |coefficients|` for which every partial sum during evaluation
/// is an exactly representable integer.
const EXACT_LIMIT: i128 = 1 << 53;

type IntTerms = BTreeMap<Vec<VarId>, i128>;

fn merge(a: &[VarId], b: &[VarId]) -> Vec<VarId> {
    let mut v: Vec<VarId> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn overflow() -> Error {
    Error::InexactPenalty { magnitude: f64::INFINITY }
}

/// Exact multilinear product in integer arithmetic.
fn multiply_exact(p: &IntTerms, q: &IntTerms) -> Result<IntTerms> {
    let mut out = IntTerms::new();
    for (a, &x) in p {
        for (b, &y) in q {
            let t = x.checked_mul(y).ok_or_else(overflow)?;
            let slot = out.entry(merge(a, b)).or_insert(0);
            *slot = slot.checked_add(t).ok_or_else(overflow)?;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// `Σ |coefficients|` of the canonical lhs, constant included. Bounds `|lhs|`
/// over the hypercube.
pub fn lhs_magnitude_bound(lhs: &Polynomial) -> u64 {
    lhs.terms().map(|(_, c)| c.abs()).sum::<f64>().round() as u64
}

/// `Π_{j=0}^{UB} (lhs + j)` for a constraint `lhs <= 0` with integer
/// coefficients over binary variables.
///
/// Any satisfied point has `lhs ∈ [-UB, 0]`, so one factor vanishes; a
/// violated point has `lhs >= 1` and every factor is at least 1.
///
/// The expansion is computed exactly; it is rejected when its coefficients
/// are too large for double-precision evaluation to stay exact, since the
/// zeros on satisfying points come from cancellation.
pub fn product_penalty(c: &Constraint, cap: u64) -> Result<PenaltyTerm> {
    c.lhs.integral().map_err(Error::NonIntegerCoefficient)?;
    let ub = lhs_magnitude_bound(&c.lhs);
    if ub > cap {
        return Err(Error::BoundTooLarge { bound: ub, cap });
    }
    let lhs: IntTerms = c.lhs.terms().map(|(v, x)| (v.to_vec(), x.round() as i128)).collect();
    let mut acc = IntTerms::from([(Vec::new(), 1)]);
    for j in 0..=ub as i128 {
        let mut factor = lhs.clone();
        *factor.entry(Vec::new()).or_insert(0) += j;
        factor.retain(|_, c| *c != 0);
        acc = multiply_exact(&acc, &factor)?;
    }
    let total = acc.values().try_fold(0i128, |s, c| s.checked_add(c.abs())).ok_or_else(overflow)?;
    if total > EXACT_LIMIT {
        return Err(Error::InexactPenalty { magnitude: total as f64 });
    }
    let poly = Polynomial::from_terms(acc.into_iter().map(|(v, c)| (v, c as f64)));
    Ok(PenaltyTerm::new(poly, PenaltyKind::ProductForm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonicalize, Relation};
    use crate::pbf::VarId;

    fn le(lhs: Polynomial) -> Constraint {
        canonicalize(Relation::Le, &lhs, 0).unwrap().remove(0)
    }

    #[test]
    fn pair_at_most_one() {
        let c = le(Polynomial::linear([(VarId(0), 1.0), (VarId(1), 1.0)], -1.0));
        assert_eq!(lhs_magnitude_bound(&c.lhs), 3);
        let p = product_penalty(&c, PRODUCT_UB_CAP).unwrap().poly;
        // z = x0 + 2 x1
        let values: Vec<f64> = (0..4).map(|z| p.evaluate_bits(z)).collect();
        assert_eq!(values, vec![0.0, 0.0, 0.0, 24.0]);
    }

    #[test]
    fn single_variable_collapses() {
        let c = le(Polynomial::var(VarId(0)));
        let p = product_penalty(&c, PRODUCT_UB_CAP).unwrap().poly;
        assert_eq!(p, Polynomial::linear([(VarId(0), 2.0)], 0.0));
    }

    #[test]
    fn always_satisfied_is_zero() {
        let c = le(-&Polynomial::var(VarId(0)));
        let p = product_penalty(&c, PRODUCT_UB_CAP).unwrap().poly;
        assert!(p.is_zero());
    }

    #[test]
    fn cap_guards_degree() {
        let lhs = Polynomial::linear((0..5).map(|i| (VarId(i), 5.0)), 0.0);
        let c = le(lhs);
        assert!(matches!(
            product_penalty(&c, PRODUCT_UB_CAP),
            Err(Error::BoundTooLarge { bound: 25, cap: 20 })
        ));
    }

    #[test]
    fn rejects_inexact_expansion() {
        // UB = 19 on twelve variables: coefficients far beyond 2^53
        let w = [-2.0, 2.0, 1.0, -2.0, 1.0, 2.0, -1.0, 1.0, 2.0, 1.0, 2.0, 0.0];
        let lhs = Polynomial::linear(w.iter().enumerate().map(|(i, &c)| (VarId(i as u32), c)), -2.0);
        assert!(matches!(
            product_penalty(&le(lhs), PRODUCT_UB_CAP),
            Err(Error::InexactPenalty { .. })
        ));
    }

    #[test]
    fn rejects_fractional_lhs() {
        let c = Constraint {
            lhs: Polynomial::linear([(VarId(0), 0.5)], 0.0),
            origin: le(Polynomial::var(VarId(0))).origin,
        };
        assert!(matches!(
            product_penalty(&c, PRODUCT_UB_CAP),
            Err(Error::NonIntegerCoefficient(_))
        ));
    }
}
