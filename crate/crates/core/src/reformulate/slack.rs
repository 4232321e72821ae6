use super::{PenaltyKind, PenaltyTerm};
use crate::error::{Error, Result};
use crate::model::{bit_count, Constraint};
use crate::pbf::{Polynomial, VarId};

/// `(lhs + s)^2` with `s` encoded on fresh bits `first_slack, first_slack+1, ...`
/// (least significant first). `lhs` must be linear with integer
/// coefficients and `min lhs <= 0`.
///
/// Slack range is `[0, -min lhs]`, rounded up to `2^bits - 1`. A value above
/// `-min lhs` still gives `lhs + s >= 1` on every point, so overshoot never
/// creates a spurious zero.
pub fn slack_square(lhs: &Polynomial, first_slack: VarId) -> Result<PenaltyTerm> {
    if lhs.degree() > 1 {
        return Err(Error::NonLinearConstraint(lhs.degree()));
    }
    if !lhs.is_integral(1e-9) {
        let bad = lhs
            .terms()
            .map(|(_, c)| c)
            .find(|c| (c - c.round()).abs() > 1e-9)
            .unwrap_or(f64::NAN);
        return Err(Error::NonIntegerCoefficient(bad));
    }
    // Exact for a linear multilinear polynomial.
    let (lo, _) = lhs.interval_bounds();
    if lo > 0.0 {
        return Err(Error::Unsatisfiable(format!("min of `{lhs}` is {lo} > 0")));
    }
    let range = (-lo).round() as u64;
    let slack_vars: Vec<VarId> = (0..bit_count(range) as u32)
        .map(|j| VarId(first_slack.0 + j))
        .collect();
    let slack = Polynomial::linear(
        slack_vars
            .iter()
            .enumerate()
            .map(|(j, &s)| (s, (1u64 << j) as f64)),
        0.0,
    );
    let shifted = lhs + &slack;
    let mut term = PenaltyTerm::new(shifted.multiply(&shifted), PenaltyKind::SlackQuadratic);
    term.slack_vars = slack_vars;
    Ok(term)
}

/// Squared-slack penalty for a linear constraint. Constraints that can never
/// be violated (`max lhs <= 0`) produce an empty term with no slack bits.
pub fn slack_penalty(c: &Constraint, first_slack: VarId) -> Result<PenaltyTerm> {
    if c.lhs.degree() <= 1 && c.lhs.interval_bounds().1 <= 0.0 {
        return Ok(PenaltyTerm::new(Polynomial::zero(), PenaltyKind::SlackQuadratic));
    }
    slack_square(&c.lhs, first_slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonicalize, Relation};

    fn v(i: u32) -> VarId {
        VarId(i)
    }

    fn min_over_slack(t: &PenaltyTerm, z: u64) -> f64 {
        let first = t.slack_vars.first().map_or(0, |s| s.0);
        (0..1u64 << t.slack_vars.len())
            .map(|s| t.poly.evaluate_bits(z | (s << first)))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn uni_pair_uses_one_slack_bit() {
        let c = canonicalize(Relation::Le, &Polynomial::sum_of([v(0), v(1)]), 1)
            .unwrap()
            .remove(0);
        let t = slack_penalty(&c, v(2)).unwrap();
        assert_eq!(t.slack_vars, vec![v(2)]);
        let expected = Polynomial::linear([(v(0), 1.0), (v(1), 1.0), (v(2), 1.0)], -1.0);
        assert_eq!(t.poly, expected.multiply(&expected));
        // both y set: every slack value leaves at least 1
        assert_eq!(t.poly.evaluate_bits(0b011), 1.0);
        assert_eq!(t.poly.evaluate_bits(0b111), 4.0);
        assert_eq!(min_over_slack(&t, 0b000), 0.0);
        assert_eq!(min_over_slack(&t, 0b001), 0.0);
        assert_eq!(min_over_slack(&t, 0b011), 1.0);
    }

    #[test]
    fn capacity_uses_two_slack_bits() {
        // y0 + y1 - 2x <= 0 with x = v0, y = v1, v2
        let lhs = Polynomial::linear([(v(1), 1.0), (v(2), 1.0), (v(0), -2.0)], 0.0);
        let c = canonicalize(Relation::Le, &lhs, 0).unwrap().remove(0);
        let t = slack_penalty(&c, v(3)).unwrap();
        assert_eq!(t.slack_vars, vec![v(3), v(4)]);
        let inner = Polynomial::linear(
            [(v(1), 1.0), (v(2), 1.0), (v(0), -2.0), (v(3), 1.0), (v(4), 2.0)],
            0.0,
        );
        assert_eq!(t.poly, inner.multiply(&inner));
        for z in 0..8u64 {
            let x = z & 1;
            let ys = ((z >> 1) & 1) + ((z >> 2) & 1);
            let satisfied = ys <= 2 * x;
            assert_eq!(min_over_slack(&t, z) == 0.0, satisfied, "z={z}");
        }
    }

    #[test]
    fn vacuous_constraint_is_elided() {
        let c = canonicalize(Relation::Le, &Polynomial::var(v(0)), 1)
            .unwrap()
            .remove(0);
        let t = slack_penalty(&c, v(1)).unwrap();
        assert!(t.poly.is_zero());
        assert!(t.slack_vars.is_empty());
        // Without elision: one slack bit, and the slack can always zero it.
        let full = slack_square(&c.lhs, v(1)).unwrap();
        assert_eq!(full.slack_vars.len(), 1);
        assert_eq!(min_over_slack(&full, 0), 0.0);
        assert_eq!(min_over_slack(&full, 1), 0.0);
    }

    #[test]
    fn rejects_unsatisfiable_and_nonlinear() {
        let c = canonicalize(Relation::Ge, &Polynomial::var(v(0)), 2)
            .unwrap()
            .remove(0);
        assert!(matches!(slack_penalty(&c, v(1)), Err(Error::Unsatisfiable(_))));
        let q = Polynomial::monomial(vec![v(0), v(1)], 1.0);
        let c = canonicalize(Relation::Le, &q, 0).unwrap().remove(0);
        assert!(matches!(slack_penalty(&c, v(2)), Err(Error::NonLinearConstraint(2))));
    }

    #[test]
    fn equality_needs_no_slack() {
        // x0 + x1 - 1 <= 0 and 1 - x0 - x1 <= 0; the second has min -1.
        let cs = canonicalize(Relation::Eq, &Polynomial::sum_of([v(0), v(1)]), 1).unwrap();
        let t = slack_penalty(&cs[1], v(2)).unwrap();
        assert_eq!(t.slack_vars.len(), 1);
    }
}
