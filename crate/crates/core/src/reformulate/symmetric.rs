//! Binary-valued penalties for `Σ x_i (= | <= | >=) c` over distinct binary
//! variables, written in the basis of elementary symmetric polynomials.

use super::{PenaltyKind, PenaltyTerm};
use crate::error::{Error, Result};
use crate::pbf::{Polynomial, VarId};

/// Largest variable count accepted by the closed forms; `e_{n/2}` alone has
/// `C(24, 12) ≈ 2.7M` terms at the cap.
pub const MAX_SYMMETRIC_VARS: usize = 24;

pub(crate) fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as f64
}

fn sign(exp: i64) -> f64 {
    if exp.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `[e_0, e_1, ..., e_n]` built one variable at a time via
/// `e_k <- e_k + v * e_{k-1}` (no subset enumeration).
pub fn elementary_symmetric(vars: &[VarId]) -> Vec<Polynomial> {
    let n = vars.len();
    let mut e = vec![Polynomial::zero(); n + 1];
    e[0] = Polynomial::constant(1.0);
    for (i, &v) in vars.iter().enumerate() {
        let x = Polynomial::var(v);
        for k in (1..=i + 1).rev() {
            e[k] = &e[k] + &e[k - 1].multiply(&x);
        }
    }
    e
}

fn check_vars(vars: &[VarId]) -> Result<()> {
    if vars.len() > MAX_SYMMETRIC_VARS {
        return Err(Error::SizeCap {
            what: "symmetric penalty",
            size: vars.len(),
            cap: MAX_SYMMETRIC_VARS,
        });
    }
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPenalty("repeated variable in sum".into()));
    }
    Ok(())
}

/// `Σ_{k in range} coef(k) · e_k`, plus `constant`.
fn combine(
    e: &[Polynomial],
    range: std::ops::RangeInclusive<usize>,
    constant: f64,
    coef: impl Fn(usize) -> f64,
) -> Polynomial {
    std::iter::once(Polynomial::constant(constant))
        .chain(range.map(|k| e[k].scale(coef(k))))
        .sum()
}

fn binary_valued(poly: Polynomial) -> PenaltyTerm {
    PenaltyTerm::new(poly, PenaltyKind::BinaryValued)
}

/// Penalty for `Σ vars = c`: 0 when the count of ones is `c`, 1 otherwise.
pub fn eq_penalty(vars: &[VarId], c: u64) -> Result<PenaltyTerm> {
    check_vars(vars)?;
    let n = vars.len() as u64;
    if c > n {
        return Err(Error::Unsatisfiable(format!("sum of {n} binaries = {c}")));
    }
    let e = elementary_symmetric(vars);
    let poly = if c == 0 {
        combine(&e, 1..=n as usize, 0.0, |k| sign(k as i64 + 1))
    } else {
        combine(&e, c as usize..=n as usize, 1.0, |k| {
            sign(k as i64 - c as i64 + 1) * binomial(k as u64, c)
        })
    };
    Ok(binary_valued(poly))
}

/// Penalty for `Σ vars <= c`. Identically zero once `c >= n`.
pub fn le_penalty(vars: &[VarId], c: u64) -> Result<PenaltyTerm> {
    check_vars(vars)?;
    let n = vars.len() as u64;
    if c >= n {
        return Ok(binary_valued(Polynomial::zero()));
    }
    let e = elementary_symmetric(vars);
    let poly = combine(&e, (c + 1) as usize..=n as usize, 0.0, |k| {
        sign(k as i64 - c as i64 + 1) * binomial(k as u64 - 1, c)
    });
    Ok(binary_valued(poly))
}

/// Penalty for `Σ vars >= c` with `1 <= c <= n`.
pub fn ge_penalty(vars: &[VarId], c: u64) -> Result<PenaltyTerm> {
    check_vars(vars)?;
    let n = vars.len() as u64;
    if c == 0 {
        return Err(Error::InvalidPenalty(
            "`>= 0` never binds; use the zero polynomial".into(),
        ));
    }
    if c > n {
        return Err(Error::Unsatisfiable(format!("sum of {n} binaries >= {c}")));
    }
    let e = elementary_symmetric(vars);
    let poly = combine(&e, c as usize..=n as usize, 1.0, |k| {
        sign(k as i64 - c as i64 + 1) * binomial(k as u64 - 1, c - 1)
    });
    Ok(binary_valued(poly))
}
