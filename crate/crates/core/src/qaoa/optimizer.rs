//! Derivative-free minimization with linear models on a simplex, in the
//! manner of COBYLA without constraints.
//!
//! The simplex has `n + 1` vertices; the best one is the pivot. Each iteration
//! either repairs the simplex geometry or takes a trust-region step of length
//! `ρ` against the gradient of the interpolating linear model. `ρ` halves
//! after a poor step on a well-shaped simplex and the search ends once a step
//! at `ρ_end` fails.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub rho_begin: f64,
    pub rho_end: f64,
    pub max_evals: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            rho_begin: 0.5,
            rho_end: 1e-3,
            max_evals: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub params: Vec<f64>,
    pub loss: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeResult {
    pub x: Vec<f64>,
    pub f: f64,
    /// Every evaluation, in order.
    pub trace: Vec<TracePoint>,
    /// The evaluation budget ran out before `ρ_end` was reached.
    pub hit_cap: bool,
}

impl OptimizeResult {
    pub fn evals(&self) -> usize {
        self.trace.len()
    }
}

const PARSIG: f64 = 0.25;
const PARETA: f64 = 2.1;
const GAMMA: f64 = 0.5;
const EDGE: f64 = 1.1;

struct Budget<F> {
    f: F,
    max: usize,
    trace: Vec<TracePoint>,
}

impl<F: FnMut(&[f64]) -> f64> Budget<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.trace.len() >= self.max {
            return None;
        }
        let mut v = (self.f)(x);
        if v.is_nan() {
            v = f64::INFINITY;
        }
        self.trace.push(TracePoint {
            params: x.to_vec(),
            loss: v,
        });
        Some(v)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn add(a: &[f64], d: &DVector<f64>) -> Vec<f64> {
    a.iter().zip(d.iter()).map(|(x, y)| x + y).collect()
}

struct Simplex {
    pts: Vec<Vec<f64>>,
    vals: Vec<f64>,
    best: usize,
}

impl Simplex {
    fn others(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.pts.len()).filter(move |&j| j != self.best)
    }

    /// Edge matrix (rows `v_j − pivot`) and value differences, non-pivot
    /// vertices in index order.
    fn edges(&self) -> (DMatrix<f64>, DVector<f64>) {
        let n = self.pts.len() - 1;
        let pivot = &self.pts[self.best];
        let mut d = DMatrix::zeros(n, n);
        let mut df = DVector::zeros(n);
        for (r, j) in self.others().enumerate() {
            for c in 0..n {
                d[(r, c)] = self.pts[j][c] - pivot[c];
            }
            df[r] = self.vals[j] - self.vals[self.best];
        }
        (d, df)
    }

    fn rebuild<F: FnMut(&[f64]) -> f64>(&mut self, rho: f64, budget: &mut Budget<F>) -> bool {
        let base = self.pts[self.best].clone();
        let fb = self.vals[self.best];
        let n = base.len();
        self.pts = vec![base.clone()];
        self.vals = vec![fb];
        self.best = 0;
        for k in 0..n {
            let mut x = base.clone();
            x[k] += rho;
            let Some(v) = budget.eval(&x) else {
                return false;
            };
            self.pts.push(x);
            self.vals.push(v);
            if v < self.vals[self.best] {
                self.best = self.pts.len() - 1;
            }
        }
        true
    }
}

/// Minimizes `f` from `x0`. The evaluation count never exceeds
/// `config.max_evals`; the best evaluated point is returned.
pub fn minimize<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], config: &OptimizerConfig) -> OptimizeResult {
    let mut budget = Budget {
        f,
        max: config.max_evals,
        trace: Vec::new(),
    };
    let n = x0.len();
    let rho_end = config.rho_end.min(config.rho_begin);
    let mut rho = config.rho_begin;
    let mut hit_cap = true;

    let Some(f0) = budget.eval(x0) else {
        return OptimizeResult {
            x: x0.to_vec(),
            f: f64::INFINITY,
            trace: budget.trace,
            hit_cap: true,
        };
    };
    let mut sx = Simplex {
        pts: vec![x0.to_vec()],
        vals: vec![f0],
        best: 0,
    };

    if n == 0 {
        hit_cap = false;
    } else if sx.rebuild(rho, &mut budget) {
        loop {
            let (d, df) = sx.edges();
            let Some(dinv) = d.clone().try_inverse() else {
                if !sx.rebuild(rho, &mut budget) {
                    break;
                }
                continue;
            };
            let g = dinv.clone() * df;
            let pivot = sx.pts[sx.best].clone();
            let others: Vec<usize> = sx.others().collect();

            // Geometry: long edges or a vertex too close to its opposite face.
            let veta: Vec<f64> = others.iter().map(|&j| dist(&sx.pts[j], &pivot)).collect();
            let vsig: Vec<f64> = (0..n).map(|r| dinv.column(r).norm().recip()).collect();
            let far = (0..n).max_by(|&a, &b| veta[a].total_cmp(&veta[b])).unwrap();
            let flat = (0..n).min_by(|&a, &b| vsig[a].total_cmp(&vsig[b])).unwrap();
            let bad = if veta[far] > PARETA * rho {
                Some(far)
            } else if vsig[flat] < PARSIG * rho {
                Some(flat)
            } else {
                None
            };
            if let Some(r) = bad {
                let col = dinv.column(r);
                let mut step: DVector<f64> = col * (GAMMA * rho / col.norm());
                if g.dot(&step) > 0.0 {
                    step = -step;
                }
                let x = add(&pivot, &step);
                let Some(v) = budget.eval(&x) else { break };
                let j = others[r];
                sx.pts[j] = x;
                sx.vals[j] = v;
                if v < sx.vals[sx.best] {
                    sx.best = j;
                }
                continue;
            }

            // Trust-region step.
            let gnorm = g.norm();
            let mut ratio = 0.0;
            if gnorm > 0.0 && gnorm.is_finite() {
                let step: DVector<f64> = &g * (-rho / gnorm);
                let x = add(&pivot, &step);
                let Some(v) = budget.eval(&x) else { break };
                let fb = sx.vals[sx.best];
                ratio = (fb - v) / (rho * gnorm);
                let improved = v < fb;

                // Barycentric weights of the new point: σ = D^{-T} step.
                let sigma = dinv.transpose() * &step;
                let center = if improved { &x } else { &pivot };
                let score = |r: usize| {
                    let w = dist(&sx.pts[others[r]], center) / (EDGE * rho);
                    sigma[r].abs() * w.max(1.0)
                };
                let mut drop = (0..n).max_by(|&a, &b| score(a).total_cmp(&score(b))).map(|r| (others[r], score(r)));
                if improved {
                    let s0 = (1.0 - sigma.sum()).abs();
                    if drop.is_none_or(|(_, s)| s0 > s) {
                        drop = Some((sx.best, s0));
                    }
                }
                if let Some((j, s)) = drop {
                    if s > 0.0 {
                        sx.pts[j] = x;
                        sx.vals[j] = v;
                        if improved {
                            sx.best = j;
                        }
                    }
                }
            }
            if ratio <= 0.1 {
                if rho <= rho_end {
                    hit_cap = false;
                    break;
                }
                rho *= 0.5;
                if rho <= 1.5 * rho_end {
                    rho = rho_end;
                }
            }
        }
    }

    let (x, f) = budget
        .trace
        .iter()
        .fold(None::<&TracePoint>, |acc, t| match acc {
            Some(b) if b.loss <= t.loss => Some(b),
            _ => Some(t),
        })
        .map(|t| (t.params.clone(), t.loss))
        .expect("at least one evaluation");
    OptimizeResult {
        x,
        f,
        trace: budget.trace,
        hit_cap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_quadratic() {
        let r = minimize(|x| (x[0] - 1.0).powi(2), &[0.0], &OptimizerConfig::default());
        assert!((r.x[0] - 1.0).abs() <= 1e-2, "{:?}", r.x);
        assert!(!r.hit_cap);
    }

    #[test]
    fn two_dimensional_quadratic() {
        let f = |x: &[f64]| (x[0] - 0.3).powi(2) + 3.0 * (x[1] + 1.2).powi(2) + 0.5 * x[0] * x[1];
        let r = minimize(f, &[2.0, 2.0], &OptimizerConfig::default());
        // gradient zero: [2 0.5; 0.5 6] (x, y) = (0.6, -7.2)
        let det = 2.0 * 6.0 - 0.25;
        let xs = (0.6 * 6.0 - 0.5 * -7.2) / det;
        let ys = (2.0 * -7.2 - 0.5 * 0.6) / det;
        assert!((r.x[0] - xs).abs() < 2e-2 && (r.x[1] - ys).abs() < 2e-2, "{:?} vs {xs},{ys}", r.x);
    }

    #[test]
    fn constant_loss_stays_put() {
        let cfg = OptimizerConfig::default();
        let r = minimize(|_| 4.0, &[1.0, -1.0], &cfg);
        assert!(r.evals() <= cfg.max_evals);
        assert!(!r.hit_cap);
        assert_eq!(r.x, vec![1.0, -1.0]);
    }

    #[test]
    fn respects_budget() {
        let cfg = OptimizerConfig {
            max_evals: 7,
            ..OptimizerConfig::default()
        };
        let mut calls = 0;
        let r = minimize(
            |x| {
                calls += 1;
                x.iter().map(|v| (v * 3.0).sin()).sum()
            },
            &[0.1, 0.2, 0.3],
            &cfg,
        );
        assert_eq!(calls, 7);
        assert_eq!(r.evals(), 7);
        assert!(r.hit_cap);
    }

    #[test]
    fn trace_records_every_point() {
        let r = minimize(|x| x[0].abs() + x[1].abs(), &[1.0, 1.0], &OptimizerConfig::default());
        assert_eq!(r.trace[0].params, vec![1.0, 1.0]);
        let best = r.trace.iter().map(|t| t.loss).fold(f64::INFINITY, f64::min);
        assert_eq!(r.f, best);
        assert!(r.f < 0.05);
    }
}
