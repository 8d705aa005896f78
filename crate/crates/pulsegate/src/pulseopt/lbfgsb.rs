// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Minimal box-constrained limited-memory quasi-Newton minimizer.
//!
//! Projected L-BFGS: two-loop recursion for the search direction, gradient
//! projection onto the box, and a backtracking Armijo line search along the
//! projected arc. Gradients come from central finite differences. This is
//! all the pulse and VQE optimizers need; no external solver.

use std::collections::VecDeque;

/// Inclusive box bounds; use infinities for free coordinates.
#[derive(Debug, Clone)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn free(n: usize) -> Self {
        Self { lower: vec![f64::NEG_INFINITY; n], upper: vec![f64::INFINITY; n] }
    }

    pub fn project(&self, x: &mut [f64]) {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = xi.clamp(self.lower[i], self.upper[i]);
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop when the loss improves by less than this between iterates.
    pub loss_tol: f64,
    /// Stop when the projected gradient norm falls below this.
    pub grad_tol: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    /// L-BFGS memory.
    pub memory: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iters: 500, loss_tol: 1e-10, grad_tol: 1e-10, fd_step: 1e-6, memory: 10 }
    }
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub x: Vec<f64>,
    pub loss: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Minimize `f` over the box starting from `x0`.
pub fn minimize(
    f: &mut impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    bounds: &Bounds,
    cfg: &SolverConfig,
) -> SolverResult {
    let n = x0.len();
    let mut x = x0.to_vec();
    bounds.project(&mut x);
    let mut evaluations = 0usize;
    evaluations += 1;
    let mut fx = f(&x);
    let mut g = fd_gradient(f, &x, bounds, cfg.fd_step, &mut evaluations);

    // (s, y) pairs, newest at the back.
    let mut history: VecDeque<(Vec<f64>, Vec<f64>)> = VecDeque::new();
    let mut iterations = 0usize;

    for _ in 0..cfg.max_iters {
        iterations += 1;

        // Projected gradient convergence test.
        let pg_norm = projected_gradient_norm(&x, &g, bounds);
        if pg_norm < cfg.grad_tol {
            break;
        }

        let mut d = two_loop_direction(&g, &history);
        let descent: f64 = d.iter().zip(g.iter()).map(|(di, gi)| di * gi).sum();
        if !descent.is_finite() || descent >= 0.0 {
            history.clear();
            for (di, gi) in d.iter_mut().zip(g.iter()) {
                *di = -gi;
            }
        }

        // Backtracking along the projected arc; if the quasi-Newton
        // direction fails entirely, fall back to steepest descent once.
        let mut accepted = false;
        let mut x_new = x.clone();
        let mut f_new = fx;
        for attempt in 0..2 {
            let mut alpha = 1.0f64;
            for _ in 0..40 {
                for i in 0..n {
                    x_new[i] = x[i] + alpha * d[i];
                }
                bounds.project(&mut x_new);
                let step_sq: f64 =
                    x_new.iter().zip(x.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
                if step_sq == 0.0 {
                    break;
                }
                evaluations += 1;
                f_new = f(&x_new);
                let gdx: f64 = g
                    .iter()
                    .zip(x_new.iter().zip(x.iter()))
                    .map(|(gi, (a, b))| gi * (a - b))
                    .sum();
                if f_new <= fx + 1e-4 * gdx.min(0.0) && f_new < fx {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if accepted || attempt == 1 || history.is_empty() {
                break;
            }
            history.clear();
            for (di, gi) in d.iter_mut().zip(g.iter()) {
                *di = -gi;
            }
        }
        if !accepted {
            break;
        }

        let g_new = fd_gradient(f, &x_new, bounds, cfg.fd_step, &mut evaluations);
        let s: Vec<f64> = x_new.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        let s_norm: f64 = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        let y_norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if sy > 1e-12 * s_norm * y_norm {
            history.push_back((s, y));
            if history.len() > cfg.memory {
                history.pop_front();
            }
        }

        let improvement = fx - f_new;
        x = x_new.clone();
        fx = f_new;
        g = g_new;
        if improvement.abs() < cfg.loss_tol {
            break;
        }
    }

    SolverResult { x, loss: fx, iterations, evaluations }
}

fn fd_gradient(
    f: &mut impl FnMut(&[f64]) -> f64,
    x: &[f64],
    bounds: &Bounds,
    h: f64,
    evaluations: &mut usize,
) -> Vec<f64> {
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut xp = x.to_vec();
    for i in 0..n {
        // Central difference, shrinking one-sidedly at the box faces.
        let hi = (x[i] + h).min(bounds.upper[i]);
        let lo = (x[i] - h).max(bounds.lower[i]);
        if hi <= lo {
            g[i] = 0.0;
            continue;
        }
        xp[i] = hi;
        *evaluations += 1;
        let fp = f(&xp);
        xp[i] = lo;
        *evaluations += 1;
        let fm = f(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (hi - lo);
    }
    g
}

fn projected_gradient_norm(x: &[f64], g: &[f64], bounds: &Bounds) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        let step = (x[i] - g[i]).clamp(bounds.lower[i], bounds.upper[i]) - x[i];
        acc += step * step;
    }
    acc.sqrt()
}

fn two_loop_direction(g: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let mut alphas: Vec<f64> = Vec::with_capacity(history.len());
    let mut rhos: Vec<f64> = Vec::with_capacity(history.len());
    for (s, y) in history.iter().rev() {
        let sy: f64 = s.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        let rho = 1.0 / sy;
        let alpha = rho * s.iter().zip(q.iter()).map(|(a, b)| a * b).sum::<f64>();
        for (qi, yi) in q.iter_mut().zip(y.iter()) {
            *qi -= alpha * yi;
        }
        alphas.push(alpha);
        rhos.push(rho);
    }
    // Initial Hessian scaling from the newest pair.
    if let Some((s, y)) = history.back() {
        let sy: f64 = s.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        let yy: f64 = y.iter().map(|v| v * v).sum();
        if yy > 0.0 {
            let gamma = sy / yy;
            for qi in q.iter_mut() {
                *qi *= gamma;
            }
        }
    }
    for (k, (s, y)) in history.iter().enumerate() {
        let rho = rhos[history.len() - 1 - k];
        let alpha = alphas[history.len() - 1 - k];
        let beta = rho * y.iter().zip(q.iter()).map(|(a, b)| a * b).sum::<f64>();
        for (qi, si) in q.iter_mut().zip(s.iter()) {
            *qi += (alpha - beta) * si;
        }
    }
    for qi in q.iter_mut() {
        *qi = -*qi;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let mut f = |x: &[f64]| {
            (x[0] - 1.5).powi(2) + 4.0 * (x[1] + 0.5).powi(2) + 0.5 * (x[0] + x[1]).powi(2)
        };
        let bounds = Bounds::free(2);
        let res = minimize(&mut f, &[3.0, 3.0], &bounds, &SolverConfig::default());
        // Positive-definite quadratic: compare against the closed-form
        // stationary point of the gradient system.
        let g0 = 2.0 * (res.x[0] - 1.5) + (res.x[0] + res.x[1]);
        let g1 = 8.0 * (res.x[1] + 0.5) + (res.x[0] + res.x[1]);
        assert!(g0.abs() < 1e-6 && g1.abs() < 1e-6, "gradient ({g0:.2e}, {g1:.2e})");
    }

    #[test]
    fn respects_box_constraints() {
        // Unconstrained minimum at (2, 2); box caps at 1.
        let mut f = |x: &[f64]| (x[0] - 2.0).powi(2) + (x[1] - 2.0).powi(2);
        let bounds = Bounds { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0] };
        let res = minimize(&mut f, &[0.2, 0.9], &bounds, &SolverConfig::default());
        assert!((res.x[0] - 1.0).abs() < 1e-8);
        assert!((res.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock_2d() {
        let mut f =
            |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let bounds = Bounds::free(2);
        let cfg = SolverConfig { max_iters: 2000, ..Default::default() };
        let res = minimize(&mut f, &[-1.2, 1.0], &bounds, &cfg);
        assert!(res.loss < 1e-7, "loss {}", res.loss);
        assert!((res.x[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn minimum_on_interior_of_box() {
        let mut f = |x: &[f64]| (x[0] - 0.3).powi(2);
        let bounds = Bounds { lower: vec![0.0], upper: vec![1.0] };
        let res = minimize(&mut f, &[0.9], &bounds, &SolverConfig::default());
        assert!((res.x[0] - 0.3).abs() < 1e-7);
    }
}
