// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra used by the propagator and metrics.
//!
//! Everything here operates on `ndarray` arrays of [`Complex64`]. The only
//! nontrivial routine is [`hermitian_eigen`], a cyclic Jacobi eigensolver for
//! Hermitian matrices. It is deliberately dependency-free: the propagator
//! uses it as the reference path for matrix exponentials, so it has to be an
//! implementation we can test in isolation (see the unit tests below and the
//! series-expansion oracle in the propagator tests).

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub const I1: Complex64 = Complex64::new(0.0, 1.0);

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

/// Identity matrix of dimension `n`.
pub fn eye(n: usize) -> CMat {
    Array2::from_diag(&Array1::from_elem(n, Complex64::new(1.0, 0.0)))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise absolute difference.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Deviation from Hermiticity, `max_ij |A_ij - conj(A_ji)|`.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with `A = V diag(λ) V†` and the
/// eigenvalues in ascending order. Accuracy is close to machine precision
/// for the moderate dimensions (≤ 4096) this crate works at.
pub fn hermitian_eigen(a: &CMat) -> (Array1<f64>, CMat) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut m = a.clone();
    let mut v = eye(n);

    // Off-diagonal Frobenius norm squared, the quantity each sweep drives down.
    let off2 = |m: &CMat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s
    };

    let scale: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let tol = (scale * 1e-15).powi(2) * (n as f64);
    let max_sweeps = 40;

    for _ in 0..max_sweeps {
        if off2(&m) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= scale * 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Unitary 2x2 rotation [[c, -s*e^{i a}], [s*e^{-i a}, c]]
                // chosen to annihilate the (p,q) entry.
                let alpha = apq.arg();
                let abs_apq = apq.norm();
                let theta = 0.5 * (2.0 * abs_apq).atan2(app - aqq);
                let c = theta.cos();
                let s = theta.sin();
                let phase = Complex64::from_polar(1.0, alpha);

                // Columns p and q of M (acting from the right by R).
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c + miq * s * phase.conj();
                    m[(i, q)] = -mip * s * phase + miq * c;
                }
                // Rows p and q (acting from the left by R†).
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c + mqj * s * phase;
                    m[(q, j)] = -mpj * s * phase.conj() + mqj * c;
                }
                // Accumulate eigenvectors: V <- V R.
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * s * phase.conj();
                    v[(i, q)] = -vip * s * phase + viq * c;
                }
            }
        }
    }

    let mut eigs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    eigs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let lambda = Array1::from_iter(eigs.iter().map(|e| e.0));
    let mut vs = Array2::zeros((n, n));
    for (new_col, &(_, old_col)) in eigs.iter().enumerate() {
        for i in 0..n {
            vs[(i, new_col)] = v[(i, old_col)];
        }
    }
    (lambda, vs)
}

/// `f(A)` for Hermitian `A`, applying `f` to the eigenvalues.
pub fn hermitian_func(a: &CMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let (lambda, v) = hermitian_eigen(a);
    func_from_eigen(&lambda, &v, f)
}

/// `f(A)` from a precomputed eigendecomposition.
pub fn func_from_eigen(lambda: &Array1<f64>, v: &CMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let n = lambda.len();
    let mut scaled = v.clone();
    for j in 0..n {
        let fj = f(lambda[j]);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    scaled.dot(&dagger(v))
}
