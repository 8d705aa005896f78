// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Refocusing plans: which qubits to flip, and the compensation detunings.
//!
//! Conjugating an interaction term by X on a subset S of qubits follows from
//! `X n̂ X = 1 − n̂`:
//!
//! - exactly one endpoint in S: `K n̂_i n̂_j → −K n̂_i n̂_j + K n̂_(unflipped)`
//! - both endpoints in S:       `K n̂_i n̂_j → +K n̂_i n̂_j − K n̂_i − K n̂_j + K`
//! - neither: unchanged.
//!
//! So a drift sandwiched by X layers on S flips the sign of exactly the
//! boundary edges of S, at the price of stray linear `n̂` terms. Those are
//! cancelled exactly by per-qubit detunings δ* applied during the flipped
//! half (detuning also conjugates: δ → −δ on flipped qubits). Constants only
//! contribute a global phase.

use ndarray::Array2;

use crate::register::{coupling_matrix, RegisterSpec};
use crate::{Error, Result};

/// Flip set and compensation detunings for one refocused drift.
#[derive(Debug, Clone, PartialEq)]
pub struct RefocusPlan {
    /// `flips[k]` — X gates surround the second half-pulse on qubit k.
    pub flips: Vec<bool>,
    /// Compensation detunings applied during the second half-pulse (rad/µs).
    pub delta_star: Vec<f64>,
    /// Half-pulse duration `t/2 = π/(2J)` in µs.
    pub half_duration: f64,
    /// The NN edges whose interaction survives both halves.
    pub keep_edges: Vec<(usize, usize)>,
}

fn normalize_edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// The interaction Hamiltonian conjugated by `X` on the flip set, in
/// coefficient form: `(signed pair couplings, linear n̂ coefficients,
/// constant)`. This is the bookkeeping side of the refocusing oracle; tests
/// compare it entrywise against direct matrix conjugation.
pub fn conjugated_interaction(
    spec: &RegisterSpec,
    flips: &[bool],
) -> Result<(Array2<f64>, Vec<f64>, f64)> {
    let n = spec.n_qubits;
    if flips.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "flip set of length {} for {} qubits",
            flips.len(),
            n
        )));
    }
    let k = coupling_matrix(spec)?;
    let mut signed = Array2::zeros((n, n));
    let mut linear = vec![0.0f64; n];
    let mut constant = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let kij = k[(i, j)];
            if kij == 0.0 {
                continue;
            }
            match (flips[i], flips[j]) {
                (false, false) => {
                    signed[(i, j)] = kij;
                    signed[(j, i)] = kij;
                }
                (true, true) => {
                    signed[(i, j)] = kij;
                    signed[(j, i)] = kij;
                    linear[i] -= kij;
                    linear[j] -= kij;
                    constant += kij;
                }
                (true, false) => {
                    signed[(i, j)] = -kij;
                    signed[(j, i)] = -kij;
                    linear[j] += kij;
                }
                (false, true) => {
                    signed[(i, j)] = -kij;
                    signed[(j, i)] = -kij;
                    linear[i] += kij;
                }
            }
        }
    }
    Ok((signed, linear, constant))
}

/// Find a flip set realizing exactly the target CZ edges on the register's
/// NN graph, and the detunings cancelling the conjugation's linear terms.
///
/// Edges to keep must have both or neither endpoint flipped; edges to remove
/// exactly one. On an open chain any target works. On a periodic chain the
/// flip-set parity around the loop forces `|target| ≡ N (mod 2)`: even
/// chains admit only even layers, odd chains only odd layers.
pub fn plan_refocus(
    target_edges: &[(usize, usize)],
    spec: &RegisterSpec,
) -> Result<RefocusPlan> {
    let n = spec.n_qubits;
    let nn: Vec<(usize, usize)> = spec.nn_edges().iter().map(|&(a, b)| normalize_edge(a, b)).collect();
    let mut keep: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in target_edges {
        let e = normalize_edge(a, b);
        if !nn.contains(&e) {
            return Err(Error::InvalidCircuit(format!(
                "edge ({},{}) is not a nearest-neighbour edge of the register",
                a, b
            )));
        }
        if !keep.contains(&e) {
            keep.push(e);
        }
    }

    let remove_contains = |e: (usize, usize)| !keep.contains(&normalize_edge(e.0, e.1));

    // Propagate flips along the path: crossing a removed edge toggles.
    let mut flips = vec![false; n];
    for i in 0..n - 1 {
        flips[i + 1] = flips[i] ^ remove_contains((i, i + 1));
    }
    if nn.contains(&normalize_edge(n - 1, 0)) {
        let consistent = (flips[n - 1] ^ flips[0]) == remove_contains((n - 1, 0));
        if !consistent {
            // Flipping the seed complements the whole set, so the loop
            // constraint can never be repaired: the layer parity is wrong.
            let parity = if n % 2 == 0 { "even" } else { "odd" };
            return Err(Error::UnrealizableLayer { n_qubits: n, parity });
        }
    }

    // Prefer the smaller flip set; both S and its complement work.
    let count = flips.iter().filter(|&&f| f).count();
    if count * 2 > n {
        for f in flips.iter_mut() {
            *f = !*f;
        }
    }

    let (_, linear, _) = conjugated_interaction(spec, &flips)?;
    // A detuning δ_k contributes +δ_k n̂_k before conjugation; flipped qubits
    // see the sign reversed. Solve for cancellation of `linear`.
    let delta_star: Vec<f64> = linear
        .iter()
        .zip(flips.iter())
        .map(|(&c, &flipped)| if flipped { c } else { -c })
        .collect();

    let half_duration = std::f64::consts::PI / (2.0 * spec.nn_coupling());
    Ok(RefocusPlan { flips, delta_star, half_duration, keep_edges: keep })
}
