// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Brick-pattern SWAP networks on a linear chain.
//!
//! Layer ℓ swaps the adjacent pairs starting at ℓ mod 2. After `n` layers
//! the qubit order is exactly reversed and every label pair has been
//! adjacent exactly once — which is what lets a payload gate between any
//! two labels run at the layer where they meet.

use super::circuit::{CircuitIR, GateLayer};
use crate::{Error, Result};

/// The site pairs of brick layer `layer` on `n` sites.
pub fn brick_layer_pairs(n: usize, layer: usize) -> Vec<(usize, usize)> {
    let start = layer % 2;
    (start..n.saturating_sub(1)).step_by(2).map(|k| (k, k + 1)).collect()
}

/// All `n` layers of the full reversal network.
pub fn network_layers(n: usize) -> Vec<Vec<(usize, usize)>> {
    (0..n).map(|l| brick_layer_pairs(n, l)).collect()
}

/// Total number of adjacent-pair gates in the full network: n(n−1)/2.
pub fn network_gate_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Track which label sits on which site after each layer.
/// Returns the final site→label permutation.
pub fn network_permutation(n: usize) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).collect();
    for layer in network_layers(n) {
        for (a, b) in layer {
            labels.swap(a, b);
        }
    }
    labels
}

/// SWAP network as a circuit.
pub fn swap_network_circuit(n: usize) -> Result<CircuitIR> {
    if n < 2 {
        return Err(Error::InvalidCircuit("network needs at least 2 qubits".into()));
    }
    let mut layers = Vec::new();
    for pairs in network_layers(n) {
        for (a, b) in pairs {
            layers.push(GateLayer::Swap(a, b));
        }
    }
    Ok(CircuitIR::new(layers))
}

/// Givens-SWAP network with one fresh parameter per gate, in network order.
pub fn givens_swap_network_circuit(n: usize, thetas: &[f64]) -> Result<CircuitIR> {
    if n < 2 {
        return Err(Error::InvalidCircuit("network needs at least 2 qubits".into()));
    }
    if thetas.len() != network_gate_count(n) {
        return Err(Error::InvalidCircuit(format!(
            "network on {n} qubits needs {} parameters, got {}",
            network_gate_count(n),
            thetas.len()
        )));
    }
    let mut layers = Vec::new();
    let mut k = 0;
    for pairs in network_layers(n) {
        for (a, b) in pairs {
            layers.push(GateLayer::GivensSwap(a, b, thetas[k]));
            k += 1;
        }
    }
    Ok(CircuitIR::new(layers))
}

/// The site pair and layer index at which two labels become adjacent.
pub fn meeting_point(n: usize, label_a: usize, label_b: usize) -> Option<(usize, (usize, usize))> {
    let mut labels: Vec<usize> = (0..n).collect();
    for (l, layer) in network_layers(n).iter().enumerate() {
        // Check adjacency before applying the layer's swaps as well.
        for site in 0..n - 1 {
            let pair = (labels[site], labels[site + 1]);
            if (pair.0 == label_a && pair.1 == label_b)
                || (pair.0 == label_b && pair.1 == label_a)
            {
                return Some((l, (site, site + 1)));
            }
        }
        for &(a, b) in layer {
            labels.swap(a, b);
        }
    }
    None
}
