// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gate-layer intermediate representation and its one-line-per-layer text
//! format:
//!
//! ```text
//! # comment
//! RZ 0.1 0.2 0.3 0.4
//! RX 3.14159 0 0 0
//! RY 0 0.5 0 0
//! CZ (0,1) (2,3)
//! CNOT 0 1
//! SWAP 1 2
//! GSWAP 1 2 0.7
//! GLOBALROT X +
//! BARRIER
//! ```

use crate::gates::{Axis, RotationKind, Sign};
use crate::register::RegisterSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GateLayer {
    RzLayer(Vec<f64>),
    LocalRotationLayer(Axis, Vec<f64>),
    GlobalRot(RotationKind),
    CzLayer(Vec<(usize, usize)>),
    Cnot(usize, usize),
    Swap(usize, usize),
    GivensSwap(usize, usize, f64),
    Barrier,
}

/// Ordered list of gate layers, the compiler's input.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CircuitIR {
    pub layers: Vec<GateLayer>,
}

impl CircuitIR {
    pub fn new(layers: Vec<GateLayer>) -> Self {
        Self { layers }
    }

    /// Checks qubit indices and angle-vector lengths against a register.
    pub fn validate(&self, spec: &RegisterSpec) -> Result<()> {
        let n = spec.n_qubits;
        for (idx, layer) in self.layers.iter().enumerate() {
            let bad = |msg: String| Error::InvalidCircuit(format!("layer {idx}: {msg}"));
            match layer {
                GateLayer::RzLayer(v) | GateLayer::LocalRotationLayer(_, v) => {
                    if v.len() != n {
                        return Err(bad(format!("{} angles for {} qubits", v.len(), n)));
                    }
                }
                GateLayer::GlobalRot(_) | GateLayer::Barrier => {}
                GateLayer::CzLayer(edges) => {
                    for &(a, b) in edges {
                        if a >= n || b >= n {
                            return Err(bad(format!("edge ({a},{b}) out of range")));
                        }
                    }
                }
                GateLayer::Cnot(a, b) | GateLayer::Swap(a, b) => {
                    if *a >= n || *b >= n || a == b {
                        return Err(bad(format!("qubit pair ({a},{b}) invalid")));
                    }
                }
                GateLayer::GivensSwap(a, b, _) => {
                    if *a >= n || *b >= n || a == b {
                        return Err(bad(format!("qubit pair ({a},{b}) invalid")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut layers = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| {
                Error::InvalidCircuit(format!("line {}: {msg}: {line:?}", lineno + 1))
            };
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap().to_ascii_uppercase();
            let rest: Vec<&str> = parts.collect();
            let layer = match head.as_str() {
                "RZ" => GateLayer::RzLayer(parse_angles(&rest).map_err(|m| bad(&m))?),
                "RX" => GateLayer::LocalRotationLayer(
                    Axis::X,
                    parse_angles(&rest).map_err(|m| bad(&m))?,
                ),
                "RY" => GateLayer::LocalRotationLayer(
                    Axis::Y,
                    parse_angles(&rest).map_err(|m| bad(&m))?,
                ),
                "CZ" => {
                    let mut edges = Vec::new();
                    for tok in &rest {
                        let inner = tok
                            .strip_prefix('(')
                            .and_then(|s| s.strip_suffix(')'))
                            .ok_or_else(|| bad("expected (i,j) edge"))?;
                        let mut nums = inner.split(',');
                        let a = parse_idx(nums.next()).map_err(|m| bad(&m))?;
                        let b = parse_idx(nums.next()).map_err(|m| bad(&m))?;
                        if nums.next().is_some() {
                            return Err(bad("edge has more than two qubits"));
                        }
                        edges.push((a, b));
                    }
                    if edges.is_empty() {
                        return Err(bad("CZ needs at least one edge"));
                    }
                    GateLayer::CzLayer(edges)
                }
                "CNOT" | "SWAP" => {
                    if rest.len() != 2 {
                        return Err(bad("expected two qubit indices"));
                    }
                    let a = parse_idx(Some(rest[0])).map_err(|m| bad(&m))?;
                    let b = parse_idx(Some(rest[1])).map_err(|m| bad(&m))?;
                    if head == "CNOT" {
                        GateLayer::Cnot(a, b)
                    } else {
                        GateLayer::Swap(a, b)
                    }
                }
                "GSWAP" => {
                    if rest.len() != 3 {
                        return Err(bad("expected two qubits and an angle"));
                    }
                    let a = parse_idx(Some(rest[0])).map_err(|m| bad(&m))?;
                    let b = parse_idx(Some(rest[1])).map_err(|m| bad(&m))?;
                    let theta =
                        rest[2].parse::<f64>().map_err(|_| bad("bad angle"))?;
                    GateLayer::GivensSwap(a, b, theta)
                }
                "GLOBALROT" => {
                    if rest.len() != 2 {
                        return Err(bad("expected axis and sign"));
                    }
                    let axis = match rest[0].to_ascii_uppercase().as_str() {
                        "X" => Axis::X,
                        "Y" => Axis::Y,
                        _ => return Err(bad("axis must be X or Y")),
                    };
                    let sign = match rest[1] {
                        "+" => Sign::Plus,
                        "-" => Sign::Minus,
                        _ => return Err(bad("sign must be + or -")),
                    };
                    GateLayer::GlobalRot(RotationKind::from_axis_sign(axis, sign))
                }
                "BARRIER" => {
                    if !rest.is_empty() {
                        return Err(bad("BARRIER takes no arguments"));
                    }
                    GateLayer::Barrier
                }
                _ => return Err(bad("unknown layer")),
            };
            layers.push(layer);
        }
        Ok(Self { layers })
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for layer in &self.layers {
            match layer {
                GateLayer::RzLayer(v) => {
                    out.push_str("RZ");
                    for a in v {
                        out.push_str(&format!(" {a}"));
                    }
                }
                GateLayer::LocalRotationLayer(axis, v) => {
                    out.push_str(match axis {
                        Axis::X => "RX",
                        Axis::Y => "RY",
                    });
                    for a in v {
                        out.push_str(&format!(" {a}"));
                    }
                }
                GateLayer::CzLayer(edges) => {
                    out.push_str("CZ");
                    for (a, b) in edges {
                        out.push_str(&format!(" ({a},{b})"));
                    }
                }
                GateLayer::Cnot(a, b) => out.push_str(&format!("CNOT {a} {b}")),
                GateLayer::Swap(a, b) => out.push_str(&format!("SWAP {a} {b}")),
                GateLayer::GivensSwap(a, b, t) => {
                    out.push_str(&format!("GSWAP {a} {b} {t}"))
                }
                GateLayer::GlobalRot(kind) => {
                    let axis = match kind.axis() {
                        Axis::X => "X",
                        Axis::Y => "Y",
                    };
                    let sign = match kind.sign() {
                        Sign::Plus => "+",
                        Sign::Minus => "-",
                    };
                    out.push_str(&format!("GLOBALROT {axis} {sign}"));
                }
                GateLayer::Barrier => out.push_str("BARRIER"),
            }
            out.push('\n');
        }
        out
    }
}

fn parse_angles(tokens: &[&str]) -> std::result::Result<Vec<f64>, String> {
    if tokens.is_empty() {
        return Err("expected at least one angle".into());
    }
    tokens
        .iter()
        .map(|t| t.parse::<f64>().map_err(|_| format!("bad angle {t:?}")))
        .collect()
}

fn parse_idx(token: Option<&str>) -> std::result::Result<usize, String> {
    token
        .ok_or_else(|| "missing qubit index".to_string())?
        .trim()
        .parse::<usize>()
        .map_err(|_| "bad qubit index".to_string())
}
