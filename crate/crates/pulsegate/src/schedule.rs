// Copyright 2026 Pulsegate Contributors
// SPDX-License-Identifier: Apache-2.0

//! The on-disk pulse schedule format.
//!
//! A schedule document carries its register and a list of segments. As
//! everywhere at the file boundary, frequencies (`omega`, `delta`, `c6`) are
//! plain MHz and convert to angular rad/µs on parse; phases are radians and
//! durations µs. The `version` tag is checked on parse and unknown versions
//! are rejected. Emission is canonical: parse ∘ emit is the identity on
//! emitted documents, byte for byte.

use serde::{Deserialize, Serialize};

use crate::gatelib::{CompiledSchedule, ScheduleOp};
use crate::register::{Delta, PulseSegment, PulseSequence, RegisterFile, RegisterSpec, TAU};
use crate::{Error, Result};

pub const SCHEDULE_VERSION: &str = "pulsegate/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaEntry {
    Uniform { uniform: f64 },
    PerQubit(Vec<f64>),
}

/// One segment, file units (MHz / µs / rad).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentEntry {
    pub omega: f64,
    pub phi: f64,
    pub delta: DeltaEntry,
    pub duration_us: f64,
    #[serde(default)]
    pub tag: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub version: String,
    pub register: RegisterFile,
    pub segments: Vec<SegmentEntry>,
}

impl ScheduleFile {
    pub fn from_sequence(seq: &PulseSequence, tags: &[String]) -> Self {
        let segments = seq
            .segments
            .iter()
            .enumerate()
            .map(|(i, seg)| SegmentEntry {
                omega: seg.omega / TAU,
                phi: seg.phi,
                delta: match &seg.delta {
                    Delta::Uniform(d) => DeltaEntry::Uniform { uniform: d / TAU },
                    Delta::PerQubit(v) => {
                        DeltaEntry::PerQubit(v.iter().map(|d| d / TAU).collect())
                    }
                },
                duration_us: seg.duration,
                tag: tags.get(i).cloned().unwrap_or_default(),
            })
            .collect();
        Self {
            version: SCHEDULE_VERSION.into(),
            register: register_to_file(&seq.register),
            segments,
        }
    }

    /// Serialize an all-physical compiled schedule, keeping provenance tags.
    pub fn from_compiled(sched: &CompiledSchedule) -> Result<Self> {
        let seq = sched.to_pulse_sequence()?;
        let tags: Vec<String> = sched
            .ops
            .iter()
            .filter_map(|t| match &t.op {
                ScheduleOp::Pulse(_) => Some(t.tag.clone()),
                ScheduleOp::IdealRotation(_) => None,
            })
            .collect();
        Ok(Self::from_sequence(&seq, &tags))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: ScheduleFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSchedule(format!("bad schedule JSON: {e}")))?;
        if file.version != SCHEDULE_VERSION {
            return Err(Error::InvalidSchedule(format!(
                "unknown schedule version {:?} (expected {SCHEDULE_VERSION:?})",
                file.version
            )));
        }
        Ok(file)
    }

    /// Canonical form: pretty JSON with a trailing newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schedule serialization");
        s.push('\n');
        s
    }

    pub fn to_sequence(&self) -> Result<(PulseSequence, Vec<String>)> {
        let register = RegisterSpec::new(
            self.register.n_qubits,
            self.register.geometry,
            self.register.spacing_um,
            TAU * self.register.c6,
            self.register.interaction,
        )?;
        let mut tags = Vec::with_capacity(self.segments.len());
        let segments = self
            .segments
            .iter()
            .map(|e| {
                tags.push(e.tag.clone());
                PulseSegment::new(
                    e.omega * TAU,
                    e.phi,
                    match &e.delta {
                        DeltaEntry::Uniform { uniform } => Delta::Uniform(uniform * TAU),
                        DeltaEntry::PerQubit(v) => {
                            Delta::PerQubit(v.iter().map(|d| d * TAU).collect())
                        }
                    },
                    e.duration_us,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((PulseSequence::new(register, segments)?, tags))
    }
}

fn register_to_file(spec: &RegisterSpec) -> RegisterFile {
    RegisterFile {
        n_qubits: spec.n_qubits,
        geometry: spec.geometry,
        spacing_um: spec.spacing_um,
        c6: spec.c6 / TAU,
        interaction: spec.interaction,
    }
}
