//! JSON and CSV serialization: edge-keyed length maps on the way in,
//! 17-significant-digit floats on the way out (so every f64 round-trips
//! exactly and repeated runs are byte-identical).

use std::collections::BTreeMap;
use std::io;

use nalgebra::Matrix6;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::Error;
use crate::geometry::Geometry;
use crate::jacobian::AssemblyMode;
use crate::tetra::{TetraAngles, TetraLengths, EDGES};
use crate::volume::GradientCheck;

/// Wire format of a tetrahedron: geometry plus all six lengths keyed by the
/// canonical edge labels "12".."34".
#[derive(Debug, Deserialize)]
pub struct TetraInput {
    pub geometry: Geometry,
    pub lengths: BTreeMap<String, f64>,
}

/// Input failures split by exit-code class: `Parse` is a usage problem
/// (malformed JSON, missing or unknown keys), `Domain` a geometric one.
#[derive(Debug)]
pub enum InputError {
    Parse(String),
    Domain(Error),
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Parse(msg) => write!(f, "input parse error: {msg}"),
            InputError::Domain(e) => write!(f, "{e}"),
        }
    }
}

pub fn read_tetra(json: &str) -> Result<TetraLengths, InputError> {
    let input: TetraInput =
        serde_json::from_str(json).map_err(|e| InputError::Parse(e.to_string()))?;
    for key in input.lengths.keys() {
        if !EDGES.iter().any(|e| e.label() == key) {
            return Err(InputError::Parse(format!(
                "unknown edge key {key:?} (expected 12, 13, 14, 23, 24, 34)"
            )));
        }
    }
    let mut x = [0.0; 6];
    for e in EDGES {
        match input.lengths.get(e.label()) {
            Some(&v) => x[e.index()] = v,
            None => {
                return Err(InputError::Parse(format!("missing length for edge \"{}\"", e.label())))
            }
        }
    }
    TetraLengths::new(input.geometry, x).map_err(InputError::Domain)
}

/// Emit every f64 with 17 significant digits: enough to reproduce the exact
/// bit pattern on parse, fixed-width so outputs are stable byte-for-byte.
#[derive(Clone, Copy, Default)]
pub struct SigFigFormatter;

impl Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        debug_assert!(value.is_finite(), "outputs never carry non-finite numbers");
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.8e}")
    }
}

/// Compact single-line JSON with [`SigFigFormatter`] numbers.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    String::from_utf8(out).expect("serializer emits valid utf-8")
}

pub fn edge_map(values: &[f64; 6]) -> BTreeMap<&'static str, f64> {
    EDGES.iter().map(|&e| (e.label(), values[e.index()])).collect()
}

pub fn matrix_rows(m: &Matrix6<f64>) -> [[f64; 6]; 6] {
    std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
}

/// One matrix as CSV: a header of edge labels, then one labeled row per edge.
pub fn matrix_csv(name: &str, m: &Matrix6<f64>) -> String {
    let mut out = String::new();
    out.push_str(name);
    for e in EDGES {
        out.push(',');
        out.push_str(e.label());
    }
    out.push('\n');
    for (r, e) in EDGES.into_iter().enumerate() {
        out.push_str(e.label());
        for c in 0..6 {
            out.push(',');
            out.push_str(&format!("{:.16e}", m[(r, c)]));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct SolveOutput {
    pub geometry: Geometry,
    pub valid: bool,
    pub lengths: BTreeMap<&'static str, f64>,
    pub angles: BTreeMap<&'static str, f64>,
}

impl SolveOutput {
    pub fn new(x: &TetraLengths, a: &TetraAngles) -> SolveOutput {
        SolveOutput {
            geometry: x.geometry(),
            valid: true,
            lengths: edge_map(x.values()),
            angles: edge_map(a.values()),
        }
    }
}

#[derive(Serialize)]
pub struct RMatrixOutput {
    pub matrix: [[f64; 6]; 6],
    pub condition: f64,
}

#[derive(Serialize)]
pub struct FdCheckOutput {
    pub h: f64,
    pub max_relative_error: f64,
}

#[derive(Serialize)]
pub struct JacobianOutput {
    pub geometry: Geometry,
    pub mode: AssemblyMode,
    pub edge_order: [&'static str; 6],
    pub angles: BTreeMap<&'static str, f64>,
    pub jacobian: [[f64; 6]; 6],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_matrix: Option<[[f64; 6]; 6]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_matrix: Option<RMatrixOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_check: Option<FdCheckOutput>,
}

#[derive(Serialize)]
pub struct VolumeOutput {
    pub geometry: Geometry,
    pub method: &'static str,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient_check: Option<GradientCheck>,
}

/// Dual command output; `geometry` + `lengths` make it directly reusable as
/// an input document.
#[derive(Serialize)]
pub struct DualOutput {
    pub geometry: Geometry,
    pub lengths: BTreeMap<&'static str, f64>,
    pub angles: BTreeMap<&'static str, f64>,
}
