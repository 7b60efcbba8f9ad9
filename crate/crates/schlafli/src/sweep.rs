//! Deterministic verification sweeps: sample many tetrahedra, run both
//! identity suites on each, and aggregate worst-case residuals per check.
//!
//! Determinism contract: samples are generated sequentially from the seed
//! before any evaluation; workers only split the pure per-sample evaluation
//! across contiguous chunks; aggregation runs in sample order. The report is
//! therefore byte-identical for any worker count, and the worker count itself
//! is deliberately left out of the report.

use serde::Serialize;

use crate::error::Result;
use crate::geometry::Geometry;
use crate::identities::{verify_p_identities, verify_r_identities, IdentityCheck, Tolerances};
use crate::sampling::sample_tetra;
use crate::tetra::TetraLengths;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// `None` sweeps all three geometries.
    pub geometry: Option<Geometry>,
    pub samples: usize,
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
    pub workers: usize,
    pub tolerances: Tolerances,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            geometry: None,
            samples: 1000,
            lo: 0.3,
            hi: 1.2,
            seed: 42,
            workers: 1,
            tolerances: Tolerances::default(),
        }
    }
}

impl SweepConfig {
    /// Reject malformed configurations with a usage-grade message.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.samples < 1 {
            return Err("samples must be at least 1".into());
        }
        if !(self.lo > 0.0) {
            return Err(format!("range low end {} must be positive", self.lo));
        }
        if !(self.hi > self.lo) {
            return Err(format!("range high end {} must exceed the low end {}", self.hi, self.lo));
        }
        let sweeps_spherical =
            matches!(self.geometry, None | Some(Geometry::Spherical));
        if sweeps_spherical && self.hi >= std::f64::consts::PI {
            return Err(format!("range high end {} must stay below π for spherical sweeps", self.hi));
        }
        if self.workers < 1 {
            return Err("workers must be at least 1".into());
        }
        Ok(())
    }

    fn geometries(&self) -> Vec<Geometry> {
        match self.geometry {
            Some(g) => vec![g],
            None => Geometry::ALL.to_vec(),
        }
    }
}

/// Echo of the sweep inputs that determine its output. The worker count is
/// omitted: it must never change a result, so it has no place in one.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub geometry: String,
    pub samples: usize,
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
    pub tolerances: Tolerances,
}

/// Worst residual of one identity across the whole sweep.
#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub name: &'static str,
    pub max_residual: f64,
    pub sample_index: usize,
    pub argmax_row: &'static str,
    pub argmax_col: &'static str,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometrySweep {
    pub geometry: Geometry,
    pub samples: usize,
    pub p_identities: Vec<WorstCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_identities: Option<Vec<WorstCase>>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: ConfigEcho,
    pub results: Vec<GeometrySweep>,
    pub pass: bool,
}

type SampleChecks = (Vec<IdentityCheck>, Option<Vec<IdentityCheck>>);

fn evaluate_sample(x: &TetraLengths, tol: &Tolerances) -> Result<SampleChecks> {
    let p = verify_p_identities(x, tol)?.checks;
    let r = if x.geometry().is_curved() {
        Some(verify_r_identities(x, tol)?.checks)
    } else {
        None
    };
    Ok((p, r))
}

/// Fold per-sample checks into running worst cases, in sample order; a tie
/// keeps the earlier sample.
fn merge(worst: &mut Vec<WorstCase>, checks: &[IdentityCheck], sample_index: usize) {
    if worst.is_empty() {
        worst.extend(checks.iter().map(|c| WorstCase {
            name: c.name,
            max_residual: c.max_residual,
            sample_index,
            argmax_row: c.argmax_row,
            argmax_col: c.argmax_col,
            tolerance: c.tolerance,
            pass: c.pass,
        }));
        return;
    }
    debug_assert_eq!(worst.len(), checks.len());
    for (w, c) in worst.iter_mut().zip(checks) {
        debug_assert_eq!(w.name, c.name);
        if c.max_residual > w.max_residual {
            w.max_residual = c.max_residual;
            w.sample_index = sample_index;
            w.argmax_row = c.argmax_row;
            w.argmax_col = c.argmax_col;
        }
        w.pass = w.pass && c.pass;
    }
}

fn sweep_geometry(cfg: &SweepConfig, geometry: Geometry) -> Result<GeometrySweep> {
    // Sequential generation: the sample stream depends on the seed alone.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<TetraLengths> =
        (0..cfg.samples).map(|_| sample_tetra(&mut rng, geometry, cfg.lo, cfg.hi)).collect();

    let mut evaluated: Vec<Option<Result<SampleChecks>>> = vec![None; cfg.samples];
    let workers = cfg.workers.min(cfg.samples).max(1);
    if workers == 1 {
        for (slot, x) in evaluated.iter_mut().zip(&samples) {
            *slot = Some(evaluate_sample(x, &cfg.tolerances));
        }
    } else {
        let chunk = cfg.samples.div_ceil(workers);
        std::thread::scope(|scope| {
            for (xs, slots) in samples.chunks(chunk).zip(evaluated.chunks_mut(chunk)) {
                scope.spawn(move || {
                    for (slot, x) in slots.iter_mut().zip(xs) {
                        *slot = Some(evaluate_sample(x, &cfg.tolerances));
                    }
                });
            }
        });
    }

    let mut p_worst: Vec<WorstCase> = Vec::new();
    let mut r_worst: Vec<WorstCase> = Vec::new();
    for (index, slot) in evaluated.into_iter().enumerate() {
        let (p, r) = slot.expect("every sample slot is filled")?;
        merge(&mut p_worst, &p, index);
        if let Some(r) = r {
            merge(&mut r_worst, &r, index);
        }
    }

    let pass = p_worst.iter().all(|w| w.pass) && r_worst.iter().all(|w| w.pass);
    Ok(GeometrySweep {
        geometry,
        samples: cfg.samples,
        p_identities: p_worst,
        r_identities: if geometry.is_curved() { Some(r_worst) } else { None },
        pass,
    })
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    // Callers surface `validate` failures as usage errors; reaching this
    // point with a malformed config is a programming error.
    if let Err(msg) = cfg.validate() {
        panic!("invalid sweep config: {msg}");
    }
    let mut results = Vec::new();
    for geometry in cfg.geometries() {
        results.push(sweep_geometry(cfg, geometry)?);
    }
    let pass = results.iter().all(|r| r.pass);
    Ok(SweepReport {
        config: ConfigEcho {
            geometry: cfg.geometry.map_or_else(|| "all".to_string(), |g| g.to_string()),
            samples: cfg.samples,
            lo: cfg.lo,
            hi: cfg.hi,
            seed: cfg.seed,
            tolerances: cfg.tolerances,
        },
        results,
        pass,
    })
}
