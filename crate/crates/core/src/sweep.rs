//! Continuation sweeps over a wavevector grid.
//!
//! The grid is walked in ascending `K`. The first point is seeded from the
//! small-`K` expansion; later points from a linear extrapolation through the
//! last two converged roots. A failed point is recorded and skipped, and the
//! walk resumes from the last good root.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::DispersionPoint;
use crate::error::{Error, Result};
use crate::model::FilmParams;
use crate::rootfind::{default_seed, solve_point, RootConfig};
use crate::tmm::{tmm_solve, SlabMode};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Linear,
    #[serde(alias = "logarithmic")]
    Log,
}

impl Grid {
    /// `n` points from `lo` to `hi` inclusive.
    pub fn points(self, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let last = n.saturating_sub(1).max(1) as f64;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return lo;
                }
                if i + 1 == n {
                    return hi;
                }
                let t = i as f64 / last;
                match self {
                    Grid::Linear => lo + (hi - lo) * t,
                    Grid::Log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRequest {
    pub k_min: f64,
    pub k_max: f64,
    pub n_points: usize,
    pub grid: Grid,
    pub film: FilmParams,
    pub cfg: RootConfig,
    pub compare_tmm: bool,
}

impl SweepRequest {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_min.is_finite() && self.k_min > 0.0) {
            return Err(Error::Validation(format!(
                "k-min must be positive, got {}",
                self.k_min
            )));
        }
        if !(self.k_max.is_finite() && self.k_max > self.k_min) {
            return Err(Error::Validation(format!(
                "k-max must exceed k-min, got k-min = {}, k-max = {}",
                self.k_min, self.k_max
            )));
        }
        if self.n_points < 2 {
            return Err(Error::Validation(format!(
                "k-steps must be at least 2, got {}",
                self.n_points
            )));
        }
        self.cfg.validate()
    }

    pub fn grid_points(&self) -> Vec<f64> {
        self.grid.points(self.k_min, self.k_max, self.n_points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub k: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub request: SweepRequest,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// Converged points, ascending in `K`.
    pub points: Vec<DispersionPoint>,
    pub failures: Vec<SweepFailure>,
    /// Slab-oracle modes parallel to `points` when requested; `None` entries
    /// mark oracle failures.
    pub tmm_points: Option<Vec<Option<SlabMode>>>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    /// Result with no converged points, as reported by [`Error::EmptySweep`].
    pub fn all_failed(req: &SweepRequest, reasons: Vec<(f64, String)>) -> Self {
        Self {
            points: Vec::new(),
            failures: reasons
                .into_iter()
                .map(|(k, reason)| SweepFailure { k, reason })
                .collect(),
            tmm_points: req.compare_tmm.then(Vec::new),
            metadata: SweepMetadata {
                request: req.clone(),
                version: VERSION.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub k: f64,
    pub omega_model: Complex64,
    pub omega_tmm: Complex64,
    pub rel_diff: f64,
}

fn extrapolated_seed(k: f64, history: &[(f64, Complex64)]) -> Option<Complex64> {
    match history {
        [] => None,
        [(_, w)] => Some(*w),
        [.., (k0, w0), (k1, w1)] => {
            let slope = (*w1 - *w0) / (k1 - k0);
            Some(*w1 + slope * (k - k1))
        }
    }
}

/// Runs a continuation sweep.
pub fn sweep_dispersion(req: &SweepRequest) -> Result<SweepResult> {
    req.validate()?;
    let film = &req.film;
    let mut points = Vec::with_capacity(req.n_points);
    let mut failures = Vec::new();
    let mut history: Vec<(f64, Complex64)> = Vec::new();

    for k in req.grid_points() {
        let seed =
            extrapolated_seed(k, &history).unwrap_or_else(|| default_seed(k, film.thickness()));
        match solve_point(k, film, Some(seed), &req.cfg) {
            Ok(p) if p.converged => {
                history.push((k, p.omega));
                points.push(p);
            }
            Ok(p) => failures.push(SweepFailure {
                k,
                reason: format!(
                    "not converged after {} iterations (|F| = {:e})",
                    p.iterations, p.residual_abs
                ),
            }),
            Err(e) => failures.push(SweepFailure {
                k,
                reason: e.to_string(),
            }),
        }
    }

    if points.is_empty() {
        return Err(Error::EmptySweep(
            failures.into_iter().map(|f| (f.k, f.reason)).collect(),
        ));
    }

    let tmm_points = req.compare_tmm.then(|| {
        points
            .iter()
            .map(|p| {
                tmm_solve(
                    p.k,
                    film.thickness(),
                    film.collision_rate(),
                    p.omega,
                    &req.cfg,
                )
                .ok()
            })
            .collect()
    });

    Ok(SweepResult {
        points,
        failures,
        tmm_points,
        metadata: SweepMetadata {
            request: req.clone(),
            version: VERSION.to_string(),
        },
    })
}

/// Model-versus-oracle table. Rows whose oracle solve failed are skipped.
pub fn compare_tmm(result: &SweepResult) -> Result<Vec<ComparisonRow>> {
    let tmm = result
        .tmm_points
        .as_ref()
        .ok_or_else(|| Error::State("sweep has no slab-oracle data".into()))?;
    let mut rows: Vec<ComparisonRow> = result
        .points
        .iter()
        .zip(tmm)
        .filter_map(|(p, m)| m.as_ref().map(|m| comparison_row(p.k, p.omega, m.omega)))
        .collect();
    rows.sort_by(|a, b| a.k.total_cmp(&b.k));
    Ok(rows)
}

pub fn comparison_row(k: f64, omega_model: Complex64, omega_tmm: Complex64) -> ComparisonRow {
    ComparisonRow {
        k,
        omega_model,
        omega_tmm,
        rel_diff: (omega_model - omega_tmm).norm() / omega_tmm.norm(),
    }
}
