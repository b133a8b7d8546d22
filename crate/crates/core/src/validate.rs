//! Built-in validation suites.
//!
//! Each suite runs a fixed, seeded battery of checks and reports the largest
//! observed error against its tolerance.

use std::fmt;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::dispersion::{
    closed_form_lowfreq, residual_with_g, smallk_expansion, z_layer, z_outside,
};
use crate::error::{Error, Result};
use crate::gcoeff::GModel;
use crate::model::{alpha, FilmParams};
use crate::rootfind::{solve_point, RootConfig};
use crate::sweep::Grid;
use crate::tmm::tmm_solve;

/// Seed for the sampled checks; fixed so reports are reproducible.
pub const SAMPLE_SEED: u64 = 0x5e_ed0f_f11e;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ClosedForm,
    Expansion,
    Impedance,
    Tmm,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::ClosedForm,
        Suite::Expansion,
        Suite::Impedance,
        Suite::Tmm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForm => "closedform",
            Suite::Expansion => "expansion",
            Suite::Impedance => "impedance",
            Suite::Tmm => "tmm",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    fn bound(name: &str, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
        }
    }

    fn flag(name: &str, passed: bool) -> Self {
        Self {
            name: name.to_string(),
            passed,
            max_error: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max error {:.3e} (tolerance {:.3e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_error,
            self.tolerance
        )
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::ClosedForm => closed_form_suite(),
        Suite::Expansion => expansion_suite(),
        Suite::Impedance => impedance_suite(),
        Suite::Tmm => tmm_suite(),
    }
}

fn zero_film(d: f64) -> FilmParams {
    FilmParams::new(d, 0.0, GModel::Zero).expect("positive thickness")
}

fn drude_film(d: f64) -> FilmParams {
    FilmParams::new(d, 0.0, GModel::Drude).expect("positive thickness")
}

fn closed_form_suite() -> Vec<Check> {
    let cfg = RootConfig::default();
    let mut max_rel = 0.0f64;
    let mut max_res = 0.0f64;
    for d in [0.01, 0.1, 0.5, 1.0] {
        let film = zero_film(d);
        for k in Grid::Log.points(0.01, 5.0, 50) {
            let exact = closed_form_lowfreq(k, d);
            let err = match solve_point(k, &film, None, &cfg) {
                Ok(p) if p.converged => (p.omega.re - exact).abs().max(p.omega.im.abs()) / exact,
                _ => f64::INFINITY,
            };
            max_rel = max_rel.max(err);
            let r = residual_with_g(Complex64::new(exact, 0.0), k, d, Complex64::new(0.0, 0.0));
            max_res = max_res.max(r.norm());
        }
    }
    vec![
        Check::bound("solver reproduces closed form (relative)", max_rel, 1e-10),
        Check::bound("closed form zeroes the residual (absolute)", max_res, 1e-12),
    ]
}

fn expansion_suite() -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(SAMPLE_SEED);
    let mut worst_ratio = 0.0f64;
    let mut below = true;
    let mut increasing = true;
    for _ in 0..1000 {
        let k = rng.gen_range(0.01..5.0);
        let kd: f64 = rng.gen_range(0.0..=0.5);
        let d = kd / k;
        if d <= 0.0 {
            continue;
        }
        let kd = k * d;
        let gap = (closed_form_lowfreq(k, d) - smallk_expansion(k, d)).abs();
        let bound = 0.03 * k * kd.powi(4);
        worst_ratio = worst_ratio.max(gap / bound);
        below &= closed_form_lowfreq(k, d) < k;
        increasing &= closed_form_lowfreq(k * 1.001, d) > closed_form_lowfreq(k, d);
    }
    vec![
        Check::bound("expansion gap / 0.03 K (KD)^4", worst_ratio, 1.0),
        Check::flag("closed form below light line", below),
        Check::flag("closed form increasing in K", increasing),
    ]
}

fn impedance_suite() -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(SAMPLE_SEED ^ 1);
    let gs = [
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0 / 3.0, 0.0),
        Complex64::new(0.2, -0.1),
    ];
    let i = Complex64::new(0.0, 1.0);
    let mut max_identity = 0.0f64;
    let mut max_branch = 0.0f64;
    let mut min_re = f64::INFINITY;
    for n in 0..10_000 {
        let omega = Complex64::from_polar(
            rng.gen_range(0.01..2.0),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        let k = rng.gen_range(0.01..5.0);
        let d = rng.gen_range(0.01..1.0);
        let g = gs[n % 3];
        let err = match (z_outside(omega, k), z_layer(omega, k, d, g)) {
            (Ok(zo), Ok(zl)) => {
                let lhs = omega * (zo - zl);
                let rhs = i * residual_with_g(omega, k, d, g);
                let scale = alpha(k, omega).norm() + 0.5 * k * d * (omega.norm() + g.norm() * k);
                (lhs - rhs).norm() / scale
            }
            _ => f64::INFINITY,
        };
        max_identity = max_identity.max(err);

        let wide = Complex64::from_polar(
            rng.gen_range(0.0..10.0),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        let kk = rng.gen_range(0.0..10.0);
        let a = alpha(kk, wide);
        min_re = min_re.min(a.re);
        let target = Complex64::new(kk * kk, 0.0) - wide * wide;
        let scale = (kk * kk + wide.norm_sqr()).max(f64::MIN_POSITIVE);
        max_branch = max_branch.max((a * a - target).norm() / scale);
    }
    vec![
        Check::bound(
            "Omega (Z_out - Z_layer) = i F (relative)",
            max_identity,
            1e-13,
        ),
        Check::bound("alpha^2 = K^2 - Omega^2 (relative)", max_branch, 1e-13),
        Check::flag("Re alpha >= 0", min_re >= 0.0),
    ]
}

/// Largest relative gap between Drude-G model roots and slab-oracle roots.
pub fn oracle_gap(d: f64, k_grid: &[f64], cfg: &RootConfig) -> f64 {
    let film = drude_film(d);
    k_grid
        .iter()
        .map(|&k| {
            let model = match solve_point(k, &film, None, cfg) {
                Ok(p) if p.converged => p.omega,
                _ => return f64::INFINITY,
            };
            match tmm_solve(k, d, 0.0, model, cfg) {
                Ok(m) => (model - m.omega).norm() / m.omega.norm(),
                Err(_) => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max)
}

fn tmm_suite() -> Vec<Check> {
    let cfg = RootConfig::default();
    let grid = Grid::Linear.points(0.05, 0.5, 20);
    let gaps: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&d| oracle_gap(d, &grid, &cfg))
        .collect();

    let mut zero_gap = 0.0f64;
    for d in [0.1, 0.05, 0.025] {
        for k in Grid::Linear.points(0.05, 0.3, 11) {
            let exact = closed_form_lowfreq(k, d);
            let gap = match tmm_solve(k, d, 0.0, Complex64::new(exact, 0.0), &cfg) {
                Ok(m) => (m.omega.re - exact).abs() / m.omega.re,
                Err(_) => f64::INFINITY,
            };
            zero_gap = zero_gap.max(gap);
        }
    }

    let mut checks = vec![Check::bound(
        "Drude-G vs slab oracle, D = 0.05",
        gaps[1],
        1e-2,
    )];
    for (d, gap) in [0.1, 0.025].iter().zip([gaps[0], gaps[2]]) {
        checks.push(Check::bound(
            &format!("Drude-G vs slab oracle, D = {d}"),
            gap,
            1e-2,
        ));
    }
    checks.push(Check::flag(
        &format!(
            "oracle gap shrinks with D ({:.3e} > {:.3e} > {:.3e})",
            gaps[0], gaps[1], gaps[2]
        ),
        gaps[0] > gaps[1] && gaps[1] > gaps[2],
    ));
    checks.push(Check::bound(
        "G = 0 closed form vs slab oracle, K <= 0.3",
        zero_gap,
        2e-2,
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes() {
        for s in Suite::ALL {
            for check in run_suite(s) {
                assert!(check.passed, "{}: {check}", s.name());
            }
        }
    }

    #[test]
    fn display_marks_status() {
        let c = Check::bound("x", 2.0, 1.0);
        assert!(c.to_string().starts_with("FAIL x"));
    }
}
