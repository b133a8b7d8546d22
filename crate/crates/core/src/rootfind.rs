//! Root finders and the single-mode driver.
//!
//! `newton_complex` and `bisect_real` are model-agnostic. [`solve_point`]
//! combines them for the film residual:
//!
//! 1. For lossless Zero/Drude films the residual is real below the light
//!    line and changes sign on `(0, min(K, 1))`, so the root is bracketed and
//!    bisected.
//! 2. Otherwise damped Newton is run in the decay constant `α` instead of
//!    `Ω`, with `Ω(α) = √(K² − α²)`. Thin-film roots sit within `~(KD)²`
//!    of the light line, where `F(Ω)` has a square-root branch point and
//!    Newton in `Ω` overshoots across the cut; in `α` the residual is smooth
//!    and nearly linear.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{residual, smallk_expansion, DispersionPoint};
use crate::error::{Error, Result};
use crate::gcoeff::{g_value, GModel};
use crate::model::{alpha, FilmParams};

/// Hard cap on bisection halvings; doubles run out long before this.
const MAX_BISECTIONS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    /// Convergence threshold on `|f|`.
    pub tol_residual: f64,
    /// Newton iteration budget.
    pub max_iter: usize,
    /// Central-difference step relative to `max(1, |z|)`.
    pub fd_step_rel: f64,
    /// Step halvings allowed per Newton iteration.
    pub damping_halvings: usize,
    /// Record an iteration log in [`RootResult::trace`].
    #[serde(default)]
    pub trace: bool,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            tol_residual: 1e-12,
            max_iter: 50,
            fd_step_rel: 1e-7,
            damping_halvings: 20,
            trace: false,
        }
    }
}

impl RootConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual.is_finite() && self.tol_residual > 0.0) {
            return Err(Error::Validation(format!(
                "tol must be positive, got {}",
                self.tol_residual
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Validation("max-iter must be positive".into()));
        }
        if !(self.fd_step_rel.is_finite() && self.fd_step_rel > 0.0) {
            return Err(Error::Validation(format!(
                "fd step must be positive, got {}",
                self.fd_step_rel
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub z: Complex64,
    pub residual_abs: f64,
    pub damping: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub root: Complex64,
    pub residual_abs: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Option<Vec<TraceEntry>>,
}

/// Damped Newton iteration on a complex function with a central-difference
/// derivative.
///
/// Running out of iterations, or failing to reduce `|f|` within the allowed
/// step halvings, gives `converged = false` rather than an error. Evaluation
/// failures during a trial step count as "no decrease".
pub fn newton_complex<F>(f: F, seed: Complex64, cfg: &RootConfig) -> Result<RootResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    cfg.validate()?;
    let mut z = seed;
    let mut fz = f(z)?;
    let mut trace = cfg.trace.then(Vec::new);
    let log = |trace: &mut Option<Vec<TraceEntry>>, iteration, z, r, damping| {
        if let Some(t) = trace.as_mut() {
            t.push(TraceEntry {
                iteration,
                z,
                residual_abs: r,
                damping,
            });
        }
    };
    log(&mut trace, 0, z, fz.norm(), 1.0);

    let mut iterations = 0;
    let mut converged = fz.norm() <= cfg.tol_residual;
    while !converged && iterations < cfg.max_iter {
        let h = cfg.fd_step_rel * z.norm().max(1.0);
        let deriv = (f(z + h)? - f(z - h)?) / (2.0 * h);
        if deriv.norm().is_nan() || deriv.norm() < 1e-300 {
            return Err(Error::SingularJacobian(format!("z = {z}")));
        }
        let step = fz / deriv;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.damping_halvings {
            let trial = z - step * lambda;
            if let Ok(ft) = f(trial) {
                if ft.norm() < fz.norm() {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some((zn, fzn)) = accepted else {
            break;
        };
        z = zn;
        fz = fzn;
        iterations += 1;
        log(&mut trace, iterations, z, fz.norm(), lambda);
        converged = fz.norm() <= cfg.tol_residual;
    }

    Ok(RootResult {
        root: z,
        residual_abs: fz.norm(),
        iterations,
        converged,
        trace,
    })
}

/// Bisection on a sign-changing bracket.
///
/// Halves until the bracket is narrower than `1e-14·max(1, |root|)` and
/// `|f(mid)| ≤ tol`, or until the bracket cannot be split further in double
/// precision. `converged` reports whether `|f(mid)| ≤ tol` was reached.
pub fn bisect_real<F>(f: F, lo: f64, hi: f64, cfg: &RootConfig) -> Result<RootResult>
where
    F: Fn(f64) -> Result<f64>,
{
    cfg.validate()?;
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa0 = f(a)?;
    let fb0 = f(b)?;
    let real = |x: f64, fx: f64, n| RootResult {
        root: Complex64::new(x, 0.0),
        residual_abs: fx.abs(),
        iterations: n,
        converged: fx.abs() <= cfg.tol_residual,
        trace: None,
    };
    if fa0 == 0.0 {
        return Ok(real(a, 0.0, 0));
    }
    if fb0 == 0.0 {
        return Ok(real(b, 0.0, 0));
    }
    if !(fa0.signum() != fb0.signum()) || fa0.is_nan() || fb0.is_nan() {
        return Err(Error::Bracket { lo, hi });
    }

    let mut fa = fa0;
    let mut trace = cfg.trace.then(Vec::new);
    let mut n = 0;
    loop {
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        n += 1;
        if let Some(t) = trace.as_mut() {
            t.push(TraceEntry {
                iteration: n,
                z: Complex64::new(mid, 0.0),
                residual_abs: fm.abs(),
                damping: 1.0,
            });
        }
        let narrow = b - a <= 1e-14 * mid.abs().max(1.0);
        let exhausted = mid <= a || mid >= b || n >= MAX_BISECTIONS;
        if fm == 0.0 || (narrow && fm.abs() <= cfg.tol_residual) || exhausted {
            let mut r = real(mid, fm, n);
            r.trace = trace;
            return Ok(r);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
}

/// Default seed: the small-`K` expansion, clamped just below the light line.
pub fn default_seed(k: f64, d: f64) -> Complex64 {
    let mut w = smallk_expansion(k, d);
    if w >= k {
        w = 0.9999 * k;
    }
    if w <= 0.0 {
        // expansion turns negative for KD > 2√2
        w = 0.5 * k;
    }
    Complex64::new(w, 0.0)
}

/// Frequency on the `Re Ω ≥ 0` sheet for a given exterior decay constant.
pub(crate) fn omega_from_decay(k: f64, a: Complex64) -> Complex64 {
    let kc = Complex64::new(k, 0.0);
    let w = ((kc - a) * (kc + a)).sqrt();
    if w.re < 0.0 {
        -w
    } else {
        w
    }
}

fn packaged(
    k: f64,
    omega: Complex64,
    film: &FilmParams,
    iterations: usize,
    cfg: &RootConfig,
) -> DispersionPoint {
    let a = alpha(k, omega);
    let (g, residual_abs) = match (
        g_value(film.g_model(), omega, k, film.collision_rate()),
        residual(omega, k, film),
    ) {
        (Ok(g), Ok(f)) => (g.g, f.norm()),
        _ => (Complex64::new(f64::NAN, f64::NAN), f64::INFINITY),
    };
    DispersionPoint {
        k,
        omega,
        alpha: a,
        g,
        residual_abs,
        iterations,
        converged: omega.re > 0.0 && residual_abs <= cfg.tol_residual,
    }
}

/// Film residual as a function of the exterior decay constant.
///
/// For `Re α ≥ 0` this equals `F(Ω(α))` exactly; unlike `F ∘ Ω` it stays
/// analytic when `α` crosses the imaginary axis.
pub fn decay_residual(k: f64, film: &FilmParams) -> impl Fn(Complex64) -> Result<Complex64> + '_ {
    move |a| {
        let omega = omega_from_decay(k, a);
        let g = g_value(film.g_model(), omega, k, film.collision_rate())?.g;
        Ok(a - 0.5 * k * film.thickness() * (omega - g * k))
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    Ok(())
}

/// Real-axis bracketing and bisection for lossless Zero/Drude films.
///
/// Returns `None` when the residual does not change sign on the bracket.
pub fn solve_point_bracketed(
    k: f64,
    film: &FilmParams,
    cfg: &RootConfig,
) -> Result<Option<DispersionPoint>> {
    check_k(k)?;
    let lo = 1e-6 * k;
    // Drude G has a pole at the plasma frequency
    let hi = match film.g_model() {
        GModel::Drude => k.min(1.0 - 1e-12),
        _ => k,
    };
    let f = |w: f64| residual(Complex64::new(w, 0.0), k, film).map(|z| z.re);
    match bisect_real(f, lo, hi, cfg) {
        Ok(r) => {
            let w = r.root.re;
            let mut p = packaged(k, r.root, film, r.iterations, cfg);
            // surface waves only: strictly between 0 and the light line
            p.converged &= r.converged && w > 0.0 && w < k;
            Ok(Some(p))
        }
        Err(Error::Bracket { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Complex Newton on the residual, parameterized by `α`.
///
/// The reported `alpha` is the Newton variable itself and `residual_abs` is
/// re-evaluated at it; next to the light line `α` is far better resolved
/// than `K − Ω`.
pub fn solve_point_newton(
    k: f64,
    film: &FilmParams,
    seed: Complex64,
    cfg: &RootConfig,
) -> Result<DispersionPoint> {
    check_k(k)?;
    if seed == Complex64::new(0.0, 0.0) || !(seed.re.is_finite() && seed.im.is_finite()) {
        return Err(Error::Domain(format!(
            "seed must be finite and nonzero, got {seed}"
        )));
    }
    let f = decay_residual(k, film);
    let r = newton_complex(&f, alpha(k, seed), cfg)?;
    let a = r.root;
    let omega = omega_from_decay(k, a);
    let residual_abs = f(a).map_or(f64::INFINITY, |z| z.norm());
    let g = g_value(film.g_model(), omega, k, film.collision_rate())
        .map_or(Complex64::new(f64::NAN, f64::NAN), |g| g.g);
    Ok(DispersionPoint {
        k,
        omega,
        alpha: a,
        g,
        residual_abs,
        iterations: r.iterations,
        // a root with Re α < 0 grows away from the film
        converged: r.converged && residual_abs <= cfg.tol_residual && a.re >= 0.0 && omega.re > 0.0,
    })
}

/// Solves the dispersion residual at one wavevector.
///
/// A point that neither strategy can converge is returned with
/// `converged = false`; it is never silently replaced by a wrong root.
pub fn solve_point(
    k: f64,
    film: &FilmParams,
    seed: Option<Complex64>,
    cfg: &RootConfig,
) -> Result<DispersionPoint> {
    check_k(k)?;
    cfg.validate()?;
    let lossless_real =
        film.collision_rate() == 0.0 && matches!(film.g_model(), GModel::Zero | GModel::Drude);
    let mut fallback = None;
    if lossless_real {
        if let Some(p) = solve_point_bracketed(k, film, cfg)? {
            if p.converged {
                return Ok(p);
            }
            fallback = Some(p);
        }
    }
    let seed = seed.unwrap_or_else(|| default_seed(k, film.thickness()));
    match solve_point_newton(k, film, seed, cfg) {
        Ok(p) if p.converged => Ok(p),
        Ok(p) => Ok(best_of(fallback, p)),
        Err(Error::SingularJacobian(_))
        | Err(Error::Range { .. })
        | Err(Error::Singularity(_))
        | Err(Error::Pole(_)) => Ok(fallback.unwrap_or(DispersionPoint {
            k,
            omega: seed,
            alpha: alpha(k, seed),
            g: Complex64::new(f64::NAN, f64::NAN),
            residual_abs: f64::INFINITY,
            iterations: 0,
            converged: false,
        })),
        Err(e) => Err(e),
    }
}

fn best_of(a: Option<DispersionPoint>, b: DispersionPoint) -> DispersionPoint {
    match a {
        Some(a) if a.residual_abs < b.residual_abs => a,
        _ => b,
    }
}
