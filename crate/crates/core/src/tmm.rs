//! Exact TM modes of a Drude slab in vacuum.
//!
//! With `H_y ∝ cosh(κ₁(x − D/2))` inside the film and `e^{−κ₀|x|}` decay
//! outside, continuity of `H_y` and of `E_z ∝ (1/ε)∂H_y/∂x` at a face gives
//!
//! ```text
//! (κ₁/ε)·tanh(κ₁D/2) + κ₀ = 0,   κ₀ = √(K² − Ω²),   κ₁ = √(K² − εΩ²)
//! ```
//!
//! This is the `H_y`-symmetric / `E_z`-antisymmetric family, the one the
//! thin-film residual approximates. It makes no thin-film assumption, so it
//! serves as the reference for [`crate::dispersion::residual`] with the Drude
//! G closure.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{alpha, decay_root, epsilon_drude};
use crate::rootfind::{bisect_real, newton_complex, omega_from_decay, RootConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSymmetry {
    /// `H_y` even, `E_z` odd about the film middle.
    HySymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabMode {
    pub k: f64,
    pub omega: Complex64,
    /// Exterior decay constant κ₀.
    pub kappa_out: Complex64,
    /// Interior transverse parameter κ₁.
    pub kappa_in: Complex64,
    pub symmetry: ModeSymmetry,
    pub residual_abs: f64,
    pub iterations: usize,
}

fn interior_kappa(omega: Complex64, k: f64, eps: Complex64) -> Complex64 {
    decay_root(Complex64::new(k * k, 0.0) - eps * omega * omega)
}

/// Mode-matching residual; zeros are exact slab modes.
pub fn tmm_residual(omega: Complex64, k: f64, d: f64, collision_rate: f64) -> Result<Complex64> {
    let eps = epsilon_drude(omega, collision_rate)?;
    if eps == Complex64::new(0.0, 0.0) {
        return Err(Error::Singularity(format!(
            "epsilon vanishes at Omega = {omega}"
        )));
    }
    let k1 = interior_kappa(omega, k, eps);
    let k0 = alpha(k, omega);
    Ok(k1 / eps * (k1 * (0.5 * d)).tanh() + k0)
}

/// Solves for the slab mode near `seed`.
///
/// Lossless films are first bracketed on the real axis below `min(K, 1)`;
/// the root is then polished (or, for lossy films, found) by Newton in κ₀.
/// The reported residual is evaluated at κ₀. Non-convergence is an
/// [`Error::NotConverged`].
pub fn tmm_solve(
    k: f64,
    d: f64,
    collision_rate: f64,
    seed: Complex64,
    cfg: &RootConfig,
) -> Result<SlabMode> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::Domain(format!(
            "film thickness must be positive, got {d}"
        )));
    }

    // lossless: bracket on the real axis for a seed independent of the caller's
    let mut seed = seed;
    if collision_rate == 0.0 {
        let f = |w: f64| tmm_residual(Complex64::new(w, 0.0), k, d, 0.0).map(|z| z.re);
        match bisect_real(f, 1e-6 * k, k.min(1.0 - 1e-12), cfg) {
            Ok(r) if r.root.re > 0.0 && r.root.re < k => seed = r.root,
            Ok(_) | Err(Error::Bracket { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    // polish in κ₀, which stays well resolved next to the light line
    let f = |a: Complex64| {
        let omega = omega_from_decay(k, a);
        let eps = epsilon_drude(omega, collision_rate)?;
        if eps == Complex64::new(0.0, 0.0) {
            return Err(Error::Singularity(format!(
                "epsilon vanishes at Omega = {omega}"
            )));
        }
        let k1 = interior_kappa(omega, k, eps);
        Ok(k1 / eps * (k1 * (0.5 * d)).tanh() + a)
    };
    let r = newton_complex(f, alpha(k, seed), cfg)?;
    let kappa_out = r.root;
    let residual_abs = f(kappa_out)?.norm();
    if !r.converged || residual_abs > cfg.tol_residual || kappa_out.re <= 0.0 {
        return Err(Error::NotConverged(format!(
            "slab mode at K = {k}, D = {d}, nu = {collision_rate}: |F| = {residual_abs:e}, kappa_out = {kappa_out}"
        )));
    }
    let omega = omega_from_decay(k, kappa_out);
    let eps = epsilon_drude(omega, collision_rate)?;
    Ok(SlabMode {
        k,
        omega,
        kappa_out,
        kappa_in: interior_kappa(omega, k, eps),
        symmetry: ModeSymmetry::HySymmetric,
        residual_abs,
        iterations: r.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::smallk_expansion;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vanishing_thickness_leaves_exterior_term() {
        let w = c(0.15, 0.0);
        let f = tmm_residual(w, 0.2, 0.0, 0.0).unwrap();
        assert!((f - alpha(0.2, w)).norm() < 1e-16);
    }

    #[test]
    fn light_line_leaves_interior_term() {
        let (k, d) = (0.3, 0.07);
        let w = c(k, 0.0);
        let eps = epsilon_drude(w, 0.0).unwrap();
        let k1 = interior_kappa(w, k, eps);
        let f = tmm_residual(w, k, d, 0.0).unwrap();
        assert!((f - k1 / eps * (k1 * (d / 2.0)).tanh()).norm() < 1e-16);
    }

    #[test]
    fn sign_change_below_light_line() {
        let f = |w: f64| tmm_residual(c(w, 0.0), 0.2, 0.05, 0.0).unwrap().re;
        assert!(f(0.19) > 0.0);
        assert!(f(0.2) < 0.0);
    }

    #[test]
    fn solve_lossless() {
        let cfg = RootConfig::default();
        let m = tmm_solve(0.2, 0.05, 0.0, c(smallk_expansion(0.2, 0.05), 0.0), &cfg).unwrap();
        assert!(m.omega.re > 0.0 && m.omega.re < 0.2);
        assert_eq!(m.omega.im, 0.0);
        assert!(m.kappa_out.re > 0.0);
        assert_eq!(m.symmetry, ModeSymmetry::HySymmetric);
        let eps = epsilon_drude(m.omega, 0.0).unwrap();
        let scale = 0.04 + m.omega.norm_sqr();
        assert!(
            (m.kappa_out * m.kappa_out - (c(0.04, 0.0) - m.omega * m.omega)).norm()
                <= 1e-13 * scale
        );
        let scale_in = 0.04 + (eps * m.omega * m.omega).norm();
        assert!(
            (m.kappa_in * m.kappa_in - (c(0.04, 0.0) - eps * m.omega * m.omega)).norm()
                <= 1e-13 * scale_in
        );
    }

    #[test]
    fn solve_thin_limit() {
        let cfg = RootConfig::default();
        let m = tmm_solve(0.2, 1e-6, 0.0, c(0.1999, 0.0), &cfg).unwrap();
        assert!(((m.omega.re - 0.2) / 0.2).abs() < 1e-6);
    }

    #[test]
    fn solve_lossy_is_damped() {
        let cfg = RootConfig::default();
        let m = tmm_solve(0.2, 0.05, 0.01, c(0.1999, 0.0), &cfg).unwrap();
        assert!(m.omega.im < 0.0);
        assert!(m.residual_abs <= cfg.tol_residual);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = RootConfig::default();
        assert!(matches!(
            tmm_solve(0.0, 0.1, 0.0, c(0.1, 0.0), &cfg),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            tmm_residual(c(1.0, 0.0), 0.5, 0.1, 0.0),
            Err(Error::Singularity(_))
        ));
    }

    proptest! {
        #[test]
        fn real_below_light_line(k in 0.01f64..2.0, frac in 0.01f64..0.99, d in 0.001f64..1.0) {
            let w = frac * k.min(0.999);
            prop_assume!((w - 1.0).abs() > 1e-6);
            let f = tmm_residual(c(w, 0.0), k, d, 0.0).unwrap();
            prop_assert!(f.im.abs() <= 1e-14 * f.re.abs().max(1.0));
        }
    }
}
