//! Dimensionless scaling and the shared physical vocabulary.
//!
//! Everything downstream works in plasma units: frequencies in units of the
//! plasma frequency `ω_p`, lengths in units of the skin depth `δ₀ = c/ω_p`.
//! With that choice
//!
//! * `Ω = ω/ω_p`
//! * `K = k·c/ω_p`
//! * `D = d·ω_p/c`
//!
//! and neither `c` nor `ω_p` appears in any formula. The time dependence of
//! all fields is `e^{−iωt}`, so a dissipative mode has `Im Ω ≤ 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcoeff::GModel;

/// Speed of light in vacuum, cm/s (Gaussian units).
pub const LIGHT_SPEED_CGS: f64 = 2.997_924_58e10;

/// Absolute scale of a problem: plasma frequency and speed of light.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    /// ω_p in rad/s.
    pub plasma_frequency: f64,
    /// c in cm/s.
    pub light_speed: f64,
}

/// A `(D, K, Ω)` triple in plasma units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalized {
    pub thickness: f64,
    pub wavevector: f64,
    pub omega: Complex64,
}

impl Scaling {
    /// Scaling in Gaussian units with the given plasma frequency.
    pub fn new(plasma_frequency: f64) -> Result<Self> {
        Self::with_light_speed(plasma_frequency, LIGHT_SPEED_CGS)
    }

    pub fn with_light_speed(plasma_frequency: f64, light_speed: f64) -> Result<Self> {
        if !(plasma_frequency.is_finite() && plasma_frequency > 0.0) {
            return Err(Error::Domain(format!(
                "plasma frequency must be positive, got {plasma_frequency}"
            )));
        }
        if !(light_speed.is_finite() && light_speed > 0.0) {
            return Err(Error::Domain(format!(
                "light speed must be positive, got {light_speed}"
            )));
        }
        Ok(Self {
            plasma_frequency,
            light_speed,
        })
    }

    /// Infra-red skin depth `δ₀ = c/ω_p`, the unit of length.
    pub fn skin_depth(&self) -> f64 {
        self.light_speed / self.plasma_frequency
    }

    /// Converts physical `(d, k, ω)` to plasma units.
    pub fn normalize(&self, d: f64, k: f64, omega: Complex64) -> Result<Normalized> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::Domain(format!(
                "thickness must be positive, got {d}"
            )));
        }
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::Domain(format!(
                "wavevector must be non-negative, got {k}"
            )));
        }
        Ok(Normalized {
            thickness: d * self.plasma_frequency / self.light_speed,
            wavevector: k * self.light_speed / self.plasma_frequency,
            omega: omega / self.plasma_frequency,
        })
    }

    /// Inverse of [`Scaling::normalize`]; returns `(d, k, ω)`.
    pub fn denormalize(&self, n: &Normalized) -> (f64, f64, Complex64) {
        (
            n.thickness * self.light_speed / self.plasma_frequency,
            n.wavevector * self.plasma_frequency / self.light_speed,
            n.omega * self.plasma_frequency,
        )
    }
}

/// The physical problem: a film of dimensionless thickness `D` with
/// collision rate `ν/ω_p` and a choice of G model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilmParams {
    thickness: f64,
    collision_rate: f64,
    g_model: GModel,
}

impl FilmParams {
    pub fn new(thickness: f64, collision_rate: f64, g_model: GModel) -> Result<Self> {
        if !(thickness.is_finite() && thickness > 0.0) {
            return Err(Error::Domain(format!(
                "film thickness must be positive, got {thickness}"
            )));
        }
        if !(collision_rate.is_finite() && collision_rate >= 0.0) {
            return Err(Error::Domain(format!(
                "collision rate must be non-negative, got {collision_rate}"
            )));
        }
        Ok(Self {
            thickness,
            collision_rate,
            g_model,
        })
    }

    /// Dimensionless thickness `D = d·ω_p/c`.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// Dimensionless collision rate `ν/ω_p`.
    pub fn collision_rate(&self) -> f64 {
        self.collision_rate
    }

    pub fn g_model(&self) -> &GModel {
        &self.g_model
    }

    /// `D < 1`, i.e. the film is thinner than the infra-red skin depth and the
    /// thin-film reduction holds at every frequency.
    pub fn is_thin(&self) -> bool {
        self.thickness < 1.0
    }
}

/// Exterior damping parameter `α = √(K² − Ω²)`.
///
/// The branch has `Re α ≥ 0` so that fields decay away from the film; on the
/// cut (`Re α = 0`) the root with `Im α ≥ 0` is returned.
pub fn alpha(k: f64, omega: Complex64) -> Complex64 {
    // (K − Ω)(K + Ω) keeps precision next to the light line
    let kc = Complex64::new(k, 0.0);
    decay_root((kc - omega) * (kc + omega))
}

/// Square root on the `Re ≥ 0` branch with the `Im ≥ 0` tie-break.
pub(crate) fn decay_root(z: Complex64) -> Complex64 {
    let mut r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        r = -r;
    }
    r
}

/// Drude dielectric function `ε(Ω) = 1 − 1/(Ω(Ω + iν))`.
pub fn epsilon_drude(omega: Complex64, collision_rate: f64) -> Result<Complex64> {
    let denom = omega * (omega + Complex64::new(0.0, collision_rate));
    if denom == Complex64::new(0.0, 0.0) {
        let pole = if omega == Complex64::new(0.0, 0.0) {
            "Omega = 0".to_string()
        } else {
            format!("Omega = -i*nu = {omega}")
        };
        return Err(Error::Pole(pole));
    }
    Ok(Complex64::new(1.0, 0.0) - denom.inv())
}
