//! Dispersion residual of a thin film, its impedance form, the low-frequency
//! closed forms, and exterior/interior field reconstruction.
//!
//! In plasma units the film side of the boundary has impedance
//! `Z_layer = i(KD/2)(1 − G·K/Ω)` and the vacuum side `Z_out = iα/Ω`.
//! Equating them and clearing `Ω` gives the residual
//!
//! ```text
//! F(Ω) = √(K² − Ω²) − (KD/2)(Ω − G·K)
//! ```
//!
//! whose zeros are the surface-plasmon modes with `H_y` symmetric and `E_z`
//! antisymmetric about the film middle.
//!
//! The layer impedance is implemented as written in the source derivation.
//! Carrying out the `∫ E_z'` step term by term actually yields
//! `−iΩ D H_y + iK G (K/Ω) D H_y` rather than `iKD(1 − GK/Ω)H_y`; the two
//! coincide on the light line `Ω = K`, which is where thin-film modes live.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcoeff::g_value;
use crate::model::{alpha, FilmParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One solved mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub k: f64,
    pub omega: Complex64,
    pub alpha: Complex64,
    pub g: Complex64,
    pub residual_abs: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn nonzero_omega(omega: Complex64) -> Result<()> {
    if omega == Complex64::new(0.0, 0.0) {
        Err(Error::Singularity(
            "impedance is undefined at Omega = 0".into(),
        ))
    } else {
        Ok(())
    }
}

/// Film-side surface impedance `i(KD/2)(1 − gK/Ω)`.
pub fn z_layer(omega: Complex64, k: f64, d: f64, g: Complex64) -> Result<Complex64> {
    nonzero_omega(omega)?;
    Ok(I * (0.5 * k * d) * (1.0 - g * k / omega))
}

/// Vacuum-side surface impedance `iα/Ω`.
pub fn z_outside(omega: Complex64, k: f64) -> Result<Complex64> {
    nonzero_omega(omega)?;
    Ok(I * alpha(k, omega) / omega)
}

/// Residual for an explicit `g`, with no model lookup.
pub fn residual_with_g(omega: Complex64, k: f64, d: f64, g: Complex64) -> Complex64 {
    alpha(k, omega) - 0.5 * k * d * (omega - g * k)
}

/// Dispersion residual `F(Ω)` for a film.
pub fn residual(omega: Complex64, k: f64, film: &FilmParams) -> Result<Complex64> {
    let g = g_value(film.g_model(), omega, k, film.collision_rate())?.g;
    Ok(residual_with_g(omega, k, film.thickness(), g))
}

/// Root of the `G = 0` residual, `Ω = 2K/√(4 + K²D²)`.
pub fn closed_form_lowfreq(k: f64, d: f64) -> f64 {
    2.0 * k / (4.0 + k * k * d * d).sqrt()
}

/// Leading small-`KD` expansion `K(1 − K²D²/8)`. Degrades for `KD ≳ 1`.
pub fn smallk_expansion(k: f64, d: f64) -> f64 {
    k * (1.0 - k * k * d * d / 8.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Below,
    Inside,
    Above,
}

/// Field amplitudes at one position, normalized to `H_y(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: f64,
    pub region: Region,
    pub e_x: Complex64,
    pub e_z: Complex64,
    pub h_y: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldProfile {
    pub k: f64,
    pub omega: Complex64,
    pub thickness: f64,
    pub samples: Vec<FieldSample>,
}

/// Field at position `x` for a converged mode in a film of thickness `d`.
///
/// Outside, `H_y` decays as `e^{αx}` below and `e^{α(D−x)}` above, with
/// `E_x = (K/Ω)H_y` and `E_z = ±(iα/Ω)H_y`. Inside, `H_y` is constant, the
/// normal field is `G·(K/Ω)H_y`, and `E_z` runs linearly from `Z_layer·H_y`
/// at `x = 0` to its negative at `x = D`.
pub fn field_at(point: &DispersionPoint, d: f64, x: f64) -> Result<FieldSample> {
    if !point.converged {
        return Err(Error::State("field profile needs a converged mode".into()));
    }
    let omega = point.omega;
    nonzero_omega(omega)?;
    let k = point.k;
    let a = point.alpha;
    let ex_ratio = k / omega;
    let sample = if x < 0.0 {
        let h = (a * x).exp();
        FieldSample {
            x,
            region: Region::Below,
            e_x: ex_ratio * h,
            e_z: I * a / omega * h,
            h_y: h,
        }
    } else if x > d {
        let h = (a * (d - x)).exp();
        FieldSample {
            x,
            region: Region::Above,
            e_x: ex_ratio * h,
            e_z: -I * a / omega * h,
            h_y: h,
        }
    } else {
        let h = Complex64::new(1.0, 0.0);
        let ez0 = z_layer(omega, k, d, point.g)? * h;
        FieldSample {
            x,
            region: Region::Inside,
            e_x: point.g * ex_ratio * h,
            e_z: ez0 * (1.0 - 2.0 * x / d),
            h_y: h,
        }
    };
    Ok(sample)
}

/// Samples the mode on `n_samples` evenly spaced points of `[x_min, x_max]`.
pub fn field_profile(
    point: &DispersionPoint,
    d: f64,
    x_min: f64,
    x_max: f64,
    n_samples: usize,
) -> Result<FieldProfile> {
    if !point.converged {
        return Err(Error::State("field profile needs a converged mode".into()));
    }
    if !(x_min < 0.0 && 0.0 < d && d < x_max) {
        return Err(Error::Domain(format!(
            "need x_min < 0 < D < x_max, got x_min = {x_min}, D = {d}, x_max = {x_max}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::Domain("need at least 2 samples".into()));
    }
    let step = (x_max - x_min) / (n_samples - 1) as f64;
    let samples = (0..n_samples)
        .map(|i| {
            let x = if i == n_samples - 1 {
                x_max
            } else {
                x_min + step * i as f64
            };
            field_at(point, d, x)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldProfile {
        k: point.k,
        omega: point.omega,
        thickness: d,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcoeff::GModel;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zero_film(d: f64) -> FilmParams {
        FilmParams::new(d, 0.0, GModel::Zero).unwrap()
    }

    #[test]
    fn z_layer_examples() {
        assert!(
            (z_layer(c(1.0, 0.0), 1.0, 1.0, c(0.0, 0.0)).unwrap() - c(0.0, 0.5)).norm() < 1e-15
        );
        assert!(
            (z_layer(c(0.5, 0.0), 1.0, 0.2, c(0.0, 0.0)).unwrap() - c(0.0, 0.1)).norm() < 1e-15
        );
        assert!(
            (z_layer(c(1.0, 0.0), 1.0, 1.0, c(-1.0, 0.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15
        );
        assert!(matches!(
            z_layer(c(0.0, 0.0), 1.0, 1.0, c(0.0, 0.0)),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn z_outside_examples() {
        assert!((z_outside(c(0.8, 0.0), 1.0).unwrap() - c(0.0, 0.75)).norm() < 1e-15);
        assert_eq!(z_outside(c(0.7, 0.0), 0.7).unwrap(), c(0.0, 0.0));
        assert!((z_outside(c(1.25, 0.0), 1.0).unwrap() - c(-0.6, 0.0)).norm() < 1e-15);
        assert!(z_outside(c(0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn residual_examples() {
        let f = residual(c(2f64.sqrt(), 0.0), 2.0, &zero_film(1.0)).unwrap();
        assert!(f.norm() < 1e-15);
        assert_eq!(
            residual(c(0.0, 0.0), 0.0, &zero_film(1.0)).unwrap(),
            c(0.0, 0.0)
        );
        // K = 0 leaves only the exterior term √(−Ω²) = i|Ω|
        let f = residual(c(0.3, 0.0), 0.0, &zero_film(1.0)).unwrap();
        assert!((f - c(0.0, 0.3)).norm() < 1e-15);
        let f = residual(c(0.496_139, 0.0), 0.5, &zero_film(0.5)).unwrap();
        assert!(f.norm() <= 1e-6);
    }

    #[test]
    fn residual_propagates_model_errors() {
        let film = FilmParams::new(0.1, 0.0, GModel::Drude).unwrap();
        assert!(residual(c(1.0, 0.0), 2.0, &film).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_lowfreq(2.0, 1.0) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(closed_form_lowfreq(0.0, 0.3), 0.0);
        assert!((closed_form_lowfreq(0.5, 0.5) - 0.496_138_938_356_834_1).abs() < 1e-15);
        assert!((smallk_expansion(0.1, 1.0) - 0.099_875).abs() < 1e-15);
        assert_eq!(smallk_expansion(0.0, 1.0), 0.0);
        assert_eq!(smallk_expansion(1.0, 0.0), 1.0);
    }

    fn solved(k: f64, d: f64) -> DispersionPoint {
        let w = c(closed_form_lowfreq(k, d), 0.0);
        DispersionPoint {
            k,
            omega: w,
            alpha: alpha(k, w),
            g: c(0.0, 0.0),
            residual_abs: residual(w, k, &zero_film(d)).unwrap().norm(),
            iterations: 0,
            converged: true,
        }
    }

    #[test]
    fn profile_symmetry_and_decay() {
        let d = 0.5;
        let p = solved(1.2, d);
        let s0 = field_at(&p, d, 0.0).unwrap();
        let sd = field_at(&p, d, d).unwrap();
        assert_eq!(s0.h_y, sd.h_y);
        assert!((s0.e_z + sd.e_z).norm() < 1e-13);
        assert!(field_at(&p, d, d / 2.0).unwrap().e_z.norm() < 1e-15);

        let x = -1.0 / p.alpha.re;
        let below = field_at(&p, d, x).unwrap();
        assert!((below.h_y.norm() - (-1f64).exp() * s0.h_y.norm()).abs() < 1e-12);

        // continuity of E_z across the lower face at a converged root
        let just_below = field_at(&p, d, -1e-300).unwrap();
        assert!((just_below.e_z - s0.e_z).norm() < 1e-12);
    }

    #[test]
    fn profile_monotone_exterior() {
        let d = 0.3;
        let p = solved(0.8, d);
        let prof = field_profile(&p, d, -5.0, 5.3, 103).unwrap();
        assert_eq!(prof.samples.len(), 103);
        let below: Vec<_> = prof
            .samples
            .iter()
            .filter(|s| s.region == Region::Below)
            .collect();
        for w in below.windows(2) {
            assert!(w[0].h_y.norm() <= w[1].h_y.norm());
        }
        let above: Vec<_> = prof
            .samples
            .iter()
            .filter(|s| s.region == Region::Above)
            .collect();
        for w in above.windows(2) {
            assert!(w[1].h_y.norm() <= w[0].h_y.norm());
        }
        for s in prof.samples.iter().filter(|s| s.region == Region::Inside) {
            assert_eq!(s.h_y, c(1.0, 0.0));
        }
    }

    #[test]
    fn profile_preconditions() {
        let mut p = solved(0.8, 0.3);
        assert!(matches!(
            field_profile(&p, 0.3, 0.1, 1.0, 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            field_profile(&p, 0.3, -1.0, 1.0, 1),
            Err(Error::Domain(_))
        ));
        p.converged = false;
        assert!(matches!(
            field_profile(&p, 0.3, -1.0, 1.0, 10),
            Err(Error::State(_))
        ));
    }

    proptest! {
        #[test]
        fn impedance_residual_identity(
            r in 0.01f64..2.0,
            phase in -std::f64::consts::PI..std::f64::consts::PI,
            k in 0.01f64..5.0,
            d in 0.01f64..1.0,
            gi in 0usize..3,
        ) {
            let g = [c(0.0, 0.0), c(-1.0 / 3.0, 0.0), c(0.2, -0.1)][gi];
            let w = Complex64::from_polar(r, phase);
            let lhs = w * (z_outside(w, k).unwrap() - z_layer(w, k, d, g).unwrap());
            let rhs = I * residual_with_g(w, k, d, g);
            let scale = alpha(k, w).norm() + 0.5 * k * d * (w.norm() + g.norm() * k);
            prop_assert!((lhs - rhs).norm() <= 1e-13 * scale);
        }

        #[test]
        fn closed_form_is_a_root(k in 0.01f64..5.0, d in 0.01f64..1.0) {
            let w = c(closed_form_lowfreq(k, d), 0.0);
            prop_assert!(residual(w, k, &zero_film(d)).unwrap().norm() <= 1e-12);
        }

        #[test]
        fn closed_form_below_light_line(k in 1e-3f64..10.0, d in 1e-3f64..3.0) {
            prop_assert!(closed_form_lowfreq(k, d) < k);
        }

        #[test]
        fn closed_form_increasing(k in 1e-3f64..10.0, dk in 1e-3f64..1.0, d in 1e-3f64..3.0) {
            prop_assert!(closed_form_lowfreq(k + dk, d) > closed_form_lowfreq(k, d));
        }

        #[test]
        fn expansion_bound(k in 1e-3f64..5.0, frac in 0.0f64..=1.0) {
            let d = (0.5 * frac / k).max(1e-12);
            let kd = k * d;
            let gap = (closed_form_lowfreq(k, d) - smallk_expansion(k, d)).abs();
            prop_assert!(gap <= 0.03 * k * kd.powi(4) + 4.0 * f64::EPSILON * k);
        }
    }

    #[test]
    fn closed_form_tends_to_light_line() {
        let k = 1.7;
        assert!((closed_form_lowfreq(k, 1e-9) - k).abs() < 1e-15);
    }
}
