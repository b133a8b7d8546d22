//! Field-penetration coefficient `G(Ω, K)`.
//!
//! `G` is the film-averaged normal field divided by its value at the
//! boundary, `G = (1/(d·E_x(0)))·∫₀^d E_x dx`, a dimensionless number. It
//! enters the dispersion residual only through the factor `1 − G·K/Ω`.
//!
//! Four closures are offered:
//!
//! * `Zero`: the low-frequency limit `|G| ≪ 1`.
//! * `Constant`: a fixed complex `g0`. Only meaningful away from `Ω = 0`,
//!   where `g0·K/Ω` diverges.
//! * `Drude`: the local closure. With `j_x = σE_x` and `H_y` constant across
//!   the film, the interior normal field is `E_x(0)/ε`, so `G = 1/ε(Ω)`.
//! * `Tabulated`: externally computed values (for instance from a kinetic
//!   boundary-scattering calculation), linearly interpolated in `Re Ω`.

use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::epsilon_drude;

/// Strictly increasing `(Re Ω, G)` samples, at least two of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GTable {
    points: Vec<(f64, Complex64)>,
}

impl GTable {
    pub fn new(points: Vec<(f64, Complex64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Validation(
                "table requires at least 2 points".to_string(),
            ));
        }
        for (i, &(w, g)) in points.iter().enumerate() {
            if !(w.is_finite() && g.re.is_finite() && g.im.is_finite()) {
                return Err(Error::Validation(format!("table entry {i} is not finite")));
            }
        }
        if let Some(i) = points.windows(2).position(|p| p[1].0 <= p[0].0) {
            return Err(Error::Validation(format!(
                "table omega must be strictly increasing (entry {})",
                i + 1
            )));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, Complex64)] {
        &self.points
    }

    /// `(lowest, highest)` tabulated `Re Ω`.
    pub fn range(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Component-wise linear interpolation; knots are returned exactly.
    pub fn interpolate(&self, x: f64) -> Result<Complex64> {
        let (lo, hi) = self.range();
        if !(x >= lo && x <= hi) {
            return Err(Error::Range { value: x, lo, hi });
        }
        let pts = &self.points;
        match pts.binary_search_by(|p| p.0.total_cmp(&x)) {
            Ok(i) => Ok(pts[i].1),
            Err(i) => {
                let (x0, g0) = pts[i - 1];
                let (x1, g1) = pts[i];
                let t = (x - x0) / (x1 - x0);
                Ok(g0 + (g1 - g0) * t)
            }
        }
    }
}

/// How `G` is computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GModel {
    Zero,
    Constant { g0: Complex64 },
    Drude,
    Tabulated(GTable),
}

impl GModel {
    pub fn constant(g0: Complex64) -> Result<Self> {
        if !(g0.re.is_finite() && g0.im.is_finite()) {
            return Err(Error::Validation(format!(
                "constant g0 must be finite, got {g0}"
            )));
        }
        Ok(GModel::Constant { g0 })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            GModel::Zero => "zero",
            GModel::Constant { .. } => "constant",
            GModel::Drude => "drude",
            GModel::Tabulated(_) => "table",
        }
    }
}

/// A computed `G` together with the model that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue {
    pub g: Complex64,
    pub model: &'static str,
}

/// Evaluates `G(Ω, K)` for the given model and collision rate.
///
/// `K` is accepted for interface symmetry; none of the closures here depend
/// on it.
pub fn g_value(model: &GModel, omega: Complex64, _k: f64, collision_rate: f64) -> Result<GValue> {
    let g = match model {
        GModel::Zero => Complex64::new(0.0, 0.0),
        GModel::Constant { g0 } => *g0,
        GModel::Drude => {
            let eps = epsilon_drude(omega, collision_rate)?;
            let g = eps.inv();
            if eps == Complex64::new(0.0, 0.0) || !(g.re.is_finite() && g.im.is_finite()) {
                return Err(Error::Singularity(format!(
                    "epsilon vanishes at Omega = {omega}"
                )));
            }
            g
        }
        GModel::Tabulated(table) => table.interpolate(omega.re)?,
    };
    Ok(GValue {
        g,
        model: model.tag(),
    })
}

/// Reads a G table file (`omega,g_re,g_im` CSV).
pub fn load_g_table(path: impl AsRef<Path>) -> Result<GModel> {
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_g_table(file)
}

/// Parses G table CSV from any reader.
pub fn parse_g_table<R: Read>(source: R) -> Result<GModel> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let header = reader.headers().map_err(csv_error)?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names != ["omega", "g_re", "g_im"] {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `omega,g_re,g_im`, found `{}`",
                names.join(",")
            ),
        });
    }

    let mut points: Vec<(f64, Complex64)> = Vec::new();
    let mut last_line = 1;
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        last_line = line;
        let field = |i: usize, name: &str| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("{name} is not a finite number: `{raw}`"),
                })
        };
        let omega = field(0, "omega")?;
        let g = Complex64::new(field(1, "g_re")?, field(2, "g_im")?);
        if let Some(&(prev, _)) = points.last() {
            if omega <= prev {
                return Err(Error::Parse {
                    line,
                    message: format!("omega must be strictly increasing ({omega} after {prev})"),
                });
            }
        }
        points.push((omega, g));
    }
    if points.len() < 2 {
        return Err(Error::Parse {
            line: last_line,
            message: "table requires at least 2 points".to_string(),
        });
    }
    Ok(GModel::Tabulated(GTable::new(points)?))
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        message: err.to_string(),
    }
}
