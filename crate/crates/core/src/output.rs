//! CSV and JSON emission.
//!
//! Floats are rounded to 12 significant digits. CSV cells use scientific
//! notation (`4.96138938357e-1`); JSON carries the same rounded values as
//! plain numbers. Rows are in ascending `K`. Non-finite values become `NaN` /
//! `inf` in CSV and `null` in JSON.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dispersion::DispersionPoint;
use crate::error::{Error, Result};
use crate::model::Scaling;
use crate::sweep::{comparison_row, SweepResult};
use crate::tmm::SlabMode;

pub const CSV_HEADER: [&str; 10] = [
    "k",
    "omega_re",
    "omega_im",
    "alpha_re",
    "alpha_im",
    "g_re",
    "g_im",
    "residual_abs",
    "iterations",
    "converged",
];
pub const TMM_HEADER: [&str; 3] = ["omega_tmm_re", "omega_tmm_im", "rel_diff"];
pub const PHYSICAL_HEADER: [&str; 3] = ["k_phys", "omega_phys_re", "omega_phys_im"];

/// Rounds to 12 significant digits. Negative zero becomes zero.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse::<f64>().unwrap_or(x) + 0.0
    } else {
        x
    }
}

/// Fixed 12-significant-digit scientific rendering.
pub fn fmt_sci(x: f64) -> String {
    format!("{:.11e}", x + 0.0)
}

mod sig12 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(super::round12(*x))
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// One output row; shared by CSV and JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    #[serde(with = "sig12")]
    pub k: f64,
    #[serde(with = "sig12")]
    pub omega_re: f64,
    #[serde(with = "sig12")]
    pub omega_im: f64,
    #[serde(with = "sig12")]
    pub alpha_re: f64,
    #[serde(with = "sig12")]
    pub alpha_im: f64,
    #[serde(with = "sig12")]
    pub g_re: f64,
    #[serde(with = "sig12")]
    pub g_im: f64,
    #[serde(with = "sig12")]
    pub residual_abs: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub tmm: Option<TmmColumns>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalColumns>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
/// Oracle columns; NaN when the oracle did not converge at that `K`.
pub struct TmmColumns {
    #[serde(with = "sig12")]
    pub omega_tmm_re: f64,
    #[serde(with = "sig12")]
    pub omega_tmm_im: f64,
    #[serde(with = "sig12")]
    pub rel_diff: f64,
}

/// Physical-unit echo: `k` in 1/cm, `ω` in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalColumns {
    #[serde(with = "sig12")]
    pub k_phys: f64,
    #[serde(with = "sig12")]
    pub omega_phys_re: f64,
    #[serde(with = "sig12")]
    pub omega_phys_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    #[serde(with = "sig12")]
    pub k: f64,
    pub reason: String,
}

/// Top-level JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub metadata: Value,
    pub points: Vec<PointRecord>,
    pub failures: Vec<FailureRecord>,
}

/// Options that change the table layout.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Layout {
    pub compare_tmm: bool,
    pub scaling: Option<Scaling>,
}

pub fn point_record(
    p: &DispersionPoint,
    tmm: Option<Option<&SlabMode>>,
    scaling: Option<&Scaling>,
) -> PointRecord {
    PointRecord {
        k: round12(p.k),
        omega_re: round12(p.omega.re),
        omega_im: round12(p.omega.im),
        alpha_re: round12(p.alpha.re),
        alpha_im: round12(p.alpha.im),
        g_re: round12(p.g.re),
        g_im: round12(p.g.im),
        residual_abs: round12(p.residual_abs),
        iterations: p.iterations,
        converged: p.converged,
        tmm: tmm.map(|m| match m {
            Some(m) => {
                let row = comparison_row(p.k, p.omega, m.omega);
                TmmColumns {
                    omega_tmm_re: round12(m.omega.re),
                    omega_tmm_im: round12(m.omega.im),
                    rel_diff: round12(row.rel_diff),
                }
            }
            None => TmmColumns {
                omega_tmm_re: f64::NAN,
                omega_tmm_im: f64::NAN,
                rel_diff: f64::NAN,
            },
        }),
        physical: scaling.map(|s| PhysicalColumns {
            k_phys: round12(p.k / s.skin_depth()),
            omega_phys_re: round12(p.omega.re * s.plasma_frequency),
            omega_phys_im: round12(p.omega.im * s.plasma_frequency),
        }),
    }
}

/// Builds the JSON document for a sweep.
pub fn sweep_document(result: &SweepResult, layout: &Layout, metadata: Value) -> Document {
    let records = result
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let tmm = layout.compare_tmm.then(|| {
                result
                    .tmm_points
                    .as_ref()
                    .and_then(|t| t.get(i))
                    .and_then(Option::as_ref)
            });
            point_record(p, tmm, layout.scaling.as_ref())
        })
        .collect();
    let mut failures: Vec<FailureRecord> = result
        .failures
        .iter()
        .map(|f| FailureRecord {
            k: round12(f.k),
            reason: f.reason.clone(),
        })
        .collect();
    failures.sort_by(|a, b| a.k.total_cmp(&b.k));
    Document {
        metadata,
        points: sorted(records),
        failures,
    }
}

fn sorted(mut records: Vec<PointRecord>) -> Vec<PointRecord> {
    records.sort_by(|a, b| a.k.total_cmp(&b.k));
    records
}

fn header(layout: &Layout) -> Vec<&'static str> {
    let mut h = CSV_HEADER.to_vec();
    if layout.compare_tmm {
        h.extend(TMM_HEADER);
    }
    if layout.scaling.is_some() {
        h.extend(PHYSICAL_HEADER);
    }
    h
}

fn opt_cell(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".to_string(), fmt_sci)
}

/// Renders records as CSV bytes.
pub fn emit_csv(records: &[PointRecord], layout: &Layout) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header(layout)).map_err(io)?;
    for r in records {
        let mut row = vec![
            fmt_sci(r.k),
            fmt_sci(r.omega_re),
            fmt_sci(r.omega_im),
            fmt_sci(r.alpha_re),
            fmt_sci(r.alpha_im),
            fmt_sci(r.g_re),
            fmt_sci(r.g_im),
            fmt_sci(r.residual_abs),
            r.iterations.to_string(),
            r.converged.to_string(),
        ];
        if layout.compare_tmm {
            let t = r.tmm.as_ref();
            row.push(opt_cell(t.map(|t| t.omega_tmm_re)));
            row.push(opt_cell(t.map(|t| t.omega_tmm_im)));
            row.push(opt_cell(t.map(|t| t.rel_diff)));
        }
        if layout.scaling.is_some() {
            let p = r.physical.as_ref();
            row.push(opt_cell(p.map(|p| p.k_phys)));
            row.push(opt_cell(p.map(|p| p.omega_phys_re)));
            row.push(opt_cell(p.map(|p| p.omega_phys_im)));
        }
        w.write_record(&row).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

/// Renders a document as pretty JSON with a trailing newline.
pub fn emit_json(doc: &Document) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(doc).map_err(|e| Error::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// CSV for a whole sweep.
pub fn sweep_csv(result: &SweepResult, layout: &Layout) -> Result<Vec<u8>> {
    let doc = sweep_document(result, layout, Value::Null);
    emit_csv(&doc.points, layout)
}

/// JSON for a whole sweep; the metadata echoes the request and version.
pub fn sweep_json(result: &SweepResult, layout: &Layout) -> Result<Vec<u8>> {
    let metadata = serde_json::json!({
        "request": result.metadata.request,
        "version": result.metadata.version,
    });
    emit_json(&sweep_document(result, layout, metadata))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn point(k: f64) -> DispersionPoint {
        DispersionPoint {
            k,
            omega: Complex64::new(0.496_138_938_356_834_1, -1.5e-9),
            alpha: Complex64::new(0.062, 0.0),
            g: Complex64::new(-1.0 / 3.0, 0.0),
            residual_abs: 3.3e-16,
            iterations: 4,
            converged: true,
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(fmt_sci(0.496_138_938_356_834_1), "4.96138938357e-1");
        assert_eq!(round12(0.496_138_938_356_834_1), 0.496_138_938_357);
        assert_eq!(fmt_sci(0.0), "0.00000000000e0");
    }

    #[test]
    fn empty_table_is_header_only() {
        let bytes = emit_csv(&[], &Layout::default()).unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "k,omega_re,omega_im,alpha_re,alpha_im,g_re,g_im,residual_abs,iterations,converged\n"
        );
    }

    #[test]
    fn one_point_two_lines() {
        let rec = point_record(&point(0.5), None, None);
        let text = String::from_utf8(emit_csv(&[rec], &Layout::default()).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert_eq!(
            lines[1],
            "5.00000000000e-1,4.96138938357e-1,-1.50000000000e-9,6.20000000000e-2,0.00000000000e0,\
             -3.33333333333e-1,0.00000000000e0,3.30000000000e-16,4,true"
        );
    }

    #[test]
    fn tmm_columns() {
        let p = point(0.5);
        let m = SlabMode {
            k: 0.5,
            omega: Complex64::new(0.5, 0.0),
            kappa_out: Complex64::new(0.01, 0.0),
            kappa_in: Complex64::new(1.0, 0.0),
            symmetry: crate::tmm::ModeSymmetry::HySymmetric,
            residual_abs: 0.0,
            iterations: 1,
        };
        let layout = Layout {
            compare_tmm: true,
            scaling: None,
        };
        let recs = [
            point_record(&p, Some(Some(&m)), None),
            point_record(&p, Some(None), None),
        ];
        let text = String::from_utf8(emit_csv(&recs, &layout).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].ends_with(",omega_tmm_re,omega_tmm_im,rel_diff"));
        assert_eq!(lines[1].split(',').count(), 13);
        assert!(lines[2].ends_with("NaN,NaN,NaN"));
    }

    #[test]
    fn json_round_trip() {
        let recs = vec![point_record(
            &point(0.5),
            None,
            Some(&Scaling::new(1e16).unwrap()),
        )];
        let doc = Document {
            metadata: serde_json::json!({"version": "x"}),
            points: recs,
            failures: vec![FailureRecord {
                k: 0.7,
                reason: "not converged".into(),
            }],
        };
        let bytes = emit_json(&doc).unwrap();
        let back: Document = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.points[0].omega_re, 0.496_138_938_357);
        assert_eq!(emit_json(&back).unwrap(), bytes);
    }
}
