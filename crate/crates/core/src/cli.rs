//! Command-line front end: `solve`, `sweep`, `validate`.
//!
//! Exit codes: 0 success, 1 usage or input error (including an unreadable
//! config file), 2 non-convergence (output is still written), 3 I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gcoeff::{load_g_table, GModel};
use crate::model::{FilmParams, Scaling, LIGHT_SPEED_CGS};
use crate::output::{emit_csv, emit_json, point_record, sweep_document, Document, Layout};
use crate::rootfind::{solve_point, RootConfig};
use crate::sweep::{sweep_dispersion, Grid, SweepRequest, SweepResult, VERSION};
use crate::validate::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "plasmon",
    version,
    about = "Surface-plasmon dispersion of thin metallic films"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the mode at one wavevector.
    Solve(RunOptions),
    /// Sweep the dispersion curve over a wavevector grid.
    Sweep(RunOptions),
    /// Run a built-in validation suite.
    Validate(ValidateOptions),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GModelArg {
    Zero,
    Constant,
    Drude,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridArg {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    /// Gaussian units: k in 1/cm, omega in rad/s.
    Cgs,
}

/// Flags shared by `solve` and `sweep`. Every field may also come from a
/// JSON config file with the same kebab-case keys; flags take precedence.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunOptions {
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub k_min: Option<f64>,
    #[arg(long)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub k_steps: Option<usize>,
    #[arg(long, value_enum)]
    pub grid: Option<GridArg>,
    /// Film thickness in units of c/omega_p.
    #[arg(long)]
    pub d: Option<f64>,
    /// Collision rate in units of omega_p.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long, value_enum)]
    pub gmodel: Option<GModelArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub g0_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g0_im: Option<f64>,
    #[arg(long)]
    pub g_table: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub seed_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub seed_im: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    #[serde(default)]
    pub compare_tmm: bool,
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plasma frequency in rad/s; adds physical-unit columns.
    #[arg(long)]
    pub omega_p: Option<f64>,
    #[arg(long, value_enum)]
    pub unit_system: Option<UnitSystem>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateOptions {
    /// closedform | expansion | impedance | tmm | all
    #[arg(long)]
    pub suite: String,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($field:ident),*) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )*
    };
}

impl RunOptions {
    /// Loads the config file (if any) and overlays the command-line flags.
    pub fn resolve(self) -> Result<RunOptions> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path).map_err(|e| {
            Error::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut merged: RunOptions = serde_json::from_str(&text)
            .map_err(|e| Error::Validation(format!("config {}: {e}", path.display())))?;
        let flags = self;
        overlay!(merged, flags; k, k_min, k_max, k_steps, grid, d, nu, gmodel, g0_re, g0_im,
            g_table, seed_re, seed_im, tol, max_iter, output, out, omega_p, unit_system);
        merged.compare_tmm |= flags.compare_tmm;
        merged.config = flags.config;
        Ok(merged)
    }
}

/// Fully validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub film: FilmParams,
    pub cfg: RootConfig,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: Option<Complex64>,
    pub scaling: Option<Scaling>,
}

fn positive(name: &str, v: Option<f64>) -> Result<f64> {
    match v {
        Some(x) if x.is_finite() && x > 0.0 => Ok(x),
        Some(_) => Err(Error::Validation(format!("{name} must be positive"))),
        None => Err(Error::Validation(format!("--{name} is required"))),
    }
}

impl RunConfig {
    pub fn from_options(o: &RunOptions) -> Result<Self> {
        let d = positive("d", o.d)?;
        let nu = o.nu.unwrap_or(0.0);
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::Validation("nu must be non-negative".into()));
        }
        let g_model = match o.gmodel.unwrap_or(GModelArg::Drude) {
            GModelArg::Zero => GModel::Zero,
            GModelArg::Drude => GModel::Drude,
            GModelArg::Constant => {
                if o.g0_re.is_none() && o.g0_im.is_none() {
                    return Err(Error::Validation(
                        "--gmodel constant needs --g0-re and/or --g0-im".into(),
                    ));
                }
                GModel::constant(Complex64::new(
                    o.g0_re.unwrap_or(0.0),
                    o.g0_im.unwrap_or(0.0),
                ))?
            }
            GModelArg::Table => {
                let path = o.g_table.as_ref().ok_or_else(|| {
                    Error::Validation("--gmodel table needs --g-table PATH".into())
                })?;
                load_g_table(path)?
            }
        };
        let film = FilmParams::new(d, nu, g_model).map_err(|e| Error::Validation(e.to_string()))?;

        let mut cfg = RootConfig::default();
        if let Some(tol) = o.tol {
            cfg.tol_residual = tol;
        }
        if let Some(n) = o.max_iter {
            cfg.max_iter = n;
        }
        cfg.validate()?;

        let seed = match (o.seed_re, o.seed_im) {
            (None, None) => None,
            (re, im) => Some(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
        };
        if let Some(s) = seed {
            if s == Complex64::new(0.0, 0.0) || !(s.re.is_finite() && s.im.is_finite()) {
                return Err(Error::Validation("seed must be finite and nonzero".into()));
            }
        }

        let scaling = match (o.omega_p, o.unit_system) {
            (Some(wp), _) => Some(
                Scaling::with_light_speed(wp, LIGHT_SPEED_CGS)
                    .map_err(|e| Error::Validation(e.to_string()))?,
            ),
            (None, Some(_)) => {
                return Err(Error::Validation("--unit-system needs --omega-p".into()))
            }
            (None, None) => None,
        };

        Ok(Self {
            film,
            cfg,
            format: o.output.unwrap_or(OutputFormat::Csv),
            out: o.out.clone(),
            seed,
            scaling,
        })
    }
}

/// Writes `bytes` to `path` atomically, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.flush()?;
            // the temporary is deleted on drop if persisting fails
            tmp.persist(path)
                .map_err(|e| Error::Io(e.error.to_string()))?;
            Ok(())
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::NotConverged(_) | Error::EmptySweep(_) => EXIT_NOT_CONVERGED,
        _ => EXIT_USAGE,
    }
}

fn run_config_metadata(rc: &RunConfig) -> serde_json::Value {
    json!({
        "film": rc.film,
        "root_config": rc.cfg,
        "scaling": rc.scaling,
    })
}

pub fn cmd_solve(opts: RunOptions, err: &mut dyn Write) -> i32 {
    let result = (|| -> Result<i32> {
        let opts = opts.resolve()?;
        let k = match opts.k {
            Some(k) if k.is_finite() && k > 0.0 => k,
            Some(_) => return Err(Error::Validation("k must be positive".into())),
            None => return Err(Error::Validation("--k is required".into())),
        };
        let rc = RunConfig::from_options(&opts)?;
        let p = solve_point(k, &rc.film, rc.seed, &rc.cfg)?;
        let record = point_record(&p, None, rc.scaling.as_ref());
        let layout = Layout {
            compare_tmm: false,
            scaling: rc.scaling,
        };
        let bytes = match rc.format {
            OutputFormat::Csv => emit_csv(std::slice::from_ref(&record), &layout)?,
            OutputFormat::Json => {
                let mut metadata = run_config_metadata(&rc);
                metadata["command"] = json!("solve");
                metadata["k"] = json!(k);
                metadata["seed"] = json!(rc.seed);
                metadata["version"] = json!(VERSION);
                emit_json(&Document {
                    metadata,
                    points: vec![record],
                    failures: Vec::new(),
                })?
            }
        };
        write_output(rc.out.as_deref(), &bytes)?;
        if !p.converged {
            let _ = writeln!(
                err,
                "not converged: |F| = {:e} after {} iterations",
                p.residual_abs, p.iterations
            );
            return Ok(EXIT_NOT_CONVERGED);
        }
        Ok(EXIT_OK)
    })();
    finish(result, err)
}

pub fn cmd_sweep(opts: RunOptions, err: &mut dyn Write) -> i32 {
    let result = (|| -> Result<i32> {
        let opts = opts.resolve()?;
        let rc = RunConfig::from_options(&opts)?;
        let req = SweepRequest {
            k_min: positive("k-min", opts.k_min)?,
            k_max: positive("k-max", opts.k_max)?,
            n_points: opts.k_steps.unwrap_or(20),
            grid: match opts.grid.unwrap_or(GridArg::Linear) {
                GridArg::Linear => Grid::Linear,
                GridArg::Log => Grid::Log,
            },
            film: rc.film.clone(),
            cfg: rc.cfg,
            compare_tmm: opts.compare_tmm,
        };
        req.validate()?;
        let result = match sweep_dispersion(&req) {
            Ok(r) => r,
            Err(Error::EmptySweep(reasons)) => SweepResult::all_failed(&req, reasons),
            Err(e) => return Err(e),
        };
        let layout = Layout {
            compare_tmm: req.compare_tmm,
            scaling: rc.scaling,
        };
        let mut metadata = run_config_metadata(&rc);
        metadata["command"] = json!("sweep");
        metadata["request"] = json!(result.metadata.request);
        metadata["version"] = json!(result.metadata.version);
        let doc = sweep_document(&result, &layout, metadata);
        let bytes = match rc.format {
            OutputFormat::Csv => emit_csv(&doc.points, &layout)?,
            OutputFormat::Json => emit_json(&doc)?,
        };
        write_output(rc.out.as_deref(), &bytes)?;
        if !result.failures.is_empty() {
            for f in &result.failures {
                let _ = writeln!(err, "k = {:e}: {}", f.k, f.reason);
            }
            return Ok(EXIT_NOT_CONVERGED);
        }
        Ok(EXIT_OK)
    })();
    finish(result, err)
}

pub fn cmd_validate(opts: ValidateOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let suites: Vec<Suite> = if opts.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match opts.suite.parse::<Suite>() {
            Ok(s) => vec![s],
            Err(e) => {
                let _ = writeln!(
                    err,
                    "error: {e} (expected closedform, expansion, impedance, tmm or all)"
                );
                return EXIT_USAGE;
            }
        }
    };
    let mut all_passed = true;
    for suite in suites {
        for check in run_suite(suite) {
            all_passed &= check.passed;
            if writeln!(out, "[{}] {check}", suite.name()).is_err() {
                return EXIT_IO;
            }
        }
    }
    if all_passed {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

fn finish(result: Result<i32>, err: &mut dyn Write) -> i32 {
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Parses `args` and runs the selected command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match cli.command {
        Command::Solve(o) => cmd_solve(o, err),
        Command::Sweep(o) => cmd_sweep(o, err),
        Command::Validate(o) => cmd_validate(o, out, err),
    }
}
