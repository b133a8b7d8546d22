//! Surface-plasmon dispersion of thin metallic films.
//!
//! The crate solves the impedance-matching dispersion equation of a film
//! thinner than the skin depth, sweeps `Ω(K)` curves, and checks them
//! against the exact slab-mode condition of a Drude film. All quantities
//! are dimensionless; see [`model`] for the scaling.

pub mod cli;
pub mod dispersion;
pub mod error;
pub mod gcoeff;
pub mod model;
pub mod output;
pub mod rootfind;
pub mod sweep;
pub mod tmm;
pub mod validate;

pub use num_complex;

pub use dispersion::{
    closed_form_lowfreq, field_profile, residual, smallk_expansion, z_layer, z_outside,
    DispersionPoint, FieldProfile,
};
pub use error::{Error, Result};
pub use gcoeff::{g_value, load_g_table, GModel, GTable, GValue};
pub use model::{alpha, epsilon_drude, FilmParams, Scaling};
pub use rootfind::{bisect_real, newton_complex, solve_point, RootConfig, RootResult};
pub use sweep::{compare_tmm, sweep_dispersion, Grid, SweepRequest, SweepResult};
pub use tmm::{tmm_residual, tmm_solve, SlabMode};
