//! Norms, convergence diagnostics, moment curves, exact references and
//! error tables.

mod diagnostics;
mod exact;
mod moments;
mod norm;
mod table;

pub use diagnostics::{contraction_eta, gamma_ratios, odm_error_bound, DiagnosticsReport};
pub use exact::{exact_reference, ExactReference, EXAMPLE3_M2_EXPONENT};
pub use moments::{moments_of_series, MomentCurve};
pub use norm::{
    choose_cutoff, composite_gauss, gauss_legendre, weighted_l1_norm, weighted_l1_norm_fn,
    NormMode, NormSpec, DEFAULT_PANELS, DEFAULT_TAIL_TOL, GAUSS_NODES,
};
pub use table::{error_table, grid_error, ErrorGrid, TableRow};

use crate::error::Result;
use crate::expalg::FloatPoly;
use crate::series::SeriesSolution;

/// `‖f − S_m‖` for the order-`m` partial sum against an exact concentration.
pub fn truncation_error_norm(
    series: &SeriesSolution,
    exact: ExactReference,
    m: usize,
    spec: &NormSpec,
) -> Result<f64> {
    // validates availability before quadrature
    exact.eval(0.0, 0.0)?;
    let partial = series.partial_sum(m);
    let fp = FloatPoly::from(&partial);
    let s_max = match spec.mode {
        NormMode::SingleTime(s) => s.abs(),
        NormMode::SupOverGrid { horizon, .. } => horizon.abs(),
    };
    weighted_l1_norm_fn(
        |s, e| exact.eval(s, e).unwrap_or(f64::NAN) - fp.eval(s, e),
        |s, cutoff| {
            fp.tail_bound(s_max, cutoff, 1) + exact.tail_bound(s, cutoff).unwrap_or(f64::INFINITY)
        },
        spec,
    )
}
