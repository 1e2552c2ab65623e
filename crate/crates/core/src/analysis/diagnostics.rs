use serde::Serialize;

use super::norm::{weighted_l1_norm, NormSpec};
use crate::error::{Error, Result};
use crate::series::SeriesSolution;

/// `γᵢ = ‖f_{i+1}‖/‖fᵢ‖` for every consecutive pair, `γᵢ = 0` when `‖fᵢ‖ = 0`.
pub fn gamma_ratios(series: &SeriesSolution, spec: &NormSpec) -> Result<Vec<(usize, f64)>> {
    if series.order() < 1 {
        return Err(Error::Precondition("need at least two components".into()));
    }
    let norms = series
        .components()
        .iter()
        .map(|f| weighted_l1_norm(f, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(norms
        .windows(2)
        .enumerate()
        .map(|(i, w)| (i, if w[0] == 0.0 { 0.0 } else { w[1] / w[0] }))
        .collect())
}

/// `1/e + (3/e)·M₂(0)·L·ς`.
pub fn contraction_eta(m2_0: f64, l: f64, s: f64) -> f64 {
    let e = std::f64::consts::E;
    1.0 / e + 3.0 / e * m2_0 * l * s
}

/// `η^m ‖f₁‖ / (1 − η)`.
pub fn odm_error_bound(m: u32, eta: f64, norm_f1: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::EtaOutOfRange(eta));
    }
    Ok(eta.powi(m as i32) * norm_f1 / (1.0 - eta))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub gammas: Vec<(usize, f64)>,
    pub eta: f64,
    pub bound_values: Vec<(u32, f64)>,
    pub table_rows: Vec<(f64, usize, f64)>,
}
