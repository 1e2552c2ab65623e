//! Optimized decomposition: linearize at ς = 0 with `C(ε)`, then
//!
//! ```text
//! f₁ = L⁻¹[Q₀],  f₂ = L⁻¹[Q₁ − C f₁],  f_{k+1} = L⁻¹[Q_k − C (f_k − f_{k−1})]  (k ≥ 2)
//! ```
//!
//! with `Q_k = Σ_{i+j=k} (B − D)(fᵢ, fⱼ)` and `L⁻¹ = ∫₀^ς · dτ`.

use crate::error::{Error, Result};
use crate::expalg::ExpPoly;
use crate::model::CaseSpec;
use crate::series::{Method, SeriesSolution};

/// ODM truncation used for `example2`, whose decomposition converges more slowly.
pub const DEFAULT_ODM_ORDER: usize = 14;

/// `Q_k` by bilinear convolution over `i + j = k`.
pub fn q_polynomial(spec: &CaseSpec, components: &[ExpPoly], k: usize) -> Result<ExpPoly> {
    if components.len() <= k {
        return Err(Error::Precondition(format!(
            "Q_{k} needs components f_0..f_{k}, got {}",
            components.len()
        )));
    }
    let mut q = ExpPoly::zero();
    for i in 0..=k {
        q += &spec.net_rate(&components[i], &components[k - i])?;
    }
    Ok(q)
}

/// `f_{k+1}` from `f_0..f_k`.
pub fn odm_step(spec: &CaseSpec, components: &[ExpPoly], k: usize) -> Result<ExpPoly> {
    let q = q_polynomial(spec, components, k)?;
    let c = spec.linearization_coefficient();
    let rhs = match k {
        0 => q,
        1 => &q - &(&c * &components[1]),
        _ => &q - &(&c * &(&components[k] - &components[k - 1])),
    };
    Ok(rhs.int_time())
}

pub fn odm_solve(spec: &CaseSpec, n: usize) -> Result<SeriesSolution> {
    let mut components = vec![spec.init.poly().clone()];
    for k in 0..n {
        let next = odm_step(spec, &components, k)?;
        components.push(next);
    }
    Ok(SeriesSolution::new(Method::Odm, spec.clone(), components))
}
