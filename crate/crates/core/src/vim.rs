//! Variational iteration with Lagrange multiplier λ = −1:
//!
//! ```text
//! f₀ = f^in,   f_{k+1} = A[φ_k],   A[φ] = ∫₀^ς ( −∂φ/∂τ + B(φ,φ) − D(φ,φ) ) dτ
//! ```

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expalg::{int, Rational, ExpPoly};
use crate::model::CaseSpec;
use crate::series::{Method, SeriesSolution};

/// The correction `A[φ_k]`, i.e. the next component `f_{k+1}`.
///
/// Computed from the full partial sum, then checked against the telescoped
/// form `f^in − φ_k + ∫₀^ς (B − D) dτ`; a disagreement means `phi_k` was not
/// a partial sum of this case.
pub fn vim_step(spec: &CaseSpec, phi_k: &ExpPoly) -> Result<ExpPoly> {
    let integrated_rate = spec.net_rate(phi_k, phi_k)?.int_time();
    let full = &(-&phi_k.ddt()).int_time() + &integrated_rate;
    let shortcut = &(spec.init.poly() - phi_k) + &integrated_rate;
    if full != shortcut {
        return Err(Error::StepMismatch(phi_k.time_degree().unwrap_or(0) as usize));
    }
    Ok(full)
}

pub fn vim_solve(spec: &CaseSpec, n: usize) -> Result<SeriesSolution> {
    let mut components = vec![spec.init.poly().clone()];
    let mut phi = spec.init.poly().clone();
    for k in 0..n {
        let next = vim_step(spec, &phi).map_err(|e| match e {
            Error::StepMismatch(_) => Error::StepMismatch(k + 1),
            other => other,
        })?;
        phi += &next;
        components.push(next);
    }
    Ok(SeriesSolution::new(Method::Vim, spec.clone(), components))
}

/// Outcome of comparing the VIM series of `example1` against its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormReport {
    pub order: usize,
    /// First component whose coefficients differ from the closed pattern.
    pub component_mismatch: Option<(usize, String)>,
    /// Whether φ_n equals the degree-n ς-Taylor truncation of the exact solution.
    pub taylor_match: bool,
}

impl ClosedFormReport {
    pub fn matched(&self) -> bool {
        self.component_mismatch.is_none() && self.taylor_match
    }
}

fn factorial_rat(n: u32) -> Rational {
    (1..=n).fold(int(1), |acc, i| acc * int(i as i64))
}

fn sign(k: u32) -> Rational {
    if k % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// Closed pattern of the k-th component (k ≥ 2):
/// `( (−1)ᵏεᵏ⁻²/(k−2)! + 2(−1)ᵏ⁻¹εᵏ⁻¹/(k−1)! + (−1)ᵏεᵏ/k! ) e^{−ε} ςᵏ`.
pub fn example1_component(k: u32) -> ExpPoly {
    assert!(k >= 2);
    let one = int(1);
    let term = |c: Rational, p: u32| ExpPoly::monomial(c, k, p, one.clone());
    let mut out = term(sign(k) / factorial_rat(k - 2), k - 2);
    out += &term(int(2) * sign(k - 1) / factorial_rat(k - 1), k - 1);
    out += &term(sign(k) / factorial_rat(k), k);
    out
}

/// Degree-n ς-Taylor polynomial of `(1+ς)² e^{−ε(1+ς)}`, built as the
/// truncated product `(1 + 2ς + ς²) · e^{−ε} · Σ_m (−ες)^m / m!`.
pub fn example1_taylor(n: u32) -> ExpPoly {
    let one = int(1);
    let prefactor = ExpPoly::from_terms([
        crate::expalg::Term::new(int(1), 0, 0, one.clone()),
        crate::expalg::Term::new(int(2), 1, 0, one.clone()),
        crate::expalg::Term::new(int(1), 2, 0, one.clone()),
    ]);
    let mut series = ExpPoly::zero();
    for m in 0..=n {
        series += &ExpPoly::monomial(sign(m) / factorial_rat(m), m, m, Rational::zero());
    }
    (&prefactor * &series).truncate_time(n)
}

pub fn closed_form_check_example1(n: usize) -> Result<ClosedFormReport> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "closed-form check needs order >= 2, got {n}"
        )));
    }
    let spec = crate::model::builtin_case("example1")?;
    let series = vim_solve(&spec, n)?;
    let mut component_mismatch = None;
    for k in 2..=n {
        let expected = example1_component(k as u32);
        let got = series.component(k);
        if *got != expected {
            let diff = got - &expected;
            let first = diff.terms().next().map(|t| {
                format!(
                    "coefficient of s^{} x^{} exp(-{} x): got {}, expected {}",
                    t.j,
                    t.k,
                    t.lambda,
                    got.coeff(t.j, t.k, &t.lambda),
                    expected.coeff(t.j, t.k, &t.lambda)
                )
            });
            component_mismatch = Some((k, first.unwrap_or_default()));
            break;
        }
    }
    let taylor_match = series.partial_sum(n) == example1_taylor(n as u32);
    Ok(ClosedFormReport {
        order: n,
        component_mismatch,
        taylor_match,
    })
}
