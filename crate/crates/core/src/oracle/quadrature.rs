use crate::error::{Error, Result};
use crate::expalg::{to_f64, ExpPoly};
use crate::model::{CaseSpec, Fragmentation};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Fixed truncation of `∫₀^∞`; `None` derives it from the integrands.
    pub outer_cutoff: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-11,
            abs_tol: 1e-14,
            max_depth: 50,
            outer_cutoff: None,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rel_tol > 0.0 && self.abs_tol > 0.0 {
            Ok(())
        } else {
            Err(Error::Precondition("quadrature tolerances must be positive".into()))
        }
    }
}

const INITIAL_PANELS: usize = 64;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    max_depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= max_depth {
        return Err(Error::ToleranceNotMet { a, b, max_depth });
    }
    Ok(refine(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1, max_depth)?
        + refine(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1, max_depth)?)
}

/// Adaptive Simpson with Richardson correction over `[a, b]`, started from
/// 64 uniform panels.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if b <= a {
        return Ok(0.0);
    }
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut panels = Vec::with_capacity(INITIAL_PANELS);
    let mut coarse = 0.0;
    for p in 0..INITIAL_PANELS {
        let lo = a + p as f64 * h;
        let hi = if p + 1 == INITIAL_PANELS { b } else { lo + h };
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let s = simpson(fa, fm, fb, hi - lo);
        coarse += s.abs();
        panels.push((lo, hi, fa, fm, fb, s));
    }
    let tol = cfg.abs_tol.max(cfg.rel_tol * coarse) / INITIAL_PANELS as f64;
    let mut total = 0.0;
    for (lo, hi, fa, fm, fb, s) in panels {
        total += refine(&f, lo, hi, fa, fm, fb, s, tol, 0, cfg.max_depth)?;
    }
    Ok(total)
}

/// Truncation point for `∫₀^∞ w(x) dx`: start at `(40 + degree)/min(1, λ_min)`
/// and extend until `x·|w(x)|` is negligible.
fn cutoff_for<W: Fn(f64) -> f64>(w: W, degree: u32, lambda_min: f64) -> f64 {
    let mut r = (40.0 + degree as f64) / lambda_min.min(1.0);
    while (r * w(r)).abs() > 1e-20 && r < 1e5 {
        r *= 1.5;
    }
    r
}

fn lambda_min(p: &ExpPoly) -> Result<f64> {
    match p.min_lambda() {
        Some(l) if to_f64(l) > 0.0 => Ok(to_f64(l)),
        Some(_) => Err(Error::NonDecayingTerm),
        None => Ok(1.0),
    }
}

/// Direct term-by-term evaluation, independent of any algebra on `p`.
fn evaluator(p: &ExpPoly, s: f64) -> impl Fn(f64) -> f64 {
    let terms: Vec<(f64, i32, f64)> = p
        .terms()
        .map(|t| (to_f64(&t.coeff) * s.powi(t.j as i32), t.k as i32, to_f64(&t.lambda)))
        .collect();
    move |x| terms.iter().map(|(c, k, l)| c * x.powi(*k) * (-l * x).exp()).sum()
}

/// `∫₀^R σᵃ g(ς, σ) dσ`.
fn kernel_moment(spec: &CaseSpec, g: &ExpPoly, s: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let a = spec.kernel.degree() as i32;
    let gv = evaluator(g, s);
    let w = |x: f64| x.powi(a) * gv(x);
    let r = match cfg.outer_cutoff {
        Some(r) => r,
        None => cutoff_for(&w, g.size_degree().unwrap_or(0) + a as u32, lambda_min(g)?),
    };
    adaptive_simpson(w, 0.0, r, cfg)
}

/// Birth term at `(ς, ε)` by quadrature.
///
/// The monomial kernel factorizes, `K(ρ,σ) = c ρᵃ σᵃ`, so the double integral
/// is the product of the ρ- and σ-integrals; for Dirac fragments the
/// ρ-integral is collapsed analytically.
pub fn quad_birth(
    spec: &CaseSpec,
    f: &ExpPoly,
    g: &ExpPoly,
    s: f64,
    eps: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if f.is_zero() || g.is_zero() {
        return Ok(0.0);
    }
    let c = to_f64(spec.kernel.prefactor());
    let a = spec.kernel.degree() as i32;
    let sigma = kernel_moment(spec, g, s, cfg)?;
    let fv = evaluator(f, s);
    let rho = match &spec.frag {
        Fragmentation::PowerLaw { beta, gamma, delta } => {
            let scale = to_f64(beta) * eps.powi(*gamma as i32);
            let w = |rho: f64| scale * rho.powi(a + *delta) * fv(rho);
            let r = match cfg.outer_cutoff {
                Some(r) => r,
                None => cutoff_for(
                    |x| x.powi(a) * fv(x),
                    f.size_degree().unwrap_or(0) + a as u32,
                    lambda_min(f)?,
                ),
            };
            adaptive_simpson(w, eps, r.max(eps), cfg)?
        }
        Fragmentation::Discrete { fragments } => fragments
            .iter()
            .map(|fr| {
                let (w, ai) = (to_f64(&fr.weight), to_f64(&fr.ratio));
                let rho = eps / ai;
                w * rho.powi(a) * fv(rho) / ai
            })
            .sum(),
    };
    Ok(c * rho * sigma)
}

/// Death term at `(ς, ε)` by quadrature.
pub fn quad_death(
    spec: &CaseSpec,
    f: &ExpPoly,
    g: &ExpPoly,
    s: f64,
    eps: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if f.is_zero() || g.is_zero() {
        return Ok(0.0);
    }
    let c = to_f64(spec.kernel.prefactor());
    let a = spec.kernel.degree() as i32;
    let sigma = kernel_moment(spec, g, s, cfg)?;
    Ok(c * eps.powi(a) * evaluator(f, s)(eps) * sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::int;
    use crate::model::builtin_case;

    #[test]
    fn simpson_integrates_smooth_functions() {
        let cfg = QuadratureConfig::default();
        let v = adaptive_simpson(|x: f64| x.sin(), 0.0, std::f64::consts::PI, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn depth_limit_is_reported() {
        let cfg = QuadratureConfig {
            max_depth: 2,
            rel_tol: 1e-14,
            abs_tol: 1e-16,
            ..QuadratureConfig::default()
        };
        let r = adaptive_simpson(|x: f64| x.abs().sqrt(), -1.0, 1.0, &cfg);
        assert!(matches!(r, Err(Error::ToleranceNotMet { max_depth: 2, .. })));
        let bad = QuadratureConfig {
            rel_tol: 0.0,
            ..QuadratureConfig::default()
        };
        assert!(adaptive_simpson(|x| x, 0.0, 1.0, &bad).is_err());
    }

    #[test]
    fn example1_values() {
        let spec = builtin_case("example1").unwrap();
        let f = ExpPoly::size_exp(0, int(1));
        let cfg = QuadratureConfig::default();
        let b = quad_birth(&spec, &f, &f, 0.0, 0.0, &cfg).unwrap();
        assert!((b - 2.0).abs() < 1e-8);
        let d = quad_death(&spec, &f, &f, 0.0, 1.0, &cfg).unwrap();
        assert!((d - (-1.0f64).exp()).abs() < 1e-10);
        let z = ExpPoly::zero();
        assert_eq!(quad_birth(&spec, &z, &f, 0.0, 1.0, &cfg).unwrap(), 0.0);
        assert_eq!(quad_death(&spec, &z, &f, 0.0, 1.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn example3_birth_collapses() {
        // c=1, a=0, M₀[e^{−σ}] = 1: B(ε) = (5/2)e^{−5ε/2} + (5/3)e^{−5ε/3}
        let spec = builtin_case("example3").unwrap();
        let f = ExpPoly::size_exp(0, int(1));
        let e = 0.7;
        let want = 2.5 * (-2.5 * e as f64).exp() + 5.0 / 3.0 * (-5.0 / 3.0 * e as f64).exp();
        let got = quad_birth(&spec, &f, &f, 0.0, e, &QuadratureConfig::default()).unwrap();
        assert!((got - want).abs() < 1e-10);
    }
}
