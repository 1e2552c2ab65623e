use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::expalg::{ExpPoly, FloatPoly};

pub const GAUSS_NODES: usize = 32;
pub const DEFAULT_PANELS: usize = 64;
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on Pₙ.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_NODES))
}

/// Composite 32-point Gauss–Legendre over `[0, upper]`.
pub fn composite_gauss<F: Fn(f64) -> f64>(f: F, upper: f64, panels: usize) -> f64 {
    let (x, w) = gl32();
    let h = upper / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        let mut part = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            part += wi * f(mid + 0.5 * h * xi);
        }
        total += 0.5 * h * part;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormMode {
    /// Evaluate at one time.
    SingleTime(f64),
    /// Maximum over `nt` uniform samples of `[0, horizon]`.
    SupOverGrid { horizon: f64, nt: usize },
}

impl NormMode {
    pub fn label(&self) -> &'static str {
        match self {
            NormMode::SingleTime(_) => "single",
            NormMode::SupOverGrid { .. } => "sup",
        }
    }

    pub fn times(&self) -> Vec<f64> {
        match *self {
            NormMode::SingleTime(s) => vec![s],
            NormMode::SupOverGrid { horizon, nt } => {
                if nt <= 1 {
                    return vec![horizon];
                }
                (0..nt)
                    .map(|i| horizon * i as f64 / (nt - 1) as f64)
                    .collect()
            }
        }
    }

    fn max_time(&self) -> f64 {
        match *self {
            NormMode::SingleTime(s) => s.abs(),
            NormMode::SupOverGrid { horizon, .. } => horizon.abs(),
        }
    }
}

/// Weighted L¹ norm `∫₀^∞ ε|f(ς, ε)| dε` settings.
#[derive(Clone, Debug, PartialEq)]
pub struct NormSpec {
    pub mode: NormMode,
    /// Fixed window; `None` picks the cutoff from the tail bound.
    pub eps_max: Option<f64>,
    pub panels: usize,
    pub tol: f64,
}

impl NormSpec {
    pub fn single_time(s: f64) -> Self {
        NormSpec {
            mode: NormMode::SingleTime(s),
            eps_max: None,
            panels: DEFAULT_PANELS,
            tol: DEFAULT_TAIL_TOL,
        }
    }

    pub fn sup_over_grid(horizon: f64, nt: usize) -> Self {
        NormSpec {
            mode: NormMode::SupOverGrid { horizon, nt },
            ..NormSpec::single_time(0.0)
        }
    }
}

/// Smallest `E = 2ᵏ·8` whose tail bound at the largest sampled time is below `tol`.
pub fn choose_cutoff<T: Fn(f64) -> f64>(tail: T, tol: f64) -> f64 {
    let mut e = 8.0;
    while tail(e) >= tol && e < 1e6 {
        e *= 2.0;
    }
    e
}

pub fn weighted_l1_norm(f: &ExpPoly, spec: &NormSpec) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    if spec.eps_max.is_none() && !f.is_decaying() {
        return Err(Error::NonDecayingTerm);
    }
    let fp = FloatPoly::from(f);
    let s_max = spec.mode.max_time();
    weighted_l1_norm_fn(
        |s, e| fp.eval(s, e),
        |s, cutoff| fp.tail_bound(s.abs().max(s_max), cutoff, 1),
        spec,
    )
}

/// Norm of an arbitrary `f(ς, ε)` given its own tail bound `tail(ς, E)`.
pub fn weighted_l1_norm_fn<F, T>(f: F, tail: T, spec: &NormSpec) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    T: Fn(f64, f64) -> f64,
{
    let times = spec.mode.times();
    let mut best: f64 = 0.0;
    for s in times {
        let (cutoff, tail_part) = match spec.eps_max {
            Some(e) => (e, 0.0),
            None => {
                let e = choose_cutoff(|e| tail(s, e), spec.tol);
                (e, tail(s, e))
            }
        };
        let body = composite_gauss(|e| e * f(s, e).abs(), cutoff, spec.panels);
        best = best.max(body + tail_part);
    }
    Ok(best)
}
