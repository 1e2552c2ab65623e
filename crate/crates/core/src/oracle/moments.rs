use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expalg::to_f64;
use crate::model::{CaseSpec, Fragmentation};

/// `∫₀^ρ εʲ b(ε, ρ) dε / ρʲ`, from the law's parameters.
fn daughter_factor(frag: &Fragmentation, j: u32) -> f64 {
    match frag {
        Fragmentation::PowerLaw { beta, gamma, .. } => to_f64(beta) / f64::from(gamma + j + 1),
        Fragmentation::Discrete { fragments } => fragments
            .iter()
            .map(|fr| to_f64(&fr.weight) * to_f64(&fr.ratio).powi(j as i32))
            .sum(),
    }
}

fn is_closed(a: u32, j: u32) -> bool {
    a == 0 || j == 1 || (a == 1 && j == 0)
}

/// Right-hand side of `dM_j/dς = c (F_j − 1) M_{j+a} M_a`.
pub fn moment_rhs(spec: &CaseSpec, j: u32, moments: &BTreeMap<u32, f64>) -> Result<f64> {
    let a = spec.kernel.degree();
    if !is_closed(a, j) {
        return Err(Error::NotClosed(j));
    }
    let factor = daughter_factor(&spec.frag, j) - 1.0;
    if factor == 0.0 {
        return Ok(0.0);
    }
    let get = |i: u32| {
        moments
            .get(&i)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("moment M_{i} missing from the state")))
    };
    Ok(to_f64(spec.kernel.prefactor()) * factor * get(j + a)? * get(a)?)
}

/// Closed moment system: the requested indices plus whatever they depend on.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentOdeSystem {
    pub spec: CaseSpec,
    pub j_set: Vec<u32>,
}

impl MomentOdeSystem {
    pub fn new(spec: CaseSpec, requested: &[u32]) -> Result<Self> {
        let a = spec.kernel.degree();
        let mut set: Vec<u32> = requested.to_vec();
        for &j in requested {
            if !is_closed(a, j) {
                return Err(Error::NotClosed(j));
            }
            if daughter_factor(&spec.frag, j) != 1.0 {
                set.push(a);
                set.push(j + a);
            }
        }
        set.sort_unstable();
        set.dedup();
        if let Some(&j) = set.iter().find(|&&j| !is_closed(a, j)) {
            return Err(Error::NotClosed(j));
        }
        Ok(MomentOdeSystem { spec, j_set: set })
    }

    fn initial_state(&self) -> BTreeMap<u32, f64> {
        self.j_set
            .iter()
            .map(|&j| (j, to_f64(&self.spec.initial_moment(j))))
            .collect()
    }

    fn rhs(&self, state: &BTreeMap<u32, f64>) -> Result<BTreeMap<u32, f64>> {
        self.j_set
            .iter()
            .map(|&j| Ok((j, moment_rhs(&self.spec, j, state)?)))
            .collect()
    }

    /// Finite-time blow-up of `M₀` for constant kernels with `F₀ > 1`.
    pub fn blowup_time(&self) -> Option<f64> {
        if self.spec.kernel.degree() != 0 {
            return None;
        }
        let growth = to_f64(self.spec.kernel.prefactor()) * (daughter_factor(&self.spec.frag, 0) - 1.0);
        let m0 = to_f64(&self.spec.initial_moment(0));
        (growth > 0.0).then(|| 1.0 / (growth * m0))
    }
}

/// RK4 samples at every step, `times[0] = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSamples {
    pub times: Vec<f64>,
    pub values: BTreeMap<u32, Vec<f64>>,
}

impl MomentSamples {
    pub fn last(&self, j: u32) -> Option<f64> {
        self.values.get(&j).and_then(|v| v.last().copied())
    }

    /// Value at the sample nearest to `t`.
    pub fn at(&self, j: u32, t: f64) -> Option<f64> {
        let idx = self
            .times
            .iter()
            .enumerate()
            .min_by(|x, y| (x.1 - t).abs().total_cmp(&(y.1 - t).abs()))?
            .0;
        self.values.get(&j).map(|v| v[idx])
    }
}

fn axpy(base: &BTreeMap<u32, f64>, h: f64, k: &BTreeMap<u32, f64>) -> BTreeMap<u32, f64> {
    base.iter().map(|(j, v)| (*j, v + h * k[j])).collect()
}

/// Classical fixed-step RK4 from the initial moments; the last step lands on `t_end`.
pub fn rk4_moments(system: &MomentOdeSystem, t_end: f64, dt: f64) -> Result<MomentSamples> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Precondition("need dt > 0 and t_end >= 0".into()));
    }
    if let Some(tb) = system.blowup_time() {
        if t_end >= tb {
            return Err(Error::DomainExit(tb));
        }
    }
    let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let mut y = system.initial_state();
    let mut times = vec![0.0];
    let mut values: BTreeMap<u32, Vec<f64>> = y.iter().map(|(j, v)| (*j, vec![*v])).collect();
    for n in 0..steps {
        let k1 = system.rhs(&y)?;
        let k2 = system.rhs(&axpy(&y, h / 2.0, &k1))?;
        let k3 = system.rhs(&axpy(&y, h / 2.0, &k2))?;
        let k4 = system.rhs(&axpy(&y, h, &k3))?;
        for (j, v) in y.iter_mut() {
            *v += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t = (n + 1) as f64 * h;
        if y.values().any(|v| !v.is_finite() || v.abs() > 1e12) {
            return Err(Error::DomainExit(t));
        }
        times.push(t);
        for (j, v) in &y {
            values.get_mut(j).expect("state index").push(*v);
        }
    }
    Ok(MomentSamples { times, values })
}
