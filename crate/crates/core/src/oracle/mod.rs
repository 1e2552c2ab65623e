//! Independent numerical ground truth: adaptive quadrature of the collision
//! integrals and RK4 on the closed moment equations.

mod moments;
mod quadrature;

pub use moments::{moment_rhs, rk4_moments, MomentOdeSystem, MomentSamples};
pub use quadrature::{adaptive_simpson, quad_birth, quad_death, QuadratureConfig};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{exact_reference, moments_of_series};
use crate::error::Result;
use crate::expalg::{rat, ExpPoly, Term};
use crate::model::CaseSpec;
use crate::vim::vim_solve;

pub const DEFAULT_SEED: u64 = 0x5eed_cbe1;
pub const DEFAULT_SAMPLES: usize = 20;
pub const COLLISION_TOL: f64 = 1e-7;
pub const MOMENT_TOL: f64 = 1e-6;

/// Small random decaying ExpPoly: 1–3 terms, `k ≤ 3`, `j ≤ 2`.
pub fn random_exppoly<R: Rng>(rng: &mut R) -> ExpPoly {
    const LAMBDAS: [(i64, i64); 5] = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1)];
    let n = rng.gen_range(1..=3);
    ExpPoly::from_terms((0..n).map(|_| {
        let mut num = rng.gen_range(-20..=20);
        if num == 0 {
            num = 1;
        }
        let (ln, ld) = LAMBDAS[rng.gen_range(0..LAMBDAS.len())];
        Term::new(
            rat(num, rng.gen_range(1..=10)),
            rng.gen_range(0..=2),
            rng.gen_range(0..=3),
            rat(ln, ld),
        )
    }))
}

/// Symbolic vs quadrature collision terms at one random point.
#[derive(Clone, Debug)]
pub struct CollisionSample {
    pub time: f64,
    pub eps: f64,
    pub birth_rel: f64,
    pub death_rel: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub fn collision_samples(
    spec: &CaseSpec,
    samples: usize,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<Vec<CollisionSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let f = random_exppoly(&mut rng);
        let g = random_exppoly(&mut rng);
        let time = rng.gen_range(0.0..1.0);
        let eps = rng.gen_range(0.0..6.0);
        let birth = spec.birth(&f, &g)?.eval(time, eps);
        let death = spec.death(&f, &g)?.eval(time, eps);
        out.push(CollisionSample {
            time,
            eps,
            birth_rel: rel(quad_birth(spec, &f, &g, time, eps, cfg)?, birth),
            death_rel: rel(quad_death(spec, &f, &g, time, eps, cfg)?, death),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

pub const MOMENT_TIMES: [f64; 3] = [0.1, 0.25, 0.5];

/// Highest VIM order used for moment consistency; `example3` doubles its
/// ς-degree every step, so it stops earlier.
pub fn consistency_order(spec: &CaseSpec) -> usize {
    if spec.kernel.degree() == 0 {
        6
    } else {
        10
    }
}

/// RK4 error ratio `e(dt)/e(dt/2)` for `M_j` at `t` against the reference.
pub fn rk4_halving_ratio(system: &MomentOdeSystem, j: u32, t: f64, dt: f64, exact: f64) -> Result<f64> {
    let coarse = rk4_moments(system, t, dt)?.last(j).unwrap_or(f64::NAN);
    let fine = rk4_moments(system, t, dt / 2.0)?.last(j).unwrap_or(f64::NAN);
    Ok((coarse - exact).abs() / (fine - exact).abs())
}

/// All oracle checks for a case: collision integrals, RK4 against analytic
/// moments and RK4 against the VIM moment polynomials.
pub fn verify_case(spec: &CaseSpec, samples: usize, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let cfg = QuadratureConfig::default();
    let pts = collision_samples(spec, samples, seed, &cfg)?;
    let worst = |sel: fn(&CollisionSample) -> f64| pts.iter().map(sel).fold(0.0, f64::max);
    report.checks.push(Check {
        name: "birth quadrature".into(),
        value: worst(|p| p.birth_rel),
        tol: COLLISION_TOL,
    });
    report.checks.push(Check {
        name: "death quadrature".into(),
        value: worst(|p| p.death_rel),
        tol: COLLISION_TOL,
    });

    let closed: Vec<u32> = (0..=2)
        .filter(|&j| MomentOdeSystem::new(spec.clone(), &[j]).is_ok())
        .collect();
    let system = MomentOdeSystem::new(spec.clone(), &closed)?;
    let t_max = MOMENT_TIMES[MOMENT_TIMES.len() - 1];
    let rk = rk4_moments(&system, t_max, 1e-4)?;

    if let Ok(reference) = exact_reference(&spec.label) {
        for &j in closed.iter().filter(|&&j| reference.has_moment(j)) {
            let mut dev: f64 = 0.0;
            for &t in &MOMENT_TIMES {
                dev = dev.max((rk.at(j, t).unwrap_or(f64::NAN) - reference.moment(j, t)?).abs());
            }
            report.checks.push(Check {
                name: format!("rk4 M{j} vs analytic"),
                value: dev,
                tol: MOMENT_TOL,
            });
        }
    }

    let n = consistency_order(spec);
    let series = vim_solve(spec, n)?;
    for &j in &closed {
        let curve = moments_of_series(&series, j, n)?;
        let prev = moments_of_series(&series, j, n - 1)?;
        let mut dev: f64 = 0.0;
        let mut allowance: f64 = 0.0;
        for &t in &MOMENT_TIMES {
            dev = dev.max((curve.eval(t) - rk.at(j, t).unwrap_or(f64::NAN)).abs());
            allowance = allowance.max(2.0 * (curve.eval(t) - prev.eval(t)).abs());
        }
        report.checks.push(Check {
            name: format!("vim order {n} M{j} vs rk4"),
            value: dev,
            tol: allowance + MOMENT_TOL,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_case;

    #[test]
    fn samples_are_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let p = random_exppoly(&mut a);
            assert_eq!(p, random_exppoly(&mut b));
            assert!(p.is_decaying());
        }
    }

    #[test]
    fn verify_builtin_cases() {
        for name in crate::model::BUILTIN_CASES {
            let spec = builtin_case(name).unwrap();
            let r = verify_case(&spec, 5, DEFAULT_SEED).unwrap();
            for c in &r.checks {
                assert!(c.passed(), "{name}: {c:?}");
            }
        }
    }
}
