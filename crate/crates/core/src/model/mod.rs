//! Problem definitions and the bilinear birth/death operators of the
//! collision-induced breakage equation
//!
//! ```text
//! ∂f/∂ς = ∫₀^∞∫_ε^∞ K(ρ,σ) b(ε,ρ,σ) f(ρ) f(σ) dρ dσ − ∫₀^∞ K(ε,ρ) f(ε) f(ρ) dρ
//! ```
//!
//! restricted to monomial kernels `K = c(ερ)ᵃ` and to power-law or discrete
//! (Dirac) fragmentation, where every integral stays inside [`ExpPoly`].

mod config;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expalg::{int, pow, rat, ExpPoly, Rational};

pub use config::{builtin_case, parse_case_file, resolve_case, BUILTIN_CASES};

/// `K(ε, ρ) = c·(ερ)ᵃ`. Symmetric by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CollisionKernel {
    c: Rational,
    a: u32,
}

impl CollisionKernel {
    pub fn new(c: Rational, a: u32) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidKernel(format!("prefactor {c} must be > 0")));
        }
        Ok(CollisionKernel { c, a })
    }

    pub fn prefactor(&self) -> &Rational {
        &self.c
    }

    pub fn degree(&self) -> u32 {
        self.a
    }
}

/// One Dirac fragment `w·δ(ε − aρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fragment {
    pub weight: Rational,
    pub ratio: Rational,
}

/// Breakage distribution `b(ε, ρ)`; no case here depends on σ.
#[derive(Clone, Debug, PartialEq)]
pub enum Fragmentation {
    /// `b = β·ε^γ·ρ^δ` on `0 < ε < ρ`.
    PowerLaw { beta: Rational, gamma: u32, delta: i32 },
    /// `b = Σᵢ wᵢ·δ(ε − aᵢρ)`.
    Discrete { fragments: Vec<Fragment> },
}

/// A failed mass-conservation identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Delta { expected: i64, found: i32 },
    Beta { expected: Rational, found: Rational },
    MassSum { found: Rational },
    Ratio { index: usize, ratio: Rational },
    Weight { index: usize, weight: Rational },
    NoFragments,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Delta { expected, found } => {
                write!(f, "delta = {found}, mass conservation needs {expected}")
            }
            Violation::Beta { expected, found } => {
                write!(f, "beta = {found}, mass conservation needs {expected}")
            }
            Violation::MassSum { found } => write!(f, "sum of w*a is {found}, expected 1"),
            Violation::Ratio { index, ratio } => {
                write!(f, "fragment {index}: ratio {ratio} outside (0, 1]")
            }
            Violation::Weight { index, weight } => {
                write!(f, "fragment {index}: weight {weight} must be > 0")
            }
            Violation::NoFragments => write!(f, "discrete law without fragments"),
        }
    }
}

impl Fragmentation {
    /// Checks `∫₀^ρ ε b(ε,ρ) dε = ρ` exactly. Empty means conservative.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        match self {
            Fragmentation::PowerLaw { beta, gamma, delta } => {
                // β/(γ+2)·ρ^{γ+2+δ} = ρ
                let expected_delta = -(*gamma as i64 + 1);
                if *delta as i64 != expected_delta {
                    out.push(Violation::Delta {
                        expected: expected_delta,
                        found: *delta,
                    });
                }
                let expected_beta = int(*gamma as i64 + 2);
                if *beta != expected_beta {
                    out.push(Violation::Beta {
                        expected: expected_beta,
                        found: beta.clone(),
                    });
                }
            }
            Fragmentation::Discrete { fragments } => {
                if fragments.is_empty() {
                    out.push(Violation::NoFragments);
                }
                for (index, fr) in fragments.iter().enumerate() {
                    if !fr.weight.is_positive() {
                        out.push(Violation::Weight {
                            index,
                            weight: fr.weight.clone(),
                        });
                    }
                    if !fr.ratio.is_positive() || fr.ratio > Rational::one() {
                        out.push(Violation::Ratio {
                            index,
                            ratio: fr.ratio.clone(),
                        });
                    }
                }
                let mass: Rational = fragments
                    .iter()
                    .map(|fr| &fr.weight * &fr.ratio)
                    .fold(Rational::zero(), |a, b| a + b);
                if !fragments.is_empty() && !mass.is_one() {
                    out.push(Violation::MassSum { found: mass });
                }
            }
        }
        out
    }

    /// Expected number of fragments per breakage event, `∫₀^ρ b dε`.
    pub fn fragment_count(&self) -> Rational {
        match self {
            Fragmentation::PowerLaw { gamma, .. } => {
                rat(*gamma as i64 + 2, *gamma as i64 + 1)
            }
            Fragmentation::Discrete { fragments } => fragments
                .iter()
                .fold(Rational::zero(), |acc, fr| acc + &fr.weight),
        }
    }

    /// `∫₀^ρ εʲ b(ε,ρ) dε / ρʲ`, the per-event factor in the moment equation
    /// for `M_j`. Needs a conservative law.
    pub fn moment_factor(&self, j: u32) -> Rational {
        match self {
            Fragmentation::PowerLaw { gamma, .. } => {
                rat(*gamma as i64 + 2, *gamma as i64 + j as i64 + 1)
            }
            Fragmentation::Discrete { fragments } => fragments
                .iter()
                .fold(Rational::zero(), |acc, fr| acc + &fr.weight * pow(&fr.ratio, j)),
        }
    }
}

/// `f(0, ε) = f^in(ε)`: ς-independent and decaying.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialCondition(ExpPoly);

impl InitialCondition {
    pub fn new(f_in: ExpPoly) -> Result<Self> {
        if !f_in.is_time_independent() {
            return Err(Error::InvalidInitialCondition(
                "initial data must not depend on time".into(),
            ));
        }
        if !f_in.is_decaying() {
            return Err(Error::InvalidInitialCondition(
                "every term needs a positive decay rate".into(),
            ));
        }
        Ok(InitialCondition(f_in))
    }

    pub fn poly(&self) -> &ExpPoly {
        &self.0
    }
}

/// A complete problem: kernel, fragmentation law, initial data.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseSpec {
    pub kernel: CollisionKernel,
    pub frag: Fragmentation,
    pub init: InitialCondition,
    pub label: String,
}

impl CaseSpec {
    pub fn new(
        kernel: CollisionKernel,
        frag: Fragmentation,
        init: InitialCondition,
        label: impl Into<String>,
    ) -> Result<Self> {
        let violations = frag.validate();
        if !violations.is_empty() {
            let msg = violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::InvalidFragmentation(msg));
        }
        Ok(CaseSpec {
            kernel,
            frag,
            init,
            label: label.into(),
        })
    }

    /// Birth term `∫₀^∞∫_ε^∞ K(ρ,σ) b(ε,ρ) f(ρ) g(σ) dρ dσ`.
    pub fn birth(&self, f: &ExpPoly, g: &ExpPoly) -> Result<ExpPoly> {
        let c = self.kernel.prefactor();
        let a = self.kernel.degree();
        if f.is_zero() || g.is_zero() {
            return Ok(ExpPoly::zero());
        }
        let sigma_part = g.total_integral(a)?;
        let rho_part = match &self.frag {
            Fragmentation::PowerLaw { beta, gamma, delta } => {
                let m = a as i64 + *delta as i64;
                if m < 0 {
                    return Err(Error::NegativeExponent(m));
                }
                let tail = f.tail_integral(m as u32)?;
                &ExpPoly::monomial(c * beta, 0, *gamma, Rational::zero()) * &tail
            }
            Fragmentation::Discrete { fragments } => {
                // ∫_ε^∞ ρᵃ δ(ε − aᵢρ) f(ρ) dρ = (ε/aᵢ)ᵃ f(ε/aᵢ) / aᵢ
                let mut acc = ExpPoly::zero();
                for fr in fragments {
                    let factor = c * &fr.weight / pow(&fr.ratio, a + 1);
                    let dilated = f.scale_arg(&fr.ratio)?;
                    acc += &(&ExpPoly::monomial(factor, 0, a, Rational::zero()) * &dilated);
                }
                acc
            }
        };
        Ok(&rho_part * &sigma_part)
    }

    /// Death term `∫₀^∞ K(ε,ρ) f(ε) g(ρ) dρ`.
    pub fn death(&self, f: &ExpPoly, g: &ExpPoly) -> Result<ExpPoly> {
        if f.is_zero() || g.is_zero() {
            return Ok(ExpPoly::zero());
        }
        let a = self.kernel.degree();
        let m = g.total_integral(a)?;
        let weight = ExpPoly::monomial(self.kernel.prefactor().clone(), 0, a, Rational::zero());
        Ok(&(&weight * f) * &m)
    }

    /// `birth(f, g) − death(f, g)`.
    pub fn net_rate(&self, f: &ExpPoly, g: &ExpPoly) -> Result<ExpPoly> {
        Ok(&self.birth(f, g)? - &self.death(f, g)?)
    }

    /// ODM linearization coefficient `C(ε) = −∫₀^∞ K(ε,ρ) f^in(ρ) dρ`.
    pub fn linearization_coefficient(&self) -> ExpPoly {
        let a = self.kernel.degree();
        let m = self
            .init
            .poly()
            .total_integral(a)
            .expect("initial condition is decaying");
        let weight = ExpPoly::monomial(-self.kernel.prefactor(), 0, a, Rational::zero());
        &weight * &m
    }

    pub fn fragment_count(&self) -> Rational {
        self.frag.fragment_count()
    }

    /// Exact moment `M_j(0)` of the initial data.
    pub fn initial_moment(&self, j: u32) -> Rational {
        self.init
            .poly()
            .total_integral(j)
            .expect("initial condition is decaying")
            .coeff(0, 0, &Rational::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::Term;

    fn e(k: u32, lam: Rational) -> ExpPoly {
        ExpPoly::size_exp(k, lam)
    }

    #[test]
    fn validate_examples() {
        let pl = |b: i64, g: u32, d: i32| Fragmentation::PowerLaw {
            beta: int(b),
            gamma: g,
            delta: d,
        };
        assert!(pl(2, 0, -1).validate().is_empty());
        assert!(pl(3, 1, -2).validate().is_empty());
        let v = pl(2, 0, 0).validate();
        assert_eq!(v, vec![Violation::Delta { expected: -1, found: 0 }]);
        let disc = Fragmentation::Discrete {
            fragments: vec![
                Fragment { weight: int(1), ratio: rat(2, 5) },
                Fragment { weight: int(1), ratio: rat(3, 5) },
            ],
        };
        assert!(disc.validate().is_empty());
        let bad = Fragmentation::Discrete {
            fragments: vec![Fragment { weight: int(1), ratio: rat(1, 2) }],
        };
        assert_eq!(bad.validate(), vec![Violation::MassSum { found: rat(1, 2) }]);
    }

    #[test]
    fn fragment_counts() {
        let pl = Fragmentation::PowerLaw { beta: int(2), gamma: 0, delta: -1 };
        assert_eq!(pl.fragment_count(), int(2));
        let pl2 = Fragmentation::PowerLaw { beta: int(3), gamma: 1, delta: -2 };
        assert_eq!(pl2.fragment_count(), rat(3, 2));
        let disc = builtin_case("example3").unwrap().frag;
        assert_eq!(disc.fragment_count(), int(2));
    }

    #[test]
    fn birth_and_death_examples() {
        let ex1 = builtin_case("example1").unwrap();
        let f0 = e(0, int(1));
        assert_eq!(ex1.birth(&f0, &f0).unwrap(), f0.scale(&int(2)));
        assert_eq!(ex1.death(&f0, &f0).unwrap(), e(1, int(1)));
        assert!(ex1.birth(&ExpPoly::zero(), &f0).unwrap().is_zero());
        assert!(ex1.death(&f0, &ExpPoly::zero()).unwrap().is_zero());

        let ex3 = builtin_case("example3").unwrap();
        let expect = ExpPoly::from_terms([
            Term::new(rat(5, 2), 0, 0, rat(5, 2)),
            Term::new(rat(5, 3), 0, 0, rat(5, 3)),
        ]);
        assert_eq!(ex3.birth(&f0, &f0).unwrap(), expect);
        assert_eq!(ex3.death(&f0, &f0).unwrap(), f0);
    }

    #[test]
    fn negative_exponent_is_rejected() {
        let spec = CaseSpec::new(
            CollisionKernel::new(int(1), 0).unwrap(),
            Fragmentation::PowerLaw { beta: int(2), gamma: 0, delta: -1 },
            InitialCondition::new(e(0, int(1))).unwrap(),
            "const-kernel",
        )
        .unwrap();
        let f0 = e(0, int(1));
        assert_eq!(spec.birth(&f0, &f0), Err(Error::NegativeExponent(-1)));
    }

    #[test]
    fn linearization_coefficients() {
        let c = |name: &str| builtin_case(name).unwrap().linearization_coefficient();
        assert_eq!(c("example1"), ExpPoly::monomial(int(-1), 0, 1, int(0)));
        assert_eq!(c("example2"), ExpPoly::monomial(rat(-3, 10), 0, 1, int(0)));
        assert_eq!(c("example3"), ExpPoly::monomial(int(-1), 0, 0, int(0)));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(CollisionKernel::new(int(0), 1).is_err());
        assert!(InitialCondition::new(ExpPoly::monomial(int(1), 1, 0, int(1))).is_err());
        assert!(InitialCondition::new(ExpPoly::one()).is_err());
        let r = CaseSpec::new(
            CollisionKernel::new(int(1), 1).unwrap(),
            Fragmentation::PowerLaw { beta: int(2), gamma: 0, delta: 0 },
            InitialCondition::new(e(0, int(1))).unwrap(),
            "bad",
        );
        assert!(matches!(r, Err(Error::InvalidFragmentation(_))));
    }
}
