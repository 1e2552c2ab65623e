use crate::error::{Error, Result};

/// Known analytic solutions of the built-in cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactReference {
    /// `f = (1+ς)² e^{−ε(1+ς)}`, `M_j = j!(1+ς)^{1−j}`.
    Example1,
    /// `M₀ = 2 + 9ς/5`, `M₁ = 6`.
    Example2,
    /// `M₀ = 1/(1−ς)`, `M₁ = 1`, `M₂ = 2(1−ς)^{12/25}` for ς < 1.
    Example3,
}

/// Exponent of the second moment of `example3`: `1 − (2/5)² − (3/5)²`.
pub const EXAMPLE3_M2_EXPONENT: f64 = 12.0 / 25.0;

pub fn exact_reference(label: &str) -> Result<ExactReference> {
    match label {
        "example1" => Ok(ExactReference::Example1),
        "example2" => Ok(ExactReference::Example2),
        "example3" => Ok(ExactReference::Example3),
        other => Err(Error::UnknownCase(other.to_string())),
    }
}

impl ExactReference {
    pub fn label(&self) -> &'static str {
        match self {
            ExactReference::Example1 => "example1",
            ExactReference::Example2 => "example2",
            ExactReference::Example3 => "example3",
        }
    }

    pub fn has_concentration(&self) -> bool {
        matches!(self, ExactReference::Example1)
    }

    /// Exact concentration `f(ς, ε)`.
    pub fn eval(&self, s: f64, e: f64) -> Result<f64> {
        match self {
            ExactReference::Example1 => {
                let g = 1.0 + s;
                Ok(g * g * (-e * g).exp())
            }
            _ => Err(Error::NoExactSolution(self.label().to_string())),
        }
    }

    /// Upper bound on `∫_E^∞ ε|f(ς, ε)| dε`.
    pub fn tail_bound(&self, s: f64, cutoff: f64) -> Result<f64> {
        match self {
            ExactReference::Example1 => {
                let g = 1.0 + s;
                Ok(g * g * crate::expalg::upper_tail(1, g, cutoff))
            }
            _ => Err(Error::NoExactSolution(self.label().to_string())),
        }
    }

    pub fn has_moment(&self, j: u32) -> bool {
        match self {
            ExactReference::Example1 => true,
            ExactReference::Example2 => j <= 1,
            ExactReference::Example3 => j <= 2,
        }
    }

    /// Exact moment `M_j(ς)`.
    pub fn moment(&self, j: u32, s: f64) -> Result<f64> {
        if !self.has_moment(j) {
            return Err(Error::NoExactSolution(format!("{} moment {j}", self.label())));
        }
        match self {
            ExactReference::Example1 => {
                let fact: f64 = (1..=j).map(f64::from).product();
                Ok(fact * (1.0 + s).powi(1 - j as i32))
            }
            ExactReference::Example2 => Ok(if j == 0 { 2.0 + 1.8 * s } else { 6.0 }),
            ExactReference::Example3 => {
                if s >= 1.0 {
                    return Err(Error::OutOfDomain {
                        case: self.label().to_string(),
                        time: s,
                    });
                }
                Ok(match j {
                    0 => 1.0 / (1.0 - s),
                    1 => 1.0,
                    _ => 2.0 * (1.0 - s).powf(EXAMPLE3_M2_EXPONENT),
                })
            }
        }
    }
}
