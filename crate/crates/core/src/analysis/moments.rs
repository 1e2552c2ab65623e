use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expalg::{to_f64, ExpPoly, Rational};
use crate::series::SeriesSolution;

/// Exact polynomial moment curve `M_j(ς) = Σ cᵢ ςⁱ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentCurve {
    pub j: u32,
    coeffs: Vec<Rational>,
}

impl MomentCurve {
    pub fn from_time_poly(j: u32, p: &ExpPoly) -> Self {
        let deg = p.time_degree().unwrap_or(0);
        let zero = Rational::zero();
        let mut coeffs: Vec<Rational> = (0..=deg).map(|i| p.coeff(i, 0, &zero)).collect();
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        MomentCurve { j, coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + to_f64(c))
    }

    pub fn eval_exact(&self, s: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * s + c)
    }
}

/// `M_j` of the partial sum up to `upto`.
pub fn moments_of_series(series: &SeriesSolution, j: u32, upto: usize) -> Result<MomentCurve> {
    if upto > series.order() {
        return Err(Error::Precondition(format!(
            "order {upto} requested from a series of order {}",
            series.order()
        )));
    }
    let mut acc = ExpPoly::zero();
    for f in &series.components()[..=upto] {
        acc += &f.total_integral(j)?;
    }
    Ok(MomentCurve::from_time_poly(j, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::{int, rat};
    use crate::model::builtin_case;
    use crate::{odm::odm_solve, vim::vim_solve};

    #[test]
    fn vim_mass_is_constant() {
        for (name, mass) in [("example1", 1), ("example2", 6), ("example3", 1)] {
            let spec = builtin_case(name).unwrap();
            let n = if name == "example3" { 3 } else { 6 };
            let m1 = moments_of_series(&vim_solve(&spec, n).unwrap(), 1, n).unwrap();
            assert!(m1.is_constant());
            assert_eq!(m1.coeff(0), int(mass));
        }
    }

    #[test]
    fn odm_mass_drift_comes_from_the_linear_term() {
        // a = 0: C is constant in ε and f_k (k ≥ 1) carries no mass
        let spec = builtin_case("example3").unwrap();
        let m1 = moments_of_series(&odm_solve(&spec, 3).unwrap(), 1, 3).unwrap();
        assert!(m1.is_constant());
        // a = 1: M₁[C f] = −M₁(0)·M₂[f] leaks mass at high order only
        let spec = builtin_case("example1").unwrap();
        let m1 = moments_of_series(&odm_solve(&spec, 6).unwrap(), 1, 6).unwrap();
        assert_eq!(m1.coeffs()[..4], [int(1), int(0), int(0), int(0)]);
        assert_eq!(m1.coeff(4), int(-3));
    }

    #[test]
    fn example2_number_density() {
        let s = vim_solve(&builtin_case("example2").unwrap(), 4).unwrap();
        let m0 = moments_of_series(&s, 0, 4).unwrap();
        assert_eq!(m0.coeffs(), &[int(2), rat(9, 5)]);
        assert!((m0.eval(1.0) - 3.8).abs() < 1e-15);
        assert_eq!(m0.eval_exact(&int(5)), int(11));
    }

    #[test]
    fn order_is_checked() {
        let s = vim_solve(&builtin_case("example1").unwrap(), 2).unwrap();
        assert!(moments_of_series(&s, 0, 3).is_err());
        let m0 = moments_of_series(&s, 0, 2).unwrap();
        // 1 + ς + 0·ς²  (exact M₀ = 1 + ς)
        assert_eq!(m0.coeffs(), &[int(1), int(1)]);
    }
}
