//! Exact algebra of exponential polynomials.
//!
//! An [`ExpPoly`] is a finite sum of terms `c · ςʲ · εᵏ · e^(−λε)` with
//! rational `c` and `λ`. The set is closed under everything the VIM and ODM
//! recursions need: sums, products, differentiation and integration in time,
//! tail and total integrals in size, and the dilation `ε ↦ ε/a` that Dirac
//! fragmentation produces.
//!
//! Terms live in a map keyed by `(λ, k, j)`, so iteration order is canonical
//! and serialization is stable.

mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use text::parse_term;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Ordering key of a term. Field order gives the canonical `(λ, k, j)` sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub lambda: Rational,
    pub k: u32,
    pub j: u32,
}

/// One term `coeff · ςʲ · εᵏ · e^(−λε)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub j: u32,
    pub k: u32,
    pub lambda: Rational,
    pub coeff: Rational,
}

impl Term {
    pub fn new(coeff: Rational, j: u32, k: u32, lambda: Rational) -> Self {
        Term { j, k, lambda, coeff }
    }
}

/// Finite sum of terms `c · ςʲ · εᵏ · e^(−λε)` in canonical form: no two
/// terms share `(j, k, λ)`, no zero coefficients, the empty sum is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExpPoly {
    terms: BTreeMap<Key, Rational>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    /// The constant function 1.
    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0, 0, Rational::zero())
    }

    pub fn monomial(coeff: Rational, j: u32, k: u32, lambda: Rational) -> Self {
        let mut p = ExpPoly::zero();
        p.add_term(Key { lambda, k, j }, coeff);
        p
    }

    /// `ε^k e^{−λε}` with unit coefficient.
    pub fn size_exp(k: u32, lambda: Rational) -> Self {
        Self::monomial(Rational::one(), 0, k, lambda)
    }

    /// ς-only polynomial with the given coefficients, lowest power first.
    pub fn time_poly(coeffs: &[Rational]) -> Self {
        let mut p = ExpPoly::zero();
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(
                Key {
                    lambda: Rational::zero(),
                    k: 0,
                    j: j as u32,
                },
                c.clone(),
            );
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> Self {
        let mut p = ExpPoly::zero();
        for t in terms {
            p.add_term(
                Key {
                    lambda: t.lambda,
                    k: t.k,
                    j: t.j,
                },
                t.coeff,
            );
        }
        p
    }

    fn add_term(&mut self, key: Key, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical `(λ, k, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(key, c)| Term {
            j: key.j,
            k: key.k,
            lambda: key.lambda.clone(),
            coeff: c.clone(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &Rational)> + '_ {
        self.terms.iter()
    }

    /// Coefficient of `ςʲ εᵏ e^{−λε}`, zero when absent.
    pub fn coeff(&self, j: u32, k: u32, lambda: &Rational) -> Rational {
        let key = Key {
            lambda: lambda.clone(),
            k,
            j,
        };
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(key, v)| (key.clone(), v * c))
                .collect(),
        }
    }

    fn map_terms<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&Key, &Rational) -> Option<(Key, Rational)>,
    {
        let mut out = ExpPoly::zero();
        for (key, c) in &self.terms {
            if let Some((nk, nc)) = f(key, c) {
                out.add_term(nk, nc);
            }
        }
        out
    }

    /// Highest power of ς, `None` for the zero function.
    pub fn time_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.j).max()
    }

    /// Highest power of ε, `None` for the zero function.
    pub fn size_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.k).max()
    }

    /// Smallest decay rate present.
    pub fn min_lambda(&self) -> Option<&Rational> {
        self.terms.keys().next().map(|k| &k.lambda)
    }

    /// True when every term decays in ε (λ > 0).
    pub fn is_decaying(&self) -> bool {
        self.terms.keys().all(|k| k.lambda.is_positive())
    }

    /// True when no term depends on ς.
    pub fn is_time_independent(&self) -> bool {
        self.terms.keys().all(|k| k.j == 0)
    }

    /// True when the function depends on ς only (k = 0 and λ = 0 everywhere).
    pub fn is_time_only(&self) -> bool {
        self.terms
            .keys()
            .all(|k| k.k == 0 && k.lambda.is_zero())
    }

    /// ∂/∂ς.
    pub fn ddt(&self) -> Self {
        self.map_terms(|key, c| {
            (key.j > 0).then(|| {
                (
                    Key {
                        lambda: key.lambda.clone(),
                        k: key.k,
                        j: key.j - 1,
                    },
                    c * int(key.j as i64),
                )
            })
        })
    }

    /// ∫₀^ς · dτ; the result vanishes at ς = 0.
    pub fn int_time(&self) -> Self {
        self.map_terms(|key, c| {
            Some((
                Key {
                    lambda: key.lambda.clone(),
                    k: key.k,
                    j: key.j + 1,
                },
                c / int(key.j as i64 + 1),
            ))
        })
    }

    /// ∂/∂ε.
    pub fn ddx(&self) -> Self {
        let mut out = ExpPoly::zero();
        for (key, c) in &self.terms {
            if key.k > 0 {
                out.add_term(
                    Key {
                        lambda: key.lambda.clone(),
                        k: key.k - 1,
                        j: key.j,
                    },
                    c * int(key.k as i64),
                );
            }
            out.add_term(key.clone(), -(c * &key.lambda));
        }
        out
    }

    /// The function at ς = 0.
    pub fn at_time_zero(&self) -> Self {
        self.map_terms(|key, c| (key.j == 0).then(|| (key.clone(), c.clone())))
    }

    /// The function at ε = 0, as a ς-only polynomial.
    pub fn at_size_zero(&self) -> Self {
        self.map_terms(|key, c| {
            (key.k == 0).then(|| {
                (
                    Key {
                        lambda: Rational::zero(),
                        k: 0,
                        j: key.j,
                    },
                    c.clone(),
                )
            })
        })
    }

    /// The ε-dependent coefficient of ςʲ.
    pub fn time_coefficient(&self, j: u32) -> Self {
        self.map_terms(|key, c| {
            (key.j == j).then(|| {
                (
                    Key {
                        lambda: key.lambda.clone(),
                        k: key.k,
                        j: 0,
                    },
                    c.clone(),
                )
            })
        })
    }

    /// Drops every term with ς-power above `max_j`.
    pub fn truncate_time(&self, max_j: u32) -> Self {
        self.map_terms(|key, c| (key.j <= max_j).then(|| (key.clone(), c.clone())))
    }

    fn require_decay(&self) -> Result<()> {
        if self.is_decaying() {
            Ok(())
        } else {
            Err(Error::NonDecayingTerm)
        }
    }

    /// `∫_ε^∞ ρᵐ f(ς, ρ) dρ` as a function of ε, using
    /// `∫_ε^∞ ρⁿ e^{−λρ} dρ = e^{−λε} Σ_{i=0}^{n} (n!/i!) εⁱ / λ^{n−i+1}`.
    pub fn tail_integral(&self, m: u32) -> Result<Self> {
        self.require_decay()?;
        let mut out = ExpPoly::zero();
        for (key, c) in &self.terms {
            let n = key.k + m;
            let nfact = factorial(n);
            let mut ifact = BigInt::one();
            for i in 0..=n {
                if i > 0 {
                    ifact *= BigInt::from(i);
                }
                let lam_pow = pow(&key.lambda, n - i + 1);
                let coef = c * Rational::new(nfact.clone(), ifact.clone()) / lam_pow;
                out.add_term(
                    Key {
                        lambda: key.lambda.clone(),
                        k: i,
                        j: key.j,
                    },
                    coef,
                );
            }
        }
        Ok(out)
    }

    /// `∫₀^∞ εᵐ f(ς, ε) dε` as a ς-only polynomial, using
    /// `∫₀^∞ εⁿ e^{−λε} dε = n!/λ^{n+1}`.
    pub fn total_integral(&self, m: u32) -> Result<Self> {
        self.require_decay()?;
        let mut out = ExpPoly::zero();
        for (key, c) in &self.terms {
            let n = key.k + m;
            let val = c * Rational::from_integer(factorial(n)) / pow(&key.lambda, n + 1);
            out.add_term(
                Key {
                    lambda: Rational::zero(),
                    k: 0,
                    j: key.j,
                },
                val,
            );
        }
        Ok(out)
    }

    /// The dilated function `ε ↦ f(ς, ε/a)`.
    pub fn scale_arg(&self, a: &Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidScale(a.to_string()));
        }
        Ok(self.map_terms(|key, c| {
            Some((
                Key {
                    lambda: &key.lambda / a,
                    k: key.k,
                    j: key.j,
                },
                c / pow(a, key.k),
            ))
        }))
    }

    /// Floating-point value at (ς, ε) = (s, e). Terms are summed in canonical
    /// order so the rounding is reproducible.
    pub fn eval(&self, s: f64, e: f64) -> f64 {
        FloatPoly::from(self).eval(s, e)
    }

    /// Exact value of a ς-only polynomial at a rational time.
    pub fn eval_time_exact(&self, s: &Rational) -> Result<Rational> {
        if !self.is_time_only() {
            return Err(Error::Precondition(
                "exact evaluation needs a time-only polynomial".into(),
            ));
        }
        Ok(self
            .terms
            .iter()
            .fold(Rational::zero(), |acc, (key, c)| acc + c * pow(s, key.j)))
    }
}

pub(crate) fn pow(r: &Rational, n: u32) -> Rational {
    num_traits::pow(r.clone(), n as usize)
}

impl Add<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ExpPoly {
    type Output = ExpPoly;
    fn add(mut self, rhs: ExpPoly) -> ExpPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&ExpPoly> for ExpPoly {
    fn add_assign(&mut self, rhs: &ExpPoly) {
        for (key, c) in &rhs.terms {
            self.add_term(key.clone(), c.clone());
        }
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c))
                .collect(),
        }
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl Sub<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (key, c) in &rhs.terms {
            out.add_term(key.clone(), -c);
        }
        out
    }
}

impl Sub for ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: ExpPoly) -> ExpPoly {
        &self - &rhs
    }
}

impl Mul<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(
                    Key {
                        lambda: &ka.lambda + &kb.lambda,
                        k: ka.k + kb.k,
                        j: ka.j + kb.j,
                    },
                    ca * cb,
                );
            }
        }
        out
    }
}

impl Mul for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: ExpPoly) -> ExpPoly {
        &self * &rhs
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.terms() {
            writeln!(f, "{}", text::format_term(&t))?;
        }
        Ok(())
    }
}

/// Floating-point snapshot of an [`ExpPoly`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    // (lambda, k, j, coeff) in canonical order
    terms: Vec<(f64, i32, i32, f64)>,
}

impl From<&ExpPoly> for FloatPoly {
    fn from(p: &ExpPoly) -> Self {
        FloatPoly {
            terms: p
                .iter()
                .map(|(key, c)| (to_f64(&key.lambda), key.k as i32, key.j as i32, to_f64(c)))
                .collect(),
        }
    }
}

impl FloatPoly {
    pub fn eval(&self, s: f64, e: f64) -> f64 {
        let mut acc = 0.0;
        let mut last_lambda = f64::NAN;
        let mut decay = 1.0;
        for &(lambda, k, j, c) in &self.terms {
            if lambda != last_lambda {
                decay = (-lambda * e).exp();
                last_lambda = lambda;
            }
            acc += c * s.powi(j) * e.powi(k) * decay;
        }
        acc
    }

    /// Σ |c|·sʲ·∫_E^∞ ε^{k+w} e^{−λε} dε, an upper bound on the part of
    /// `∫ ε^w |f(s, ε)| dε` beyond `E`.
    pub fn tail_bound(&self, s: f64, cutoff: f64, weight: i32) -> f64 {
        self.terms
            .iter()
            .map(|&(lambda, k, j, c)| {
                c.abs() * s.abs().powi(j) * upper_tail(k + weight, lambda, cutoff)
            })
            .sum()
    }

    pub fn is_decaying(&self) -> bool {
        self.terms.iter().all(|t| t.0 > 0.0)
    }

    pub fn max_size_degree(&self) -> i32 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    pub fn min_lambda(&self) -> Option<f64> {
        self.terms.first().map(|t| t.0)
    }
}

/// `∫_E^∞ εⁿ e^{−λε} dε` in floating point.
pub(crate) fn upper_tail(n: i32, lambda: f64, cutoff: f64) -> f64 {
    let mut sum = 0.0;
    let mut ratio = 1.0; // n!/i! for i = n downwards
    for i in (0..=n).rev() {
        sum += ratio * cutoff.powi(i) / lambda.powi(n - i + 1);
        ratio *= i as f64;
    }
    (-lambda * cutoff).exp() * sum
}
