//! Line-oriented text form of [`ExpPoly`]:
//! `num/den s^j x^k exp(-lnum/lden x)`, one term per line, canonical order.

use std::str::FromStr;

use num_bigint::BigInt;

use super::{ExpPoly, Rational, Term};
use crate::error::Error;

pub(super) fn format_term(t: &Term) -> String {
    format!(
        "{}/{} s^{} x^{} exp(-{}/{} x)",
        t.coeff.numer(),
        t.coeff.denom(),
        t.j,
        t.k,
        t.lambda.numer(),
        t.lambda.denom()
    )
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator `{n}`"))?;
    let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator `{d}`"))?;
    if d == BigInt::from(0) {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(n, d))
}

fn parse_power(tok: &str, var: char) -> Result<u32, String> {
    let rest = tok
        .strip_prefix(var)
        .and_then(|r| r.strip_prefix('^'))
        .ok_or_else(|| format!("expected `{var}^n`, found `{tok}`"))?;
    rest.parse().map_err(|_| format!("bad exponent in `{tok}`"))
}

/// Parses one term line.
pub fn parse_term(line: &str) -> Result<Term, String> {
    let mut toks = line.split_whitespace();
    let coeff = parse_rational(toks.next().ok_or("empty term")?)?;
    let j = parse_power(toks.next().ok_or("missing `s^j`")?, 's')?;
    let k = parse_power(toks.next().ok_or("missing `x^k`")?, 'x')?;
    let exp_tok = toks.next().ok_or("missing `exp(...)`")?;
    let x_tok = toks.next().ok_or("missing `x)`")?;
    if x_tok != "x)" || toks.next().is_some() {
        return Err(format!("malformed exponential in `{line}`"));
    }
    let lam = exp_tok
        .strip_prefix("exp(-")
        .ok_or_else(|| format!("expected `exp(-λ`, found `{exp_tok}`"))?;
    let lambda = parse_rational(lam)?;
    if lambda < Rational::from_integer(0.into()) {
        return Err("decay rate must be non-negative".into());
    }
    Ok(Term::new(coeff, j, k, lambda))
}

impl FromStr for ExpPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut terms = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let t = parse_term(line).map_err(|msg| Error::Parse { line: i + 1, msg })?;
            terms.push(t);
        }
        Ok(ExpPoly::from_terms(terms))
    }
}
