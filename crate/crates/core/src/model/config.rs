//! Built-in cases and the key-value case file format.
//!
//! ```text
//! label = my-case
//! kernel.c = 1/20
//! kernel.a = 1
//! frag.kind = powerlaw          # or: discrete
//! frag.beta = 2
//! frag.gamma = 0
//! frag.delta = -1
//! # frag.fragment = 1, 2/5      # repeated, discrete only
//! init = 1/1 s^0 x^2 exp(-1/1 x)   # repeated, or `;`-separated terms
//! ```

use std::path::Path;

use num_bigint::BigInt;

use super::{CaseSpec, CollisionKernel, Fragment, Fragmentation, InitialCondition};
use crate::error::{Error, Result};
use crate::expalg::{int, parse_term, rat, ExpPoly, Rational};

pub const BUILTIN_CASES: [&str; 3] = ["example1", "example2", "example3"];

/// The three reference problems: product kernel with binary power-law
/// breakage (`example1`, `example2`) and constant kernel with a two-piece
/// Dirac breakage (`example3`).
pub fn builtin_case(label: &str) -> Result<CaseSpec> {
    let binary = Fragmentation::PowerLaw {
        beta: int(2),
        gamma: 0,
        delta: -1,
    };
    match label {
        "example1" => CaseSpec::new(
            CollisionKernel::new(int(1), 1)?,
            binary,
            InitialCondition::new(ExpPoly::size_exp(0, int(1)))?,
            label,
        ),
        "example2" => CaseSpec::new(
            CollisionKernel::new(rat(1, 20), 1)?,
            binary,
            InitialCondition::new(ExpPoly::size_exp(2, int(1)))?,
            label,
        ),
        "example3" => CaseSpec::new(
            CollisionKernel::new(int(1), 0)?,
            Fragmentation::Discrete {
                fragments: vec![
                    Fragment {
                        weight: int(1),
                        ratio: rat(2, 5),
                    },
                    Fragment {
                        weight: int(1),
                        ratio: rat(3, 5),
                    },
                ],
            },
            InitialCondition::new(ExpPoly::size_exp(0, int(1)))?,
            label,
        ),
        _ => Err(Error::UnknownCase(label.to_string())),
    }
}

/// A built-in label, or else a path to a case file.
pub fn resolve_case(name: &str) -> Result<CaseSpec> {
    if BUILTIN_CASES.contains(&name) {
        return builtin_case(name);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(Error::UnknownCase(name.to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    parse_case_file(&text)
}

/// Parses `12`, `-3/4` or an exact decimal such as `0.4`.
fn parse_number(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
        if d == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let digits = format!("{whole}{frac}");
        let n: BigInt = digits.parse().map_err(|_| format!("bad number `{s}`"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| format!("bad number `{s}`"))?;
    Ok(Rational::from_integer(n))
}

fn parse_int<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.trim().parse().map_err(|_| format!("bad integer `{}`", s.trim()))
}

pub fn parse_case_file(text: &str) -> Result<CaseSpec> {
    let mut label = String::from("custom");
    let mut c = None;
    let mut a = None;
    let mut kind = None;
    let (mut beta, mut gamma, mut delta) = (None, None, None);
    let mut fragments = Vec::new();
    let mut init_terms = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
        let value = value.trim();
        match key.trim() {
            "label" => label = value.to_string(),
            "kernel.c" => c = Some(parse_number(value).map_err(err)?),
            "kernel.a" => a = Some(parse_int::<u32>(value).map_err(err)?),
            "frag.kind" => kind = Some(value.to_string()),
            "frag.beta" => beta = Some(parse_number(value).map_err(err)?),
            "frag.gamma" => gamma = Some(parse_int::<u32>(value).map_err(err)?),
            "frag.delta" => delta = Some(parse_int::<i32>(value).map_err(err)?),
            "frag.fragment" => {
                let (w, r) = value
                    .split_once(',')
                    .ok_or_else(|| err("fragment needs `w, a`".into()))?;
                fragments.push(Fragment {
                    weight: parse_number(w).map_err(err)?,
                    ratio: parse_number(r).map_err(err)?,
                });
            }
            "init" => {
                for part in value.split(';').filter(|p| !p.trim().is_empty()) {
                    init_terms.push(parse_term(part.trim()).map_err(err)?);
                }
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }

    let missing = |k: &str| Error::Parse {
        line: 0,
        msg: format!("missing key `{k}`"),
    };
    let kernel = CollisionKernel::new(c.ok_or_else(|| missing("kernel.c"))?, a.ok_or_else(|| missing("kernel.a"))?)?;
    let frag = match kind.as_deref() {
        Some("powerlaw") => Fragmentation::PowerLaw {
            beta: beta.ok_or_else(|| missing("frag.beta"))?,
            gamma: gamma.ok_or_else(|| missing("frag.gamma"))?,
            delta: delta.ok_or_else(|| missing("frag.delta"))?,
        },
        Some("discrete") => Fragmentation::Discrete { fragments },
        Some(other) => {
            return Err(Error::Parse {
                line: 0,
                msg: format!("unknown frag.kind `{other}`"),
            })
        }
        None => return Err(missing("frag.kind")),
    };
    if init_terms.is_empty() {
        return Err(missing("init"));
    }
    let init = InitialCondition::new(ExpPoly::from_terms(init_terms))?;
    CaseSpec::new(kernel, frag, init, label)
}
