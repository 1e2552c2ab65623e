use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::expalg::ExpPoly;
use crate::model::CaseSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Vim,
    Odm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Vim => "vim",
            Method::Odm => "odm",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "vim" => Ok(Method::Vim),
            "odm" => Ok(Method::Odm),
            other => Err(Error::Precondition(format!("unknown method `{other}`"))),
        }
    }
}

/// Components `f₀ … f_n` of a truncated series solution.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    pub method: Method,
    pub spec: CaseSpec,
    components: Vec<ExpPoly>,
}

impl SeriesSolution {
    pub(crate) fn new(method: Method, spec: CaseSpec, components: Vec<ExpPoly>) -> Self {
        debug_assert!(!components.is_empty());
        SeriesSolution {
            method,
            spec,
            components,
        }
    }

    pub fn order(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[ExpPoly] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &ExpPoly {
        &self.components[k]
    }

    /// `Σ_{k ≤ m} f_k`, i.e. φ_m for VIM and ψ_m for ODM.
    pub fn partial_sum(&self, m: usize) -> ExpPoly {
        let mut acc = ExpPoly::zero();
        for c in &self.components[..=m.min(self.order())] {
            acc += c;
        }
        acc
    }

    /// Text dump: one `# f_k` block per component.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            out.push_str(&format!("# f_{k}\n"));
            out.push_str(&c.to_string());
        }
        out
    }
}
