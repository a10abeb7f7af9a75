//! Ways of naming a knot on the command line.

use upsilon_core::braid::BraidWord;
use upsilon_core::family::{alexander_closed_form, braid_word, catalog_knot, FamilyKnot, Which};
use upsilon_core::knotform::torus_semigroup;
use upsilon_core::poly::IntLaurentPoly;

use crate::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotSpec {
    Alexander(IntLaurentPoly),
    Torus(i64, i64),
    Family(FamilyKnot),
    Braid(BraidWord),
    Catalog(String),
}

/// A specification resolved to an L-space form polynomial.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub label: String,
    pub alexander: IntLaurentPoly,
}

impl KnotSpec {
    /// `[[exp, coeff], ...]`.
    pub fn parse_alexander(s: &str) -> Result<Self> {
        let p: IntLaurentPoly =
            serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad --alexander value: {e}")))?;
        Ok(KnotSpec::Alexander(p))
    }

    /// `p,q`.
    pub fn parse_torus(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [p, q] = parts.as_slice() else {
            return Err(CliError::Usage(format!("bad --torus value {s:?}, expected p,q")));
        };
        let p = p.parse().map_err(|_| CliError::Usage(format!("bad torus parameter {p:?}")))?;
        let q = q.parse().map_err(|_| CliError::Usage(format!("bad torus parameter {q:?}")))?;
        Ok(KnotSpec::Torus(p, q))
    }

    pub fn family(which: &str, n: i64) -> Result<Self> {
        let which: Which = which.parse().map_err(CliError::usage)?;
        Ok(KnotSpec::Family(FamilyKnot::new(which, n).map_err(CliError::usage)?))
    }

    /// Comma-separated letters; the strand count defaults to one more than
    /// the largest generator.
    pub fn parse_braid(word: &str, strands: Option<usize>) -> Result<Self> {
        let letters = word
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i32>().map_err(|_| CliError::Usage(format!("bad braid letter {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let strands =
            strands.unwrap_or_else(|| letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(1) + 1);
        Ok(KnotSpec::Braid(BraidWord::new(strands, letters).map_err(CliError::usage)?))
    }

    pub fn braid_word(&self) -> Result<BraidWord> {
        match self {
            KnotSpec::Braid(w) => Ok(w.clone()),
            KnotSpec::Family(k) => Ok(braid_word(*k)),
            KnotSpec::Catalog(name) => catalog_knot(name)
                .map_err(CliError::usage)?
                .braid
                .ok_or_else(|| CliError::Usage(format!("no braid word stored for {name}"))),
            KnotSpec::Torus(p, q) if *p >= 2 && *q >= 2 => {
                let letters: Vec<i32> = (1..*p as i32).collect();
                Ok(BraidWord::new(*p as usize, letters.repeat(*q as usize)).map_err(CliError::usage)?)
            }
            _ => Err(CliError::Usage("this knot specification has no braid word".into())),
        }
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let (label, alexander) = match self {
            KnotSpec::Alexander(p) => ("alexander".to_string(), p.normalize_knot()),
            KnotSpec::Torus(p, q) => {
                let s = torus_semigroup(*p.min(q), *p.max(q)).map_err(CliError::usage)?;
                (format!("T({p},{q})"), s.alexander())
            }
            KnotSpec::Family(k) => (k.to_string(), alexander_closed_form(*k)),
            KnotSpec::Braid(w) => {
                let d = w.alexander_of_closure().map_err(CliError::usage)?;
                (format!("closure of {w}"), d.normalize_knot())
            }
            KnotSpec::Catalog(name) => {
                let e = catalog_knot(name).map_err(CliError::usage)?;
                (e.name.to_string(), e.alexander)
            }
        };
        if !alexander.is_lspace_form() {
            return Err(CliError::Usage(format!("{label}: Alexander polynomial {alexander} is not of L-space form")));
        }
        Ok(Resolved { label, alexander })
    }
}
