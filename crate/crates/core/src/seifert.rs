//! Arithmetic on small Seifert fibered spaces `M(e0; r1, r2, r3)` and the
//! coprime-pair test that certifies some of them as L-spaces.
//!
//! Only the sufficient condition is implemented: when a space normalizes to
//! `M(-1; r1, r2, r3)` with `1 > r1 >= r2 >= r3 > 0` and there are no coprime
//! `m > a > 0` with `a/m > r1`, `(m-a)/m > r2` and `1/m > r3`, it is an
//! L-space. Anything else is left undecided.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::plmath::{format_rational, int, parse_rational, PlError, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("expected 1 >= r1 >= r2 >= r3 >= 0, got {0}")]
    BadOrdering(String),
    #[error("r3 = 0 leaves the search for m unbounded")]
    Unbounded,
    #[error("search range is too large (m up to {0})")]
    TooLarge(String),
    #[error(transparent)]
    Parse(#[from] PlError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeifertForm {
    pub e0: i64,
    pub ratios: Vec<Rational>,
}

fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

impl Serialize for SeifertForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            e0: i64,
            #[serde(serialize_with = "ser_rationals")]
            ratios: &'a [Rational],
        }
        Repr { e0: self.e0, ratios: &self.ratios }.serialize(s)
    }
}

impl SeifertForm {
    pub fn new(e0: i64, ratios: Vec<Rational>) -> Self {
        Self { e0, ratios }
    }

    /// Ratios as a comma-separated list such as `"-3/7,-1/3,-1/5"`.
    pub fn parse(e0: i64, ratios: &str) -> Result<Self, SeifertError> {
        let ratios =
            ratios.split(',').filter(|s| !s.trim().is_empty()).map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { e0, ratios })
    }

    /// Moves every ratio into `[0, 1)`, absorbing the integer parts into
    /// `e0`, drops zero ratios and sorts the rest in decreasing order.
    pub fn normalize(&self) -> Self {
        let mut e0 = self.e0;
        let mut ratios = Vec::new();
        for r in &self.ratios {
            let fl = r.floor();
            e0 += fl.to_integer().to_i64().expect("integer part fits in i64");
            let frac = r - fl;
            if !frac.is_zero() {
                ratios.push(frac);
            }
        }
        ratios.sort_by(|a, b| b.cmp(a));
        Self { e0, ratios }
    }

    /// The orientation reversal `M(-e0; -r1, -r2, -r3)`.
    pub fn negate(&self) -> Self {
        Self { e0: -self.e0, ratios: self.ratios.iter().map(|r| -r).collect() }
    }
}

impl fmt::Display for SeifertForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({};", self.e0)?;
        if self.ratios.is_empty() {
            write!(f, " -")?;
        }
        for (i, r) in self.ratios.iter().enumerate() {
            write!(f, "{} {}", if i == 0 { "" } else { "," }, format_rational(r))?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateRow {
    pub m: i64,
    pub reason: String,
}

/// Why no coprime pair exists: every admissible `m` with the reason that
/// no `a` works for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(serialize_with = "ser_rationals")]
    pub r: Vec<Rational>,
    /// Largest `m` with `1/m > r3`.
    pub m_max: i64,
    pub rows: Vec<CertificateRow>,
}

const SEARCH_LIMIT: i64 = 10_000_000;

fn check_ordering(r1: &Rational, r2: &Rational, r3: &Rational) -> Result<(), SeifertError> {
    let ok = *r1 <= Rational::one() && r1 >= r2 && r2 >= r3 && !r3.is_negative();
    if ok {
        Ok(())
    } else {
        Err(SeifertError::BadOrdering(format!("({r1}, {r2}, {r3})")))
    }
}

/// Largest `m` with `1/m > r3`, that is the largest integer below `1/r3`.
fn m_bound(r3: &Rational) -> Result<i64, SeifertError> {
    if r3.is_zero() {
        return Err(SeifertError::Unbounded);
    }
    let inv = r3.recip();
    let m = if inv.is_integer() { inv.to_integer() - 1 } else { inv.floor().to_integer() };
    m.to_i64().filter(|&m| m <= SEARCH_LIMIT).ok_or_else(|| SeifertError::TooLarge(m.to_string()))
}

/// First coprime pair if any, the rows ruled out before it, and `m_max`.
type SearchResult = (Option<(i64, i64)>, Vec<CertificateRow>, i64);

fn search(r1: &Rational, r2: &Rational, r3: &Rational) -> Result<SearchResult, SeifertError> {
    check_ordering(r1, r2, r3)?;
    let m_max = m_bound(r3)?;
    let mut rows = Vec::new();
    for m in 2..=m_max {
        let mq = int(m);
        // a/m > r1 and (m - a)/m > r2, i.e. r1 m < a < (1 - r2) m
        let lo = r1 * &mq;
        let hi = (Rational::one() - r2) * &mq;
        let candidates: Vec<i64> = (1..m).filter(|&a| int(a) > lo && int(a) < hi).collect();
        if let Some(&a) = candidates.iter().find(|&&a| a.gcd(&m) == 1) {
            return Ok((Some((m, a)), rows, m_max));
        }
        let reason = if candidates.is_empty() {
            format!("no integer a with {} < a < {}", format_rational(&lo), format_rational(&hi))
        } else {
            format!("every a in {candidates:?} shares a factor with {m}")
        };
        rows.push(CertificateRow { m, reason });
    }
    Ok((None, rows, m_max))
}

/// Lexicographically least coprime `(m, a)` with `m > a > 0`, `a/m > r1`,
/// `(m - a)/m > r2` and `1/m > r3`.
pub fn coprime_obstruction(r1: &Rational, r2: &Rational, r3: &Rational) -> Result<Option<(i64, i64)>, SeifertError> {
    Ok(search(r1, r2, r3)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Direct,
    Negated,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Direct => "direct",
            Side::Negated => "negated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub side: Side,
    pub normalized: SeifertForm,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum LSpaceVerdict {
    #[serde(rename = "lspace")]
    LSpace {
        side: Side,
        normalized: SeifertForm,
        certificate: Certificate,
    },
    Undecided {
        reason: String,
        attempts: Vec<Attempt>,
    },
}

impl LSpaceVerdict {
    pub fn is_lspace(&self) -> bool {
        matches!(self, LSpaceVerdict::LSpace { .. })
    }
}

/// Tries the space and its orientation reversal.
pub fn decide(s: &SeifertForm) -> LSpaceVerdict {
    let mut attempts = Vec::new();
    for (side, form) in [(Side::Direct, s.normalize()), (Side::Negated, s.negate().normalize())] {
        let outcome = if form.e0 != -1 {
            format!("normalizes to e0 = {}, not -1", form.e0)
        } else if form.ratios.len() < 3 {
            "fewer than three nonzero ratios after normalization (r3 = 0)".to_string()
        } else if form.ratios.len() > 3 {
            format!("{} exceptional fibers; only three are handled", form.ratios.len())
        } else {
            let r = &form.ratios;
            match search(&r[0], &r[1], &r[2]) {
                Ok((None, rows, m_max)) => {
                    let certificate = Certificate { r: r.clone(), m_max, rows };
                    return LSpaceVerdict::LSpace { side, normalized: form, certificate };
                }
                Ok((Some((m, a)), _, _)) => format!("coprime pair (m, a) = ({m}, {a}) exists"),
                Err(e) => e.to_string(),
            }
        };
        attempts.push(Attempt { side, normalized: form, outcome });
    }
    let reason = attempts.iter().map(|a| format!("{}: {}", a.side, a.outcome)).collect::<Vec<_>>().join("; ");
    LSpaceVerdict::Undecided { reason, attempts }
}
