//! Formal semigroups and gap sequences of L-space form Alexander polynomials.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::IntLaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotFormError {
    #[error("polynomial is not of L-space form: {reason}")]
    NotLSpaceForm { reason: String },
    #[error("invalid gap sequence: {reason}")]
    InvalidGaps { reason: String },
    #[error("bad torus knot parameters ({p}, {q}): need 1 < p < q and gcd(p, q) = 1")]
    BadParameters { p: i64, q: i64 },
}

/// A formal semigroup `S ⊂ Z≥0` stored through its gap sequence
/// `0 < a_1 < ... < a_g`, with `a_g = 2g - 1` whenever `g ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FormalSemigroup {
    genus: usize,
    gaps: Vec<i64>,
}

#[derive(Deserialize)]
struct RawSemigroup {
    genus: usize,
    gaps: Vec<i64>,
}

impl<'de> Deserialize<'de> for FormalSemigroup {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawSemigroup::deserialize(deserializer)?;
        let s = FormalSemigroup::from_gaps(raw.gaps).map_err(serde::de::Error::custom)?;
        if s.genus != raw.genus {
            return Err(serde::de::Error::custom(format!("genus {} does not match {} gaps", raw.genus, s.genus)));
        }
        Ok(s)
    }
}

impl FormalSemigroup {
    pub fn from_gaps(gaps: Vec<i64>) -> Result<Self, KnotFormError> {
        let g = gaps.len();
        if let Some(&first) = gaps.first() {
            if first <= 0 {
                return Err(KnotFormError::InvalidGaps { reason: format!("gap {first} is not positive") });
            }
        }
        if let Some(w) = gaps.windows(2).find(|w| w[0] >= w[1]) {
            return Err(KnotFormError::InvalidGaps {
                reason: format!("gaps not strictly increasing at {} >= {}", w[0], w[1]),
            });
        }
        if let Some(&last) = gaps.last() {
            if last != 2 * g as i64 - 1 {
                return Err(KnotFormError::InvalidGaps {
                    reason: format!("top gap {last} differs from 2g - 1 = {}", 2 * g as i64 - 1),
                });
            }
        }
        Ok(Self { genus: g, gaps })
    }

    /// Builds the semigroup from an explicit element list; everything at or
    /// beyond `conductor` is a member.
    pub fn from_elements(elements: &[i64], conductor: i64) -> Result<Self, KnotFormError> {
        let gaps = (0..conductor).filter(|s| !elements.contains(s)).collect();
        Self::from_gaps(gaps)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    /// `2g`; every integer from here on is in `S`.
    pub fn conductor(&self) -> i64 {
        2 * self.genus as i64
    }

    pub fn contains(&self, s: i64) -> bool {
        s >= 0 && self.gaps.binary_search(&s).is_err()
    }

    /// Elements of `S` below the conductor.
    pub fn small_elements(&self) -> Vec<i64> {
        (0..self.conductor()).filter(|&s| self.contains(s)).collect()
    }

    /// `Δ(t) = 1 + (t - 1) Σ t^{a_i}`.
    pub fn alexander(&self) -> IntLaurentPoly {
        let sum = IntLaurentPoly::from_pairs(self.gaps.iter().map(|&a| (a, 1)));
        let t_minus_one = IntLaurentPoly::from_pairs([(1, 1), (0, -1)]);
        &IntLaurentPoly::one() + &(&t_minus_one * &sum)
    }

    /// Checks closure under addition below the conductor. Returns the
    /// lexicographically first pair `(s, s')`, `s <= s'`, whose sum lies in
    /// a gap, or `None` when `S` is a semigroup.
    pub fn closure_witness(&self) -> Option<(i64, i64)> {
        let elems = self.small_elements();
        let c = self.conductor();
        for (i, &s) in elems.iter().enumerate() {
            for &s2 in &elems[i..] {
                if s + s2 >= c {
                    break;
                }
                if !self.contains(s + s2) {
                    return Some((s, s2));
                }
            }
        }
        None
    }

    pub fn is_semigroup_closed(&self) -> bool {
        self.closure_witness().is_none()
    }

    /// `s ∈ S ⟺ 2g - 1 - s ∉ S` for all `0 <= s <= 2g - 1`.
    pub fn is_symmetric(&self) -> bool {
        let top = self.conductor() - 1;
        (0..=top).all(|s| self.contains(s) != self.contains(top - s))
    }

    /// Number of gaps at or above `m`, counting the negative integers as gaps.
    pub fn gaps_at_least(&self, m: i64) -> i64 {
        let below = self.gaps.partition_point(|&a| a < m);
        (self.gaps.len() - below) as i64 + (-m).max(0)
    }

    pub fn surgery_threshold(&self) -> i64 {
        2 * self.genus as i64 - 1
    }
}

/// Expands `Δ(t) / (1 - t)` and reads off the formal semigroup.
///
/// Partial coefficient sums of an L-space form polynomial are always 0 or 1;
/// any other running sum is reported with its exponent.
pub fn formal_semigroup(delta: &IntLaurentPoly) -> Result<FormalSemigroup, KnotFormError> {
    if !delta.is_lspace_form() {
        return Err(KnotFormError::NotLSpaceForm { reason: format!("{delta} fails the shape check") });
    }
    let top = delta.max_exp().unwrap_or(0);
    let mut running = num_bigint::BigInt::zero();
    let mut gaps = Vec::new();
    for e in 0..top {
        running += delta.coeff(e);
        match running.to_i64() {
            Some(1) => {}
            Some(0) => gaps.push(e),
            _ => return Err(KnotFormError::NotLSpaceForm { reason: format!("partial sum {running} at exponent {e}") }),
        }
    }
    if 2 * gaps.len() as i64 != top {
        return Err(KnotFormError::NotLSpaceForm { reason: format!("{} gaps but degree {top}", gaps.len()) });
    }
    FormalSemigroup::from_gaps(gaps)
}

pub fn alexander_from_gaps(s: &FormalSemigroup) -> IntLaurentPoly {
    s.alexander()
}

/// Semigroup `⟨p, q⟩` of the torus knot `T(p, q)`.
pub fn torus_semigroup(p: i64, q: i64) -> Result<FormalSemigroup, KnotFormError> {
    if !(1 < p && p < q) || !p.gcd(&q).is_one() {
        return Err(KnotFormError::BadParameters { p, q });
    }
    let conductor = (p - 1) * (q - 1);
    let mut member = vec![false; conductor as usize];
    for a in (0..conductor).step_by(p as usize) {
        for s in (a..conductor).step_by(q as usize) {
            member[s as usize] = true;
        }
    }
    let gaps = (0..conductor).filter(|&s| !member[s as usize]).collect();
    FormalSemigroup::from_gaps(gaps)
}

/// `g = deg Δ / 2` for an L-space form polynomial.
pub fn genus(delta: &IntLaurentPoly) -> Result<i64, KnotFormError> {
    if !delta.is_lspace_form() {
        return Err(KnotFormError::NotLSpaceForm { reason: format!("{delta} fails the shape check") });
    }
    Ok(delta.max_exp().unwrap_or(0) / 2)
}

/// Smallest slope `2g - 1` from which integral surgery gives an L-space.
pub fn surgery_threshold(delta: &IntLaurentPoly) -> Result<i64, KnotFormError> {
    Ok(2 * genus(delta)? - 1)
}

/// All gap sequences of genus `g` with top gap `2g - 1`.
pub fn all_gap_sequences(g: usize) -> Vec<FormalSemigroup> {
    if g == 0 {
        return vec![FormalSemigroup::from_gaps(Vec::new()).unwrap()];
    }
    let pool = 2 * g - 2;
    let mut out = Vec::new();
    for mask in 0u64..(1 << pool) {
        if mask.count_ones() as usize != g - 1 {
            continue;
        }
        let mut gaps: Vec<i64> = (0..pool).filter(|b| mask >> b & 1 == 1).map(|b| b as i64 + 1).collect();
        gaps.push(2 * g as i64 - 1);
        out.push(FormalSemigroup::from_gaps(gaps).unwrap());
    }
    out.sort();
    out
}
