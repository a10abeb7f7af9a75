//! Gap functions: the step function `x ↦ 2 I(g - x)` built from a formal
//! semigroup, together with its convex envelope and Upsilon.

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::knotform::{formal_semigroup, FormalSemigroup, KnotFormError};
use crate::plmath::{int, lower_convex_envelope, PLFunction, PlError, Rational};
use crate::poly::IntLaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GapFnError {
    #[error("invalid gap function values: {0}")]
    InvalidValues(String),
    #[error("step pattern does not come from a gap set: {0}")]
    InvalidStepPattern(String),
    #[error(transparent)]
    KnotForm(#[from] KnotFormError),
    #[error(transparent)]
    Pl(#[from] PlError),
}

/// Values at `x = -g, ..., g`. Left of `-g` the function is 0, right of `g`
/// it is `2x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GapFunction {
    genus: usize,
    values: Vec<i64>,
}

impl GapFunction {
    pub fn new(values: Vec<i64>) -> Result<Self, GapFnError> {
        if values.len().is_multiple_of(2) {
            return Err(GapFnError::InvalidValues(format!("expected an odd number of values, got {}", values.len())));
        }
        let genus = values.len() / 2;
        if values[0] != 0 {
            return Err(GapFnError::InvalidValues(format!("value at -g is {}, expected 0", values[0])));
        }
        if *values.last().unwrap() != 2 * genus as i64 {
            return Err(GapFnError::InvalidValues(format!("value at g is not 2g = {}", 2 * genus)));
        }
        if let Some(i) = values.windows(2).position(|w| !matches!(w[1] - w[0], 0 | 2)) {
            return Err(GapFnError::InvalidValues(format!(
                "step from x = {} to x = {} is neither 0 nor 2",
                i as i64 - genus as i64,
                i as i64 + 1 - genus as i64
            )));
        }
        Ok(Self { genus, values })
    }

    /// From the up/flat pattern of the 2g unit steps starting at `(-g, 0)`.
    pub fn from_steps(ups: &[bool]) -> Result<Self, GapFnError> {
        let mut values = Vec::with_capacity(ups.len() + 1);
        values.push(0);
        let mut v = 0;
        for &up in ups {
            if up {
                v += 2;
            }
            values.push(v);
        }
        Self::new(values)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Value at any integer, rays included.
    pub fn value_at(&self, x: i64) -> i64 {
        let g = self.genus as i64;
        if x <= -g {
            0
        } else if x >= g {
            2 * x
        } else {
            self.values[(x + g) as usize]
        }
    }

    /// `I(m)`, recovered from the values.
    pub fn i_function(&self, m: i64) -> i64 {
        self.value_at(self.genus as i64 - m) / 2
    }

    /// `J(m) = I(m + g)`.
    pub fn j_function(&self, m: i64) -> i64 {
        self.i_function(m + self.genus as i64)
    }

    /// `G(k) = G(-k) + 2k` for every `k`.
    pub fn is_symmetric(&self) -> bool {
        let g = self.genus as i64;
        (0..=g).all(|k| self.value_at(k) == self.value_at(-k) + 2 * k)
    }

    pub fn samples(&self) -> Vec<(i64, Rational)> {
        let g = self.genus as i64;
        self.values.iter().enumerate().map(|(i, &v)| (i as i64 - g, int(v))).collect()
    }

    /// Linear interpolation between integer points, with the two rays.
    pub fn to_pl_function(&self) -> PLFunction {
        let vertices = self.samples().into_iter().map(|(x, y)| (int(x), y)).collect();
        PLFunction::on_line(vertices, int(0), int(2)).expect("sample abscissae increase")
    }

    pub fn hull(&self) -> PLFunction {
        lower_convex_envelope(&self.samples(), int(0), int(2)).expect("gap function samples respect both rays")
    }

    pub fn upsilon(&self) -> PLFunction {
        self.hull().legendre_fenchel().expect("envelopes are convex")
    }
}

impl<'de> Deserialize<'de> for GapFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            genus: usize,
            values: Vec<i64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let f = GapFunction::new(raw.values).map_err(serde::de::Error::custom)?;
        if f.genus != raw.genus {
            return Err(serde::de::Error::custom(format!(
                "genus {} does not match {} values",
                raw.genus,
                f.values.len()
            )));
        }
        Ok(f)
    }
}

pub fn gap_function(s: &FormalSemigroup) -> GapFunction {
    let g = s.genus() as i64;
    let values = (-g..=g).map(|k| 2 * s.gaps_at_least(g - k)).collect();
    GapFunction { genus: s.genus(), values }
}

/// Inverse of [`gap_function`]: `i` is a gap exactly when `I(i) > I(i + 1)`.
pub fn gaps_from_function(f: &GapFunction) -> Result<FormalSemigroup, GapFnError> {
    let g = f.genus as i64;
    let gaps: Vec<i64> = (0..2 * g).filter(|&i| f.i_function(i) > f.i_function(i + 1)).collect();
    if gaps.len() as i64 != g {
        return Err(GapFnError::InvalidStepPattern(format!("found {} gaps for genus {g}", gaps.len())));
    }
    if g > 0 && *gaps.last().unwrap() != 2 * g - 1 {
        return Err(GapFnError::InvalidStepPattern(format!(
            "largest gap is {}, expected {}",
            gaps.last().unwrap(),
            2 * g - 1
        )));
    }
    FormalSemigroup::from_gaps(gaps).map_err(|e| GapFnError::InvalidStepPattern(e.to_string()))
}

pub fn symmetry_of_function(f: &GapFunction) -> bool {
    f.is_symmetric()
}

pub fn gap_function_of(delta: &IntLaurentPoly) -> Result<GapFunction, GapFnError> {
    Ok(gap_function(&formal_semigroup(delta)?))
}

pub fn upsilon_of(delta: &IntLaurentPoly) -> Result<PLFunction, GapFnError> {
    Ok(gap_function_of(delta)?.upsilon())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotform::all_gap_sequences;
    use crate::plmath::rat;

    fn semigroup(gaps: &[i64]) -> FormalSemigroup {
        FormalSemigroup::from_gaps(gaps.to_vec()).unwrap()
    }

    #[test]
    fn pretzel_values() {
        let f = gap_function(&semigroup(&[1, 2, 4, 6, 9]));
        assert_eq!(f.values(), &[0, 2, 2, 2, 4, 4, 6, 6, 8, 10, 10]);
        assert_eq!(f.value_at(3), 8);
        assert_eq!(f.value_at(-3), 2);
        assert!(f.is_symmetric());
        assert_eq!(gaps_from_function(&f).unwrap().gaps(), &[1, 2, 4, 6, 9]);
    }

    #[test]
    fn unknot_values() {
        let f = gap_function(&semigroup(&[]));
        assert_eq!(f.values(), &[0]);
        assert!(f.is_symmetric());
        assert!(gaps_from_function(&f).unwrap().gaps().is_empty());
        assert_eq!(f.upsilon().vertices(), &[(int(0), int(0)), (int(2), int(0))]);
    }

    #[test]
    fn i_and_j_match_the_semigroup() {
        let s = semigroup(&[1, 2, 4, 6, 9]);
        let f = gap_function(&s);
        for m in -8..14 {
            assert_eq!(f.i_function(m), s.gaps_at_least(m), "m = {m}");
            assert_eq!(f.j_function(m), s.gaps_at_least(m + 5));
        }
    }

    #[test]
    fn inverts_a_family_member_of_the_unique_type() {
        // S = {0, 4} ∪ {6, 7, 8} ∪ [10, ∞)
        let delta = IntLaurentPoly::alternating(&[0, 1, 4, 5, 6, 9, 10]);
        let f = gap_function_of(&delta).unwrap();
        assert_eq!(gaps_from_function(&f).unwrap().gaps(), &[1, 2, 3, 5, 9]);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(GapFunction::new(vec![0, 2]).is_err());
        assert!(GapFunction::new(vec![0, 4, 4]).is_err());
        assert!(GapFunction::new(vec![2, 2, 2]).is_err());
        assert!(GapFunction::new(vec![0, 2, 4]).is_err());
        let flat_first = GapFunction::new(vec![0, 0, 2, 2, 4, 4, 6]).unwrap();
        assert!(matches!(gaps_from_function(&flat_first), Err(GapFnError::InvalidStepPattern(_))));
    }

    #[test]
    fn asymmetric_pattern_at_genus_three() {
        let asym: Vec<_> = all_gap_sequences(3).into_iter().filter(|s| !s.is_symmetric()).collect();
        assert!(!asym.is_empty());
        for s in asym {
            assert!(!gap_function(&s).is_symmetric(), "{:?}", s.gaps());
        }
        assert!(!GapFunction::new(vec![0, 2, 4, 4, 4, 6, 6]).unwrap().is_symmetric());
    }

    #[test]
    fn exhaustive_round_trip_and_symmetry() {
        for g in 0..=6 {
            for s in all_gap_sequences(g) {
                let f = gap_function(&s);
                assert_eq!(f.genus(), g);
                assert_eq!(f.values()[0], 0);
                assert_eq!(*f.values().last().unwrap(), 2 * g as i64);
                assert!(f.values().windows(2).all(|w| matches!(w[1] - w[0], 0 | 2)));
                assert_eq!(gaps_from_function(&f).unwrap(), s);
                assert_eq!(symmetry_of_function(&f), s.is_symmetric(), "{:?}", s.gaps());
            }
        }
    }

    #[test]
    fn interpolation_adapter() {
        let f = gap_function(&semigroup(&[1, 2, 5]));
        let pl = f.to_pl_function();
        for x in -6..=6 {
            assert_eq!(pl.eval(&int(x)).unwrap(), int(f.value_at(x)));
        }
        assert_eq!(pl.eval(&rat(1, 2)).unwrap(), int(3));
    }

    #[test]
    fn pretzel_upsilon_values() {
        let delta = IntLaurentPoly::alternating(&[0, 1, 3, 4, 5, 6, 7, 9, 10]);
        let ups = upsilon_of(&delta).unwrap();
        let expect = [(rat(0, 1), 0), (rat(2, 3), -10), (rat(1, 1), -12), (rat(4, 3), -10), (rat(2, 1), 0)];
        for (t, v) in expect {
            assert_eq!(ups.eval(&t).unwrap(), rat(v, 3));
        }
    }

    #[test]
    fn json() {
        let f = gap_function(&semigroup(&[1, 2, 5]));
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"genus":3,"values":[0,2,2,2,4,6,6]}"#);
        assert_eq!(serde_json::from_str::<GapFunction>(&j).unwrap(), f);
        assert!(serde_json::from_str::<GapFunction>(r#"{"genus":2,"values":[0,2,2,2,4,6,6]}"#).is_err());
    }
}
