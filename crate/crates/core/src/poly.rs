//! Sparse integer Laurent polynomials in one and three variables.
//!
//! Coefficients are arbitrary precision; exponents are `i64` and every
//! exponent computation is overflow checked.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact: nonzero remainder at exponent {exponent}")]
    NonExactDivision { exponent: i64 },
    #[error("exponent overflow")]
    ExponentOverflow,
}

fn add_exp(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Laurent exponent overflow")
}

/// An integer Laurent polynomial in `t`. No stored coefficient is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntLaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl IntLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_pairs<C: Into<BigInt>>(pairs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    /// `sign[0] t^{e_0} + sign[1] t^{e_1} + ...` with alternating signs
    /// starting at `+`.
    pub fn alternating(exponents: &[i64]) -> Self {
        Self::from_pairs(exponents.iter().enumerate().map(|(i, &e)| (e, if i % 2 == 0 { 1 } else { -1 })))
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
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

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `max_exp - min_exp`, or `None` for the zero polynomial.
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(&e, c)| (add_exp(e, k), c.clone())).collect() }
    }

    /// `p(t^{-1})`.
    pub fn reverse(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e.checked_neg().expect("Laurent exponent overflow"), c.clone()))
                .collect(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &other.terms {
                out.add_term(add_exp(e1, e2), c1 * c2);
            }
        }
        out
    }

    /// Exact quotient `p / d` by lowest-exponent-first synthetic division.
    ///
    /// Fails with [`PolyError::NonExactDivision`] at the first exponent where
    /// a nonzero remainder term can no longer be absorbed by the quotient.
    pub fn exact_div(&self, d: &Self) -> Result<Self, PolyError> {
        let (d_lo, d_hi) = match (d.min_exp(), d.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(PolyError::DivisionByZero),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let lead = d.terms[&d_lo].clone();
        let q_hi = self.max_exp().unwrap().checked_sub(d_hi).ok_or(PolyError::ExponentOverflow)?;
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some(r_lo) = rem.min_exp() {
            let q_exp = r_lo.checked_sub(d_lo).ok_or(PolyError::ExponentOverflow)?;
            let rc = &rem.terms[&r_lo];
            if q_exp > q_hi {
                return Err(PolyError::NonExactDivision { exponent: r_lo });
            }
            let (qc, r) = rc.div_rem(&lead);
            if !r.is_zero() {
                return Err(PolyError::NonExactDivision { exponent: r_lo });
            }
            for (&e, c) in &d.terms {
                rem.add_term(add_exp(e, q_exp), -(c * &qc));
            }
            quotient.add_term(q_exp, qc);
        }
        Ok(quotient)
    }

    /// Multiplies by the unit `±t^k` so that the minimum exponent is 0 and
    /// the constant term is positive. The zero polynomial is returned as is.
    pub fn normalize_knot(&self) -> Self {
        let Some(lo) = self.min_exp() else {
            return Self::zero();
        };
        let shifted = self.shift(-lo);
        if shifted.terms[&0].is_negative() {
            -shifted
        } else {
            shifted
        }
    }

    /// Whether `p(t^{-1})` equals `p` up to a unit `±t^k`.
    pub fn is_symmetric(&self) -> bool {
        self.reverse().normalize_knot() == self.normalize_knot()
    }

    /// Whether `self` has the shape `1 - t + t^{a_2} - ... + t^{2g}` of an
    /// L-space knot: knot-normal, coefficients alternating `+1, -1, ..., +1`,
    /// second exponent 1, top exponent even and value 1 at `t = 1`.
    pub fn is_lspace_form(&self) -> bool {
        if self.min_exp() != Some(0) {
            return false;
        }
        let n = self.terms.len();
        if n.is_multiple_of(2) {
            return false;
        }
        for (i, c) in self.terms.values().enumerate() {
            let expected: BigInt = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            if *c != expected {
                return false;
            }
        }
        if n > 1 && !self.terms.contains_key(&1) {
            return false;
        }
        self.max_exp().unwrap() % 2 == 0 && self.eval_at_one().is_one()
    }

    /// The polynomial as a dense coefficient vector from `min_exp` upward.
    pub fn dense(&self) -> Vec<BigInt> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Vec::new();
        };
        (lo..=hi).map(|e| self.coeff(e)).collect()
    }
}

impl Add for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn add(self, rhs: Self) -> IntLaurentPoly {
        IntLaurentPoly::add(self, rhs)
    }
}

impl Add for IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn add(self, rhs: Self) -> IntLaurentPoly {
        IntLaurentPoly::add(&self, &rhs)
    }
}

impl Sub for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn sub(self, rhs: Self) -> IntLaurentPoly {
        IntLaurentPoly::sub(self, rhs)
    }
}

impl Sub for IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn sub(self, rhs: Self) -> IntLaurentPoly {
        IntLaurentPoly::sub(&self, &rhs)
    }
}

impl Mul for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn mul(self, rhs: Self) -> IntLaurentPoly {
        IntLaurentPoly::mul(self, rhs)
    }
}

impl Mul for IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn mul(self, rhs: Self) -> IntLaurentPoly {
        IntLaurentPoly::mul(&self, &rhs)
    }
}

impl Neg for IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn neg(mut self) -> IntLaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn neg(self) -> IntLaurentPoly {
        -self.clone()
    }
}

impl fmt::Display for IntLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let show_coeff = !abs.is_one() || e == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntLaurentPoly({self})")
    }
}

/// Coefficients serialize as JSON integers when they fit in `i64` and as
/// decimal strings otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Big(String),
}

impl CoeffRepr {
    fn from_big(c: &BigInt) -> Self {
        match c.to_i64() {
            Some(v) => CoeffRepr::Int(v),
            None => CoeffRepr::Big(c.to_string()),
        }
    }

    fn into_big<E: de::Error>(self) -> Result<BigInt, E> {
        match self {
            CoeffRepr::Int(v) => Ok(BigInt::from(v)),
            CoeffRepr::Big(s) => s.trim().parse().map_err(E::custom),
        }
    }
}

impl Serialize for IntLaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (&e, c) in &self.terms {
            seq.serialize_element(&(e, CoeffRepr::from_big(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntLaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, CoeffRepr)> = Vec::deserialize(deserializer)?;
        let mut p = IntLaurentPoly::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into_big()?);
        }
        Ok(p)
    }
}

/// An integer Laurent polynomial in `x, y, z`.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct TriLaurentPoly {
    terms: BTreeMap<[i64; 3], BigInt>,
}

impl TriLaurentPoly {
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = ([i64; 3], C)>) -> Self {
        let mut p = Self::default();
        for (e, c) in terms {
            let c = c.into();
            if c.is_zero() {
                continue;
            }
            let entry = p.terms.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                p.terms.remove(&e);
            }
        }
        p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ([i64; 3], &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Specializes `x -> t^ex, y -> t^ey, z -> t^ez` and collects like terms.
    pub fn substitute_monomials(&self, ex: i64, ey: i64, ez: i64) -> Result<IntLaurentPoly, PolyError> {
        let mut out = IntLaurentPoly::zero();
        for (&[i, j, k], c) in &self.terms {
            let e = i
                .checked_mul(ex)
                .zip(j.checked_mul(ey))
                .zip(k.checked_mul(ez))
                .and_then(|((a, b), c)| a.checked_add(b)?.checked_add(c))
                .ok_or(PolyError::ExponentOverflow)?;
            out.add_term(e, c.clone());
        }
        Ok(out)
    }
}

impl Serialize for TriLaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&(e, CoeffRepr::from_big(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for TriLaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs: Vec<([i64; 3], CoeffRepr)> = Vec::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(pairs.len());
        for (e, c) in pairs {
            terms.push((e, c.into_big::<D::Error>()?));
        }
        Ok(TriLaurentPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(pairs: &[(i64, i64)]) -> IntLaurentPoly {
        IntLaurentPoly::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn add_examples() {
        assert_eq!(p(&[(0, 1), (1, -1)]) + p(&[(1, 1), (2, -1)]), p(&[(0, 1), (2, -1)]));
        let q = p(&[(-2, 3), (5, -7)]);
        assert_eq!(&q + &IntLaurentPoly::zero(), q);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p(&[(0, 1), (1, -1)]) * p(&[(0, 1), (1, 1)]), p(&[(0, 1), (2, -1)]));
        let q = p(&[(-2, 3), (5, -7)]);
        assert_eq!(&q * &IntLaurentPoly::one(), q);
    }

    #[test]
    fn exact_div_examples() {
        let q = p(&[(0, 1), (2, -1)]).exact_div(&p(&[(0, 1), (1, -1)])).unwrap();
        assert_eq!(q, p(&[(0, 1), (1, 1)]));
        let q = p(&[(0, 1), (3, 1)]).exact_div(&p(&[(0, 1), (1, 1)])).unwrap();
        assert_eq!(q, p(&[(0, 1), (1, -1), (2, 1)]));
    }

    #[test]
    fn exact_div_reports_remainder() {
        let err = p(&[(0, 1), (2, 1)]).exact_div(&p(&[(0, 1), (1, -1)])).unwrap_err();
        assert!(matches!(err, PolyError::NonExactDivision { .. }));
        let err = p(&[(0, 3)]).exact_div(&p(&[(0, 2)])).unwrap_err();
        assert_eq!(err, PolyError::NonExactDivision { exponent: 0 });
        assert_eq!(p(&[(0, 1)]).exact_div(&IntLaurentPoly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn substitute_examples() {
        let xyz = TriLaurentPoly::from_terms([([1, 1, 1], 1)]);
        assert_eq!(xyz.substitute_monomials(1, 2, 3).unwrap(), p(&[(6, 1)]));
        let q = TriLaurentPoly::from_terms([([1, 0, 2], 4), ([0, -1, 3], -1), ([2, 2, 2], 5)]);
        assert_eq!(q.substitute_monomials(0, 0, 0).unwrap(), p(&[(0, 8)]));
        let huge = TriLaurentPoly::from_terms([([i64::MAX, 0, 0], 1)]);
        assert_eq!(huge.substitute_monomials(2, 0, 0), Err(PolyError::ExponentOverflow));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(p(&[(-1, -1), (0, 1)]).normalize_knot(), p(&[(0, 1), (1, -1)]));
        assert_eq!(p(&[(2, 1), (3, -1)]).normalize_knot(), p(&[(0, 1), (1, -1)]));
    }

    #[test]
    fn symmetry_examples() {
        let pretzel = IntLaurentPoly::alternating(&[0, 1, 3, 4, 5, 6, 7, 9, 10]);
        assert!(pretzel.is_symmetric());
        assert!(!p(&[(0, 1), (1, -1), (3, 1)]).is_symmetric());
        assert!(IntLaurentPoly::one().is_symmetric());
    }

    #[test]
    fn lspace_form_examples() {
        assert!(IntLaurentPoly::alternating(&[0, 1, 3, 5, 6]).is_lspace_form());
        assert!(!p(&[(0, 1), (1, -2), (2, 2), (3, -2), (4, 1)]).is_lspace_form());
        assert!(IntLaurentPoly::one().is_lspace_form());
        // first sign change must happen at t^1
        assert!(!IntLaurentPoly::alternating(&[0, 2, 4]).is_lspace_form());
        assert!(!IntLaurentPoly::alternating(&[0, 1, 3]).is_lspace_form());
    }

    #[test]
    fn json_shape() {
        let q = p(&[(0, 1), (1, -1), (3, 1)]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[[0,1],[1,-1],[3,1]]");
        let back: IntLaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        let big = IntLaurentPoly::monomial(BigInt::from(i64::MAX) * 4, 2);
        let back: IntLaurentPoly = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
        let tri = TriLaurentPoly::from_terms([([1, 2, 3], -2)]);
        assert_eq!(serde_json::to_string(&tri).unwrap(), "[[[1,2,3],-2]]");
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(0, 1), (1, -1), (3, 2)]).to_string(), "1 - t + 2t^3");
        assert_eq!(p(&[(-1, -1)]).to_string(), "-t^-1");
    }

    fn arb_poly() -> impl Strategy<Value = IntLaurentPoly> {
        prop::collection::vec((-6i64..6, -5i64..5), 0..6).prop_map(IntLaurentPoly::from_pairs)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn exact_div_inverts_mul(a in arb_poly(), d in arb_poly()) {
            prop_assume!(!d.is_zero());
            prop_assert_eq!((&a * &d).exact_div(&d).unwrap(), a);
        }

        #[test]
        fn normalize_idempotent(a in arb_poly()) {
            prop_assume!(!a.is_zero());
            let n = a.normalize_knot();
            prop_assert_eq!(n.normalize_knot(), n.clone());
            prop_assert_eq!(n.is_symmetric(), a.is_symmetric());
        }
    }
}
