//! Braid words and Alexander polynomials of their closures through the
//! reduced Burau representation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{IntLaurentPoly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("a braid needs at least 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("letter {letter} is not a generator of the {strands}-strand braid group")]
    BadLetter { letter: i32, strands: usize },
    #[error("braid word is not positive (letter {letter} at position {position})")]
    NotPositive { letter: i32, position: usize },
    #[error("closure has {components} components")]
    Disconnected { components: usize },
    #[error("closure is not a knot: it has {components} components")]
    NotAKnot { components: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A word in the Artin generators; letter `±i` is `σ_i^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    #[serde(rename = "word")]
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands < 2 {
            return Err(BraidError::TooFewStrands(strands));
        }
        for &letter in &letters {
            if letter == 0 || letter.unsigned_abs() as usize >= strands {
                return Err(BraidError::BadLetter { letter, strands });
            }
        }
        Ok(Self { strands, letters })
    }

    /// Re-checks the letter bounds after deserialization.
    pub fn validated(self) -> Result<Self, BraidError> {
        Self::new(self.strands, self.letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum() as i64).sum()
    }

    /// Cancels adjacent `σ_i σ_i^{-1}` pairs until none remain.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { strands: self.strands, letters: out }
    }

    /// The same braid on one more strand followed by `σ_s` (a positive
    /// Markov stabilization); the closure is unchanged.
    pub fn stabilize(&self) -> Self {
        let mut letters = self.letters.clone();
        letters.push(self.strands as i32);
        Self { strands: self.strands + 1, letters }
    }

    /// Cycle lengths of the underlying permutation, i.e. the number of
    /// strands in each component of the closure.
    pub fn components(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        let mut seen = vec![false; self.strands];
        let mut cycles = Vec::new();
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
                len += 1;
            }
            cycles.push(len);
        }
        cycles
    }

    /// Genus of the closure of a positive braid, `(c - s + 1) / 2`, from the
    /// Seifert surface produced by Seifert's algorithm (which is minimal for
    /// positive braids).
    pub fn positive_braid_genus(&self) -> Result<i64, BraidError> {
        if let Some((position, &letter)) = self.letters.iter().enumerate().find(|(_, &l)| l < 0) {
            return Err(BraidError::NotPositive { letter, position });
        }
        let components = self.components().len();
        if components != 1 {
            return Err(BraidError::Disconnected { components });
        }
        let c = self.letters.len() as i64;
        let s = self.strands as i64;
        Ok((c - s + 1) / 2)
    }

    /// Reduced Burau matrix of the whole word, `(strands - 1)` square.
    pub fn reduced_burau(&self) -> Matrix {
        let n = self.strands - 1;
        let mut m = Matrix::identity(n);
        for &l in &self.letters {
            m = m.mul(&generator_matrix(n, l));
        }
        m
    }

    /// Alexander polynomial of the closure, shifted to start at `t^0` and
    /// signed so that `Δ(1) = 1`.
    pub fn alexander_of_closure(&self) -> Result<IntLaurentPoly, BraidError> {
        let components = self.components().len();
        if components != 1 {
            return Err(BraidError::NotAKnot { components });
        }
        let n = self.strands - 1;
        let burau = self.reduced_burau();
        let i_minus = Matrix::identity(n).sub(&burau);
        let det = i_minus.determinant()?;
        // det(I - ψ(β)) = Δ(t) (1 + t + ... + t^{s-1}) up to units
        let cyclotomic = IntLaurentPoly::from_pairs((0..self.strands as i64).map(|e| (e, 1)));
        let delta = det.exact_div(&cyclotomic)?;
        let delta = delta.shift(-delta.min_exp().unwrap_or(0));
        Ok(if delta.eval_at_one().is_negative() { -delta } else { delta })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}[", self.strands)?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// Square matrix with Laurent polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    entries: Vec<IntLaurentPoly>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![IntLaurentPoly::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = IntLaurentPoly::one();
        }
        Self { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &IntLaurentPoly {
        &self.entries[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: IntLaurentPoly) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self { n, entries: vec![IntLaurentPoly::zero(); n * n] };
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() }
    }

    /// Fraction-free (Bareiss) elimination; every intermediate division is
    /// exact in `Z[t, t^{-1}]`.
    pub fn determinant(&self) -> Result<IntLaurentPoly, PolyError> {
        let n = self.n;
        if n == 0 {
            return Ok(IntLaurentPoly::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = IntLaurentPoly::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return Ok(IntLaurentPoly::zero());
                };
                for j in 0..n {
                    a.entries.swap(k * n + j, r * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(a.get(k, k) * a.get(i, j)) - &(a.get(i, k) * a.get(k, j));
                    a.set(i, j, num.exact_div(&prev)?);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(a.get(n - 1, n - 1).scale(&sign))
    }
}

fn t_pow(coeff: i64, exp: i64) -> IntLaurentPoly {
    IntLaurentPoly::monomial(coeff, exp)
}

/// Reduced Burau image of `σ_i^{±1}` as an `n × n` matrix (`n = strands - 1`).
fn generator_matrix(n: usize, letter: i32) -> Matrix {
    let mut m = Matrix::identity(n);
    let i = letter.unsigned_abs() as usize - 1;
    let positive = letter > 0;
    // only column i differs from the identity: (t, -t, 1) on rows i-1, i, i+1
    if positive {
        m.set(i, i, t_pow(-1, 1));
        if i > 0 {
            m.set(i - 1, i, t_pow(1, 1));
        }
        if i + 1 < n {
            m.set(i + 1, i, t_pow(1, 0));
        }
    } else {
        m.set(i, i, t_pow(-1, -1));
        if i > 0 {
            m.set(i - 1, i, t_pow(1, 0));
        }
        if i + 1 < n {
            m.set(i + 1, i, t_pow(1, -1));
        }
    }
    m
}

impl Matrix {
    #[cfg(test)]
    fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n)
    }
}
