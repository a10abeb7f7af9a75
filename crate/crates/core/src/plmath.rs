//! Exact piecewise-linear functions over the rationals: evaluation,
//! canonical equality, lower convex envelopes and the Legendre-Fenchel
//! transform.
//!
//! A [`PLFunction`] is either defined on the whole line, in which case it is
//! described by its vertices plus the slopes of the two unbounded rays, or on
//! a closed interval whose endpoints are the first and last vertex.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlError {
    #[error("x = {0} lies outside the domain")]
    OutOfDomain(Rational),
    #[error("function is not convex (slope {before} is followed by {after})")]
    NotConvex { before: String, after: String },
    #[error("rays are inconsistent with the samples: {0}")]
    RaysInconsistent(String),
    #[error("a piecewise-linear function needs at least one vertex")]
    Empty,
    #[error("vertex abscissae must be strictly increasing")]
    NotIncreasing,
    #[error("pieces do not meet at t = {0}")]
    Discontinuous(Rational),
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Line,
    /// `[first vertex x, last vertex x]`.
    Interval,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLFunction {
    vertices: Vec<(Rational, Rational)>,
    left_slope: Rational,
    right_slope: Rational,
    domain: Domain,
}

fn slope(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    (&b.1 - &a.1) / (&b.0 - &a.0)
}

impl PLFunction {
    /// A function on the whole line. Vertices must have strictly increasing x.
    pub fn on_line(
        vertices: Vec<(Rational, Rational)>,
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<Self, PlError> {
        check_vertices(&vertices)?;
        Ok(Self { vertices, left_slope, right_slope, domain: Domain::Line }.canonical())
    }

    /// A function on `[first.x, last.x]`.
    pub fn on_interval(vertices: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        check_vertices(&vertices)?;
        Ok(Self { vertices, left_slope: Rational::zero(), right_slope: Rational::zero(), domain: Domain::Interval }
            .canonical())
    }

    /// Interval function given by affine pieces `slope * t + intercept` on
    /// `[breaks[i], breaks[i + 1]]`; adjacent pieces must agree at the breaks.
    pub fn from_pieces(breaks: &[Rational], lines: &[(Rational, Rational)]) -> Result<Self, PlError> {
        if lines.is_empty() || breaks.len() != lines.len() + 1 {
            return Err(PlError::Empty);
        }
        let at = |(m, c): &(Rational, Rational), t: &Rational| m * t + c;
        let mut vertices = vec![(breaks[0].clone(), at(&lines[0], &breaks[0]))];
        for i in 1..breaks.len() {
            let t = &breaks[i];
            let y = at(&lines[i - 1], t);
            if i < lines.len() && at(&lines[i], t) != y {
                return Err(PlError::Discontinuous(t.clone()));
            }
            vertices.push((t.clone(), y));
        }
        Self::on_interval(vertices)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// `Some((a, b))` for interval functions.
    pub fn bounds(&self) -> Option<(&Rational, &Rational)> {
        match self.domain {
            Domain::Line => None,
            Domain::Interval => Some((&self.vertices[0].0, &self.vertices.last().unwrap().0)),
        }
    }

    pub fn vertices(&self) -> &[(Rational, Rational)] {
        &self.vertices
    }

    pub fn left_slope(&self) -> &Rational {
        &self.left_slope
    }

    pub fn right_slope(&self) -> &Rational {
        &self.right_slope
    }

    pub fn breakpoints(&self) -> Vec<Rational> {
        self.vertices.iter().map(|v| v.0.clone()).collect()
    }

    /// Slopes of the bounded segments between consecutive vertices.
    pub fn segment_slopes(&self) -> Vec<Rational> {
        self.vertices.windows(2).map(|w| slope(&w[0], &w[1])).collect()
    }

    /// Every slope from left to right, rays included for line functions.
    pub fn all_slopes(&self) -> Vec<Rational> {
        match self.domain {
            Domain::Interval => self.segment_slopes(),
            Domain::Line => {
                let mut s = vec![self.left_slope.clone()];
                s.extend(self.segment_slopes());
                s.push(self.right_slope.clone());
                s
            }
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, PlError> {
        let first = &self.vertices[0];
        let last = self.vertices.last().unwrap();
        if x < &first.0 {
            return match self.domain {
                Domain::Line => Ok(&first.1 + &self.left_slope * (x - &first.0)),
                Domain::Interval => Err(PlError::OutOfDomain(x.clone())),
            };
        }
        if x > &last.0 {
            return match self.domain {
                Domain::Line => Ok(&last.1 + &self.right_slope * (x - &last.0)),
                Domain::Interval => Err(PlError::OutOfDomain(x.clone())),
            };
        }
        let i = self.vertices.partition_point(|v| &v.0 <= x);
        // x >= first.0, so i >= 1
        let a = &self.vertices[i - 1];
        if &a.0 == x || i == self.vertices.len() {
            return Ok(a.1.clone());
        }
        let b = &self.vertices[i];
        Ok(&a.1 + slope(a, b) * (x - &a.0))
    }

    /// Drops vertices where the slope does not change. An affine function on
    /// the line keeps a single anchor vertex at `x = 0`; interval functions
    /// keep both endpoints and record their end slopes as ray slopes.
    pub fn canonical(&self) -> Self {
        let n = self.vertices.len();
        let mut kept = Vec::with_capacity(n);
        for i in 0..n {
            let endpoint = i == 0 || i == n - 1;
            if self.domain == Domain::Interval && endpoint {
                kept.push(self.vertices[i].clone());
                continue;
            }
            let before = if i == 0 { self.left_slope.clone() } else { slope(&self.vertices[i - 1], &self.vertices[i]) };
            let after =
                if i == n - 1 { self.right_slope.clone() } else { slope(&self.vertices[i], &self.vertices[i + 1]) };
            if before != after {
                kept.push(self.vertices[i].clone());
            }
        }
        match self.domain {
            Domain::Line => {
                if kept.is_empty() {
                    let y0 = self.eval(&Rational::zero()).expect("line functions are total");
                    kept.push((Rational::zero(), y0));
                }
                Self {
                    vertices: kept,
                    left_slope: self.left_slope.clone(),
                    right_slope: self.right_slope.clone(),
                    domain: Domain::Line,
                }
            }
            Domain::Interval => {
                let mut out = Self {
                    vertices: kept,
                    left_slope: Rational::zero(),
                    right_slope: Rational::zero(),
                    domain: Domain::Interval,
                };
                let slopes = out.segment_slopes();
                if let (Some(l), Some(r)) = (slopes.first(), slopes.last()) {
                    out.left_slope = l.clone();
                    out.right_slope = r.clone();
                }
                out
            }
        }
    }

    pub fn canonical_equal(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Slopes are nondecreasing from left to right.
    pub fn is_convex(&self) -> bool {
        self.first_convexity_violation().is_none()
    }

    fn first_convexity_violation(&self) -> Option<(Rational, Rational)> {
        self.all_slopes().windows(2).find(|w| w[0] > w[1]).map(|w| (w[0].clone(), w[1].clone()))
    }

    /// `f*(t) = sup_x { t x - f(x) }` for convex `f`.
    ///
    /// A line function with ray slopes `s_min < s_max` maps to an interval
    /// function on `[s_min, s_max]` whose breakpoints are the slopes of `f`
    /// and whose segment slopes are the vertex abscissae of `f`. An interval
    /// function maps back to a line function, so applying the transform
    /// twice returns the original function.
    pub fn legendre_fenchel(&self) -> Result<Self, PlError> {
        if let Some((before, after)) = self.first_convexity_violation() {
            return Err(PlError::NotConvex { before: format_rational(&before), after: format_rational(&after) });
        }
        let f = self.canonical();
        match f.domain {
            Domain::Line => {
                let slopes = f.all_slopes();
                if f.left_slope == f.right_slope {
                    let (x0, y0) = &f.vertices[0];
                    let s = &f.left_slope;
                    return Self::on_interval(vec![(s.clone(), s * x0 - y0)]);
                }
                let k = f.vertices.len();
                let vertices = (0..=k)
                    .map(|j| {
                        let (x, y) = &f.vertices[j.max(1) - 1];
                        let s = &slopes[j];
                        (s.clone(), s * x - y)
                    })
                    .collect();
                Self::on_interval(vertices)
            }
            Domain::Interval => {
                let (t0, y0) = &f.vertices[0];
                if f.vertices.len() == 1 {
                    return Self::on_line(vec![(Rational::zero(), -y0)], t0.clone(), t0.clone());
                }
                let slopes = f.segment_slopes();
                let vertices = slopes
                    .iter()
                    .enumerate()
                    .map(|(j, m)| {
                        let (t, y) = &f.vertices[j + 1];
                        (m.clone(), m * t - y)
                    })
                    .collect();
                let tk = f.vertices.last().unwrap().0.clone();
                Self::on_line(vertices, t0.clone(), tk)
            }
        }
    }
}

fn check_vertices(vertices: &[(Rational, Rational)]) -> Result<(), PlError> {
    if vertices.is_empty() {
        return Err(PlError::Empty);
    }
    if vertices.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(PlError::NotIncreasing);
    }
    Ok(())
}

/// Greatest convex minorant of the function that interpolates `samples`
/// linearly and continues with rays of the given slopes from the first and
/// last sample.
///
/// The rays must stay on or below every sample; otherwise the requested
/// anchoring is impossible and [`PlError::RaysInconsistent`] is returned.
pub fn lower_convex_envelope(
    samples: &[(i64, Rational)],
    left_slope: Rational,
    right_slope: Rational,
) -> Result<PLFunction, PlError> {
    if samples.is_empty() {
        return Err(PlError::Empty);
    }
    if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(PlError::NotIncreasing);
    }
    if left_slope > right_slope {
        return Err(PlError::RaysInconsistent(format!("left slope {left_slope} exceeds right slope {right_slope}")));
    }
    let (x0, y0) = (int(samples[0].0), &samples[0].1);
    let last = samples.last().unwrap();
    let (xn, yn) = (int(last.0), &last.1);
    for (x, y) in samples {
        let x = int(*x);
        if *y < y0 + &left_slope * (&x - &x0) {
            return Err(PlError::RaysInconsistent(format!("left ray passes above the sample at x = {x}")));
        }
        if *y < yn + &right_slope * (&x - &xn) {
            return Err(PlError::RaysInconsistent(format!("right ray passes above the sample at x = {x}")));
        }
    }
    // monotone chain, lower half; collinear middle points are dropped
    let mut hull: Vec<(Rational, Rational)> = Vec::with_capacity(samples.len());
    for (x, y) in samples {
        let c = (int(*x), y.clone());
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            let cross = (&b.0 - &a.0) * (&c.1 - &b.1) - (&b.1 - &a.1) * (&c.0 - &b.0);
            if cross <= Rational::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(c);
    }
    PLFunction::on_line(hull, left_slope, right_slope)
}

impl fmt::Debug for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLFunction({self})")
    }
}

impl fmt::Display for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.domain == Domain::Line {
            write!(f, "<{}> ", self.left_slope)?;
        }
        for (i, (x, y)) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        if self.domain == Domain::Line {
            write!(f, " <{}>", self.right_slope)?;
        }
        Ok(())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, PlError> {
    let t = s.trim();
    let bad = || PlError::BadRational(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    } else {
        Ok(Rational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
    }
}

/// `"p/q"`, or just `"p"` when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DomainRepr {
    Line(String),
    Interval([String; 2]),
}

#[derive(Serialize, Deserialize)]
struct PlRepr {
    left_slope: String,
    vertices: Vec<[String; 2]>,
    right_slope: String,
    domain: DomainRepr,
}

impl Serialize for PLFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let domain = match self.bounds() {
            None => DomainRepr::Line("line".into()),
            Some((a, b)) => DomainRepr::Interval([format_rational(a), format_rational(b)]),
        };
        PlRepr {
            left_slope: format_rational(&self.left_slope),
            vertices: self.vertices.iter().map(|(x, y)| [format_rational(x), format_rational(y)]).collect(),
            right_slope: format_rational(&self.right_slope),
            domain,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PLFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PlRepr::deserialize(deserializer)?;
        let p = |s: &str| parse_rational(s).map_err(de::Error::custom);
        let vertices = repr.vertices.iter().map(|[x, y]| Ok((p(x)?, p(y)?))).collect::<Result<Vec<_>, D::Error>>()?;
        match repr.domain {
            DomainRepr::Line(tag) if tag == "line" => {
                PLFunction::on_line(vertices, p(&repr.left_slope)?, p(&repr.right_slope)?).map_err(de::Error::custom)
            }
            DomainRepr::Line(tag) => Err(de::Error::custom(format!("unknown domain {tag:?}"))),
            DomainRepr::Interval([a, b]) => {
                let f = PLFunction::on_interval(vertices).map_err(de::Error::custom)?;
                let (lo, hi) = f.bounds().unwrap();
                if *lo != p(&a)? || *hi != p(&b)? {
                    return Err(de::Error::custom("domain does not match the end vertices"));
                }
                Ok(f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(v: &[(i64, i64, i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect()
    }

    fn pretzel_hull() -> PLFunction {
        PLFunction::on_line(pts(&[(-5, 1, 0, 1), (-2, 1, 2, 1), (2, 1, 6, 1), (5, 1, 10, 1)]), int(0), int(2)).unwrap()
    }

    fn pretzel_samples() -> Vec<(i64, Rational)> {
        [0, 2, 2, 2, 4, 4, 6, 6, 8, 10, 10].iter().enumerate().map(|(i, &v)| (i as i64 - 5, int(v))).collect()
    }

    #[test]
    fn eval_examples() {
        let f = pretzel_hull();
        assert_eq!(f.eval(&int(-2)).unwrap(), int(2));
        assert_eq!(f.eval(&int(3)).unwrap(), rat(22, 3));
        assert_eq!(f.eval(&int(5)).unwrap(), int(10));
        assert_eq!(f.eval(&int(-100)).unwrap(), int(0));
        assert_eq!(f.eval(&int(7)).unwrap(), int(14));
        let g = PLFunction::on_interval(pts(&[(0, 1, 0, 1), (2, 1, 0, 1)])).unwrap();
        assert_eq!(g.eval(&rat(3, 1)), Err(PlError::OutOfDomain(int(3))));
    }

    #[test]
    fn canonical_equality() {
        let abs1 = PLFunction::on_line(pts(&[(0, 1, 0, 1)]), int(-1), int(1)).unwrap();
        let abs2 =
            PLFunction::on_line(pts(&[(-3, 1, 3, 1), (0, 1, 0, 1), (1, 2, 1, 2), (4, 1, 4, 1)]), int(-1), int(1))
                .unwrap();
        assert!(abs1.canonical_equal(&abs2));
        let shifted = PLFunction::on_line(pts(&[(1, 1, 0, 1)]), int(-1), int(1)).unwrap();
        assert!(!abs1.canonical_equal(&shifted));
        let affine1 = PLFunction::on_line(pts(&[(3, 1, 7, 1)]), int(2), int(2)).unwrap();
        let affine2 = PLFunction::on_line(pts(&[(-1, 1, -1, 1), (0, 1, 1, 1)]), int(2), int(2)).unwrap();
        assert_eq!(affine1, affine2);
    }

    #[test]
    fn envelope_of_pretzel_samples() {
        let hull = lower_convex_envelope(&pretzel_samples(), int(0), int(2)).unwrap();
        assert_eq!(hull, pretzel_hull());
    }

    #[test]
    fn envelope_keeps_convex_samples() {
        let samples: Vec<(i64, Rational)> = (-3..=3).map(|x| (x, int(x * x))).collect();
        let hull = lower_convex_envelope(&samples, int(-7), int(7)).unwrap();
        assert_eq!(hull.vertices().len(), 7);
        for (x, y) in &samples {
            assert_eq!(hull.eval(&int(*x)).unwrap(), *y);
        }
    }

    #[test]
    fn envelope_rejects_bad_rays() {
        let samples = vec![(0, int(0)), (1, int(-1)), (2, int(0))];
        assert!(matches!(lower_convex_envelope(&samples, int(0), int(2)), Err(PlError::RaysInconsistent(_))));
        assert!(matches!(lower_convex_envelope(&[(0, int(0))], int(2), int(0)), Err(PlError::RaysInconsistent(_))));
        assert_eq!(lower_convex_envelope(&[], int(0), int(2)), Err(PlError::Empty));
    }

    #[test]
    fn transform_of_pretzel_hull() {
        let ups = pretzel_hull().legendre_fenchel().unwrap();
        let expected = PLFunction::from_pieces(
            &[int(0), rat(2, 3), int(1), rat(4, 3), int(2)],
            &[(int(-5), int(0)), (int(-2), int(-2)), (int(2), int(-6)), (int(5), int(-10))],
        )
        .unwrap();
        assert_eq!(ups, expected);
        assert_eq!(ups.segment_slopes(), vec![int(-5), int(-2), int(2), int(5)]);
    }

    #[test]
    fn transform_of_unknot_hull() {
        let f = PLFunction::on_line(pts(&[(0, 1, 0, 1)]), int(0), int(2)).unwrap();
        let ups = f.legendre_fenchel().unwrap();
        assert_eq!(ups.bounds(), Some((&int(0), &int(2))));
        assert_eq!(ups.vertices(), &pts(&[(0, 1, 0, 1), (2, 1, 0, 1)])[..]);
    }

    #[test]
    fn transform_of_t34_hull() {
        let f = PLFunction::on_line(pts(&[(-3, 1, 0, 1), (0, 1, 2, 1), (3, 1, 6, 1)]), int(0), int(2)).unwrap();
        let expected = PLFunction::from_pieces(
            &[int(0), rat(2, 3), rat(4, 3), int(2)],
            &[(int(-3), int(0)), (int(0), int(-2)), (int(3), int(-6))],
        )
        .unwrap();
        assert_eq!(f.legendre_fenchel().unwrap(), expected);
    }

    #[test]
    fn transform_rejects_nonconvex() {
        let f = PLFunction::on_line(pts(&[(0, 1, 0, 1), (1, 1, 2, 1), (2, 1, 2, 1)]), int(0), int(2)).unwrap();
        assert!(matches!(f.legendre_fenchel(), Err(PlError::NotConvex { .. })));
    }

    #[test]
    fn affine_and_point_transforms() {
        let line = PLFunction::on_line(pts(&[(0, 1, 3, 1)]), int(2), int(2)).unwrap();
        let point = line.legendre_fenchel().unwrap();
        assert_eq!(point.vertices(), &pts(&[(2, 1, -3, 1)])[..]);
        assert_eq!(point.legendre_fenchel().unwrap(), line);
    }

    #[test]
    fn pieces_must_meet() {
        let r = PLFunction::from_pieces(&[int(0), int(1), int(2)], &[(int(1), int(0)), (int(1), int(1))]);
        assert_eq!(r, Err(PlError::Discontinuous(int(1))));
    }

    #[test]
    fn json_shape() {
        let ups = pretzel_hull().legendre_fenchel().unwrap();
        let j = serde_json::to_string(&ups).unwrap();
        assert!(j.contains(r#""domain":["0","2"]"#), "{j}");
        assert!(j.contains(r#"["2/3","-10/3"]"#), "{j}");
        assert_eq!(serde_json::from_str::<PLFunction>(&j).unwrap(), ups);
        let h = serde_json::to_string(&pretzel_hull()).unwrap();
        assert!(h.contains(r#""domain":"line""#));
        assert_eq!(serde_json::from_str::<PLFunction>(&h).unwrap(), pretzel_hull());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational(" -3/7").unwrap(), rat(-3, 7));
        assert_eq!(parse_rational("4").unwrap(), int(4));
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-10, 3)), "-10/3");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    fn arb_samples() -> impl Strategy<Value = Vec<(i64, Rational)>> {
        prop::collection::vec(0i64..6, 1..10).prop_map(|ups| {
            let mut y = 0;
            let mut out = vec![(0, int(0))];
            for (i, u) in ups.iter().enumerate() {
                y += u % 3;
                out.push((i as i64 + 1, int(y)));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn envelope_is_convex_minorant_touching_samples(samples in arb_samples()) {
            let hull = lower_convex_envelope(&samples, int(0), int(2)).unwrap();
            prop_assert!(hull.is_convex());
            for (x, y) in &samples {
                prop_assert!(hull.eval(&int(*x)).unwrap() <= *y);
            }
            for (x, y) in hull.vertices() {
                let s = samples.iter().find(|s| int(s.0) == *x);
                prop_assert!(s.is_some_and(|s| s.1 == *y));
            }
        }

        #[test]
        fn biconjugation(samples in arb_samples()) {
            let hull = lower_convex_envelope(&samples, int(0), int(2)).unwrap();
            let star = hull.legendre_fenchel().unwrap();
            prop_assert!(star.is_convex());
            prop_assert_eq!(star.legendre_fenchel().unwrap(), hull);
        }
    }
}
