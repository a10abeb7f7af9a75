//! Exhaustive search for all gap functions that share a given convex
//! envelope.
//!
//! A step pattern from `(-g, 0)` to `(g, 2g)` with unit steps of height 0 or
//! 2 has envelope `f` exactly when it stays on or above `f` at every integer
//! and touches `f` at each vertex of `f`. On a unit interval the difference
//! between the pattern and `f` is concave, so checking integers suffices.

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gapfn::{gap_function_of, GapFnError};
use crate::plmath::{int, Domain, PLFunction};
use crate::poly::IntLaurentPoly;

pub const DEFAULT_MAX_SOLUTIONS: usize = 10_000;
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RestoreError {
    #[error("malformed hull: {0}")]
    MalformedHull(String),
    #[error(transparent)]
    GapFn(#[from] GapFnError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestorabilityReport {
    pub hull: PLFunction,
    /// Every step pattern found, symmetric or not.
    pub total_count: u64,
    pub symmetric_count: u64,
    /// Gap sequences of the reported patterns, in search order.
    pub witnesses: Vec<Vec<i64>>,
    pub unique: bool,
    pub budget_exhausted: bool,
    pub nodes: u64,
}

/// Integer data extracted from a hull: the lower bound at each integer and
/// the required value at each vertex.
#[derive(Clone, Debug)]
pub struct HullConstraints {
    genus: usize,
    lower: Vec<i64>,
    /// For each index, the index and value of the first vertex at or after it.
    next_vertex: Vec<(usize, i64)>,
}

impl HullConstraints {
    pub fn new(hull: &PLFunction) -> Result<Self, RestoreError> {
        let bad = |m: String| Err(RestoreError::MalformedHull(m));
        if hull.domain() != Domain::Line {
            return bad("hull must be defined on the whole line".into());
        }
        if *hull.left_slope() != int(0) || *hull.right_slope() != int(2) {
            return bad(format!("ray slopes are {} and {}, expected 0 and 2", hull.left_slope(), hull.right_slope()));
        }
        if !hull.is_convex() {
            return bad("hull is not convex".into());
        }
        let mut verts = Vec::with_capacity(hull.vertices().len());
        for (x, y) in hull.vertices() {
            if !x.is_integer() || !y.is_integer() {
                return bad(format!("vertex ({x}, {y}) is not a lattice point"));
            }
            let (Some(x), Some(y)) = (x.to_integer().to_i64(), y.to_integer().to_i64()) else {
                return bad("vertex coordinates overflow".into());
            };
            verts.push((x, y));
        }
        let (x0, y0) = verts[0];
        let (xn, yn) = *verts.last().unwrap();
        if y0 != 0 || x0 > 0 || xn != -x0 || yn != 2 * xn {
            return bad(format!("expected the hull to run from (-g, 0) to (g, 2g), got ({x0}, {y0}) to ({xn}, {yn})"));
        }
        let g = xn as usize;
        let lower = (-xn..=xn)
            .map(|k| {
                let v = hull.eval(&int(k)).expect("line functions are total");
                v.ceil().to_integer().to_i64().expect("hull values fit in i64")
            })
            .collect();
        let mut next_vertex = vec![(0, 0); 2 * g + 1];
        let mut vi = verts.len();
        for idx in (0..=2 * g).rev() {
            let x = idx as i64 - xn;
            if vi > 0 && verts[vi - 1].0 >= x {
                vi -= 1;
            }
            next_vertex[idx] = ((verts[vi].0 + xn) as usize, verts[vi].1);
        }
        Ok(Self { genus: g, lower, next_vertex })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Whether a partial pattern with value `v` at index `idx` (that is, at
    /// `x = idx - g`) can be completed. Every later value is at most 2 more
    /// than the previous one, so a completion exists iff `v` clears the
    /// hull, does not overshoot the next vertex and can still reach it.
    pub fn is_extendable(&self, idx: usize, v: i64) -> bool {
        if v < self.lower[idx] || v % 2 != 0 {
            return false;
        }
        let (vi, target) = self.next_vertex[idx];
        target % 2 == 0 && v <= target && v + 2 * (vi - idx) as i64 >= target
    }
}

struct Search<'a> {
    c: &'a HullConstraints,
    symmetric_only: bool,
    max_solutions: usize,
    step_budget: u64,
    nodes: &'a AtomicU64,
    values: Vec<i64>,
    total: u64,
    symmetric: u64,
    witnesses: Vec<Vec<i64>>,
    exhausted: bool,
}

impl<'a> Search<'a> {
    fn new(
        c: &'a HullConstraints,
        symmetric_only: bool,
        max_solutions: usize,
        step_budget: u64,
        nodes: &'a AtomicU64,
    ) -> Self {
        Search {
            c,
            symmetric_only,
            max_solutions,
            step_budget,
            nodes,
            values: Vec::with_capacity(2 * c.genus + 1),
            total: 0,
            symmetric: 0,
            witnesses: Vec::new(),
            exhausted: false,
        }
    }

    fn run_from(&mut self, prefix: &[i64]) {
        self.values.clear();
        self.values.extend_from_slice(prefix);
        self.dfs();
    }

    fn dfs(&mut self) {
        if self.exhausted {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.step_budget {
            self.exhausted = true;
            return;
        }
        let idx = self.values.len() - 1;
        if idx == 2 * self.c.genus {
            self.leaf();
            return;
        }
        let v = self.values[idx];
        for next in [v, v + 2] {
            if self.c.is_extendable(idx + 1, next) {
                self.values.push(next);
                self.dfs();
                self.values.pop();
                if self.exhausted {
                    return;
                }
            }
        }
    }

    fn leaf(&mut self) {
        self.total += 1;
        let sym = is_symmetric(&self.values);
        if sym {
            self.symmetric += 1;
        }
        if sym || !self.symmetric_only {
            if self.witnesses.len() == self.max_solutions {
                self.exhausted = true;
                return;
            }
            self.witnesses.push(gap_sequence(&self.values));
        }
    }
}

fn is_symmetric(values: &[i64]) -> bool {
    let g = values.len() / 2;
    (0..=g).all(|k| values[g + k] == values[g - k] + 2 * k as i64)
}

/// Gap `i` sits where the pattern steps up between `x = g - i - 1` and
/// `x = g - i`.
pub fn gap_sequence(values: &[i64]) -> Vec<i64> {
    let top = values.len() - 1;
    (0..top).filter(|&i| values[top - i] > values[top - i - 1]).map(|i| i as i64).collect()
}

fn finish(
    hull: &PLFunction,
    total: u64,
    symmetric: u64,
    witnesses: Vec<Vec<i64>>,
    exhausted: bool,
    nodes: u64,
) -> RestorabilityReport {
    RestorabilityReport {
        hull: hull.clone(),
        total_count: total,
        symmetric_count: symmetric,
        witnesses,
        unique: !exhausted && symmetric == 1,
        budget_exhausted: exhausted,
        nodes,
    }
}

/// Depth-first, left to right, flat step before up step.
pub fn enumerate_gap_functions(
    hull: &PLFunction,
    symmetric_only: bool,
    max_solutions: usize,
    step_budget: u64,
) -> Result<RestorabilityReport, RestoreError> {
    let c = HullConstraints::new(hull)?;
    let nodes = AtomicU64::new(0);
    let mut s = Search::new(&c, symmetric_only, max_solutions, step_budget, &nodes);
    s.run_from(&[0]);
    let (total, symmetric, witnesses, exhausted) = (s.total, s.symmetric, s.witnesses, s.exhausted);
    Ok(finish(hull, total, symmetric, witnesses, exhausted, nodes.into_inner()))
}

/// Same result as [`enumerate_gap_functions`] whenever the budget is not
/// hit, with subtrees searched on the current rayon pool.
pub fn enumerate_gap_functions_parallel(
    hull: &PLFunction,
    symmetric_only: bool,
    max_solutions: usize,
    step_budget: u64,
) -> Result<RestorabilityReport, RestoreError> {
    let c = HullConstraints::new(hull)?;
    let depth = (2 * c.genus).min(12);
    let mut prefixes = vec![vec![0i64]];
    for idx in 1..=depth {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                let v = *p.last().unwrap();
                [v, v + 2].into_iter().filter(|&n| c.is_extendable(idx, n)).map(move |n| {
                    let mut q = p.clone();
                    q.push(n);
                    q
                })
            })
            .collect();
    }
    let nodes = AtomicU64::new(prefixes.len() as u64);
    let parts: Vec<_> = prefixes
        .par_iter()
        .map(|p| {
            let mut s = Search::new(&c, symmetric_only, max_solutions, step_budget, &nodes);
            s.run_from(p);
            (s.total, s.symmetric, s.witnesses, s.exhausted)
        })
        .collect();
    let (mut total, mut symmetric, mut exhausted) = (0, 0, false);
    let mut witnesses = Vec::new();
    for (t, s, w, e) in parts {
        total += t;
        symmetric += s;
        exhausted |= e;
        witnesses.extend(w);
    }
    if witnesses.len() > max_solutions {
        witnesses.truncate(max_solutions);
        exhausted = true;
    }
    Ok(finish(hull, total, symmetric, witnesses, exhausted, nodes.into_inner()))
}

pub fn is_restorable(delta: &IntLaurentPoly) -> Result<RestorabilityReport, RestoreError> {
    let hull = gap_function_of(delta)?.hull();
    enumerate_gap_functions(&hull, true, DEFAULT_MAX_SOLUTIONS, DEFAULT_STEP_BUDGET)
}

/// `1 - t + t^m - t^(m+1) + t^(m+2) - t^(2m+1) + t^(2m+2)`.
pub fn prop62_polynomial(m: i64) -> IntLaurentPoly {
    IntLaurentPoly::alternating(&[0, 1, m, m + 1, m + 2, 2 * m + 1, 2 * m + 2])
}

pub fn prop62_family_check(m: i64) -> Result<RestorabilityReport, RestoreError> {
    if m < 3 {
        return Err(RestoreError::MalformedHull(format!("family parameter must be at least 3, got {m}")));
    }
    is_restorable(&prop62_polynomial(m))
}

/// All `C(2g, g)` patterns with exactly `g` up steps, unpruned. Used as an
/// oracle for the search.
pub fn naive_patterns(g: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let n = 2 * g;
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize != g {
            continue;
        }
        let mut values = vec![0i64];
        for bit in 0..n {
            let v = *values.last().unwrap() + if mask >> bit & 1 == 1 { 2 } else { 0 };
            values.push(v);
        }
        out.push(values);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gapfn::GapFunction;
    use crate::knotform::{all_gap_sequences, torus_semigroup, FormalSemigroup};
    use crate::plmath::lower_convex_envelope;

    fn hull_of_gaps(gaps: &[i64]) -> PLFunction {
        crate::gapfn::gap_function(&FormalSemigroup::from_gaps(gaps.to_vec()).unwrap()).hull()
    }

    /// Vertices of the lower envelope of integer samples, with points that
    /// continue the 0 and 2 rays dropped.
    fn integer_envelope(values: &[i64]) -> Vec<(i64, i64)> {
        let g = (values.len() / 2) as i64;
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for (i, &y) in values.iter().enumerate() {
            let c = (i as i64 - g, y);
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0) <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(c);
        }
        let n = hull.len();
        let seg = |i: usize| (hull[i + 1].1 - hull[i].1, hull[i + 1].0 - hull[i].0);
        (0..n)
            .filter(|&i| {
                let (dy0, dx0) = if i == 0 { (0, 1) } else { seg(i - 1) };
                let (dy1, dx1) = if i == n - 1 { (2, 1) } else { seg(i) };
                dy0 * dx1 != dy1 * dx0
            })
            .map(|i| hull[i])
            .collect()
    }

    fn lattice_vertices(hull: &PLFunction) -> Vec<(i64, i64)> {
        hull.vertices()
            .iter()
            .map(|(x, y)| (x.to_integer().to_i64().unwrap(), y.to_integer().to_i64().unwrap()))
            .collect()
    }

    fn naive(hull: &PLFunction, g: usize, symmetric_only: bool) -> Vec<Vec<i64>> {
        let target = lattice_vertices(hull);
        naive_patterns(g)
            .into_iter()
            .filter(|v| integer_envelope(v) == target)
            .filter(|v| !symmetric_only || is_symmetric(v))
            .map(|v| gap_sequence(&v))
            .collect()
    }

    #[test]
    fn integer_envelope_agrees_with_rational_one() {
        for g in 0..=5 {
            for v in naive_patterns(g) {
                let f = GapFunction::new(v.clone()).unwrap();
                let h = lower_convex_envelope(&f.samples(), int(0), int(2)).unwrap();
                assert_eq!(integer_envelope(&v), lattice_vertices(&h), "{v:?}");
            }
        }
    }

    #[test]
    fn t34_is_unique() {
        let r = enumerate_gap_functions(&hull_of_gaps(&[1, 2, 5]), true, 100, 1000).unwrap();
        assert_eq!(r.symmetric_count, 1);
        assert_eq!(r.witnesses, vec![vec![1, 2, 5]]);
        assert!(r.unique && !r.budget_exhausted);
    }

    #[test]
    fn pretzel_is_not_unique() {
        let r = enumerate_gap_functions(&hull_of_gaps(&[1, 2, 4, 6, 9]), true, 100, 10_000).unwrap();
        assert!(r.symmetric_count >= 2);
        assert!(r.witnesses.contains(&vec![1, 2, 4, 6, 9]));
        assert!(r.witnesses.contains(&vec![1, 2, 5, 6, 9]));
        assert!(!r.unique);
        // the alternative gap set comes from 1 - t + t^3 - t^5 + t^7 - t^9 + t^10
        let alt = IntLaurentPoly::alternating(&[0, 1, 3, 5, 7, 9, 10]);
        let s = crate::knotform::formal_semigroup(&alt).unwrap();
        assert_eq!(s.gaps(), &[1, 2, 5, 6, 9]);
    }

    #[test]
    fn unknot_has_one_pattern() {
        let r = enumerate_gap_functions(&hull_of_gaps(&[]), false, 10, 10).unwrap();
        assert_eq!((r.total_count, r.symmetric_count), (1, 1));
        assert_eq!(r.witnesses, vec![Vec::<i64>::new()]);
        assert!(r.unique);
    }

    #[test]
    fn malformed_hulls() {
        let off = PLFunction::on_line(vec![(int(-2), int(0)), (int(1), int(2))], int(0), int(2)).unwrap();
        assert!(matches!(enumerate_gap_functions(&off, true, 10, 10), Err(RestoreError::MalformedHull(_))));
        let frac = PLFunction::on_line(
            vec![(int(-2), int(0)), (crate::plmath::rat(1, 2), int(3)), (int(2), int(4))],
            int(0),
            int(2),
        )
        .unwrap();
        assert!(matches!(enumerate_gap_functions(&frac, true, 10, 10), Err(RestoreError::MalformedHull(_))));
        let rays = PLFunction::on_line(vec![(int(0), int(0))], int(0), int(1)).unwrap();
        assert!(matches!(enumerate_gap_functions(&rays, true, 10, 10), Err(RestoreError::MalformedHull(_))));
    }

    #[test]
    fn budget_and_cap() {
        let hull = hull_of_gaps(&[1, 2, 4, 6, 9]);
        let r = enumerate_gap_functions(&hull, false, 1, DEFAULT_STEP_BUDGET).unwrap();
        assert!(r.budget_exhausted && !r.unique);
        assert_eq!(r.witnesses.len(), 1);
        let r = enumerate_gap_functions(&hull, false, 100, 3).unwrap();
        assert!(r.budget_exhausted);
        assert_eq!(r.nodes, 4);
    }

    #[test]
    fn prop62_small_members() {
        let r = prop62_family_check(3).unwrap();
        assert!(r.unique);
        assert_eq!(prop62_polynomial(3), IntLaurentPoly::alternating(&[0, 1, 3, 4, 5, 7, 8]));
        let r = prop62_family_check(4).unwrap();
        assert!(r.unique);
        assert_eq!(r.witnesses, vec![vec![1, 2, 3, 5, 9]]);
        assert!(prop62_family_check(2).is_err());
    }

    #[test]
    fn prop62_hull_closed_form() {
        for m in 3..=10 {
            let hull = gap_function_of(&prop62_polynomial(m)).unwrap().hull();
            let expect = PLFunction::on_line(
                vec![(int(-m - 1), int(0)), (int(-1), int(2)), (int(1), int(4)), (int(m + 1), int(2 * m + 2))],
                int(0),
                int(2),
            )
            .unwrap();
            assert_eq!(hull, expect, "m = {m}");
        }
    }

    #[test]
    fn extendability_matches_naive_completion() {
        for g in 1..=5 {
            for s in all_gap_sequences(g) {
                let hull = crate::gapfn::gap_function(&s).hull();
                let c = HullConstraints::new(&hull).unwrap();
                let vertex_at = |i: usize| {
                    hull.vertices().iter().find(|(x, _)| *x == int(i as i64 - g as i64)).map(|(_, y)| y.clone())
                };
                let ok_at = |i: usize, y: i64| y >= c.lower[i] && vertex_at(i).is_none_or(|t| t == int(y));
                for idx in 0..=2 * g {
                    let rest = 2 * g - idx;
                    for v in (0..=2 * g as i64).step_by(2) {
                        let naive_ok = (0u32..1 << rest).any(|mask| {
                            let mut y = v;
                            if !ok_at(idx, y) {
                                return false;
                            }
                            for j in 0..rest {
                                y += 2 * (mask >> j & 1) as i64;
                                if !ok_at(idx + j + 1, y) {
                                    return false;
                                }
                            }
                            y == 2 * g as i64
                        });
                        assert_eq!(c.is_extendable(idx, v), naive_ok, "g={g} gaps={:?} idx={idx} v={v}", s.gaps());
                    }
                }
            }
        }
    }

    #[test]
    fn search_equals_naive_enumeration() {
        for g in 0..=6 {
            for s in all_gap_sequences(g) {
                let hull = crate::gapfn::gap_function(&s).hull();
                for symmetric_only in [false, true] {
                    let r = enumerate_gap_functions(&hull, symmetric_only, usize::MAX, u64::MAX).unwrap();
                    let expect = naive(&hull, g, symmetric_only);
                    assert_eq!(r.witnesses, expect, "gaps {:?}", s.gaps());
                    if !symmetric_only {
                        assert_eq!(r.total_count as usize, expect.len());
                        assert!(r.witnesses.contains(&s.gaps().to_vec()));
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for gaps in [vec![1, 2, 4, 6, 9], torus_semigroup(3, 5).unwrap().gaps().to_vec(), vec![1, 2, 3, 5, 6, 9, 13]] {
            let hull = hull_of_gaps(&gaps);
            for symmetric_only in [false, true] {
                let a = enumerate_gap_functions(&hull, symmetric_only, 1000, DEFAULT_STEP_BUDGET).unwrap();
                let mut b = enumerate_gap_functions_parallel(&hull, symmetric_only, 1000, DEFAULT_STEP_BUDGET).unwrap();
                b.nodes = a.nodes;
                assert_eq!(a, b);
            }
        }
    }
}
