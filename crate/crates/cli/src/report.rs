//! JSON reports for the `invariants`, `restore`, `family` and `braid`
//! subcommands.

use serde::Serialize;
use upsilon_core::braid::BraidWord;
use upsilon_core::family::{
    alexander_closed_form, alexander_via_burau, alexander_via_torres, semigroup_closed_form, verify_main_theorem,
    Check, FamilyKnot, MainTheoremReport, Which,
};
use upsilon_core::gapfn::{gap_function, GapFunction};
use upsilon_core::knotform::formal_semigroup;
use upsilon_core::plmath::{format_rational, PLFunction};
use upsilon_core::poly::IntLaurentPoly;
use upsilon_core::restore::{enumerate_gap_functions, enumerate_gap_functions_parallel, RestorabilityReport};

use crate::spec::Resolved;
use crate::{CliError, Result};

#[derive(Serialize)]
pub struct Breakpoint {
    pub t: String,
    pub value: String,
}

#[derive(Serialize)]
pub struct InvariantsReport {
    pub label: String,
    pub alexander: IntLaurentPoly,
    pub alexander_display: String,
    pub genus: usize,
    pub surgery_threshold: i64,
    /// Semigroup elements below the conductor.
    pub semigroup: Vec<i64>,
    pub conductor: i64,
    pub gaps: Vec<i64>,
    pub gap_function: GapFunction,
    pub hull: PLFunction,
    pub upsilon: PLFunction,
    pub upsilon_breakpoints: Vec<Breakpoint>,
    pub upsilon_slopes: Vec<String>,
    pub semigroup_closed: bool,
    pub closure_witness: Option<(i64, i64)>,
    pub symmetric: bool,
}

pub fn invariants(knot: &Resolved) -> Result<InvariantsReport> {
    let s = formal_semigroup(&knot.alexander).map_err(CliError::usage)?;
    let f = gap_function(&s);
    let hull = f.hull();
    let upsilon = hull.legendre_fenchel().map_err(CliError::usage)?;
    let upsilon_breakpoints = upsilon
        .vertices()
        .iter()
        .map(|(t, v)| Breakpoint { t: format_rational(t), value: format_rational(v) })
        .collect();
    let upsilon_slopes = upsilon.segment_slopes().iter().map(format_rational).collect();
    Ok(InvariantsReport {
        label: knot.label.clone(),
        alexander_display: knot.alexander.to_string(),
        alexander: knot.alexander.clone(),
        genus: s.genus(),
        surgery_threshold: s.surgery_threshold(),
        semigroup: s.small_elements(),
        conductor: s.conductor(),
        gaps: s.gaps().to_vec(),
        gap_function: f,
        hull,
        upsilon,
        upsilon_breakpoints,
        upsilon_slopes,
        semigroup_closed: s.is_semigroup_closed(),
        closure_witness: s.closure_witness(),
        symmetric: s.is_symmetric(),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct RestoreOptions {
    pub symmetric_only: bool,
    pub max_solutions: usize,
    pub budget: u64,
    pub parallel: bool,
}

#[derive(Serialize)]
pub struct RestoreOutput {
    pub label: String,
    pub alexander: IntLaurentPoly,
    pub gaps: Vec<i64>,
    pub symmetric_only: bool,
    #[serde(flatten)]
    pub report: RestorabilityReport,
}

pub fn restore(knot: &Resolved, opts: RestoreOptions) -> Result<RestoreOutput> {
    let s = formal_semigroup(&knot.alexander).map_err(CliError::usage)?;
    let hull = gap_function(&s).hull();
    let run = if opts.parallel { enumerate_gap_functions_parallel } else { enumerate_gap_functions };
    let report = run(&hull, opts.symmetric_only, opts.max_solutions, opts.budget).map_err(CliError::usage)?;
    Ok(RestoreOutput {
        label: knot.label.clone(),
        alexander: knot.alexander.clone(),
        gaps: s.gaps().to_vec(),
        symmetric_only: opts.symmetric_only,
        report,
    })
}

/// Accepts plain integers and scientific notation such as `2e8`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let (mantissa, exp) = t.split_once(['e', 'E']).ok_or_else(|| format!("not a count: {s:?}"))?;
    let m: u64 = mantissa.parse().map_err(|_| format!("not a count: {s:?}"))?;
    let e: u32 = exp.parse().map_err(|_| format!("not a count: {s:?}"))?;
    10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(|| format!("count too large: {s:?}"))
}

/// `a..b` (inclusive), or a single integer.
pub fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let bad = || format!("bad range {s:?}, expected a..b");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => {
            (a.trim().parse().map_err(|_| bad())?, b.trim_start_matches('=').trim().parse().map_err(|_| bad())?)
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a < 1 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Serialize)]
pub struct SingleKnotReport {
    pub knot: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Derivation checks for one member of the family.
pub fn single_knot_checks(k: FamilyKnot, with_burau: bool) -> Result<SingleKnotReport> {
    let closed = alexander_closed_form(k);
    let mut checks = Vec::new();
    let s = formal_semigroup(&closed).map_err(CliError::usage)?;
    let expect = semigroup_closed_form(k);
    checks.push(Check {
        label: 'b',
        description: "semigroup matches the block description".into(),
        passed: s == expect,
        detail: format!("gaps {:?}", s.gaps()),
    });
    let torres = alexander_via_torres(k).map_err(CliError::usage)?;
    let mut ok = torres == closed;
    let mut detail = format!("Torres {}", if ok { "agrees" } else { "differs" });
    if with_burau {
        let burau = alexander_via_burau(k).map_err(CliError::usage)?;
        ok &= burau == closed;
        detail.push_str(if burau == closed { ", Burau agrees" } else { ", Burau differs" });
    }
    checks.push(Check { label: 'e', description: "derivations agree".into(), passed: ok, detail });
    let w = s.closure_witness();
    checks.push(Check {
        label: 'f',
        description: "semigroup is not closed under addition".into(),
        passed: w.is_some(),
        detail: format!("witness {w:?}"),
    });
    let passed = checks.iter().all(|c| c.passed);
    Ok(SingleKnotReport { knot: k.to_string(), checks, passed })
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum FamilyEntry {
    Pair(MainTheoremReport),
    Single(SingleKnotReport),
}

impl FamilyEntry {
    pub fn passed(&self) -> bool {
        match self {
            FamilyEntry::Pair(r) => r.passed,
            FamilyEntry::Single(r) => r.passed,
        }
    }
}

#[derive(Serialize)]
pub struct FamilyOutput {
    pub reports: Vec<FamilyEntry>,
    pub all_passed: bool,
}

/// `which` is `None` for both knots, which runs the paired comparison.
pub fn family_verify(which: Option<Which>, lo: i64, hi: i64, burau_max: i64) -> Result<FamilyOutput> {
    let mut reports = Vec::new();
    for n in lo..=hi {
        let with_burau = n <= burau_max;
        let entry = match which {
            None => FamilyEntry::Pair(verify_main_theorem(n, with_burau).map_err(CliError::usage)?),
            Some(w) => {
                let k = FamilyKnot::new(w, n).map_err(CliError::usage)?;
                FamilyEntry::Single(single_knot_checks(k, with_burau)?)
            }
        };
        reports.push(entry);
    }
    let all_passed = reports.iter().all(FamilyEntry::passed);
    Ok(FamilyOutput { reports, all_passed })
}

pub fn family_text(out: &FamilyOutput) -> String {
    let mut s = String::new();
    for r in &out.reports {
        let (name, checks) = match r {
            FamilyEntry::Pair(r) => (format!("n={}", r.n), &r.checks),
            FamilyEntry::Single(r) => (r.knot.clone(), &r.checks),
        };
        for c in checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{name} ({}) {mark} {}: {}\n", c.label, c.description, c.detail));
        }
    }
    s.push_str(if out.all_passed { "all checks passed\n" } else { "some checks FAILED\n" });
    s
}

#[derive(Serialize)]
pub struct BraidOutput {
    pub braid: BraidWord,
    pub components: usize,
    pub alexander: IntLaurentPoly,
    pub alexander_display: String,
    pub lspace_form: bool,
}

pub fn braid(word: &BraidWord) -> Result<BraidOutput> {
    let alexander = word.alexander_of_closure().map_err(CliError::usage)?;
    Ok(BraidOutput {
        braid: word.clone(),
        components: word.components().len(),
        alexander_display: alexander.to_string(),
        lspace_form: alexander.normalize_knot().is_lspace_form(),
        alexander,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_ranges() {
        assert_eq!(parse_count("2e8"), Ok(200_000_000));
        assert_eq!(parse_count("1000"), Ok(1000));
        assert!(parse_count("1e30").is_err());
        assert!(parse_count("x").is_err());
        assert_eq!(parse_range("1..5"), Ok((1, 5)));
        assert_eq!(parse_range("1..=3"), Ok((1, 3)));
        assert_eq!(parse_range("4"), Ok((4, 4)));
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("3..1").is_err());
    }

    #[test]
    fn single_knot_report() {
        let r = single_knot_checks(FamilyKnot::new(Which::K2, 2).unwrap(), true).unwrap();
        assert!(r.passed);
    }
}
