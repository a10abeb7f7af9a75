//! Grouping a list of knots by Alexander polynomial and by Upsilon.
//!
//! Input is JSON lines, one `{"name": ..., "alexander": [[exp, coeff], ...]}`
//! record per line. Output groups are sorted by their canonical keys, so
//! the report does not depend on the order of the input lines.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use upsilon_core::gapfn::upsilon_of;
use upsilon_core::poly::IntLaurentPoly;

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CensusRecord {
    pub name: String,
    pub alexander: IntLaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub line: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    pub key: String,
    pub names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub records: usize,
    pub skipped: Vec<Skipped>,
    pub alexander_duplicates: Vec<Group>,
    pub upsilon_duplicates: Vec<Group>,
    /// Pairs with equal Upsilon but different Alexander polynomials.
    pub upsilon_equal_alexander_distinct: Vec<(String, String)>,
}

struct Keyed {
    name: String,
    alexander_key: String,
    upsilon_key: String,
}

fn keys(record: &CensusRecord) -> Result<Keyed, String> {
    let delta = record.alexander.normalize_knot();
    if !delta.is_lspace_form() {
        return Err(format!("{}: {delta} is not of L-space form", record.name));
    }
    let ups = upsilon_of(&delta).map_err(|e| format!("{}: {e}", record.name))?;
    Ok(Keyed {
        name: record.name.clone(),
        alexander_key: serde_json::to_string(&delta).expect("polynomials serialize"),
        upsilon_key: serde_json::to_string(&ups.canonical()).expect("PL functions serialize"),
    })
}

fn duplicate_groups(entries: &[Keyed], key: impl Fn(&Keyed) -> &str) -> Vec<Group> {
    let mut map: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for e in entries {
        map.entry(key(e)).or_default().push(e.name.clone());
    }
    map.into_iter()
        .filter(|(_, names)| names.len() > 1)
        .map(|(k, mut names)| {
            names.sort();
            Group { key: k.to_string(), names }
        })
        .collect()
}

pub fn scan(text: &str) -> CensusReport {
    let mut skipped = Vec::new();
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CensusRecord>(line) {
            Ok(r) => records.push((i + 1, r)),
            Err(e) => skipped.push(Skipped { line: i + 1, error: e.to_string() }),
        }
    }
    let keyed: Vec<(usize, Result<Keyed, String>)> = records.par_iter().map(|(line, r)| (*line, keys(r))).collect();
    let mut entries = Vec::new();
    for (line, k) in keyed {
        match k {
            Ok(k) => entries.push(k),
            Err(error) => skipped.push(Skipped { line, error }),
        }
    }
    skipped.sort_by_key(|s| s.line);
    let alexander_duplicates = duplicate_groups(&entries, |e| &e.alexander_key);
    let upsilon_duplicates = duplicate_groups(&entries, |e| &e.upsilon_key);
    let mut pairs = Vec::new();
    for g in &upsilon_duplicates {
        let members: Vec<&Keyed> = g.names.iter().flat_map(|n| entries.iter().filter(move |e| &e.name == n)).collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.alexander_key != b.alexander_key {
                    pairs.push((a.name.clone(), b.name.clone()));
                }
            }
        }
    }
    pairs.sort();
    pairs.dedup();
    CensusReport {
        records: entries.len(),
        skipped,
        alexander_duplicates,
        upsilon_duplicates,
        upsilon_equal_alexander_distinct: pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_record_has_no_duplicates() {
        let r = scan(r#"{"name":"trefoil","alexander":[[0,1],[1,-1],[2,1]]}"#);
        assert_eq!(r.records, 1);
        assert!(r.alexander_duplicates.is_empty() && r.upsilon_duplicates.is_empty());
    }

    #[test]
    fn bad_lines_are_skipped() {
        let text = "{\"name\":\"a\",\"alexander\":[[0,1]]}\nnot json\n\n{\"name\":\"fig8\",\"alexander\":[[0,-1],[1,3],[2,-1]]}\n";
        let r = scan(text);
        assert_eq!(r.records, 1);
        assert_eq!(r.skipped.iter().map(|s| s.line).collect::<Vec<_>>(), vec![2, 4]);
    }

    #[test]
    fn shifted_polynomials_collide() {
        let text = "{\"name\":\"a\",\"alexander\":[[0,1],[1,-1],[2,1]]}\n{\"name\":\"b\",\"alexander\":[[-1,1],[0,-1],[1,1]]}\n";
        let r = scan(text);
        assert_eq!(r.alexander_duplicates.len(), 1);
        assert_eq!(r.alexander_duplicates[0].names, vec!["a", "b"]);
        assert!(r.upsilon_equal_alexander_distinct.is_empty());
    }
}
