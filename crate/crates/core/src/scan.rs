//! Enumeration of every order `(s, t)` with `t <= t_max` whose
//! point-transitivity is ruled out by the ceiling inequality, and comparison
//! of the result with a reference table.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Nat;
use crate::obstruction::{family_tag, main_inequality};
use crate::params::{basic_laws, GqOrder};

/// One excluded order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScanRow {
    pub s: Nat,
    pub t: Nat,
    /// The `n` of the `(q^2 - nq, q)` family tag, when the order carries it.
    pub family: Option<Nat>,
    pub lhs: Nat,
    pub rhs: Nat,
}

pub const CSV_HEADER: &str = "s,t,n,lhs,rhs";

/// Rows for a single `t`, in increasing `s`.
pub fn scan_t(t: Nat) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for s in t + 1..=t * t {
        if !crate::exactmath::is_prime(s + 1) {
            continue;
        }
        let o = GqOrder::new(s, t)?;
        if !basic_laws(o)?.feasible {
            continue;
        }
        let ineq = main_inequality(o)?;
        if ineq.holds {
            continue;
        }
        rows.push(ScanRow {
            s,
            t,
            family: family_tag(o).map(|f| f.n),
            lhs: ineq.lhs,
            rhs: ineq.rhs,
        });
    }
    Ok(rows)
}

/// All excluded orders with `2 <= t <= t_max` and `t < s <= t^2`, sorted by
/// `(t, s)`.
///
/// Work is spread over the current rayon pool, one task per `t`; the
/// ordered collect keeps the output independent of scheduling.
pub fn scan(t_max: Nat) -> Result<Vec<ScanRow>> {
    let per_t: Vec<Vec<ScanRow>> = (2..=t_max)
        .into_par_iter()
        .map(scan_t)
        .collect::<Result<_>>()?;
    Ok(per_t.into_iter().flatten().collect())
}

/// One row of a reference table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub s: Nat,
    pub t: Nat,
    /// Number of asterisks printed next to the order; 3 marks the family tag.
    pub stars: u8,
    /// 1-based line in the source file.
    pub line: usize,
}

impl GoldenEntry {
    pub fn tagged(&self) -> bool {
        self.stars == 3
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GoldenTable {
    pub entries: Vec<GoldenEntry>,
}

impl GoldenTable {
    /// Parses `s,t,stars` lines. Blank lines, `#` comments and a leading
    /// `s,t,stars` header are skipped.
    pub fn parse(text: &str) -> Result<GoldenTable> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() || content.replace(' ', "") == "s,t,stars" {
                continue;
            }
            let err = |message: String| Error::GoldenParse { line, message };
            let fields: Vec<&str> = content.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            }
            let num = |f: &str, name: &str| {
                f.parse::<Nat>()
                    .map_err(|e| err(format!("bad {name} value {f:?}: {e}")))
            };
            let s = num(fields[0], "s")?;
            let t = num(fields[1], "t")?;
            let stars = num(fields[2], "stars")?;
            if stars > 3 {
                return Err(err(format!("stars must be between 0 and 3, found {stars}")));
            }
            entries.push(GoldenEntry {
                s,
                t,
                stars: stars as u8,
                line,
            });
        }
        Ok(GoldenTable { entries })
    }

    pub fn from_path(path: &std::path::Path) -> Result<GoldenTable> {
        GoldenTable::parse(&std::fs::read_to_string(path)?)
    }

    /// Drops repeated orders (keeping the first occurrence) and reads any
    /// partial asterisk tag as the full three-star tag.
    pub fn normalized(&self) -> GoldenTable {
        let mut seen = BTreeSet::new();
        let entries = self
            .entries
            .iter()
            .filter(|e| seen.insert((e.s, e.t)))
            .map(|e| GoldenEntry {
                stars: if e.stars > 0 { 3 } else { 0 },
                ..*e
            })
            .collect();
        GoldenTable { entries }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagMismatch {
    pub s: Nat,
    pub t: Nat,
    pub golden_stars: u8,
    pub computed_family: Option<Nat>,
    pub line: usize,
}

/// Set difference between computed rows and a reference table.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DiffReport {
    /// In the table but not computed.
    pub missing: Vec<GoldenEntry>,
    /// Computed but not in the table.
    pub extra: Vec<ScanRow>,
    pub tag_mismatches: Vec<TagMismatch>,
    /// Later occurrences of an order already listed in the table.
    pub duplicates: Vec<GoldenEntry>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.tag_mismatches.is_empty()
            && self.duplicates.is_empty()
    }

    pub fn len(&self) -> usize {
        self.missing.len() + self.extra.len() + self.tag_mismatches.len() + self.duplicates.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.missing {
            let _ = writeln!(out, "missing    ({}, {})  golden line {}", e.s, e.t, e.line);
        }
        for r in &self.extra {
            let tag = r.family.map(|n| format!(" n={n}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "extra      ({}, {}){tag}  lhs={} rhs={}",
                r.s, r.t, r.lhs, r.rhs
            );
        }
        for m in &self.tag_mismatches {
            let computed = match m.computed_family {
                Some(n) => format!("tagged n={n}"),
                None => "untagged".to_string(),
            };
            let _ = writeln!(
                out,
                "tag        ({}, {})  golden stars={} computed {computed}  golden line {}",
                m.s, m.t, m.golden_stars, m.line
            );
        }
        for e in &self.duplicates {
            let _ = writeln!(out, "duplicate  ({}, {})  golden line {}", e.s, e.t, e.line);
        }
        let _ = writeln!(out, "{} difference(s)", self.len());
        out
    }
}

/// Compares computed rows against a reference table as sets of orders.
/// A table row counts as tagged only with exactly three stars.
pub fn compare_to_golden(rows: &[ScanRow], golden: &GoldenTable) -> DiffReport {
    let mut report = DiffReport::default();
    let mut table: BTreeMap<(Nat, Nat), GoldenEntry> = BTreeMap::new();
    for e in &golden.entries {
        match table.entry((e.s, e.t)) {
            Entry::Occupied(_) => report.duplicates.push(*e),
            Entry::Vacant(slot) => {
                slot.insert(*e);
            }
        }
    }
    let computed: BTreeMap<(Nat, Nat), &ScanRow> = rows.iter().map(|r| ((r.s, r.t), r)).collect();
    for (key, e) in &table {
        match computed.get(key) {
            None => report.missing.push(*e),
            Some(r) if r.family.is_some() != e.tagged() => {
                report.tag_mismatches.push(TagMismatch {
                    s: e.s,
                    t: e.t,
                    golden_stars: e.stars,
                    computed_family: r.family,
                    line: e.line,
                })
            }
            Some(_) => {}
        }
    }
    report.extra = rows
        .iter()
        .filter(|r| !table.contains_key(&(r.s, r.t)))
        .copied()
        .collect();
    report.missing.sort_by_key(|e| (e.t, e.s));
    report.tag_mismatches.sort_by_key(|m| (m.t, m.s));
    report.extra.sort_by_key(|r| (r.t, r.s));
    report
}

pub fn to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 24 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let n = r.family.map(|n| n.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", r.s, r.t, n, r.lhs, r.rhs);
    }
    out
}

pub fn from_csv(text: &str) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.is_empty() || (idx == 0 && line == CSV_HEADER) {
            continue;
        }
        let err = |message: String| Error::RowParse {
            line: line_no,
            message,
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", f.len())));
        }
        let num = |v: &str| v.parse::<Nat>().map_err(|e| err(format!("{v:?}: {e}")));
        rows.push(ScanRow {
            s: num(f[0])?,
            t: num(f[1])?,
            family: if f[2].is_empty() {
                None
            } else {
                Some(num(f[2])?)
            },
            lhs: num(f[3])?,
            rhs: num(f[4])?,
        });
    }
    Ok(rows)
}

pub fn to_json(rows: &[ScanRow]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<Vec<ScanRow>> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_text(rows: &[ScanRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>8} {:>5} {:>4} {:>12} {:>12}",
        "s", "t", "n", "lhs", "rhs"
    );
    for r in rows {
        let n = r
            .family
            .map(|n| n.to_string())
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>8} {:>5} {:>4} {:>12} {:>12}",
            r.s, r.t, n, r.lhs, r.rhs
        );
    }
    let _ = writeln!(out, "{} order(s)", rows.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scan_to_four() {
        let rows = scan(4).unwrap();
        let at_four: Vec<_> = rows.iter().filter(|r| r.t == 4).copied().collect();
        assert_eq!(
            at_four,
            vec![ScanRow {
                s: 12,
                t: 4,
                family: Some(1),
                lhs: 84,
                rhs: 64
            }]
        );
        // (6, 3) passes every gate: 9 | 504, 6 <= 9 - 3, 7 prime,
        // ceil(9/7) = 2, ceil(14/3) = 5, 6 * 5 = 30 > 3 * 9 = 27.
        assert_eq!(
            rows[0],
            ScanRow {
                s: 6,
                t: 3,
                family: Some(1),
                lhs: 30,
                rhs: 27
            }
        );
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn scan_six_adds_two_rows_at_t_six() {
        let five = scan(5).unwrap();
        let six = scan(6).unwrap();
        let new: Vec<_> = six[five.len()..]
            .iter()
            .map(|r| (r.s, r.t, r.family))
            .collect();
        assert_eq!(new, vec![(22, 6, None), (30, 6, Some(1))]);
        assert!(!six.iter().any(|r| (r.s, r.t) == (36, 6)));
    }

    #[test]
    fn scan_is_prefix_stable() {
        let small = scan(20).unwrap();
        let large = scan(30).unwrap();
        assert_eq!(&large[..small.len()], &small[..]);
        assert!(large[small.len()..].iter().all(|r| r.t > 20));
    }

    #[test]
    fn csv_example() {
        assert_eq!(
            to_csv(&scan(4).unwrap()),
            "s,t,n,lhs,rhs\n6,3,1,30,27\n12,4,1,84,64\n"
        );
    }

    #[test]
    fn golden_parse_errors_carry_line_numbers() {
        let err = GoldenTable::parse("# c\n12,4,3\n22,x,0\n").unwrap_err();
        assert!(matches!(err, Error::GoldenParse { line: 3, .. }), "{err}");
        let err = GoldenTable::parse("12,4\n").unwrap_err();
        assert!(matches!(err, Error::GoldenParse { line: 1, .. }));
        let err = GoldenTable::parse("\n\n12,4,5\n").unwrap_err();
        assert!(matches!(err, Error::GoldenParse { line: 3, .. }));
    }

    #[test]
    fn golden_parse_accepts_comments_and_header() {
        let t = GoldenTable::parse("s,t,stars\n# x\n12,4,3 # trailing\n\n22, 6, 0\n").unwrap();
        assert_eq!(t.entries.len(), 2);
        assert_eq!(t.entries[1].line, 5);
        assert!(t.entries[0].tagged());
    }

    #[test]
    fn empty_inputs_have_empty_diff() {
        assert!(compare_to_golden(&[], &GoldenTable::default()).is_empty());
    }

    #[test]
    fn diff_categories() {
        let rows = scan(6).unwrap();
        let golden = GoldenTable::parse("12,4,3\n22,6,3\n30,6,3\n30,6,3\n40,6,0\n").unwrap();
        let d = compare_to_golden(&rows, &golden);
        assert_eq!(d.missing.len(), 1);
        assert_eq!((d.missing[0].s, d.missing[0].t), (40, 6));
        assert_eq!(d.tag_mismatches.len(), 1);
        assert_eq!(
            (d.tag_mismatches[0].s, d.tag_mismatches[0].golden_stars),
            (22, 3)
        );
        assert_eq!(d.duplicates.len(), 1);
        assert_eq!(d.duplicates[0].line, 4);
        assert!(d.extra.iter().any(|r| (r.s, r.t) == (6, 3)));
        assert!(d.render().contains("duplicate  (30, 6)  golden line 4"));
    }

    #[test]
    fn normalization_dedupes_and_completes_tags() {
        let golden = GoldenTable::parse("12,4,3\n12,4,3\n9900,100,2\n22,6,0\n").unwrap();
        let n = golden.normalized();
        assert_eq!(n.entries.len(), 3);
        assert_eq!(n.entries[1].stars, 3);
        assert_eq!(n.entries[2].stars, 0);
    }

    #[test]
    fn text_table_lists_rows() {
        let text = to_text(&scan(6).unwrap());
        assert!(text.ends_with("4 order(s)\n"), "{text}");
        assert!(text
            .lines()
            .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["22", "6", "-", "176", "168"]));
    }

    fn arb_row() -> impl Strategy<Value = ScanRow> {
        (
            any::<u64>(),
            any::<u64>(),
            proptest::option::of(any::<u64>()),
            any::<u64>(),
            any::<u64>(),
        )
            .prop_map(|(s, t, family, lhs, rhs)| ScanRow {
                s,
                t,
                family,
                lhs,
                rhs,
            })
    }

    proptest! {
        #[test]
        fn csv_and_json_round_trip(rows in proptest::collection::vec(arb_row(), 0..20)) {
            let csv = to_csv(&rows);
            prop_assert_eq!(&from_csv(&csv).unwrap(), &rows);
            prop_assert_eq!(to_csv(&from_csv(&csv).unwrap()), csv);
            let json = to_json(&rows).unwrap();
            prop_assert_eq!(to_json(&from_json(&json).unwrap()).unwrap(), json);
        }
    }
}
