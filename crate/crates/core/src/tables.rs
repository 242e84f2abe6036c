//! Regenerated operator tables and their comparison with the shipped reference data.
//!
//! Words render with site subscripts inline, `-X3Y4` for `−X₃Y₄`. Generator
//! products render as `E1E3`, lists of them joined with `;`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bell::{table_iii, MembershipRow};
use crate::error::{Error, Result};
use crate::family::{primed_family_head, primed_family_tail, PrimedFamily};
use crate::pauli::PauliWord;

pub const GOLDEN_TABLE_I: &str = include_str!("../data/table_i.csv");
pub const GOLDEN_TABLE_II: &str = include_str!("../data/table_ii.csv");
pub const GOLDEN_TABLE_III: &str = include_str!("../data/table_iii.csv");
/// Entries implied by the membership rule that the reference listing leaves out.
pub const TABLE_III_ERRATA: &str = include_str!("../data/table_iii_errata.csv");

/// Chain lengths covered by the Table III reference data.
pub const TABLE_III_GOLDEN_RANGE: std::ops::RangeInclusive<usize> = 4..=6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    I,
    II,
    III,
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Which::I),
            "II" | "2" => Ok(Which::II),
            "III" | "3" => Ok(Which::III),
            _ => Err(Error::Format {
                input: s.to_string(),
                reason: "expected I, II or III".into(),
            }),
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::I => "I",
            Which::II => "II",
            Which::III => "III",
        })
    }
}

/// A header plus string cells; short columns are padded with empty cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::Format {
            input: "csv".into(),
            reason: e.to_string(),
        };
        let header = rd
            .headers()
            .map_err(bad)?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in rd.records() {
            rows.push(rec.map_err(bad)?.iter().map(str::to_string).collect());
        }
        Ok(Table { header, rows })
    }

    /// Column-major layout of unequal-length columns.
    fn from_columns(header: &[&str], columns: Vec<Vec<String>>) -> Self {
        let height = columns.iter().map(Vec::len).max().unwrap_or(0);
        let rows = (0..height)
            .map(|r| {
                columns
                    .iter()
                    .map(|c| c.get(r).cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }
}

/// `w` restricted to `first..=last`, sign prefix and site numbers inline.
pub fn subscripted(w: &PauliWord, first: usize, last: usize) -> String {
    let prefix = match w.phase_exp() {
        0 => "",
        1 => "+i",
        2 => "-",
        _ => "-i",
    };
    let body: String = (first..=last)
        .map(|site| format!("{}{site}", w.letter(site)))
        .collect();
    format!("{prefix}{body}")
}

fn column(f: &PrimedFamily, set: &[PauliWord]) -> Vec<String> {
    let (a, b) = (f.segment.first(), f.segment.last());
    set.iter().map(|w| subscripted(w, a, b)).collect()
}

/// `(Y′, Z′, X′ = −iY′Z′)` triples on sites 3–4 of a four-site chain.
pub fn table_i() -> Result<Table> {
    let f = primed_family_tail(3, 4)?;
    let rows = f
        .triples()
        .iter()
        .map(|(y, z, x)| {
            vec![
                subscripted(y, 3, 4),
                subscripted(z, 3, 4),
                subscripted(x, 3, 4),
            ]
        })
        .collect();
    Ok(Table {
        header: ["Y'_{3,4}", "Z'_{3,4}", "X'_{3,4}"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}

/// Head operators on sites 1–3 and 1–2 and tail operators on sites 4–5 of a five-site chain.
pub fn table_ii() -> Result<Table> {
    let h3 = primed_family_head(3)?;
    let h2 = primed_family_head(2)?;
    let t45 = primed_family_tail(4, 5)?;
    Ok(Table::from_columns(
        &[
            "Z''_{1,3}",
            "Y''_{1,3}",
            "Z''_{1,2}",
            "Y''_{1,2}",
            "Z'_{4,5}",
            "Y'_{4,5}",
        ],
        vec![
            column(&h3, &h3.z_set),
            column(&h3, &h3.y_set),
            column(&h2, &h2.z_set),
            column(&h2, &h2.y_set),
            column(&t45, &t45.z_set),
            column(&t45, &t45.y_set),
        ],
    ))
}

fn join_products(v: &[crate::pauli::StabilizerProduct]) -> String {
    v.iter().map(|s| s.label()).collect::<Vec<_>>().join(";")
}

fn mirror_label(m: &[(usize, usize)]) -> String {
    m.iter()
        .map(|(a, b)| format!("{a}<->{b}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn membership_record(r: &MembershipRow) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.grouping_label(),
        join_products(&r.e1),
        join_products(&r.e2),
        join_products(&r.e3),
        mirror_label(&r.mirror),
    ]
}

/// Membership rows for each `n` in `ns`.
pub fn table_iii_table(ns: impl IntoIterator<Item = usize>) -> Result<Table> {
    let mut rows = Vec::new();
    for n in ns {
        rows.extend(table_iii(n)?.iter().map(membership_record));
    }
    Ok(Table {
        header: ["n", "grouping", "E1_set", "E2_set", "E3_set", "mirror"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}

/// Regenerated table for `which`; `n` selects Table III rows (default: all reference lengths).
pub fn regenerate(which: Which, n: Option<usize>) -> Result<Table> {
    match which {
        Which::I => table_i(),
        Which::II => table_ii(),
        Which::III => match n {
            Some(n) => table_iii_table([n]),
            None => table_iii_table(TABLE_III_GOLDEN_RANGE),
        },
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GoldenReport {
    pub matches: bool,
    pub mismatches: Vec<String>,
    /// Errata entries folded into the reference before comparing.
    pub errata_applied: usize,
}

fn diff_cells(got: &Table, want: &Table) -> Vec<String> {
    let mut out = Vec::new();
    if got.header != want.header {
        out.push(format!("header {:?} != {:?}", got.header, want.header));
    }
    if got.rows.len() != want.rows.len() {
        out.push(format!(
            "{} rows regenerated, {} in reference",
            got.rows.len(),
            want.rows.len()
        ));
    }
    for (r, (g, w)) in got.rows.iter().zip(&want.rows).enumerate() {
        if g != w {
            out.push(format!("row {}: {:?} != {:?}", r + 1, g, w));
        }
    }
    out
}

struct Erratum {
    n: String,
    grouping: String,
    column: usize,
    entry: String,
}

fn errata() -> Result<Vec<Erratum>> {
    let t = Table::from_csv(TABLE_III_ERRATA)?;
    let cols = ["E1_set", "E2_set", "E3_set"];
    t.rows
        .iter()
        .map(|r| {
            let column = cols
                .iter()
                .position(|c| *c == r[2])
                .ok_or_else(|| Error::Format {
                    input: r[2].clone(),
                    reason: "unknown errata column".into(),
                })?
                + 2;
            Ok(Erratum {
                n: r[0].clone(),
                grouping: r[1].clone(),
                column,
                entry: r[3].clone(),
            })
        })
        .collect()
}

fn split_set(cell: &str) -> Vec<String> {
    cell.split(';')
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn compare_table_iii(n: Option<usize>) -> Result<GoldenReport> {
    if let Some(n) = n {
        if !TABLE_III_GOLDEN_RANGE.contains(&n) {
            return Err(Error::Domain(format!(
                "reference rows exist for n in {}..={}, got {n}",
                TABLE_III_GOLDEN_RANGE.start(),
                TABLE_III_GOLDEN_RANGE.end()
            )));
        }
    }
    let got = regenerate(Which::III, n)?;
    let mut want = Table::from_csv(GOLDEN_TABLE_III)?;
    if let Some(n) = n {
        want.rows.retain(|r| r[0] == n.to_string());
    }
    let mut mismatches = Vec::new();
    let mut applied = 0;
    for e in errata()? {
        let Some(row) = want
            .rows
            .iter_mut()
            .find(|r| r[0] == e.n && r[1] == e.grouping)
        else {
            continue;
        };
        let mut entries = split_set(&row[e.column]);
        if entries.contains(&e.entry) {
            mismatches.push(format!(
                "erratum {} already listed for {}",
                e.entry, e.grouping
            ));
            continue;
        }
        entries.push(e.entry);
        applied += 1;
        // Reference order: by number of generators, then by generator indices.
        let key = |s: &String| {
            let idx: Vec<usize> = s
                .split('E')
                .filter(|p| !p.is_empty())
                .filter_map(|p| p.parse().ok())
                .collect();
            (idx.len(), idx)
        };
        entries.sort_by_key(key);
        row[e.column] = entries.join(";");
    }
    mismatches.extend(diff_cells(&got, &want));
    // Also require set equality cell by cell, so an ordering slip is reported distinctly.
    for (g, w) in got.rows.iter().zip(&want.rows) {
        for c in 2..5 {
            let gs: BTreeSet<String> = split_set(&g[c]).into_iter().collect();
            let ws: BTreeSet<String> = split_set(&w[c]).into_iter().collect();
            if gs != ws {
                mismatches.push(format!("{} {}: sets differ", g[1], got.header[c]));
            }
        }
    }
    Ok(GoldenReport {
        matches: mismatches.is_empty(),
        mismatches,
        errata_applied: applied,
    })
}

/// Compares a regenerated table with the shipped reference copy.
pub fn golden_compare(which: Which, n: Option<usize>) -> Result<GoldenReport> {
    let (got, want) = match which {
        Which::I => (table_i()?, Table::from_csv(GOLDEN_TABLE_I)?),
        Which::II => (table_ii()?, Table::from_csv(GOLDEN_TABLE_II)?),
        Which::III => return compare_table_iii(n),
    };
    let mismatches = diff_cells(&got, &want);
    Ok(GoldenReport {
        matches: mismatches.is_empty(),
        mismatches,
        errata_applied: 0,
    })
}
