//! Per-script census and database averages.

use std::fmt;
use std::io;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::script::Field;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub script: String,
    pub subevents: usize,
    pub roles: usize,
    pub places: usize,
    pub other: usize,
}

/// Averages over a set of scripts. The values are exact; rounding to two
/// decimals happens only when displaying.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub name: String,
    pub scripts: usize,
    pub avg_subevents: f64,
    pub avg_roles: f64,
    pub avg_places: f64,
    pub avg_other: f64,
}

impl SummaryRow {
    /// Averages of `rows`; `None` when there are none.
    pub fn from_rows(name: &str, rows: &[CensusRow]) -> Option<SummaryRow> {
        if rows.is_empty() {
            return None;
        }
        let n = rows.len() as f64;
        let avg = |f: fn(&CensusRow) -> usize| rows.iter().map(f).sum::<usize>() as f64 / n;
        Some(SummaryRow {
            name: name.to_string(),
            scripts: rows.len(),
            avg_subevents: avg(|r| r.subevents),
            avg_roles: avg(|r| r.roles),
            avg_places: avg(|r| r.places),
            avg_other: avg(|r| r.other),
        })
    }

    pub fn rounded(&self) -> [String; 4] {
        [self.avg_subevents, self.avg_roles, self.avg_places, self.avg_other].map(|v| format!("{v:.2}"))
    }
}

impl fmt::Display for SummaryRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [s, r, p, o] = self.rounded();
        write!(f, "{} | {} | {s} | {r} | {p} | {o}", self.name, self.scripts)
    }
}

/// Published figures for other script databases, shown next to local
/// numbers. `(name, scripts, subevents, roles, places, other)`.
pub const REPORTED: [(&str, usize, &str, &str, &str, &str); 5] = [
    ("Cyc", 185, "1.71", "0.032", "0.092", "15.76"),
    ("FrameNet", 20, "0", "4.94", "0", "0"),
    ("Gordon's EPs", 768, "3.12", "6.14", "1.71", "1.29"),
    ("ThoughtTreasure", 93, "8.57", "5.30", "0.86", "6.10"),
    ("WordNet 1.6", 427, "1.06", "0", "0", "0"),
];

enum Column {
    Subevents,
    Roles,
    Places,
    Other,
}

fn column(predicate: &str) -> Option<Column> {
    Some(match Field::parse(predicate)? {
        Field::Event(_) => Column::Subevents,
        Field::Role(_) => Column::Roles,
        Field::PerformedIn => Column::Places,
        Field::EntryCondition
        | Field::Result
        | Field::Goal
        | Field::Emotion
        | Field::Duration
        | Field::Period
        | Field::Cost
        | Field::RoleScript(_) => Column::Other,
    })
}

/// One row per script, ordered by name. Only the script's own assertions
/// are counted; inherited values are not.
pub fn census(kb: &KnowledgeBase) -> Vec<CensusRow> {
    kb.script_concepts()
        .into_iter()
        .map(|script| {
            let mut row = CensusRow { script: script.to_string(), subevents: 0, roles: 0, places: 0, other: 0 };
            for a in kb.assertions_about(script) {
                match column(&a.predicate) {
                    Some(Column::Subevents) => row.subevents += 1,
                    Some(Column::Roles) => row.roles += 1,
                    Some(Column::Places) => row.places += 1,
                    Some(Column::Other) => row.other += 1,
                    None => {}
                }
            }
            row
        })
        .collect()
}

pub fn summary(kb: &KnowledgeBase) -> Result<SummaryRow> {
    SummaryRow::from_rows("local", &census(kb)).ok_or(Error::EmptyDatabase)
}

const HEADER: [&str; 6] = ["Name", "Scripts", "Subevents", "Roles", "Places", "Other"];

fn align(rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (cell, w))| if i == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn census_table(rows: &[CensusRow]) -> Vec<Vec<String>> {
    let mut out = vec![["Script", "Subevents", "Roles", "Places", "Other"].map(String::from).to_vec()];
    for r in rows {
        out.push(vec![
            r.script.clone(),
            r.subevents.to_string(),
            r.roles.to_string(),
            r.places.to_string(),
            r.other.to_string(),
        ]);
    }
    out
}

fn summary_table(local: &SummaryRow) -> Vec<Vec<String>> {
    let mut out = vec![HEADER.map(String::from).to_vec()];
    let [s, r, p, o] = local.rounded();
    out.push(vec![local.name.clone(), local.scripts.to_string(), s, r, p, o]);
    for (name, scripts, s, r, p, o) in REPORTED {
        out.push(vec![format!("{name} (reported)"), scripts.to_string(), s.into(), r.into(), p.into(), o.into()]);
    }
    out
}

/// Census rows followed by the summary next to the reported figures.
pub fn render_text(rows: &[CensusRow], local: &SummaryRow) -> String {
    format!("{}\n{}", align(&census_table(rows)), align(&summary_table(local)))
}

/// Same content as [`render_text`], as two CSV tables separated by a
/// blank line.
pub fn write_csv<W: io::Write>(mut out: W, rows: &[CensusRow], local: &SummaryRow) -> csv::Result<()> {
    for (i, table) in [census_table(rows), summary_table(local)].iter().enumerate() {
        if i > 0 {
            out.write_all(b"\n")?;
        }
        let mut w = csv::Writer::from_writer(&mut out);
        for row in table {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_event_script() {
        let kb = KnowledgeBase::from_texts([("t", "Object s\n[event01-of ^ [go x]]\n")]).kb;
        let s = summary(&kb).unwrap();
        assert_eq!(s.scripts, 1);
        assert_eq!(s.rounded(), ["1.00", "0.00", "0.00", "0.00"]);
    }

    #[test]
    fn empty_database() {
        let kb = KnowledgeBase::from_texts([("t", "Object x\n[color-of ^ red]\n")]).kb;
        assert_eq!(summary(&kb), Err(Error::EmptyDatabase));
        assert!(census(&kb).is_empty());
    }

    #[test]
    fn counted_columns() {
        let kb = KnowledgeBase::from_texts([(
            "t",
            "Object s
[role01-of ^ a]
[role02-script-of ^ other]
[event01-of ^ [go a]]
[event02-of ^ [goto event01-of]]
[performed-in ^ home]
[goal-of ^ [rich a]]
[color-of ^ red]
",
        )])
        .kb;
        assert_eq!(census(&kb), vec![CensusRow { script: "s".into(), subevents: 2, roles: 1, places: 1, other: 2 }]);
    }

    #[test]
    fn reported_row() {
        let tt = REPORTED.iter().find(|r| r.0 == "ThoughtTreasure").unwrap();
        assert_eq!(*tt, ("ThoughtTreasure", 93, "8.57", "5.30", "0.86", "6.10"));
    }

    #[test]
    fn csv_and_text_agree() {
        let kb = KnowledgeBase::from_texts([("t", "Object s\n[event01-of ^ [go x]]\n")]).kb;
        let rows = census(&kb);
        let s = summary(&kb).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows, &s).unwrap();
        let csv = String::from_utf8(buf).unwrap();
        assert!(csv.starts_with("Script,Subevents,Roles,Places,Other\ns,1,0,0,0\n\nName,"));
        assert!(csv.contains("local,1,1.00,0.00,0.00,0.00\n"));
        let text = render_text(&rows, &s);
        assert!(text.contains("ThoughtTreasure (reported)"));
    }
}
