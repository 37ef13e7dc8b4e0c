//! Two-dimensional character grids describing where things are in a place.
//!
//! ```text
//! ==hotel-room1//
//! wwwwwwwwwwww    b:bed
//! wbbbbb    mw    d:lockable-door
//! ```
//!
//! Each line holds a raster row and, after a gap of spaces, legend entries
//! of the form `key:concept`. A line whose raster part is blank only carries
//! legend entries.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::assertion::is_symbol;
use crate::diagnostics::{Code, Diagnostic};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridOptions {
    /// Minimum run of spaces separating a row from its legend entries.
    pub legend_gap: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { legend_gap: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LegendEntry {
    /// Key as written; usually one character, but longer keys such as
    /// `Z.wd` are kept verbatim.
    pub key: String,
    pub concept: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grid {
    name: String,
    rows: Vec<String>,
    legend: BTreeMap<char, LegendEntry>,
}

impl Grid {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.chars().count())
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn legend(&self) -> &BTreeMap<char, LegendEntry> {
        &self.legend
    }

    /// Concepts named in the legend, deduplicated, in key order.
    pub fn legend_concepts(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in self.legend.values() {
            if !out.contains(&e.concept.as_str()) {
                out.push(&e.concept);
            }
        }
        out
    }

    pub fn cell(&self, col: usize, row: usize) -> Result<char> {
        let out_of_bounds = || Error::OutOfBounds { col, row, width: self.width(), height: self.height() };
        self.rows.get(row).and_then(|r| r.chars().nth(col)).ok_or_else(out_of_bounds)
    }

    /// Legend concept at a cell; `None` for spaces and unmapped characters.
    pub fn object_at(&self, col: usize, row: usize) -> Result<Option<&str>> {
        let c = self.cell(col, row)?;
        if c == ' ' {
            return Ok(None);
        }
        Ok(self.legend.get(&c).map(|e| e.concept.as_str()))
    }

    /// Cells whose character maps to `concept`, row-major, as `(col, row)`.
    pub fn cells_of(&self, concept: &str) -> Vec<(usize, usize)> {
        let keys: Vec<char> = self.legend.iter().filter(|(_, e)| e.concept == concept).map(|(&k, _)| k).collect();
        if keys.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (row, line) in self.rows.iter().enumerate() {
            for (col, c) in line.chars().enumerate() {
                if keys.contains(&c) {
                    out.push((col, row));
                }
            }
        }
        out
    }
}

pub fn parse_grid(text: &str) -> Result<(Grid, Vec<Diagnostic>)> {
    parse_grid_with(text, GridOptions::default())
}

/// Parses a grid block. Only a bad header is fatal; legend problems become
/// diagnostics (line numbers are relative to the header line, which is 1).
pub fn parse_grid_with(text: &str, options: GridOptions) -> Result<(Grid, Vec<Diagnostic>)> {
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines.next().unwrap_or("");
    let name = header
        .trim_end()
        .strip_prefix("==")
        .and_then(|h| h.strip_suffix("//"))
        .filter(|n| is_symbol(n))
        .ok_or_else(|| Error::MalformedHeader(header.to_string()))?;

    let mut diagnostics = Vec::new();
    let mut rows = Vec::new();
    let mut legend: BTreeMap<char, LegendEntry> = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if line.is_empty() {
            break;
        }
        let (row, entries) = split_legend(line, options.legend_gap);
        for (col, entry) in entries {
            let Some((key, concept)) = entry.split_once(':').filter(|(k, c)| !k.is_empty() && is_symbol(c)) else {
                diagnostics.push(Diagnostic::error(
                    Code::MalformedLegendEntry,
                    line_no,
                    col,
                    format!("legend entry `{entry}` is not `key:concept`"),
                ));
                continue;
            };
            let first = key.chars().next().expect("non-empty key");
            if key.chars().count() > 1 {
                diagnostics.push(Diagnostic::warning(
                    Code::ExtendedLegendKey,
                    line_no,
                    col,
                    format!("legend key `{key}` has more than one character; mapping `{first}` to {concept}"),
                ));
            }
            let entry = LegendEntry { key: key.to_string(), concept: concept.to_string() };
            if let Some(old) = legend.insert(first, entry) {
                diagnostics.push(Diagnostic::warning(
                    Code::DuplicateLegendKey,
                    line_no,
                    col,
                    format!("legend key `{first}` was {}, now {concept}", old.concept),
                ));
            }
        }
        if let Some(row) = row {
            rows.push(row.trim_end_matches(' ').to_string());
        }
    }

    let width = rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
    if width == 0 {
        rows.clear();
    }
    for row in &mut rows {
        let pad = width - row.chars().count();
        row.extend(std::iter::repeat_n(' ', pad));
    }

    for (r, row) in rows.iter().enumerate() {
        for (c, ch) in row.chars().enumerate() {
            if ch != ' ' && !legend.contains_key(&ch) {
                diagnostics.push(Diagnostic::warning(
                    Code::UnmappedGridCell,
                    r + 2,
                    c + 1,
                    format!("`{ch}` has no legend entry"),
                ));
            }
        }
    }

    Ok((Grid { name: name.to_string(), rows, legend }, diagnostics))
}

/// Splits a line into its raster part and legend entries (with 1-based
/// columns). The legend starts after the last run of at least `gap` spaces
/// when everything after it looks like `key:concept` entries; a row may
/// itself contain long runs of spaces.
fn split_legend(line: &str, gap: usize) -> (Option<&str>, Vec<(usize, &str)>) {
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut run = 0;
    let mut candidate = None;
    for (ci, &(bi, c)) in chars.iter().enumerate() {
        if c == ' ' {
            run += 1;
        } else {
            if run >= gap || (run > 0 && run == ci) {
                candidate = Some(bi);
            }
            run = 0;
        }
    }
    let Some(start) = candidate else {
        return (Some(line), Vec::new());
    };
    let tail = &line[start..];
    if !tail.split_whitespace().all(|t| t.contains(':')) {
        return (Some(line), Vec::new());
    }
    let mut entries = Vec::new();
    let mut offset = start;
    for tok in tail.split(' ') {
        if !tok.is_empty() {
            entries.push((line[..offset].chars().count() + 1, tok));
        }
        offset += tok.len() + 1;
    }
    let row = &line[..start];
    let row = if row.trim().is_empty() { None } else { Some(row) };
    (row, entries)
}

/// Canonical text form: header, rows padded to a common width, legend
/// entries attached one per non-blank row in key order, and any remaining
/// entries on legend-only lines. A row that would itself read as legend
/// entries always gets an entry after it, repeating one if needed.
pub fn render(grid: &Grid) -> String {
    let width = grid.width();
    let gap = " ".repeat(GridOptions::default().legend_gap);
    let entries: Vec<String> = grid.legend.values().map(|e| format!("{}:{}", e.key, e.concept)).collect();
    let ambiguous: Vec<bool> =
        grid.rows.iter().map(|r| !split_legend(r.trim_end(), GridOptions::default().legend_gap).1.is_empty()).collect();
    // Ambiguous rows are served first.
    let mut assigned: Vec<Option<&str>> = vec![None; grid.rows.len()];
    let mut next = 0;
    for (i, _) in ambiguous.iter().enumerate().filter(|(_, a)| **a) {
        if !entries.is_empty() {
            assigned[i] = Some(&entries[next % entries.len()]);
            next += 1;
        }
    }
    for (i, row) in grid.rows.iter().enumerate() {
        if next < entries.len() && assigned[i].is_none() && !row.trim().is_empty() {
            assigned[i] = Some(&entries[next]);
            next += 1;
        }
    }
    let mut out = format!("=={}//\n", grid.name);
    for (row, entry) in grid.rows.iter().zip(&assigned) {
        out.push_str(row);
        if let Some(e) = entry {
            out.push_str(&gap);
            out.push_str(e);
        }
        out.push('\n');
    }
    for e in entries.iter().skip(next) {
        out.push_str(&" ".repeat(width));
        out.push_str(&gap);
        out.push_str(e);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const HOTEL: &str = "==hotel-room1//
wwwwwwwwwwww    b:bed
wbbbbb    mw    d:lockable-door
wbbbbb     w    m:minibar
wx        Zw    w:wall
wwwwwwdddwww    x:phone
w               x:night-table
wwwwwwwwwwww    Z.wd:hotel-room";

    fn hotel() -> (Grid, Vec<Diagnostic>) {
        parse_grid(HOTEL).unwrap()
    }

    #[test]
    fn hotel_room_shape() {
        let (g, _) = hotel();
        assert_eq!(g.name(), "hotel-room1");
        assert_eq!(g.height(), 7);
        assert_eq!(g.width(), 12);
        assert!(g.rows().iter().all(|r| r.chars().count() == 12));
        assert_eq!(g.rows()[5], "w           ");
        let concept = |k| g.legend()[&k].concept.as_str();
        assert_eq!(concept('b'), "bed");
        assert_eq!(concept('d'), "lockable-door");
        assert_eq!(concept('m'), "minibar");
        assert_eq!(concept('w'), "wall");
    }

    #[test]
    fn hotel_room_diagnostics() {
        let (g, diags) = hotel();
        let dup: Vec<_> = diags.iter().filter(|d| d.code == Code::DuplicateLegendKey).collect();
        assert_eq!(dup.len(), 1);
        assert_eq!(dup[0].line, 7);
        assert_eq!(g.legend()[&'x'].concept, "night-table");
        let ext: Vec<_> = diags.iter().filter(|d| d.code == Code::ExtendedLegendKey).collect();
        assert_eq!(ext.len(), 1);
        assert_eq!(g.legend()[&'Z'].key, "Z.wd");
        assert_eq!(g.legend()[&'Z'].concept, "hotel-room");
        assert!(!diags.iter().any(|d| d.is_error()));
    }

    #[test]
    fn minibar_and_spaces() {
        let (g, _) = hotel();
        assert_eq!(g.object_at(10, 1).unwrap(), Some("minibar"));
        assert_eq!(g.object_at(6, 1).unwrap(), None);
        assert!(matches!(g.object_at(12, 0), Err(Error::OutOfBounds { .. })));
        assert!(matches!(g.object_at(0, 7), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn cells_match_character_counts() {
        let (g, _) = hotel();
        let count = |ch| g.rows().iter().map(|r| r.chars().filter(|&c| c == ch).count()).sum::<usize>();
        assert_eq!(g.cells_of("bed").len(), 10);
        assert_eq!(g.cells_of("wall").len(), count('w'));
        assert_eq!(g.cells_of("lockable-door").len(), 3);
        assert!(g.cells_of("unicorn").is_empty());
        assert_eq!(g.cells_of("bed")[0], (1, 1));
    }

    #[test]
    fn object_at_agrees_with_cells_of() {
        let (g, _) = hotel();
        for concept in g.legend_concepts() {
            let mut scanned = Vec::new();
            for row in 0..g.height() {
                for col in 0..g.width() {
                    if g.object_at(col, row).unwrap() == Some(concept) {
                        scanned.push((col, row));
                    }
                }
            }
            assert_eq!(scanned, g.cells_of(concept), "{concept}");
        }
    }

    #[test]
    fn header_only() {
        let (g, diags) = parse_grid("==empty//").unwrap();
        assert_eq!(g.height(), 0);
        assert!(g.legend().is_empty());
        assert!(diags.is_empty());
        assert_eq!(render(&g), "==empty//\n");
    }

    #[test]
    fn bad_header_and_legend() {
        assert!(matches!(parse_grid("hotel"), Err(Error::MalformedHeader(_))));
        assert!(matches!(parse_grid("==hotel"), Err(Error::MalformedHeader(_))));
        let (_, diags) = parse_grid("==g//\nab    a:x:y b:\n").unwrap();
        assert_eq!(diags.iter().filter(|d| d.code == Code::MalformedLegendEntry).count(), 2);
    }

    #[test]
    fn render_round_trip() {
        let (g, _) = hotel();
        let text = render(&g);
        let (again, _) = parse_grid(&text).unwrap();
        assert_eq!(again, g);
        assert!(text.lines().skip(1).take(7).all(|l| l.chars().take(12).count() == 12));
    }

    #[test]
    fn wider_gap_option() {
        let (g, _) = parse_grid_with("==g//\na     a:apple", GridOptions { legend_gap: 6 }).unwrap();
        assert!(g.legend().is_empty());
        assert_eq!(g.rows()[0], "a     a:apple");
    }
}
