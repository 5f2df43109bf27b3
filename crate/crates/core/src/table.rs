//! Plain-text tables: rendering, parsing back, and cell-level diffs.
//!
//! A table renders as a `## name` line, a header line and one line per row,
//! with columns padded to a common width. Cells never contain whitespace, so
//! the rendering can be parsed back by splitting on it.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<String>)>,
}

impl Table {
    pub fn new(name: impl Into<String>, corner: impl Into<String>, columns: Vec<String>) -> Self {
        Table {
            name: name.into(),
            corner: corner.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push((label.into(), cells));
    }

    pub fn row(&self, label: &str) -> Option<&[String]> {
        self.rows.iter().find(|(l, _)| l == label).map(|(_, c)| c.as_slice())
    }

    pub fn cell(&self, row: &str, column: &str) -> Option<&str> {
        let k = self.columns.iter().position(|c| c == column)?;
        self.row(row).map(|cells| cells[k].as_str())
    }

    pub fn render(&self) -> String {
        let width = |s: &str| s.chars().count();
        let mut widths = vec![width(&self.corner)];
        widths.extend(self.columns.iter().map(|c| width(c)));
        for (label, cells) in &self.rows {
            widths[0] = widths[0].max(width(label));
            for (k, c) in cells.iter().enumerate() {
                widths[k + 1] = widths[k + 1].max(width(c));
            }
        }
        let mut out = format!("## {}\n", self.name);
        let mut line = |cells: Vec<&str>| {
            let mut text = String::new();
            for (k, c) in cells.iter().enumerate() {
                if k + 1 == cells.len() {
                    text.push_str(c);
                } else {
                    let _ = write!(text, "{c}{} ", " ".repeat(widths[k] - width(c)));
                }
            }
            out.push_str(text.trim_end());
            out.push('\n');
        };
        line(std::iter::once(self.corner.as_str()).chain(self.columns.iter().map(String::as_str)).collect());
        for (label, cells) in &self.rows {
            line(std::iter::once(label.as_str()).chain(cells.iter().map(String::as_str)).collect());
        }
        out
    }
}

/// A set of tables rendered one after another, separated by blank lines.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TableArtifact {
    pub tables: Vec<Table>,
}

impl TableArtifact {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn render(&self) -> String {
        self.tables.iter().map(Table::render).collect::<Vec<_>>().join("\n")
    }

    /// Parses a rendering back; lines outside tables and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<TableArtifact, String> {
        let mut tables: Vec<Table> = Vec::new();
        let mut header_pending = false;
        for (n, line) in text.lines().enumerate() {
            if let Some(name) = line.strip_prefix("## ") {
                tables.push(Table::new(name.trim(), "", Vec::new()));
                header_pending = true;
                continue;
            }
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(table) = tables.last_mut() else {
                return Err(format!("line {}: text before the first table", n + 1));
            };
            let mut fields = line.split_whitespace().map(str::to_string);
            let first = fields.next().expect("non-empty line");
            let rest: Vec<String> = fields.collect();
            if header_pending {
                table.corner = first;
                table.columns = rest;
                header_pending = false;
            } else if rest.len() != table.columns.len() {
                return Err(format!(
                    "line {}: row `{first}` has {} cells, expected {}",
                    n + 1,
                    rest.len(),
                    table.columns.len()
                ));
            } else {
                table.rows.push((first, rest));
            }
        }
        Ok(TableArtifact { tables })
    }
}

/// Differences between an expected and a computed artifact, one line each.
pub fn diff(expected: &TableArtifact, computed: &TableArtifact) -> Vec<String> {
    let mut out = Vec::new();
    for e in &expected.tables {
        let Some(c) = computed.table(&e.name) else {
            out.push(format!("{}: table missing from the computed output", e.name));
            continue;
        };
        for col in &e.columns {
            if !c.columns.contains(col) {
                out.push(format!("{}: column {col} missing from the computed output", e.name));
            }
        }
        for col in &c.columns {
            if !e.columns.contains(col) {
                out.push(format!("{}: computed column {col} is not in the expected table", e.name));
            }
        }
        for (label, cells) in &e.rows {
            if c.row(label).is_none() {
                out.push(format!("{}: row {label} missing from the computed output", e.name));
                continue;
            }
            for (col, want) in e.columns.iter().zip(cells) {
                if let Some(got) = c.cell(label, col) {
                    if got != want {
                        out.push(format!("{}[{label}][{col}]: expected {want}, computed {got}", e.name));
                    }
                }
            }
        }
        for (label, _) in &c.rows {
            if e.row(label).is_none() {
                out.push(format!("{}: computed row {label} is not in the expected table", e.name));
            }
        }
    }
    for c in &computed.tables {
        if expected.table(&c.name).is_none() {
            out.push(format!("{}: computed table is not in the expected output", c.name));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TableArtifact {
        let mut t = Table::new("eta", "x", vec!["f2".into(), "f3".into()]);
        t.push("η(b)", vec!["[(b,c,0)]".into(), "[(c,b,0)]".into()]);
        t.push("η(0)", vec!["[(0,0,0)]".into(), "[(0,0,0)]".into()]);
        TableArtifact { tables: vec![t] }
    }

    #[test]
    fn render_parse_round_trip() {
        let a = sample();
        let text = a.render();
        assert_eq!(TableArtifact::parse(&text).unwrap(), a);
        assert!(text.starts_with("## eta\nx    f2        f3\n"));
    }

    #[test]
    fn diff_reports_cells_and_rows() {
        let a = sample();
        let mut b = sample();
        b.tables[0].rows[0].1[0] = "[(c,b,0)]".into();
        b.tables[0].rows.pop();
        let d = diff(&a, &b);
        assert_eq!(
            d,
            vec![
                "eta[η(b)][f2]: expected [(b,c,0)], computed [(c,b,0)]".to_string(),
                "eta: row η(0) missing from the computed output".to_string(),
            ]
        );
        assert!(diff(&a, &a).is_empty());
    }
}
