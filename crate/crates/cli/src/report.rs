//! Report assembly and emission. Every subcommand produces one [`Report`]:
//! a single JSON document plus a uniform row view shared by the CSV and
//! table formats. Emission is deterministic: JSON maps are ordered, rows
//! are assembled after the library's merge barrier.

use std::fmt::Write as _;

use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A column of the row view. `truncate` marks cells holding value lists,
/// which the table format shortens past 16 entries.
pub struct Column {
    pub name: &'static str,
    pub truncate: bool,
}

impl Column {
    pub fn plain(name: &'static str) -> Column {
        Column {
            name,
            truncate: false,
        }
    }

    pub fn list(name: &'static str) -> Column {
        Column {
            name,
            truncate: true,
        }
    }
}

pub struct Report {
    pub json: Value,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
}

/// Separator for list-valued cells; chosen so CSV needs no quoting for
/// common content.
pub const LIST_SEP: &str = " ";
const TABLE_LIST_LIMIT: usize = 16;

impl Report {
    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json).expect("report JSON serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.emit_csv(),
            Format::Table => self.emit_table(),
        }
    }

    fn emit_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| c.name.to_string()).collect();
        push_csv_row(&mut out, &header);
        for row in &self.rows {
            push_csv_row(&mut out, row);
        }
        out
    }

    fn emit_table(&self) -> String {
        let display: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.columns)
                    .map(|(cell, col)| {
                        if col.truncate {
                            truncate_list(cell)
                        } else {
                            cell.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.name.len()).collect();
        for row in &display {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        for (i, col) in self.columns.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{:<w$}", col.name, w = widths[i]);
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
        for (i, w) in widths.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&"-".repeat(*w));
        }
        out.push('\n');
        for row in &display {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                let _ = write!(out, "{:<w$}", cell, w = widths[i]);
            }
            while out.ends_with(' ') {
                out.pop();
            }
            out.push('\n');
        }
        out
    }
}

/// RFC 4180: fields holding commas, quotes or line breaks are quoted, with
/// inner quotes doubled; rows end in CRLF.
fn push_csv_row(out: &mut String, cells: &[String]) {
    for (i, cell) in cells.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        if cell.contains([',', '"', '\n', '\r']) {
            out.push('"');
            out.push_str(&cell.replace('"', "\"\""));
            out.push('"');
        } else {
            out.push_str(cell);
        }
    }
    out.push_str("\r\n");
}

fn truncate_list(cell: &str) -> String {
    let items: Vec<&str> = cell.split(LIST_SEP).collect();
    if items.len() <= TABLE_LIST_LIMIT {
        return cell.to_string();
    }
    let mut s = items[..TABLE_LIST_LIMIT].join(LIST_SEP);
    let _ = write!(s, " ... ({} total)", items.len());
    s
}
