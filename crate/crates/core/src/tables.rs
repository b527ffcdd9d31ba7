//! Grids of `v_k(m,n)` in the layout of the reference tables: fixed `m`
//! (rows `k`, columns `n`), or the top index `k = m+n-1` (rows `m`, columns `n`).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::volumes::{VkRequest, VolumeEngine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    M1,
    M2,
    M3,
    Kmax,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [TableKind::M1, TableKind::M2, TableKind::M3, TableKind::Kmax];

    pub fn name(&self) -> &'static str {
        match self {
            TableKind::M1 => "m1",
            TableKind::M2 => "m2",
            TableKind::M3 => "m3",
            TableKind::Kmax => "kmax",
        }
    }

    /// Largest `n` of the reference tables.
    pub fn default_max_n(&self) -> usize {
        match self {
            TableKind::Kmax => 10,
            _ => 9,
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableKind::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown table {s:?}")))
    }
}

/// A generated table. `cells[i][j]` belongs to `rows[i]`, `cols[j]`;
/// `None` marks a structural zero.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub kind: TableKind,
    pub row_label: &'static str,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl Table {
    /// Cell for row value `row` and column value `col`.
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let i = self.rows.iter().position(|&r| r == row)?;
        let j = self.cols.iter().position(|&c| c == col)?;
        self.cells[i][j]
    }

    /// CSV with 4 significant figures and blank structural zeros.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\\n", self.row_label);
        for c in &self.cols {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
        for (row, cells) in self.rows.iter().zip(&self.cells) {
            out.push_str(&row.to_string());
            for cell in cells {
                out.push(',');
                if let Some(v) = cell {
                    out.push_str(&format_sig4(*v));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Generates a reference table up to column `max_n`.
pub fn generate(engine: &VolumeEngine<'_>, kind: TableKind, max_n: usize, tol: f64) -> Result<Table> {
    let (row_label, rows, cols): (_, Vec<usize>, Vec<usize>) = match kind {
        TableKind::M1 | TableKind::M2 | TableKind::M3 => {
            let m = match kind {
                TableKind::M1 => 1,
                TableKind::M2 => 2,
                _ => 3,
            };
            if max_n < m {
                return Err(Error::InvalidArgument(format!(
                    "table {kind} needs max_n >= {m}, got {max_n}"
                )));
            }
            ("k", (0..m + max_n).collect(), (m..=max_n).collect())
        }
        TableKind::Kmax => {
            if max_n < 2 {
                return Err(Error::InvalidArgument(format!(
                    "table kmax needs max_n >= 2, got {max_n}"
                )));
            }
            ("m", (1..=max_n).collect(), (2..=max_n).collect())
        }
    };
    let mut cells = Vec::with_capacity(rows.len());
    for &row in &rows {
        let mut line = Vec::with_capacity(cols.len());
        for &n in &cols {
            let (k, m) = match kind {
                TableKind::M1 => (row, 1),
                TableKind::M2 => (row, 2),
                TableKind::M3 => (row, 3),
                TableKind::Kmax => (row + n - 1, row),
            };
            let present = m <= n && k < m + n;
            line.push(if present {
                Some(engine.vk(VkRequest::new(k, m, n).tol(tol))?)
            } else {
                None
            });
        }
        cells.push(line);
    }
    Ok(Table {
        kind,
        row_label,
        rows,
        cols,
        cells,
    })
}

/// Four significant figures without trailing zeros; scientific notation
/// below `1e-3`.
pub fn format_sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < 1e-3 {
        let s = format!("{x:.3e}");
        let (mantissa, exp) = s.split_once('e').expect("scientific format");
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new leading digit, e.g. 0.99996 -> 1.0000
    let s = if s.trim_start_matches('-').starts_with("1") && x.abs() < 1.0 && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    };
    trim_zeros(&s).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
