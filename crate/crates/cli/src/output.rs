//! CSV and gnuplot output.

use std::fmt::Write;

/// Shortest decimal that parses back to the same `f64`; exponent form
/// outside `[1e-4, 1e16)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// CSV text with `#` metadata lines, a header row, and data rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            writeln!(s, "# {k} = {v}").unwrap();
        }
        writeln!(s, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map(format_float).unwrap_or_default())
                .collect();
            writeln!(s, "{}", cells.join(",")).unwrap();
        }
        s
    }
}

/// A gnuplot script plotting every column of `csv_path` against the first
/// on a logarithmic scale.
pub fn gnuplot_script(table: &Table, csv_path: &str) -> String {
    let mut s = String::new();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set key autotitle columnhead outside").unwrap();
    writeln!(s, "set logscale y").unwrap();
    writeln!(s, "set xlabel '{}'", table.columns[0]).unwrap();
    let plots: Vec<String> = (2..=table.columns.len())
        .map(|k| format!("'{csv_path}' using 1:{k} with linespoints"))
        .collect();
    writeln!(s, "plot {}", plots.join(", \\\n     ")).unwrap();
    s
}
