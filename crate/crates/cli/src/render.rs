// Copyright 2026 The parity-loqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Output formats. Numbers are printed with fixed precision so that equal
//! inputs give byte-identical files.

use clap::ValueEnum;
use parity_loqc::strategy::SearchResult;
use parity_loqc::tables::{reference, Table1Row, Table2Row};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub command: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub recycle: bool,
    pub version: &'static str,
}

impl Metadata {
    pub fn new(command: &'static str, seed: u64, trials: u64, recycle: bool) -> Self {
        Metadata { command, seed, trials, recycle, version: env!("CARGO_PKG_VERSION") }
    }
}

/// A table of already formatted cells.
struct Grid {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn f(x: f64) -> String {
    format!("{x:.6}")
}

fn csv(grid: &Grid, meta: &Metadata) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = grid.columns.clone();
    header.extend(["seed", "trials"]);
    w.write_record(&header).expect("writing to memory");
    for row in &grid.rows {
        let mut rec = row.clone();
        rec.extend([meta.seed.to_string(), meta.trials.to_string()]);
        w.write_record(&rec).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn markdown(grid: &Grid, meta: &Metadata) -> String {
    let mut s = format!(
        "<!-- {} seed={} trials={} recycle={} version={} -->\n\n",
        meta.command, meta.seed, meta.trials, meta.recycle, meta.version
    );
    s += &format!("| {} |\n", grid.columns.join(" | "));
    s += &format!("|{}\n", "---|".repeat(grid.columns.len()));
    for row in &grid.rows {
        s += &format!("| {} |\n", row.join(" | "));
    }
    s
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    metadata: &'a Metadata,
    rows: T,
}

fn json<T: Serialize>(rows: T, meta: &Metadata) -> String {
    let mut s = serde_json::to_string_pretty(&Document { metadata: meta, rows }).expect("rows serialize");
    s.push('\n');
    s
}

fn table1_grid(rows: &[Table1Row]) -> Grid {
    Grid {
        columns: vec![
            "m",
            "a_dp",
            "b_mc",
            "c_analytic",
            "c_mc",
            "d_analytic",
            "d_mc",
            "e_mc",
            "b_se",
            "c_se",
            "d_se",
            "e_se",
            "e_exact",
        ],
        rows: rows
            .iter()
            .map(|r| {
                let mut v = vec![r.m.to_string()];
                v.extend(
                    [
                        r.a_dp,
                        r.b_mc,
                        r.c_analytic,
                        r.c_mc,
                        r.d_analytic,
                        r.d_mc,
                        r.e_mc,
                        r.b_se,
                        r.c_se,
                        r.d_se,
                        r.e_se,
                        r.e_exact,
                    ]
                    .map(f),
                );
                v
            })
            .collect(),
    }
}

fn table2_grid(rows: &[Table2Row]) -> Grid {
    Grid {
        columns: vec![
            "n",
            "success",
            "cost_no_recycle",
            "cost_recycle",
            "success_se",
            "cost_no_recycle_se",
            "cost_recycle_se",
            "cost_no_recycle_conditional",
            "cost_recycle_conditional",
            "success_recycle",
        ],
        rows: rows
            .iter()
            .map(|r| {
                let mut v = vec![r.n.to_string()];
                v.extend(
                    [
                        r.success,
                        r.cost_no_recycle,
                        r.cost_recycle,
                        r.success_se,
                        r.cost_no_recycle_se,
                        r.cost_recycle_se,
                        r.cost_no_recycle_conditional,
                        r.cost_recycle_conditional,
                        r.success_recycle,
                    ]
                    .map(f),
                );
                v
            })
            .collect(),
    }
}

/// JSON numbers are rounded the same way as the text formats.
fn rounded<T: Serialize>(rows: &[T]) -> serde_json::Value {
    fn walk(v: serde_json::Value) -> serde_json::Value {
        match v {
            serde_json::Value::Number(n) if n.is_f64() => {
                let x = n.as_f64().expect("checked");
                serde_json::Number::from_f64((x * 1e6).round() / 1e6)
                    .map_or(serde_json::Value::Null, serde_json::Value::Number)
            }
            serde_json::Value::Array(a) => serde_json::Value::Array(a.into_iter().map(walk).collect()),
            serde_json::Value::Object(o) => {
                serde_json::Value::Object(o.into_iter().map(|(k, v)| (k, walk(v))).collect())
            }
            other => other,
        }
    }
    walk(serde_json::to_value(rows).expect("rows serialize"))
}

fn render(grid: Grid, json_rows: serde_json::Value, meta: &Metadata, format: Format) -> String {
    match format {
        Format::Csv => csv(&grid, meta),
        Format::Markdown => markdown(&grid, meta),
        Format::Json => json(json_rows, meta),
    }
}

pub fn table1(rows: &[Table1Row], meta: &Metadata, format: Format) -> String {
    render(table1_grid(rows), rounded(rows), meta, format)
}

pub fn table2(rows: &[Table2Row], meta: &Metadata, format: Format) -> String {
    render(table2_grid(rows), rounded(rows), meta, format)
}

pub fn search(result: &SearchResult, meta: &Metadata, format: Format) -> String {
    let grid = Grid {
        columns: vec!["tree", "size", "cost", "depth", "candidates", "exact"],
        rows: vec![vec![
            result.tree.to_string(),
            result.tree.size().to_string(),
            f(result.cost),
            result.depth.to_string(),
            result.candidates.to_string(),
            result.exact.to_string(),
        ]],
    };
    render(grid, rounded(std::slice::from_ref(result)), meta, format)
}

fn reference_value(values: &[f64], index: usize) -> Option<f64> {
    values.get(index).copied()
}

pub fn table1_summary(rows: &[Table1Row]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            let i = r.m.wrapping_sub(3);
            let p = |v: &[f64]| reference_value(v, i).map_or("-".to_string(), |x| format!("{x}"));
            format!(
                "m={:>2}  a {:>5.0} [{}]  b {:>7.2} [{}]  c {:.4} [{}]  d {:>7.2} [{}]  e {:>7.2} [{}]",
                r.m,
                r.a_dp,
                p(&reference::TABLE1_A),
                r.b_mc,
                p(&reference::TABLE1_B),
                r.c_mc,
                p(&reference::TABLE1_C),
                r.d_mc,
                p(&reference::TABLE1_D),
                r.e_mc,
                p(&reference::TABLE1_E),
            )
        })
        .collect()
}

pub fn table2_summary(rows: &[Table2Row]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            let i = r.n.wrapping_sub(6);
            let p = |v: &[f64]| reference_value(v, i).map_or("-".to_string(), |x| format!("{x}"));
            format!(
                "n={:>2}  success {:.4} [{}]  cost {:>7.2} [{}]  recycled {:>7.2} [{}]",
                r.n,
                r.success,
                p(&reference::TABLE2_SUCCESS),
                r.cost_no_recycle,
                p(&reference::TABLE2_NO_RECYCLE),
                r.cost_recycle,
                p(&reference::TABLE2_RECYCLE),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> Table2Row {
        Table2Row {
            n: 6,
            success: 0.9,
            cost_no_recycle: 180.123456789,
            cost_recycle: 110.0,
            success_se: 0.001,
            cost_no_recycle_se: 1.0,
            cost_recycle_se: 1.0,
            cost_no_recycle_conditional: 170.0,
            cost_recycle_conditional: 100.0,
            success_recycle: 0.9,
        }
    }

    #[test]
    fn csv_has_header_and_provenance() {
        let s = table2(&[row()], &Metadata::new("table2", 7, 100, true), Format::Csv);
        let mut lines = s.lines();
        assert!(lines.next().unwrap().starts_with("n,success,cost_no_recycle,cost_recycle,"));
        let data = lines.next().unwrap();
        assert!(data.starts_with("6,0.900000,180.123457,110.000000,"));
        assert!(data.ends_with(",7,100"));
    }

    #[test]
    fn markdown_and_json() {
        let meta = Metadata::new("table2", 7, 100, true);
        let md = table2(&[row()], &meta, Format::Markdown);
        assert!(md.contains("seed=7 trials=100"));
        assert_eq!(md.lines().filter(|l| l.starts_with('|')).count(), 3);
        let js: serde_json::Value = serde_json::from_str(&table2(&[row()], &meta, Format::Json)).unwrap();
        assert_eq!(js["metadata"]["seed"], 7);
        assert_eq!(js["rows"][0]["cost_no_recycle"], 180.123457);
    }
}
