//! Table, JSON and CSV rendering.
//!
//! Reals are rounded to 12 significant digits in every format and then
//! printed in their shortest form, so repeated renders are byte-identical and
//! a JSON document parses back to exactly the values it shows.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use super::{ScenarioResult, SweepStatistics};
use crate::measures::InformationReport;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Self::Table),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown format `{other}` (expected table, json or csv)")),
        }
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits; `-0` becomes `0`.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

pub fn format_real(x: f64) -> String {
    round_significant(x).to_string()
}

/// Something that can be rendered in all three formats.
pub trait Report: Serialize {
    fn table(&self) -> String;
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

pub fn render_report<R: Report>(report: &R, format: Format) -> String {
    match format {
        Format::Table => report.table(),
        Format::Json => {
            let mut value = serde_json::to_value(report).expect("report serializes");
            round_floats(&mut value);
            let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
            out.push('\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(report.csv_header()).expect("in-memory write");
            for row in report.csv_rows() {
                w.write_record(&row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
        }
    }
}

fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            *value = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Left-aligned columns separated by two spaces.
fn aligned(rows: &[Vec<String>], indent: &str) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::from(indent);
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let pad = widths[c] - cell.chars().count();
                line.push_str(cell);
                line.push_str(&" ".repeat(pad + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn report_cells(label: &str, r: &InformationReport) -> Vec<String> {
    vec![
        label.to_string(),
        format_real(r.capacity_c),
        format_real(r.i_q),
        format_real(r.i_tilde),
        format_real(r.k_q),
        format_real(r.purity),
        format!("{:?}", r.classification),
        r.is_classical.to_string(),
    ]
}

const REPORT_FIELDS: [&str; 7] = ["capacity_c", "i_q", "i_tilde", "k_q", "purity", "classification", "is_classical"];

impl Report for ScenarioResult {
    fn table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "scenario: {}", self.scenario_name).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "seed: {seed}").unwrap();
        }
        if !self.parameters.is_empty() {
            out.push_str("parameters:\n");
            let rows: Vec<Vec<String>> =
                self.parameters.iter().map(|(k, v)| vec![k.clone(), format_real(*v)]).collect();
            out.push_str(&aligned(&rows, "  "));
        }
        if !self.reports.is_empty() {
            out.push_str("reports:\n");
            let mut rows = vec![std::iter::once("label").chain(REPORT_FIELDS).map(String::from).collect()];
            rows.extend(self.reports.iter().map(|r| report_cells(&r.label, &r.report)));
            out.push_str(&aligned(&rows, "  "));
        }
        if !self.derived_values.is_empty() {
            out.push_str("derived values:\n");
            let mut rows: Vec<Vec<String>> =
                vec![["name", "closed_form", "computed", "tolerance", "agrees"].map(String::from).to_vec()];
            rows.extend(self.derived_values.iter().map(|(k, v)| {
                vec![
                    k.clone(),
                    format_real(v.closed_form),
                    format_real(v.computed),
                    format_real(v.tolerance),
                    v.agrees().to_string(),
                ]
            }));
            out.push_str(&aligned(&rows, "  "));
        }
        if !self.notes.is_empty() {
            out.push_str("notes:\n");
            for note in &self.notes {
                writeln!(out, "  - {note}").unwrap();
            }
        }
        out
    }

    fn csv_header(&self) -> Vec<&'static str> {
        vec!["section", "label", "field", "value"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let row = |a: &str, b: &str, c: &str, d: String| vec![a.to_string(), b.to_string(), c.to_string(), d];
        let mut rows = vec![row("scenario", "", "name", self.scenario_name.clone())];
        if let Some(seed) = self.seed {
            rows.push(row("scenario", "", "seed", seed.to_string()));
        }
        for (k, v) in &self.parameters {
            rows.push(row("parameter", "", k, format_real(*v)));
        }
        for r in &self.reports {
            let cells = report_cells(&r.label, &r.report);
            for (field, value) in REPORT_FIELDS.iter().zip(cells.into_iter().skip(1)) {
                rows.push(row("report", &r.label, field, value));
            }
        }
        for (k, v) in &self.derived_values {
            rows.push(row("derived", k, "closed_form", format_real(v.closed_form)));
            rows.push(row("derived", k, "computed", format_real(v.computed)));
            rows.push(row("derived", k, "tolerance", format_real(v.tolerance)));
            rows.push(row("derived", k, "agrees", v.agrees().to_string()));
        }
        for note in &self.notes {
            rows.push(row("note", "", "text", note.clone()));
        }
        rows
    }
}

impl SweepStatistics {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("a1_sq", format_real(self.a1_sq)),
            ("spread", format_real(self.spread)),
            ("n_members", self.n_members.to_string()),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
            ("mean_i_q", format_real(self.mean_i_q)),
            ("std_i_q", format_real(self.std_i_q)),
            ("mean_k_q", format_real(self.mean_k_q)),
            ("std_k_q", format_real(self.std_k_q)),
            ("theoretical_mean_excess", format_real(self.theoretical_mean_excess)),
        ]
    }
}

impl Report for SweepStatistics {
    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self.fields().into_iter().map(|(k, v)| vec![k.to_string(), v]).collect();
        format!("decoherence sweep\n{}", aligned(&rows, "  "))
    }

    fn csv_header(&self) -> Vec<&'static str> {
        vec!["statistic", "value"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.fields().into_iter().map(|(k, v)| vec![k.to_string(), v]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{decoherence_sweep, run_scenario};
    use std::collections::BTreeMap;

    #[test]
    fn rounding() {
        assert_eq!(round_significant(2.0000000000000004), 2.0);
        assert_eq!(round_significant(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(round_significant(-1e-300 * 1e-300), 0.0);
        assert_eq!(format_real(0.1 + 0.2), "0.3");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_real(2.625), "2.625");
        assert_eq!(format_real(f64::NAN), "NaN");
    }

    #[test]
    fn format_names() {
        assert_eq!("json".parse::<Format>(), Ok(Format::Json));
        assert!("xml".parse::<Format>().is_err());
    }

    #[test]
    fn epr_json_contains_exact_values() {
        let r = run_scenario("epr", &BTreeMap::new(), None).unwrap();
        let json = render_report(&r, Format::Json);
        assert!(json.contains("\"i_q\": 2.0"), "{json}");
        assert!(json.contains("\"k_q\": 1.0"), "{json}");
        let back: ScenarioResult = serde_json::from_str(&json).unwrap();
        assert_eq!(render_report(&back, Format::Json), json);
        assert_eq!(back.scenario_name, "epr");
        assert_eq!(back.reports.len(), r.reports.len());
    }

    #[test]
    fn rendering_is_repeatable() {
        let r = run_scenario("interferometer", &BTreeMap::from([("alpha_sq".into(), 0.3)]), None).unwrap();
        for f in [Format::Table, Format::Json, Format::Csv] {
            assert_eq!(render_report(&r, f), render_report(&r, f));
        }
    }

    #[test]
    fn sweep_csv_has_header_then_one_row_per_statistic() {
        let s = decoherence_sweep(0.5, 10, 4, 1, 1.0).unwrap();
        let csv = render_report(&s, Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "statistic,value");
        assert_eq!(lines.len(), 11);
        assert!(lines.iter().any(|l| l.starts_with("mean_i_q,")));
        let json = render_report(&s, Format::Json);
        let back: SweepStatistics = serde_json::from_str(&json).unwrap();
        assert_eq!(back.seed, 1);
        assert_eq!(back.n_members, 10);
    }

    #[test]
    fn csv_quotes_notes_with_commas() {
        let r = run_scenario("two-photon-ensemble", &BTreeMap::new(), None).unwrap();
        let csv = render_report(&r, Format::Csv);
        assert!(csv.starts_with("section,label,field,value\n"));
        assert!(csv.contains("note,,text,\""));
    }
}
