use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// One spectrum entry as emitted; the value keeps full working precision.
#[derive(Clone, Debug, Serialize)]
pub struct EntryOut {
    pub value: String,
    pub k: u32,
    pub branch_or_family: String,
    pub multiplicity: u64,
    pub provenance: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumDoc {
    pub problem: &'static str,
    pub domain: serde_json::Value,
    pub precision_digits: u32,
    pub entries: Vec<EntryOut>,
}

/// A titled table of measured quantities with an overall verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub title: String,
    pub passed: bool,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Report {
            title: title.into(),
            passed: true,
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn csv_text<I, R>(header: &[String], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Whitespace-aligned columns; the header line starts with `#`.
fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(String::len).collect();
    width[0] += 2;
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut head = header.to_vec();
    head[0] = format!("# {}", head[0]);
    let mut out = line(head);
    for r in rows {
        out += &line(r.clone());
    }
    out
}

pub fn render_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("serializable") + "\n",
        Format::Csv => csv_text(&r.columns, r.rows.iter().cloned()),
        Format::Table => {
            let mut out = format!("# {}\n", r.title);
            for n in &r.notes {
                out += &format!("# {n}\n");
            }
            out += &aligned(&r.columns, &r.rows);
            out += &format!("# result: {}\n", if r.passed { "pass" } else { "fail" });
            out
        }
    }
}

pub fn render_spectrum(doc: &SpectrumDoc, format: Format) -> String {
    let header: Vec<String> = ["value", "k", "branch_or_family", "multiplicity", "provenance"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = doc
        .entries
        .iter()
        .map(|e| {
            vec![
                e.value.clone(),
                e.k.to_string(),
                e.branch_or_family.clone(),
                e.multiplicity.to_string(),
                e.provenance.to_string(),
            ]
        })
        .collect();
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
        Format::Csv => csv_text(&header, rows),
        Format::Table => {
            let domain = match &doc.domain {
                serde_json::Value::Object(m) => m
                    .iter()
                    .map(|(k, v)| format!("{k}={}", v.as_str().map_or_else(|| v.to_string(), str::to_string)))
                    .collect::<Vec<_>>()
                    .join(" "),
                v => v.to_string(),
            };
            format!(
                "# {} {domain} ({} digits)\n{}",
                doc.problem,
                doc.precision_digits,
                aligned(&header, &rows)
            )
        }
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
