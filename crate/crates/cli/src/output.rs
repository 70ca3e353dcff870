//! One output document per command, rendered in the requested format.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Csv,
    Plain,
}

/// JSON is canonical; the other renderings are views of the same data.
pub struct Document {
    pub json: Value,
    pub plain: String,
    pub latex: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Document {
    /// A single-row document whose CSV columns are the given fields.
    pub fn record(json: Value, plain: String, latex: String, fields: &[(&str, String)]) -> Self {
        Document {
            json,
            plain,
            latex,
            header: fields.iter().map(|(k, _)| k.to_string()).collect(),
            rows: vec![fields.iter().map(|(_, v)| v.clone()).collect()],
        }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
            Format::Plain => writeln!(out, "{}", self.plain),
            Format::Latex => writeln!(out, "{}", self.latex),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }
}
