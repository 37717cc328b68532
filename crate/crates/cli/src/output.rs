use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

/// Records with a fixed header; every field is already rendered as a string.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Replaces the space-joined rows in plain mode.
    pub plain: Option<Vec<String>>,
    /// Closing line: printed to stdout in plain mode, stderr otherwise.
    pub summary: Option<String>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Plain => {
                match &self.plain {
                    Some(lines) => {
                        for line in lines {
                            writeln!(out, "{line}")?;
                        }
                    }
                    None => {
                        for row in &self.rows {
                            writeln!(out, "{}", row.join(" "))?;
                        }
                    }
                }
                if let Some(s) = &self.summary {
                    writeln!(out, "{s}")?;
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.header).map_err(csv_io)?;
                for row in &self.rows {
                    w.write_record(row).map_err(csv_io)?;
                }
                w.flush()?;
                drop(w);
                self.summary_to_stderr();
            }
            Format::Json => {
                for row in &self.rows {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                        .collect();
                    writeln!(out, "{}", Value::Object(obj))?;
                }
                self.summary_to_stderr();
            }
        }
        Ok(())
    }

    fn summary_to_stderr(&self) {
        if let Some(s) = &self.summary {
            eprintln!("{s}");
        }
    }
}

fn csv_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}
