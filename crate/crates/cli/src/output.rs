//! Report writers: JSON and CSV with floats at 17 significant digits.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::config::Format;
use crate::CliError;

/// Compact JSON with every float written as `{:.16e}`; non-finite values become `null`.
struct RoundTrip;

impl Formatter for RoundTrip {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            write!(w, "{v:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTrip);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Runtime(format!("serializing report: {e}")))?;
    buf.push(b'\n');
    Ok(buf)
}

/// CSV table from a header and rows of already formatted cells.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Runtime(format!("writing CSV: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Runtime(format!("writing CSV: {e}")))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if path == Path::new("-") {
        io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Runtime(format!("stdout: {e}")))
    } else {
        std::fs::write(path, bytes)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    }
}

/// A report that can be rendered either as a JSON document or as a flat table.
pub struct Report<'a, T: Serialize> {
    pub json: &'a T,
    pub header: &'a [&'a str],
    pub rows: Vec<Vec<String>>,
}

impl<T: Serialize> Report<'_, T> {
    pub fn write(&self, out: Option<&Path>, format: Format) -> Result<(), CliError> {
        let Some(path) = out else { return Ok(()) };
        let bytes = match format {
            Format::Json => to_json(self.json)?,
            Format::Csv => to_csv(self.header, &self.rows)?,
        };
        write_bytes(path, &bytes)
    }
}
