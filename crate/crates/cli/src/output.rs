use std::fs::File;
use std::io::{self, BufWriter, Write};

use pqft_core::export::CsvTable;
use serde_json::Value;

use crate::{Failure, Format, OutputArgs};

fn io_failure(e: io::Error) -> Failure {
    Failure::Invalid(format!("cannot write output: {e}"))
}

fn sink(out: &OutputArgs) -> Result<Box<dyn Write>, Failure> {
    Ok(match &out.out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                Failure::Invalid(format!("{}: {e}", path.display()))
            })?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json(out: &OutputArgs, value: &Value) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Invalid(e.to_string()))?;
    writeln!(w).map_err(io_failure)?;
    w.flush().map_err(io_failure)
}

/// Writes `table` as CSV, or `json` when JSON was requested.
pub fn write_table(
    out: &OutputArgs,
    table: &CsvTable,
    json: impl FnOnce() -> Value,
) -> Result<(), Failure> {
    match out.format {
        Format::Csv => {
            let mut w = sink(out)?;
            table.write_csv(&mut w)?;
            w.flush().map_err(io_failure)
        }
        Format::Json => write_json(out, &json()),
    }
}
