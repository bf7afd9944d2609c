use std::io::Write;

use crate::commands::{CliError, Report};
use crate::{Format, Global};

/// Writes the report to `--out` or stdout in the requested format.
pub fn emit(report: &Report, g: &Global) -> Result<(), CliError> {
    let text = match g.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("json values serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let (header, rows) = report.table.as_ref().ok_or_else(|| {
                CliError::Usage("this command has no csv form; use --format json".into())
            })?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    match &g.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
        }
        None => std::io::stdout()
            .write_all(&text)
            .map_err(|e| CliError::Io("stdout".into(), e)),
    }
}
