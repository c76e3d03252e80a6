//! Report serialization: one CSV per check, a JSON summary, and plot-ready
//! sweep tables.

use std::io::Write;

use mfold_core::io::fmt_sig15;
use mfold_core::{Error, Result};

use crate::checks::counterexample::SweepRow;
use crate::report::{CheckSummary, VerificationReport, REPORT_CSV_HEADER};

pub fn write_reports_csv<W: Write>(out: &mut W, reports: &[VerificationReport]) -> Result<()> {
    writeln!(out, "{REPORT_CSV_HEADER}")?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

pub fn write_summary_json<W: Write>(out: &mut W, summary: &CheckSummary) -> Result<()> {
    let json = serde_json::to_string_pretty(summary)
        .map_err(|e| Error::InvalidParameter(format!("summary serialization: {e}")))?;
    writeln!(out, "{json}")?;
    Ok(())
}

/// CSV `x,lhs,rhs,ratio` with the ratio recomputed at write time. Refuses an
/// empty table.
pub fn write_plotdata<W: Write>(out: &mut W, rows: &[SweepRow]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter(
            "refusing to write an empty sweep table".into(),
        ));
    }
    writeln!(out, "x,lhs,rhs,ratio")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_sig15(row.x),
            fmt_sig15(row.lhs),
            fmt_sig15(row.rhs),
            fmt_sig15(row.lhs / row.rhs)
        )?;
    }
    Ok(())
}
