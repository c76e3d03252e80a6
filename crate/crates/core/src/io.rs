//! Flat text serialization: fields as CSV with cell centers, grids as JSON.
//!
//! Field values are written with Rust's shortest round-trip formatting, so a
//! read-back reproduces them exactly; report numbers elsewhere use the fixed
//! 15-significant-digit form from `fmt_sig15`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::field::{ScalarField, WeightField};
use crate::grid::Grid;

/// 15 significant digits, scientific; used for every report number.
pub fn fmt_sig15(x: f64) -> String {
    format!("{:.14e}", x)
}

/// CSV with header `index,x1,value` (1D) or `index,x1,x2,value` (2D).
pub fn write_field_csv<W: Write>(out: &mut W, field: &ScalarField) -> Result<()> {
    let grid = field.grid();
    if grid.dimension() == 1 {
        writeln!(out, "index,x1,value")?;
    } else {
        writeln!(out, "index,x1,x2,value")?;
    }
    for (idx, &v) in field.values().iter().enumerate() {
        let c = grid.center(idx);
        if grid.dimension() == 1 {
            writeln!(out, "{},{},{}", idx, c[0], v)?;
        } else {
            writeln!(out, "{},{},{},{}", idx, c[0], c[1], v)?;
        }
    }
    Ok(())
}

/// Reads a field written by `write_field_csv` back onto the given grid.
pub fn read_field_csv<R: BufRead>(grid: Grid, input: R) -> Result<ScalarField> {
    let mut values = vec![0.0; grid.cell_count()];
    let mut seen = vec![false; grid.cell_count()];
    let want_cols = if grid.dimension() == 1 { 3 } else { 4 };
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if lineno == 0 {
            continue; // header
        }
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != want_cols {
            return Err(Error::CsvParse {
                line: lineno + 1,
                msg: format!("expected {want_cols} columns, got {}", parts.len()),
            });
        }
        let idx: usize = parts[0].trim().parse().map_err(|e| Error::CsvParse {
            line: lineno + 1,
            msg: format!("bad index: {e}"),
        })?;
        if idx >= grid.cell_count() {
            return Err(Error::CsvParse {
                line: lineno + 1,
                msg: format!("index {idx} out of range"),
            });
        }
        let value: f64 = parts[want_cols - 1]
            .trim()
            .parse()
            .map_err(|e| Error::CsvParse {
                line: lineno + 1,
                msg: format!("bad value: {e}"),
            })?;
        values[idx] = value;
        seen[idx] = true;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::CsvParse {
            line: 0,
            msg: format!("cell {missing} missing"),
        });
    }
    ScalarField::new(grid, values)
}

pub fn write_weight_csv<W: Write>(out: &mut W, weight: &WeightField) -> Result<()> {
    write_field_csv(out, weight.as_scalar())
}

pub fn read_weight_csv<R: BufRead>(grid: Grid, input: R) -> Result<WeightField> {
    let f = read_field_csv(grid, input)?;
    WeightField::new(grid, f.values().to_vec())
}

/// Grid as JSON {"n": .., "R": .., "N": ..}.
pub fn grid_to_json(grid: &Grid) -> String {
    format!(
        "{{\"n\": {}, \"R\": {}, \"N\": {}}}",
        grid.dimension(),
        grid.half_width(),
        grid.cells_per_axis()
    )
}
