//! CSV schemas for radial profiles and polar fields.
//!
//! Radial profile: header `r,re_u1,im_u1,re_u2,im_u2`, one node per row,
//! `r` strictly increasing. Polar field: header
//! `r,theta,re_psi1,im_psi1,re_psi2,im_psi2`, row-major over the tensor
//! grid with `theta` fastest. Numbers are written in shortest
//! round-trip decimal form.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::angular::AngularGrid;
use crate::error::{Error, Result};
use crate::numerics::LogGrid;
use crate::partial_wave::PolarField;
use crate::radial::RadialSample;

pub const RADIAL_HEADER: &str = "r,re_u1,im_u1,re_u2,im_u2";
pub const FIELD_HEADER: &str = "r,theta,re_psi1,im_psi1,re_psi2,im_psi2";

pub fn write_radial(out: &mut dyn Write, sample: &RadialSample) -> Result<()> {
    writeln!(out, "{RADIAL_HEADER}")?;
    for (&r, v) in sample.grid().nodes().iter().zip(sample.values()) {
        writeln!(out, "{},{},{},{},{}", r, v[0].re, v[0].im, v[1].re, v[1].im)?;
    }
    Ok(())
}

pub fn write_field(out: &mut dyn Write, field: &PolarField) -> Result<()> {
    writeln!(out, "{FIELD_HEADER}")?;
    for (ir, &r) in field.r_grid().nodes().iter().enumerate() {
        for (it, &theta) in field.theta_grid().nodes().iter().enumerate() {
            let v = field.at(ir, it);
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r, theta, v[0].re, v[0].im, v[1].re, v[1].im
            )?;
        }
    }
    Ok(())
}

fn parse_float(token: &str, row: usize, column: usize) -> Result<f64> {
    token.trim().parse::<f64>().map_err(|_| Error::Csv {
        row,
        msg: format!("column {column}: expected a number, got {token:?}"),
    })
}

fn split_row(line: &str, expected: usize, row: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        return Err(Error::Csv {
            row,
            msg: format!("expected {expected} columns, got {}", fields.len()),
        });
    }
    Ok(fields)
}

/// Read a radial profile. The nodes must be strictly increasing and
/// geometrically spaced (log-uniform), since every consumer differentiates
/// on that grid.
pub fn read_radial(input: &mut dyn BufRead) -> Result<RadialSample> {
    let mut lines = input.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::Csv { row: 1, msg: "empty file".into() });
    };
    let header = header?;
    if header.trim() != RADIAL_HEADER {
        return Err(Error::Csv {
            row: 1,
            msg: format!("expected header {RADIAL_HEADER:?}, got {:?}", header.trim()),
        });
    }
    let mut rs = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in lines {
        let row = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f = split_row(&line, 5, row)?;
        let r = parse_float(f[0], row, 1)?;
        if let Some(&prev) = rs.last() {
            if r <= prev {
                return Err(Error::Csv {
                    row,
                    msg: format!("radii must be strictly increasing, got {r} after {prev}"),
                });
            }
        } else if r <= 0.0 {
            return Err(Error::Csv { row, msg: format!("radii must be positive, got {r}") });
        }
        rs.push(r);
        values.push([
            Complex64::new(parse_float(f[1], row, 2)?, parse_float(f[2], row, 3)?),
            Complex64::new(parse_float(f[3], row, 4)?, parse_float(f[4], row, 5)?),
        ]);
    }
    let grid = grid_from_radii(&rs)?;
    RadialSample::new(grid, values)
}

/// Read a polar field. The row-major tensor layout is validated: every
/// radius block must repeat the same strictly increasing theta sequence.
pub fn read_field(input: &mut dyn BufRead) -> Result<PolarField> {
    let mut lines = input.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::Csv { row: 1, msg: "empty file".into() });
    };
    let header = header?;
    if header.trim() != FIELD_HEADER {
        return Err(Error::Csv {
            row: 1,
            msg: format!("expected header {FIELD_HEADER:?}, got {:?}", header.trim()),
        });
    }

    let mut rows: Vec<(f64, f64, [Complex64; 2])> = Vec::new();
    for (idx, line) in lines {
        let row = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f = split_row(&line, 6, row)?;
        let r = parse_float(f[0], row, 1)?;
        let theta = parse_float(f[1], row, 2)?;
        let v = [
            Complex64::new(parse_float(f[2], row, 3)?, parse_float(f[3], row, 4)?),
            Complex64::new(parse_float(f[4], row, 5)?, parse_float(f[5], row, 6)?),
        ];
        rows.push((r, theta, v));
    }
    if rows.is_empty() {
        return Err(Error::Csv { row: 2, msg: "no data rows".into() });
    }

    // Theta nodes from the first radius block.
    let r0 = rows[0].0;
    let mut thetas = Vec::new();
    for (r, theta, _) in &rows {
        if *r != r0 {
            break;
        }
        thetas.push(*theta);
    }
    let nt = thetas.len();
    if nt < 2 {
        return Err(Error::Csv { row: 2, msg: "need at least two theta nodes per radius".into() });
    }
    for w in thetas.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Csv {
                row: 2,
                msg: format!("theta must be strictly increasing within a block, got {} after {}", w[1], w[0]),
            });
        }
    }
    if rows.len() % nt != 0 {
        return Err(Error::Csv {
            row: rows.len() + 1,
            msg: format!("{} rows are not a whole number of {nt}-row radius blocks", rows.len()),
        });
    }

    let nr = rows.len() / nt;
    let mut rs = Vec::with_capacity(nr);
    let mut values = Vec::with_capacity(rows.len());
    for ir in 0..nr {
        let block = &rows[ir * nt..(ir + 1) * nt];
        let r = block[0].0;
        if let Some(&prev) = rs.last() {
            if r <= prev {
                return Err(Error::Csv {
                    row: ir * nt + 2,
                    msg: format!("radii must be strictly increasing, got {r} after {prev}"),
                });
            }
        }
        for (j, (rb, theta, v)) in block.iter().enumerate() {
            let row = ir * nt + j + 2;
            if *rb != r {
                return Err(Error::Csv {
                    row,
                    msg: format!("radius changed inside a theta block: {rb} vs {r}"),
                });
            }
            if (*theta - thetas[j]).abs() > 1e-12 * thetas[nt - 1].abs().max(1.0) {
                return Err(Error::Csv {
                    row,
                    msg: format!("theta grid not a tensor product: {theta} vs {}", thetas[j]),
                });
            }
            values.push(*v);
        }
        rs.push(r);
    }

    let r_grid = grid_from_radii(&rs)?;
    let theta_grid = angular_grid_from_nodes(&thetas)?;
    PolarField::new(r_grid, theta_grid, values)
}

fn grid_from_radii(rs: &[f64]) -> Result<LogGrid> {
    if rs.len() < 16 {
        return Err(Error::Csv {
            row: rs.len() + 1,
            msg: format!("need at least 16 radial nodes, got {}", rs.len()),
        });
    }
    let grid = LogGrid::new(rs[0], rs[rs.len() - 1], rs.len()).map_err(|e| Error::Csv {
        row: 2,
        msg: format!("invalid radial range: {e}"),
    })?;
    for (i, (&have, &want)) in rs.iter().zip(grid.nodes()).enumerate() {
        if (have - want).abs() > 1e-9 * want {
            return Err(Error::Csv {
                row: i + 2,
                msg: format!(
                    "radial nodes must be geometrically spaced; node {i} is {have}, expected {want}"
                ),
            });
        }
    }
    Ok(grid)
}

fn angular_grid_from_nodes(thetas: &[f64]) -> Result<AngularGrid> {
    let first = thetas[0];
    let last = thetas[thetas.len() - 1];
    if first.abs() > 1e-12 {
        return Err(Error::Csv {
            row: 2,
            msg: format!("theta grid must start at 0, got {first}"),
        });
    }
    let grid = AngularGrid::uniform(last, thetas.len()).map_err(|e| Error::Csv {
        row: 2,
        msg: format!("invalid angular range: {e}"),
    })?;
    for (i, (&have, &want)) in thetas.iter().zip(grid.nodes()).enumerate() {
        if (have - want).abs() > 1e-9 * last.max(1.0) {
            return Err(Error::Csv {
                row: i + 2,
                msg: format!("theta nodes must be uniform; node {i} is {have}, expected {want}"),
            });
        }
    }
    Ok(grid)
}
