//! CSV import/export for tables, chains, scores, and datasets.
//!
//! Numbers are written with 17 significant digits so a round trip
//! through text reproduces the f64 bit patterns. Readers accept
//! exactly what the writers produce.

use crate::error::{Error, Result};
use crate::mcmc::{Chain, CoordSummary};
use crate::models::Dataset;
use crate::prior::{DensityTable, UTable};
use crate::scoring::ScoreBreakdown;
use std::fmt::Write as _;
use std::path::Path;

fn read_to_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
    Ok(text.lines().map(str::to_owned).collect())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))
}

fn parse_f64(field: &str, path: &Path, line: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| {
        Error::Csv(format!(
            "{} line {line}: cannot parse {field:?} as a number",
            path.display()
        ))
    })
}

pub fn write_utable(path: impl AsRef<Path>, table: &UTable) -> Result<()> {
    let mut out = String::from("theta,u\n");
    for (t, u) in table.grid.iter().zip(&table.u) {
        writeln!(out, "{t:.16e},{u:.16e}").expect("string write");
    }
    write_text(path.as_ref(), &out)
}

/// Rows of a `theta,u` file.
pub fn read_utable_rows(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let path = path.as_ref();
    let lines = read_to_lines(path)?;
    let mut rows = Vec::new();
    let mut iter = lines.iter().enumerate();
    match iter.next() {
        Some((_, h)) if h.trim() == "theta,u" => {}
        _ => return Err(Error::Csv(format!("{}: expected header theta,u", path.display()))),
    }
    for (i, line) in iter {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let t = parse_f64(fields.next().unwrap_or(""), path, i + 1)?;
        let u = parse_f64(fields.next().unwrap_or(""), path, i + 1)?;
        rows.push((t, u));
    }
    Ok(rows)
}

pub fn write_density(path: impl AsRef<Path>, table: &DensityTable) -> Result<()> {
    let mut out = format!("# logZ = {:.16e}\ntheta,p\n", table.log_z);
    for (t, p) in table.grid.iter().zip(&table.p) {
        writeln!(out, "{t:.16e},{p:.16e}").expect("string write");
    }
    write_text(path.as_ref(), &out)
}

pub fn read_density(path: impl AsRef<Path>) -> Result<DensityTable> {
    let path = path.as_ref();
    let lines = read_to_lines(path)?;
    let mut iter = lines.iter().enumerate().peekable();

    let mut log_z = f64::NAN;
    if let Some((i, line)) = iter.peek().copied() {
        if let Some(rest) = line.trim().strip_prefix("# logZ =") {
            log_z = parse_f64(rest, path, i + 1)?;
            iter.next();
        }
    }
    match iter.next() {
        Some((_, h)) if h.trim() == "theta,p" => {}
        _ => return Err(Error::Csv(format!("{}: expected header theta,p", path.display()))),
    }

    let mut grid = Vec::new();
    let mut p = Vec::new();
    for (i, line) in iter {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        grid.push(parse_f64(fields.next().unwrap_or(""), path, i + 1)?);
        p.push(parse_f64(fields.next().unwrap_or(""), path, i + 1)?);
    }
    if grid.len() < 2 {
        return Err(Error::Csv(format!("{}: need at least two rows", path.display())));
    }
    let step = grid[1] - grid[0];
    Ok(DensityTable { grid, p, log_z, step })
}

pub fn write_scores(path: impl AsRef<Path>, rows: &[ScoreBreakdown]) -> Result<()> {
    let mut out = String::from("theta,logscore,hyvarinen,total\n");
    for r in rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r.theta, r.log_score, r.hyvarinen_score, r.total
        )
        .expect("string write");
    }
    write_text(path.as_ref(), &out)
}

pub fn write_chain(path: impl AsRef<Path>, chain: &Chain) -> Result<()> {
    let dim = chain.dimension();
    let mut out = String::from("iter");
    for c in 0..dim {
        write!(out, ",coord_{c}").expect("string write");
    }
    out.push('\n');
    for (i, row) in chain.draws.iter().enumerate() {
        write!(out, "{i}").expect("string write");
        for v in row {
            write!(out, ",{v:.16e}").expect("string write");
        }
        out.push('\n');
    }
    write_text(path.as_ref(), &out)
}

/// The draw matrix of a chain CSV (the iteration column is implied by
/// row order).
pub fn read_chain_draws(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let lines = read_to_lines(path)?;
    let mut iter = lines.iter().enumerate();
    let dim = match iter.next() {
        Some((_, h)) if h.starts_with("iter") => h.split(',').count() - 1,
        _ => return Err(Error::Csv(format!("{}: expected header iter,coord_0,...", path.display()))),
    };
    let mut draws = Vec::new();
    for (i, line) in iter {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(Error::Csv(format!(
                "{} line {}: expected {} fields, got {}",
                path.display(),
                i + 1,
                dim + 1,
                fields.len()
            )));
        }
        let row = fields[1..]
            .iter()
            .map(|f| parse_f64(f, path, i + 1))
            .collect::<Result<Vec<f64>>>()?;
        draws.push(row);
    }
    Ok(draws)
}

pub fn write_summaries(path: impl AsRef<Path>, rows: &[CoordSummary]) -> Result<()> {
    let mut out = String::from("coord,mean,sd,q2_5,q97_5,acceptance_rate\n");
    for r in rows {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.coord, r.mean, r.sd, r.q025, r.q975, r.acceptance_rate
        )
        .expect("string write");
    }
    write_text(path.as_ref(), &out)
}

pub fn write_dataset(path: impl AsRef<Path>, data: &Dataset) -> Result<()> {
    let k = data.x.as_ref().map_or(0, |x| x.first().map_or(0, Vec::len));
    let mut out = String::from("y");
    for j in 1..=k {
        write!(out, ",x{j}").expect("string write");
    }
    out.push('\n');
    for (i, y) in data.y.iter().enumerate() {
        write!(out, "{y:.16e}").expect("string write");
        if let Some(x) = &data.x {
            for v in &x[i] {
                write!(out, ",{v:.16e}").expect("string write");
            }
        }
        out.push('\n');
    }
    write_text(path.as_ref(), &out)
}

/// Dataset CSV: header row with a `y` column, optionally followed by
/// covariate columns named `x1..xk` in order.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let lines = read_to_lines(path)?;
    let mut iter = lines.iter().enumerate();
    let (_, header) = iter
        .next()
        .ok_or_else(|| Error::Csv(format!("{}: empty file", path.display())))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"y") {
        return Err(Error::Csv(format!(
            "{}: first column must be y, got {:?}",
            path.display(),
            cols.first().copied().unwrap_or("")
        )));
    }
    let k = cols.len() - 1;
    for (j, name) in cols[1..].iter().enumerate() {
        let expected = format!("x{}", j + 1);
        if *name != expected {
            return Err(Error::Csv(format!(
                "{}: covariate columns must be x1..xk in order; column {} is {name:?}",
                path.display(),
                j + 2
            )));
        }
    }

    let mut y = Vec::new();
    let mut x: Vec<Vec<f64>> = Vec::new();
    for (i, line) in iter {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != k + 1 {
            return Err(Error::Csv(format!(
                "{} line {}: expected {} fields, got {}",
                path.display(),
                i + 1,
                k + 1,
                fields.len()
            )));
        }
        y.push(parse_f64(fields[0], path, i + 1)?);
        if k > 0 {
            x.push(
                fields[1..]
                    .iter()
                    .map(|f| parse_f64(f, path, i + 1))
                    .collect::<Result<Vec<f64>>>()?,
            );
        }
    }
    if k > 0 {
        Dataset::with_covariates(y, x)
    } else {
        Ok(Dataset::from_values(y))
    }
}
