//! CSV and snapshot file I/O.
//!
//! CSV files are UTF-8 with a header row, `.` decimal separator, scientific
//! notation with 17 significant digits. Snapshot files carry one plain-text
//! header line `N L t model` followed by the row-major little-endian f64
//! matrix payload.

use crate::dynamics::DiagnosticsRow;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::harness::residual::ResidualRow;
use crate::model::ModelKind;
use std::io::{BufRead, Read, Write};

/// 17 significant digits, deterministic.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_q(q: f64) -> String {
    if q.is_infinite() {
        "inf".to_string()
    } else if q == q.trunc() {
        format!("{}", q as i64)
    } else {
        fmt_float(q)
    }
}

pub const DIAGNOSTICS_HEADER: &str = "t,l1,l2,linf,M0,M1x,M1y,tail_mass,fluxx,fluxy";
pub const RESIDUAL_HEADER: &str = "t,q,level,norm,M0,M1x,M1y,tail_mass";

pub fn write_diagnostics_csv(rows: &[DiagnosticsRow]) -> String {
    let mut out = String::from(DIAGNOSTICS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            fmt_float(r.t),
            fmt_float(r.l1),
            fmt_float(r.l2),
            fmt_float(r.linf),
            fmt_float(r.m0),
            fmt_float(r.m1[0]),
            fmt_float(r.m1[1]),
            fmt_float(r.tail_mass),
            fmt_float(r.flux[0]),
            fmt_float(r.flux[1]),
        ));
    }
    out
}

pub fn write_residual_csv(rows: &[ResidualRow]) -> String {
    let mut out = String::from(RESIDUAL_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_float(r.t),
            fmt_q(r.q),
            r.level,
            fmt_float(r.norm),
            fmt_float(r.m0),
            fmt_float(r.m1[0]),
            fmt_float(r.m1[1]),
            fmt_float(r.tail_mass),
        ));
    }
    out
}

fn parse_q(s: &str) -> Result<f64> {
    if s == "inf" {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>()
        .map_err(|_| Error::InvalidConfig(format!("bad q value '{s}' in CSV")))
}

/// Minimal reader for the residual CSV schema.
pub fn read_residual_csv(text: &str) -> Result<Vec<ResidualRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidConfig("empty residual CSV".into()))?;
    if header.trim() != RESIDUAL_HEADER {
        return Err(Error::InvalidConfig(format!(
            "unexpected residual CSV header '{header}'"
        )));
    }
    let mut rows = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(Error::InvalidConfig(format!("residual CSV line {} malformed", ln + 2)));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad number '{s}' on line {}", ln + 2)))
        };
        rows.push(ResidualRow {
            t: num(f[0])?,
            q: parse_q(f[1])?,
            level: f[2]
                .parse::<u8>()
                .map_err(|_| Error::InvalidConfig(format!("bad level on line {}", ln + 2)))?,
            norm: num(f[3])?,
            m0: num(f[4])?,
            m1: [num(f[5])?, num(f[6])?],
            tail_mass: num(f[7])?,
        });
    }
    Ok(rows)
}

/// Reader for the run-diagnostics schema; returns (t, l1, l2, linf) tuples.
pub fn read_diagnostics_csv(text: &str) -> Result<Vec<(f64, f64, f64, f64)>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidConfig("empty diagnostics CSV".into()))?;
    if header.trim() != DIAGNOSTICS_HEADER {
        return Err(Error::InvalidConfig(format!(
            "unexpected diagnostics CSV header '{header}'"
        )));
    }
    let mut rows = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(Error::InvalidConfig(format!(
                "diagnostics CSV line {} malformed",
                ln + 2
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad number '{s}' on line {}", ln + 2)))
        };
        rows.push((num(f[0])?, num(f[1])?, num(f[2])?, num(f[3])?));
    }
    Ok(rows)
}

/// Write one snapshot: `N L t model` header line + little-endian f64 payload.
pub fn write_snapshot(w: &mut impl Write, field: &Field, t: f64, model: ModelKind) -> Result<()> {
    let g = field.grid();
    writeln!(w, "{} {} {} {}", g.n(), fmt_float(g.side()), fmt_float(t), model.name())?;
    for v in field.values().iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Read a snapshot written by [`write_snapshot`].
pub fn read_snapshot(r: &mut impl Read) -> Result<(Field, f64, ModelKind)> {
    let mut br = std::io::BufReader::new(r);
    let mut header = String::new();
    br.read_line(&mut header)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(Error::InvalidConfig(format!("bad snapshot header '{}'", header.trim())));
    }
    let n: usize = parts[0]
        .parse()
        .map_err(|_| Error::InvalidConfig("bad N in snapshot header".into()))?;
    let l: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidConfig("bad L in snapshot header".into()))?;
    let t: f64 = parts[2]
        .parse()
        .map_err(|_| Error::InvalidConfig("bad t in snapshot header".into()))?;
    let model = ModelKind::parse(parts[3])?;
    let grid = Grid::new(n, l)?;
    let mut buf = vec![0u8; n * n * 8];
    br.read_exact(&mut buf)?;
    let mut values = ndarray::Array2::zeros((n, n));
    for (idx, chunk) in buf.chunks_exact(8).enumerate() {
        values[[idx / n, idx % n]] = f64::from_le_bytes(chunk.try_into().unwrap());
    }
    Ok((Field::from_values(&grid, values)?, t, model))
}
