//! CSV files exchanged with other tools.
//!
//! | file | header |
//! |------|--------|
//! | points | `x1,...,xn` |
//! | convergence | `method,function,dim,log2N,rmse` |
//! | single run | `method,function,dim,log2N,estimate,abs_error` |
//! | quantile | `method,function,dim,quantile,log2N,rmse` |
//! | discrepancy sweep | `method,dim,log2N,replicates,median,min,max` |
//! | property check | `property,dim,segment,start,count,holds` |
//!
//! Reals are written in shortest round-trip form, so re-reading a file
//! reproduces every value bit for bit.

use std::io::{Read, Write};

use crate::discrepancy::SweepRow;
use crate::error::{Error, Result};
use crate::integrate::{ConvergenceReport, Method};
use crate::points::PointSet;
use crate::quantile::QuantileConvergence;
use crate::sobol::SegmentCheck;

fn csv_error(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => Error::Io(e),
            _ => unreachable!("checked io error"),
        }
    } else {
        Error::PointsCsv(e.to_string())
    }
}

fn log2(count: u64) -> u32 {
    count.trailing_zeros()
}

fn writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_error)?;
    Ok(out)
}

fn finish<W: Write>(mut out: csv::Writer<W>) -> Result<()> {
    out.flush()?;
    Ok(())
}

pub fn write_points_csv<W: Write>(w: W, points: &PointSet) -> Result<()> {
    let header: Vec<String> = (1..=points.dim()).map(|k| format!("x{k}")).collect();
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&header).map_err(csv_error)?;
    for p in points.iter() {
        out.write_record(p.iter().map(|x| x.to_string())).map_err(csv_error)?;
    }
    finish(out)
}

/// Reads a points file: header `x1,...,xn`, then one row of `n` coordinates
/// in `[0, 1)` per point.
pub fn read_points_csv<R: Read>(r: R) -> Result<PointSet> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = reader.headers().map_err(csv_error)?.clone();
    let dim = header.len();
    for (k, name) in header.iter().enumerate() {
        if name.trim() != format!("x{}", k + 1) {
            return Err(Error::PointsCsv(format!("header column {} is {name:?}, expected \"x{}\"", k + 1, k + 1)));
        }
    }
    if dim == 0 {
        return Err(Error::PointsCsv("empty header".into()));
    }
    let mut data = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        for field in record.iter() {
            let x: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::PointsCsv(format!("line {line}: {field:?} is not a number")))?;
            data.push(x);
        }
    }
    if data.is_empty() {
        return Err(Error::PointsCsv("no points".into()));
    }
    PointSet::new(dim, data)
}

pub fn write_convergence_csv<W: Write>(w: W, reports: &[ConvergenceReport]) -> Result<()> {
    let mut out = writer(w, &["method", "function", "dim", "log2N", "rmse"])?;
    for r in reports {
        for row in &r.rows {
            out.write_record([
                r.method.to_string(),
                r.function.clone(),
                r.dim.to_string(),
                log2(row.count).to_string(),
                row.rmse.to_string(),
            ])
            .map_err(csv_error)?;
        }
    }
    finish(out)
}

/// One sample path: estimate and absolute error at each checkpoint.
pub struct SingleRun<'a> {
    pub method: Method,
    pub function: &'a str,
    pub dim: usize,
    pub exact: f64,
    pub estimates: &'a [(u64, f64)],
}

pub fn write_single_run_csv<W: Write>(w: W, runs: &[SingleRun<'_>]) -> Result<()> {
    let mut out = writer(w, &["method", "function", "dim", "log2N", "estimate", "abs_error"])?;
    for run in runs {
        for &(count, est) in run.estimates {
            out.write_record([
                run.method.to_string(),
                run.function.to_string(),
                run.dim.to_string(),
                log2(count).to_string(),
                est.to_string(),
                (est - run.exact).abs().to_string(),
            ])
            .map_err(csv_error)?;
        }
    }
    finish(out)
}

pub fn write_quantile_csv<W: Write>(w: W, levels: &[QuantileConvergence]) -> Result<()> {
    let mut out = writer(w, &["method", "function", "dim", "quantile", "log2N", "rmse"])?;
    for q in levels {
        let r = &q.report;
        for row in &r.rows {
            out.write_record([
                r.method.to_string(),
                r.function.clone(),
                r.dim.to_string(),
                q.level.to_string(),
                log2(row.count).to_string(),
                row.rmse.to_string(),
            ])
            .map_err(csv_error)?;
        }
    }
    finish(out)
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut out = writer(w, &["method", "dim", "log2N", "replicates", "median", "min", "max"])?;
    for r in rows {
        out.write_record([
            r.method.to_string(),
            r.dim.to_string(),
            log2(r.count).to_string(),
            r.replicates.to_string(),
            r.median.to_string(),
            r.min.to_string(),
            r.max.to_string(),
        ])
        .map_err(csv_error)?;
    }
    finish(out)
}

pub fn write_segments_csv<W: Write>(w: W, rows: &[SegmentCheck]) -> Result<()> {
    let mut out = writer(w, &["property", "dim", "segment", "start", "count", "holds"])?;
    for r in rows {
        out.write_record([
            r.property.to_string(),
            r.dim.to_string(),
            r.segment.to_string(),
            r.start.to_string(),
            r.count.to_string(),
            r.holds.to_string(),
        ])
        .map_err(csv_error)?;
    }
    finish(out)
}
