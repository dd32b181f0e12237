//! Quadrature estimators and RMSE convergence experiments.
//!
//! Replicate protocol: Monte Carlo and LHS replicate `k` use seed
//! `base_seed + k`; QMC replicate `k` uses the Sobol' block starting at
//! `1 + k * 2^log2_max`, so replicates never share points and the origin
//! is never used.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functions::Integrand;
use crate::lhs::{maxmin_lhs, LhsRows, DEFAULT_CANDIDATES};
use crate::points::PointSet;
use crate::rng::RandomStream;
use crate::sobol::{DirectionTable, LdsStream};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Mc,
    Lhs,
    MaxminLhs,
    Qmc,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Mc, Method::Lhs, Method::MaxminLhs, Method::Qmc];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mc => "mc",
            Method::Lhs => "lhs",
            Method::MaxminLhs => "maxmin-lhs",
            Method::Qmc => "sobol",
        }
    }

    /// Whether estimates for growing `N` can reuse earlier points.
    pub fn is_extensible(self) -> bool {
        matches!(self, Method::Mc | Method::Qmc)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mc" => Ok(Method::Mc),
            "lhs" => Ok(Method::Lhs),
            "maxmin-lhs" | "maxmin" => Ok(Method::MaxminLhs),
            "sobol" | "qmc" => Ok(Method::Qmc),
            other => Err(format!("unknown sampler {other:?} (expected mc, lhs, maxmin-lhs or sobol)")),
        }
    }
}

/// Where one estimator run takes its points from.
#[derive(Debug, Clone, Copy)]
pub struct SamplerSpec<'t> {
    pub method: Method,
    /// Seed for MC/LHS draws.
    pub seed: u64,
    /// First Sobol' index for QMC (at least 1 in experiments).
    pub start_index: u64,
    pub dim: usize,
    pub table: &'t DirectionTable,
}

impl<'t> SamplerSpec<'t> {
    pub fn new(method: Method, dim: usize) -> SamplerSpec<'static> {
        SamplerSpec { method, seed: 0, start_index: 1, dim, table: DirectionTable::bundled() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_start_index(mut self, start: u64) -> Self {
        self.start_index = start;
        self
    }

    pub fn with_table<'u>(self, table: &'u DirectionTable) -> SamplerSpec<'u> {
        SamplerSpec { method: self.method, seed: self.seed, start_index: self.start_index, dim: self.dim, table }
    }

    /// Spec for replicate `k` of an experiment whose largest sample is `2^log2_max`.
    pub fn replicate(self, k: usize, log2_max: u32) -> Self {
        match self.method {
            Method::Qmc => Self { start_index: 1 + ((k as u64) << log2_max), ..self },
            _ => Self { seed: self.seed.wrapping_add(k as u64), ..self },
        }
    }
}

/// Draws `count` points from a sampler, calling `visit` on each in order.
///
/// LHS variants build a full design of exactly `count` points.
pub fn for_each_point(spec: &SamplerSpec<'_>, count: usize, mut visit: impl FnMut(&[f64])) -> Result<()> {
    if spec.dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if count == 0 {
        return Err(Error::ZeroCount);
    }
    let mut x = vec![0.0; spec.dim];
    match spec.method {
        Method::Mc => {
            let mut s = RandomStream::new(spec.seed);
            for _ in 0..count {
                s.fill(&mut x);
                visit(&x);
            }
        }
        Method::Qmc => {
            let mut s = LdsStream::new(spec.table, spec.dim)?;
            s.seek(spec.start_index)?;
            if spec.start_index + count as u64 - 1 > crate::sobol::MAX_INDEX {
                return Err(Error::IndexOverflow(spec.start_index + count as u64 - 1));
            }
            for i in 0..count {
                if i > 0 {
                    s.advance()?;
                }
                s.write_current(&mut x);
                visit(&x);
            }
        }
        Method::Lhs => {
            let mut s = RandomStream::new(spec.seed);
            let mut rows = LhsRows::new(&mut s, spec.dim, count)?;
            while rows.next_row(&mut x) {
                visit(&x);
            }
        }
        Method::MaxminLhs => {
            let design = maxmin_lhs(&mut RandomStream::new(spec.seed), spec.dim, count, DEFAULT_CANDIDATES)?;
            for p in design.points.iter() {
                visit(p);
            }
        }
    }
    Ok(())
}

/// `(1/N) sum f(x_i)` over the first `count` points of the sampler.
pub fn estimate_integral(spec: &SamplerSpec<'_>, f: &dyn Integrand, count: usize) -> Result<f64> {
    check_dims(spec, f)?;
    let mut acc = CompensatedSum::new();
    for_each_point(spec, count, |x| acc.add(f.evaluate(x)))?;
    Ok(acc.value() / count as f64)
}

fn check_dims(spec: &SamplerSpec<'_>, f: &dyn Integrand) -> Result<()> {
    if spec.dim != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), actual: spec.dim });
    }
    Ok(())
}

/// Running mean after the `count`-th value: `(N-1)/N * prev + value/N`.
pub fn update_mean(prev: f64, count: u64, value: f64) -> f64 {
    if count <= 1 {
        return value;
    }
    let n = count as f64;
    prev + (value - prev) / n
}

/// Inclusive range of `log2 N` checkpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Log2Range {
    pub min: u32,
    pub max: u32,
}

impl Log2Range {
    pub fn new(min: u32, max: u32) -> Result<Self> {
        if min > max || max > 31 {
            return Err(Error::InvalidRange(min, max));
        }
        Ok(Self { min, max })
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.min..=self.max
    }

    pub fn len(self) -> usize {
        (self.max - self.min + 1) as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }
}

impl FromStr for Log2Range {
    type Err = String;

    /// `"6..14"`, `"6..=14"` or a single value.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |v: &str| v.trim().parse::<u32>().map_err(|_| format!("invalid log2 N {v:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.strip_prefix('=').unwrap_or(hi))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        Log2Range::new(lo, hi).map_err(|e| e.to_string())
    }
}

/// Estimates at every power-of-two checkpoint of one sample path.
///
/// Extensible methods fold one sample path with [`update_mean`] and record
/// the running mean at each checkpoint; LHS variants draw a fresh design per
/// checkpoint from successive sub-seeds of the sampler seed.
fn checkpoint_estimates(spec: &SamplerSpec<'_>, f: &dyn Integrand, range: Log2Range) -> Result<Vec<(u64, f64)>> {
    check_dims(spec, f)?;
    let mut out = Vec::with_capacity(range.len());
    if spec.method.is_extensible() {
        let total = 1usize << range.max;
        let mut running = 0.0;
        let mut seen = 0u64;
        let mut next_checkpoint = range.min;
        for_each_point(spec, total, |x| {
            seen += 1;
            running = update_mean(running, seen, f.evaluate(x));
            if seen == 1u64 << next_checkpoint {
                out.push((seen, running));
                next_checkpoint += 1;
            }
        })?;
    } else {
        for (m, design_seed) in range.iter().zip(checkpoint_seeds(spec.seed, range.len())) {
            let n = 1usize << m;
            out.push((n as u64, estimate_integral(&SamplerSpec { seed: design_seed, ..*spec }, f, n)?));
        }
    }
    Ok(out)
}

/// Seeds of the fresh designs a non-extensible method draws at successive checkpoints.
pub(crate) fn checkpoint_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut stream = RandomStream::new(seed);
    // 53 random bits are plenty to separate design seeds
    (0..count).map(|_| (stream.next_f64() * (1u64 << 53) as f64) as u64).collect()
}

/// The first `count` points of a sampler as a point set.
pub fn sample_points(spec: &SamplerSpec<'_>, count: usize) -> Result<PointSet> {
    let mut data = Vec::with_capacity(count * spec.dim);
    for_each_point(spec, count, |x| data.extend_from_slice(x))?;
    Ok(PointSet::from_raw(spec.dim, data))
}

/// One row of a convergence report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RmseRow {
    pub count: u64,
    pub rmse: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    /// Constant of the fitted power law `c N^-alpha`.
    pub c: f64,
    pub alpha: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub function: String,
    pub dim: usize,
    pub method: Method,
    pub replicates: usize,
    pub rows: Vec<RmseRow>,
    /// Absent when some RMSE is zero (exact integration).
    pub fit: Option<SlopeFit>,
}

impl ConvergenceReport {
    pub fn rmse_at(&self, count: u64) -> Option<f64> {
        self.rows.iter().find(|r| r.count == count).map(|r| r.rmse)
    }
}

/// Ordinary least squares of `log2 RMSE` on `log2 N`.
pub fn fit_slope(rows: &[RmseRow]) -> Result<SlopeFit> {
    if rows.len() < 3 {
        return Err(Error::TooFewRows(rows.len()));
    }
    if let Some(r) = rows.iter().find(|r| !(r.rmse > 0.0) || !r.rmse.is_finite()) {
        return Err(Error::NonPositiveError(r.rmse, r.count));
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.count as f64).log2()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.rmse.log2()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(SlopeFit { c: intercept.exp2(), alpha: -slope, r_squared })
}

/// RMSE against `exact` over `replicates` independent runs at each checkpoint.
pub fn rmse_experiment(
    f: &dyn Integrand,
    label: &str,
    exact: f64,
    sampler: &SamplerSpec<'_>,
    range: Log2Range,
    replicates: usize,
) -> Result<ConvergenceReport> {
    if replicates < 2 {
        return Err(Error::TooFewReplicates(replicates));
    }
    let mut sq: Vec<CompensatedSum> = vec![CompensatedSum::new(); range.len()];
    for k in 0..replicates {
        let spec = sampler.replicate(k, range.max);
        for (acc, (_, est)) in sq.iter_mut().zip(checkpoint_estimates(&spec, f, range)?) {
            acc.add((exact - est) * (exact - est));
        }
    }
    let rows: Vec<RmseRow> = range
        .iter()
        .zip(&sq)
        .map(|(m, acc)| RmseRow { count: 1 << m, rmse: (acc.value() / replicates as f64).sqrt() })
        .collect();
    let fit = fit_slope(&rows).ok();
    Ok(ConvergenceReport { function: label.to_string(), dim: f.dim(), method: sampler.method, replicates, rows, fit })
}

/// Estimates `I_N` at every checkpoint of a single run (no averaging).
pub fn single_run_convergence(
    f: &dyn Integrand,
    sampler: &SamplerSpec<'_>,
    range: Log2Range,
) -> Result<Vec<(u64, f64)>> {
    checkpoint_estimates(sampler, f, range)
}
