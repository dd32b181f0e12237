//! Uniformity measures for point sets.
//!
//! All measures use origin-anchored boxes `[0, t)`; the local discrepancy of
//! a box is the fraction of points inside it minus its volume.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrate::{checkpoint_seeds, sample_points, Log2Range, Method, SamplerSpec};
use crate::points::PointSet;
use crate::sum::CompensatedSum;

/// Largest negative squared L2 discrepancy attributed to rounding.
const NEGATIVE_SLACK: f64 = 1e-12;

/// The box `[0, t_1) x ... x [0, t_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginBox {
    upper: Vec<f64>,
}

impl OriginBox {
    pub fn new(upper: Vec<f64>) -> Result<Self> {
        if upper.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(&bad) = upper.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::CoordinateOutOfRange { point: 0, value: bad });
        }
        Ok(Self { upper })
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn volume(&self) -> f64 {
        self.upper.iter().product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.upper).all(|(x, t)| x < t)
    }
}

/// `#{x_i in [0, t)} / N - vol([0, t))`.
pub fn local_discrepancy(points: &PointSet, t: &OriginBox) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::ZeroCount);
    }
    if t.upper.len() != points.dim() {
        return Err(Error::DimensionMismatch { expected: points.dim(), actual: t.upper.len() });
    }
    let inside = points.iter().filter(|x| t.contains(x)).count();
    Ok(inside as f64 / points.len() as f64 - t.volume())
}

fn star_size_allowed(dim: usize, count: usize) -> bool {
    match dim {
        1 => true,
        2 => count <= 64,
        3 => count <= 16,
        // same work budget as the 3-dimensional limit
        _ => (count as f64 + 1.0).powi(dim as i32) * count as f64 <= 17f64.powi(3) * 16.0,
    }
}

/// Exact star discrepancy by enumerating critical boxes.
///
/// The supremum is attained in the limit at boxes whose upper corners lie on
/// the grid formed by the point coordinates (and 1). At each grid corner the
/// open count (`x < t`) measures the deficit and the closed count (`x <= t`)
/// measures the excess. Cost is `O(N^(n+1) n)`, so sizes are capped: any `N`
/// for `n = 1`, `N <= 64` for `n = 2`, `N <= 16` for `n = 3`.
pub fn star_discrepancy_bruteforce(points: &PointSet) -> Result<f64> {
    let (dim, count) = (points.dim(), points.len());
    if count == 0 {
        return Err(Error::ZeroCount);
    }
    if !star_size_allowed(dim, count) {
        return Err(Error::StarDiscrepancyTooLarge { count, dim });
    }
    if dim == 1 {
        return Ok(star_1d(points.as_slice()));
    }

    let grids: Vec<Vec<f64>> = (0..dim)
        .map(|k| {
            let mut g: Vec<f64> = points.iter().map(|p| p[k]).chain([1.0]).collect();
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        })
        .collect();

    let n = count as f64;
    let mut best: f64 = 0.0;
    let mut corner = vec![0usize; dim];
    let mut t = vec![0.0; dim];
    loop {
        for (k, &c) in corner.iter().enumerate() {
            t[k] = grids[k][c];
        }
        let volume: f64 = t.iter().product();
        let mut open = 0usize;
        let mut closed = 0usize;
        for p in points.iter() {
            if p.iter().zip(&t).all(|(x, t)| x <= t) {
                closed += 1;
                if p.iter().zip(&t).all(|(x, t)| x < t) {
                    open += 1;
                }
            }
        }
        best = best.max(volume - open as f64 / n).max(closed as f64 / n - volume);

        // odometer over the grid
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(best);
            }
            corner[k] += 1;
            if corner[k] < grids[k].len() {
                break;
            }
            corner[k] = 0;
            k += 1;
        }
    }
}

fn star_1d(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i];
        let open = i;
        let mut j = i;
        while j < sorted.len() && sorted[j] == t {
            j += 1;
        }
        best = best.max(t - open as f64 / n).max(j as f64 / n - t);
        i = j;
    }
    best
}

/// Closed-form (Warnock) L2 star discrepancy, `O(N^2 n)`.
///
/// `D^2 = 1/N^2 sum_ij prod_k (1 - max(x_ik, x_jk)) - 2^(1-n)/N sum_i prod_k (1 - x_ik^2) + 3^-n`.
/// Returns `D`. Row sums of the double sum are accumulated in a fixed order,
/// so the result does not depend on how work is scheduled.
pub fn l2_discrepancy(points: &PointSet) -> Result<f64> {
    let (dim, count) = (points.dim(), points.len());
    if count == 0 {
        return Err(Error::ZeroCount);
    }
    let n = count as f64;

    let mut pair = CompensatedSum::new();
    for i in 0..count {
        let xi = points.point(i);
        pair.add(xi.iter().map(|x| 1.0 - x).product());
        let mut row = 0.0;
        for j in (i + 1)..count {
            let xj = points.point(j);
            let mut prod = 1.0;
            for k in 0..dim {
                prod *= 1.0 - xi[k].max(xj[k]);
            }
            row += prod;
        }
        pair.add(2.0 * row);
    }
    let single: CompensatedSum = points.iter().map(|x| x.iter().map(|x| 1.0 - x * x).product()).collect();

    let mut total = CompensatedSum::new();
    total.add(pair.value() / (n * n));
    total.add(-(2f64.powi(1 - dim as i32)) * single.value() / n);
    total.add(3f64.powi(-(dim as i32)));
    let squared = total.value();
    if squared < -NEGATIVE_SLACK {
        return Err(Error::NegativeDiscrepancy(squared));
    }
    Ok(squared.max(0.0).sqrt())
}

/// Midpoint-rule quadrature of `h(t)^2` over a `grid^n` lattice, as a direct
/// check of the closed form. Dimensions 1 to 3 only.
pub fn l2_discrepancy_oracle(points: &PointSet, grid: usize) -> Result<f64> {
    let dim = points.dim();
    if !(1..=3).contains(&dim) {
        return Err(Error::OracleDimension(dim));
    }
    if grid == 0 {
        return Err(Error::ZeroGrid);
    }
    if points.is_empty() {
        return Err(Error::ZeroCount);
    }
    let n = points.len() as f64;
    let h = 1.0 / grid as f64;
    let mids: Vec<f64> = (0..grid).map(|g| (g as f64 + 0.5) * h).collect();

    // For each axis and grid cell, which points fall below the cell midpoint.
    let below: Vec<Vec<Vec<bool>>> =
        (0..dim).map(|k| mids.iter().map(|&t| points.iter().map(|p| p[k] < t).collect()).collect()).collect();

    let mut acc = CompensatedSum::new();
    let cells = grid.pow(dim as u32);
    let mut idx = vec![0usize; dim];
    for _ in 0..cells {
        let mut volume = 1.0;
        for &g in &idx {
            volume *= mids[g];
        }
        let inside = (0..points.len()).filter(|&i| idx.iter().enumerate().all(|(k, &g)| below[k][g][i])).count();
        let local = inside as f64 / n - volume;
        acc.add(local * local);
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < grid {
                break;
            }
            *slot = 0;
        }
    }
    Ok((acc.value() / cells as f64).sqrt())
}

/// Spread of the L2 discrepancy over replicates at one sample size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub method: Method,
    pub dim: usize,
    pub count: u64,
    pub replicates: usize,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

/// L2 discrepancy at every power-of-two checkpoint, over independent replicates.
///
/// Extensible samplers are measured on prefixes of one sample path; LHS
/// variants draw a fresh design per checkpoint, as in the integrator.
pub fn l2_sweep(sampler: &SamplerSpec<'_>, range: Log2Range, replicates: usize) -> Result<Vec<SweepRow>> {
    if replicates == 0 {
        return Err(Error::TooFewReplicates(0));
    }
    let mut values = vec![Vec::with_capacity(replicates); range.len()];
    for k in 0..replicates {
        let spec = sampler.replicate(k, range.max);
        if spec.method.is_extensible() {
            let path = sample_points(&spec, 1 << range.max)?;
            for (slot, m) in values.iter_mut().zip(range.iter()) {
                slot.push(l2_discrepancy(&path.slice(0, 1 << m))?);
            }
        } else {
            for ((slot, m), seed) in values.iter_mut().zip(range.iter()).zip(checkpoint_seeds(spec.seed, range.len())) {
                slot.push(l2_discrepancy(&sample_points(&SamplerSpec { seed, ..spec }, 1 << m)?)?);
            }
        }
    }
    Ok(range
        .iter()
        .zip(values)
        .map(|(m, mut v)| {
            v.sort_by(f64::total_cmp);
            let mid = v.len() / 2;
            let median = if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) };
            SweepRow {
                method: sampler.method,
                dim: sampler.dim,
                count: 1 << m,
                replicates,
                median,
                min: v[0],
                max: v[v.len() - 1],
            }
        })
        .collect())
}
