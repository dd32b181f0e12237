//! Latin Hypercube designs: the standard construction and maxmin selection.
//!
//! Coordinate `k` of point `i` is `(pi_k(i) - 1 + U_ik) / N`, with an
//! independent random permutation `pi_k` per dimension and a fresh uniform
//! `U_ik` per cell, so every one-dimensional projection has exactly one point
//! in each stratum `[(j-1)/N, j/N)`.
//!
//! Designs are not extensible: the permutations of `{1..N-1}` and `{1..N}`
//! are unrelated, so growing a design means drawing a new one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::rng::{shuffle, RandomStream};

/// Candidate count used by [`maxmin_lhs`] when callers have no preference.
pub const DEFAULT_CANDIDATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LhsVariant {
    Standard,
    Maxmin,
}

#[derive(Debug, Clone)]
pub struct LhsDesign {
    pub points: PointSet,
    pub seed: u64,
    pub variant: LhsVariant,
    pub candidates: usize,
}

/// Row-by-row generator for one design.
///
/// All permutations are drawn up front; the uniforms of row `i` are drawn when
/// the row is requested. Rows must be taken in order, which makes the rows
/// identical to the corresponding rows of [`lhs_sample`] on an equal stream.
/// Memory is `4 * dim * count` bytes, independent of the point storage.
pub struct LhsRows<'s> {
    stream: &'s mut RandomStream,
    // perms[k][i] = pi_k(i + 1) - 1
    perms: Vec<Vec<u32>>,
    count: usize,
    next: usize,
}

impl<'s> LhsRows<'s> {
    pub fn new(stream: &'s mut RandomStream, dim: usize, count: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if count == 0 {
            return Err(Error::ZeroCount);
        }
        let strata = u32::try_from(count).map_err(|_| Error::ZeroCount)?;
        let perms = (0..dim)
            .map(|_| {
                let mut p: Vec<u32> = (0..strata).collect();
                shuffle(stream, &mut p);
                p
            })
            .collect();
        Ok(Self { stream, perms, count, next: 0 })
    }

    pub fn remaining(&self) -> usize {
        self.count - self.next
    }

    /// Writes the next row into `out`; returns `false` once the design is exhausted.
    pub fn next_row(&mut self, out: &mut [f64]) -> bool {
        if self.next == self.count {
            return false;
        }
        let n = self.count as f64;
        for (x, perm) in out.iter_mut().zip(&self.perms) {
            let u = self.stream.next_f64();
            // (stratum + u) / n can round up to 1.0 when u is within an ulp of 1
            *x = ((perm[self.next] as f64 + u) / n).min(1.0 - f64::EPSILON / 2.0);
        }
        self.next += 1;
        true
    }
}

/// A standard Latin Hypercube design of `count` points in `dim` dimensions.
pub fn lhs_sample(stream: &mut RandomStream, dim: usize, count: usize) -> Result<LhsDesign> {
    let seed = stream.seed();
    let mut rows = LhsRows::new(stream, dim, count)?;
    let mut data = vec![0.0; dim * count];
    for row in data.chunks_exact_mut(dim) {
        rows.next_row(row);
    }
    Ok(LhsDesign { points: PointSet::from_raw(dim, data), seed, variant: LhsVariant::Standard, candidates: 1 })
}

/// Smallest Euclidean distance between two points of the set.
pub fn min_pairwise_distance(points: &PointSet) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { required: 2, actual: points.len() });
    }
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        let p = points.point(i);
        for j in (i + 1)..points.len() {
            let d2: f64 = p.iter().zip(points.point(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d2);
        }
    }
    Ok(best.sqrt())
}

/// Draws `candidates` standard designs from the stream and keeps the one
/// with the largest minimum pairwise distance (first one on ties).
pub fn maxmin_lhs(stream: &mut RandomStream, dim: usize, count: usize, candidates: usize) -> Result<LhsDesign> {
    if candidates == 0 {
        return Err(Error::ZeroCount);
    }
    let seed = stream.seed();
    let mut best: Option<(f64, LhsDesign)> = None;
    for _ in 0..candidates {
        let design = lhs_sample(stream, dim, count)?;
        // a single point has no pairs; every candidate ties
        let score = if count < 2 { 0.0 } else { min_pairwise_distance(&design.points)? };
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, design));
        }
    }
    let (_, mut design) = best.expect("at least one candidate");
    design.seed = seed;
    design.variant = LhsVariant::Maxmin;
    design.candidates = candidates;
    Ok(design)
}

/// True iff every one-dimensional projection has exactly one point per
/// stratum `[(j-1)/N, j/N)`.
pub fn is_stratified(points: &PointSet) -> bool {
    let n = points.len();
    if n == 0 {
        return false;
    }
    (0..points.dim()).all(|k| {
        let mut seen = vec![false; n];
        points.iter().all(|p| {
            let cell = ((p[k] * n as f64) as usize).min(n - 1);
            !std::mem::replace(&mut seen[cell], true)
        })
    })
}
