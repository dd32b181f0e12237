//! Segment stratification checks (Properties A and A').

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{sobol_point_set, DirectionTable};
use crate::error::{Error, Result};
use crate::points::PointSet;

/// True iff every cell of the `per_axis^dim` grid holds exactly one point.
fn one_per_cell(points: &PointSet, dim: usize, per_axis: usize) -> Result<bool> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if points.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: points.dim() });
    }
    let cells = u32::try_from(dim)
        .ok()
        .and_then(|d| per_axis.checked_pow(d))
        .filter(|&c| c <= 1 << 30)
        .ok_or(Error::WrongCardinality { expected: usize::MAX, actual: points.len() })?;
    if points.len() != cells {
        return Err(Error::WrongCardinality { expected: cells, actual: points.len() });
    }
    let mut seen = vec![false; cells];
    for p in points.iter() {
        let cell = p.iter().fold(0usize, |acc, &x| acc * per_axis + ((x * per_axis as f64) as usize).min(per_axis - 1));
        if std::mem::replace(&mut seen[cell], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Property A: `2^dim` points, one in each cell obtained by halving every axis.
pub fn verify_property_a(points: &PointSet, dim: usize) -> Result<bool> {
    one_per_cell(points, dim, 2)
}

/// Property A': `4^dim` points, one in each cell obtained by quartering every axis.
pub fn verify_property_a_prime(points: &PointSet, dim: usize) -> Result<bool> {
    one_per_cell(points, dim, 4)
}

/// Which stratification property to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Property {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "Aprime")]
    APrime,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::A => "A",
            Property::APrime => "Aprime",
        }
    }

    /// Points per segment in dimension `dim`: `2^dim` or `4^dim`.
    pub fn segment_len(self, dim: usize) -> Option<usize> {
        let base: usize = match self {
            Property::A => 2,
            Property::APrime => 4,
        };
        base.checked_pow(u32::try_from(dim).ok()?).filter(|&n| n <= 1 << 30)
    }

    pub fn verify(self, points: &PointSet, dim: usize) -> Result<bool> {
        match self {
            Property::A => verify_property_a(points, dim),
            Property::APrime => verify_property_a_prime(points, dim),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Property::A),
            "aprime" | "a'" | "a-prime" => Ok(Property::APrime),
            other => Err(format!("unknown property {other:?} (expected A or Aprime)")),
        }
    }
}

/// Outcome for one segment of consecutive Sobol' points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SegmentCheck {
    pub property: Property,
    pub dim: usize,
    pub segment: u64,
    pub start: u64,
    pub count: usize,
    pub holds: bool,
}

/// Checks segments `k * L .. (k+1) * L - 1` for `k < segments`, with `L` the
/// segment length of the property.
pub fn segment_checks(
    table: &DirectionTable,
    property: Property,
    dim: usize,
    segments: u64,
) -> Result<Vec<SegmentCheck>> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let len = property.segment_len(dim).ok_or(Error::WrongCardinality { expected: usize::MAX, actual: 0 })?;
    (0..segments)
        .map(|k| {
            let start = k.checked_mul(len as u64).ok_or(Error::IndexOverflow(u64::MAX))?;
            let points = sobol_point_set(table, dim, start, len)?;
            Ok(SegmentCheck { property, dim, segment: k, start, count: len, holds: property.verify(&points, dim)? })
        })
        .collect()
}
