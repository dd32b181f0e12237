//! The point-set container shared by every sampler and diagnostic.

use crate::error::{Error, Result};

/// An ordered collection of points in the half-open unit hypercube `[0,1)^dim`,
/// stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    /// Builds a point set from row-major coordinates, checking that every
    /// coordinate lies in `[0, 1)`.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if data.len() % dim != 0 {
            return Err(Error::RaggedPoints { len: data.len(), dim });
        }
        if let Some(pos) = data.iter().position(|x| !(0.0..1.0).contains(x)) {
            return Err(Error::CoordinateOutOfRange { point: pos / dim, value: data[pos] });
        }
        Ok(Self { dim, data })
    }

    /// Builds a point set from a slice of rows.
    pub fn from_rows<R: AsRef<[f64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<f64>) -> Self {
        debug_assert!(dim > 0 && data.len() % dim == 0);
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Points `start..end` as a new set.
    pub fn slice(&self, start: usize, end: usize) -> PointSet {
        Self::from_raw(self.dim, self.data[start * self.dim..end * self.dim].to_vec())
    }

    /// Keeps only the listed coordinates (0-based), in the given order.
    pub fn project(&self, coords: &[usize]) -> Result<PointSet> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(&bad) = coords.iter().find(|&&c| c >= self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: bad + 1 });
        }
        let data = self.iter().flat_map(|p| coords.iter().map(move |&c| p[c])).collect();
        Ok(Self::from_raw(coords.len(), data))
    }
}
