//! Sobol' low-discrepancy sequence in Gray-code order.
//!
//! Point `i` has coordinate `k` equal to the XOR of the direction integers of
//! dimension `k` selected by the set bits of `gray(i) = i ^ (i >> 1)`, scaled
//! by 2^-32. Consecutive Gray codes differ in one bit, so stepping from `i` to
//! `i + 1` costs a single XOR per dimension.

mod properties;
mod table;

pub use properties::{segment_checks, verify_property_a, verify_property_a_prime, Property, SegmentCheck};
pub use table::{parse_direction_table, DirectionTable, DirectionTableError, Polynomial, TableErrorKind, BITS};

use crate::error::{Error, Result};
use crate::points::PointSet;

const SCALE: f64 = 1.0 / 4_294_967_296.0;

/// Largest usable index.
pub const MAX_INDEX: u64 = u32::MAX as u64;

fn check_dim(table: &DirectionTable, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if dim > table.dimensions() {
        return Err(Error::DimensionExceedsTable { requested: dim, available: table.dimensions() });
    }
    Ok(())
}

fn integer_coordinate(table: &DirectionTable, dim: usize, gray: u32) -> u32 {
    let v = table.directions(dim);
    let mut x = 0;
    let mut bits = gray;
    while bits != 0 {
        let b = bits.trailing_zeros() as usize;
        x ^= v[b];
        bits &= bits - 1;
    }
    x
}

/// Point `index` of the `dim`-dimensional sequence, computed directly.
pub fn sobol_point(table: &DirectionTable, dim: usize, index: u64) -> Result<Vec<f64>> {
    check_dim(table, dim)?;
    if index > MAX_INDEX {
        return Err(Error::IndexOverflow(index));
    }
    let gray = (index ^ (index >> 1)) as u32;
    Ok((1..=dim).map(|k| integer_coordinate(table, k, gray) as f64 * SCALE).collect())
}

/// Points `start..start + count` as a point set.
pub fn sobol_point_set(table: &DirectionTable, dim: usize, start: u64, count: usize) -> Result<PointSet> {
    if count == 0 {
        return Err(Error::ZeroCount);
    }
    let last = start + count as u64 - 1;
    if last > MAX_INDEX {
        return Err(Error::IndexOverflow(last));
    }
    let mut stream = LdsStream::new(table, dim)?;
    stream.seek(start)?;
    let mut data = Vec::with_capacity(dim * count);
    data.extend(stream.current());
    for _ in 1..count {
        stream.advance()?;
        data.extend(stream.current());
    }
    Ok(PointSet::from_raw(dim, data))
}

/// Incremental generator positioned at some index of the sequence.
#[derive(Debug, Clone)]
pub struct LdsStream<'t> {
    table: &'t DirectionTable,
    index: u64,
    state: Vec<u32>,
}

impl<'t> LdsStream<'t> {
    /// A stream positioned at index 0 (the origin).
    pub fn new(table: &'t DirectionTable, dim: usize) -> Result<Self> {
        check_dim(table, dim)?;
        Ok(Self { table, index: 0, state: vec![0; dim] })
    }

    pub fn dim(&self) -> usize {
        self.state.len()
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Jumps to `index` without generating the intermediate points.
    pub fn seek(&mut self, index: u64) -> Result<()> {
        if index > MAX_INDEX {
            return Err(Error::IndexOverflow(index));
        }
        let gray = (index ^ (index >> 1)) as u32;
        for (k, x) in self.state.iter_mut().enumerate() {
            *x = integer_coordinate(self.table, k + 1, gray);
        }
        self.index = index;
        Ok(())
    }

    /// The point at the current index.
    pub fn current(&self) -> impl Iterator<Item = f64> + '_ {
        self.state.iter().map(|&x| x as f64 * SCALE)
    }

    pub fn write_current(&self, out: &mut [f64]) {
        for (o, &x) in out.iter_mut().zip(&self.state) {
            *o = x as f64 * SCALE;
        }
    }

    /// Steps to the next index using the Gray-code update.
    pub fn advance(&mut self) -> Result<()> {
        if self.index >= MAX_INDEX {
            return Err(Error::IndexOverflow(self.index + 1));
        }
        self.index += 1;
        let bit = self.index.trailing_zeros() as usize;
        for (k, x) in self.state.iter_mut().enumerate() {
            *x ^= self.table.directions(k + 1)[bit];
        }
        Ok(())
    }

    /// Advances and returns the new point.
    pub fn next_point(&mut self) -> Result<Vec<f64>> {
        self.advance()?;
        Ok(self.current().collect())
    }
}
