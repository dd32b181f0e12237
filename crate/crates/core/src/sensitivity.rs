//! Variance-based global sensitivity analysis.
//!
//! All estimators share one sample plan: base matrices `A` and `B` (the two
//! halves of `N` points of a `2n`-dimensional sampler) and, for each subset
//! `y` of variables, the hybrid `A_B^y` that takes the columns in `y` from
//! `B` and the rest from `A`. With `mu` and `V` the mean and variance of
//! `f(A)` and `f(B)` pooled:
//!
//! * closed index `S_y`: `(1/N) sum (f(B) - mu) (f(A_B^y) - f(A)) / V`
//! * total index `S_y^tot`: `(1/2N) sum (f(A) - f(A_B^y))^2 / V`
//!
//! Subsets are 0-based variable indices.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functions::{Integrand, TypeClass};
use crate::integrate::{for_each_point, Method, SamplerSpec};
use crate::sum::CompensatedSum;

/// Smallest base sample accepted by the estimators.
pub const MIN_BASE_SAMPLES: usize = 64;

/// Default variance fraction for effective dimensions.
pub const DEFAULT_THRESHOLD: f64 = 0.99;

/// Largest dimension for which pairwise interactions are estimated.
pub const MAX_PAIRWISE_DIM: usize = 30;

/// An index estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexEstimate {
    pub value: f64,
    pub std_error: f64,
}

impl IndexEstimate {
    /// Noise can push estimates of small indices below zero.
    pub fn clamped(self) -> f64 {
        self.value.max(0.0)
    }
}

/// Model outputs on the base matrices of one sample plan.
pub struct SamplePlan<'f> {
    f: &'f dyn Integrand,
    dim: usize,
    /// Row `j` holds `A_j` followed by `B_j`.
    rows: Vec<f64>,
    f_a: Vec<f64>,
    f_b: Vec<f64>,
    mean: f64,
    variance: f64,
}

impl<'f> SamplePlan<'f> {
    /// Draws `base` rows from `sampler` in dimension `2n` and evaluates `f` on both halves.
    pub fn new(f: &'f dyn Integrand, base: usize, sampler: &SamplerSpec<'_>) -> Result<Self> {
        let dim = f.dim();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if base < MIN_BASE_SAMPLES {
            return Err(Error::TooFewBaseSamples { required: MIN_BASE_SAMPLES, actual: base });
        }
        let spec = SamplerSpec { dim: 2 * dim, ..*sampler };
        let mut rows = Vec::with_capacity(base * 2 * dim);
        let mut f_a = Vec::with_capacity(base);
        let mut f_b = Vec::with_capacity(base);
        for_each_point(&spec, base, |x| {
            rows.extend_from_slice(x);
            f_a.push(f.evaluate(&x[..dim]));
            f_b.push(f.evaluate(&x[dim..]));
        })?;
        let pooled = 2.0 * base as f64;
        let mean = f_a.iter().chain(&f_b).copied().collect::<CompensatedSum>().value() / pooled;
        let variance =
            f_a.iter().chain(&f_b).map(|y| (y - mean) * (y - mean)).collect::<CompensatedSum>().value() / pooled;
        if !(variance > 0.0) {
            return Err(Error::ZeroVariance);
        }
        Ok(Self { f, dim, rows, f_a, f_b, mean, variance })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_samples(&self) -> usize {
        self.f_a.len()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.dim];
        if subset.is_empty() {
            return Err(Error::InvalidSubset { dim: self.dim });
        }
        for &i in subset {
            if i >= self.dim || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidSubset { dim: self.dim });
            }
        }
        Ok(())
    }

    fn hybrid_outputs(&self, subset: &[usize]) -> Vec<f64> {
        let n = self.dim;
        let mut x = vec![0.0; n];
        self.rows
            .chunks_exact(2 * n)
            .map(|row| {
                x.copy_from_slice(&row[..n]);
                for &i in subset {
                    x[i] = row[n + i];
                }
                self.f.evaluate(&x)
            })
            .collect()
    }

    fn estimate(&self, terms: impl Iterator<Item = f64>) -> IndexEstimate {
        let terms: Vec<f64> = terms.collect();
        let n = terms.len() as f64;
        let mean = terms.iter().copied().collect::<CompensatedSum>().value() / n;
        let var = terms.iter().map(|t| (t - mean) * (t - mean)).collect::<CompensatedSum>().value() / (n - 1.0);
        IndexEstimate { value: mean / self.variance, std_error: (var / n).sqrt() / self.variance }
    }

    /// Closed and total indices of `subset` from a single hybrid matrix.
    pub fn subset_indices(&self, subset: &[usize]) -> Result<(IndexEstimate, IndexEstimate)> {
        self.check_subset(subset)?;
        let hybrid = self.hybrid_outputs(subset);
        let closed =
            self.estimate(self.f_b.iter().zip(&self.f_a).zip(&hybrid).map(|((b, a), h)| (b - self.mean) * (h - a)));
        let total = self.estimate(self.f_a.iter().zip(&hybrid).map(|(a, h)| 0.5 * (a - h) * (a - h)));
        Ok((closed, total))
    }

    /// `S_y`: the variance of all ANOVA terms inside `y`, relative to the total.
    pub fn closed_index(&self, subset: &[usize]) -> Result<IndexEstimate> {
        Ok(self.subset_indices(subset)?.0)
    }

    /// `S_y^tot`: the variance of all terms touching `y`, relative to the total.
    pub fn total_index(&self, subset: &[usize]) -> Result<IndexEstimate> {
        Ok(self.subset_indices(subset)?.1)
    }

    /// `(S_i, S_i^tot)` for every variable.
    pub fn singleton_indices(&self) -> Vec<(IndexEstimate, IndexEstimate)> {
        (0..self.dim).map(|i| self.subset_indices(&[i]).expect("singleton in range")).collect()
    }

    /// Smallest `d` whose leading variables carry `threshold` of the variance:
    /// the first `d` with `S^tot` of `{d, ..., n-1}` at most `1 - threshold`.
    pub fn truncation_dimension(&self, threshold: f64) -> usize {
        (1..self.dim)
            .find(|&d| {
                let tail: Vec<usize> = (d..self.dim).collect();
                self.subset_indices(&tail).expect("tail in range").1.value <= 1.0 - threshold
            })
            .unwrap_or(self.dim)
    }

    /// Bound on the superposition dimension from first-order and pairwise terms.
    pub fn superposition_dimension_bound(&self, threshold: f64) -> SuperpositionBound {
        let first: Vec<f64> =
            (0..self.dim).map(|i| self.closed_index(&[i]).expect("singleton in range").value).collect();
        self.superposition_from_first_order(&first, threshold)
    }

    fn superposition_from_first_order(&self, first: &[f64], threshold: f64) -> SuperpositionBound {
        let first_sum: f64 = first.iter().sum();
        if first_sum >= threshold {
            return SuperpositionBound::Determined(1);
        }
        if self.dim > MAX_PAIRWISE_DIM {
            return SuperpositionBound::Indeterminate;
        }
        let mut second = CompensatedSum::new();
        second.add(first_sum);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let closed = self.closed_index(&[i, j]).expect("pair in range").value;
                second.add(closed - first[i] - first[j]);
            }
        }
        if second.value() >= threshold {
            SuperpositionBound::Determined(2)
        } else {
            SuperpositionBound::Indeterminate
        }
    }
}

/// `S_i` for every variable.
pub fn first_order_indices(f: &dyn Integrand, base: usize, sampler: &SamplerSpec<'_>) -> Result<Vec<IndexEstimate>> {
    let plan = SamplePlan::new(f, base, sampler)?;
    (0..plan.dim()).map(|i| plan.closed_index(&[i])).collect()
}

/// `S_i^tot` for every variable.
pub fn total_indices(f: &dyn Integrand, base: usize, sampler: &SamplerSpec<'_>) -> Result<Vec<IndexEstimate>> {
    let plan = SamplePlan::new(f, base, sampler)?;
    (0..plan.dim()).map(|i| plan.total_index(&[i])).collect()
}

/// `S_y^tot`, resampling the columns in `subset` jointly.
pub fn subset_total_index(
    f: &dyn Integrand,
    subset: &[usize],
    base: usize,
    sampler: &SamplerSpec<'_>,
) -> Result<IndexEstimate> {
    SamplePlan::new(f, base, sampler)?.total_index(subset)
}

pub fn truncation_dimension(
    f: &dyn Integrand,
    base: usize,
    sampler: &SamplerSpec<'_>,
    threshold: f64,
) -> Result<usize> {
    Ok(SamplePlan::new(f, base, sampler)?.truncation_dimension(threshold))
}

pub fn superposition_dimension_bound(
    f: &dyn Integrand,
    base: usize,
    sampler: &SamplerSpec<'_>,
    threshold: f64,
) -> Result<SuperpositionBound> {
    Ok(SamplePlan::new(f, base, sampler)?.superposition_dimension_bound(threshold))
}

/// `d_S` is 1 or 2 when the first- and second-order terms reach the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperpositionBound {
    Determined(usize),
    /// Above 2, or not estimated because the dimension is too large.
    Indeterminate,
}

impl fmt::Display for SuperpositionBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Determined(d) => write!(f, "{d}"),
            Self::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

impl Serialize for SuperpositionBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Determined(d) => s.serialize_u64(*d as u64),
            Self::Indeterminate => s.serialize_str("indeterminate"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveDims {
    pub d_t: usize,
    pub d_s_bound: SuperpositionBound,
    pub threshold: f64,
}

/// Everything the `sensitivity` report records about one function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub function: String,
    pub dim: usize,
    pub sampler: Method,
    pub seed: u64,
    pub base_samples: usize,
    pub evaluations: u64,
    pub mean: f64,
    pub variance: f64,
    /// Clamped at zero.
    pub first_order: Vec<f64>,
    pub first_order_raw: Vec<f64>,
    pub first_order_se: Vec<f64>,
    /// Clamped at zero.
    pub total: Vec<f64>,
    pub total_raw: Vec<f64>,
    pub total_se: Vec<f64>,
    pub effective_dims: EffectiveDims,
    pub type_class: TypeClass,
}

impl SensitivityReport {
    pub fn first_order_sum(&self) -> f64 {
        self.first_order_raw.iter().sum()
    }
}

/// Full report: per-variable indices, effective dimensions and type class.
pub fn sensitivity_report(
    f: &dyn Integrand,
    label: &str,
    base: usize,
    sampler: &SamplerSpec<'_>,
    threshold: f64,
) -> Result<SensitivityReport> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::ProbabilityOutOfRange(threshold));
    }
    let plan = SamplePlan::new(f, base, sampler)?;
    let n = plan.dim();
    let singles = plan.singleton_indices();
    let first_raw: Vec<f64> = singles.iter().map(|s| s.0.value).collect();
    let d_t = plan.truncation_dimension(threshold);
    let d_s_bound = plan.superposition_from_first_order(&first_raw, threshold);

    // hybrids: one per variable, one per truncation step, one per pair if needed
    let pairs = match d_s_bound {
        SuperpositionBound::Determined(1) => 0,
        _ if n > MAX_PAIRWISE_DIM => 0,
        _ => n * (n - 1) / 2,
    };
    let hybrids = (n + (d_t.min(n - 1)) + pairs) as u64;
    let mut report = SensitivityReport {
        function: label.to_string(),
        dim: n,
        sampler: sampler.method,
        seed: sampler.seed,
        base_samples: base,
        evaluations: base as u64 * (2 + hybrids),
        mean: plan.mean(),
        variance: plan.variance(),
        first_order: singles.iter().map(|s| s.0.clamped()).collect(),
        first_order_raw: first_raw,
        first_order_se: singles.iter().map(|s| s.0.std_error).collect(),
        total: singles.iter().map(|s| s.1.clamped()).collect(),
        total_raw: singles.iter().map(|s| s.1.value).collect(),
        total_se: singles.iter().map(|s| s.1.std_error).collect(),
        effective_dims: EffectiveDims { d_t, d_s_bound, threshold },
        type_class: TypeClass::A,
    };
    report.type_class = classify_type(&report);
    Ok(report)
}

/// Class by the spread of total indices, then by the share of first-order effects.
///
/// A when the largest clamped `S_i^tot` exceeds ten times the smallest (a zero
/// smallest counts as an infinite ratio); otherwise B when every `S_i/S_i^tot`
/// is at least 0.9; otherwise C.
pub fn classify_type(report: &SensitivityReport) -> TypeClass {
    let max_total = report.total.iter().copied().fold(0.0, f64::max);
    let min_total = report.total.iter().copied().fold(f64::INFINITY, f64::min);
    if max_total > 10.0 * min_total {
        return TypeClass::A;
    }
    let min_share = report
        .first_order
        .iter()
        .zip(&report.total)
        .map(|(s, t)| if *t > 0.0 { s / t } else { 1.0 })
        .fold(f64::INFINITY, f64::min);
    if min_share >= 0.9 {
        TypeClass::B
    } else {
        TypeClass::C
    }
}
