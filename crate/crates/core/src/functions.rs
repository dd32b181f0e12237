//! Benchmark integrands with known integrals.
//!
//! | id | f(x) | integral | class |
//! |----|------|----------|-------|
//! | 1A | `sum_i (-1)^i prod_{j<=i} x_j` | `-(1/3)(1 - (-1/2)^n)` | A |
//! | 2A | `prod_i (|4x_i - 2| + a_i) / (1 + a_i)`, `a = (0, 0, 6.52, ...)` | 1 | A |
//! | 1B | `prod_i (n - x_i) / (n - 0.5)` | 1 | B |
//! | 2B | `(1 + 1/n)^n prod_i x_i^(1/n)` | 1 | B |
//! | 1C | `prod_i |4x_i - 2|` | 1 | C |
//! | 2C | `2^n prod_i x_i` | 1 | C |
//!
//! Every product-form function is a product of independent unit-mean
//! factors, so its ANOVA variances follow from the one-dimensional factor
//! variances `v_i`: `V = prod(1 + v_i) - 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// `a_i` for every variable after the first two in 2A.
pub const G_FUNCTION_SLOW_COEFFICIENT: f64 = 6.52;

/// Largest dimension a test function may be instantiated with.
pub const MAX_DIM: usize = 1 << 16;

/// Anything that can be integrated over the unit hypercube.
pub trait Integrand {
    fn dim(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> f64;
}

/// Adapts a closure into an [`Integrand`].
pub struct FnIntegrand<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64> FnIntegrand<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64> Integrand for FnIntegrand<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionId {
    OneA,
    TwoA,
    OneB,
    TwoB,
    OneC,
    TwoC,
}

impl FunctionId {
    pub const ALL: [FunctionId; 6] = [Self::OneA, Self::TwoA, Self::OneB, Self::TwoB, Self::OneC, Self::TwoC];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::OneA => "1A",
            Self::TwoA => "2A",
            Self::OneB => "1B",
            Self::TwoB => "2B",
            Self::OneC => "1C",
            Self::TwoC => "2C",
        }
    }

    pub fn type_class(self) -> TypeClass {
        match self {
            Self::OneA | Self::TwoA => TypeClass::A,
            Self::OneB | Self::TwoB => TypeClass::B,
            Self::OneC | Self::TwoC => TypeClass::C,
        }
    }

    /// Dimension used in the reference benchmark tables.
    pub fn canonical_dim(self) -> usize {
        match self {
            Self::OneA => 360,
            Self::TwoA => 100,
            Self::OneB | Self::TwoB => 30,
            Self::OneC | Self::TwoC => 10,
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FunctionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

/// Function classes by effective dimension: few dominant variables (A),
/// equally important variables with low-order interactions (B), or with
/// high-order interactions (C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TypeClass {
    A,
    B,
    C,
}

impl fmt::Display for TypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    id: FunctionId,
    dim: usize,
    /// `a_i` for 2A, empty otherwise.
    coefficients: Vec<f64>,
}

impl TestFunction {
    pub fn lookup(id: FunctionId, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { requested: dim, max: MAX_DIM });
        }
        let coefficients = match id {
            FunctionId::TwoA => (0..dim).map(|i| if i < 2 { 0.0 } else { G_FUNCTION_SLOW_COEFFICIENT }).collect(),
            _ => Vec::new(),
        };
        Ok(Self { id, dim, coefficients })
    }

    pub fn id(&self) -> FunctionId {
        self.id
    }

    pub fn type_class(&self) -> TypeClass {
        self.id.type_class()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `"<id>:<dim>"`, the form accepted by [`FromStr`].
    pub fn label(&self) -> String {
        format!("{}:{}", self.id, self.dim)
    }

    pub fn exact_integral(&self) -> f64 {
        match self.id {
            FunctionId::OneA => -(1.0 - (-0.5f64).powi(self.dim as i32)) / 3.0,
            _ => 1.0,
        }
    }

    /// Variance of each unit-mean factor, for the product-form functions.
    pub fn factor_variances(&self) -> Option<Vec<f64>> {
        let n = self.dim as f64;
        let v = match self.id {
            FunctionId::OneA => return None,
            FunctionId::TwoA => {
                return Some(self.coefficients.iter().map(|a| (1.0 / 3.0) / ((1.0 + a) * (1.0 + a))).collect())
            }
            FunctionId::OneB => (1.0 / 12.0) / ((n - 0.5) * (n - 0.5)),
            FunctionId::TwoB => 1.0 / (n * (n + 2.0)),
            FunctionId::OneC | FunctionId::TwoC => 1.0 / 3.0,
        };
        Some(vec![v; self.dim])
    }

    /// Closed-form ANOVA indices, absent for 1A.
    pub fn analytic_indices(&self) -> Option<AnalyticAnova> {
        self.factor_variances().map(AnalyticAnova::from_factor_variances)
    }

    /// Output variance, from the factor variances or (for 1A) the closed-form second moment.
    pub fn variance(&self) -> f64 {
        match self.analytic_indices() {
            Some(a) => a.total_variance,
            None => one_a_variance(self.dim),
        }
    }
}

// E[f^2] - E[f]^2 for 1A: E[P_i P_j] = 3^-min * 2^-(max-min) for P_i = prod_{k<=i} x_k.
fn one_a_variance(dim: usize) -> f64 {
    let mut second = CompensatedSum::new();
    for i in 1..=dim {
        for j in 1..=dim {
            let (lo, hi) = (i.min(j) as i32, i.max(j) as i32);
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            second.add(sign * 3f64.powi(-lo) * 2f64.powi(-(hi - lo)));
        }
    }
    let mean = -(1.0 - (-0.5f64).powi(dim as i32)) / 3.0;
    second.value() - mean * mean
}

impl Integrand for TestFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let n = self.dim as f64;
        match self.id {
            FunctionId::OneA => {
                let mut acc = CompensatedSum::new();
                let mut prod = 1.0;
                for (i, &xi) in x.iter().enumerate() {
                    prod *= xi;
                    acc.add(if i % 2 == 0 { -prod } else { prod });
                }
                acc.value()
            }
            FunctionId::TwoA => {
                x.iter().zip(&self.coefficients).map(|(&xi, &a)| ((4.0 * xi - 2.0).abs() + a) / (1.0 + a)).product()
            }
            FunctionId::OneB => x.iter().map(|&xi| (n - xi) / (n - 0.5)).product(),
            FunctionId::TwoB => {
                let log_sum: f64 = x.iter().map(|xi| xi.ln()).sum();
                (1.0 + 1.0 / n).powf(n) * (log_sum / n).exp()
            }
            FunctionId::OneC => x.iter().map(|&xi| (4.0 * xi - 2.0).abs()).product(),
            FunctionId::TwoC => x.iter().map(|&xi| 2.0 * xi).product(),
        }
    }
}

impl Serialize for TestFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Parses `"<id>:<dim>"`, e.g. `"1A:360"`; a bare id uses the canonical dimension.
    fn from_str(s: &str) -> Result<Self> {
        let (id, dim) = match s.split_once(':') {
            Some((id, dim)) => {
                let dim: usize = dim.trim().parse().map_err(|_| Error::InvalidFunctionSpec(s.to_string()))?;
                (id.parse::<FunctionId>()?, dim)
            }
            None => {
                let id = s.parse::<FunctionId>()?;
                (id, id.canonical_dim())
            }
        };
        if dim == 0 {
            return Err(Error::InvalidFunctionSpec(s.to_string()));
        }
        Self::lookup(id, dim)
    }
}

/// Exact ANOVA quantities of a product of independent unit-mean factors.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticAnova {
    pub factor_variances: Vec<f64>,
    pub total_variance: f64,
}

impl AnalyticAnova {
    pub fn from_factor_variances(factor_variances: Vec<f64>) -> Self {
        let total_variance = factor_variances.iter().map(|v| 1.0 + v).product::<f64>() - 1.0;
        Self { factor_variances, total_variance }
    }

    pub fn dim(&self) -> usize {
        self.factor_variances.len()
    }

    /// `S_i` for 0-based `i`.
    pub fn first_order(&self, i: usize) -> f64 {
        self.factor_variances[i] / self.total_variance
    }

    /// `S_i^tot` for 0-based `i`.
    pub fn total(&self, i: usize) -> f64 {
        self.total_effect(&[i])
    }

    /// Closed index `S_y` of a subset (0-based): the variance of all terms
    /// inside `y`.
    pub fn closed(&self, subset: &[usize]) -> f64 {
        (subset.iter().map(|&i| 1.0 + self.factor_variances[i]).product::<f64>() - 1.0) / self.total_variance
    }

    /// `S_y^tot = 1 - S_z` with `z` the complement of `y`.
    pub fn total_effect(&self, subset: &[usize]) -> f64 {
        let complement: Vec<usize> = (0..self.dim()).filter(|i| !subset.contains(i)).collect();
        1.0 - self.closed(&complement)
    }

    /// Smallest `d` whose leading variables carry `threshold` of the variance.
    pub fn truncation_dimension(&self, threshold: f64) -> usize {
        (1..=self.dim()).find(|&d| self.closed(&(0..d).collect::<Vec<_>>()) >= threshold).unwrap_or(self.dim())
    }

    /// `sum_i S_i`.
    pub fn first_order_sum(&self) -> f64 {
        (0..self.dim()).map(|i| self.first_order(i)).sum()
    }
}
