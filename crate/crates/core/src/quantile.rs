//! Quantiles of `sum_i z_i^2` for standard normal `z_i` obtained from
//! uniform points by the inverse normal CDF, so the statistic is
//! chi-square with `n` degrees of freedom.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};
use crate::integrate::{
    checkpoint_seeds, fit_slope, for_each_point, ConvergenceReport, Log2Range, RmseRow, SamplerSpec,
};
use crate::sum::CompensatedSum;

/// Coordinates equal to zero are moved here before the transform.
pub const ZERO_NUDGE: f64 = 1.0 / (1u64 << 53) as f64;

/// Printed 5% and 95% points of chi-square with 5 degrees of freedom.
pub const CANONICAL_TRUE_VALUES: [f64; 2] = [1.146, 11.071];
pub const CANONICAL_LEVELS: [f64; 2] = [0.05, 0.95];
pub const CANONICAL_DIM: usize = 5;

/// `Phi^-1(u)` for `u` strictly inside `(0, 1)`.
pub fn inv_normal_cdf(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::ProbabilityOutOfRange(u));
    }
    Ok(-std::f64::consts::SQRT_2 * erfc_inv(2.0 * u))
}

/// `sum_i Phi^-1(u_i)^2`.
pub fn chi2_statistic(point: &[f64]) -> Result<f64> {
    point.iter().try_fold(0.0, |acc, &u| inv_normal_cdf(u).map(|z| acc + z * z))
}

/// Order statistic of rank `ceil(q N)`, without interpolation.
pub fn empirical_quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::ProbabilityOutOfRange(q));
    }
    let mut sorted = values.to_vec();
    let k = quantile_rank(q, values.len());
    Ok(*sorted.select_nth_unstable_by(k - 1, f64::total_cmp).1)
}

// ceil(q N), forgiving the last-bit error of q N so that 0.95 * 100 is rank 95
fn quantile_rank(q: f64, n: usize) -> usize {
    let x = q * n as f64;
    let nearest = x.round();
    let rank = if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { x.ceil() };
    (rank as usize).clamp(1, n)
}

/// Chi-square quantile, used when no printed reference value applies.
pub fn chi2_quantile(dof: usize, q: f64) -> Result<f64> {
    if dof == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::ProbabilityOutOfRange(q));
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(dist.inverse_cdf(q))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileExperiment {
    pub dim: usize,
    pub levels: Vec<f64>,
    pub true_values: Vec<f64>,
    pub range: Log2Range,
    pub replicates: usize,
}

impl QuantileExperiment {
    /// Default schedule: `N = 2^6..2^14`, 25 replicates.
    pub const DEFAULT_RANGE: Log2Range = Log2Range { min: 6, max: 14 };
    pub const DEFAULT_REPLICATES: usize = 25;

    /// `n = 5`, levels 0.05 and 0.95 against the printed reference values.
    pub fn canonical() -> Self {
        Self {
            dim: CANONICAL_DIM,
            levels: CANONICAL_LEVELS.to_vec(),
            true_values: CANONICAL_TRUE_VALUES.to_vec(),
            range: Self::DEFAULT_RANGE,
            replicates: Self::DEFAULT_REPLICATES,
        }
    }

    /// Any dimension and levels; the canonical pairs keep their printed values,
    /// the rest come from the chi-square inverse CDF.
    pub fn new(dim: usize, levels: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if levels.is_empty() {
            return Err(Error::EmptySample);
        }
        let true_values = levels
            .iter()
            .map(|&q| match CANONICAL_LEVELS.iter().position(|&c| c == q) {
                Some(i) if dim == CANONICAL_DIM => Ok(CANONICAL_TRUE_VALUES[i]),
                _ => chi2_quantile(dim, q),
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            dim,
            levels: levels.to_vec(),
            true_values,
            range: Self::DEFAULT_RANGE,
            replicates: Self::DEFAULT_REPLICATES,
        })
    }

    pub fn with_range(mut self, range: Log2Range) -> Self {
        self.range = range;
        self
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn label(&self) -> String {
        format!("chi2:{}", self.dim)
    }
}

/// RMSE of one quantile level across replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileConvergence {
    pub level: f64,
    pub true_value: f64,
    pub report: ConvergenceReport,
}

/// Chi-square statistics of the first `count` sampler points.
pub fn chi2_sample(sampler: &SamplerSpec<'_>, count: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut u = vec![0.0; sampler.dim];
    let mut failure = None;
    for_each_point(sampler, count, |x| {
        for (dst, &src) in u.iter_mut().zip(x) {
            *dst = if src == 0.0 { ZERO_NUDGE } else { src };
        }
        match chi2_statistic(&u) {
            Ok(v) => out.push(v),
            Err(e) => failure = failure.take().or(Some(e)),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Quantile estimates at `levels` from the first `count` points.
pub fn estimate_quantiles(sampler: &SamplerSpec<'_>, count: usize, levels: &[f64]) -> Result<Vec<f64>> {
    let values = chi2_sample(sampler, count)?;
    levels.iter().map(|&q| empirical_quantile(&values, q)).collect()
}

// estimates[level][checkpoint] for one replicate
fn checkpoint_quantiles(exp: &QuantileExperiment, spec: &SamplerSpec<'_>) -> Result<Vec<Vec<f64>>> {
    let mut out = vec![Vec::with_capacity(exp.range.len()); exp.levels.len()];
    if spec.method.is_extensible() {
        let values = chi2_sample(spec, 1 << exp.range.max)?;
        for m in exp.range.iter() {
            let prefix = &values[..1 << m];
            for (row, &q) in out.iter_mut().zip(&exp.levels) {
                row.push(empirical_quantile(prefix, q)?);
            }
        }
    } else {
        for (m, seed) in exp.range.iter().zip(checkpoint_seeds(spec.seed, exp.range.len())) {
            let design = SamplerSpec { seed, ..*spec };
            let values = chi2_sample(&design, 1 << m)?;
            for (row, &q) in out.iter_mut().zip(&exp.levels) {
                row.push(empirical_quantile(&values, q)?);
            }
        }
    }
    Ok(out)
}

/// RMSE against the reference values at every checkpoint, one report per level.
pub fn quantile_rmse_experiment(
    exp: &QuantileExperiment,
    sampler: &SamplerSpec<'_>,
) -> Result<Vec<QuantileConvergence>> {
    if sampler.dim != exp.dim {
        return Err(Error::DimensionMismatch { expected: exp.dim, actual: sampler.dim });
    }
    if exp.replicates < 2 {
        return Err(Error::TooFewReplicates(exp.replicates));
    }
    if let Some(&q) = exp.levels.iter().find(|&&q| !(q > 0.0 && q < 1.0)) {
        return Err(Error::ProbabilityOutOfRange(q));
    }
    let mut sq = vec![vec![CompensatedSum::new(); exp.range.len()]; exp.levels.len()];
    for k in 0..exp.replicates {
        let spec = sampler.replicate(k, exp.range.max);
        for (level, estimates) in checkpoint_quantiles(exp, &spec)?.into_iter().enumerate() {
            let truth = exp.true_values[level];
            for (acc, est) in sq[level].iter_mut().zip(estimates) {
                acc.add((est - truth) * (est - truth));
            }
        }
    }
    Ok(exp
        .levels
        .iter()
        .zip(&exp.true_values)
        .zip(&sq)
        .map(|((&level, &true_value), sums)| {
            let rows: Vec<RmseRow> = exp
                .range
                .iter()
                .zip(sums)
                .map(|(m, acc)| RmseRow { count: 1 << m, rmse: (acc.value() / exp.replicates as f64).sqrt() })
                .collect();
            let fit = fit_slope(&rows).ok();
            QuantileConvergence {
                level,
                true_value,
                report: ConvergenceReport {
                    function: exp.label(),
                    dim: exp.dim,
                    method: sampler.method,
                    replicates: exp.replicates,
                    rows,
                    fit,
                },
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::Method;
    use crate::rng::make_stream;

    // 20-digit reference values of Phi^-1
    const REFERENCE: [(f64, f64); 9] = [
        (0.975, 1.959_963_984_540_054_235_5),
        (0.01, -2.326_347_874_040_841_100_9),
        (0.1, -1.281_551_565_544_600_467),
        (0.3, -0.524_400_512_708_040_784_04),
        (0.75, 0.674_489_750_196_081_743_2),
        (1e-10, -6.361_340_902_404_056_204_7),
        (0.999_999, 4.753_424_308_822_898_948_2),
        (0.024_25, -1.972_961_051_311_884_850_3),
        (0.975_75, 1.972_961_051_311_884_850_3),
    ];

    #[test]
    fn inverse_cdf_reference_values() {
        assert_eq!(inv_normal_cdf(0.5).unwrap(), 0.0);
        for (u, want) in REFERENCE {
            let got = inv_normal_cdf(u).unwrap();
            assert!((got - want).abs() <= 1e-9, "{u}: {got} vs {want}");
        }
        assert!((inv_normal_cdf(0.975).unwrap() - 1.959964).abs() <= 1e-6);
    }

    #[test]
    fn inverse_cdf_antisymmetry() {
        for u in [0.01, 0.1, 0.3] {
            let sum = inv_normal_cdf(u).unwrap() + inv_normal_cdf(1.0 - u).unwrap();
            assert!(sum.abs() <= 1e-9, "{u}: {sum}");
        }
    }

    #[test]
    fn inverse_cdf_rejects_boundary() {
        for u in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(inv_normal_cdf(u), Err(Error::ProbabilityOutOfRange(_))), "{u}");
        }
        assert!(chi2_statistic(&[0.5, 0.0]).is_err());
    }

    #[test]
    fn inverse_cdf_is_strictly_increasing() {
        let grid: Vec<f64> = (1..=10_000).map(|i| inv_normal_cdf(i as f64 / 10_001.0).unwrap()).collect();
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn transformed_draws_pass_kolmogorov_smirnov() {
        let mut s = make_stream(99);
        let mut z: Vec<f64> = (0..100_000).map(|_| inv_normal_cdf(s.next_f64().max(ZERO_NUDGE)).unwrap()).collect();
        z.sort_by(f64::total_cmp);
        let n = z.len() as f64;
        // standard normal CDF through erfc, independent of the inverse
        let phi = |x: f64| 0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2);
        let d = z
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let c = phi(x);
                (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
            })
            .fold(0.0, f64::max);
        // 1% critical value 1.628 / sqrt(n)
        assert!(d < 1.628 / n.sqrt(), "D = {d}");
    }

    #[test]
    fn chi2_statistic_cases() {
        assert_eq!(chi2_statistic(&[0.5; 5]).unwrap(), 0.0);
        assert!((chi2_statistic(&[0.975]).unwrap() - 3.8414).abs() < 1e-4);
        let mut s = make_stream(5);
        let mut u = [0.0; 5];
        let mean = (0..100_000)
            .map(|_| {
                s.fill(&mut u);
                chi2_statistic(&u.map(|x| x.max(ZERO_NUDGE))).unwrap()
            })
            .sum::<f64>()
            / 1e5;
        assert!((mean - 5.0).abs() <= 0.05, "{mean}");
    }

    #[test]
    fn empirical_quantile_ranks() {
        let values: Vec<f64> = (1..=100).rev().map(f64::from).collect();
        assert_eq!(empirical_quantile(&values, 0.5).unwrap(), 50.0);
        assert_eq!(empirical_quantile(&values, 0.95).unwrap(), 95.0);
        assert_eq!(empirical_quantile(&values, 0.951).unwrap(), 96.0);
        assert_eq!(empirical_quantile(&values, 0.001).unwrap(), 1.0);
        for q in [0.01, 0.5, 0.99] {
            assert_eq!(empirical_quantile(&[7.5], q).unwrap(), 7.5);
        }
        assert!(matches!(empirical_quantile(&[], 0.5), Err(Error::EmptySample)));
        assert!(empirical_quantile(&values, 1.0).is_err());
    }

    // Simpson's rule on the density after x = t^2, which is smooth for every dof
    fn chi2_cdf_by_quadrature(dof: usize, x: f64) -> f64 {
        let k = dof as f64;
        let norm = 2f64.powf(k / 2.0) * statrs::function::gamma::gamma(k / 2.0);
        let g = |t: f64| 2.0 * t.powf(k - 1.0) * (-t * t / 2.0).exp() / norm;
        let (a, b, m) = (0.0, x.sqrt(), 20_000);
        let h = (b - a) / m as f64;
        let inner: f64 = (1..m).map(|i| g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (g(a) + inner + g(b)) * h / 3.0
    }

    #[test]
    fn reference_values_are_chi2_5_quantiles() {
        let lo = chi2_cdf_by_quadrature(5, 1.146);
        let hi = chi2_cdf_by_quadrature(5, 11.071);
        assert!((0.049..=0.051).contains(&lo), "{lo}");
        assert!((0.949..=0.951).contains(&hi), "{hi}");
        // 12-digit reference values
        assert!((lo - 0.050_048_168_915).abs() < 1e-9);
        assert!((hi - 0.950_009_706_005).abs() < 1e-9);
        for (q, truth) in [(0.05, 1.146), (0.95, 11.071)] {
            assert!((chi2_quantile(5, q).unwrap() - truth).abs() < 1e-3);
        }
    }

    #[test]
    fn experiment_defaults() {
        let e = QuantileExperiment::canonical();
        assert_eq!(e.true_values, vec![1.146, 11.071]);
        assert_eq!(QuantileExperiment::new(5, &[0.05, 0.95]).unwrap(), e);
        let other = QuantileExperiment::new(1, &[0.5]).unwrap();
        assert!((other.true_values[0] - 0.454_936_423_119_573).abs() < 1e-9);
    }

    #[test]
    fn one_dimensional_median_converges() {
        // (Phi^-1(0.75))^2
        let truth = 0.454_936_423_119_573;
        for m in [10, 14] {
            let est = estimate_quantiles(&SamplerSpec::new(Method::Qmc, 1), 1 << m, &[0.5]).unwrap()[0];
            assert!((est - truth).abs() < 4.0 / (1u64 << m) as f64, "{m}: {est}");
        }
    }

    #[test]
    fn qmc_beats_mc_at_both_levels() {
        let exp = QuantileExperiment::canonical().with_range(Log2Range::new(8, 12).unwrap());
        let rmse = |method| {
            quantile_rmse_experiment(&exp, &SamplerSpec::new(method, 5).with_seed(1))
                .unwrap()
                .into_iter()
                .map(|c| c.report.rmse_at(1 << 12).unwrap())
                .collect::<Vec<_>>()
        };
        let (qmc, mc) = (rmse(Method::Qmc), rmse(Method::Mc));
        for level in 0..2 {
            assert!(qmc[level] < mc[level], "{qmc:?} {mc:?}");
        }
    }

    #[test]
    fn experiment_validation() {
        let exp = QuantileExperiment::canonical();
        assert!(quantile_rmse_experiment(&exp, &SamplerSpec::new(Method::Mc, 4)).is_err());
        assert!(quantile_rmse_experiment(&exp.clone().with_replicates(1), &SamplerSpec::new(Method::Mc, 5)).is_err());
        assert!(QuantileExperiment::new(5, &[1.2]).is_err());
    }
}
