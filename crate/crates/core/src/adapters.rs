//! Mixture specs for the bootstrap of the mean.
//!
//! * iid data with Efron resampling: `T* = √n (mean(X*) - mean(X))`, i.e.
//!   `n` independent copies of `(X* - X̄)/√n`.
//! * `m`-dependent series with the moving block bootstrap: `b = n / l`
//!   independent block averages, each uniform over the `n - l + 1` centered
//!   consecutive block means, weighted `1/√b`.
//!
//! The block length has to exceed the dependence order of the series; that
//! cannot be checked from the data and is left to the caller.

use std::sync::Arc;

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;

fn check_sample(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(&v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue(v));
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Centered, root-n scaled bootstrap mean under Efron resampling.
pub fn efron_mean(values: &[f64]) -> Result<MixtureSpec> {
    check_sample(values)?;
    let center = mean(values);
    let centered: Vec<f64> = values.iter().map(|x| x - center).collect();
    let dist = Arc::new(DiscreteDistribution::from_sample(&centered)?);
    let n = values.len();
    MixtureSpec::identical(dist, 1.0 / (n as f64).sqrt(), n)
}

/// Consecutive-block summary of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockStatistics {
    pub block_length: usize,
    pub block_count: usize,
    /// Means of the `n - l + 1` consecutive blocks.
    pub block_means: Vec<f64>,
    /// Average of `block_means`.
    pub grand_mean: f64,
}

impl BlockStatistics {
    pub fn new(values: &[f64], block_length: usize) -> Result<Self> {
        check_sample(values)?;
        if block_length == 0 {
            return Err(Error::InvalidBlockLength);
        }
        let n = values.len();
        if !n.is_multiple_of(block_length) {
            return Err(Error::BlockLengthMismatch { n, block_length });
        }
        let block_means: Vec<f64> = values.windows(block_length).map(mean).collect();
        let grand_mean = mean(&block_means);
        Ok(Self {
            block_length,
            block_count: n / block_length,
            block_means,
            grand_mean,
        })
    }
}

/// Centered, root-b scaled moving block bootstrap mean.
pub fn moving_block(values: &[f64], block_length: usize) -> Result<(MixtureSpec, BlockStatistics)> {
    let stats = BlockStatistics::new(values, block_length)?;
    let centered: Vec<f64> = stats
        .block_means
        .iter()
        .map(|m| m - stats.grand_mean)
        .collect();
    let dist = Arc::new(DiscreteDistribution::from_sample(&centered)?);
    let b = stats.block_count;
    let spec = MixtureSpec::identical(dist, 1.0 / (b as f64).sqrt(), b)?;
    Ok((spec, stats))
}
