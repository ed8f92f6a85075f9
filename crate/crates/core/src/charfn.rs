//! Characteristic-function samples of scaled discrete components and of
//! their independent sum.
//!
//! Component `j` contributes `g_{k,j} = Σ_i p_i exp(-2πi · a_j x_i k / T)`
//! for `k = 0..N`. Each atom needs one complex exponential `w_i`; later
//! samples come from repeated multiplication by `w_i`. The frequency axis is
//! cut into fixed blocks of [`BLOCK`] samples that restart the recurrence from
//! a direct exponential, which keeps rounding drift bounded and lets blocks
//! run in parallel. Every output sample sums the atoms in the same order no
//! matter how blocks are scheduled, so results are bitwise reproducible for
//! any thread count.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::inversion::InversionRule;

/// Frequencies per power-iteration block.
pub const BLOCK: usize = 256;

/// `N` samples of a characteristic function on the frequency grid `k / T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharVector {
    values: Vec<Complex64>,
    period: f64,
}

impl CharVector {
    pub fn new(values: Vec<Complex64>, period: f64) -> Result<Self> {
        check_period(period)?;
        if values.is_empty() {
            return Err(Error::InvalidGrid("characteristic vector is empty".into()));
        }
        Ok(Self { values, period })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Discretization settings: grid size `N` and period `T`.
///
/// The period is `pad * T_Z` unless set explicitly; an explicit period must
/// still cover the support width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub size: usize,
    pub pad: f64,
    pub period: Option<f64>,
    pub rule: InversionRule,
}

impl GridConfig {
    pub fn new(size: usize) -> Self {
        Self {
            size,
            pad: 1.0,
            period: None,
            rule: InversionRule::default(),
        }
    }

    pub fn with_pad(mut self, pad: f64) -> Self {
        self.pad = pad;
        self
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }

    pub fn with_rule(mut self, rule: InversionRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidGrid("grid size must be at least 1".into()));
        }
        if !(self.pad.is_finite() && self.pad >= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "pad {} must be finite and >= 1",
                self.pad
            )));
        }
        if let Some(t) = self.period {
            check_period(t)?;
        }
        Ok(())
    }

    /// Period used for a mixture whose support has width `width`.
    pub fn resolve_period(&self, width: f64) -> Result<f64> {
        self.validate()?;
        let period = match self.period {
            Some(t) => {
                if t < width {
                    return Err(Error::PeriodTooSmall { period: t, width });
                }
                t
            }
            None => self.pad * width,
        };
        check_period(period)?;
        Ok(period)
    }
}

fn check_period(period: f64) -> Result<()> {
    if period.is_finite() && period > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPeriod(period))
    }
}

/// Characteristic samples of `a · X` with `X ~ dist`.
pub fn component_char(
    dist: &DiscreteDistribution,
    coefficient: f64,
    period: f64,
    size: usize,
) -> Result<CharVector> {
    check_period(period)?;
    if size == 0 {
        return Err(Error::InvalidGrid("grid size must be at least 1".into()));
    }
    if !coefficient.is_finite() {
        return Err(Error::NonFiniteCoefficient(coefficient));
    }
    // Phase advance per frequency step, in cycles.
    let cycles: Vec<f64> = dist
        .values()
        .iter()
        .map(|&x| coefficient * x / period)
        .collect();
    let masses = dist.masses();

    let mut values = vec![Complex64::new(0.0, 0.0); size];
    values
        .par_chunks_mut(BLOCK)
        .enumerate()
        .for_each(|(b, out)| fill_block(out, b * BLOCK, &cycles, masses));
    Ok(CharVector { values, period })
}

fn fill_block(out: &mut [Complex64], k0: usize, cycles: &[f64], masses: &[f64]) {
    let n = cycles.len();
    let mut state_re = Vec::with_capacity(n);
    let mut state_im = Vec::with_capacity(n);
    let mut step_re = Vec::with_capacity(n);
    let mut step_im = Vec::with_capacity(n);
    for (&c, &p) in cycles.iter().zip(masses) {
        let start = c * k0 as f64;
        let (s, co) = (TAU * (start - start.floor())).sin_cos();
        state_re.push(p * co);
        state_im.push(-p * s);
        let (s, co) = (TAU * (c - c.floor())).sin_cos();
        step_re.push(co);
        step_im.push(-s);
    }
    for slot in out.iter_mut() {
        let mut re = 0.0;
        let mut im = 0.0;
        for i in 0..n {
            re += state_re[i];
            im += state_im[i];
        }
        *slot = Complex64::new(re, im);
        for i in 0..n {
            let r = state_re[i] * step_re[i] - state_im[i] * step_im[i];
            let s = state_re[i] * step_im[i] + state_im[i] * step_re[i];
            state_re[i] = r;
            state_im[i] = s;
        }
    }
}

/// Element-wise product of independent components' samples.
pub fn mixture_char(components: &[CharVector]) -> Result<CharVector> {
    let (first, rest) = components.split_first().ok_or(Error::EmptyMixture)?;
    let mut acc = first.clone();
    for c in rest {
        multiply_into(&mut acc, c)?;
    }
    Ok(acc)
}

pub(crate) fn multiply_into(acc: &mut CharVector, other: &CharVector) -> Result<()> {
    if acc.len() != other.len() || acc.period != other.period {
        return Err(Error::MismatchedGrid);
    }
    acc.values
        .iter_mut()
        .zip(&other.values)
        .for_each(|(a, b)| *a *= b);
    Ok(())
}

/// Samples of the sum of `m` independent copies of `a · X`: the component
/// vector raised to the `m`-th power element-wise.
pub fn mixture_char_fast(
    dist: &DiscreteDistribution,
    coefficient: f64,
    m: usize,
    period: f64,
    size: usize,
) -> Result<CharVector> {
    if m == 0 {
        return Err(Error::EmptyMixture);
    }
    let mut g = component_char(dist, coefficient, period, size)?;
    if m > 1 {
        g.values.par_iter_mut().for_each(|v| *v = pow(*v, m));
    }
    Ok(g)
}

fn pow(mut base: Complex64, mut exp: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        exp >>= 1;
        if exp > 0 {
            base *= base;
        }
    }
    acc
}
