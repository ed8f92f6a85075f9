//! From characteristic samples to a binned density, its CDF and quantiles.
//!
//! The grid has `N` bins of width `T / N`; bin `i` covers
//! `[origin + i·T/N, origin + (i+1)·T/N)`. Mass sitting exactly on a grid
//! point is reproduced exactly, off-grid mass is spread by the truncated
//! Fourier series (small negative bins are expected and kept).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::charfn::CharVector;
use crate::distribution::SupportBounds;
use crate::error::{Error, Result};

/// Grid sizes below this use the direct O(N²) inverse DFT.
pub const DIRECT_DFT_BELOW: usize = 64;

/// How the one-sided samples `g_0..g_{N-1}` become real bin masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InversionRule {
    /// Inverse DFT of the Hermitian completion: frequencies `0..=N/2` come
    /// from `g_k`, the rest from `conj(g_{N-k})`, the Nyquist term from
    /// `Re(g_{N/2})`. Exact when all mass sits on grid points.
    #[default]
    Symmetric,
    /// `f_i = 2 Re(ifft(g)_i) - 1/N`, which pairs frequency `k` with
    /// `-k` for every `k < N`. Accurate only once `g` has decayed well
    /// before `N/2`; on lattices it returns `2·pmf - 1/N`.
    HalfSpectrum,
}

/// Bin masses on a uniform grid of `N` bins over `[origin, origin + T)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    origin: f64,
    period: f64,
    bins: Vec<f64>,
}

impl GridDensity {
    pub fn new(origin: f64, period: f64, bins: Vec<f64>) -> Result<Self> {
        validate_grid(origin, period, bins.len())?;
        if let Some(&b) = bins.iter().find(|b| !b.is_finite()) {
            return Err(Error::NonFiniteValue(b));
        }
        Ok(Self {
            origin,
            period,
            bins,
        })
    }

    /// All mass in bin 0.
    pub fn point_mass(at: f64, period: f64, size: usize) -> Result<Self> {
        let mut bins = vec![0.0; size.max(1)];
        bins[0] = 1.0;
        Self::new(at, period, bins)
    }

    /// Left edge of bin 0 (`z_L` when the grid was built for a mixture).
    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn bin_width(&self) -> f64 {
        self.period / self.bins.len() as f64
    }

    pub fn left_edge(&self, i: usize) -> f64 {
        edge(self.origin, self.period, self.bins.len(), i)
    }

    pub fn right_edge(&self, i: usize) -> f64 {
        edge(self.origin, self.period, self.bins.len(), i + 1)
    }

    pub fn center(&self, i: usize) -> f64 {
        self.origin + (i as f64 + 0.5) * self.period / self.bins.len() as f64
    }

    pub fn total_mass(&self) -> f64 {
        self.bins.iter().sum()
    }

    /// Most negative bin; leakage deeper than about -0.05 usually means the
    /// grid is far too coarse for the atoms involved.
    pub fn min_bin(&self) -> f64 {
        self.bins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Mean of the binned law, with bin mass placed at bin centers.
    pub fn mean(&self) -> f64 {
        self.bins
            .iter()
            .enumerate()
            .map(|(i, &b)| b * self.center(i))
            .sum()
    }

    /// Same bins on a grid moved by `shift`.
    pub fn translated(&self, shift: f64) -> Self {
        Self {
            origin: self.origin + shift,
            period: self.period,
            bins: self.bins.clone(),
        }
    }

    /// Index of the bin containing `z` (may be negative or `>= N`).
    pub fn bin_index(&self, z: f64) -> i64 {
        bin_index(self.origin, self.period, self.bins.len(), z)
    }
}

/// Cumulative masses: `cum[i]` is the mass of bins `0..=i`, i.e. the CDF
/// just below the right edge of bin `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCdf {
    origin: f64,
    period: f64,
    cum: Vec<f64>,
}

impl GridCdf {
    pub fn new(origin: f64, period: f64, cum: Vec<f64>) -> Result<Self> {
        validate_grid(origin, period, cum.len())?;
        if let Some(&c) = cum.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFiniteValue(c));
        }
        Ok(Self {
            origin,
            period,
            cum,
        })
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn len(&self) -> usize {
        self.cum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cum.is_empty()
    }

    pub fn cum(&self) -> &[f64] {
        &self.cum
    }

    pub fn bin_width(&self) -> f64 {
        self.period / self.cum.len() as f64
    }

    pub fn right_edge(&self, i: usize) -> f64 {
        edge(self.origin, self.period, self.cum.len(), i + 1)
    }

    /// Mass of all bins whose right edge is `<= z`.
    pub fn eval(&self, z: f64) -> f64 {
        let j = bin_index(self.origin, self.period, self.cum.len(), z);
        if j <= 0 {
            0.0
        } else if j as usize >= self.cum.len() {
            1.0
        } else {
            self.cum[j as usize - 1]
        }
    }

    pub fn bin_index(&self, z: f64) -> i64 {
        bin_index(self.origin, self.period, self.cum.len(), z)
    }

    /// Right edge of the first bin whose cumulative mass reaches `alpha`.
    pub fn quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        let i = self.cum.partition_point(|&c| c < alpha);
        // cum ends at exactly 1, so i < N for alpha < 1.
        let i = i.min(self.cum.len() - 1);
        Ok(self.right_edge(i))
    }
}

fn validate_grid(origin: f64, period: f64, size: usize) -> Result<()> {
    if !origin.is_finite() {
        return Err(Error::NonFiniteValue(origin));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidPeriod(period));
    }
    if size == 0 {
        return Err(Error::InvalidGrid("grid size must be at least 1".into()));
    }
    Ok(())
}

fn edge(origin: f64, period: f64, size: usize, i: usize) -> f64 {
    origin + i as f64 * period / size as f64
}

/// `floor(x)`, except that values within 1e-9 (relative) of an integer are
/// taken as that integer. Keeps exactly-on-grid atoms in their own bin
/// despite rounding in `(z - origin) · N / T`.
pub(crate) fn snapped_floor(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.floor()
    }
}

pub(crate) fn bin_index(origin: f64, period: f64, size: usize, z: f64) -> i64 {
    snapped_floor((z - origin) * size as f64 / period) as i64
}

/// Normalized inverse DFT, `x_i = (1/N) Σ_k X_k e^{2πi ik/N}`, for any `N`.
pub fn inverse_dft(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = if n < DIRECT_DFT_BELOW {
        direct_inverse_dft(input)
    } else {
        let mut buf = input.to_vec();
        inverse_plan(n).process(&mut buf);
        buf
    };
    let scale = 1.0 / n as f64;
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_inverse(n)
}

/// Unnormalized O(N²) inverse DFT with an exact twiddle table.
fn direct_inverse_dft(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    let twiddles: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64))
        .collect();
    (0..n)
        .map(|i| {
            input
                .iter()
                .enumerate()
                .map(|(k, &x)| x * twiddles[(i * k) % n])
                .sum()
        })
        .collect()
}

/// Real bin masses in lattice order (bin `i` at `i·T/N` modulo `T`).
pub(crate) fn invert_lattice(g: &CharVector, rule: InversionRule) -> Vec<f64> {
    let n = g.len();
    let values = g.values();
    match rule {
        InversionRule::Symmetric => {
            let completed: Vec<Complex64> = (0..n)
                .map(|k| match k.cmp(&(n - k)) {
                    std::cmp::Ordering::Less => values[k],
                    std::cmp::Ordering::Greater => values[n - k].conj(),
                    std::cmp::Ordering::Equal => Complex64::new(values[k].re, 0.0),
                })
                .collect();
            inverse_dft(&completed).into_iter().map(|v| v.re).collect()
        }
        InversionRule::HalfSpectrum => {
            let floor = 1.0 / n as f64;
            inverse_dft(values)
                .into_iter()
                .map(|v| 2.0 * v.re - floor)
                .collect()
        }
    }
}

/// Inverts `g` (sampled on the absolute lattice `k/T`) and rotates the bins
/// so that bin 0 is the lattice bin containing `z_L`:
/// `i_min = floor(z_L · N / T) mod N`, `origin = floor(z_L · N / T) · T / N`.
///
/// A degenerate support (`T_Z = 0`) yields a point mass at `z_L` on a grid
/// of period 1.
pub fn invert_to_density(
    g: &CharVector,
    support: &SupportBounds,
    rule: InversionRule,
) -> Result<GridDensity> {
    let n = g.len();
    if support.is_degenerate() {
        return GridDensity::point_mass(support.lower(), 1.0, n);
    }
    let period = g.period();
    if period < support.width() {
        return Err(Error::PeriodTooSmall {
            period,
            width: support.width(),
        });
    }
    let start = snapped_floor(support.lower() * n as f64 / period);
    let i_min = (start as i64).rem_euclid(n as i64) as usize;
    let lattice = invert_lattice(g, rule);
    let mut bins = Vec::with_capacity(n);
    bins.extend_from_slice(&lattice[i_min..]);
    bins.extend_from_slice(&lattice[..i_min]);
    GridDensity::new(start * period / n as f64, period, bins)
}

/// Running sum of the bins, made non-decreasing and clamped to `[0, 1]`,
/// with the last entry set to exactly 1.
pub fn density_to_cdf(d: &GridDensity) -> Result<GridCdf> {
    let total = d.total_mass();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::TotalMassError(total));
    }
    let mut running = 0.0;
    let mut high: f64 = 0.0;
    let mut cum: Vec<f64> = d
        .bins()
        .iter()
        .map(|&b| {
            running += b;
            high = high.max(running);
            high.clamp(0.0, 1.0)
        })
        .collect();
    *cum.last_mut().expect("grid is non-empty") = 1.0;
    GridCdf::new(d.origin(), d.period(), cum)
}

pub fn quantile(c: &GridCdf, alpha: f64) -> Result<f64> {
    c.quantile(alpha)
}
