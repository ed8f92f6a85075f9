//! Finite discrete distributions and support bounds of linear mixtures.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;

/// Tolerance on the total mass before a distribution is renormalized.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A finite set of weighted atoms in canonical form: values strictly
/// increasing, masses strictly positive and summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    values: Vec<f64>,
    masses: Vec<f64>,
}

impl DiscreteDistribution {
    /// Empirical law of a sample: every observation carries mass `1/n`,
    /// repeated observations are merged.
    pub fn from_sample(values: &[f64]) -> Result<Self> {
        Self::from_weighted(values.iter().map(|&v| (v, 1.0)))
    }

    /// Builds a distribution from `(value, weight)` pairs. Weights need not
    /// sum to one; they are renormalized when the total is off by more than
    /// [`MASS_TOLERANCE`].
    pub fn from_weighted<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut atoms: Vec<(f64, f64)> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::EmptySample);
        }
        for &(v, p) in &atoms {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(v));
            }
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::InvalidMass(p));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut values: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut masses: Vec<f64> = Vec::with_capacity(atoms.len());
        for (v, p) in atoms {
            match values.last() {
                // -0.0 and 0.0 compare equal here and are merged.
                Some(&last) if last == v => *masses.last_mut().unwrap() += p,
                _ => {
                    values.push(v);
                    masses.push(p);
                }
            }
        }

        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            masses.iter_mut().for_each(|p| *p /= total);
        }
        Ok(Self { values, masses })
    }

    pub fn point_mass(value: f64) -> Result<Self> {
        Self::from_weighted([(value, 1.0)])
    }

    /// Applies `h` to every atom; images that collide have their masses summed.
    pub fn transform<F>(&self, h: F) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        let mut mapped = Vec::with_capacity(self.len());
        for (v, p) in self.atoms() {
            let image = h(v);
            if !image.is_finite() {
                return Err(Error::NonFiniteValue(image));
            }
            mapped.push((image, p));
        }
        Self::from_weighted(mapped)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.masses.iter().copied())
    }

    /// Number of distinct atoms.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.atoms().map(|(v, p)| v * p).sum()
    }

    /// Total order used to group identical components; compares atom
    /// values first, then masses, bit for bit.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let by_values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne());
        if let Some(o) = by_values {
            return o;
        }
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        self.masses
            .iter()
            .zip(&other.masses)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// Exact range `[lower, upper]` of a linear mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBounds {
    lower: f64,
    upper: f64,
    width: f64,
}

impl SupportBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() {
            return Err(Error::NonFiniteValue(lower));
        }
        if !upper.is_finite() {
            return Err(Error::NonFiniteValue(upper));
        }
        if lower > upper {
            return Err(Error::InvalidGrid(format!(
                "support lower bound {lower} exceeds upper bound {upper}"
            )));
        }
        Ok(Self {
            lower,
            upper,
            width: upper - lower,
        })
    }

    /// `z_L`.
    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// `z_U`.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// `T_Z = z_U - z_L`.
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn is_degenerate(&self) -> bool {
        self.width == 0.0
    }

    pub fn shifted(&self, shift: f64) -> Result<Self> {
        Self::new(self.lower + shift, self.upper + shift)
    }

    pub fn contains(&self, z: f64) -> bool {
        self.lower <= z && z <= self.upper
    }
}

/// Bounds of `Σ a_j X_j` (the mixture's shift is not included).
///
/// Positive coefficients take their component's maximum for the upper bound
/// and its minimum for the lower bound; negative coefficients the reverse.
/// Both bounds are attained by some outcome.
pub fn support_bounds(spec: &MixtureSpec) -> SupportBounds {
    let mut lower = 0.0;
    let mut upper = 0.0;
    // Canonical order keeps the sums bitwise independent of component order.
    for (a, dist, count) in spec.groups() {
        let (lo, hi) = if a > 0.0 {
            (a * dist.min(), a * dist.max())
        } else {
            (a * dist.max(), a * dist.min())
        };
        for _ in 0..count {
            lower += lo;
            upper += hi;
        }
    }
    // Finite coefficients and atoms give finite, ordered bounds; a product
    // can still overflow for absurd inputs.
    SupportBounds::new(lower, upper).unwrap_or(SupportBounds {
        lower,
        upper,
        width: upper - lower,
    })
}

/// Value an atom is measured from so that `a * (x - anchor) >= 0`.
pub(crate) fn anchor(dist: &DiscreteDistribution, coefficient: f64) -> f64 {
    if coefficient >= 0.0 {
        dist.min()
    } else {
        dist.max()
    }
}
