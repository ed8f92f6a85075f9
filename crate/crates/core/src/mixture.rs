//! Linear mixtures `Z = shift + Σ a_j X_j` and the end-to-end pipeline.
//!
//! [`compute_distribution`] measures every component from the atom that
//! attains its share of `z_L` (its minimum for `a_j > 0`, maximum for
//! `a_j < 0`), so `Z - z_L` lives on `[0, T_Z]` and bin 0 starts exactly at
//! `z_L`. Identical `(coefficient, distribution)` pairs are grouped and their
//! characteristic vector is raised to the group size instead of being
//! recomputed. Groups are processed in a canonical order, so reordering the
//! components does not change a single bit of the output.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::charfn::{mixture_char_fast, multiply_into, CharVector, GridConfig};
use crate::distribution::{anchor, support_bounds, DiscreteDistribution, SupportBounds};
use crate::error::{Error, Result};
use crate::inversion::{density_to_cdf, invert_lattice, GridCdf, GridDensity};

pub const DEFAULT_MASS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub coefficient: f64,
    pub dist: Arc<DiscreteDistribution>,
}

impl Component {
    pub fn new(coefficient: f64, dist: Arc<DiscreteDistribution>) -> Self {
        Self { coefficient, dist }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    components: Vec<Component>,
    shift: f64,
}

impl MixtureSpec {
    pub fn new(components: Vec<Component>, shift: f64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyMixture);
        }
        if let Some(c) = components.iter().find(|c| !c.coefficient.is_finite()) {
            return Err(Error::NonFiniteCoefficient(c.coefficient));
        }
        if !shift.is_finite() {
            return Err(Error::NonFiniteValue(shift));
        }
        Ok(Self { components, shift })
    }

    /// All components drawn from the same law, one per coefficient.
    pub fn shared(dist: Arc<DiscreteDistribution>, coefficients: &[f64]) -> Result<Self> {
        let components = coefficients
            .iter()
            .map(|&a| Component::new(a, Arc::clone(&dist)))
            .collect();
        Self::new(components, 0.0)
    }

    /// `m` copies of `a · X`.
    pub fn identical(dist: Arc<DiscreteDistribution>, coefficient: f64, m: usize) -> Result<Self> {
        Self::shared(dist, &vec![coefficient; m])
    }

    pub fn with_shift(mut self, shift: f64) -> Result<Self> {
        if !shift.is_finite() {
            return Err(Error::NonFiniteValue(shift));
        }
        self.shift = shift;
        Ok(self)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Mixture width `m`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Support of `Z` including the shift.
    pub fn support(&self) -> Result<SupportBounds> {
        support_bounds(self).shifted(self.shift)
    }

    pub fn mean(&self) -> f64 {
        self.shift
            + self
                .components
                .iter()
                .map(|c| c.coefficient * c.dist.mean())
                .sum::<f64>()
    }

    /// Number of joint outcomes `Π_j |atoms_j|`, as a float to avoid overflow.
    pub fn outcome_count(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.dist.len() as f64)
            .product()
    }

    /// Largest atom count over the components.
    pub fn max_atoms(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.dist.len())
            .max()
            .unwrap_or(0)
    }

    /// Identical components collapsed into `(coefficient, dist, count)`, in
    /// canonical order. Zero coefficients are dropped.
    pub fn groups(&self) -> Vec<(f64, &Arc<DiscreteDistribution>, usize)> {
        let mut sorted: Vec<&Component> = self
            .components
            .iter()
            .filter(|c| c.coefficient != 0.0)
            .collect();
        sorted.sort_by(|a, b| canonical_cmp(a, b));
        let mut groups: Vec<(f64, &Arc<DiscreteDistribution>, usize)> = Vec::new();
        for c in sorted {
            match groups.last_mut() {
                Some((a, d, count))
                    if a.to_bits() == c.coefficient.to_bits()
                        && (Arc::ptr_eq(d, &c.dist) || ***d == *c.dist) =>
                {
                    *count += 1
                }
                _ => groups.push((c.coefficient, &c.dist, 1)),
            }
        }
        groups
    }
}

fn canonical_cmp(a: &Component, b: &Component) -> Ordering {
    a.coefficient.total_cmp(&b.coefficient).then_with(|| {
        if Arc::ptr_eq(&a.dist, &b.dist) {
            Ordering::Equal
        } else {
            a.dist.canonical_cmp(&b.dist)
        }
    })
}

/// Where the pipeline puts its bins for a given spec and configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLayout {
    /// Support of the linear part, without the shift.
    pub support: SupportBounds,
    /// Left edge of bin 0: `z_L + shift`.
    pub origin: f64,
    pub period: f64,
    pub size: usize,
    pub degenerate: bool,
}

impl GridLayout {
    pub fn new(spec: &MixtureSpec, cfg: &GridConfig) -> Result<Self> {
        cfg.validate()?;
        let support = support_bounds(spec);
        let origin = support.lower() + spec.shift();
        if support.is_degenerate() {
            return Ok(Self {
                support,
                origin,
                period: 1.0,
                size: cfg.size,
                degenerate: true,
            });
        }
        let period = cfg.resolve_period(support.width())?;
        Ok(Self {
            support,
            origin,
            period,
            size: cfg.size,
            degenerate: false,
        })
    }

    pub fn bin_width(&self) -> f64 {
        self.period / self.size as f64
    }
}

/// Pipeline output.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub density: GridDensity,
    pub cdf: GridCdf,
    /// Support of `Z` including the shift.
    pub support: SupportBounds,
}

impl Distribution {
    pub fn quantile(&self, alpha: f64) -> Result<f64> {
        self.cdf.quantile(alpha)
    }
}

/// Characteristic samples of `Z - z_L - shift` on the layout's grid.
pub fn centered_char(spec: &MixtureSpec, layout: &GridLayout) -> Result<CharVector> {
    let mut acc: Option<CharVector> = None;
    for (a, dist, count) in spec.groups() {
        let base = anchor(dist, a);
        let centered = dist.transform(|x| x - base)?;
        let g = mixture_char_fast(&centered, a, count, layout.period, layout.size)?;
        match acc.as_mut() {
            None => acc = Some(g),
            Some(acc) => multiply_into(acc, &g)?,
        }
    }
    // Only reachable with every coefficient zero, which is degenerate.
    acc.ok_or(Error::EmptyMixture)
}

/// Density on the layout's grid from centered characteristic samples.
pub fn invert_centered(
    g: &CharVector,
    layout: &GridLayout,
    cfg: &GridConfig,
) -> Result<GridDensity> {
    GridDensity::new(layout.origin, layout.period, invert_lattice(g, cfg.rule))
}

/// Binned density and CDF of `Z`.
pub fn compute_distribution(spec: &MixtureSpec, cfg: &GridConfig) -> Result<Distribution> {
    let layout = GridLayout::new(spec, cfg)?;
    let support = spec.support()?;
    let density = if layout.degenerate {
        GridDensity::point_mass(layout.origin, layout.period, layout.size)?
    } else {
        let g = centered_char(spec, &layout)?;
        invert_centered(&g, &layout, cfg)?
    };
    let cdf = density_to_cdf(&density)?;
    Ok(Distribution {
        density,
        cdf,
        support,
    })
}

/// Turns a grid density back into atoms (bin centers, negative bins
/// clipped, masses below `mass_floor` dropped, renormalized) so it can feed
/// another mixture stage.
pub fn cascade_atomize(d: &GridDensity, mass_floor: f64) -> Result<DiscreteDistribution> {
    let limit = 1.0 / d.len() as f64;
    if !(mass_floor >= 0.0 && mass_floor < limit) {
        return Err(Error::InvalidMassFloor {
            floor: mass_floor,
            bins: d.len(),
        });
    }
    let atoms: Vec<(f64, f64)> = d
        .bins()
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b > 0.0 && b >= mass_floor)
        .map(|(i, &b)| (d.center(i), b))
        .collect();
    let retained: f64 = atoms.iter().map(|a| a.1).sum();
    if retained < 0.5 {
        return Err(Error::AllMassDropped(retained));
    }
    DiscreteDistribution::from_weighted(atoms)
}
