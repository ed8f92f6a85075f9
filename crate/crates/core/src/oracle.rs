//! Reference answers for the pipeline: exact enumeration of every outcome,
//! seeded Monte Carlo resampling, and the Kolmogorov–Smirnov distance
//! between the resulting CDFs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::charfn::GridConfig;
use crate::distribution::anchor;
use crate::error::{Error, Result};
use crate::inversion::{snapped_floor, GridCdf, GridDensity};
use crate::mixture::{GridLayout, MixtureSpec};

pub const DEFAULT_ENUMERATION_LIMIT: u64 = 10_000_000;

/// First-component atoms handled per parallel task during enumeration.
const ENUMERATION_CHUNK: usize = 16;

/// Exact law of `Z` binned onto the same grid [`crate::compute_distribution`]
/// uses. Outcomes exactly on a bin edge go to the bin on their right; the
/// top endpoint wraps onto bin 0 when the period equals the support width,
/// as it does in the pipeline.
pub fn brute_force_density(
    spec: &MixtureSpec,
    cfg: &GridConfig,
    limit: u64,
) -> Result<GridDensity> {
    let outcomes = spec.outcome_count();
    if outcomes > limit as f64 {
        return Err(Error::EnumerationTooLarge { outcomes, limit });
    }
    let layout = GridLayout::new(spec, cfg)?;
    if layout.degenerate {
        return GridDensity::point_mass(layout.origin, layout.period, layout.size);
    }

    // Per component: contributions a·(x - anchor) in grid units, and masses.
    let scale = layout.size as f64 / layout.period;
    let parts: Vec<(Vec<f64>, Vec<f64>)> = spec
        .components()
        .iter()
        .filter(|c| c.coefficient != 0.0)
        .map(|c| {
            let a = c.coefficient;
            let base = anchor(&c.dist, a);
            let offsets = c.dist.values().iter().map(|&x| a * (x - base)).collect();
            (offsets, c.dist.masses().to_vec())
        })
        .collect();

    let (first, rest) = parts
        .split_first()
        .expect("non-degenerate spec has a component");
    let size = layout.size;
    let partials: Vec<Vec<f64>> = first
        .0
        .par_chunks(ENUMERATION_CHUNK)
        .zip(first.1.par_chunks(ENUMERATION_CHUNK))
        .map(|(offsets, masses)| {
            let mut bins = vec![0.0; size];
            for (&u, &p) in offsets.iter().zip(masses) {
                enumerate(rest, u, p, scale, &mut bins);
            }
            bins
        })
        .collect();

    let mut bins = vec![0.0; size];
    for part in &partials {
        bins.iter_mut().zip(part).for_each(|(b, p)| *b += p);
    }
    GridDensity::new(layout.origin, layout.period, bins)
}

fn enumerate(rest: &[(Vec<f64>, Vec<f64>)], offset: f64, mass: f64, scale: f64, bins: &mut [f64]) {
    match rest.split_first() {
        None => {
            let n = bins.len() as i64;
            let i = (snapped_floor(offset * scale) as i64).rem_euclid(n);
            bins[i as usize] += mass;
        }
        Some(((offsets, masses), tail)) => {
            for (&u, &p) in offsets.iter().zip(masses) {
                enumerate(tail, offset + u, mass * p, scale, bins);
            }
        }
    }
}

/// Empirical CDF of a finite sample: `F(z) = #{v <= z} / B`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(&v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(v));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= z) as f64 / self.sorted.len() as f64
    }
}

/// `B` independent draws of `Z`, reproducible for a fixed seed.
///
/// Replicate `r` uses ChaCha8 stream `r` of the seed, so each draw depends
/// only on `(seed, r)` and the replicates can be generated in any order.
pub fn monte_carlo_cdf(spec: &MixtureSpec, replicates: usize, seed: u64) -> Result<EmpiricalCdf> {
    if replicates == 0 {
        return Err(Error::InvalidReplicates);
    }
    let samplers: Vec<(f64, &[f64], Vec<f64>)> = spec
        .components()
        .iter()
        .map(|c| {
            let mut running = 0.0;
            let mut cum: Vec<f64> = c
                .dist
                .masses()
                .iter()
                .map(|p| {
                    running += p;
                    running
                })
                .collect();
            *cum.last_mut().expect("distribution is non-empty") = 1.0;
            (c.coefficient, c.dist.values(), cum)
        })
        .collect();
    let base = ChaCha8Rng::seed_from_u64(seed);
    let shift = spec.shift();

    let draws: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = base.clone();
            rng.set_stream(r as u64);
            let mut z = 0.0;
            for (a, values, cum) in &samplers {
                let u: f64 = rng.random();
                let i = cum.partition_point(|&c| c <= u).min(values.len() - 1);
                z += a * values[i];
            }
            z + shift
        })
        .collect();
    EmpiricalCdf::new(draws)
}

/// Either kind of CDF accepted by [`ks_distance`].
#[derive(Debug, Clone, Copy)]
pub enum CdfRef<'a> {
    Grid(&'a GridCdf),
    Empirical(&'a EmpiricalCdf),
}

impl<'a> From<&'a GridCdf> for CdfRef<'a> {
    fn from(c: &'a GridCdf) -> Self {
        CdfRef::Grid(c)
    }
}

impl<'a> From<&'a EmpiricalCdf> for CdfRef<'a> {
    fn from(c: &'a EmpiricalCdf) -> Self {
        CdfRef::Empirical(c)
    }
}

/// Largest vertical gap between two CDFs.
///
/// A grid CDF only resolves its bins, so whenever one side is a
/// [`GridCdf`] the gap is taken at grid right edges, with sample values
/// assigned to bins by the same half-open rule the grid uses. Two empirical
/// CDFs are compared at every pooled sample point.
pub fn ks_distance<'a, 'b>(a: impl Into<CdfRef<'a>>, b: impl Into<CdfRef<'b>>) -> f64 {
    match (a.into(), b.into()) {
        (CdfRef::Grid(g), CdfRef::Grid(h)) => grid_vs_grid(g, h),
        (CdfRef::Grid(g), CdfRef::Empirical(e)) | (CdfRef::Empirical(e), CdfRef::Grid(g)) => {
            grid_vs_empirical(g, e)
        }
        (CdfRef::Empirical(e), CdfRef::Empirical(f)) => empirical_vs_empirical(e, f),
    }
}

fn grid_vs_grid(g: &GridCdf, h: &GridCdf) -> f64 {
    let one_way = |a: &GridCdf, b: &GridCdf| {
        (0..a.len())
            .map(|i| (a.cum()[i] - b.eval(a.right_edge(i))).abs())
            .fold(0.0, f64::max)
    };
    one_way(g, h).max(one_way(h, g))
}

fn grid_vs_empirical(g: &GridCdf, e: &EmpiricalCdf) -> f64 {
    let total = e.len() as f64;
    let samples = e.sorted_values();
    // Bin indices are non-decreasing along the sorted sample.
    let mut j = 0;
    while j < samples.len() && g.bin_index(samples[j]) < 0 {
        j += 1;
    }
    let mut worst = j as f64 / total;
    for (i, &c) in g.cum().iter().enumerate() {
        while j < samples.len() && g.bin_index(samples[j]) <= i as i64 {
            j += 1;
        }
        worst = worst.max((c - j as f64 / total).abs());
    }
    worst
}

fn empirical_vs_empirical(e: &EmpiricalCdf, f: &EmpiricalCdf) -> f64 {
    let (x, y) = (e.sorted_values(), f.sorted_values());
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut worst: f64 = 0.0;
    while i < x.len() || j < y.len() {
        let z = match (x.get(i), y.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < x.len() && x[i] <= z {
            i += 1;
        }
        while j < y.len() && y[j] <= z {
            j += 1;
        }
        worst = worst.max((i as f64 / nx - j as f64 / ny).abs());
    }
    worst
}
