//! Wall-clock timing of the pipeline stages against the resampling baseline.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::charfn::GridConfig;
use crate::error::Result;
use crate::mixture::{centered_char, invert_centered, GridLayout, MixtureSpec};
use crate::oracle::monte_carlo_cdf;

/// One measurement. Times are medians over the repeats, in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    /// Largest atom count over the components.
    pub n: usize,
    /// Number of components.
    pub m: usize,
    #[serde(rename = "N")]
    pub grid_size: usize,
    #[serde(rename = "B")]
    pub replicates: usize,
    pub t_forward: f64,
    pub t_ifft: f64,
    /// `None` when no Monte Carlo run was requested.
    pub t_mc: Option<f64>,
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    assert!(!xs.is_empty(), "median of nothing");
    xs.sort_by(f64::total_cmp);
    let k = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[k]
    } else {
        0.5 * (xs[k - 1] + xs[k])
    }
}

fn seconds_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

/// Times the forward stage (characteristic samples), the inverse stage
/// (FFT to bins) and optionally `replicates` Monte Carlo draws.
pub fn time_stages(
    spec: &MixtureSpec,
    cfg: &GridConfig,
    replicates: usize,
    seed: u64,
    repeats: usize,
) -> Result<BenchRow> {
    let repeats = repeats.max(1);
    let layout = GridLayout::new(spec, cfg)?;
    let mut forward = Vec::with_capacity(repeats);
    let mut inverse = Vec::with_capacity(repeats);
    let mut mc = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        if layout.degenerate {
            forward.push(0.0);
            inverse.push(0.0);
        } else {
            let start = Instant::now();
            let g = centered_char(spec, &layout)?;
            forward.push(seconds_since(start));

            let start = Instant::now();
            let d = invert_centered(&g, &layout, cfg)?;
            inverse.push(seconds_since(start));
            std::hint::black_box(d);
        }
        if replicates > 0 {
            let start = Instant::now();
            let e = monte_carlo_cdf(spec, replicates, seed)?;
            mc.push(seconds_since(start));
            std::hint::black_box(e);
        }
    }
    Ok(BenchRow {
        n: spec.max_atoms(),
        m: spec.len(),
        grid_size: cfg.size,
        replicates,
        t_forward: median(forward),
        t_ifft: median(inverse),
        t_mc: (!mc.is_empty()).then(|| median(mc)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::DiscreteDistribution;
    use std::sync::Arc;

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn row_describes_the_run() {
        let d = Arc::new(DiscreteDistribution::from_sample(&[0.0, 1.0, 2.5]).unwrap());
        let spec = MixtureSpec::identical(d, 0.5, 4).unwrap();
        let row = time_stages(&spec, &GridConfig::new(128), 50, 1, 3).unwrap();
        assert_eq!(
            (row.n, row.m, row.grid_size, row.replicates),
            (3, 4, 128, 50)
        );
        assert!(row.t_forward >= 0.0 && row.t_ifft >= 0.0);
        assert!(row.t_mc.is_some());
        let row = time_stages(&spec, &GridConfig::new(128), 0, 1, 1).unwrap();
        assert_eq!(row.t_mc, None);
    }
}
