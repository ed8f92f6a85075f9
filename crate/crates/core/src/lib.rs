//! Deterministic bootstrap distributions.
//!
//! For a linear bootstrap statistic `Z = shift + Σ a_j X_j`, with independent
//! `X_j` drawn from finite discrete laws, the distribution of `Z` is computed
//! from samples of its characteristic function followed by one inverse FFT.
//! No resampling is involved: the output (binned density, CDF, quantiles) is
//! a deterministic function of the data and the grid.
//!
//! The pipeline lives in [`distribution`], [`charfn`], [`inversion`] and
//! [`mixture`]. [`adapters`] builds mixtures for the iid and moving-block
//! bootstrap of the mean, [`oracle`] holds the brute-force and Monte Carlo
//! references, and [`cli`] / [`bench`] back the `detboot` binary.

pub mod adapters;
pub mod bench;
pub mod charfn;
pub mod cli;
pub mod distribution;
pub mod error;
pub mod inversion;
pub mod mixture;
pub mod oracle;

pub use charfn::{CharVector, GridConfig};
pub use distribution::{DiscreteDistribution, SupportBounds};
pub use error::{Error, Result};
pub use inversion::{GridCdf, GridDensity, InversionRule};
pub use mixture::{compute_distribution, Component, Distribution, MixtureSpec};
