// SPDX-License-Identifier: MIT OR Apache-2.0

//! Heteroskedasticity scoring from the distribution of local variances.
//!
//! A series is reduced to sliding-window local variances, those variances are
//! histogrammed over `[0, max]`, and the histogram is compared against the
//! uniform histogram on the same bins with the Bhattacharyya coefficient
//! (`H_B`) or its Hellinger-style transform (`H_H`). Higher scores mean a
//! more even spread of local variances, i.e. stronger heteroskedasticity.
//!
//! ```
//! use hetvar::{generate_segmented, measure, MeasureConfig, SegmentedGeneratorConfig};
//!
//! let series = generate_segmented(&SegmentedGeneratorConfig {
//!     total_samples: 8192,
//!     num_sigmas: 16,
//!     seed: 1,
//!     ..Default::default()
//! })?;
//! let report = measure(&series, &MeasureConfig::default())?;
//! assert!((0.0..=1.0).contains(&report.score));
//! # Ok::<(), hetvar::Error>(())
//! ```
//!
//! The [`divergence`] module also carries KL, Rényi, Tsallis, Jensen–Shannon
//! and Hellinger measures, and [`sweep`] runs score-versus-`k` experiments.

pub mod cli;
pub mod distribution;
pub mod divergence;
pub mod error;
pub mod local_variance;
pub mod measure;
pub mod rank;
pub mod series;
pub mod sweep;

pub use distribution::{estimate_pdf, uniform_reference, ProbabilityDistribution};
pub use divergence::{DivergenceResult, LogBase, Metric};
pub use error::{Error, Result};
pub use local_variance::{local_variance, LocalVarianceSeries};
pub use measure::{measure, measure_from_distribution, MeasureConfig, MeasureReport, Variant};
pub use rank::spearman;
pub use series::{generate_segmented, read_csv, write_csv, SegmentedGeneratorConfig, Spacing, TimeSeries};
pub use sweep::{run_sweep, SweepConfig, SweepMetric, SweepReport};
