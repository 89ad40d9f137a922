// SPDX-License-Identifier: MIT OR Apache-2.0

//! Heteroskedasticity scores built from the local-variance distribution.
//!
//! The pipeline is: local variance (box window `w`) → histogram with `B` bins
//! over `[0, max σ²]` → Bhattacharyya coefficient against the uniform
//! histogram on the same bins.
//!
//! * [`Variant::Bhattacharyya`] reports the coefficient itself (`H_B`).
//! * [`Variant::Hellinger`] reports `1 − √(1 − H_B)` (`H_H`).
//!
//! Both are similarities to the uniform reference: **a higher score means the
//! local variances are spread more evenly, i.e. the series is more
//! heteroskedastic.** A one-hot histogram scores `B^{-1/2}`, a uniform one
//! scores 1.

use std::fmt;
use std::str::FromStr;

use crate::distribution::{self, ProbabilityDistribution, DEFAULT_BINS};
use crate::divergence;
use crate::error::{Error, Result};
use crate::local_variance::{self, DEFAULT_WINDOW};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Bhattacharyya,
    Hellinger,
}

impl Variant {
    /// Maps a Bhattacharyya coefficient to this variant's score.
    pub fn score_from_coefficient(self, bc: f64) -> f64 {
        match self {
            Variant::Bhattacharyya => bc,
            Variant::Hellinger => divergence::hellinger_paper_from_coefficient(bc),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bhattacharyya" => Ok(Variant::Bhattacharyya),
            "hellinger" => Ok(Variant::Hellinger),
            other => Err(Error::Parameter(format!(
                "unknown variant `{other}` (expected bhattacharyya or hellinger)"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Bhattacharyya => "bhattacharyya",
            Variant::Hellinger => "hellinger",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureConfig {
    pub window: usize,
    pub bins: usize,
    pub variant: Variant,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            bins: DEFAULT_BINS,
            variant: Variant::Bhattacharyya,
        }
    }
}

impl MeasureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(Error::Config(format!("window must be >= 2, got {}", self.window)));
        }
        if self.bins < 2 {
            return Err(Error::Config(format!("bins must be >= 2, got {}", self.bins)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub score: f64,
    pub variant: Variant,
    pub config: MeasureConfig,
    pub n_variances: usize,
    /// The Bhattacharyya coefficient the score was derived from.
    pub coefficient: f64,
    /// Histogram of local variances used for the score.
    pub distribution: ProbabilityDistribution,
    /// Set when `n_variances < 10 · bins`; such histograms make the score noisy.
    pub sparse: bool,
}

pub fn measure(series: &TimeSeries, config: &MeasureConfig) -> Result<MeasureReport> {
    config.validate()?;
    if series.len() < config.window + 1 {
        return Err(Error::Parameter(format!(
            "series of length {} is too short for window {} (need at least {})",
            series.len(),
            config.window,
            config.window + 1
        )));
    }
    let variances = local_variance::local_variance(series, config.window)?;
    let n_variances = variances.len();
    let distribution = distribution::estimate_pdf(&variances, config.bins)?;
    let coefficient = coefficient_against_uniform(&distribution);
    Ok(MeasureReport {
        score: config.variant.score_from_coefficient(coefficient),
        variant: config.variant,
        config: *config,
        n_variances,
        coefficient,
        distribution,
        sparse: n_variances < 10 * config.bins,
    })
}

fn coefficient_against_uniform(p: &ProbabilityDistribution) -> f64 {
    let reference = distribution::uniform_reference(p);
    divergence::bhattacharyya_coefficient(p, &reference).expect("reference shares edges")
}

/// Score of an already-built local-variance distribution.
pub fn measure_from_distribution(p: &ProbabilityDistribution, variant: Variant) -> f64 {
    variant.score_from_coefficient(coefficient_against_uniform(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{generate_segmented, SegmentedGeneratorConfig};

    #[test]
    fn closed_form_extremes() {
        let uniform = ProbabilityDistribution::from_unit_bins(vec![1.0; 64]).unwrap();
        assert!((measure_from_distribution(&uniform, Variant::Bhattacharyya) - 1.0).abs() < 1e-12);
        assert!((measure_from_distribution(&uniform, Variant::Hellinger) - 1.0).abs() < 1e-12);

        for b in [2usize, 5, 64, 100] {
            let mut w = vec![0.0; b];
            w[b / 2] = 1.0;
            let one_hot = ProbabilityDistribution::from_unit_bins(w).unwrap();
            let hb = measure_from_distribution(&one_hot, Variant::Bhattacharyya);
            assert!((hb - (b as f64).powf(-0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn hellinger_variant_transform() {
        let p = ProbabilityDistribution::from_unit_bins(vec![3.0, 1.0, 0.0, 2.0]).unwrap();
        let hb = measure_from_distribution(&p, Variant::Bhattacharyya);
        let hh = measure_from_distribution(&p, Variant::Hellinger);
        assert!((hh - (1.0 - (1.0 - hb).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn report_fields() {
        let s = TimeSeries::new((0..500).map(|i| ((i * i) % 17) as f64).collect()).unwrap();
        let cfg = MeasureConfig { window: 20, bins: 8, variant: Variant::Hellinger };
        let r = measure(&s, &cfg).unwrap();
        assert_eq!(r.n_variances, 481);
        assert_eq!(r.distribution.bins(), 8);
        assert!((0.0..=1.0).contains(&r.score));
        assert!(!r.sparse);
        assert_eq!(r.score, Variant::Hellinger.score_from_coefficient(r.coefficient));
    }

    #[test]
    fn constant_series_scores_minimum() {
        let s = TimeSeries::new(vec![3.0; 100]).unwrap();
        let r = measure(&s, &MeasureConfig { window: 4, bins: 16, ..Default::default() }).unwrap();
        assert!((r.score - 0.25).abs() < 1e-12);
    }

    #[test]
    fn too_short_and_bad_config() {
        let s = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        let cfg = MeasureConfig { window: 3, bins: 4, ..Default::default() };
        assert!(matches!(measure(&s, &cfg), Err(Error::Parameter(_))));
        let ok = MeasureConfig { window: 2, ..cfg };
        let r = measure(&s, &ok).unwrap();
        assert_eq!(r.n_variances, 2);
        assert!(r.sparse);
        assert!(matches!(measure(&s, &MeasureConfig { bins: 1, ..ok }), Err(Error::Config(_))));
        assert!(matches!(measure(&s, &MeasureConfig { window: 1, ..ok }), Err(Error::Config(_))));
    }

    #[test]
    fn heteroskedastic_beats_homoskedastic_on_average() {
        let cfg = MeasureConfig { window: 128, bins: 64, variant: Variant::Bhattacharyya };
        let mut wins = 0;
        for seed in 0..5 {
            let gen = |k| SegmentedGeneratorConfig {
                total_samples: 16_384,
                num_sigmas: k,
                spacing: crate::series::Spacing::Linear,
                seed,
                ..Default::default()
            };
            let homo = measure(&generate_segmented(&gen(1)).unwrap(), &cfg).unwrap().score;
            let hetero = measure(&generate_segmented(&gen(32)).unwrap(), &cfg).unwrap().score;
            wins += usize::from(hetero > homo);
        }
        assert!(wins >= 4);
    }

    #[test]
    fn deterministic() {
        let s = generate_segmented(&SegmentedGeneratorConfig { total_samples: 4096, ..Default::default() }).unwrap();
        let cfg = MeasureConfig::default();
        assert_eq!(measure(&s, &cfg).unwrap(), measure(&s, &cfg).unwrap());
    }
}
