// SPDX-License-Identifier: MIT OR Apache-2.0

//! Parameter sweeps: score versus number of distinct sigmas, across windows.
//!
//! Every `(k, seed)` pair generates one series, using a generator seed derived
//! from `(seed, k)` only. All windows analyse that same series, so differences
//! between windows isolate the kernel-size effect. Cells run in parallel on the
//! current rayon pool; rows are sorted canonically afterwards, so the report
//! does not depend on the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::distribution::DEFAULT_BINS;
use crate::divergence;
use crate::error::{Error, Result};
use crate::measure::{measure, MeasureConfig, Variant};
use crate::rank::spearman;
use crate::series::{generate_segmented, SegmentedGeneratorConfig, Spacing, DEFAULT_SIGMA_MAX, DEFAULT_SIGMA_MIN};

/// Quantities recorded per cell, all derived from one Bhattacharyya coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SweepMetric {
    /// `H_B`, the coefficient against the uniform reference.
    HB,
    /// `H_H = 1 − √(1 − H_B)`.
    HH,
    /// `−ln H_B`.
    BhattacharyyaDistance,
}

impl SweepMetric {
    pub const ALL: [SweepMetric; 3] = [SweepMetric::HB, SweepMetric::HH, SweepMetric::BhattacharyyaDistance];

    pub fn name(self) -> &'static str {
        match self {
            SweepMetric::HB => "h_b",
            SweepMetric::HH => "h_h",
            SweepMetric::BhattacharyyaDistance => "bhattacharyya_distance",
        }
    }

    fn score(self, bc: f64) -> f64 {
        match self {
            SweepMetric::HB => bc,
            SweepMetric::HH => Variant::Hellinger.score_from_coefficient(bc),
            SweepMetric::BhattacharyyaDistance => divergence::distance_from_coefficient(bc),
        }
    }
}

impl fmt::Display for SweepMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub sigma_counts: Vec<usize>,
    pub windows: Vec<usize>,
    pub bins: usize,
    pub total_samples: usize,
    pub seeds: Vec<u64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub spacing: Spacing,
    pub shuffle_segments: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            sigma_counts: vec![1, 2, 4, 8, 16, 32, 64],
            windows: vec![32, 64, 128, 256],
            bins: DEFAULT_BINS,
            total_samples: 65_536,
            seeds: (0..20).collect(),
            sigma_min: DEFAULT_SIGMA_MIN,
            sigma_max: DEFAULT_SIGMA_MAX,
            spacing: Spacing::Logarithmic,
            shuffle_segments: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sigma_counts.is_empty() || self.windows.is_empty() || self.seeds.is_empty() {
            return Err(Error::Config("sigma_counts, windows and seeds must be nonempty".into()));
        }
        for &w in &self.windows {
            MeasureConfig { window: w, bins: self.bins, variant: Variant::Bhattacharyya }.validate()?;
            if w >= self.total_samples {
                return Err(Error::Config(format!(
                    "window {w} needs more than {} samples",
                    self.total_samples
                )));
            }
        }
        for &k in &self.sigma_counts {
            self.generator(k, 0).validate()?;
        }
        Ok(())
    }

    fn generator(&self, k: usize, seed: u64) -> SegmentedGeneratorConfig {
        SegmentedGeneratorConfig {
            total_samples: self.total_samples,
            num_sigmas: k,
            sigma_min: self.sigma_min,
            sigma_max: self.sigma_max,
            spacing: self.spacing,
            shuffle_segments: self.shuffle_segments,
            seed: cell_seed(seed, k),
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generator seed for the series of a `(seed, k)` cell.
pub fn cell_seed(seed: u64, k: usize) -> u64 {
    splitmix64(seed ^ splitmix64(k as u64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub window: usize,
    pub seed: u64,
    pub metric: SweepMetric,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub window: usize,
    pub metric: SweepMetric,
    /// Mean over seeds of Spearman(score, log₂ k); `None` when undefined for every seed.
    pub spearman: Option<f64>,
    /// Per-seed Spearman values, in seed order; `None` where undefined.
    pub spearman_per_seed: Vec<Option<f64>>,
    /// `(k, mean score over seeds)` in `sigma_counts` order.
    pub mean_score_per_k: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub config: SweepConfig,
    /// Sorted by `(k, window, seed, metric)`.
    pub rows: Vec<SweepRow>,
    /// Sorted by `(window, metric)`.
    pub summaries: Vec<SweepSummary>,
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;

    let cells: Vec<(usize, u64)> = config
        .sigma_counts
        .iter()
        .flat_map(|&k| config.seeds.iter().map(move |&s| (k, s)))
        .collect();

    let per_cell: Vec<Result<Vec<SweepRow>>> = cells
        .par_iter()
        .map(|&(k, seed)| {
            let series = generate_segmented(&config.generator(k, seed))?;
            let mut rows = Vec::with_capacity(config.windows.len() * 3);
            for &window in &config.windows {
                let cfg = MeasureConfig { window, bins: config.bins, variant: Variant::Bhattacharyya };
                let bc = measure(&series, &cfg)?.coefficient;
                for metric in SweepMetric::ALL {
                    rows.push(SweepRow { k, window, seed, metric, score: metric.score(bc) });
                }
            }
            Ok(rows)
        })
        .collect();

    let mut rows = Vec::with_capacity(cells.len() * config.windows.len() * 3);
    for cell in per_cell {
        rows.extend(cell?);
    }
    rows.sort_by_key(|r| (r.k, r.window, r.seed, r.metric));

    let summaries = summarise(config, &rows);
    Ok(SweepReport { config: config.clone(), rows, summaries })
}

fn summarise(config: &SweepConfig, rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut index: BTreeMap<(usize, SweepMetric, u64, usize), f64> = BTreeMap::new();
    for r in rows {
        index.insert((r.window, r.metric, r.seed, r.k), r.score);
    }

    let mut windows = config.windows.clone();
    windows.sort_unstable();
    windows.dedup();

    let log_k: Vec<f64> = config.sigma_counts.iter().map(|&k| (k as f64).log2()).collect();
    let mut out = Vec::new();
    for &window in &windows {
        for metric in SweepMetric::ALL {
            let spearman_per_seed: Vec<Option<f64>> = config
                .seeds
                .iter()
                .map(|&seed| {
                    let scores: Vec<f64> = config
                        .sigma_counts
                        .iter()
                        .map(|&k| index[&(window, metric, seed, k)])
                        .collect();
                    spearman(&scores, &log_k).ok()
                })
                .collect();
            let defined: Vec<f64> = spearman_per_seed.iter().flatten().copied().collect();
            let spearman = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);

            let mean_score_per_k = config
                .sigma_counts
                .iter()
                .map(|&k| {
                    let total: f64 = config.seeds.iter().map(|&s| index[&(window, metric, s, k)]).sum();
                    (k, total / config.seeds.len() as f64)
                })
                .collect();

            out.push(SweepSummary { window, metric, spearman, spearman_per_seed, mean_score_per_k });
        }
    }
    out
}

impl SweepReport {
    /// `k,window,seed,metric,score` CSV.
    pub fn write_rows_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        let mut buf = String::from("k,window,seed,metric,score\n");
        for r in &self.rows {
            buf.push_str(&format!("{},{},{},{},{}\n", r.k, r.window, r.seed, r.metric, r.score));
        }
        sink.write_all(buf.as_bytes())?;
        sink.flush()?;
        Ok(())
    }

    /// `window,metric,spearman,mean_score_k<k>...` CSV; an undefined Spearman is left empty.
    pub fn write_summary_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        let mut buf = String::from("window,metric,spearman");
        for k in &self.config.sigma_counts {
            buf.push_str(&format!(",mean_score_k{k}"));
        }
        buf.push('\n');
        for s in &self.summaries {
            buf.push_str(&format!("{},{},", s.window, s.metric));
            if let Some(r) = s.spearman {
                buf.push_str(&r.to_string());
            }
            for (_, mean) in &s.mean_score_per_k {
                buf.push_str(&format!(",{mean}"));
            }
            buf.push('\n');
        }
        sink.write_all(buf.as_bytes())?;
        sink.flush()?;
        Ok(())
    }

    pub fn summary(&self, window: usize, metric: SweepMetric) -> Option<&SweepSummary> {
        self.summaries.iter().find(|s| s.window == window && s.metric == metric)
    }

    pub fn score(&self, k: usize, window: usize, seed: u64, metric: SweepMetric) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.k == k && r.window == window && r.seed == seed && r.metric == metric)
            .map(|r| r.score)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            sigma_counts: vec![1, 4, 16],
            windows: vec![16, 64],
            bins: 16,
            total_samples: 4096,
            seeds: vec![3, 4],
            ..Default::default()
        }
    }

    #[test]
    fn single_cell_has_three_rows() {
        let cfg = SweepConfig {
            sigma_counts: vec![4],
            windows: vec![32],
            seeds: vec![1],
            total_samples: 1024,
            ..Default::default()
        };
        let report = run_sweep(&cfg).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.summaries.len(), 3);
        // one k: correlation undefined
        assert!(report.summaries.iter().all(|s| s.spearman.is_none()));
    }

    #[test]
    fn row_count_and_order() {
        let cfg = small();
        let report = run_sweep(&cfg).unwrap();
        assert_eq!(report.rows.len(), 3 * 2 * 2 * 3);
        let keys: Vec<_> = report.rows.iter().map(|r| (r.k, r.window, r.seed, r.metric)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn metrics_consistent_within_cell() {
        let report = run_sweep(&small()).unwrap();
        for chunk in report.rows.chunks(3) {
            let (hb, hh, d) = (chunk[0].score, chunk[1].score, chunk[2].score);
            assert_eq!(chunk[0].metric, SweepMetric::HB);
            assert!((hh - (1.0 - (1.0 - hb).sqrt())).abs() < 1e-12);
            assert!((d - (-hb.ln())).abs() < 1e-12);
        }
    }

    #[test]
    fn windows_share_the_generated_series() {
        let cfg = small();
        let series = generate_segmented(&cfg.generator(4, 3)).unwrap();
        let report = run_sweep(&cfg).unwrap();
        for &w in &cfg.windows {
            let direct = measure(&series, &MeasureConfig { window: w, bins: 16, variant: Variant::Bhattacharyya })
                .unwrap()
                .score;
            assert_eq!(report.score(4, w, 3, SweepMetric::HB), Some(direct));
        }
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let cfg = small();
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let report = pool.install(|| run_sweep(&cfg)).unwrap();
            let mut a = Vec::new();
            report.write_rows_csv(&mut a).unwrap();
            report.write_summary_csv(&mut a).unwrap();
            a
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn validation() {
        let mut cfg = small();
        cfg.windows = vec![4096];
        assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));
        let mut cfg = small();
        cfg.sigma_counts = vec![5000];
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = small();
        cfg.seeds.clear();
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = small();
        cfg.bins = 1;
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn summary_csv_layout() {
        let report = run_sweep(&small()).unwrap();
        let mut out = Vec::new();
        report.write_summary_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "window,metric,spearman,mean_score_k1,mean_score_k4,mean_score_k16"
        );
        assert_eq!(lines.count(), 6);
    }

    #[test]
    fn cell_seed_depends_on_k_and_seed() {
        assert_ne!(cell_seed(0, 1), cell_seed(0, 2));
        assert_ne!(cell_seed(0, 1), cell_seed(1, 1));
        assert_eq!(cell_seed(9, 9), cell_seed(9, 9));
    }
}
