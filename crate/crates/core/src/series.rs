// SPDX-License-Identifier: MIT OR Apache-2.0

//! Time-series container, CSV I/O and the seeded segmented-variance generator.
//!
//! # Reproducibility
//!
//! The generator draws from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `SeedableRng::seed_from_u64`. Standard normals come from the Box–Muller
//! transform applied to consecutive pairs of 53-bit uniforms, using both the
//! cosine and sine outputs. Segment shuffling is a Fisher–Yates pass drawn from
//! the same stream *before* any normal is sampled. None of these steps depend on
//! `rand` distribution internals, so output is stable across `rand` releases.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// An ordered sequence of finite samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    /// Raw `t` column, kept verbatim when the source CSV had one.
    times: Option<Vec<String>>,
    pub name: Option<String>,
    pub metadata: BTreeMap<String, String>,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Parameter("time series must contain at least one sample".into()));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::Parameter(format!("sample {i} is not finite")));
        }
        Ok(Self {
            samples,
            times: None,
            name: None,
            metadata: BTreeMap::new(),
        })
    }

    /// Attaches a `t` column. Its length must match the sample count.
    pub fn with_times(mut self, times: Vec<String>) -> Result<Self> {
        if times.len() != self.samples.len() {
            return Err(Error::Parameter(format!(
                "time column has {} entries but series has {} samples",
                times.len(),
                self.samples.len()
            )));
        }
        self.times = Some(times);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn times(&self) -> Option<&[String]> {
        self.times.as_deref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Returns a copy with `offset` added to every sample.
    pub fn offset(&self, offset: f64) -> Result<Self> {
        let mut out = Self::new(self.samples.iter().map(|x| x + offset).collect())?;
        out.times = self.times.clone();
        Ok(out)
    }

    /// Returns a copy with every sample multiplied by `factor`.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        let mut out = Self::new(self.samples.iter().map(|x| x * factor).collect())?;
        out.times = self.times.clone();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    Linear,
    #[default]
    Logarithmic,
}

impl std::str::FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "log" | "logarithmic" => Ok(Spacing::Logarithmic),
            other => Err(Error::Config(format!(
                "unknown spacing `{other}` (expected linear or logarithmic)"
            ))),
        }
    }
}

impl std::fmt::Display for Spacing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Logarithmic => "logarithmic",
        })
    }
}

pub const DEFAULT_SIGMA_MIN: f64 = 0.125;
pub const DEFAULT_SIGMA_MAX: f64 = 8.0;

/// Parameters of the piecewise-constant-variance Gaussian generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedGeneratorConfig {
    pub total_samples: usize,
    pub num_sigmas: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub spacing: Spacing,
    pub shuffle_segments: bool,
    pub seed: u64,
}

impl Default for SegmentedGeneratorConfig {
    fn default() -> Self {
        Self {
            total_samples: 65_536,
            num_sigmas: 64,
            sigma_min: DEFAULT_SIGMA_MIN,
            sigma_max: DEFAULT_SIGMA_MAX,
            spacing: Spacing::Logarithmic,
            shuffle_segments: false,
            seed: 0,
        }
    }
}

impl SegmentedGeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.total_samples == 0 {
            return Err(Error::Config("total_samples must be positive".into()));
        }
        if self.num_sigmas == 0 {
            return Err(Error::Config("num_sigmas must be positive".into()));
        }
        if self.num_sigmas > self.total_samples {
            return Err(Error::Config(format!(
                "num_sigmas ({}) exceeds total_samples ({})",
                self.num_sigmas, self.total_samples
            )));
        }
        if !(self.sigma_min.is_finite() && self.sigma_min > 0.0) {
            return Err(Error::Config("sigma_min must be a positive finite number".into()));
        }
        if !(self.sigma_max.is_finite() && self.sigma_max >= self.sigma_min) {
            return Err(Error::Config("sigma_max must be finite and >= sigma_min".into()));
        }
        Ok(())
    }

    /// The `k` standard deviations in ascending order.
    pub fn sigmas(&self) -> Vec<f64> {
        let k = self.num_sigmas;
        if k == 1 {
            return vec![self.sigma_min];
        }
        let last = (k - 1) as f64;
        let mut out: Vec<f64> = (0..k)
            .map(|j| {
                let t = j as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.sigma_min + (self.sigma_max - self.sigma_min) * t,
                    Spacing::Logarithmic => {
                        let (lo, hi) = (self.sigma_min.ln(), self.sigma_max.ln());
                        (lo + (hi - lo) * t).exp()
                    }
                }
            })
            .collect();
        out[0] = self.sigma_min;
        out[k - 1] = self.sigma_max;
        out
    }

    /// Segment lengths; the first `total_samples % k` segments are one longer.
    pub fn segment_lengths(&self) -> Vec<usize> {
        let k = self.num_sigmas;
        let base = self.total_samples / k;
        let extra = self.total_samples % k;
        (0..k).map(|j| base + usize::from(j < extra)).collect()
    }
}

/// Uniform in [0, 1) with 53 bits of precision.
fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Unbiased index in `0..n` by rejection sampling.
fn uniform_index(rng: &mut impl RngCore, n: usize) -> usize {
    let n = n as u64;
    let zone = u64::MAX - (u64::MAX % n);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return (x % n) as usize;
        }
    }
}

fn fill_standard_normal(rng: &mut impl RngCore, out: &mut [f64]) {
    let mut chunks = out.chunks_mut(2);
    for pair in &mut chunks {
        // u1 in (0, 1] keeps ln finite
        let u1 = 1.0 - unit_f64(rng);
        let u2 = unit_f64(rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        pair[0] = r * theta.cos();
        if let Some(second) = pair.get_mut(1) {
            *second = r * theta.sin();
        }
    }
}

/// Generates a zero-mean Gaussian series with `num_sigmas` contiguous
/// constant-variance segments.
pub fn generate_segmented(config: &SegmentedGeneratorConfig) -> Result<TimeSeries> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut sigmas = config.sigmas();
    if config.shuffle_segments {
        for i in (1..sigmas.len()).rev() {
            let j = uniform_index(&mut rng, i + 1);
            sigmas.swap(i, j);
        }
    }

    let mut samples = vec![0.0; config.total_samples];
    fill_standard_normal(&mut rng, &mut samples);

    let mut start = 0;
    for (len, sigma) in config.segment_lengths().into_iter().zip(&sigmas) {
        for x in &mut samples[start..start + len] {
            *x *= sigma;
        }
        start += len;
    }

    let mut series = TimeSeries::new(samples)?.with_name("segmented");
    let meta = &mut series.metadata;
    meta.insert("generator".into(), "segmented-gaussian".into());
    meta.insert("rng".into(), "chacha8".into());
    meta.insert("seed".into(), config.seed.to_string());
    meta.insert("total_samples".into(), config.total_samples.to_string());
    meta.insert("num_sigmas".into(), config.num_sigmas.to_string());
    meta.insert("sigma_min".into(), config.sigma_min.to_string());
    meta.insert("sigma_max".into(), config.sigma_max.to_string());
    meta.insert("spacing".into(), config.spacing.to_string());
    meta.insert("shuffle_segments".into(), config.shuffle_segments.to_string());
    Ok(series)
}

/// Reads a `value` or `t,value` CSV.
pub fn read_csv<R: Read>(source: R) -> Result<TimeSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader
        .headers()
        .map_err(|e| csv_error(e, None))?
        .iter()
        .map(str::to_owned)
        .collect::<Vec<_>>();
    let has_time = match headers.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["value"] => false,
        ["t", "value"] => true,
        [""] | [] => return Err(Error::ingestion(None, "empty file")),
        _ => {
            return Err(Error::ingestion(
                None,
                format!("expected header `value` or `t,value`, found `{}`", headers.join(",")),
            ))
        }
    };

    let mut samples = Vec::new();
    let mut times = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| csv_error(e, Some(row)))?;
        let field = if has_time { record.get(1) } else { record.get(0) };
        let raw = field.ok_or_else(|| Error::ingestion(Some(row), "missing value field"))?;
        let value: f64 = raw
            .parse()
            .map_err(|_| Error::ingestion(Some(row), format!("cannot parse `{raw}` as a number")))?;
        if !value.is_finite() {
            return Err(Error::ingestion(Some(row), format!("non-finite value `{raw}`")));
        }
        if has_time {
            times.push(record.get(0).unwrap_or_default().to_owned());
        }
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(Error::ingestion(None, "no data rows"));
    }

    let series = TimeSeries::new(samples)?;
    if has_time {
        series.with_times(times)
    } else {
        Ok(series)
    }
}

fn csv_error(err: csv::Error, row: Option<usize>) -> Error {
    let message = err.to_string();
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        _ => Error::ingestion(row, message),
    }
}

/// Writes the series as CSV using shortest round-trip float formatting.
pub fn write_csv<W: Write>(series: &TimeSeries, mut sink: W) -> Result<()> {
    let mut buf = String::with_capacity(series.len() * 20);
    match series.times() {
        Some(times) => {
            buf.push_str("t,value\n");
            for (t, x) in times.iter().zip(series.samples()) {
                buf.push_str(t);
                buf.push(',');
                buf.push_str(&x.to_string());
                buf.push('\n');
            }
        }
        None => {
            buf.push_str("value\n");
            for x in series.samples() {
                buf.push_str(&x.to_string());
                buf.push('\n');
            }
        }
    }
    sink.write_all(buf.as_bytes())?;
    sink.flush()?;
    Ok(())
}
