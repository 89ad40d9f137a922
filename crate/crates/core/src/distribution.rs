// SPDX-License-Identifier: MIT OR Apache-2.0

//! Histogram distributions over variance space.

use std::io::Write;

use crate::error::{Error, Result};
use crate::local_variance::LocalVarianceSeries;

pub const DEFAULT_BINS: usize = 64;

/// Masses must sum to one within this tolerance.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A normalised histogram: `B + 1` strictly increasing edges and `B` masses.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    edges: Vec<f64>,
    masses: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Builds a distribution, checking every invariant (including that the
    /// masses already sum to one).
    pub fn new(edges: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        Self::check_shape(&edges, &masses)?;
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Parameter(format!("masses sum to {total}, expected 1")));
        }
        Ok(Self { edges, masses })
    }

    /// Builds a distribution from nonnegative weights, normalising them.
    pub fn from_weights(edges: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::check_shape(&edges, &weights)?;
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Parameter("weights must have a positive finite sum".into()));
        }
        let masses = weights.iter().map(|w| w / total).collect();
        Ok(Self { edges, masses })
    }

    /// Weights over unit-width bins `[0, 1), [1, 2), …`.
    pub fn from_unit_bins(weights: Vec<f64>) -> Result<Self> {
        let edges = (0..=weights.len()).map(|i| i as f64).collect();
        Self::from_weights(edges, weights)
    }

    fn check_shape(edges: &[f64], masses: &[f64]) -> Result<()> {
        if masses.is_empty() {
            return Err(Error::Parameter("distribution needs at least one bin".into()));
        }
        if edges.len() != masses.len() + 1 {
            return Err(Error::Parameter(format!(
                "{} masses need {} edges, got {}",
                masses.len(),
                masses.len() + 1,
                edges.len()
            )));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("edges must be finite and strictly increasing".into()));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::Parameter("masses must be finite and nonnegative".into()));
        }
        Ok(())
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn same_binning(&self, other: &Self) -> bool {
        self.edges == other.edges
    }

    /// Writes `bin_midpoint,mass` CSV.
    pub fn write_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        let mut buf = String::from("bin_midpoint,mass\n");
        for (mid, mass) in self.midpoints().iter().zip(&self.masses) {
            buf.push_str(&format!("{mid},{mass}\n"));
        }
        sink.write_all(buf.as_bytes())?;
        sink.flush()?;
        Ok(())
    }
}

/// Reads a distribution from `bin_midpoint,mass` or single-column `mass` CSV.
///
/// Edges are rebuilt halfway between consecutive midpoints, extending the
/// outer bins symmetrically; a lone midpoint gets a unit-width bin (a
/// `mass`-only file uses unit bins `[i, i+1)`). Masses are renormalised.
pub fn read_csv<R: std::io::Read>(source: R) -> Result<ProbabilityDistribution> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::ingestion(None, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let with_midpoints = match headers.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["mass"] => false,
        ["bin_midpoint", "mass"] => true,
        _ => {
            return Err(Error::ingestion(
                None,
                format!("expected header `bin_midpoint,mass` or `mass`, found `{}`", headers.join(",")),
            ))
        }
    };

    let parse = |raw: &str, row: usize| -> Result<f64> {
        let v: f64 = raw
            .parse()
            .map_err(|_| Error::ingestion(Some(row), format!("cannot parse `{raw}` as a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::ingestion(Some(row), format!("non-finite value `{raw}`")))
        }
    };

    let mut mids = Vec::new();
    let mut masses = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::ingestion(Some(row), e.to_string()))?;
        let mass = parse(record.get(usize::from(with_midpoints)).unwrap_or_default(), row)?;
        if mass < 0.0 {
            return Err(Error::ingestion(Some(row), "negative mass"));
        }
        if with_midpoints {
            mids.push(parse(record.get(0).unwrap_or_default(), row)?);
        }
        masses.push(mass);
    }
    if masses.is_empty() {
        return Err(Error::ingestion(None, "no data rows"));
    }

    let edges = if with_midpoints {
        edges_from_midpoints(&mids)?
    } else {
        (0..=masses.len()).map(|i| i as f64).collect()
    };
    ProbabilityDistribution::from_weights(edges, masses)
}

fn edges_from_midpoints(mids: &[f64]) -> Result<Vec<f64>> {
    if mids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ingestion(None, "bin midpoints must be strictly increasing"));
    }
    if mids.len() == 1 {
        return Ok(vec![mids[0] - 0.5, mids[0] + 0.5]);
    }
    let n = mids.len();
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(mids[0] - 0.5 * (mids[1] - mids[0]));
    edges.extend(mids.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    edges.push(mids[n - 1] + 0.5 * (mids[n - 1] - mids[n - 2]));
    Ok(edges)
}

/// Histogram of `variances` over `[0, max]` split into `bins` equal bins.
pub fn estimate_pdf(variances: &LocalVarianceSeries, bins: usize) -> Result<ProbabilityDistribution> {
    estimate_pdf_from_values(variances.variances(), bins)
}

/// Slice form of [`estimate_pdf`]. Values must be finite and nonnegative.
///
/// Bin `i` covers `[edges[i], edges[i+1])`; the last bin also includes its
/// right edge. All-zero input uses the support `[0, 1]`.
pub fn estimate_pdf_from_values(values: &[f64], bins: usize) -> Result<ProbabilityDistribution> {
    if values.is_empty() {
        return Err(Error::Parameter("cannot build a histogram from no values".into()));
    }
    if bins == 0 {
        return Err(Error::Parameter("bins must be >= 1".into()));
    }
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::Parameter("variances must be finite and nonnegative".into()));
    }

    let max = values.iter().copied().fold(0.0, f64::max);
    let upper = if max > 0.0 { max } else { 1.0 };
    let b = bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|i| upper * (i as f64) / b).collect();
    edges[bins] = upper;
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(format!(
            "variance support [0, {upper:e}] is too narrow for {bins} bins"
        )));
    }

    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = ((v / upper) * b).floor() as usize;
        counts[idx.min(bins - 1)] += 1;
    }

    let total = values.len() as f64;
    let masses = counts.into_iter().map(|c| c as f64 / total).collect();
    Ok(ProbabilityDistribution { edges, masses })
}

/// Uniform masses on the edges of `like`; the discretised, truncated
/// stand-in for an improper uniform over `[0, ∞)`.
pub fn uniform_reference(like: &ProbabilityDistribution) -> ProbabilityDistribution {
    let b = like.bins();
    ProbabilityDistribution {
        edges: like.edges.clone(),
        masses: vec![1.0 / b as f64; b],
    }
}
