// SPDX-License-Identifier: MIT OR Apache-2.0

//! Divergence, affinity and entropy measures over histograms that share bin
//! edges.
//!
//! Conventions: `0·log(0/x) = 0`, and a term with `p_i > 0, q_i = 0` makes the
//! result `+∞` wherever the formula diverges. `+∞` is an ordinary return value.
//! Results of nonnegative measures are clamped at zero to absorb rounding.

use std::fmt;
use std::str::FromStr;

use crate::distribution::ProbabilityDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Base2,
}

impl LogBase {
    /// Converts a value in nats to this base.
    fn scale(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Base2 => nats / std::f64::consts::LN_2,
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" | "e" | "ln" => Ok(LogBase::Natural),
            "base2" | "2" => Ok(LogBase::Base2),
            other => Err(Error::Parameter(format!(
                "unknown log base `{other}` (expected natural or base2)"
            ))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Natural => "natural",
            LogBase::Base2 => "base2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Kl,
    Renyi,
    Tsallis,
    Jsd,
    Bc,
    Bhattacharyya,
    HellingerPaper,
    HellingerStandard,
    ShannonEntropy,
    RenyiEntropy,
}

impl Metric {
    pub const ALL: [Metric; 10] = [
        Metric::Kl,
        Metric::Renyi,
        Metric::Tsallis,
        Metric::Jsd,
        Metric::Bc,
        Metric::Bhattacharyya,
        Metric::HellingerPaper,
        Metric::HellingerStandard,
        Metric::ShannonEntropy,
        Metric::RenyiEntropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Kl => "kl",
            Metric::Renyi => "renyi",
            Metric::Tsallis => "tsallis",
            Metric::Jsd => "jsd",
            Metric::Bc => "bc",
            Metric::Bhattacharyya => "bhattacharyya",
            Metric::HellingerPaper => "hellinger_paper",
            Metric::HellingerStandard => "hellinger_standard",
            Metric::ShannonEntropy => "shannon_entropy",
            Metric::RenyiEntropy => "renyi_entropy",
        }
    }

    pub fn needs_alpha(self) -> bool {
        matches!(self, Metric::Renyi | Metric::Tsallis | Metric::RenyiEntropy)
    }

    /// Entropies take a single distribution.
    pub fn is_pairwise(self) -> bool {
        !matches!(self, Metric::ShannonEntropy | Metric::RenyiEntropy)
    }

    /// Whether the log base parameter changes the value.
    fn uses_log_base(self) -> bool {
        matches!(
            self,
            Metric::Kl | Metric::Renyi | Metric::ShannonEntropy | Metric::RenyiEntropy
        )
    }

    /// Closed value range, when the metric is bounded.
    pub fn bounds(self) -> Option<(f64, f64)> {
        match self {
            Metric::Bc | Metric::Jsd | Metric::HellingerPaper | Metric::HellingerStandard => {
                Some((0.0, 1.0))
            }
            _ => None,
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Metric::ALL.iter().map(|m| m.name()).collect();
                Error::Parameter(format!("unknown metric `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A metric evaluation with the parameters that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceResult {
    pub metric: Metric,
    /// May be `f64::INFINITY` for unbounded metrics.
    pub value: f64,
    pub alpha: Option<f64>,
    /// Base actually applied. JSD is always base 2; BC, Bhattacharyya,
    /// Hellinger and Tsallis are log-free or fixed to natural log.
    pub log_base: LogBase,
}

impl DivergenceResult {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    pub fn is_bounded(&self) -> bool {
        self.metric.bounds().is_some()
    }
}

fn check_pair(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<()> {
    if p.same_binning(q) {
        Ok(())
    } else {
        Err(Error::BinningMismatch)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha != 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "alpha must be finite, > 0 and != 1, got {alpha}"
        )))
    }
}

fn bc_raw(p: &[f64], q: &[f64]) -> f64 {
    let s: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    s.clamp(0.0, 1.0)
}

/// `Σ √(p_i q_i)`, in `[0, 1]`.
pub fn bhattacharyya_coefficient(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    check_pair(p, q)?;
    Ok(bc_raw(p.masses(), q.masses()))
}

/// `−ln BC`; `+∞` for disjoint supports.
pub fn bhattacharyya_distance(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    Ok(distance_from_coefficient(bhattacharyya_coefficient(p, q)?))
}

pub fn distance_from_coefficient(bc: f64) -> f64 {
    if bc <= 0.0 {
        f64::INFINITY
    } else {
        (-bc.ln()).max(0.0)
    }
}

/// `√(1 − BC)`: 0 for identical distributions, 1 for disjoint ones.
pub fn hellinger_standard_from_coefficient(bc: f64) -> f64 {
    (1.0 - bc).max(0.0).sqrt()
}

/// `1 − √(1 − BC)`: 1 for identical distributions, 0 for disjoint ones.
pub fn hellinger_paper_from_coefficient(bc: f64) -> f64 {
    1.0 - hellinger_standard_from_coefficient(bc)
}

pub fn hellinger_paper(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    Ok(hellinger_paper_from_coefficient(bhattacharyya_coefficient(p, q)?))
}

pub fn hellinger_standard(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    Ok(hellinger_standard_from_coefficient(bhattacharyya_coefficient(p, q)?))
}

fn kl_nats(p: &[f64], q: &[f64]) -> f64 {
    let mut total = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return f64::INFINITY;
        }
        total += a * (a / b).ln();
    }
    total.max(0.0)
}

/// `Σ p_i log(p_i / q_i)`.
pub fn kl_divergence(p: &ProbabilityDistribution, q: &ProbabilityDistribution, log_base: LogBase) -> Result<f64> {
    check_pair(p, q)?;
    Ok(log_base.scale(kl_nats(p.masses(), q.masses())))
}

/// `Σ_{p_i > 0} p_i^α q_i^{1−α}`, with `+∞` when `α > 1` meets `q_i = 0`.
fn alpha_affinity(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    let mut total = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            if alpha > 1.0 {
                return f64::INFINITY;
            }
            continue;
        }
        total += a.powf(alpha) * b.powf(1.0 - alpha);
    }
    total
}

/// Rényi divergence of order `α`: `(1/(α−1)) log Σ p_i^α q_i^{1−α}`.
///
/// Order `½` gives twice the Bhattacharyya distance; `α → 1` tends to KL.
pub fn renyi_divergence(
    p: &ProbabilityDistribution,
    q: &ProbabilityDistribution,
    alpha: f64,
    log_base: LogBase,
) -> Result<f64> {
    check_pair(p, q)?;
    check_alpha(alpha)?;
    let s = alpha_affinity(p.masses(), q.masses(), alpha);
    let nats = if s.is_infinite() || s <= 0.0 {
        f64::INFINITY
    } else {
        (s.ln() / (alpha - 1.0)).max(0.0)
    };
    Ok(log_base.scale(nats))
}

/// Tsallis relative entropy `(1/(1−α))(1 − Σ p_i^α q_i^{1−α})`.
pub fn tsallis_divergence(p: &ProbabilityDistribution, q: &ProbabilityDistribution, alpha: f64) -> Result<f64> {
    check_pair(p, q)?;
    check_alpha(alpha)?;
    let s = alpha_affinity(p.masses(), q.masses(), alpha);
    if s.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(((1.0 - s) / (1.0 - alpha)).max(0.0))
}

/// Base-2 Jensen–Shannon divergence against the midpoint mixture; in `[0, 1]`.
pub fn jensen_shannon_divergence(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    check_pair(p, q)?;
    let mut total = 0.0;
    for (&a, &b) in p.masses().iter().zip(q.masses()) {
        let m = 0.5 * (a + b);
        if a > 0.0 {
            total += 0.5 * a * (a / m).log2();
        }
        if b > 0.0 {
            total += 0.5 * b * (b / m).log2();
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

pub fn shannon_entropy(p: &ProbabilityDistribution, log_base: LogBase) -> f64 {
    let nats: f64 = p
        .masses()
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| -m * m.ln())
        .sum();
    log_base.scale(nats.max(0.0))
}

/// `(1/(1−α)) log Σ p_i^α`.
pub fn renyi_entropy(p: &ProbabilityDistribution, alpha: f64, log_base: LogBase) -> Result<f64> {
    check_alpha(alpha)?;
    let s: f64 = p
        .masses()
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| m.powf(alpha))
        .sum();
    Ok(log_base.scale((s.ln() / (1.0 - alpha)).max(0.0)))
}

/// Evaluates any metric by name. `q` is ignored by the entropies and
/// required by everything else; `alpha` is required by the α-family.
pub fn evaluate(
    metric: Metric,
    p: &ProbabilityDistribution,
    q: Option<&ProbabilityDistribution>,
    alpha: Option<f64>,
    log_base: LogBase,
) -> Result<DivergenceResult> {
    let need_q = || {
        q.ok_or_else(|| Error::Parameter(format!("metric `{metric}` needs a second distribution")))
    };
    let need_alpha =
        || alpha.ok_or_else(|| Error::Parameter(format!("metric `{metric}` needs an alpha")));

    let value = match metric {
        Metric::Kl => kl_divergence(p, need_q()?, log_base)?,
        Metric::Renyi => renyi_divergence(p, need_q()?, need_alpha()?, log_base)?,
        Metric::Tsallis => tsallis_divergence(p, need_q()?, need_alpha()?)?,
        Metric::Jsd => jensen_shannon_divergence(p, need_q()?)?,
        Metric::Bc => bhattacharyya_coefficient(p, need_q()?)?,
        Metric::Bhattacharyya => bhattacharyya_distance(p, need_q()?)?,
        Metric::HellingerPaper => hellinger_paper(p, need_q()?)?,
        Metric::HellingerStandard => hellinger_standard(p, need_q()?)?,
        Metric::ShannonEntropy => shannon_entropy(p, log_base),
        Metric::RenyiEntropy => renyi_entropy(p, need_alpha()?, log_base)?,
    };

    let applied_base = match metric {
        Metric::Jsd => LogBase::Base2,
        m if m.uses_log_base() => log_base,
        _ => LogBase::Natural,
    };
    Ok(DivergenceResult {
        metric,
        value,
        alpha: if metric.needs_alpha() { alpha } else { None },
        log_base: applied_base,
    })
}
