// SPDX-License-Identifier: MIT OR Apache-2.0

//! C ABI over `hetvar`.
//!
//! Conventions:
//! * every fallible function returns an [`HvStatus`]; `HV_STATUS_OK` is 0;
//! * results come back through out-pointers, which are only written on success;
//! * series and distributions are opaque handles owned by the caller and
//!   released with their `*_free` function;
//! * array outputs use a caller buffer plus capacity; the required length is
//!   always written to `out_len`, and `HV_STATUS_BUFFER_TOO_SMALL` is returned
//!   when the buffer is short (pass a null buffer with capacity 0 to query);
//! * after a failure, `hv_last_error_message` returns a description that stays
//!   valid until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hetvar::divergence::{self, LogBase, Metric};
use hetvar::{distribution, local_variance, measure, rank, series, Error, ProbabilityDistribution, TimeSeries};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Parameter = 3,
    Ingestion = 4,
    BinningMismatch = 5,
    Io = 6,
    Internal = 7,
    BufferTooSmall = 8,
    InvalidUtf8 = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvSpacing {
    Linear = 0,
    Logarithmic = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvVariant {
    Bhattacharyya = 0,
    Hellinger = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvLogBase {
    Natural = 0,
    Base2 = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvMetric {
    Kl = 0,
    Renyi = 1,
    Tsallis = 2,
    Jsd = 3,
    Bc = 4,
    Bhattacharyya = 5,
    HellingerPaper = 6,
    HellingerStandard = 7,
    ShannonEntropy = 8,
    RenyiEntropy = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HvGeneratorConfig {
    pub total_samples: usize,
    pub num_sigmas: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub spacing: HvSpacing,
    pub shuffle_segments: bool,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HvMeasureResult {
    pub score: f64,
    /// Bhattacharyya coefficient against the uniform reference.
    pub coefficient: f64,
    pub n_variances: usize,
    /// Nonzero when there are fewer than 10 variances per bin.
    pub sparse: bool,
}

/// Opaque time series handle.
pub struct HvSeries(TimeSeries);

/// Opaque histogram handle.
pub struct HvDistribution(ProbabilityDistribution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(HvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Config(_) => HvStatus::Config,
            Error::Parameter(_) => HvStatus::Parameter,
            Error::Ingestion { .. } => HvStatus::Ingestion,
            Error::BinningMismatch => HvStatus::BinningMismatch,
            Error::Io(_) => HvStatus::Io,
            Error::Internal(_) => HvStatus::Internal,
        };
        Failure(status, format!("{}: {e}", e.category()))
    }
}

fn null(what: &str) -> Failure {
    Failure(HvStatus::NullPointer, format!("null pointer: {what}"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HvStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("panic inside hetvar".into());
            HvStatus::Panic
        }
    }
}

unsafe fn slice<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller guarantees `data` points to `len` readable doubles.
    Ok(unsafe { std::slice::from_raw_parts(data, len) })
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller passes a live handle from this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn path_arg(p: *const c_char) -> Result<String, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    // SAFETY: caller passes a NUL-terminated string.
    let s = unsafe { CStr::from_ptr(p) };
    s.to_str()
        .map(str::to_owned)
        .map_err(|_| Failure(HvStatus::InvalidUtf8, "path is not valid UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null out-pointer supplied by the caller.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn copy_out(values: &[f64], buf: *mut f64, capacity: usize, out_len: *mut usize) -> Result<(), Failure> {
    unsafe { write_out(out_len, values.len(), "out_len")? };
    if capacity < values.len() {
        return Err(Failure(
            HvStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(null("buffer"));
    }
    // SAFETY: `buf` has room for `capacity >= values.len()` doubles.
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len()) };
    Ok(())
}

fn into_handle<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the most recent failure on this thread, or NULL.
#[no_mangle]
pub extern "C" fn hv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn hv_status_name(status: HvStatus) -> *const c_char {
    let name: &'static CStr = match status {
        HvStatus::Ok => c"ok",
        HvStatus::NullPointer => c"null_pointer",
        HvStatus::Config => c"config",
        HvStatus::Parameter => c"parameter",
        HvStatus::Ingestion => c"ingestion",
        HvStatus::BinningMismatch => c"binning",
        HvStatus::Io => c"io",
        HvStatus::Internal => c"internal",
        HvStatus::BufferTooSmall => c"buffer_too_small",
        HvStatus::InvalidUtf8 => c"invalid_utf8",
        HvStatus::Panic => c"panic",
    };
    name.as_ptr()
}

/// Default generator settings (65536 samples, 64 log-spaced sigmas in [0.125, 8]).
#[no_mangle]
pub extern "C" fn hv_generator_config_default() -> HvGeneratorConfig {
    let d = series::SegmentedGeneratorConfig::default();
    HvGeneratorConfig {
        total_samples: d.total_samples,
        num_sigmas: d.num_sigmas,
        sigma_min: d.sigma_min,
        sigma_max: d.sigma_max,
        spacing: HvSpacing::Logarithmic,
        shuffle_segments: d.shuffle_segments,
        seed: d.seed,
    }
}

/// # Safety
/// `samples` must point to `len` doubles; `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_series_from_samples(samples: *const f64, len: usize, out: *mut *mut HvSeries) -> HvStatus {
    guard(|| {
        let data = unsafe { slice(samples, len, "samples")? };
        let s = TimeSeries::new(data.to_vec())?;
        unsafe { write_out(out, into_handle(HvSeries(s)), "out") }
    })
}

/// # Safety
/// `config` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hv_series_generate(config: *const HvGeneratorConfig, out: *mut *mut HvSeries) -> HvStatus {
    guard(|| {
        let c = unsafe { handle(config, "config")? };
        let cfg = series::SegmentedGeneratorConfig {
            total_samples: c.total_samples,
            num_sigmas: c.num_sigmas,
            sigma_min: c.sigma_min,
            sigma_max: c.sigma_max,
            spacing: match c.spacing {
                HvSpacing::Linear => series::Spacing::Linear,
                HvSpacing::Logarithmic => series::Spacing::Logarithmic,
            },
            shuffle_segments: c.shuffle_segments,
            seed: c.seed,
        };
        let s = series::generate_segmented(&cfg)?;
        unsafe { write_out(out, into_handle(HvSeries(s)), "out") }
    })
}

/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_series_read_csv(path: *const c_char, out: *mut *mut HvSeries) -> HvStatus {
    guard(|| {
        let path = unsafe { path_arg(path)? };
        let file = std::fs::File::open(&path).map_err(|e| Failure(HvStatus::Io, format!("io: {path}: {e}")))?;
        let s = series::read_csv(std::io::BufReader::new(file))?;
        unsafe { write_out(out, into_handle(HvSeries(s)), "out") }
    })
}

/// # Safety
/// `series` must be a live handle; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn hv_series_write_csv(series: *const HvSeries, path: *const c_char) -> HvStatus {
    guard(|| {
        let s = unsafe { handle(series, "series")? };
        let path = unsafe { path_arg(path)? };
        let file = std::fs::File::create(&path).map_err(|e| Failure(HvStatus::Io, format!("io: {path}: {e}")))?;
        series::write_csv(&s.0, std::io::BufWriter::new(file))?;
        Ok(())
    })
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hv_series_len(series: *const HvSeries) -> usize {
    unsafe { series.as_ref() }.map_or(0, |s| s.0.len())
}

/// # Safety
/// `series` must be a live handle; `buf` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn hv_series_copy_samples(
    series: *const HvSeries,
    buf: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> HvStatus {
    guard(|| {
        let s = unsafe { handle(series, "series")? };
        unsafe { copy_out(s.0.samples(), buf, capacity, out_len) }
    })
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hv_series_free(series: *mut HvSeries) {
    if !series.is_null() {
        // SAFETY: handle was produced by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Sliding-window population variances (length `len − window + 1`).
///
/// # Safety
/// `series` must be a live handle; `buf` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn hv_local_variance(
    series: *const HvSeries,
    window: usize,
    buf: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> HvStatus {
    guard(|| {
        let s = unsafe { handle(series, "series")? };
        let v = local_variance::local_variance(&s.0, window)?;
        unsafe { copy_out(v.variances(), buf, capacity, out_len) }
    })
}

/// Histogram of nonnegative values over `[0, max]` with `bins` bins.
///
/// # Safety
/// `values` must point to `len` doubles; `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_distribution_estimate(
    values: *const f64,
    len: usize,
    bins: usize,
    out: *mut *mut HvDistribution,
) -> HvStatus {
    guard(|| {
        let data = unsafe { slice(values, len, "values")? };
        let d = distribution::estimate_pdf_from_values(data, bins)?;
        unsafe { write_out(out, into_handle(HvDistribution(d)), "out") }
    })
}

/// Distribution from nonnegative weights on unit bins `[i, i+1)`; weights are normalised.
///
/// # Safety
/// `weights` must point to `len` doubles; `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_distribution_from_weights(
    weights: *const f64,
    len: usize,
    out: *mut *mut HvDistribution,
) -> HvStatus {
    guard(|| {
        let data = unsafe { slice(weights, len, "weights")? };
        let d = ProbabilityDistribution::from_unit_bins(data.to_vec())?;
        unsafe { write_out(out, into_handle(HvDistribution(d)), "out") }
    })
}

/// Uniform masses over the bins of `like`.
///
/// # Safety
/// `like` must be a live handle; `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_distribution_uniform_reference(
    like: *const HvDistribution,
    out: *mut *mut HvDistribution,
) -> HvStatus {
    guard(|| {
        let d = unsafe { handle(like, "like")? };
        let u = distribution::uniform_reference(&d.0);
        unsafe { write_out(out, into_handle(HvDistribution(u)), "out") }
    })
}

/// Bin count; 0 for a null handle.
///
/// # Safety
/// `dist` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hv_distribution_bins(dist: *const HvDistribution) -> usize {
    unsafe { dist.as_ref() }.map_or(0, |d| d.0.bins())
}

/// # Safety
/// `dist` must be a live handle; `buf` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn hv_distribution_copy_masses(
    dist: *const HvDistribution,
    buf: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> HvStatus {
    guard(|| {
        let d = unsafe { handle(dist, "dist")? };
        unsafe { copy_out(d.0.masses(), buf, capacity, out_len) }
    })
}

/// Copies the `bins + 1` edges.
///
/// # Safety
/// `dist` must be a live handle; `buf` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn hv_distribution_copy_edges(
    dist: *const HvDistribution,
    buf: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> HvStatus {
    guard(|| {
        let d = unsafe { handle(dist, "dist")? };
        unsafe { copy_out(d.0.edges(), buf, capacity, out_len) }
    })
}

/// # Safety
/// `dist` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hv_distribution_free(dist: *mut HvDistribution) {
    if !dist.is_null() {
        // SAFETY: handle was produced by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(dist) });
    }
}

fn variant(v: HvVariant) -> measure::Variant {
    match v {
        HvVariant::Bhattacharyya => measure::Variant::Bhattacharyya,
        HvVariant::Hellinger => measure::Variant::Hellinger,
    }
}

/// Full pipeline: local variance, histogram, score against uniform.
///
/// # Safety
/// `series` must be a live handle; `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_measure(
    series: *const HvSeries,
    window: usize,
    bins: usize,
    variant_kind: HvVariant,
    out: *mut HvMeasureResult,
) -> HvStatus {
    guard(|| {
        let s = unsafe { handle(series, "series")? };
        let cfg = measure::MeasureConfig { window, bins, variant: variant(variant_kind) };
        let r = measure::measure(&s.0, &cfg)?;
        let result = HvMeasureResult {
            score: r.score,
            coefficient: r.coefficient,
            n_variances: r.n_variances,
            sparse: r.sparse,
        };
        unsafe { write_out(out, result, "out") }
    })
}

/// # Safety
/// `dist` must be a live handle; `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_measure_from_distribution(
    dist: *const HvDistribution,
    variant_kind: HvVariant,
    out: *mut f64,
) -> HvStatus {
    guard(|| {
        let d = unsafe { handle(dist, "dist")? };
        let score = measure::measure_from_distribution(&d.0, variant(variant_kind));
        unsafe { write_out(out, score, "out") }
    })
}

/// Evaluates a divergence or entropy. `q` may be NULL for the entropies;
/// `alpha` is ignored by metrics without an order. May write `INFINITY`.
///
/// # Safety
/// `p` (and `q` when non-null) must be live handles; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_divergence(
    p: *const HvDistribution,
    q: *const HvDistribution,
    metric: HvMetric,
    alpha: f64,
    log_base: HvLogBase,
    out: *mut f64,
) -> HvStatus {
    guard(|| {
        let p = unsafe { handle(p, "p")? };
        let q = unsafe { q.as_ref() };
        let metric = match metric {
            HvMetric::Kl => Metric::Kl,
            HvMetric::Renyi => Metric::Renyi,
            HvMetric::Tsallis => Metric::Tsallis,
            HvMetric::Jsd => Metric::Jsd,
            HvMetric::Bc => Metric::Bc,
            HvMetric::Bhattacharyya => Metric::Bhattacharyya,
            HvMetric::HellingerPaper => Metric::HellingerPaper,
            HvMetric::HellingerStandard => Metric::HellingerStandard,
            HvMetric::ShannonEntropy => Metric::ShannonEntropy,
            HvMetric::RenyiEntropy => Metric::RenyiEntropy,
        };
        let base = match log_base {
            HvLogBase::Natural => LogBase::Natural,
            HvLogBase::Base2 => LogBase::Base2,
        };
        let r = divergence::evaluate(metric, &p.0, q.map(|d| &d.0), Some(alpha), base)?;
        unsafe { write_out(out, r.value, "out") }
    })
}

/// Spearman rank correlation of two equal-length sequences.
///
/// # Safety
/// `xs` and `ys` must point to `len` doubles; `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_spearman(xs: *const f64, ys: *const f64, len: usize, out: *mut f64) -> HvStatus {
    guard(|| {
        let xs = unsafe { slice(xs, len, "xs")? };
        let ys = unsafe { slice(ys, len, "ys")? };
        let r = rank::spearman(xs, ys)?;
        unsafe { write_out(out, r, "out") }
    })
}
