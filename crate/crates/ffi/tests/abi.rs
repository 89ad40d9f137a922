// SPDX-License-Identifier: MIT OR Apache-2.0

use std::ffi::{CStr, CString};
use std::ptr;

use hetvar_ffi::*;

fn last_error() -> String {
    let p = hv_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn generated(num_sigmas: usize, seed: u64) -> *mut HvSeries {
    let mut cfg = hv_generator_config_default();
    cfg.total_samples = 8192;
    cfg.num_sigmas = num_sigmas;
    cfg.seed = seed;
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { hv_series_generate(&cfg, &mut s) }, HvStatus::Ok);
    s
}

#[test]
fn measure_through_handles() {
    let s = generated(16, 3);
    assert_eq!(unsafe { hv_series_len(s) }, 8192);

    let mut r = HvMeasureResult::default();
    assert_eq!(unsafe { hv_measure(s, 128, 64, HvVariant::Bhattacharyya, &mut r) }, HvStatus::Ok);
    assert!((0.0..=1.0).contains(&r.score));
    assert_eq!(r.score, r.coefficient);
    assert_eq!(r.n_variances, 8192 - 127);
    assert!(!r.sparse);

    // Same score via the explicit stages.
    let mut len = 0usize;
    assert_eq!(unsafe { hv_local_variance(s, 128, ptr::null_mut(), 0, &mut len) }, HvStatus::BufferTooSmall);
    assert_eq!(len, 8192 - 127);
    let mut v = vec![0.0; len];
    assert_eq!(unsafe { hv_local_variance(s, 128, v.as_mut_ptr(), v.len(), &mut len) }, HvStatus::Ok);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { hv_distribution_estimate(v.as_ptr(), v.len(), 64, &mut d) }, HvStatus::Ok);
    let mut score = 0.0;
    assert_eq!(unsafe { hv_measure_from_distribution(d, HvVariant::Bhattacharyya, &mut score) }, HvStatus::Ok);
    assert_eq!(score, r.score);

    let mut hh = HvMeasureResult::default();
    assert_eq!(unsafe { hv_measure(s, 128, 64, HvVariant::Hellinger, &mut hh) }, HvStatus::Ok);
    assert!((hh.score - (1.0 - (1.0 - r.coefficient).sqrt())).abs() < 1e-15);

    unsafe {
        hv_distribution_free(d);
        hv_series_free(s);
    }
}

#[test]
fn divergences_and_entropy() {
    let mut p = ptr::null_mut();
    let mut q = ptr::null_mut();
    unsafe {
        assert_eq!(hv_distribution_from_weights([1.0, 0.0].as_ptr(), 2, &mut p), HvStatus::Ok);
        assert_eq!(hv_distribution_from_weights([0.0, 1.0].as_ptr(), 2, &mut q), HvStatus::Ok);
    }
    let mut out = f64::NAN;
    let st = unsafe { hv_divergence(p, q, HvMetric::Bhattacharyya, 0.0, HvLogBase::Natural, &mut out) };
    assert_eq!(st, HvStatus::Ok);
    assert_eq!(out, f64::INFINITY);

    let st = unsafe { hv_divergence(p, p, HvMetric::Bc, 0.0, HvLogBase::Natural, &mut out) };
    assert_eq!(st, HvStatus::Ok);
    assert_eq!(out, 1.0);

    let mut u = ptr::null_mut();
    assert_eq!(unsafe { hv_distribution_uniform_reference(p, &mut u) }, HvStatus::Ok);
    let st = unsafe { hv_divergence(u, ptr::null(), HvMetric::ShannonEntropy, 0.0, HvLogBase::Base2, &mut out) };
    assert_eq!(st, HvStatus::Ok);
    assert!((out - 1.0).abs() < 1e-15);

    // Pairwise metric without q.
    let st = unsafe { hv_divergence(p, ptr::null(), HvMetric::Kl, 0.0, HvLogBase::Natural, &mut out) };
    assert_ne!(st, HvStatus::Ok);
    assert!(!last_error().is_empty());

    // Renyi order 1 is rejected.
    let st = unsafe { hv_divergence(p, q, HvMetric::Renyi, 1.0, HvLogBase::Natural, &mut out) };
    assert_eq!(st, HvStatus::Parameter);

    unsafe {
        hv_distribution_free(p);
        hv_distribution_free(q);
        hv_distribution_free(u);
    }
}

#[test]
fn binning_mismatch_status() {
    let mut p = ptr::null_mut();
    let mut q = ptr::null_mut();
    unsafe {
        hv_distribution_from_weights([1.0, 1.0].as_ptr(), 2, &mut p);
        hv_distribution_from_weights([1.0, 1.0, 1.0].as_ptr(), 3, &mut q);
    }
    let mut out = 0.0;
    let st = unsafe { hv_divergence(p, q, HvMetric::Jsd, 0.0, HvLogBase::Natural, &mut out) };
    assert_eq!(st, HvStatus::BinningMismatch);
    assert_eq!(out, 0.0);
    unsafe {
        hv_distribution_free(p);
        hv_distribution_free(q);
    }
}

#[test]
fn distribution_accessors() {
    let vals = [0.0, 1.0, 2.0, 3.0, 4.0];
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { hv_distribution_estimate(vals.as_ptr(), vals.len(), 4, &mut d) }, HvStatus::Ok);
    assert_eq!(unsafe { hv_distribution_bins(d) }, 4);
    let mut buf = [0.0; 5];
    let mut len = 0;
    assert_eq!(unsafe { hv_distribution_copy_edges(d, buf.as_mut_ptr(), 5, &mut len) }, HvStatus::Ok);
    assert_eq!(buf, [0.0, 1.0, 2.0, 3.0, 4.0]);
    assert_eq!(unsafe { hv_distribution_copy_masses(d, buf.as_mut_ptr(), 5, &mut len) }, HvStatus::Ok);
    assert_eq!(len, 4);
    assert_eq!(&buf[..4], &[0.2, 0.2, 0.2, 0.4]);
    unsafe { hv_distribution_free(d) };
}

#[test]
fn invalid_inputs() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { hv_series_from_samples(ptr::null(), 4, &mut s) }, HvStatus::NullPointer);
    assert!(s.is_null());
    assert_eq!(unsafe { hv_series_from_samples([1.0, f64::NAN].as_ptr(), 2, &mut s) }, HvStatus::Parameter);
    assert!(last_error().starts_with("parameter"));

    let data = [1.0, 2.0, 3.0];
    assert_eq!(unsafe { hv_series_from_samples(data.as_ptr(), 3, &mut s) }, HvStatus::Ok);
    let mut r = HvMeasureResult::default();
    assert_eq!(unsafe { hv_measure(s, 8, 4, HvVariant::Hellinger, &mut r) }, HvStatus::Parameter);
    assert_eq!(unsafe { hv_measure(ptr::null(), 2, 4, HvVariant::Hellinger, &mut r) }, HvStatus::NullPointer);

    let mut cfg = hv_generator_config_default();
    cfg.sigma_min = -1.0;
    let mut g = ptr::null_mut();
    assert_ne!(unsafe { hv_series_generate(&cfg, &mut g) }, HvStatus::Ok);
    assert!(g.is_null());

    unsafe {
        hv_series_free(s);
        hv_series_free(ptr::null_mut());
        hv_distribution_free(ptr::null_mut());
    }
}

#[test]
fn csv_round_trip_and_errors() {
    let dir = std::env::temp_dir().join(format!("hetvar-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = CString::new(dir.join("s.csv").to_str().unwrap()).unwrap();

    let s = generated(4, 11);
    assert_eq!(unsafe { hv_series_write_csv(s, file.as_ptr()) }, HvStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { hv_series_read_csv(file.as_ptr(), &mut back) }, HvStatus::Ok);

    let n = unsafe { hv_series_len(s) };
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut len = 0;
    unsafe {
        assert_eq!(hv_series_copy_samples(s, a.as_mut_ptr(), n, &mut len), HvStatus::Ok);
        assert_eq!(hv_series_copy_samples(back, b.as_mut_ptr(), n, &mut len), HvStatus::Ok);
    }
    assert_eq!(a, b);

    let bad = dir.join("bad.csv");
    std::fs::write(&bad, "value\n1\nx\n").unwrap();
    let bad = CString::new(bad.to_str().unwrap()).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { hv_series_read_csv(bad.as_ptr(), &mut t) }, HvStatus::Ingestion);
    assert!(last_error().contains("row 2"));

    let missing = CString::new("/no/such/dir/x.csv").unwrap();
    assert_eq!(unsafe { hv_series_read_csv(missing.as_ptr(), &mut t) }, HvStatus::Io);

    unsafe {
        hv_series_free(s);
        hv_series_free(back);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn spearman_and_status_names() {
    let xs = [1.0, 2.0, 3.0, 4.0];
    let ys = [10.0, 20.0, 15.0, 40.0];
    let mut r = 0.0;
    assert_eq!(unsafe { hv_spearman(xs.as_ptr(), ys.as_ptr(), 4, &mut r) }, HvStatus::Ok);
    assert!((r - 0.8).abs() < 1e-12);
    assert_eq!(unsafe { hv_spearman(xs.as_ptr(), xs.as_ptr(), 1, &mut r) }, HvStatus::Parameter);

    let name = unsafe { CStr::from_ptr(hv_status_name(HvStatus::BinningMismatch)) };
    assert_eq!(name.to_str().unwrap(), "binning");
}

#[test]
fn header_declares_entry_points() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hetvar.h")).unwrap();
    for sym in [
        "hv_series_generate",
        "hv_measure",
        "hv_divergence",
        "hv_last_error_message",
        "typedef struct HvSeries HvSeries;",
        "HV_STATUS_OK = 0",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}
