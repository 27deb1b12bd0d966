use std::ffi::CStr;
use std::f64::consts::PI;
use std::ptr;

use alif::alif::{alif_decompose, AlifConfig};
use alif::iterfilt::{if_decompose, IfConfig};
use alif::signal::Signal;
use alif_ffi::*;

fn two_tones(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let x = i as f64 / n as f64;
            (2.0 * PI * 40.0 * x).sin() + 0.8 * (2.0 * PI * 5.0 * x).cos()
        })
        .collect()
}

fn last_error() -> Option<String> {
    let p = alif_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn components(d: *const AlifDecomposition) -> Vec<Vec<f64>> {
    unsafe {
        let n = alif_decomposition_len(d);
        let mut out = Vec::new();
        for k in 0..alif_decomposition_imf_count(d) {
            let mut buf = vec![0.0; n];
            assert_eq!(alif_decomposition_copy_imf(d, k, buf.as_mut_ptr(), n), AlifStatus::Ok);
            out.push(buf);
        }
        let mut rem = vec![0.0; n];
        assert_eq!(alif_decomposition_copy_remainder(d, rem.as_mut_ptr(), n), AlifStatus::Ok);
        out.push(rem);
        out
    }
}

#[test]
fn if_handle_matches_library() {
    let v = two_tones(1024);
    let dx = 1.0 / 1024.0;
    let mut d = ptr::null_mut();
    let status = unsafe { alif_if_decompose(v.as_ptr(), v.len(), dx, ptr::null(), &mut d) };
    assert_eq!(status, AlifStatus::Ok, "{:?}", last_error());
    assert!(last_error().is_none());

    let direct = if_decompose(&Signal::new(v.clone(), dx, 0.0).unwrap(), &IfConfig::default()).unwrap();
    let got = components(d);
    assert_eq!(got.len(), direct.imfs.len() + 1);
    for (g, w) in got.iter().zip(direct.imfs.iter().chain([&direct.remainder])) {
        assert_eq!(g.as_slice(), w.samples());
    }
    for i in 0..v.len() {
        let sum: f64 = got.iter().map(|c| c[i]).sum();
        assert!((sum - v[i]).abs() < 1e-12);
    }

    let mut diag = AlifImfDiagnostics {
        iterations: 0,
        final_sd: 0.0,
        mask_half_length: 0.0,
        eps_product: 0.0,
        delta_product: 0.0,
    };
    assert_eq!(unsafe { alif_decomposition_imf_diagnostics(d, 0, &mut diag) }, AlifStatus::Ok);
    assert_eq!(diag.iterations, direct.diagnostics[0].iterations);
    assert!(diag.eps_product.is_nan() && diag.delta_product.is_nan());

    let mut stop = AlifStopReason::MaxImfs;
    assert_eq!(unsafe { alif_decomposition_stop_reason(d, &mut stop) }, AlifStatus::Ok);
    assert_eq!(format!("{stop:?}").to_lowercase(), direct.stop.as_str().replace('_', ""));
    unsafe { alif_decomposition_free(d) };
}

#[test]
fn alif_handle_matches_library() {
    let v = two_tones(1024);
    let mut d = ptr::null_mut();
    let opts = alif_alif_options_default();
    let status = unsafe { alif_alif_decompose(v.as_ptr(), v.len(), 1.0, &opts, &mut d) };
    assert_eq!(status, AlifStatus::Ok, "{:?}", last_error());
    let direct = alif_decompose(&Signal::new(v, 1.0, 0.0).unwrap(), &AlifConfig::default()).unwrap();
    let got = components(d);
    assert_eq!(got.len(), direct.imfs.len() + 1);
    assert_eq!(got[0].as_slice(), direct.imfs[0].samples());
    let mut diag = unsafe { std::mem::zeroed::<AlifImfDiagnostics>() };
    assert_eq!(unsafe { alif_decomposition_imf_diagnostics(d, 0, &mut diag) }, AlifStatus::Ok);
    assert!(diag.eps_product.is_finite() && diag.delta_product.is_finite());
    unsafe { alif_decomposition_free(d) };
}

#[test]
fn defaults_mirror_library() {
    let o = alif_if_options_default();
    let c = IfConfig::default();
    assert_eq!((o.chi, o.max_inner, o.max_imfs), (c.chi, c.max_inner, c.max_imfs));
    assert_eq!(o.boundary, AlifBoundary::Antisymmetric as i32);
    assert_eq!(o.filter.preset, AlifPreset::Bump as i32);
    let a = alif_alif_options_default();
    assert_eq!(a.mask_multiplier, AlifConfig::default().mask_multiplier);
    assert!(a.uniform_chi.is_nan());
    assert_eq!(a.smoothing, AlifSmoothing::IfTrend as i32);
}

#[test]
fn null_pointers_are_reported() {
    let v = two_tones(512);
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(alif_if_decompose(ptr::null(), 10, 1.0, ptr::null(), &mut d), AlifStatus::NullPointer);
        assert!(d.is_null());
        assert!(last_error().unwrap().contains("samples"));
        assert_eq!(
            alif_if_decompose(v.as_ptr(), v.len(), 1.0, ptr::null(), ptr::null_mut()),
            AlifStatus::NullPointer
        );
        let mut buf = [0.0; 4];
        assert_eq!(alif_decomposition_copy_remainder(ptr::null(), buf.as_mut_ptr(), 4), AlifStatus::NullPointer);
        assert_eq!(alif_decomposition_len(ptr::null()), 0);
        assert_eq!(alif_decomposition_imf_count(ptr::null()), 0);
        alif_decomposition_free(ptr::null_mut());
    }
}

#[test]
fn bad_arguments_map_to_status_codes() {
    let v = two_tones(512);
    let mut d = ptr::null_mut();
    unsafe {
        let mut opts = alif_if_options_default();
        opts.boundary = 17;
        assert_eq!(alif_if_decompose(v.as_ptr(), v.len(), 1.0, &opts, &mut d), AlifStatus::InvalidArgument);
        assert!(last_error().unwrap().contains("17"));

        let mut opts = alif_if_options_default();
        opts.chi = -1.0;
        assert_eq!(alif_if_decompose(v.as_ptr(), v.len(), 1.0, &opts, &mut d), AlifStatus::InvalidConfig);

        let mut opts = alif_alif_options_default();
        opts.filter.beta = -0.5;
        assert_eq!(alif_alif_decompose(v.as_ptr(), v.len(), 1.0, &opts, &mut d), AlifStatus::InvalidConfig);

        assert_eq!(alif_if_decompose(v.as_ptr(), v.len(), 0.0, ptr::null(), &mut d), AlifStatus::InvalidArgument);
        assert!(d.is_null());

        let mut omega = vec![0.0; v.len()];
        let status = alif_instantaneous_frequency(v.as_ptr(), v.len(), 1.0, 5, 2.0, omega.as_mut_ptr(), v.len());
        assert_eq!(status, AlifStatus::InvalidArgument);
    }
}

#[test]
fn copies_check_bounds() {
    let v = two_tones(512);
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(alif_if_decompose(v.as_ptr(), v.len(), 1.0, ptr::null(), &mut d), AlifStatus::Ok);
        let mut short = vec![0.0; 100];
        assert_eq!(alif_decomposition_copy_imf(d, 0, short.as_mut_ptr(), 100), AlifStatus::BufferTooSmall);
        assert!(last_error().unwrap().contains("100"));
        let mut buf = vec![0.0; 512];
        let count = alif_decomposition_imf_count(d);
        assert_eq!(alif_decomposition_copy_imf(d, count, buf.as_mut_ptr(), 512), AlifStatus::InvalidArgument);
        assert_eq!(alif_decomposition_copy_imf(d, 0, ptr::null_mut(), 512), AlifStatus::NullPointer);
        alif_decomposition_free(d);
    }
}

#[test]
fn instantaneous_frequency_of_a_tone() {
    let n = 2048;
    let dx = 0.01;
    let omega0 = 3.0;
    let v: Vec<f64> = (0..n).map(|i| (omega0 * i as f64 * dx).cos()).collect();
    for method in [AlifFreqMethod::Local, AlifFreqMethod::Hilbert] {
        let mut omega = vec![0.0; n];
        let status = unsafe {
            alif_instantaneous_frequency(v.as_ptr(), n, dx, method as i32, 2.0, omega.as_mut_ptr(), n)
        };
        assert_eq!(status, AlifStatus::Ok, "{:?}", last_error());
        let mid = omega[n / 4..3 * n / 4].iter().map(|w| (w - omega0).abs()).fold(0.0, f64::max);
        assert!(mid < 0.05, "{method:?} deviates by {mid}");
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(alif_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
