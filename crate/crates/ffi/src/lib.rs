//! C interface to the `alif` decomposition library.
//!
//! Every entry point returns an [`AlifStatus`]. On failure a human readable
//! message is kept per thread and can be read with
//! [`alif_last_error_message`]. Decompositions are returned as opaque
//! handles that must be released with [`alif_decomposition_free`].
//!
//! Enumerated option fields are plain `int32_t` so that out-of-range values
//! coming from C are rejected instead of being undefined behaviour; use the
//! `ALIF_BOUNDARY_*`, `ALIF_PRESET_*`, `ALIF_SMOOTHING_*` and
//! `ALIF_FREQ_METHOD_*` constants.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use alif::alif::{alif_decompose, AlifConfig, MaskSmoothing};
use alif::fpfilter::{FilterSpec, Preset};
use alif::instfreq::{hilbert_instantaneous_frequency, local_instantaneous_frequency};
use alif::iterfilt::{if_decompose, Decomposition, IfConfig, StopReason};
use alif::signal::{BoundaryMode, Signal};
use alif::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlifStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    /// The mask needed by the first IMF is wider than the signal.
    FilterTooLong = 4,
    /// The signal has too few extrema to pick a mask length.
    TooFewExtrema = 5,
    /// A numerical routine failed, e.g. the filter solver did not settle.
    Numerical = 6,
    /// The output buffer is shorter than the data to copy.
    BufferTooSmall = 7,
    /// A Rust panic was caught at the boundary. This is a bug.
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlifBoundary {
    Reflect = 0,
    Periodic = 1,
    Constant = 2,
    Antisymmetric = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlifPreset {
    Fig4 = 0,
    Bump = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlifSmoothing {
    IfTrend = 0,
    Off = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlifFreqMethod {
    Local = 0,
    Hilbert = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlifStopReason {
    Trend = 0,
    MaxImfs = 1,
    LowEnergy = 2,
    MaskTooLong = 3,
    MaskStalled = 4,
}

/// Fokker-Planck filter family solved to steady state.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AlifFilterOptions {
    /// One of `AlifPreset`.
    pub preset: i32,
    pub alpha: f64,
    pub beta: f64,
    /// Grid cells on each side of the origin in the solver.
    pub half_resolution: usize,
    pub self_convolve: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AlifIfOptions {
    pub chi: f64,
    pub sd_threshold: f64,
    pub max_inner: usize,
    pub max_imfs: usize,
    /// One of `AlifBoundary`.
    pub boundary: i32,
    pub filter: AlifFilterOptions,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AlifAlifOptions {
    pub mask_multiplier: f64,
    /// One of `AlifSmoothing`.
    pub smoothing: i32,
    pub smoothing_chi: f64,
    pub min_clamp: f64,
    /// Fixed uniform-mask factor for the trend smoother, or NaN for the
    /// adaptive default.
    pub uniform_chi: f64,
    pub sd_threshold: f64,
    pub max_inner: usize,
    pub max_imfs: usize,
    /// One of `AlifBoundary`.
    pub boundary: i32,
    pub filter: AlifFilterOptions,
}

/// Per-IMF bookkeeping. The products are NaN for IF decompositions.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AlifImfDiagnostics {
    pub iterations: usize,
    pub final_sd: f64,
    pub mask_half_length: f64,
    pub eps_product: f64,
    pub delta_product: f64,
}

/// Opaque decomposition handle.
pub struct AlifDecomposition {
    inner: Decomposition,
}

struct Fail(AlifStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidConfig(_) | Error::InvalidCoefficients(_) | Error::InvalidFilter(_) => {
                AlifStatus::InvalidConfig
            }
            Error::InvalidSignal(_) | Error::SignalTooShort { .. } | Error::LengthMismatch(..) => {
                AlifStatus::InvalidArgument
            }
            Error::FilterTooLong { .. } => AlifStatus::FilterTooLong,
            Error::TooFewExtrema { .. } => AlifStatus::TooFewExtrema,
            _ => AlifStatus::Numerical,
        };
        Fail(status, e.to_string())
    }
}

type Outcome = Result<(), Fail>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Outcome + UnwindSafe) -> AlifStatus {
    let result = catch_unwind(f).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Fail(AlifStatus::Panic, format!("panic: {msg}")))
    });
    match result {
        Ok(()) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            AlifStatus::Ok
        }
        Err(Fail(status, msg)) => {
            set_last_error(msg);
            status
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(AlifStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: String) -> Fail {
    Fail(AlifStatus::InvalidArgument, msg)
}

fn boundary(code: i32) -> Result<BoundaryMode, Fail> {
    Ok(match code {
        0 => BoundaryMode::Reflect,
        1 => BoundaryMode::Periodic,
        2 => BoundaryMode::Constant,
        3 => BoundaryMode::Antisymmetric,
        other => return Err(invalid(format!("unknown boundary code {other}"))),
    })
}

fn boundary_code(mode: BoundaryMode) -> i32 {
    match mode {
        BoundaryMode::Reflect => AlifBoundary::Reflect as i32,
        BoundaryMode::Periodic => AlifBoundary::Periodic as i32,
        BoundaryMode::Constant => AlifBoundary::Constant as i32,
        BoundaryMode::Antisymmetric => AlifBoundary::Antisymmetric as i32,
    }
}

impl AlifFilterOptions {
    fn from_spec(spec: FilterSpec) -> Self {
        Self {
            preset: match spec.preset {
                Preset::Fig4 => AlifPreset::Fig4 as i32,
                Preset::Bump => AlifPreset::Bump as i32,
            },
            alpha: spec.alpha,
            beta: spec.beta,
            half_resolution: spec.half_resolution,
            self_convolve: spec.self_convolve,
        }
    }

    fn to_spec(self) -> Result<FilterSpec, Fail> {
        let preset = match self.preset {
            0 => Preset::Fig4,
            1 => Preset::Bump,
            other => return Err(invalid(format!("unknown filter preset code {other}"))),
        };
        Ok(FilterSpec {
            preset,
            alpha: self.alpha,
            beta: self.beta,
            half_resolution: self.half_resolution,
            self_convolve: self.self_convolve,
        })
    }
}

impl AlifIfOptions {
    fn to_config(self) -> Result<IfConfig, Fail> {
        let cfg = IfConfig {
            chi: self.chi,
            sd_threshold: self.sd_threshold,
            max_inner: self.max_inner,
            max_imfs: self.max_imfs,
            boundary: boundary(self.boundary)?,
            filter: self.filter.to_spec()?.source()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl AlifAlifOptions {
    fn to_config(self) -> Result<AlifConfig, Fail> {
        let smoothing = match self.smoothing {
            0 => MaskSmoothing::IfTrend,
            1 => MaskSmoothing::Off,
            other => return Err(invalid(format!("unknown smoothing code {other}"))),
        };
        let cfg = AlifConfig {
            mask_multiplier: self.mask_multiplier,
            smoothing,
            smoothing_chi: self.smoothing_chi,
            min_clamp: self.min_clamp,
            uniform_chi: (!self.uniform_chi.is_nan()).then_some(self.uniform_chi),
            sd_threshold: self.sd_threshold,
            max_inner: self.max_inner,
            max_imfs: self.max_imfs,
            boundary: boundary(self.boundary)?,
            filter: self.filter.to_spec()?.source()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

unsafe fn input_signal(samples: *const f64, len: usize, dx: f64) -> Result<Signal, Fail> {
    if samples.is_null() {
        return Err(null("samples"));
    }
    let v = std::slice::from_raw_parts(samples, len).to_vec();
    Ok(Signal::new(v, dx, 0.0)?)
}

unsafe fn handle<'a>(d: *const AlifDecomposition) -> Result<&'a Decomposition, Fail> {
    d.as_ref().map(|d| &d.inner).ok_or_else(|| null("decomposition"))
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, buf_len: usize) -> Outcome {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if buf_len < src.len() {
        return Err(Fail(
            AlifStatus::BufferTooSmall,
            format!("buffer holds {buf_len} values, need {}", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Library defaults for iterative filtering.
#[no_mangle]
pub extern "C" fn alif_if_options_default() -> AlifIfOptions {
    let c = alif::config::IfSection::default();
    AlifIfOptions {
        chi: c.chi,
        sd_threshold: c.sd_threshold,
        max_inner: c.max_inner,
        max_imfs: c.max_imfs,
        boundary: boundary_code(c.boundary),
        filter: AlifFilterOptions::from_spec(c.filter),
    }
}

/// Library defaults for adaptive local iterative filtering.
#[no_mangle]
pub extern "C" fn alif_alif_options_default() -> AlifAlifOptions {
    let c = alif::config::AlifSection::default();
    AlifAlifOptions {
        mask_multiplier: c.mask_multiplier,
        smoothing: match c.smoothing {
            MaskSmoothing::IfTrend => AlifSmoothing::IfTrend as i32,
            MaskSmoothing::Off => AlifSmoothing::Off as i32,
        },
        smoothing_chi: c.smoothing_chi,
        min_clamp: c.min_clamp,
        uniform_chi: c.uniform_chi.unwrap_or(f64::NAN),
        sd_threshold: c.sd_threshold,
        max_inner: c.max_inner,
        max_imfs: c.max_imfs,
        boundary: boundary_code(c.boundary),
        filter: AlifFilterOptions::from_spec(c.filter),
    }
}

/// Decomposes `len` samples spaced `dx` apart with iterative filtering.
/// `opts` may be NULL for the defaults. On success `*out` receives a handle.
///
/// # Safety
/// `samples` must point to `len` readable doubles, `opts` must be NULL or
/// valid, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn alif_if_decompose(
    samples: *const f64,
    len: usize,
    dx: f64,
    opts: *const AlifIfOptions,
    out: *mut *mut AlifDecomposition,
) -> AlifStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = input_signal(samples, len, dx)?;
        let opts = opts.as_ref().copied().unwrap_or_else(|| alif_if_options_default());
        let inner = if_decompose(&s, &opts.to_config()?)?;
        *out = Box::into_raw(Box::new(AlifDecomposition { inner }));
        Ok(())
    })
}

/// Adaptive counterpart of [`alif_if_decompose`].
///
/// # Safety
/// Same contract as [`alif_if_decompose`].
#[no_mangle]
pub unsafe extern "C" fn alif_alif_decompose(
    samples: *const f64,
    len: usize,
    dx: f64,
    opts: *const AlifAlifOptions,
    out: *mut *mut AlifDecomposition,
) -> AlifStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = input_signal(samples, len, dx)?;
        let opts = opts.as_ref().copied().unwrap_or_else(|| alif_alif_options_default());
        let inner = alif_decompose(&s, &opts.to_config()?)?;
        *out = Box::into_raw(Box::new(AlifDecomposition { inner }));
        Ok(())
    })
}

/// Number of samples in every component; 0 for a NULL handle.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alif_decomposition_len(d: *const AlifDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.inner.input.len())
}

/// Number of IMFs, not counting the remainder; 0 for a NULL handle.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alif_decomposition_imf_count(d: *const AlifDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.inner.imfs.len())
}

/// Copies IMF `index` into `buf`, which must hold at least
/// `alif_decomposition_len(d)` values.
///
/// # Safety
/// `d` must be NULL or a live handle and `buf` must point to `buf_len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn alif_decomposition_copy_imf(
    d: *const AlifDecomposition,
    index: usize,
    buf: *mut f64,
    buf_len: usize,
) -> AlifStatus {
    guard(|| {
        let d = handle(d)?;
        let imf = d.imfs.get(index).ok_or_else(|| {
            invalid(format!("IMF index {index} out of range ({} IMFs)", d.imfs.len()))
        })?;
        copy_out(imf.samples(), buf, buf_len)
    })
}

/// Copies the remainder (trend) into `buf`.
///
/// # Safety
/// Same contract as [`alif_decomposition_copy_imf`].
#[no_mangle]
pub unsafe extern "C" fn alif_decomposition_copy_remainder(
    d: *const AlifDecomposition,
    buf: *mut f64,
    buf_len: usize,
) -> AlifStatus {
    guard(|| copy_out(handle(d)?.remainder.samples(), buf, buf_len))
}

/// Inner-loop diagnostics of IMF `index`.
///
/// # Safety
/// `d` must be NULL or a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn alif_decomposition_imf_diagnostics(
    d: *const AlifDecomposition,
    index: usize,
    out: *mut AlifImfDiagnostics,
) -> AlifStatus {
    guard(|| {
        let d = handle(d)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let diag = d.diagnostics.get(index).ok_or_else(|| {
            invalid(format!("IMF index {index} out of range ({} IMFs)", d.imfs.len()))
        })?;
        let conv = d.convergence.get(index);
        *out = AlifImfDiagnostics {
            iterations: diag.iterations,
            final_sd: diag.final_sd,
            mask_half_length: diag.mask_half_length,
            eps_product: conv.map_or(f64::NAN, |c| c.final_eps_product()),
            delta_product: conv.map_or(f64::NAN, |c| c.final_delta_product()),
        };
        Ok(())
    })
}

/// Why the outer loop ended.
///
/// # Safety
/// `d` must be NULL or a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn alif_decomposition_stop_reason(
    d: *const AlifDecomposition,
    out: *mut AlifStopReason,
) -> AlifStatus {
    guard(|| {
        let d = handle(d)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match d.stop {
            StopReason::Trend => AlifStopReason::Trend,
            StopReason::MaxImfs => AlifStopReason::MaxImfs,
            StopReason::LowEnergy => AlifStopReason::LowEnergy,
            StopReason::MaskTooLong => AlifStopReason::MaskTooLong,
            StopReason::MaskStalled => AlifStopReason::MaskStalled,
        };
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `d` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn alif_decomposition_free(d: *mut AlifDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Instantaneous angular frequency of a single component, written to
/// `omega_out[0..len]`. `method` is one of `AlifFreqMethod`;
/// `eno_threshold` only affects the local method.
///
/// # Safety
/// `samples` must point to `len` readable doubles and `omega_out` to
/// `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn alif_instantaneous_frequency(
    samples: *const f64,
    len: usize,
    dx: f64,
    method: i32,
    eno_threshold: f64,
    omega_out: *mut f64,
    out_len: usize,
) -> AlifStatus {
    guard(|| {
        let s = input_signal(samples, len, dx)?;
        let fr = match method {
            0 => local_instantaneous_frequency(&s, eno_threshold)?,
            1 => hilbert_instantaneous_frequency(&s)?,
            other => return Err(invalid(format!("unknown frequency method code {other}"))),
        };
        copy_out(&fr.omega, omega_out, out_len)
    })
}

/// Message describing the last failure on this thread, or NULL if the last
/// call succeeded. Valid until the next call into the library on this
/// thread.
#[no_mangle]
pub extern "C" fn alif_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn alif_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
