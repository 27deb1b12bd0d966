//! Iterative Filtering with a uniform mask length.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::alif::ConvergenceDiagnostics;
use crate::error::{Error, Result};
use crate::fpfilter::{DiscreteFilter, FilterSource, FilterSpec};
use crate::signal::{extrema_of, norm_l2, MovingAverage, BoundaryMode, Signal};

#[derive(Debug, Clone)]
pub struct IfConfig {
    /// Mask multiplier in `l = 2 ⌊chi N / k⌋`.
    pub chi: f64,
    pub sd_threshold: f64,
    pub max_inner: usize,
    pub max_imfs: usize,
    pub boundary: BoundaryMode,
    pub filter: FilterSource,
}

impl IfConfig {
    pub fn new(filter: FilterSource) -> Self {
        Self {
            chi: 3.0,
            sd_threshold: 1e-5,
            max_inner: 200,
            max_imfs: 32,
            boundary: BoundaryMode::Antisymmetric,
            filter,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_loop_params(self.sd_threshold, self.max_inner)?;
        if !(self.chi > 0.0 && self.chi.is_finite()) {
            return Err(Error::InvalidConfig(format!("chi must be positive, got {}", self.chi)));
        }
        Ok(())
    }
}

impl Default for IfConfig {
    fn default() -> Self {
        Self::new(FilterSpec::IF_DEFAULT.source().expect("built-in filter preset solves"))
    }
}

pub(crate) fn validate_loop_params(sd_threshold: f64, max_inner: usize) -> Result<()> {
    if !(sd_threshold > 0.0 && sd_threshold.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "sd threshold must be positive, got {sd_threshold}"
        )));
    }
    if max_inner == 0 {
        return Err(Error::InvalidConfig("max_inner must be at least 1".into()));
    }
    Ok(())
}

/// Bookkeeping of one inner (sifting) loop.
///
/// `sd_history[i]` compares the iterate after step `i + 1` with the one
/// before it, so its length equals `iterations`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerDiagnostics {
    pub iterations: usize,
    pub sd_history: Vec<f64>,
    pub final_sd: f64,
    /// Mask half-length in samples; the mean of the field for ALIF.
    pub mask_half_length: f64,
}

/// Why the outer loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The remainder has at most one extremum.
    Trend,
    /// `max_imfs` components were extracted before a trend was reached.
    MaxImfs,
    /// Two consecutive rounds produced negligible components; both were
    /// folded back into the remainder.
    LowEnergy,
    /// The next mask would be longer than the record.
    MaskTooLong,
    /// The next mask is no longer than the previous one, so the remainder
    /// only holds leftovers of bands already extracted.
    MaskStalled,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Trend => "trend",
            StopReason::MaxImfs => "max_imfs",
            StopReason::LowEnergy => "low_energy",
            StopReason::MaskTooLong => "mask_too_long",
            StopReason::MaskStalled => "mask_stalled",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub input: Signal,
    pub imfs: Vec<Signal>,
    pub remainder: Signal,
    pub diagnostics: Vec<InnerDiagnostics>,
    /// One entry per IMF for ALIF; empty for IF.
    pub convergence: Vec<ConvergenceDiagnostics>,
    pub stop: StopReason,
    pub source: String,
}

impl Decomposition {
    /// `‖input - (Σ imfs + remainder)‖₂ / ‖input‖₂` (0 for a zero input).
    pub fn reconstruction_error(&self) -> f64 {
        let n = self.input.len();
        let mut sum = self.remainder.samples().to_vec();
        for imf in &self.imfs {
            for (acc, v) in sum.iter_mut().zip(imf.samples()) {
                *acc += v;
            }
        }
        let diff: Vec<f64> = (0..n).map(|i| self.input.samples()[i] - sum[i]).collect();
        let reference = self.input.norm_l2();
        if reference == 0.0 {
            norm_l2(&diff)
        } else {
            norm_l2(&diff) / reference
        }
    }

    /// True when the outer loop was cut off with a non-trend remainder.
    pub fn truncated(&self) -> bool {
        self.stop == StopReason::MaxImfs
    }
}

/// `l = 2 ⌊chi N / k⌋` with `k` the number of extrema, clamped below at 2.
pub fn uniform_mask_length(s: &Signal, chi: f64) -> Result<usize> {
    mask_length_for(s.samples(), chi)
}

pub(crate) fn mask_length_for(v: &[f64], chi: f64) -> Result<usize> {
    let k = extrema_of(v).len();
    if k < 2 {
        return Err(Error::TooFewExtrema { need: 2, found: k });
    }
    let l = 2 * (chi * v.len() as f64 / k as f64).floor() as usize;
    Ok(l.max(2))
}

/// Relative L² change `‖curr - prev‖ / ‖prev‖`.
pub fn sd_metric(prev: &Signal, curr: &Signal) -> Result<f64> {
    if prev.len() != curr.len() {
        return Err(Error::LengthMismatch(prev.len(), curr.len()));
    }
    sd_raw(prev.samples(), curr.samples())
}

fn sd_raw(prev: &[f64], curr: &[f64]) -> Result<f64> {
    let reference = norm_l2(prev);
    if reference == 0.0 {
        return Err(Error::ZeroReference);
    }
    let diff = prev
        .iter()
        .zip(curr)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    Ok(diff / reference)
}

pub(crate) struct SiftOutcome {
    pub imf: Vec<f64>,
    pub iterations: usize,
    pub sd_history: Vec<f64>,
}

/// Repeats `f <- f - average(f)` until the SD statistic drops below
/// `sd_threshold` or `max_inner` steps were taken.
pub(crate) fn sift(
    input: &[f64],
    sd_threshold: f64,
    max_inner: usize,
    mut average: impl FnMut(&[f64]) -> Result<Vec<f64>>,
) -> Result<SiftOutcome> {
    let input_norm = norm_l2(input);
    let mut f = input.to_vec();
    let mut sd_history = Vec::new();
    if input_norm == 0.0 {
        return Ok(SiftOutcome {
            imf: f,
            iterations: 0,
            sd_history,
        });
    }
    while sd_history.len() < max_inner {
        let mean = average(&f)?;
        let next: Vec<f64> = f.iter().zip(&mean).map(|(a, b)| a - b).collect();
        let sd = sd_raw(&f, &next)?;
        sd_history.push(sd);
        if norm_l2(&next) < 1e-14 * input_norm {
            f = vec![0.0; f.len()];
            break;
        }
        f = next;
        if sd < sd_threshold {
            break;
        }
    }
    Ok(SiftOutcome {
        imf: f,
        iterations: sd_history.len(),
        sd_history,
    })
}

/// One sifting loop with a frozen filter.
pub fn if_inner_loop(
    s: &Signal,
    w: &DiscreteFilter,
    cfg: &IfConfig,
) -> Result<(Signal, InnerDiagnostics)> {
    let ma = MovingAverage::new(w, cfg.boundary, s.len())?;
    let out = sift(s.samples(), cfg.sd_threshold, cfg.max_inner, |f| {
        Ok(ma.apply(f))
    })?;
    let diagnostics = InnerDiagnostics {
        iterations: out.iterations,
        final_sd: out.sd_history.last().copied().unwrap_or(0.0),
        sd_history: out.sd_history,
        mask_half_length: w.half_length(),
    };
    Ok((s.with_samples(out.imf)?, diagnostics))
}

pub(crate) struct Round {
    pub imf: Vec<f64>,
    pub diagnostics: InnerDiagnostics,
    pub convergence: Option<ConvergenceDiagnostics>,
}

pub(crate) enum Step {
    Imf(Round),
    Stop(StopReason),
}

/// Checks a planned mask of mean half-length `scale` against the record
/// length and the previous round.
pub(crate) fn mask_verdict(half_width: usize, n: usize, scale: f64, previous: Option<f64>) -> Option<StopReason> {
    if half_width >= n {
        Some(StopReason::MaskTooLong)
    } else if previous.is_some_and(|p| scale <= p) {
        Some(StopReason::MaskStalled)
    } else {
        None
    }
}

/// Extracts components from the running remainder until it is a trend.
pub(crate) fn outer_loop(
    s: &Signal,
    max_imfs: usize,
    source: String,
    mut round: impl FnMut(&[f64], Option<f64>) -> Result<Step>,
) -> Result<Decomposition> {
    let energy: f64 = s.samples().iter().map(|v| v * v).sum();
    let mut remainder = s.samples().to_vec();
    let mut imfs: Vec<Vec<f64>> = Vec::new();
    let mut diagnostics = Vec::new();
    let mut convergence = Vec::new();
    let mut quiet_rounds = 0;
    let stop = loop {
        if extrema_of(&remainder).len() <= 1 {
            break StopReason::Trend;
        }
        if imfs.len() >= max_imfs {
            break StopReason::MaxImfs;
        }
        let previous = diagnostics.last().map(|d: &InnerDiagnostics| d.mask_half_length);
        let r = match round(&remainder, previous)? {
            Step::Imf(r) => r,
            Step::Stop(reason) => break reason,
        };
        let imf_energy: f64 = r.imf.iter().map(|v| v * v).sum();
        for (acc, v) in remainder.iter_mut().zip(&r.imf) {
            *acc -= v;
        }
        imfs.push(r.imf);
        diagnostics.push(r.diagnostics);
        convergence.extend(r.convergence);
        if imf_energy < 1e-10 * energy {
            quiet_rounds += 1;
            if quiet_rounds == 2 {
                for _ in 0..2 {
                    imfs.pop();
                    diagnostics.pop();
                }
                let keep = convergence.len().saturating_sub(2);
                convergence.truncate(keep);
                remainder = s.samples().to_vec();
                for imf in &imfs {
                    for (acc, v) in remainder.iter_mut().zip(imf) {
                        *acc -= v;
                    }
                }
                break StopReason::LowEnergy;
            }
        } else {
            quiet_rounds = 0;
        }
    };
    let imfs = imfs
        .into_iter()
        .map(|v| s.with_samples(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition {
        input: s.clone(),
        remainder: s.with_samples(remainder)?,
        imfs,
        diagnostics,
        convergence,
        stop,
        source,
    })
}

/// Decomposes `s` into IMFs with a uniform mask recomputed at each outer round.
pub fn if_decompose(s: &Signal, cfg: &IfConfig) -> Result<Decomposition> {
    cfg.validate()?;
    let n = s.len();
    outer_loop(s, cfg.max_imfs, "if".into(), |r, previous| {
        let l = mask_length_for(r, cfg.chi)?;
        let w = cfg.filter.realize(l as f64)?;
        if let Some(stop) = mask_verdict(w.half_width(), n, l as f64, previous) {
            return Ok(Step::Stop(stop));
        }
        let ma = MovingAverage::new(&w, cfg.boundary, n)?;
        let out = sift(r, cfg.sd_threshold, cfg.max_inner, |f| Ok(ma.apply(f)))?;
        Ok(Step::Imf(Round {
            imf: out.imf,
            diagnostics: InnerDiagnostics {
                iterations: out.iterations,
                final_sd: out.sd_history.last().copied().unwrap_or(0.0),
                sd_history: out.sd_history,
                mask_half_length: l as f64,
            },
            convergence: None,
        }))
    })
}

/// The Fourier-domain counterpart of `n` periodic sifting steps: mode `k` is
/// scaled by `(1 - ŵ(k))ⁿ`, or for `n = None` (the limit) kept only where
/// `|ŵ(k)| < zero_tol`.
pub fn spectral_limit_oracle(
    s: &Signal,
    w: &DiscreteFilter,
    n: Option<u32>,
    zero_tol: f64,
) -> Result<Signal> {
    let len = s.len();
    if n == Some(0) {
        return Ok(s.clone());
    }
    let mut buf: Vec<Complex<f64>> = s.samples().iter().map(|v| Complex::new(*v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let symbol = w.symbol(k, len);
        let factor = match n {
            Some(n) => (1.0 - symbol).powi(n as i32),
            None if symbol.abs() < zero_tol => 1.0,
            None => 0.0,
        };
        *c *= factor;
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    s.with_samples(buf.iter().map(|c| c.re * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpfilter::{double_average_filter, FilterProfile};
    use std::f64::consts::PI;

    fn triangle_source() -> FilterSource {
        // a coarse triangle profile keeps these tests independent of the PDE solver
        let m = 201usize;
        let raw: Vec<f64> = (0..m)
            .map(|i| 1.0 - ((i as f64 + 0.5) / m as f64 * 2.0 - 1.0).abs())
            .collect();
        let mass: f64 = raw.iter().sum();
        let p = FilterProfile::new(-1.0, 1.0, raw.iter().map(|v| v / mass).collect()).unwrap();
        FilterSource::new(p, true)
    }

    #[test]
    fn mask_length_formula() {
        // 50 extrema in 1000 samples
        let mut v = vec![0.0; 1000];
        for i in 0..50 {
            v[20 * i + 10] = if i % 2 == 0 { 1.0 } else { -1.0 };
        }
        let s = Signal::new(v, 1.0, 0.0).unwrap();
        assert_eq!(crate::signal::find_extrema(&s).len(), 50);
        assert_eq!(uniform_mask_length(&s, 1.6).unwrap(), 64);
        let flat = Signal::new(vec![0.0; 10], 1.0, 0.0).unwrap();
        assert!(matches!(
            uniform_mask_length(&flat, 1.6),
            Err(Error::TooFewExtrema { need: 2, found: 0 })
        ));
    }

    #[test]
    fn mask_length_with_dense_extrema() {
        // 33 extrema in 100 samples: 2 * floor(4.848) = 8
        let mut v = vec![0.0; 100];
        for i in 0..33 {
            v[3 * i + 1] = if i % 2 == 0 { 1.0 } else { -1.0 };
        }
        assert_eq!(extrema_of(&v).len(), 33);
        assert_eq!(mask_length_for(&v, 1.6).unwrap(), 8);
        // clamped at 2 for very dense extrema
        let zigzag: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert_eq!(mask_length_for(&zigzag, 0.1).unwrap(), 2);
    }

    #[test]
    fn sd_metric_examples() {
        let a = Signal::new(vec![1.0, -2.0, 3.0], 1.0, 0.0).unwrap();
        let b = a.with_samples(vec![2.0, -4.0, 6.0]).unwrap();
        assert_eq!(sd_metric(&a, &a).unwrap(), 0.0);
        assert!((sd_metric(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        let z = a.with_samples(vec![0.0; 3]).unwrap();
        assert!(matches!(sd_metric(&z, &a), Err(Error::ZeroReference)));
    }

    #[test]
    fn fixed_point_needs_one_iteration() {
        // the double average filter of half-length 3 annihilates period-4 modes
        let n = 64;
        let w = double_average_filter(3).unwrap();
        let s = Signal::new(
            (0..n).map(|i| (2.0 * PI * 16.0 * i as f64 / n as f64).sin()).collect(),
            1.0,
            0.0,
        )
        .unwrap();
        assert!(w.symbol(16, n).abs() < 1e-15);
        let mut cfg = IfConfig::new(triangle_source());
        cfg.boundary = BoundaryMode::Periodic;
        let (imf, d) = if_inner_loop(&s, &w, &cfg).unwrap();
        assert_eq!(d.iterations, 1);
        assert_eq!(d.sd_history.len(), 1);
        assert!(d.final_sd < cfg.sd_threshold);
        for (a, b) in imf.samples().iter().zip(s.samples()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_collapses_to_zero_imf() {
        let s = Signal::new(vec![3.5; 100], 0.1, 0.0).unwrap();
        let w = double_average_filter(5).unwrap();
        let cfg = IfConfig::new(triangle_source());
        let (imf, d) = if_inner_loop(&s, &w, &cfg).unwrap();
        assert!(imf.samples().iter().all(|v| *v == 0.0));
        assert_eq!(d.iterations, 1);
        let zero = s.with_samples(vec![0.0; 100]).unwrap();
        let (imf, d) = if_inner_loop(&zero, &w, &cfg).unwrap();
        assert_eq!(d.iterations, 0);
        assert!(imf.samples().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn oracle_trivial_cases() {
        let s = Signal::new((0..32).map(|i| (i as f64 * 0.37).sin()).collect(), 1.0, 0.0).unwrap();
        let w = double_average_filter(2).unwrap();
        assert_eq!(spectral_limit_oracle(&s, &w, Some(0), 1e-12).unwrap(), s);
        let zero = spectral_limit_oracle(&s, &DiscreteFilter::dirac(), Some(3), 1e-12).unwrap();
        assert!(zero.max_abs() < 1e-15);
        // mode 16 of 48 sits in the zero set of the l = 2 double average
        let tone = Signal::new(
            (0..48).map(|i| (2.0 * PI * 16.0 * i as f64 / 48.0).cos()).collect(),
            1.0,
            0.0,
        )
        .unwrap();
        let lim = spectral_limit_oracle(&tone, &w, None, 1e-12).unwrap();
        for (a, b) in lim.samples().iter().zip(tone.samples()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_trend_gives_no_imfs() {
        let s = Signal::from_fn(500, 0.0, 1.0, |x| 4.0 * (x - 0.5).powi(2)).unwrap();
        let d = if_decompose(&s, &IfConfig::new(triangle_source())).unwrap();
        assert!(d.imfs.is_empty());
        assert_eq!(d.stop, StopReason::Trend);
        assert_eq!(d.remainder, s);
    }

    #[test]
    fn two_tones_separate_and_reconstruct() {
        let s = Signal::from_fn(2000, 0.0, 1.0, |x| {
            (2.0 * PI * 60.0 * x).sin() + (2.0 * PI * 6.0 * x).sin()
        })
        .unwrap();
        let mut cfg = IfConfig::new(triangle_source());
        cfg.chi = 4.0;
        let d = if_decompose(&s, &cfg).unwrap();
        assert!(d.reconstruction_error() < 1e-12);
        assert!(d.imfs.len() >= 2);
        assert_eq!(d.diagnostics.len(), d.imfs.len());
        assert!(d.convergence.is_empty());
        let worst = |c: &[f64], freq: f64| {
            (200..1800)
                .map(|i| (c[i] - (2.0 * PI * freq * s.x(i)).sin()).abs())
                .fold(0.0, f64::max)
        };
        let hi = worst(d.imfs[0].samples(), 60.0);
        let rest: Vec<f64> = (0..s.len())
            .map(|i| d.remainder.samples()[i] + d.imfs[1..].iter().map(|m| m.samples()[i]).sum::<f64>())
            .collect();
        let lo = worst(&rest, 6.0);
        assert!(hi < 0.05, "high tone error {hi}");
        assert!(lo < 0.05, "low tone error {lo}");
    }

    #[test]
    fn invalid_config_is_rejected() {
        let s = Signal::from_fn(100, 0.0, 1.0, |x| (20.0 * x).sin()).unwrap();
        let mut cfg = IfConfig::new(triangle_source());
        cfg.chi = 0.0;
        assert!(matches!(if_decompose(&s, &cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = IfConfig::new(triangle_source());
        cfg.max_inner = 0;
        assert!(if_decompose(&s, &cfg).is_err());
    }
}
