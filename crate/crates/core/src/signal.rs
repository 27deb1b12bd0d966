//! Uniformly sampled signals and the primitives every decomposition uses:
//! extrema detection, boundary-aware moving averages and differentiation.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpfilter::DiscreteFilter;

/// A real-valued series sampled on a uniform grid `x0 + i * dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    dx: f64,
    x0: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, dx: f64, x0: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::SignalTooShort {
                need: 2,
                got: samples.len(),
            });
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidSignal(format!("sample spacing must be positive, got {dx}")));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidSignal("origin must be finite".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("sample {i} is not finite")));
        }
        Ok(Self { samples, dx, x0 })
    }

    /// Samples `f` at `n` points spanning `[start, end]` inclusive.
    pub fn from_fn(n: usize, start: f64, end: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::SignalTooShort { need: 2, got: n });
        }
        let dx = (end - start) / (n - 1) as f64;
        let samples = (0..n).map(|i| f(start + i as f64 * dx)).collect();
        Self::new(samples, dx, start)
    }

    /// A new signal on the same grid.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != self.samples.len() {
            return Err(Error::LengthMismatch(self.samples.len(), samples.len()));
        }
        Self::new(samples, self.dx, self.x0)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn norm_l2(&self) -> f64 {
        norm_l2(&self.samples)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn norm_l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// How samples beyond the ends of a finite record are synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Whole-sample symmetric extension: `s[-k] = s[k]`.
    #[default]
    Reflect,
    /// `s[-k] = s[N - k]`.
    Periodic,
    /// The end samples are repeated.
    Constant,
    /// Point reflection through the end samples: `s[-k] = 2 s[0] - s[k]`.
    /// Value and slope stay continuous across the ends.
    Antisymmetric,
}

impl BoundaryMode {
    /// Maps a possibly out-of-range index onto `0..n`. For
    /// [`BoundaryMode::Antisymmetric`] this is the mirrored sample, which
    /// [`BoundaryMode::sample`] then reflects through the end value.
    #[inline]
    pub fn index(self, j: isize, n: usize) -> usize {
        let n_i = n as isize;
        if (0..n_i).contains(&j) {
            return j as usize;
        }
        match self {
            BoundaryMode::Periodic => j.rem_euclid(n_i) as usize,
            BoundaryMode::Constant => j.clamp(0, n_i - 1) as usize,
            BoundaryMode::Reflect | BoundaryMode::Antisymmetric => {
                if n == 1 {
                    return 0;
                }
                let period = 2 * (n_i - 1);
                let r = j.rem_euclid(period);
                if r < n_i {
                    r as usize
                } else {
                    (period - r) as usize
                }
            }
        }
    }
}

impl BoundaryMode {
    /// The value of the extended record at a possibly out-of-range index.
    #[inline]
    pub fn sample(self, v: &[f64], j: isize) -> f64 {
        let n = v.len();
        let mirrored = v[self.index(j, n)];
        match self {
            BoundaryMode::Antisymmetric if j < 0 => 2.0 * v[0] - mirrored,
            BoundaryMode::Antisymmetric if j >= n as isize => 2.0 * v[n - 1] - mirrored,
            _ => mirrored,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::Reflect => "reflect",
            BoundaryMode::Periodic => "periodic",
            BoundaryMode::Constant => "constant",
            BoundaryMode::Antisymmetric => "antisymmetric",
        }
    }
}

impl std::str::FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reflect" => Ok(Self::Reflect),
            "periodic" => Ok(Self::Periodic),
            "constant" => Ok(Self::Constant),
            "antisymmetric" => Ok(Self::Antisymmetric),
            other => Err(Error::InvalidConfig(format!("unknown boundary mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub index: usize,
    pub kind: ExtremumKind,
    pub value: f64,
}

/// Interior local extrema in increasing index order; kinds alternate.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExtremumList {
    pub entries: Vec<Extremum>,
}

impl ExtremumList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.index).collect()
    }
}

/// Finds the strict interior local extrema of `s`.
///
/// A run of equal samples that forms a local extremum counts once, at the
/// run's midpoint (rounded down). Runs touching either end of the record are
/// never extrema.
pub fn find_extrema(s: &Signal) -> ExtremumList {
    extrema_of(s.samples())
}

pub(crate) fn extrema_of(v: &[f64]) -> ExtremumList {
    let n = v.len();
    let mut entries = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && v[end + 1] == v[start] {
            end += 1;
        }
        if start > 0 && end + 1 < n {
            let (left, right, here) = (v[start - 1], v[end + 1], v[start]);
            let kind = if here > left && here > right {
                Some(ExtremumKind::Max)
            } else if here < left && here < right {
                Some(ExtremumKind::Min)
            } else {
                None
            };
            if let Some(kind) = kind {
                entries.push(Extremum {
                    index: (start + end) / 2,
                    kind,
                    value: here,
                });
            }
        }
        start = end + 1;
    }
    ExtremumList { entries }
}

/// A trend has at most one interior local extremum.
pub fn is_trend(s: &Signal) -> bool {
    find_extrema(s).len() <= 1
}

/// `v` with `pad` boundary samples added on each side.
pub(crate) fn extend(v: &[f64], pad: usize, boundary: BoundaryMode) -> Vec<f64> {
    let n = v.len();
    (0..n + 2 * pad)
        .map(|k| boundary.sample(v, k as isize - pad as isize))
        .collect()
}

/// Dot product with four running sums, which lets the compiler vectorize it.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Centered weighted sum at sample `i` of an extended signal carrying `pad`
/// extra samples on each side.
#[inline]
pub(crate) fn centered_sum(ext: &[f64], pad: usize, i: usize, weights: &[f64]) -> f64 {
    let m = weights.len() / 2;
    let start = pad + i - m;
    dot(&ext[start..start + weights.len()], weights)
}

/// Filters above this many taps go through the FFT.
const FFT_MIN_TAPS: usize = 96;

/// A filter prepared for repeated application to signals of one length.
pub(crate) struct MovingAverage {
    weights: Vec<f64>,
    boundary: BoundaryMode,
    len: usize,
    spectral: Option<Spectral>,
}

struct Spectral {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kernel: Vec<Complex<f64>>,
}

impl MovingAverage {
    pub(crate) fn new(w: &DiscreteFilter, boundary: BoundaryMode, len: usize) -> Result<Self> {
        let half_width = w.half_width();
        if half_width > len {
            return Err(Error::FilterTooLong { half_width, len });
        }
        let weights = w.weights().to_vec();
        let spectral = (weights.len() >= FFT_MIN_TAPS).then(|| {
            let size = (len + 2 * half_width).next_power_of_two();
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(size);
            let inverse = planner.plan_fft_inverse(size);
            let mut kernel = vec![Complex::new(0.0, 0.0); size];
            for (k, &c) in weights.iter().enumerate() {
                kernel[k].re = c / size as f64;
            }
            forward.process(&mut kernel);
            Spectral {
                size,
                forward,
                inverse,
                kernel,
            }
        });
        Ok(Self {
            weights,
            boundary,
            len,
            spectral,
        })
    }

    pub(crate) fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.len);
        let pad = self.weights.len() / 2;
        let ext = extend(v, pad, self.boundary);
        match &self.spectral {
            None => (0..v.len())
                .map(|i| centered_sum(&ext, pad, i, &self.weights))
                .collect(),
            Some(sp) => {
                let mut buf = vec![Complex::new(0.0, 0.0); sp.size];
                for (b, &e) in buf.iter_mut().zip(&ext) {
                    b.re = e;
                }
                sp.forward.process(&mut buf);
                for (b, k) in buf.iter_mut().zip(&sp.kernel) {
                    *b *= k;
                }
                sp.inverse.process(&mut buf);
                buf[2 * pad..2 * pad + v.len()].iter().map(|c| c.re).collect()
            }
        }
    }
}

pub(crate) fn moving_average_raw(
    v: &[f64],
    w: &DiscreteFilter,
    boundary: BoundaryMode,
) -> Result<Vec<f64>> {
    Ok(MovingAverage::new(w, boundary, v.len())?.apply(v))
}

/// Convolves `s` with the symmetric filter `w`; the output keeps the grid of `s`.
pub fn moving_average(s: &Signal, w: &DiscreteFilter, boundary: BoundaryMode) -> Result<Signal> {
    let out = moving_average_raw(s.samples(), w, boundary)?;
    s.with_samples(out)
}

pub(crate) fn derivative_raw(v: &[f64], dx: f64) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n];
    d[0] = (v[1] - v[0]) / dx;
    d[n - 1] = (v[n - 1] - v[n - 2]) / dx;
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * dx);
    }
    d
}

/// Central differences inside, one-sided first-order differences at the ends.
pub fn derivative(s: &Signal) -> Result<Signal> {
    if s.len() < 3 {
        return Err(Error::SignalTooShort {
            need: 3,
            got: s.len(),
        });
    }
    s.with_samples(derivative_raw(s.samples(), s.dx()))
}
