//! Instantaneous phase and frequency of an IMF.
//!
//! The local method divides the signal and its derivative by envelopes
//! through their extrema, which maps the pair onto (nearly) the unit
//! circle; the phase is the angle of that rotation. Envelopes are built
//! separately on either side of sudden amplitude changes. The Hilbert
//! baseline uses the FFT analytic signal instead.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{derivative_raw, extrema_of, Signal};
use crate::spline::NaturalSpline;

/// Number of samples at each end whose phase relies on one-sided differences.
const EDGE_SAMPLES: usize = 2;
const HOLE_TOL: f64 = 1e-8;

/// Extremum magnitude ratio that marks a sudden amplitude change.
pub const DEFAULT_ENO_THRESHOLD: f64 = 2.0;

/// A positive curve dominating the magnitude of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub values: Vec<f64>,
    /// Extremum indices used as spline knots.
    pub knots: Vec<usize>,
    /// Half-open sample ranges built independently of each other.
    pub segments: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreqMethod {
    #[default]
    Local,
    Hilbert,
}

impl FreqMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FreqMethod::Local => "local",
            FreqMethod::Hilbert => "hilbert",
        }
    }
}

impl fmt::Display for FreqMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FreqMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(Self::Local),
            "hilbert" => Ok(Self::Hilbert),
            other => Err(Error::InvalidConfig(format!("unknown frequency method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreqResult {
    pub x0: f64,
    pub dx: f64,
    /// Unwrapped phase, radians.
    pub theta: Vec<f64>,
    /// Radians per unit of x.
    pub omega: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub eno_breaks: Vec<usize>,
    pub method: FreqMethod,
    /// Samples near the record ends or inside phase holes.
    pub low_confidence: Vec<bool>,
}

impl FreqResult {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }
}

/// Locations of sudden amplitude changes.
///
/// Wherever the magnitudes of two consecutive extrema differ by more than
/// `ratio_threshold` times, the sample between them whose left and right
/// differences disagree most is reported.
pub fn eno_breakpoints(s: &Signal, ratio_threshold: f64) -> Vec<usize> {
    breaks_of(s.samples(), ratio_threshold)
}

fn breaks_of(v: &[f64], ratio_threshold: f64) -> Vec<usize> {
    let ext = extrema_of(v).entries;
    let mut breaks: Vec<usize> = Vec::new();
    for pair in ext.windows(2) {
        let (a, b) = (pair[0].value.abs(), pair[1].value.abs());
        let (lo, hi) = (a.min(b), a.max(b));
        if !(hi > ratio_threshold * lo) {
            continue;
        }
        let mut best = None;
        let mut best_jump = -1.0;
        for j in pair[0].index + 1..pair[1].index {
            let jump = ((v[j + 1] - v[j]) - (v[j] - v[j - 1])).abs();
            if jump > best_jump {
                best_jump = jump;
                best = Some(j);
            }
        }
        if let Some(j) = best {
            if breaks.last().is_none_or(|&last| j > last) {
                breaks.push(j);
            }
        }
    }
    breaks
}

/// Upper envelope of `|s|`, built per segment between `breaks`.
pub fn envelope(s: &Signal, breaks: &[usize]) -> Envelope {
    envelope_of(s.samples(), breaks)
}

fn envelope_of(v: &[f64], breaks: &[usize]) -> Envelope {
    let n = v.len();
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = if peak > 0.0 { 1e-12 * peak } else { f64::MIN_POSITIVE };
    let mut bounds = vec![0];
    bounds.extend(breaks.iter().copied().filter(|&b| b > 0 && b < n));
    bounds.push(n);
    bounds.dedup();
    let ext = extrema_of(v).entries;

    let mut values = vec![0.0; n];
    let mut knots = Vec::new();
    let mut segments = Vec::new();
    for seg in bounds.windows(2) {
        let (start, end) = (seg[0], seg[1]);
        segments.push((start, end));
        let inside: Vec<_> = ext
            .iter()
            .filter(|e| (start..end).contains(&e.index))
            .collect();
        if inside.len() >= 2 {
            let xs = inside.iter().map(|e| e.index as f64).collect();
            let ys = inside.iter().map(|e| e.value.abs()).collect();
            let spline = NaturalSpline::new(xs, ys);
            for (i, out) in values.iter_mut().enumerate().take(end).skip(start) {
                *out = spline.eval_clamped(i as f64);
            }
            knots.extend(inside.iter().map(|e| e.index));
        } else {
            let top = v[start..end].iter().fold(0.0f64, |m, x| m.max(x.abs()));
            values[start..end].fill(top);
        }
    }
    for (e, x) in values.iter_mut().zip(v) {
        *e = e.max(x.abs()).max(floor);
    }
    Envelope {
        values,
        knots,
        segments,
    }
}

/// `f1 = s / q` and `f2 = s' / r` with `q`, `r` the envelopes of the signal
/// and its derivative (sharing the signal's breakpoints).
pub fn normalize_imf(s: &Signal, eno_threshold: f64) -> Result<(Signal, Signal, Envelope, Envelope)> {
    if s.len() < 3 {
        return Err(Error::SignalTooShort {
            need: 3,
            got: s.len(),
        });
    }
    let v = s.samples();
    let breaks = breaks_of(v, eno_threshold);
    let d = derivative_raw(v, s.dx());
    let q = envelope_of(v, &breaks);
    let r = envelope_of(&d, &breaks);
    let f1 = v.iter().zip(&q.values).map(|(a, e)| (a / e).clamp(-1.0, 1.0)).collect();
    let f2 = d.iter().zip(&r.values).map(|(a, e)| (a / e).clamp(-1.0, 1.0)).collect();
    Ok((s.with_samples(f1)?, s.with_samples(f2)?, q, r))
}

fn unwrap_in_place(theta: &mut [f64]) {
    let mut offset = 0.0;
    let mut prev_raw = match theta.first() {
        Some(v) => *v,
        None => return,
    };
    for t in theta.iter_mut().skip(1) {
        let raw = *t;
        let mut d = raw - prev_raw;
        while d > PI {
            offset -= 2.0 * PI;
            d -= 2.0 * PI;
        }
        while d < -PI {
            offset += 2.0 * PI;
            d += 2.0 * PI;
        }
        prev_raw = raw;
        *t = raw + offset;
    }
}

/// `θ = -atan2(f2, f1)`, unwrapped. Samples where both inputs vanish are
/// filled by linear interpolation and returned as holes.
pub fn instantaneous_phase(f1: &Signal, f2: &Signal) -> Result<(Signal, Vec<usize>)> {
    if f1.len() != f2.len() {
        return Err(Error::LengthMismatch(f1.len(), f2.len()));
    }
    let (theta, holes) = phase_of(f1.samples(), f2.samples());
    Ok((f1.with_samples(theta)?, holes))
}

fn phase_of(f1: &[f64], f2: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let n = f1.len();
    let is_hole: Vec<bool> = f1
        .iter()
        .zip(f2)
        .map(|(a, b)| a.abs() < HOLE_TOL && b.abs() < HOLE_TOL)
        .collect();
    let valid: Vec<usize> = (0..n).filter(|&i| !is_hole[i]).collect();
    let mut compact: Vec<f64> = valid.iter().map(|&i| -f2[i].atan2(f1[i])).collect();
    unwrap_in_place(&mut compact);
    let mut theta = vec![0.0; n];
    if valid.is_empty() {
        return (theta, (0..n).collect());
    }
    for (k, &i) in valid.iter().enumerate() {
        theta[i] = compact[k];
    }
    let mut k = 0;
    for i in 0..n {
        if !is_hole[i] {
            continue;
        }
        while k < valid.len() && valid[k] < i {
            k += 1;
        }
        theta[i] = match (k.checked_sub(1).map(|p| valid[p]), valid.get(k)) {
            (Some(l), Some(&r)) => {
                let t = (i - l) as f64 / (r - l) as f64;
                theta[l] + t * (theta[r] - theta[l])
            }
            (Some(l), None) => theta[l],
            (None, Some(&r)) => theta[r],
            (None, None) => 0.0,
        };
    }
    let holes = (0..n).filter(|&i| is_hole[i]).collect();
    (theta, holes)
}

/// `ω = dθ/dx`.
pub fn instantaneous_frequency(theta: &Signal) -> Result<Signal> {
    crate::signal::derivative(theta)
}

fn edge_flags(n: usize, holes: &[usize]) -> Vec<bool> {
    let mut flags: Vec<bool> = (0..n)
        .map(|i| i < EDGE_SAMPLES || i + EDGE_SAMPLES >= n)
        .collect();
    for &h in holes {
        flags[h] = true;
    }
    flags
}

/// The full local pipeline: normalization, phase, frequency.
pub fn local_instantaneous_frequency(s: &Signal, eno_threshold: f64) -> Result<FreqResult> {
    if !(eno_threshold > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "ENO threshold must be positive, got {eno_threshold}"
        )));
    }
    let (f1, f2, q, _) = normalize_imf(s, eno_threshold)?;
    let (theta, holes) = phase_of(f1.samples(), f2.samples());
    let omega = derivative_raw(&theta, s.dx());
    let eno_breaks = q.segments.iter().skip(1).map(|(start, _)| *start).collect();
    Ok(FreqResult {
        x0: s.x0(),
        dx: s.dx(),
        low_confidence: edge_flags(s.len(), &holes),
        theta,
        omega,
        f1: f1.into_samples(),
        f2: f2.into_samples(),
        eno_breaks,
        method: FreqMethod::Local,
    })
}

/// Discrete analytic signal of the periodic extension of `v`.
pub fn analytic_signal(v: &[f64]) -> Vec<Complex<f64>> {
    let n = v.len();
    let mut buf: Vec<Complex<f64>> = v.iter().map(|x| Complex::new(*x, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let gain = if k == 0 || (n % 2 == 0 && k == n / 2) {
            1.0
        } else if k < n.div_ceil(2) {
            2.0
        } else {
            0.0
        };
        *c *= gain / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

pub fn hilbert_instantaneous_frequency(s: &Signal) -> Result<FreqResult> {
    if s.len() < 3 {
        return Err(Error::SignalTooShort {
            need: 3,
            got: s.len(),
        });
    }
    let z = analytic_signal(s.samples());
    let mut theta: Vec<f64> = z.iter().map(|c| c.im.atan2(c.re)).collect();
    unwrap_in_place(&mut theta);
    let omega = derivative_raw(&theta, s.dx());
    let (f1, f2) = z
        .iter()
        .map(|c| {
            let m = c.norm();
            if m > 0.0 {
                (c.re / m, c.im / m)
            } else {
                (0.0, 0.0)
            }
        })
        .unzip();
    Ok(FreqResult {
        x0: s.x0(),
        dx: s.dx(),
        low_confidence: edge_flags(s.len(), &[]),
        theta,
        omega,
        f1,
        f2,
        eno_breaks: Vec::new(),
        method: FreqMethod::Hilbert,
    })
}
