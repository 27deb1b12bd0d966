//! Compactly supported smooth filters obtained as steady states of a
//! Fokker-Planck equation, their rescaling to arbitrary lengths, and the
//! spectral check that guarantees convergence of the sifting iteration.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag;

pub type CoefficientFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Coefficients of `p_t = -α (h p)_x + β (g² p)_xx` on `[a, b]`.
///
/// `h` is the restoring drift: it is negative at `a` and positive at `b`, and
/// mass is transported against it, toward the middle of the interval.
#[derive(Clone)]
pub struct FpCoefficients {
    h: CoefficientFn,
    g2: CoefficientFn,
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
}

impl fmt::Debug for FpCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FpCoefficients")
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("a", &self.a)
            .field("b", &self.b)
            .finish_non_exhaustive()
    }
}

impl FpCoefficients {
    pub fn new(
        h: CoefficientFn,
        g2: CoefficientFn,
        alpha: f64,
        beta: f64,
        a: f64,
        b: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidCoefficients(format!(
                "alpha and beta must be positive, got {alpha} and {beta}"
            )));
        }
        if !(a < 0.0 && 0.0 < b && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidCoefficients(format!("need a < 0 < b, got [{a}, {b}]")));
        }
        if g2(a) != 0.0 || g2(b) != 0.0 {
            return Err(Error::InvalidCoefficients("g² must vanish at both ends".into()));
        }
        if !(h(a) < 0.0 && h(b) > 0.0) {
            return Err(Error::InvalidCoefficients("need h(a) < 0 < h(b)".into()));
        }
        Ok(Self {
            h,
            g2,
            alpha,
            beta,
            a,
            b,
        })
    }

    /// The coefficient pair shaped like the textbook example: `h(x) = x³` and
    /// `g²` a tanh-smoothed step on `[-1, 1]`, forced to zero at `±1`.
    pub fn fig4(alpha: f64, beta: f64) -> Result<Self> {
        const GAMMA: f64 = 10.0;
        let h: CoefficientFn = Arc::new(|x: f64| x * x * x);
        let g2: CoefficientFn = Arc::new(|x: f64| {
            if x.abs() >= 1.0 {
                0.0
            } else {
                0.5 * (1.0 + (GAMMA * (1.0 - 2.0 * x.abs())).tanh())
            }
        });
        Self::new(h, g2, alpha, beta, -1.0, 1.0)
    }

    /// Linear drift `h(x) = x` with `g²(x) = 1 - x²` on `[-1, 1]`.
    ///
    /// The steady state is the bump `(1 - x²)^(α/(2β) - 1)`, which vanishes
    /// at both ends whenever `α/β > 2`.
    pub fn bump(alpha: f64, beta: f64) -> Result<Self> {
        let h: CoefficientFn = Arc::new(|x: f64| x);
        let g2: CoefficientFn = Arc::new(|x: f64| (1.0 - x * x).max(0.0));
        Self::new(h, g2, alpha, beta, -1.0, 1.0)
    }

    pub fn h(&self, x: f64) -> f64 {
        (self.h)(x)
    }

    pub fn g2(&self, x: f64) -> f64 {
        (self.g2)(x)
    }
}

/// Discretization and stopping parameters of the steady-state solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// The grid has `2s + 1` cells (`2s + 2` nodes).
    pub half_resolution: usize,
    /// Defaults to `1e-4 (b - a)² / β` when `None`.
    pub time_step: Option<f64>,
    /// Stop once `‖p^{m+1} - p^m‖₁ / Δt` drops below this.
    pub steady_tol: f64,
    pub max_steps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            half_resolution: 1000,
            time_step: None,
            steady_tol: 1e-9,
            max_steps: 200_000,
        }
    }
}

/// A steady state on the uniform partition of `[a, b]`, stored as the mass
/// of each of its `2s + 1` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterProfile {
    a: f64,
    b: f64,
    weights: Vec<f64>,
}

impl FilterProfile {
    /// `weights` must be nonnegative, odd in count and sum to one.
    pub fn new(a: f64, b: f64, weights: Vec<f64>) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidFilter(format!("empty support [{a}, {b}]")));
        }
        if weights.len() % 2 == 0 {
            return Err(Error::InvalidFilter("profile needs an odd number of cells".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidFilter("profile weights must be finite and nonnegative".into()));
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidFilter(format!("profile mass is {mass}, expected 1")));
        }
        Ok(Self { a, b, weights })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn half_resolution(&self) -> usize {
        (self.weights.len() - 1) / 2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes(&self) -> Vec<f64> {
        let m = self.weights.len();
        let dx = (self.b - self.a) / m as f64;
        (0..=m).map(|i| self.a + i as f64 * dx).collect()
    }

    /// Mass inside the centered sub-interval covering `fraction` of `[a, b]`.
    pub fn central_mass(&self, fraction: f64) -> f64 {
        let m = self.weights.len() as f64;
        let lo = 0.5 * (1.0 - fraction) * m;
        let hi = 0.5 * (1.0 + fraction) * m;
        integrate_cells(&self.weights, lo, hi)
    }

    /// Largest mismatch between the profile and its mirror image.
    pub fn asymmetry(&self) -> f64 {
        let n = self.weights.len();
        (0..n / 2)
            .map(|i| (self.weights[i] - self.weights[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Integral of the piecewise-constant profile over `[lo, hi]`, both given in
/// cell units (`0..=weights.len()`): a fractional left piece, the full cells
/// in between and a fractional right piece.
fn integrate_cells(weights: &[f64], lo: f64, hi: f64) -> f64 {
    let m = weights.len();
    let lo = lo.clamp(0.0, m as f64);
    let hi = hi.clamp(0.0, m as f64);
    if hi <= lo {
        return 0.0;
    }
    let i0 = (lo.floor() as usize).min(m - 1);
    let i1 = hi.floor() as usize;
    if i1 == i0 {
        return weights[i0] * (hi - lo);
    }
    let left = weights[i0] * ((i0 + 1) as f64 - lo);
    let mid: f64 = weights[i0 + 1..i1.min(m)].iter().sum();
    let right = if i1 < m { weights[i1] * (hi - i1 as f64) } else { 0.0 };
    left + mid + right
}

/// Runs the Fokker-Planck equation from a discrete delta at the midpoint to
/// its steady state with Crank-Nicolson steps.
///
/// Cell masses evolve by a conservative finite-volume scheme with
/// exponentially fitted fluxes and no flux through `a` or `b`. Fitting keeps
/// the density nonnegative where the diffusion vanishes and the drift
/// dominates; elsewhere it agrees with centered differences. The first step is split into four
/// implicit half steps so that the delta does not excite undamped
/// Crank-Nicolson oscillations.
pub fn solve_fp_steady_state(c: &FpCoefficients, settings: &SolverSettings) -> Result<FilterProfile> {
    let s = settings.half_resolution;
    if s == 0 {
        return Err(Error::InvalidConfig("half resolution must be at least 1".into()));
    }
    let m = 2 * s + 1;
    let width = c.b - c.a;
    let dx = width / m as f64;
    let dt = settings
        .time_step
        .unwrap_or(1e-4 * width * width / c.beta);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidConfig(format!("time step must be positive, got {dt}")));
    }

    let diffusion: Vec<f64> = (0..m)
        .map(|i| c.beta * c.g2(c.a + (i as f64 + 0.5) * dx))
        .collect();
    if let Some(i) = diffusion.iter().position(|d| !(*d > 0.0)) {
        return Err(Error::InvalidCoefficients(format!(
            "g² is not positive inside the interval (cell {i})"
        )));
    }
    // advection velocity on the faces, pointing toward the midpoint
    let velocity: Vec<f64> = (0..=m).map(|j| -c.alpha * c.h(c.a + j as f64 * dx)).collect();
    if !(velocity[1] > 0.0 && velocity[m - 1] < 0.0) {
        return Err(Error::InvalidCoefficients(
            "drift must point inward next to both ends".into(),
        ));
    }

    // du/dt = A u, tridiagonal. Face j carries the flux
    // (B(-P) d[j-1] u[j-1] - B(P) d[j] u[j]) / dx with P the cell Peclet number.
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let dx2 = dx * dx;
    for j in 1..m {
        let face_diffusion = 0.5 * (diffusion[j - 1] + diffusion[j]);
        let peclet = velocity[j] * dx / face_diffusion;
        let (into_right, into_left) = (bernoulli(-peclet), bernoulli(peclet));
        lower[j] = into_right * diffusion[j - 1] / dx2;
        diag[j - 1] -= into_right * diffusion[j - 1] / dx2;
        upper[j - 1] = into_left * diffusion[j] / dx2;
        diag[j] -= into_left * diffusion[j] / dx2;
    }
    let half = 0.5 * dt;
    let lhs_lower: Vec<f64> = lower.iter().map(|v| -half * v).collect();
    let lhs_diag: Vec<f64> = diag.iter().map(|v| 1.0 - half * v).collect();
    let lhs_upper: Vec<f64> = upper.iter().map(|v| -half * v).collect();

    let apply_rhs = |u: &[f64], out: &mut [f64]| {
        for i in 0..m {
            let mut v = u[i] + half * diag[i] * u[i];
            if i > 0 {
                v += half * lower[i] * u[i - 1];
            }
            if i + 1 < m {
                v += half * upper[i] * u[i + 1];
            }
            out[i] = v;
        }
    };

    let mut u = vec![0.0; m];
    u[s] = 1.0 / dx;
    let mut next = vec![0.0; m];
    let mut scratch = vec![0.0; m];
    let renormalize = |u: &mut [f64]| {
        let mass: f64 = u.iter().sum::<f64>() * dx;
        debug_assert!((mass - 1.0).abs() < 1e-8, "mass drift {}", mass - 1.0);
        for v in u.iter_mut() {
            *v /= mass;
        }
    };

    // (I - Δt/2 A) is also the backward-Euler matrix for a half step
    for _ in 0..4 {
        next.copy_from_slice(&u);
        tridiag::solve_in_place(&lhs_lower, &lhs_diag, &lhs_upper, &mut next, &mut scratch);
        renormalize(&mut next);
        std::mem::swap(&mut u, &mut next);
    }

    let mut residual = f64::INFINITY;
    for _ in 0..settings.max_steps {
        apply_rhs(&u, &mut next);
        tridiag::solve_in_place(&lhs_lower, &lhs_diag, &lhs_upper, &mut next, &mut scratch);
        renormalize(&mut next);
        residual = u
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * dx
            / dt;
        std::mem::swap(&mut u, &mut next);
        if residual < settings.steady_tol {
            return profile_from_density(c.a, c.b, &u, dx);
        }
    }
    Err(Error::NoSteadyState {
        steps: settings.max_steps,
        residual,
    })
}

/// `z / (e^z - 1)`
fn bernoulli(z: f64) -> f64 {
    if z.abs() < 1e-12 {
        1.0 - 0.5 * z
    } else {
        z / z.exp_m1()
    }
}

fn profile_from_density(a: f64, b: f64, u: &[f64], dx: f64) -> Result<FilterProfile> {
    let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let worst = u.iter().fold(0.0f64, |m, v| m.min(*v));
    if worst < -1e-9 * peak {
        return Err(Error::InvalidCoefficients(format!(
            "steady state has a negative density {worst:e} (peak {peak:e}); refine the grid"
        )));
    }
    let mut weights: Vec<f64> = u.iter().map(|v| v.max(0.0) * dx).collect();
    let mass: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= mass;
    }
    FilterProfile::new(a, b, weights)
}

/// A symmetric, nonnegative, unit-mass tap vector indexed `-m..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFilter {
    weights: Vec<f64>,
    half_length: f64,
}

impl DiscreteFilter {
    pub fn new(weights: Vec<f64>, half_length: f64) -> Result<Self> {
        if weights.is_empty() || weights.len() % 2 == 0 {
            return Err(Error::InvalidFilter("filter needs an odd number of taps".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidFilter("weights must be finite and nonnegative".into()));
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidFilter(format!("filter mass is {mass}, expected 1")));
        }
        let peak = weights.iter().fold(0.0f64, |m, w| m.max(*w));
        let n = weights.len();
        if (0..n / 2).any(|i| (weights[i] - weights[n - 1 - i]).abs() > 1e-9 * peak) {
            return Err(Error::InvalidFilter("weights are not symmetric".into()));
        }
        if !(half_length.is_finite() && half_length >= 0.0) {
            return Err(Error::InvalidFilter(format!("bad half length {half_length}")));
        }
        Ok(Self {
            weights,
            half_length,
        })
    }

    /// The single-tap identity filter.
    pub fn dirac() -> Self {
        Self {
            weights: vec![1.0],
            half_length: 0.0,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of taps on each side of the center.
    pub fn half_width(&self) -> usize {
        self.weights.len() / 2
    }

    /// Nominal half-length in samples; may be fractional.
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    /// Real DFT symbol of the filter embedded in a periodic grid of `n` points.
    pub fn symbol(&self, k: usize, n: usize) -> f64 {
        let m = self.half_width() as i64;
        let n_i = n as i64;
        let k = k as i64 % n_i;
        let mut acc = 0.0;
        for (idx, w) in self.weights.iter().enumerate() {
            let t = idx as i64 - m;
            let phase = (k * t).rem_euclid(n_i) as f64 / n as f64;
            acc += w * (2.0 * PI * phase).cos();
        }
        acc
    }
}

/// Maps the profile onto `2n + 1` equal intervals by linear scaling of
/// `[a, b]` and integrates it over each interval (Riemann sum over the
/// profile's cells).
pub fn rescale_filter(p: &FilterProfile, n: usize, half_length: f64) -> Result<DiscreteFilter> {
    if n == 0 {
        return Err(Error::InvalidConfig("target half resolution must be at least 1".into()));
    }
    let cells = p.weights.len() as f64;
    let targets = 2 * n + 1;
    let pos = |j: usize| (j as f64 * cells) / targets as f64;
    let weights = (0..targets)
        .map(|j| integrate_cells(&p.weights, pos(j), pos(j + 1)))
        .collect();
    DiscreteFilter::new(weights, half_length)
}

/// How a fixed-length profile is stretched to a mask of half-length `l`:
/// the tap at offset `t` samples profile coordinate `y` with `t = l y / L`
/// (linear) or `t = l (y / L)³` (cubic).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScalingFunction {
    #[default]
    Linear,
    Cubic,
}

/// Realizes the profile as taps at integer offsets whose support is
/// `[-(l + ½), l + ½]` samples. Fractional `l` yields partial outer taps.
pub fn filter_for_half_length(
    p: &FilterProfile,
    half_length: f64,
    scaling: ScalingFunction,
) -> Result<DiscreteFilter> {
    if !(half_length.is_finite() && half_length >= 0.0) {
        return Err(Error::InvalidConfig(format!("bad mask half length {half_length}")));
    }
    if half_length == 0.0 {
        return Ok(DiscreteFilter::dirac());
    }
    if scaling == ScalingFunction::Linear && half_length.fract() == 0.0 {
        return rescale_filter(p, half_length as usize, half_length);
    }
    let cells = p.weights.len() as f64;
    let radius = half_length + 0.5;
    let to_cells = |x: f64| {
        let r = x / radius;
        let y = match scaling {
            ScalingFunction::Linear => r,
            ScalingFunction::Cubic => r.cbrt(),
        };
        0.5 * (y + 1.0) * cells
    };
    let k = (half_length + 1.0).ceil() as i64 - 1;
    let weights = (-k..=k)
        .map(|t| {
            let lo = (t as f64 - 0.5).max(-radius);
            let hi = (t as f64 + 0.5).min(radius);
            integrate_cells(&p.weights, to_cells(lo), to_cells(hi))
        })
        .collect();
    DiscreteFilter::new(weights, half_length)
}

/// Discrete convolution of `w` with itself; the symbol is squared.
pub fn self_convolve(w: &DiscreteFilter) -> DiscreteFilter {
    let n = w.weights.len();
    let mut out = vec![0.0; 2 * n - 1];
    for (i, a) in w.weights.iter().enumerate() {
        for (j, b) in w.weights.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    let mass: f64 = out.iter().sum();
    for v in &mut out {
        *v /= mass;
    }
    DiscreteFilter {
        weights: out,
        half_length: 2.0 * w.half_length,
    }
}

/// `a(t) = (l + 1 - |t|) / (l + 1)²` for integer `|t| <= l`.
pub fn double_average_filter(l: usize) -> Result<DiscreteFilter> {
    if l == 0 {
        return Err(Error::InvalidConfig("double average filter needs l >= 1".into()));
    }
    let denom = ((l + 1) * (l + 1)) as f64;
    let weights = (0..=2 * l)
        .map(|i| (l + 1 - i.abs_diff(l)) as f64 / denom)
        .collect();
    DiscreteFilter::new(weights, l as f64)
}

/// The filter symbol on a periodic grid and the verdict of the sufficient
/// convergence condition `|1 - ŵ| < 1 or ŵ = 0` at every grid frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub grid_size: usize,
    /// `ŵ(k)` for `k = 0..=grid_size / 2`; the symbol is even in `k`.
    pub symbol: Vec<f64>,
    pub max_deviation: f64,
    pub zero_set: Vec<usize>,
    pub condition_met: bool,
    /// Smallest symbol value over all frequencies.
    pub min_symbol: f64,
    /// Largest symbol value over the nonzero frequencies (`ŵ(0) = 1` always).
    pub max_symbol_nonzero: f64,
}

pub fn spectrum_report(w: &DiscreteFilter, grid_size: usize, zero_tol: f64) -> Result<SpectrumReport> {
    let support = w.weights.len();
    if grid_size < support || grid_size == 0 {
        return Err(Error::GridTooSmall {
            grid: grid_size,
            support,
        });
    }
    let symbol: Vec<f64> = (0..=grid_size / 2).map(|k| w.symbol(k, grid_size)).collect();
    let max_deviation = symbol.iter().map(|s| (1.0 - s).abs()).fold(0.0, f64::max);
    let zero_set = symbol
        .iter()
        .enumerate()
        .filter(|(_, s)| s.abs() < zero_tol)
        .map(|(k, _)| k)
        .collect();
    let condition_met = symbol
        .iter()
        .all(|s| (1.0 - s).abs() < 1.0 || s.abs() < zero_tol);
    let min_symbol = symbol.iter().copied().fold(f64::INFINITY, f64::min);
    let max_symbol_nonzero = symbol
        .iter()
        .skip(1)
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SpectrumReport {
        grid_size,
        symbol,
        max_deviation,
        zero_set,
        condition_met,
        min_symbol,
        max_symbol_nonzero,
    })
}

/// How mask lengths are turned into concrete filters.
#[derive(Debug, Clone)]
pub enum Realization {
    /// Interpolate the master profile (fast; the default).
    Interpolate,
    /// Solve the steady state again on a grid with one cell per tap.
    Resolve {
        coefficients: FpCoefficients,
        settings: SolverSettings,
    },
}

/// A master profile plus the recipe for deriving the filter of any mask length.
#[derive(Debug, Clone)]
pub struct FilterSource {
    pub profile: Arc<FilterProfile>,
    /// Convolve the length-`l/2` filter with itself, which makes the symbol
    /// nonnegative.
    pub self_convolve: bool,
    pub scaling: ScalingFunction,
    pub realization: Realization,
}

impl FilterSource {
    pub fn new(profile: FilterProfile, self_convolve: bool) -> Self {
        Self::from_shared(Arc::new(profile), self_convolve)
    }

    pub fn from_shared(profile: Arc<FilterProfile>, self_convolve: bool) -> Self {
        Self {
            profile,
            self_convolve,
            scaling: ScalingFunction::Linear,
            realization: Realization::Interpolate,
        }
    }

    /// The filter whose support spans `half_length` samples on each side.
    pub fn realize(&self, half_length: f64) -> Result<DiscreteFilter> {
        if self.self_convolve {
            let base = self.realize_plain(0.5 * half_length)?;
            Ok(self_convolve(&base))
        } else {
            self.realize_plain(half_length)
        }
    }

    fn realize_plain(&self, half_length: f64) -> Result<DiscreteFilter> {
        match &self.realization {
            Realization::Interpolate => filter_for_half_length(&self.profile, half_length, self.scaling),
            Realization::Resolve {
                coefficients,
                settings,
            } => {
                let n = half_length.round().max(1.0) as usize;
                let local = SolverSettings {
                    half_resolution: n,
                    ..*settings
                };
                let p = solve_fp_steady_state(coefficients, &local)?;
                DiscreteFilter::new(p.weights, half_length)
            }
        }
    }
}

/// Named coefficient families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig4,
    Bump,
}

impl Preset {
    pub fn coefficients(self, alpha: f64, beta: f64) -> Result<FpCoefficients> {
        match self {
            Preset::Fig4 => FpCoefficients::fig4(alpha, beta),
            Preset::Bump => FpCoefficients::bump(alpha, beta),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Fig4 => "fig4",
            Preset::Bump => "bump",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig4" => Ok(Preset::Fig4),
            "bump" => Ok(Preset::Bump),
            other => Err(Error::InvalidConfig(format!("unknown filter preset '{other}'"))),
        }
    }
}

/// A preset solved to steady state, as written in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSpec {
    pub preset: Preset,
    pub alpha: f64,
    pub beta: f64,
    pub half_resolution: usize,
    pub self_convolve: bool,
}

type ProfileKey = (Preset, u64, u64, usize);

fn profile_cache() -> &'static Mutex<HashMap<ProfileKey, Arc<FilterProfile>>> {
    static CACHE: OnceLock<Mutex<HashMap<ProfileKey, Arc<FilterProfile>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl FilterSpec {
    /// The filter [`crate::iterfilt::IfConfig`] uses by default: the bump
    /// `(1 - x²)⁵`.
    pub const IF_DEFAULT: FilterSpec = FilterSpec::bump(0.12, 0.01);
    /// The filter [`crate::alif::AlifConfig`] uses by default: the bump
    /// `(1 - x²)⁷`.
    pub const ALIF_DEFAULT: FilterSpec = FilterSpec::bump(0.16, 0.01);

    pub const fn bump(alpha: f64, beta: f64) -> Self {
        Self {
            preset: Preset::Bump,
            alpha,
            beta,
            half_resolution: 1000,
            self_convolve: true,
        }
    }

    pub const fn fig4(alpha: f64, beta: f64) -> Self {
        Self {
            preset: Preset::Fig4,
            alpha,
            beta,
            half_resolution: 1000,
            self_convolve: true,
        }
    }

    /// The steady-state profile. Solutions are cached for the life of the
    /// process, so repeated calls with the same spec are cheap.
    pub fn profile(&self) -> Result<Arc<FilterProfile>> {
        let key = (
            self.preset,
            self.alpha.to_bits(),
            self.beta.to_bits(),
            self.half_resolution,
        );
        if let Some(p) = profile_cache().lock().expect("profile cache poisoned").get(&key) {
            return Ok(p.clone());
        }
        let coefficients = self.preset.coefficients(self.alpha, self.beta)?;
        let settings = SolverSettings {
            half_resolution: self.half_resolution,
            ..Default::default()
        };
        let profile = Arc::new(solve_fp_steady_state(&coefficients, &settings)?);
        profile_cache()
            .lock()
            .expect("profile cache poisoned")
            .insert(key, profile.clone());
        Ok(profile)
    }

    pub fn source(&self) -> Result<FilterSource> {
        Ok(FilterSource::from_shared(self.profile()?, self.self_convolve))
    }
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self::IF_DEFAULT
    }
}

/// Writes `# half_length=<l> n=<n>` followed by the `2n + 1` weights, one
/// per line, at 17 significant digits.
pub fn write_filter<W: Write>(w: &DiscreteFilter, mut out: W) -> Result<()> {
    writeln!(out, "# half_length={} n={}", w.half_length, w.half_width())?;
    for v in &w.weights {
        writeln!(out, "{v:.16e}")?;
    }
    Ok(())
}

pub fn read_filter<R: BufRead>(input: R) -> Result<DiscreteFilter> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::Parse {
            row: 0,
            reason: "empty filter file".into(),
        })?;
    let bad_header = || Error::Parse {
        row: 0,
        reason: format!("malformed header '{header}'"),
    };
    let rest = header.strip_prefix('#').ok_or_else(bad_header)?;
    let mut half_length = None;
    let mut n = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("half_length", v)) => half_length = v.parse::<f64>().ok(),
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            _ => return Err(bad_header()),
        }
    }
    let (half_length, n) = half_length.zip(n).ok_or_else(bad_header)?;
    let mut weights = Vec::with_capacity(2 * n + 1);
    for (row, line) in lines.enumerate() {
        let line = line?;
        for tok in line.split_whitespace() {
            let v = tok.parse::<f64>().map_err(|e| Error::Parse {
                row: row + 1,
                reason: format!("bad weight '{tok}': {e}"),
            })?;
            weights.push(v);
        }
    }
    if weights.len() != 2 * n + 1 {
        return Err(Error::Parse {
            row: 0,
            reason: format!("expected {} weights, found {}", 2 * n + 1, weights.len()),
        });
    }
    DiscreteFilter::new(weights, half_length)
}
