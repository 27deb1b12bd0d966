//! Adaptive Local Iterative Filtering: the mask length varies along the
//! signal, following the local spacing of its extrema.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpfilter::{DiscreteFilter, FilterSource, FilterSpec};
use crate::iterfilt::{
    if_decompose, mask_length_for, outer_loop, sift, validate_loop_params, Decomposition,
    mask_verdict, IfConfig, InnerDiagnostics, Round, Step,
};
use crate::signal::{centered_sum, extend, extrema_of, BoundaryMode, Signal};
use crate::spline::NaturalSpline;

/// Share of samples (centered) over which the ε/δ sup-norms are taken.
const DIAGNOSTIC_WINDOW: f64 = 0.9;

/// Per-sample mask half-lengths, in samples.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskField {
    values: Vec<f64>,
    min_clamp: f64,
}

impl MaskField {
    pub fn new(values: Vec<f64>, min_clamp: f64) -> Result<Self> {
        if !(min_clamp > 0.0 && min_clamp.is_finite()) {
            return Err(Error::InvalidConfig(format!("min clamp must be positive, got {min_clamp}")));
        }
        if values.is_empty() {
            return Err(Error::InvalidConfig("empty mask field".into()));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= min_clamp)) {
            return Err(Error::InvalidConfig(format!(
                "mask value {} at sample {i} is below the clamp {min_clamp}",
                values[i]
            )));
        }
        Ok(Self { values, min_clamp })
    }

    pub fn constant(len: usize, value: f64, min_clamp: f64) -> Result<Self> {
        Self::new(vec![value.max(min_clamp); len], min_clamp)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min_clamp(&self) -> f64 {
        self.min_clamp
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// How the raw extrema-spacing field is turned into a slowly varying one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskSmoothing {
    /// Keep only the IF trend of the raw field.
    #[default]
    IfTrend,
    /// Use the raw field as is.
    Off,
}

#[derive(Debug, Clone)]
pub struct AlifConfig {
    /// The mask at an extremum is this multiple of the gap to the next one.
    pub mask_multiplier: f64,
    pub smoothing: MaskSmoothing,
    /// Mask multiplier of the IF run that smooths the field.
    pub smoothing_chi: f64,
    /// Smallest admissible half-length, in samples.
    pub min_clamp: f64,
    /// When set, every round uses the constant IF mask `2 ⌊chi N / k⌋`
    /// instead of an adaptive field.
    pub uniform_chi: Option<f64>,
    pub sd_threshold: f64,
    pub max_inner: usize,
    pub max_imfs: usize,
    pub boundary: BoundaryMode,
    pub filter: FilterSource,
}

impl AlifConfig {
    pub fn new(filter: FilterSource) -> Self {
        Self {
            mask_multiplier: 7.2,
            smoothing: MaskSmoothing::IfTrend,
            smoothing_chi: 3.2,
            min_clamp: 2.0,
            uniform_chi: None,
            sd_threshold: 1e-5,
            max_inner: 200,
            max_imfs: 32,
            boundary: BoundaryMode::Reflect,
            filter,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_loop_params(self.sd_threshold, self.max_inner)?;
        for (name, v) in [
            ("mask multiplier", self.mask_multiplier),
            ("smoothing chi", self.smoothing_chi),
            ("min clamp", self.min_clamp),
            ("uniform chi", self.uniform_chi.unwrap_or(1.0)),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

impl Default for AlifConfig {
    fn default() -> Self {
        Self::new(FilterSpec::ALIF_DEFAULT.source().expect("built-in filter preset solves"))
    }
}

/// Running ratios of moving-average sup-norms along one inner loop.
///
/// `eps[i]` compares `‖L(f)‖∞` after step `i + 1` with the value before it;
/// `delta` does the same for `‖L(|f|)‖∞`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceDiagnostics {
    pub eps: Vec<f64>,
    pub delta: Vec<f64>,
    pub eps_product: Vec<f64>,
    pub delta_product: Vec<f64>,
}

impl ConvergenceDiagnostics {
    fn from_norms(ma: &[f64], abs_ma: &[f64]) -> Self {
        let mut d = Self::default();
        for i in 1..ma.len() {
            if ma[i - 1] == 0.0 || abs_ma[i - 1] == 0.0 {
                break;
            }
            d.push(ma[i] / ma[i - 1], abs_ma[i] / abs_ma[i - 1]);
        }
        d
    }

    fn push(&mut self, eps: f64, delta: f64) {
        let ep = self.eps_product.last().copied().unwrap_or(1.0) * eps;
        let dp = self.delta_product.last().copied().unwrap_or(1.0) * delta;
        self.eps.push(eps);
        self.delta.push(delta);
        self.eps_product.push(ep);
        self.delta_product.push(dp);
    }

    /// `∏ ε` at the end of the loop (1 when nothing was recorded).
    pub fn final_eps_product(&self) -> f64 {
        self.eps_product.last().copied().unwrap_or(1.0)
    }

    pub fn final_delta_product(&self) -> f64 {
        self.delta_product.last().copied().unwrap_or(1.0)
    }
}

/// Knots at the midpoints between consecutive extrema carry `multiplier`
/// times their gap; a natural spline joins them and the end knots are held
/// constant out to the record boundaries.
pub fn raw_mask_field(s: &Signal, multiplier: f64, min_clamp: f64) -> Result<MaskField> {
    raw_field_of(s.samples(), multiplier, min_clamp)
}

fn raw_field_of(v: &[f64], multiplier: f64, min_clamp: f64) -> Result<MaskField> {
    let idx = extrema_of(v).indices();
    if idx.len() < 3 {
        return Err(Error::TooFewExtrema {
            need: 3,
            found: idx.len(),
        });
    }
    let xs: Vec<f64> = idx.windows(2).map(|p| 0.5 * (p[0] + p[1]) as f64).collect();
    let ys: Vec<f64> = idx
        .windows(2)
        .map(|p| multiplier * (p[1] - p[0]) as f64)
        .collect();
    let spline = NaturalSpline::new(xs, ys);
    let values = (0..v.len())
        .map(|i| spline.eval_clamped(i as f64).max(min_clamp))
        .collect();
    MaskField::new(values, min_clamp)
}

/// Keeps the IF trend of the raw field, floored at
/// `max(min_clamp, 0.1 * mean(raw))`.
pub fn smooth_mask_field(raw: &MaskField, cfg: &AlifConfig) -> Result<MaskField> {
    let floor = raw.min_clamp.max(0.1 * raw.mean());
    let smooth = match cfg.smoothing {
        MaskSmoothing::Off => raw.values.clone(),
        MaskSmoothing::IfTrend => {
            let as_signal = Signal::new(raw.values.clone(), 1.0, 0.0)?;
            let if_cfg = IfConfig {
                chi: cfg.smoothing_chi,
                sd_threshold: cfg.sd_threshold,
                max_inner: cfg.max_inner,
                max_imfs: cfg.max_imfs,
                boundary: BoundaryMode::Reflect,
                filter: cfg.filter.clone(),
            };
            if_decompose(&as_signal, &if_cfg)?.remainder.into_samples()
        }
    };
    MaskField::new(smooth.into_iter().map(|v| v.max(floor)).collect(), raw.min_clamp)
}

/// Filters realized for a mask field, shared between samples whose
/// half-lengths agree to 0.1 sample.
struct FilterBank {
    filters: Vec<DiscreteFilter>,
    slot: Vec<usize>,
}

impl FilterBank {
    fn new(source: &FilterSource, field: &MaskField) -> Result<Self> {
        let mut keys: HashMap<i64, usize> = HashMap::new();
        let mut filters = Vec::new();
        let mut slot = Vec::with_capacity(field.len());
        for &l in &field.values {
            let key = (l * 10.0).round() as i64;
            let idx = match keys.get(&key) {
                Some(&i) => i,
                None => {
                    filters.push(source.realize(key as f64 / 10.0)?);
                    keys.insert(key, filters.len() - 1);
                    filters.len() - 1
                }
            };
            slot.push(idx);
        }
        Ok(Self { filters, slot })
    }

    fn max_half_width(&self) -> usize {
        self.filters.iter().map(|w| w.half_width()).max().unwrap_or(0)
    }

    fn apply(&self, v: &[f64], boundary: BoundaryMode) -> Vec<f64> {
        let pad = self.max_half_width();
        let ext = extend(v, pad, boundary);
        (0..v.len())
            .map(|i| centered_sum(&ext, pad, i, self.filters[self.slot[i]].weights()))
            .collect()
    }
}

/// Moving average whose filter at each sample has the half-length the
/// field prescribes there.
pub fn adaptive_moving_average(
    s: &Signal,
    source: &FilterSource,
    field: &MaskField,
    boundary: BoundaryMode,
) -> Result<Signal> {
    if field.len() != s.len() {
        return Err(Error::LengthMismatch(s.len(), field.len()));
    }
    let bank = FilterBank::new(source, field)?;
    let half_width = bank.max_half_width();
    if half_width > s.len() {
        return Err(Error::FilterTooLong {
            half_width,
            len: s.len(),
        });
    }
    s.with_samples(bank.apply(s.samples(), boundary))
}

fn interior_sup(v: &[f64]) -> f64 {
    let cut = ((1.0 - DIAGNOSTIC_WINDOW) / 2.0 * v.len() as f64).floor() as usize;
    let window = if 2 * cut < v.len() { &v[cut..v.len() - cut] } else { v };
    window.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Ratios of sup-norms (interior 90%) of successive moving averages of the
/// iterate and of its absolute value.
pub fn eps_delta(
    prev_ma: &Signal,
    curr_ma: &Signal,
    prev_abs_ma: &Signal,
    curr_abs_ma: &Signal,
) -> Result<(f64, f64)> {
    let p = interior_sup(prev_ma.samples());
    let pa = interior_sup(prev_abs_ma.samples());
    if p == 0.0 || pa == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((
        interior_sup(curr_ma.samples()) / p,
        interior_sup(curr_abs_ma.samples()) / pa,
    ))
}

fn run_inner(
    v: &[f64],
    bank: &FilterBank,
    cfg: &AlifConfig,
) -> Result<(Vec<f64>, usize, Vec<f64>, ConvergenceDiagnostics)> {
    let mut ma_norms = Vec::new();
    let mut abs_norms = Vec::new();
    let mut record = |f: &[f64], mean: &[f64]| {
        let abs: Vec<f64> = f.iter().map(|x| x.abs()).collect();
        ma_norms.push(interior_sup(mean));
        abs_norms.push(interior_sup(&bank.apply(&abs, cfg.boundary)));
    };
    let out = sift(v, cfg.sd_threshold, cfg.max_inner, |f| {
        let mean = bank.apply(f, cfg.boundary);
        record(f, &mean);
        Ok(mean)
    })?;
    if out.iterations > 0 {
        let mean = bank.apply(&out.imf, cfg.boundary);
        record(&out.imf, &mean);
    }
    let convergence = ConvergenceDiagnostics::from_norms(&ma_norms, &abs_norms);
    Ok((out.imf, out.iterations, out.sd_history, convergence))
}

/// One sifting loop with the field frozen.
pub fn alif_inner_loop(
    s: &Signal,
    field: &MaskField,
    cfg: &AlifConfig,
) -> Result<(Signal, InnerDiagnostics, ConvergenceDiagnostics)> {
    if field.len() != s.len() {
        return Err(Error::LengthMismatch(s.len(), field.len()));
    }
    let bank = FilterBank::new(&cfg.filter, field)?;
    let half_width = bank.max_half_width();
    if half_width > s.len() {
        return Err(Error::FilterTooLong {
            half_width,
            len: s.len(),
        });
    }
    let (imf, iterations, sd_history, convergence) = run_inner(s.samples(), &bank, cfg)?;
    let diagnostics = InnerDiagnostics {
        iterations,
        final_sd: sd_history.last().copied().unwrap_or(0.0),
        sd_history,
        mask_half_length: field.mean(),
    };
    Ok((s.with_samples(imf)?, diagnostics, convergence))
}

/// The mask used for the next component of `v`.
pub fn mask_for_round(v: &Signal, cfg: &AlifConfig) -> Result<MaskField> {
    field_for(v.samples(), cfg)
}

fn field_for(v: &[f64], cfg: &AlifConfig) -> Result<MaskField> {
    if let Some(chi) = cfg.uniform_chi {
        let l = mask_length_for(v, chi)?;
        return MaskField::constant(v.len(), l as f64, cfg.min_clamp);
    }
    let idx = extrema_of(v).indices();
    match idx.len() {
        0 | 1 => Err(Error::TooFewExtrema {
            need: 2,
            found: idx.len(),
        }),
        2 => MaskField::constant(
            v.len(),
            cfg.mask_multiplier * (idx[1] - idx[0]) as f64,
            cfg.min_clamp,
        ),
        _ => {
            let raw = raw_field_of(v, cfg.mask_multiplier, cfg.min_clamp)?;
            smooth_mask_field(&raw, cfg)
        }
    }
}

pub fn alif_decompose(s: &Signal, cfg: &AlifConfig) -> Result<Decomposition> {
    cfg.validate()?;
    let n = s.len();
    outer_loop(s, cfg.max_imfs, "alif".into(), |r, previous| {
        let field = field_for(r, cfg)?;
        let bank = FilterBank::new(&cfg.filter, &field)?;
        if let Some(stop) = mask_verdict(bank.max_half_width(), n, field.mean(), previous) {
            return Ok(Step::Stop(stop));
        }
        let (imf, iterations, sd_history, convergence) = run_inner(r, &bank, cfg)?;
        Ok(Step::Imf(Round {
            imf,
            diagnostics: InnerDiagnostics {
                iterations,
                final_sd: sd_history.last().copied().unwrap_or(0.0),
                sd_history,
                mask_half_length: field.mean(),
            },
            convergence: Some(convergence),
        }))
    })
}
