//! The benchmark suite: end-to-end runs of the synthetic examples and the
//! real-data sample, scored against the acceptance thresholds.
//!
//! Decompositions are computed lazily and shared between criteria, so
//! evaluating every criterion runs each example once.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::alif::{alif_decompose, AlifConfig};
use crate::config::RunConfig;
use crate::error::Result;
use crate::fpfilter::{spectrum_report, FilterSpec};
use crate::instfreq::{
    hilbert_instantaneous_frequency, local_instantaneous_frequency, FreqResult,
    DEFAULT_ENO_THRESHOLD,
};
use crate::io;
use crate::iterfilt::{if_decompose, spectral_limit_oracle, Decomposition, IfConfig};
use crate::signal::{find_extrema, moving_average, BoundaryMode, ExtremumKind, Signal};
use crate::signals::{
    generate_example, interior_correlation, interior_range, interior_rel_l2, match_components,
    ExampleCase, ExampleId, MatchReport,
};

const INTERIOR: f64 = 0.8;

#[derive(Debug, Clone)]
pub struct BenchSettings {
    pub if_cfg: IfConfig,
    pub alif_cfg: AlifConfig,
    pub seed: u64,
    pub spectral_trials: usize,
    pub eno_threshold: f64,
}

impl Default for BenchSettings {
    fn default() -> Self {
        Self {
            if_cfg: IfConfig::default(),
            alif_cfg: AlifConfig::default(),
            seed: 7,
            spectral_trials: 20,
            eno_threshold: DEFAULT_ENO_THRESHOLD,
        }
    }
}

impl BenchSettings {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        Ok(Self {
            if_cfg: cfg.if_config()?,
            alif_cfg: cfg.alif_config()?,
            seed: cfg.bench.seed,
            spectral_trials: cfg.bench.spectral_trials,
            eno_threshold: cfg.instfreq.eno_threshold,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    If,
    Alif,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::If => "if",
            Method::Alif => "alif",
        }
    }
}

/// One decomposition of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunId {
    Ex1,
    Ex2,
    Ex3If,
    Ex3Alif,
    Ex4a,
    Ex4b,
    Ex4c,
    Ex5,
    Ex6a,
    Ex6b,
    Lod,
}

impl RunId {
    pub const ALL: [RunId; 11] = [
        RunId::Ex1,
        RunId::Ex2,
        RunId::Ex3If,
        RunId::Ex3Alif,
        RunId::Ex4a,
        RunId::Ex4b,
        RunId::Ex4c,
        RunId::Ex5,
        RunId::Ex6a,
        RunId::Ex6b,
        RunId::Lod,
    ];

    pub fn example(self) -> Option<ExampleId> {
        Some(match self {
            RunId::Ex1 => ExampleId::Ex1,
            RunId::Ex2 => ExampleId::Ex2,
            RunId::Ex3If | RunId::Ex3Alif => ExampleId::Ex3,
            RunId::Ex4a => ExampleId::Ex4a,
            RunId::Ex4b => ExampleId::Ex4b,
            RunId::Ex4c => ExampleId::Ex4c,
            RunId::Ex5 => ExampleId::Ex5,
            RunId::Ex6a => ExampleId::Ex6a,
            RunId::Ex6b => ExampleId::Ex6b,
            RunId::Lod => return None,
        })
    }

    pub fn method(self) -> Method {
        match self {
            RunId::Ex3Alif | RunId::Ex5 | RunId::Ex6a | RunId::Ex6b => Method::Alif,
            _ => Method::If,
        }
    }

    /// File stem used for the run's CSV outputs.
    pub fn label(self) -> String {
        let name = self.example().map_or("lod", ExampleId::as_str);
        format!("{name}_{}", self.method().as_str())
    }

    fn slot(self) -> usize {
        RunId::ALL.iter().position(|r| *r == self).expect("listed")
    }
}

#[derive(Debug, Clone)]
pub struct Run {
    pub id: RunId,
    pub case: Option<ExampleCase>,
    pub dec: Decomposition,
}

impl Run {
    /// Truth pairing over the interior window, for generated examples.
    pub fn report(&self) -> Option<MatchReport> {
        let case = self.case.as_ref()?;
        match_components(&self.dec, &case.truth, INTERIOR).ok()
    }

    /// IMFs plus the remainder.
    pub fn component_count(&self) -> usize {
        self.dec.imfs.len() + 1
    }
}

/// A measured quantity and whether it met its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub value: String,
    pub passed: bool,
}

impl Check {
    fn new(label: impl Into<String>, value: impl fmt::Display, passed: bool) -> Self {
        Self {
            label: label.into(),
            value: value.to_string(),
            passed,
        }
    }

    fn error(label: impl Into<String>, message: impl fmt::Display) -> Self {
        Self::new(label, format!("error: {message}"), false)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// `PASS 4 example-1 ...: label=value, ...`; failed checks are marked `!`.
    pub fn summary_line(&self) -> String {
        let checks: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{}{}={}", if c.passed { "" } else { "!" }, c.label, c.value))
            .collect();
        format!("{} {:>2} {}: {}", self.status(), self.id, self.name, checks.join(", "))
    }
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "filter-condition"),
    (2, "spectral-equivalence"),
    (3, "exact-reconstruction"),
    (4, "example-1-trend"),
    (5, "example-2-two-imfs"),
    (6, "example-3-if-vs-alif"),
    (7, "example-4-noise"),
    (8, "example-6-alif"),
    (9, "tests-1-2-instfreq"),
    (10, "stopping"),
    (11, "imf-sign"),
    (12, "lod-smoke"),
];

pub struct Suite {
    settings: BenchSettings,
    runs: Vec<OnceLock<std::result::Result<Run, String>>>,
}

impl Suite {
    pub fn new(settings: BenchSettings) -> Self {
        Self {
            settings,
            runs: RunId::ALL.iter().map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn settings(&self) -> &BenchSettings {
        &self.settings
    }

    /// The decomposition for `id`, computed on first use.
    pub fn run(&self, id: RunId) -> std::result::Result<&Run, String> {
        self.runs[id.slot()]
            .get_or_init(|| self.compute(id).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute(&self, id: RunId) -> Result<Run> {
        let case = match id.example() {
            Some(ex) => Some(generate_example(ex, ex.default_len(), self.settings.seed)?),
            None => None,
        };
        let signal = match &case {
            Some(c) => c.signal.clone(),
            None => io::bundled_lod()?,
        };
        let dec = match id.method() {
            Method::If => if_decompose(&signal, &self.settings.if_cfg)?,
            Method::Alif => alif_decompose(&signal, &self.settings.alif_cfg)?,
        };
        Ok(Run { id, case, dec })
    }

    pub fn criterion(&self, id: u32) -> CriterionOutcome {
        let name = CRITERIA
            .iter()
            .find(|(i, _)| *i == id)
            .map_or("unknown", |(_, n)| n);
        let checks = match id {
            1 => self.filter_condition(),
            2 => self.spectral_equivalence(),
            3 => self.reconstruction(),
            4 => self.example_1(),
            5 => self.example_2(),
            6 => self.example_3(),
            7 => self.example_4(),
            8 => self.example_6(),
            9 => self.tests_1_2(),
            10 => self.stopping(),
            11 => self.imf_sign(),
            12 => self.lod(),
            _ => vec![Check::error("criterion", format!("no criterion {id}"))],
        };
        CriterionOutcome { id, name, checks }
    }

    pub fn all_criteria(&self) -> Vec<CriterionOutcome> {
        CRITERIA.iter().map(|(id, _)| self.criterion(*id)).collect()
    }

    fn filter_condition(&self) -> Vec<Check> {
        let source = match FilterSpec::fig4(0.005, 0.09).source() {
            Ok(s) => s,
            Err(e) => return vec![Check::error("design", e)],
        };
        let mut checks = Vec::new();
        for half_length in [8.0, 32.0, 128.5] {
            let label = format!("l={half_length}");
            let w = match source.realize(half_length) {
                Ok(w) => w,
                Err(e) => {
                    checks.push(Check::error(label, e));
                    continue;
                }
            };
            let mut grid = w.weights().len().next_power_of_two();
            let (mut ok, mut lo, mut hi) = (true, f64::INFINITY, f64::NEG_INFINITY);
            while grid <= 4096 {
                match spectrum_report(&w, grid, 1e-12) {
                    Ok(r) => {
                        ok &= r.condition_met;
                        lo = lo.min(r.min_symbol);
                        hi = hi.max(r.max_symbol_nonzero);
                    }
                    Err(_) => ok = false,
                }
                grid *= 2;
            }
            let passed = ok && lo >= -1e-12 && hi < 1.0;
            checks.push(Check::new(label, format!("symbol in [{lo:.2e}, {hi:.6}]"), passed));
        }
        checks
    }

    fn spectral_equivalence(&self) -> Vec<Check> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.settings.seed);
        let source = &self.settings.if_cfg.filter;
        let mut worst: f64 = 0.0;
        for _ in 0..self.settings.spectral_trials {
            let samples: Vec<f64> = (0..256).map(|_| rng.sample(StandardNormal)).collect();
            let half_length = rng.random_range(4.0..40.0);
            let outcome = (|| -> Result<f64> {
                let s = Signal::new(samples, 1.0, 0.0)?;
                let w = source.realize(half_length)?;
                let mut f = s.clone();
                for _ in 0..20 {
                    let mean = moving_average(&f, &w, BoundaryMode::Periodic)?;
                    let next = f.samples().iter().zip(mean.samples()).map(|(a, b)| a - b);
                    f = f.with_samples(next.collect())?;
                }
                let oracle = spectral_limit_oracle(&s, &w, Some(20), 0.0)?;
                Ok(interior_rel_l2(f.samples(), oracle.samples(), 1.0))
            })();
            match outcome {
                Ok(e) => worst = worst.max(e),
                Err(e) => return vec![Check::error("trial", e)],
            }
        }
        vec![Check::new(
            format!("max rel L2 over {} signals", self.settings.spectral_trials),
            format!("{worst:.2e}"),
            worst < 1e-10,
        )]
    }

    fn reconstruction(&self) -> Vec<Check> {
        RunId::ALL
            .iter()
            .map(|&id| match self.run(id) {
                Ok(run) => {
                    let e = run.dec.reconstruction_error();
                    Check::new(id.label(), format!("{e:.1e}"), e < 1e-12)
                }
                Err(e) => Check::error(id.label(), e),
            })
            .collect()
    }

    fn example_1(&self) -> Vec<Check> {
        let run = match self.run(RunId::Ex1) {
            Ok(r) => r,
            Err(e) => return vec![Check::error("ex1", e)],
        };
        let truth = &run.case.as_ref().expect("generated").truth;
        let count = run.component_count();
        let trend = interior_rel_l2(run.dec.remainder.samples(), truth[1].samples(), INTERIOR);
        let fm = run
            .dec
            .imfs
            .first()
            .map_or(0.0, |m| interior_correlation(m.samples(), truth[0].samples(), INTERIOR));
        vec![
            Check::new("components", count, count == 2),
            Check::new("trend rel L2", format!("{trend:.4}"), trend <= 0.05),
            Check::new("fm corr", format!("{fm:.4}"), fm >= 0.99),
        ]
    }

    fn example_2(&self) -> Vec<Check> {
        let run = match self.run(RunId::Ex2) {
            Ok(r) => r,
            Err(e) => return vec![Check::error("ex2", e)],
        };
        let dec = &run.dec;
        let s = &dec.input;
        let count = run.component_count();
        let mut checks = vec![Check::new("components", count, count == 2)];
        let window = interior_range(s.len(), INTERIOR);

        // the slowest component is the remainder: the tone has too few
        // extrema for any admissible mask
        match local_instantaneous_frequency(&dec.remainder, self.settings.eno_threshold) {
            Ok(fr) => {
                let dev = max_rel_deviation(&fr, window.clone(), |_| 4.0 * PI);
                checks.push(Check::new("tone omega dev", format!("{dev:.4}"), dev <= 0.05));
            }
            Err(e) => checks.push(Check::error("tone omega", e)),
        }
        match dec.imfs.first() {
            Some(chirp) => match local_instantaneous_frequency(chirp, self.settings.eno_threshold) {
                Ok(fr) => {
                    let keep = window.filter(|&i| s.x(i).abs() > 0.02);
                    let dev = max_rel_deviation(&fr, keep, |x| 50.0 * PI - 80.0 * PI * x.abs());
                    checks.push(Check::new("chirp omega dev", format!("{dev:.4}"), dev <= 0.05));
                }
                Err(e) => checks.push(Check::error("chirp omega", e)),
            },
            None => checks.push(Check::new("chirp omega dev", "no imf", false)),
        }
        checks
    }

    fn example_3(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        match self.run(RunId::Ex3If) {
            Ok(run) => {
                let truth = &run.case.as_ref().expect("generated").truth;
                let worst = match_components(&run.dec, &truth[..2], INTERIOR)
                    .map(|r| r.matches.iter().map(|m| m.correlation.abs()).fold(1.0, f64::min));
                match worst {
                    Ok(w) => checks.push(Check::new("if worst chirp corr", format!("{w:.3}"), w < 0.9)),
                    Err(e) => checks.push(Check::error("if", e)),
                }
            }
            Err(e) => checks.push(Check::error("if", e)),
        }
        match self.run(RunId::Ex3Alif) {
            Ok(run) => {
                let report = run.report();
                for (k, name) in [(0, "alif f1 corr"), (1, "alif f2 corr")] {
                    let c = report.as_ref().map_or(0.0, |r| r.matches[k].correlation);
                    checks.push(Check::new(name, format!("{c:.3}"), c >= 0.95));
                }
                let rem = &run.dec.remainder.samples()[interior_range(run.dec.input.len(), INTERIOR)];
                let dev = rem.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
                checks.push(Check::new("alif remainder |r-1|", format!("{dev:.3}"), dev <= 0.1));
            }
            Err(e) => checks.push(Check::error("alif", e)),
        }
        checks
    }

    fn example_4(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        for (id, min_corr, counts) in [(RunId::Ex4b, 0.95, 5..=9), (RunId::Ex4c, 0.90, 7..=11)] {
            let tag = id.example().expect("example").as_str();
            let run = match self.run(id) {
                Ok(r) => r,
                Err(e) => {
                    checks.push(Check::error(tag, e));
                    continue;
                }
            };
            let truth = &run.case.as_ref().expect("generated").truth;
            let count = run.component_count();
            checks.push(Check::new(format!("{tag} components"), count, counts.contains(&count)));
            let last_imf = run.dec.imfs.last().map(Signal::samples);
            let fast = last_imf.map_or(0.0, |v| interior_correlation(v, truth[1].samples(), INTERIOR));
            let slow = interior_correlation(run.dec.remainder.samples(), truth[2].samples(), INTERIOR);
            checks.push(Check::new(format!("{tag} sin(4pi x) corr"), format!("{fast:.3}"), fast >= min_corr));
            checks.push(Check::new(format!("{tag} sin(pi x) corr"), format!("{slow:.3}"), slow >= min_corr));
        }
        checks
    }

    fn example_6(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        for (id, min_corr) in [(RunId::Ex6a, 0.95), (RunId::Ex6b, 0.90)] {
            let tag = id.example().expect("example").as_str();
            let run = match self.run(id) {
                Ok(r) => r,
                Err(e) => {
                    checks.push(Check::error(tag, e));
                    continue;
                }
            };
            let case = run.case.as_ref().expect("generated");
            let report = run.report();
            for name in ["g1", "g2"] {
                let k = case.truth_names.iter().position(|n| n == name).expect("named part");
                let c = report.as_ref().map_or(0.0, |r| r.matches[k].correlation);
                checks.push(Check::new(format!("{tag} {name} corr"), format!("{c:.3}"), c >= min_corr));
            }
            let eps = run.dec.convergence.iter().map(|c| c.final_eps_product()).fold(0.0, f64::max);
            let delta = run
                .dec
                .convergence
                .iter()
                .map(|c| c.final_delta_product())
                .fold(f64::INFINITY, f64::min);
            checks.push(Check::new(format!("{tag} max eps product"), format!("{eps:.1e}"), eps < 1e-2));
            checks.push(Check::new(format!("{tag} min delta product"), format!("{delta:.1e}"), delta > 1e-6));
        }
        checks
    }

    fn tests_1_2(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        let eno = self.settings.eno_threshold;
        let near_jump = |x: f64| (x - 3.0).abs() <= 0.2 || (x - 6.0).abs() <= 0.2;
        match generate_example(ExampleId::Test2, ExampleId::Test2.default_len(), self.settings.seed) {
            Ok(case) => {
                let s = &case.signal;
                match local_instantaneous_frequency(s, eno) {
                    Ok(fr) => {
                        let outside: Vec<usize> = (0..s.len()).filter(|&i| !near_jump(s.x(i))).collect();
                        let good = outside
                            .iter()
                            .filter(|&&i| ((fr.omega[i] - 2.0 * PI) / (2.0 * PI)).abs() <= 0.05)
                            .count();
                        let share = good as f64 / outside.len() as f64;
                        checks.push(Check::new("test2 local share", format!("{share:.4}"), share >= 0.95));
                    }
                    Err(e) => checks.push(Check::error("test2 local", e)),
                }
                match hilbert_instantaneous_frequency(s) {
                    Ok(fr) => {
                        let inside = (0..s.len()).filter(|&i| near_jump(s.x(i)));
                        let dev = max_rel_deviation(&fr, inside, |_| 2.0 * PI);
                        checks.push(Check::new("test2 hilbert max dev", format!("{dev:.3}"), dev >= 0.2));
                    }
                    Err(e) => checks.push(Check::error("test2 hilbert", e)),
                }
            }
            Err(e) => checks.push(Check::error("test2", e)),
        }
        match generate_example(ExampleId::Test1, ExampleId::Test1.default_len(), self.settings.seed)
            .and_then(|case| local_instantaneous_frequency(&case.signal, eno))
        {
            Ok(fr) => {
                let width = (0.05 * fr.len() as f64).round() as usize;
                let smooth = moving_median(&fr.omega, width);
                let drops = smooth.windows(2).filter(|w| w[1] < w[0]).count();
                checks.push(Check::new("test1 median decreases", drops, drops == 0));
            }
            Err(e) => checks.push(Check::error("test1", e)),
        }
        checks
    }

    /// Examples 1 and 2 use IF; Example 3 uses ALIF, the method that is
    /// expected to resolve it.
    fn sign_runs(&self) -> [RunId; 3] {
        [RunId::Ex1, RunId::Ex2, RunId::Ex3Alif]
    }

    fn stopping(&self) -> Vec<Check> {
        self.sign_runs()
            .iter()
            .map(|&id| match self.run(id) {
                Ok(run) => {
                    let d = &run.dec.diagnostics;
                    let worst = d.iter().map(|x| x.final_sd).fold(0.0, f64::max);
                    let reached = d.iter().filter(|x| x.final_sd < 1e-5 && x.iterations <= 200).count();
                    Check::new(
                        id.label(),
                        format!("{reached}/{} loops, max final SD {worst:.1e}", d.len()),
                        reached == d.len(),
                    )
                }
                Err(e) => Check::error(id.label(), e),
            })
            .collect()
    }

    fn imf_sign(&self) -> Vec<Check> {
        self.sign_runs()
            .iter()
            .map(|&id| match self.run(id) {
                Ok(run) => {
                    let bad = run.dec.imfs.iter().filter(|m| !has_sign_property(m)).count();
                    Check::new(
                        id.label(),
                        format!("{bad}/{} imfs violate", run.dec.imfs.len()),
                        bad == 0,
                    )
                }
                Err(e) => Check::error(id.label(), e),
            })
            .collect()
    }

    fn lod(&self) -> Vec<Check> {
        let run = match self.run(RunId::Lod) {
            Ok(r) => r,
            Err(e) => return vec![Check::error("lod", e)],
        };
        let count = run.component_count();
        let mut checks = vec![Check::new("components", count, (4..=6).contains(&count))];
        let periods: Result<Vec<f64>> = run
            .dec
            .imfs
            .iter()
            .map(|m| mean_period(m, self.settings.eno_threshold))
            .collect();
        match periods {
            Ok(p) => {
                let text = p.iter().map(|v| format!("{v:.1}")).collect::<Vec<_>>().join("/");
                let increasing = p.windows(2).all(|w| w[1] > w[0]);
                checks.push(Check::new("periods increasing", &text, increasing));
                let fortnight = p.iter().any(|v| (12.0..=16.0).contains(v));
                let month = p.iter().any(|v| (25.0..=35.0).contains(v));
                checks.push(Check::new("period in [12,16]", fortnight, fortnight));
                checks.push(Check::new("period in [25,35]", month, month));
            }
            Err(e) => checks.push(Check::error("periods", e)),
        }
        checks
    }

    /// Writes every run's decomposition, diagnostics and truth pairing, then
    /// `summary.csv` with one row per criterion.
    pub fn write_outputs(&self, outcomes: &[CriterionOutcome], dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for id in RunId::ALL {
            let Ok(run) = self.run(id) else { continue };
            let stem = id.label();
            io::write_decomposition_csv(&run.dec, dir.join(format!("{stem}_decomposition.csv")))?;
            io::write_diagnostics_csv(&run.dec, dir.join(format!("{stem}_diagnostics.csv")))?;
            if let (Some(case), Some(report)) = (&run.case, run.report()) {
                io::write_match_report_csv(&report, &case.truth_names, dir.join(format!("{stem}_match.csv")))?;
            }
        }
        let mut text = String::from("criterion,name,status,details\n");
        for o in outcomes {
            let details: Vec<String> = o.checks.iter().map(|c| format!("{}={}", c.label, c.value)).collect();
            text += &format!("{},{},{},\"{}\"\n", o.id, o.name, o.status(), details.join("; ").replace('"', "'"));
        }
        fs::write(dir.join("summary.csv"), text)?;
        Ok(())
    }
}

/// Largest `|omega - expected| / expected` over `indices`.
fn max_rel_deviation(fr: &FreqResult, indices: impl Iterator<Item = usize>, expected: impl Fn(f64) -> f64) -> f64 {
    indices
        .map(|i| {
            let e = expected(fr.x(i));
            ((fr.omega[i].abs() - e) / e).abs()
        })
        .fold(0.0, f64::max)
}

/// Median over a centered window of `width` samples, shrunk near the ends.
pub fn moving_median(v: &[f64], width: usize) -> Vec<f64> {
    let half = width / 2;
    (0..v.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(v.len());
            let mut w = v[lo..hi].to_vec();
            w.sort_by(f64::total_cmp);
            let m = w.len() / 2;
            if w.len() % 2 == 1 {
                w[m]
            } else {
                0.5 * (w[m - 1] + w[m])
            }
        })
        .collect()
}

/// Every local maximum is positive and every local minimum negative.
pub fn has_sign_property(s: &Signal) -> bool {
    find_extrema(s).entries.iter().all(|e| match e.kind {
        ExtremumKind::Max => e.value > 0.0,
        ExtremumKind::Min => e.value < 0.0,
    })
}

/// `2π / mean |ω|` over the interior window, in units of x.
fn mean_period(imf: &Signal, eno_threshold: f64) -> Result<f64> {
    let fr = local_instantaneous_frequency(imf, eno_threshold)?;
    let window = interior_range(fr.len(), INTERIOR);
    let omega = &fr.omega[window];
    let mean = omega.iter().map(|w| w.abs()).sum::<f64>() / omega.len() as f64;
    Ok(2.0 * PI / mean)
}
