//! Synthetic test signals with known components, noise injection and
//! scoring of a decomposition against the known components.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::iterfilt::Decomposition;
use crate::signal::{norm_l2, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex3,
    Ex4a,
    Ex4b,
    Ex4c,
    Ex5,
    Ex6a,
    Ex6b,
    Ex6c,
    Test1,
    Test2,
}

impl ExampleId {
    pub const ALL: [ExampleId; 12] = [
        ExampleId::Ex1,
        ExampleId::Ex2,
        ExampleId::Ex3,
        ExampleId::Ex4a,
        ExampleId::Ex4b,
        ExampleId::Ex4c,
        ExampleId::Ex5,
        ExampleId::Ex6a,
        ExampleId::Ex6b,
        ExampleId::Ex6c,
        ExampleId::Test1,
        ExampleId::Test2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex3 => "ex3",
            ExampleId::Ex4a => "ex4a",
            ExampleId::Ex4b => "ex4b",
            ExampleId::Ex4c => "ex4c",
            ExampleId::Ex5 => "ex5",
            ExampleId::Ex6a => "ex6a",
            ExampleId::Ex6b => "ex6b",
            ExampleId::Ex6c => "ex6c",
            ExampleId::Test1 => "test1",
            ExampleId::Test2 => "test2",
        }
    }

    /// Sample count used by the benchmark suite.
    pub fn default_len(self) -> usize {
        match self {
            ExampleId::Ex1 | ExampleId::Ex2 | ExampleId::Ex3 | ExampleId::Test2 => 2000,
            ExampleId::Ex4a | ExampleId::Ex4b | ExampleId::Ex4c => 1000,
            ExampleId::Ex5 => 3000,
            ExampleId::Ex6a | ExampleId::Ex6b | ExampleId::Ex6c | ExampleId::Test1 => 4000,
        }
    }

    /// The closed interval the signal is sampled on.
    pub fn interval(self) -> (f64, f64) {
        match self {
            ExampleId::Ex1 => (0.0, 1.0),
            ExampleId::Ex2 => (-0.4, 0.4),
            ExampleId::Ex3 => (0.0, 2.0 * PI),
            ExampleId::Ex4a | ExampleId::Ex4b | ExampleId::Ex4c => (0.0, 5.0),
            ExampleId::Ex5 => (-1.0, 2.0),
            ExampleId::Ex6a | ExampleId::Ex6b | ExampleId::Ex6c => (0.0, 20.0 * PI),
            ExampleId::Test1 => (0.0, 40.0),
            ExampleId::Test2 => (0.0, 10.0),
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(
            self,
            ExampleId::Ex4b | ExampleId::Ex4c | ExampleId::Ex6b | ExampleId::Ex6c
        )
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// A generated signal and the components it was built from, fastest first.
/// Noise, when present, is the first component.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleCase {
    pub id: ExampleId,
    pub n: usize,
    pub signal: Signal,
    pub truth: Vec<Signal>,
    pub truth_names: Vec<String>,
    pub seed: u64,
}

fn sampled(n: usize, (a, b): (f64, f64), f: impl Fn(f64) -> f64) -> Vec<f64> {
    let dx = (b - a) / (n - 1) as f64;
    (0..n).map(|i| f(a + i as f64 * dx)).collect()
}

fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

pub fn generate_example(id: ExampleId, n: usize, seed: u64) -> Result<ExampleCase> {
    if n < 256 {
        return Err(Error::InvalidConfig(format!("examples need at least 256 samples, got {n}")));
    }
    let span = id.interval();
    let s = |f: &dyn Fn(f64) -> f64| sampled(n, span, f);
    let ex1_fm = |x: f64| {
        (2.0 * (x - 0.5).powi(2) + 0.2) * ((20.0 * PI + 0.2 * (40.0 * PI * x).cos()) * x).sin()
    };
    let ex3_phase = |x: f64| -(8.0 / PI) * x * x;
    let ex6_g1 = |x: f64| (20.0 * (x / 10.0).cos() - 4.0 * x).cos();
    let ex6_g2 = |x: f64| (20.0 * (x / 10.0).cos() - 7.0 * x).cos();

    let mut parts: Vec<(&str, Vec<f64>)> = match id {
        ExampleId::Ex1 => vec![
            ("fm", s(&ex1_fm)),
            ("trend", s(&|x| 4.0 * (x - 0.5).powi(2))),
        ],
        ExampleId::Ex2 => vec![
            ("chirp", s(&|x| 0.5 * (50.0 * PI * x.abs() - 40.0 * PI * x * x).cos())),
            ("tone", s(&|x| (4.0 * PI * x).sin())),
        ],
        ExampleId::Ex3 => vec![
            ("f1", s(&|x| (ex3_phase(x) - 20.0 * x.abs()).cos())),
            ("f2", s(&|x| (ex3_phase(x) - 4.0 * x.abs()).cos())),
            ("offset", vec![1.0; n]),
        ],
        ExampleId::Ex4a | ExampleId::Ex4b | ExampleId::Ex4c => {
            let mut v = vec![
                ("fast", s(&|x| (4.0 * PI * x).sin())),
                ("slow", s(&|x| (PI * x).sin())),
            ];
            let std = match id {
                ExampleId::Ex4b => Some(0.1),
                ExampleId::Ex4c => Some(1.0),
                _ => None,
            };
            if let Some(std) = std {
                let noise = white_noise(n, seed).into_iter().map(|z| std * z).collect();
                v.insert(0, ("noise", noise));
            }
            v
        }
        ExampleId::Ex5 => vec![
            ("f1", s(&|x| ((4.0 * PI * x).sin() + 1.5) * (50.0 * PI * x).cos())),
            (
                "f2",
                s(&|x| {
                    (5.0 * (2.0 * PI * (x + 1.0) / 6.0 + PI).sin() + 5.6)
                        * (2.0 * PI * (10.0 * x + 0.03 * (40.0 * PI * x).cos())).sin()
                }),
            ),
            ("f3", s(&|x| (2.0 * (1.4 * PI * x).cos() + 5.0) * (4.0 * PI * x).sin())),
        ],
        ExampleId::Ex6a | ExampleId::Ex6b | ExampleId::Ex6c => {
            let mut v = vec![
                ("g2", s(&ex6_g2)),
                ("g1", s(&ex6_g1)),
                ("offset", vec![1.0; n]),
            ];
            let target = match id {
                ExampleId::Ex6b => Some(0.0),
                ExampleId::Ex6c => Some(-10.0),
                _ => None,
            };
            if let Some(db) = target {
                let clean = sum_parts(v.iter().map(|(_, p)| p.as_slice()), n);
                let noise = scaled_noise(&clean, db, seed)?;
                v.insert(0, ("noise", noise));
            }
            v
        }
        ExampleId::Test1 => vec![(
            "signal",
            s(&|x| (1.0 + 0.2 * (0.06 * PI * x).cos()) * ((1.0 + 0.1 * x) * x).sin()),
        )],
        ExampleId::Test2 => vec![(
            "signal",
            s(&|x| {
                let amp = if (3.0..=6.0).contains(&x) { 0.1 } else { 1.0 };
                amp * (2.0 * PI * x).sin()
            }),
        )],
    };

    let dx = (span.1 - span.0) / (n - 1) as f64;
    let total = sum_parts(parts.iter().map(|(_, p)| p.as_slice()), n);
    let signal = Signal::new(total, dx, span.0)?;
    let truth_names = parts.iter().map(|(name, _)| name.to_string()).collect();
    let truth = parts
        .drain(..)
        .map(|(_, p)| signal.with_samples(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExampleCase {
        id,
        n,
        signal,
        truth,
        truth_names,
        seed,
    })
}

fn sum_parts<'a>(parts: impl Iterator<Item = &'a [f64]>, n: usize) -> Vec<f64> {
    let mut total = vec![0.0; n];
    for p in parts {
        for (acc, v) in total.iter_mut().zip(p) {
            *acc += v;
        }
    }
    total
}

/// `20 log10(‖signal‖ / ‖noise‖)`.
pub fn snr_db(signal: &Signal, noise: &Signal) -> Result<f64> {
    if signal.len() != noise.len() {
        return Err(Error::LengthMismatch(signal.len(), noise.len()));
    }
    let nn = noise.norm_l2();
    if nn == 0.0 {
        return Err(Error::ZeroNoise);
    }
    Ok(20.0 * (signal.norm_l2() / nn).log10())
}

fn scaled_noise(clean: &[f64], target_db: f64, seed: u64) -> Result<Vec<f64>> {
    let reference = norm_l2(clean);
    if reference == 0.0 {
        return Err(Error::InvalidSignal("cannot set an SNR for a zero signal".into()));
    }
    let raw = white_noise(clean.len(), seed);
    let scale = reference / (norm_l2(&raw) * 10f64.powf(target_db / 20.0));
    Ok(raw.into_iter().map(|v| v * scale).collect())
}

/// Adds seeded white noise scaled to the requested SNR; returns the noisy
/// signal and the noise.
pub fn add_noise_snr(s: &Signal, target_db: f64, seed: u64) -> Result<(Signal, Signal)> {
    let noise = scaled_noise(s.samples(), target_db, seed)?;
    let noisy = s
        .samples()
        .iter()
        .zip(&noise)
        .map(|(a, b)| a + b)
        .collect();
    Ok((s.with_samples(noisy)?, s.with_samples(noise)?))
}

/// A decomposition output a truth component can be paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Imf(usize),
    Remainder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMatch {
    pub truth: usize,
    /// `None` when every output was already taken; the scores then refer to
    /// the best output overall.
    pub component: Option<Component>,
    /// Cosine similarity over the interior window.
    pub correlation: f64,
    /// `‖component - truth‖ / ‖truth‖` over the interior window.
    pub rel_l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub matches: Vec<ComponentMatch>,
    pub interior_fraction: f64,
}

impl MatchReport {
    /// The truth index each IMF was paired with.
    pub fn pairing(&self, imf_count: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; imf_count];
        for m in &self.matches {
            if let Some(Component::Imf(i)) = m.component {
                out[i] = Some(m.truth);
            }
        }
        out
    }
}

/// The centered window holding `fraction` of `n` samples.
pub fn interior_range(n: usize, fraction: f64) -> std::ops::Range<usize> {
    let cut = ((1.0 - fraction) / 2.0 * n as f64).floor() as usize;
    if 2 * cut >= n {
        0..n
    } else {
        cut..n - cut
    }
}

/// Cosine similarity of two equally long series over their centered
/// `fraction` window.
pub fn interior_correlation(a: &[f64], b: &[f64], fraction: f64) -> f64 {
    let r = interior_range(a.len().min(b.len()), fraction);
    cosine(&a[r.clone()], &b[r])
}

/// `‖candidate - truth‖ / ‖truth‖` over the centered `fraction` window.
pub fn interior_rel_l2(candidate: &[f64], truth: &[f64], fraction: f64) -> f64 {
    let r = interior_range(candidate.len().min(truth.len()), fraction);
    rel_l2(&candidate[r.clone()], &truth[r])
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm_l2(a), norm_l2(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot / (na * nb)).clamp(-1.0, 1.0)
}

fn rel_l2(candidate: &[f64], truth: &[f64]) -> f64 {
    let diff: f64 = candidate
        .iter()
        .zip(truth)
        .map(|(c, t)| (c - t) * (c - t))
        .sum::<f64>()
        .sqrt();
    let reference = norm_l2(truth);
    if reference == 0.0 {
        diff
    } else {
        diff / reference
    }
}

/// Pairs truth components with IMFs (or the remainder) greedily by
/// decreasing absolute correlation over the interior window.
pub fn match_components(dec: &Decomposition, truth: &[Signal], interior_fraction: f64) -> Result<MatchReport> {
    if !(interior_fraction > 0.0 && interior_fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "interior fraction must lie in (0, 1], got {interior_fraction}"
        )));
    }
    let n = dec.input.len();
    if let Some(t) = truth.iter().find(|t| t.len() != n) {
        return Err(Error::LengthMismatch(n, t.len()));
    }
    let range = interior_range(n, interior_fraction);
    let candidates: Vec<(Component, &[f64])> = dec
        .imfs
        .iter()
        .enumerate()
        .map(|(i, s)| (Component::Imf(i), &s.samples()[range.clone()]))
        .chain(std::iter::once((
            Component::Remainder,
            &dec.remainder.samples()[range.clone()],
        )))
        .collect();
    let truths: Vec<&[f64]> = truth.iter().map(|t| &t.samples()[range.clone()]).collect();
    let corr: Vec<Vec<f64>> = truths
        .iter()
        .map(|t| candidates.iter().map(|(_, c)| cosine(c, t)).collect())
        .collect();

    let mut truth_done = vec![false; truths.len()];
    let mut cand_done = vec![false; candidates.len()];
    let mut matches: Vec<Option<ComponentMatch>> = vec![None; truths.len()];
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for (ti, row) in corr.iter().enumerate() {
            if truth_done[ti] {
                continue;
            }
            for (ci, c) in row.iter().enumerate() {
                if cand_done[ci] {
                    continue;
                }
                if best.is_none_or(|(_, _, b)| c.abs() > b) {
                    best = Some((ti, ci, c.abs()));
                }
            }
        }
        let Some((ti, ci, _)) = best else { break };
        truth_done[ti] = true;
        cand_done[ci] = true;
        matches[ti] = Some(ComponentMatch {
            truth: ti,
            component: Some(candidates[ci].0),
            correlation: corr[ti][ci],
            rel_l2: rel_l2(candidates[ci].1, truths[ti]),
        });
    }
    let matches = matches
        .into_iter()
        .enumerate()
        .map(|(ti, m)| {
            m.unwrap_or_else(|| {
                let ci = (0..candidates.len())
                    .max_by(|&a, &b| corr[ti][a].abs().total_cmp(&corr[ti][b].abs()))
                    .unwrap_or(0);
                ComponentMatch {
                    truth: ti,
                    component: None,
                    correlation: corr[ti][ci],
                    rel_l2: rel_l2(candidates[ci].1, truths[ti]),
                }
            })
        })
        .collect();
    Ok(MatchReport {
        matches,
        interior_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iterfilt::StopReason;

    fn fake_decomposition(input: &Signal, imfs: Vec<Signal>, remainder: Signal) -> Decomposition {
        Decomposition {
            input: input.clone(),
            imfs,
            remainder,
            diagnostics: Vec::new(),
            convergence: Vec::new(),
            stop: StopReason::Trend,
            source: "test".into(),
        }
    }

    #[test]
    fn ex3_and_ex4a_formulas() {
        let c = generate_example(ExampleId::Ex3, 2000, 0).unwrap();
        assert_eq!(c.truth.len(), 3);
        let x = c.signal.x(1234);
        let f1 = (-(8.0 / PI) * x * x - 20.0 * x).cos();
        let f2 = (-(8.0 / PI) * x * x - 4.0 * x).cos();
        assert!((c.signal.samples()[1234] - (f1 + f2 + 1.0)).abs() < 1e-12);
        assert!((c.signal.x(1999) - 2.0 * PI).abs() < 1e-12);

        let c = generate_example(ExampleId::Ex4a, 1000, 0).unwrap();
        let x = c.signal.x(321);
        assert!((c.signal.samples()[321] - ((PI * x).sin() + (4.0 * PI * x).sin())).abs() < 1e-12);
        assert_eq!(c.truth_names, vec!["fast", "slow"]);
    }

    #[test]
    fn truth_sums_to_signal() {
        for id in ExampleId::ALL {
            let c = generate_example(id, 512, 7).unwrap();
            let mut total = vec![0.0; 512];
            for t in &c.truth {
                for (a, v) in total.iter_mut().zip(t.samples()) {
                    *a += v;
                }
            }
            assert_eq!(total.as_slice(), c.signal.samples(), "{id}");
        }
    }

    #[test]
    fn stochastic_cases_are_seeded() {
        let a = generate_example(ExampleId::Ex6b, 1024, 3).unwrap();
        let b = generate_example(ExampleId::Ex6b, 1024, 3).unwrap();
        let c = generate_example(ExampleId::Ex6b, 1024, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.signal, c.signal);
        let clean = generate_example(ExampleId::Ex6a, 1024, 3).unwrap();
        let snr = snr_db(&clean.signal, &a.truth[0]).unwrap();
        assert!(snr.abs() < 1e-6);
    }

    #[test]
    fn bad_requests() {
        assert!(matches!("ex9".parse::<ExampleId>(), Err(Error::UnknownExample(_))));
        assert_eq!("test2".parse::<ExampleId>().unwrap(), ExampleId::Test2);
        assert!(generate_example(ExampleId::Ex1, 100, 0).is_err());
    }

    #[test]
    fn snr_examples() {
        let s = Signal::new(vec![1.0, -2.0, 0.5], 1.0, 0.0).unwrap();
        assert!(snr_db(&s, &s).unwrap().abs() < 1e-15);
        let tenth = s.with_samples(s.samples().iter().map(|v| v / 10.0).collect()).unwrap();
        assert!((snr_db(&s, &tenth).unwrap() - 20.0).abs() < 1e-12);
        let z = s.with_samples(vec![0.0; 3]).unwrap();
        assert!(matches!(snr_db(&s, &z), Err(Error::ZeroNoise)));
    }

    #[test]
    fn noise_hits_target_snr() {
        let s = Signal::from_fn(500, 0.0, 1.0, |x| (9.0 * x).sin() + 0.3).unwrap();
        for db in [0.0, -10.0, 13.5] {
            let (noisy, noise) = add_noise_snr(&s, db, 11).unwrap();
            assert!((snr_db(&s, &noise).unwrap() - db).abs() < 1e-6);
            assert!((noisy.samples()[10] - s.samples()[10] - noise.samples()[10]).abs() < 1e-15);
        }
        let (_, n) = add_noise_snr(&s, -10.0, 11).unwrap();
        assert!((n.norm_l2() / s.norm_l2() - 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(add_noise_snr(&s, 0.0, 5).unwrap(), add_noise_snr(&s, 0.0, 5).unwrap());
    }

    #[test]
    fn matching_exact_truth() {
        let c = generate_example(ExampleId::Ex3, 1000, 0).unwrap();
        let dec = fake_decomposition(&c.signal, c.truth[..2].to_vec(), c.truth[2].clone());
        let r = match_components(&dec, &c.truth, 0.8).unwrap();
        for m in &r.matches {
            assert!((m.correlation - 1.0).abs() < 1e-12);
            assert!(m.rel_l2 < 1e-12);
        }
        assert_eq!(r.pairing(2), vec![Some(0), Some(1)]);

        let swapped = fake_decomposition(
            &c.signal,
            vec![c.truth[1].clone(), c.truth[0].clone()],
            c.truth[2].clone(),
        );
        let r2 = match_components(&swapped, &c.truth, 0.8).unwrap();
        assert_eq!(r2.matches[0].component, Some(Component::Imf(1)));
        assert_eq!(r2.matches[0].correlation, r.matches[0].correlation);
    }

    #[test]
    fn missing_component_gets_best_available() {
        let c = generate_example(ExampleId::Ex3, 1000, 0).unwrap();
        let dec = fake_decomposition(&c.signal, vec![], c.truth[2].clone());
        let r = match_components(&dec, &c.truth, 0.8).unwrap();
        let used: Vec<_> = r.matches.iter().filter_map(|m| m.component).collect();
        assert_eq!(used, vec![Component::Remainder]);
        assert_eq!(r.matches[2].component, Some(Component::Remainder));
        assert!(r.matches[0].component.is_none());
        assert!(match_components(&dec, &c.truth, 0.0).is_err());
    }
}
