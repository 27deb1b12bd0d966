use std::f64::consts::PI;

use proptest::prelude::*;

use alif::alif::{adaptive_moving_average, alif_decompose, AlifConfig, MaskField};
use alif::fpfilter::{
    rescale_filter, self_convolve, spectrum_report, DiscreteFilter, FilterProfile, FilterSpec,
};
use alif::instfreq::{local_instantaneous_frequency, normalize_imf};
use alif::io::{read_columns_csv, write_decomposition_csv};
use alif::iterfilt::{if_decompose, if_inner_loop, spectral_limit_oracle, IfConfig};
use alif::signal::{find_extrema, moving_average, BoundaryMode, ExtremumKind, Signal};
use alif::signals::match_components;

fn boundary() -> impl Strategy<Value = BoundaryMode> {
    prop_oneof![
        Just(BoundaryMode::Reflect),
        Just(BoundaryMode::Periodic),
        Just(BoundaryMode::Constant),
        Just(BoundaryMode::Antisymmetric),
    ]
}

fn samples(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, len)
}

/// Symmetric unit-mass filter with `2 h + 1` taps.
fn symmetric_filter(max_half: usize) -> impl Strategy<Value = DiscreteFilter> {
    prop::collection::vec(0.01..1.0f64, 1..=max_half + 1).prop_map(|half| {
        let mut w: Vec<f64> = half.iter().rev().chain(&half[1..]).copied().collect();
        let mass: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= mass);
        let h = (w.len() - 1) / 2;
        DiscreteFilter::new(w, h as f64).unwrap()
    })
}

/// A few random tones on `[0, 1)`, enough extrema for a decomposition.
fn tones(n: usize) -> impl Strategy<Value = Signal> {
    prop::collection::vec((1.0..40.0f64, 0.2..2.0f64, 0.0..6.3f64), 1..4).prop_map(move |parts| {
        Signal::from_fn(n, 0.0, 1.0, |x| {
            parts.iter().map(|(f, a, p)| a * (2.0 * PI * f * x + p).sin()).sum::<f64>() + 0.3 * x
        })
        .unwrap()
    })
}

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let r: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if r == 0.0 {
        d
    } else {
        d / r
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moving_average_is_linear(
        f in samples(40..120),
        g_seed in samples(120..121),
        a in -5.0..5.0f64,
        b in -5.0..5.0f64,
        w in symmetric_filter(12),
        mode in boundary(),
    ) {
        let n = f.len();
        let g = &g_seed[..n];
        let fs = Signal::new(f.clone(), 1.0, 0.0).unwrap();
        let gs = Signal::new(g.to_vec(), 1.0, 0.0).unwrap();
        let mix = fs.with_samples(f.iter().zip(g).map(|(x, y)| a * x + b * y).collect()).unwrap();
        let lhs = moving_average(&mix, &w, mode).unwrap();
        let lf = moving_average(&fs, &w, mode).unwrap();
        let lg = moving_average(&gs, &w, mode).unwrap();
        let scale = 1.0 + a.abs() * norm(&f) + b.abs() * norm(g);
        for i in 0..n {
            let rhs = a * lf.samples()[i] + b * lg.samples()[i];
            prop_assert!((lhs.samples()[i] - rhs).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn moving_average_keeps_constants(c in -1e3..1e3f64, n in 30usize..100, w in symmetric_filter(14), mode in boundary()) {
        let s = Signal::new(vec![c; n], 1.0, 0.0).unwrap();
        let out = moving_average(&s, &w, mode).unwrap();
        for v in out.samples() {
            prop_assert!((v - c).abs() <= 1e-13 * c.abs().max(1.0));
        }
    }

    #[test]
    fn negation_swaps_extremum_kinds(v in samples(3..200)) {
        let s = Signal::new(v.clone(), 1.0, 0.0).unwrap();
        let neg = s.with_samples(v.iter().map(|x| -x).collect()).unwrap();
        let (e, m) = (find_extrema(&s), find_extrema(&neg));
        prop_assert_eq!(e.indices(), m.indices());
        for (p, q) in e.entries.iter().zip(&m.entries) {
            prop_assert_ne!(p.kind, q.kind);
            prop_assert_eq!(p.value, -q.value);
        }
        for pair in e.entries.windows(2) {
            prop_assert!(pair[0].kind != pair[1].kind);
        }
    }

    #[test]
    fn periodic_average_is_a_fourier_multiplier(v in samples(16..128), w in symmetric_filter(6)) {
        let s = Signal::new(v, 1.0, 0.0).unwrap();
        let ma = moving_average(&s, &w, BoundaryMode::Periodic).unwrap();
        let one_step = spectral_limit_oracle(&s, &w, Some(1), 0.0).unwrap();
        let via_dft: Vec<f64> = s.samples().iter().zip(one_step.samples()).map(|(f, r)| f - r).collect();
        prop_assert!(rel_l2(ma.samples(), &via_dft) < 1e-10 || norm(&via_dft) < 1e-12);
    }

    #[test]
    fn self_convolved_symbol_is_nonnegative(w in symmetric_filter(20), grid_pow in 7u32..11) {
        let sq = self_convolve(&w);
        let mass: f64 = sq.weights().iter().sum();
        prop_assert!((mass - 1.0).abs() < 1e-12);
        let report = spectrum_report(&sq, 1 << grid_pow, 1e-12).unwrap();
        prop_assert!(report.min_symbol >= -1e-12);
        prop_assert!(report.symbol.iter().all(|s| *s <= 1.0 + 1e-12));
    }

    #[test]
    fn rescaling_commutes_on_nested_partitions(
        cells in prop::collection::vec(0.0..1.0f64, 1..40),
        m in 1usize..12,
        k in 1usize..5,
    ) {
        let mut w: Vec<f64> = cells.iter().rev().chain(&cells[1..]).copied().collect();
        w[cells.len() - 1] += 0.1;
        let mass: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= mass);
        let p = FilterProfile::new(-1.0, 1.0, w).unwrap();
        let n = ((2 * m + 1) * (2 * k + 1) - 1) / 2;
        let fine = rescale_filter(&p, n, n as f64).unwrap();
        let as_profile = FilterProfile::new(-1.0, 1.0, fine.weights().to_vec()).unwrap();
        let two_step = rescale_filter(&as_profile, m, m as f64).unwrap();
        let direct = rescale_filter(&p, m, m as f64).unwrap();
        for (x, y) in two_step.weights().iter().zip(direct.weights()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sifting_matches_fourier_product(v in samples(32..256), steps in 1usize..50, half in 1usize..6) {
        let source = FilterSpec::IF_DEFAULT.source().unwrap();
        let w = source.realize(half as f64).unwrap();
        prop_assume!(w.half_width() < v.len());
        let s = Signal::new(v, 1.0, 0.0).unwrap();
        let mut cfg = IfConfig::new(source);
        cfg.boundary = BoundaryMode::Periodic;
        cfg.sd_threshold = f64::MIN_POSITIVE;
        cfg.max_inner = steps;
        let (imf, diag) = if_inner_loop(&s, &w, &cfg).unwrap();
        let oracle = spectral_limit_oracle(&s, &w, Some(diag.iterations as u32), 0.0).unwrap();
        prop_assert!(rel_l2(imf.samples(), oracle.samples()) < 1e-10 || norm(oracle.samples()) < 1e-9 * norm(s.samples()));
    }

    #[test]
    fn sifting_never_grows_the_signal(v in samples(32..256), half in 1usize..8) {
        let w = FilterSpec::IF_DEFAULT.source().unwrap().realize(half as f64).unwrap();
        prop_assume!(w.half_width() < v.len());
        let report = spectrum_report(&w, v.len().max(w.weights().len()), 1e-12).unwrap();
        prop_assert!(report.condition_met);
        let mut f = Signal::new(v, 1.0, 0.0).unwrap();
        let mut prev = f.norm_l2();
        for _ in 0..30 {
            let ma = moving_average(&f, &w, BoundaryMode::Periodic).unwrap();
            let next: Vec<f64> = f.samples().iter().zip(ma.samples()).map(|(a, b)| a - b).collect();
            f = f.with_samples(next).unwrap();
            let now = f.norm_l2();
            prop_assert!(now <= prev * (1.0 + 1e-12) + 1e-300);
            prev = now;
        }
    }

    #[test]
    fn adaptive_average_keeps_affine_interior(
        slope in -3.0..3.0f64,
        offset in -5.0..5.0f64,
        lengths in prop::collection::vec(2.0..12.0f64, 200..201),
        mode in boundary(),
    ) {
        let n = lengths.len();
        let s = Signal::new((0..n).map(|i| offset + slope * i as f64).collect(), 1.0, 0.0).unwrap();
        let field = MaskField::new(lengths, 2.0).unwrap();
        let source = FilterSpec::ALIF_DEFAULT.source().unwrap();
        let out = adaptive_moving_average(&s, &source, &field, mode).unwrap();
        let reach = source.realize(12.0).unwrap().half_width();
        for i in reach..n - reach {
            prop_assert!((out.samples()[i] - s.samples()[i]).abs() < 1e-10 * (1.0 + s.samples()[i].abs()));
        }
    }

    #[test]
    fn constant_field_reduces_to_uniform_average(v in samples(80..200), tenths in 20i64..150, mode in boundary()) {
        // the adaptive bank realizes lengths on a 0.1-sample grid
        let l = tenths as f64 / 10.0;
        let s = Signal::new(v, 1.0, 0.0).unwrap();
        let source = FilterSpec::ALIF_DEFAULT.source().unwrap();
        let field = MaskField::constant(s.len(), l, 2.0).unwrap();
        let a = adaptive_moving_average(&s, &source, &field, mode).unwrap();
        let b = moving_average(&s, &source.realize(l).unwrap(), mode).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normalized_pair_is_bounded(s in tones(512), scale in 0.01..100.0f64) {
        let scaled = s.with_samples(s.samples().iter().map(|x| x * scale).collect()).unwrap();
        if let Ok((f1, f2, _, _)) = normalize_imf(&scaled, 2.0) {
            prop_assert!(f1.samples().iter().all(|x| x.abs() <= 1.0));
            prop_assert!(f2.samples().iter().all(|x| x.abs() <= 1.0));
        }
    }

    #[test]
    fn local_frequency_ignores_amplitude_scale(freq in 3.0..30.0f64, phase in 0.0..6.3f64, scale in 0.01..100.0f64) {
        let s = Signal::from_fn(800, 0.0, 1.0, |x| (2.0 * PI * freq * x + phase).sin()).unwrap();
        let scaled = s.with_samples(s.samples().iter().map(|x| x * scale).collect()).unwrap();
        let a = local_instantaneous_frequency(&s, 2.0).unwrap();
        let b = local_instantaneous_frequency(&scaled, 2.0).unwrap();
        let peak = a.omega.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        for (x, y) in a.omega.iter().zip(&b.omega) {
            prop_assert!((x - y).abs() <= 1e-8 * peak);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn fp_profiles_keep_unit_mass_and_concentrate_with_drift(
        alpha in 0.002..0.02f64,
        bump in 1.5..3.0f64,
        beta in 0.06..0.12f64,
    ) {
        let spec = |a: f64| FilterSpec { half_resolution: 150, ..FilterSpec::fig4(a, beta) };
        let lo = spec(alpha).profile().unwrap();
        let hi = spec(alpha * bump).profile().unwrap();
        for p in [&lo, &hi] {
            let mass: f64 = p.weights().iter().sum();
            prop_assert!((mass - 1.0).abs() < 1e-9);
        }
        prop_assert!(hi.central_mass(0.2) > lo.central_mass(0.2));
        for half in [3.0, 10.0, 25.5] {
            let w = spec(alpha).source().unwrap().realize(half).unwrap();
            prop_assert!((w.weights().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn decompositions_are_deterministic_and_exact(s in tones(400)) {
        let if_cfg = IfConfig::default();
        let a = if_decompose(&s, &if_cfg).unwrap();
        let b = if_decompose(&s, &if_cfg).unwrap();
        prop_assert_eq!(&a.imfs, &b.imfs);
        prop_assert_eq!(&a.remainder, &b.remainder);
        prop_assert!(a.reconstruction_error() < 1e-12);

        let alif_cfg = AlifConfig::default();
        if let Ok(c) = alif_decompose(&s, &alif_cfg) {
            let d = alif_decompose(&s, &alif_cfg).unwrap();
            prop_assert_eq!(&c.imfs, &d.imfs);
            prop_assert!(c.reconstruction_error() < 1e-12);
            for conv in &c.convergence {
                let mut ep = 1.0;
                let mut dp = 1.0;
                for i in 0..conv.eps.len() {
                    ep *= conv.eps[i];
                    dp *= conv.delta[i];
                    prop_assert!(conv.eps[i] >= 0.0 && conv.delta[i] >= 0.0);
                    prop_assert_eq!(conv.eps_product[i], ep);
                    prop_assert_eq!(conv.delta_product[i], dp);
                }
            }
        }
    }

    #[test]
    fn matching_ignores_imf_order(s in tones(400), rot in 0usize..5) {
        let dec = if_decompose(&s, &IfConfig::default()).unwrap();
        prop_assume!(dec.imfs.len() >= 2);
        let truth = [dec.imfs[0].clone(), dec.remainder.clone(), s.clone()];
        let mut shuffled = dec.clone();
        let k = rot % dec.imfs.len();
        shuffled.imfs.rotate_left(k);
        shuffled.diagnostics.rotate_left(k);
        let a = match_components(&dec, &truth, 0.8).unwrap();
        let b = match_components(&shuffled, &truth, 0.8).unwrap();
        for (x, y) in a.matches.iter().zip(&b.matches) {
            prop_assert_eq!(x.correlation, y.correlation);
            prop_assert_eq!(x.rel_l2, y.rel_l2);
        }
    }

    #[test]
    fn decomposition_csv_round_trips(s in tones(300), x0 in -100.0..100.0f64, dx in 1e-3..10.0f64) {
        let s = Signal::new(s.samples().iter().map(|v| v * 1e-7 + v.powi(3)).collect(), dx, x0).unwrap();
        let dec = if_decompose(&s, &IfConfig::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dec.csv");
        write_decomposition_csv(&dec, &path).unwrap();
        let (_, cols) = read_columns_csv(&path).unwrap();
        prop_assert_eq!(&cols[0], &s.xs());
        prop_assert_eq!(cols[1].as_slice(), s.samples());
        for (k, imf) in dec.imfs.iter().enumerate() {
            prop_assert_eq!(cols[2 + k].as_slice(), imf.samples());
        }
        prop_assert_eq!(cols[2 + dec.imfs.len()].as_slice(), dec.remainder.samples());
    }
}

#[test]
fn extremum_kinds_are_labelled() {
    let s = Signal::from_fn(101, 0.0, 1.0, |x| (2.0 * PI * x).sin()).unwrap();
    let kinds: Vec<ExtremumKind> = find_extrema(&s).entries.iter().map(|e| e.kind).collect();
    assert_eq!(kinds, [ExtremumKind::Max, ExtremumKind::Min]);
}
