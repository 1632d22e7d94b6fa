mod common;

use proptest::prelude::*;

use common::{small_constant, small_drude_lorentz};
use nanofiber::analysis::{
    collective_rates_from_integrals, communication_time, establishment_time, fit_decay_rate,
    gamma_integrals, EstablishmentRule, GammaSeries,
};
use nanofiber::bath::CutoffPolicy;
use nanofiber::constants::FS;
use nanofiber::pipeline::{establishment_rule, run_case, CaseSettings};

fn series(units: f64, drude_lorentz: bool) -> GammaSeries {
    let env = if drude_lorentz {
        small_drude_lorentz()
    } else {
        small_constant()
    };
    let d = env.separation(units);
    let k = env
        .kernels(d, env.cutoff(d, &CutoffPolicy::default()).unwrap())
        .unwrap();
    gamma_integrals(&k.f_mm, &k.f_mn, (150.0 * FS / k.f_mm.dt) as usize).unwrap()
}

fn exponential(rate: f64, amplitude: f64, h: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    (0..n)
        .map(|k| (k as f64 * h, amplitude * (-rate * k as f64 * h).exp()))
        .unzip()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fit_recovers_exponentials(rate in 1e9f64..5e12, amplitude in 1e-3f64..1.0, start in 0usize..500) {
        let h = 0.1 * FS;
        let (t, p) = exponential(rate, amplitude, h, 2000);
        let fit = fit_decay_rate(&t, &p, start as f64 * h).unwrap();
        prop_assert!(((fit.rate - rate) / rate).abs() < 1e-9);
        prop_assert!((fit.intercept - amplitude.ln()).abs() < 1e-9);
    }

    #[test]
    fn fit_ignores_population_scale(rate in 1e10f64..5e12, scale in 1e-6f64..1e3) {
        let h = 0.1 * FS;
        let (t, mut p) = exponential(rate, 1.0, h, 1000);
        for (k, v) in p.iter_mut().enumerate() {
            *v *= 1.0 + 1e-3 * (k as f64 * 0.37).sin();
        }
        let base = fit_decay_rate(&t, &p, 0.0).unwrap();
        let scaled: Vec<f64> = p.iter().map(|v| v * scale).collect();
        let fit = fit_decay_rate(&t, &scaled, 0.0).unwrap();
        prop_assert!(((fit.rate - base.rate) / base.rate).abs() < 1e-10);
    }

    #[test]
    fn communication_time_ignores_common_scale(
        r1 in 1e11f64..1e12,
        ratio in 1.2f64..2.0,
        lag in 1.0f64..20.0,
        scale in 1e-3f64..10.0,
    ) {
        let h = 0.1 * FS;
        let (t, single) = exponential(r1, 1.0, h, 3000);
        let r2 = ratio * r1;
        let offset = (r2 - r1) * lag * FS;
        let collective: Vec<f64> = single.iter().zip(&t).map(|(p, &tk)| p * (-(r2 - r1) * tk + offset).exp()).collect();
        let fit = |p: &[f64]| fit_decay_rate(&t, p, 50.0 * FS).unwrap();
        let base = communication_time(&fit(&single), &fit(&collective)).unwrap();
        prop_assert!((base.time / FS - lag).abs() < 1e-6);
        let s1: Vec<f64> = single.iter().map(|v| v * scale).collect();
        let s2: Vec<f64> = collective.iter().map(|v| v * scale).collect();
        let scaled = communication_time(&fit(&s1), &fit(&s2)).unwrap();
        prop_assert!(((scaled.time - base.time) / base.time).abs() < 1e-9);
    }

    #[test]
    fn establishment_ignores_common_rate_scale(units in prop::sample::select(vec![4.0, 6.0, 8.0]), scale in 1e-3f64..1e3, dl in any::<bool>()) {
        let s = series(units, dl);
        let rule = if dl { EstablishmentRule::ExtremaMidpoint { tolerance: 0.01 } } else { EstablishmentRule::Threshold { level: 0.99 } };
        let base = establishment_time(&s, rule);
        let scaled = establishment_time(&s.scaled(scale), rule);
        match (base, scaled) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.t_est, b.t_est),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn collective_rates_average_to_single_rate(units in 1.0f64..10.0, dl in any::<bool>()) {
        let s = series(units, dl);
        let (minus, plus) = collective_rates_from_integrals(&s);
        for k in 0..s.gamma.len() {
            prop_assert!((plus[k] + minus[k] - 2.0 * s.gamma[k]).abs() <= 1e-12 * s.gamma[k].abs().max(1.0));
            prop_assert!(minus[k] <= plus[k]);
        }
    }
}

#[test]
fn rates_are_ordered_at_multiples_of_half_guided_wavelength() {
    for env in [small_constant(), small_drude_lorentz()] {
        for units in [2.0, 4.0] {
            let settings =
                CaseSettings::new(250.0 * FS, 60.0 * FS, establishment_rule(&env.spec.model));
            let out = run_case(
                env,
                env.separation(units),
                &CutoffPolicy::default(),
                &settings,
            )
            .unwrap();
            let r = &out.report;
            assert!(0.0 <= r.gamma_minus, "{r:?}");
            assert!(r.gamma_minus < r.gamma_single);
            assert!(r.gamma_single < r.gamma_plus);
            assert!(
                r.gamma_plus <= 2.1 * r.gamma_single,
                "{}",
                r.gamma_plus / r.gamma_single
            );
        }
    }
}

#[test]
fn single_atom_rate_matches_markov_rate() {
    let env = small_constant();
    let rate = env.single_atom_rate(None, 250.0 * FS, 60.0 * FS).unwrap();
    let markov = env.markov_rate().unwrap();
    assert!(
        (rate / (2.0 * markov) - 1.0).abs() < 2e-2,
        "{}",
        rate / (2.0 * markov)
    );
}
