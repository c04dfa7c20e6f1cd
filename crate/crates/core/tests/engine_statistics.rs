mod common;

use common::{ConstantRate, Ou, H};
use unravel::engine::{run_trajectory, IntegratorConfig, Sampling, TerminationStatus};
use unravel::ensemble::{observable_excited, run_ensemble, trajectory_rng, EnsembleConfig, Moments};
use unravel::{CVec2, ComponentState, ModelParams, TwoBandModel};

fn silent(_: &f64) -> f64 {
    0.0
}

#[test]
fn constant_intensity_counts_are_poisson() {
    let model = ConstantRate { rate: 3.0 };
    let cfg = IntegratorConfig::new(1e-3, 10.0);
    let sampling = Sampling {
        stride: cfg.n_steps(),
        observable: &silent,
        snapshot_steps: &[],
    };
    let counts: Moments = (0..10_000u64)
        .map(|r| {
            let rec = run_trajectory(&model, &1.0, &cfg, &sampling, &mut trajectory_rng(3, r)).unwrap();
            rec.jumps.len() as f64
        })
        .collect();
    // 30 expected; the 3σ band is 3·√(30/10⁴) ≈ 0.164.
    assert!((counts.mean() - 30.0).abs() <= 3.0 * (30.0f64 / 1e4).sqrt(), "mean count {}", counts.mean());
    assert!((counts.variance().unwrap() - 30.0).abs() < 3.0, "variance {}", counts.variance().unwrap());
}

#[test]
fn ou_mean_matches_exponential_decay() {
    let model = Ou { sigma: 0.1 };
    let cfg = EnsembleConfig::new(10_000, 4, IntegratorConfig::new(1e-3, 1.0).without_renormalization());
    let stats = run_ensemble(&model, &1.0, &cfg, &|s: &f64| *s).unwrap();
    let (m, se) = (*stats.mean.last().unwrap(), *stats.stderr.last().unwrap());
    assert!((m - (-1f64).exp()).abs() <= 3.0 * se, "{m} ± {se}");
}

#[test]
fn renormalized_two_band_states_stay_normalized() {
    let model = TwoBandModel::new(ModelParams::with_rates(1.0, 2.5, 1.5, 1.0)).unwrap();
    let initial = ComponentState::pair(CVec2::real(H, 0.0), CVec2::real(0.0, H));
    let norm = |s: &ComponentState| s.total_norm2();
    for r in 0..20 {
        let rec = run_trajectory(
            &model,
            &initial,
            &IntegratorConfig::new(5e-3, 10.0),
            &Sampling::every_step(&norm),
            &mut trajectory_rng(9, r),
        )
        .unwrap();
        assert_eq!(rec.status, TerminationStatus::Completed);
        assert!(rec.observables.iter().all(|n| (n - 1.0).abs() <= 1e-12));
        for j in &rec.jumps {
            assert!((j.state.total_norm2() - 1.0).abs() <= 1e-10);
            assert_eq!(j.state.psi.iter().filter(|v| v.norm_sqr() == 0.0).count(), 1);
        }
    }
}

#[test]
fn per_step_norm_drift_is_first_order() {
    let model = TwoBandModel::new(ModelParams::with_rates(1.0, 0.5, 0.3, 2.0)).unwrap();
    let initial = ComponentState::pair(CVec2::real(H, 0.0), CVec2::real(0.0, H));
    let drift = |dt: f64| {
        let cfg = EnsembleConfig::new(500, 12, IntegratorConfig::new(dt, 2.0));
        run_ensemble(&model, &initial, &cfg, &observable_excited).unwrap().norm_drift.mean_abs()
    };
    let ratio = drift(2e-3) / drift(1e-3);
    assert!((1.7..=2.3).contains(&ratio), "drift ratio {ratio}");
}

#[test]
fn discarded_trajectories_are_counted() {
    let model = TwoBandModel::new(ModelParams::with_rates(1.0, 0.5, 0.3, 2.0)).unwrap();
    let initial = ComponentState::pair(CVec2::real(H, 0.0), CVec2::real(0.0, H));
    let mut integrator = IntegratorConfig::new(1e-2, 1.0);
    integrator.norm_guard = Some(unravel::engine::NormGuard {
        lower: 0.9999,
        upper: 1.0001,
    });
    let cfg = EnsembleConfig::new(40, 1, integrator);
    let stats = unravel::ensemble::run_ensemble_unchecked(&model, &initial, &cfg, &observable_excited).unwrap();
    assert!(stats.n_discarded > 0);
    assert_eq!(stats.n_samples + stats.n_discarded, 40);
    assert!(matches!(
        run_ensemble(&model, &initial, &cfg, &observable_excited),
        Err(unravel::Error::ExcessDiscarded { .. })
    ));
}
