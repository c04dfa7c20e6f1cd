mod common;

use common::H;
use unravel::engine::{run_trajectory, IntegratorConfig, Sampling};
use unravel::ensemble::{observable_excited, run_ensemble, sample_mean, trajectory_rng, EnsembleConfig};
use unravel::lindblad::steady_state_excited;
use unravel::{CMat2, CVec2, ComponentState, ModelParams, OperatorSet, TwoBandModel, Unravelling};

fn baseline() -> (TwoBandModel, ComponentState) {
    let model = TwoBandModel::new(ModelParams::with_rates(1.0, 0.5, 0.3, 2.0)).unwrap();
    (model, ComponentState::pair(CVec2::real(H, 0.0), CVec2::real(0.0, H)))
}

#[test]
fn single_trajectory_without_dynamics_is_flat() {
    let model = Unravelling::new(OperatorSet::hamiltonian_only([CMat2::zero(); 2])).unwrap();
    let initial = ComponentState::pair(CVec2::real(0.6, 0.0), CVec2::real(0.0, 0.8));
    let cfg = EnsembleConfig::new(1, 0, IntegratorConfig::new(0.01, 1.0));
    let stats = run_ensemble(&model, &initial, &cfg, &observable_excited).unwrap();
    assert_eq!(stats.times.len(), 11);
    assert!(stats.mean.iter().all(|&m| m == observable_excited(&initial)));
    assert_eq!((stats.n_samples, stats.n_discarded), (1, 0));
}

#[test]
fn streaming_mean_equals_batch_sample_mean() {
    let (model, initial) = baseline();
    let cfg = EnsembleConfig::new(700, 31, IntegratorConfig::new(1e-3, 1.0));
    let stats = run_ensemble(&model, &initial, &cfg, &observable_excited).unwrap();
    assert_eq!(stats.n_discarded, 0);

    let sampling = Sampling {
        stride: cfg.output_stride,
        observable: &observable_excited,
        snapshot_steps: &[],
    };
    let records: Vec<_> = (0..cfg.trajectories as u64)
        .map(|r| run_trajectory(&model, &initial, &cfg.integrator, &sampling, &mut trajectory_rng(31, r)).unwrap())
        .collect();
    for k in [0, 17, stats.times.len() - 1] {
        let values: Vec<f64> = records.iter().map(|rec| rec.observables[k]).collect();
        let (m, se) = sample_mean(&values).unwrap();
        assert_eq!(m, stats.mean[k]);
        assert_eq!(se, stats.stderr[k]);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let (model, initial) = baseline();
    let mut cfg = EnsembleConfig::new(600, 5, IntegratorConfig::new(1e-3, 2.0));
    cfg.snapshot_times = vec![0.5, 2.0];
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_ensemble(&model, &initial, &cfg, &observable_excited).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run_ensemble(&model, &initial, &cfg, &observable_excited).unwrap());
    for snap in &one.snapshots {
        assert!((snap.density.total_trace().re - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn baseline_relaxes_to_steady_state() {
    let (model, initial) = baseline();
    let cfg = EnsembleConfig::new(10_000, 2026, IntegratorConfig::new(1e-3, 10.0));
    let stats = run_ensemble(&model, &initial, &cfg, &observable_excited).unwrap();
    let want = steady_state_excited(model.params()).unwrap();
    let (m, se) = (*stats.mean.last().unwrap(), *stats.stderr.last().unwrap());
    assert!((m - want).abs() <= 3.0 * se, "{m} ± {se} vs {want}");
    assert!(stats.discarded_fraction() < 1e-3);
}
