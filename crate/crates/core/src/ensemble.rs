//! Seeded Monte-Carlo ensembles.
//!
//! Trajectory `r` draws from its own ChaCha8 stream `(master_seed, r)`, so a
//! trajectory does not depend on which worker runs it. Trajectories are
//! simulated in parallel batches and folded into the accumulators strictly
//! in index order, which makes every statistic bit-identical for any thread
//! count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::{run_trajectory, IntegratorConfig, JumpDiffusion, NormDrift, Sampling, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::linalg::{ComponentState, DensityVector, StateVector};

/// Output grid stride used when none is given.
pub const DEFAULT_STRIDE: usize = 10;

/// Largest tolerated fraction of trajectories rejected by the norm guard.
pub const DISCARD_LIMIT: f64 = 0.1;

const BATCH: usize = 256;

/// RNG stream of trajectory `index`.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Σ_j ⟨ψ_j|P+ψ_j⟩
pub fn observable_excited<const N: usize>(s: &ComponentState<N, 2>) -> f64 {
    s.psi.iter().map(|v| v.0[0].norm_sqr()).sum()
}

/// Running mean and sum of squared deviations (Welford).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: self.n as usize,
            });
        }
        Ok(self.m2 / (self.n - 1) as f64)
    }

    /// √(s²/n)
    pub fn stderr(&self) -> Result<f64> {
        Ok((self.variance()? / self.n as f64).sqrt())
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Mean and standard error of `values`, accumulated in order.
pub fn sample_mean(values: &[f64]) -> Result<(f64, f64)> {
    let m: Moments = values.iter().copied().collect();
    Ok((m.mean(), m.stderr()?))
}

/// Per-trajectory outer products of the components.
pub trait DensitySource {
    type Density: StateVector + Default;
    fn density(&self) -> Self::Density;
}

impl<const N: usize, const D: usize> DensitySource for ComponentState<N, D> {
    type Density = DensityVector<N, D>;
    fn density(&self) -> DensityVector<N, D> {
        ComponentState::density(self)
    }
}

impl DensitySource for f64 {
    type Density = f64;
    fn density(&self) -> f64 {
        self * self
    }
}

/// η_i = (1/R) Σ_r |ψ_i^r⟩⟨ψ_i^r|
pub fn aposteriori_density<S: DensitySource>(states: &[S]) -> Result<S::Density> {
    if states.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let mut acc = S::Density::default();
    for s in states {
        acc.axpy(1.0, &s.density());
    }
    acc.scale_mut(1.0 / states.len() as f64);
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct EnsembleConfig {
    pub trajectories: usize,
    pub master_seed: u64,
    pub integrator: IntegratorConfig,
    /// Record the observable every `output_stride` steps.
    pub output_stride: usize,
    /// Times at which the averaged density is reconstructed.
    pub snapshot_times: Vec<f64>,
}

impl EnsembleConfig {
    pub fn new(trajectories: usize, master_seed: u64, integrator: IntegratorConfig) -> Self {
        Self {
            trajectories,
            master_seed,
            integrator,
            output_stride: DEFAULT_STRIDE,
            snapshot_times: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.integrator.validate()?;
        if self.trajectories == 0 {
            return Err(Error::InvalidParameter {
                name: "trajectories",
                reason: "must be at least 1".into(),
            });
        }
        let n = self.integrator.n_steps();
        if self.output_stride == 0 || n % self.output_stride != 0 {
            return Err(Error::InvalidParameter {
                name: "output_stride",
                reason: format!("must divide the number of steps {n} (got {})", self.output_stride),
            });
        }
        self.snapshot_steps().map(|_| ())
    }

    /// Grid indices of `snapshot_times`, sorted.
    pub fn snapshot_steps(&self) -> Result<Vec<usize>> {
        let dt = self.integrator.dt;
        let n = self.integrator.n_steps();
        let mut steps = Vec::with_capacity(self.snapshot_times.len());
        for &t in &self.snapshot_times {
            let k = (t / dt).round();
            if !(k >= 0.0 && k as usize <= n && (k * dt - t).abs() <= 1e-9 * t.max(1.0)) {
                return Err(Error::InvalidParameter {
                    name: "snapshot_times",
                    reason: format!("must lie on the time grid within [0, t_final] (got {t})"),
                });
            }
            steps.push(k as usize);
        }
        steps.sort_unstable();
        Ok(steps)
    }
}

/// Averaged density at one requested time.
#[derive(Clone, Debug, PartialEq)]
pub struct DensitySnapshot<T> {
    pub time: f64,
    pub density: T,
}

/// Ensemble statistics on the output grid. Discarded trajectories are left
/// out of every average.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleStats<T> {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    /// Zero when fewer than two trajectories completed.
    pub stderr: Vec<f64>,
    pub n_samples: usize,
    pub n_discarded: usize,
    pub snapshots: Vec<DensitySnapshot<T>>,
    /// Pre-renormalization norm drift pooled over completed trajectories.
    pub norm_drift: NormDrift,
}

impl<T> EnsembleStats<T> {
    pub fn discarded_fraction(&self) -> f64 {
        self.n_discarded as f64 / (self.n_samples + self.n_discarded) as f64
    }

    /// Index of the grid point closest to `t`.
    pub fn index_of(&self, t: f64) -> usize {
        let mut best = 0;
        for (i, &s) in self.times.iter().enumerate() {
            if (s - t).abs() < (self.times[best] - t).abs() {
                best = i;
            }
        }
        best
    }
}

/// Runs `cfg.trajectories` trajectories and reduces them.
///
/// Fails with [`Error::ExcessDiscarded`] when more than [`DISCARD_LIMIT`] of
/// the trajectories were rejected by the norm guard, and with the first
/// engine error (in trajectory order) otherwise.
pub fn run_ensemble<M>(
    model: &M,
    initial: &M::State,
    cfg: &EnsembleConfig,
    observable: &(dyn Fn(&M::State) -> f64 + Sync),
) -> Result<EnsembleStats<<M::State as DensitySource>::Density>>
where
    M: JumpDiffusion,
    M::State: DensitySource,
{
    let stats = run_ensemble_unchecked(model, initial, cfg, observable)?;
    if stats.discarded_fraction() > DISCARD_LIMIT {
        return Err(Error::ExcessDiscarded {
            discarded: stats.n_discarded,
            total: cfg.trajectories,
            limit: DISCARD_LIMIT,
        });
    }
    Ok(stats)
}

/// [`run_ensemble`] without the discarded-fraction check.
pub fn run_ensemble_unchecked<M>(
    model: &M,
    initial: &M::State,
    cfg: &EnsembleConfig,
    observable: &(dyn Fn(&M::State) -> f64 + Sync),
) -> Result<EnsembleStats<<M::State as DensitySource>::Density>>
where
    M: JumpDiffusion,
    M::State: DensitySource,
{
    cfg.validate()?;
    let snapshot_steps = cfg.snapshot_steps()?;
    let sampling = Sampling {
        stride: cfg.output_stride,
        observable,
        snapshot_steps: &snapshot_steps,
    };
    let dt = cfg.integrator.dt;
    let n_points = cfg.integrator.n_steps() / cfg.output_stride + 1;
    let times: Vec<f64> = (0..n_points).map(|k| (k * cfg.output_stride) as f64 * dt).collect();

    let mut moments = vec![Moments::default(); n_points];
    let mut densities = vec![<M::State as DensitySource>::Density::default(); snapshot_steps.len()];
    let mut drift = NormDrift::default();
    let mut discarded = 0usize;

    let simulate = |r: usize| -> Result<TrajectoryRecord<M::State>> {
        let mut rng = trajectory_rng(cfg.master_seed, r as u64);
        run_trajectory(model, initial, &cfg.integrator, &sampling, &mut rng)
    };

    for start in (0..cfg.trajectories).step_by(BATCH) {
        let end = (start + BATCH).min(cfg.trajectories);
        let batch: Vec<Result<TrajectoryRecord<M::State>>> = (start..end).into_par_iter().map(simulate).collect();
        for rec in batch {
            let rec = rec?;
            if !rec.is_completed() {
                discarded += 1;
                continue;
            }
            for (m, &x) in moments.iter_mut().zip(&rec.observables) {
                m.push(x);
            }
            for (acc, s) in densities.iter_mut().zip(&rec.snapshots) {
                acc.axpy(1.0, &s.density());
            }
            drift.steps += rec.norm_drift.steps;
            drift.sum_abs += rec.norm_drift.sum_abs;
            drift.max_abs = drift.max_abs.max(rec.norm_drift.max_abs);
        }
    }

    let n_samples = cfg.trajectories - discarded;
    if n_samples > 0 {
        for d in &mut densities {
            d.scale_mut(1.0 / n_samples as f64);
        }
    }
    Ok(EnsembleStats {
        times,
        mean: moments.iter().map(Moments::mean).collect(),
        stderr: moments.iter().map(|m| m.stderr().unwrap_or(0.0)).collect(),
        n_samples,
        n_discarded: discarded,
        snapshots: snapshot_steps
            .iter()
            .zip(densities)
            .map(|(&k, density)| DensitySnapshot {
                time: k as f64 * dt,
                density,
            })
            .collect(),
        norm_drift: drift,
    })
}
