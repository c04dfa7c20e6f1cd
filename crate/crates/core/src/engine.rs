//! Jump-adapted Euler integration of jump-diffusion equations
//!
//! ```text
//! dψ = a(ψ) dt + Σ_i b_i(ψ) dW_i + Σ_j c_j(ψ) dN_j,    E[dN_j] = f_j(ψ) dt
//! ```
//!
//! Between counts the state follows explicit Euler steps. The integrated
//! intensity Λ = ∫ I dt (left-point rule, I = Σ_j f_j) is compared with a
//! threshold −ln τ, τ ~ U(0, 1]; on crossing, a channel is chosen with
//! probability f_j / I and its jump map is applied, then Λ is reset and τ is
//! redrawn. The survival probability of the current inter-count interval is
//! exp(−Λ).

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{StateVector, ZERO_NORM_THRESHOLD};

/// Coefficient evaluators of a jump-diffusion equation.
///
/// Intensity evaluators must return non-negative values on normalized states.
pub trait JumpDiffusion: Sync {
    type State: StateVector;

    fn n_diffusions(&self) -> usize;

    fn n_channels(&self) -> usize;

    /// a(ψ)
    fn drift(&self, s: &Self::State) -> Self::State;

    /// b_i(ψ)
    fn diffusion(&self, i: usize, s: &Self::State) -> Self::State;

    /// Writes f_j(ψ) for every counting channel into `out`.
    fn intensities(&self, s: &Self::State, out: &mut [f64]);

    /// The post-count state of channel `channel` (ψ + c_j(ψ)).
    fn jump(&self, channel: usize, s: &Self::State) -> Result<Self::State>;

    fn channel_label(&self, channel: usize) -> String {
        channel.to_string()
    }
}

/// Bounds on the pre-renormalization total norm² outside of which a
/// trajectory is considered numerically unstable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormGuard {
    pub lower: f64,
    pub upper: f64,
}

impl Default for NormGuard {
    fn default() -> Self {
        Self {
            lower: 0.25,
            upper: 4.0,
        }
    }
}

impl NormGuard {
    pub fn contains(&self, norm2: f64) -> bool {
        norm2 >= self.lower && norm2 <= self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_final: f64,
    pub renormalize_each_step: bool,
    pub norm_guard: Option<NormGuard>,
    /// Apply a jump to the state ending the crossing step (default) rather
    /// than to the state starting it.
    pub jump_at_step_end: bool,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self {
            dt,
            t_final,
            renormalize_each_step: true,
            norm_guard: Some(NormGuard::default()),
            jump_at_step_end: true,
        }
    }

    pub fn without_renormalization(mut self) -> Self {
        self.renormalize_each_step = false;
        self.norm_guard = None;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt && self.t_final.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_final must be at least dt, got {}",
                self.t_final
            )));
        }
        let steps = self.t_final / self.dt;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(Error::InvalidConfig(format!(
                "t_final = {} is not an integer multiple of dt = {}",
                self.t_final, self.dt
            )));
        }
        if let Some(g) = self.norm_guard {
            if !(g.lower > 0.0 && g.lower < 1.0 && g.upper > 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "norm guard must satisfy 0 < lower < 1 < upper, got [{}, {}]",
                    g.lower, g.upper
                )));
            }
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }
}

/// What to keep while integrating.
pub struct Sampling<'a, S> {
    /// Record the observable and survival probability every `stride` steps.
    pub stride: usize,
    pub observable: &'a (dyn Fn(&S) -> f64 + Sync),
    /// Step indices (ascending) at which to keep a copy of the state.
    pub snapshot_steps: &'a [usize],
}

impl<'a, S> Sampling<'a, S> {
    pub fn every_step(observable: &'a (dyn Fn(&S) -> f64 + Sync)) -> Self {
        Self {
            stride: 1,
            observable,
            snapshot_steps: &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpEvent<S> {
    pub time: f64,
    pub channel: usize,
    /// State right after the jump.
    pub state: S,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TerminationStatus {
    Completed,
    /// The pre-renormalization norm² left the guard band at `time`.
    Discarded { time: f64, norm2: f64 },
}

/// Relative change of the total norm² produced by single Euler steps,
/// |‖ψ'‖² / ‖ψ‖² − 1|, measured before renormalization.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NormDrift {
    pub steps: u64,
    pub sum_abs: f64,
    pub max_abs: f64,
}

impl NormDrift {
    fn push(&mut self, d: f64) {
        self.steps += 1;
        self.sum_abs += d;
        self.max_abs = self.max_abs.max(d);
    }

    pub fn mean_abs(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.sum_abs / self.steps as f64
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrajectoryRecord<S> {
    pub times: Vec<f64>,
    pub observables: Vec<f64>,
    /// P(t) = exp(−∫ I ds) since the last count.
    pub survival: Vec<f64>,
    pub jumps: Vec<JumpEvent<S>>,
    /// One state per requested snapshot step reached before termination.
    pub snapshots: Vec<S>,
    pub status: TerminationStatus,
    pub norm_drift: NormDrift,
}

impl<S> TrajectoryRecord<S> {
    pub fn is_completed(&self) -> bool {
        self.status == TerminationStatus::Completed
    }
}

/// One explicit Euler step `s + a(s) dt + Σ_i b_i(s) ΔW_i`.
///
/// `noise[i]` is the Wiener increment ΔW_i ~ N(0, dt) of diffusion `i`.
pub fn euler_step<M: JumpDiffusion>(
    model: &M,
    s: &M::State,
    dt: f64,
    noise: &[f64],
) -> Result<M::State> {
    debug_assert_eq!(noise.len(), model.n_diffusions());
    let mut next = s.clone();
    next.axpy(dt, &model.drift(s));
    for (i, &dw) in noise.iter().enumerate() {
        if dw != 0.0 {
            next.axpy(dw, &model.diffusion(i, s));
        }
    }
    if !next.is_finite() {
        return Err(Error::NonFinite("Euler step".into()));
    }
    Ok(next)
}

/// Left-point update of the integrated intensity Λ.
pub fn survival_advance(lambda: f64, intensity: f64, dt: f64) -> f64 {
    lambda + intensity * dt
}

/// The count fires once the integrated intensity reaches −ln τ.
pub fn fires(lambda: f64, threshold: f64) -> bool {
    lambda >= threshold
}

/// Picks the channel whose cumulative-probability bracket contains `u`.
pub fn select_channel(intensities: &[f64], u: f64) -> Result<usize> {
    let total: f64 = intensities.iter().sum();
    if !(total > ZERO_NORM_THRESHOLD) {
        return Err(Error::AllZero(total));
    }
    let target = u * total;
    let mut acc = 0.0;
    let mut last_live = 0;
    for (i, &rate) in intensities.iter().enumerate() {
        if rate > 0.0 {
            last_live = i;
        }
        acc += rate;
        if target < acc {
            return Ok(i);
        }
    }
    // u·total rounded up to the full sum.
    Ok(last_live)
}

fn draw_threshold<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // τ = 1 − u lies in (0, 1].
    let tau = 1.0 - rng.random::<f64>();
    -tau.ln()
}

/// Integrates one trajectory on the grid t_n = n·dt, n = 0..=t_final/dt.
///
/// Discarded trajectories are returned with [`TerminationStatus::Discarded`]
/// and whatever was recorded up to that point.
pub fn run_trajectory<M, R>(
    model: &M,
    initial: &M::State,
    cfg: &IntegratorConfig,
    sampling: &Sampling<'_, M::State>,
    rng: &mut R,
) -> Result<TrajectoryRecord<M::State>>
where
    M: JumpDiffusion,
    R: Rng + ?Sized,
{
    cfg.validate()?;
    let stride = sampling.stride.max(1);
    let n_steps = cfg.n_steps();
    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();

    let n_points = n_steps / stride + 1;
    let mut rec = TrajectoryRecord {
        times: Vec::with_capacity(n_points),
        observables: Vec::with_capacity(n_points),
        survival: Vec::with_capacity(n_points),
        jumps: Vec::new(),
        snapshots: Vec::with_capacity(sampling.snapshot_steps.len()),
        status: TerminationStatus::Completed,
        norm_drift: NormDrift::default(),
    };

    let mut psi = initial.clone();
    let mut noise = vec![0.0; model.n_diffusions()];
    let mut rates = vec![0.0; model.n_channels()];
    let mut lambda = 0.0;
    let mut threshold = draw_threshold(rng);
    let mut next_snapshot = 0;

    rec.times.push(0.0);
    rec.observables.push((sampling.observable)(&psi));
    rec.survival.push(1.0);
    while sampling.snapshot_steps.get(next_snapshot) == Some(&0) {
        rec.snapshots.push(psi.clone());
        next_snapshot += 1;
    }

    for n in 0..n_steps {
        let t = n as f64 * dt;
        let t_next = (n + 1) as f64 * dt;

        model.intensities(&psi, &mut rates);
        let total: f64 = rates.iter().sum();
        lambda = survival_advance(lambda, total, dt);
        let fire = fires(lambda, threshold);

        if fire && !cfg.jump_at_step_end {
            let channel = select_channel(&rates, rng.random::<f64>())?;
            psi = model.jump(channel, &psi)?;
            rec.jumps.push(JumpEvent {
                time: t,
                channel,
                state: psi.clone(),
            });
            lambda = 0.0;
            threshold = draw_threshold(rng);
        }

        for w in noise.iter_mut() {
            *w = sqrt_dt * rng.sample::<f64, _>(StandardNormal);
        }
        let before = psi.norm_sqr();
        let mut next = euler_step(model, &psi, dt, &noise)
            .map_err(|_| Error::NonFinite(format!("Euler step ending at t = {t_next}")))?;
        let after = next.norm_sqr();
        rec.norm_drift.push((after / before - 1.0).abs());

        if let Some(guard) = cfg.norm_guard {
            if !guard.contains(after) {
                rec.status = TerminationStatus::Discarded {
                    time: t_next,
                    norm2: after,
                };
                return Ok(rec);
            }
        }
        if cfg.renormalize_each_step {
            if !(after > ZERO_NORM_THRESHOLD) {
                return Err(Error::ZeroNorm(after));
            }
            next.scale_mut(after.sqrt().recip());
        }
        psi = next;

        if fire && cfg.jump_at_step_end {
            model.intensities(&psi, &mut rates);
            let channel = select_channel(&rates, rng.random::<f64>())?;
            psi = model.jump(channel, &psi)?;
            rec.jumps.push(JumpEvent {
                time: t_next,
                channel,
                state: psi.clone(),
            });
            lambda = 0.0;
            threshold = draw_threshold(rng);
        }

        if (n + 1) % stride == 0 {
            rec.times.push(t_next);
            rec.observables.push((sampling.observable)(&psi));
            rec.survival.push((-lambda).exp());
        }
        while sampling.snapshot_steps.get(next_snapshot) == Some(&(n + 1)) {
            rec.snapshots.push(psi.clone());
            next_snapshot += 1;
        }
    }
    Ok(rec)
}
