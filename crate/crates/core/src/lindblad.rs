//! Deterministic reference: the rate equation obeyed by the averaged
//! densities η_i = E[|ψ_i⟩⟨ψ_i|], integrated with classical RK4.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CMat2, DensityPair, DensityVector, StateVector, C64};
use crate::two_band::ModelParams;
use crate::unravelling::OperatorSet;

fn dissipator_in<const D: usize>(l: &CMat<D>, rho: &CMat<D>, out: &mut CMat<D>) {
    *out += l.sandwich(rho) - (l.adjoint() * *l).anticommutator(rho) * 0.5;
}

/// Right-hand side generated by an arbitrary operator set:
///
/// dη_i = −i[H^i, η_i] + Σ_α D[L^i_α](η_i)
///        + Σ_{α,k} (R^{ik}_α η_k R^{ik*}_α − ½{R^{ki*}_α R^{ki}_α, η_i})
pub fn rate_rhs_generic<const N: usize, const D: usize>(
    ops: &OperatorSet<N, D>,
    eta: &DensityVector<N, D>,
) -> DensityVector<N, D> {
    let minus_i = C64::new(0.0, -1.0);
    let mut out = DensityVector::zero();
    for i in 0..N {
        let rho = &eta.eta[i];
        let d = &mut out.eta[i];
        *d += ops.hamiltonians[i].commutator(rho) * minus_i;
        for l in &ops.l_channels {
            dissipator_in(&l[i], rho, d);
        }
        for r in &ops.r_channels {
            for k in 0..N {
                *d += r[i][k].sandwich(&eta.eta[k]);
                let out_op = r[k][i];
                *d -= (out_op.adjoint() * out_op).anticommutator(rho) * 0.5;
            }
        }
    }
    out
}

fn model_rhs(p: &ModelParams, eta: &DensityPair, emission: bool) -> DensityPair {
    let sm = CMat2::sigma_minus();
    let sp = CMat2::sigma_plus();
    let sz = CMat2::sigma_z();
    let pe = CMat2::proj_excited();
    let pg = CMat2::proj_ground();
    let [e1, e2] = &eta.eta;
    let emit = |rho: &CMat2| {
        if emission {
            (sm * *rho * sp - pe.anticommutator(rho) * 0.5) * p.gamma0
        } else {
            CMat2::zero()
        }
    };
    let rotate = |omega: f64, rho: &CMat2| sz.commutator(rho) * C64::new(0.0, -0.5 * omega);
    let thermal = *e1 * (p.gamma0 * p.kappa);

    let d1 = emit(e1) + (sp * *e2 * sm) * p.gamma2 - pe.anticommutator(e1) * (0.5 * p.gamma1) - thermal
        + rotate(p.omega1, e1);
    let d2 = emit(e2) + (sm * *e1 * sp) * p.gamma1 - pg.anticommutator(e2) * (0.5 * p.gamma2)
        + thermal
        + rotate(p.omega2, e2);
    DensityVector::new([d1, d2])
}

/// The two coupled equations of the two-band model.
pub fn rate_rhs_model(p: &ModelParams, eta: &DensityPair) -> DensityPair {
    model_rhs(p, eta, true)
}

/// [`rate_rhs_model`] with both γ0 emission dissipators removed. The γ0κ
/// band-transfer terms stay.
pub fn rate_rhs_model_no_diffusion(p: &ModelParams, eta: &DensityPair) -> DensityPair {
    model_rhs(p, eta, false)
}

/// Sampled solution of an initial-value problem.
#[derive(Clone, Debug)]
pub struct OdeSolution<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> OdeSolution<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("solution always holds the initial state")
    }
}

fn step_count(dt: f64, t_final: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be positive (got {dt})"),
        });
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            reason: format!("must be non-negative (got {t_final})"),
        });
    }
    let n = (t_final / dt).round();
    if (n * dt - t_final).abs() > 1e-9 * t_final.max(1.0) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            reason: format!("must be an integer multiple of dt = {dt} (got {t_final})"),
        });
    }
    Ok(n as usize)
}

/// One classical RK4 step.
pub fn rk4_step<S, F>(rhs: &F, y: &S, dt: f64) -> S
where
    S: StateVector,
    F: Fn(&S) -> S,
{
    let k1 = rhs(y);
    let mut tmp = y.clone();
    tmp.axpy(0.5 * dt, &k1);
    let k2 = rhs(&tmp);
    tmp = y.clone();
    tmp.axpy(0.5 * dt, &k2);
    let k3 = rhs(&tmp);
    tmp = y.clone();
    tmp.axpy(dt, &k3);
    let k4 = rhs(&tmp);

    let mut next = y.clone();
    next.axpy(dt / 6.0, &k1);
    next.axpy(dt / 3.0, &k2);
    next.axpy(dt / 3.0, &k3);
    next.axpy(dt / 6.0, &k4);
    next
}

/// Integrates `y' = rhs(y)` from `y0` up to `t_final`, keeping every state.
pub fn rk4_solve<S, F>(rhs: F, y0: &S, dt: f64, t_final: f64) -> Result<OdeSolution<S>>
where
    S: StateVector,
    F: Fn(&S) -> S,
{
    rk4_solve_strided(rhs, y0, dt, t_final, 1)
}

/// Like [`rk4_solve`] but keeps only every `stride`-th state (plus the
/// initial one).
pub fn rk4_solve_strided<S, F>(rhs: F, y0: &S, dt: f64, t_final: f64, stride: usize) -> Result<OdeSolution<S>>
where
    S: StateVector,
    F: Fn(&S) -> S,
{
    let n = step_count(dt, t_final)?;
    let stride = stride.max(1);
    let mut times = Vec::with_capacity(n / stride + 1);
    let mut states = Vec::with_capacity(n / stride + 1);
    times.push(0.0);
    states.push(y0.clone());

    let mut y = y0.clone();
    for step in 1..=n {
        y = rk4_step(&rhs, &y, dt);
        if !y.is_finite() {
            return Err(Error::NonFinite(format!("RK4 step ending at t = {}", step as f64 * dt)));
        }
        if step % stride == 0 {
            times.push(step as f64 * dt);
            states.push(y.clone());
        }
    }
    Ok(OdeSolution { times, states })
}

/// Long-time excited population Σ_i tr(P+ η_i) of the full model.
///
/// The populations p_i = tr(P+η_i) and weights n_i = tr(η_i) obey a closed
/// linear system whose fixed point gives (1+κ)/S with
/// S = (1+κ)/κ + κ + (γ0 + γ1 + γ0κ)/γ2.
pub fn steady_state_excited(p: &ModelParams) -> Result<f64> {
    let rates = [
        ("gamma0", p.gamma0),
        ("gamma1", p.gamma1),
        ("gamma2", p.gamma2),
        ("kappa", p.kappa),
    ];
    if let Some((name, v)) = rates.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::DegenerateRates(format!("{name} = {v}")));
    }
    let k = p.kappa;
    let s = (1.0 + k) / k + k + (p.gamma0 + p.gamma1 + p.gamma0 * k) / p.gamma2;
    Ok((1.0 + k) / s)
}
