//! Two-level system coupled to a bath made of two energy bands.
//!
//! Component ψ1 is the system amplitude correlated with the lower band, ψ2
//! with the upper band. Three counting channels move population between
//! components:
//!
//! | channel | intensity            | transition              |
//! |---------|----------------------|-------------------------|
//! | `N11`   | γ1 ‖σ−ψ1‖²           | excited/band 1 → ground/band 2 |
//! | `N12`   | γ2 ‖σ+ψ2‖²           | ground/band 2 → excited/band 1 |
//! | `N21`   | κγ0 ‖ψ1‖²            | band 1 → band 2, internal state kept |
//!
//! and spontaneous emission at rate γ0 is monitored diffusively (heterodyne
//! detection with efficiency ε; both Wiener channels share one coefficient,
//! so ε does not enter the state law).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::JumpDiffusion;
use crate::error::{Error, Result};
use crate::linalg::{CMat2, CVec2, ComponentState, C64, ZERO_NORM_THRESHOLD};
use crate::unravelling::OperatorSet;

/// Default band-shift frequency ω1 = ω2 = √37/2.
pub fn default_omega() -> f64 {
    37f64.sqrt() / 2.0
}

fn default_epsilon() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub kappa: f64,
    pub omega1: f64,
    pub omega2: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

impl ModelParams {
    /// Rates with ω1 = ω2 = √37/2 and ε = 1.
    pub fn with_rates(gamma0: f64, gamma1: f64, gamma2: f64, kappa: f64) -> Self {
        Self {
            gamma0,
            gamma1,
            gamma2,
            kappa,
            omega1: default_omega(),
            omega2: default_omega(),
            epsilon: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gamma0", self.gamma0),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("kappa", self.kappa),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive (got {value})"),
                });
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must lie in (0, 1] (got {})", self.epsilon),
            });
        }
        Ok(())
    }
}

/// Reading of the model equation for the thermal jump and the ψ2 diffusion.
///
/// `Corrected` sends ψ2 → ψ1/‖ψ1‖ on an `N21` count and uses σ−ψ2 in the
/// diffusion of ψ2, which is what the general unravelling prescribes.
/// `AsWritten` keeps the literal form (ψ2 → 2ψ2 − ψ1/‖ψ1‖ and σ−ψ1 in both
/// diffusion terms); it does not preserve the norm and is only useful for
/// comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpConvention {
    #[default]
    Corrected,
    AsWritten,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoBandChannel {
    N11,
    N12,
    N21,
}

impl TwoBandChannel {
    pub const ALL: [TwoBandChannel; 3] = [Self::N11, Self::N12, Self::N21];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for TwoBandChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::N11 => "N11",
            Self::N12 => "N12",
            Self::N21 => "N21",
        };
        f.write_str(s)
    }
}

/// (I11, I12, I21)
pub fn intensities(p: &ModelParams, s: &ComponentState) -> [f64; 3] {
    let [psi1, psi2] = &s.psi;
    [
        p.gamma1 * psi1.0[0].norm_sqr(),
        p.gamma2 * psi2.0[1].norm_sqr(),
        p.kappa * p.gamma0 * psi1.norm_sqr(),
    ]
}

/// υ = 2 Σ_k Re⟨ψ_k | σ−ψ_k⟩
pub fn upsilon(s: &ComponentState) -> f64 {
    2.0 * s
        .psi
        .iter()
        .map(|p| (p.0[1].conj() * p.0[0]).re)
        .sum::<f64>()
}

fn sigma_minus(v: &CVec2) -> CVec2 {
    CVec2::new(C64::new(0.0, 0.0), v.0[0])
}

/// Diagonals of K^1 and K^2. Without diffusion the γ0 emission terms are
/// absent.
fn k_diagonals(p: &ModelParams, diffusion: bool) -> [[C64; 2]; 2] {
    let g0 = if diffusion { p.gamma0 } else { 0.0 };
    let thermal = 0.5 * p.gamma0 * p.kappa;
    let (w1, w2) = (0.5 * p.omega1, 0.5 * p.omega2);
    [
        [
            C64::new(-0.5 * (g0 + p.gamma1) - thermal, -w1),
            C64::new(-thermal, w1),
        ],
        [C64::new(-0.5 * g0, -w2), C64::new(-0.5 * p.gamma2, w2)],
    ]
}

/// K^1 and K^2 as matrices.
pub fn effective_k(p: &ModelParams) -> [CMat2; 2] {
    let [k1, k2] = k_diagonals(p, true);
    [CMat2::diag(k1), CMat2::diag(k2)]
}

/// (V1, V2)
pub fn model_drift(p: &ModelParams, s: &ComponentState) -> ComponentState {
    drift_with(p, &k_diagonals(p, true), true, s)
}

fn drift_with(p: &ModelParams, k: &[[C64; 2]; 2], diffusion: bool, s: &ComponentState) -> ComponentState {
    let [i11, i12, i21] = intensities(p, s);
    let half_rate = 0.5 * (i11 + i12 + i21);
    let (ups, emission) = if diffusion {
        (upsilon(s), 0.5 * p.gamma0)
    } else {
        (0.0, 0.0)
    };
    let shift = half_rate - 0.125 * p.gamma0 * ups * ups;
    let lower = emission * ups;
    let mut v = ComponentState::zero();
    for j in 0..2 {
        let psi = &s.psi[j];
        v.psi[j] = CVec2::new(
            (k[j][0] + shift) * psi.0[0],
            (k[j][1] + shift) * psi.0[1] + psi.0[0] * lower,
        );
    }
    v
}

/// Coefficient of the single effective Wiener increment √ε dW1 + √(1−ε) dW2.
pub fn model_diffusion(p: &ModelParams, s: &ComponentState, convention: JumpConvention) -> ComponentState {
    let sg0 = p.gamma0.sqrt();
    let ups = upsilon(s);
    let coeff = |psi: &CVec2| (sigma_minus(psi) - *psi * (0.5 * ups)) * sg0;
    match convention {
        JumpConvention::Corrected => ComponentState::pair(coeff(&s.psi[0]), coeff(&s.psi[1])),
        JumpConvention::AsWritten => {
            let b = coeff(&s.psi[0]);
            ComponentState::pair(b, b)
        }
    }
}

/// Post-count state of one of the three counting channels.
pub fn model_jump(
    p: &ModelParams,
    s: &ComponentState,
    channel: TwoBandChannel,
    convention: JumpConvention,
) -> Result<ComponentState> {
    let rate = intensities(p, s)[channel.index()];
    if !(rate > ZERO_NORM_THRESHOLD) {
        return Err(Error::ZeroIntensity {
            channel: channel.to_string(),
            intensity: rate,
        });
    }
    let [psi1, psi2] = &s.psi;
    let out = match channel {
        TwoBandChannel::N11 => {
            let a = psi1.0[0];
            ComponentState::pair(CVec2::zero(), CVec2::new(C64::new(0.0, 0.0), a / a.norm()))
        }
        TwoBandChannel::N12 => {
            let b = psi2.0[1];
            ComponentState::pair(CVec2::new(b / b.norm(), C64::new(0.0, 0.0)), CVec2::zero())
        }
        TwoBandChannel::N21 => {
            let moved = *psi1 * psi1.norm_sqr().sqrt().recip();
            match convention {
                JumpConvention::Corrected => ComponentState::pair(CVec2::zero(), moved),
                JumpConvention::AsWritten => ComponentState::pair(CVec2::zero(), *psi2 * 2.0 - moved),
            }
        }
    };
    Ok(out)
}

fn scaled(m: CMat2, rate: f64) -> CMat2 {
    m * rate.sqrt()
}

/// The operator family whose generic unravelling is this model:
/// H^j = (ω_j/2)σz, diffusive L^j_1 = √(γ0ε)σ−, L^j_2 = √(γ0(1−ε))σ−, and
/// counting R^{21} = √γ1 σ−, R^{12} = √γ2 σ+, R^{21} = √(γ0κ) 𝟙 in that
/// order. Channels with vanishing rate are omitted.
pub fn operator_set(p: &ModelParams) -> OperatorSet {
    let mut ops = operator_set_without_diffusion(p);
    let sm = CMat2::sigma_minus();
    for rate in [p.gamma0 * p.epsilon, p.gamma0 * (1.0 - p.epsilon)] {
        if rate > 0.0 {
            ops.l_channels.push([scaled(sm, rate); 2]);
        }
    }
    ops.d1 = ops.l_channels.len();
    ops
}

/// [`operator_set`] without the diffusive emission channels.
pub fn operator_set_without_diffusion(p: &ModelParams) -> OperatorSet {
    let z = CMat2::zero();
    let sz = CMat2::sigma_z();
    let mut ops = OperatorSet::hamiltonian_only([sz * (0.5 * p.omega1), sz * (0.5 * p.omega2)]);
    let transfers = [
        (p.gamma1, CMat2::sigma_minus(), (1, 0)),
        (p.gamma2, CMat2::sigma_plus(), (0, 1)),
        (p.gamma0 * p.kappa, CMat2::identity(), (1, 0)),
    ];
    for (rate, op, (to, from)) in transfers {
        if rate > 0.0 {
            let mut r = [[z; 2]; 2];
            r[to][from] = scaled(op, rate);
            ops.r_channels.push(r);
        }
    }
    ops
}

/// The two-band model as a jump-diffusion with closed-form coefficients.
#[derive(Clone, Debug)]
pub struct TwoBandModel {
    params: ModelParams,
    convention: JumpConvention,
    diffusion: bool,
    k: [[C64; 2]; 2],
}

impl TwoBandModel {
    pub fn new(params: ModelParams) -> Result<Self> {
        Self::with_options(params, JumpConvention::Corrected, true)
    }

    /// `diffusion = false` removes the monitored emission channel entirely
    /// (its drift, diffusion and dissipative contributions).
    pub fn with_options(params: ModelParams, convention: JumpConvention, diffusion: bool) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            convention,
            diffusion,
            k: k_diagonals(&params, diffusion),
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn convention(&self) -> JumpConvention {
        self.convention
    }

    pub fn diffusion_enabled(&self) -> bool {
        self.diffusion
    }
}

impl JumpDiffusion for TwoBandModel {
    type State = ComponentState;

    fn n_diffusions(&self) -> usize {
        usize::from(self.diffusion)
    }

    fn n_channels(&self) -> usize {
        3
    }

    fn drift(&self, s: &ComponentState) -> ComponentState {
        drift_with(&self.params, &self.k, self.diffusion, s)
    }

    fn diffusion(&self, _: usize, s: &ComponentState) -> ComponentState {
        model_diffusion(&self.params, s, self.convention)
    }

    fn intensities(&self, s: &ComponentState, out: &mut [f64]) {
        out.copy_from_slice(&intensities(&self.params, s));
    }

    fn jump(&self, channel: usize, s: &ComponentState) -> Result<ComponentState> {
        model_jump(&self.params, s, TwoBandChannel::ALL[channel], self.convention)
    }

    fn channel_label(&self, channel: usize) -> String {
        TwoBandChannel::ALL[channel].to_string()
    }
}
