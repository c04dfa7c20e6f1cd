#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use unravel::engine::JumpDiffusion;
use unravel::{CMat2, CVec2, ComponentState, OperatorSet, Result, C64};

pub const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Scalar Ornstein–Uhlenbeck process dψ = −ψ dt + σ dW.
pub struct Ou {
    pub sigma: f64,
}

impl JumpDiffusion for Ou {
    type State = f64;
    fn n_diffusions(&self) -> usize {
        1
    }
    fn n_channels(&self) -> usize {
        0
    }
    fn drift(&self, s: &f64) -> f64 {
        -s
    }
    fn diffusion(&self, _: usize, _: &f64) -> f64 {
        self.sigma
    }
    fn intensities(&self, _: &f64, _: &mut [f64]) {}
    fn jump(&self, _: usize, s: &f64) -> Result<f64> {
        Ok(*s)
    }
}

/// A single counting channel with constant intensity and trivial jumps.
pub struct ConstantRate {
    pub rate: f64,
}

impl JumpDiffusion for ConstantRate {
    type State = f64;
    fn n_diffusions(&self) -> usize {
        0
    }
    fn n_channels(&self) -> usize {
        1
    }
    fn drift(&self, _: &f64) -> f64 {
        0.0
    }
    fn diffusion(&self, _: usize, _: &f64) -> f64 {
        0.0
    }
    fn intensities(&self, _: &f64, out: &mut [f64]) {
        out[0] = self.rate;
    }
    fn jump(&self, _: usize, s: &f64) -> Result<f64> {
        Ok(*s)
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, scale: f64) -> CMat2 {
    let mut z = || gaussian(rng) * scale;
    CMat2::new([[z(), z()], [z(), z()]])
}

pub fn random_state(rng: &mut ChaCha8Rng) -> ComponentState {
    let mut z = || gaussian(rng);
    ComponentState::pair(CVec2::new(z(), z()), CVec2::new(z(), z()))
        .normalized()
        .unwrap()
}

/// n = 2, dim = 2 with two L channels (first diffusive) and two R channels
/// (first diffusive), all entries of size ~`scale`.
pub fn random_operator_set(rng: &mut ChaCha8Rng, scale: f64) -> OperatorSet {
    let hamiltonians = [
        random_matrix(rng, scale).hermitian_part(),
        random_matrix(rng, scale).hermitian_part(),
    ];
    let mut ops = OperatorSet::hamiltonian_only(hamiltonians);
    for _ in 0..2 {
        ops.l_channels.push([random_matrix(rng, scale), random_matrix(rng, scale)]);
    }
    ops.d1 = 1;
    for _ in 0..2 {
        let mut r = [[CMat2::zero(); 2]; 2];
        for row in &mut r {
            for m in row.iter_mut() {
                *m = random_matrix(rng, scale);
            }
        }
        ops.r_channels.push(r);
    }
    ops.d2 = 1;
    ops
}
