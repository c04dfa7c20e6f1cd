//! Coefficients of the nonlinear jump-diffusion unravelling of a generalized
//! Lindblad rate equation, built from its operator family.
//!
//! For components j = 1..n the a posteriori state obeys
//!
//! ```text
//! dψ_j = V_j dt
//!      + Σ_{α ≤ d1} (L^j_α − υ_α/2) ψ_j dŴ_α
//!      + Σ_{α ≤ d2} Σ_k (R^{jk}_α ψ_k − υ^k_α ψ_j / 2) dŴ^k_α
//!      + Σ_{α > d1} (L^j_α ψ_j / √I_α − ψ_j) dN_α
//!      + Σ_{α > d2} Σ_k (R^{jk}_α ψ_k / √I^k_α − ψ_j) dN^k_α
//! ```
//!
//! with
//!
//! ```text
//! υ_α   = 2 Σ_j Re⟨ψ_j | L^j_α ψ_j⟩        I_α   = Σ_j ‖L^j_α ψ_j‖²
//! υ^k_α = 2 Σ_j Re⟨ψ_j | R^{jk}_α ψ_k⟩     I^k_α = Σ_j ‖R^{jk}_α ψ_k‖²
//! K^j   = −iH^j − ½ Σ_α L^{j*}_α L^j_α − ½ Σ_{α,k} R^{kj*}_α R^{kj}_α
//! ```
//!
//! Both υ sums run over every component, which keeps the total norm
//! invariant.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::JumpDiffusion;
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, ComponentState, C64, ZERO_NORM_THRESHOLD};

const HERMITIAN_TOL: f64 = 1e-12;

/// The operator family defining a generalized unravelling.
///
/// `l_channels[α][j]` is L^j_α; `r_channels[α][j][k]` is R^{jk}_α, which
/// moves amplitude from component `k` into component `j`. Channels with
/// index below `d1` (resp. `d2`) are diffusive, the rest are counting.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSet<const N: usize = 2, const D: usize = 2> {
    pub hamiltonians: [CMat<D>; N],
    pub l_channels: Vec<[CMat<D>; N]>,
    pub d1: usize,
    pub r_channels: Vec<[[CMat<D>; N]; N]>,
    pub d2: usize,
}

impl<const N: usize, const D: usize> OperatorSet<N, D> {
    /// Only Hamiltonians, no dissipation.
    pub fn hamiltonian_only(hamiltonians: [CMat<D>; N]) -> Self {
        Self {
            hamiltonians,
            l_channels: Vec::new(),
            d1: 0,
            r_channels: Vec::new(),
            d2: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (j, h) in self.hamiltonians.iter().enumerate() {
            if !h.is_finite() || !h.is_hermitian(HERMITIAN_TOL) {
                return Err(Error::InvalidOperatorSet(format!("H[{j}] is not a finite Hermitian matrix")));
            }
        }
        if self.d1 > self.l_channels.len() {
            return Err(Error::InvalidOperatorSet(format!(
                "d1 = {} exceeds the number of L channels {}",
                self.d1,
                self.l_channels.len()
            )));
        }
        if self.d2 > self.r_channels.len() {
            return Err(Error::InvalidOperatorSet(format!(
                "d2 = {} exceeds the number of R channels {}",
                self.d2,
                self.r_channels.len()
            )));
        }
        let finite = self.l_channels.iter().flatten().all(CMat::is_finite)
            && self.r_channels.iter().flatten().flatten().all(CMat::is_finite);
        if !finite {
            return Err(Error::InvalidOperatorSet("non-finite channel operator".into()));
        }
        Ok(())
    }

    /// Parses the JSON document form
    /// `{"n": …, "H": […], "L": {"d1": …, "ops": […]}, "R": {"d2": …, "ops": […]}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: OperatorSetDoc<D> =
            serde_json::from_str(text).map_err(|e| Error::InvalidOperatorSet(e.to_string()))?;
        doc.try_into()
    }

    pub fn to_json(&self) -> String {
        let doc = OperatorSetDoc::from(self);
        serde_json::to_string_pretty(&doc).expect("operator set serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "")]
struct OperatorSetDoc<const D: usize> {
    n: usize,
    #[serde(rename = "H")]
    h: Vec<CMat<D>>,
    #[serde(rename = "L", default)]
    l: LDoc<D>,
    #[serde(rename = "R", default)]
    r: RDoc<D>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "")]
struct LDoc<const D: usize> {
    d1: usize,
    ops: Vec<Vec<CMat<D>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "")]
struct RDoc<const D: usize> {
    d2: usize,
    ops: Vec<Vec<Vec<CMat<D>>>>,
}

impl<const D: usize> Default for LDoc<D> {
    fn default() -> Self {
        Self { d1: 0, ops: Vec::new() }
    }
}

impl<const D: usize> Default for RDoc<D> {
    fn default() -> Self {
        Self { d2: 0, ops: Vec::new() }
    }
}

fn exact<T, const N: usize>(items: Vec<T>, what: &str) -> Result<[T; N]> {
    let len = items.len();
    items
        .try_into()
        .map_err(|_| Error::InvalidOperatorSet(format!("{what}: expected {N} entries, got {len}")))
}

impl<const N: usize, const D: usize> TryFrom<OperatorSetDoc<D>> for OperatorSet<N, D> {
    type Error = Error;

    fn try_from(doc: OperatorSetDoc<D>) -> Result<Self> {
        if doc.n != N {
            return Err(Error::InvalidOperatorSet(format!("n = {} but {N} components expected", doc.n)));
        }
        let hamiltonians = exact(doc.h, "H")?;
        let l_channels = doc
            .l
            .ops
            .into_iter()
            .enumerate()
            .map(|(a, ops)| exact(ops, &format!("L[{a}]")))
            .collect::<Result<Vec<_>>>()?;
        let r_channels = doc
            .r
            .ops
            .into_iter()
            .enumerate()
            .map(|(a, rows)| {
                let rows = rows
                    .into_iter()
                    .enumerate()
                    .map(|(j, row)| exact(row, &format!("R[{a}][{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                exact(rows, &format!("R[{a}]"))
            })
            .collect::<Result<Vec<_>>>()?;
        let ops = OperatorSet {
            hamiltonians,
            l_channels,
            d1: doc.l.d1,
            r_channels,
            d2: doc.r.d2,
        };
        ops.validate()?;
        Ok(ops)
    }
}

impl<const N: usize, const D: usize> From<&OperatorSet<N, D>> for OperatorSetDoc<D> {
    fn from(ops: &OperatorSet<N, D>) -> Self {
        Self {
            n: N,
            h: ops.hamiltonians.to_vec(),
            l: LDoc {
                d1: ops.d1,
                ops: ops.l_channels.iter().map(|c| c.to_vec()).collect(),
            },
            r: RDoc {
                d2: ops.d2,
                ops: ops
                    .r_channels
                    .iter()
                    .map(|c| c.iter().map(|row| row.to_vec()).collect())
                    .collect(),
            },
        }
    }
}

/// Identifies one noise of the unravelling. `alpha` indexes
/// [`OperatorSet::l_channels`] or [`OperatorSet::r_channels`]; `k` is the
/// source component of an R channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelId {
    LDiffusive { alpha: usize },
    LCounting { alpha: usize },
    RDiffusive { alpha: usize, k: usize },
    RCounting { alpha: usize, k: usize },
}

impl ChannelId {
    pub fn is_diffusive(&self) -> bool {
        matches!(self, Self::LDiffusive { .. } | Self::RDiffusive { .. })
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::LDiffusive { alpha } => write!(f, "W{}", alpha + 1),
            Self::LCounting { alpha } => write!(f, "N{}", alpha + 1),
            Self::RDiffusive { alpha, k } => write!(f, "W{}^{}", alpha + 1, k + 1),
            Self::RCounting { alpha, k } => write!(f, "N{}^{}", alpha + 1, k + 1),
        }
    }
}

/// K^j = −iH^j − ½ Σ_α L^{j*}_α L^j_α − ½ Σ_{α,k} R^{kj*}_α R^{kj}_α
pub fn effective_k<const N: usize, const D: usize>(ops: &OperatorSet<N, D>, j: usize) -> CMat<D> {
    let mut k = ops.hamiltonians[j] * C64::new(0.0, -1.0);
    for l in &ops.l_channels {
        k -= (l[j].adjoint() * l[j]) * 0.5;
    }
    for r in &ops.r_channels {
        for row in r.iter() {
            k -= (row[j].adjoint() * row[j]) * 0.5;
        }
    }
    k
}

/// Coefficient evaluators generated from an [`OperatorSet`].
#[derive(Clone, Debug)]
pub struct Unravelling<const N: usize = 2, const D: usize = 2> {
    ops: OperatorSet<N, D>,
    k: [CMat<D>; N],
    diffusive: Vec<ChannelId>,
    counting: Vec<ChannelId>,
}

impl<const N: usize, const D: usize> Unravelling<N, D> {
    /// Channels whose operators all vanish are left out of the channel
    /// lists; they contribute nothing to any coefficient.
    pub fn new(ops: OperatorSet<N, D>) -> Result<Self> {
        ops.validate()?;
        let k = std::array::from_fn(|j| effective_k(&ops, j));
        let mut diffusive = Vec::new();
        let mut counting = Vec::new();
        for (alpha, l) in ops.l_channels.iter().enumerate() {
            if l.iter().all(CMat::is_zero) {
                continue;
            }
            if alpha < ops.d1 {
                diffusive.push(ChannelId::LDiffusive { alpha });
            } else {
                counting.push(ChannelId::LCounting { alpha });
            }
        }
        for (alpha, r) in ops.r_channels.iter().enumerate() {
            for src in 0..N {
                if r.iter().all(|row| row[src].is_zero()) {
                    continue;
                }
                if alpha < ops.d2 {
                    diffusive.push(ChannelId::RDiffusive { alpha, k: src });
                } else {
                    counting.push(ChannelId::RCounting { alpha, k: src });
                }
            }
        }
        Ok(Self {
            ops,
            k,
            diffusive,
            counting,
        })
    }

    pub fn operators(&self) -> &OperatorSet<N, D> {
        &self.ops
    }

    pub fn effective_k(&self, j: usize) -> &CMat<D> {
        &self.k[j]
    }

    pub fn diffusive_channels(&self) -> &[ChannelId] {
        &self.diffusive
    }

    pub fn counting_channels(&self) -> &[ChannelId] {
        &self.counting
    }

    /// υ_α = 2 Σ_j Re⟨ψ_j | L^j_α ψ_j⟩
    pub fn upsilon_l(&self, alpha: usize, s: &ComponentState<N, D>) -> f64 {
        let l = &self.ops.l_channels[alpha];
        2.0 * (0..N)
            .map(|j| s.psi[j].inner(&l[j].apply(&s.psi[j])).re)
            .sum::<f64>()
    }

    /// υ^k_α = 2 Σ_j Re⟨ψ_j | R^{jk}_α ψ_k⟩
    pub fn upsilon_r(&self, alpha: usize, k: usize, s: &ComponentState<N, D>) -> f64 {
        let r = &self.ops.r_channels[alpha];
        2.0 * (0..N)
            .map(|j| s.psi[j].inner(&r[j][k].apply(&s.psi[k])).re)
            .sum::<f64>()
    }

    /// I_α = Σ_j ‖L^j_α ψ_j‖² or I^k_α = Σ_j ‖R^{jk}_α ψ_k‖².
    pub fn intensity(&self, c: ChannelId, s: &ComponentState<N, D>) -> f64 {
        match c {
            ChannelId::LDiffusive { alpha } | ChannelId::LCounting { alpha } => {
                let l = &self.ops.l_channels[alpha];
                (0..N).map(|j| l[j].apply(&s.psi[j]).norm_sqr()).sum()
            }
            ChannelId::RDiffusive { alpha, k } | ChannelId::RCounting { alpha, k } => {
                let r = &self.ops.r_channels[alpha];
                (0..N).map(|j| r[j][k].apply(&s.psi[k]).norm_sqr()).sum()
            }
        }
    }

    /// V_j for every component.
    pub fn drift(&self, s: &ComponentState<N, D>) -> ComponentState<N, D> {
        let total_rate: f64 = self.counting.iter().map(|&c| self.intensity(c, s)).sum();
        let mut v = ComponentState::zero();
        for j in 0..N {
            v.psi[j] = self.k[j].apply(&s.psi[j]) + s.psi[j] * (0.5 * total_rate);
        }
        for &c in &self.diffusive {
            match c {
                ChannelId::LDiffusive { alpha } => {
                    let u = self.upsilon_l(alpha, s);
                    let l = &self.ops.l_channels[alpha];
                    for j in 0..N {
                        let term = l[j].apply(&s.psi[j]) - s.psi[j] * (0.25 * u);
                        v.psi[j] += term * (0.5 * u);
                    }
                }
                ChannelId::RDiffusive { alpha, k } => {
                    let u = self.upsilon_r(alpha, k, s);
                    let r = &self.ops.r_channels[alpha];
                    for j in 0..N {
                        let term = r[j][k].apply(&s.psi[k]) - s.psi[j] * (0.25 * u);
                        v.psi[j] += term * (0.5 * u);
                    }
                }
                _ => unreachable!("counting channel in diffusive list"),
            }
        }
        v
    }

    /// V_j for a single component.
    pub fn drift_v(&self, j: usize, s: &ComponentState<N, D>) -> CVec<D> {
        self.drift(s).psi[j]
    }

    /// Per-component coefficient of a diffusive channel.
    pub fn diffusion_coeff(&self, c: ChannelId, s: &ComponentState<N, D>) -> ComponentState<N, D> {
        let mut b = ComponentState::zero();
        match c {
            ChannelId::LDiffusive { alpha } | ChannelId::LCounting { alpha } => {
                let u = self.upsilon_l(alpha, s);
                let l = &self.ops.l_channels[alpha];
                for j in 0..N {
                    b.psi[j] = l[j].apply(&s.psi[j]) - s.psi[j] * (0.5 * u);
                }
            }
            ChannelId::RDiffusive { alpha, k } | ChannelId::RCounting { alpha, k } => {
                let u = self.upsilon_r(alpha, k, s);
                let r = &self.ops.r_channels[alpha];
                for j in 0..N {
                    b.psi[j] = r[j][k].apply(&s.psi[k]) - s.psi[j] * (0.5 * u);
                }
            }
        }
        b
    }

    /// Post-count state of a counting channel.
    pub fn jump_map(&self, c: ChannelId, s: &ComponentState<N, D>) -> Result<ComponentState<N, D>> {
        let rate = self.intensity(c, s);
        if !(rate > ZERO_NORM_THRESHOLD) {
            return Err(Error::ZeroIntensity {
                channel: c.to_string(),
                intensity: rate,
            });
        }
        let inv = rate.sqrt().recip();
        let mut out = ComponentState::zero();
        match c {
            ChannelId::LDiffusive { alpha } | ChannelId::LCounting { alpha } => {
                let l = &self.ops.l_channels[alpha];
                for j in 0..N {
                    out.psi[j] = l[j].apply(&s.psi[j]) * inv;
                }
            }
            ChannelId::RDiffusive { alpha, k } | ChannelId::RCounting { alpha, k } => {
                let r = &self.ops.r_channels[alpha];
                for j in 0..N {
                    out.psi[j] = r[j][k].apply(&s.psi[k]) * inv;
                }
            }
        }
        Ok(out)
    }
}

impl<const N: usize, const D: usize> JumpDiffusion for Unravelling<N, D> {
    type State = ComponentState<N, D>;

    fn n_diffusions(&self) -> usize {
        self.diffusive.len()
    }

    fn n_channels(&self) -> usize {
        self.counting.len()
    }

    fn drift(&self, s: &Self::State) -> Self::State {
        Unravelling::drift(self, s)
    }

    fn diffusion(&self, i: usize, s: &Self::State) -> Self::State {
        self.diffusion_coeff(self.diffusive[i], s)
    }

    fn intensities(&self, s: &Self::State, out: &mut [f64]) {
        for (o, &c) in out.iter_mut().zip(&self.counting) {
            *o = self.intensity(c, s);
        }
    }

    fn jump(&self, channel: usize, s: &Self::State) -> Result<Self::State> {
        self.jump_map(self.counting[channel], s)
    }

    fn channel_label(&self, channel: usize) -> String {
        self.counting[channel].to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMat2, CVec2};
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// A single-component-pair set with one diffusive L channel σ−.
    fn sigma_minus_diffusive() -> Unravelling {
        let sm = CMat2::sigma_minus();
        Unravelling::new(OperatorSet {
            hamiltonians: [CMat2::zero(); 2],
            l_channels: vec![[sm, sm]],
            d1: 1,
            r_channels: vec![],
            d2: 0,
        })
        .unwrap()
    }

    fn r_counting(r12: CMat2, r21: CMat2) -> Unravelling {
        let z = CMat2::zero();
        Unravelling::new(OperatorSet {
            hamiltonians: [z; 2],
            l_channels: vec![],
            d1: 0,
            r_channels: vec![[[z, r12], [r21, z]]],
            d2: 0,
        })
        .unwrap()
    }

    #[test]
    fn zero_operators_give_zero_coefficients() {
        let u = Unravelling::new(OperatorSet::hamiltonian_only([CMat2::zero(); 2])).unwrap();
        assert!(u.effective_k(0).is_zero() && u.effective_k(1).is_zero());
        let s = ComponentState::pair(CVec2::real(0.6, 0.0), CVec2::new(c(0.0, 0.8), c(0.0, 0.0)));
        assert_eq!(u.drift(&s), ComponentState::zero());
        assert_eq!(u.drift(&ComponentState::zero()), ComponentState::zero());
        assert_eq!(u.n_channels(), 0);
        assert_eq!(u.n_diffusions(), 0);
    }

    #[test]
    fn upsilon_l_examples() {
        let u = sigma_minus_diffusive();
        let s = ComponentState::pair(CVec2::real(H, 0.0), CVec2::real(0.0, H));
        assert_eq!(u.upsilon_l(0, &s), 0.0);
        let s = ComponentState::pair(CVec2::real(0.5, 0.5), CVec2::real(0.0, H));
        assert!((u.upsilon_l(0, &s) - 0.5).abs() < 1e-15);
        let s = ComponentState::pair(CVec2::new(c(0.0, 0.5), c(0.5, 0.0)), CVec2::real(0.0, H));
        assert!(u.upsilon_l(0, &s).abs() < 1e-15);
    }

    #[test]
    fn upsilon_r_examples() {
        let z = CMat2::zero();
        let none = r_counting(z, z);
        let s = ComponentState::pair(CVec2::real(1.0, 0.0), CVec2::real(0.0, 1.0));
        assert_eq!(none.upsilon_r(0, 1, &s), 0.0);

        let up = r_counting(CMat2::sigma_plus(), z);
        assert!((up.upsilon_r(0, 1, &s) - 2.0).abs() < 1e-15);
        let s = ComponentState::pair(CVec2::real(0.0, 1.0), CVec2::real(0.0, 1.0));
        assert_eq!(up.upsilon_r(0, 1, &s), 0.0);
    }

    #[test]
    fn intensity_examples() {
        let z = CMat2::zero();
        let down = r_counting(z, CMat2::sigma_minus() * 0.5f64.sqrt());
        let ch = ChannelId::RCounting { alpha: 0, k: 0 };
        let s = ComponentState::pair(CVec2::real(H, 0.0), CVec2::real(0.0, H));
        assert!((down.intensity(ch, &s) - 0.25).abs() < 1e-15);

        let thermal = r_counting(z, CMat2::identity() * 2.0f64.sqrt());
        let s = ComponentState::pair(CVec2::real(0.5, 0.5), CVec2::real(0.0, H));
        assert!((thermal.intensity(ch, &s) - 1.0).abs() < 1e-15);

        let s = ComponentState::pair(CVec2::zero(), CVec2::real(0.3, 0.9));
        assert_eq!(thermal.intensity(ch, &s), 0.0);
    }

    #[test]
    fn diffusion_coeff_examples() {
        let u = sigma_minus_diffusive();
        let ch = ChannelId::LDiffusive { alpha: 0 };
        let s = ComponentState::pair(CVec2::real(1.0, 0.0), CVec2::zero());
        let b = u.diffusion_coeff(ch, &s);
        assert_eq!(b.psi[0], CVec2::real(0.0, 1.0));
        assert_eq!(b.psi[1], CVec2::zero());

        let s = ComponentState::pair(CVec2::real(0.0, 1.0), CVec2::zero());
        assert_eq!(u.diffusion_coeff(ch, &s), ComponentState::zero());
    }

    #[test]
    fn jump_map_examples() {
        let z = CMat2::zero();
        let down = r_counting(z, CMat2::sigma_minus() * 0.5f64.sqrt());
        let ch = ChannelId::RCounting { alpha: 0, k: 0 };
        let s = ComponentState::pair(CVec2::real(H, H), CVec2::real(0.4, 0.1));
        let out = down.jump_map(ch, &s).unwrap();
        assert!(out.max_abs_diff(&ComponentState::pair(CVec2::zero(), CVec2::real(0.0, 1.0))) < 1e-15);

        let up = r_counting(CMat2::sigma_plus() * 0.3f64.sqrt(), z);
        let ch_up = ChannelId::RCounting { alpha: 0, k: 1 };
        let s = ComponentState::pair(CVec2::real(H, 0.0), CVec2::real(0.0, H));
        let out = up.jump_map(ch_up, &s).unwrap();
        assert!(out.max_abs_diff(&ComponentState::pair(CVec2::real(1.0, 0.0), CVec2::zero())) < 1e-15);

        let s = ComponentState::pair(CVec2::real(0.0, 1.0), CVec2::zero());
        assert!(matches!(down.jump_map(ch, &s), Err(Error::ZeroIntensity { .. })));
    }

    #[test]
    fn structurally_zero_channels_are_skipped() {
        let z = CMat2::zero();
        let down = r_counting(z, CMat2::sigma_minus());
        assert_eq!(down.counting_channels(), &[ChannelId::RCounting { alpha: 0, k: 0 }]);
        assert_eq!(down.channel_label(0), "N1^1");
    }

    #[test]
    fn validation_rejects_bad_sets() {
        let mut ops = OperatorSet::hamiltonian_only([CMat2::sigma_plus(), CMat2::zero()]);
        assert!(ops.validate().is_err());
        ops.hamiltonians[0] = CMat2::sigma_z();
        assert!(ops.validate().is_ok());
        ops.d1 = 1;
        assert!(ops.validate().is_err());
    }

    #[test]
    fn json_round_trip_and_shape_checks() {
        let sm = CMat2::sigma_minus();
        let ops = OperatorSet {
            hamiltonians: [CMat2::sigma_z(), CMat2::sigma_z() * 0.5],
            l_channels: vec![[sm, sm]],
            d1: 1,
            r_channels: vec![[[CMat2::zero(), CMat2::sigma_plus()], [sm, CMat2::zero()]]],
            d2: 0,
        };
        let text = ops.to_json();
        let back: OperatorSet = OperatorSet::from_json(&text).unwrap();
        assert_eq!(back, ops);

        let doc = r#"{"n": 3, "H": []}"#;
        assert!(OperatorSet::<2, 2>::from_json(doc).is_err());
        let doc = r#"{"n": 2, "H": [[[[1,0],[0,0]],[[0,0],[1,0]]], [[[0,0],[0,0]],[[0,0],[0,0]]]], "extra": 1}"#;
        assert!(OperatorSet::<2, 2>::from_json(doc).is_err());
        let doc = r#"{"n": 2, "H": [[[[1,0],[0,0]],[[0,0],[1,0]]], [[[0,0],[0,0]],[[0,0],[0,0]]]]}"#;
        let h_only = OperatorSet::<2, 2>::from_json(doc).unwrap();
        assert!(h_only.l_channels.is_empty() && h_only.r_channels.is_empty());
    }
}
