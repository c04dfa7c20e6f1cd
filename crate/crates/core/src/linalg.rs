//! Small dense complex linear algebra.
//!
//! Vectors and matrices have a compile-time dimension `D`; the shipped
//! two-band model uses `D = 2`. Basis convention for `D = 2`: index 0 is the
//! excited state |1⟩, index 1 is the ground state |2⟩, so that
//! σ− = ((0, 0), (1, 0)) in row-major order.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Norms at or below this are treated as exactly zero.
pub const ZERO_NORM_THRESHOLD: f64 = 1e-30;

/// Vector-space operations needed by the integrators.
pub trait StateVector: Clone + Send + Sync {
    /// `self += alpha * x`
    fn axpy(&mut self, alpha: f64, x: &Self);
    fn norm_sqr(&self) -> f64;
    fn scale_mut(&mut self, factor: f64);
    fn is_finite(&self) -> bool;
}

impl StateVector for f64 {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        *self += alpha * x;
    }
    fn norm_sqr(&self) -> f64 {
        self * self
    }
    fn scale_mut(&mut self, factor: f64) {
        *self *= factor;
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

// ---------------------------------------------------------------------------
// Vectors

/// A complex column vector of dimension `D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec<const D: usize>(pub [C64; D]);

pub type CVec2 = CVec<2>;

impl<const D: usize> CVec<D> {
    pub const fn zero() -> Self {
        Self([ZERO; D])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = ONE;
        v
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        let mut acc = ZERO;
        for i in 0..D {
            acc += self.0[i].conj() * other.0[i];
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = *self;
        out.0.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// |self⟩⟨other|
    pub fn outer(&self, other: &Self) -> CMat<D> {
        let mut m = CMat::zero();
        for i in 0..D {
            for j in 0..D {
                m.0[i][j] = self.0[i] * other.0[j].conj();
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..D)
            .map(|i| (self.0[i] - other.0[i]).norm())
            .fold(0.0, f64::max)
    }
}

impl CVec2 {
    pub const fn new(a: C64, b: C64) -> Self {
        Self([a, b])
    }

    pub const fn real(a: f64, b: f64) -> Self {
        Self([C64::new(a, 0.0), C64::new(b, 0.0)])
    }
}

impl<const D: usize> Default for CVec<D> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const D: usize> Add for CVec<D> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const D: usize> AddAssign for CVec<D> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..D {
            self.0[i] += rhs.0[i];
        }
    }
}

impl<const D: usize> Sub for CVec<D> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<const D: usize> SubAssign for CVec<D> {
    fn sub_assign(&mut self, rhs: Self) {
        for i in 0..D {
            self.0[i] -= rhs.0[i];
        }
    }
}

impl<const D: usize> Neg for CVec<D> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl<const D: usize> Mul<f64> for CVec<D> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        self.0.iter_mut().for_each(|z| *z *= rhs);
        self
    }
}

impl<const D: usize> Mul<C64> for CVec<D> {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

/// ⟨u|v⟩
pub fn inner<const D: usize>(u: &CVec<D>, v: &CVec<D>) -> C64 {
    u.inner(v)
}

/// Matrix-vector product `m v`.
pub fn apply<const D: usize>(m: &CMat<D>, v: &CVec<D>) -> CVec<D> {
    m.apply(v)
}

// ---------------------------------------------------------------------------
// Matrices

/// A complex `D × D` matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<const D: usize>(pub [[C64; D]; D]);

pub type CMat2 = CMat<2>;

impl<const D: usize> CMat<D> {
    pub const fn zero() -> Self {
        Self([[ZERO; D]; D])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..D {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn diag(d: [C64; D]) -> Self {
        let mut m = Self::zero();
        for i in 0..D {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..D {
            for j in 0..D {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn apply(&self, v: &CVec<D>) -> CVec<D> {
        let mut out = CVec::zero();
        for i in 0..D {
            let mut acc = ZERO;
            for j in 0..D {
                acc += self.0[i][j] * v.0[j];
            }
            out.0[i] = acc;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..D).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= factor);
        m
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `{self, other}`
    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// `self ρ self*`
    pub fn sandwich(&self, rho: &Self) -> Self {
        *self * *rho * self.adjoint()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|z| *z == ZERO)
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Hermitian part `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()) * 0.5
    }
}

impl CMat2 {
    pub const fn new(rows: [[C64; 2]; 2]) -> Self {
        Self(rows)
    }

    pub const fn real(rows: [[f64; 2]; 2]) -> Self {
        Self([
            [C64::new(rows[0][0], 0.0), C64::new(rows[0][1], 0.0)],
            [C64::new(rows[1][0], 0.0), C64::new(rows[1][1], 0.0)],
        ])
    }

    /// Lowering operator σ− = |2⟩⟨1|.
    pub const fn sigma_minus() -> Self {
        Self::real([[0.0, 0.0], [1.0, 0.0]])
    }

    /// Raising operator σ+ = |1⟩⟨2|.
    pub const fn sigma_plus() -> Self {
        Self::real([[0.0, 1.0], [0.0, 0.0]])
    }

    pub const fn sigma_z() -> Self {
        Self::real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// P+ = σ+σ−, projector on the excited state.
    pub const fn proj_excited() -> Self {
        Self::real([[1.0, 0.0], [0.0, 0.0]])
    }

    /// P− = σ−σ+, projector on the ground state.
    pub const fn proj_ground() -> Self {
        Self::real([[0.0, 0.0], [0.0, 1.0]])
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let h = self.hermitian_part();
        let a = h.0[0][0].re;
        let d = h.0[1][1].re;
        let b = h.0[0][1].norm();
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mid - rad, mid + rad]
    }

    /// Trace norm of the Hermitian part.
    pub fn trace_norm(&self) -> f64 {
        let [l0, l1] = self.hermitian_eigenvalues();
        l0.abs() + l1.abs()
    }
}

impl<const D: usize> Default for CMat<D> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const D: usize> Add for CMat<D> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const D: usize> AddAssign for CMat<D> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..D {
            for j in 0..D {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl<const D: usize> Sub for CMat<D> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<const D: usize> SubAssign for CMat<D> {
    fn sub_assign(&mut self, rhs: Self) {
        for i in 0..D {
            for j in 0..D {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
    }
}

impl<const D: usize> Mul for CMat<D> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..D {
            for k in 0..D {
                let a = self.0[i][k];
                for j in 0..D {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const D: usize> Mul<CVec<D>> for CMat<D> {
    type Output = CVec<D>;
    fn mul(self, rhs: CVec<D>) -> CVec<D> {
        self.apply(&rhs)
    }
}

impl<const D: usize> Mul<f64> for CMat<D> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        self.0.iter_mut().flatten().for_each(|z| *z *= rhs);
        self
    }
}

impl<const D: usize> Mul<C64> for CMat<D> {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

// ---------------------------------------------------------------------------
// Serialization: complex numbers are `[re, im]` pairs.

impl<const D: usize> Serialize for CVec<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de, const D: usize> Deserialize<'de> for CVec<D> {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> std::result::Result<Self, De::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        if pairs.len() != D {
            return Err(De::Error::custom(format!(
                "expected a vector of {D} [re, im] pairs, got {}",
                pairs.len()
            )));
        }
        let mut v = CVec::zero();
        for (z, [re, im]) in v.0.iter_mut().zip(pairs) {
            *z = C64::new(re, im);
        }
        Ok(v)
    }
}

impl<const D: usize> Serialize for CMat<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .0
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de, const D: usize> Deserialize<'de> for CMat<D> {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> std::result::Result<Self, De::Error> {
        let rows = Vec::<CVec<D>>::deserialize(deserializer)?;
        if rows.len() != D {
            return Err(De::Error::custom(format!(
                "expected a {D}x{D} matrix, got {} rows",
                rows.len()
            )));
        }
        let mut m = CMat::zero();
        for (dst, row) in m.0.iter_mut().zip(rows) {
            *dst = row.0;
        }
        Ok(m)
    }
}

// ---------------------------------------------------------------------------
// Composite states

/// The a posteriori state: one vector per bath component.
///
/// For the two-band model `N = 2`, `D = 2` and the components are
/// `(ψ1, ψ2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ComponentState<const N: usize = 2, const D: usize = 2> {
    #[serde(with = "component_array")]
    pub psi: [CVec<D>; N],
}

impl<const N: usize, const D: usize> ComponentState<N, D> {
    pub const fn new(psi: [CVec<D>; N]) -> Self {
        Self { psi }
    }

    pub const fn zero() -> Self {
        Self {
            psi: [CVec::zero(); N],
        }
    }

    /// ‖ψ1‖² + … + ‖ψn‖²
    pub fn total_norm2(&self) -> f64 {
        self.psi.iter().map(CVec::norm_sqr).sum()
    }

    /// Rescales every component by the same real factor so that the total
    /// norm is one.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.total_norm2();
        if !(n2 > ZERO_NORM_THRESHOLD) {
            return Err(Error::ZeroNorm(n2));
        }
        let mut out = *self;
        out.scale_mut(n2.sqrt().recip());
        Ok(out)
    }

    /// The product density ( |ψ1⟩⟨ψ1|, …, |ψn⟩⟨ψn| ).
    pub fn density(&self) -> DensityVector<N, D> {
        let mut eta = [CMat::zero(); N];
        for (e, p) in eta.iter_mut().zip(&self.psi) {
            *e = p.outer(p);
        }
        DensityVector { eta }
    }

    /// Multiplies every component by the same complex factor.
    pub fn scale_complex(&self, factor: C64) -> Self {
        let mut out = *self;
        out.psi.iter_mut().for_each(|p| *p = p.scale(factor));
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.psi
            .iter()
            .zip(&other.psi)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

impl ComponentState<2, 2> {
    pub const fn pair(psi1: CVec2, psi2: CVec2) -> Self {
        Self { psi: [psi1, psi2] }
    }
}

impl<const N: usize, const D: usize> Default for ComponentState<N, D> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize, const D: usize> StateVector for ComponentState<N, D> {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (p, q) in self.psi.iter_mut().zip(&x.psi) {
            for i in 0..D {
                p.0[i] += q.0[i] * alpha;
            }
        }
    }

    fn norm_sqr(&self) -> f64 {
        self.total_norm2()
    }

    fn scale_mut(&mut self, factor: f64) {
        for p in &mut self.psi {
            p.0.iter_mut().for_each(|z| *z *= factor);
        }
    }

    fn is_finite(&self) -> bool {
        self.psi.iter().all(CVec::is_finite)
    }
}

/// The a priori state: one unnormalized density matrix per bath component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DensityVector<const N: usize = 2, const D: usize = 2> {
    #[serde(with = "component_array")]
    pub eta: [CMat<D>; N],
}

/// `(η1, η2)` for the two-band model.
pub type DensityPair = DensityVector<2, 2>;

impl<const N: usize, const D: usize> DensityVector<N, D> {
    pub const fn new(eta: [CMat<D>; N]) -> Self {
        Self { eta }
    }

    pub const fn zero() -> Self {
        Self {
            eta: [CMat::zero(); N],
        }
    }

    /// tr(η1) + … + tr(ηn)
    pub fn total_trace(&self) -> C64 {
        self.eta.iter().map(CMat::trace).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.eta.iter().all(|e| e.is_hermitian(tol))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.eta
            .iter()
            .zip(&other.eta)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

impl<const N: usize> DensityVector<N, 2> {
    /// Σ_i tr(P+ η_i)
    pub fn excited_population(&self) -> f64 {
        self.eta.iter().map(|e| e.0[0][0].re).sum()
    }

    /// Smallest eigenvalue of the block-diagonal operator η1 ⊕ … ⊕ ηn.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eta
            .iter()
            .map(|e| e.hermitian_eigenvalues()[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// ½ ‖η ⊕ − η' ⊕‖₁ over the block-diagonal operators.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        0.5 * self
            .eta
            .iter()
            .zip(&other.eta)
            .map(|(a, b)| (*a - *b).trace_norm())
            .sum::<f64>()
    }
}

impl<const N: usize, const D: usize> Default for DensityVector<N, D> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize, const D: usize> StateVector for DensityVector<N, D> {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (e, f) in self.eta.iter_mut().zip(&x.eta) {
            *e += *f * alpha;
        }
    }

    fn norm_sqr(&self) -> f64 {
        self.eta.iter().map(CMat::frobenius_sqr).sum()
    }

    fn scale_mut(&mut self, factor: f64) {
        for e in &mut self.eta {
            *e = *e * factor;
        }
    }

    fn is_finite(&self) -> bool {
        self.eta.iter().all(CMat::is_finite)
    }
}

/// serde helper for `[T; N]` with a const-generic `N`.
mod component_array {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S, T, const N: usize>(
        items: &[T; N],
        serializer: S,
    ) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: Serialize,
    {
        items.as_slice().serialize(serializer)
    }

    pub fn deserialize<'de, De, T, const N: usize>(deserializer: De) -> Result<[T; N], De::Error>
    where
        De: Deserializer<'de>,
        T: Deserialize<'de>,
    {
        let items = Vec::<T>::deserialize(deserializer)?;
        let len = items.len();
        items
            .try_into()
            .map_err(|_| De::Error::custom(format!("expected {N} components, got {len}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const I: C64 = C64::new(0.0, 1.0);

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(&CVec2::real(1.0, 0.0), &CVec2::real(1.0, 0.0)), ONE);
        let v = CVec2::new(I, ZERO);
        assert_eq!(inner(&v, &v), ONE);
        assert_eq!(inner(&CVec2::real(0.0, 1.0), &CVec2::real(1.0, 0.0)), ZERO);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let u = CVec2::new(c(0.3, 0.2), c(-0.1, 0.5));
        let v = CVec2::new(c(1.0, -0.4), c(0.2, 0.7));
        assert_abs_diff_eq!((inner(&u.scale(I), &v) - inner(&u, &v) * -I).norm(), 0.0);
    }

    #[test]
    fn apply_examples() {
        let (a, b) = (c(0.3, -0.2), c(0.6, 0.1));
        let v = CVec2::new(a, b);
        assert_eq!(apply(&CMat2::sigma_minus(), &v), CVec2::new(ZERO, a));
        assert_eq!(
            apply(&CMat2::sigma_plus(), &CVec2::real(0.0, 1.0)),
            CVec2::real(1.0, 0.0)
        );
        assert_eq!(apply(&CMat2::proj_excited(), &v), CVec2::new(a, ZERO));
    }

    #[test]
    fn pauli_algebra() {
        let sp = CMat2::sigma_plus();
        let sm = CMat2::sigma_minus();
        assert_eq!(sp * sm, CMat2::proj_excited());
        assert_eq!(sm * sp, CMat2::proj_ground());
        assert_eq!(sm.adjoint(), sp);
        assert_eq!(sm.sandwich(&CMat2::proj_excited()), CMat2::proj_ground());
        assert!(CMat2::sigma_z().commutator(&CMat2::proj_ground()).is_zero());
    }

    #[test]
    fn normalize_examples() {
        let s = ComponentState::pair(CVec2::real(2.0, 0.0), CVec2::zero());
        assert_eq!(
            s.normalized().unwrap(),
            ComponentState::pair(CVec2::real(1.0, 0.0), CVec2::zero())
        );

        let s = ComponentState::pair(CVec2::real(1.0, 0.0), CVec2::real(0.0, 1.0));
        let n = s.normalized().unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(n.max_abs_diff(&ComponentState::pair(CVec2::real(h, 0.0), CVec2::real(0.0, h))) < 1e-15);

        assert!(matches!(
            ComponentState::<2, 2>::zero().normalized(),
            Err(Error::ZeroNorm(_))
        ));
    }

    #[test]
    fn hermitian_eigenvalues_of_diagonal_and_offdiagonal() {
        let m = CMat2::real([[0.2, 0.0], [0.0, -0.7]]);
        let [lo, hi] = m.hermitian_eigenvalues();
        assert_abs_diff_eq!(lo, -0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 0.2, epsilon = 1e-15);
        let x = CMat2::real([[0.0, 1.0], [1.0, 0.0]]);
        let [a, b] = x.hermitian_eigenvalues();
        assert_abs_diff_eq!(a, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn complex_serializes_as_pairs() {
        let v = CVec2::new(c(1.0, -2.0), c(0.5, 0.0));
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "[[1.0,-2.0],[0.5,0.0]]");
        let back: CVec2 = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<CVec2>("[[1.0,0.0]]").is_err());

        let m: CMat2 = serde_json::from_str("[[[0,0],[1,0]],[[0,0],[0,0]]]").unwrap();
        assert_eq!(m, CMat2::sigma_plus());
    }

    /// exp(A) for skew-Hermitian A by scaling and squaring a Taylor series.
    fn expm(a: CMat2) -> CMat2 {
        let scaled = a * (1.0 / 1024.0);
        let mut term = CMat2::identity();
        let mut sum = CMat2::identity();
        for k in 1..20 {
            term = term * scaled * (1.0 / k as f64);
            sum += term;
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        sum
    }

    fn arb_c64() -> impl Strategy<Value = C64> {
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
    }

    fn arb_vec() -> impl Strategy<Value = CVec2> {
        (arb_c64(), arb_c64()).prop_map(|(a, b)| CVec2::new(a, b))
    }

    proptest! {
        #[test]
        fn inner_self_is_real_nonnegative(u in arb_vec()) {
            let z = inner(&u, &u);
            prop_assert!(z.im.abs() <= 1e-15);
            prop_assert!(z.re >= 0.0);
        }

        #[test]
        fn unitary_preserves_norm(v in arb_vec(), a in arb_c64(), d in -3.0..3.0f64, e in -3.0..3.0f64) {
            // A = i·H with H Hermitian is skew-Hermitian.
            let h = CMat2::new([[C64::new(d, 0.0), a], [a.conj(), C64::new(e, 0.0)]]);
            let u = expm(h * I);
            let w = apply(&u, &v);
            prop_assert!((w.norm_sqr().sqrt() - v.norm_sqr().sqrt()).abs() <= 1e-10 * (1.0 + v.norm_sqr()));
        }

        #[test]
        fn normalize_is_idempotent(a in arb_vec(), b in arb_vec()) {
            let s = ComponentState::pair(a, b);
            prop_assume!(s.total_norm2() > 1e-6);
            let once = s.normalized().unwrap();
            let twice = once.normalized().unwrap();
            prop_assert!((once.total_norm2() - 1.0).abs() <= 1e-12);
            prop_assert!(once.max_abs_diff(&twice) <= 1e-12);
        }

        #[test]
        fn adjoint_is_involution(a in arb_c64(), b in arb_c64(), c in arb_c64(), d in arb_c64()) {
            let m = CMat2::new([[a, b], [c, d]]);
            prop_assert_eq!(m.adjoint().adjoint(), m);
        }
    }
}
