//! The two models of the space: bi-symmetric matrices `[[τ, z], [z, τ]]` with
//! `Im τ > |Im z|` (half-space model) and bi-symmetric `Z₀` with `I − Z₀Z̄₀ > 0`
//! (bounded model), together with the Cayley maps between them and the
//! bidisc coordinates `σ(Z₀) = (z₁ + z₂, z₁ − z₂)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{c64, Complex, Mat2C, Tolerance, I_UNIT};

/// Structural matrices shared by every model.
pub mod constants {
    use std::f64::consts::FRAC_1_SQRT_2;

    use crate::numkit::{c64, Complex, Mat2C, Mat4C, Mat4R};

    /// `p = (1/√2)[[1, −1], [1, 1]]`, the orthogonal matrix diagonalizing every
    /// bi-symmetric matrix.
    pub fn rotation_p() -> Mat2C {
        Mat2C::from_real([[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], [FRAC_1_SQRT_2, FRAC_1_SQRT_2]])
    }

    pub fn rotation_p_inv() -> Mat2C {
        rotation_p().transpose()
    }

    /// `q = [[0, 1], [1, 0]]`.
    pub fn swap_q() -> Mat2C {
        Mat2C::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    const P2: [[f64; 2]; 2] = [[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], [FRAC_1_SQRT_2, FRAC_1_SQRT_2]];
    const Q2: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
    const I2: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
    const Z2: [[f64; 2]; 2] = [[0.0, 0.0], [0.0, 0.0]];
    const NEG_I2: [[f64; 2]; 2] = [[-1.0, 0.0], [0.0, -1.0]];

    /// `P = diag(p, p)`.
    pub fn block_p() -> Mat4R {
        Mat4R::from_blocks(P2, Z2, Z2, P2)
    }

    /// `Q = diag(q, q)`; acts trivially on the half space.
    pub fn block_q() -> Mat4R {
        Mat4R::from_blocks(Q2, Z2, Z2, Q2)
    }

    /// `J = [[0, I], [−I, 0]]`.
    pub fn symplectic_j() -> Mat4R {
        Mat4R::from_blocks(Z2, I2, NEG_I2, Z2)
    }

    /// `R = [[−I, 0], [0, I]]`.
    pub fn sign_r() -> Mat4R {
        Mat4R::from_blocks(NEG_I2, Z2, Z2, I2)
    }

    /// `F = JR = [[0, I], [I, 0]]`.
    pub fn flip_f() -> Mat4R {
        Mat4R::from_blocks(Z2, I2, I2, Z2)
    }

    /// `L = [[iI, iI], [−I, I]]`; its action is the Cayley map from the disc
    /// model onto the half space.
    pub fn cayley_l() -> Mat4C {
        let i = Mat2C::scalar(c64(0.0, 1.0));
        let one = Mat2C::IDENTITY;
        Mat4C::from_blocks(i, i, -one, one)
    }

    /// `L⁻¹ = ½[[−iI, −I], [−iI, I]]`.
    pub fn cayley_l_inv() -> Mat4C {
        let mi = Mat2C::scalar(c64(0.0, -1.0));
        let one = Mat2C::IDENTITY;
        Mat4C::from_blocks(mi, -one, mi, one) * Complex::new(0.5, 0.0)
    }
}

/// Strict half-space membership: `Im τ − |Im z| > dom_eps`.
pub fn h_contains(tau: Complex, z: Complex, tol: &Tolerance) -> bool {
    tau.is_finite() && z.is_finite() && tau.im - z.im.abs() > tol.dom_eps
}

/// Strict disc membership: both bidisc coordinates inside `|w| < 1 − dom_eps`.
pub fn e_contains(z1: Complex, z2: Complex, tol: &Tolerance) -> bool {
    z1.is_finite() && z2.is_finite() && (z1 + z2).norm() < 1.0 - tol.dom_eps && (z1 - z2).norm() < 1.0 - tol.dom_eps
}

#[derive(Deserialize)]
struct RawHPoint {
    tau: Complex,
    z: Complex,
}

/// A point `[[τ, z], [z, τ]]` of the half-space model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHPoint")]
pub struct HPoint {
    tau: Complex,
    z: Complex,
}

impl TryFrom<RawHPoint> for HPoint {
    type Error = Error;
    fn try_from(raw: RawHPoint) -> Result<Self> {
        HPoint::new(raw.tau, raw.z, &Tolerance::default())
    }
}

impl HPoint {
    pub fn new(tau: Complex, z: Complex, tol: &Tolerance) -> Result<Self> {
        if !h_contains(tau, z, tol) {
            return Err(Error::DomainViolation(format!("(tau, z) = ({tau}, {z}) violates Im tau > |Im z|")));
        }
        Ok(HPoint { tau, z })
    }

    /// The base point `iI`.
    pub fn base() -> Self {
        HPoint { tau: I_UNIT, z: Complex::ZERO }
    }

    /// `i·s·I` for `s > 0`.
    pub fn scaled_base(s: f64, tol: &Tolerance) -> Result<Self> {
        HPoint::new(c64(0.0, s), Complex::ZERO, tol)
    }

    /// Build from the two upper-half-plane factors `τ + z` and `τ − z`.
    pub fn from_factors(plus: Complex, minus: Complex, tol: &Tolerance) -> Result<Self> {
        HPoint::new((plus + minus) * 0.5, (plus - minus) * 0.5, tol)
    }

    /// Read a point off a (numerically) bi-symmetric matrix by averaging the
    /// mirrored entries.
    pub fn from_matrix(m: &Mat2C, tol: &Tolerance) -> Result<Self> {
        let tau = (m.0[0][0] + m.0[1][1]) * 0.5;
        let z = (m.0[0][1] + m.0[1][0]) * 0.5;
        HPoint::new(tau, z, tol)
    }

    pub fn tau(&self) -> Complex {
        self.tau
    }

    pub fn z(&self) -> Complex {
        self.z
    }

    pub fn as_matrix(&self) -> Mat2C {
        Mat2C::bisymmetric(self.tau, self.z)
    }

    /// `X = Re Z`.
    pub fn re(&self) -> Mat2C {
        self.as_matrix().re()
    }

    /// `Y = Im Z`.
    pub fn im(&self) -> Mat2C {
        self.as_matrix().im()
    }

    /// Upper-half-plane factors `(τ + z, τ − z)`; the eigenvalues of `Z`.
    pub fn factors(&self) -> (Complex, Complex) {
        (self.tau + self.z, self.tau - self.z)
    }

    /// Largest coordinate difference to another point.
    pub fn max_diff(&self, other: &HPoint) -> f64 {
        (self.tau - other.tau).norm().max((self.z - other.z).norm())
    }
}

#[derive(Deserialize)]
struct RawEPoint {
    z1: Complex,
    z2: Complex,
}

/// A point `[[z₁, z₂], [z₂, z₁]]` of the bounded model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEPoint")]
pub struct EPoint {
    z1: Complex,
    z2: Complex,
}

impl TryFrom<RawEPoint> for EPoint {
    type Error = Error;
    fn try_from(raw: RawEPoint) -> Result<Self> {
        EPoint::new(raw.z1, raw.z2, &Tolerance::default())
    }
}

impl EPoint {
    pub fn new(z1: Complex, z2: Complex, tol: &Tolerance) -> Result<Self> {
        if !e_contains(z1, z2, tol) {
            return Err(Error::DomainViolation(format!("(z1, z2) = ({z1}, {z2}) violates I - Z0 conj(Z0) > 0")));
        }
        Ok(EPoint { z1, z2 })
    }

    pub fn origin() -> Self {
        EPoint { z1: Complex::ZERO, z2: Complex::ZERO }
    }

    pub fn from_matrix(m: &Mat2C, tol: &Tolerance) -> Result<Self> {
        let z1 = (m.0[0][0] + m.0[1][1]) * 0.5;
        let z2 = (m.0[0][1] + m.0[1][0]) * 0.5;
        EPoint::new(z1, z2, tol)
    }

    pub fn z1(&self) -> Complex {
        self.z1
    }

    pub fn z2(&self) -> Complex {
        self.z2
    }

    pub fn as_matrix(&self) -> Mat2C {
        Mat2C::bisymmetric(self.z1, self.z2)
    }

    pub fn max_diff(&self, other: &EPoint) -> f64 {
        (self.z1 - other.z1).norm().max((self.z2 - other.z2).norm())
    }
}

/// A point of the bidisc `D × D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidiscPoint {
    w1: Complex,
    w2: Complex,
}

impl BidiscPoint {
    pub fn new(w1: Complex, w2: Complex, tol: &Tolerance) -> Result<Self> {
        let bound = 1.0 - tol.dom_eps;
        if !(w1.norm() < bound && w2.norm() < bound) {
            return Err(Error::DomainViolation(format!("bidisc coordinates ({w1}, {w2}) must have modulus below 1")));
        }
        Ok(BidiscPoint { w1, w2 })
    }

    pub fn w1(&self) -> Complex {
        self.w1
    }

    pub fn w2(&self) -> Complex {
        self.w2
    }
}

/// `ψ(Z) = (Z − iI)(Z + iI)⁻¹`.
pub fn cayley_to_disc(z: &HPoint, tol: &Tolerance) -> Result<EPoint> {
    if !h_contains(z.tau, z.z, tol) {
        return Err(Error::DomainViolation("point is not in the half space".into()));
    }
    let m = z.as_matrix();
    let i = Mat2C::scalar(I_UNIT);
    let w = (m - i) * (m + i).inverse(tol)?;
    EPoint::from_matrix(&w, tol)
}

/// `φ(Z₀) = i(I + Z₀)(I − Z₀)⁻¹`.
pub fn cayley_to_halfspace(z0: &EPoint, tol: &Tolerance) -> Result<HPoint> {
    if !e_contains(z0.z1, z0.z2, tol) {
        return Err(Error::DomainViolation("point is not in the bounded model".into()));
    }
    let m = z0.as_matrix();
    let one = Mat2C::IDENTITY;
    let w = (one + m) * (one - m).inverse(tol)? * I_UNIT;
    HPoint::from_matrix(&w, tol)
}

/// Bidisc coordinates `(z₁ + z₂, z₁ − z₂)`.
pub fn sigma(z0: &EPoint) -> BidiscPoint {
    BidiscPoint { w1: z0.z1 + z0.z2, w2: z0.z1 - z0.z2 }
}

pub fn sigma_inv(w: &BidiscPoint) -> EPoint {
    EPoint { z1: (w.w1 + w.w2) * 0.5, z2: (w.w1 - w.w2) * 0.5 }
}
