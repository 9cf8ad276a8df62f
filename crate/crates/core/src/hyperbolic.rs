//! Poincaré upper half plane: Möbius maps, the λ-invariant of a pair of points,
//! and hyperbolic distance. Used as an independent check of everything that
//! factors through `τ ± z`.

use crate::error::{Error, Result};
use crate::group::Sl2Matrix;
use crate::numkit::{c64, Complex, Tolerance};

/// A point `x + iy` with `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64, tol: &Tolerance) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && y > tol.dom_eps) {
            return Err(Error::DomainViolation(format!("{x} + {y}i is not in the upper half plane")));
        }
        Ok(HalfPlanePoint { x, y })
    }

    pub fn from_complex(w: Complex, tol: &Tolerance) -> Result<Self> {
        HalfPlanePoint::new(w.re, w.im, tol)
    }

    pub fn i() -> Self {
        HalfPlanePoint { x: 0.0, y: 1.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(&self) -> Complex {
        c64(self.x, self.y)
    }
}

/// `(az + b)/(cz + d)`, with the imaginary part taken as `y/|cz + d|²`.
pub fn mobius(m: &Sl2Matrix, z: &HalfPlanePoint) -> HalfPlanePoint {
    let w = z.to_complex();
    let den = w * m.c() + m.d();
    let num = w * m.a() + m.b();
    let q = den.norm_sqr();
    HalfPlanePoint { x: (num * den.conj()).re / q, y: z.y / q }
}

/// `diag(μ^{1/2}, μ^{−1/2}) · rot(θ) · [[y^{−1/2}, −x·y^{−1/2}], [0, y^{1/2}]]`,
/// which sends `z` to `μi`.
pub fn map_to_imaginary(z: &HalfPlanePoint, mu: f64, theta: f64) -> Result<Sl2Matrix> {
    if !(mu > 0.0) {
        return Err(Error::NonPositiveMu(mu));
    }
    let sm = mu.sqrt();
    let sy = z.y.sqrt();
    let (s, c) = theta.sin_cos();
    // rot(θ) · [[1/sy, −x/sy], [0, sy]]
    let r = [[c / sy, -c * z.x / sy + s * sy], [-s / sy, s * z.x / sy + c * sy]];
    Ok(Sl2Matrix::from_entries_unchecked(sm * r[0][0], sm * r[0][1], r[1][0] / sm, r[1][1] / sm))
}

/// The root `λ ≥ 1` of `λ + λ⁻¹ = y₁/y₂ + y₂/y₁ + (x₁ − x₂)²/(y₁y₂)`.
pub fn pair_lambda(z1: &HalfPlanePoint, z2: &HalfPlanePoint) -> f64 {
    let dx = z1.x - z2.x;
    let r = z1.y / z2.y + z2.y / z1.y + dx * dx / (z1.y * z2.y);
    0.5 * (r + (r * r - 4.0).max(0.0).sqrt())
}

pub fn hyp_distance(z1: &HalfPlanePoint, z2: &HalfPlanePoint) -> f64 {
    pair_lambda(z1, z2).ln()
}

/// Residual of `λ² + λ⁻² = (l₂/l₁)² + (l₁/l₂)² + (l₁μ₂ − l₂μ₁)²`.
pub fn iwasawa_lambda_residual(l1: f64, l2: f64, mu1: f64, mu2: f64, lam: f64) -> Result<f64> {
    if l1 == 0.0 || l2 == 0.0 || lam == 0.0 {
        return Err(Error::ZeroParameter);
    }
    let lhs = lam * lam + (lam * lam).recip();
    let cross = l1 * mu2 - l2 * mu1;
    let rhs = (l2 / l1).powi(2) + (l1 / l2).powi(2) + cross * cross;
    Ok((lhs - rhs).abs())
}
