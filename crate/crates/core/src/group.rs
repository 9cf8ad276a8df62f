//! The motion group: real symplectic 4×4 matrices that commute or anticommute
//! with `Q`, their action on the half space, the factorization into two SL₂
//! matrices, stabilizers, transports and the reduction of point pairs.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::domain::constants::{block_q, cayley_l, cayley_l_inv, symplectic_j};
use crate::domain::{cayley_to_disc, sigma, EPoint, HPoint};
use crate::error::{Error, Result};
use crate::geometry::distance;
use crate::numkit::{c64, Complex, Mat2C, Mat4C, Mat4R, Tolerance, I_UNIT};

/// Sign character `ε`: whether a motion commutes (`+1`) or anticommutes
/// (`−1`) with `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = String;
    fn try_from(v: i64) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be 1 or -1, got {v}")),
        }
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", i64::from(*self))
    }
}

#[derive(Deserialize)]
struct RawMotion {
    m: Mat4R,
    eps: Sign,
}

/// An element of the motion group together with its sign character.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMotion")]
pub struct MotionMatrix {
    m: Mat4R,
    eps: Sign,
}

impl TryFrom<RawMotion> for MotionMatrix {
    type Error = Error;
    fn try_from(raw: RawMotion) -> Result<Self> {
        let found = classify(&raw.m, &Tolerance::default())?;
        if found.eps != raw.eps {
            return Err(Error::DomainViolation(format!(
                "declared eps = {} but the matrix has eps = {}",
                raw.eps, found.eps
            )));
        }
        Ok(found)
    }
}

impl MotionMatrix {
    pub fn identity() -> Self {
        MotionMatrix { m: Mat4R::identity(), eps: Sign::Plus }
    }

    pub fn matrix(&self) -> Mat4R {
        self.m
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    /// The 2×2 blocks `(A, B, C, D)`.
    pub fn blocks(&self) -> (Mat2C, Mat2C, Mat2C, Mat2C) {
        (self.m.block(0, 0), self.m.block(0, 1), self.m.block(1, 0), self.m.block(1, 1))
    }

    /// `M⁻¹ = −J ᵗM J`.
    pub fn inverse(&self) -> Self {
        let j = symplectic_j();
        MotionMatrix { m: -(j * self.m.transpose() * j), eps: self.eps }
    }

    /// `−M`, which acts exactly as `M`.
    pub fn negated(&self) -> Self {
        MotionMatrix { m: -self.m, eps: self.eps }
    }

    /// Symplectic residual `‖ᵗMJM − J‖`.
    pub fn symplectic_residual(&self) -> f64 {
        symplectic_residual(&self.m)
    }
}

impl Mul for MotionMatrix {
    type Output = MotionMatrix;
    fn mul(self, rhs: MotionMatrix) -> MotionMatrix {
        MotionMatrix { m: self.m * rhs.m, eps: self.eps * rhs.eps }
    }
}

fn symplectic_residual(m: &Mat4R) -> f64 {
    let j = symplectic_j();
    (m.transpose() * j * *m - j).max_abs()
}

/// Detect membership in the motion group and the sign character.
pub fn classify(m: &Mat4R, tol: &Tolerance) -> Result<MotionMatrix> {
    if !m.is_finite() {
        return Err(Error::NotSymplectic { residual: f64::INFINITY });
    }
    let residual = symplectic_residual(m);
    if residual > tol.abs_eps {
        return Err(Error::NotSymplectic { residual });
    }
    let q = block_q();
    let commute = (*m * q - q * *m).max_abs();
    let anticommute = (*m * q + q * *m).max_abs();
    if commute.min(anticommute) > tol.abs_eps {
        return Err(Error::NotInHatGroup { commute, anticommute });
    }
    let eps = if commute <= anticommute { Sign::Plus } else { Sign::Minus };
    Ok(MotionMatrix { m: *m, eps })
}

/// `M⟨Z⟩ = (AZ + B)(CZ + D)⁻¹`.
pub fn apply(m: &MotionMatrix, z: &HPoint, tol: &Tolerance) -> Result<HPoint> {
    let (a, b, c, d) = m.blocks();
    let zm = z.as_matrix();
    let den = (c * zm + d).inverse(tol)?;
    let w = (a * zm + b) * den;
    HPoint::from_matrix(&w, tol)
        .map_err(|_| Error::NumericalBreakdown("image of the action left the half space".into()))
}

/// A real 2×2 matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSl2")]
pub struct Sl2Matrix {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Deserialize)]
struct RawSl2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<RawSl2> for Sl2Matrix {
    type Error = Error;
    fn try_from(r: RawSl2) -> Result<Self> {
        Sl2Matrix::new(r.a, r.b, r.c, r.d, &Tolerance::default())
    }
}

impl Sl2Matrix {
    pub fn new(a: f64, b: f64, c: f64, d: f64, tol: &Tolerance) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > tol.abs_eps {
            return Err(Error::DomainViolation(format!("SL2 matrix has determinant {det}")));
        }
        Ok(Sl2Matrix { a, b, c, d })
    }

    /// Construct without checking the determinant; the caller guarantees it.
    pub fn from_entries_unchecked(a: f64, b: f64, c: f64, d: f64) -> Self {
        Sl2Matrix { a, b, c, d }
    }

    pub fn identity() -> Self {
        Sl2Matrix { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Sl2Matrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn max_diff(&self, other: &Sl2Matrix) -> f64 {
        [self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d]
            .iter()
            .fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl Mul for Sl2Matrix {
    type Output = Sl2Matrix;
    fn mul(self, r: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

/// Factor a motion into the pair `(M₁, M₂)` acting on `τ + z` and `τ − z`.
pub fn split(m: &MotionMatrix, tol: &Tolerance) -> Result<(Sl2Matrix, Sl2Matrix)> {
    let e = m.eps.value();
    let mut pattern = 0.0f64;
    let mut sums = [0.0; 4];
    let mut diffs = [0.0; 4];
    for (k, (br, bc)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        let x = m.m.block_real(br, bc);
        pattern = pattern.max((x[1][0] - e * x[0][1]).abs()).max((x[1][1] - e * x[0][0]).abs());
        sums[k] = x[0][0] + x[0][1];
        diffs[k] = x[0][0] - x[0][1];
    }
    if pattern > tol.abs_eps {
        return Err(Error::MalformedBlocks { residual: pattern });
    }
    let make = |v: [f64; 4]| {
        Sl2Matrix::new(v[0], v[1], v[2], v[3], tol)
            .map_err(|_| Error::MalformedBlocks { residual: (v[0] * v[3] - v[1] * v[2] - 1.0).abs() })
    };
    Ok((make(sums)?, make(diffs)?))
}

/// Inverse of [`split`]: blocks `X = [[x₁, x₂], [εx₂, εx₁]]` with
/// `x₁ = (m₁ + m₂)/2`, `x₂ = (m₁ − m₂)/2` entrywise.
pub fn assemble(m1: &Sl2Matrix, m2: &Sl2Matrix, eps: Sign) -> MotionMatrix {
    let e = eps.value();
    let block = |u: f64, v: f64| {
        let x1 = 0.5 * (u + v);
        let x2 = 0.5 * (u - v);
        [[x1, x2], [e * x2, e * x1]]
    };
    let m = Mat4R::from_blocks(block(m1.a, m2.a), block(m1.b, m2.b), block(m1.c, m2.c), block(m1.d, m2.d));
    MotionMatrix { m, eps }
}

/// Unit-modulus parameters of a stabilizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizerParams {
    xi1: Complex,
    xi2: Complex,
    eps: Sign,
}

impl StabilizerParams {
    pub fn new(xi1: Complex, xi2: Complex, eps: Sign, tol: &Tolerance) -> Result<Self> {
        let (n1, n2) = (xi1.norm(), xi2.norm());
        if !((n1 - 1.0).abs() <= tol.abs_eps && (n2 - 1.0).abs() <= tol.abs_eps) {
            return Err(Error::UnitModulusViolation { xi1: n1, xi2: n2 });
        }
        Ok(StabilizerParams { xi1, xi2, eps })
    }

    /// Parameters `(e^{iα}, e^{iβ})`.
    pub fn from_angles(alpha: f64, beta: f64, eps: Sign) -> Self {
        StabilizerParams { xi1: Complex::from_polar(1.0, alpha), xi2: Complex::from_polar(1.0, beta), eps }
    }

    pub fn xi1(&self) -> Complex {
        self.xi1
    }
    pub fn xi2(&self) -> Complex {
        self.xi2
    }
    pub fn eps(&self) -> Sign {
        self.eps
    }
}

/// A motion of the bounded model, `M₀ = [[A₀, B₀], [B̄₀, Ā₀]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscMotion {
    #[serde(rename = "A0")]
    a0: Mat2C,
    #[serde(rename = "B0")]
    b0: Mat2C,
    eps: Sign,
}

impl DiscMotion {
    pub fn a0(&self) -> Mat2C {
        self.a0
    }
    pub fn b0(&self) -> Mat2C {
        self.b0
    }
    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn as_matrix(&self) -> Mat4C {
        Mat4C::from_blocks(self.a0, self.b0, self.b0.conj(), self.a0.conj())
    }

    /// `(A₀Z₀ + B₀)(B̄₀Z₀ + Ā₀)⁻¹`.
    pub fn apply(&self, z0: &EPoint, tol: &Tolerance) -> Result<EPoint> {
        let zm = z0.as_matrix();
        let den = (self.b0.conj() * zm + self.a0.conj()).inverse(tol)?;
        let w = (self.a0 * zm + self.b0) * den;
        EPoint::from_matrix(&w, tol)
            .map_err(|_| Error::NumericalBreakdown("image of the action left the bounded model".into()))
    }

    /// Residual of `A₀ᵗĀ₀ − B₀ᵗB̄₀ = I` and `A₀ᵗB₀ = B₀ᵗA₀`.
    pub fn block_residual(&self) -> f64 {
        let (a, b) = (self.a0, self.b0);
        let r1 = a * a.conj().transpose() - b * b.conj().transpose() - Mat2C::IDENTITY;
        let r2 = a * b.transpose() - b * a.transpose();
        r1.max_abs().max(r2.max_abs())
    }

    /// Conjugate into the half-space model: `L·M₀·L⁻¹`, which must be real.
    pub fn to_halfspace(&self, tol: &Tolerance) -> Result<MotionMatrix> {
        let m = cayley_l() * self.as_matrix() * cayley_l_inv();
        let scale = m.max_abs().max(1.0);
        let residue = m.max_abs_imag();
        if residue > tol.abs_eps * scale {
            return Err(Error::NumericalBreakdown(format!("conjugated matrix has imaginary residue {residue:e}")));
        }
        Ok(MotionMatrix { m: m.real_part(), eps: self.eps })
    }
}

/// Stabilizer of the origin of the bounded model:
/// `A₀ = [[(ξ₁+ξ₂)/2, (ξ₁−ξ₂)/2], [ε(ξ₁−ξ₂)/2, ε(ξ₁+ξ₂)/2]]`, `B₀ = 0`.
pub fn stabilizer_of_center(p: &StabilizerParams) -> DiscMotion {
    let e = p.eps.value();
    let s = (p.xi1 + p.xi2) * 0.5;
    let d = (p.xi1 - p.xi2) * 0.5;
    DiscMotion { a0: Mat2C::new(s, d, d * e, s * e), b0: Mat2C::ZERO, eps: p.eps }
}

/// Stabilizer of `iI`, obtained by conjugating [`stabilizer_of_center`] with `L`.
pub fn stabilizer_of_ii(p: &StabilizerParams, tol: &Tolerance) -> Result<MotionMatrix> {
    stabilizer_of_center(p).to_halfspace(tol)
}

/// Real `K₀` with `K₀·K·ᵗK₀ = I` and `qK₀ = εK₀q` for `K = [[k₁, k₂], [k₂, k₁]]`.
pub fn bisym_normalizer(k1: f64, k2: f64, eps: Sign, tol: &Tolerance) -> Result<Mat2C> {
    if !(k1 > k2.abs() + tol.dom_eps) {
        return Err(Error::NotPositiveDefinite { k1, k2 });
    }
    let u = (k1 + k2).sqrt().recip();
    let v = (k1 - k2).sqrt().recip();
    let x1 = 0.5 * (u + v);
    let x2 = 0.5 * (u - v);
    let e = eps.value();
    Ok(Mat2C::from_real([[x1, x2], [e * x2, e * x1]]))
}

/// Disc motion sending `Z₀` to the origin: `A₀` normalizes `I − Z₀Z̄₀` and
/// `B₀ = −A₀Z₀`.
pub fn transport_to_center(z0: &EPoint, tol: &Tolerance) -> Result<DiscMotion> {
    let zm = z0.as_matrix();
    let k = Mat2C::IDENTITY - zm * zm.conj();
    let k1 = 0.5 * (k.0[0][0].re + k.0[1][1].re);
    let k2 = 0.5 * (k.0[0][1].re + k.0[1][0].re);
    center_transport(z0, k1, k2, tol)
}

fn center_transport(z0: &EPoint, k1: f64, k2: f64, tol: &Tolerance) -> Result<DiscMotion> {
    let a0 = bisym_normalizer(k1, k2, Sign::Plus, tol)
        .map_err(|_| Error::DomainViolation("point is not inside the bounded model".into()))?;
    Ok(DiscMotion { a0, b0: -(a0 * z0.as_matrix()), eps: Sign::Plus })
}

/// A motion with `M⟨Z⟩ = iI`, built through the bounded model.
///
/// `I − Z₀Z̄₀` has eigenvalues `4 Im ζ/|ζ + i|²` over the factors `ζ = τ ± z`;
/// they are evaluated in that form rather than by subtraction from `I`.
pub fn transport_to_ii(z: &HPoint, tol: &Tolerance) -> Result<MotionMatrix> {
    let z0 = cayley_to_disc(z, tol)?;
    let (p, m) = z.factors();
    let e = |w: Complex| 4.0 * w.im / (w + I_UNIT).norm_sqr();
    let (ep, em) = (e(p), e(m));
    center_transport(&z0, 0.5 * (ep + em), 0.5 * (ep - em), tol)?.to_halfspace(tol)
}

/// A pair `(Z₁, Z)` moved to `(iI, iΛ)` with `Λ = [[λ₁, λ₂], [λ₂, λ₁]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPair {
    pub lambda1: f64,
    pub lambda2: f64,
    pub mover: MotionMatrix,
}

impl ReducedPair {
    /// The target point `iΛ`.
    pub fn target(&self, tol: &Tolerance) -> Result<HPoint> {
        HPoint::new(c64(0.0, self.lambda1), c64(0.0, self.lambda2), tol)
    }
}

/// Move `Z₁` to `iI` and `Z` to `iΛ`.
///
/// After the transport `Z₁ ↦ iI`, the factor images of `Z` have bidisc moduli
/// `rⱼ = (λⱼ − 1)/(λⱼ + 1)`, where `λⱼ` are the factorwise invariants of the
/// pair. The complements `1 − rⱼ = 2/(λⱼ + 1)` are taken from those
/// invariants, which keeps `Λ` accurate when the points are far apart.
pub fn reduce_pair(z1: &HPoint, z: &HPoint, tol: &Tolerance) -> Result<ReducedPair> {
    let m1 = transport_to_ii(z1, tol)?;
    let zp = apply(&m1, z, tol)?;
    let w = sigma(&cayley_to_disc(&zp, tol)?);

    let inv = distance(z1, z, tol);
    let u_plus = 2.0 / (inv.log_lam.exp() + 1.0);
    let u_minus = 2.0 / (inv.log_lam_tilde.exp() + 1.0);
    let (eps, u1, u2) = if u_plus <= u_minus { (Sign::Plus, u_plus, u_minus) } else { (Sign::Minus, u_minus, u_plus) };
    if u1 <= tol.dom_eps {
        return Err(Error::NumericalBreakdown("points are too far apart to reduce in double precision".into()));
    }

    let half_turn = |v: Complex| Complex::from_polar(1.0, -0.5 * v.arg());
    let params = StabilizerParams { xi1: half_turn(w.w1()), xi2: half_turn(w.w2()), eps };
    let g = stabilizer_of_ii(&params, tol)?;
    let mover = g * m1;

    // The real parts of the image grow like λ²·δθ with the phase error δθ, so
    // the residual phase left by rounding is measured and removed once more.
    let (wp, wm) = apply(&mover, z, tol)?.factors();
    let phase = |v: Complex| Complex::from_polar(1.0, -0.5 * ((v - I_UNIT) / (v + I_UNIT)).arg());
    let fix = StabilizerParams { xi1: phase(wp), xi2: phase(wm), eps: Sign::Plus };
    let mover = stabilizer_of_ii(&fix, tol)? * mover;

    // 1 − r₁r₂ = u₁ + u₂ − u₁u₂ and r₁ − r₂ = u₂ − u₁ with uⱼ = 1 − rⱼ
    let denom = u1 * u2;
    let lambda1 = (u1 + u2 - u1 * u2) / denom;
    let lambda2 = (u2 - u1) / denom;
    Ok(ReducedPair { lambda1, lambda2, mover })
}
