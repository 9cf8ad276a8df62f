//! Fixed-size numeric kernel: complex 2×2 and 4×4 matrices, real 4×4 matrices.
//!
//! Everything here is `Copy` and allocation free. Inverses are closed form and
//! refuse to divide by a determinant at or below `Tolerance::dom_eps`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Shorthand constructor for a complex scalar.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub const I_UNIT: Complex = c64(0.0, 1.0);

/// Numerical tolerances used throughout the crate.
///
/// `abs_eps` bounds residuals of equalities, `dom_eps` is the margin required
/// for strict inequalities (domain membership, invertibility).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub dom_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_eps: 1e-10, dom_eps: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, dom_eps: f64) -> Result<Self> {
        if !(dom_eps > 0.0 && dom_eps <= abs_eps && abs_eps < 1.0) {
            return Err(Error::InvalidTolerance(format!(
                "need 0 < dom_eps <= abs_eps < 1, got abs_eps = {abs_eps}, dom_eps = {dom_eps}"
            )));
        }
        Ok(Tolerance { abs_eps, dom_eps })
    }
}

/// Complex 2×2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2C(pub [[Complex; 2]; 2]);

impl Mat2C {
    pub const ZERO: Mat2C = Mat2C([[c64(0.0, 0.0); 2]; 2]);
    pub const IDENTITY: Mat2C = Mat2C([[c64(1.0, 0.0), c64(0.0, 0.0)], [c64(0.0, 0.0), c64(1.0, 0.0)]]);

    pub const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Mat2C([[a, b], [c, d]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2C::new(c64(m[0][0], 0.0), c64(m[0][1], 0.0), c64(m[1][0], 0.0), c64(m[1][1], 0.0))
    }

    /// `s·I`.
    pub fn scalar(s: Complex) -> Self {
        Mat2C::new(s, Complex::ZERO, Complex::ZERO, s)
    }

    /// The bi-symmetric matrix `[[d, o], [o, d]]`.
    pub fn bisymmetric(diag: Complex, off: Complex) -> Self {
        Mat2C::new(diag, off, off, diag)
    }

    pub fn det(&self) -> Complex {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2C::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn re(&self) -> Self {
        self.map(|z| c64(z.re, 0.0))
    }

    pub fn im(&self) -> Self {
        self.map(|z| c64(z.im, 0.0))
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        let m = &self.0;
        Mat2C::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    /// Closed-form adjugate inverse.
    pub fn inverse(&self, tol: &Tolerance) -> Result<Self> {
        let det = self.det();
        if !(det.norm() > tol.dom_eps) {
            return Err(Error::SingularMatrix { det: det.norm() });
        }
        let m = &self.0;
        let r = det.inv();
        Ok(Mat2C::new(m[1][1] * r, -m[0][1] * r, -m[1][0] * r, m[0][0] * r))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    pub fn approx_eq(&self, other: &Mat2C, tol: &Tolerance) -> bool {
        approx_eq(self, other, tol)
    }
}

/// Entrywise closeness: max modulus of `a - b` at most `tol.abs_eps`.
pub fn approx_eq(a: &Mat2C, b: &Mat2C, tol: &Tolerance) -> bool {
    (*a - *b).max_abs() <= tol.abs_eps
}

/// Inverse of a complex 2×2 matrix; see [`Mat2C::inverse`].
pub fn mat2c_inverse(m: &Mat2C, tol: &Tolerance) -> Result<Mat2C> {
    m.inverse(tol)
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, o: Mat2C) -> Mat2C {
        let (a, b) = (&self.0, &o.0);
        Mat2C::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, o: Mat2C) -> Mat2C {
        let (a, b) = (&self.0, &o.0);
        Mat2C::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        self.map(|z| -z)
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, o: Mat2C) -> Mat2C {
        let (a, b) = (&self.0, &o.0);
        Mat2C::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<Complex> for Mat2C {
    type Output = Mat2C;
    fn mul(self, s: Complex) -> Mat2C {
        self.map(|z| z * s)
    }
}

impl Mul<f64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, s: f64) -> Mat2C {
        self.map(|z| z * s)
    }
}

/// Real 4×4 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat4R(pub [[f64; 4]; 4]);

impl Mat4R {
    pub const ZERO: Mat4R = Mat4R([[0.0; 4]; 4]);

    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Mat4R(m)
    }

    /// Assemble `[[a, b], [c, d]]` from real 2×2 blocks.
    pub fn from_blocks(a: [[f64; 2]; 2], b: [[f64; 2]; 2], c: [[f64; 2]; 2], d: [[f64; 2]; 2]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][j];
                m[i][j + 2] = b[i][j];
                m[i + 2][j] = c[i][j];
                m[i + 2][j + 2] = d[i][j];
            }
        }
        Mat4R(m)
    }

    /// Real 2×2 block at block position (`br`, `bc`), each in {0, 1}.
    pub fn block_real(&self, br: usize, bc: usize) -> [[f64; 2]; 2] {
        let (r, c) = (2 * br, 2 * bc);
        [[self.0[r][c], self.0[r][c + 1]], [self.0[r + 1][c], self.0[r + 1][c + 1]]]
    }

    pub fn block(&self, br: usize, bc: usize) -> Mat2C {
        Mat2C::from_real(self.block_real(br, bc))
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 4]; 4];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        Mat4R(t)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|v| *v *= s);
        Mat4R(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        det4(self.0)
    }
}

pub(crate) fn det4(mut a: [[f64; 4]; 4]) -> f64 {
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

impl Add for Mat4R {
    type Output = Mat4R;
    fn add(self, o: Mat4R) -> Mat4R {
        let mut m = self.0;
        for (row, orow) in m.iter_mut().zip(o.0.iter()) {
            for (v, w) in row.iter_mut().zip(orow) {
                *v += w;
            }
        }
        Mat4R(m)
    }
}

impl Sub for Mat4R {
    type Output = Mat4R;
    fn sub(self, o: Mat4R) -> Mat4R {
        self + o.scale(-1.0)
    }
}

impl Neg for Mat4R {
    type Output = Mat4R;
    fn neg(self) -> Mat4R {
        self.scale(-1.0)
    }
}

impl Mul for Mat4R {
    type Output = Mat4R;
    fn mul(self, o: Mat4R) -> Mat4R {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat4R(m)
    }
}

/// Complex 4×4 matrix, row major. Only used to bridge the disc and half-space
/// models through conjugation by `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4C(pub [[Complex; 4]; 4]);

impl Mat4C {
    pub fn from_blocks(a: Mat2C, b: Mat2C, c: Mat2C, d: Mat2C) -> Self {
        let mut m = [[Complex::ZERO; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a.0[i][j];
                m[i][j + 2] = b.0[i][j];
                m[i + 2][j] = c.0[i][j];
                m[i + 2][j + 2] = d.0[i][j];
            }
        }
        Mat4C(m)
    }

    pub fn block(&self, br: usize, bc: usize) -> Mat2C {
        let (r, c) = (2 * br, 2 * bc);
        Mat2C::new(self.0[r][c], self.0[r][c + 1], self.0[r + 1][c], self.0[r + 1][c + 1])
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[Complex::ZERO; 4]; 4];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        Mat4C(t)
    }

    pub fn conj(&self) -> Self {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|z| *z = z.conj());
        Mat4C(m)
    }

    pub fn real_part(&self) -> Mat4R {
        let mut m = [[0.0; 4]; 4];
        for (row, crow) in m.iter_mut().zip(self.0.iter()) {
            for (v, z) in row.iter_mut().zip(crow) {
                *v = z.re;
            }
        }
        Mat4R(m)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl From<Mat4R> for Mat4C {
    fn from(m: Mat4R) -> Self {
        let mut out = [[Complex::ZERO; 4]; 4];
        for (row, rrow) in out.iter_mut().zip(m.0.iter()) {
            for (z, v) in row.iter_mut().zip(rrow) {
                *z = c64(*v, 0.0);
            }
        }
        Mat4C(out)
    }
}

impl Sub for Mat4C {
    type Output = Mat4C;
    fn sub(self, o: Mat4C) -> Mat4C {
        let mut m = self.0;
        for (row, orow) in m.iter_mut().zip(o.0.iter()) {
            for (v, w) in row.iter_mut().zip(orow) {
                *v -= w;
            }
        }
        Mat4C(m)
    }
}

impl Mul for Mat4C {
    type Output = Mat4C;
    fn mul(self, o: Mat4C) -> Mat4C {
        let mut m = [[Complex::ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat4C(m)
    }
}

impl Mul<Complex> for Mat4C {
    type Output = Mat4C;
    fn mul(self, s: Complex) -> Mat4C {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|z| *z *= s);
        Mat4C(m)
    }
}
