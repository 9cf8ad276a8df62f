//! Metric structure of the half space: cross ratio, the invariant metric,
//! distance, geodesics and the invariant volume density.
//!
//! Every bi-symmetric point splits into the two upper-half-plane factors
//! `τ ± z`, and distance, geodesics and volume are evaluated factorwise.

use serde::Serialize;

use crate::domain::HPoint;
use crate::error::{Error, Result};
use crate::group::{apply, MotionMatrix};
use crate::numkit::{c64, Complex, Mat2C, Mat4R, Tolerance, I_UNIT};

/// A bi-symmetric displacement `dZ = [[dτ, dz], [dz, dτ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent {
    dtau: Complex,
    dz: Complex,
}

impl Tangent {
    pub fn new(dtau: Complex, dz: Complex) -> Result<Self> {
        if !(dtau.is_finite() && dz.is_finite()) {
            return Err(Error::DomainViolation("tangent entries must be finite".into()));
        }
        Ok(Tangent { dtau, dz })
    }

    pub fn zero() -> Self {
        Tangent { dtau: Complex::ZERO, dz: Complex::ZERO }
    }

    pub fn dtau(&self) -> Complex {
        self.dtau
    }

    pub fn dz(&self) -> Complex {
        self.dz
    }

    pub fn as_matrix(&self) -> Mat2C {
        Mat2C::bisymmetric(self.dtau, self.dz)
    }
}

/// `ℜ(Z, Z₁) = (Z − Z₁)(Z − Z̄₁)⁻¹(Z̄ − Z̄₁)(Z̄ − Z₁)⁻¹`.
pub fn cross_ratio(z: &HPoint, z1: &HPoint, tol: &Tolerance) -> Result<Mat2C> {
    let a = z.as_matrix();
    let b = z1.as_matrix();
    let (ac, bc) = (a.conj(), b.conj());
    Ok((a - b) * (a - bc).inverse(tol)? * (ac - bc) * (ac - b).inverse(tol)?)
}

/// Eigenvalues of the cross ratio in decreasing order, read off the
/// bi-symmetric form as `r₁₁ ± r₁₂`.
pub fn cross_ratio_eigenvalues(z: &HPoint, z1: &HPoint, tol: &Tolerance) -> Result<(f64, f64)> {
    let r = cross_ratio(z, z1, tol)?;
    let diag = (r.0[0][0] + r.0[1][1]) * 0.5;
    let off = (r.0[0][1] + r.0[1][0]) * 0.5;
    let (e1, e2) = ((diag + off).re, (diag - off).re);
    Ok(if e1 >= e2 { (e1, e2) } else { (e2, e1) })
}

/// `ds² = tr(Y⁻¹ dZ Y⁻¹ dZ̄)`.
pub fn metric_form(z: &HPoint, d: &Tangent, tol: &Tolerance) -> Result<f64> {
    let yinv = z.im().inverse(tol)?;
    let dz = d.as_matrix();
    Ok((yinv * dz * yinv * dz.conj()).trace().re)
}

/// Distance together with the factor invariants `A` and `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Distance {
    pub rho: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    /// `log λ` for the `τ + z` factor.
    #[serde(skip)]
    pub log_lam: f64,
    /// `log λ̃` for the `τ − z` factor.
    #[serde(skip)]
    pub log_lam_tilde: f64,
}

/// `(A, log λ)` for two upper-half-plane points, where
/// `A = (y² + v² + (x − u)²)/(yv)` and `λ = (A + √(A² − 4))/2`.
///
/// Works with `A − 2 = ((y − v)² + (x − u)²)/(yv)` so that nearby points keep
/// their relative accuracy.
fn factor_invariant(zeta: Complex, omega: Complex, tol: &Tolerance) -> (f64, f64) {
    if (zeta - omega).norm() <= tol.dom_eps {
        return (2.0, 0.0);
    }
    let (y, v) = (zeta.im, omega.im);
    let dx = zeta.re - omega.re;
    let dy = y - v;
    let d = (dy * dy + dx * dx) / (y * v);
    let lam_minus_one = 0.5 * (d + (d * (d + 4.0)).sqrt());
    (2.0 + d, lam_minus_one.ln_1p())
}

pub fn distance(z1: &HPoint, z2: &HPoint, tol: &Tolerance) -> Distance {
    let (p1, m1) = z1.factors();
    let (p2, m2) = z2.factors();
    let (a, log_lam) = factor_invariant(p1, p2, tol);
    let (b, log_lam_tilde) = factor_invariant(m1, m2, tol);
    Distance { rho: log_lam.hypot(log_lam_tilde), a, b, log_lam, log_lam_tilde }
}

fn check_arc(s: f64, s0: f64, tol: &Tolerance) -> Result<f64> {
    let slack = tol.abs_eps * s0.max(1.0);
    if !(s >= -slack && s <= s0 + slack) {
        return Err(Error::OutOfRange { value: s, lo: 0.0, hi: s0 });
    }
    Ok(s.clamp(0.0, s0))
}

/// The geodesic from `iI` to `iΛ`, `Λ = [[λ₁, λ₂], [λ₂, λ₁]]`, at arc length `s`:
/// `τ = i(a + b)/2`, `z = i(a − b)/2` with `a = (λ₁ + λ₂)^{s/s₀}`,
/// `b = (λ₁ − λ₂)^{s/s₀}`.
pub fn geodesic_central(lambda1: f64, lambda2: f64, s: f64, tol: &Tolerance) -> Result<HPoint> {
    if !(lambda1 >= lambda2 + 1.0 - tol.abs_eps && lambda2 >= -tol.abs_eps) {
        return Err(Error::DomainViolation(format!(
            "need lambda1 >= lambda2 + 1 and lambda2 >= 0, got ({lambda1}, {lambda2})"
        )));
    }
    let la = (lambda1 + lambda2).ln();
    let lb = (lambda1 - lambda2).max(1.0).ln();
    let s0 = la.hypot(lb);
    let s = check_arc(s, s0, tol)?;
    if s0 == 0.0 {
        return Ok(HPoint::base());
    }
    let t = s / s0;
    let (a, b) = ((t * la).exp(), (t * lb).exp());
    HPoint::new(c64(0.0, 0.5 * (a + b)), c64(0.0, 0.5 * (a - b)), tol)
}

/// Geodesic of one upper-half-plane factor from `ζ = x + iy` to `ω = u + iv`,
/// parameterized by `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct FactorArc {
    zeta: Complex,
    omega: Complex,
    log_lam: f64,
}

/// Below this `log λ` the factor is treated as constant (`c(1) = 1`).
const FLAT_FACTOR: f64 = 1e-9;

impl FactorArc {
    /// `x + y·N/D` with `N = λ(u − x)c(λ)(λ^{2t} − 1) + ivλ^t`,
    /// `D = (λy − v)c(λ)(λ^{2t} − 1) + v`; also returns `d/dt`.
    fn eval(&self, t: f64) -> (Complex, Complex) {
        let (x, y) = (self.zeta.re, self.zeta.im);
        let (u, v) = (self.omega.re, self.omega.im);
        let l = self.log_lam;
        if l < FLAT_FACTOR {
            return (self.zeta, Complex::ZERO);
        }
        let lam = l.exp();
        // c(λ)(λ^{2t} − 1) and its derivative
        let denom = (2.0 * l).exp_m1();
        let ce = (2.0 * t * l).exp_m1() / denom;
        let ce_dot = 2.0 * l * (2.0 * t * l).exp() / denom;
        let lt = (t * l).exp();
        let n = c64(lam * (u - x) * ce, v * lt);
        let n_dot = c64(lam * (u - x) * ce_dot, v * l * lt);
        let dd = (lam * y - v) * ce + v;
        let dd_dot = (lam * y - v) * ce_dot;
        let w = c64(x, 0.0) + n * (y / dd);
        let w_dot = (n_dot * dd - n * dd_dot) * (y / (dd * dd));
        (w, w_dot)
    }
}

/// The geodesic segment between two points, parameterized by arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSpec {
    z1: HPoint,
    z2: HPoint,
    s0: f64,
    lam: f64,
    lam_tilde: f64,
    plus: FactorArc,
    minus: FactorArc,
}

impl GeodesicSpec {
    pub fn new(z1: &HPoint, z2: &HPoint, tol: &Tolerance) -> Result<Self> {
        let d = distance(z1, z2, tol);
        if d.rho < tol.dom_eps {
            return Err(Error::DegeneratePair { distance: d.rho });
        }
        let (p1, m1) = z1.factors();
        let (p2, m2) = z2.factors();
        Ok(GeodesicSpec {
            z1: *z1,
            z2: *z2,
            s0: d.rho,
            lam: d.log_lam.exp(),
            lam_tilde: d.log_lam_tilde.exp(),
            plus: FactorArc { zeta: p1, omega: p2, log_lam: d.log_lam },
            minus: FactorArc { zeta: m1, omega: m2, log_lam: d.log_lam_tilde },
        })
    }

    pub fn start(&self) -> HPoint {
        self.z1
    }

    pub fn end(&self) -> HPoint {
        self.z2
    }

    /// Total arc length.
    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn lam(&self) -> f64 {
        self.lam
    }

    pub fn lam_tilde(&self) -> f64 {
        self.lam_tilde
    }

    fn factors_at(&self, s: f64, tol: &Tolerance) -> Result<((Complex, Complex), (Complex, Complex))> {
        let s = check_arc(s, self.s0, tol)?;
        let t = s / self.s0;
        Ok((self.plus.eval(t), self.minus.eval(t)))
    }

    pub fn point_at(&self, s: f64, tol: &Tolerance) -> Result<HPoint> {
        let ((p, _), (m, _)) = self.factors_at(s, tol)?;
        HPoint::from_factors(p, m, tol)
    }

    /// Velocity `dZ/ds`; has unit length in the invariant metric.
    pub fn velocity_at(&self, s: f64, tol: &Tolerance) -> Result<Tangent> {
        let ((_, dp), (_, dm)) = self.factors_at(s, tol)?;
        let (dp, dm) = (dp / self.s0, dm / self.s0);
        Tangent::new((dp + dm) * 0.5, (dp - dm) * 0.5)
    }
}

/// Point at arc length `s` on the geodesic from `z1` to `z2`.
pub fn geodesic(z1: &HPoint, z2: &HPoint, s: f64, tol: &Tolerance) -> Result<HPoint> {
    GeodesicSpec::new(z1, z2, tol)?.point_at(s, tol)
}

/// Central-difference estimate of `max |Z̈ + iŻY⁻¹Ż|` at `s`.
pub fn geodesic_ode_residual<F>(curve: F, s: f64, h: f64, tol: &Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<HPoint>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::OutOfRange { value: h, lo: 0.0, hi: f64::INFINITY });
    }
    let zm = curve(s - h)?.as_matrix();
    let z0 = curve(s)?;
    let zp = curve(s + h)?.as_matrix();
    let zc = z0.as_matrix();
    let vel = (zp - zm) * (0.5 / h);
    let acc = (zp - zc * 2.0 + zm) * (1.0 / (h * h));
    let yinv = z0.im().inverse(tol)?;
    Ok((acc + vel * yinv * vel * I_UNIT).max_abs())
}

/// `4/((y₁ + y₂)²(y₁ − y₂)²)` with `y₁ = Im τ`, `y₂ = Im z`.
pub fn volume_density(z: &HPoint) -> f64 {
    let (y1, y2) = (z.tau().im, z.z().im);
    let p = (y1 + y2) * (y1 - y2);
    4.0 / (p * p)
}

/// Real coordinates `(Re τ, Re z, Im τ, Im z)`.
pub fn real_coords(z: &HPoint) -> [f64; 4] {
    [z.tau().re, z.z().re, z.tau().im, z.z().im]
}

fn from_real_coords(c: [f64; 4], tol: &Tolerance) -> Result<HPoint> {
    HPoint::new(c64(c[0], c[2]), c64(c[1], c[3]), tol)
}

/// Central-difference Jacobian determinant of `Z ↦ M⟨Z⟩` in the coordinates
/// of [`real_coords`].
pub fn action_jacobian_det(m: &MotionMatrix, z: &HPoint, h: f64, tol: &Tolerance) -> Result<f64> {
    let base = real_coords(z);
    let mut jac = Mat4R::ZERO;
    for k in 0..4 {
        let (mut up, mut down) = (base, base);
        up[k] += h;
        down[k] -= h;
        let fu = real_coords(&apply(m, &from_real_coords(up, tol)?, tol)?);
        let fd = real_coords(&apply(m, &from_real_coords(down, tol)?, tol)?);
        for r in 0..4 {
            jac.0[r][k] = (fu[r] - fd[r]) / (2.0 * h);
        }
    }
    Ok(jac.det())
}

/// Central-difference image of a tangent under the differential of the action.
pub fn pushforward(m: &MotionMatrix, z: &HPoint, d: &Tangent, h: f64, tol: &Tolerance) -> Result<Tangent> {
    let up = HPoint::new(z.tau() + d.dtau * h, z.z() + d.dz * h, tol)?;
    let down = HPoint::new(z.tau() - d.dtau * h, z.z() - d.dz * h, tol)?;
    let (wu, wd) = (apply(m, &up, tol)?, apply(m, &down, tol)?);
    let k = 0.5 / h;
    Tangent::new((wu.tau() - wd.tau()) * k, (wu.z() - wd.z()) * k)
}

/// Composite Simpson rule for the length of the geodesic between arc
/// lengths `0` and `s`.
pub fn simpson_length(spec: &GeodesicSpec, s: f64, panels: usize, tol: &Tolerance) -> Result<f64> {
    let n = if panels.is_multiple_of(2) { panels.max(2) } else { panels + 1 };
    let h = s / n as f64;
    let speed = |x: f64| -> Result<f64> {
        let z = spec.point_at(x, tol)?;
        Ok(metric_form(&z, &spec.velocity_at(x, tol)?, tol)?.max(0.0).sqrt())
    };
    let mut acc = speed(0.0)? + speed(s)?;
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * speed(k as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::reduce_pair;
    use crate::sampling::{sample_hpoint, sample_motion, seeded_rng};
    use rand::Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn hp(tau: (f64, f64), z: (f64, f64)) -> HPoint {
        HPoint::new(c64(tau.0, tau.1), c64(z.0, z.1), &tol()).unwrap()
    }

    #[test]
    fn cross_ratio_examples() {
        let t = tol();
        let z = hp((0.3, 2.0), (0.1, 0.5));
        assert_eq!(cross_ratio(&z, &z, &t).unwrap(), Mat2C::ZERO);
        let r = cross_ratio(&HPoint::base(), &HPoint::scaled_base(2.0, &t).unwrap(), &t).unwrap();
        assert!((r - Mat2C::scalar(c64(1.0 / 9.0, 0.0))).max_abs() <= 1e-12);
    }

    #[test]
    fn cross_ratio_eigenvalues_match_factors() {
        // for each factor pair the eigenvalue is |ζ − ω|²/|ζ − ω̄|²
        let t = tol();
        let mut rng = seeded_rng(31);
        for _ in 0..200 {
            let (a, b) = (sample_hpoint(&mut rng), sample_hpoint(&mut rng));
            let (ap, am) = a.factors();
            let (bp, bm) = b.factors();
            let f = |x: Complex, y: Complex| (x - y).norm_sqr() / (x - y.conj()).norm_sqr();
            let (e1, e2) = (f(ap, bp), f(am, bm));
            let want = if e1 >= e2 { (e1, e2) } else { (e2, e1) };
            let got = cross_ratio_eigenvalues(&a, &b, &t).unwrap();
            assert!((got.0 - want.0).abs() < 1e-10 && (got.1 - want.1).abs() < 1e-10);
            assert!(got.0 < 1.0 && got.1 >= 0.0);
        }
    }

    #[test]
    fn metric_form_examples() {
        let t = tol();
        let mut rng = seeded_rng(37);
        for _ in 0..100 {
            let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
            let d = Tangent::new(c64(v[0], v[2]), c64(v[1], v[3])).unwrap();
            let want = 2.0 * v.iter().map(|x| x * x).sum::<f64>();
            assert!((metric_form(&HPoint::base(), &d, &t).unwrap() - want).abs() <= 1e-12 * want.max(1.0));
        }
        let d = Tangent::new(c64(1.0, 0.0), Complex::ZERO).unwrap();
        assert!((metric_form(&HPoint::base(), &d, &t).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(metric_form(&hp((1.0, 3.0), (0.0, 1.0)), &Tangent::zero(), &t).unwrap(), 0.0);
    }

    #[test]
    fn metric_form_factor_decomposition() {
        let t = tol();
        let mut rng = seeded_rng(41);
        for _ in 0..500 {
            let z = sample_hpoint(&mut rng);
            let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
            let d = Tangent::new(c64(v[0], v[1]), c64(v[2], v[3])).unwrap();
            let (p, m) = z.factors();
            let want = (d.dtau + d.dz).norm_sqr() / (p.im * p.im) + (d.dtau - d.dz).norm_sqr() / (m.im * m.im);
            let got = metric_form(&z, &d, &t).unwrap();
            assert!(got > 0.0);
            assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn distance_examples() {
        let t = tol();
        let z = hp((0.4, 1.5), (-0.2, 0.3));
        assert_eq!(distance(&z, &z, &t).rho, 0.0);
        let d = distance(&HPoint::base(), &HPoint::scaled_base(2.0, &t).unwrap(), &t);
        assert!((d.rho - 2f64.sqrt() * 2f64.ln()).abs() <= 1e-12);
        assert_eq!((d.a, d.b), (2.5, 2.5));
        let d = distance(&HPoint::base(), &hp((0.0, 2.0), (0.0, 1.0)), &t);
        assert!((d.rho - 3f64.ln()).abs() <= 1e-12);
        assert!((d.a - 10.0 / 3.0).abs() < 1e-15 && d.b == 2.0);
    }

    #[test]
    fn distance_matches_naive_formula() {
        let t = tol();
        let mut rng = seeded_rng(43);
        for _ in 0..500 {
            let (a, b) = (sample_hpoint(&mut rng), sample_hpoint(&mut rng));
            let (ap, am) = a.factors();
            let (bp, bm) = b.factors();
            let naive = |z: Complex, w: Complex| {
                let big = (z.im * z.im + w.im * w.im + (z.re - w.re).powi(2)) / (z.im * w.im);
                ((big + (big * big - 4.0).max(0.0).sqrt()) / 2.0).ln()
            };
            let want = naive(ap, bp).hypot(naive(am, bm));
            let got = distance(&a, &b, &t);
            assert!((got.rho - want).abs() <= 1e-10 * want.max(1.0));
            assert!(got.a >= 2.0 && got.b >= 2.0);
            assert_eq!(got.rho, distance(&b, &a, &t).rho);
        }
    }

    #[test]
    fn distance_triangle_inequality() {
        let t = tol();
        let mut rng = seeded_rng(47);
        for _ in 0..500 {
            let (a, b, c) = (sample_hpoint(&mut rng), sample_hpoint(&mut rng), sample_hpoint(&mut rng));
            let ab = distance(&a, &b, &t).rho;
            let bc = distance(&b, &c, &t).rho;
            let ac = distance(&a, &c, &t).rho;
            assert!(ac <= ab + bc + 1e-12);
        }
    }

    #[test]
    fn geodesic_central_examples() {
        let t = tol();
        assert_eq!(geodesic_central(1.0, 0.0, 0.0, &t).unwrap(), HPoint::base());
        let s0 = 3f64.ln();
        let end = geodesic_central(2.0, 1.0, s0, &t).unwrap();
        assert!(end.max_diff(&hp((0.0, 2.0), (0.0, 1.0))) < 1e-14);
        let mid = geodesic_central(2.0, 1.0, s0 / 2.0, &t).unwrap();
        let r3 = 3f64.sqrt();
        assert!(mid.max_diff(&hp((0.0, (r3 + 1.0) / 2.0), (0.0, (r3 - 1.0) / 2.0))) < 1e-14);
        assert!(matches!(geodesic_central(2.0, 1.0, 2.0 * s0, &t), Err(Error::OutOfRange { .. })));
        assert!(matches!(geodesic_central(1.0, 0.0, 0.5, &t), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn geodesic_examples() {
        let t = tol();
        let two = HPoint::scaled_base(2.0, &t).unwrap();
        let spec = GeodesicSpec::new(&HPoint::base(), &two, &t).unwrap();
        let mid = spec.point_at(spec.s0() / 2.0, &t).unwrap();
        assert!(mid.max_diff(&HPoint::scaled_base(2f64.sqrt(), &t).unwrap()) < 1e-14);

        let z = hp((0.0, 2.0), (0.0, 1.0));
        let spec = GeodesicSpec::new(&HPoint::base(), &z, &t).unwrap();
        assert!(spec.point_at(0.0, &t).unwrap().max_diff(&HPoint::base()) < 1e-15);
        let r3 = 3f64.sqrt();
        let mid = spec.point_at(spec.s0() / 2.0, &t).unwrap();
        assert!(mid.max_diff(&hp((0.0, (r3 + 1.0) / 2.0), (0.0, (r3 - 1.0) / 2.0))) < 1e-14);
        assert!((spec.lam() - 3.0).abs() < 1e-14 && spec.lam_tilde() == 1.0);

        assert!(matches!(GeodesicSpec::new(&z, &z, &t), Err(Error::DegeneratePair { .. })));
        assert!(matches!(spec.point_at(-1.0, &t), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn geodesic_endpoints_and_reversal() {
        let t = tol();
        let mut rng = seeded_rng(53);
        for _ in 0..200 {
            let (a, b) = (sample_hpoint(&mut rng), sample_hpoint(&mut rng));
            let fwd = GeodesicSpec::new(&a, &b, &t).unwrap();
            let back = GeodesicSpec::new(&b, &a, &t).unwrap();
            let s0 = fwd.s0();
            assert!(fwd.point_at(0.0, &t).unwrap().max_diff(&a) <= 1e-8);
            assert!(fwd.point_at(s0, &t).unwrap().max_diff(&b) <= 1e-8);
            let s = rng.random_range(0.0..s0);
            let p = fwd.point_at(s, &t).unwrap();
            let q = back.point_at(back.s0() - s, &t).unwrap();
            assert!(p.max_diff(&q) <= 1e-8);
        }
    }

    #[test]
    fn geodesic_has_unit_speed_and_length_equals_distance() {
        let t = tol();
        let mut rng = seeded_rng(59);
        for _ in 0..20 {
            let (a, b) = (sample_hpoint(&mut rng), sample_hpoint(&mut rng));
            let spec = GeodesicSpec::new(&a, &b, &t).unwrap();
            for k in 0..=10 {
                let s = spec.s0() * k as f64 / 10.0;
                let v = metric_form(&spec.point_at(s, &t).unwrap(), &spec.velocity_at(s, &t).unwrap(), &t).unwrap();
                assert!((v - 1.0).abs() < 1e-9, "speed² {v}");
            }
            let len = simpson_length(&spec, spec.s0(), 1000, &t).unwrap();
            assert!((len - spec.s0()).abs() <= 1e-6 * spec.s0());
        }
    }

    #[test]
    fn geodesic_is_transported_central_geodesic() {
        let t = tol();
        let mut rng = seeded_rng(61);
        for _ in 0..100 {
            let (a, b) = (sample_hpoint(&mut rng), sample_hpoint(&mut rng));
            let red = reduce_pair(&a, &b, &t).unwrap();
            let spec = GeodesicSpec::new(&a, &b, &t).unwrap();
            let inv = red.mover.inverse();
            let s = rng.random_range(0.0..spec.s0());
            let central = geodesic_central(red.lambda1, red.lambda2, s.min(spec.s0()), &t);
            let central = match central {
                Ok(c) => c,
                Err(Error::OutOfRange { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            let via = apply(&inv, &central, &t).unwrap();
            let direct = spec.point_at(s, &t).unwrap();
            assert!(via.max_diff(&direct) <= 1e-7 * red.lambda1.max(1.0), "{via:?} vs {direct:?}");
        }
    }

    #[test]
    fn ode_residual_is_second_order() {
        let t = tol();
        let lam = (2.0, 1.0);
        let s0 = 3f64.ln();
        let curve = |s: f64| geodesic_central(lam.0, lam.1, s, &t);
        let r1 = geodesic_ode_residual(curve, s0 / 2.0, 1e-3, &t).unwrap();
        let r2 = geodesic_ode_residual(curve, s0 / 2.0, 5e-4, &t).unwrap();
        assert!(r1 <= 1e-5);
        let ratio = r1 / r2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");

        // a Euclidean segment is not a geodesic
        let seg = |s: f64| HPoint::new(c64(0.0, 1.0 + s), Complex::ZERO, &t);
        let a = geodesic_ode_residual(seg, 0.5, 1e-3, &t).unwrap();
        let b = geodesic_ode_residual(seg, 0.5, 1e-4, &t).unwrap();
        assert!(a > 0.1 && b > 0.1);
        assert!(geodesic_ode_residual(seg, 0.5, 0.0, &t).is_err());
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume_density(&HPoint::base()), 4.0);
        assert!((volume_density(&hp((0.0, 2.0), (0.0, 1.0))) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn volume_is_invariant() {
        let t = tol();
        let mut rng = seeded_rng(67);
        for _ in 0..100 {
            let m = sample_motion(&mut rng);
            let z = sample_hpoint(&mut rng);
            let w = apply(&m, &z, &t).unwrap();
            let jac = action_jacobian_det(&m, &z, 1e-6, &t).unwrap();
            let rel = (volume_density(&w) * jac.abs() - volume_density(&z)).abs() / volume_density(&z);
            assert!(rel <= 1e-4, "relative error {rel}");
        }
    }

    #[test]
    fn metric_is_invariant() {
        let t = tol();
        let mut rng = seeded_rng(71);
        for _ in 0..200 {
            let m = sample_motion(&mut rng);
            let z = sample_hpoint(&mut rng);
            let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let d = Tangent::new(c64(v[0], v[1]), c64(v[2], v[3])).unwrap();
            let w = apply(&m, &z, &t).unwrap();
            let dw = pushforward(&m, &z, &d, 1e-6, &t).unwrap();
            let before = metric_form(&z, &d, &t).unwrap();
            let after = metric_form(&w, &dw, &t).unwrap();
            assert!((before - after).abs() <= 1e-5 * before);
        }
    }
}
