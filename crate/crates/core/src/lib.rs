//! Geometry of the bi-symmetric Siegel upper half space of degree two.
//!
//! Points are symmetric complex matrices `Z = [[τ, z], [z, τ]]` with
//! `Im τ > |Im z|`. The crate provides the motion group acting on them, the
//! Cayley transform to the bounded model, reduction of point pairs to a
//! canonical form, the invariant metric, closed-form distances and geodesics,
//! the invariant volume density, and a small hyperbolic-plane toolkit that
//! serves as an independent check on the factorwise formulas.
//!
//! ```
//! use bisiegel::{distance, HPoint, Tolerance};
//!
//! let tol = Tolerance::default();
//! let z1 = HPoint::base();
//! let z2 = HPoint::scaled_base(2.0, &tol).unwrap();
//! let d = distance(&z1, &z2, &tol);
//! assert!((d.rho - 2f64.sqrt() * 2f64.ln()).abs() < 1e-12);
//! ```

pub mod domain;
pub mod error;
pub mod geometry;
pub mod group;
pub mod hyperbolic;
pub mod numkit;
pub mod sampling;

pub use domain::{
    cayley_to_disc, cayley_to_halfspace, e_contains, h_contains, sigma, sigma_inv, BidiscPoint, EPoint, HPoint,
};
pub use error::{Error, Result};
pub use geometry::{
    cross_ratio, cross_ratio_eigenvalues, distance, geodesic, geodesic_central, geodesic_ode_residual, metric_form,
    volume_density, Distance, GeodesicSpec, Tangent,
};
pub use group::{
    apply, assemble, bisym_normalizer, classify, reduce_pair, split, stabilizer_of_center, stabilizer_of_ii,
    transport_to_center, transport_to_ii, DiscMotion, MotionMatrix, ReducedPair, Sign, Sl2Matrix, StabilizerParams,
};
pub use hyperbolic::{hyp_distance, iwasawa_lambda_residual, map_to_imaginary, mobius, pair_lambda, HalfPlanePoint};
pub use numkit::{approx_eq, c64, mat2c_inverse, Complex, Mat2C, Mat4C, Mat4R, Tolerance, I_UNIT};
