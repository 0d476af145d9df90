//! Siegel upper-half-space points, the fractional-linear group action and
//! central-difference derivatives in the three period coordinates.

use rand::Rng;
use serde::Serialize;

use super::linalg::{CMat2, C64};
use super::symplectic::SymplecticElement;
use crate::error::ModularError;

/// Default central-difference step in the period coordinates.
pub const FD_STEP: f64 = 1e-5;

/// A 2x2 complex symmetric matrix with positive-definite imaginary part,
/// stored by its three coordinates so symmetry is exact by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SiegelPoint {
    pub o11: C64,
    pub o12: C64,
    pub o22: C64,
}

impl SiegelPoint {
    pub fn new(o11: C64, o12: C64, o22: C64) -> Self {
        SiegelPoint { o11, o12, o22 }
    }

    pub fn as_matrix(&self) -> CMat2 {
        CMat2([[self.o11, self.o12], [self.o12, self.o22]])
    }

    /// The three coordinates `(O11, O12, O22)`.
    pub fn coords(&self) -> [C64; 3] {
        [self.o11, self.o12, self.o22]
    }

    pub fn from_coords(c: [C64; 3]) -> Self {
        SiegelPoint::new(c[0], c[1], c[2])
    }

    /// Shift one coordinate; index 1 perturbs both off-diagonal slots of the
    /// matrix since they are a single coordinate.
    pub fn perturbed(&self, coord: usize, h: C64) -> SiegelPoint {
        let mut c = self.coords();
        c[coord] += h;
        SiegelPoint::from_coords(c)
    }

    /// Leading minors of the imaginary part must exceed `tol`.
    pub fn im_positive_definite(&self, tol: f64) -> bool {
        let y11 = self.o11.im;
        let y12 = self.o12.im;
        let y22 = self.o22.im;
        y11 > tol && y11 * y22 - y12 * y12 > tol
    }

    /// Random point with unit-scale real part and imaginary part bounded
    /// away from the boundary.
    pub fn random(rng: &mut impl Rng) -> SiegelPoint {
        let x11: f64 = rng.gen_range(-1.0..1.0);
        let x12: f64 = rng.gen_range(-1.0..1.0);
        let x22: f64 = rng.gen_range(-1.0..1.0);
        let y11: f64 = rng.gen_range(0.8..1.8);
        let y22: f64 = rng.gen_range(0.8..1.8);
        let y12: f64 = rng.gen_range(-0.3..0.3);
        SiegelPoint::new(
            C64::new(x11, y11),
            C64::new(x12, y12),
            C64::new(x22, y22),
        )
    }
}

/// Transformed point together with the factor `M = C*Omega + D` and its
/// inverse `N`.
#[derive(Clone, Copy, Debug)]
pub struct PeriodTransform {
    pub image: SiegelPoint,
    pub m: CMat2,
    pub n: CMat2,
    /// Entrywise asymmetry of the raw image matrix before symmetrisation.
    pub asymmetry: f64,
}

/// Minimum |det M| below which a sample is rejected as ill-conditioned.
pub const DET_M_FLOOR: f64 = 1e-4;

pub fn transform_period(
    gamma: &SymplecticElement,
    omega: &SiegelPoint,
) -> Result<PeriodTransform, ModularError> {
    let om = omega.as_matrix();
    let a = CMat2::from_int(&gamma.a);
    let b = CMat2::from_int(&gamma.b);
    let c = CMat2::from_int(&gamma.c);
    let d = CMat2::from_int(&gamma.d);
    let m = c.mul(&om).add(&d);
    let det = m.det();
    if det.norm() < DET_M_FLOOR {
        return Err(ModularError::IllConditioned(det.norm()));
    }
    let n = m.inverse();
    let raw = a.mul(&om).add(&b).mul(&n);
    let asymmetry = (raw.0[0][1] - raw.0[1][0]).norm();
    let image = SiegelPoint::new(raw.0[0][0], (raw.0[0][1] + raw.0[1][0]) * 0.5, raw.0[1][1]);
    if !image.im_positive_definite(1e-12) {
        return Err(ModularError::DegenerateSample(
            "transformed point left the upper half space".into(),
        ));
    }
    Ok(PeriodTransform {
        image,
        m,
        n,
        asymmetry,
    })
}

/// Central difference `(f(O + h e_k) - f(O - h e_k)) / 2h` in coordinate
/// `coord`, optionally Richardson-extrapolated with a half step.
pub fn omega_derivative(
    f: &dyn Fn(&SiegelPoint) -> C64,
    omega: &SiegelPoint,
    coord: usize,
    h: f64,
    richardson: bool,
) -> C64 {
    let step = C64::new(h, 0.0);
    let central = |h: C64| (f(&omega.perturbed(coord, h)) - f(&omega.perturbed(coord, -h))) / (h * 2.0);
    let d1 = central(step);
    if !richardson {
        return d1;
    }
    let d2 = central(step * 0.5);
    (d2 * 4.0 - d1) / 3.0
}

/// Gradient in the three period coordinates.
pub fn grad3(f: &dyn Fn(&SiegelPoint) -> C64, omega: &SiegelPoint, h: f64, richardson: bool) -> [C64; 3] {
    [
        omega_derivative(f, omega, 0, h, richardson),
        omega_derivative(f, omega, 1, h, richardson),
        omega_derivative(f, omega, 2, h, richardson),
    ]
}

/// `nabla_x f = nu1^2 d/dO11 + nu1 nu2 d/dO12 + nu2^2 d/dO22` for a row
/// vector `nu` evaluated at the insertion point.
pub fn nabla(grad: &[C64; 3], nu: [C64; 2]) -> C64 {
    nu[0] * nu[0] * grad[0] + nu[0] * nu[1] * grad[1] + nu[1] * nu[1] * grad[2]
}

/// The quadratic coefficient vector of `nabla_x` in coordinate order:
/// `(nu1^2, nu1 nu2, nu2^2)`.
pub fn nabla_weights(nu: [C64; 2]) -> [C64; 3] {
    [nu[0] * nu[0], nu[0] * nu[1], nu[1] * nu[1]]
}
