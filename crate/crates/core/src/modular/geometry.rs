//! Seeded polynomial model data `(nu_a, omega, s, F)` over a Siegel point.
//!
//! The transformation-law checks only use the functional form of the laws,
//! which hold for arbitrary smooth period-dependent data, so random
//! polynomial models are a valid test bed. The projective connection is
//! derived from the regular part of the bidifferential (`s(x) = 6 R(x,x)`)
//! so the bidifferential law automatically induces the correct `s` law.

use rand::Rng;

use super::linalg::C64;
use super::siegel::SiegelPoint;

/// Degree in the point variable.
const Y_DEG: usize = 2;
/// Period-coordinate monomials of degree <= 1: `1, O11, O12, O22`.
const OM_LIN: usize = 4;
/// Period-coordinate monomials of degree <= 2 for the scalar `F`.
const OM_QUAD: usize = 10;

#[derive(Clone, Debug)]
pub struct ModelGeometry {
    /// Include the double pole `1/(x-y)^2` in the bidifferential.
    pub pole: bool,
    /// `nu[a][j][m]`: coefficient of `y^j * om_m` in `nu_{a+1}(y; Omega)`.
    nu: [[[C64; OM_LIN]; Y_DEG + 1]; 2],
    /// Symmetric regular part: `r[p][q][m]` coefficient of `x^p y^q om_m`,
    /// stored with `r[p][q] == r[q][p]`.
    r: [[[C64; OM_LIN]; Y_DEG + 1]; Y_DEG + 1],
    /// Scalar test function coefficients over the degree-2 monomials.
    f: [C64; OM_QUAD],
}

fn om_lin(p: &SiegelPoint) -> [C64; OM_LIN] {
    [C64::new(1.0, 0.0), p.o11, p.o12, p.o22]
}

fn om_quad(p: &SiegelPoint) -> [C64; OM_QUAD] {
    let [one, a, b, c] = om_lin(p);
    [one, a, b, c, a * a, a * b, a * c, b * b, b * c, c * c]
}

fn random_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
}

impl ModelGeometry {
    /// Random unit-scale model. The differentials get order-one leading
    /// terms so the frame determinant is generically well conditioned.
    pub fn random(rng: &mut impl Rng, pole: bool) -> Self {
        let mut nu = [[[C64::new(0.0, 0.0); OM_LIN]; Y_DEG + 1]; 2];
        for comp in &mut nu {
            for row in comp.iter_mut() {
                for coef in row.iter_mut() {
                    *coef = random_c64(rng);
                }
            }
        }
        nu[0][0][0] += 1.0;
        nu[1][1][0] += 1.0;
        let mut r = [[[C64::new(0.0, 0.0); OM_LIN]; Y_DEG + 1]; Y_DEG + 1];
        for p in 0..=Y_DEG {
            for q in p..=Y_DEG {
                for m in 0..OM_LIN {
                    let coef = random_c64(rng);
                    r[p][q][m] = coef;
                    r[q][p][m] = coef;
                }
            }
        }
        let mut f = [C64::new(0.0, 0.0); OM_QUAD];
        for coef in &mut f {
            *coef = random_c64(rng);
        }
        f[0] += 1.0;
        ModelGeometry { pole, nu, r, f }
    }

    /// Degenerate model with period-independent differentials and vanishing
    /// bidifferential; the (2,-1)-form is identically zero on it.
    pub fn constant_frame(rng: &mut impl Rng) -> Self {
        let mut geom = ModelGeometry {
            pole: false,
            nu: [[[C64::new(0.0, 0.0); OM_LIN]; Y_DEG + 1]; 2],
            r: [[[C64::new(0.0, 0.0); OM_LIN]; Y_DEG + 1]; Y_DEG + 1],
            f: [C64::new(0.0, 0.0); OM_QUAD],
        };
        for comp in &mut geom.nu {
            for row in comp.iter_mut() {
                row[0] = random_c64(rng);
            }
        }
        geom.nu[0][0][0] += 1.0;
        geom.nu[1][1][0] += 1.0;
        geom.f[0] += 1.0;
        geom
    }

    /// Row vector `(nu_1(y), nu_2(y))`.
    pub fn nu(&self, y: C64, p: &SiegelPoint) -> [C64; 2] {
        let mons = om_lin(p);
        let mut out = [C64::new(0.0, 0.0); 2];
        for (a, comp) in self.nu.iter().enumerate() {
            let mut ypow = C64::new(1.0, 0.0);
            for row in comp {
                for (m, coef) in row.iter().enumerate() {
                    out[a] += coef * mons[m] * ypow;
                }
                ypow *= y;
            }
        }
        out
    }

    /// Analytic point derivative of the differentials.
    pub fn dnu_dy(&self, y: C64, p: &SiegelPoint) -> [C64; 2] {
        let mons = om_lin(p);
        let mut out = [C64::new(0.0, 0.0); 2];
        for (a, comp) in self.nu.iter().enumerate() {
            let mut ypow = C64::new(1.0, 0.0);
            for (j, row) in comp.iter().enumerate().skip(1) {
                for (m, coef) in row.iter().enumerate() {
                    out[a] += coef * mons[m] * ypow * (j as f64);
                }
                if j < Y_DEG {
                    ypow *= y;
                }
            }
        }
        out
    }

    /// Symmetric regular part of the bidifferential.
    pub fn r_part(&self, x: C64, y: C64, p: &SiegelPoint) -> C64 {
        let mons = om_lin(p);
        let mut out = C64::new(0.0, 0.0);
        let mut xpow = C64::new(1.0, 0.0);
        for row in &self.r {
            let mut ypow = C64::new(1.0, 0.0);
            for cell in row {
                for (m, coef) in cell.iter().enumerate() {
                    out += coef * mons[m] * xpow * ypow;
                }
                ypow *= y;
            }
            xpow *= x;
        }
        out
    }

    pub fn omega(&self, x: C64, y: C64, p: &SiegelPoint) -> C64 {
        let mut out = self.r_part(x, y, p);
        if self.pole {
            let d = x - y;
            out += 1.0 / (d * d);
        }
        out
    }

    /// Projective connection derived from the diagonal regular part.
    pub fn s(&self, x: C64, p: &SiegelPoint) -> C64 {
        self.r_part(x, x, p) * 6.0
    }

    /// Scalar test function of the period point.
    pub fn f_scalar(&self, p: &SiegelPoint) -> C64 {
        let mons = om_quad(p);
        self.f
            .iter()
            .zip(mons.iter())
            .map(|(coef, m)| coef * m)
            .sum()
    }
}
