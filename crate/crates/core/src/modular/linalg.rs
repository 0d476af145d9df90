//! Minimal fixed-size complex/integer linear algebra for the genus-two
//! block matrices.

use num_complex::Complex64;

pub type C64 = Complex64;

/// 2x2 integer matrix.
pub type IMat2 = [[i64; 2]; 2];

pub const I2: IMat2 = [[1, 0], [0, 1]];
pub const Z2: IMat2 = [[0, 0], [0, 0]];

pub fn imul(a: &IMat2, b: &IMat2) -> IMat2 {
    let mut out = Z2;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn iadd(a: &IMat2, b: &IMat2) -> IMat2 {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn ineg(a: &IMat2) -> IMat2 {
    [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]]
}

pub fn itranspose(a: &IMat2) -> IMat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn idet(a: &IMat2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Exact inverse of a unimodular integer matrix.
pub fn iinv_unimodular(a: &IMat2) -> IMat2 {
    let det = idet(a);
    assert!(det == 1 || det == -1, "matrix is not unimodular");
    let adj = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]];
    [
        [adj[0][0] * det, adj[0][1] * det],
        [adj[1][0] * det, adj[1][1] * det],
    ]
}

/// 2x2 complex matrix with the handful of operations the checks need.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2(pub [[C64; 2]; 2]);

impl CMat2 {
    pub fn zero() -> Self {
        CMat2([[C64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = CMat2::zero();
        m.0[0][0] = C64::new(1.0, 0.0);
        m.0[1][1] = C64::new(1.0, 0.0);
        m
    }

    pub fn from_int(a: &IMat2) -> Self {
        CMat2([
            [C64::new(a[0][0] as f64, 0.0), C64::new(a[0][1] as f64, 0.0)],
            [C64::new(a[1][0] as f64, 0.0), C64::new(a[1][1] as f64, 0.0)],
        ])
    }

    pub fn mul(&self, rhs: &CMat2) -> CMat2 {
        let mut out = CMat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMat2) -> CMat2 {
        let mut out = CMat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &CMat2) -> CMat2 {
        let mut out = CMat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat2 {
        let mut out = *self;
        for row in &mut out.0 {
            for v in row {
                *v *= s;
            }
        }
        out
    }

    pub fn transpose(&self) -> CMat2 {
        CMat2([
            [self.0[0][0], self.0[1][0]],
            [self.0[0][1], self.0[1][1]],
        ])
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn inverse(&self) -> CMat2 {
        let det = self.det();
        CMat2([
            [self.0[1][1] / det, -self.0[0][1] / det],
            [-self.0[1][0] / det, self.0[0][0] / det],
        ])
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Outer product of two row vectors: `col^T * row`.
    pub fn outer(col: [C64; 2], row: [C64; 2]) -> CMat2 {
        CMat2([
            [col[0] * row[0], col[0] * row[1]],
            [col[1] * row[0], col[1] * row[1]],
        ])
    }
}

/// `row * m` for a row 2-vector.
pub fn row_mat(row: [C64; 2], m: &CMat2) -> [C64; 2] {
    [
        row[0] * m.0[0][0] + row[1] * m.0[1][0],
        row[0] * m.0[0][1] + row[1] * m.0[1][1],
    ]
}

/// `u * m * v^T` for row 2-vectors `u`, `v`.
pub fn bilinear(u: [C64; 2], m: &CMat2, v: [C64; 2]) -> C64 {
    let um = row_mat(u, m);
    um[0] * v[0] + um[1] * v[1]
}

/// Determinant of two stacked row 2-vectors.
pub fn det_rows(top: [C64; 2], bottom: [C64; 2]) -> C64 {
    top[0] * bottom[1] - top[1] * bottom[0]
}

/// Invert a 3x3 complex matrix by Gaussian elimination with partial
/// pivoting. Used for the period-coordinate Jacobian.
pub fn inv3(m: &[[C64; 3]; 3]) -> [[C64; 3]; 3] {
    let mut a = *m;
    let mut inv = [[C64::new(0.0, 0.0); 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| {
                a[i][col]
                    .norm()
                    .partial_cmp(&a[j][col].norm())
                    .expect("finite pivot")
            })
            .expect("nonempty range");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        assert!(p.norm() > 1e-14, "singular Jacobian");
        for j in 0..3 {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for row in 0..3 {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            for j in 0..3 {
                let acj = a[col][j];
                let icj = inv[col][j];
                a[row][j] -= factor * acj;
                inv[row][j] -= factor * icj;
            }
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unimodular_inverse_is_exact() {
        let u = [[1, 1], [0, 1]];
        assert_eq!(imul(&u, &iinv_unimodular(&u)), I2);
        let v = [[0, 1], [-1, 0]];
        assert_eq!(imul(&v, &iinv_unimodular(&v)), I2);
    }

    #[test]
    fn cmat_inverse() {
        let m = CMat2([
            [C64::new(1.0, 2.0), C64::new(0.5, 0.0)],
            [C64::new(0.0, -1.0), C64::new(2.0, 1.0)],
        ]);
        let prod = m.mul(&m.inverse());
        assert!(prod.sub(&CMat2::identity()).max_abs() < 1e-14);
    }

    #[test]
    fn inv3_roundtrip() {
        let m = [
            [C64::new(2.0, 1.0), C64::new(0.0, 0.3), C64::new(1.0, 0.0)],
            [C64::new(0.1, 0.0), C64::new(1.5, -1.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 1.0), C64::new(0.2, 0.0), C64::new(3.0, 0.5)],
        ];
        let inv = inv3(&m);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..3 {
                    acc += m[i][k] * inv[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((acc - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }
}
