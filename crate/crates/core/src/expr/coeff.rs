//! Exact coefficients: univariate polynomials in the central charge `c`
//! over the rationals.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A polynomial in `c` with rational coefficients, stored degree -> rational.
/// Zero coefficients are never stored; rationals are kept in lowest terms
/// with positive denominator (num's `BigRational` normalises on construction).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Coefficient {
    terms: BTreeMap<u32, BigRational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn one() -> Self {
        Coefficient::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Coefficient::monomial(0, q)
    }

    /// `q * c^deg`.
    pub fn monomial(deg: u32, q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(deg, q);
        }
        Coefficient { terms }
    }

    /// `(num/den) * c^deg` from machine integers.
    pub fn c_pow_frac(deg: u32, num: i64, den: i64) -> Self {
        Coefficient::monomial(deg, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Plain rational `num/den`.
    pub fn frac(num: i64, den: i64) -> Self {
        Coefficient::c_pow_frac(0, num, den)
    }

    pub fn int(n: i64) -> Self {
        Coefficient::frac(n, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|q| q.is_one())
    }

    /// Iterate (degree, rational) pairs in ascending degree.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.terms.iter().map(|(d, q)| (*d, q))
    }

    /// Evaluate at a rational value of `c`.
    pub fn eval(&self, c: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        let mut last = 0u32;
        for (deg, q) in self.iter() {
            for _ in last..deg {
                pow = &pow * c;
            }
            last = deg;
            acc += q * &pow;
        }
        acc
    }

    fn insert_add(&mut self, deg: u32, q: BigRational) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(deg) {
            Entry::Vacant(e) => {
                e.insert(q);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += q;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (deg, q) in rhs.iter() {
            out.insert_add(deg, q.clone());
        }
        out
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        for (deg, q) in rhs.iter() {
            self.insert_add(deg, q.clone());
        }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(d, q)| (*d, -q)).collect(),
        }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (d1, q1) in self.iter() {
            for (d2, q2) in rhs.iter() {
                out.insert_add(d1 + d2, q1 * q2);
            }
        }
        out
    }
}

impl fmt::Display for Coefficient {
    /// Human-readable form, e.g. `c/12` or `1 + c^2/144`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (deg, q)) in self.iter().enumerate() {
            if idx > 0 {
                write!(f, "{}", if q.is_negative() { " - " } else { " + " })?;
            } else if q.is_negative() {
                write!(f, "-")?;
            }
            let q = q.abs();
            let num = q.numer();
            let den = q.denom();
            match (deg, num.is_one()) {
                (0, _) => write!(f, "{q}")?,
                (1, true) => write!(f, "c")?,
                (1, false) => write!(f, "{num}c")?,
                (d, true) => write!(f, "c^{d}")?,
                (d, false) => write!(f, "{num}c^{d}")?,
            }
            if deg > 0 && !den.is_one() {
                write!(f, "/{den}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn like_terms_collect_and_cancel() {
        let a = Coefficient::c_pow_frac(1, 1, 12);
        let sum = &a + &a;
        assert_eq!(sum, Coefficient::c_pow_frac(1, 1, 6));
        assert!((&sum - &sum).is_zero());
    }

    #[test]
    fn product_adds_degrees() {
        let a = Coefficient::c_pow_frac(1, 1, 2);
        let b = Coefficient::c_pow_frac(1, 1, 12);
        assert_eq!(&a * &b, Coefficient::c_pow_frac(2, 1, 24));
    }

    #[test]
    fn eval_at_rational_point() {
        // 1 + c/2 at c = -22/5 -> -6/5
        let p = &Coefficient::one() + &Coefficient::c_pow_frac(1, 1, 2);
        let c = BigRational::new(BigInt::from(-22), BigInt::from(5));
        assert_eq!(p.eval(&c), BigRational::new(BigInt::from(-6), BigInt::from(5)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Coefficient::c_pow_frac(1, 1, 12).to_string(), "c/12");
        assert_eq!(Coefficient::c_pow_frac(2, 1, 144).to_string(), "c^2/144");
        assert_eq!(Coefficient::frac(-3, 4).to_string(), "-3/4");
    }
}
