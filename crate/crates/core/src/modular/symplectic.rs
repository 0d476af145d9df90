//! Exact integral symplectic 4x4 block matrices and seeded random words in
//! the standard generators.

use rand::Rng;
use serde::Serialize;

use super::linalg::{iadd, iinv_unimodular, imul, ineg, itranspose, IMat2, I2, Z2};
use crate::error::ModularError;

pub const MAX_WORD_LENGTH: usize = 12;

/// Integral block matrix `[[A, B], [C, D]]` satisfying the five symplectic
/// block relations exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticElement {
    pub a: IMat2,
    pub b: IMat2,
    pub c: IMat2,
    pub d: IMat2,
    /// Generator word this element was built from, for reproduction.
    pub word: Vec<String>,
}

impl SymplecticElement {
    pub fn identity() -> Self {
        SymplecticElement {
            a: I2,
            b: Z2,
            c: Z2,
            d: I2,
            word: vec![],
        }
    }

    /// The involution `[[0, I], [-I, 0]]`.
    pub fn j() -> Self {
        SymplecticElement {
            a: Z2,
            b: I2,
            c: ineg(&I2),
            d: Z2,
            word: vec!["J".into()],
        }
    }

    /// Translation `[[I, S], [0, I]]` for symmetric integer `S`.
    pub fn translation(s: IMat2) -> Self {
        assert_eq!(s[0][1], s[1][0], "translation block must be symmetric");
        SymplecticElement {
            a: I2,
            b: s,
            c: Z2,
            d: I2,
            word: vec![format!("T[{},{},{}]", s[0][0], s[0][1], s[1][1])],
        }
    }

    /// Rotation `[[U, 0], [0, (U^T)^-1]]` for unimodular `U`.
    pub fn rotation(u: IMat2) -> Self {
        let d = iinv_unimodular(&itranspose(&u));
        SymplecticElement {
            a: u,
            b: Z2,
            c: Z2,
            d,
            word: vec![format!("R[{},{},{},{}]", u[0][0], u[0][1], u[1][0], u[1][1])],
        }
    }

    pub fn compose(&self, rhs: &SymplecticElement) -> SymplecticElement {
        let mut word = self.word.clone();
        word.extend(rhs.word.iter().cloned());
        SymplecticElement {
            a: iadd(&imul(&self.a, &rhs.a), &imul(&self.b, &rhs.c)),
            b: iadd(&imul(&self.a, &rhs.b), &imul(&self.b, &rhs.d)),
            c: iadd(&imul(&self.c, &rhs.a), &imul(&self.d, &rhs.c)),
            d: iadd(&imul(&self.c, &rhs.b), &imul(&self.d, &rhs.d)),
            word,
        }
    }

    /// Check all five block relations in exact integer arithmetic.
    pub fn validate(&self) -> Result<(), ModularError> {
        let at = itranspose(&self.a);
        let bt = itranspose(&self.b);
        let ct = itranspose(&self.c);
        let dt = itranspose(&self.d);
        let checks: [(&str, IMat2, IMat2); 5] = [
            ("A^T D - C^T B = I", iadd(&imul(&at, &self.d), &ineg(&imul(&ct, &self.b))), I2),
            ("A B^T = B A^T", imul(&self.a, &bt), imul(&self.b, &at)),
            ("C D^T = D C^T", imul(&self.c, &dt), imul(&self.d, &ct)),
            ("A^T C = C^T A", imul(&at, &self.c), imul(&ct, &self.a)),
            ("B^T D = D^T B", imul(&bt, &self.d), imul(&dt, &self.b)),
        ];
        for (name, lhs, rhs) in checks {
            if lhs != rhs {
                return Err(ModularError::InvalidElement(format!(
                    "{name} violated by word {:?}",
                    self.word
                )));
            }
        }
        Ok(())
    }
}

/// Fixed unimodular matrices for the rotation generator.
const UNIMODULAR_SET: [IMat2; 5] = [
    [[1, 1], [0, 1]],
    [[1, -1], [0, 1]],
    [[1, 0], [1, 1]],
    [[0, 1], [-1, 0]],
    [[-1, 0], [0, -1]],
];

/// Random word of `word_length` generators, validated exactly. Longer words
/// make `C*Omega + D` poorly conditioned, hence the guard.
pub fn random_symplectic(
    rng: &mut impl Rng,
    word_length: usize,
) -> Result<SymplecticElement, ModularError> {
    if word_length > MAX_WORD_LENGTH {
        return Err(ModularError::WordTooLong(word_length));
    }
    let mut out = SymplecticElement::identity();
    for _ in 0..word_length {
        let generator = match rng.gen_range(0..3u8) {
            0 => SymplecticElement::j(),
            1 => {
                let s11 = rng.gen_range(-2..=2i64);
                let s12 = rng.gen_range(-2..=2i64);
                let s22 = rng.gen_range(-2..=2i64);
                SymplecticElement::translation([[s11, s12], [s12, s22]])
            }
            _ => {
                let u = UNIMODULAR_SET[rng.gen_range(0..UNIMODULAR_SET.len())];
                SymplecticElement::rotation(u)
            }
        };
        out = out.compose(&generator);
    }
    out.validate()?;
    Ok(out)
}
