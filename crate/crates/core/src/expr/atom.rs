//! Formal atoms appearing in graph weights and operator polynomials.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::ExprError;

/// Point label `i` in `z_i`. Labels are small positive integers.
pub type Label = u8;

/// Holomorphic differential index, `1` or `2`.
pub type NuIndex = u8;

/// A formal atom. The variant order fixes the total atom order used for
/// monomial canonicalisation: `S < Om < Nu < Alpha < P4 < X`, then
/// lexicographic on indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// Projective connection `s(z_i)`.
    S(Label),
    /// Bidifferential `omega(z_i, z_j)`, unordered pair stored sorted, `i != j`.
    Om(Label, Label),
    /// Holomorphic differential `nu_a(z_i)`.
    Nu(NuIndex, Label),
    /// Chain parameter `alpha_{ab}` (stands for `d/dOmega_{ab}` under the
    /// linear reinterpretation), unordered index pair stored sorted.
    Alpha(NuIndex, NuIndex),
    /// Generalised Weierstrass cancellation witness, argument order kept:
    /// the first argument is the recursion insertion point.
    P4(Label, Label),
    /// Schwarzian derivative marker `{phi(z_i), z_i}`.
    X(Label),
}

impl Atom {
    pub fn s(i: Label) -> Atom {
        Atom::S(i)
    }

    /// `omega(z_i, z_j)`; rejects `i == j`.
    pub fn om(i: Label, j: Label) -> Result<Atom, ExprError> {
        if i == j {
            return Err(ExprError::DiagonalOmega(i));
        }
        Ok(Atom::Om(i.min(j), i.max(j)))
    }

    /// `omega(z_i, z_j)` for statically distinct labels.
    pub fn om_unchecked(i: Label, j: Label) -> Atom {
        Atom::om(i, j).expect("omega atom requires distinct labels")
    }

    pub fn nu(a: NuIndex, i: Label) -> Atom {
        debug_assert!(a == 1 || a == 2, "nu index out of range");
        Atom::Nu(a, i)
    }

    pub fn alpha(a: NuIndex, b: NuIndex) -> Atom {
        Atom::Alpha(a.min(b), a.max(b))
    }

    pub fn p4(i: Label, j: Label) -> Atom {
        Atom::P4(i, j)
    }

    pub fn x(i: Label) -> Atom {
        Atom::X(i)
    }

    /// All labels mentioned by the atom (not `alpha` indices).
    pub fn labels(&self) -> impl Iterator<Item = Label> {
        let pair: [Option<Label>; 2] = match *self {
            Atom::S(i) | Atom::X(i) => [Some(i), None],
            Atom::Om(i, j) | Atom::P4(i, j) => [Some(i), Some(j)],
            Atom::Nu(_, i) => [Some(i), None],
            Atom::Alpha(_, _) => [None, None],
        };
        pair.into_iter().flatten()
    }

    /// Apply a label map, re-sorting unordered pairs.
    pub fn relabel(&self, map: impl Fn(Label) -> Label) -> Atom {
        match *self {
            Atom::S(i) => Atom::S(map(i)),
            Atom::Om(i, j) => Atom::om_unchecked(map(i), map(j)),
            Atom::Nu(a, i) => Atom::Nu(a, map(i)),
            Atom::Alpha(a, b) => Atom::Alpha(a, b),
            Atom::P4(i, j) => Atom::P4(map(i), map(j)),
            Atom::X(i) => Atom::X(map(i)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::S(i) => write!(f, "(S {i})"),
            Atom::Om(i, j) => write!(f, "(Om {i} {j})"),
            Atom::Nu(a, i) => write!(f, "(Nu {a} {i})"),
            Atom::Alpha(a, b) => write!(f, "(Al {a} {b})"),
            Atom::P4(i, j) => write!(f, "(P4 {i} {j})"),
            Atom::X(i) => write!(f, "(X {i})"),
        }
    }
}
