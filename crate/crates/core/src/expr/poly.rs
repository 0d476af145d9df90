//! Canonical-form multivariate polynomials over formal atoms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::atom::{Atom, Label};
use super::coeff::Coefficient;

/// Exponents stay tiny at supported sizes; anything past this cap signals a
/// runaway computation rather than a legitimate polynomial.
const EXPONENT_CAP: u32 = 64;

/// A sorted multiset of atoms with positive exponents. The empty monomial is
/// the constant `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Atom, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn atom(a: Atom) -> Self {
        Monomial {
            factors: vec![(a, 1)],
        }
    }

    /// Build from unsorted factors, merging duplicates.
    pub fn from_factors(factors: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        let mut map: BTreeMap<Atom, u32> = BTreeMap::new();
        for (a, e) in factors {
            if e == 0 {
                continue;
            }
            let slot = map.entry(a).or_insert(0);
            *slot = checked_exp(*slot + e);
        }
        Monomial {
            factors: map.into_iter().collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, atom: &Atom) -> u32 {
        self.factors
            .iter()
            .find(|(a, _)| a == atom)
            .map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        // merge two sorted factor lists
        let mut out = Vec::with_capacity(self.factors.len() + rhs.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < rhs.factors.len() {
            match self.factors[i].0.cmp(&rhs.factors[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.factors[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(rhs.factors[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.factors[i].0, checked_exp(self.factors[i].1 + rhs.factors[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&rhs.factors[j..]);
        Monomial { factors: out }
    }

    /// Remove one occurrence of `atom` (exponent decremented, dropped at 0).
    fn without_one(&self, atom: &Atom) -> Monomial {
        let mut factors = self.factors.clone();
        if let Some(pos) = factors.iter().position(|(a, _)| a == atom) {
            if factors[pos].1 > 1 {
                factors[pos].1 -= 1;
            } else {
                factors.remove(pos);
            }
        }
        Monomial { factors }
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.factors.iter().flat_map(|(a, _)| a.labels())
    }

    /// Total exponent of a matching atom family.
    pub fn degree_where(&self, pred: impl Fn(&Atom) -> bool) -> u32 {
        self.factors
            .iter()
            .filter(|(a, _)| pred(a))
            .map(|(_, e)| e)
            .sum()
    }
}

fn checked_exp(e: u32) -> u32 {
    assert!(
        e <= EXPONENT_CAP,
        "atom exponent {e} exceeds the supported cap {EXPONENT_CAP}"
    );
    e
}

/// Canonical polynomial: map monomial -> nonzero coefficient. Two
/// polynomials are equal iff their maps are identical.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalPolynomial {
    terms: BTreeMap<Monomial, Coefficient>,
}

impl FormalPolynomial {
    pub fn zero() -> Self {
        FormalPolynomial::default()
    }

    pub fn one() -> Self {
        FormalPolynomial::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Self {
        let mut p = FormalPolynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn atom(a: Atom) -> Self {
        let mut p = FormalPolynomial::zero();
        p.add_term(Monomial::atom(a), Coefficient::one());
        p
    }

    pub fn term(m: Monomial, c: Coefficient) -> Self {
        let mut p = FormalPolynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Coefficient) -> FormalPolynomial {
        let mut out = FormalPolynomial::zero();
        for (m, q) in self.iter() {
            out.add_term(m.clone(), q * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> FormalPolynomial {
        let mut out = FormalPolynomial::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Derivation: each atom occurrence `F` of each monomial `m` (exponent
    /// counted with multiplicity) contributes `coeff(m) * (m/F) * rule(F)`.
    /// Atoms the rule maps to zero simply drop out, so the result obeys the
    /// Leibniz property by construction.
    pub fn derive(&self, rule: impl Fn(&Atom) -> FormalPolynomial) -> FormalPolynomial {
        let mut out = FormalPolynomial::zero();
        for (m, coeff) in self.iter() {
            for (atom, exp) in m.factors() {
                let image = rule(atom);
                if image.is_zero() {
                    continue;
                }
                let rest = m.without_one(atom);
                let mult = Coefficient::int(i64::from(*exp));
                for (im, ic) in image.iter() {
                    out.add_term(rest.mul(im), &(coeff * ic) * &mult);
                }
            }
        }
        out
    }

    /// Replace every occurrence of `target` (exponent `k` becomes
    /// `replacement^k`) and re-canonicalise.
    pub fn substitute(&self, target: &Atom, replacement: &FormalPolynomial) -> FormalPolynomial {
        let mut out = FormalPolynomial::zero();
        for (m, coeff) in self.iter() {
            let exp = m.exponent_of(target);
            if exp == 0 {
                out.add_term(m.clone(), coeff.clone());
                continue;
            }
            let rest = Monomial::from_factors(
                m.factors()
                    .iter()
                    .filter(|(a, _)| a != target)
                    .copied(),
            );
            for (rm, rc) in replacement.pow(exp).iter() {
                out.add_term(rest.mul(rm), coeff * rc);
            }
        }
        out
    }

    /// Apply a label permutation to every atom.
    pub fn relabel(&self, map: impl Fn(Label) -> Label) -> FormalPolynomial {
        let mut out = FormalPolynomial::zero();
        for (m, coeff) in self.iter() {
            let relabelled =
                Monomial::from_factors(m.factors().iter().map(|(a, e)| (a.relabel(&map), *e)));
            out.add_term(relabelled, coeff.clone());
        }
        out
    }

    /// Sub-polynomial of terms whose monomials satisfy the predicate.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> FormalPolynomial {
        let mut out = FormalPolynomial::zero();
        for (m, c) in self.iter() {
            if pred(m) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// True if any monomial contains an atom matching the predicate.
    pub fn contains_atom(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(a, _)| pred(a)))
    }

    /// All labels occurring in the polynomial, sorted and deduplicated.
    pub fn labels(&self) -> Vec<Label> {
        let mut labels: Vec<Label> = self.terms.keys().flat_map(|m| m.labels()).collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }
}

impl Add for &FormalPolynomial {
    type Output = FormalPolynomial;
    fn add(self, rhs: &FormalPolynomial) -> FormalPolynomial {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FormalPolynomial {
    type Output = FormalPolynomial;
    fn sub(self, rhs: &FormalPolynomial) -> FormalPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &FormalPolynomial {
    type Output = FormalPolynomial;
    fn neg(self) -> FormalPolynomial {
        FormalPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &FormalPolynomial {
    type Output = FormalPolynomial;
    fn mul(self, rhs: &FormalPolynomial) -> FormalPolynomial {
        let mut out = FormalPolynomial::zero();
        for (m1, c1) in self.iter() {
            for (m2, c2) in rhs.iter() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for FormalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::sexpr::to_sexpr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn om12() -> Atom {
        Atom::om_unchecked(1, 2)
    }

    #[test]
    fn additive_identity() {
        let p = FormalPolynomial::atom(Atom::s(1)).scale(&Coefficient::c_pow_frac(1, 1, 12));
        assert_eq!(&p + &FormalPolynomial::zero(), p);
    }

    #[test]
    fn like_term_collection() {
        let p = FormalPolynomial::atom(Atom::s(1)).scale(&Coefficient::c_pow_frac(1, 1, 12));
        let expected = FormalPolynomial::atom(Atom::s(1)).scale(&Coefficient::c_pow_frac(1, 1, 6));
        assert_eq!(&p + &p, expected);
    }

    #[test]
    fn multiplicative_identity_and_exponent_merge() {
        let p = FormalPolynomial::atom(om12());
        assert_eq!(&p * &FormalPolynomial::one(), p);
        let sq = &p * &p;
        let expected = FormalPolynomial::term(
            Monomial::from_factors([(om12(), 2)]),
            Coefficient::one(),
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn coefficient_product_in_qc() {
        // ((c/2) Om(1,2)^2) * ((c/12) S(3)) = (c^2/24) Om(1,2)^2 S(3)
        let a = FormalPolynomial::term(
            Monomial::from_factors([(om12(), 2)]),
            Coefficient::c_pow_frac(1, 1, 2),
        );
        let b = FormalPolynomial::atom(Atom::s(3)).scale(&Coefficient::c_pow_frac(1, 1, 12));
        let expected = FormalPolynomial::term(
            Monomial::from_factors([(om12(), 2), (Atom::s(3), 1)]),
            Coefficient::c_pow_frac(2, 1, 24),
        );
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn derive_power_rule() {
        // d(Om(2,3)^2) = 2 Om(2,3) R(Om(2,3)) with R(Om(2,3)) = S(1)
        let p = FormalPolynomial::term(
            Monomial::from_factors([(Atom::om_unchecked(2, 3), 2)]),
            Coefficient::one(),
        );
        let d = p.derive(|a| match a {
            Atom::Om(2, 3) => FormalPolynomial::atom(Atom::s(1)),
            _ => FormalPolynomial::zero(),
        });
        let expected = FormalPolynomial::term(
            Monomial::from_factors([(Atom::om_unchecked(2, 3), 1), (Atom::s(1), 1)]),
            Coefficient::int(2),
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn derive_kills_constants() {
        let p = FormalPolynomial::constant(Coefficient::c_pow_frac(3, 7, 5));
        assert!(p.derive(|_| FormalPolynomial::one()).is_zero());
    }

    #[test]
    fn substitute_distributes() {
        // (c/12 S(1)) * (c/12 S(2)) with S(1) -> S(1)+X(1)
        let s1 = FormalPolynomial::atom(Atom::s(1)).scale(&Coefficient::c_pow_frac(1, 1, 12));
        let s2 = FormalPolynomial::atom(Atom::s(2)).scale(&Coefficient::c_pow_frac(1, 1, 12));
        let p = &s1 * &s2;
        let repl = &FormalPolynomial::atom(Atom::s(1)) + &FormalPolynomial::atom(Atom::x(1));
        let got = p.substitute(&Atom::s(1), &repl);
        let c2 = Coefficient::c_pow_frac(2, 1, 144);
        let mut expected = FormalPolynomial::term(
            Monomial::from_factors([(Atom::s(1), 1), (Atom::s(2), 1)]),
            c2.clone(),
        );
        expected.add_term(Monomial::from_factors([(Atom::x(1), 1), (Atom::s(2), 1)]), c2);
        assert_eq!(got, expected);
    }

    #[test]
    fn substitute_no_occurrence() {
        let p = FormalPolynomial::atom(om12());
        assert_eq!(p.substitute(&Atom::s(1), &FormalPolynomial::zero()), p);
    }

    #[test]
    fn relabel_unordered_pair() {
        let p = FormalPolynomial::atom(om12());
        let swapped = p.relabel(|l| match l {
            1 => 2,
            2 => 1,
            other => other,
        });
        assert_eq!(swapped, p);
        let s = FormalPolynomial::atom(Atom::s(1));
        assert_eq!(
            s.relabel(|l| if l == 1 { 2 } else if l == 2 { 1 } else { l }),
            FormalPolynomial::atom(Atom::s(2))
        );
    }
}
