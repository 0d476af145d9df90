//! Property tests for the formal polynomial ring, its derivations, label
//! actions and the text round trip.

use g2v_core::expr::{sexpr, Atom, Coefficient, FormalPolynomial, Label, Monomial};
use g2v_core::graphs::{census, enumerate_graphs};
use g2v_core::ward::rewrite_rule;
use proptest::prelude::*;

fn arb_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (1u8..=4).prop_map(Atom::s),
        (1u8..=4, 1u8..=4)
            .prop_filter("distinct labels", |(i, j)| i != j)
            .prop_map(|(i, j)| Atom::om(i, j).unwrap()),
        (1u8..=2, 1u8..=4).prop_map(|(a, i)| Atom::nu(a, i)),
        (1u8..=2, 1u8..=2).prop_map(|(a, b)| Atom::alpha(a, b)),
        (1u8..=4, 1u8..=4).prop_map(|(i, j)| Atom::p4(i, j)),
        (1u8..=4).prop_map(Atom::x),
    ]
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((arb_atom(), 1u32..=3), 0..4)
        .prop_map(Monomial::from_factors)
}

fn arb_coeff() -> impl Strategy<Value = Coefficient> {
    prop::collection::vec((0u32..=3, -6i64..=6, 1i64..=4), 1..3).prop_map(|parts| {
        let mut out = Coefficient::zero();
        for (deg, num, den) in parts {
            out = &out + &Coefficient::c_pow_frac(deg, num, den);
        }
        out
    })
}

fn arb_poly() -> impl Strategy<Value = FormalPolynomial> {
    prop::collection::vec((arb_monomial(), arb_coeff()), 0..4).prop_map(|terms| {
        let mut out = FormalPolynomial::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    })
}

/// Permutations of the label window used by `arb_atom`.
fn arb_permutation() -> impl Strategy<Value = Vec<Label>> {
    Just(vec![1u8, 2, 3, 4]).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_commutes(p in arb_poly(), q in arb_poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
    }

    #[test]
    fn addition_associates(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
    }

    #[test]
    fn multiplication_commutes(p in arb_poly(), q in arb_poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn multiplication_associates(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn multiplication_distributes(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn additive_and_multiplicative_units(p in arb_poly()) {
        prop_assert_eq!(&p + &FormalPolynomial::zero(), p.clone());
        prop_assert_eq!(&p * &FormalPolynomial::one(), p.clone());
        prop_assert!((&p - &p).is_zero());
        prop_assert!((&p * &FormalPolynomial::zero()).is_zero());
    }

    #[test]
    fn derivation_satisfies_leibniz(p in arb_poly(), q in arb_poly()) {
        // insertion label fresh with respect to the generator window
        let rule = |a: &Atom| rewrite_rule(a, 9);
        let lhs = (&p * &q).derive(rule);
        let rhs = &(&p.derive(rule) * &q) + &(&p * &q.derive(rule));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_is_linear(p in arb_poly(), q in arb_poly()) {
        // insertion label fresh with respect to the generator window
        let rule = |a: &Atom| rewrite_rule(a, 9);
        prop_assert_eq!(
            (&p + &q).derive(rule),
            &p.derive(rule) + &q.derive(rule)
        );
    }

    #[test]
    fn relabel_is_a_ring_map(p in arb_poly(), q in arb_poly(), perm in arb_permutation()) {
        let map = |l: Label| perm[l as usize - 1];
        prop_assert_eq!((&p * &q).relabel(map), &p.relabel(map) * &q.relabel(map));
        prop_assert_eq!((&p + &q).relabel(map), &p.relabel(map) + &q.relabel(map));
    }

    #[test]
    fn relabel_composes_as_an_action(p in arb_poly(), s in arb_permutation(), t in arb_permutation()) {
        let first = |l: Label| s[l as usize - 1];
        let second = |l: Label| t[l as usize - 1];
        prop_assert_eq!(
            p.relabel(first).relabel(second),
            p.relabel(|l| second(first(l)))
        );
    }

    #[test]
    fn text_form_round_trips(p in arb_poly()) {
        let text = sexpr::to_sexpr(&p);
        let back = sexpr::from_sexpr(&text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn substitution_distributes_over_sums(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        let target = Atom::s(1);
        prop_assert_eq!(
            (&p + &q).substitute(&target, &r),
            &p.substitute(&target, &r) + &q.substitute(&target, &r)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn graph_inverse_is_an_involution(n in 1usize..=5) {
        for g in enumerate_graphs(n).unwrap() {
            prop_assert_eq!(g.inverse().inverse(), g);
        }
    }
}

/// Closed-form total count: sum over k of C(n,k)^2 * k!.
fn total_partial_permutations(n: u64) -> u64 {
    let choose = |n: u64, k: u64| -> u64 {
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    };
    let fact = |k: u64| (1..=k).product::<u64>().max(1);
    (0..=n).map(|k| choose(n, k).pow(2) * fact(k)).sum()
}

#[test]
fn census_totals_match_the_closed_form() {
    for n in 1..=6 {
        assert_eq!(census(n).unwrap().total(), total_partial_permutations(n as u64));
    }
}
