mod common;

use arcmult::extalg::{self, ExtElem};
use arcmult::groebner::standard_monomials;
use arcmult::{arc_dimension, DPoly};
use common::*;
use proptest::prelude::*;

fn arb_ext() -> impl Strategy<Value = ExtElem> {
    let gens = prop::collection::vec((0u32..2, 0u32..3), 0..=3);
    prop::collection::vec((gens.clone(), gens, -3i64..=3), 0..=3).prop_map(|terms| {
        terms.into_iter().fold(ExtElem::zero(), |acc, (e, x, c)| {
            let mut e = e;
            let mut x = x;
            e.sort();
            e.dedup();
            x.sort();
            x.dedup();
            acc.add(&ExtElem::from_gens(&e, &x, q(c)).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(pinned(37))]

    #[test]
    fn phi_is_multiplicative(p in arb_poly(1, 3, 3, 3), r in arb_poly(1, 3, 3, 3), m in 2u32..=3) {
        let lhs = extalg::phi(&(&p * &r), m).unwrap();
        let rhs = extalg::phi(&p, m).unwrap().mul(&extalg::phi(&r, m).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_is_additive_and_even(p in arb_poly(1, 3, 3, 3), r in arb_poly(1, 3, 3, 3), m in 2u32..=3) {
        let (pp, pr) = (extalg::phi(&p, m).unwrap(), extalg::phi(&r, m).unwrap());
        prop_assert_eq!(extalg::phi(&(&p + &r), m).unwrap(), pp.add(&pr));
        prop_assert!(pp.is_even());
        prop_assert_eq!(pp.mul(&pr), pr.mul(&pp));
    }

    #[test]
    fn phi_commutes_with_derivation(p in arb_poly(1, 3, 3, 3), m in 2u32..=3) {
        let lhs = extalg::phi(&p.derive_once(), m).unwrap();
        let rhs = extalg::phi(&p, m).unwrap().ext_derive().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ext_mul_is_associative(a in arb_ext(), b in arb_ext(), c in arb_ext()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn ext_derive_is_a_derivation(a in arb_ext(), b in arb_ext()) {
        let lhs = a.mul(&b).ext_derive().unwrap();
        let rhs = a.ext_derive().unwrap().mul(&b).add(&a.mul(&b.ext_derive().unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_congruent(p in arb_poly(1, 3, 3, 3), m in 2u32..=3) {
        let r = extalg::reduce_by_power_derivatives(&p, m).unwrap();
        prop_assert_eq!(extalg::phi(&r, m).unwrap(), extalg::phi(&p, m).unwrap());
        for mono in r.monomials() {
            prop_assert!(extalg::is_reduced_support(mono, m));
        }
    }
}

proptest! {
    #![proptest_config(proptest::test_runner::Config { cases: 50, ..pinned(41) })]

    /// Random combinations of derivatives of `x^m` up to order 8 vanish.
    #[test]
    fn kernel_soundness(
        m in 2u32..=3,
        coeffs in prop::collection::vec((0u32..=8, arb_poly(1, 2, 1, 2)), 1..=4),
    ) {
        let xm = x(0).pow(m);
        let member = coeffs.iter().fold(DPoly::zero(), |acc, (j, c)| &acc + &(&xm.derive(*j) * c));
        prop_assert!(extalg::phi(&member, m).unwrap().is_zero());
    }
}

#[test]
fn kernel_completeness_on_standard_monomials() {
    for m in 2..=3u32 {
        let r = arc_dimension(&[x(0).pow(m)], 2, 14).unwrap();
        assert!(r.stabilized);
        for s in standard_monomials(&r.basis).unwrap() {
            assert!(!extalg::phi(&DPoly::mono(s.clone()), m).unwrap().is_zero(), "m = {m}: {s:?}");
        }
    }
}
