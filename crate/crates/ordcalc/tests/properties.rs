//! Property tests for the relation algebra and the generation machinery.

use proptest::prelude::*;

use ordcalc::genpair::{fixpoint_oracle, generate_normal, generate_prenormal};
use ordcalc::rel::{
    additive_closure, compose, is_left_continuous, preorder_closure, sum, Relation,
};
use ordcalc::wsemi::{make_fixture, FixtureSpec, WSemigroup};

fn arb_relation(n: usize) -> impl Strategy<Value = Relation> {
    proptest::collection::vec(proptest::bool::weighted(0.25), n * n).prop_map(move |bits| {
        let mut r = Relation::empty(n);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                r.insert(i / n, i % n);
            }
        }
        r
    })
}

fn nbar2sq() -> WSemigroup {
    make_fixture(&FixtureSpec::Prod(vec![
        FixtureSpec::Nbar(2),
        FixtureSpec::Nbar(2),
    ]))
    .unwrap()
}

proptest! {
    #[test]
    fn compose_associative(r1 in arb_relation(6), r2 in arb_relation(6), r3 in arb_relation(6)) {
        let left = compose(&compose(&r1, &r2).unwrap(), &r3).unwrap();
        let right = compose(&r1, &compose(&r2, &r3).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn preorder_closure_idempotent_and_monotone(r in arb_relation(6), extra in arb_relation(6)) {
        let c = preorder_closure(&r);
        prop_assert_eq!(preorder_closure(&c), c.clone());
        let bigger = preorder_closure(&r.union(&extra));
        prop_assert!(c.is_subset(&bigger));
    }

    #[test]
    fn additive_closure_is_closed_fixpoint(r in arb_relation(9)) {
        let s = nbar2sq();
        let c = additive_closure(&r, &s.monoid).unwrap();
        prop_assert!(r.is_subset(&c));
        let step = sum(&c, &c, &s.monoid).unwrap();
        prop_assert!(step.is_subset(&c));
        prop_assert_eq!(additive_closure(&c, &s.monoid).unwrap(), c);
    }

    #[test]
    fn generation_matches_oracle(r in arb_relation(9)) {
        // Reflexive prec makes every relation left-continuous.
        let s = nbar2sq();
        prop_assert!(is_left_continuous(&s.prec, &r).unwrap());
        let g = generate_prenormal(&s, &r).unwrap();
        prop_assert_eq!(g.pair.order, fixpoint_oracle(&s, &r, false).unwrap());
        let gn = generate_normal(&s, &r).unwrap();
        prop_assert_eq!(gn.pair.order, fixpoint_oracle(&s, &r, true).unwrap());
    }

    #[test]
    fn generated_order_contains_seed_and_leq(r in arb_relation(9)) {
        let s = nbar2sq();
        let g = generate_normal(&s, &r).unwrap();
        prop_assert!(r.is_subset(&g.pair.order));
        prop_assert!(s.leq().is_subset(&g.pair.order));
    }

    #[test]
    fn shifted_additive_closure_identity(r in arb_relation(9)) {
        // Closing the identity-shifted relation equals shifting the closure:
        // the identity is already additively closed.
        let s = nbar2sq();
        let id = Relation::identity(9);
        let lhs = additive_closure(&sum(&r, &id, &s.monoid).unwrap(), &s.monoid).unwrap();
        let rhs = sum(&additive_closure(&r, &s.monoid).unwrap(), &id, &s.monoid).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_identity_random(r1 in arb_relation(6), r2 in arb_relation(6)) {
        // Generating from r1, then from r2 over the extension, equals
        // generating from the union.
        let s = make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(1),
            FixtureSpec::Nbar(2),
        ]))
        .unwrap();
        let g1 = generate_prenormal(&s, &r1).unwrap();
        let stage2 = WSemigroup::new(s.monoid.clone(), g1.extension.aux.clone()).unwrap();
        let g2 = generate_prenormal(&stage2, &r2).unwrap();
        let gu = generate_prenormal(&s, &r1.union(&r2)).unwrap();
        prop_assert_eq!(&g2.pair.order, &gu.pair.order);
        prop_assert_eq!(&g2.extension.aux, &gu.extension.aux);
    }
}
