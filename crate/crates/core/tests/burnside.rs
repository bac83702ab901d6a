use std::sync::Arc;

use eqalg::tambara::{burnside_class, norm_effective, norm_virtual, restrict_b, transfer, BurnsideElement, MarksVector};
use eqalg::{Caps, FiniteGroup, GSet};
use num_bigint::BigInt;
use proptest::prelude::*;

fn group(i: usize) -> Arc<FiniteGroup> {
    Arc::new(match i % 6 {
        0 => FiniteGroup::cyclic(2),
        1 => FiniteGroup::cyclic(3),
        2 => FiniteGroup::cyclic(4),
        3 => FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        4 => FiniteGroup::symmetric(3),
        _ => FiniteGroup::cyclic(6),
    })
}

fn element(g: &Arc<FiniteGroup>, raw: &[i64]) -> BurnsideElement {
    let n = g.lattice().len();
    BurnsideElement::from_i64(g, &raw.iter().cycle().take(n).copied().collect::<Vec<_>>()).unwrap()
}

/// Fixed points counted straight off the action table.
fn brute_marks(x: &GSet) -> Vec<BigInt> {
    let g = x.group();
    (0..g.lattice().len())
        .map(|c| {
            let h = g.lattice().representative(c);
            let fixed = (0..x.size()).filter(|&p| h.elements().iter().all(|&e| x.act(e, p) == p)).count();
            BigInt::from(fixed)
        })
        .collect()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..=6)
}

fn effective() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..=2, 1..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marks_are_multiplicative(gi in 0usize..6, a in coeffs(), b in coeffs()) {
        let g = group(gi);
        let (x, y) = (element(&g, &a), element(&g, &b));
        let lhs = x.mul(&y).unwrap().marks().values;
        let rhs: Vec<BigInt> = x.marks().values.iter().zip(&y.marks().values).map(|(p, q)| p * q).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unmarks_inverts_marks(gi in 0usize..6, a in coeffs()) {
        let x = element(&group(gi), &a);
        prop_assert_eq!(x.marks().unmarks().unwrap(), x);
    }

    #[test]
    fn marks_of_effective_classes_count_fixed_points(gi in 0usize..6, a in effective()) {
        let x = element(&group(gi), &a).to_gset().unwrap();
        prop_assert_eq!(burnside_class(&x).marks().values, brute_marks(&x));
    }

    #[test]
    fn products_match_the_product_gset(gi in 0usize..6, a in effective(), b in effective()) {
        let g = group(gi);
        let (x, y) = (element(&g, &a), element(&g, &b));
        let prod = x.to_gset().unwrap().product(&y.to_gset().unwrap());
        prop_assert_eq!(burnside_class(&prod), x.mul(&y).unwrap());
    }

    #[test]
    fn restriction_transfer_and_norm_laws(gi in 0usize..6, class in 0usize..10, a in coeffs(), b in coeffs(), c in coeffs()) {
        let g = group(gi);
        let h = g.lattice().representative(class % g.lattice().len()).clone();
        let incl = g.embed(&h);
        let small = incl.source().clone();
        let (x, y) = (element(&small, &a), element(&small, &b));
        let z = element(&g, &c);
        // transfer is additive
        prop_assert_eq!(transfer(&incl, &x.add(&y).unwrap()).unwrap(), transfer(&incl, &x).unwrap().add(&transfer(&incl, &y).unwrap()).unwrap());
        // restriction is a ring map
        let w = element(&g, &b);
        prop_assert_eq!(restrict_b(&incl, &z.mul(&w).unwrap()).unwrap(), restrict_b(&incl, &z).unwrap().mul(&restrict_b(&incl, &w).unwrap()).unwrap());
        prop_assert_eq!(restrict_b(&incl, &BurnsideElement::one(&g)).unwrap(), BurnsideElement::one(&small));
        // norm is multiplicative and unital
        prop_assert_eq!(norm_virtual(&incl, &x.mul(&y).unwrap()).unwrap(), norm_virtual(&incl, &x).unwrap().mul(&norm_virtual(&incl, &y).unwrap()).unwrap());
        prop_assert_eq!(norm_virtual(&incl, &BurnsideElement::one(&small)).unwrap(), BurnsideElement::one(&g));
        // projection formula
        let lhs = transfer(&incl, &restrict_b(&incl, &z).unwrap().mul(&x).unwrap()).unwrap();
        prop_assert_eq!(lhs, z.mul(&transfer(&incl, &x).unwrap()).unwrap());
    }

    #[test]
    fn norms_of_sums_match_sections(gi in 0usize..5, class in 0usize..10, a in effective(), b in effective()) {
        let g = group(gi);
        let h = g.lattice().representative(class % g.lattice().len()).clone();
        prop_assume!(g.order() / h.order() <= 3);
        let incl = g.embed(&h);
        let small = incl.source().clone();
        let (x, y) = (element(&small, &a).to_gset().unwrap(), element(&small, &b).to_gset().unwrap());
        prop_assume!(x.size() + y.size() <= 4);
        let sum = x.disjoint_union(&y);
        let effective = norm_effective(&incl, &sum, &Caps::default()).unwrap();
        prop_assert_eq!(burnside_class(&effective).marks().values, brute_marks(&effective));
        let virtual_sum = norm_virtual(&incl, &burnside_class(&x).add(&burnside_class(&y)).unwrap()).unwrap();
        prop_assert_eq!(burnside_class(&effective), virtual_sum);
    }
}

#[test]
fn rank_of_burnside_ring_of_s2() {
    assert_eq!(Arc::new(FiniteGroup::symmetric(2)).lattice().len(), 2);
}

#[test]
fn non_integral_marks_are_rejected() {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let m = MarksVector { group: g, values: vec![BigInt::from(1), BigInt::from(0)] };
    assert!(matches!(m.unmarks(), Err(eqalg::Error::NonIntegral { .. })));
}
