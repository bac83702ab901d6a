use std::sync::Arc;

use eqalg::gset::{deflate, dependent_product, equivariant_maps, pullback, restrict, verify_distributivity_diagram, DeflationMode};
use eqalg::spancat::{GSetWorld, World};
use eqalg::{Caps, FiniteGroup, GSet, GSetMap, GroupHom, Subgroup};
use proptest::prelude::*;

fn group(i: usize) -> Arc<FiniteGroup> {
    Arc::new(match i % 5 {
        0 => FiniteGroup::cyclic(2),
        1 => FiniteGroup::cyclic(3),
        2 => FiniteGroup::cyclic(4),
        3 => FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        _ => FiniteGroup::symmetric(3),
    })
}

/// A G-set with at most `max` points from an arbitrary list of orbit picks.
fn gset(g: &Arc<FiniteGroup>, picks: &[usize], max: usize) -> GSet {
    let lattice = g.lattice();
    let mut counts = vec![0; lattice.len()];
    let mut size = 0;
    for &p in picks {
        let c = p % lattice.len();
        let orbit = g.order() / lattice.representative(c).order();
        if size + orbit <= max {
            counts[c] += 1;
            size += orbit;
        }
    }
    GSet::from_orbit_type(g, &counts)
}

fn some_map(x: &GSet, y: &GSet, pick: usize) -> Option<GSetMap> {
    let maps = equivariant_maps(x, y, |_, _| true, &Caps::default()).ok()?;
    let m = maps.get(pick % maps.len().max(1))?.clone();
    GSetMap::new(x.clone(), y.clone(), m).ok()
}

fn count_maps(x: &GSet, y: &GSet) -> usize {
    equivariant_maps(x, y, |_, _| true, &Caps::default()).unwrap().len()
}

fn picks() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..8, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dependent_products_satisfy_beck_chevalley(
        gi in 0usize..5, pa in picks(), pb in picks(), pc in picks(), pd in picks(), m_pick in 0usize..64, n_pick in 0usize..64, f_pick in 0usize..64,
    ) {
        let g = group(gi);
        let (a, b, c, d) = (gset(&g, &pa, 3), gset(&g, &pb, 3), gset(&g, &pc, 3), gset(&g, &pd, 3));
        prop_assume!(!b.is_empty() && !d.is_empty());
        let (Some(m), Some(n), Some(f)) = (some_map(&a, &b, m_pick), some_map(&b, &c, n_pick), some_map(&d, &c, f_pick)) else {
            return Err(TestCaseError::reject("no equivariant map"));
        };
        let caps = Caps::default();
        let pi = dependent_product(&n, &m, &caps).unwrap();
        // pull everything back along f: D → C
        let nb = pullback(&f, &n).unwrap();
        let n2 = nb.left.clone();
        let mb = pullback(&nb.right, &m).unwrap();
        let m2 = GSetMap::new(mb.apex.clone(), nb.apex.clone(), mb.left.table().to_vec()).unwrap();
        let pulled_first = dependent_product(&n2, &m2, &caps).unwrap().pushed_sum;
        let pushed_first = pullback(&f, &pi.pushed_sum).unwrap().left;
        let w = GSetWorld::new(g.clone());
        let pt = GSetMap::to_point(pulled_first.source());
        let pt2 = GSetMap::to_point(pushed_first.source());
        prop_assert!(w.spans_isomorphic((&pulled_first, &pt), (&pushed_first, &pt2)));
    }

    #[test]
    fn sections_over_a_point_multiply_fiber_sizes(gi in 0usize..5, pa in picks(), pb in picks(), m_pick in 0usize..64) {
        let g = group(gi);
        let (a, b) = (gset(&g, &pa, 4), gset(&g, &pb, 3));
        let Some(m) = some_map(&a, &b, m_pick) else { return Ok(()) };
        let d = dependent_product(&GSetMap::to_point(&b), &m, &Caps::default()).unwrap();
        let expected: usize = (0..b.size()).map(|y| m.fiber(y).len()).product();
        prop_assert_eq!(d.pushed_sum.source().size(), expected);
        // the square is a strict pullback
        let sq = pullback(&d.pushed_sum, &d.norm).unwrap();
        prop_assert_eq!(sq.apex.size(), d.counit.source().size());
        prop_assert!(verify_distributivity_diagram(&d, 2).passed);
    }
}

fn as_subgroup_of(small: &Arc<FiniteGroup>, incl: &GroupHom, elements: &[usize]) -> Subgroup {
    let pre: Vec<usize> = elements.iter().filter_map(|&e| incl.preimage_of(e)).collect();
    Subgroup::new(small, pre).unwrap()
}

#[test]
fn restricted_cosets_split_by_double_cosets() {
    for gi in 0..5 {
        let g = group(gi);
        let lattice = g.lattice();
        for hc in 0..lattice.len() {
            for kc in 0..lattice.len() {
                let (h, k) = (lattice.representative(hc), lattice.representative(kc));
                let incl = g.embed(k);
                let ks = incl.source().clone();
                let restricted = restrict(&incl, &GSet::coset_space(&g, h)).unwrap();
                let mut expected = GSet::empty(&ks);
                for dc in g.double_cosets(k, h) {
                    let gh = g.conjugate(h, dc[0]);
                    let meet = g.intersection(k, &gh);
                    expected = expected.disjoint_union(&GSet::coset_space(&ks, &as_subgroup_of(&ks, &incl, meet.elements())));
                }
                assert!(restricted.is_isomorphic(&expected), "{} {hc} {kc}", g.name());
            }
        }
    }
}

#[test]
fn deflations_are_adjoint_to_inflation() {
    let cases: [(Arc<FiniteGroup>, usize); 3] = [(group(4), 2), (group(2), 1), (group(3), 1)];
    for (g, nc) in cases {
        let n = g.lattice().representative(nc).clone();
        assert!(g.is_normal(&n));
        let proj = GroupHom::quotient(&g, &n).unwrap();
        let q = proj.target().clone();
        for xs in [vec![0], vec![1], vec![0, 2], vec![3, 4], vec![1, 1]] {
            let x = gset(&g, &xs, 6);
            for ys in [vec![], vec![0], vec![1], vec![0, 1]] {
                let y = gset(&q, &ys, 4);
                let inflated = restrict(&proj, &y).unwrap();
                let quotient = deflate(&proj, &x, DeflationMode::Quotient).unwrap();
                let fixed = deflate(&proj, &x, DeflationMode::Fixed).unwrap();
                assert_eq!(count_maps(&quotient, &y), count_maps(&x, &inflated));
                assert_eq!(count_maps(&inflated, &x), count_maps(&y, &fixed));
            }
        }
    }
}
