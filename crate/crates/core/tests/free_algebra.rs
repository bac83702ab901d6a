use std::sync::Arc;

use eqalg::freealg::{free_tambara_census, free_underlying, pipeline_sub_nm_inf, symmetric_power};
use eqalg::gset::orbit_types_up_to;
use eqalg::{Caps, FiniteGroup, GSet};

fn groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        Arc::new(FiniteGroup::cyclic(2)),
        Arc::new(FiniteGroup::cyclic(3)),
        Arc::new(FiniteGroup::cyclic(4)),
        Arc::new(FiniteGroup::symmetric(3)),
    ]
}

fn small_gsets(g: &Arc<FiniteGroup>, max: usize) -> Vec<GSet> {
    orbit_types_up_to(g, max).iter().map(|t| GSet::from_orbit_type(g, t)).collect()
}

#[test]
fn degree_one_is_the_identity() {
    for g in groups() {
        for x in small_gsets(&g, 4) {
            assert!(pipeline_sub_nm_inf(&x, 1, &Caps::default()).unwrap().is_isomorphic(&x));
        }
    }
}

#[test]
fn pipeline_matches_symmetric_powers() {
    for g in groups() {
        for x in small_gsets(&g, 3) {
            let r = free_underlying(&x, 3, &Caps::default()).unwrap();
            assert!(r.passed(), "{} {:?}", g.name(), r.first_mismatch().map(|d| d.degree));
        }
    }
}

/// Multisets of size `n` from `k` letters, counted by recursion.
fn multisets(k: usize, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    if k == 0 {
        return 0;
    }
    (0..=n).map(|first| multisets(k - 1, n - first)).sum()
}

#[test]
fn symmetric_powers_split_over_disjoint_unions() {
    let caps = Caps::default();
    for g in groups() {
        let sets = small_gsets(&g, 2);
        for x in &sets {
            for y in &sets {
                for n in 0..=3 {
                    let whole = symmetric_power(&x.disjoint_union(y), n, &caps).unwrap();
                    assert_eq!(whole.size(), multisets(x.size() + y.size(), n));
                    let mut pieces = GSet::empty(&g);
                    for i in 0..=n {
                        let part = symmetric_power(x, i, &caps).unwrap().product(&symmetric_power(y, n - i, &caps).unwrap());
                        pieces = pieces.disjoint_union(&part);
                    }
                    assert!(whole.is_isomorphic(&pieces));
                }
            }
        }
    }
}

#[test]
fn census_agrees_with_maps_to_symmetric_groups() {
    for g in groups().into_iter().take(2) {
        let whole = g.whole();
        let r = free_tambara_census(&g, &whole, &whole, 2, &Caps::default()).unwrap();
        assert!(r.consistent(), "{r:?}");
        assert_eq!(r.point_fibers.len(), 3);
    }
}
