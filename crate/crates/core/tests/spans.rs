use std::sync::{Arc, OnceLock};

use eqalg::bispan::{bispan_iso, compose_bispans, enumerate_bispans, Bispan, BispanTripleSpec, RewriteOrder};
use eqalg::spancat::{compose_spans, dualize, hom_enumerate, span_iso, AdequateTripleSpec, GSetWorld, Span};
use eqalg::{Caps, FiniteGroup, GSet};

fn orbits(g: &Arc<FiniteGroup>) -> Vec<GSet> {
    let l = g.lattice();
    (0..l.len()).map(|c| GSet::coset_space(g, l.representative(c))).collect()
}

/// Span classes between every pair of orbits, indexed `(i, j)`.
fn span_homs(g: &Arc<FiniteGroup>, cap: usize) -> Vec<Vec<Vec<Span<GSetWorld>>>> {
    let w = GSetWorld::new(g.clone());
    let os = orbits(g);
    os.iter()
        .map(|x| {
            os.iter()
                .map(|y| {
                    hom_enumerate(&w, x, y, AdequateTripleSpec::ALL, cap, &Caps::default())
                        .unwrap()
                        .into_iter()
                        .map(|c| c.span)
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[test]
fn duality_is_involutive_and_reverses_composition() {
    for g in [Arc::new(FiniteGroup::cyclic(2)), Arc::new(FiniteGroup::symmetric(3))] {
        let w = GSetWorld::new(g.clone());
        let homs = span_homs(&g, 3);
        let n = homs.len();
        let mut checked = 0;
        for i in 0..n {
            for j in 0..n {
                for s in &homs[i][j] {
                    assert!(span_iso(&w, &dualize(&dualize(s)), s));
                    for k in 0..n {
                        for t in &homs[j][k] {
                            let st = compose_spans(&w, s, t, &Caps::default()).unwrap();
                            let ts = compose_spans(&w, &dualize(t), &dualize(s), &Caps::default()).unwrap();
                            assert!(span_iso(&w, &dualize(&st), &ts));
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

struct C2Bispans {
    world: GSetWorld,
    /// Classes `a ← X → Y → b` for orbits `a`, `b`, indexed `a * 2 + b`.
    homs: Vec<Vec<Bispan<GSetWorld>>>,
}

fn c2_bispans() -> &'static C2Bispans {
    static CELL: OnceLock<C2Bispans> = OnceLock::new();
    CELL.get_or_init(|| {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let world = GSetWorld::new(g.clone());
        let os = orbits(&g);
        let mut homs = Vec::new();
        for a in &os {
            for b in &os {
                homs.push(enumerate_bispans(&world, a, b, 2, 2, &Caps::default()).unwrap());
            }
        }
        C2Bispans { world, homs }
    })
}

#[test]
fn bispan_composition_is_associative() {
    let cx = c2_bispans();
    let w = &cx.world;
    let caps = Caps::default();
    let mut checked = 0;
    for (a, b, c, d) in (0..16).map(|i| (i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1)) {
        for u in &cx.homs[a * 2 + b] {
            for v in &cx.homs[b * 2 + c] {
                let uv = compose_bispans(w, u, v, RewriteOrder::Direct, &caps).unwrap();
                for x in &cx.homs[c * 2 + d] {
                    let left = compose_bispans(w, &uv, x, RewriteOrder::Direct, &caps).unwrap();
                    let vx = compose_bispans(w, v, x, RewriteOrder::Direct, &caps).unwrap();
                    let right = compose_bispans(w, u, &vx, RewriteOrder::Direct, &caps).unwrap();
                    assert!(bispan_iso(w, &left, &right, &caps));
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 5090);
}

#[test]
fn rewrite_orders_agree() {
    let cx = c2_bispans();
    let w = &cx.world;
    let caps = Caps::default();
    for (a, b, c) in (0..8).map(|i| (i >> 2 & 1, i >> 1 & 1, i & 1)) {
        for u in &cx.homs[a * 2 + b] {
            for v in &cx.homs[b * 2 + c] {
                let direct = compose_bispans(w, u, v, RewriteOrder::Direct, &caps).unwrap();
                for order in &RewriteOrder::ALL[1..] {
                    assert!(bispan_iso(w, &direct, &compose_bispans(w, u, v, *order, &caps).unwrap(), &caps));
                }
            }
        }
    }
}

#[test]
fn bispans_recompose_from_their_generators() {
    let cx = c2_bispans();
    let w = &cx.world;
    let caps = Caps::default();
    for u in cx.homs.iter().flatten() {
        let (t, n, r) = u.generators(w);
        let nr = compose_bispans(w, &r, &n, RewriteOrder::Direct, &caps).unwrap();
        let tnr = compose_bispans(w, &nr, &t, RewriteOrder::Direct, &caps).unwrap();
        assert!(bispan_iso(w, &tnr, u, &caps));
    }
}

#[test]
fn spans_compose_the_same_as_bispans() {
    for g in [Arc::new(FiniteGroup::cyclic(2)), Arc::new(FiniteGroup::cyclic(3))] {
        let w = GSetWorld::new(g.clone());
        let caps = Caps::default();
        let homs = span_homs(&g, 3);
        let n = homs.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for s in &homs[i][j] {
                        for t in &homs[j][k] {
                            let st = compose_spans(&w, s, t, &caps).unwrap();
                            let (bs, bt) = (Bispan::from_span(&w, s, BispanTripleSpec::ALL), Bispan::from_span(&w, t, BispanTripleSpec::ALL));
                            let composite = compose_bispans(&w, &bs, &bt, RewriteOrder::Direct, &caps).unwrap();
                            assert!(bispan_iso(&w, &composite, &Bispan::from_span(&w, &st, BispanTripleSpec::ALL), &caps));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn rewrite_orders_agree_over_c3_orbits() {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let w = GSetWorld::new(g.clone());
    let caps = Caps::default();
    let os = orbits(&g);
    let homs: Vec<Vec<Vec<Bispan<GSetWorld>>>> =
        os.iter().map(|a| os.iter().map(|b| enumerate_bispans(&w, a, b, 3, 3, &caps).unwrap()).collect()).collect();
    let mut pairs = 0;
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for u in homs[a][b].iter().step_by(3) {
                    for v in homs[b][c].iter().step_by(3) {
                        let direct = compose_bispans(&w, u, v, RewriteOrder::Direct, &caps).unwrap();
                        for order in &RewriteOrder::ALL[1..] {
                            assert!(bispan_iso(&w, &direct, &compose_bispans(&w, u, v, *order, &caps).unwrap(), &caps));
                        }
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs > 0);
}
