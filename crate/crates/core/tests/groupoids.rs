use std::sync::Arc;

use eqalg::groupoid::{equivalent_over, iso_comma_pullback, verify_pullback_up, FiniteGroupoid, GroupoidMap};
use eqalg::{Caps, FiniteGroup, GSet, GroupHom};

fn groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        Arc::new(FiniteGroup::trivial()),
        Arc::new(FiniteGroup::cyclic(2)),
        Arc::new(FiniteGroup::cyclic(3)),
        Arc::new(FiniteGroup::cyclic(4)),
        Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
        Arc::new(FiniteGroup::symmetric(3)),
    ]
}

fn roomy() -> Caps {
    Caps { objects: 1024, morphisms: 1 << 20, ..Caps::default() }
}

fn point_into(g: &Arc<FiniteGroup>) -> GroupoidMap {
    let bg = Arc::new(FiniteGroupoid::delooping(g));
    GroupoidMap::new(Arc::new(FiniteGroupoid::terminal()), bg.clone(), vec![0], vec![bg.identity(0)]).unwrap()
}

/// `X//G → BG` for a G-set `X`.
fn action_into(x: &GSet) -> GroupoidMap {
    let g = x.group();
    let act = Arc::new(FiniteGroupoid::action(x));
    let bg = Arc::new(FiniteGroupoid::delooping(g));
    let morphisms = act.morphisms().map(|m| m % g.order()).collect();
    GroupoidMap::new(act.clone(), bg, vec![0; act.object_count()], morphisms).unwrap()
}

/// A spread of functors into `BG`: points, subgroup inclusions, action
/// groupoids, quotients and a non-faithful projection.
fn functors_into(g: &Arc<FiniteGroup>) -> Vec<GroupoidMap> {
    let l = g.lattice();
    let mut out = vec![point_into(g), GroupoidMap::identity(&Arc::new(FiniteGroupoid::delooping(g)))];
    for c in 0..l.len() {
        let h = l.representative(c);
        out.push(GroupoidMap::delooping(&g.embed(h)));
        out.push(action_into(&GSet::coset_space(g, h)));
    }
    let wide = Arc::new(FiniteGroup::direct_product(g, &FiniteGroup::cyclic(2)));
    let proj = GroupHom::new(wide.clone(), g.clone(), wide.elements().map(|e| e / 2).collect()).unwrap();
    out.push(GroupoidMap::delooping(&proj));
    out
}

#[test]
fn point_over_bg_is_discrete() {
    for g in groups() {
        let p = point_into(&g);
        let sq = iso_comma_pullback(&p, &p, &Caps::default()).unwrap();
        assert_eq!(sq.apex.object_count(), g.order());
        assert_eq!(sq.apex.morphism_count(), g.order());
        assert!(sq.apex.morphisms().all(|m| sq.apex.source(m) == sq.apex.target(m)));
        assert!(verify_pullback_up(&sq, &Caps::default()).passed);
    }
}

#[test]
fn faithful_maps_pull_back_to_faithful_maps() {
    let caps = roomy();
    let mut checked = 0;
    for g in groups() {
        let fs = functors_into(&g);
        for m in fs.iter().filter(|m| m.is_faithful()) {
            for f in &fs {
                let sq = iso_comma_pullback(f, m, &caps).unwrap();
                assert!(sq.left.is_faithful(), "{} {:?}", g.name(), f.source());
                let flipped = iso_comma_pullback(m, f, &caps).unwrap();
                assert!(flipped.right.is_faithful());
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn pullbacks_paste() {
    let caps = roomy();
    let mut checked = 0;
    for g in groups().into_iter().filter(|g| (2..=4).contains(&g.order())) {
        let l = g.lattice();
        for c in 0..l.len() {
            let h = l.representative(c);
            let q = GroupoidMap::delooping(&g.embed(h));
            let hs = g.embed(h).source().clone();
            let hl = hs.lattice();
            for hc in 0..hl.len() {
                // X = (H/K)//H → BH → BG
                let p = action_into(&GSet::coset_space(&hs, hl.representative(hc)));
                let pq = p.then(&q).unwrap();
                for w in functors_into(&g).into_iter().filter(|w| w.source().morphism_count() <= 8) {
                    let first = iso_comma_pullback(&w, &q, &caps).unwrap();
                    let second = iso_comma_pullback(&first.right, &p, &caps).unwrap();
                    if second.apex.morphism_count() > 1024 {
                        continue;
                    }
                    let direct = iso_comma_pullback(&w, &pq, &caps).unwrap();
                    let pasted = second.left.then(&first.left).unwrap();
                    assert!(equivalent_over(&pasted, &direct.left), "{} {c} {hc}", g.name());
                    assert!(equivalent_over(&second.right, &direct.right));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn factorizations_recompose() {
    for g in groups() {
        for f in functors_into(&g) {
            let (e, m) = f.em_factorize();
            assert!(e.then(&m).unwrap().is_naturally_isomorphic(&f));
            assert!(e.is_full());
            assert!(m.is_faithful());
            assert!(e.is_essentially_surjective());
        }
    }
}
