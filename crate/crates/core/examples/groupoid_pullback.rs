//! Iso-comma pullbacks of finite groupoids and the factorization of functors.

use std::sync::Arc;

use eqalg::groupoid::{iso_comma_pullback, verify_pullback_up, FiniteGroupoid, GroupoidMap};
use eqalg::{Caps, FiniteGroup, GSet};

fn main() {
    let caps = Caps::default();
    for g in [FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)] {
        let g = Arc::new(g);
        let bg = Arc::new(FiniteGroupoid::delooping(&g));
        let pt = GroupoidMap::new(Arc::new(FiniteGroupoid::terminal()), bg.clone(), vec![0], vec![bg.identity(0)]).unwrap();
        let sq = iso_comma_pullback(&pt, &pt, &caps).unwrap();
        println!(
            "1 ×_B{} 1: {} objects, {} morphisms, {} components",
            g.name(),
            sq.apex.object_count(),
            sq.apex.morphism_count(),
            sq.apex.component_count()
        );
        println!("  universal property: {}", verify_pullback_up(&sq, &caps).passed);
    }

    // BH → BS3 pulled back along the point is the action groupoid of S3/H
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let h = s3.lattice().representative(1).clone();
    let incl = GroupoidMap::delooping(&s3.embed(&h));
    let bg = incl.target().clone();
    let pt = GroupoidMap::new(Arc::new(FiniteGroupoid::terminal()), bg.clone(), vec![0], vec![bg.identity(0)]).unwrap();
    let sq = iso_comma_pullback(&pt, &incl, &caps).unwrap();
    println!("1 ×_BS3 BC2 has {} objects in {} component(s)", sq.apex.object_count(), sq.apex.component_count());
    println!("  projection to BC2 faithful: {}", sq.right.is_faithful());

    // X//G → BG factors as an equivalence followed by a faithful map
    let act = Arc::new(FiniteGroupoid::action(&GSet::coset_space(&s3, &h)));
    let f = GroupoidMap::new(act.clone(), bg, vec![0; act.object_count()], act.morphisms().map(|m| m % s3.order()).collect()).unwrap();
    let (e, m) = f.em_factorize();
    println!(
        "(S3/C2)//S3 → BS3 = faithful ∘ full: middle has {} objects; first leg equivalence {}, second faithful {}",
        m.source().object_count(),
        e.is_equivalence(),
        m.is_faithful()
    );
}
