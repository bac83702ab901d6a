//! Bispans `X ← A → B → Y` compose through distributivity; every rewrite
//! order lands on the same class.

use std::sync::Arc;

use eqalg::bispan::{bispan_iso, compose_bispans, Bispan, BispanTripleSpec, RewriteOrder};
use eqalg::spancat::GSetWorld;
use eqalg::{Caps, FiniteGroup, GSet, GSetMap};

fn main() {
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let w = GSetWorld::new(c2.clone());
    let caps = Caps::default();
    let spec = BispanTripleSpec::ALL;
    let free = GSet::regular(&c2);
    let two = GSet::trivial(&c2, 2);

    // a sum of two points, followed by the norm C2/e → pt
    let sum = Bispan::sum_generator(&w, GSetMap::fold(&free), spec);
    let norm = Bispan::norm_generator(&w, GSetMap::to_point(&free), spec);
    for order in RewriteOrder::ALL {
        let c = compose_bispans(&w, &sum, &norm, order, &caps).unwrap();
        println!(
            "N ∘ T via {order:?}: A has {} points, B has {} points",
            c.norm.source().size(),
            c.sum.source().size()
        );
    }

    let t = Bispan::sum_generator(&w, GSetMap::fold(&two), spec);
    let r = Bispan::restriction_generator(&w, GSetMap::to_point(&free), spec);
    let n = Bispan::norm_generator(&w, GSetMap::to_point(&two), spec);
    let rn = compose_bispans(&w, &compose_bispans(&w, &t, &n, RewriteOrder::Direct, &caps).unwrap(), &r, RewriteOrder::Direct, &caps).unwrap();
    let (t2, n2, r2) = rn.generators(&w);
    let again = compose_bispans(&w, &compose_bispans(&w, &r2, &n2, RewriteOrder::Direct, &caps).unwrap(), &t2, RewriteOrder::Direct, &caps).unwrap();
    println!("R ∘ N ∘ T refactors into generators: {}", bispan_iso(&w, &again, &rn, &caps));
}
