//! Free commutative algebras on a G-set: symmetric powers against
//! `Sub ∘ Nm ∘ Inf` through `Σₙ₋₁ × G ≤ Σₙ × G`.

use std::sync::Arc;

use eqalg::freealg::{free_tambara_census, free_underlying};
use eqalg::gset::sigma_classes;
use eqalg::{Caps, FiniteGroup, GSet};

fn main() {
    let caps = Caps::default();
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let x = GSet::coset_space(&s3, s3.lattice().representative(1));
    let r = free_underlying(&x, 3, &caps).unwrap();
    for d in &r.degrees {
        println!("degree {}: S^n X has {} points, the pipeline {}, isomorphic {}", d.degree, d.symmetric.size(), d.pipeline.size(), d.isomorphic);
    }

    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
        let g = Arc::new(g);
        let counts: Vec<String> = (0..=4)
            .map(|n| {
                let c = sigma_classes(&g, n, &caps).unwrap();
                format!("{}/{}", c.gset_classes.len(), c.homomorphism_classes.len())
            })
            .collect();
        println!("{}: n-element G-sets / maps to Σn up to conjugacy: {}", g.name(), counts.join(" "));
    }

    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let whole = c2.whole();
    let census = free_tambara_census(&c2, &whole, &whole, 2, &caps).unwrap();
    println!("bispans C2/C2 → C2/C2 with small apices: {} classes, consistent {}", census.total, census.consistent());
}
