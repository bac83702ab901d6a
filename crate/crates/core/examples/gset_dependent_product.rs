//! Dependent products of G-sets and their distributivity diagrams.

use std::sync::Arc;

use eqalg::gset::{dependent_product, verify_distributivity_diagram};
use eqalg::{Caps, FiniteGroup, GSet, GSetMap};

fn describe(name: &str, x: &GSet) {
    println!("  {name}: {} points, orbit type {:?}", x.size(), x.orbit_type());
}

fn main() {
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let free = GSet::regular(&c2);

    // A = X ⊔ X folding onto B = X, then B → pt: sections pick a copy per point
    let sum = GSetMap::fold(&free);
    let norm = GSetMap::to_point(&free);
    let d = dependent_product(&norm, &sum, &Caps::default()).unwrap();
    println!("fold of the free C2-set along C2 → pt");
    describe("Y (sections)", d.pushed_sum.source());
    describe("X = Y ×_C B", d.counit.source());
    let cert = verify_distributivity_diagram(&d, 3);
    println!("  universal property: {} over {} test maps", cert.passed, cert.checked);

    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let three = GSet::coset_space(&s3, s3.lattice().representative(1));
    let two = GSet::coset_space(&s3, s3.lattice().representative(2));
    let a = three.product(&two);
    let proj = GSetMap::new(a.clone(), three.clone(), (0..a.size()).map(|p| p / two.size()).collect()).unwrap();
    let d = dependent_product(&GSetMap::to_point(&three), &proj, &Caps::default()).unwrap();
    println!("S3/C2 × S3/C3 → S3/C2 → pt");
    describe("Y", d.pushed_sum.source());
    println!("  sections: {} = 2^3", d.pushed_sum.source().size());
}
