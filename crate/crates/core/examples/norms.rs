//! Norms of G-sets: sections `Map_H(G, X)` against the double coset formula on marks.

use std::sync::Arc;

use eqalg::tambara::{burnside_class, norm_effective, norm_virtual, BurnsideElement};
use eqalg::{Caps, FiniteGroup, GSet};

fn main() {
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
        let g = Arc::new(g);
        let l = g.lattice();
        for c in 0..l.len() {
            let h = l.representative(c);
            if g.order() / h.order() > 3 || h.order() == g.order() {
                continue;
            }
            let incl = g.embed(h);
            let small = incl.source();
            let x = GSet::trivial(small, 2).disjoint_union(&GSet::regular(small));
            if x.size() > 4 {
                continue;
            }
            let eff = norm_effective(&incl, &x, &Caps::default()).unwrap();
            let virt = norm_virtual(&incl, &burnside_class(&x)).unwrap();
            println!(
                "N_{}^{}({} points): {} points, {}; virtual {}; agree {}",
                l.labels()[c],
                g.name(),
                x.size(),
                eff.size(),
                burnside_class(&eff),
                virt,
                burnside_class(&eff) == virt
            );
        }
    }

    // norms are multiplicative but not additive
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let e = c2.lattice().representative(0).clone();
    let incl = c2.embed(&e);
    let one = BurnsideElement::one(incl.source());
    let two = one.add(&one).unwrap();
    println!("N(1 + 1) = {}", norm_virtual(&incl, &two).unwrap());
    println!("N(-1) = {}", norm_virtual(&incl, &one.neg()).unwrap());
}
