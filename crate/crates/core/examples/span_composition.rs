//! Composition in the span category of G-sets and the Mackey double coset formula.

use std::sync::Arc;

use eqalg::spancat::{compose_spans, decompose_span, factor_span, hom_enumerate, span_iso, AdequateTripleSpec, GSetWorld, Span};
use eqalg::{Caps, FiniteGroup, GSet, GSetMap};

fn main() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let w = GSetWorld::new(s3.clone());
    let l = s3.lattice();
    let caps = Caps::default();

    for (hc, kc) in [(1, 1), (1, 2), (2, 2), (0, 1)] {
        let (h, k) = (l.representative(hc), l.representative(kc));
        let gh = GSet::coset_space(&s3, h);
        let gk = GSet::coset_space(&s3, k);
        // transfer G/H → pt then restrict pt → G/K
        let transfer = Span::new(&w, GSetMap::identity(&gh), GSetMap::to_point(&gh), AdequateTripleSpec::ALL).unwrap();
        let restriction = Span::new(&w, GSetMap::to_point(&gk), GSetMap::identity(&gk), AdequateTripleSpec::ALL).unwrap();
        let composite = compose_spans(&w, &transfer, &restriction, &caps).unwrap();
        let pieces = decompose_span(&w, &composite).unwrap();
        println!(
            "res_{} ∘ tr_{}: apex {} points, {} pieces, {} double cosets",
            l.labels()[kc],
            l.labels()[hc],
            composite.apex(&w).size(),
            pieces.iter().map(|(_, m)| m).sum::<usize>(),
            s3.double_cosets(k, h).len()
        );
    }

    let x = GSet::coset_space(&s3, l.representative(2));
    let homs = hom_enumerate(&w, &x, &x, AdequateTripleSpec::ALL, 6, &caps).unwrap();
    println!("span classes S3/C3 → S3/C3 with apex ≤ 6: {}", homs.len());
    for c in homs.iter().take(4) {
        let (b, f) = factor_span(&w, &c.span);
        let again = compose_spans(&w, &b, &f, &caps).unwrap();
        println!("  apex {} points, {} automorphisms, refactors: {}", c.span.apex(&w).size(), c.automorphisms, span_iso(&w, &again, &c.span));
    }
}
