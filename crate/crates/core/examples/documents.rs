//! Content-addressed JSON documents for groups, G-sets, groupoids, spans and bispans.

use std::sync::Arc;

use eqalg::bispan::{Bispan, BispanTripleSpec};
use eqalg::doc::{self, BispanDoc, SpanDoc};
use eqalg::groupoid::{iso_comma_pullback, FiniteGroupoid, GroupoidMap};
use eqalg::spancat::{AdequateTripleSpec, GSetWorld, GroupoidWorld, Span};
use eqalg::{Caps, FiniteGroup, GSet, GSetMap};

fn main() {
    let caps = Caps::default();
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let x = GSet::regular(&c3);
    let text = doc::to_text(&doc::gset_doc(&x));
    println!("{}", text.lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("  ...");

    let w = GSetWorld::new(c3.clone());
    let b = Bispan::norm_generator(&w, GSetMap::to_point(&x), BispanTripleSpec::ALL);
    let d = doc::bispan_doc(&w, &b);
    let text = doc::to_text(&d);
    let back: BispanDoc = doc::from_text(&text).unwrap();
    let again = doc::bispan_from_doc(&w, &back, &caps).unwrap();
    println!("bispan document: {} bytes, {} objects, reproduces itself: {}", text.len(), back.objects.len(), doc::to_text(&doc::bispan_doc(&w, &again)) == text);

    let bg = Arc::new(FiniteGroupoid::delooping(&c3));
    let pt = GroupoidMap::new(Arc::new(FiniteGroupoid::terminal()), bg.clone(), vec![0], vec![bg.identity(0)]).unwrap();
    let sq = iso_comma_pullback(&pt, &pt, &caps).unwrap();
    let s = Span::new(&GroupoidWorld, sq.left, sq.right, AdequateTripleSpec::ALL).unwrap();
    let text = doc::to_text(&doc::span_doc(&GroupoidWorld, &s));
    let d: SpanDoc = doc::from_text(&text).unwrap();
    println!("groupoid span: schema {}, world {}, hash {}", d.schema, d.world, doc::content_hash(&d));
}
