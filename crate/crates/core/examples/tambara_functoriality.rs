//! The Burnside Tambara functor respects bispan composition; a corrupted
//! norm does not.

use std::sync::Arc;

use eqalg::bispan::check_functoriality;
use eqalg::tambara::{as_tambara_oracle, CorruptedNormOracle, TerminalOracle};
use eqalg::{Caps, FiniteGroup, GSet};

fn main() {
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let l = c2.lattice();
    let ends: Vec<GSet> = (0..l.len()).map(|c| GSet::coset_space(&c2, l.representative(c))).collect();
    let caps = Caps::default();
    let seed = 7;

    let r = check_functoriality(&as_tambara_oracle(&c2), &ends, 2, seed, &caps).unwrap();
    println!("Burnside: {} over {} pairs, confluent {}", r.certificate.passed, r.pairs, r.confluent);
    let r = check_functoriality(&TerminalOracle { group: c2.clone() }, &ends, 2, seed, &caps).unwrap();
    println!("terminal: {} over {} pairs", r.certificate.passed, r.pairs);
    let r = check_functoriality(&CorruptedNormOracle { inner: as_tambara_oracle(&c2) }, &ends, 2, seed, &caps).unwrap();
    println!("corrupted norm: {}", r.certificate.passed);
    if let Some(why) = r.certificate.failure {
        println!("  {why}");
    }
}
