//! Tables of marks and arithmetic in Burnside rings.

use std::sync::Arc;

use eqalg::tambara::{burnside_class, marks_table_text, BurnsideElement};
use eqalg::{FiniteGroup, GSet};

fn main() {
    for g in [FiniteGroup::symmetric(2), FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
        let g = Arc::new(g);
        println!("{} (rank {})", g.name(), g.lattice().len());
        print!("{}", marks_table_text(&g, "\t"));
        println!();
    }

    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let l = s3.lattice();
    let x = GSet::coset_space(&s3, l.representative(1));
    let y = GSet::coset_space(&s3, l.representative(2));
    let xy = burnside_class(&x).mul(&burnside_class(&y)).unwrap();
    println!("[S3/C2]·[S3/C3] = {xy}");
    println!("as a G-set: {} points, marks {:?}", x.product(&y).size(), x.product(&y).marks());

    // marks are injective, and invert over the integers
    let v = BurnsideElement::from_i64(&s3, &[1, -2, 0, 3]).unwrap();
    let m = v.marks();
    println!("{v} has marks {:?}", m.values);
    println!("back again: {}", m.unmarks().unwrap());
}
