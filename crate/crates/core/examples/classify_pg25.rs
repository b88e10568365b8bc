//! Every set without tangents of size 10 in PG(2,5), up to projective
//! equivalence.

use std::time::Instant;

use tanfree::conic::Conic;
use tanfree::constructions::{interior_points, trivial};
use tanfree::search::{classify_up_to_pgl, enumerate_tangent_free, group, SearchOptions};
use tanfree::Plane;

fn main() -> tanfree::Result<()> {
    let start = Instant::now();
    let plane = Plane::with_order(5)?;
    let sets = enumerate_tangent_free(&plane, 10, &SearchOptions::default())?;
    println!("{} sets of size 10 ({:.2?})", sets.len(), start.elapsed());
    let classes = classify_up_to_pgl(&plane, &sets)?;
    let triv = trivial(&plane);
    let interior = interior_points(&Conic::canonical(&plane)?)?;
    for c in &classes {
        let name = if group::are_equivalent(&plane, &c.canonical, &triv)? {
            "trivial"
        } else if group::are_equivalent(&plane, &c.canonical, &interior)? {
            "interior points of a conic"
        } else {
            "unexpected"
        };
        println!(
            "class of {} sets, stabilizer {}, spectrum {}: {name}",
            c.class_size, c.stabilizer_order, c.spectrum
        );
    }
    println!("{:.2?}", start.elapsed());
    Ok(())
}
