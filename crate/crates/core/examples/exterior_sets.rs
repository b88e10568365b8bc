//! Extending the exterior points of an external line, the ten-point set in
//! PG(2,5), and exterior sets found by clique search.

use tanfree::conic::Conic;
use tanfree::exterior;
use tanfree::{tangency, Plane};

fn main() -> tanfree::Result<()> {
    for q in [5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29] {
        let plane = Plane::with_order(q)?;
        let r = exterior::verify_dichotomy(&plane, 3, false, 1)?;
        let off = r.cases[0].off_line.clone();
        println!("q = {q:>2} (a = {}): off-line extenders {off:?}, holds on 4 copies: {}", r.a, r.holds());
    }

    let ten = exterior::pg25_ten_set()?;
    println!(
        "PG(2,5): M_1, M_2, M_3 concurrent in {:?}: {}; {} points, spectrum {}",
        ten.meet,
        ten.concurrent,
        ten.set.len(),
        tangency::spectrum(&ten.set)
    );

    for q in [5, 7, 11, 13] {
        let plane = Plane::with_order(q)?;
        let conic = Conic::canonical(&plane)?;
        let sets = exterior::exterior_clique_search(&conic, true)?;
        let all = exterior::exterior_clique_search(&conic, false)?;
        let good = sets.iter().find(|e| exterior::conic_union_check(&conic, e));
        println!(
            "q = {q:>2}: {} exterior sets, {} collinear, {} arcs; conic ∪ arc without tangents: {}",
            all.len(),
            all.iter().filter(|s| exterior::is_collinear(s)).count(),
            sets.len(),
            good.map_or("none".to_string(), |e| conic.points().union(e).to_json())
        );
    }
    Ok(())
}
