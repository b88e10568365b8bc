//! Codewords of the dual code of PG(2,q) and the peeling decoder.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tanfree::codes::{self, CodewordSearch};
use tanfree::conic::Conic;
use tanfree::constructions;
use tanfree::{tangency, Line, Plane, PointSet};

fn main() -> tanfree::Result<()> {
    let plane = Plane::with_order(5)?;
    let v = codes::trivial_signing(&plane, Line(0), Line(1))?;
    println!("±1 on two lines: codeword {}, weight {}", codes::is_dual_codeword(&plane, &v)?, v.weight());
    println!("dual code dimension for q = 5: {}", codes::dual_dimension(&plane));

    for q in [5, 7, 9] {
        let pl = Plane::with_order(q)?;
        let candidates = [constructions::Construction::Trivial, constructions::Construction::TwoConics { a: None }];
        for c in candidates.iter().chain(if q == 9 { &[constructions::Construction::FrobeniusGraph][..] } else { &[] }) {
            let Ok((set, _)) = c.build(&pl) else { continue };
            let verdict = match codes::dual_codeword_on_support(&set, 7) {
                CodewordSearch::Found(w) => format!("codeword of weight {}", w.weight()),
                CodewordSearch::NoneFound { exact } => format!("no codeword (exhaustive: {exact})"),
            };
            println!("q = {q}, {} ({} points): {verdict}", c.name(), set.len());
        }
    }

    let interior = constructions::interior_points(&Conic::canonical(&plane)?)?;
    let extra = plane.points().find(|&p| !interior.contains(p)).expect("point off the set");
    let mut erased = interior.clone();
    erased.insert(extra);
    let residual = codes::peel_decode(&erased);
    println!("peeling {} erasures leaves {} (a stopping set: {})", erased.len(), residual.len(), tangency::is_tangent_free(&residual));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let few = PointSet::from_indices(&plane, &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
    println!("9 erasures peel to {} points (random order: {})", codes::peel_decode(&few).len(), codes::peel_decode_shuffled(&few, &mut rng).len());
    Ok(())
}
