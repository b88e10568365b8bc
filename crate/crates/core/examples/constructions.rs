//! Known sets without tangents, each with a size certificate.
//!
//!     cargo run --release --example constructions -- 9

use tanfree::constructions::Construction;
use tanfree::Plane;

fn main() -> tanfree::Result<()> {
    let q: u32 = std::env::args().nth(1).map_or(9, |a| a.parse().expect("order"));
    let plane = Plane::with_order(q)?;
    let mut kinds = vec![
        Construction::Trivial,
        Construction::TwoConics { a: None },
        Construction::Interior,
        Construction::FrobeniusGraph,
        Construction::TraceGraph,
    ];
    kinds.extend((1..=(q as usize).saturating_sub(5) / 2).map(|r| Construction::PuncturedInterior { r }));
    for k in kinds {
        match k.build(&plane) {
            Ok((_, cert)) => println!(
                "{:<20} {:?}: expected {:>3}, built {:>3}, spectrum {}",
                k.name(),
                cert.status,
                cert.claimed_size,
                cert.actual_size,
                cert.spectrum
            ),
            Err(e) => println!("{:<20} not available: {e}", k.name()),
        }
    }
    Ok(())
}
