//! Smallest set without tangents in PG(2,q) by exact search.
//!
//!     cargo run --release --example min_search -- 7 14

use std::env;

use tanfree::search::{min_tangent_free, SearchOptions};
use tanfree::{tangency, Plane};

fn main() -> tanfree::Result<()> {
    let args: Vec<u32> = env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let q = args.first().copied().unwrap_or(5);
    let cap = args.get(1).map_or(2 * q as usize, |&c| c as usize);
    let plane = Plane::with_order(q)?;
    let report = min_tangent_free(&plane, cap, &SearchOptions::default())?;
    for level in &report.levels {
        println!("size {:>3}: {:>12} nodes  {}", level.size, level.nodes, if level.found { "found" } else { "none" });
    }
    println!("u_{q} = {} (bound {}, gap {})", report.u, report.lower_bound, report.bound_gap());
    println!("spectrum {}", tangency::spectrum(&report.witness));
    println!("{}", report.witness.to_json());
    println!("{:.2?}", report.wall_time);
    Ok(())
}
