//! Tangent, secant and external lines of a conic; exterior and interior
//! points.

use tanfree::conic::{Conic, PointClass};
use tanfree::Plane;

fn main() -> tanfree::Result<()> {
    println!("{:>3} {:>24} {:>24}", "q", "lines (tan, sec, ext)", "points (on, ext, int)");
    for q in [3, 5, 7, 9, 11, 13, 25, 27] {
        let plane = Plane::with_order(q)?;
        let c = Conic::canonical(&plane)?;
        println!("{q:>3} {:>24} {:>24}", format!("{:?}", c.line_census()), format!("{:?}", c.point_census()));
    }

    let plane = Plane::with_order(5)?;
    let c = Conic::canonical(&plane)?;
    for p in plane.points().take(8) {
        let class = c.classify_point(p);
        assert_eq!(class, c.classify_point_by_character(p));
        let note = if class == PointClass::Exterior { " (on two tangents)" } else { "" };
        println!("{:?}: {class:?}{note}", plane.coords(p).map(|x| x.0));
    }
    Ok(())
}
