//! Points, lines, joins and meets in PG(2,q), and the point-set file format.

use tanfree::{Plane, PointSet, PointSetFile};

fn main() -> tanfree::Result<()> {
    let plane = Plane::with_order(4)?;
    println!("PG(2,{}): {} points, {} lines", plane.q(), plane.n(), plane.n());

    let a = plane.point_from_codes([1, 0, 0])?;
    let b = plane.point_from_codes([1, 1, 1])?;
    let l = plane.join(a, b)?;
    println!("join of (1,0,0) and (1,1,1): line {:?} with dual coordinates {:?}", l.0, plane.dual_coords(l).map(|c| c.0));
    let on: Vec<[u32; 3]> = plane.points_on(l).iter().map(|&p| plane.coords(tanfree::Point(p)).map(|c| c.0)).collect();
    println!("its points: {on:?}");

    let m = plane.line_from_codes([0, 0, 1])?;
    let p = plane.meet(l, m)?;
    println!("meet with Z = 0: {:?}", plane.coords(p).map(|c| c.0));

    let set = PointSet::from_points(&plane, [a, b, p]);
    let json = set.to_json();
    println!("{json}");
    let back = PointSetFile::parse(&json)?.load()?;
    assert_eq!(back.indices(), set.indices());
    Ok(())
}
