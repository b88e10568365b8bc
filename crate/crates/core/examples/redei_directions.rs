//! Directions determined by an affine set, and sets without tangents from
//! graphs of functions.

use tanfree::tangency::{self, RedeiOutcome};
use tanfree::{Fe, Plane, PointSet};

fn main() -> tanfree::Result<()> {
    let plane = Plane::with_order(9)?;
    let f = plane.field().clone();
    let linf = plane.line_from_codes([1, 0, 0])?;
    let graphs: [(&str, Box<dyn Fn(Fe) -> Fe>); 3] = [
        ("x^3", Box::new(|x| f.frobenius(x))),
        ("Tr(x)", Box::new(|x| f.trace(x))),
        ("x^2", Box::new(|x| f.mul(x, x))),
    ];
    for (name, g) in graphs {
        let a = PointSet::from_points(&plane, f.elements().map(|x| plane.point([Fe::ONE, x, g(x)]).expect("nonzero")));
        let dirs = tangency::determined_directions(&a, linf)?;
        print!("graph of {name:<6}: {} determined directions; ", dirs.determined.len());
        match tangency::redei_completion(&a, linf)? {
            RedeiOutcome::Completed { set, tangent_free } => {
                println!("completion has {} points, tangent-free: {tangent_free}", set.len());
                assert!(tangency::redei_converse_check(&set, linf)?);
            }
            RedeiOutcome::Rejected { determined } => println!("too many ({determined}) to complete"),
        }
    }
    Ok(())
}
