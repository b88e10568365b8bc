//! Direct subset enumeration for PG(2,3). Incidence is recomputed from dot
//! products, so nothing here depends on the plane's lookup tables.

use crate::error::{Error, Result};
use crate::plane::{dot, Plane, Point};

fn line_masks(plane: &Plane) -> Vec<u16> {
    let f = plane.field();
    plane
        .lines()
        .map(|l| {
            let u = plane.dual_coords(l);
            plane
                .points()
                .filter(|&p| dot(f, plane.coords(p), u).is_zero())
                .fold(0u16, |m, Point(i)| m | 1 << i)
        })
        .collect()
}

fn check_order(plane: &Plane) -> Result<()> {
    if plane.q() != 3 {
        return Err(Error::TooLarge(format!("brute force needs q = 3, got {}", plane.q())));
    }
    Ok(())
}

/// `counts[n]` = number of non-empty n-subsets without tangents, `n ≤ max`.
pub fn brute_force_size_counts(plane: &Plane, max: usize) -> Result<Vec<usize>> {
    check_order(plane)?;
    let lines = line_masks(plane);
    let mut counts = vec![0; max + 1];
    for s in 1u16..1 << 13 {
        let n = s.count_ones() as usize;
        if n <= max && lines.iter().all(|&l| (s & l).count_ones() != 1) {
            counts[n] += 1;
        }
    }
    Ok(counts)
}

/// Smallest size of a set without tangents in PG(2,3).
pub fn brute_force_min(plane: &Plane) -> Result<usize> {
    let counts = brute_force_size_counts(plane, 13)?;
    Ok(counts.iter().position(|&c| c > 0).expect("the whole plane has no tangents"))
}
