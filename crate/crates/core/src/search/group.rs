//! PGL(3,q) acting on points, orbits of point sets, and classification.
//!
//! For `q ≤ 5` the whole group is listed as point permutations. Beyond that
//! orbits are grown from generators, with a cap on the orbit size.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::{det, Mat3};
use crate::plane::{Plane, PointSet};
use crate::tangency::{self, Spectrum};

const FULL_ENUMERATION_MAX_Q: u32 = 5;
pub const DEFAULT_ORBIT_LIMIT: usize = 2_000_000;

/// `(q³−1)(q³−q)(q³−q²)/(q−1)`.
pub fn pgl_order(q: u32) -> u64 {
    let q = q as u64;
    let q3 = q * q * q;
    (q3 - 1) * (q3 - q) * (q3 - q * q) / (q - 1)
}

pub struct PglGroup {
    plane: Plane,
    order: u64,
    /// Flattened point permutations, `n` entries each (full enumeration only).
    elements: Option<Vec<u16>>,
    generators: Vec<Vec<u32>>,
    orbit_limit: usize,
}

fn permutation(plane: &Plane, m: &Mat3) -> Vec<u32> {
    let f = plane.field();
    plane
        .points()
        .map(|p| {
            let v = crate::linalg::mat_apply(f, m, plane.coords(p));
            plane.point(v).expect("invertible matrix").0
        })
        .collect()
}

impl PglGroup {
    pub fn new(plane: &Plane) -> PglGroup {
        let f = plane.field();
        let (o, z) = (Fe::ONE, Fe::ZERO);
        let w = f.primitive();
        let gens: [Mat3; 4] = [
            [[w, z, z], [z, o, z], [z, z, o]],
            [[z, o, z], [o, z, z], [z, z, o]],
            [[z, o, z], [z, z, o], [o, z, z]],
            [[o, o, z], [z, o, z], [z, z, o]],
        ];
        let elements = (plane.q() <= FULL_ENUMERATION_MAX_Q).then(|| Self::enumerate(plane));
        PglGroup {
            plane: plane.clone(),
            order: pgl_order(plane.q()),
            elements,
            generators: gens.iter().map(|m| permutation(plane, m)).collect(),
            orbit_limit: DEFAULT_ORBIT_LIMIT,
        }
    }

    pub fn with_orbit_limit(mut self, limit: usize) -> PglGroup {
        self.orbit_limit = limit;
        self
    }

    /// Matrices whose first nonzero entry is 1, one per projective class.
    fn enumerate(plane: &Plane) -> Vec<u16> {
        let f = plane.field();
        let q = plane.q();
        let total = (q as u64).pow(9);
        let mut out = Vec::with_capacity(pgl_order(q) as usize * plane.n());
        for code in 0..total {
            let mut c = code;
            let mut e = [Fe::ZERO; 9];
            for x in e.iter_mut() {
                *x = Fe((c % q as u64) as u32);
                c /= q as u64;
            }
            if e.iter().find(|x| !x.is_zero()) != Some(&Fe::ONE) {
                continue;
            }
            let m = [[e[0], e[1], e[2]], [e[3], e[4], e[5]], [e[6], e[7], e[8]]];
            if det(f, &m).is_zero() {
                continue;
            }
            out.extend(permutation(plane, &m).into_iter().map(|p| p as u16));
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    /// Number of listed elements (equals `order()` when enumerated).
    pub fn listed(&self) -> Option<usize> {
        self.elements.as_ref().map(|e| e.len() / self.plane.n())
    }

    fn image(perm: impl Fn(u32) -> u32, set: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = set.iter().map(|&p| perm(p)).collect();
        v.sort_unstable();
        v
    }

    /// All images of `set` (sorted index vectors).
    pub fn orbit(&self, set: &[u32]) -> Result<HashSet<Vec<u32>>> {
        let mut start = set.to_vec();
        start.sort_unstable();
        if let Some(el) = &self.elements {
            let n = self.plane.n();
            return Ok(el.chunks_exact(n).map(|g| Self::image(|p| g[p as usize] as u32, &start)).collect());
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(s) = queue.pop_front() {
            for g in &self.generators {
                let t = Self::image(|p| g[p as usize], &s);
                if !seen.contains(&t) {
                    if seen.len() >= self.orbit_limit {
                        return Err(Error::GroupTooLarge(format!(
                            "orbit exceeds {} sets in PG(2,{})",
                            self.orbit_limit,
                            self.plane.q()
                        )));
                    }
                    seen.insert(t.clone());
                    queue.push_back(t);
                }
            }
        }
        Ok(seen)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRep {
    /// Lexicographically least sorted index vector in the orbit.
    pub canonical: PointSet,
    pub stabilizer_order: u64,
    pub class_size: u64,
    /// How many of the input sets fall in this class.
    pub members: usize,
    pub spectrum: Spectrum,
}

/// Partitions `sets` into projective equivalence classes, ordered by
/// canonical form.
pub fn classify_up_to_pgl(plane: &Plane, sets: &[PointSet]) -> Result<Vec<OrbitRep>> {
    classify_with(&PglGroup::new(plane), sets)
}

pub fn classify_with(group: &PglGroup, sets: &[PointSet]) -> Result<Vec<OrbitRep>> {
    let plane = &group.plane;
    let mut class_of: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut reps: Vec<OrbitRep> = Vec::new();
    for s in sets {
        let key = s.indices();
        if let Some(&c) = class_of.get(&key) {
            reps[c].members += 1;
            continue;
        }
        let orbit = group.orbit(&key)?;
        let canonical = orbit.iter().min().expect("non-empty orbit").clone();
        let size = orbit.len() as u64;
        let id = reps.len();
        for t in orbit {
            class_of.insert(t, id);
        }
        let canonical = PointSet::from_indices(plane, &canonical);
        reps.push(OrbitRep {
            spectrum: tangency::spectrum(&canonical),
            canonical,
            stabilizer_order: group.order / size,
            class_size: size,
            members: 1,
        });
    }
    reps.sort_by_key(|r| r.canonical.indices());
    Ok(reps)
}

pub fn are_equivalent(plane: &Plane, a: &PointSet, b: &PointSet) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(PglGroup::new(plane).orbit(&a.indices())?.contains(&b.indices()))
}
