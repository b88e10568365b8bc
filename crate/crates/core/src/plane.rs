//! The incidence structure PG(2,q).
//!
//! Points and lines are homogeneous triples normalized so the first nonzero
//! coordinate is 1. Both are numbered by the same enumeration:
//! `(1,y,z)` gets `y·q + z`, `(0,1,z)` gets `q² + z` and `(0,0,1)` is last.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Field, FieldSpec};

/// Largest order for which a plane is tabulated.
pub const MAX_PLANE_ORDER: u32 = 128;

const JOIN_TABLE_MAX_N: usize = 2048;
const INCIDENCE_TABLE_MAX_N: usize = 4096;

pub type Triple = [Fe; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Line(pub u32);

impl Point {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Line {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

struct Tables {
    field: Field,
    q: u32,
    n: usize,
    coords: Vec<Triple>,
    // flat, q+1 entries per row
    points_on: Vec<u32>,
    lines_through: Vec<u32>,
    join: Option<Vec<u16>>,
    incidence: Option<Vec<u64>>,
}

/// PG(2,q) with precomputed incidence. Cheap to clone.
#[derive(Clone)]
pub struct Plane {
    t: Arc<Tables>,
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PG(2,{})", self.t.q)
    }
}

impl PartialEq for Plane {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || self.t.field == other.t.field
    }
}

impl Eq for Plane {}

pub fn cross(f: &Field, u: Triple, v: Triple) -> Triple {
    [
        f.sub(f.mul(u[1], v[2]), f.mul(u[2], v[1])),
        f.sub(f.mul(u[2], v[0]), f.mul(u[0], v[2])),
        f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0])),
    ]
}

pub fn dot(f: &Field, u: Triple, v: Triple) -> Fe {
    f.add(f.add(f.mul(u[0], v[0]), f.mul(u[1], v[1])), f.mul(u[2], v[2]))
}

/// Scales `v` so its first nonzero coordinate is 1.
pub fn normalize(f: &Field, v: Triple) -> Result<Triple> {
    let lead = v.iter().copied().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let s = f.inv(lead)?;
    Ok([f.mul(v[0], s), f.mul(v[1], s), f.mul(v[2], s)])
}

impl Plane {
    pub fn new(field: Field) -> Result<Plane> {
        let q = field.q();
        if q > MAX_PLANE_ORDER {
            return Err(Error::FieldTooLarge(q as u64));
        }
        let n = (q * q + q + 1) as usize;
        let coords: Vec<Triple> = (0..n as u32).map(|i| index_to_triple(q, i)).collect();
        let k = q as usize + 1;

        let mut points_on = Vec::with_capacity(n * k);
        for dual in &coords {
            // two independent vectors orthogonal to the line
            let basis = [[Fe::ONE, Fe::ZERO, Fe::ZERO], [Fe::ZERO, Fe::ONE, Fe::ZERO], [Fe::ZERO, Fe::ZERO, Fe::ONE]];
            let mut span: Vec<Triple> = Vec::with_capacity(2);
            for e in basis {
                let c = cross(&field, *dual, e);
                if c.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let c = normalize(&field, c)?;
                if span.first().is_some_and(|&s| s == c) {
                    continue;
                }
                span.push(c);
                if span.len() == 2 {
                    break;
                }
            }
            let (u, v) = (span[0], span[1]);
            let mut row: Vec<u32> = field
                .elements()
                .map(|t| {
                    let w = [
                        field.add(u[0], field.mul(t, v[0])),
                        field.add(u[1], field.mul(t, v[1])),
                        field.add(u[2], field.mul(t, v[2])),
                    ];
                    triple_to_index(q, normalize(&field, w).expect("independent"))
                })
                .collect();
            row.push(triple_to_index(q, v));
            row.sort_unstable();
            debug_assert!(row.windows(2).all(|w| w[0] < w[1]));
            points_on.extend(row);
        }

        let mut lines_through = vec![0u32; n * k];
        let mut fill = vec![0usize; n];
        for l in 0..n {
            for &p in &points_on[l * k..(l + 1) * k] {
                let p = p as usize;
                lines_through[p * k + fill[p]] = l as u32;
                fill[p] += 1;
            }
        }

        let incidence = (n <= INCIDENCE_TABLE_MAX_N).then(|| {
            let mut bits = vec![0u64; (n * n).div_ceil(64)];
            for l in 0..n {
                for &p in &points_on[l * k..(l + 1) * k] {
                    let b = l * n + p as usize;
                    bits[b / 64] |= 1 << (b % 64);
                }
            }
            bits
        });

        let join = (n <= JOIN_TABLE_MAX_N).then(|| {
            let mut j = vec![u16::MAX; n * n];
            for l in 0..n {
                let row = &points_on[l * k..(l + 1) * k];
                for &a in row {
                    for &b in row {
                        if a != b {
                            j[a as usize * n + b as usize] = l as u16;
                        }
                    }
                }
            }
            j
        });

        Ok(Plane { t: Arc::new(Tables { field, q, n, coords, points_on, lines_through, join, incidence }) })
    }

    pub fn with_order(q: u32) -> Result<Plane> {
        Plane::new(Field::with_order(q)?)
    }

    pub fn field(&self) -> &Field {
        &self.t.field
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Number of points (= number of lines).
    pub fn n(&self) -> usize {
        self.t.n
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + Clone {
        (0..self.t.n as u32).map(Point)
    }

    pub fn lines(&self) -> impl Iterator<Item = Line> + Clone {
        (0..self.t.n as u32).map(Line)
    }

    pub fn coords(&self, p: Point) -> Triple {
        self.t.coords[p.idx()]
    }

    pub fn dual_coords(&self, l: Line) -> Triple {
        self.t.coords[l.idx()]
    }

    pub fn point(&self, v: Triple) -> Result<Point> {
        self.check(v)?;
        Ok(Point(triple_to_index(self.t.q, normalize(&self.t.field, v)?)))
    }

    pub fn line(&self, v: Triple) -> Result<Line> {
        self.check(v)?;
        Ok(Line(triple_to_index(self.t.q, normalize(&self.t.field, v)?)))
    }

    /// Point from raw integer codes.
    pub fn point_from_codes(&self, c: [u32; 3]) -> Result<Point> {
        self.point([Fe(c[0]), Fe(c[1]), Fe(c[2])])
    }

    pub fn line_from_codes(&self, c: [u32; 3]) -> Result<Line> {
        self.line([Fe(c[0]), Fe(c[1]), Fe(c[2])])
    }

    fn check(&self, v: Triple) -> Result<()> {
        match v.iter().find(|c| c.0 >= self.t.q) {
            Some(c) => Err(Error::BadCoordinate(c.0)),
            None => Ok(()),
        }
    }

    pub fn points_on(&self, l: Line) -> &[u32] {
        let k = self.t.q as usize + 1;
        &self.t.points_on[l.idx() * k..(l.idx() + 1) * k]
    }

    pub fn lines_through(&self, p: Point) -> &[u32] {
        let k = self.t.q as usize + 1;
        &self.t.lines_through[p.idx() * k..(p.idx() + 1) * k]
    }

    pub fn incident(&self, p: Point, l: Line) -> bool {
        match &self.t.incidence {
            Some(bits) => {
                let b = l.idx() * self.t.n + p.idx();
                bits[b / 64] >> (b % 64) & 1 == 1
            }
            None => dot(&self.t.field, self.coords(p), self.dual_coords(l)).is_zero(),
        }
    }

    /// The line through two distinct points.
    pub fn join(&self, p: Point, r: Point) -> Result<Line> {
        if p == r {
            return Err(Error::IdenticalPoints);
        }
        if let Some(j) = &self.t.join {
            return Ok(Line(j[p.idx() * self.t.n + r.idx()] as u32));
        }
        let c = cross(&self.t.field, self.coords(p), self.coords(r));
        Ok(Line(triple_to_index(self.t.q, normalize(&self.t.field, c)?)))
    }

    /// The common point of two distinct lines.
    pub fn meet(&self, l: Line, m: Line) -> Result<Point> {
        if l == m {
            return Err(Error::IdenticalLines);
        }
        // points and lines share one numbering, so the dual join is the meet
        self.join(Point(l.0), Point(m.0)).map(|x| Point(x.0))
    }
}

fn index_to_triple(q: u32, i: u32) -> Triple {
    let qq = q * q;
    if i < qq {
        [Fe::ONE, Fe(i / q), Fe(i % q)]
    } else if i < qq + q {
        [Fe::ZERO, Fe::ONE, Fe(i - qq)]
    } else {
        [Fe::ZERO, Fe::ZERO, Fe::ONE]
    }
}

fn triple_to_index(q: u32, v: Triple) -> u32 {
    if v[0] == Fe::ONE {
        v[1].0 * q + v[2].0
    } else if v[1] == Fe::ONE {
        q * q + v[2].0
    } else {
        q * q + q
    }
}

/// A set of points with incrementally maintained per-line counts.
#[derive(Clone)]
pub struct PointSet {
    plane: Plane,
    member: Vec<bool>,
    len: usize,
    line_counts: Vec<u32>,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet").field("plane", &self.plane).field("points", &self.indices()).finish()
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.plane == other.plane && self.member == other.member
    }
}

impl Eq for PointSet {}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl PointSet {
    pub fn new(plane: &Plane) -> PointSet {
        PointSet { plane: plane.clone(), member: vec![false; plane.n()], len: 0, line_counts: vec![0; plane.n()] }
    }

    pub fn from_points(plane: &Plane, pts: impl IntoIterator<Item = Point>) -> PointSet {
        let mut s = PointSet::new(plane);
        for p in pts {
            s.insert(p);
        }
        s
    }

    pub fn from_indices(plane: &Plane, idx: &[u32]) -> PointSet {
        PointSet::from_points(plane, idx.iter().map(|&i| Point(i)))
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.member[p.idx()]
    }

    /// Returns false if the point was already present.
    pub fn insert(&mut self, p: Point) -> bool {
        if self.member[p.idx()] {
            return false;
        }
        self.member[p.idx()] = true;
        self.len += 1;
        for &l in self.plane.lines_through(p) {
            self.line_counts[l as usize] += 1;
        }
        true
    }

    pub fn remove(&mut self, p: Point) -> bool {
        if !self.member[p.idx()] {
            return false;
        }
        self.member[p.idx()] = false;
        self.len -= 1;
        for &l in self.plane.lines_through(p) {
            self.line_counts[l as usize] -= 1;
        }
        true
    }

    pub fn line_count(&self, l: Line) -> usize {
        self.line_counts[l.idx()] as usize
    }

    pub fn line_counts(&self) -> &[u32] {
        &self.line_counts
    }

    /// Per-line counts recomputed from scratch.
    pub fn recount(&self) -> Vec<u32> {
        self.plane
            .lines()
            .map(|l| self.plane.points_on(l).iter().filter(|&&p| self.member[p as usize]).count() as u32)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| Point(i as u32))
    }

    /// Member indices in ascending order.
    pub fn indices(&self) -> Vec<u32> {
        self.iter().map(|p| p.0).collect()
    }

    pub fn points_on_line(&self, l: Line) -> Vec<Point> {
        self.plane.points_on(l).iter().map(|&p| Point(p)).filter(|&p| self.contains(p)).collect()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        for p in other.iter() {
            s.insert(p);
        }
        s
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        for p in other.iter() {
            s.remove(p);
        }
        s
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    pub fn to_file(&self) -> PointSetFile {
        PointSetFile {
            field: self.plane.field().spec().clone(),
            points: self.iter().map(|p| self.plane.coords(p).map(|c| c.0)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data")
    }
}

/// On-disk form of a point set: field description and integer-coded
/// coordinate triples (normalized on load).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub field: FieldSpec,
    pub points: Vec<[u32; 3]>,
}

impl PointSetFile {
    pub fn load(&self) -> Result<PointSet> {
        let plane = Plane::new(Field::from_spec(&self.field)?)?;
        self.load_into(&plane)
    }

    pub fn load_into(&self, plane: &Plane) -> Result<PointSet> {
        if plane.field().spec() != &self.field {
            return Err(Error::Format("point set field does not match the plane".into()));
        }
        let mut s = PointSet::new(plane);
        for &c in &self.points {
            s.insert(plane.point_from_codes(c)?);
        }
        Ok(s)
    }

    pub fn parse(json: &str) -> Result<PointSetFile> {
        serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn point_counts() {
        for (q, n) in [(3, 13), (5, 31), (7, 57)] {
            let pl = Plane::with_order(q).unwrap();
            assert_eq!(pl.n(), n);
            assert_eq!(pl.points().count(), n);
        }
    }

    #[test]
    fn enumeration_order() {
        let pl = Plane::with_order(5).unwrap();
        let c = |i| pl.coords(Point(i)).map(|x: Fe| x.0);
        assert_eq!(c(0), [1, 0, 0]);
        assert_eq!(c(1), [1, 0, 1]);
        assert_eq!(c(5), [1, 1, 0]);
        assert_eq!(c(25), [0, 1, 0]);
        assert_eq!(c(30), [0, 0, 1]);
    }

    #[test]
    fn join_examples() {
        let pl = Plane::with_order(5).unwrap();
        let f = pl.field().clone();
        let p = pl.point_from_codes([1, 0, 0]).unwrap();
        let r = pl.point_from_codes([0, 1, 0]).unwrap();
        assert_eq!(pl.dual_coords(pl.join(p, r).unwrap()).map(|x| x.0), [0, 0, 1]);
        assert_eq!(pl.join(p, p), Err(Error::IdenticalPoints));

        // (1,0,3),(0,1,0): a + 3c = 0, b = 0 -> (1, 0, -1/3) = (1,0,3) since 3*3 = 9 = 4 = -1
        let p = pl.point_from_codes([1, 0, 3]).unwrap();
        let l = pl.join(p, r).unwrap();
        let d = pl.dual_coords(l);
        let expect_c = f.neg(f.inv(Fe(3)).unwrap());
        assert_eq!(d, [Fe(1), Fe(0), expect_c]);
        assert_eq!(expect_c, Fe(3));
        assert!(pl.incident(p, l) && pl.incident(r, l));
    }

    #[test]
    fn meet_examples() {
        let pl = Plane::with_order(5).unwrap();
        let z0 = pl.line_from_codes([0, 0, 1]).unwrap();
        let y0 = pl.line_from_codes([0, 1, 0]).unwrap();
        assert_eq!(pl.coords(pl.meet(z0, y0).unwrap()).map(|x| x.0), [1, 0, 0]);
        assert_eq!(pl.meet(z0, z0), Err(Error::IdenticalLines));
        for p in pl.points() {
            let ls = pl.lines_through(p);
            assert_eq!(pl.meet(Line(ls[0]), Line(ls[1])).unwrap(), p);
        }
    }

    #[test]
    fn incidence_row_sizes() {
        let pl = Plane::with_order(5).unwrap();
        let mut total = 0;
        for l in pl.lines() {
            assert_eq!(pl.points_on(l).len(), 6);
            total += pl.points_on(l).len();
        }
        for p in pl.points() {
            assert_eq!(pl.lines_through(p).len(), 6);
        }
        assert_eq!(total, 31 * 6);
    }

    #[test]
    fn axioms_small_orders_and_table_free_path() {
        // q = 47 exceeds the join table and exercises the cross-product route
        for q in [2, 3, 4, 47] {
            let pl = Plane::with_order(q).unwrap();
            for a in pl.points().step_by(7) {
                for b in pl.points().step_by(5) {
                    if a == b {
                        continue;
                    }
                    let l = pl.join(a, b).unwrap();
                    assert!(pl.incident(a, l) && pl.incident(b, l));
                    assert!(dot(pl.field(), pl.coords(a), pl.dual_coords(l)).is_zero());
                }
            }
        }
    }

    #[test]
    fn file_roundtrip_normalizes() {
        let pl = Plane::with_order(5).unwrap();
        let file = PointSetFile::parse(r#"{"field":{"p":5,"h":1,"modulus":[0,1]},"points":[[2,0,4],[0,3,3]]}"#).unwrap();
        let s = file.load_into(&pl).unwrap();
        assert_eq!(s.to_file().points, vec![[1, 0, 2], [0, 1, 1]]);
        assert!(file.load().is_ok());
        assert!(PointSetFile::parse("{").is_err());
        let bad = PointSetFile { points: vec![[0, 0, 0]], ..file };
        assert_eq!(bad.load_into(&pl).unwrap_err(), Error::ZeroVector);
    }

    proptest! {
        #[test]
        fn normalization_is_scale_invariant(x in 0u32..7, y in 0u32..7, z in 0u32..7, lam in 1u32..7) {
            prop_assume!(x + y + z > 0);
            let f = Field::with_order(7).unwrap();
            let v = [Fe(x), Fe(y), Fe(z)];
            let w = v.map(|c| f.mul(c, Fe(lam)));
            let nv = normalize(&f, v).unwrap();
            prop_assert_eq!(nv, normalize(&f, w).unwrap());
            prop_assert_eq!(nv, normalize(&f, nv).unwrap());
        }

        #[test]
        fn incremental_counts_match_recount(ops in proptest::collection::vec((any::<bool>(), 0u32..57), 0..80)) {
            let pl = Plane::with_order(7).unwrap();
            let mut s = PointSet::new(&pl);
            for (ins, p) in ops {
                if ins { s.insert(Point(p)); } else { s.remove(Point(p)); }
            }
            prop_assert_eq!(s.recount(), s.line_counts().to_vec());
            let total: u32 = s.line_counts().iter().sum();
            prop_assert_eq!(total as usize, s.len() * 8);
        }
    }
}
