//! Explicit sets without tangents, each paired with a certificate that
//! records the expected size next to the size actually produced.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conic::{Conic, LineClass, PointClass, QuadForm};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::plane::{Line, Plane, Point, PointSet};
use crate::tangency::{self, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CertStatus {
    /// Tangent-free and of the expected size.
    Valid,
    /// Tangent-free, but the produced size differs from the expected formula.
    Flagged,
    Invalid,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub name: String,
    pub claimed_size: usize,
    pub actual_size: usize,
    pub tangent_free: bool,
    pub spectrum: Spectrum,
    pub status: CertStatus,
}

impl Certificate {
    pub fn new(name: &str, claimed_size: usize, set: &PointSet) -> Certificate {
        let tangent_free = tangency::is_set_without_tangents(set);
        let status = match (tangent_free, claimed_size == set.len()) {
            (false, _) => CertStatus::Invalid,
            (true, true) => CertStatus::Valid,
            (true, false) => CertStatus::Flagged,
        };
        Certificate {
            name: name.to_string(),
            claimed_size,
            actual_size: set.len(),
            tangent_free,
            spectrum: tangency::spectrum(set),
            status,
        }
    }
}

/// Points of `Z = 0` and `Y = 0` except their meet `⟨(1,0,0)⟩`.
pub fn trivial(plane: &Plane) -> PointSet {
    let l1 = plane.line_from_codes([0, 0, 1]).expect("valid");
    let l2 = plane.line_from_codes([0, 1, 0]).expect("valid");
    two_lines(plane, l1, l2)
}

pub fn two_lines(plane: &Plane, l1: Line, l2: Line) -> PointSet {
    let mut s = PointSet::new(plane);
    for l in [l1, l2] {
        for &p in plane.points_on(l) {
            s.insert(Point(p));
        }
    }
    if l1 != l2 {
        s.remove(plane.meet(l1, l2).expect("distinct"));
    }
    s
}

fn require_odd(plane: &Plane) -> Result<()> {
    if plane.field().is_odd() {
        Ok(())
    } else {
        Err(Error::EvenOrder(plane.q()))
    }
}

/// `a ∉ {0,1}` with `1 − a` and `a(a − 1)` both nonzero squares.
pub fn is_valid_two_conic_a(plane: &Plane, a: Fe) -> bool {
    let f = plane.field();
    let one_minus = f.sub(Fe::ONE, a);
    let prod = f.mul(a, f.sub(a, Fe::ONE));
    f.is_nonzero_square(one_minus) && f.is_nonzero_square(prod)
}

pub fn find_valid_a(plane: &Plane) -> Vec<Fe> {
    plane.field().elements().filter(|&a| is_valid_two_conic_a(plane, a)).collect()
}

/// Points on exactly one of `Z² = XY` and `Z² = aXY`.
pub fn two_conics(plane: &Plane, a: Fe) -> Result<PointSet> {
    require_odd(plane)?;
    if plane.q() <= 5 {
        return Err(Error::QTooSmall(plane.q()));
    }
    if !is_valid_two_conic_a(plane, a) {
        return Err(Error::InvalidA(a.0));
    }
    let f = plane.field();
    let form = |c: Fe| QuadForm([Fe::ZERO, Fe::ZERO, Fe::ONE, f.neg(c), Fe::ZERO, Fe::ZERO]);
    let c1 = Conic::new(plane, form(Fe::ONE))?;
    let c2 = Conic::new(plane, form(a))?;
    let both = c1.points().union(c2.points());
    let common = PointSet::from_points(plane, c1.points().iter().filter(|&p| c2.contains(p)));
    Ok(both.difference(&common))
}

/// The `q(q−1)/2` interior points of a conic.
pub fn interior_points(conic: &Conic) -> Result<PointSet> {
    let q = conic.plane().q();
    if q < 5 {
        return Err(Error::QTooSmall(q));
    }
    Ok(conic.points_of_class(PointClass::Interior))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineChoice {
    /// The `r` external lines through `Q` with the lowest indices.
    Lowest,
    /// A seeded random selection.
    Random(u64),
}

/// Interior points of `conic` off `r` external lines through the exterior
/// point `center`.
pub fn punctured_interior(conic: &Conic, center: Point, r: usize) -> Result<PointSet> {
    punctured_interior_with(conic, center, r, LineChoice::Lowest)
}

pub fn punctured_interior_with(conic: &Conic, center: Point, r: usize, choice: LineChoice) -> Result<PointSet> {
    let plane = conic.plane();
    let q = plane.q() as usize;
    let max = q.saturating_sub(5) / 2;
    if r > max {
        return Err(Error::RTooLarge { r, max });
    }
    if conic.classify_point(center) != PointClass::Exterior {
        return Err(Error::NotExterior);
    }
    let mut external: Vec<Line> = plane
        .lines_through(center)
        .iter()
        .map(|&l| Line(l))
        .filter(|&l| conic.classify_line(l) == LineClass::External)
        .collect();
    if let LineChoice::Random(seed) = choice {
        external.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut s = interior_points(conic)?;
    for &l in external.iter().take(r) {
        for &p in plane.points_on(l) {
            s.remove(Point(p));
        }
    }
    Ok(s)
}

pub fn interior_size(q: usize) -> usize {
    q * (q - 1) / 2
}

pub fn punctured_size(q: usize, r: usize) -> usize {
    q * (q - 1) / 2 - r * (q + 1) / 2
}

fn graph_completion(plane: &Plane, map: impl Fn(Fe) -> Fe) -> Result<PointSet> {
    let f = plane.field();
    let linf = plane.line_from_codes([1, 0, 0])?;
    let graph = PointSet::from_points(plane, f.elements().map(|x| plane.point([Fe::ONE, x, map(x)]).expect("nonzero")));
    let dirs = tangency::determined_directions(&graph, linf)?;
    let mut s = graph;
    for p in dirs.non_determined {
        s.insert(p);
    }
    Ok(s)
}

fn require_extension(plane: &Plane) -> Result<()> {
    let f = plane.field();
    if !f.is_odd() {
        return Err(Error::EvenCharacteristic);
    }
    if f.h() < 2 {
        return Err(Error::PrimeField(plane.q()));
    }
    Ok(())
}

/// `{⟨(1,x,x^p)⟩}` together with its non-determined directions on `X = 0`.
pub fn frobenius_graph(plane: &Plane) -> Result<PointSet> {
    require_extension(plane)?;
    let f = plane.field().clone();
    graph_completion(plane, |x| f.frobenius(x))
}

/// `{⟨(1,x,Tr(x))⟩}` together with its non-determined directions on `X = 0`.
pub fn trace_graph(plane: &Plane) -> Result<PointSet> {
    require_extension(plane)?;
    let f = plane.field().clone();
    graph_completion(plane, |x| f.trace(x))
}

/// The size formula printed alongside the Frobenius-graph construction.
pub fn frobenius_printed_size(q: usize, p: usize) -> usize {
    q + (q - p) / (p - 1)
}

/// Size actually produced by the Frobenius-graph construction:
/// `q` graph points plus `q + 1 − (q−1)/(p−1)` non-determined directions.
pub fn frobenius_constructed_size(q: usize, p: usize) -> usize {
    q + (q + 1) - (q - 1) / (p - 1)
}

pub fn trace_size(q: usize, p: usize) -> usize {
    2 * q - q / p
}

/// Ten points, ten 3-secants, three of them through each point, no 4-secant.
pub fn verify_desargues(s: &PointSet) -> Result<bool> {
    if s.len() != 10 {
        return Err(Error::WrongSize { expected: 10, got: s.len() });
    }
    let plane = s.plane();
    if plane.lines().any(|l| s.line_count(l) >= 4) {
        return Ok(false);
    }
    let three: Vec<u32> = plane.lines().filter(|&l| s.line_count(l) == 3).map(|l| l.0).collect();
    if three.len() != 10 {
        return Ok(false);
    }
    Ok(s.iter().all(|p| plane.lines_through(p).iter().filter(|l| three.contains(l)).count() == 3))
}

/// Named constructions as exposed on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Trivial,
    TwoConics { a: Option<u32> },
    Interior,
    PuncturedInterior { r: usize },
    FrobeniusGraph,
    TraceGraph,
}

impl Construction {
    pub fn name(&self) -> &'static str {
        match self {
            Construction::Trivial => "trivial",
            Construction::TwoConics { .. } => "two-conics",
            Construction::Interior => "interior",
            Construction::PuncturedInterior { .. } => "punctured-interior",
            Construction::FrobeniusGraph => "frobenius-graph",
            Construction::TraceGraph => "trace-graph",
        }
    }

    pub fn build(&self, plane: &Plane) -> Result<(PointSet, Certificate)> {
        let q = plane.q() as usize;
        let p = plane.field().p() as usize;
        let (set, claimed) = match *self {
            Construction::Trivial => (trivial(plane), 2 * q),
            Construction::TwoConics { a } => {
                let a = match a {
                    Some(a) => plane.field().element(a)?,
                    None => *find_valid_a(plane).first().ok_or(Error::QTooSmall(plane.q()))?,
                };
                (two_conics(plane, a)?, 2 * (q - 1))
            }
            Construction::Interior => (interior_points(&Conic::canonical(plane)?)?, interior_size(q)),
            Construction::PuncturedInterior { r } => {
                let conic = Conic::canonical(plane)?;
                let center = plane.point_from_codes([0, 1, 0])?;
                (punctured_interior(&conic, center, r)?, punctured_size(q, r))
            }
            Construction::FrobeniusGraph => (frobenius_graph(plane)?, frobenius_printed_size(q, p)),
            Construction::TraceGraph => (trace_graph(plane)?, trace_size(q, p)),
        };
        let cert = Certificate::new(self.name(), claimed, &set);
        Ok((set, cert))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangency::is_tangent_free;

    fn plane(q: u32) -> Plane {
        Plane::with_order(q).unwrap()
    }

    #[test]
    fn trivial_examples() {
        for (q, size) in [(3, 6), (5, 10)] {
            let pl = plane(q);
            let s = trivial(&pl);
            assert_eq!(s.len(), size);
            assert!(is_tangent_free(&s));
            assert_eq!(tangency::spectrum(&s).get(q as usize), 2);
        }
    }

    #[test]
    fn two_conic_examples() {
        let pl = plane(7);
        // squares mod 7 are {1, 2, 4}
        let squares = [1u32, 2, 4];
        let brute: Vec<Fe> = (2..7u32)
            .filter(|&a| squares.contains(&((8 - a) % 7)) && squares.contains(&(a * (a - 1) % 7)))
            .map(Fe)
            .collect();
        assert_eq!(find_valid_a(&pl), brute);
        assert!(brute.contains(&Fe(6)));
        let s = two_conics(&pl, Fe(6)).unwrap();
        assert_eq!(s.len(), 12);
        assert!(is_tangent_free(&s));
        assert_eq!(two_conics(&pl, Fe(3)).unwrap_err(), Error::InvalidA(3));
        assert!(find_valid_a(&plane(5)).is_empty());
        assert_eq!(two_conics(&plane(5), Fe(2)).unwrap_err(), Error::QTooSmall(5));
    }

    #[test]
    fn two_conics_excludes_common_points() {
        let pl = plane(11);
        for a in find_valid_a(&pl) {
            let s = two_conics(&pl, a).unwrap();
            assert!(!s.contains(pl.point_from_codes([1, 0, 0]).unwrap()));
            assert!(!s.contains(pl.point_from_codes([0, 1, 0]).unwrap()));
        }
    }

    #[test]
    fn interior_examples() {
        for (q, n) in [(5, 10), (7, 21)] {
            let c = Conic::canonical(&plane(q)).unwrap();
            let s = interior_points(&c).unwrap();
            assert_eq!(s.len(), n);
            assert!(is_tangent_free(&s));
        }
        let c5 = Conic::canonical(&plane(5)).unwrap();
        assert_eq!(verify_desargues(&interior_points(&c5).unwrap()), Ok(true));
        assert_eq!(verify_desargues(&trivial(&plane(5))), Ok(false));
        let c3 = Conic::canonical(&plane(3)).unwrap();
        assert_eq!(interior_points(&c3).unwrap_err(), Error::QTooSmall(3));
    }

    #[test]
    fn punctured_examples() {
        let pl = plane(7);
        let c = Conic::canonical(&pl).unwrap();
        let center = pl.point_from_codes([0, 1, 0]).unwrap();
        let s = punctured_interior(&c, center, 1).unwrap();
        assert_eq!(s.len(), 17);
        assert!(is_tangent_free(&s));
        assert_eq!(punctured_interior(&c, center, 0).unwrap(), interior_points(&c).unwrap());
        assert_eq!(punctured_interior(&c, center, 2).unwrap_err(), Error::RTooLarge { r: 2, max: 1 });
        let interior_pt = pl.point_from_codes([1, 0, 1]).unwrap();
        assert_eq!(c.classify_point(interior_pt), PointClass::Interior);
        assert_eq!(punctured_interior(&c, interior_pt, 1).unwrap_err(), Error::NotExterior);

        let pl9 = plane(9);
        let c9 = Conic::canonical(&pl9).unwrap();
        let s = punctured_interior(&c9, pl9.point_from_codes([0, 1, 0]).unwrap(), 2).unwrap();
        assert_eq!(s.len(), 26);
        assert!(is_tangent_free(&s));
        let r = punctured_interior_with(&c9, pl9.point_from_codes([0, 1, 0]).unwrap(), 2, LineChoice::Random(3)).unwrap();
        assert_eq!(r.len(), 26);
        assert!(is_tangent_free(&r));
    }

    #[test]
    fn graph_constructions() {
        let pl = plane(9);
        let t = trace_graph(&pl).unwrap();
        assert_eq!(t.len(), 15);
        assert!(is_tangent_free(&t));
        let fr = frobenius_graph(&pl).unwrap();
        assert!(is_tangent_free(&fr));
        assert_eq!(fr.len(), frobenius_constructed_size(9, 3));
        assert_eq!(fr.len(), 15);
        assert_eq!(frobenius_printed_size(9, 3), 12);
        let (_, cert) = Construction::FrobeniusGraph.build(&pl).unwrap();
        assert_eq!(cert.status, CertStatus::Flagged);

        // direct description of the directions: points (0,y,z) not of the form (0,x,x^p)
        let f = pl.field();
        let linf = pl.line_from_codes([1, 0, 0]).unwrap();
        for &p in pl.points_on(linf) {
            let p = Point(p);
            let of_form = f.nonzero().any(|x| pl.point([Fe::ZERO, x, f.frobenius(x)]).unwrap() == p);
            assert_eq!(fr.contains(p), !of_form);
        }

        let t27 = trace_graph(&plane(27)).unwrap();
        assert_eq!(t27.len(), 45);
        assert!(is_tangent_free(&t27));
        assert_eq!(trace_graph(&plane(5)).unwrap_err(), Error::PrimeField(5));
    }

    #[test]
    fn certificates() {
        let pl = plane(7);
        let (s, cert) = Construction::TwoConics { a: None }.build(&pl).unwrap();
        assert_eq!(cert.status, CertStatus::Valid);
        assert_eq!(cert.actual_size, s.len());
        let single = PointSet::from_indices(&pl, &[0]);
        assert_eq!(Certificate::new("x", 1, &single).status, CertStatus::Invalid);
    }
}
