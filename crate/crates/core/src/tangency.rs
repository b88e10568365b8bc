//! Tangent structure of arbitrary point sets: intersection spectra,
//! determined directions and the completion of a `q`-set by its
//! non-determined directions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::plane::{Line, Plane, Point, PointSet};

/// `counts[i]` = number of lines meeting the set in exactly `i` points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spectrum {
    pub counts: Vec<usize>,
}

impl Spectrum {
    pub fn get(&self, i: usize) -> usize {
        self.counts.get(i).copied().unwrap_or(0)
    }

    pub fn total_lines(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Largest `i` with `x_i > 0`.
    pub fn max_secant(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    /// The three double-counting identities for a set of `size` points in PG(2,q).
    pub fn satisfies_identities(&self, q: u32, size: usize) -> bool {
        let q = q as usize;
        let s0 = self.total_lines();
        let s1: usize = self.counts.iter().enumerate().map(|(i, &x)| i * x).sum();
        let s2: usize = self.counts.iter().enumerate().map(|(i, &x)| i * i.saturating_sub(1) * x).sum();
        s0 == q * q + q + 1 && s1 == size * (q + 1) && s2 == size * size.saturating_sub(1)
    }
}

impl fmt::Display for Spectrum {
    /// Zero-suppressed `i:count` pairs in ascending `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, c)| format!("{i}:{c}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn spectrum(s: &PointSet) -> Spectrum {
    let mut counts = vec![0usize; s.plane().q() as usize + 2];
    for &c in s.line_counts() {
        counts[c as usize] += 1;
    }
    Spectrum { counts }
}

/// No line meets `s` in exactly one point. Scans the lines directly rather
/// than trusting the cached counts. The empty set passes vacuously.
pub fn is_tangent_free(s: &PointSet) -> bool {
    let plane = s.plane();
    plane.lines().all(|l| plane.points_on(l).iter().filter(|&&p| s.contains(Point(p))).count() != 1)
}

/// Non-empty and tangent-free.
pub fn is_set_without_tangents(s: &PointSet) -> bool {
    !s.is_empty() && is_tangent_free(s)
}

pub fn tangent_lines(s: &PointSet) -> Vec<Line> {
    s.plane().lines().filter(|&l| s.line_count(l) == 1).collect()
}

/// Two lines with `q` points each whose common point is not in the set,
/// and nothing else.
pub fn is_trivial(s: &PointSet) -> bool {
    let plane = s.plane();
    let q = plane.q() as usize;
    if s.len() != 2 * q {
        return false;
    }
    let full: Vec<Line> = plane.lines().filter(|&l| s.line_count(l) == q).collect();
    if full.len() != 2 {
        return false;
    }
    let meet = plane.meet(full[0], full[1]).expect("distinct lines");
    !s.contains(meet)
}

/// All non-negative integer spectra `(x_0, x_2, …, x_max_i)` of a tangent-free
/// `n`-set in PG(2,q), i.e. solutions of the three counting identities with
/// `x_1 = 0`. Free variables are `x_4, …`; `x_3`, `x_2`, `x_0` follow by
/// back-substitution.
pub fn spectrum_solutions(n: usize, q: u32, max_i: usize) -> Result<Vec<Spectrum>> {
    let qq = q as usize;
    if n > 2 * (qq + 1) {
        return Err(Error::TooLarge(format!("n = {n} > 2(q+1)")));
    }
    let max_i = max_i.min(qq + 1);
    let lines = qq * qq + qq + 1;
    let r1 = (n * (qq + 1)) as i64;
    let r2 = (n * n.saturating_sub(1)) as i64;
    let mut out = Vec::new();
    let mut free = vec![0usize; max_i + 1];
    solve_free(4, max_i, r1, r2, lines as i64, &mut free, &mut out);
    out.sort();
    Ok(out)
}

fn solve_free(i: usize, max_i: usize, r1: i64, r2: i64, lines: i64, x: &mut Vec<usize>, out: &mut Vec<Spectrum>) {
    if r1 < 0 || r2 < 0 || lines < 0 {
        return;
    }
    if i > max_i {
        // 2x2 + 3x3 = r1, 2x2 + 6x3 = r2
        let d = r2 - r1;
        if d < 0 || d % 3 != 0 {
            return;
        }
        let x3 = d / 3;
        if x3 > 0 && max_i < 3 {
            return;
        }
        let rest = r1 - 3 * x3;
        if rest < 0 || rest % 2 != 0 {
            return;
        }
        let x2 = rest / 2;
        if x2 > 0 && max_i < 2 {
            return;
        }
        let x0 = lines - x2 - x3;
        if x0 < 0 {
            return;
        }
        let mut counts = x.clone();
        counts[0] = x0 as usize;
        if max_i >= 2 {
            counts[2] = x2 as usize;
        }
        if max_i >= 3 {
            counts[3] = x3 as usize;
        }
        out.push(Spectrum { counts });
        return;
    }
    let ii = i as i64;
    let mut k = 0i64;
    while k * ii <= r1 && k * ii * (ii - 1) <= r2 && k <= lines {
        x[i] = k as usize;
        solve_free(i + 1, max_i, r1 - k * ii, r2 - k * ii * (ii - 1), lines - k, x, out);
        k += 1;
    }
    x[i] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionSet {
    pub line_at_infinity: Line,
    pub determined: Vec<Point>,
    pub non_determined: Vec<Point>,
}

/// A point `D` of `linf` is determined iff some other line through `D`
/// meets `a` in at least two points.
pub fn determined_directions(a: &PointSet, linf: Line) -> Result<DirectionSet> {
    let plane = a.plane();
    if a.line_count(linf) > 0 {
        return Err(Error::PointsOnInfinity);
    }
    let mut determined = Vec::new();
    let mut non_determined = Vec::new();
    for &d in plane.points_on(linf) {
        let d = Point(d);
        let hit = plane.lines_through(d).iter().any(|&l| l != linf.0 && a.line_count(Line(l)) >= 2);
        if hit {
            determined.push(d);
        } else {
            non_determined.push(d);
        }
    }
    Ok(DirectionSet { line_at_infinity: linf, determined, non_determined })
}

/// Slope formula `(y_i − y_j)/(x_i − x_j)` for `L∞ : z = 0`, with `∞` mapped
/// to `⟨(0,1,0)⟩`.
pub fn directions_by_slope(a: &PointSet) -> Result<BTreeSet<Point>> {
    let plane = a.plane();
    let f = plane.field();
    let affine: Vec<(Fe, Fe)> = a
        .iter()
        .map(|p| {
            let [x, y, z] = plane.coords(p);
            let zi = f.inv(z).map_err(|_| Error::PointsOnInfinity)?;
            Ok((f.mul(x, zi), f.mul(y, zi)))
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeSet::new();
    for (i, &(xi, yi)) in affine.iter().enumerate() {
        for &(xj, yj) in &affine[i + 1..] {
            let dx = f.sub(xi, xj);
            let p = if dx.is_zero() {
                plane.point([Fe::ZERO, Fe::ONE, Fe::ZERO])?
            } else {
                plane.point([Fe::ONE, f.div(f.sub(yi, yj), dx)?, Fe::ZERO])?
            };
            out.insert(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum RedeiOutcome {
    /// `A` together with its non-determined directions.
    Completed { set: PointSet, tangent_free: bool },
    /// Too many determined directions for the completion theorem to apply.
    Rejected { determined: usize },
}

/// Completes a `q`-set of affine points by its non-determined directions
/// when fewer than `(q+3)/2` directions are determined.
pub fn redei_completion(a: &PointSet, linf: Line) -> Result<RedeiOutcome> {
    let plane = a.plane();
    let q = plane.q() as usize;
    if !plane.field().is_odd() {
        return Err(Error::EvenCharacteristic);
    }
    if a.len() != q {
        return Err(Error::WrongSize { expected: q, got: a.len() });
    }
    let dirs = determined_directions(a, linf)?;
    // |D| < (q+3)/2  <=>  2|D| < q+3
    if 2 * dirs.determined.len() >= q + 3 {
        return Ok(RedeiOutcome::Rejected { determined: dirs.determined.len() });
    }
    let mut set = a.clone();
    for &p in &dirs.non_determined {
        set.insert(p);
    }
    let tangent_free = is_tangent_free(&set);
    Ok(RedeiOutcome::Completed { set, tangent_free })
}

/// For a tangent-free `S` with `|S| = q + |S ∩ L∞|`: are the points of
/// `S ∩ L∞` exactly the non-determined directions of `S \ L∞`?
pub fn redei_converse_check(s: &PointSet, linf: Line) -> Result<bool> {
    let plane = s.plane();
    let q = plane.q();
    let on_line = s.line_count(linf);
    if s.len() != q as usize + on_line {
        return Err(Error::SizeMismatch { size: s.len(), on_line, q });
    }
    let mut affine = s.clone();
    for &p in plane.points_on(linf) {
        affine.remove(Point(p));
    }
    let dirs = determined_directions(&affine, linf)?;
    let on: Vec<Point> = s.points_on_line(linf);
    Ok(on == dirs.non_determined)
}

/// Lower bound `q + √(2q)/4 + 2` on a non-empty set without tangents, q odd,
/// rounded up. For even `q` the hyperoval bound `q + 2`.
pub fn size_lower_bound(q: u32) -> usize {
    if q % 2 == 0 {
        return q as usize + 2;
    }
    let b = q as f64 + (2.0 * q as f64).sqrt() / 4.0 + 2.0;
    b.ceil() as usize
}

/// Affine line of `plane` minus `linf`, for tests and examples.
pub fn affine_part(plane: &Plane, l: Line, linf: Line) -> PointSet {
    PointSet::from_points(plane, plane.points_on(l).iter().map(|&p| Point(p)).filter(|&p| !plane.incident(p, linf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::plane::Plane;

    fn two_lines(plane: &Plane, l1: Line, l2: Line) -> PointSet {
        let meet = plane.meet(l1, l2).unwrap();
        let mut s = PointSet::new(plane);
        for l in [l1, l2] {
            for &p in plane.points_on(l) {
                s.insert(Point(p));
            }
        }
        s.remove(meet);
        s
    }

    #[test]
    fn spectrum_of_two_lines() {
        let pl = Plane::with_order(5).unwrap();
        let s = two_lines(&pl, Line(0), Line(1));
        let sp = spectrum(&s);
        assert_eq!((sp.get(0), sp.get(2), sp.get(5)), (4, 25, 2));
        assert_eq!(sp.to_string(), "0:4 2:25 5:2");
        assert!(sp.satisfies_identities(5, 10));
        assert!(is_trivial(&s));
        assert!(is_tangent_free(&s));
        let empty = PointSet::new(&pl);
        assert_eq!(spectrum(&empty).get(0), 31);
        assert!(is_tangent_free(&empty) && !is_set_without_tangents(&empty));
        let single = PointSet::from_indices(&pl, &[3]);
        assert!(!is_tangent_free(&single));
    }

    #[test]
    fn spectrum_system_pg25() {
        let sols = spectrum_solutions(10, 5, 4).unwrap();
        let tuples: Vec<_> = sols.iter().map(|s| (s.get(0), s.get(2), s.get(3), s.get(4))).collect();
        assert_eq!(tuples, vec![(5, 21, 2, 3), (6, 15, 10, 0)]);
        for s in &sols {
            assert!(s.satisfies_identities(5, 10));
        }
    }

    #[test]
    fn spectrum_system_hyperoval_and_trivial() {
        let sols = spectrum_solutions(6, 4, 2).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!((sols[0].get(0), sols[0].get(2)), (6, 15));

        let pl = Plane::with_order(3).unwrap();
        let triv = spectrum(&two_lines(&pl, Line(0), Line(5)));
        let sols = spectrum_solutions(6, 3, 3).unwrap();
        assert!(sols.contains(&Spectrum { counts: triv.counts[..4].to_vec() }));
        assert!(spectrum_solutions(20, 3, 3).is_err());
    }

    #[test]
    fn frobenius_graph_directions_q9() {
        let pl = Plane::with_order(9).unwrap();
        let f = pl.field();
        let linf = pl.line_from_codes([1, 0, 0]).unwrap();
        let a = PointSet::from_points(&pl, f.elements().map(|x| pl.point([Fe::ONE, x, f.pow(x, 3)]).unwrap()));
        let d = determined_directions(&a, linf).unwrap();
        // oracle: every pair, direction (0, dx, dy)
        let mut pairs = BTreeSet::new();
        let pts: Vec<_> = a.iter().collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (u, v) = (pl.coords(pts[i]), pl.coords(pts[j]));
                pairs.insert(pl.point([Fe::ZERO, f.sub(u[1], v[1]), f.sub(u[2], v[2])]).unwrap());
            }
        }
        assert_eq!(d.determined.len(), 4);
        assert_eq!(d.determined.iter().copied().collect::<BTreeSet<_>>(), pairs);
    }

    #[test]
    fn small_direction_examples() {
        let pl = Plane::with_order(7).unwrap();
        let zinf = pl.line_from_codes([0, 0, 1]).unwrap();
        let two = PointSet::from_points(&pl, [pl.point_from_codes([1, 2, 1]).unwrap(), pl.point_from_codes([3, 1, 1]).unwrap()]);
        let d = determined_directions(&two, zinf).unwrap();
        assert_eq!(d.determined.len(), 1);
        assert_eq!(d.determined.iter().copied().collect::<BTreeSet<_>>(), directions_by_slope(&two).unwrap());

        let all_affine = PointSet::from_points(&pl, pl.points().filter(|&p| !pl.incident(p, zinf)));
        assert_eq!(determined_directions(&all_affine, zinf).unwrap().determined.len(), 8);
        assert_eq!(directions_by_slope(&all_affine).unwrap().len(), 8);

        let mut bad = two.clone();
        bad.insert(Point(pl.points_on(zinf)[0]));
        assert_eq!(determined_directions(&bad, zinf).unwrap_err(), Error::PointsOnInfinity);
    }


    #[test]
    fn affine_line_completes_to_trivial_set() {
        for q in [3, 5, 7, 9] {
            let pl = Plane::with_order(q).unwrap();
            let linf = Line(0);
            let a = affine_part(&pl, Line(7), linf);
            match redei_completion(&a, linf).unwrap() {
                RedeiOutcome::Completed { set, tangent_free } => {
                    assert!(tangent_free);
                    assert!(is_trivial(&set));
                    assert_eq!(redei_converse_check(&set, linf), Ok(true));
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn converse_size_mismatch() {
        let pl = Plane::with_order(5).unwrap();
        let s = two_lines(&pl, Line(0), Line(1));
        // a line meeting the trivial set in 2 points: |S| = 10 != 5 + 2
        let l = pl.lines().find(|&l| s.line_count(l) == 2).unwrap();
        assert_eq!(redei_converse_check(&s, l), Err(Error::SizeMismatch { size: 10, on_line: 2, q: 5 }));
    }

    #[test]
    fn completion_preconditions() {
        let pl = Plane::with_order(5).unwrap();
        let a = PointSet::from_indices(&pl, &[0, 1]);
        assert!(matches!(redei_completion(&a, Line(30)), Err(Error::WrongSize { .. })));
        let pl4 = Plane::new(Field::with_order(4).unwrap()).unwrap();
        let a4 = PointSet::from_indices(&pl4, &[0, 1, 2, 3]);
        assert_eq!(redei_completion(&a4, Line(20)).unwrap_err(), Error::EvenCharacteristic);
    }

    #[test]
    fn bound_values() {
        assert_eq!(size_lower_bound(3), 6);
        assert_eq!(size_lower_bound(5), 8);
        assert_eq!(size_lower_bound(7), 10);
        assert_eq!(size_lower_bound(9), 13);
        assert_eq!(size_lower_bound(11), 15);
        assert_eq!(size_lower_bound(4), 6);
    }
}
