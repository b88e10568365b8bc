//! Exterior sets of a conic: sets whose secants are all external lines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conic::{Conic, LineClass, PointClass, QuadForm};
use crate::error::{Error, Result};
use crate::field::{Fe, Field, QuadChar};
use crate::linalg::{self, Mat3};
use crate::plane::{Line, Plane, Point, PointSet};
use crate::tangency;

/// Largest order for the clique search over exterior points.
pub const CLIQUE_MAX_Q: u32 = 13;

fn codes(plane: &Plane, p: Point) -> [u32; 3] {
    plane.coords(p).map(|c| c.0)
}

fn line_codes(plane: &Plane, l: Line) -> [u32; 3] {
    plane.dual_coords(l).map(|c| c.0)
}

pub fn is_exterior_set(conic: &Conic, e: &PointSet) -> bool {
    let plane = conic.plane();
    plane.lines().all(|l| e.line_count(l) < 2 || conic.classify_line(l) == LineClass::External)
}

pub fn exterior_points_on_line(conic: &Conic, l: Line) -> Result<PointSet> {
    if conic.classify_line(l) != LineClass::External {
        return Err(Error::NotExternal);
    }
    let plane = conic.plane();
    let pts = plane.points_on(l).iter().map(|&p| Point(p));
    Ok(PointSet::from_points(plane, pts.filter(|&p| conic.classify_point(p) == PointClass::Exterior)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExteriorSetReport {
    pub q: u32,
    pub conic: QuadForm,
    /// Dual coordinates.
    pub base_line: [u32; 3],
    pub base_points: Vec<[u32; 3]>,
    pub extenders_on_line: Vec<[u32; 3]>,
    pub extenders_off_line: Vec<[u32; 3]>,
}

/// Every point `Q` outside the exterior points `S` of `l` such that
/// `S ∪ {Q}` is an exterior set, by a scan of the whole plane.
pub fn find_extenders(conic: &Conic, l: Line) -> Result<ExteriorSetReport> {
    let plane = conic.plane();
    let f = plane.field();
    if !f.is_odd() {
        return Err(Error::EvenOrder(plane.q()));
    }
    let base = exterior_points_on_line(conic, l)?;
    let mut on = Vec::new();
    let mut off = Vec::new();
    for q in plane.points().filter(|&q| !base.contains(q)) {
        let mut e = base.clone();
        e.insert(q);
        if is_exterior_set(conic, &e) {
            if plane.incident(q, l) {
                on.push(codes(plane, q));
            } else {
                off.push(codes(plane, q));
            }
        }
    }
    Ok(ExteriorSetReport {
        q: plane.q(),
        conic: conic.form(),
        base_line: line_codes(plane, l),
        base_points: base.iter().map(|p| codes(plane, p)).collect(),
        extenders_on_line: on,
        extenders_off_line: off,
    })
}

/// The line `Z = aX`, i.e. `aX − Z = 0`.
pub fn line_z_eq_ax(plane: &Plane, a: Fe) -> Line {
    let f = plane.field();
    plane.line([a, Fe::ZERO, f.neg(Fe::ONE)]).expect("nonzero")
}

/// Canonical conic `Y² = XZ` with `L: Z = aX`, `a` the smallest non-square.
pub fn canonical_setup(plane: &Plane) -> Result<(Conic, Line, Fe)> {
    let f = plane.field();
    let a = f.smallest_non_square().ok_or(Error::EvenOrder(plane.q()))?;
    let conic = Conic::canonical(plane)?;
    Ok((conic, line_z_eq_ax(plane, a), a))
}

/// Character of `(λ−a)² − 4(αa−ξλ)(ξ−α)`; `NonSquare` exactly when the join
/// of `(1,α,λ)` and `(1,ξ,a)` is external to `Y² = XZ`.
pub fn external_line_test_formula(f: &Field, alpha: Fe, lambda: Fe, xi: Fe, a: Fe) -> QuadChar {
    let d = f.sub(lambda, a);
    let four = f.from_int(4);
    let prod = f.mul(f.sub(f.mul(alpha, a), f.mul(xi, lambda)), f.sub(xi, alpha));
    f.quad_char(f.sub(f.mul(d, d), f.mul(four, prod)))
}

/// Compares the formula with `classify_line` on the explicit join
/// `(αa−ξλ)X + (λ−a)Y + (ξ−α)Z = 0`. Returns the number of disagreements
/// among the tuples given (coincident points are skipped).
pub fn external_formula_mismatches(plane: &Plane, tuples: impl IntoIterator<Item = [Fe; 4]>) -> Result<usize> {
    let f = plane.field();
    let conic = Conic::canonical(plane)?;
    let mut bad = 0;
    for [alpha, lambda, xi, a] in tuples {
        if alpha == xi && lambda == a {
            continue;
        }
        let coeffs = [f.sub(f.mul(alpha, a), f.mul(xi, lambda)), f.sub(lambda, a), f.sub(xi, alpha)];
        let m = plane.line(coeffs)?;
        let p1 = plane.point([Fe::ONE, alpha, lambda])?;
        let p2 = plane.point([Fe::ONE, xi, a])?;
        debug_assert_eq!(plane.join(p1, p2)?, m);
        let external = conic.classify_line(m) == LineClass::External;
        let predicted = external_line_test_formula(f, alpha, lambda, xi, a) == QuadChar::NonSquare;
        if external != predicted {
            bad += 1;
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyCase {
    /// `canonical`, `random-<i>` or `line-<index>`.
    pub setup: String,
    pub base_size: usize,
    pub on_line: usize,
    pub off_line: Vec<[u32; 3]>,
    /// Every point of `L` outside `S` extends `S`.
    pub all_of_line_extends: bool,
    /// Off-line extender equals the image of `(1,0,−a)` when one is expected.
    pub expected_point: Option<bool>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub q: u32,
    pub a: u32,
    pub cases: Vec<DichotomyCase>,
}

impl DichotomyReport {
    pub fn holds(&self) -> bool {
        self.cases.iter().all(|c| c.holds)
    }
}

fn check_case(conic: &Conic, l: Line, expected: Option<Point>, setup: String) -> Result<DichotomyCase> {
    let plane = conic.plane();
    let r = find_extenders(conic, l)?;
    let q = plane.q();
    let line_rest = plane.q() as usize + 1 - r.base_points.len();
    let all_of_line_extends = r.extenders_on_line.len() == line_rest;
    let expected_point = match (q % 4, expected) {
        (1, Some(e)) => Some(r.extenders_off_line == vec![codes(plane, e)]),
        _ => None,
    };
    let dichotomy = if q % 4 == 3 { r.extenders_off_line.is_empty() } else { r.extenders_off_line.len() == 1 };
    Ok(DichotomyCase {
        setup,
        base_size: r.base_points.len(),
        on_line: r.extenders_on_line.len(),
        holds: dichotomy
            && all_of_line_extends
            && r.base_points.len() == (q as usize + 1) / 2
            && expected_point != Some(false),
        off_line: r.extenders_off_line,
        all_of_line_extends,
        expected_point,
    })
}

/// The extension dichotomy on the canonical conic and line, on `transforms`
/// random projective images of it, and (if `all_lines`) on every external
/// line of the canonical conic.
pub fn verify_dichotomy(plane: &Plane, transforms: usize, all_lines: bool, seed: u64) -> Result<DichotomyReport> {
    let f = plane.field();
    let (conic, l, a) = canonical_setup(plane)?;
    let expected = plane.point([Fe::ONE, Fe::ZERO, f.neg(a)])?;
    let mut cases = vec![check_case(&conic, l, Some(expected), "canonical".into())?];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..transforms {
        let m: Mat3 = linalg::random_invertible(f, &mut rng);
        let image = |p: Point| plane.point(linalg::mat_apply(f, &m, plane.coords(p))).expect("invertible");
        let c2 = conic.transformed(&m)?;
        let on_l = plane.points_on(l);
        let l2 = plane.join(image(Point(on_l[0])), image(Point(on_l[1])))?;
        cases.push(check_case(&c2, l2, Some(image(expected)), format!("random-{i}"))?);
    }
    if all_lines {
        if plane.q() > 11 {
            return Err(Error::TooLarge(format!("all external lines for q = {}", plane.q())));
        }
        for m in conic.lines_of_class(LineClass::External) {
            cases.push(check_case(&conic, m, None, format!("line-{}", m.0))?);
        }
    }
    Ok(DichotomyReport { q: plane.q(), a: a.0, cases })
}

#[derive(Clone, Debug, Serialize)]
pub struct TenSet {
    pub set: PointSet,
    pub exterior_points: Vec<[u32; 3]>,
    /// The external lines other than `L` through the exterior points.
    pub second_lines: Vec<[u32; 3]>,
    pub meet: [u32; 3],
    pub concurrent: bool,
}

/// In PG(2,5): the conic, the three exterior points `P_i` of an external
/// line `L`, and the common point `Q` of the other external lines `M_i`
/// through them.
pub fn pg25_ten_set() -> Result<TenSet> {
    let plane = Plane::with_order(5)?;
    let (conic, l, _) = canonical_setup(&plane)?;
    let ps = exterior_points_on_line(&conic, l)?;
    let ms: Vec<Line> = ps
        .iter()
        .map(|p| {
            let others: Vec<Line> = plane
                .lines_through(p)
                .iter()
                .map(|&m| Line(m))
                .filter(|&m| m != l && conic.classify_line(m) == LineClass::External)
                .collect();
            assert_eq!(others.len(), 1, "an exterior point lies on (q−1)/2 external lines");
            others[0]
        })
        .collect();
    let q = plane.meet(ms[0], ms[1])?;
    let concurrent = ms.iter().all(|&m| plane.incident(q, m));
    let mut set = conic.points().union(&ps);
    set.insert(q);
    Ok(TenSet {
        exterior_points: ps.iter().map(|p| codes(&plane, p)).collect(),
        second_lines: ms.iter().map(|&m| line_codes(&plane, m)).collect(),
        meet: codes(&plane, q),
        concurrent,
        set,
    })
}

/// All exterior sets of `(q+1)/2` exterior points (cliques in the graph on
/// exterior points joined by external lines), sorted. With
/// `no_three_collinear` the result is filtered to arcs.
pub fn exterior_clique_search(conic: &Conic, no_three_collinear: bool) -> Result<Vec<PointSet>> {
    let plane = conic.plane();
    let q = plane.q();
    if !plane.field().is_odd() {
        return Err(Error::EvenOrder(q));
    }
    if q > CLIQUE_MAX_Q {
        return Err(Error::TooLarge(format!("clique search for q = {q}")));
    }
    let k = (q as usize + 1) / 2;
    let verts: Vec<u32> = conic.points_of_class(PointClass::Exterior).indices();
    let nv = verts.len();
    let words = nv.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; nv];
    for i in 0..nv {
        for j in i + 1..nv {
            let m = plane.join(Point(verts[i]), Point(verts[j]))?;
            if conic.classify_line(m) == LineClass::External {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    // candidates: vertices after the last chosen one adjacent to all chosen
    fn extend(adj: &[Vec<u64>], cand: &[u64], cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let left: u32 = cand.iter().map(|w| w.count_ones()).sum();
        if (left as usize) < k - cur.len() {
            return;
        }
        for (wi, &w) in cand.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let v = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                let next: Vec<u64> = cand
                    .iter()
                    .zip(&adj[v])
                    .enumerate()
                    .map(|(i, (&c, &a))| {
                        let above = match i.cmp(&(v / 64)) {
                            std::cmp::Ordering::Less => 0,
                            std::cmp::Ordering::Equal => !0u64 << (v % 64) << 1,
                            std::cmp::Ordering::Greater => !0,
                        };
                        c & a & above
                    })
                    .collect();
                cur.push(v);
                extend(adj, &next, cur, k, out);
                cur.pop();
            }
        }
    }
    let mut all = vec![0u64; words];
    for i in 0..nv {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut raw = Vec::new();
    extend(&adj, &all, &mut cur, k, &mut raw);
    for c in raw {
        let set = PointSet::from_indices(plane, &c.iter().map(|&i| verts[i]).collect::<Vec<_>>());
        if !no_three_collinear || crate::conic::is_arc(&set) {
            out.push(set);
        }
    }
    out.sort_by_key(|s| s.indices());
    Ok(out)
}

pub fn is_collinear(s: &PointSet) -> bool {
    s.len() <= 2 || s.plane().lines().any(|l| s.line_count(l) == s.len())
}

/// Whether the conic together with `e` has no tangents.
pub fn conic_union_check(conic: &Conic, e: &PointSet) -> bool {
    tangency::is_set_without_tangents(&conic.points().union(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(q: u32) -> (Plane, Conic, Line, Fe) {
        let pl = Plane::with_order(q).unwrap();
        let (c, l, a) = canonical_setup(&pl).unwrap();
        (pl, c, l, a)
    }

    #[test]
    fn exterior_points_q5() {
        let (pl, c, l, a) = setup(5);
        assert_eq!(a, Fe(2));
        let e = exterior_points_on_line(&c, l).unwrap();
        let want: Vec<Point> =
            [[0, 1, 0], [1, 1, 2], [1, 4, 2]].iter().map(|&v| pl.point_from_codes(v).unwrap()).collect();
        assert_eq!(e, PointSet::from_points(&pl, want));
        assert!(is_exterior_set(&c, &e));
        let secant = c.lines_of_class(LineClass::Secant)[0];
        assert_eq!(exterior_points_on_line(&c, secant).unwrap_err(), Error::NotExternal);
    }

    #[test]
    fn exterior_set_basics() {
        let (pl, c, _, _) = setup(7);
        let p = c.points_of_class(PointClass::Exterior).iter().next().unwrap();
        assert!(is_exterior_set(&c, &PointSet::from_points(&pl, [p])));
        let secant = c.lines_of_class(LineClass::Secant)[0];
        let two: Vec<Point> = pl.points_on(secant).iter().take(2).map(|&x| Point(x)).collect();
        assert!(!is_exterior_set(&c, &PointSet::from_points(&pl, two)));
    }

    #[test]
    fn extenders_q5_and_q7() {
        let (pl, c, l, _) = setup(5);
        let r = find_extenders(&c, l).unwrap();
        assert_eq!(r.extenders_off_line, vec![[1, 0, 3]]);
        assert_eq!(r.extenders_on_line.len(), 3);
        let _ = pl;
        let (_, c, l, _) = setup(7);
        assert!(find_extenders(&c, l).unwrap().extenders_off_line.is_empty());
    }

    #[test]
    fn formula_example_q5() {
        let f = Field::with_order(5).unwrap();
        assert_eq!(external_line_test_formula(&f, Fe(0), Fe(3), Fe(1), Fe(2)), QuadChar::NonSquare);
    }

    #[test]
    fn formula_agrees_exhaustively_small_q() {
        for q in [3, 5, 7, 9] {
            let pl = Plane::with_order(q).unwrap();
            let f = pl.field().clone();
            let els: Vec<Fe> = f.elements().collect();
            let tuples = els.iter().flat_map(|&al| {
                let els = els.clone();
                els.clone().into_iter().flat_map(move |la| {
                    let els = els.clone();
                    els.clone().into_iter().flat_map(move |xi| els.clone().into_iter().map(move |a| [al, la, xi, a]))
                })
            });
            assert_eq!(external_formula_mismatches(&pl, tuples).unwrap(), 0, "q = {q}");
        }
    }

    #[test]
    fn ten_set() {
        let t = pg25_ten_set().unwrap();
        assert!(t.concurrent);
        assert_eq!(t.set.len(), 10);
        assert!(tangency::is_set_without_tangents(&t.set));
    }

    #[test]
    fn cliques_q5_collinear() {
        let (_, c, _, _) = setup(5);
        let cl = exterior_clique_search(&c, false).unwrap();
        // one per external line
        assert_eq!(cl.len(), c.line_census().2);
        assert!(cl.iter().all(is_collinear));
        assert!(cl.iter().all(|e| !conic_union_check(&c, e)));
    }

    #[test]
    fn cliques_q7() {
        let (_, c, _, _) = setup(7);
        let arcs = exterior_clique_search(&c, true).unwrap();
        assert!(!arcs.is_empty());
        assert!(arcs.iter().all(|e| is_exterior_set(&c, e) && !is_collinear(e)));
        assert!(arcs.iter().any(|e| conic_union_check(&c, e)));
    }
}
