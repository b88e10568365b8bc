//! The code of points and lines of PG(2,q): dual codewords over F_p and the
//! peeling decoder on the erasure channel.
//!
//! Incidence matrices have one row per line and one column per point.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conic::QuadForm;
use crate::error::{Error, Result};
use crate::field::{Fe, Field, Modulus};
use crate::linalg;
use crate::plane::{Line, Plane, Point, PointSet};
use crate::tangency;

/// Exhaustive nullspace enumeration up to this many vectors.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;
const RANDOM_TRIALS: usize = 200_000;

pub struct IncidenceMatrix {
    plane: Plane,
    prime: Field,
}

impl IncidenceMatrix {
    pub fn new(plane: &Plane) -> IncidenceMatrix {
        let p = plane.field().p();
        IncidenceMatrix { plane: plane.clone(), prime: Field::new(p, 1, Modulus::Auto).expect("prime") }
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn prime_field(&self) -> &Field {
        &self.prime
    }

    pub fn entry(&self, l: Line, p: Point) -> u32 {
        self.plane.incident(p, l) as u32
    }

    pub fn row_weight(&self, l: Line) -> usize {
        self.plane.points_on(l).len()
    }

    pub fn column_weight(&self, p: Point) -> usize {
        self.plane.lines_through(p).len()
    }

    /// Rows restricted to the given columns, over F_p.
    fn submatrix(&self, cols: &[u32]) -> Vec<Vec<Fe>> {
        self.plane
            .lines()
            .map(|l| cols.iter().map(|&c| if self.plane.incident(Point(c), l) { Fe::ONE } else { Fe::ZERO }).collect())
            .collect()
    }
}

/// A vector indexed by the points, entries in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualVector {
    pub p: u32,
    pub coefficients: Vec<u32>,
}

impl DualVector {
    pub fn zero(plane: &Plane) -> DualVector {
        DualVector { p: plane.field().p(), coefficients: vec![0; plane.n()] }
    }

    pub fn weight(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c != 0).count()
    }

    pub fn support(&self, plane: &Plane) -> PointSet {
        let idx: Vec<u32> = (0..self.coefficients.len() as u32).filter(|&i| self.coefficients[i as usize] != 0).collect();
        PointSet::from_indices(plane, &idx)
    }
}

fn check_length(plane: &Plane, v: &DualVector) -> Result<()> {
    if v.coefficients.len() != plane.n() {
        return Err(Error::BadLength { expected: plane.n(), got: v.coefficients.len() });
    }
    Ok(())
}

/// Every line sum vanishes mod p.
pub fn is_dual_codeword(plane: &Plane, v: &DualVector) -> Result<bool> {
    check_length(plane, v)?;
    let p = v.p as u64;
    Ok(plane
        .lines()
        .all(|l| plane.points_on(l).iter().map(|&x| v.coefficients[x as usize] as u64).sum::<u64>() % p == 0))
}

/// Tangent-freeness of the support of a dual codeword.
pub fn support_tangency(plane: &Plane, v: &DualVector) -> Result<bool> {
    if !is_dual_codeword(plane, v)? {
        return Err(Error::NotCodeword);
    }
    Ok(tangency::is_tangent_free(&v.support(plane)))
}

/// `+1` on one line and `−1` on another, both away from their meet; the
/// support is the trivial set.
pub fn trivial_signing(plane: &Plane, l1: Line, l2: Line) -> Result<DualVector> {
    let m = plane.meet(l1, l2)?;
    let p = plane.field().p();
    let mut v = DualVector::zero(plane);
    for &x in plane.points_on(l1) {
        v.coefficients[x as usize] = 1;
    }
    for &x in plane.points_on(l2) {
        v.coefficients[x as usize] = p - 1;
    }
    v.coefficients[m.idx()] = 0;
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CodewordSearch {
    Found(DualVector),
    /// `exact`: the whole space of codewords on the support was enumerated.
    NoneFound { exact: bool },
}

/// A dual codeword whose support is exactly `s`, if one exists.
pub fn dual_codeword_on_support(s: &PointSet, seed: u64) -> CodewordSearch {
    let plane = s.plane();
    let inc = IncidenceMatrix::new(plane);
    let f = inc.prime_field();
    let cols = s.indices();
    if cols.is_empty() {
        return CodewordSearch::NoneFound { exact: true };
    }
    let basis = linalg::nullspace(f, &inc.submatrix(&cols), cols.len());
    let d = basis.len();
    let p = f.q() as u64;
    let lift = |coef: &[Fe]| {
        let mut v = DualVector::zero(plane);
        for (j, &c) in cols.iter().enumerate() {
            let mut x = Fe::ZERO;
            for (b, &k) in basis.iter().zip(coef) {
                x = f.add(x, f.mul(k, b[j]));
            }
            v.coefficients[c as usize] = x.0;
        }
        v
    };
    if d == 0 {
        return CodewordSearch::NoneFound { exact: true };
    }
    let full = |v: &DualVector| v.weight() == cols.len();
    let total = p.checked_pow(d as u32).filter(|&t| t <= EXHAUSTIVE_LIMIT);
    if let Some(total) = total {
        let mut coef = vec![Fe::ZERO; d];
        for code in 1..total {
            let mut c = code;
            for k in coef.iter_mut() {
                *k = Fe((c % p) as u32);
                c /= p;
            }
            let v = lift(&coef);
            if full(&v) {
                return CodewordSearch::Found(v);
            }
        }
        return CodewordSearch::NoneFound { exact: true };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let coef: Vec<Fe> = (0..d).map(|_| Fe(rng.gen_range(0..p as u32))).collect();
        let v = lift(&coef);
        if full(&v) {
            return CodewordSearch::Found(v);
        }
    }
    CodewordSearch::NoneFound { exact: false }
}

/// Uniform random elements of the dual code.
pub fn random_dual_codewords(plane: &Plane, count: usize, seed: u64) -> Vec<DualVector> {
    let inc = IncidenceMatrix::new(plane);
    let f = inc.prime_field();
    let all: Vec<u32> = (0..plane.n() as u32).collect();
    let basis = linalg::nullspace(f, &inc.submatrix(&all), all.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut v = DualVector::zero(plane);
            for b in &basis {
                let k = Fe(rng.gen_range(0..f.q()));
                for (x, &bj) in v.coefficients.iter_mut().zip(b) {
                    *x = f.add(Fe(*x), f.mul(k, bj)).0;
                }
            }
            v
        })
        .collect()
}

/// Dimension of the dual code (nullity of the incidence matrix over F_p).
pub fn dual_dimension(plane: &Plane) -> usize {
    let inc = IncidenceMatrix::new(plane);
    let all: Vec<u32> = (0..plane.n() as u32).collect();
    linalg::nullspace(inc.prime_field(), &inc.submatrix(&all), all.len()).len()
}

fn peel_impl(erased: &PointSet, mut pick: impl FnMut(usize) -> usize) -> PointSet {
    let plane = erased.plane();
    let mut cur = erased.clone();
    let mut pending: Vec<u32> = plane.lines().filter(|&l| cur.line_count(l) == 1).map(|l| l.0).collect();
    while !pending.is_empty() {
        let l = Line(pending.swap_remove(pick(pending.len())));
        if cur.line_count(l) != 1 {
            continue;
        }
        let p = plane.points_on(l).iter().map(|&x| Point(x)).find(|&x| cur.contains(x)).expect("one erased point");
        cur.remove(p);
        pending.extend(plane.lines_through(p).iter().copied().filter(|&m| cur.line_count(Line(m)) == 1));
    }
    cur
}

/// Iterative erasure decoding: while some line holds exactly one erased
/// point, that point is recovered. Returns the erasures left.
pub fn peel_decode(erased: &PointSet) -> PointSet {
    peel_impl(erased, |n| n - 1)
}

/// Same, with the next line chosen at random.
pub fn peel_decode_shuffled<R: Rng>(erased: &PointSet, rng: &mut R) -> PointSet {
    peel_impl(erased, |n| rng.gen_range(0..n))
}

/// Largest subset without tangents, by removing every point on a tangent
/// simultaneously (counts recomputed from scratch) until nothing changes.
pub fn maximal_stopping_subset(s: &PointSet) -> PointSet {
    let plane = s.plane();
    let mut cur = s.clone();
    loop {
        let counts = cur.recount();
        let doomed: Vec<Point> =
            cur.iter().filter(|&p| plane.lines_through(p).iter().any(|&l| counts[l as usize] == 1)).collect();
        if doomed.is_empty() {
            return cur;
        }
        for p in doomed {
            cur.remove(p);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StoppingReport {
    pub q: u32,
    pub tested: usize,
    pub exhaustive: bool,
    pub stopping_sets: usize,
    pub mismatches: usize,
}

/// Compares "the decoder makes no progress" with "no tangent line" on every
/// subset (`q ≤ 4`) or on `samples` random subsets.
pub fn stopping_equivalence_check(plane: &Plane, samples: usize, seed: u64) -> StoppingReport {
    let n = plane.n();
    let mut report = StoppingReport { q: plane.q(), tested: 0, exhaustive: n <= 21, stopping_sets: 0, mismatches: 0 };
    let mut test = |s: &PointSet| {
        let fixed = peel_decode(s) == *s;
        report.tested += 1;
        report.stopping_sets += fixed as usize;
        if fixed != tangency::is_tangent_free(s) {
            report.mismatches += 1;
        }
    };
    if n <= 21 {
        for mask in 0u32..1 << n {
            let idx: Vec<u32> = (0..n as u32).filter(|&i| mask >> i & 1 == 1).collect();
            test(&PointSet::from_indices(plane, &idx));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<u32> = (0..n as u32).collect();
        for _ in 0..samples {
            let k = rng.gen_range(0..=n);
            let idx: Vec<u32> = all.choose_multiple(&mut rng, k).copied().collect();
            let s = PointSet::from_indices(plane, &idx);
            // bias towards stopping sets: peel a random set first
            test(&maximal_stopping_subset(&s));
            test(&s);
        }
    }
    report
}

/// The conic `Y² = XZ` together with its nucleus `(0,1,0)`, for even q.
pub fn hyperoval(plane: &Plane) -> Result<PointSet> {
    let f = plane.field();
    if f.is_odd() {
        return Err(Error::OddOrder(plane.q()));
    }
    let form = QuadForm::canonical(f);
    let mut s = PointSet::from_points(plane, plane.points().filter(|&p| form.eval(f, plane.coords(p)).is_zero()));
    s.insert(plane.point_from_codes([0, 1, 0])?);
    Ok(s)
}

/// Random erasure patterns where the peeling residual is compared with the
/// maximal stopping subset and with `shuffles` randomly ordered peels.
/// Returns the number of disagreements.
pub fn peel_confluence_check(plane: &Plane, patterns: usize, shuffles: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<u32> = (0..plane.n() as u32).collect();
    let mut bad = 0;
    for _ in 0..patterns {
        let k = rng.gen_range(0..=plane.n());
        all.shuffle(&mut rng);
        let s = PointSet::from_indices(plane, &all[..k]);
        let r = peel_decode(&s);
        let ok = r == maximal_stopping_subset(&s) && (0..shuffles).all(|_| peel_decode_shuffled(&s, &mut rng) == r);
        bad += !ok as usize;
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conic::Conic;
    use crate::constructions;

    fn plane(q: u32) -> Plane {
        Plane::with_order(q).unwrap()
    }

    #[test]
    fn weights() {
        let pl = plane(4);
        let m = IncidenceMatrix::new(&pl);
        assert!(pl.lines().all(|l| m.row_weight(l) == 5));
        assert!(pl.points().all(|p| m.column_weight(p) == 5));
    }

    #[test]
    fn trivial_signing_q5() {
        let pl = plane(5);
        let lines: Vec<Line> = pl.lines().take(2).collect();
        let v = trivial_signing(&pl, lines[0], lines[1]).unwrap();
        assert!(is_dual_codeword(&pl, &v).unwrap());
        assert_eq!(v.weight(), 10);
        assert!(support_tangency(&pl, &v).unwrap());
        assert!(tangency::is_trivial(&v.support(&pl)));
    }

    #[test]
    fn hyperoval_q4() {
        let pl = plane(4);
        let h = hyperoval(&pl).unwrap();
        assert_eq!(h.len(), 6);
        let mut v = DualVector::zero(&pl);
        for p in h.iter() {
            v.coefficients[p.idx()] = 1;
        }
        assert!(is_dual_codeword(&pl, &v).unwrap());
        assert_eq!(peel_decode(&h), h);
        assert_eq!(hyperoval(&plane(5)).unwrap_err(), Error::OddOrder(5));
    }

    #[test]
    fn zero_and_bad_vectors() {
        let pl = plane(3);
        assert!(is_dual_codeword(&pl, &DualVector::zero(&pl)).unwrap());
        let mut v = DualVector::zero(&pl);
        v.coefficients[0] = 1;
        assert_eq!(support_tangency(&pl, &v).unwrap_err(), Error::NotCodeword);
        let short = DualVector { p: 3, coefficients: vec![0; 5] };
        assert!(matches!(is_dual_codeword(&pl, &short), Err(Error::BadLength { .. })));
    }

    #[test]
    fn codeword_on_support() {
        let pl = plane(5);
        match dual_codeword_on_support(&constructions::trivial(&pl), 1) {
            CodewordSearch::Found(v) => assert_eq!(v.weight(), 10),
            other => panic!("{other:?}"),
        }
        let line = PointSet::from_indices(&pl, pl.points_on(Line(0)));
        assert_eq!(dual_codeword_on_support(&line, 1), CodewordSearch::NoneFound { exact: true });
    }

    #[test]
    fn peeling_examples() {
        let pl = plane(5);
        let one = PointSet::from_indices(&pl, &[7]);
        assert!(peel_decode(&one).is_empty());
        let int = constructions::interior_points(&Conic::canonical(&pl).unwrap()).unwrap();
        assert_eq!(peel_decode(&int), int);
        let extra = pl.points().find(|&p| !int.contains(p)).unwrap();
        let mut more = int.clone();
        more.insert(extra);
        assert_eq!(peel_decode(&more), int);
    }

    #[test]
    fn stopping_sets_q3() {
        let r = stopping_equivalence_check(&plane(3), 0, 0);
        assert!(r.exhaustive);
        assert_eq!(r.tested, 1 << 13);
        assert_eq!(r.mismatches, 0);
    }

    #[test]
    fn confluence_small() {
        assert_eq!(peel_confluence_check(&plane(3), 100, 10, 5), 0);
    }

    #[test]
    fn random_codewords_have_tangent_free_support() {
        let pl = plane(3);
        for v in random_dual_codewords(&pl, 50, 9) {
            assert!(support_tangency(&pl, &v).unwrap());
        }
    }
}
