//! Conics in PG(2,q), q odd: classification of points and lines.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::{self, Mat3};
use crate::plane::{Line, Plane, Point, PointSet, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineClass {
    Tangent,
    Secant,
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    OnConic,
    Exterior,
    Interior,
}

/// Ternary quadratic form, coefficients of `x², y², z², xy, xz, yz`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadForm(pub [Fe; 6]);

impl QuadForm {
    /// `y² − xz`
    pub fn canonical(f: &Field) -> QuadForm {
        QuadForm([Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ZERO, f.neg(Fe::ONE), Fe::ZERO])
    }

    pub fn eval(&self, f: &Field, v: Triple) -> Fe {
        let c = &self.0;
        let terms = [
            f.mul(c[0], f.mul(v[0], v[0])),
            f.mul(c[1], f.mul(v[1], v[1])),
            f.mul(c[2], f.mul(v[2], v[2])),
            f.mul(c[3], f.mul(v[0], v[1])),
            f.mul(c[4], f.mul(v[0], v[2])),
            f.mul(c[5], f.mul(v[1], v[2])),
        ];
        terms.iter().fold(Fe::ZERO, |acc, &t| f.add(acc, t))
    }

    /// Symmetric Gram matrix (odd characteristic).
    pub fn gram(&self, f: &Field) -> Mat3 {
        let half = f.inv(f.from_int(2)).expect("odd characteristic");
        let c = &self.0;
        let h = |x| f.mul(x, half);
        [[c[0], h(c[3]), h(c[4])], [h(c[3]), c[1], h(c[5])], [h(c[4]), h(c[5]), c[2]]]
    }

    fn from_gram(f: &Field, a: &Mat3) -> QuadForm {
        let two = |x| f.add(x, x);
        QuadForm([a[0][0], a[1][1], a[2][2], two(a[0][1]), two(a[0][2]), two(a[1][2])])
    }

    /// The form `w ↦ Q(M w)`; its zero set is the image of this one under `M⁻¹`.
    pub fn pullback(&self, f: &Field, m: &Mat3) -> QuadForm {
        let a = self.gram(f);
        let b = linalg::mat_mul(f, &linalg::transpose(m), &linalg::mat_mul(f, &a, m));
        QuadForm::from_gram(f, &b)
    }
}

/// An irreducible conic with its point set and line classes tabulated.
#[derive(Clone)]
pub struct Conic {
    form: QuadForm,
    plane: Plane,
    on: PointSet,
    line_class: Vec<LineClass>,
}

impl fmt::Debug for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Conic({:?} in {:?})", self.form.0, self.plane)
    }
}

impl Conic {
    pub fn new(plane: &Plane, form: QuadForm) -> Result<Conic> {
        let f = plane.field();
        if !f.is_odd() {
            return Err(Error::EvenOrder(f.q()));
        }
        let on = PointSet::from_points(plane, plane.points().filter(|&p| form.eval(f, plane.coords(p)).is_zero()));
        if on.len() != plane.q() as usize + 1 {
            return Err(Error::DegenerateConic);
        }
        let mut line_class = Vec::with_capacity(plane.n());
        for l in plane.lines() {
            line_class.push(match on.line_count(l) {
                0 => LineClass::External,
                1 => LineClass::Tangent,
                2 => LineClass::Secant,
                _ => return Err(Error::DegenerateConic),
            });
        }
        Ok(Conic { form, plane: plane.clone(), on, line_class })
    }

    /// `Y² = XZ`.
    pub fn canonical(plane: &Plane) -> Result<Conic> {
        Conic::new(plane, QuadForm::canonical(plane.field()))
    }

    pub fn form(&self) -> QuadForm {
        self.form
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn points(&self) -> &PointSet {
        &self.on
    }

    pub fn contains(&self, p: Point) -> bool {
        self.on.contains(p)
    }

    pub fn classify_line(&self, l: Line) -> LineClass {
        self.line_class[l.idx()]
    }

    pub fn tangents_through(&self, p: Point) -> usize {
        self.plane.lines_through(p).iter().filter(|&&l| self.line_class[l as usize] == LineClass::Tangent).count()
    }

    pub fn classify_point(&self, p: Point) -> PointClass {
        match self.tangents_through(p) {
            1 => PointClass::OnConic,
            2 => PointClass::Exterior,
            0 => PointClass::Interior,
            n => unreachable!("{n} tangents through a point of an irreducible conic"),
        }
    }

    /// Quadratic-character shortcut: off the conic, `P` is exterior iff
    /// `−det(A)·Q(P)` is a nonzero square.
    pub fn classify_point_by_character(&self, p: Point) -> PointClass {
        let f = self.plane.field();
        let val = self.form.eval(f, self.plane.coords(p));
        if val.is_zero() {
            return PointClass::OnConic;
        }
        let d = f.neg(linalg::det(f, &self.form.gram(f)));
        if f.is_nonzero_square(f.mul(d, val)) {
            PointClass::Exterior
        } else {
            PointClass::Interior
        }
    }

    pub fn lines_of_class(&self, c: LineClass) -> Vec<Line> {
        self.plane.lines().filter(|&l| self.classify_line(l) == c).collect()
    }

    pub fn points_of_class(&self, c: PointClass) -> PointSet {
        PointSet::from_points(&self.plane, self.plane.points().filter(|&p| self.classify_point(p) == c))
    }

    /// `(tangent, secant, external)`
    pub fn line_census(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for cl in &self.line_class {
            match cl {
                LineClass::Tangent => c.0 += 1,
                LineClass::Secant => c.1 += 1,
                LineClass::External => c.2 += 1,
            }
        }
        c
    }

    /// `(on, exterior, interior)`
    pub fn point_census(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for p in self.plane.points() {
            match self.classify_point(p) {
                PointClass::OnConic => c.0 += 1,
                PointClass::Exterior => c.1 += 1,
                PointClass::Interior => c.2 += 1,
            }
        }
        c
    }

    /// Image of the conic under the point map `v ↦ M v`.
    pub fn transformed(&self, m: &Mat3) -> Result<Conic> {
        let f = self.plane.field();
        let det = linalg::det(f, m);
        let inv = invert(f, m, det)?;
        Conic::new(&self.plane, self.form.pullback(f, &inv))
    }
}

pub(crate) fn invert(f: &Field, m: &Mat3, det: Fe) -> Result<Mat3> {
    let d = f.inv(det)?;
    let mut out = [[Fe::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            let cof = f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
            out[i][j] = f.mul(cof, d);
        }
    }
    Ok(out)
}

/// No three points of `s` on a line.
pub fn is_arc(s: &PointSet) -> bool {
    s.line_counts().iter().all(|&c| c < 3)
}

/// Fits the quadratic form through the first five points of `s` and checks
/// that every point of `s` lies on the resulting irreducible conic.
pub fn arc_is_conic_check(s: &PointSet) -> Result<bool> {
    if s.len() < 5 {
        return Err(Error::TooFewPoints { needed: 5, got: s.len() });
    }
    let plane = s.plane();
    let f = plane.field();
    let monomials = |v: Triple| {
        vec![f.mul(v[0], v[0]), f.mul(v[1], v[1]), f.mul(v[2], v[2]), f.mul(v[0], v[1]), f.mul(v[0], v[2]), f.mul(v[1], v[2])]
    };
    let rows: Vec<Vec<Fe>> = s.iter().take(5).map(|p| monomials(plane.coords(p))).collect();
    let ns = linalg::nullspace(f, &rows, 6);
    if ns.len() != 1 {
        return Ok(false);
    }
    let c = &ns[0];
    let form = QuadForm([c[0], c[1], c[2], c[3], c[4], c[5]]);
    if s.iter().any(|p| !form.eval(f, plane.coords(p)).is_zero()) {
        return Ok(false);
    }
    match Conic::new(plane, form) {
        Ok(conic) => Ok(s.is_subset(conic.points())),
        Err(Error::DegenerateConic) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Lines viewed as points of the dual plane (same numbering).
pub fn dual_set(plane: &Plane, lines: &[Line]) -> PointSet {
    PointSet::from_points(plane, lines.iter().map(|l| Point(l.0)))
}
