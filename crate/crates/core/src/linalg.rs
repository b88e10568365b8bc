//! Small dense linear algebra over a [`Field`].

use rand::Rng;

use crate::field::{Fe, Field};
use crate::plane::Triple;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(f: &Field, rows: &mut [Vec<Fe>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for k in 0..rows.len() {
            if k == r || rows[k][c].is_zero() {
                continue;
            }
            let factor = rows[k][c];
            for j in c..ncols {
                let d = f.mul(factor, rows[r][j]);
                rows[k][j] = f.sub(rows[k][j], d);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace `{v : rows·v = 0}`.
pub fn nullspace(f: &Field, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m[r][free]);
        }
        basis.push(v);
    }
    basis
}

pub type Mat3 = [[Fe; 3]; 3];

pub fn mat_apply(f: &Field, m: &Mat3, v: Triple) -> Triple {
    let row = |r: &[Fe; 3]| f.add(f.add(f.mul(r[0], v[0]), f.mul(r[1], v[1])), f.mul(r[2], v[2]));
    [row(&m[0]), row(&m[1]), row(&m[2])]
}

pub fn mat_mul(f: &Field, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[Fe::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = Fe::ZERO;
            for k in 0..3 {
                s = f.add(s, f.mul(a[i][k], b[k][j]));
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = *m;
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn det(f: &Field, m: &Mat3) -> Fe {
    let minor = |a: Fe, b: Fe, c: Fe, d: Fe| f.sub(f.mul(a, d), f.mul(b, c));
    let t0 = f.mul(m[0][0], minor(m[1][1], m[1][2], m[2][1], m[2][2]));
    let t1 = f.mul(m[0][1], minor(m[1][0], m[1][2], m[2][0], m[2][2]));
    let t2 = f.mul(m[0][2], minor(m[1][0], m[1][1], m[2][0], m[2][1]));
    f.add(f.sub(t0, t1), t2)
}

pub fn random_invertible<R: Rng>(f: &Field, rng: &mut R) -> Mat3 {
    loop {
        let mut m = [[Fe::ZERO; 3]; 3];
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x = Fe(rng.gen_range(0..f.q()));
            }
        }
        if !det(f, &m).is_zero() {
            return m;
        }
    }
}
