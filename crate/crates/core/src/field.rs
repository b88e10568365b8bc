//! Arithmetic in GF(p^h).
//!
//! An element is stored as a single integer code `Σ c_i·p^i`, where
//! `(c_0, …, c_{h-1})` are its coordinates in the polynomial basis of the
//! declared modulus. Multiplication goes through discrete log / exp tables
//! built once per field; addition uses a full table for small `q` and
//! digit-wise arithmetic otherwise.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

const ADD_TABLE_MAX_Q: u32 = 1024;

/// Element of GF(q) as its integer code in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Three-valued quadratic character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadChar {
    Zero,
    Square,
    NonSquare,
}

/// Serializable description of a field: characteristic, degree and the
/// monic modulus as coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn q(&self) -> u32 {
        self.p.pow(self.h)
    }
}

/// How to pick the defining polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Modulus {
    /// Lexicographically smallest monic irreducible (ascending coefficient list).
    Auto,
    Given(Vec<u32>),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, h)` when `q = p^h` for a prime `p`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over GF(p), ascending coefficients, no trailing zeros.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a, p - 2, p)
}

fn mod_pow(a: u32, mut e: u32, p: u32) -> u32 {
    let (mut base, mut acc) = (a as u64 % p as u64, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree `1..=h/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let h = m.len() - 1;
    for d in 1..=h / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = digits(code, p, d);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

fn lex_smallest_irreducible(p: u32, h: u32) -> Vec<u32> {
    // Lexicographic order on (c_0, c_1, …, c_{h-1}) equals numeric order of
    // the code with c_0 as the most significant digit.
    let count = (p as u64).pow(h);
    for code in 0..count {
        let mut m: Vec<u32> = digits(code, p, h as usize);
        m.reverse();
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

struct Tables {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// A finite field GF(p^h). Cheap to clone; tables are shared.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[{:?}]", self.t.q, self.t.spec.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.t.spec == other.t.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(p: u32, h: u32, modulus: Modulus) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h == 0 {
            return Err(Error::ReducibleModulus(vec![]));
        }
        let q = (p as u64).checked_pow(h).filter(|&q| q <= MAX_ORDER);
        let q = q.ok_or(Error::FieldTooLarge((p as u64).saturating_pow(h)))? as u32;
        let modulus = match modulus {
            Modulus::Auto => lex_smallest_irreducible(p, h),
            Modulus::Given(m) => {
                let ok = m.len() == h as usize + 1
                    && m.iter().all(|&c| c < p)
                    && m[h as usize] == 1
                    && is_irreducible(&m, p);
                if !ok {
                    return Err(Error::ReducibleModulus(m));
                }
                m
            }
        };
        Ok(Self::build(FieldSpec { p, h, modulus }, q))
    }

    /// Prime field GF(p) or `GF(p^h)` with automatic modulus, from the order.
    pub fn with_order(q: u32) -> Result<Field> {
        let (p, h) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Field::new(p, h, Modulus::Auto)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        Field::new(spec.p, spec.h, Modulus::Given(spec.modulus.clone()))
    }

    fn build(spec: FieldSpec, q: u32) -> Field {
        let p = spec.p;
        let h = spec.h as usize;
        let m = spec.modulus.clone();
        let to_code = |v: &[u32]| -> u32 {
            v.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64) as u32
        };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let da = digits(a as u64, p, h);
            let db = digits(b as u64, p, h);
            let mut prod = vec![0u32; 2 * h];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            to_code(&poly_rem(&prod, &m, p))
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let (mut base, mut acc) = (a, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = k as u32;
            x = slow_mul(x, generator);
        }

        let digit_neg = |a: u32| -> u32 {
            let d: Vec<u32> = digits(a as u64, p, h).iter().map(|&c| (p - c) % p).collect();
            to_code(&d)
        };
        let neg = (0..q).map(digit_neg).collect();
        let add = (q <= ADD_TABLE_MAX_Q).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, h as u32);
                }
            }
            t
        });
        Field { t: Arc::new(Tables { spec, q, exp, log, add, neg }) }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.t.spec
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    pub fn p(&self) -> u32 {
        self.t.spec.p
    }

    pub fn h(&self) -> u32 {
        self.t.spec.h
    }

    pub fn is_odd(&self) -> bool {
        self.t.spec.p != 2
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.t.q).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.t.q).map(Fe)
    }

    /// Checked conversion from a raw code.
    pub fn element(&self, code: u32) -> Result<Fe> {
        if code < self.t.q {
            Ok(Fe(code))
        } else {
            Err(Error::BadCoordinate(code))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p() as i64) as u32)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let t = &*self.t;
        if t.spec.h == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= t.q { s - t.q } else { s });
        }
        match &t.add {
            Some(tab) => Fe(tab[(a.0 * t.q + b.0) as usize]),
            None => Fe(digit_add(a.0, b.0, t.spec.p, t.spec.h)),
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.t.neg[a.0 as usize])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let t = &*self.t;
        let n = t.q - 1;
        let s = t.log[a.0 as usize] + t.log[b.0 as usize];
        Fe(t.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &*self.t;
        let n = t.q - 1;
        Ok(Fe(t.exp[((n - t.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let t = &*self.t;
        let n = (t.q - 1) as u64;
        let k = t.log[a.0 as usize] as u64 * (e % n) % n;
        Fe(t.exp[k as usize])
    }

    /// The fixed generator of the multiplicative group used for the tables.
    pub fn primitive(&self) -> Fe {
        Fe(self.t.exp[1 % self.t.exp.len()])
    }

    /// Discrete logarithm with respect to [`Field::primitive`].
    pub fn log(&self, a: Fe) -> Option<u32> {
        (a.0 != 0).then(|| self.t.log[a.0 as usize])
    }

    /// For even `q` every nonzero element is a square.
    pub fn quad_char(&self, a: Fe) -> QuadChar {
        if a.0 == 0 {
            QuadChar::Zero
        } else if !self.is_odd() || self.t.log[a.0 as usize] % 2 == 0 {
            QuadChar::Square
        } else {
            QuadChar::NonSquare
        }
    }

    /// Nonzero square (the discriminant reading of "square").
    pub fn is_nonzero_square(&self, a: Fe) -> bool {
        self.quad_char(a) == QuadChar::Square
    }

    /// Square including zero (the counting reading of "square").
    pub fn is_square_or_zero(&self, a: Fe) -> bool {
        self.quad_char(a) != QuadChar::NonSquare
    }

    pub fn is_non_square(&self, a: Fe) -> bool {
        self.quad_char(a) == QuadChar::NonSquare
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p() as u64)
    }

    /// Absolute trace to the prime subfield.
    pub fn trace(&self, a: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut x = a;
        for _ in 0..self.h() {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc
    }

    /// Smallest non-square by element code (odd `q` only).
    pub fn smallest_non_square(&self) -> Option<Fe> {
        self.elements().find(|&x| self.is_non_square(x))
    }
}

fn digit_add(mut a: u32, mut b: u32, p: u32, h: u32) -> u32 {
    let mut out = 0u32;
    let mut scale = 1u32;
    for _ in 0..h {
        let d = (a % p + b % p) % p;
        out += d * scale;
        scale = scale.wrapping_mul(p);
        a /= p;
        b /= p;
    }
    out
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.t.spec.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = FieldSpec::deserialize(d)?;
        Field::from_spec(&spec).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::new(3, 2, Modulus::Given(vec![1, 0, 1])).unwrap()
    }

    // t is the element with code 3 (coordinates (0, 1)).
    const T: Fe = Fe(3);

    #[test]
    fn construction_examples() {
        let f5 = Field::new(5, 1, Modulus::Auto).unwrap();
        assert_eq!(f5.q(), 5);
        assert_eq!(f5.spec().modulus, vec![0, 1]);
        assert_eq!(gf9().q(), 9);
        assert_eq!(
            Field::new(3, 2, Modulus::Given(vec![2, 0, 1])),
            Err(Error::ReducibleModulus(vec![2, 0, 1]))
        );
        assert_eq!(Field::new(4, 1, Modulus::Auto).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(3, 2, Modulus::Auto).unwrap().spec().modulus, vec![1, 0, 1]);
        assert_eq!(Field::new(2, 2, Modulus::Auto).unwrap().spec().modulus, vec![1, 1, 1]);
        assert!(matches!(Field::new(2, 21, Modulus::Auto), Err(Error::FieldTooLarge(_))));
    }

    #[test]
    fn t_squared_has_no_root_mod_3() {
        // oracle for irreducibility of t²+1: no root in {0,1,2}
        assert!((0..3u32).all(|t| (t * t + 1) % 3 != 0));
        assert!((0..3u32).any(|t| (t * t + 2) % 3 == 0));
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = Field::with_order(5).unwrap();
        assert_eq!(f5.mul(Fe(2), Fe(3)), Fe(1));
        let f9 = gf9();
        assert_eq!(f9.mul(T, T), Fe(2));
        let f7 = Field::with_order(7).unwrap();
        assert_eq!(f7.inv(Fe(3)), Ok(Fe(5)));
        assert_eq!(f7.inv(Fe(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn quad_char_examples() {
        let f5 = Field::with_order(5).unwrap();
        let squares: Vec<u32> = (1..5u32).map(|x| x * x % 5).collect();
        assert!(squares.contains(&4) && !squares.contains(&2));
        assert_eq!(f5.quad_char(Fe(4)), QuadChar::Square);
        assert_eq!(f5.quad_char(Fe(2)), QuadChar::NonSquare);
        assert_eq!(f5.quad_char(Fe(0)), QuadChar::Zero);

        let f9 = gf9();
        let sq: Vec<Fe> = f9.nonzero().map(|x| f9.mul(x, x)).collect();
        for x in 1..3 {
            assert!(sq.contains(&Fe(x)));
            assert_eq!(f9.quad_char(Fe(x)), QuadChar::Square);
        }
    }

    #[test]
    fn trace_and_frobenius_examples() {
        let f9 = gf9();
        assert_eq!(f9.trace(Fe::ONE), Fe(2));
        assert_eq!(f9.trace(T), Fe(0));
        assert_eq!(f9.frobenius(T), Fe(6));
        let f5 = Field::with_order(5).unwrap();
        for x in f5.elements() {
            assert_eq!(f5.trace(x), x);
            assert_eq!(f5.frobenius(x), x);
        }
        let f27 = Field::with_order(27).unwrap();
        for x in f27.elements() {
            let mut y = x;
            for _ in 0..3 {
                y = f27.frobenius(y);
            }
            assert_eq!(y, x);
            let tr = f27.trace(x);
            assert_eq!(f27.frobenius(tr), tr);
            assert!(tr.0 < 3);
        }
    }

    #[test]
    fn euler_criterion_matches_log_parity() {
        for q in [3, 5, 7, 9, 11, 13, 25, 27, 49, 81] {
            let f = Field::with_order(q).unwrap();
            let half = (q as u64 - 1) / 2;
            let mut counts = (0, 0);
            for x in f.nonzero() {
                let e = f.pow(x, half);
                let expected = if e == Fe::ONE { QuadChar::Square } else { QuadChar::NonSquare };
                assert_eq!(f.quad_char(x), expected);
                match expected {
                    QuadChar::Square => counts.0 += 1,
                    _ => counts.1 += 1,
                }
            }
            assert_eq!(counts, (half, half));
        }
    }

    #[test]
    fn spec_json_is_bit_exact() {
        let json = serde_json::to_string(&gf9()).unwrap();
        assert_eq!(json, r#"{"p":3,"h":2,"modulus":[1,0,1]}"#);
        let back: Field = serde_json::from_str(&json).unwrap();
        assert_eq!(back, gf9());
        assert!(serde_json::from_str::<Field>(r#"{"p":3,"h":2,"modulus":[2,0,1]}"#).is_err());
    }

    #[test]
    fn large_field_without_add_table() {
        let f = Field::new(2, 12, Modulus::Auto).unwrap();
        assert_eq!(f.q(), 4096);
        let a = Fe(1234);
        let b = Fe(4000);
        assert_eq!(f.sub(f.add(a, b), b), a);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
    }
}
