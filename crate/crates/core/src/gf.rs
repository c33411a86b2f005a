//! Table-driven arithmetic in GF(q²) = GF(p^{2e}).
//!
//! Elements are encoded as integers in `[0, q²)`: the little-endian base-p
//! digits of the encoding are the coefficients of the element in the
//! polynomial basis `1, t, t², ...` modulo the field's defining polynomial.
//! Multiplication and inversion go through discrete log / antilog tables,
//! addition through a Zech logarithm table.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field size p^{2e}.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("exponent e must be positive")]
    ZeroExponent,
    #[error("q = {0} must exceed 2")]
    SubfieldTooSmall(u64),
    #[error("field size p^(2e) = {0} exceeds the table budget of {MAX_FIELD_SIZE}")]
    TooLarge(u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("r = {r} does not divide 2e = {two_e}")]
    BadFrobeniusStep { r: u32, two_e: u32 },
    #[error("element {0} is not in the subfield GF(q)")]
    NotInSubfield(Elem),
    #[error("element encoding {0} is out of range for a field of size {1}")]
    OutOfRange(u32, u32),
}

/// A field element in canonical integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field GF(q²) together with its subfield GF(q), q = p^e.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    size: u32,
    /// Coefficients `c_0..c_{2e}` of the monic defining polynomial.
    modulus: Vec<u32>,
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    minus_one: Elem,
    frob: Vec<u32>,
    conj: Vec<u32>,
    /// `trace_fibres[s]` lists every b with b + b^q = s, for s in GF(q).
    trace_fibres: Vec<Vec<Elem>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
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

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

/// Dense polynomial arithmetic over GF(p); coefficient vectors are little-endian.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &c) in m.iter().enumerate() {
                let sub = (factor as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut v: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut v);
        v
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        // p is prime, so a^(p-2) is the inverse.
        let mut result = 1u64;
        let mut base = a as u64 % p as u64;
        let mut exp = p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % p as u64;
            }
            base = base * base % p as u64;
            exp >>= 1;
        }
        result as u32
    }

    /// Monic polynomial of the given degree whose lower coefficients are the
    /// base-p digits of `index`.
    pub fn monic_from_index(index: u64, degree: usize, p: u32) -> Vec<u32> {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut rest = index;
        for _ in 0..degree {
            coeffs.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        coeffs.push(1);
        coeffs
    }

    /// Irreducibility by trial division by every monic polynomial of degree
    /// at most half the degree of `f`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let g = monic_from_index(idx, d, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl Field {
    /// Builds GF(p^{2e}) with its log, antilog and Zech tables.
    ///
    /// The defining polynomial is the smallest monic irreducible polynomial of
    /// degree 2e, ordered by the integer whose base-p digits are its lower
    /// coefficients. The stored generator is the primitive element with the
    /// smallest encoding.
    pub fn new(p: u32, e: u32) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let q = (p as u64)
            .checked_pow(e)
            .ok_or(FieldError::TooLarge(u64::MAX))?;
        if q <= 2 {
            return Err(FieldError::SubfieldTooSmall(q));
        }
        let size = q.checked_mul(q).ok_or(FieldError::TooLarge(u64::MAX))?;
        if size > MAX_FIELD_SIZE {
            return Err(FieldError::TooLarge(size));
        }
        let q = q as u32;
        let size = size as u32;
        let degree = 2 * e as usize;

        let modulus = (0..(p as u64).pow(degree as u32))
            .map(|idx| poly::monic_from_index(idx, degree, p))
            .find(|f| poly::is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");

        let digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(degree);
            let mut rest = x;
            for _ in 0..degree {
                v.push(rest % p);
                rest /= p;
            }
            poly::trim(&mut v);
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let mulmod = |a: u32, b: u32| -> u32 {
            let prod = poly::mul(&digits(a), &digits(b), p);
            encode(&poly::rem(&prod, &modulus, p))
        };
        let powmod = |a: u32, mut n: u64| -> u32 {
            let mut result = 1u32;
            let mut base = a;
            while n > 0 {
                if n & 1 == 1 {
                    result = mulmod(result, base);
                }
                base = mulmod(base, base);
                n >>= 1;
            }
            result
        };

        let order = (size - 1) as u64;
        let factors = prime_factors(order);
        let generator = (2..size)
            .find(|&c| factors.iter().all(|&l| powmod(c, order / l) != 1))
            .unwrap_or(1);

        let n = size as usize - 1;
        let mut exp = vec![0u32; n];
        let mut log = vec![NO_LOG; size as usize];
        let mut cur = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = mulmod(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        let add_digits = |a: u32, b: u32| -> u32 {
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..degree {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place = place.wrapping_mul(p);
            }
            out
        };
        let zech: Vec<u32> = exp
            .iter()
            .map(|&x| {
                let s = add_digits(x, 1);
                log[s as usize]
            })
            .collect();

        let minus_one = if p == 2 { 1 } else { exp[n / 2] };

        let mut field = Field {
            p,
            e,
            q,
            size,
            modulus,
            generator: Elem(generator),
            exp,
            log,
            zech,
            minus_one: Elem(minus_one),
            frob: Vec::new(),
            conj: Vec::new(),
            trace_fibres: Vec::new(),
        };
        field.frob = (0..size).map(|a| field.pow(Elem(a), p as i64).0).collect();
        field.conj = (0..size).map(|a| field.pow(Elem(a), q as i64).0).collect();
        let mut fibres = vec![Vec::new(); size as usize];
        for b in field.elements() {
            let s = field.add(b, field.conj(b));
            fibres[s.0 as usize].push(b);
        }
        field.trace_fibres = fibres;
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Order of the subfield, q = p^e.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of the field, q².
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Degree 2e of the field over its prime subfield.
    pub fn degree(&self) -> u32 {
        2 * self.e
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.size).map(Elem)
    }

    pub fn elem(&self, encoding: u32) -> Result<Elem, FieldError> {
        if encoding < self.size {
            Ok(Elem(encoding))
        } else {
            Err(FieldError::OutOfRange(encoding, self.size))
        }
    }

    /// Element of the prime subfield with the given residue.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Base-p coefficients of `a`, little-endian, length 2e.
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        let mut rest = a.0;
        (0..self.degree())
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect()
    }

    fn order(&self) -> u32 {
        self.size - 1
    }

    /// Discrete log to the base of the stored generator.
    pub fn log(&self, a: Elem) -> Option<u32> {
        match self.log[a.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    pub fn exp(&self, n: u64) -> Elem {
        Elem(self.exp[(n % self.order() as u64) as usize])
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let n = self.order();
        let diff = if lb >= la { lb - la } else { lb + n - la };
        match self.zech[diff as usize] {
            NO_LOG => Elem::ZERO,
            z => Elem(self.exp[((la as u64 + z as u64) % n as u64) as usize]),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.mul(a, self.minus_one)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Elem(self.exp[(s % self.order() as u64) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let la = self.log[a.0 as usize];
        Ok(Elem(
            self.exp[((self.order() - la) % self.order()) as usize],
        ))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n`; negative exponents invert, `0^0 = 1`, and `0^n` for n < 0 is
    /// reported as a zero inverse.
    pub fn try_pow(&self, a: Elem, n: i64) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return match n {
                0 => Ok(Elem::ONE),
                n if n > 0 => Ok(Elem::ZERO),
                _ => Err(FieldError::ZeroInverse),
            };
        }
        let order = self.order() as i128;
        let l = (self.log[a.0 as usize] as i128 * n as i128).rem_euclid(order);
        Ok(Elem(self.exp[l as usize]))
    }

    /// Panicking form of [`Field::try_pow`] for non-negative exponents or nonzero bases.
    pub fn pow(&self, a: Elem, n: i64) -> Elem {
        self.try_pow(a, n).expect("negative power of zero")
    }

    /// The norm a^{q+1}, which lies in GF(q).
    pub fn norm(&self, a: Elem) -> Elem {
        self.mul(a, self.conj(a))
    }

    /// `a^{p^m}`. The map has period dividing 2e.
    pub fn frobenius_p(&self, a: Elem, m: u32) -> Elem {
        let mut x = a;
        for _ in 0..(m % self.degree()) {
            x = Elem(self.frob[x.0 as usize]);
        }
        x
    }

    /// Conjugation a ↦ a^q, the involutory automorphism fixing GF(q).
    pub fn conj(&self, a: Elem) -> Elem {
        Elem(self.conj[a.0 as usize])
    }

    pub fn in_subfield(&self, a: Elem) -> bool {
        self.conj(a) == a
    }

    /// Orbit of `a` under x ↦ x^{p^r}, starting at `a`.
    pub fn psi_orbit(&self, a: Elem, r: u32) -> Result<Vec<Elem>, FieldError> {
        self.check_step(r)?;
        let mut orbit = vec![a];
        let mut x = self.frobenius_p(a, r);
        while x != a {
            orbit.push(x);
            x = self.frobenius_p(x, r);
        }
        Ok(orbit)
    }

    pub fn check_step(&self, r: u32) -> Result<(), FieldError> {
        if r == 0 || self.degree() % r != 0 {
            return Err(FieldError::BadFrobeniusStep {
                r,
                two_e: self.degree(),
            });
        }
        Ok(())
    }

    /// All b with b + b^q = s, in increasing encoding order. There are exactly
    /// q of them for every s in GF(q).
    pub fn solve_trace_eq(&self, s: Elem) -> Result<&[Elem], FieldError> {
        if !self.in_subfield(s) {
            return Err(FieldError::NotInSubfield(s));
        }
        Ok(&self.trace_fibres[s.0 as usize])
    }

    /// Human-readable polynomial form in the basis element `t`.
    pub fn format(&self, a: Elem) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let coeffs = self.coefficients(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{coeff}t"),
                _ => format!("{coeff}t^{i}"),
            });
        }
        terms.join("+")
    }

    pub fn format_modulus(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{coeff}t"),
                _ => format!("{coeff}t^{i}"),
            });
        }
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent polynomial-arithmetic oracle for F_9 = F_3[t]/(t²+1).
    fn f9_mul(a: u32, b: u32) -> u32 {
        let (a0, a1) = (a % 3, a / 3);
        let (b0, b1) = (b % 3, b / 3);
        // (a0 + a1 t)(b0 + b1 t) with t² = -1
        let c0 = (a0 * b0 + 2 * a1 * b1) % 3;
        let c1 = (a0 * b1 + a1 * b0) % 3;
        c0 + 3 * c1
    }

    #[test]
    fn f9_modulus_and_basic_products() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.q(), 3);
        assert_eq!(f.size(), 9);
        let t = Elem(3);
        assert_eq!(f.mul(t, t), Elem(2));
        assert_eq!(f.frobenius_p(t, 1), Elem(6));
        assert_eq!(f.conj(t), Elem(6));
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.mul(Elem(a), Elem(b)).0, f9_mul(a, b), "{a} * {b}");
                let sum = (a % 3 + b % 3) % 3 + 3 * ((a / 3 + b / 3) % 3);
                assert_eq!(f.add(Elem(a), Elem(b)).0, sum);
            }
        }
    }

    #[test]
    fn modulus_is_smallest_irreducible() {
        // Brute force: a monic quadratic over F_3 is irreducible iff it has no root.
        let first = (0..9u32)
            .find(|&idx| {
                let (c0, c1) = (idx % 3, idx / 3);
                (0..3u32).all(|x| (x * x + c1 * x + c0) % 3 != 0)
            })
            .unwrap();
        assert_eq!(first, 1);
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(f.size(), 16);
        assert_eq!(f.q(), 4);
        let f = Field::new(5, 1).unwrap();
        assert_eq!((f.q(), f.size()), (5, 25));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(
            Field::new(2, 1).unwrap_err(),
            FieldError::SubfieldTooSmall(2)
        );
        assert_eq!(Field::new(3, 0).unwrap_err(), FieldError::ZeroExponent);
        assert!(matches!(Field::new(2, 11), Err(FieldError::TooLarge(_))));
        assert!(Field::new(2, 10).is_ok());
    }

    #[test]
    fn generator_is_primitive() {
        for (p, e) in [(3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = Field::new(p, e).unwrap();
            let g = f.generator();
            let mut seen = std::collections::HashSet::new();
            let mut x = Elem::ONE;
            for _ in 0..f.size() - 1 {
                assert!(seen.insert(x));
                x = f.mul(x, g);
            }
            assert_eq!(x, Elem::ONE);
        }
    }

    #[test]
    fn axioms_hold_exhaustively_on_small_fields() {
        for (p, e) in [(3, 1), (2, 2)] {
            let f = Field::new(p, e).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                    assert_eq!(f.try_pow(a, -1).unwrap(), f.inv(a).unwrap());
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(FieldError::ZeroInverse));
        assert_eq!(f.try_pow(Elem::ZERO, -2), Err(FieldError::ZeroInverse));
        assert_eq!(f.pow(Elem::ZERO, 0), Elem::ONE);
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        for (p, e) in [(3, 1), (2, 2), (5, 1)] {
            let f = Field::new(p, e).unwrap();
            assert_eq!(f.frobenius_p(Elem::ZERO, 1), Elem::ZERO);
            assert_eq!(f.frobenius_p(Elem::ONE, 1), Elem::ONE);
            for r in 1..=f.degree() {
                for a in f.elements() {
                    assert_eq!(f.frobenius_p(a, f.degree()), a);
                    for b in f.elements() {
                        let (fa, fb) = (f.frobenius_p(a, r), f.frobenius_p(b, r));
                        assert_eq!(f.frobenius_p(f.add(a, b), r), f.add(fa, fb));
                        assert_eq!(f.frobenius_p(f.mul(a, b), r), f.mul(fa, fb));
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_fixes_exactly_the_subfield() {
        for (p, e) in [(3, 1), (2, 2), (5, 1), (2, 3)] {
            let f = Field::new(p, e).unwrap();
            let fixed = f.elements().filter(|&a| f.conj(a) == a).count();
            assert_eq!(fixed as u32, f.q());
            for a in f.elements() {
                assert_eq!(f.conj(f.conj(a)), a);
                assert_eq!(f.conj(a), f.frobenius_p(a, e));
                assert!(f.in_subfield(f.norm(a)));
            }
            assert_eq!(f.conj(Elem::ZERO), Elem::ZERO);
        }
    }

    #[test]
    fn psi_orbits() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.psi_orbit(Elem(2), 1).unwrap(), vec![Elem(2)]);
        assert_eq!(f.psi_orbit(Elem(3), 1).unwrap(), vec![Elem(3), Elem(6)]);
        assert!(f.psi_orbit(Elem(3), 3).is_err());

        let f = Field::new(2, 2).unwrap();
        for r in [1, 2, 4] {
            let mut covered = vec![false; f.size() as usize];
            let mut total = 0;
            for a in f.elements() {
                if covered[a.0 as usize] {
                    continue;
                }
                let orbit = f.psi_orbit(a, r).unwrap();
                assert_eq!(f.degree() / r % orbit.len() as u32, 0);
                for x in &orbit {
                    covered[x.0 as usize] = true;
                }
                total += orbit.len();
            }
            assert_eq!(total as u32, f.size());
        }
    }

    #[test]
    fn trace_equation_has_q_solutions() {
        let f = Field::new(3, 1).unwrap();
        // Exhaustive scan oracle for s = 0.
        let scan: Vec<Elem> = f
            .elements()
            .filter(|&b| f.add(b, f.conj(b)).is_zero())
            .collect();
        assert_eq!(f.solve_trace_eq(Elem::ZERO).unwrap(), scan.as_slice());
        assert_eq!(scan.len(), 3);
        assert!(scan.contains(&Elem::ZERO));
        assert!(f.solve_trace_eq(Elem(3)).is_err());

        for (p, e) in [(3, 1), (2, 2), (5, 1), (2, 3)] {
            let f = Field::new(p, e).unwrap();
            let mut total = 0;
            for s in f.elements().filter(|&s| f.in_subfield(s)) {
                let sols = f.solve_trace_eq(s).unwrap();
                assert_eq!(sols.len() as u32, f.q());
                for &b in sols {
                    assert_eq!(f.add(b, f.conj(b)), s);
                }
                total += sols.len();
            }
            assert_eq!(total as u32, f.size());
        }
    }

    #[test]
    fn formatting() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.format_modulus(), "t^2+1");
        assert_eq!(f.format(Elem(7)), "2t+1");
        assert_eq!(f.format(Elem(3)), "t");
    }
}
