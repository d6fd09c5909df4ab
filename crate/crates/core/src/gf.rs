//! Finite fields `GF(p^m)` in a polynomial basis.
//!
//! An element `c_0 + c_1 α + ... + c_{m-1} α^{m-1}`, where `α` is a root of
//! the field modulus, is encoded as the integer `Σ c_j p^j`. Encoding `0` is
//! the additive identity and encoding `1` the multiplicative identity.
//!
//! Fields up to order `2^12` carry exponent/logarithm tables; larger fields
//! (up to the `2^16` cap) multiply by reducing polynomials on the fly.
//! Subfields are never built as separate objects: they are the subsets
//! `{x : x^d = x}` of one ambient field.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;
const LOG_TABLE_LIMIT: u32 = 1 << 12;
const ADD_TABLE_LIMIT: u32 = 256;

/// A field element, stored as its integer encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Wraps an encoding without range checking; see [`Field::elem`].
    pub const fn from_encoding(encoding: u32) -> Self {
        Elem(encoding)
    }

    pub const fn encoding(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow,
}

/// Second operand of [`Field::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    None,
    Elem(Elem),
    Exponent(u64),
}

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u32>,
    neg_table: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `GF(p^m)` over the lexicographically smallest monic irreducible
    /// polynomial of degree `m` (coefficients compared from the highest degree
    /// down).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        check_order(p, m)?;
        let q = p.pow(m);
        let modulus = (0..q)
            .map(|t| {
                let mut coeffs = digits(t, p, m as usize);
                coeffs.push(1);
                coeffs
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self::build(p, m, modulus))
    }

    /// Builds `GF(p^m)` over an explicit modulus, given constant term first.
    pub fn with_modulus(p: u32, m: u32, modulus: &[u32]) -> Result<Self> {
        check_order(p, m)?;
        if modulus.len() != m as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients for degree {m}, found {}",
                m + 1,
                modulus.len()
            )));
        }
        if let Some(c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidModulus(format!(
                "coefficient {c} is not reduced mod {p}"
            )));
        }
        if modulus[m as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidModulus(format!(
                "{modulus:?} is reducible over GF({p})"
            )));
        }
        Ok(Self::build(p, m, modulus.to_vec()))
    }

    /// Builds the field of order `q` with its default modulus.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, m)
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(m);
        let mut field = Field {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: Vec::new(),
            neg_table: Vec::new(),
        };
        if p != 2 && m > 1 && q <= ADD_TABLE_LIMIT {
            let mut add = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add_table = add;
        }
        if q <= ADD_TABLE_LIMIT {
            field.neg_table = (0..q).map(|a| field.neg_digits(a)).collect();
        }
        if q <= LOG_TABLE_LIMIT {
            let g = field.find_generator();
            let order = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * order];
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for (i, slot) in exp.iter_mut().take(order).enumerate() {
                *slot = x;
                log[x as usize] = i as u32;
                x = field.mul_poly(x, g);
            }
            for i in order..2 * order {
                exp[i] = exp[i - order];
            }
            field.exp = exp;
            field.log = log;
        }
        field
    }

    fn find_generator(&self) -> u32 {
        let order = self.q - 1;
        let factors = prime_factors(order);
        (1..self.q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_poly(g, (order / r) as u64) != 1)
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Checked conversion from an encoding.
    pub fn elem(&self, encoding: u32) -> Result<Elem> {
        if encoding < self.q {
            Ok(Elem(encoding))
        } else {
            Err(Error::InvalidElement {
                encoding,
                order: self.q,
            })
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    /// Decomposes an element into its coefficients in the polynomial basis.
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        digits(a.0, self.p, self.m as usize)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!(
                "{coeffs:?} is not a coefficient vector over GF({})",
                self.p
            )));
        }
        Ok(Elem(undigits(coeffs, self.p)))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            Elem(a.0 ^ b.0)
        } else if self.m == 1 {
            let s = a.0 + b.0;
            Elem(if s >= self.p { s - self.p } else { s })
        } else if !self.add_table.is_empty() {
            Elem(self.add_table[(a.0 * self.q + b.0) as usize])
        } else {
            Elem(self.add_digits(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.0 == 0 {
            a
        } else if self.m == 1 {
            Elem(self.p - a.0)
        } else if (a.0 as usize) < self.neg_table.len() {
            Elem(self.neg_table[a.0 as usize])
        } else {
            Elem(self.neg_digits(a.0))
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if !self.log.is_empty() {
            let i = self.log[a.0 as usize] + self.log[b.0 as usize];
            Elem(self.exp[i as usize])
        } else {
            Elem(self.mul_poly(a.0, b.0))
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if !self.log.is_empty() {
            let order = self.q - 1;
            let l = self.log[a.0 as usize];
            Ok(Elem(self.exp[((order - l) % order) as usize]))
        } else {
            Ok(Elem(self.pow_poly(a.0, (self.q - 2) as u64)))
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        if !self.log.is_empty() {
            let order = (self.q - 1) as u64;
            let l = (self.log[a.0 as usize] as u64 * (e % order)) % order;
            Elem(self.exp[l as usize])
        } else {
            Elem(self.pow_poly(a.0, e))
        }
    }

    /// Single entry point for the field operations, used by front ends that
    /// dispatch on an operator name.
    pub fn arith(&self, op: ArithOp, a: Elem, b: Operand) -> Result<Elem> {
        self.elem(a.0)?;
        if let Operand::Elem(b) = b {
            self.elem(b.0)?;
        }
        match (op, b) {
            (ArithOp::Add, Operand::Elem(b)) => Ok(self.add(a, b)),
            (ArithOp::Sub, Operand::Elem(b)) => Ok(self.sub(a, b)),
            (ArithOp::Mul, Operand::Elem(b)) => Ok(self.mul(a, b)),
            (ArithOp::Div, Operand::Elem(b)) => self.div(a, b),
            (ArithOp::Neg, Operand::None) => Ok(self.neg(a)),
            (ArithOp::Inv, Operand::None) => self.inv(a),
            (ArithOp::Pow, Operand::Exponent(e)) => Ok(self.pow(a, e)),
            (op, _) => Err(Error::BadOperand(match op {
                ArithOp::Add => "add",
                ArithOp::Sub => "sub",
                ArithOp::Mul => "mul",
                ArithOp::Div => "div",
                ArithOp::Neg => "neg",
                ArithOp::Inv => "inv",
                ArithOp::Pow => "pow",
            })),
        }
    }

    /// `dst += c * src`, the row operation behind elimination and codeword
    /// enumeration.
    pub fn add_scaled(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        debug_assert_eq!(dst.len(), src.len());
        if c.is_zero() {
            return;
        }
        if !self.log.is_empty() {
            let lc = self.log[c.0 as usize];
            for (d, &s) in dst.iter_mut().zip(src) {
                if s.0 != 0 {
                    let prod = Elem(self.exp[(lc + self.log[s.0 as usize]) as usize]);
                    *d = self.add(*d, prod);
                }
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = self.add(*d, self.mul(c, s));
            }
        }
    }

    /// `{x : x^d = x}`, the unique subfield of order `d`, sorted by encoding.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<Elem>> {
        let not_subfield = Error::NotASubfield { d, q: self.q };
        let (p, r) = prime_power(d as u64).ok_or(not_subfield.clone())?;
        if p != self.p || !self.m.is_multiple_of(r) {
            return Err(not_subfield);
        }
        Ok(self
            .elements()
            .filter(|&x| self.pow(x, d as u64) == x)
            .collect())
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            let c = a % self.p;
            out += ((self.p - c) % self.p) * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let m = self.m as usize;
        let da = digits(a, self.p, m);
        let db = digits(b, self.p, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (m..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            // X^m = -(modulus - X^m)
            for (k, &mk) in self.modulus.iter().take(m).enumerate() {
                let idx = deg - m + k;
                prod[idx] = (prod[idx] + (p - c) * mk as u64) % p;
            }
            prod[deg] = 0;
        }
        let coeffs: Vec<u32> = prod.iter().take(m).map(|&c| c as u32).collect();
        undigits(&coeffs, self.p)
    }

    fn pow_poly(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

fn check_order(p: u32, m: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::ZeroExtensionDegree);
    }
    match (p as u64).checked_pow(m) {
        Some(q) if q <= MAX_ORDER as u64 => Ok(()),
        _ => Err(Error::FieldTooLarge { p, m }),
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Returns `(p, r)` with `n = p^r` when `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|k| n.is_multiple_of(*k))?;
    let mut rest = n;
    let mut r = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p as u32, r))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `f` modulo the monic polynomial `g` over GF(p); coefficient
/// lists are constant term first.
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dg;
            for (k, &gk) in g.iter().take(dg).enumerate() {
                r[shift + k] = (r[shift + k] + (p - lead) * gk as u64 % p) % p;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for k in 1..=deg / 2 {
        for t in 0..p.pow(k as u32) {
            let mut g = digits(t, p, k);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf4_default_modulus() {
        // Of X^2, X^2+1, X^2+X, X^2+X+1 only the last has no root in GF(2).
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.mul(Elem(2), Elem(2)), Elem(3));
    }

    #[test]
    fn gf25_frobenius_fixes_everything() {
        let f = Field::new(5, 2).unwrap();
        assert_eq!(f.order(), 25);
        for x in f.elements() {
            assert_eq!(f.pow(x, 25), x);
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(Field::new(2, 0), Err(Error::ZeroExtensionDegree));
        assert!(matches!(Field::new(2, 17), Err(Error::FieldTooLarge { .. })));
        // X^2 + 1 = (X + 1)^2 over GF(2)
        assert!(matches!(
            Field::with_modulus(2, 2, &[1, 0, 1]),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            Field::with_modulus(2, 2, &[1, 1]),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            Field::with_modulus(3, 2, &[1, 0, 2]),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn explicit_modulus_matches_default_when_equal() {
        let a = Field::new(3, 2).unwrap();
        let b = Field::with_modulus(3, 2, a.modulus()).unwrap();
        assert_eq!(a, b);
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(a.mul(x, y), b.mul(x, y));
            }
        }
    }

    #[test]
    fn arith_dispatch() {
        let f = Field::new(2, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.arith(ArithOp::Add, a, Operand::Elem(a)).unwrap(), Elem::ZERO);
        }
        assert_eq!(f.arith(ArithOp::Inv, Elem::ONE, Operand::None).unwrap(), Elem::ONE);
        assert_eq!(
            f.arith(ArithOp::Div, Elem(3), Operand::Elem(Elem::ZERO)),
            Err(Error::DivisionByZero)
        );
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
        assert!(f.arith(ArithOp::Mul, Elem(9), Operand::Elem(Elem(1))).is_err());
        assert!(matches!(
            f.arith(ArithOp::Pow, Elem(2), Operand::None),
            Err(Error::BadOperand("pow"))
        ));
        assert_eq!(
            f.arith(ArithOp::Pow, Elem(2), Operand::Exponent(7)).unwrap(),
            Elem::ONE
        );
    }

    #[test]
    fn subfields_of_gf25() {
        let f = Field::new(5, 2).unwrap();
        let k5 = f.subfield_elements(5).unwrap();
        assert_eq!(k5.len(), 5);
        assert_eq!(f.subfield_elements(25).unwrap().len(), 25);
        assert!(f.subfield_elements(4).is_err());
        assert!(f.subfield_elements(125).is_err());
        // In the polynomial basis GF(5) sits at encodings 0..5.
        assert_eq!(k5, (0..5).map(Elem).collect::<Vec<_>>());
    }

    #[test]
    fn subfields_of_gf64() {
        let f = Field::new(2, 6).unwrap();
        for d in [2, 4, 8, 64] {
            assert_eq!(f.subfield_elements(d).unwrap().len(), d as usize);
        }
        assert!(f.subfield_elements(16).is_err());
        assert!(f.subfield_elements(32).is_err());
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(2, 13).unwrap();
        assert!(f.log.is_empty());
        let a = Elem(1234);
        let inv = f.inv(a).unwrap();
        assert_eq!(f.mul(a, inv), Elem::ONE);
        assert_eq!(f.pow(a, f.order() as u64), a);
        let g = Field::new(251, 2).unwrap();
        let b = Elem(40000);
        assert_eq!(g.add(b, g.neg(b)), Elem::ZERO);
        assert_eq!(g.mul(b, g.inv(b).unwrap()), Elem::ONE);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
