//! Finite fields GF(q), q = p^n.
//!
//! Every field is table-driven: addition, multiplication, negation and
//! inversion are looked up in tables built once at construction. For n > 1
//! elements are polynomials over Z_p reduced modulo the lexicographically
//! smallest monic irreducible of degree n, and an element is encoded as the
//! base-p integer of its coefficients (constant term least significant).
//! The designated primitive element is the smallest encoding whose powers
//! cover GF(q)*, so all encodings (and all constructions downstream) are
//! reproducible.

use std::fmt;

use thiserror::Error;

/// Largest field order accepted by [`FiniteField::new`].
pub const MAX_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {q} exceeds the cap of {cap}")]
    OrderTooLarge { q: u64, cap: u32 },
    #[error("value {value} is not an element of GF({q})")]
    OutOfRange { value: u32, q: u32 },
    #[error("operand from GF({found}) used in GF({expected})")]
    FieldMismatch { expected: u32, found: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// An element of some GF(q), stored as its canonical encoding in `0..q`.
///
/// The order of the parent field travels with the value so mixed-field
/// arithmetic is caught.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    order: u32,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    /// Order of the field this element belongs to.
    pub fn field_order(self) -> u32 {
        self.order
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    n: u32,
    q: u32,
    /// Low coefficients c_0..c_{n-1} of the monic modulus; empty for n = 1.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// exp[k] = alpha^k for 0 <= k < q-1.
    exp: Vec<u16>,
    /// log[a] = k with alpha^k = a, for a != 0.
    log: Vec<u32>,
    alpha: u32,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("alpha", &self.alpha)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^n` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

// Polynomials over Z_p as coefficient vectors, constant term first.

fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

/// Remainder of `num` divided by the monic polynomial `den`.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let d = den.len() - 1;
    while rem.len() > d {
        let shift = rem.len() - 1 - d;
        let lead = *rem.last().unwrap();
        for (i, &c) in den.iter().enumerate() {
            let sub = lead * c % p;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        trim(&mut rem);
    }
    rem
}

fn digits(mut value: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(value % p);
        value /= p;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Monic polynomial of degree `deg` whose low coefficients are the base-p
/// digits of `low`.
fn monic(low: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut poly = digits(low, p, deg as usize);
    poly.push(1);
    poly
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = (poly.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d) {
            if poly_rem(poly, &monic(low, p, d), p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    (0..p.pow(n))
        .map(|low| monic(low, p, n))
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial exists in every degree")
}

impl FiniteField {
    /// Builds GF(p^n).
    pub fn new(p: u32, n: u32) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q64 = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER as u64 {
            return Err(GfError::OrderTooLarge { q: q64, cap: MAX_ORDER });
        }
        let q = q64 as u32;
        let size = q as usize;
        let modulus_full = if n == 1 { Vec::new() } else { smallest_irreducible(p, n) };

        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..q {
            let da = digits(a, p, n as usize);
            for b in 0..q {
                let db = digits(b, p, n as usize);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                let product = if n == 1 {
                    a * b % p
                } else {
                    let mut prod = vec![0u32; 2 * n as usize - 1];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    pack(&poly_rem(&prod, &modulus_full, p), p)
                };
                add[(a * q + b) as usize] = pack(&sum, p) as u16;
                mul[(a * q + b) as usize] = product as u16;
            }
        }

        let mut neg = vec![0u16; size];
        let mut inv = vec![0u16; size];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b as u16;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                }
            }
        }

        let mut alpha = 0;
        let mut exp = Vec::new();
        for candidate in 1..q {
            let mut powers = Vec::with_capacity(size - 1);
            let mut x = 1u32;
            loop {
                powers.push(x as u16);
                x = mul[(x * q + candidate) as usize] as u32;
                if x == 1 {
                    break;
                }
            }
            if powers.len() == size - 1 {
                alpha = candidate;
                exp = powers;
                break;
            }
        }
        let mut log = vec![0u32; size];
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }

        let modulus = if n == 1 {
            Vec::new()
        } else {
            modulus_full[..n as usize].to_vec()
        };
        Ok(Self {
            p,
            n,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            exp,
            log,
            alpha,
        })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u32) -> Result<Self, GfError> {
        let (p, n) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, n)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Low coefficients of the monic modulus, constant term first.
    /// Empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement { value, order: self.q }
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, GfError> {
        if value >= self.q {
            return Err(GfError::OutOfRange { value, q: self.q });
        }
        Ok(self.wrap(value))
    }

    /// Reduces an integer into the prime subfield: `k · 1`.
    pub fn from_int(&self, k: i64) -> FieldElement {
        let p = self.p as i64;
        self.wrap(k.rem_euclid(p) as u32)
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    pub fn alpha(&self) -> FieldElement {
        self.wrap(self.alpha)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|v| self.wrap(v))
    }

    /// Nonzero elements in encoding order.
    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(|v| self.wrap(v))
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.order == self.q && a.value < self.q
    }

    pub fn check(&self, a: FieldElement) -> Result<(), GfError> {
        if a.order != self.q {
            Err(GfError::FieldMismatch {
                expected: self.q,
                found: a.order,
            })
        } else {
            Ok(())
        }
    }

    fn idx(&self, a: FieldElement, b: FieldElement) -> usize {
        (a.value * self.q + b.value) as usize
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.add[self.idx(a, b)] as u32))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul[self.idx(a, b)] as u32))
    }

    pub fn try_sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(b)?;
        self.try_add(a, self.neg(b))
    }

    /// Panics if an operand belongs to a different field; use
    /// [`FiniteField::try_add`] for a checked variant.
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.try_add(a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.try_sub(a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.try_mul(a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a).unwrap_or_else(|e| panic!("{e}"));
        self.wrap(self.neg[a.value as usize] as u32)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.wrap(self.inv[a.value as usize] as u32))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        let b_inv = self.inv(b)?;
        self.try_mul(a, b_inv)
    }

    /// alpha^k, exponent taken modulo q - 1 (negative exponents allowed).
    pub fn pow_alpha(&self, k: i64) -> FieldElement {
        let period = (self.q - 1) as i64;
        self.wrap(self.exp[k.rem_euclid(period) as usize] as u32)
    }

    /// Discrete logarithm to base alpha; `None` for zero.
    pub fn log_alpha(&self, a: FieldElement) -> Option<u32> {
        self.check(a).ok()?;
        (!a.is_zero()).then(|| self.log[a.value as usize])
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u32> {
        let k = self.log_alpha(a)?;
        let period = self.q - 1;
        Some(period / gcd(k, period))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(f: &FiniteField, a: FieldElement) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != f.one() {
            x = f.mul(x, a);
            k += 1;
        }
        k
    }

    #[test]
    fn smallest_primitive_root_mod_5() {
        let f = FiniteField::new(5, 1).unwrap();
        // orders of 2, 3, 4 mod 5 are 4, 4, 2
        let orders: Vec<u32> = (2..5).map(|v| brute_order(&f, f.element(v).unwrap())).collect();
        assert_eq!(orders, vec![4, 4, 2]);
        assert_eq!(f.alpha().value(), 2);
    }

    #[test]
    fn gf2_alpha_is_one() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.alpha(), f.one());
    }

    #[test]
    fn gf4_modulus_and_alpha() {
        let f = FiniteField::new(2, 2).unwrap();
        // x^2 + x + 1
        assert_eq!(f.modulus(), &[1, 1]);
        let a = f.alpha();
        assert_eq!(a.value(), 2);
        let a2 = f.mul(a, a);
        assert_eq!(a2, f.add(a, f.one()));
        assert_eq!(f.add(f.one(), a2), a);
        assert_eq!(f.pow_alpha(2), a2);
        assert_eq!(a2.value(), 3);
    }

    #[test]
    fn gf7_powers_of_three() {
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.alpha().value(), 3);
        // 3^5 = 243 = 34 * 7 + 5
        assert_eq!(f.pow_alpha(5).value(), 5);
        assert_eq!(f.pow_alpha(0), f.one());
        assert_eq!(f.pow_alpha(-1), f.pow_alpha(5));
    }

    #[test]
    fn gf5_products() {
        let f = FiniteField::new(5, 1).unwrap();
        let x = f.element(3).unwrap();
        let y = f.element(4).unwrap();
        assert_eq!(f.mul(x, y).value(), 2);
        assert_eq!(f.add(x, f.zero()), x);
    }

    #[test]
    fn gf8_and_gf9_moduli() {
        let f8 = FiniteField::new(2, 3).unwrap();
        // x^3 + x + 1
        assert_eq!(f8.modulus(), &[1, 1, 0]);
        let f9 = FiniteField::new(3, 2).unwrap();
        // x^2 + 1; x has order 4, x + 1 (encoding 4) is the first primitive element
        assert_eq!(f9.modulus(), &[1, 0]);
        assert_eq!(f9.alpha().value(), 4);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(FiniteField::new(3, 0).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(
            FiniteField::new(2, 9).unwrap_err(),
            GfError::OrderTooLarge { q: 512, .. }
        ));
        assert_eq!(FiniteField::with_order(12).unwrap_err(), GfError::NotPrimePower(12));
    }

    #[test]
    fn inverse_of_zero_and_mixed_fields() {
        let f5 = FiniteField::new(5, 1).unwrap();
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f5.inv(f5.zero()).unwrap_err(), GfError::ZeroInverse);
        let err = f5.try_add(f5.one(), f7.one()).unwrap_err();
        assert_eq!(err, GfError::FieldMismatch { expected: 5, found: 7 });
        assert!(f5.element(5).is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(18), None);
    }
}
