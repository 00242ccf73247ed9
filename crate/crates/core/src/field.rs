//! Finite fields `F_q`, `q = p^k`, backed by exponent and logarithm tables.
//!
//! Elements are stored as integer codes: the element with coefficient vector
//! `(c_0, c_1, ..., c_{k-1})` (constant term first) has code
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. For prime fields the code is the
//! residue itself. "Smallest" always refers to this code order.
//!
//! Every field carries a primitive element `gamma` and a complete discrete
//! logarithm table, so multiplication, exponentiation and coset membership
//! are all O(1) lookups.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order for which tables are built unless overridden.
pub const DEFAULT_TABLE_LIMIT: u64 = 1_000_000;

/// Hard ceiling for the table limit; codes must fit in a `u32`.
const MAX_TABLE_LIMIT: u64 = 1 << 30;

/// An element of some `F_q`, identified by its canonical code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// Wraps a raw code. Validity is checked by whichever field consumes it;
    /// use [`FieldSpec::element`] to check up front.
    pub const fn from_code(code: u32) -> Self {
        Self(code)
    }

    pub const fn code(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field, enough to rebuild it exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    /// Monic modulus `c_0..c_k`, `None` for prime fields.
    pub modulus: Option<Vec<u32>>,
    pub gamma: u32,
}

/// A concrete finite field with its primitive element and log tables.
///
/// Immutable after construction; share it behind an [`Arc`].
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    gamma: FieldElement,
    /// `exp[e] = gamma^e` for `e` in `0..q-1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("gamma", &self.gamma)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.k == other.k
            && self.modulus == other.modulus
            && self.gamma == other.gamma
    }
}

impl Eq for FieldSpec {}

/// Configures and builds a [`FieldSpec`].
#[derive(Clone, Debug)]
pub struct FieldBuilder {
    p: u64,
    k: u32,
    modulus: Option<Vec<u64>>,
    gamma: Option<u32>,
    table_limit: u64,
}

impl FieldBuilder {
    pub fn new(p: u64, k: u32) -> Self {
        Self {
            p,
            k,
            modulus: None,
            gamma: None,
            table_limit: DEFAULT_TABLE_LIMIT,
        }
    }

    /// Modulus coefficients `c_0..c_k`. Searched automatically when absent.
    pub fn modulus(mut self, coeffs: &[u64]) -> Self {
        self.modulus = Some(coeffs.to_vec());
        self
    }

    /// Use a specific primitive element instead of the smallest one.
    pub fn gamma(mut self, code: u32) -> Self {
        self.gamma = Some(code);
        self
    }

    pub fn table_limit(mut self, limit: u64) -> Self {
        self.table_limit = limit;
        self
    }

    pub fn build(self) -> Result<FieldSpec> {
        let FieldBuilder {
            p,
            k,
            modulus,
            gamma,
            table_limit,
        } = self;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let limit = table_limit.min(MAX_TABLE_LIMIT);
        let q = checked_pow(p, k).filter(|&q| q <= limit).ok_or(Error::TableLimit {
            q: checked_pow(p, k).unwrap_or(u64::MAX),
            limit,
        })?;
        let p = p as u32;
        let q = q as u32;

        let modulus = if k == 1 {
            if let Some(m) = &modulus {
                normalize_modulus(p, 1, m)?;
            }
            None
        } else {
            let m = match modulus {
                Some(m) => normalize_modulus(p, k, &m)?,
                None => smallest_irreducible(p, k),
            };
            if !is_irreducible(p, &m) {
                return Err(Error::ReducibleModulus { p });
            }
            Some(m)
        };

        let raw = RawArith {
            p,
            k: k as usize,
            modulus: modulus.as_deref(),
        };
        let gamma = match gamma {
            Some(g) if g >= q => {
                return Err(Error::ForeignElement {
                    code: g as u64,
                    q,
                })
            }
            Some(g) if !raw.is_primitive(g, q) => return Err(Error::NotPrimitive(g)),
            Some(g) => g,
            None => raw.smallest_primitive(q),
        };

        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for e in 0..order {
            if log[x as usize] != u32::MAX {
                return Err(Error::NotPrimitive(gamma));
            }
            exp.push(x);
            log[x as usize] = e as u32;
            x = raw.mul(x, gamma);
        }
        if x != 1 {
            return Err(Error::NotPrimitive(gamma));
        }

        Ok(FieldSpec {
            p,
            k,
            q,
            modulus,
            gamma: FieldElement(gamma),
            exp,
            log,
        })
    }
}

/// Builds `F_{p^k}` and wraps it for sharing.
pub fn build_field(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Arc<FieldSpec>> {
    let mut builder = FieldBuilder::new(p, k);
    if let Some(m) = modulus {
        builder = builder.modulus(m);
    }
    builder.build().map(Arc::new)
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        FieldBuilder::new(p, 1).build()
    }

    /// The field of order `q`, with the smallest irreducible modulus.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        FieldBuilder::new(p, k).build()
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self> {
        let mut builder = FieldBuilder::new(desc.p as u64, desc.k).gamma(desc.gamma);
        if let Some(m) = &desc.modulus {
            let m: Vec<u64> = m.iter().map(|&c| c as u64).collect();
            builder = builder.modulus(&m);
        }
        builder.build()
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
            gamma: self.gamma.0,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q - 1`, the order of the multiplicative group.
    pub fn order(&self) -> u64 {
        (self.q - 1) as u64
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn gamma(&self) -> FieldElement {
        self.gamma
    }

    /// Recomputes the smallest primitive element without using the tables.
    ///
    /// Agrees with [`gamma`](Self::gamma) unless the field was built with an
    /// explicit generator.
    pub fn find_primitive(&self) -> FieldElement {
        FieldElement(self.raw().smallest_primitive(self.q))
    }

    fn raw(&self) -> RawArith<'_> {
        RawArith {
            p: self.p,
            k: self.k as usize,
            modulus: self.modulus.as_deref(),
        }
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.q
    }

    pub fn element(&self, code: u64) -> Result<FieldElement> {
        if code < self.q as u64 {
            Ok(FieldElement(code as u32))
        } else {
            Err(Error::ForeignElement { code, q: self.q })
        }
    }

    /// Element from a coefficient vector, constant term first.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter(format!(
                "coefficient vector {coeffs:?} does not describe an element of F_{}",
                self.q
            )));
        }
        Ok(FieldElement(self.raw().from_digits(coeffs)))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        self.raw().to_digits(x.0)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// All `q` elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        if self.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.p;
        if self.k == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 {
            let d = x % p;
            out += ((p - d) % p) * place;
            place = place.wrapping_mul(p);
            x /= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let e = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        FieldElement(self.exp[(e % self.order()) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        let n = self.order();
        let e = (n - self.log[a.0 as usize] as u64) % n;
        Some(FieldElement(self.exp[e as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|b_inv| self.mul(a, b_inv))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.order();
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % n)) % n) as usize])
    }

    /// `gamma^e`, exponent taken mod `q - 1`.
    pub fn gamma_pow(&self, e: u64) -> FieldElement {
        FieldElement(self.exp[(e % self.order()) as usize])
    }

    /// Discrete logarithm to base `gamma`, in `0..q-1`.
    pub fn dlog(&self, x: FieldElement) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::LogOfZero);
        }
        if !self.contains(x) {
            return Err(Error::ForeignElement {
                code: x.0 as u64,
                q: self.q,
            });
        }
        Ok(self.log[x.0 as usize])
    }

    /// Unchecked log for hot loops; `x` must be a nonzero element.
    #[inline]
    pub(crate) fn log_unchecked(&self, x: FieldElement) -> u32 {
        self.log[x.0 as usize]
    }

    /// The `i` with `x` in `C_i = gamma^i C_0`, `C_0` the nonzero `ell`-th powers.
    pub fn coset_index(&self, ell: u64, x: FieldElement) -> Result<u64> {
        self.check_index(ell)?;
        Ok(self.dlog(x)? as u64 % ell)
    }

    /// Ok when `ell` divides `q - 1`.
    pub fn check_index(&self, ell: u64) -> Result<()> {
        if ell == 0 || self.order() % ell != 0 {
            return Err(Error::IndexNotDivisor {
                ell,
                q_minus_one: self.order(),
            });
        }
        Ok(())
    }

    /// Divisors of `q - 1` in increasing order.
    pub fn indices(&self) -> Vec<u64> {
        divisors(self.order())
    }
}

/// Table-free arithmetic on element codes, used during construction.
struct RawArith<'a> {
    p: u32,
    k: usize,
    modulus: Option<&'a [u32]>,
}

impl RawArith<'_> {
    fn to_digits(&self, mut code: u32) -> Vec<u32> {
        let mut d = vec![0; self.k];
        for slot in d.iter_mut() {
            *slot = code % self.p;
            code /= self.p;
        }
        d
    }

    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let Some(m) = self.modulus else {
            return ((a as u64 * b as u64) % p) as u32;
        };
        let (x, y) = (self.to_digits(a), self.to_digits(b));
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        // m is monic of degree k: x^k = -(c_0 + ... + c_{k-1} x^{k-1}).
        for top in (self.k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (j, &mj) in m[..self.k].iter().enumerate() {
                let idx = top - self.k + j;
                prod[idx] = (prod[idx] + c * (p - mj as u64)) % p;
            }
        }
        let digits: Vec<u32> = prod[..self.k].iter().map(|&c| c as u32).collect();
        self.from_digits(&digits)
    }

    fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_primitive(&self, g: u32, q: u32) -> bool {
        if g == 0 {
            return false;
        }
        let n = (q - 1) as u64;
        self.pow(g, n) == 1 && prime_factors(n).iter().all(|&r| self.pow(g, n / r) != 1)
    }

    fn smallest_primitive(&self, q: u32) -> u32 {
        (1..q)
            .find(|&g| self.is_primitive(g, q))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

fn checked_pow(p: u64, k: u32) -> Option<u64> {
    (0..k).try_fold(1u64, |acc, _| acc.checked_mul(p))
}

fn normalize_modulus(p: u32, k: u32, coeffs: &[u64]) -> Result<Vec<u32>> {
    let bad = Error::BadModulus { expected: k };
    if coeffs.len() != k as usize + 1 {
        return Err(bad);
    }
    let reduced: Vec<u64> = coeffs.iter().map(|&c| c % p as u64).collect();
    let lead = reduced[k as usize];
    if lead == 0 {
        return Err(bad);
    }
    let lead_inv = mod_pow(lead, p as u64 - 2, p as u64);
    Ok(reduced
        .iter()
        .map(|&c| ((c * lead_inv) % p as u64) as u32)
        .collect())
}

fn mod_pow(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Remainder of `num` modulo a monic `den`, coefficients constant term first.
fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let d = den.len() - 1;
    while r.len() > d {
        let c = r.pop().unwrap();
        if c == 0 {
            continue;
        }
        let shift = r.len() - d;
        for (j, &dj) in den[..d].iter().enumerate() {
            r[shift + j] = (r[shift + j] + c * (p - dj as u64)) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if poly_rem(p, modulus, &cand).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    (0..count)
        .map(|code| {
            let mut m = Vec::with_capacity(k as usize + 1);
            let mut c = code;
            for _ in 0..k {
                m.push((c % p as u64) as u32);
                c /= p as u64;
            }
            m.push(1);
            m
        })
        .find(|m| is_irreducible(p, m))
        .expect("irreducible polynomials exist in every degree")
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut k = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    Some((p, k))
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
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

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Order of `x` found by repeated multiplication, independent of the tables.
    fn naive_order(f: &FieldSpec, x: FieldElement) -> u64 {
        let mut acc = x;
        let mut n = 1;
        while acc != FieldElement::ONE {
            acc = FieldElement(f.raw().mul(acc.0, x.0));
            n += 1;
        }
        n
    }

    #[test]
    fn prime_field_f5() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.gamma().code(), 2);
        assert_eq!(f.dlog(FieldElement(4)).unwrap(), 2);
    }

    #[test]
    fn f8_from_x3_x_1() {
        let f = build_field(2, 3, Some(&[1, 1, 0, 1])).unwrap();
        assert_eq!(f.q(), 8);
        // x^3 + x + 1 has no root in F_2, and a reducible cubic always has a root.
        let roots = (0..2u64).filter(|&x| (x * x * x + x + 1) % 2 == 0).count();
        assert_eq!(roots, 0);
        // the automatic search lands on the same modulus
        let auto = FieldSpec::of_order(8).unwrap();
        assert_eq!(auto.modulus(), Some(&[1, 1, 0, 1][..]));
    }

    #[test]
    fn rejects_composite_and_reducible() {
        assert_eq!(FieldSpec::prime(4).unwrap_err(), Error::NotPrime(4));
        // x^2 + 1 = (x + 1)^2 over F_2
        assert_eq!(
            build_field(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            Error::ReducibleModulus { p: 2 }
        );
        assert!(matches!(
            FieldBuilder::new(2, 21).build(),
            Err(Error::TableLimit { .. })
        ));
        assert!(FieldBuilder::new(7, 3).table_limit(100).build().is_err());
    }

    #[test]
    fn primitive_elements() {
        assert_eq!(FieldSpec::prime(2).unwrap().gamma().code(), 1);
        assert_eq!(FieldSpec::prime(5).unwrap().gamma().code(), 2);
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(naive_order(&f7, FieldElement(2)), 3);
        assert_eq!(f7.gamma().code(), 3);
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 101] {
            let f = FieldSpec::of_order(q).unwrap();
            assert_eq!(naive_order(&f, f.gamma()), q - 1, "q = {q}");
            assert_eq!(f.find_primitive(), f.gamma());
            // no smaller element is primitive
            for c in 1..f.gamma().code() {
                assert!(naive_order(&f, FieldElement(c)) < q - 1);
            }
        }
    }

    #[test]
    fn explicit_gamma() {
        let f = FieldBuilder::new(7, 1).gamma(5).build().unwrap();
        assert_eq!(f.gamma().code(), 5);
        assert_eq!(
            FieldBuilder::new(7, 1).gamma(2).build().unwrap_err(),
            Error::NotPrimitive(2)
        );
    }

    #[test]
    fn dlog_basics() {
        let f = FieldSpec::of_order(9).unwrap();
        assert_eq!(f.dlog(FieldElement::ONE).unwrap(), 0);
        assert_eq!(f.dlog(f.gamma()).unwrap(), 1);
        assert_eq!(f.dlog(FieldElement::ZERO), Err(Error::LogOfZero));
        for e in 0..8 {
            assert_eq!(f.dlog(f.gamma_pow(e)).unwrap() as u64, e);
        }
    }

    #[test]
    fn coset_index_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.coset_index(2, FieldElement(2)).unwrap(), 0);
        assert_eq!(f7.coset_index(3, FieldElement::ONE).unwrap(), 0);
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.coset_index(2, FieldElement(3)).unwrap(), 1);
        assert!(matches!(
            f5.coset_index(3, FieldElement(3)),
            Err(Error::IndexNotDivisor { .. })
        ));
        assert_eq!(f5.coset_index(2, FieldElement::ZERO), Err(Error::LogOfZero));
    }

    #[test]
    fn cosets_partition_multiplicative_group() {
        for q in [7u64, 9, 13, 16, 25] {
            let f = FieldSpec::of_order(q).unwrap();
            for ell in f.indices() {
                let mut sizes = vec![0u64; ell as usize];
                for x in f.nonzero_elements() {
                    sizes[f.coset_index(ell, x).unwrap() as usize] += 1;
                }
                assert!(sizes.iter().all(|&s| s == (q - 1) / ell));
            }
        }
    }

    #[test]
    fn table_arithmetic_matches_raw() {
        for q in [8u64, 9, 25, 27] {
            let f = FieldSpec::of_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b).0, f.raw().mul(a.0, b.0));
                    let s = f.add(a, b);
                    assert_eq!(f.sub(s, b), a);
                }
                if let Some(ai) = f.inv(a) {
                    assert_eq!(f.mul(a, ai), FieldElement::ONE);
                }
            }
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let f = FieldSpec::of_order(27).unwrap();
        let json = serde_json::to_string(&f.descriptor()).unwrap();
        let back: FieldDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(FieldSpec::from_descriptor(&back).unwrap(), f);
    }

    #[test]
    fn helpers() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }
}
