//! Polynomials over `F_q` of degree at most `q - 1`, their index form
//! `g = a * x^r f(x^s) + b`, and the correspondence with cyclotomic mappings.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cyclo::CyclotomicMapping;
use crate::error::{Error, Result};
use crate::field::{gcd, FieldElement, FieldSpec};

/// Coefficient vector indexed by exponent, trailing zeros stripped.
#[derive(Clone)]
pub struct Polynomial {
    field: Arc<FieldSpec>,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<u32> = self.coeffs.iter().map(|c| c.code()).collect();
        write!(f, "Polynomial(q={}, {:?})", self.field.q(), codes)
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coeffs == other.coeffs
    }
}

/// The unique decomposition `g(x) = a * x^r f(x^s) + b` with minimal index
/// `ell = (q - 1) / s`.
///
/// `f` is stored sparsely and is monic in its top exponent; its exponents
/// together with `ell` are coprime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexForm {
    pub a: FieldElement,
    pub b: FieldElement,
    pub r: u64,
    pub s: u64,
    pub ell: u64,
    pub f_exponents: Vec<u64>,
    pub f_coeffs: Vec<FieldElement>,
}

impl IndexForm {
    /// Evaluates `f` at `y`.
    pub fn eval_f(&self, field: &FieldSpec, y: FieldElement) -> FieldElement {
        self.f_exponents
            .iter()
            .zip(&self.f_coeffs)
            .fold(FieldElement::ZERO, |acc, (&e, &c)| {
                field.add(acc, field.mul(c, field.pow(y, e)))
            })
    }

    /// Expands back to a coefficient vector.
    pub fn to_polynomial(&self, field: Arc<FieldSpec>) -> Result<Polynomial> {
        let top = self.r + self.s * self.f_exponents.last().copied().unwrap_or(0);
        let mut coeffs = vec![FieldElement::ZERO; top as usize + 1];
        coeffs[0] = self.b;
        for (&e, &c) in self.f_exponents.iter().zip(&self.f_coeffs) {
            let slot = &mut coeffs[(self.r + self.s * e) as usize];
            *slot = field.add(*slot, field.mul(self.a, c));
        }
        Polynomial::new(field, coeffs)
    }
}

impl Polynomial {
    pub fn new(field: Arc<FieldSpec>, mut coeffs: Vec<FieldElement>) -> Result<Self> {
        if let Some(&bad) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(Error::ForeignElement {
                code: bad.code() as u64,
                q: field.q(),
            });
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() > field.q() as usize {
            return Err(Error::DegreeTooLarge {
                len: coeffs.len(),
                q: field.q(),
            });
        }
        Ok(Self { field, coeffs })
    }

    pub fn from_codes(field: Arc<FieldSpec>, codes: &[u64]) -> Result<Self> {
        let coeffs = codes
            .iter()
            .map(|&c| field.element(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, coeffs)
    }

    /// Reduces an arbitrary-length coefficient vector modulo `x^q - x`,
    /// which preserves the induced function on `F_q`.
    pub fn reduced(field: Arc<FieldSpec>, coeffs: &[FieldElement]) -> Result<Self> {
        let q = field.q() as usize;
        if coeffs.len() <= q {
            return Self::new(field, coeffs.to_vec());
        }
        let mut out = vec![FieldElement::ZERO; q];
        for (e, &c) in coeffs.iter().enumerate() {
            let slot = reduce_exponent(e as u64, field.order()) as usize;
            out[slot] = field.add(out[slot], c);
        }
        Self::new(field, out)
    }

    pub fn zero(field: Arc<FieldSpec>) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> FieldElement {
        self.coeffs.get(n).copied().unwrap_or(FieldElement::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> Result<FieldElement> {
        if !self.field.contains(x) {
            return Err(Error::ForeignElement {
                code: x.code() as u64,
                q: self.field.q(),
            });
        }
        let f = &self.field;
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c)))
    }

    /// Subtracts another polynomial over the same field.
    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch);
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.field.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Polynomial::new(self.field.clone(), coeffs)
    }

    pub fn index_decompose(&self) -> Result<IndexForm> {
        let f = &self.field;
        let exps: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, _)| e as u64)
            .collect();
        let (Some(&r), Some(&n)) = (exps.first(), exps.last()) else {
            return Err(Error::ConstantPolynomial);
        };
        let s = exps.iter().fold(f.order(), |acc, &e| gcd(acc, e - r));
        let a = self.coeffs[n as usize];
        let a_inv = f.inv(a).expect("leading coefficient is nonzero");
        let f_coeffs = exps
            .iter()
            .map(|&e| f.mul(self.coeffs[e as usize], a_inv))
            .collect();
        Ok(IndexForm {
            a,
            b: self.coeff(0),
            r,
            s,
            ell: f.order() / s,
            f_exponents: exps.iter().map(|&e| (e - r) / s).collect(),
            f_coeffs,
        })
    }

    /// The cyclotomic mapping of least index that agrees with `self`.
    ///
    /// The zero polynomial maps to the index-1 mapping with branch `0`.
    pub fn to_cyclotomic(&self) -> Result<CyclotomicMapping> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if self.coeffs.is_empty() {
            return CyclotomicMapping::new(self.field.clone(), 1, 1, vec![FieldElement::ZERO]);
        }
        let form = self.index_decompose()?;
        let f = &self.field;
        let branches = (0..form.ell)
            .map(|i| f.mul(form.a, form.eval_f(f, f.gamma_pow(form.s * i))))
            .collect();
        CyclotomicMapping::new(f.clone(), form.r, form.ell, branches)
    }

    /// `|V_g|` via the index form; constants have a single value.
    pub fn value_set_size(&self) -> u64 {
        if self.is_constant() {
            return 1;
        }
        let shifted = self
            .sub(&Polynomial::new(self.field.clone(), vec![self.coeff(0)]).expect("constant term lies in the field"))
            .expect("same field");
        shifted
            .to_cyclotomic()
            .expect("shifted polynomial vanishes at zero")
            .value_set_size_fast()
            .size
    }

    pub fn value_set_brute(&self) -> BTreeSet<FieldElement> {
        self.field
            .elements()
            .map(|x| self.eval(x).expect("x ranges over the polynomial's own field"))
            .collect()
    }
}

/// Interpolates a cyclotomic mapping:
/// `g(x) = (1/ell) sum_i a_i x^r sum_j zeta^{-ji} x^{js}` with `zeta = gamma^s`,
/// reduced modulo `x^q - x`.
pub fn from_cyclotomic(m: &CyclotomicMapping) -> Polynomial {
    let f = m.field();
    let (ell, s, n) = (m.ell(), m.s(), f.order());
    let ell_inv = f
        .inv(f.from_int((ell % f.p() as u64) as i64))
        .expect("ell divides q - 1, so it is a unit in F_q");
    let mut coeffs = vec![FieldElement::ZERO; f.q() as usize];
    for j in 0..ell {
        let mut acc = FieldElement::ZERO;
        for (i, &a) in m.branches().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let e = (s * j % n) * i as u64 % n;
            acc = f.add(acc, f.mul(a, f.gamma_pow(n - e)));
        }
        if acc.is_zero() {
            continue;
        }
        let slot = reduce_exponent(m.r() + j * s, n) as usize;
        coeffs[slot] = f.add(coeffs[slot], f.mul(ell_inv, acc));
    }
    Polynomial::new(f.clone(), coeffs).expect("coefficients are reduced below q")
}

/// `e` for `e = 0`, else the representative of `e` in `1..=q-1` modulo `q - 1`.
fn reduce_exponent(e: u64, order: u64) -> u64 {
    if e == 0 {
        0
    } else {
        1 + (e - 1) % order
    }
}
