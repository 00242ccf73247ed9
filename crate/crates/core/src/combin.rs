//! Big-integer combinatorics shared by the exact distributions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n, 0), ..., C(n, n)` by the row recurrence `C(n, j+1) = C(n, j)(n-j)/(j+1)`.
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for j in 0..n {
        c = c * (n - j) / (j + 1);
        row.push(c.clone());
    }
    row
}

/// Falling factorial `(n)_k = n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i))
}

pub fn factorial(k: u64) -> BigInt {
    falling(k, k)
}

pub fn pow(base: impl Into<BigInt>, e: u64) -> BigInt {
    num_traits::pow::pow(base.into(), e as usize)
}

/// `(-1)^e`.
pub fn sign(e: u64) -> BigInt {
    if e % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Natural log of a positive big integer, without overflowing `f64`.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 60;
    let top: BigInt = x >> shift;
    top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational; `-inf` for zero.
pub fn ln_rational(x: &Rational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    assert!(x.is_positive(), "log of a negative rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Nearest `f64`, flushing to zero (or infinity) outside the exponent range.
pub fn to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.to_f64().unwrap_or_else(|| {
        let mag = ln_rational(&x.abs()).exp();
        if x.is_negative() {
            -mag
        } else {
            mag
        }
    })
}
