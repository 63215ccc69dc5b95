//! Exact rationals, their literal syntax and their natural-number codes.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::kernel::PairingScheme;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-k`.
pub fn dyadic(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// `2^k`.
pub fn pow2(k: u32) -> Rational {
    Rational::from_integer(BigInt::one() << k as usize)
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// Parses `p/q`, an integer, or a decimal such as `-0.125`, exactly.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("bad rational literal `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Canonical text form: `p/q` or `p`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn zigzag(n: &BigInt) -> Option<u128> {
    let m = n.abs().to_u128()?;
    if n.sign() == Sign::Minus {
        m.checked_mul(2)?.checked_sub(1)
    } else {
        m.checked_mul(2)
    }
}

fn unzigzag(z: u128) -> BigInt {
    if z.is_multiple_of(2) {
        BigInt::from(z / 2)
    } else {
        -BigInt::from(z.div_ceil(2))
    }
}

/// Code of an arbitrary rational: `<zigzag(p), q - 1>` in lowest terms.
/// Every natural decodes to some rational; non-reduced pairs are allowed.
pub fn rational_code(q: &Rational) -> Option<u128> {
    let d = q.denom().to_u128()?;
    PairingScheme::checked_encode(zigzag(q.numer())?, d - 1)
}

pub fn rational_from_code(c: u128) -> Rational {
    let (z, d) = PairingScheme::decode(c);
    Rational::new(unzigzag(z), BigInt::from(d) + 1)
}

/// Code of a strictly positive rational: `<p - 1, q - 1>`.
pub fn positive_code(q: &Rational) -> Option<u128> {
    if !q.is_positive() {
        return None;
    }
    let p = q.numer().to_u128()?;
    let d = q.denom().to_u128()?;
    PairingScheme::checked_encode(p - 1, d - 1)
}

pub fn positive_from_code(c: u128) -> Rational {
    let (p, d) = PairingScheme::decode(c);
    Rational::new(BigInt::from(p) + 1, BigInt::from(d) + 1)
}

/// Smallest `k` with `2^-k <= q` for positive `q`.
pub fn log2_floor_inv(q: &Rational) -> u32 {
    let mut k = 0u32;
    while dyadic(k) > *q {
        k += 1;
    }
    k
}

/// Largest dyadic `j / 2^k` that is `<= q`.
pub fn dyadic_floor(q: &Rational, k: u32) -> Rational {
    let scaled = q * pow2(k);
    Rational::new(scaled.numer().div_floor(scaled.denom()), BigInt::one() << k as usize)
}

pub fn min_r(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max_r(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}
