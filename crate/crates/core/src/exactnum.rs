//! Exact rationals with p-adic valuations and absolute values.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Int, Rational, Result};

/// Integer extended with `+infinity`; the codomain of p-adic valuations.
/// `Infinity` absorbs addition and compares greater than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtendedInt {
    Finite(i64),
    Infinity,
}

impl ExtendedInt {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedInt::Infinity)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtendedInt::Finite(v) => Some(v),
            ExtendedInt::Infinity => None,
        }
    }
}

impl PartialOrd for ExtendedInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedInt {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedInt::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add for ExtendedInt {
    type Output = ExtendedInt;
    fn add(self, rhs: ExtendedInt) -> ExtendedInt {
        use ExtendedInt::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Infinity,
        }
    }
}

impl fmt::Display for ExtendedInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedInt::Finite(v) => write!(f, "{v}"),
            ExtendedInt::Infinity => write!(f, "inf"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime(n: u64, base: u64) -> bool {
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality check: trial division below 2^20, fixed-base
/// strong-probable-prime tests above (the base set is exact for u64).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n < 1 << 20 {
        let mut d = 3u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        return true;
    }
    for &b in &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % b == 0 {
            return n == b;
        }
        if !strong_probable_prime(n, b) {
            return false;
        }
    }
    true
}

pub(crate) fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Multiplicity of the prime `p` in the nonzero integer `n`, by repeated
/// exact division.
pub fn int_valuation(n: &Int, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = Int::from(p);
    let mut v = 0i64;
    let mut rest = n.abs();
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        rest = q;
    }
}

/// p-adic valuation of a rational: the v with x = p^v * (unit at p),
/// `Infinity` for x = 0.
pub fn padic_valuation(x: &Rational, p: u64) -> Result<ExtendedInt> {
    ensure_prime(p)?;
    if x.is_zero() {
        return Ok(ExtendedInt::Infinity);
    }
    Ok(ExtendedInt::Finite(
        int_valuation(x.numer(), p) - int_valuation(x.denom(), p),
    ))
}

/// p^e as an exact rational, for any sign of e.
pub fn prime_power(p: u64, e: i64) -> Rational {
    let mag = num_traits::pow(Int::from(p), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(Int::one(), mag)
    }
}

/// Inverse of a modulo m when gcd(a, m) = 1, normalized to [0, m).
pub(crate) fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// x^e for integer e of either sign; e < 0 requires x nonzero.
pub fn rat_pow(x: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let k = e.unsigned_abs() as usize;
    let n = num_traits::pow(x.numer().clone(), k);
    let d = num_traits::pow(x.denom().clone(), k);
    if e > 0 {
        Rational::new_raw(n, d) // powers of a reduced fraction stay reduced
    } else {
        assert!(!x.is_zero(), "negative power of zero");
        Rational::new(d, n)
    }
}

/// p-adic absolute value |x|_p = p^(-v_p(x)); |0|_p = 0.
pub fn padic_abs(x: &Rational, p: u64) -> Result<Rational> {
    match padic_valuation(x, p)? {
        ExtendedInt::Infinity => Ok(Rational::zero()),
        ExtendedInt::Finite(v) => Ok(prime_power(p, -v)),
    }
}

/// If x = p^e for some integer e, return e.
pub fn as_power_of(x: &Rational, p: u64) -> Option<i64> {
    if x.is_negative() || x.is_zero() {
        return None;
    }
    let p = Int::from(p);
    let side = |n: &Int| -> Option<i64> {
        // exponent with n = p^e, if any
        let mut e = 0i64;
        let mut rest = n.clone();
        while rest > Int::one() {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                return None;
            }
            e += 1;
            rest = q;
        }
        Some(e)
    };
    match (x.numer().is_one(), x.denom().is_one()) {
        (true, true) => Some(0),
        (false, true) => side(x.numer()),
        (true, false) => side(x.denom()).map(|e| -e),
        (false, false) => None,
    }
}

/// Largest power of `base` that is <= r: returns b^e with b^e <= r < b^{e+1}.
pub fn snap_to_power(r: &Rational, base: u64) -> Result<Rational> {
    if !r.is_positive() {
        return Err(Error::Domain(format!(
            "cannot snap non-positive radius {r}"
        )));
    }
    let b = Rational::from_integer(Int::from(base));
    let mut val = Rational::one();
    if val <= *r {
        loop {
            let next = &val * &b;
            if next <= *r {
                val = next;
            } else {
                break;
            }
        }
    } else {
        while val > *r {
            val /= &b;
        }
    }
    Ok(val)
}

/// Sup norm of an integer vector: max of the absolute values of the entries.
pub fn height_inf(v: &[Int]) -> Result<Int> {
    v.iter()
        .map(|x| x.abs())
        .max()
        .ok_or(Error::EmptyVector)
}

/// Parse a rational in the textual form "a" or "a/b"; checks for a zero
/// denominator instead of panicking.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |_| Error::Parse(format!("invalid rational: {s:?}"));
    match s.split_once('/') {
        None => {
            let n: Int = s.parse().map_err(bad)?;
            Ok(Rational::from_integer(n))
        }
        Some((a, b)) => {
            let n: Int = a.trim().parse().map_err(bad)?;
            let d: Int = b.trim().parse().map_err(bad)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator: {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}
