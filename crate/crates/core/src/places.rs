//! Places of Q, finite place sets, sup norms and content.
//!
//! A place is either a prime p (carrying the p-adic absolute value) or the
//! symbol `inf` (the usual real absolute value). Rational vectors are stored
//! once and evaluated per place on demand, so a point plays the role of its
//! diagonal embedding into the product of the completions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::exactnum::{ensure_prime, int_valuation, is_prime, padic_abs, prime_power};
use crate::{Error, Int, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl Place {
    pub fn is_infinite(self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn prime(self) -> Option<u64> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Primes ascending, the infinite place last. This is the serialization
/// order everywhere.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        use Place::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Place::Infinity);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("invalid place: {s:?}")))?;
        ensure_prime(p)?;
        Ok(Place::Finite(p))
    }
}

/// Whether a place set reaches the real place; several lemmas split on this.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    AllFinite,
    WithInfinity,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::AllFinite => write!(f, "all-finite"),
            Mode::WithInfinity => write!(f, "with-infinity"),
        }
    }
}

/// A nonempty finite set of places, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaceSet {
    places: Vec<Place>,
}

impl PlaceSet {
    pub fn new<I: IntoIterator<Item = Place>>(iter: I) -> Result<Self> {
        let mut places: Vec<Place> = iter.into_iter().collect();
        for pl in &places {
            if let Place::Finite(p) = pl {
                ensure_prime(*p)?;
            }
        }
        places.sort();
        places.dedup();
        if places.is_empty() {
            return Err(Error::Parse("empty place set".into()));
        }
        Ok(PlaceSet { places })
    }

    pub fn from_primes(primes: &[u64], with_infinity: bool) -> Result<Self> {
        let mut places: Vec<Place> = primes.iter().map(|&p| Place::Finite(p)).collect();
        if with_infinity {
            places.push(Place::Infinity);
        }
        PlaceSet::new(places)
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn iter(&self) -> impl Iterator<Item = Place> + '_ {
        self.places.iter().copied()
    }

    pub fn finite_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.places.iter().filter_map(|pl| pl.prime())
    }

    pub fn contains(&self, place: Place) -> bool {
        self.places.binary_search(&place).is_ok()
    }

    pub fn has_infinity(&self) -> bool {
        self.contains(Place::Infinity)
    }

    pub fn mode(&self) -> Mode {
        if self.has_infinity() {
            Mode::WithInfinity
        } else {
            Mode::AllFinite
        }
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    /// The set with the infinite place appended when absent (the ambient
    /// space in which the diagonal embedding has a lattice).
    pub fn with_infinity(&self) -> PlaceSet {
        if self.has_infinity() {
            self.clone()
        } else {
            let mut places = self.places.clone();
            places.push(Place::Infinity);
            PlaceSet { places }
        }
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, pl) in self.places.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{pl}")?;
        }
        Ok(())
    }
}

impl FromStr for PlaceSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<PlaceSet> {
        let places = s
            .split(',')
            .map(|part| part.parse::<Place>())
            .collect::<Result<Vec<_>>>()?;
        PlaceSet::new(places)
    }
}

/// |x| at one place: p-adic absolute value or the real one.
pub fn place_abs(x: &Rational, place: Place) -> Result<Rational> {
    match place {
        Place::Finite(p) => padic_abs(x, p),
        Place::Infinity => Ok(x.abs()),
    }
}

/// Sup norm of a vector at one place: max over coordinates of |x_i|.
pub fn sup_abs(x: &[Rational], place: Place) -> Result<Rational> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    let mut best = Rational::zero();
    for xi in x {
        let a = place_abs(xi, place)?;
        if a > best {
            best = a;
        }
    }
    Ok(best)
}

/// S-norm of a vector: max over the places of S of the per-place sup norm.
pub fn snorm(x: &[Rational], s: &PlaceSet) -> Result<Rational> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    let mut best = Rational::zero();
    for place in s.iter() {
        let a = sup_abs(x, place)?;
        if a > best {
            best = a;
        }
    }
    Ok(best)
}

/// Content of a scalar over a place set: the product of |x| over the places.
pub fn content(x: &Rational, places: &PlaceSet) -> Result<Rational> {
    let mut prod = Rational::one();
    for place in places.iter() {
        prod *= place_abs(x, place)?;
    }
    Ok(prod)
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle variant; n must be odd, composite, not a prime power
    // obstacle in practice since we retry with shifted increments.
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    for c in 1..=20u64 {
        let f = |x: u64| (mul(x, x) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = x.abs_diff(y);
            if diff == 0 {
                d = n; // cycle without factor; retry with next c
                break;
            }
            d = gcd_u64(diff, n);
        }
        if d != n {
            return d;
        }
    }
    n
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n <= 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    if d == n {
        // should not happen for composite n with the retry loop above
        out.push(n);
        return;
    }
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Distinct primes dividing the nonzero integer `n`, ascending.
pub fn prime_support(n: &Int) -> Result<Vec<u64>> {
    if n.is_zero() {
        return Err(Error::Domain("prime support of zero".into()));
    }
    let mut rest = n.abs();
    let mut primes: Vec<u64> = Vec::new();
    for p in [2u64, 3, 5] {
        if int_valuation(&rest, p) > 0 {
            primes.push(p);
            let bp = Int::from(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
    }
    let mut d = 7u64;
    while Int::from(d) * Int::from(d) <= rest && d < (1 << 20) {
        if (&rest % Int::from(d)).is_zero() {
            primes.push(d);
            let bd = Int::from(d);
            while (&rest % &bd).is_zero() {
                rest /= &bd;
            }
        }
        d += 2;
    }
    if !rest.is_one() {
        let small: u64 = rest
            .to_string()
            .parse()
            .map_err(|_| Error::Domain(format!("cofactor too large to factor: {rest}")))?;
        let mut fs = Vec::new();
        factor_u64_into(small, &mut fs);
        primes.extend(fs);
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// Check |x|_inf times the product of |x|_p over primes p dividing the
/// numerator or denominator equals 1 exactly. True for every nonzero
/// rational; exposed as a cross-check of the valuation arithmetic.
pub fn product_formula_check(x: &Rational) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::Domain("product formula is for nonzero rationals".into()));
    }
    let mut primes = prime_support(x.numer())?;
    primes.extend(prime_support(x.denom())?);
    primes.sort_unstable();
    primes.dedup();
    let mut prod = x.abs();
    for p in primes {
        prod *= padic_abs(x, p)?;
    }
    Ok(prod.is_one())
}

/// Per-place absolute values of a scalar, in set order; handy for reports.
pub fn place_profile(x: &Rational, places: &PlaceSet) -> Result<Vec<(Place, Rational)>> {
    places
        .iter()
        .map(|pl| Ok((pl, place_abs(x, pl)?)))
        .collect()
}

/// Convenience: 2^e as an exact rational.
pub fn pow2(e: i64) -> Rational {
    prime_power(2, e)
}
