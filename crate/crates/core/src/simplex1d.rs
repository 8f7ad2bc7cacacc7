//! Separation of distinct rationals of comparable height, measured in the
//! S-norm raised to the number of places.
//!
//! For reduced a = m/n the height data is the integer pair (m, n). Two
//! conventions for the height class with parameter k:
//! all-finite places: 2^k <= max(|m|, n) < 2^{k+1};
//! with the real place: 2^k <= n < 2^{k+1} (denominator only).
//! In each case |a - b|_S^l with l = |S| stays above an explicit power of
//! two, checked here both pairwise and by exhaustive minimum search.

use num_traits::Signed;
use rayon::prelude::*;

use crate::exactnum::rat_pow;
use crate::places::{pow2, snorm, Mode, PlaceSet};
use crate::{Error, Int, Rational, Result};

/// The proven lower bound for class k: 2^-(2k+4) over all-finite S,
/// 2^-(2k+2) when S contains the real place.
pub fn separation_lower_bound(k: u32, s: &PlaceSet) -> Rational {
    let e = match s.mode() {
        Mode::AllFinite => 2 * k as i64 + 4,
        Mode::WithInfinity => 2 * k as i64 + 2,
    };
    pow2(-e)
}

/// Reduced numerator and positive denominator of a rational.
pub fn height_pair(a: &Rational) -> (Int, Int) {
    (a.numer().clone(), a.denom().clone())
}

/// Membership of a reduced rational in height class k under the given mode.
pub fn in_height_class(a: &Rational, k: u32, mode: Mode) -> bool {
    let lo = Int::from(1u64) << k;
    let hi = Int::from(1u64) << (k + 1);
    let (m, n) = height_pair(a);
    let h = match mode {
        Mode::AllFinite => m.abs().max(n),
        Mode::WithInfinity => n,
    };
    lo <= h && h < hi
}

#[derive(Clone, Debug)]
pub struct PairVerdict {
    pub k: u32,
    pub l: u32,
    pub mode: Mode,
    /// height hypothesis for each input point
    pub hypothesis_a: bool,
    pub hypothesis_b: bool,
    /// |a - b|_S^l, exact
    pub separation: Rational,
    pub bound: Rational,
    pub exceeds_bound: bool,
}

/// Exact check of one pair: height hypotheses for class k and the strict
/// separation inequality |a - b|_S^l > bound.
pub fn check_pair(a: &Rational, b: &Rational, k: u32, s: &PlaceSet) -> Result<PairVerdict> {
    if a == b {
        return Err(Error::DegeneratePair(a.to_string()));
    }
    let mode = s.mode();
    let l = s.len() as u32;
    let diff = a - b;
    let separation = rat_pow(&snorm(&[diff], s)?, l as i64);
    let bound = separation_lower_bound(k, s);
    Ok(PairVerdict {
        k,
        l,
        mode,
        hypothesis_a: in_height_class(a, k, mode),
        hypothesis_b: in_height_class(b, k, mode),
        exceeds_bound: separation > bound,
        separation,
        bound,
    })
}

/// Result of the exhaustive minimum search over a height class.
#[derive(Clone, Debug)]
pub struct Separation {
    pub k: u32,
    pub l: u32,
    pub mode: Mode,
    /// exact minimum of |a - b|_S^l over all distinct candidate pairs
    pub minimum: Rational,
    /// one pair achieving the minimum (first in scan order)
    pub witness: (Rational, Rational),
    pub bound: Rational,
    pub exceeds_bound: bool,
    pub candidates: usize,
    pub pairs: u128,
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn candidate_grid(k: u32, mode: Mode, numerator_bound: i64) -> Vec<(i64, i64)> {
    let lo = 1i64 << k;
    let hi = 1i64 << (k + 1);
    let mut out = Vec::new();
    match mode {
        Mode::AllFinite => {
            for n in 1..hi {
                for m in -(hi - 1)..hi {
                    if m.abs().max(n) >= lo && gcd_i64(m, n) == 1 {
                        out.push((m, n));
                    }
                }
            }
        }
        Mode::WithInfinity => {
            for n in lo..hi {
                for m in -numerator_bound..=numerator_bound {
                    if gcd_i64(m, n) == 1 {
                        out.push((m, n));
                    }
                }
            }
        }
    }
    out
}

fn val_u64(mut x: u64, p: u64) -> u32 {
    if p == 2 {
        return x.trailing_zeros();
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Best pair seen in one shard: S-norm of the difference as a machine
/// fraction, plus candidate indices for the deterministic tie-break.
#[derive(Clone, Copy)]
struct Best {
    num: u64,
    den: u64,
    i: usize,
    j: usize,
}

impl Best {
    const NONE: Best = Best {
        num: 1,
        den: 0, // den = 0 marks "no pair yet" and loses every comparison
        i: usize::MAX,
        j: usize::MAX,
    };

    fn better_than(&self, other: &Best) -> bool {
        if other.den == 0 {
            return self.den != 0;
        }
        if self.den == 0 {
            return false;
        }
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs < rhs || (lhs == rhs && (self.i, self.j) < (other.i, other.j))
    }
}

/// Exhaustive minimum of |a - b|_S^l over all distinct reduced pairs in
/// height class k. In with-infinity mode the class bounds only the
/// denominator, so numerators scan [-numerator_bound, numerator_bound];
/// in all-finite mode the class itself bounds both entries and
/// numerator_bound is not consulted beyond the precondition.
pub fn min_separation_bruteforce(
    k: u32,
    s: &PlaceSet,
    numerator_bound: i64,
) -> Result<Separation> {
    if k > 8 {
        return Err(Error::Domain(format!(
            "height class k={k} exceeds the brute-force guard of 8"
        )));
    }
    if numerator_bound < 1i64 << (k + 1) {
        return Err(Error::Domain(format!(
            "numerator_bound {numerator_bound} is below 2^(k+1) = {}",
            1i64 << (k + 1)
        )));
    }
    let mode = s.mode();
    let l = s.len() as u32;
    let grid = candidate_grid(k, mode, numerator_bound);
    if grid.len() < 2 {
        return Err(Error::EmptyWindow { k });
    }
    let primes: Vec<u64> = s.finite_primes().collect();
    let has_inf = s.has_infinity();

    let best = (0..grid.len() - 1)
        .into_par_iter()
        .map(|i| {
            let (mi, ni) = grid[i];
            let mut local = Best::NONE;
            for (jo, &(mj, nj)) in grid[i + 1..].iter().enumerate() {
                let j = i + 1 + jo;
                let num = (mi * nj - mj * ni).unsigned_abs();
                let den = (ni * nj) as u64;
                debug_assert!(num != 0, "distinct reduced pairs have distinct values");
                // max over places of |a - b|, as a machine fraction
                let (mut fx_n, mut fx_d) = if has_inf { (num, den) } else { (0, 1) };
                for &p in &primes {
                    let v = val_u64(num, p) as i64 - val_u64(den, p) as i64;
                    let (pn, pd) = if v <= 0 {
                        (p.pow((-v) as u32), 1)
                    } else {
                        (1, p.pow(v as u32))
                    };
                    if pn as u128 * fx_d as u128 > fx_n as u128 * pd as u128 {
                        fx_n = pn;
                        fx_d = pd;
                    }
                }
                let cand = Best { num: fx_n, den: fx_d, i, j };
                if cand.better_than(&local) {
                    local = cand;
                }
            }
            local
        })
        .reduce(
            || Best::NONE,
            |a, b| if b.better_than(&a) { b } else { a },
        );

    let to_rat = |(m, n): (i64, i64)| Rational::new(Int::from(m), Int::from(n));
    let a = to_rat(grid[best.i]);
    let b = to_rat(grid[best.j]);
    let minimum = rat_pow(&snorm(&[&a - &b], s)?, l as i64);
    let bound = separation_lower_bound(k, s);
    let n = grid.len() as u128;
    Ok(Separation {
        k,
        l,
        mode,
        exceeds_bound: minimum > bound,
        minimum,
        witness: (a, b),
        bound,
        candidates: grid.len(),
        pairs: n * (n - 1) / 2,
    })
}
