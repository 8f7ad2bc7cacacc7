//! Height-windowed enumeration of rational points in S-adic product balls,
//! with the level radius schedule, constructive covers of digit compacts,
//! the one-hyperplane check for small balls, and witness searches for
//! Dirichlet-style and psi-approximation inequalities.
//!
//! Enumeration reduces p-adic ball membership to congruences on the
//! numerators given the denominator, so the scan touches only candidates
//! that already satisfy every finite place. A naive full scan with the
//! same contract serves as the correctness oracle.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::exactnum::{
    as_power_of, ensure_prime, int_valuation, mod_inverse, prime_power, rat_pow, snap_to_power,
};
use crate::lattice::{affine_hull_hyperplane, Approximant, HeightWindow, Hyperplane};
use crate::measures::{DigitPoint, ProductMeasure};
use crate::places::{snorm, sup_abs, Mode, Place, PlaceSet};
use crate::{Error, Int, Rational, Result};

/// Largest candidate count an enumeration is allowed to visit.
pub const ENUMERATION_GUARD: u128 = 1_000_000_000;

/// Largest number of balls a cover is allowed to materialize.
pub const COVER_GUARD: u128 = 1_000_000;

/// Ball radius for level n: (1/6) * 2^(-E) with
/// E = ceil(((d+2) + (d+1)(n+1)) / (d*l)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduledRadius {
    pub value: Rational,
    /// the power of two E in the denominator
    pub exponent: u32,
    /// set when the exact exponent was fractional; the radius then shrank
    /// to the next smaller power of two, which keeps every volume
    /// comparison one-sided
    pub rounded_down: bool,
}

pub fn radius_schedule(n: u32, d: usize, l: usize) -> Result<ScheduledRadius> {
    if d == 0 || l == 0 {
        return Err(Error::Domain(format!(
            "radius schedule needs d >= 1 and l >= 1 (got d={d}, l={l})"
        )));
    }
    let sum = (d as u64 + 2) + (d as u64 + 1) * (n as u64 + 1);
    let dl = (d * l) as u64;
    let exponent =
        u32::try_from(sum.div_ceil(dl)).map_err(|_| Error::Domain("level too large".into()))?;
    let value = Rational::new(Int::one(), Int::from(6u32) << exponent);
    Ok(ScheduledRadius {
        value,
        exponent,
        rounded_down: sum % dl != 0,
    })
}

/// Largest realizable p-adic radius not exceeding r: p^(-m) with
/// p^(-m) <= r < p^(-m+1).
pub fn snap_radius(r: &Rational, p: u64) -> Result<Rational> {
    ensure_prime(p)?;
    snap_to_power(r, p)
}

/// Where a product ball sits: one rational point read diagonally at every
/// place, or an independent center per place (in place-set order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallCenter {
    Diagonal(Vec<Rational>),
    PerPlace(Vec<Vec<Rational>>),
}

/// Product ball over a place set: closed p-adic balls with snapped radii
/// at finite places, an open sup-norm ball of the nominal radius at the
/// real place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBall {
    places: PlaceSet,
    center: BallCenter,
    nominal: Rational,
    radii: Vec<Rational>,
}

impl SBall {
    pub fn new(center: BallCenter, nominal_radius: Rational, s: &PlaceSet) -> Result<Self> {
        if !nominal_radius.is_positive() {
            return Err(Error::Domain(format!(
                "ball radius must be positive, got {nominal_radius}"
            )));
        }
        let d = match &center {
            BallCenter::Diagonal(v) => v.len(),
            BallCenter::PerPlace(vs) => {
                if vs.len() != s.len() {
                    return Err(Error::DimensionMismatch {
                        expected: s.len(),
                        got: vs.len(),
                    });
                }
                let d = vs[0].len();
                if vs.iter().any(|v| v.len() != d) {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: vs.iter().map(|v| v.len()).find(|&k| k != d).unwrap_or(d),
                    });
                }
                d
            }
        };
        if d == 0 {
            return Err(Error::EmptyVector);
        }
        let radii = s
            .places()
            .iter()
            .map(|pl| match pl {
                Place::Finite(p) => snap_radius(&nominal_radius, *p),
                Place::Infinity => Ok(nominal_radius.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SBall {
            places: s.clone(),
            center,
            nominal: nominal_radius,
            radii,
        })
    }

    pub fn d(&self) -> usize {
        match &self.center {
            BallCenter::Diagonal(v) => v.len(),
            BallCenter::PerPlace(vs) => vs[0].len(),
        }
    }

    pub fn places(&self) -> &PlaceSet {
        &self.places
    }

    pub fn nominal_radius(&self) -> &Rational {
        &self.nominal
    }

    /// Realized radius at the place with the given index in place order.
    pub fn radius_at(&self, place_idx: usize) -> &Rational {
        &self.radii[place_idx]
    }

    pub fn center_at(&self, place_idx: usize) -> &[Rational] {
        match &self.center {
            BallCenter::Diagonal(v) => v,
            BallCenter::PerPlace(vs) => &vs[place_idx],
        }
    }

    /// Membership of a rational point read diagonally: distance <= radius
    /// at finite places, strict at the real place.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                got: x.len(),
            });
        }
        for (idx, pl) in self.places.places().iter().enumerate() {
            let c = self.center_at(idx);
            let diff: Vec<Rational> = x.iter().zip(c).map(|(a, b)| a - b).collect();
            let dist = sup_abs(&diff, *pl)?;
            let inside = match pl {
                Place::Finite(_) => dist <= self.radii[idx],
                Place::Infinity => dist < self.radii[idx],
            };
            if !inside {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn in_ball(x: &[Rational], ball: &SBall, s: &PlaceSet) -> Result<bool> {
    if ball.places != *s {
        return Err(Error::Domain(format!(
            "ball is over {} but membership was asked over {}",
            ball.places, s
        )));
    }
    ball.contains(x)
}

fn all_digit_strings(set: &[u64], depth: usize) -> Result<Vec<Vec<u64>>> {
    let count = (set.len() as u128)
        .checked_pow(depth as u32)
        .ok_or(Error::SearchTooLarge {
            candidates: u128::MAX,
            guard: COVER_GUARD,
        })?;
    if count > COVER_GUARD {
        return Err(Error::SearchTooLarge {
            candidates: count,
            guard: COVER_GUARD,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut odo = vec![0usize; depth];
    loop {
        out.push(odo.iter().map(|&i| set[i]).collect());
        let mut pos = 0;
        loop {
            if pos == depth {
                return Ok(out);
            }
            odo[pos] += 1;
            if odo[pos] < set.len() {
                break;
            }
            odo[pos] = 0;
            pos += 1;
        }
    }
}

fn snapped_depth(r: &Rational, base: u64) -> Result<i64> {
    let snapped = snap_to_power(r, base)?;
    Ok(-as_power_of(&snapped, base).expect("snapped radius is a power of the base"))
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Disjoint balls of the given radius centered in the support of the digit
/// measure, whose union covers the support once the real factor is tripled.
/// Finite places partition by cylinders; the real place keeps a greedy
/// subset of cylinder representatives spaced at least 2r apart.
pub fn cover_compact_with_radius(k: &ProductMeasure, radius: &Rational) -> Result<Vec<SBall>> {
    if !radius.is_positive() {
        return Err(Error::Domain(format!(
            "cover radius must be positive, got {radius}"
        )));
    }
    let s = k.place_set();
    let d = k.d();
    let mut per_place: Vec<Vec<Vec<Rational>>> = Vec::new();
    let mut total: u128 = 1;
    for comp in k.components() {
        let base = comp.base();
        let depth = snapped_depth(radius, base)?.max(0) as usize;
        let coords: Vec<Vec<Rational>> = match comp.place() {
            Place::Finite(p) => (0..d)
                .map(|i| {
                    let mut vals: Vec<Rational> = all_digit_strings(comp.digits(i), depth)?
                        .into_iter()
                        .map(|string| {
                            let mut v = Int::zero();
                            for &a in string.iter().rev() {
                                v = v * Int::from(p) + Int::from(a);
                            }
                            Rational::from_integer(v)
                        })
                        .collect();
                    vals.sort();
                    Ok(vals)
                })
                .collect::<Result<_>>()?,
            Place::Infinity => (0..d)
                .map(|i| {
                    let set = comp.digits(i);
                    let b = Rational::from_integer(Int::from(base));
                    // representative of a cylinder: the prefix followed by
                    // the smallest allowed digit forever, which stays in
                    // the support
                    let tail = Rational::new(Int::from(set[0]), Int::from(base - 1))
                        * prime_power(base, -(depth as i64));
                    let mut vals: Vec<Rational> = all_digit_strings(set, depth)?
                        .into_iter()
                        .map(|string| {
                            let mut v = Rational::zero();
                            let mut scale = Rational::one();
                            for &a in &string {
                                scale /= &b;
                                v += Rational::from_integer(Int::from(a)) * &scale;
                            }
                            v + &tail
                        })
                        .collect();
                    vals.sort();
                    let spacing = radius * Rational::from_integer(Int::from(2));
                    let mut kept: Vec<Rational> = Vec::new();
                    for c in vals {
                        match kept.last() {
                            Some(last) if &c - last < spacing => {}
                            _ => kept.push(c),
                        }
                    }
                    Ok(kept)
                })
                .collect::<Result<_>>()?,
        };
        let mut count: u128 = 1;
        for c in &coords {
            count = count.saturating_mul(c.len() as u128);
        }
        total = total.saturating_mul(count);
        if total > COVER_GUARD {
            return Err(Error::SearchTooLarge {
                candidates: total,
                guard: COVER_GUARD,
            });
        }
        per_place.push(cartesian(&coords));
    }
    let centers = cartesian(&per_place);
    centers
        .into_iter()
        .map(|c| SBall::new(BallCenter::PerPlace(c), radius.clone(), &s))
        .collect()
}

/// Cover of the support at the level-n scheduled radius.
pub fn cover_compact(k: &ProductMeasure, n: u32) -> Result<Vec<SBall>> {
    let schedule = radius_schedule(n, k.d(), k.place_set().len())?;
    cover_compact_with_radius(k, &schedule.value)
}

/// An integer pair from the height window together with the rational point
/// it represents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedPair {
    pub pair: Approximant,
    /// the reduced point q/q0
    pub point: Vec<Rational>,
}

fn canonical_sort(pairs: &mut [EnumeratedPair]) {
    pairs.sort_by(|a, b| {
        a.pair
            .q0
            .cmp(&b.pair.q0)
            .then_with(|| a.pair.q.cmp(&b.pair.q))
    });
}

enum PlaceCond {
    Free,
    Fixed { residue: Int, modulus: Int },
    Empty,
}

/// Reduce |q_i/q0 - c|_p <= p^(-m) to a congruence on q_i for fixed q0:
/// equivalently |q_i - c*q0|_p <= p^-(m + v_p(q0)).
fn place_condition(center: &Rational, p: u64, m: i64, q0: &Int) -> PlaceCond {
    let e = m + int_valuation(q0, p);
    let t = center * Rational::from_integer(q0.clone());
    let pole = int_valuation(t.denom(), p);
    if pole > 0 {
        // every integer sits at distance exactly p^pole from the target
        return if -pole >= e {
            PlaceCond::Free
        } else {
            PlaceCond::Empty
        };
    }
    if e <= 0 {
        return PlaceCond::Free;
    }
    let modulus = num_traits::pow(Int::from(p), e as usize);
    let inv = mod_inverse(t.denom(), &modulus).expect("denominator coprime to p");
    let residue = (t.numer() * inv).mod_floor(&modulus);
    PlaceCond::Fixed { residue, modulus }
}

fn crt_pair(r1: &Int, m1: &Int, r2: &Int, m2: &Int) -> (Int, Int) {
    let inv = mod_inverse(m1, m2).expect("moduli are powers of distinct primes");
    let k = ((r2 - r1) * inv).mod_floor(m2);
    (r1 + m1 * k, m1 * m2)
}

struct CoordScan {
    lo: Int,
    hi: Int,
    residue: Int,
    modulus: Int,
}

impl CoordScan {
    fn first(&self) -> Option<Int> {
        if self.lo > self.hi {
            return None;
        }
        let rem = (&self.lo - &self.residue).mod_floor(&self.modulus);
        let first = if rem.is_zero() {
            self.lo.clone()
        } else {
            &self.lo + (&self.modulus - rem)
        };
        (first <= self.hi).then_some(first)
    }

    fn count(&self) -> u128 {
        match self.first() {
            None => 0,
            Some(first) => ((&self.hi - first) / &self.modulus)
                .to_u128()
                .unwrap_or(u128::MAX)
                .saturating_add(1),
        }
    }
}

fn scan_coords(coords: &[CoordScan], cur: &mut Vec<Int>, f: &mut dyn FnMut(&[Int])) {
    match coords.split_first() {
        None => f(cur),
        Some((c, rest)) => {
            let Some(mut v) = c.first() else { return };
            while v <= c.hi {
                cur.push(v.clone());
                scan_coords(rest, cur, f);
                cur.pop();
                v += &c.modulus;
            }
        }
    }
}

struct BallConstraints {
    /// (place index, prime, snapped exponent m) per finite place
    finite: Vec<(usize, u64, i64)>,
    /// index of the real place, when present
    real: Option<usize>,
}

fn ball_constraints(ball: &SBall) -> BallConstraints {
    let mut finite = Vec::new();
    let mut real = None;
    for (idx, pl) in ball.places().places().iter().enumerate() {
        match pl {
            Place::Finite(p) => {
                let m = -as_power_of(ball.radius_at(idx), *p)
                    .expect("finite radii are snapped powers");
                finite.push((idx, *p, m));
            }
            Place::Infinity => real = Some(idx),
        }
    }
    BallConstraints { finite, real }
}

fn check_setup(ball: &SBall, window: &HeightWindow, s: &PlaceSet) -> Result<()> {
    if ball.places() != s {
        return Err(Error::Domain(format!(
            "ball is over {} but enumeration was asked over {}",
            ball.places(),
            s
        )));
    }
    if window.mode != s.mode() {
        return Err(Error::Domain(format!(
            "window mode {} does not match place set {}",
            window.mode, s
        )));
    }
    Ok(())
}

fn q0_range(window: &HeightWindow) -> (Int, Int) {
    match window.mode {
        Mode::AllFinite => (Int::one(), window.hi()),
        Mode::WithInfinity => (window.lo(), window.hi()),
    }
}

/// Integer range for one coordinate implied by the real ball factor:
/// q0*(c - r) < q_i < q0*(c + r) for positive q0.
fn real_coord_range(center: &Rational, radius: &Rational, q0: &Int) -> (Int, Int) {
    let scale = Rational::from_integer(q0.clone());
    let lo = (&scale * (center - radius)).floor().to_integer();
    let hi = (&scale * (center + radius)).ceil().to_integer();
    (lo, hi)
}

fn coord_scans(
    ball: &SBall,
    cons: &BallConstraints,
    window: &HeightWindow,
    q0: &Int,
) -> Option<Vec<CoordScan>> {
    let d = ball.d();
    let mut scans = Vec::with_capacity(d);
    for i in 0..d {
        let (mut residue, mut modulus) = (Int::zero(), Int::one());
        for &(idx, p, m) in &cons.finite {
            match place_condition(&ball.center_at(idx)[i], p, m, q0) {
                PlaceCond::Free => {}
                PlaceCond::Empty => return None,
                PlaceCond::Fixed {
                    residue: r,
                    modulus: pm,
                } => {
                    let (nr, nm) = crt_pair(&residue, &modulus, &r, &pm);
                    residue = nr.mod_floor(&nm);
                    modulus = nm;
                }
            }
        }
        let (lo, hi) = match cons.real {
            Some(idx) => real_coord_range(&ball.center_at(idx)[i], ball.nominal_radius(), q0),
            None => (-window.hi(), window.hi()),
        };
        scans.push(CoordScan {
            lo,
            hi,
            residue,
            modulus,
        });
    }
    Some(scans)
}

fn accept_pair(
    ball: &SBall,
    window: &HeightWindow,
    q: &[Int],
    q0: &Int,
) -> Result<Option<EnumeratedPair>> {
    let pair = Approximant::new(q.to_vec(), q0.clone());
    if !window.contains_closed(&pair) {
        return Ok(None);
    }
    let point = pair.point()?;
    let mut inside = true;
    for (idx, pl) in ball.places().places().iter().enumerate() {
        let c = ball.center_at(idx);
        let diff: Vec<Rational> = point.iter().zip(c).map(|(a, b)| a - b).collect();
        let dist = sup_abs(&diff, *pl)?;
        inside &= match pl {
            Place::Finite(_) => dist <= *ball.radius_at(idx),
            Place::Infinity => dist < *ball.radius_at(idx),
        };
        if !inside {
            break;
        }
    }
    Ok(inside.then_some(EnumeratedPair { pair, point }))
}

fn int_iter(lo: &Int, hi: &Int) -> Vec<Int> {
    let mut v = Vec::new();
    let mut x = lo.clone();
    while &x <= hi {
        v.push(x.clone());
        x += 1;
    }
    v
}

/// Every pair (q, q0) with q0 > 0 whose height gauge lies in the closed
/// window and whose point q/q0 lies in the ball. Finite-place membership
/// is folded into congruences on q before any candidate is visited; every
/// surviving candidate is then re-checked exactly.
pub fn enumerate_rationals(
    ball: &SBall,
    window: &HeightWindow,
    s: &PlaceSet,
) -> Result<Vec<EnumeratedPair>> {
    check_setup(ball, window, s)?;
    let cons = ball_constraints(ball);
    let (q0_lo, q0_hi) = q0_range(window);
    let denominators = int_iter(&q0_lo, &q0_hi);

    let mut candidates: u128 = 0;
    for q0 in &denominators {
        if let Some(scans) = coord_scans(ball, &cons, window, q0) {
            let mut per_q0: u128 = 1;
            for sc in &scans {
                per_q0 = per_q0.saturating_mul(sc.count());
            }
            candidates = candidates.saturating_add(per_q0);
        }
    }
    if candidates > ENUMERATION_GUARD {
        return Err(Error::SearchTooLarge {
            candidates,
            guard: ENUMERATION_GUARD,
        });
    }

    let shards: Vec<Vec<EnumeratedPair>> = denominators
        .par_iter()
        .map(|q0| -> Result<Vec<EnumeratedPair>> {
            let Some(scans) = coord_scans(ball, &cons, window, q0) else {
                return Ok(Vec::new());
            };
            let mut found = Vec::new();
            let mut err = None;
            scan_coords(&scans, &mut Vec::new(), &mut |q| {
                if err.is_some() {
                    return;
                }
                match accept_pair(ball, window, q, q0) {
                    Ok(Some(e)) => found.push(e),
                    Ok(None) => {}
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(found),
            }
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<EnumeratedPair> = shards.into_iter().flatten().collect();
    canonical_sort(&mut out);
    Ok(out)
}

/// Full-scan reference enumeration: identical contract, no pruning. The
/// candidate box is every q0 in the window range and every q in the
/// height box (all-finite) or the real-ball box (with the real place).
pub fn enumerate_rationals_naive(
    ball: &SBall,
    window: &HeightWindow,
    s: &PlaceSet,
) -> Result<Vec<EnumeratedPair>> {
    check_setup(ball, window, s)?;
    let cons = ball_constraints(ball);
    let (q0_lo, q0_hi) = q0_range(window);
    let denominators = int_iter(&q0_lo, &q0_hi);
    let d = ball.d();

    let ranges_for = |q0: &Int| -> Vec<(Int, Int)> {
        (0..d)
            .map(|i| match cons.real {
                Some(idx) => real_coord_range(&ball.center_at(idx)[i], ball.nominal_radius(), q0),
                None => (-window.hi(), window.hi()),
            })
            .collect()
    };

    let mut candidates: u128 = 0;
    for q0 in &denominators {
        let mut per_q0: u128 = 1;
        for (lo, hi) in ranges_for(q0) {
            let width = (&hi - &lo + 1u32).to_u128().unwrap_or(u128::MAX);
            per_q0 = per_q0.saturating_mul(width);
        }
        candidates = candidates.saturating_add(per_q0);
    }
    if candidates > ENUMERATION_GUARD {
        return Err(Error::SearchTooLarge {
            candidates,
            guard: ENUMERATION_GUARD,
        });
    }

    let shards: Vec<Vec<EnumeratedPair>> = denominators
        .par_iter()
        .map(|q0| -> Result<Vec<EnumeratedPair>> {
            let scans: Vec<CoordScan> = ranges_for(q0)
                .into_iter()
                .map(|(lo, hi)| CoordScan {
                    lo,
                    hi,
                    residue: Int::zero(),
                    modulus: Int::one(),
                })
                .collect();
            let mut found = Vec::new();
            let mut err = None;
            scan_coords(&scans, &mut Vec::new(), &mut |q| {
                if err.is_some() {
                    return;
                }
                match accept_pair(ball, window, q, q0) {
                    Ok(Some(e)) => found.push(e),
                    Ok(None) => {}
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(found),
            }
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<EnumeratedPair> = shards.into_iter().flatten().collect();
    canonical_sort(&mut out);
    Ok(out)
}

/// Outcome of the one-hyperplane check on a ball.
#[derive(Clone, Debug)]
pub enum SimplexOutcome {
    /// every enumerated point lies on one rational hyperplane; None when
    /// the ball holds no points at all
    Pass(Option<Hyperplane>),
    /// d+1 affinely independent points witnessing a full-dimensional
    /// configuration
    Fail(Vec<Vec<Rational>>),
}

#[derive(Clone, Debug)]
pub struct SimplexVerdict {
    /// raw (q, q0) pairs enumerated
    pub pairs: usize,
    /// distinct rational points among them
    pub distinct_points: usize,
    pub outcome: SimplexOutcome,
}

impl SimplexVerdict {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, SimplexOutcome::Pass(_))
    }
}

fn pivot_col(row: &[Rational]) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("nonzero row")
}

/// Greedy extraction of d+1 affinely independent points, assuming the
/// whole set spans.
fn independent_subset(points: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    let p0 = &points[0];
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut cert = vec![p0.clone()];
    for p in &points[1..] {
        if basis.len() == d {
            break;
        }
        let mut v: Vec<Rational> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
        for row in &basis {
            let pc = pivot_col(row);
            if !v[pc].is_zero() {
                let f = &v[pc] / &row[pc];
                for j in 0..v.len() {
                    let delta = &f * &row[j];
                    v[j] -= delta;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            cert.push(p.clone());
            basis.push(v);
        }
    }
    cert
}

/// Check that all rational points of the window inside the ball lie on a
/// single rational hyperplane.
pub fn verify_simplex_lemma(
    ball: &SBall,
    window: &HeightWindow,
    s: &PlaceSet,
) -> Result<SimplexVerdict> {
    let pairs = enumerate_rationals(ball, window, s)?;
    let set: BTreeSet<Vec<Rational>> = pairs.iter().map(|e| e.point.clone()).collect();
    let points: Vec<Vec<Rational>> = set.into_iter().collect();
    let outcome = if points.is_empty() {
        SimplexOutcome::Pass(None)
    } else {
        match affine_hull_hyperplane(&points)? {
            Some(h) => SimplexOutcome::Pass(Some(h)),
            None => SimplexOutcome::Fail(independent_subset(&points, ball.d())),
        }
    };
    Ok(SimplexVerdict {
        pairs: pairs.len(),
        distinct_points: points.len(),
        outcome,
    })
}

/// An integer pair certifying an approximation inequality. `lhs` and
/// `rhs` are the two sides of the comparison exactly as the producing
/// search evaluated them (the Dirichlet searches raise both sides to the
/// d-th power so fractional exponents stay rational).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub q: Vec<Int>,
    pub q0: Int,
    /// height window level of the pair
    pub level: u32,
    pub lhs: Rational,
    pub rhs: Rational,
    /// digit depth that decided the comparison, for sampled centers
    pub precision: Option<usize>,
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": self.q.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "q0": self.q0.to_string(),
            "n": self.level,
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
        })
    }
}

/// One JSON object per witness, newline separated.
pub fn witness_json_lines(witnesses: &[Witness]) -> String {
    let mut out = String::new();
    for w in witnesses {
        out.push_str(&w.to_json().to_string());
        out.push('\n');
    }
    out
}

/// Exponent convention for the real-place Dirichlet bound; the all-finite
/// bound is always height^-(1+1/d).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirichletExponent {
    /// bound |q0|^(-1/d)
    Denominator,
    /// bound |q0|^(-(1+1/d)), the classical simultaneous exponent
    Classical,
}

fn magnitude_order(h: i64) -> Vec<i64> {
    let mut v = Vec::with_capacity(2 * h as usize + 1);
    v.push(0);
    for a in 1..=h {
        v.push(a);
        v.push(-a);
    }
    v
}

/// Visit q vectors over the box [-h, h]^d in per-coordinate magnitude
/// order (0, 1, -1, 2, -2, ...). With `boundary`, restrict to vectors
/// with sup norm exactly h, preserving the induced order. Returns true
/// when the callback stopped the scan.
fn scan_q(
    seq: &[i64],
    d: usize,
    h: i64,
    boundary: bool,
    cur: &mut Vec<i64>,
    f: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    if cur.len() == d {
        return f(cur);
    }
    let last = cur.len() + 1 == d;
    if boundary && last && !cur.iter().any(|&a| a.abs() == h) {
        for v in [h, -h] {
            cur.push(v);
            let stop = scan_q(seq, d, h, boundary, cur, f);
            cur.pop();
            if stop {
                return true;
            }
        }
        return false;
    }
    for &v in seq {
        cur.push(v);
        let stop = scan_q(seq, d, h, boundary, cur, f);
        cur.pop();
        if stop {
            return true;
        }
    }
    false
}

fn check_unit_ball(x: &[Rational], s: &PlaceSet) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    if snorm(x, s)? > Rational::one() {
        return Err(Error::Domain(format!(
            "point must lie in the unit ball over {s}"
        )));
    }
    Ok(())
}

fn dirichlet_rhs(
    mode: Mode,
    exponent: DirichletExponent,
    d: usize,
    height: i64,
    q0: i64,
) -> Rational {
    let e = match (mode, exponent) {
        (Mode::AllFinite, _) => -(d as i64 + 1),
        (Mode::WithInfinity, DirichletExponent::Denominator) => -1,
        (Mode::WithInfinity, DirichletExponent::Classical) => -(d as i64 + 1),
    };
    let base = match mode {
        Mode::AllFinite => height,
        Mode::WithInfinity => q0,
    };
    rat_pow(&Rational::from_integer(Int::from(base)), e)
}

fn dirichlet_lhs(x: &[Rational], q: &[i64], q0: i64, s: &PlaceSet) -> Result<Rational> {
    let y: Vec<Rational> = x
        .iter()
        .zip(q)
        .map(|(xi, &qi)| xi * Rational::from_integer(Int::from(q0)) + Rational::from_integer(Int::from(qi)))
        .collect();
    let ld = (s.len() * x.len()) as i64;
    Ok(rat_pow(&snorm(&y, s)?, ld))
}

fn dirichlet_scan(
    x: &[Rational],
    t: u64,
    s: &PlaceSet,
    rhs_for: &dyn Fn(i64, i64) -> Rational,
    strict: bool,
) -> Result<Option<Witness>> {
    check_unit_ball(x, s)?;
    if t == 0 {
        return Err(Error::Domain("height bound must be at least 1".into()));
    }
    let d = x.len();
    let mode = s.mode();
    for h in 1..=t as i64 {
        let seq = magnitude_order(h);
        for q0 in 1..=h {
            // pairs of height exactly h: either q0 = h, or the numerator
            // vector must reach the boundary
            let boundary = q0 < h;
            let rhs = rhs_for(h, q0);
            let mut hit: Option<(Vec<i64>, Rational, Rational)> = None;
            let mut err = None;
            scan_q(&seq, d, h, boundary, &mut Vec::new(), &mut |q| {
                match dirichlet_lhs(x, q, q0, s) {
                    Ok(lhs) => {
                        let ok = if strict { lhs < rhs } else { lhs <= rhs };
                        if ok {
                            hit = Some((q.to_vec(), lhs, rhs.clone()));
                            true
                        } else {
                            false
                        }
                    }
                    Err(e) => {
                        err = Some(e);
                        true
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            if let Some((q, lhs, rhs)) = hit {
                let gauge = match mode {
                    Mode::AllFinite => h,
                    Mode::WithInfinity => q0,
                };
                return Ok(Some(Witness {
                    q: q.into_iter().map(Int::from).collect(),
                    q0: Int::from(q0),
                    level: gauge.ilog2(),
                    lhs,
                    rhs,
                    precision: None,
                }));
            }
        }
    }
    Ok(None)
}

/// First pair q with 1 <= q0 and height at most T satisfying the
/// approximation inequality at the pair's own height, in increasing
/// height order. Both sides are d-th powers.
pub fn dirichlet_witness(
    x: &[Rational],
    t: u64,
    s: &PlaceSet,
    exponent: DirichletExponent,
) -> Result<Option<Witness>> {
    let d = x.len();
    let mode = s.mode();
    dirichlet_scan(
        x,
        t,
        s,
        &|h, q0| dirichlet_rhs(mode, exponent, d, h, q0),
        false,
    )
}

/// Uniform variant: the bound is taken at T rather than at the pair's own
/// height, and the inequality is strict.
pub fn dirichlet_uniform_witness(
    x: &[Rational],
    t: u64,
    s: &PlaceSet,
    exponent: DirichletExponent,
) -> Result<Option<Witness>> {
    let d = x.len();
    let mode = s.mode();
    let rhs = dirichlet_rhs(mode, exponent, d, t as i64, t as i64);
    dirichlet_scan(x, t, s, &move |_, _| rhs.clone(), true)
}

/// Target of a psi-witness search: an explicit rational point, or a
/// sampled digit point refined on demand.
#[derive(Clone, Debug)]
pub enum TargetPoint {
    Rational(Vec<Rational>),
    Digit(DigitPoint),
}

impl TargetPoint {
    pub fn d(&self) -> usize {
        match self {
            TargetPoint::Rational(v) => v.len(),
            TargetPoint::Digit(p) => p.measure().d(),
        }
    }
}

/// Closed bounds on the S-norm of x + a at digit truncation depth k,
/// where a is a rational vector and x is a sampled point.
fn snorm_interval(
    point: &DigitPoint,
    s: &PlaceSet,
    approx: &[Rational],
    depth: usize,
) -> Result<(Rational, Rational)> {
    let mut lo_max = Rational::zero();
    let mut hi_max = Rational::zero();
    for (idx, pl) in s.places().iter().enumerate() {
        let t = point.truncated_at(idx, depth);
        let base = point.measure().components()[idx].base();
        let tol = prime_power(base, -(depth as i64));
        let mut lo_sup = Rational::zero();
        let mut hi_sup = Rational::zero();
        for (ti, ai) in t.iter().zip(approx) {
            let (lo, hi) = match pl {
                Place::Finite(_) => {
                    let w = ti + ai;
                    let a = sup_abs(std::slice::from_ref(&w), *pl)?;
                    if a > tol {
                        (a.clone(), a)
                    } else {
                        (Rational::zero(), tol.clone())
                    }
                }
                Place::Infinity => {
                    let lo_y = ti + ai;
                    let hi_y = &lo_y + &tol;
                    if !lo_y.is_negative() {
                        (lo_y, hi_y)
                    } else if !hi_y.is_positive() {
                        (-hi_y, -lo_y)
                    } else {
                        (Rational::zero(), (-lo_y).max(hi_y))
                    }
                }
            };
            if lo > lo_sup {
                lo_sup = lo;
            }
            if hi > hi_sup {
                hi_sup = hi;
            }
        }
        if lo_sup > lo_max {
            lo_max = lo_sup;
        }
        if hi_sup > hi_max {
            hi_max = hi_sup;
        }
    }
    Ok((lo_max, hi_max))
}

enum PsiDecision {
    Accept { lhs: Rational, precision: Option<usize> },
    Reject,
}

fn psi_compare(
    x: &TargetPoint,
    s: &PlaceSet,
    q: &[Int],
    q0: &Int,
    rhs: &Rational,
    l: i64,
    precision_cap: usize,
) -> Result<PsiDecision> {
    let approx: Vec<Rational> = q
        .iter()
        .map(|qi| Rational::new(qi.clone(), q0.clone()))
        .collect();
    match x {
        TargetPoint::Rational(v) => {
            let y: Vec<Rational> = v.iter().zip(&approx).map(|(a, b)| a + b).collect();
            let lhs = rat_pow(&snorm(&y, s)?, l);
            if lhs <= *rhs {
                Ok(PsiDecision::Accept {
                    lhs,
                    precision: None,
                })
            } else {
                Ok(PsiDecision::Reject)
            }
        }
        TargetPoint::Digit(p) => {
            let mut depth = 16usize.min(precision_cap.max(1));
            loop {
                let (lo, hi) = snorm_interval(p, s, &approx, depth)?;
                let lhs_hi = rat_pow(&hi, l);
                if lhs_hi <= *rhs {
                    return Ok(PsiDecision::Accept {
                        lhs: lhs_hi,
                        precision: Some(depth),
                    });
                }
                if rat_pow(&lo, l) > *rhs {
                    return Ok(PsiDecision::Reject);
                }
                if depth == precision_cap {
                    return Err(Error::PrecisionExhausted(precision_cap));
                }
                depth = (depth * 2).min(precision_cap);
            }
        }
    }
}

/// All pairs (q, q0) with q0 in the level-n window (and, over all-finite
/// sets, height gauge in the window) whose point -q/q0 approximates x
/// within psi of the gauge: ||x + q/q0||_S^l <= psi(gauge). Pairs with
/// negative q0 are omitted as exact mirrors.
pub fn psi_witnesses(
    x: &TargetPoint,
    psi: &(dyn Fn(&Int) -> Rational + Sync),
    n: u32,
    s: &PlaceSet,
    precision_cap: usize,
) -> Result<Vec<Witness>> {
    let d = x.d();
    if d == 0 {
        return Err(Error::EmptyVector);
    }
    if let TargetPoint::Digit(p) = x {
        if p.measure().place_set() != *s {
            return Err(Error::Domain(format!(
                "sampled point lives over {} but the search is over {}",
                p.measure().place_set(),
                s
            )));
        }
    }
    let window = HeightWindow::for_set(n, s);
    let l = s.len() as i64;
    let (q0_lo, q0_hi) = q0_range(&window);
    let denominators = int_iter(&q0_lo, &q0_hi);

    // conservative per-q0 coordinate ranges; every emitted witness is a
    // consequence of the exact comparison, the range only has to cover
    let ranges_for = |q0: &Int| -> Vec<(Int, Int)> {
        match window.mode {
            Mode::AllFinite => (0..d).map(|_| (-window.hi(), window.hi())).collect(),
            Mode::WithInfinity => {
                let rhs = psi(q0);
                let slack = Rational::one().max(rhs);
                (0..d)
                    .map(|i| {
                        let xi_bound = match x {
                            TargetPoint::Rational(v) => v[i].abs(),
                            TargetPoint::Digit(_) => Rational::one(),
                        };
                        let reach = Rational::from_integer(q0.clone()) * (xi_bound + &slack);
                        let r = reach.ceil().to_integer() + 1u32;
                        (-r.clone(), r)
                    })
                    .collect()
            }
        }
    };

    let mut candidates: u128 = 0;
    for q0 in &denominators {
        let mut per_q0: u128 = 1;
        for (lo, hi) in ranges_for(q0) {
            let width = (&hi - &lo + 1u32).to_u128().unwrap_or(u128::MAX);
            per_q0 = per_q0.saturating_mul(width);
        }
        candidates = candidates.saturating_add(per_q0);
    }
    if candidates > ENUMERATION_GUARD {
        return Err(Error::SearchTooLarge {
            candidates,
            guard: ENUMERATION_GUARD,
        });
    }

    let shards: Vec<Vec<Witness>> = denominators
        .par_iter()
        .map(|q0| -> Result<Vec<Witness>> {
            let scans: Vec<CoordScan> = ranges_for(q0)
                .into_iter()
                .map(|(lo, hi)| CoordScan {
                    lo,
                    hi,
                    residue: Int::zero(),
                    modulus: Int::one(),
                })
                .collect();
            let mut found = Vec::new();
            let mut err = None;
            scan_coords(&scans, &mut Vec::new(), &mut |q| {
                if err.is_some() {
                    return;
                }
                let pair = Approximant::new(q.to_vec(), q0.clone());
                if !window.contains_closed(&pair) {
                    return;
                }
                let gauge = match window.mode {
                    Mode::AllFinite => pair.height(),
                    Mode::WithInfinity => q0.clone(),
                };
                let rhs = psi(&gauge);
                match psi_compare(x, s, q, q0, &rhs, l, precision_cap) {
                    Ok(PsiDecision::Accept { lhs, precision }) => found.push(Witness {
                        q: q.to_vec(),
                        q0: q0.clone(),
                        level: n,
                        lhs,
                        rhs,
                        precision,
                    }),
                    Ok(PsiDecision::Reject) => {}
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(found),
            }
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<Witness> = shards.into_iter().flatten().collect();
    out.sort_by(|a, b| a.q0.cmp(&b.q0).then_with(|| a.q.cmp(&b.q)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;
    use crate::measures::DigitMeasure;
    use std::sync::Arc;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn set(s: &str) -> PlaceSet {
        s.parse().unwrap()
    }

    fn diag_ball(center: &[&str], radius: &str, s: &PlaceSet) -> SBall {
        let c = center.iter().map(|x| rat(x)).collect();
        SBall::new(BallCenter::Diagonal(c), rat(radius), s).unwrap()
    }

    #[test]
    fn schedule_examples() {
        let r = radius_schedule(1, 1, 1).unwrap();
        assert_eq!(r.value, rat("1/768"));
        assert!(!r.rounded_down);
        let r = radius_schedule(0, 2, 1).unwrap();
        assert_eq!(r.value, rat("1/96"));
        assert!(r.rounded_down);
        let r = radius_schedule(2, 1, 2).unwrap();
        assert_eq!(r.value, rat("1/192"));
        assert!(r.rounded_down);
        assert!(radius_schedule(0, 0, 1).is_err());
    }

    #[test]
    fn snap_examples() {
        assert_eq!(snap_radius(&rat("1/768"), 3).unwrap(), rat("1/2187"));
        assert_eq!(snap_radius(&rat("1"), 5).unwrap(), rat("1"));
        assert_eq!(snap_radius(&rat("1/4"), 2).unwrap(), rat("1/4"));
        assert!(snap_radius(&rat("0"), 3).is_err());
        assert!(snap_radius(&rat("1/2"), 4).is_err());
    }

    #[test]
    fn ball_membership() {
        let s = set("3");
        let ball = diag_ball(&["0"], "1/9", &s);
        assert!(in_ball(&[rat("9")], &ball, &s).unwrap());
        assert!(!in_ball(&[rat("1/3")], &ball, &s).unwrap());
        assert!(in_ball(&[rat("0")], &ball, &s).unwrap());
        // the real factor is open
        let s = set("inf");
        let ball = diag_ball(&["0"], "1/2", &s);
        assert!(in_ball(&[rat("1/4")], &ball, &s).unwrap());
        assert!(!in_ball(&[rat("1/2")], &ball, &s).unwrap());
    }

    #[test]
    fn snapped_radii_per_place() {
        let s = set("2,3");
        let ball = diag_ball(&["0"], "1/10", &s);
        assert_eq!(*ball.radius_at(0), rat("1/16"));
        assert_eq!(*ball.radius_at(1), rat("1/27"));
        assert_eq!(*ball.nominal_radius(), rat("1/10"));
    }

    #[test]
    fn cover_full_zp() {
        let k = ProductMeasure::new(vec![DigitMeasure::full(Place::Finite(3), 3, 1).unwrap()])
            .unwrap();
        let balls = cover_compact_with_radius(&k, &rat("1/9")).unwrap();
        assert_eq!(balls.len(), 9);
        let centers: Vec<Rational> = balls.iter().map(|b| b.center_at(0)[0].clone()).collect();
        let expect: Vec<Rational> = (0..9).map(|i| Rational::from_integer(Int::from(i))).collect();
        assert_eq!(centers, expect);
    }

    #[test]
    fn cover_missing_digit_set() {
        let k = ProductMeasure::new(vec![
            DigitMeasure::uniform(Place::Finite(3), 3, 1, &[0, 2]).unwrap()
        ])
        .unwrap();
        let balls = cover_compact_with_radius(&k, &rat("1/9")).unwrap();
        let centers: Vec<Rational> = balls.iter().map(|b| b.center_at(0)[0].clone()).collect();
        assert_eq!(centers, vec![rat("0"), rat("2"), rat("6"), rat("8")]);
    }

    #[test]
    fn cover_unit_interval() {
        let k = ProductMeasure::new(vec![DigitMeasure::full(Place::Infinity, 2, 1).unwrap()])
            .unwrap();
        for (r, expect) in [("1/4", 2usize), ("1/8", 4), ("1/3", 2)] {
            let balls = cover_compact_with_radius(&k, &rat(r)).unwrap();
            assert_eq!(balls.len(), expect, "radius {r}");
            // disjoint: gaps of at least 2r
            for pair in balls.windows(2) {
                let gap = &pair[1].center_at(0)[0] - &pair[0].center_at(0)[0];
                assert!(gap >= rat(r) * rat("2"));
            }
            // tripled balls cover [0, 1)
            let r3 = rat(r) * rat("3");
            for probe in 0..20 {
                let x = Rational::new(Int::from(probe), Int::from(20));
                assert!(
                    balls
                        .iter()
                        .any(|b| (&x - &b.center_at(0)[0]).abs() < r3),
                    "x = {x} uncovered at radius {r}"
                );
            }
        }
    }

    #[test]
    fn cover_at_schedule_partitions() {
        let k = ProductMeasure::new(vec![DigitMeasure::full(Place::Finite(3), 3, 1).unwrap()])
            .unwrap();
        let balls = cover_compact(&k, 0).unwrap();
        // schedule n=0, d=1, l=1 gives 1/192, which snaps to 3^-5
        assert_eq!(balls.len(), 243);
        let mut mass = Rational::zero();
        for b in &balls {
            mass += crate::measures::cylinder_measure(
                k.components().first().unwrap(),
                b.center_at(0),
                b.radius_at(0),
            )
            .unwrap();
        }
        assert!(mass.is_one());
    }

    #[test]
    fn enumerate_single_point_ball() {
        let s = set("3");
        let ball = diag_ball(&["0"], "1/9", &s);
        let window = HeightWindow::for_set(2, &s);
        let got = enumerate_rationals(&ball, &window, &s).unwrap();
        let pairs: Vec<(i64, i64)> = got
            .iter()
            .map(|e| {
                (
                    e.pair.q[0].to_i64().unwrap(),
                    e.pair.q0.to_i64().unwrap(),
                )
            })
            .collect();
        assert_eq!(pairs, vec![(0, 4), (0, 5), (0, 6), (0, 7), (0, 8)]);
        assert!(got.iter().all(|e| e.point == vec![rat("0")]));
    }

    #[test]
    fn enumerate_unit_radius() {
        let s = set("3");
        let ball = diag_ball(&["0"], "1", &s);
        let window = HeightWindow::for_set(0, &s);
        let got = enumerate_rationals(&ball, &window, &s).unwrap();
        // every (q, q0) with q in [-2,2], q0 in {1,2}: all 3-adic integers
        assert_eq!(got.len(), 10);
    }

    #[test]
    fn enumerate_empty() {
        let s = set("3");
        let ball = diag_ball(&["5"], "1/27", &s);
        let window = HeightWindow::for_set(0, &s);
        assert!(enumerate_rationals(&ball, &window, &s).unwrap().is_empty());
    }

    #[test]
    fn pruned_matches_naive() {
        let s = set("3");
        for (center, radius, n) in [("0", "1/9", 2u32), ("5", "1/27", 2), ("1/2", "1/3", 1)] {
            let ball = diag_ball(&[center], radius, &s);
            let window = HeightWindow::for_set(n, &s);
            let a = enumerate_rationals(&ball, &window, &s).unwrap();
            let b = enumerate_rationals_naive(&ball, &window, &s).unwrap();
            assert_eq!(a, b, "center {center} radius {radius} n {n}");
        }
        let s = set("2,3");
        let ball = diag_ball(&["1/5", "3"], "1/6", &s);
        let window = HeightWindow::for_set(2, &s);
        assert_eq!(
            enumerate_rationals(&ball, &window, &s).unwrap(),
            enumerate_rationals_naive(&ball, &window, &s).unwrap()
        );
    }

    #[test]
    fn pruned_matches_naive_with_infinity() {
        let s = set("2,inf");
        let ball = diag_ball(&["1/3"], "1/4", &s);
        let window = HeightWindow::for_set(2, &s);
        let a = enumerate_rationals(&ball, &window, &s).unwrap();
        let b = enumerate_rationals_naive(&ball, &window, &s).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|e| {
            let q0 = e.pair.q0.to_i64().unwrap();
            (4..=8).contains(&q0)
        }));
    }

    #[test]
    fn simplex_pass_single_point() {
        let s = set("3");
        let ball = diag_ball(&["0"], "1/9", &s);
        let window = HeightWindow::for_set(2, &s);
        let v = verify_simplex_lemma(&ball, &window, &s).unwrap();
        assert!(v.passed());
        assert_eq!(v.pairs, 5);
        assert_eq!(v.distinct_points, 1);
        match v.outcome {
            SimplexOutcome::Pass(Some(h)) => {
                assert_eq!(h.normal(), &[Int::one()]);
                assert_eq!(*h.offset(), Int::zero());
            }
            _ => panic!("expected a hyperplane"),
        }
    }

    #[test]
    fn simplex_fails_when_radius_ignores_schedule() {
        let s = set("3");
        let ball = diag_ball(&["0"], "1", &s);
        let window = HeightWindow::for_set(0, &s);
        let v = verify_simplex_lemma(&ball, &window, &s).unwrap();
        assert!(!v.passed());
        match v.outcome {
            SimplexOutcome::Fail(cert) => assert_eq!(cert.len(), 2),
            _ => panic!("expected failure"),
        }
    }

    #[test]
    fn simplex_passes_on_scheduled_cover() {
        let s = set("3");
        let k = ProductMeasure::new(vec![DigitMeasure::full(Place::Finite(3), 3, 1).unwrap()])
            .unwrap();
        let window = HeightWindow::for_set(2, &s);
        for ball in cover_compact(&k, 2).unwrap() {
            let v = verify_simplex_lemma(&ball, &window, &s).unwrap();
            assert!(v.passed());
        }
    }

    #[test]
    fn dirichlet_zero_point() {
        let s = set("3");
        let w = dirichlet_witness(&[rat("0")], 1, &s, DirichletExponent::Denominator)
            .unwrap()
            .unwrap();
        assert_eq!(w.q, vec![Int::zero()]);
        assert_eq!(w.q0, Int::one());
        assert!(w.lhs.is_zero());
    }

    #[test]
    fn dirichlet_uniform_real_third() {
        let s = set("inf");
        let w = dirichlet_uniform_witness(&[rat("1/3")], 3, &s, DirichletExponent::Denominator)
            .unwrap()
            .unwrap();
        assert_eq!(w.q0, Int::from(3));
        assert_eq!(w.q, vec![Int::from(-1)]);
        assert!(w.lhs.is_zero());
    }

    #[test]
    fn dirichlet_small_grid() {
        let s = set("3");
        let w = dirichlet_witness(&[rat("1/2")], 4, &s, DirichletExponent::Denominator)
            .unwrap()
            .unwrap();
        assert!(w.lhs <= w.rhs);
        let s = set("2,inf");
        let w = dirichlet_witness(&[rat("1/3")], 16, &s, DirichletExponent::Denominator)
            .unwrap()
            .unwrap();
        assert!(w.lhs <= w.rhs);
    }

    #[test]
    fn dirichlet_rejects_points_outside_unit_ball() {
        let s = set("inf");
        assert!(dirichlet_witness(&[rat("3/2")], 4, &s, DirichletExponent::Denominator).is_err());
    }

    #[test]
    fn psi_witnesses_zero_point() {
        let s = set("3");
        let psi = |h: &Int| rat_pow(&Rational::from_integer(h.clone()), -3);
        let x = TargetPoint::Rational(vec![rat("0")]);
        let got = psi_witnesses(&x, &psi, 0, &s, 64).unwrap();
        assert!(got
            .iter()
            .any(|w| w.q == vec![Int::zero()] && w.q0 == Int::one()));
        for w in &got {
            assert!(w.lhs <= w.rhs);
        }
    }

    #[test]
    fn psi_zero_bound_empty() {
        let s = set("3");
        let psi = |_: &Int| Rational::zero();
        let x = TargetPoint::Rational(vec![rat("1/5")]);
        assert!(psi_witnesses(&x, &psi, 0, &s, 64).unwrap().is_empty());
    }

    #[test]
    fn psi_exact_hit_with_zero_bound() {
        // only exact representations -q/q0 = x survive a zero bound; the
        // window [2, 4] holds the reduced pair and one unreduced copy
        let s = set("3");
        let psi = |_: &Int| Rational::zero();
        let x = TargetPoint::Rational(vec![rat("1/2")]);
        let got = psi_witnesses(&x, &psi, 1, &s, 64).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].q, vec![Int::from(-1)]);
        assert_eq!(got[0].q0, Int::from(2));
        assert_eq!(got[1].q, vec![Int::from(-2)]);
        assert_eq!(got[1].q0, Int::from(4));
    }

    #[test]
    fn psi_digit_target_decides() {
        let m = Arc::new(
            ProductMeasure::new(vec![
                DigitMeasure::uniform(Place::Finite(3), 3, 1, &[0, 2]).unwrap()
            ])
            .unwrap(),
        );
        let pts = ProductMeasure::sample(&m, 5, 1, 32);
        let x = TargetPoint::Digit(pts[0].clone());
        let s = set("3");
        let psi = |h: &Int| rat_pow(&Rational::from_integer(h.clone()), -3);
        let got = psi_witnesses(&x, &psi, 1, &s, 4096).unwrap();
        for w in &got {
            assert!(w.lhs <= w.rhs);
            assert!(w.precision.is_some());
        }
    }

    #[test]
    fn psi_precision_exhausts_on_exact_tie() {
        // the one-point measure at 0 makes x = 0 exactly; bound 0 never
        // separates from the truncation interval
        let m = Arc::new(
            ProductMeasure::new(vec![
                DigitMeasure::uniform(Place::Finite(3), 3, 1, &[0]).unwrap()
            ])
            .unwrap(),
        );
        let pts = ProductMeasure::sample(&m, 1, 1, 32);
        let x = TargetPoint::Digit(pts[0].clone());
        let s = set("3");
        let psi = |_: &Int| Rational::zero();
        match psi_witnesses(&x, &psi, 0, &s, 128) {
            Err(Error::PrecisionExhausted(128)) => {}
            other => panic!("expected precision exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn witness_json_shape() {
        let w = Witness {
            q: vec![Int::from(-1)],
            q0: Int::from(3),
            level: 1,
            lhs: rat("0"),
            rhs: rat("1/3"),
            precision: None,
        };
        let line = witness_json_lines(std::slice::from_ref(&w));
        assert_eq!(
            line,
            "{\"lhs\":\"0\",\"n\":1,\"q\":[\"-1\"],\"q0\":\"3\",\"rhs\":\"1/3\"}\n"
        );
    }

    #[test]
    fn guard_rejects_huge_windows() {
        let s = set("3");
        let ball = diag_ball(&["0"], "1", &s);
        let window = HeightWindow::for_set(16, &s);
        match enumerate_rationals_naive(&ball, &window, &s) {
            Err(Error::SearchTooLarge { .. }) => {}
            other => panic!("expected guard, got {other:?}"),
        }
    }
}
