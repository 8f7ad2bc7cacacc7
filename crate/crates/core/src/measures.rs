//! Digit-restricted self-similar measures on Z_p^d and [0,1)^d.
//!
//! A measure here is a product over coordinates of digit laws: at each level
//! of the base-b expansion an allowed digit is drawn independently with a
//! fixed rational weight. Missing-digit sets (Cantor-type) and the full
//! digit set (Haar / Lebesgue restricted to the unit block) are the two
//! common cases. All ball and cylinder measures evaluate exactly; sampling
//! is counter-based so a point is a pure function of (seed, index).

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{as_power_of, ensure_prime, int_valuation, mod_inverse, rat_pow, snap_to_power};
use crate::lattice::Hyperplane;
use crate::places::{place_abs, Place, PlaceSet};
use crate::{Error, Int, Rational, Result};

/// One place's digit measure: per-coordinate allowed digits with positive
/// rational weights summing to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitMeasure {
    place: Place,
    base: u64,
    d: usize,
    digits: Vec<Vec<u64>>,
    weights: Vec<Vec<Rational>>,
    /// cumulative weight boundaries scaled to 2^64, for sampling
    thresholds: Vec<Vec<u64>>,
}

impl DigitMeasure {
    pub fn new(
        place: Place,
        base: u64,
        d: usize,
        digits: Vec<Vec<u64>>,
        weights: Option<Vec<Vec<Rational>>>,
    ) -> Result<Self> {
        if base < 2 {
            return Err(Error::Domain(format!("digit base {base} must be >= 2")));
        }
        if let Place::Finite(p) = place {
            ensure_prime(p)?;
            if p != base {
                return Err(Error::Domain(format!(
                    "base {base} must equal the prime {p} of the place"
                )));
            }
        }
        if d == 0 || digits.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d.max(1),
                got: digits.len(),
            });
        }
        let mut digits = digits;
        for set in &mut digits {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::Domain("empty digit set".into()));
            }
            if set.iter().any(|&a| a >= base) {
                return Err(Error::Domain(format!(
                    "digit out of range for base {base}"
                )));
            }
        }
        let weights = match weights {
            Some(w) => {
                if w.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: w.len(),
                    });
                }
                for (set, ws) in digits.iter().zip(&w) {
                    if ws.len() != set.len() {
                        return Err(Error::Domain(
                            "weight vector length must match the digit set".into(),
                        ));
                    }
                    if ws.iter().any(|x| !x.is_positive()) {
                        return Err(Error::Domain("weights must be positive".into()));
                    }
                    let total: Rational = ws.iter().sum();
                    if !total.is_one() {
                        return Err(Error::Domain(format!(
                            "weights sum to {total}, expected 1"
                        )));
                    }
                }
                w
            }
            None => digits
                .iter()
                .map(|set| {
                    let w = Rational::new(Int::one(), Int::from(set.len() as u64));
                    vec![w; set.len()]
                })
                .collect(),
        };
        let thresholds = weights
            .iter()
            .map(|ws| {
                let mut cum = Rational::zero();
                ws[..ws.len() - 1]
                    .iter()
                    .map(|w| {
                        cum += w;
                        let scaled = (cum.numer() << 64u32) / cum.denom();
                        scaled.to_u64().expect("partial sum below 1 fits in u64")
                    })
                    .collect()
            })
            .collect();
        Ok(DigitMeasure {
            place,
            base,
            d,
            digits,
            weights,
            thresholds,
        })
    }

    /// Uniform weights over one digit set shared by all coordinates.
    pub fn uniform(place: Place, base: u64, d: usize, allowed: &[u64]) -> Result<Self> {
        DigitMeasure::new(place, base, d, vec![allowed.to_vec(); d], None)
    }

    /// The full digit set with uniform weights: Haar measure on Z_p^d, or
    /// Lebesgue measure on [0,1)^d.
    pub fn full(place: Place, base: u64, d: usize) -> Result<Self> {
        DigitMeasure::uniform(place, base, d, &(0..base).collect::<Vec<_>>())
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn digits(&self, coord: usize) -> &[u64] {
        &self.digits[coord]
    }

    pub fn weight(&self, coord: usize, digit: u64) -> Option<&Rational> {
        let idx = self.digits[coord].binary_search(&digit).ok()?;
        Some(&self.weights[coord][idx])
    }

    /// Total weight of allowed digits strictly below `digit`.
    pub fn weight_below(&self, coord: usize, digit: u64) -> Rational {
        self.digits[coord]
            .iter()
            .zip(&self.weights[coord])
            .filter(|(a, _)| **a < digit)
            .map(|(_, w)| w)
            .sum()
    }

    pub fn max_weight(&self, coord: usize) -> &Rational {
        self.weights[coord]
            .iter()
            .max()
            .expect("digit sets are nonempty")
    }

    /// True when some coordinate admits a single digit only; such a
    /// coordinate is deterministic and breaks decay-exponent fits.
    pub fn has_atomic_coordinate(&self) -> bool {
        self.digits.iter().any(|set| set.len() == 1)
    }

    pub fn is_uniform(&self) -> bool {
        self.weights
            .iter()
            .all(|ws| ws.iter().all(|w| w == &ws[0]))
    }

    /// Decay exponent of the worst coordinate: -log(max weight)/log(base).
    /// For uniform weights this is min_i log|digits_i| / log(base).
    pub fn alpha_analytic(&self) -> f64 {
        let worst = (0..self.d)
            .map(|i| self.max_weight(i))
            .max()
            .expect("d >= 1");
        -worst.to_f64().expect("weight fits f64").ln() / (self.base as f64).ln()
    }

    fn sample_digit(&self, coord: usize, u: u64) -> u64 {
        let thr = &self.thresholds[coord];
        for (j, &t) in thr.iter().enumerate() {
            if u < t {
                return self.digits[coord][j];
            }
        }
        self.digits[coord][thr.len()]
    }
}

/// First `depth` base-p digits of a p-integral rational (coefficients of
/// p^0, p^1, ...); None when the denominator is divisible by p.
pub fn padic_prefix(x: &Rational, p: u64, depth: usize) -> Option<Vec<u64>> {
    if int_valuation(x.denom(), p) > 0 {
        return None;
    }
    if depth == 0 {
        return Some(Vec::new());
    }
    let pb = Int::from(p);
    let modulus = num_traits::pow(pb.clone(), depth);
    let inv = mod_inverse(x.denom(), &modulus)?;
    let mut r = (x.numer() * inv).mod_floor(&modulus);
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        let (q, digit) = r.div_rem(&pb);
        out.push(digit.to_u64().expect("digit below base"));
        r = q;
    }
    Some(out)
}

/// First `depth` base-b digits after the point for x in [0,1); None when x
/// is outside the unit interval.
pub fn real_prefix(x: &Rational, base: u64, depth: usize) -> Option<Vec<u64>> {
    if x.is_negative() || *x >= Rational::one() {
        return None;
    }
    let b = Rational::from_integer(Int::from(base));
    let mut cur = x.clone();
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        let scaled = &cur * &b;
        let e = scaled.floor();
        out.push(e.to_integer().to_u64().expect("digit below base"));
        cur = scaled - e;
    }
    Some(out)
}

fn snap_depth(radius: &Rational, base: u64) -> Result<usize> {
    let snapped = snap_to_power(radius, base)?;
    let e = as_power_of(&snapped, base).expect("snap returns a power of the base");
    Ok((-e).max(0) as usize)
}

fn coord_prefix(m: &DigitMeasure, x: &Rational, depth: usize) -> Option<Vec<u64>> {
    match m.place {
        Place::Finite(p) => padic_prefix(x, p, depth),
        Place::Infinity => real_prefix(x, m.base, depth),
    }
}

/// Weight of the depth-k cylinder through one coordinate of a center.
fn coord_cylinder(m: &DigitMeasure, coord: usize, x: &Rational, depth: usize) -> Rational {
    let Some(prefix) = coord_prefix(m, x, depth) else {
        return Rational::zero();
    };
    let mut w = Rational::one();
    for a in prefix {
        match m.weight(coord, a) {
            Some(wa) => w *= wa,
            None => return Rational::zero(),
        }
    }
    w
}

/// Exact measure of the radius-base^{-k} cylinder at a center: the product
/// over coordinates of the weight of the center's length-k digit prefix.
/// The radius must be an exact power of the base.
pub fn cylinder_measure(m: &DigitMeasure, center: &[Rational], radius: &Rational) -> Result<Rational> {
    if center.len() != m.d {
        return Err(Error::DimensionMismatch {
            expected: m.d,
            got: center.len(),
        });
    }
    let e = as_power_of(radius, m.base)
        .ok_or_else(|| Error::UnsnappedRadius(radius.to_string(), m.base))?;
    let depth = (-e).max(0) as usize;
    let mut out = Rational::one();
    for (i, c) in center.iter().enumerate() {
        out *= coord_cylinder(m, i, c, depth);
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// Exact distribution function of one real coordinate: the measure of
/// [0, x). Follows the digit expansion of x, accumulating the weight of
/// allowed digits below each expansion digit; rational remainders repeat,
/// so a cycle gives the tail in closed form.
pub fn real_cdf(m: &DigitMeasure, coord: usize, x: &Rational) -> Result<Rational> {
    if m.place != Place::Infinity {
        return Err(Error::Domain(
            "distribution function applies to the real component".into(),
        ));
    }
    if coord >= m.d {
        return Err(Error::DimensionMismatch {
            expected: m.d,
            got: coord,
        });
    }
    if !x.is_positive() {
        return Ok(Rational::zero());
    }
    if *x >= Rational::one() {
        return Ok(Rational::one());
    }
    let b = Rational::from_integer(Int::from(m.base));
    let mut total = Rational::zero();
    let mut factor = Rational::one();
    let mut cur = x.clone();
    let mut seen: HashMap<Rational, (Rational, Rational)> = HashMap::new();
    loop {
        if let Some((t0, f0)) = seen.get(&cur) {
            if *f0 == factor {
                // a cycle that never passes an allowed digit boundary
                // carries no mass below the point
                total = t0.clone();
            } else {
                let tail = (&total - t0) / (f0 - &factor);
                total = t0 + f0 * tail;
            }
            break;
        }
        seen.insert(cur.clone(), (total.clone(), factor.clone()));
        let scaled = &cur * &b;
        let floor = scaled.floor();
        let digit = floor.to_integer().to_u64().expect("digit below base");
        total += &factor * m.weight_below(coord, digit);
        match m.weight(coord, digit) {
            Some(w) => {
                factor *= w;
                cur = scaled - floor;
            }
            None => break,
        }
        if cur.is_zero() {
            break;
        }
    }
    Ok(total)
}

/// Measure of the interval [lo, hi) under one real coordinate.
pub fn real_interval_measure(
    m: &DigitMeasure,
    coord: usize,
    lo: &Rational,
    hi: &Rational,
) -> Result<Rational> {
    if hi <= lo {
        return Ok(Rational::zero());
    }
    Ok(real_cdf(m, coord, hi)? - real_cdf(m, coord, lo)?)
}

/// Measure of the metric ball at one place: ultrametric balls are
/// cylinders; real balls are coordinate intervals (x_i - r, x_i + r).
pub fn ball_measure_at(m: &DigitMeasure, center: &[Rational], radius: &Rational) -> Result<Rational> {
    if center.len() != m.d {
        return Err(Error::DimensionMismatch {
            expected: m.d,
            got: center.len(),
        });
    }
    match m.place {
        Place::Finite(p) => {
            let snapped = snap_to_power(radius, p)?;
            cylinder_measure(m, center, &snapped)
        }
        Place::Infinity => {
            let mut out = Rational::one();
            for (i, c) in center.iter().enumerate() {
                out *= real_interval_measure(m, i, &(c - radius), &(c + radius))?;
                if out.is_zero() {
                    break;
                }
            }
            Ok(out)
        }
    }
}

/// Product of single-place digit measures over a place set.
#[derive(Clone, Debug)]
pub struct ProductMeasure {
    components: Vec<DigitMeasure>,
}

impl ProductMeasure {
    pub fn new(mut components: Vec<DigitMeasure>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("empty product measure".into()));
        }
        components.sort_by_key(|m| m.place);
        for pair in components.windows(2) {
            if pair[0].place == pair[1].place {
                return Err(Error::Domain(format!(
                    "duplicate component at place {}",
                    pair[0].place
                )));
            }
        }
        let d = components[0].d;
        for m in &components {
            if m.d != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: m.d,
                });
            }
        }
        Ok(ProductMeasure { components })
    }

    pub fn components(&self) -> &[DigitMeasure] {
        &self.components
    }

    pub fn d(&self) -> usize {
        self.components[0].d
    }

    pub fn place_set(&self) -> PlaceSet {
        PlaceSet::new(self.components.iter().map(|m| m.place))
            .expect("components hold validated places")
    }

    pub fn component_for(&self, place: Place) -> Option<(usize, &DigitMeasure)> {
        self.components
            .iter()
            .enumerate()
            .find(|(_, m)| m.place == place)
    }

    pub fn has_atomic_coordinate(&self) -> bool {
        self.components.iter().any(|m| m.has_atomic_coordinate())
    }

    /// i.i.d. sample of `count` points; each point is fully determined by
    /// (seed, index) regardless of batching.
    pub fn sample(measure: &Arc<Self>, seed: u64, count: usize, precision: usize) -> Vec<DigitPoint> {
        (0..count)
            .map(|i| DigitPoint {
                measure: Arc::clone(measure),
                seed,
                index: i as u64,
                precision,
            })
            .collect()
    }
}

/// Measure of the product ball around a rational center: per-place ball
/// measures multiplied across the components.
pub fn ball_measure(m: &ProductMeasure, center: &[Rational], radius: &Rational) -> Result<Rational> {
    let mut out = Rational::one();
    for comp in &m.components {
        out *= ball_measure_at(comp, center, radius)?;
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

const MAX_SAMPLE_DEPTH: u128 = 1 << 16;

/// A sampled point of a product measure, represented by its digit streams.
/// Digits are a pure function of (seed, index, place, coordinate, depth),
/// so precision deepens on demand without mutating state.
#[derive(Clone, Debug)]
pub struct DigitPoint {
    measure: Arc<ProductMeasure>,
    pub seed: u64,
    pub index: u64,
    /// nominal truncation depth used when a single rational stand-in is
    /// needed; individual digit queries may go deeper
    pub precision: usize,
}

impl DigitPoint {
    pub fn measure(&self) -> &Arc<ProductMeasure> {
        &self.measure
    }

    pub fn digit(&self, place_idx: usize, coord: usize, depth: usize) -> u64 {
        let comp = &self.measure.components[place_idx];
        let d = self.measure.d();
        assert!((depth as u128) < MAX_SAMPLE_DEPTH, "digit depth exhausted");
        let flat = (place_idx * d + coord) as u128 * MAX_SAMPLE_DEPTH + depth as u128;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        rng.set_word_pos(flat * 2);
        comp.sample_digit(coord, rng.next_u64())
    }

    pub fn prefix(&self, place_idx: usize, coord: usize, len: usize) -> Vec<u64> {
        (0..len).map(|k| self.digit(place_idx, coord, k)).collect()
    }

    /// Rational truncation of the point's component at one place: the
    /// depth-`depth` partial sum of the digit expansion.
    pub fn truncated_at(&self, place_idx: usize, depth: usize) -> Vec<Rational> {
        let comp = &self.measure.components[place_idx];
        let base = Int::from(comp.base);
        (0..self.measure.d())
            .map(|coord| {
                let digits = self.prefix(place_idx, coord, depth);
                match comp.place {
                    // sum of a_k p^k, an ordinary integer
                    Place::Finite(_) => {
                        let mut num = Int::zero();
                        for &a in digits.iter().rev() {
                            num = num * &base + Int::from(a);
                        }
                        Rational::from_integer(num)
                    }
                    // digit k sits at b^{-(k+1)}, most significant first
                    Place::Infinity => {
                        let mut num = Int::zero();
                        for &a in &digits {
                            num = num * &base + Int::from(a);
                        }
                        Rational::new(num, num_traits::pow(base.clone(), depth))
                    }
                }
            })
            .collect()
    }
}

/// Exact ratio or a Monte Carlo estimate with its standard error.
#[derive(Clone, Debug)]
pub enum RatioResult {
    Exact(Rational),
    Estimate {
        value: f64,
        std_error: f64,
        in_ball: usize,
    },
}

fn axis_of(h: &Hyperplane) -> Option<usize> {
    let mut axis = None;
    for (i, c) in h.normal().iter().enumerate() {
        if !c.is_zero() {
            if axis.is_some() {
                return None;
            }
            axis = Some(i);
        }
    }
    axis
}

/// mu(B intersect L^eps) / mu(B) where L^eps is the closed eps-neighborhood
/// of the hyperplane in max-over-places distance. Exact via cylinder and
/// interval decomposition when the hyperplane is axis-aligned (always true
/// for d = 1); Monte Carlo with reported standard error otherwise.
pub fn decay_ratio(
    m: &ProductMeasure,
    center: &[Rational],
    radius: &Rational,
    h: &Hyperplane,
    eps: &Rational,
    mc: Option<(u64, usize)>,
) -> Result<RatioResult> {
    let d = m.d();
    if center.len() != d || h.d() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: if center.len() != d { center.len() } else { h.d() },
        });
    }
    if !radius.is_positive() || !eps.is_positive() {
        return Err(Error::Domain("radius and eps must be positive".into()));
    }
    let denom = ball_measure(m, center, radius)?;
    if denom.is_zero() {
        return Err(Error::EmptyBall);
    }
    if let Some(axis) = axis_of(h) {
        let t = Rational::new(h.offset().clone(), h.normal()[axis].clone());
        let mut numer = Rational::one();
        for comp in &m.components {
            let slab = match comp.place {
                Place::Finite(p) => {
                    let rho = snap_to_power(radius, p)?;
                    let sigma = snap_to_power(eps, p)?;
                    let gap = place_abs(&(&center[axis] - &t), comp.place)?;
                    let small = if sigma <= rho {
                        if gap <= rho {
                            coord_cylinder(comp, axis, &t, snap_depth(eps, p)?)
                        } else {
                            Rational::zero()
                        }
                    } else if gap <= sigma {
                        coord_cylinder(comp, axis, &center[axis], snap_depth(radius, p)?)
                    } else {
                        Rational::zero()
                    };
                    let mut rest = small;
                    for j in (0..d).filter(|&j| j != axis) {
                        rest *= coord_cylinder(comp, j, &center[j], snap_depth(radius, p)?);
                    }
                    rest
                }
                Place::Infinity => {
                    let lo = (&center[axis] - radius).max(&t - eps);
                    let hi = (&center[axis] + radius).min(&t + eps);
                    let mut rest = real_interval_measure(comp, axis, &lo, &hi)?;
                    for j in (0..d).filter(|&j| j != axis) {
                        rest *= real_interval_measure(
                            comp,
                            j,
                            &(&center[j] - radius),
                            &(&center[j] + radius),
                        )?;
                    }
                    rest
                }
            };
            numer *= slab;
            if numer.is_zero() {
                break;
            }
        }
        return Ok(RatioResult::Exact(numer / denom));
    }

    let Some((seed, count)) = mc else {
        return Err(Error::Domain(
            "general hyperplanes need Monte Carlo parameters (seed, count)".into(),
        ));
    };
    let arc = Arc::new(m.clone());
    let depth = 32usize;
    let mut in_ball = 0usize;
    let mut hits = 0usize;
    for point in ProductMeasure::sample(&arc, seed, count, depth) {
        let mut inside = true;
        let mut dist = Rational::zero();
        for (pi, comp) in m.components.iter().enumerate() {
            let x = point.truncated_at(pi, depth);
            match comp.place {
                Place::Finite(p) => {
                    let rho = snap_to_power(radius, p)?;
                    for (xi, ci) in x.iter().zip(center) {
                        if place_abs(&(xi - ci), comp.place)? > rho {
                            inside = false;
                        }
                    }
                }
                Place::Infinity => {
                    for (xi, ci) in x.iter().zip(center) {
                        if (xi - ci).abs() >= *radius {
                            inside = false;
                        }
                    }
                }
            }
            if !inside {
                break;
            }
            let pd = h.place_distance(&x, comp.place)?;
            if pd > dist {
                dist = pd;
            }
        }
        if inside {
            in_ball += 1;
            if dist <= *eps {
                hits += 1;
            }
        }
    }
    if in_ball == 0 {
        return Err(Error::EmptyBall);
    }
    let value = hits as f64 / in_ball as f64;
    let std_error = (value * (1.0 - value) / in_ball as f64).sqrt();
    Ok(RatioResult::Estimate {
        value,
        std_error,
        in_ball,
    })
}

/// Exact doubling ratio mu(B(x,2r))/mu(B(x,r)) for the real component.
pub fn doubling_ratio(
    m: &DigitMeasure,
    x: &[Rational],
    r: &Rational,
    r0: &Rational,
) -> Result<Rational> {
    if m.place != Place::Infinity {
        return Err(Error::Domain(
            "doubling applies to the real component".into(),
        ));
    }
    if !r.is_positive() || r >= r0 {
        return Err(Error::Domain(format!(
            "radius must satisfy 0 < r < r0 (got r={r}, r0={r0})"
        )));
    }
    let two = Rational::from_integer(Int::from(2));
    let den = ball_measure_at(m, x, r)?;
    if den.is_zero() {
        return Err(Error::EmptyBall);
    }
    let num = ball_measure_at(m, x, &(r * &two))?;
    Ok(num / den)
}

/// Least-squares fit of the decay exponent.
#[derive(Clone, Debug)]
pub struct AlphaFit {
    /// fitted per-place exponent: joint slope divided by the place count
    pub alpha: f64,
    /// fitted slope of log(sup ratio) against log(eps/r)
    pub joint_exponent: f64,
    pub std_error: f64,
    /// closed-form per-place exponent from the digit weights
    pub analytic: f64,
    /// (log(eps/r), log sup-ratio) pairs used for the fit
    pub points: Vec<(f64, f64)>,
}

/// Fit the decay exponent alpha by regressing the worst-case ratio of
/// hyperplane-slab mass to ball mass over a (r, eps) grid. The supremum of
/// the ratio over axis slabs and cylinder positions has the closed form
/// (max digit weight)^(depth difference) per place, which is what a sweep
/// over probe cylinders attains.
pub fn estimate_alpha(m: &ProductMeasure, grid: &[(Rational, Rational)]) -> Result<AlphaFit> {
    if m.has_atomic_coordinate() {
        return Err(Error::Domain(
            "decay fit rejects measures with a single-digit coordinate".into(),
        ));
    }
    if grid.is_empty() {
        return Err(Error::FitError("empty grid".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for (r, eps) in grid {
        if !eps.is_positive() || eps > r {
            return Err(Error::Domain(format!(
                "grid requires 0 < eps <= r (got r={r}, eps={eps})"
            )));
        }
        let mut ratio = Rational::one();
        for comp in &m.components {
            let a = snap_depth(r, comp.base)?;
            let c = snap_depth(eps, comp.base)?.max(a);
            let w = (0..comp.d)
                .map(|i| comp.max_weight(i))
                .max()
                .expect("d >= 1");
            ratio *= rat_pow(w, (c - a) as i64);
        }
        let x = (eps / r).to_f64().expect("ratio fits f64").ln();
        let y = ratio.to_f64().expect("ratio fits f64").ln();
        points.push((x, y));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::FitError(
            "grid spans a single eps/r value".into(),
        ));
    }
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let dof = points.len().saturating_sub(2);
    let std_error = if dof == 0 {
        0.0
    } else {
        let ss_res: f64 = points
            .iter()
            .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
            .sum();
        (ss_res / dof as f64 / sxx).sqrt()
    };
    let l = m.components.len() as f64;
    let analytic = m
        .components
        .iter()
        .map(|c| c.alpha_analytic())
        .sum::<f64>()
        / l;
    Ok(AlphaFit {
        alpha: slope / l,
        joint_exponent: slope,
        std_error,
        analytic,
        points,
    })
}
