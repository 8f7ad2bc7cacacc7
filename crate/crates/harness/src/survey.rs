//! Empirical mass of the height-windowed approximable sets. For window
//! n the target set is the union over pairs (q, q0) with gauge in
//! [2^n, 2^(n+1)] of the points x with ||x + q/q0||_S^l <= psi(gauge);
//! the survey estimates its measure by sampled membership and compares
//! against the envelope (2^(n(d+1)/d) psi(2^n))^alpha.
//!
//! Over all-finite sets membership is a residue condition: the sup-norm
//! bound at a finite place p reads x = -q/q0 mod p^m with m determined
//! by snapping psi to a power of p^l. One pass over the window then
//! builds, per place, the set of admissible residues, and each sampled
//! point costs a handful of hash probes instead of a pair scan.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use sdioph_core::enumeration::{psi_witnesses, TargetPoint, ENUMERATION_GUARD};
use sdioph_core::exactnum::as_power_of;
use sdioph_core::measures::{DigitPoint, ProductMeasure};
use sdioph_core::places::{Mode, PlaceSet};
use sdioph_core::{Error, Int, Rational, Result};

use crate::bc;
use crate::kernel::{inv_mod, mul_mod, val};
use crate::psi::PsiFunction;
use crate::report::Scalar;

#[derive(Clone, Debug)]
pub struct SurveyParams {
    pub s: PlaceSet,
    pub measure: Arc<ProductMeasure>,
    pub psi: PsiFunction,
    pub alpha: Scalar,
    pub n_min: u32,
    pub n_max: u32,
    pub n0: u32,
    pub sample_count: usize,
    pub seed: u64,
    pub precision: usize,
    pub timings: bool,
}

#[derive(Clone, Debug)]
pub struct SurveyRow {
    pub n: u32,
    pub samples: usize,
    /// Sampled points with at least one witness pair.
    pub witnesses: usize,
    /// witnesses / samples; absent when nothing was sampled or the
    /// window search was truncated by a guard.
    pub empirical_mass: Option<f64>,
    pub envelope: Scalar,
    pub mass_over_envelope: Option<f64>,
    pub below_threshold: bool,
    pub truncated: bool,
    pub runtime_ms: Option<u128>,
}

#[derive(Clone, Debug)]
pub struct SurveyReport {
    pub rows: Vec<SurveyRow>,
    pub warnings: Vec<String>,
}

/// Exact psi values on the integer heights of window n, or None where
/// psi leaves the rationals. Power laws with integer exponent and
/// tables never do.
fn exact_values(psi: &PsiFunction, lo: i64, hi: i64) -> Result<Vec<Rational>> {
    (lo..=hi)
        .map(|h| {
            psi.eval_exact(&Int::from(h)).ok_or_else(|| {
                Error::Domain(format!(
                    "psi has no exact rational value at height {h}; \
                     use an integer exponent or a table"
                ))
            })
        })
        .collect()
}

/// Smallest m >= 0 with p^(-m l) <= v, i.e. the snap depth of v in base
/// p^l. None when the modulus p^m leaves the machine range.
fn snap_depth_base(v: &Rational, p: u64, l: usize) -> Result<Option<u32>> {
    if v >= &Rational::one() {
        return Ok(Some(0));
    }
    let base = match p.checked_pow(l as u32) {
        Some(b) => b,
        None => return Ok(None),
    };
    let snapped = sdioph_core::exactnum::snap_to_power(v, base)?;
    let e = as_power_of(&snapped, base).expect("snap returns a power");
    Ok(Some((-e).max(0) as u32))
}

type ResidueSets = BTreeMap<Vec<u32>, HashSet<Vec<u64>>>;

/// One window over an all-finite set: the admissible residue vectors,
/// grouped by their per-place depth vector. Ok(None) means a guard
/// tripped and the row should be marked truncated.
fn residue_sets(
    s: &PlaceSet,
    psi_values: &[Rational],
    n: u32,
    d: usize,
) -> Result<Option<ResidueSets>> {
    assert!(n <= 40, "caller gates the window size");
    let primes: Vec<i64> = s.finite_primes().map(|p| p as i64).collect();
    let l = primes.len();
    let lo = 1i64 << n;
    let hi = 1i64 << (n + 1);
    let budget = (hi as u128) * ((2 * hi + 1) as u128).pow(d as u32);
    if budget > ENUMERATION_GUARD {
        return Ok(None);
    }

    let mut mv_of_h: Vec<Option<Vec<u32>>> = vec![None; (hi + 1) as usize];
    let mut mmax = vec![0u32; l];
    for h in lo..=hi {
        let v = &psi_values[(h - lo) as usize];
        if v.is_zero() {
            continue; // exact hits only, which sampled points miss a.s.
        }
        let mut mv = Vec::with_capacity(l);
        for (i, &p) in primes.iter().enumerate() {
            match snap_depth_base(v, p as u64, l)? {
                Some(m) => {
                    mmax[i] = mmax[i].max(m);
                    mv.push(m);
                }
                None => return Ok(None),
            }
        }
        mv_of_h[h as usize] = Some(mv);
    }
    let mut pmax = vec![0i64; l];
    for (i, &p) in primes.iter().enumerate() {
        match (p as u64).checked_pow(mmax[i]) {
            Some(m) if m < (1 << 62) => pmax[i] = m as i64,
            _ => return Ok(None),
        }
    }

    let merged = (1..hi + 1)
        .into_par_iter()
        .map(|q0| {
            let mut local: ResidueSets = BTreeMap::new();
            let mut v0 = vec![0u32; l];
            let mut inv = vec![0i64; l];
            for (i, &p) in primes.iter().enumerate() {
                v0[i] = val(q0, p);
                inv[i] = inv_mod(q0 / p.pow(v0[i]), pmax[i]).expect("unit after dividing out p");
            }
            let mut q = vec![-hi; d];
            'pairs: loop {
                let sup = q.iter().map(|x| x.abs()).max().expect("d >= 1");
                let h = sup.max(q0);
                if h >= lo {
                    if let Some(mv) = &mv_of_h[h as usize] {
                        let mut key = Vec::new();
                        let mut ok = true;
                        'places: for (i, &p) in primes.iter().enumerate() {
                            // q_j / q0 must be p-integral for membership
                            // at any depth, including depth 0
                            for &qj in q.iter() {
                                if qj != 0 && val(qj, p) < v0[i] {
                                    ok = false;
                                    break 'places;
                                }
                            }
                            if mv[i] == 0 {
                                continue;
                            }
                            let modulus = p.pow(mv[i]);
                            for &qj in q.iter() {
                                let qr = qj / p.pow(v0[i]);
                                let r = mul_mod(-qr, inv[i], modulus);
                                key.push(r as u64);
                            }
                        }
                        if ok {
                            local.entry(mv.clone()).or_default().insert(key);
                        }
                    }
                }
                let mut axis = 0;
                loop {
                    if axis == d {
                        break 'pairs;
                    }
                    q[axis] += 1;
                    if q[axis] > hi {
                        q[axis] = -hi;
                        axis += 1;
                    } else {
                        break;
                    }
                }
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, set) in b {
                a.entry(k).or_default().extend(set);
            }
            a
        });
    Ok(Some(merged))
}

fn residue_hits(sets: &ResidueSets, primes: &[u64], d: usize, points: &[DigitPoint]) -> usize {
    points
        .par_iter()
        .filter(|pt| {
            sets.iter().any(|(mv, set)| {
                let mut key = Vec::new();
                for (i, &p) in primes.iter().enumerate() {
                    if mv[i] == 0 {
                        continue;
                    }
                    for coord in 0..d {
                        let mut r = 0u64;
                        let mut pw = 1u64;
                        for dg in pt.prefix(i, coord, mv[i] as usize) {
                            r += dg * pw;
                            pw *= p;
                        }
                        key.push(r);
                    }
                }
                set.contains(&key)
            })
        })
        .count()
}

/// Membership by the exact per-point search; the fallback when the real
/// place is in play. Returns (hits, truncated).
fn scan_hits(params: &SurveyParams, n: u32, points: &[DigitPoint]) -> Result<(usize, bool)> {
    let psi = params.psi.clone();
    let eval = move |h: &Int| psi.eval_exact(h).expect("exactness checked on the window");
    let outcomes: Vec<Result<bool>> = points
        .par_iter()
        .map(|pt| {
            match psi_witnesses(
                &TargetPoint::Digit(pt.clone()),
                &eval,
                n,
                &params.s,
                params.precision,
            ) {
                Ok(ws) => Ok(!ws.is_empty()),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut hits = 0;
    for o in outcomes {
        match o {
            Ok(true) => hits += 1,
            Ok(false) => {}
            Err(Error::SearchTooLarge { .. }) => return Ok((0, true)),
            Err(e) => return Err(e),
        }
    }
    Ok((hits, false))
}

pub fn approx_survey(params: &SurveyParams) -> Result<SurveyReport> {
    let d = params.measure.d();
    if params.measure.place_set() != params.s {
        return Err(Error::Domain(format!(
            "measure lives over {} but the survey is over {}",
            params.measure.place_set(),
            params.s
        )));
    }
    if params.n_max < params.n_min {
        return Err(Error::Domain("survey needs n_min <= n_max".into()));
    }
    params.psi.validate(params.n_max)?;

    let mut warnings = Vec::new();
    let crit = bc::critical_exponent(d).to_f64().expect("fits f64");
    let at_top = params.psi.eval_f64(&(Int::one() << params.n_max));
    if at_top.is_finite() && at_top >= (-(params.n_max as f64) * crit).exp2() {
        warnings.push(format!(
            "psi(2^{}) = {at_top:e} is not below the critical rate q^(-{:.3}); \
             the envelope comparison is vacuous but the survey runs anyway",
            params.n_max, crit
        ));
    }

    let points = ProductMeasure::sample(&params.measure, params.seed, params.sample_count, 64);
    let primes: Vec<u64> = params.s.finite_primes().collect();

    let mut rows = Vec::new();
    for n in params.n_min..=params.n_max {
        let start = Instant::now();
        let envelope = bc::term(&params.psi, &params.alpha, d, n);
        let (witnesses, truncated) = if params.sample_count == 0 {
            (0, false)
        } else if params.s.mode() == Mode::AllFinite {
            if n > 40 {
                (0, true)
            } else {
                let values = exact_values(&params.psi, 1i64 << n, 1i64 << (n + 1))?;
                match residue_sets(&params.s, &values, n, d)? {
                    Some(sets) => (residue_hits(&sets, &primes, d, &points), false),
                    None => (0, true),
                }
            }
        } else if n > 20 {
            (0, true)
        } else {
            exact_values(&params.psi, 1i64 << n, 1i64 << (n + 1))?;
            scan_hits(params, n, &points)?
        };
        let empirical_mass = if params.sample_count == 0 || truncated {
            None
        } else {
            Some(witnesses as f64 / params.sample_count as f64)
        };
        let env_f = envelope.to_f64();
        let mass_over_envelope = match empirical_mass {
            Some(m) if env_f > 0.0 => Some(m / env_f),
            _ => None,
        };
        rows.push(SurveyRow {
            n,
            samples: params.sample_count,
            witnesses,
            empirical_mass,
            envelope,
            mass_over_envelope,
            below_threshold: n < params.n0,
            truncated,
            runtime_ms: params
                .timings
                .then(|| start.elapsed().as_millis()),
        });
    }
    Ok(SurveyReport { rows, warnings })
}
