//! Campaign dispatch: each kind turns resolved settings into one output
//! table. Violations of a checked inequality set the table's violation
//! flag, which the binary maps to exit code 2.

use num_integer::gcd;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use sdioph_core::enumeration::{
    cover_compact, cover_compact_with_radius, dirichlet_witness, radius_schedule, snap_radius,
    verify_simplex_lemma, ENUMERATION_GUARD,
};
use sdioph_core::exactnum::{as_power_of, rat_pow};
use sdioph_core::lattice::HeightWindow;
use sdioph_core::measures::estimate_alpha;
use sdioph_core::places::{Mode, PlaceSet};
use sdioph_core::simplex1d::min_separation_bruteforce;
use sdioph_core::{Error, Rational, Result};

use crate::bc;
use crate::config::Settings;
use crate::kernel::{inv_mod, mul_mod, val};
use crate::report::{Cell, Scalar, Table};
use crate::survey::{approx_survey, SurveyParams};

pub fn run(kind: &str, cfg: &Settings) -> Result<Table> {
    match kind {
        "simplex1d" => run_simplex1d(cfg),
        "simplex" => run_simplex(cfg),
        "dirichlet" => run_dirichlet(cfg),
        "bcsum" => run_bcsum(cfg),
        "decay" => run_decay(cfg),
        "survey" => run_survey(cfg),
        other => Err(Error::Parse(format!(
            "unknown campaign kind '{other}'; expected simplex1d, simplex, \
             dirichlet, bcsum, decay or survey"
        ))),
    }
}

/// Exact alpha when configured, otherwise the mean analytic exponent of
/// the measure's components.
fn resolve_alpha(cfg: &Settings) -> Result<Scalar> {
    match &cfg.alpha {
        Some(a) => Ok(Scalar::Exact(a.clone())),
        None => {
            let m = cfg.product_measure()?;
            let l = m.components().len() as f64;
            let sum: f64 = m.components().iter().map(|c| c.alpha_analytic()).sum();
            Ok(Scalar::Approx(sum / l))
        }
    }
}

fn run_simplex1d(cfg: &Settings) -> Result<Table> {
    let mut t = Table::new(
        "simplex1d",
        vec![
            "k",
            "l",
            "mode",
            "bound",
            "minimum",
            "witness_a",
            "witness_b",
            "exceeds_bound",
            "candidates",
            "pairs",
        ],
    );
    for k in cfg.n_min..=cfg.n_max {
        let nb = cfg.numerator_bound.unwrap_or_else(|| 4i64 << (k + 1));
        let sep = min_separation_bruteforce(k, &cfg.s, nb)?;
        if !sep.exceeds_bound {
            t.violation = true;
        }
        t.push(vec![
            Cell::from(k),
            Cell::from(sep.l),
            Cell::Text(sep.mode.to_string()),
            Cell::Rat(sep.bound),
            Cell::Rat(sep.minimum),
            Cell::Rat(sep.witness.0),
            Cell::Rat(sep.witness.1),
            Cell::Bool(sep.exceeds_bound),
            Cell::from(sep.candidates),
            Cell::Int(sep.pairs as i128),
        ]);
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug)]
pub struct SweepSummary {
    pub n: u32,
    pub cells: usize,
    pub pairs: u128,
    pub distinct_points: u64,
    pub failures: usize,
}

// collinearity of (a, b, c) read as points (x/w, y/w), exact in i128
fn cross(a: [i32; 4], b: [i32; 4], c: [i32; 4]) -> i128 {
    let (ax, ay, aw) = (a[0] as i128, a[1] as i128, a[3] as i128);
    let (bx, by, bw) = (b[0] as i128, b[1] as i128, b[3] as i128);
    let (cx, cy, cw) = (c[0] as i128, c[1] as i128, c[3] as i128);
    let u1 = bx * aw - ax * bw;
    let v1 = by * aw - ay * bw;
    let u2 = cx * aw - ax * cw;
    let v2 = cy * aw - ay * cw;
    u1 * v2 - v1 * u2
}

/// Whether the distinct points of one bucket escape every rational
/// hyperplane: more than one point for d = 1, a non-collinear triple
/// for d = 2, affine rank d for d = 3.
fn bucket_fails(distinct: &[[i32; 4]], d: usize) -> bool {
    if distinct.len() <= d {
        return false;
    }
    match d {
        1 => true,
        2 => {
            let a = distinct[0];
            let b = distinct[1];
            distinct[2..].iter().any(|&c| cross(a, b, c) != 0)
        }
        _ => {
            let frac = |p: [i32; 4], j: usize| {
                Rational::new(p[j].into(), p[3].into())
            };
            let base = distinct[0];
            let mut basis: Vec<Vec<Rational>> = Vec::new();
            for &pt in &distinct[1..] {
                let mut row: Vec<Rational> =
                    (0..d).map(|j| frac(pt, j) - frac(base, j)).collect();
                for b in &basis {
                    let pivot = b.iter().position(|x| !num_traits::Zero::is_zero(x));
                    if let Some(pi) = pivot {
                        if !num_traits::Zero::is_zero(&row[pi]) {
                            let factor = &row[pi] / &b[pi];
                            for j in 0..d {
                                let delta = &factor * &b[j];
                                row[j] -= delta;
                            }
                        }
                    }
                }
                if row.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                    basis.push(row);
                    if basis.len() == d {
                        return true;
                    }
                }
            }
            false
        }
    }
}

/// The per-ball hyperplane check over an all-finite set with the full
/// digit measure, reorganized around residues. A cover ball at the
/// scheduled snapped radii is exactly a product of residue cylinders
/// mod p^(m_p), so grouping the window's S-integral points by those
/// residues visits precisely the balls containing at least one point;
/// every unhit ball passes vacuously beside them.
pub fn simplex_bucket_sweep(s: &PlaceSet, d: usize, n: u32) -> Result<SweepSummary> {
    if s.mode() != Mode::AllFinite {
        return Err(Error::Domain(
            "the bucket sweep runs over all-finite place sets".into(),
        ));
    }
    if d == 0 || d > 3 {
        return Err(Error::Domain("the bucket sweep supports 1 <= d <= 3".into()));
    }
    if n > 24 {
        return Err(Error::Domain(format!(
            "window n={n} exceeds the bucket sweep guard of 24"
        )));
    }
    let schedule = radius_schedule(n, d, s.len())?;
    let primes: Vec<i64> = s.finite_primes().map(|p| p as i64).collect();
    let l = primes.len();
    let mut modulus = vec![0i64; l];
    for (i, &p) in primes.iter().enumerate() {
        let snapped = snap_radius(&schedule.value, p as u64)?;
        let e = as_power_of(&snapped, p as u64).expect("snap returns a power");
        let depth = (-e).max(0) as u32;
        match (p as u64).checked_pow(depth) {
            Some(m) if m < (1 << 40) => modulus[i] = m as i64,
            _ => {
                return Err(Error::SearchTooLarge {
                    candidates: u128::MAX,
                    guard: 1 << 40,
                })
            }
        }
    }
    let lo = 1i64 << n;
    let hi = 1i64 << (n + 1);
    let budget = (hi as u128) * ((2 * hi + 1) as u128).pow(d as u32);
    if budget > ENUMERATION_GUARD {
        return Err(Error::SearchTooLarge {
            candidates: budget,
            guard: ENUMERATION_GUARD,
        });
    }
    let mut stride = vec![0u128; l * d];
    let mut total: u128 = 1;
    for i in 0..l {
        for j in 0..d {
            stride[i * d + j] = total;
            total = total
                .checked_mul(modulus[i] as u128)
                .filter(|&t| t < 1 << 120)
                .ok_or(Error::SearchTooLarge {
                    candidates: u128::MAX,
                    guard: 1 << 120,
                })?;
        }
    }

    let mut entries: Vec<(u128, [i32; 4])> = (1..hi + 1)
        .into_par_iter()
        .flat_map_iter(|q0| {
            let mut out = Vec::new();
            let mut v0 = vec![0u32; l];
            let mut inv = vec![0i64; l];
            for (i, &p) in primes.iter().enumerate() {
                v0[i] = val(q0, p);
                inv[i] = inv_mod(q0 / p.pow(v0[i]), modulus[i]).expect("unit mod p^m");
            }
            let mut q = vec![-hi; d];
            'pairs: loop {
                let sup = q.iter().map(|x| x.abs()).max().expect("d >= 1");
                let h = sup.max(q0);
                if h >= lo {
                    let mut key = 0u128;
                    let mut ok = true;
                    'places: for (i, &p) in primes.iter().enumerate() {
                        for (j, &qj) in q.iter().enumerate() {
                            if qj != 0 && val(qj, p) < v0[i] {
                                ok = false;
                                break 'places;
                            }
                            // the ball point is -q/q0, matching the
                            // orientation used by the witness search
                            let qr = qj / p.pow(v0[i]);
                            let r = mul_mod(-qr, inv[i], modulus[i]);
                            key += r as u128 * stride[i * d + j];
                        }
                    }
                    if ok {
                        let mut g = q0;
                        for &qj in q.iter() {
                            g = gcd(g, qj.abs());
                        }
                        let mut pt = [0i32; 4];
                        for (j, &qj) in q.iter().enumerate() {
                            pt[j] = (-qj / g) as i32;
                        }
                        pt[3] = (q0 / g) as i32;
                        out.push((key, pt));
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
            out
        })
        .collect();
    let pairs = entries.len() as u128;
    entries.par_sort_unstable();

    let mut cells = 0usize;
    let mut distinct_points = 0u64;
    let mut failures = 0usize;
    let mut start = 0usize;
    let mut distinct: Vec<[i32; 4]> = Vec::new();
    while start < entries.len() {
        let key = entries[start].0;
        let mut end = start;
        distinct.clear();
        while end < entries.len() && entries[end].0 == key {
            if distinct.last() != Some(&entries[end].1) {
                distinct.push(entries[end].1);
            }
            end += 1;
        }
        cells += 1;
        distinct_points += distinct.len() as u64;
        if bucket_fails(&distinct, d) {
            failures += 1;
        }
        start = end;
    }
    Ok(SweepSummary {
        n,
        cells,
        pairs,
        distinct_points,
        failures,
    })
}

fn run_simplex(cfg: &Settings) -> Result<Table> {
    let mut t = Table::new(
        "simplex",
        vec![
            "n",
            "d",
            "places",
            "method",
            "radius",
            "cells",
            "pairs",
            "distinct_points",
            "failures",
            "pass",
        ],
    );
    let buckets = cfg.radius.is_none()
        && cfg.measure_is_full()
        && cfg.s.mode() == Mode::AllFinite
        && cfg.d <= 3;
    for n in cfg.n_min..=cfg.n_max {
        let (method, radius, cells, pairs, distinct, failures) = if buckets {
            let sweep = simplex_bucket_sweep(&cfg.s, cfg.d, n)?;
            let sched = radius_schedule(n, cfg.d, cfg.s.len())?;
            (
                "buckets",
                sched.value,
                sweep.cells,
                sweep.pairs,
                sweep.distinct_points as u128,
                sweep.failures,
            )
        } else {
            let k = cfg.product_measure()?;
            let balls = match &cfg.radius {
                Some(r) => cover_compact_with_radius(&k, r)?,
                None => cover_compact(&k, n)?,
            };
            let radius = match &cfg.radius {
                Some(r) => r.clone(),
                None => radius_schedule(n, cfg.d, cfg.s.len())?.value,
            };
            let window = HeightWindow::for_set(n, &cfg.s);
            let verdicts = balls
                .par_iter()
                .map(|b| verify_simplex_lemma(b, &window, &cfg.s))
                .collect::<Result<Vec<_>>>()?;
            let pairs = verdicts.iter().map(|v| v.pairs as u128).sum();
            let distinct = verdicts.iter().map(|v| v.distinct_points as u128).sum();
            let failures = verdicts.iter().filter(|v| !v.passed()).count();
            ("cover", radius, balls.len(), pairs, distinct, failures)
        };
        if failures > 0 {
            t.violation = true;
        }
        t.push(vec![
            Cell::from(n),
            Cell::from(cfg.d),
            Cell::Text(cfg.s.to_string()),
            Cell::Text(method.into()),
            Cell::Rat(radius),
            Cell::from(cells),
            Cell::Int(pairs as i128),
            Cell::Int(distinct as i128),
            Cell::from(failures),
            Cell::Bool(failures == 0),
        ]);
    }
    Ok(t)
}

fn run_dirichlet(cfg: &Settings) -> Result<Table> {
    let mut t = Table::new(
        "dirichlet",
        vec!["index", "x", "found", "q0", "q", "level", "lhs", "rhs"],
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pprod: u64 = cfg.s.finite_primes().product();
    for index in 0..cfg.sample_count {
        let mut coords = Vec::with_capacity(cfg.d);
        for _ in 0..cfg.d {
            let den = loop {
                let c = rng.next_u64() % 999 + 1;
                if gcd(c, pprod) == 1 {
                    break c as i64;
                }
            };
            let span = if cfg.s.has_infinity() { den } else { 999 };
            let num = (rng.next_u64() % (2 * span as u64 + 1)) as i64 - span;
            coords.push(Rational::new(num.into(), den.into()));
        }
        let witness = dirichlet_witness(&coords, cfg.height_bound, &cfg.s, cfg.dirichlet_exponent)?;
        let x_text = coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        match witness {
            Some(w) => t.push(vec![
                Cell::from(index),
                Cell::Text(x_text),
                Cell::Bool(true),
                Cell::Text(w.q0.to_string()),
                Cell::Text(
                    w.q.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                Cell::from(w.level),
                Cell::Rat(w.lhs),
                Cell::Rat(w.rhs),
            ]),
            None => {
                t.violation = true;
                t.push(vec![
                    Cell::from(index),
                    Cell::Text(x_text),
                    Cell::Bool(false),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                ]);
            }
        }
    }
    Ok(t)
}

fn run_bcsum(cfg: &Settings) -> Result<Table> {
    let psi = cfg
        .psi
        .clone()
        .ok_or_else(|| Error::Parse("bcsum needs --psi".into()))?;
    let alpha = resolve_alpha(cfg)?;
    let rep = bc::bc_sum(&psi, &alpha, cfg.d, cfg.n_max.max(1))?;
    let class_text = match rep.classification {
        Some(c) => c.as_str(),
        None => "unclassified",
    };
    let mut t = Table::new(
        "bcsum",
        vec!["n", "term", "partial_sum", "exact", "classification", "boundary"],
    );
    for row in rep.rows {
        let exact = row.term.is_exact();
        t.push(vec![
            Cell::from(row.n),
            row.term.cell(),
            row.partial.cell(),
            Cell::Bool(exact),
            Cell::Text(class_text.into()),
            Cell::Bool(rep.boundary),
        ]);
    }
    Ok(t)
}

fn run_decay(cfg: &Settings) -> Result<Table> {
    let m = cfg.product_measure()?;
    let b = cfg.s.finite_primes().next().unwrap_or(2);
    let unit = Rational::new(1.into(), (b as i64).into());
    let mut grid = Vec::new();
    for a in 2i64..=4 {
        let r = rat_pow(&unit, a);
        for c in 1i64..=3 {
            let eps = &r * rat_pow(&unit, c);
            grid.push((r.clone(), eps));
        }
    }
    let fit = estimate_alpha(&m, &grid)?;
    let mut t = Table::new(
        "decay",
        vec![
            "r",
            "eps",
            "log_scale",
            "log_ratio",
            "alpha",
            "joint_exponent",
            "analytic",
            "std_error",
        ],
    );
    for ((r, eps), (x, y)) in grid.iter().zip(&fit.points) {
        t.push(vec![
            Cell::Rat(r.clone()),
            Cell::Rat(eps.clone()),
            Cell::Float(*x),
            Cell::Float(*y),
            Cell::Float(fit.alpha),
            Cell::Float(fit.joint_exponent),
            Cell::Float(fit.analytic),
            Cell::Float(fit.std_error),
        ]);
    }
    Ok(t)
}

fn run_survey(cfg: &Settings) -> Result<Table> {
    let psi = cfg
        .psi
        .clone()
        .ok_or_else(|| Error::Parse("survey needs --psi".into()))?;
    let measure = cfg.product_measure()?;
    let alpha = resolve_alpha(cfg)?;
    let params = SurveyParams {
        s: cfg.s.clone(),
        measure,
        psi,
        alpha,
        n_min: cfg.n_min,
        n_max: cfg.n_max,
        n0: cfg.n0,
        sample_count: cfg.sample_count,
        seed: cfg.seed,
        precision: cfg.precision,
        timings: cfg.timings,
    };
    let rep = approx_survey(&params)?;
    let mut t = Table::new(
        "survey",
        vec![
            "n",
            "samples",
            "witnesses",
            "empirical_mass",
            "envelope",
            "mass_over_envelope",
            "below_threshold",
            "truncated",
            "runtime_ms",
        ],
    );
    t.warnings = rep.warnings;
    for row in rep.rows {
        t.push(vec![
            Cell::from(row.n),
            Cell::from(row.samples),
            Cell::from(row.witnesses),
            row.empirical_mass.map_or(Cell::Empty, Cell::Float),
            row.envelope.cell(),
            row.mass_over_envelope.map_or(Cell::Empty, Cell::Float),
            Cell::Bool(row.below_threshold),
            Cell::Bool(row.truncated),
            row.runtime_ms
                .map_or(Cell::Empty, |ms| Cell::Int(ms as i128)),
        ]);
    }
    Ok(t)
}
