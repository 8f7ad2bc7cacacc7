//! The series that decides full or null measure for the approximable
//! set: sum over n of (2^(n(d+1)/d) psi(2^n))^alpha. Terms are exact
//! rationals whenever the exponent arithmetic closes; once a term needs
//! a transcendental power the sum continues in floating point.

use num_traits::{One, ToPrimitive, Zero};

use sdioph_core::exactnum::rat_pow;
use sdioph_core::{Error, Int, Rational, Result};

use crate::psi::{pow_rational, PsiFunction};
use crate::report::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Convergent,
    Divergent,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Convergent => "convergent",
            Classification::Divergent => "divergent",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BcRow {
    pub n: u32,
    pub term: Scalar,
    pub partial: Scalar,
}

#[derive(Clone, Debug)]
pub struct BcReport {
    pub d: usize,
    pub alpha: Scalar,
    pub rows: Vec<BcRow>,
    /// Analytic verdict; None for tabulated psi, where no closed form
    /// is available and the partial sums speak for themselves.
    pub classification: Option<Classification>,
    /// True when tau sits exactly on the critical exponent (d+1)/d.
    pub boundary: bool,
}

/// The critical exponent (d+1)/d.
pub fn critical_exponent(d: usize) -> Rational {
    Rational::new(Int::from(d + 1), Int::from(d))
}

/// One summand, exact when possible. For a power law the whole term
/// collapses to c^alpha * 2^(n*alpha*((d+1)/d - tau)), which is rational
/// precisely when that exponent is an integer and c^alpha is rational.
pub fn term(psi: &PsiFunction, alpha: &Scalar, d: usize, n: u32) -> Scalar {
    let crit = critical_exponent(d);
    if let Scalar::Exact(a) = alpha {
        let exact = match psi {
            PsiFunction::PowerLaw { c, tau } => {
                let e = a * Rational::from_integer(Int::from(n)) * (&crit - tau);
                if e.is_integer() {
                    pow_rational(c, a).map(|ca| ca * rat_pow(&Rational::from_integer(2.into()), e.numer().to_i64().expect("small exponent")))
                } else {
                    None
                }
            }
            _ => {
                let h = Int::one() << n;
                psi.eval_exact(&h).and_then(|v| {
                    let scale = pow_rational(
                        &Rational::from_integer(2.into()),
                        &(&crit * Rational::from_integer(Int::from(n))),
                    )?;
                    pow_rational(&(scale * v), a)
                })
            }
        };
        if let Some(v) = exact {
            return Scalar::Exact(v);
        }
    }
    let af = alpha.to_f64();
    let h = Int::one() << n;
    let base_log2 = crit.to_f64().expect("critical exponent fits f64") * n as f64
        + psi.eval_f64(&h).log2();
    Scalar::Approx((af * base_log2).exp2())
}

/// Analytic convergence decision. Power laws compare tau to (d+1)/d;
/// on the boundary a power-log factor tips the balance at lambda*alpha
/// = 1. The boundary itself counts as divergent.
pub fn classify(psi: &PsiFunction, alpha: &Scalar, d: usize) -> (Option<Classification>, bool) {
    let crit = critical_exponent(d);
    match psi {
        PsiFunction::PowerLaw { c, tau } => {
            if c.is_zero() {
                return (Some(Classification::Convergent), false);
            }
            match tau.cmp(&crit) {
                std::cmp::Ordering::Greater => (Some(Classification::Convergent), false),
                std::cmp::Ordering::Equal => (Some(Classification::Divergent), true),
                std::cmp::Ordering::Less => (Some(Classification::Divergent), false),
            }
        }
        PsiFunction::PowerLog { c, tau, lambda } => {
            if *c == 0.0 {
                return (Some(Classification::Convergent), false);
            }
            let critf = crit.to_f64().expect("fits f64");
            if (tau - critf).abs() < 1e-12 {
                let verdict = if lambda * alpha.to_f64() > 1.0 {
                    Classification::Convergent
                } else {
                    Classification::Divergent
                };
                (Some(verdict), true)
            } else if *tau > critf {
                (Some(Classification::Convergent), false)
            } else {
                (Some(Classification::Divergent), false)
            }
        }
        PsiFunction::Table(_) => (None, false),
    }
}

pub fn bc_sum(psi: &PsiFunction, alpha: &Scalar, d: usize, n_max: u32) -> Result<BcReport> {
    if d == 0 {
        return Err(Error::Domain("dimension d must be >= 1".into()));
    }
    if n_max < 1 {
        return Err(Error::Domain("bc sum needs n_max >= 1".into()));
    }
    if alpha.to_f64() <= 0.0 || !alpha.to_f64().is_finite() {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    psi.validate(n_max)?;
    let mut exact_part = Rational::zero();
    let mut float_part = 0.0f64;
    let mut slipped = false;
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let t = term(psi, alpha, d, n);
        match &t {
            Scalar::Exact(v) => exact_part += v,
            Scalar::Approx(x) => {
                slipped = true;
                float_part += x;
            }
        }
        let partial = if slipped {
            Scalar::Approx(exact_part.to_f64().expect("sum fits f64") + float_part)
        } else {
            Scalar::Exact(exact_part.clone())
        };
        rows.push(BcRow { n, term: t, partial });
    }
    let (classification, boundary) = classify(psi, alpha, d);
    Ok(BcReport {
        d,
        alpha: alpha.clone(),
        rows,
        classification,
        boundary,
    })
}
