//! Approximation functions of the height. All families are monotone
//! non-increasing on [1, oo); parsing accepts the spellings used by the
//! --psi flag: "pow:c,tau", "powlog:c,tau,lambda", "table:h=v,h=v,...".

use num_traits::{One, Signed, ToPrimitive, Zero};

use sdioph_core::exactnum::{parse_rational, rat_pow};
use sdioph_core::{Error, Int, Rational, Result};

/// x^e for positive rational x and rational e, when the result is again
/// rational: the denominator of e must be a perfect-root order of x.
pub fn pow_rational(x: &Rational, e: &Rational) -> Option<Rational> {
    if x.is_zero() {
        return match e.is_positive() {
            true => Some(Rational::zero()),
            false if e.is_zero() => Some(Rational::one()),
            false => None,
        };
    }
    if x.is_negative() {
        return None;
    }
    let order = e.denom().to_u32()?;
    let root = if order == 1 {
        x.clone()
    } else {
        let rn = x.numer().nth_root(order);
        let rd = x.denom().nth_root(order);
        if &rn.pow(order) != x.numer() || &rd.pow(order) != x.denom() {
            return None;
        }
        // n-th roots of coprime integers are coprime
        Rational::new_raw(rn, rd)
    };
    let up = e.numer().to_i64()?;
    Some(rat_pow(&root, up))
}

#[derive(Clone, Debug, PartialEq)]
pub enum PsiFunction {
    /// c * h^(-tau), exact wherever h^tau is rational.
    PowerLaw { c: Rational, tau: Rational },
    /// c * h^(-tau) * (ln h)^(-lambda), floating point only; the log
    /// factor is read as 1 at h = 1.
    PowerLog { c: f64, tau: f64, lambda: f64 },
    /// Step function: the value at h is the entry at the largest
    /// tabulated height <= h. Heights strictly increasing from 1.
    Table(Vec<(Int, Rational)>),
}

fn parse_f64(s: &str) -> Result<f64> {
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    parse_rational(s)?
        .to_f64()
        .ok_or_else(|| Error::Parse(format!("'{s}' does not fit a float")))
}

impl PsiFunction {
    pub fn parse(spec: &str) -> Result<PsiFunction> {
        if let Some(body) = spec.strip_prefix("pow:") {
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!(
                    "psi 'pow:{body}' wants two fields c,tau"
                )));
            }
            return Ok(PsiFunction::PowerLaw {
                c: parse_rational(parts[0])?,
                tau: parse_rational(parts[1])?,
            });
        }
        if let Some(body) = spec.strip_prefix("powlog:") {
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!(
                    "psi 'powlog:{body}' wants three fields c,tau,lambda"
                )));
            }
            return Ok(PsiFunction::PowerLog {
                c: parse_f64(parts[0])?,
                tau: parse_f64(parts[1])?,
                lambda: parse_f64(parts[2])?,
            });
        }
        if let Some(body) = spec.strip_prefix("table:") {
            let mut rows = Vec::new();
            for entry in body.split(',') {
                let (h, v) = entry.split_once('=').ok_or_else(|| {
                    Error::Parse(format!("psi table entry '{entry}' is not h=v"))
                })?;
                let h: Int = h
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad table height '{h}'")))?;
                rows.push((h, parse_rational(v.trim())?));
            }
            for w in rows.windows(2) {
                if w[0].0 >= w[1].0 {
                    return Err(Error::Parse(
                        "psi table heights must be strictly increasing".into(),
                    ));
                }
            }
            if rows.is_empty() || rows[0].0 != Int::one() {
                return Err(Error::Parse("psi table must start at height 1".into()));
            }
            return Ok(PsiFunction::Table(rows));
        }
        Err(Error::Parse(format!(
            "psi '{spec}' is not pow:, powlog: or table:"
        )))
    }

    fn table_value<'a>(rows: &'a [(Int, Rational)], h: &Int) -> Result<&'a Rational> {
        let mut out = None;
        for (th, v) in rows {
            if th <= h {
                out = Some(v);
            } else {
                break;
            }
        }
        out.ok_or_else(|| Error::Domain(format!("psi table has no entry at or below {h}")))
    }

    /// Exact value when the arithmetic closes over the rationals.
    pub fn eval_exact(&self, h: &Int) -> Option<Rational> {
        if !h.is_positive() {
            return None;
        }
        match self {
            PsiFunction::PowerLaw { c, tau } => {
                let p = pow_rational(&Rational::from_integer(h.clone()), &(-tau))?;
                Some(c * p)
            }
            PsiFunction::PowerLog { .. } => None,
            PsiFunction::Table(rows) => Self::table_value(rows, h).ok().cloned(),
        }
    }

    pub fn eval_f64(&self, h: &Int) -> f64 {
        let hf = h.to_f64().unwrap_or(f64::INFINITY);
        match self {
            PsiFunction::PowerLaw { c, tau } => {
                let cf = c.to_f64().unwrap_or(f64::NAN);
                let tf = tau.to_f64().unwrap_or(f64::NAN);
                cf * hf.powf(-tf)
            }
            PsiFunction::PowerLog { c, tau, lambda } => {
                let log = if hf <= 1.0 { 1.0 } else { hf.ln() };
                c * hf.powf(-tau) * log.powf(-lambda)
            }
            PsiFunction::Table(rows) => Self::table_value(rows, h)
                .map(|v| v.to_f64().unwrap_or(f64::NAN))
                .unwrap_or(f64::NAN),
        }
    }

    /// Rejects families that fail to be non-negative and non-increasing.
    /// The dyadic heights 2^0 .. 2^n_max are the checked sample points;
    /// tables are checked entry by entry instead, which is exact.
    pub fn validate(&self, n_max: u32) -> Result<()> {
        match self {
            PsiFunction::PowerLaw { c, tau } => {
                if c.is_negative() {
                    return Err(Error::Domain("psi constant must be >= 0".into()));
                }
                if tau.is_negative() {
                    return Err(Error::Domain(
                        "psi exponent must be >= 0 for a non-increasing function".into(),
                    ));
                }
            }
            PsiFunction::Table(rows) => {
                for (_, v) in rows {
                    if v.is_negative() {
                        return Err(Error::Domain("psi table values must be >= 0".into()));
                    }
                }
                for w in rows.windows(2) {
                    if w[1].1 > w[0].1 {
                        return Err(Error::Domain(format!(
                            "psi table increases at height {}: {} > {}",
                            w[1].0, w[1].1, w[0].1
                        )));
                    }
                }
            }
            PsiFunction::PowerLog { c, .. } => {
                if !c.is_finite() || *c < 0.0 {
                    return Err(Error::Domain("psi constant must be >= 0".into()));
                }
            }
        }
        let mut prev = f64::INFINITY;
        for n in 0..=n_max {
            let v = self.eval_f64(&(Int::one() << n));
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!("psi is not finite at 2^{n}")));
            }
            if v > prev {
                return Err(Error::Domain(format!(
                    "psi increases between 2^{} and 2^{n}",
                    n - 1
                )));
            }
            prev = v;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn rational_powers() {
        assert_eq!(pow_rational(&rat("4/9"), &rat("1/2")), Some(rat("2/3")));
        assert_eq!(pow_rational(&rat("4/9"), &rat("-3/2")), Some(rat("27/8")));
        assert_eq!(pow_rational(&rat("2"), &rat("1/2")), None);
        assert_eq!(pow_rational(&rat("8"), &rat("2/3")), Some(rat("4")));
        assert_eq!(pow_rational(&rat("0"), &rat("3/5")), Some(rat("0")));
        assert_eq!(pow_rational(&rat("5"), &rat("0")), Some(rat("1")));
    }

    #[test]
    fn power_law_eval() {
        let psi = PsiFunction::parse("pow:1,3").unwrap();
        assert_eq!(psi.eval_exact(&Int::from(4)), Some(rat("1/64")));
        let frac = PsiFunction::parse("pow:2,3/2").unwrap();
        assert_eq!(frac.eval_exact(&Int::from(4)), Some(rat("1/4")));
        assert_eq!(frac.eval_exact(&Int::from(2)), None);
        assert!((frac.eval_f64(&Int::from(2)) - 2.0 * 2f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn table_is_a_right_continuous_step_function() {
        let psi = PsiFunction::parse("table:1=1,2=1/8,4=1/64").unwrap();
        psi.validate(4).unwrap();
        assert_eq!(psi.eval_exact(&Int::from(1)), Some(rat("1")));
        assert_eq!(psi.eval_exact(&Int::from(3)), Some(rat("1/8")));
        assert_eq!(psi.eval_exact(&Int::from(100)), Some(rat("1/64")));
    }

    #[test]
    fn non_monotone_table_is_rejected() {
        let psi = PsiFunction::parse("table:1=1/8,2=1/2").unwrap();
        let err = psi.validate(4).unwrap_err();
        assert!(err.to_string().contains("increases"));
    }

    #[test]
    fn increasing_powlog_is_rejected() {
        let psi = PsiFunction::parse("powlog:1,0,-1").unwrap();
        assert!(psi.validate(6).is_err());
        let ok = PsiFunction::parse("powlog:1,2,1").unwrap();
        ok.validate(10).unwrap();
    }

    #[test]
    fn parse_errors_name_the_offender() {
        for bad in ["pow:1", "powlog:1,2", "table:2=1", "lin:3", "table:1=x"] {
            assert!(PsiFunction::parse(bad).is_err(), "{bad}");
        }
    }
}
