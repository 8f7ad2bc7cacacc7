//! Campaign configuration. A config file is line-oriented UTF-8
//! `key = value` text; '#' starts a comment. Command-line flags override
//! file keys, file keys override defaults. The `measure` key may repeat,
//! once per place.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use sdioph_core::enumeration::DirichletExponent;
use sdioph_core::exactnum::parse_rational;
use sdioph_core::measures::{DigitMeasure, ProductMeasure};
use sdioph_core::places::{Place, PlaceSet};
use sdioph_core::{Error, Rational, Result};

use crate::psi::PsiFunction;

const KNOWN_KEYS: &[&str] = &[
    "primes",
    "infty",
    "d",
    "n-min",
    "n-max",
    "n0",
    "psi",
    "alpha",
    "measure",
    "seed",
    "sample-count",
    "precision",
    "numerator-bound",
    "dirichlet-exponent",
    "height-bound",
    "radius",
    "format",
    "out",
    "timings",
];

/// Raw key/value pairs in file order, duplicates preserved.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!(
                "config line {} ('{}') is not 'key = value'",
                idx + 1,
                line
            ))
        })?;
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Parse(format!(
                "config line {}: unknown key '{}'",
                idx + 1,
                key
            )));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// One `measure` entry: `p:3 digits:0,2 d:2 weights:1/4,3/4` with an
/// optional `base:` for the real place. The digit set applies to every
/// coordinate of the place.
#[derive(Clone, Debug)]
pub struct MeasureSpec {
    pub place: Place,
    pub base: Option<u64>,
    pub digits: Option<Vec<u64>>,
    pub weights: Option<Vec<Rational>>,
}

impl MeasureSpec {
    pub fn parse(text: &str) -> Result<MeasureSpec> {
        let mut place = None;
        let mut base = None;
        let mut digits = None;
        let mut weights = None;
        let mut dim = None;
        for tok in text.split_whitespace() {
            let (key, value) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("measure token '{tok}' is not key:value")))?;
            match key {
                "p" => place = Some(Place::from_str(value)?),
                "base" => {
                    base = Some(value.parse::<u64>().map_err(|_| {
                        Error::Parse(format!("measure base '{value}' is not an integer"))
                    })?)
                }
                "digits" => {
                    let ds: Result<Vec<u64>> = value
                        .split(',')
                        .map(|t| {
                            t.parse::<u64>().map_err(|_| {
                                Error::Parse(format!("measure digit '{t}' is not an integer"))
                            })
                        })
                        .collect();
                    digits = Some(ds?);
                }
                "weights" => {
                    let ws: Result<Vec<Rational>> =
                        value.split(',').map(parse_rational).collect();
                    weights = Some(ws?);
                }
                "d" => {
                    dim = Some(value.parse::<usize>().map_err(|_| {
                        Error::Parse(format!("measure d '{value}' is not an integer"))
                    })?)
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "measure key '{key}' is not p, base, digits, weights or d"
                    )))
                }
            }
        }
        let place =
            place.ok_or_else(|| Error::Parse("measure needs a place, e.g. p:3".into()))?;
        let _ = dim; // the ambient dimension is taken from the campaign
        Ok(MeasureSpec {
            place,
            base,
            digits,
            weights,
        })
    }

    pub fn build(&self, d: usize) -> Result<DigitMeasure> {
        let base = match (self.place, self.base) {
            (Place::Finite(p), Some(b)) if b != p => {
                return Err(Error::Domain(format!(
                    "measure base {b} contradicts the place {p}"
                )))
            }
            (Place::Finite(p), _) => p,
            (Place::Infinity, Some(b)) => b,
            (Place::Infinity, None) => 2,
        };
        let digits = match &self.digits {
            Some(ds) => ds.clone(),
            None => (0..base).collect(),
        };
        match &self.weights {
            None => DigitMeasure::uniform(self.place, base, d, &digits),
            Some(ws) => {
                if ws.len() != digits.len() {
                    return Err(Error::Domain(format!(
                        "{} weights for {} digits",
                        ws.len(),
                        digits.len()
                    )));
                }
                DigitMeasure::new(
                    self.place,
                    base,
                    d,
                    vec![digits; d],
                    Some(vec![ws.clone(); d]),
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved campaign settings with every default applied.
#[derive(Clone, Debug)]
pub struct Settings {
    pub s: PlaceSet,
    pub d: usize,
    pub n_min: u32,
    pub n_max: u32,
    pub n0: u32,
    pub psi: Option<PsiFunction>,
    /// None means "auto": derive alpha from the measure.
    pub alpha: Option<Rational>,
    pub measures: Vec<MeasureSpec>,
    pub seed: u64,
    pub sample_count: usize,
    pub precision: usize,
    pub numerator_bound: Option<i64>,
    pub dirichlet_exponent: DirichletExponent,
    pub height_bound: u64,
    pub radius: Option<Rational>,
    pub format: OutputFormat,
    pub out: Option<String>,
    pub timings: bool,
}

/// CLI-side values; None means the flag was absent.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub primes: Option<String>,
    pub infty: bool,
    pub d: Option<usize>,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    pub n0: Option<u32>,
    pub psi: Option<String>,
    pub alpha: Option<String>,
    pub measures: Vec<String>,
    pub seed: Option<u64>,
    pub sample_count: Option<usize>,
    pub precision: Option<usize>,
    pub numerator_bound: Option<i64>,
    pub dirichlet_exponent: Option<String>,
    pub height_bound: Option<u64>,
    pub radius: Option<String>,
    pub format: Option<String>,
    pub out: Option<String>,
    pub timings: bool,
}

fn parse_key<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("config key '{key}': bad value '{value}'")))
}

pub fn resolve(file: &[(String, String)], cli: &Overrides) -> Result<Settings> {
    // last occurrence wins for every key except measure, which repeats
    let mut single: BTreeMap<&str, &str> = BTreeMap::new();
    let mut file_measures: Vec<&str> = Vec::new();
    for (k, v) in file {
        if k == "measure" {
            file_measures.push(v);
        } else {
            single.insert(k.as_str(), v.as_str());
        }
    }

    let primes_text = cli
        .primes
        .as_deref()
        .or_else(|| single.get("primes").copied());
    let mut primes: Vec<u64> = Vec::new();
    if let Some(text) = primes_text {
        for tok in text.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            primes.push(parse_key::<u64>("primes", tok)?);
        }
    }
    let infty = cli.infty
        || match single.get("infty") {
            Some(v) => parse_key::<bool>("infty", v)?,
            None => false,
        };
    if primes.is_empty() && !infty {
        return Err(Error::Parse(
            "the place set is empty: pass --primes and/or --infty".into(),
        ));
    }
    let s = PlaceSet::from_primes(&primes, infty)?;

    let d = match (cli.d, single.get("d")) {
        (Some(v), _) => v,
        (None, Some(v)) => parse_key("d", v)?,
        (None, None) => 1,
    };
    if d == 0 {
        return Err(Error::Parse("config key 'd': dimension must be >= 1".into()));
    }
    let n_min = match (cli.n_min, single.get("n-min")) {
        (Some(v), _) => v,
        (None, Some(v)) => parse_key("n-min", v)?,
        (None, None) => 0,
    };
    let n_max = match (cli.n_max, single.get("n-max")) {
        (Some(v), _) => v,
        (None, Some(v)) => parse_key("n-max", v)?,
        (None, None) => 6,
    };
    if n_max < n_min {
        return Err(Error::Parse(format!(
            "config key 'n-max': {n_max} is below n-min {n_min}"
        )));
    }
    let n0 = match (cli.n0, single.get("n0")) {
        (Some(v), _) => v,
        (None, Some(v)) => parse_key("n0", v)?,
        (None, None) => 1,
    };

    let psi_text = cli.psi.as_deref().or_else(|| single.get("psi").copied());
    let psi = match psi_text {
        Some(text) => Some(PsiFunction::parse(text)?),
        None => None,
    };
    if let Some(p) = &psi {
        p.validate(n_max.max(8))
            .map_err(|e| Error::Parse(format!("config key 'psi': {e}")))?;
    }

    let alpha_text = cli
        .alpha
        .as_deref()
        .or_else(|| single.get("alpha").copied())
        .unwrap_or("auto");
    let alpha = if alpha_text == "auto" {
        None
    } else {
        Some(
            parse_rational(alpha_text)
                .map_err(|_| Error::Parse(format!("config key 'alpha': bad value '{alpha_text}' (a rational or 'auto')")))?,
        )
    };

    let mut measures = Vec::new();
    for text in file_measures {
        measures.push(MeasureSpec::parse(text)?);
    }
    for text in &cli.measures {
        measures.push(MeasureSpec::parse(text)?);
    }
    for spec in &measures {
        if !s.contains(spec.place) {
            return Err(Error::Parse(format!(
                "config key 'measure': place {} is outside the set {}",
                spec.place, s
            )));
        }
    }

    let seed = match (cli.seed, single.get("seed")) {
        (Some(v), _) => v,
        (None, Some(v)) => parse_key("seed", v)?,
        (None, None) => 0,
    };
    let sample_count = match (cli.sample_count, single.get("sample-count")) {
        (Some(v), _) => v,
        (None, Some(v)) => parse_key("sample-count", v)?,
        (None, None) => 100,
    };
    let precision = match (cli.precision, single.get("precision")) {
        (Some(v), _) => v,
        (None, Some(v)) => parse_key("precision", v)?,
        (None, None) => 256,
    };
    let numerator_bound = match (cli.numerator_bound, single.get("numerator-bound")) {
        (Some(v), _) => Some(v),
        (None, Some(v)) => Some(parse_key("numerator-bound", v)?),
        (None, None) => None,
    };
    let exp_text = cli
        .dirichlet_exponent
        .as_deref()
        .or_else(|| single.get("dirichlet-exponent").copied())
        .unwrap_or("denominator");
    let dirichlet_exponent = match exp_text {
        "denominator" => DirichletExponent::Denominator,
        "classical" => DirichletExponent::Classical,
        other => {
            return Err(Error::Parse(format!(
                "config key 'dirichlet-exponent': '{other}' is not denominator or classical"
            )))
        }
    };
    let height_bound = match (cli.height_bound, single.get("height-bound")) {
        (Some(v), _) => v,
        (None, Some(v)) => parse_key("height-bound", v)?,
        (None, None) => 1024,
    };
    let radius_text = cli
        .radius
        .as_deref()
        .or_else(|| single.get("radius").copied());
    let radius = match radius_text {
        Some(text) => Some(
            parse_rational(text)
                .map_err(|_| Error::Parse(format!("config key 'radius': bad value '{text}'")))?,
        ),
        None => None,
    };
    let format_text = cli
        .format
        .as_deref()
        .or_else(|| single.get("format").copied())
        .unwrap_or("csv");
    let format = match format_text {
        "csv" => OutputFormat::Csv,
        "json" => OutputFormat::Json,
        other => {
            return Err(Error::Parse(format!(
                "config key 'format': '{other}' is not csv or json"
            )))
        }
    };
    let out = cli
        .out
        .clone()
        .or_else(|| single.get("out").map(|v| v.to_string()));
    let timings = cli.timings
        || match single.get("timings") {
            Some(v) => parse_key::<bool>("timings", v)?,
            None => false,
        };

    Ok(Settings {
        s,
        d,
        n_min,
        n_max,
        n0,
        psi,
        alpha,
        measures,
        seed,
        sample_count,
        precision,
        numerator_bound,
        dirichlet_exponent,
        height_bound,
        radius,
        format,
        out,
        timings,
    })
}

impl Settings {
    /// The product measure for sampling campaigns: configured places
    /// keep their spec, every other place of S gets the full uniform
    /// digit measure (base 2 at the real place).
    pub fn product_measure(&self) -> Result<Arc<ProductMeasure>> {
        let mut components = Vec::new();
        for &place in self.s.places() {
            let spec = self.measures.iter().find(|m| m.place == place);
            let comp = match spec {
                Some(spec) => spec.build(self.d)?,
                None => match place {
                    Place::Finite(p) => DigitMeasure::full(place, p, self.d)?,
                    Place::Infinity => DigitMeasure::full(place, 2, self.d)?,
                },
            };
            components.push(comp);
        }
        Ok(Arc::new(ProductMeasure::new(components)?))
    }

    /// True when every component is the plain uniform measure on all
    /// digits, which is what the residue-bucket fast paths assume.
    pub fn measure_is_full(&self) -> bool {
        self.measures.iter().all(|m| {
            m.weights.is_none()
                && match (&m.digits, m.place, m.base) {
                    (None, _, _) => true,
                    (Some(ds), Place::Finite(p), _) => {
                        ds.len() as u64 == p && (0..p).all(|x| ds.contains(&x))
                    }
                    (Some(ds), Place::Infinity, base) => {
                        let b = base.unwrap_or(2);
                        ds.len() as u64 == b && (0..b).all(|x| ds.contains(&x))
                    }
                }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_text_parses_in_order() {
        let text = "# survey over Z_3\nprimes = 3\nn-max = 4\n\nmeasure = p:3 digits:0,2\n";
        let pairs = parse_config_text(text).unwrap();
        assert_eq!(pairs.len(), 3);
        assert_eq!(pairs[0], ("primes".into(), "3".into()));
        assert_eq!(pairs[2].1, "p:3 digits:0,2");
    }

    #[test]
    fn malformed_lines_name_the_offense() {
        let err = parse_config_text("primes 2,3\n").unwrap_err();
        assert!(err.to_string().contains("primes 2,3"), "{err}");
        let err = parse_config_text("primse = 2\n").unwrap_err();
        assert!(err.to_string().contains("primse"), "{err}");
        let err = parse_config_text("primes = 3\nd = x\n")
            .and_then(|file| resolve(&file, &Overrides::default()))
            .unwrap_err();
        assert!(err.to_string().contains("'d'"), "{err}");
    }

    #[test]
    fn cli_overrides_file_keys() {
        let file = parse_config_text("primes = 2\nseed = 7\nn-max = 3\n").unwrap();
        let cli = Overrides {
            seed: Some(99),
            ..Overrides::default()
        };
        let settings = resolve(&file, &cli).unwrap();
        assert_eq!(settings.seed, 99);
        assert_eq!(settings.n_max, 3);
        assert_eq!(settings.s.to_string(), "2");
        assert_eq!(settings.n0, 1);
    }

    #[test]
    fn empty_place_set_is_an_error() {
        let err = resolve(&[], &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("place set"), "{err}");
    }

    #[test]
    fn measure_specs_build_weighted_components() {
        let spec = MeasureSpec::parse("p:3 digits:0,2 weights:1/4,3/4").unwrap();
        let m = spec.build(1).unwrap();
        assert_eq!(m.digits(0), &[0, 2]);
        assert_eq!(
            m.weight(0, 2),
            Some(&Rational::new(3.into(), 4.into()))
        );
        let real = MeasureSpec::parse("p:inf base:2").unwrap().build(2).unwrap();
        assert_eq!(real.base(), 2);
        assert_eq!(real.d(), 2);
        assert!(MeasureSpec::parse("q:3").is_err());
        assert!(MeasureSpec::parse("p:3 base:5").unwrap().build(1).is_err());
    }

    #[test]
    fn full_measure_detection() {
        let file = parse_config_text("primes = 3\nmeasure = p:3 digits:0,1,2\n").unwrap();
        assert!(resolve(&file, &Overrides::default()).unwrap().measure_is_full());
        let file = parse_config_text("primes = 3\nmeasure = p:3 digits:0,2\n").unwrap();
        assert!(!resolve(&file, &Overrides::default()).unwrap().measure_is_full());
    }
}
