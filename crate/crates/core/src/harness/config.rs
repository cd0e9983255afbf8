//! Run configuration: a TOML file, command-line overrides, validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::chamber::MAX_RANK;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    #[default]
    Verify,
    Scan,
    Walk,
    Tables,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "verify" => Ok(Suite::Verify),
            "scan" => Ok(Suite::Scan),
            "walk" => Ok(Suite::Walk),
            "tables" => Ok(Suite::Tables),
            _ => Err(format!("unknown suite `{s}` (expected verify, scan, walk or tables)")),
        }
    }
}

/// A configuration problem, tagged with the offending field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { field: field.into(), message: message.into() }
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`), whitespace ignored.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse `{text}` as a complex number");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // the imaginary part starts at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .unwrap_or(0);
    let (re_text, im_text) = body.split_at(split);
    let re = if re_text.is_empty() { 0.0 } else { re_text.parse::<f64>().map_err(|_| bad())? };
    let im = match im_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn format_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn serialize_lambda<S: Serializer>(lambda: &[Complex64], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(lambda.iter().map(format_complex))
}

/// A complex entry in the file: a bare number or a string such as `"1+0.3i"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ComplexEntry {
    Real(f64),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    q: Option<i64>,
    p: Option<f64>,
    l: Option<f64>,
    lambda: Option<Vec<ComplexEntry>>,
    n_samples: Option<i64>,
    seed: Option<u64>,
    suite: Option<String>,
    tolerances: Option<BTreeMap<String, f64>>,
    output_path: Option<String>,
}

/// Command-line values that replace file values.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub q: Option<i64>,
    pub p: Option<f64>,
    pub l: Option<f64>,
    /// Comma-separated complex list.
    pub lambda: Option<String>,
    pub n_samples: Option<i64>,
    pub seed: Option<u64>,
    pub suite: Option<Suite>,
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub q: usize,
    pub p: f64,
    pub l: f64,
    #[serde(serialize_with = "serialize_lambda")]
    pub lambda: Vec<Complex64>,
    pub n_samples: usize,
    pub seed: u64,
    pub suite: Suite,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 1,
            p: 3.0,
            l: 0.5,
            lambda: vec![Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.3)],
            n_samples: 100_000,
            seed: 42,
            suite: Suite::Verify,
            tolerances: BTreeMap::new(),
            output_path: None,
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} p={} l={} n={} seed={}", self.q, self.p, self.l, self.n_samples, self.seed)
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str, overrides: &Overrides) -> Result<Self, ConfigError> {
        let file: FileConfig = toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let field = message
                .split('`')
                .nth(1)
                .filter(|_| message.starts_with("unknown field"))
                .unwrap_or("<file>")
                .to_string();
            ConfigError::new(field, message)
        })?;
        Self::assemble(file, overrides)
    }

    /// Reads `path` if given, otherwise starts from the defaults.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, ConfigError> {
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| ConfigError::new("<file>", format!("{}: {e}", p.display())))?;
                Self::from_toml_str(&text, overrides)
            }
            None => Self::assemble(FileConfig::default(), overrides),
        }
    }

    fn assemble(file: FileConfig, o: &Overrides) -> Result<Self, ConfigError> {
        let d = RunConfig::default();
        let q = o.q.or(file.q).unwrap_or(d.q as i64);
        if q < 1 || q > MAX_RANK as i64 {
            return Err(ConfigError::new("q", format!("rank must lie in 1..={MAX_RANK}, got {q}")));
        }
        let q = q as usize;
        let p = o.p.or(file.p).unwrap_or(d.p);
        if !p.is_finite() || p < 2.0 * q as f64 - 1.0 {
            return Err(ConfigError::new("p", format!("need p >= 2q-1 = {}, got {p}", 2 * q - 1)));
        }
        let l = o.l.or(file.l).unwrap_or(d.l);
        if !l.is_finite() {
            return Err(ConfigError::new("l", "must be finite"));
        }
        let lambda = match (&o.lambda, file.lambda) {
            (Some(text), _) => text
                .split(',')
                .enumerate()
                .map(|(i, s)| parse_complex(s).map_err(|m| ConfigError::new(format!("lambda[{i}]"), m)))
                .collect::<Result<Vec<_>, _>>()?,
            (None, Some(entries)) => entries
                .into_iter()
                .enumerate()
                .map(|(i, e)| match e {
                    ComplexEntry::Real(x) => Ok(Complex64::new(x, 0.0)),
                    ComplexEntry::Text(s) => parse_complex(&s).map_err(|m| ConfigError::new(format!("lambda[{i}]"), m)),
                })
                .collect::<Result<Vec<_>, _>>()?,
            (None, None) => d.lambda,
        };
        if let Some(i) = lambda.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(ConfigError::new(format!("lambda[{i}]"), "must be finite"));
        }
        let n = o.n_samples.or(file.n_samples).unwrap_or(d.n_samples as i64);
        if n < 1 {
            return Err(ConfigError::new("n_samples", format!("must be at least 1, got {n}")));
        }
        let suite = match (o.suite, file.suite) {
            (Some(s), _) => s,
            (None, Some(text)) => text.parse().map_err(|m| ConfigError::new("suite", m))?,
            (None, None) => d.suite,
        };
        let tolerances = file.tolerances.unwrap_or_default();
        for (name, &tol) in &tolerances {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(ConfigError::new(format!("tolerances.{name}"), format!("must be positive, got {tol}")));
            }
            if !super::registry::is_known(name) {
                return Err(ConfigError::new(format!("tolerances.{name}"), "no check with this name"));
            }
        }
        Ok(RunConfig {
            q,
            p,
            l,
            lambda,
            n_samples: n as usize,
            seed: o.seed.or(file.seed).unwrap_or(d.seed),
            suite,
            tolerances,
            output_path: o.output_path.clone().or(file.output_path.map(PathBuf::from)),
        })
    }
}
