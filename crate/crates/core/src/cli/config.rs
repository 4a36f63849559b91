//! Run configuration from `key = value` files and `--key value` flags.

use std::fmt;
use std::path::PathBuf;

use crate::exponents::Dimension;
use crate::family::{f_alpha, FamilyParameter};
use crate::nonlinearity::{Affine, Exponential, LaneEmden, Nonlinearity, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Exponents,
    Family,
    Solve,
    Stability,
    Classify,
    Sweep,
    Verify,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Exponents,
        Command::Family,
        Command::Solve,
        Command::Stability,
        Command::Classify,
        Command::Sweep,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Exponents => "exponents",
            Command::Family => "family",
            Command::Solve => "solve",
            Command::Stability => "stability",
            Command::Classify => "classify",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Entry of the built-in nonlinearity catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlinearitySpec {
    PowerFamily(f64),
    Exponential,
    LaneEmden(f64),
    Zero,
    Affine { offset: f64, slope: f64 },
}

impl NonlinearitySpec {
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        let (name, args) = match text.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| format!("missing `)` in `{text}`"))?;
                let args = inner
                    .split(',')
                    .map(|a| {
                        a.trim()
                            .parse::<f64>()
                            .map_err(|_| format!("bad number `{}` in `{text}`", a.trim()))
                    })
                    .collect::<Result<Vec<f64>, String>>()?;
                (name.trim(), args)
            }
            None => (text, Vec::new()),
        };
        let arity = |k: usize| {
            if args.len() == k && args.iter().all(|a| a.is_finite()) {
                Ok(())
            } else {
                Err(format!(
                    "`{name}` takes {k} finite argument(s), got `{text}`"
                ))
            }
        };
        match name {
            "power-family" => arity(1).map(|_| NonlinearitySpec::PowerFamily(args[0])),
            "exponential" => arity(0).map(|_| NonlinearitySpec::Exponential),
            "lane-emden" => {
                arity(1)?;
                if args[0] < 1.0 {
                    return Err(format!("lane-emden exponent must be >= 1, got {}", args[0]));
                }
                Ok(NonlinearitySpec::LaneEmden(args[0]))
            }
            "zero" => arity(0).map(|_| NonlinearitySpec::Zero),
            "affine" => arity(2).map(|_| NonlinearitySpec::Affine { offset: args[0], slope: args[1] }),
            _ => Err(format!(
                "unknown nonlinearity `{name}` (expected power-family(a), exponential, lane-emden(p), zero, affine(a, b))"
            )),
        }
    }

    pub fn build(self, n: Dimension) -> Box<dyn Nonlinearity> {
        match self {
            NonlinearitySpec::PowerFamily(a) => Box::new(f_alpha(
                FamilyParameter::new(a).expect("validated finite"),
                n,
            )),
            NonlinearitySpec::Exponential => Box::new(Exponential),
            NonlinearitySpec::LaneEmden(p) => Box::new(LaneEmden { p }),
            NonlinearitySpec::Zero => Box::new(Zero),
            NonlinearitySpec::Affine { offset, slope } => Box::new(Affine { offset, slope }),
        }
    }
}

impl fmt::Display for NonlinearitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonlinearitySpec::PowerFamily(a) => write!(f, "power-family({a})"),
            NonlinearitySpec::Exponential => write!(f, "exponential"),
            NonlinearitySpec::LaneEmden(p) => write!(f, "lane-emden({p})"),
            NonlinearitySpec::Zero => write!(f, "zero"),
            NonlinearitySpec::Affine { offset, slope } => write!(f, "affine({offset}, {slope})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub dimension: Dimension,
    /// Inclusive dimension range for `exponents` and `sweep`.
    pub dimension_range: Option<(u32, u32)>,
    pub alpha: Option<f64>,
    pub alpha_range: Option<(f64, f64)>,
    pub steps: usize,
    pub nonlinearity: Option<NonlinearitySpec>,
    pub u1: Option<f64>,
    pub du1: Option<f64>,
    pub horizon: f64,
    pub grid_points: usize,
    pub eigen_dofs: usize,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            dimension: Dimension::new(3).expect("valid"),
            dimension_range: None,
            alpha: None,
            alpha_range: None,
            steps: 61,
            nonlinearity: None,
            u1: None,
            du1: None,
            horizon: 1e4,
            grid_points: 2001,
            eigen_dofs: 400,
            output_path: None,
            output_format: OutputFormat::Csv,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, message: impl Into<String>) -> Self {
        ConfigError {
            key: Some(key.to_string()),
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "config line {line}: ")?;
        }
        match &self.key {
            Some(key) => write!(f, "`{key}`: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

pub const KEYS: [&str; 16] = [
    "command",
    "config",
    "dimension",
    "dimension_range",
    "alpha",
    "alpha_range",
    "steps",
    "nonlinearity",
    "u1",
    "du1",
    "horizon",
    "grid_points",
    "eigen_dofs",
    "output",
    "format",
    "seed",
];

/// Parses command-line arguments, loading a `--config` file if one is named.
pub fn parse_args(args: &[String]) -> Result<RunConfig, ConfigError> {
    let pairs = flag_pairs(args)?;
    let file = match pairs.iter().rev().find(|(k, _)| k == "config") {
        Some((_, path)) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new("config", format!("cannot read `{path}`: {e}")))?,
        ),
        None => None,
    };
    parse_config(args, file.as_deref())
}

/// Builds a configuration from flags and the text of an optional config
/// file. Flags override file entries.
pub fn parse_config(args: &[String], file: Option<&str>) -> Result<RunConfig, ConfigError> {
    let mut entries: Vec<(String, String, Option<usize>)> = Vec::new();
    if let Some(text) = file {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError {
                key: None,
                line: Some(line),
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) || key == "config" {
                return Err(ConfigError {
                    key: Some(key),
                    line: Some(line),
                    message: "unknown key".into(),
                });
            }
            entries.push((key, value.trim().to_string(), Some(line)));
        }
    }
    entries.extend(flag_pairs(args)?.into_iter().map(|(k, v)| (k, v, None)));

    let command = entries
        .iter()
        .rev()
        .find(|(k, _, _)| k == "command")
        .map(|(_, v, line)| Command::parse(v).ok_or_else(|| (v.clone(), *line)))
        .transpose()
        .map_err(|(v, line)| ConfigError { key: Some("command".into()), line, message: format!("unknown command `{v}`") })?
        .ok_or_else(|| {
            ConfigError::new("command", "missing; expected one of exponents, family, solve, stability, classify, sweep, verify")
        })?;

    let mut cfg = RunConfig::new(command);
    for (key, value, line) in &entries {
        apply(&mut cfg, key, value).map_err(|mut e| {
            e.line = *line;
            e
        })?;
    }
    Ok(cfg)
}

/// `[positional command] --key value | --key=value ...` into key/value pairs.
fn flag_pairs(args: &[String]) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        if let Some(flag) = arg.strip_prefix("--") {
            let (key, value) = match flag.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = args
                        .get(i + 1)
                        .ok_or_else(|| ConfigError::new(flag, "missing value"))?;
                    i += 1;
                    (flag.to_string(), v.clone())
                }
            };
            let key = key.replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(ConfigError::new(&key, "unknown flag"));
            }
            out.push((key, value));
        } else if i == 0 {
            out.push(("command".to_string(), arg.clone()));
        } else {
            return Err(ConfigError {
                key: None,
                line: None,
                message: format!("unexpected argument `{arg}`"),
            });
        }
        i += 1;
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| ConfigError::new(key, format!("malformed value `{value}`")))
}

fn real(key: &str, value: &str) -> Result<f64, ConfigError> {
    let x: f64 = number(key, value)?;
    if !x.is_finite() {
        return Err(ConfigError::new(
            key,
            format!("must be finite, got `{value}`"),
        ));
    }
    Ok(x)
}

fn range<T: std::str::FromStr + PartialOrd + Copy>(
    key: &str,
    value: &str,
) -> Result<(T, T), ConfigError> {
    let (lo, hi) = value
        .split_once("..")
        .ok_or_else(|| ConfigError::new(key, format!("expected `lo..hi`, got `{value}`")))?;
    let (lo, hi): (T, T) = (number(key, lo)?, number(key, hi)?);
    if !(lo <= hi) {
        return Err(ConfigError::new(key, format!("empty range `{value}`")));
    }
    Ok((lo, hi))
}

fn dimension(key: &str, n: u32) -> Result<Dimension, ConfigError> {
    Dimension::new(n).map_err(|e| ConfigError::new(key, e.to_string()))
}

fn apply(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), ConfigError> {
    match key {
        "command" | "config" => {}
        "dimension" => cfg.dimension = dimension(key, number(key, value)?)?,
        "dimension_range" => {
            let (lo, hi) = range::<u32>(key, value)?;
            dimension(key, lo)?;
            cfg.dimension_range = Some((lo, hi));
        }
        "alpha" => cfg.alpha = Some(real(key, value)?),
        "alpha_range" => {
            let (lo, hi) = range::<f64>(key, value)?;
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(ConfigError::new(key, "bounds must be finite"));
            }
            cfg.alpha_range = Some((lo, hi));
        }
        "steps" => {
            cfg.steps = number(key, value)?;
            if cfg.steps < 1 {
                return Err(ConfigError::new(key, "must be >= 1"));
            }
        }
        "nonlinearity" => {
            cfg.nonlinearity =
                Some(NonlinearitySpec::parse(value).map_err(|m| ConfigError::new(key, m))?)
        }
        "u1" => cfg.u1 = Some(real(key, value)?),
        "du1" => cfg.du1 = Some(real(key, value)?),
        "horizon" => {
            cfg.horizon = real(key, value)?;
            if !(cfg.horizon > 1.0) {
                return Err(ConfigError::new(key, format!("must be > 1, got {value}")));
            }
        }
        "grid_points" => {
            cfg.grid_points = number(key, value)?;
            if cfg.grid_points < 2 {
                return Err(ConfigError::new(key, "must be >= 2"));
            }
        }
        "eigen_dofs" => {
            cfg.eigen_dofs = number(key, value)?;
            if cfg.eigen_dofs < 3 {
                return Err(ConfigError::new(key, "must be >= 3"));
            }
        }
        "output" => cfg.output_path = Some(PathBuf::from(value)),
        "format" => {
            cfg.output_format = match value {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                _ => {
                    return Err(ConfigError::new(
                        key,
                        format!("expected csv or json, got `{value}`"),
                    ))
                }
            }
        }
        "seed" => cfg.seed = number(key, value)?,
        _ => return Err(ConfigError::new(key, "unknown key")),
    }
    Ok(())
}
