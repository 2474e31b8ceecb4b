use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;

use crate::fz2::Entangler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Algorithm {
    Fz1,
    Fz2,
    #[default]
    Both,
}

impl Algorithm {
    pub fn runs_fz1(self) -> bool {
        matches!(self, Self::Fz1 | Self::Both)
    }

    pub fn runs_fz2(self) -> bool {
        matches!(self, Self::Fz2 | Self::Both)
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fz1" => Ok(Self::Fz1),
            "fz2" => Ok(Self::Fz2),
            "both" => Ok(Self::Both),
            other => Err(format!("expected fz1, fz2 or both, got `{other}`")),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fz1 => "fz1",
            Self::Fz2 => "fz2",
            Self::Both => "both",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{message}")]
    Cli { message: String, informational: bool },
    #[error("cannot read config file {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: PathBuf, line: usize },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("`{key}`: {reason}")]
    Invariant { key: &'static str, reason: String },
}

impl ConfigError {
    /// Help and version requests are reported through this error type but
    /// are not failures.
    pub fn is_informational(&self) -> bool {
        matches!(self, Self::Cli { informational: true, .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub algorithm: Algorithm,
    pub delta: f64,
    pub omega: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub a_steps: usize,
    pub lambda: f64,
    pub trotter_steps: usize,
    /// Shots per expectation value; 0 evaluates exactly.
    pub shots: u64,
    pub iqpe_bits: u32,
    pub iqpe_shots: u64,
    pub iqpe_repeats: usize,
    pub j_max: usize,
    pub restarts: usize,
    pub seed: u64,
    pub entangler: Entangler,
    pub out_path: PathBuf,
    pub svg_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Both,
            delta: 1.0,
            omega: 2.5,
            a_min: 0.0,
            a_max: 2.0,
            a_steps: 9,
            lambda: 5.0,
            trotter_steps: 100,
            shots: 10_000,
            iqpe_bits: 5,
            iqpe_shots: 100,
            iqpe_repeats: 20,
            j_max: 1,
            restarts: 8,
            seed: 2021,
            entangler: Entangler::SxSigmaX,
            out_path: PathBuf::from("floquet_sweep.csv"),
            svg_path: None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "floquet-sweep",
    version,
    about = "Sweep the drive amplitude and compute Floquet quasi-energy bands",
    allow_negative_numbers = true
)]
struct Cli {
    /// fz1, fz2 or both.
    #[arg(long)]
    algorithm: Option<Algorithm>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long = "a-min")]
    a_min: Option<f64>,
    #[arg(long = "a-max")]
    a_max: Option<f64>,
    #[arg(long = "a-steps")]
    a_steps: Option<usize>,
    /// Deflation penalty weight.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "trotter-steps")]
    trotter_steps: Option<usize>,
    /// Shots per expectation value; 0 for exact expectation values.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long = "iqpe-bits")]
    iqpe_bits: Option<u32>,
    #[arg(long = "iqpe-shots")]
    iqpe_shots: Option<u64>,
    #[arg(long = "iqpe-repeats")]
    iqpe_repeats: Option<usize>,
    /// Fourier truncation order for fz2.
    #[arg(long)]
    jmax: Option<usize>,
    /// Random optimizer starts per solution.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Entangling gate of the fz2 ansatz: sx-sigma-x or sx-sigma-y.
    #[arg(long)]
    entangler: Option<Entangler>,
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional SVG plot path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl SweepConfig {
    /// Sets one field from its command-line name (`a-min`, `iqpe-bits`, ...).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.replace('_', "-");
        let k = key.as_str();
        match k {
            "algorithm" => self.algorithm = parse_value(k, value)?,
            "delta" => self.delta = parse_value(k, value)?,
            "omega" => self.omega = parse_value(k, value)?,
            "a-min" => self.a_min = parse_value(k, value)?,
            "a-max" => self.a_max = parse_value(k, value)?,
            "a-steps" => self.a_steps = parse_value(k, value)?,
            "lambda" => self.lambda = parse_value(k, value)?,
            "trotter-steps" => self.trotter_steps = parse_value(k, value)?,
            "shots" => self.shots = parse_value(k, value)?,
            "iqpe-bits" => self.iqpe_bits = parse_value(k, value)?,
            "iqpe-shots" => self.iqpe_shots = parse_value(k, value)?,
            "iqpe-repeats" => self.iqpe_repeats = parse_value(k, value)?,
            "jmax" | "j-max" => self.j_max = parse_value(k, value)?,
            "restarts" => self.restarts = parse_value(k, value)?,
            "seed" => self.seed = parse_value(k, value)?,
            "entangler" => self.entangler = parse_value(k, value)?,
            "out" | "out-path" => self.out_path = PathBuf::from(value),
            "svg" | "svg-path" => self.svg_path = Some(PathBuf::from(value)),
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                path: path.to_path_buf(),
                line: n + 1,
            })?;
            self.set(key.trim(), value.trim().trim_matches('"'))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |key: &'static str, reason: &str| {
            Err(ConfigError::Invariant {
                key,
                reason: reason.to_string(),
            })
        };
        if !self.delta.is_finite() {
            return fail("delta", "must be finite");
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return fail("omega", "must be positive");
        }
        if !(self.a_min.is_finite() && self.a_max.is_finite()) {
            return fail("a-min", "amplitude bounds must be finite");
        }
        if self.a_min > self.a_max {
            return fail("a-min", "must not exceed a-max");
        }
        if self.a_steps == 0 {
            return fail("a-steps", "must be at least 1");
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return fail("lambda", "must be positive");
        }
        if self.trotter_steps == 0 {
            return fail("trotter-steps", "must be at least 1");
        }
        if !(1..=52).contains(&self.iqpe_bits) {
            return fail("iqpe-bits", "must be in 1..=52");
        }
        if self.iqpe_shots == 0 {
            return fail("iqpe-shots", "must be at least 1");
        }
        if self.iqpe_repeats == 0 {
            return fail("iqpe-repeats", "must be at least 1");
        }
        if self.algorithm.runs_fz2() && self.j_max != 1 {
            return fail("jmax", "the fz2 ansatz is defined for jmax = 1 only");
        }
        if self.j_max == 0 {
            return fail("jmax", "must be at least 1");
        }
        if self.restarts == 0 {
            return fail("restarts", "must be at least 1");
        }
        Ok(())
    }
}

/// Builds a validated config from `argv` (including the program name).
/// Precedence: command-line flags, then the `--config` file, then defaults.
pub fn parse_config<I, T>(argv: I) -> Result<SweepConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| ConfigError::Cli {
        message: e.to_string(),
        informational: matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ),
    })?;
    let mut config = SweepConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    macro_rules! overlay {
        ($($field:ident => $target:ident),* $(,)?) => {
            $(if let Some(v) = cli.$field.clone() {
                config.$target = v;
            })*
        };
    }
    overlay!(
        algorithm => algorithm,
        delta => delta,
        omega => omega,
        a_min => a_min,
        a_max => a_max,
        a_steps => a_steps,
        lambda => lambda,
        trotter_steps => trotter_steps,
        shots => shots,
        iqpe_bits => iqpe_bits,
        iqpe_shots => iqpe_shots,
        iqpe_repeats => iqpe_repeats,
        jmax => j_max,
        restarts => restarts,
        seed => seed,
        entangler => entangler,
        out => out_path,
    );
    if let Some(svg) = cli.svg {
        config.svg_path = Some(svg);
    }
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<SweepConfig, ConfigError> {
        parse_config(std::iter::once("floquet-sweep").chain(args.iter().copied()))
    }

    #[test]
    fn empty_argv_gives_defaults() {
        assert_eq!(parse(&[]).unwrap(), SweepConfig::default());
        let d = SweepConfig::default();
        assert_eq!((d.delta, d.omega, d.lambda, d.trotter_steps), (1.0, 2.5, 5.0, 100));
        assert_eq!((d.shots, d.iqpe_bits, d.iqpe_shots, d.j_max), (10_000, 5, 100, 1));
    }

    #[test]
    fn flags_override() {
        let c = parse(&["--a-min", "0", "--a-max", "2", "--a-steps", "9", "--algorithm", "fz1", "--jmax", "3"]).unwrap();
        assert_eq!((c.a_min, c.a_max, c.a_steps), (0.0, 2.0, 9));
        assert_eq!(c.algorithm, Algorithm::Fz1);
        assert_eq!(c.j_max, 3);
    }

    #[test]
    fn negative_shots_rejected_naming_key() {
        assert!(parse(&["--help"]).unwrap_err().is_informational());
        let err = parse(&["--shots", "-5"]).unwrap_err();
        assert!(!err.is_informational());
        let msg = err.to_string();
        assert!(msg.contains("--shots"), "{msg}");
        let err = parse(&["--a-steps", "0"]).unwrap_err();
        assert!(err.to_string().contains("a-steps"));
        assert!(parse(&["--a-min", "1", "--a-max", "0"]).is_err());
        assert!(parse(&["--omega", "-2.5"]).unwrap_err().to_string().contains("omega"));
        assert!(parse(&["--algorithm", "fz2", "--jmax", "2"]).is_err());
    }

    #[test]
    fn file_then_flags() {
        let dir = std::env::temp_dir().join(format!("floquet-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sweep.cfg");
        std::fs::write(&path, "# sweep\nshots = 0\na_steps = 3 # trailing\nseed=11\n\nout = \"x.csv\"\n").unwrap();
        let p = path.to_str().unwrap();
        let c = parse(&["--config", p, "--seed", "12"]).unwrap();
        assert_eq!((c.shots, c.a_steps, c.seed), (0, 3, 12));
        assert_eq!(c.out_path, PathBuf::from("x.csv"));

        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(matches!(parse(&["--config", p]), Err(ConfigError::UnknownKey(k)) if k == "bogus"));
        std::fs::write(&path, "lambda 3\n").unwrap();
        assert!(matches!(parse(&["--config", p]), Err(ConfigError::Syntax { line: 1, .. })));
        std::fs::write(&path, "iqpe_bits = many\n").unwrap();
        assert!(parse(&["--config", p]).unwrap_err().to_string().contains("iqpe-bits"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
