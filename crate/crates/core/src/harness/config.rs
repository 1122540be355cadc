use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::MAX_SITES;
use crate::error::{Error, Result};
use crate::kernel::{Field, Mode, Qi};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "SUPERBETHE_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Defs,
    Izergin,
    Appendix,
    Chain,
    BetheEqual,
    Actions,
    OnshellExact,
    OnshellNumeric,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Defs,
        Suite::Izergin,
        Suite::Appendix,
        Suite::Chain,
        Suite::BetheEqual,
        Suite::Actions,
        Suite::OnshellExact,
        Suite::OnshellNumeric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Defs => "defs",
            Suite::Izergin => "izergin",
            Suite::Appendix => "appendix",
            Suite::Chain => "chain",
            Suite::BetheEqual => "bethe-equal",
            Suite::Actions => "actions",
            Suite::OnshellExact => "onshell-exact",
            Suite::OnshellNumeric => "onshell-numeric",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::config("suites", format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::config("format", format!("expected json or text, got `{other}`"))),
        }
    }
}

/// A validated harness configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub sites: usize,
    pub c: Qi,
    pub twist: [Qi; 3],
    pub max_a: usize,
    pub max_b: usize,
    pub max_n: usize,
    pub draws: usize,
    pub seed: u64,
    pub mode: Mode,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Adds one check that always fails, to exercise the exit-code contract.
    pub inject_failure: bool,
    /// Record wall times; when off every `ms` is 0.
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: Suite::ALL.to_vec(),
            sites: 5,
            c: Qi::one(),
            twist: [Qi::one(), Qi::one(), Qi::from_i64(2)],
            max_a: 2,
            max_b: 2,
            max_n: 2,
            draws: 5,
            seed: 0,
            mode: Mode::Exact,
            format: Format::Json,
            out: None,
            inject_failure: false,
            timing: true,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sites == 0 || self.sites > MAX_SITES {
            return Err(Error::config("L", format!("must be in 1..={MAX_SITES}, got {}", self.sites)));
        }
        if self.c.is_zero() {
            return Err(Error::config("c", "must be nonzero"));
        }
        if self.twist.iter().any(|k| k.is_zero()) {
            return Err(Error::config("twist", "entries must be nonzero"));
        }
        if self.max_n == 0 {
            return Err(Error::config("max-n", "must be at least 1"));
        }
        if self.max_a + self.max_n > self.sites {
            return Err(Error::config("max-a", format!("max_a + max_n = {} exceeds L = {}", self.max_a + self.max_n, self.sites)));
        }
        if self.max_b + self.max_n > self.sites {
            return Err(Error::config("max-b", format!("max_b + max_n = {} exceeds L = {}", self.max_b + self.max_n, self.sites)));
        }
        Ok(())
    }

    /// Echo for reports; scalars as exact strings.
    pub fn to_json(&self) -> Value {
        json!({
            "suites": self.suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
            "L": self.sites,
            "c": self.c.to_string(),
            "twist": self.twist.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "max_a": self.max_a,
            "max_b": self.max_b,
            "max_n": self.max_n,
            "draws": self.draws,
            "seed": self.seed,
            "mode": self.mode.to_string(),
        })
    }
}

/// Command-line flags. Every flag is optional so that file values can fill gaps.
#[derive(Debug, Default, Parser)]
#[command(name = "superbethe", version, about = "Exact verification of multiple-action formulas for gl(2|1) Bethe vectors")]
pub struct CliArgs {
    /// Comma-separated subset of: defs, izergin, appendix, chain, bethe-equal, actions, onshell-exact, onshell-numeric
    #[arg(long)]
    pub suites: Option<String>,
    /// Chain length
    #[arg(long = "L")]
    pub sites: Option<usize>,
    /// Shift constant, e.g. 1 or 2/3
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Diagonal twist k1,k2,k3
    #[arg(long, allow_hyphen_values = true)]
    pub twist: Option<String>,
    #[arg(long = "max-a")]
    pub max_a: Option<usize>,
    #[arg(long = "max-b")]
    pub max_b: Option<usize>,
    #[arg(long = "max-n")]
    pub max_n: Option<usize>,
    /// Random instances per check
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// exact or numeric
    #[arg(long)]
    pub mode: Option<String>,
    /// json or text
    #[arg(long)]
    pub format: Option<String>,
    /// Output path; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the keys above; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Append a check that always fails
    #[arg(long)]
    pub inject_failure: bool,
    /// Report every wall time as 0
    #[arg(long)]
    pub no_timing: bool,
}

/// Keys accepted in a configuration file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    suites: Option<Vec<String>>,
    #[serde(rename = "L")]
    sites: Option<usize>,
    c: Option<Value>,
    twist: Option<Vec<Value>>,
    max_a: Option<usize>,
    max_b: Option<usize>,
    max_n: Option<usize>,
    draws: Option<usize>,
    seed: Option<u64>,
    mode: Option<String>,
    format: Option<String>,
    out: Option<PathBuf>,
}

/// `2`, `-2/3` or `1/2+3/4i`.
pub fn parse_scalar(key: &str, s: &str) -> Result<Qi> {
    let s = s.trim();
    let full = if s.ends_with('i') { s.to_string() } else { format!("{s}+0i") };
    full.parse::<Qi>().map_err(|e| Error::config(key, e))
}

fn scalar_from_value(key: &str, v: &Value) -> Result<Qi> {
    match v {
        Value::String(s) => parse_scalar(key, s),
        Value::Number(n) if n.is_i64() => Ok(Qi::from_i64(n.as_i64().unwrap_or_default())),
        other => Err(Error::config(key, format!("expected an integer or a rational string, got {other}"))),
    }
}

fn parse_twist(items: &[Qi]) -> Result<[Qi; 3]> {
    <[Qi; 3]>::try_from(items.to_vec()).map_err(|v| Error::config("twist", format!("expected three entries, got {}", v.len())))
}

fn parse_suites<'a>(items: impl Iterator<Item = &'a str>) -> Result<Vec<Suite>> {
    let mut out: Vec<Suite> = items.map(str::trim).filter(|s| !s.is_empty()).map(Suite::from_str).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Builds a configuration from defaults, an optional file, the flags and the
/// environment, in increasing order of precedence.
pub fn parse_config<I, T>(args: I) -> Result<SuiteConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = CliArgs::try_parse_from(args).map_err(|e| Error::config("args", e.to_string()))?;
    config_from_args(cli)
}

/// As [`parse_config`] for flags that are already parsed.
pub fn config_from_args(cli: CliArgs) -> Result<SuiteConfig> {
    let env_seed = std::env::var(SEED_ENV).ok();
    resolve(cli, env_seed.as_deref())
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::config("config", format!("{}: {e}", path.display())))
}

pub(crate) fn resolve(cli: CliArgs, env_seed: Option<&str>) -> Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    if let Some(path) = &cli.config {
        let file = read_file(path)?;
        if let Some(s) = file.suites {
            cfg.suites = parse_suites(s.iter().map(String::as_str))?;
        }
        cfg.sites = file.sites.unwrap_or(cfg.sites);
        if let Some(c) = file.c {
            cfg.c = scalar_from_value("c", &c)?;
        }
        if let Some(t) = file.twist {
            cfg.twist = parse_twist(&t.iter().map(|v| scalar_from_value("twist", v)).collect::<Result<Vec<_>>>()?)?;
        }
        cfg.max_a = file.max_a.unwrap_or(cfg.max_a);
        cfg.max_b = file.max_b.unwrap_or(cfg.max_b);
        cfg.max_n = file.max_n.unwrap_or(cfg.max_n);
        cfg.draws = file.draws.unwrap_or(cfg.draws);
        cfg.seed = file.seed.unwrap_or(cfg.seed);
        if let Some(m) = file.mode {
            cfg.mode = m.parse().map_err(|e: String| Error::config("mode", e))?;
        }
        if let Some(f) = file.format {
            cfg.format = f.parse()?;
        }
        cfg.out = file.out.or(cfg.out);
    }
    if let Some(s) = &cli.suites {
        cfg.suites = parse_suites(s.split(','))?;
    }
    cfg.sites = cli.sites.unwrap_or(cfg.sites);
    if let Some(c) = &cli.c {
        cfg.c = parse_scalar("c", c)?;
    }
    if let Some(t) = &cli.twist {
        cfg.twist = parse_twist(&t.split(',').map(|s| parse_scalar("twist", s)).collect::<Result<Vec<_>>>()?)?;
    }
    cfg.max_a = cli.max_a.unwrap_or(cfg.max_a);
    cfg.max_b = cli.max_b.unwrap_or(cfg.max_b);
    cfg.max_n = cli.max_n.unwrap_or(cfg.max_n);
    cfg.draws = cli.draws.unwrap_or(cfg.draws);
    cfg.seed = cli.seed.unwrap_or(cfg.seed);
    if let Some(m) = &cli.mode {
        cfg.mode = m.parse().map_err(|e: String| Error::config("mode", e))?;
    }
    if let Some(f) = &cli.format {
        cfg.format = f.parse()?;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    cfg.inject_failure = cli.inject_failure;
    cfg.timing = !cli.no_timing;
    if let Some(s) = env_seed {
        cfg.seed = s.trim().parse().map_err(|_| Error::config(SEED_ENV, format!("not an unsigned integer: `{s}`")))?;
    }
    cfg.validate()?;
    Ok(cfg)
}
