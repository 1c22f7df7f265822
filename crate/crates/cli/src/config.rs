//! Run configuration: flag, file and default resolution, and the resolved
//! config emitted next to every result.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "LONGMEM_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Simulate,
    Estimate,
    Cascade,
    Analyze,
}

impl CommandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::Simulate => "simulate",
            CommandKind::Estimate => "estimate",
            CommandKind::Cascade => "cascade",
            CommandKind::Analyze => "analyze",
        }
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fully specified run. Parameters are kept as the strings the user gave
/// (or the defaults filled in), so the emitted config reproduces the run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    params: BTreeMap<String, String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    used: RefCell<BTreeSet<String>>,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            params: BTreeMap::new(),
            input: None,
            output: None,
            seed: None,
            used: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.params.contains_key(key)
    }

    fn touch(&self, key: &str) {
        self.used.borrow_mut().insert(key.to_string());
    }

    /// Value of `key`, recording `default` in the config when absent.
    pub fn text_or(&mut self, key: &str, default: impl Into<String>) -> String {
        self.touch(key);
        self.params.entry(key.to_string()).or_insert_with(|| default.into()).clone()
    }

    pub fn text(&self, key: &str, context: &str) -> CliResult<String> {
        self.touch(key);
        self.params
            .get(key)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("{context} requires --{key}")))
    }

    pub fn value<T: FromStr>(&self, key: &str, context: &str) -> CliResult<T> {
        let raw = self.text(key, context)?;
        parse_value(key, &raw)
    }

    pub fn value_or<T: FromStr>(&mut self, key: &str, default: impl Into<String>) -> CliResult<T> {
        let raw = self.text_or(key, default);
        parse_value(key, &raw)
    }

    pub fn list_or<T: FromStr>(&mut self, key: &str, default: impl Into<String>) -> CliResult<Vec<T>> {
        let raw = self.text_or(key, default);
        parse_list(key, &raw)
    }

    pub fn list<T: FromStr>(&self, key: &str, context: &str) -> CliResult<Vec<T>> {
        let raw = self.text(key, context)?;
        parse_list(key, &raw)
    }

    pub fn flag_or(&mut self, key: &str, default: bool) -> CliResult<bool> {
        self.value_or(key, default.to_string())
    }

    pub fn require_seed(&self) -> CliResult<u64> {
        self.seed.ok_or_else(|| {
            CliError::Usage(format!(
                "{} requires --seed (or the {SEED_ENV} environment variable)",
                self.command
            ))
        })
    }

    /// Parameters that were given but never read by the command.
    pub fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.params.keys().filter(|k| !used.contains(*k)).cloned().collect()
    }

    pub fn to_toml(&self) -> String {
        let mut root = toml::Table::new();
        root.insert("command".into(), self.command.as_str().into());
        if let Some(seed) = self.seed {
            root.insert(
                "seed".into(),
                match i64::try_from(seed) {
                    Ok(s) => toml::Value::Integer(s),
                    Err(_) => toml::Value::String(seed.to_string()),
                },
            );
        }
        if let Some(p) = &self.input {
            root.insert("input".into(), p.display().to_string().into());
        }
        if let Some(p) = &self.output {
            root.insert("output".into(), p.display().to_string().into());
        }
        let params: toml::Table = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), toml::Value::String(v.clone())))
            .collect();
        root.insert("params".into(), toml::Value::Table(params));
        toml::to_string(&root).expect("string-valued table serializes")
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> CliResult<T> {
    raw.trim()
        .parse()
        .map_err(|_| CliError::param(key, format!("cannot parse '{raw}'")))
}

fn parse_list<T: FromStr>(key: &str, raw: &str) -> CliResult<Vec<T>> {
    raw.split(',').map(|part| parse_value(key, part)).collect()
}

/// Flag values as given on the command line, before resolution.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub params: BTreeMap<String, String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// A parsed `--config` file.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub params: BTreeMap<String, String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.message().to_string())?;
        let mut out = ConfigFile::default();
        for (key, value) in table {
            match key.as_str() {
                "command" => out.command = Some(as_text(&key, &value)?),
                "input" => out.input = Some(as_text(&key, &value)?.into()),
                "output" => out.output = Some(as_text(&key, &value)?.into()),
                "seed" => {
                    let s = as_text(&key, &value)?;
                    out.seed = Some(s.parse().map_err(|_| format!("seed must be a nonnegative integer, got {s}"))?);
                }
                "params" => {
                    let toml::Value::Table(params) = value else {
                        return Err("params must be a table".into());
                    };
                    for (k, v) in params {
                        let text = as_text(&k, &v)?;
                        out.params.insert(k, text);
                    }
                }
                other => return Err(format!("unknown key '{other}'")),
            }
        }
        Ok(out)
    }
}

fn as_text(key: &str, value: &toml::Value) -> Result<String, String> {
    match value {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        toml::Value::Array(items) => items
            .iter()
            .map(|v| as_text(key, v))
            .collect::<Result<Vec<_>, _>>()
            .map(|parts| parts.join(",")),
        _ => Err(format!("unsupported value for '{key}'")),
    }
}

/// Flags override the config file, which overrides defaults. The seed falls
/// back to `env_seed` only when neither a flag nor the file sets it.
pub fn resolve(
    command: CommandKind,
    flags: Overrides,
    file: Option<ConfigFile>,
    env_seed: Option<String>,
) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::new(command);
    if let Some(file) = file {
        if let Some(c) = &file.command {
            if c != command.as_str() {
                return Err(CliError::Config(format!(
                    "config file is for '{c}' but the command is '{command}'"
                )));
            }
        }
        cfg.params.extend(file.params);
        cfg.input = file.input;
        cfg.output = file.output;
        cfg.seed = file.seed;
    }
    cfg.params.extend(flags.params);
    if flags.input.is_some() {
        cfg.input = flags.input;
    }
    if flags.output.is_some() {
        cfg.output = flags.output;
    }
    if flags.seed.is_some() {
        cfg.seed = flags.seed;
    }
    if cfg.seed.is_none() {
        if let Some(raw) = env_seed {
            let seed = raw
                .trim()
                .parse()
                .map_err(|_| CliError::param("seed", format!("{SEED_ENV}='{raw}' is not a nonnegative integer")))?;
            cfg.seed = Some(seed);
        }
    }
    Ok(cfg)
}
