//! Run configuration: defaults, an optional JSON file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use mlie::roots::GeneratorSubset;

use crate::GlobalOpts;

pub const CONFIG_SCHEMA: &str = "mlie-runconfig/1";
pub const OUTPUT_SCHEMA: &str = "mlie-output/1";

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// The resolved settings of one run, echoed at the top of every output.
#[derive(Serialize, Debug, Clone)]
pub struct RunConfig {
    pub schema: &'static str,
    pub command: String,
    #[serde(serialize_with = "as_decimal")]
    pub window: i64,
    #[serde(serialize_with = "as_decimal")]
    pub subset: GeneratorSubset,
    #[serde(serialize_with = "as_decimal")]
    pub seed: u64,
    #[serde(serialize_with = "as_decimal")]
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    /// From MLIE_THREADS.
    #[serde(serialize_with = "opt_decimal")]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub subset_given: bool,
    #[serde(skip)]
    argv: Vec<String>,
}

/// A config file; every field is optional and numbers may be JSON numbers or strings.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    schema: String,
    #[serde(default, deserialize_with = "lenient")]
    window: Option<i64>,
    #[serde(default)]
    subset: Option<String>,
    #[serde(default, deserialize_with = "lenient")]
    seed: Option<u64>,
    #[serde(default, deserialize_with = "lenient")]
    samples: Option<usize>,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    format: Option<Format>,
    // Accepted so a printed run header can be fed back as a config file.
    #[serde(default, rename = "command")]
    _command: Option<String>,
    #[serde(default, rename = "threads")]
    _threads: Option<serde_json::Value>,
}

fn as_decimal<T: ToString, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn opt_decimal<T: ToString, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn lenient<'de, D, T>(d: D) -> Result<Option<T>, D::Error>
where
    D: Deserializer<'de>,
    T: std::str::FromStr,
{
    let v = Option::<serde_json::Value>::deserialize(d)?;
    let text = match v {
        None | Some(serde_json::Value::Null) => return Ok(None),
        Some(serde_json::Value::String(s)) => s,
        Some(serde_json::Value::Number(n)) => n.to_string(),
        Some(other) => return Err(serde::de::Error::custom(format!("expected a number, got {other}"))),
    };
    text.parse()
        .map(Some)
        .map_err(|_| serde::de::Error::custom(format!("not a valid number: {text}")))
}

fn load(path: &Path) -> Result<FileConfig> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f: FileConfig = serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
    if f.schema != CONFIG_SCHEMA {
        bail!("{}: schema {:?}, expected {CONFIG_SCHEMA:?}", path.display(), f.schema);
    }
    Ok(f)
}

pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("MLIE_THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            let n: usize = v.trim().parse().with_context(|| format!("MLIE_THREADS={v}"))?;
            if n == 0 {
                bail!("MLIE_THREADS must be positive");
            }
            Ok(Some(n))
        }
        _ => Ok(None),
    }
}

impl RunConfig {
    pub fn resolve(flags: &GlobalOpts, argv: &[String]) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => load(p)?,
            None => FileConfig::default(),
        };
        let subset_text = flags.subset.clone().or(file.subset);
        let subset_given = subset_text.is_some();
        let subset = match subset_text {
            Some(s) => s.parse().map_err(|e| anyhow::anyhow!("--subset {s}: {e}"))?,
            None => GeneratorSubset::default_desk(),
        };
        let cfg = RunConfig {
            schema: CONFIG_SCHEMA,
            command: argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" "),
            window: flags.window.or(file.window).unwrap_or(8),
            subset,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            samples: flags.samples.or(file.samples).unwrap_or(5),
            output: flags.output.clone().or(file.output),
            format: flags.format.or(file.format).unwrap_or_default(),
            threads: threads_from_env()?,
            subset_given,
            argv: argv.iter().skip(1).cloned().collect(),
        };
        if cfg.window < 2 {
            bail!("window must be at least 2, got {}", cfg.window);
        }
        if cfg.samples < 1 {
            bail!("samples must be at least 1");
        }
        Ok(cfg)
    }

    pub fn header_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// A shell line that reruns this exact command.
    pub fn repro(&self) -> String {
        let quoted: Vec<String> = self
            .argv
            .iter()
            .map(|a| {
                if a.chars().all(|c| c.is_ascii_alphanumeric() || "-_:,./=".contains(c)) {
                    a.to_string()
                } else {
                    format!("'{a}'")
                }
            })
            .collect();
        format!("mlie {}", quoted.join(" "))
    }
}
