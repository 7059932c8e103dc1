//! Run manifests: flat `key = value` files with `[section]` headers.
//!
//! ```text
//! [defaults]
//! alpha = 0.2
//! lr = 0.01
//! batch-size = 32
//! local-epochs = 5
//! repeats = 5
//! seed = 42
//! out = results
//!
//! [grid]
//! datasets = malgenome, tuandromd
//! clients = 5, 10, 15
//! rounds = 10, 20
//! strategies = fedavg, dw-fedavg
//!
//! [dataset.malgenome]
//! path = malgenome-215-dataset-1260malware-2539-benign.csv
//! label = class
//! mapping = B:0, S:1
//! ```
//!
//! A `[dataset.NAME]` section may instead point at a per-dataset file with
//! `manifest = path/to/NAME.dataset`, which holds the same keys without a header.
//! `#` and `;` start comments. Relative paths resolve against the directory of
//! the file that names them; paths of built-in datasets resolve against the
//! data directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fedsim_core::aggregation::AggregationStrategy;
use fedsim_core::data::{known_dataset, DatasetSource, LabelMapping};

use crate::error::CliError;
use crate::grid::Grid;

pub type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn normalize_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('_', "-")
}

/// Parses the section/key layout. Keys before any header land in section "".
pub fn parse_sections(text: &str, origin: &str) -> Result<Sections, CliError> {
    let mut out: Sections = BTreeMap::new();
    let mut current = String::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| {
                CliError::config(format!("{origin}:{}: unterminated section header", n + 1))
            })?;
            current = name.trim().to_string();
            out.entry(current.clone()).or_default();
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!("{origin}:{}: expected `key = value`", n + 1))
        })?;
        out.entry(current.clone())
            .or_default()
            .insert(normalize_key(k), v.trim().to_string());
    }
    Ok(out)
}

pub fn split_list(v: &str) -> Vec<String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::config(format!("`{key}`: cannot parse `{v}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(CliError::config(format!(
            "`{key}`: expected a boolean, got `{v}`"
        ))),
    }
}

pub fn parse_usize_list(key: &str, v: &str) -> Result<Vec<usize>, CliError> {
    split_list(v).iter().map(|s| parse_num(key, s)).collect()
}

pub fn parse_strategies(v: &str) -> Result<Vec<AggregationStrategy>, CliError> {
    split_list(v)
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|e: fedsim_core::Error| CliError::config(e.to_string()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Defaults {
    pub alpha: f64,
    pub lr: f64,
    pub batch_size: usize,
    pub local_epochs: usize,
    pub repeats: usize,
    pub seed: u64,
    pub threads: usize,
    pub hidden: Vec<usize>,
    pub holdout_fraction: f64,
    pub local_test_fraction: f64,
    pub literal_dw: bool,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            alpha: 0.2,
            lr: 0.01,
            batch_size: 32,
            local_epochs: 5,
            repeats: 5,
            seed: 42,
            threads: 0,
            hidden: vec![200, 100, 50],
            holdout_fraction: 0.2,
            local_test_fraction: 0.2,
            literal_dw: false,
        }
    }
}

impl Defaults {
    /// Applies one `key = value` setting; returns false for keys it does not own.
    pub fn set(&mut self, key: &str, v: &str) -> Result<bool, CliError> {
        match normalize_key(key).as_str() {
            "alpha" => self.alpha = parse_num(key, v)?,
            "lr" | "learning-rate" => self.lr = parse_num(key, v)?,
            "batch-size" => self.batch_size = parse_num(key, v)?,
            "local-epochs" | "epochs" => self.local_epochs = parse_num(key, v)?,
            "repeats" => self.repeats = parse_num(key, v)?,
            "seed" | "master-seed" => self.seed = parse_num(key, v)?,
            "threads" => self.threads = parse_num(key, v)?,
            "hidden" => self.hidden = parse_usize_list(key, v)?,
            "holdout" | "holdout-fraction" => self.holdout_fraction = parse_num(key, v)?,
            "local-test-fraction" => self.local_test_fraction = parse_num(key, v)?,
            "literal-dw" => self.literal_dw = parse_bool(key, v)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub datasets: BTreeMap<String, DatasetSource>,
    pub grid: Grid,
    pub defaults: Defaults,
    pub out_dir: PathBuf,
    pub data_dir: Option<PathBuf>,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            datasets: BTreeMap::new(),
            grid: Grid::default(),
            defaults: Defaults::default(),
            out_dir: PathBuf::from("results"),
            data_dir: None,
        }
    }
}

fn resolve(base: Option<&Path>, p: &str) -> PathBuf {
    let p = PathBuf::from(p);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p,
    }
}

fn dataset_from_keys(
    name: &str,
    keys: &BTreeMap<String, String>,
    base: Option<&Path>,
    origin: &str,
) -> Result<DatasetSource, CliError> {
    let mut src = known_dataset(name)
        .map(|k| k.source())
        .unwrap_or_else(|| DatasetSource {
            name: name.to_string(),
            path: PathBuf::new(),
            label_column: "class".into(),
            mapping: LabelMapping::default(),
            exclude_columns: Vec::new(),
            min_max_scale: false,
        });
    if let Some(m) = keys.get("manifest") {
        let path = resolve(base, m);
        let text = std::fs::read_to_string(&path).map_err(|e| {
            CliError::config(format!(
                "dataset `{name}` ({origin}): cannot read {}: {e}",
                path.display()
            ))
        })?;
        let sections = parse_sections(&text, &path.display().to_string())?;
        let inner = sections.get("").cloned().unwrap_or_default();
        src = dataset_from_keys(name, &inner, path.parent(), &path.display().to_string())?;
    }
    for (k, v) in keys {
        match k.as_str() {
            "manifest" => {}
            "path" => src.path = resolve(base, v),
            "label" | "label-column" => src.label_column = v.clone(),
            "mapping" => {
                src.mapping = LabelMapping::parse(v)
                    .map_err(|e| CliError::config(format!("dataset `{name}` ({origin}): {e}")))?
            }
            "exclude" => src.exclude_columns = split_list(v),
            "min-max-scale" | "scale" => src.min_max_scale = parse_bool(k, v)?,
            other => {
                return Err(CliError::config(format!(
                    "dataset `{name}` ({origin}): unknown key `{other}`"
                )))
            }
        }
    }
    if src.path.as_os_str().is_empty() {
        return Err(CliError::config(format!(
            "dataset `{name}` ({origin}): no path given"
        )));
    }
    Ok(src)
}

impl RunManifest {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read manifest {}: {e}", path.display()))
        })?;
        Self::parse(&text, path.parent(), &path.display().to_string())
    }

    /// `base` is the directory relative paths are resolved against.
    pub fn parse(text: &str, base: Option<&Path>, origin: &str) -> Result<Self, CliError> {
        let sections = parse_sections(text, origin)?;
        let mut m = RunManifest::default();
        for (section, keys) in &sections {
            let lower = section.to_ascii_lowercase();
            if section.is_empty() || lower == "defaults" || lower == "run" {
                for (k, v) in keys {
                    match k.as_str() {
                        "out" | "output" => m.out_dir = resolve(base, v),
                        "data-dir" => m.data_dir = Some(resolve(base, v)),
                        _ => {
                            if !m.defaults.set(k, v)? && !m.grid.set(k, v)? {
                                return Err(CliError::config(format!(
                                    "{origin} [{section}]: unknown key `{k}`"
                                )));
                            }
                        }
                    }
                }
            } else if lower == "grid" {
                for (k, v) in keys {
                    if !m.grid.set(k, v)? {
                        return Err(CliError::config(format!(
                            "{origin} [grid]: unknown key `{k}`"
                        )));
                    }
                }
            } else if let Some(name) = lower
                .strip_prefix("dataset.")
                .or_else(|| lower.strip_prefix("dataset "))
            {
                let name = name.trim().to_string();
                let src = dataset_from_keys(&name, keys, base, &format!("{origin} [{section}]"))?;
                m.datasets.insert(name, src);
            } else {
                return Err(CliError::config(format!(
                    "{origin}: unknown section [{section}]"
                )));
            }
        }
        Ok(m)
    }

    /// The source for `name`: a manifest entry, else a built-in reference dataset.
    pub fn source(&self, name: &str) -> Result<DatasetSource, CliError> {
        let key = name.trim().to_ascii_lowercase();
        if let Some(s) = self.datasets.get(&key) {
            return Ok(s.clone());
        }
        known_dataset(&key).map(|k| k.source()).ok_or_else(|| {
            CliError::config(format!(
                "dataset `{name}` is neither in the manifest nor a built-in dataset"
            ))
        })
    }
}
