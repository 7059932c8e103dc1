//! Tabular malware datasets: CSV loading, the global holdout split and IID
//! partitioning of the training portion into client shards.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use log::warn;
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::seed;

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    pub name: String,
    pub features: Matrix<T>,
    /// 1 = malware, 0 = benign.
    pub labels: Vec<u8>,
    pub feature_names: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub benign: usize,
    pub malware: usize,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(
        name: impl Into<String>,
        features: Matrix<T>,
        labels: Vec<u8>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        let name = name.into();
        if labels.len() != features.rows() {
            return Err(Error::DimensionMismatch {
                context: "dataset labels",
                expected: features.rows(),
                actual: labels.len(),
            });
        }
        if feature_names.len() != features.cols() {
            return Err(Error::DimensionMismatch {
                context: "feature names",
                expected: features.cols(),
                actual: feature_names.len(),
            });
        }
        if let Some(row) = labels.iter().position(|&y| y > 1) {
            return Err(Error::NonBinaryLabel {
                row,
                value: labels[row],
            });
        }
        Ok(Self {
            name,
            features,
            labels,
            feature_names,
        })
    }

    /// Unnamed columns `f0, f1, …`.
    pub fn from_parts(
        name: impl Into<String>,
        features: Matrix<T>,
        labels: Vec<u8>,
    ) -> Result<Self> {
        let names = (0..features.cols()).map(|i| format!("f{i}")).collect();
        Self::new(name, features, labels, names)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn class_counts(&self) -> ClassCounts {
        let malware = self.labels.iter().filter(|&&y| y == 1).count();
        ClassCounts {
            benign: self.labels.len() - malware,
            malware,
        }
    }

    pub fn has_both_classes(&self) -> bool {
        let c = self.class_counts();
        c.benign > 0 && c.malware > 0
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }
}

/// Textual class value → label. Keys are matched case-insensitively after trimming.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMapping(BTreeMap<String, u8>);

impl Default for LabelMapping {
    fn default() -> Self {
        let pairs = [
            ("0", 0),
            ("1", 1),
            ("b", 0),
            ("s", 1),
            ("benign", 0),
            ("goodware", 0),
            ("malware", 1),
        ];
        Self(pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect())
    }
}

impl LabelMapping {
    pub fn empty() -> Self {
        Self(BTreeMap::new())
    }

    pub fn insert(&mut self, key: &str, label: u8) -> Result<()> {
        if label > 1 {
            return Err(Error::InvalidConfig(format!(
                "label mapping `{key}` → {label} is not binary"
            )));
        }
        self.0.insert(key.trim().to_ascii_lowercase(), label);
        Ok(())
    }

    pub fn get(&self, raw: &str) -> Option<u8> {
        self.0.get(&raw.trim().to_ascii_lowercase()).copied()
    }

    /// Parses `B:0,S:1` (also accepts `=` as the separator).
    pub fn parse(spec: &str) -> Result<Self> {
        let mut m = Self::empty();
        for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = pair
                .split_once(':')
                .or_else(|| pair.split_once('='))
                .ok_or_else(|| Error::InvalidConfig(format!("bad label mapping entry `{pair}`")))?;
            let v: u8 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad label value in `{pair}`")))?;
            m.insert(k, v)?;
        }
        if m.0.is_empty() {
            return Err(Error::InvalidConfig("empty label mapping".into()));
        }
        Ok(m)
    }
}

impl fmt::Display for LabelMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Where a dataset lives and how to read it.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSource {
    pub name: String,
    pub path: PathBuf,
    pub label_column: String,
    pub mapping: LabelMapping,
    /// Non-feature columns to ignore (identifiers, hashes, dates…).
    pub exclude_columns: Vec<String>,
    /// Rescale every feature to [0, 1] using training-split ranges.
    pub min_max_scale: bool,
}

impl DatasetSource {
    /// Resolves a relative path against `data_dir`.
    pub fn resolved_path(&self, data_dir: Option<&Path>) -> PathBuf {
        match data_dir {
            Some(dir) if self.path.is_relative() => dir.join(&self.path),
            _ => self.path.clone(),
        }
    }

    pub fn load<T: Scalar>(&self, data_dir: Option<&Path>) -> Result<(Dataset<T>, LoadReport)> {
        let path = self.resolved_path(data_dir);
        let (ds, report) = load_csv_with(
            &path,
            &self.name,
            &self.label_column,
            &self.mapping,
            &self.exclude_columns,
        )?;
        Ok((ds, report))
    }
}

/// Published shape of the reference datasets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnownDataset {
    pub name: &'static str,
    pub file_name: &'static str,
    pub label_column: &'static str,
    pub samples: usize,
    pub features: usize,
    pub benign: usize,
    pub malware: usize,
    pub exclude: &'static [&'static str],
    pub min_max_scale: bool,
}

pub const KNOWN_DATASETS: [KnownDataset; 4] = [
    KnownDataset {
        name: "malgenome",
        file_name: "malgenome-215-dataset-1260malware-2539-benign.csv",
        label_column: "class",
        samples: 3799,
        features: 215,
        benign: 2539,
        malware: 1260,
        exclude: &[],
        min_max_scale: false,
    },
    KnownDataset {
        name: "drebin",
        file_name: "drebin-215-dataset-5560malware-9476-benign.csv",
        label_column: "class",
        samples: 15036,
        features: 215,
        benign: 9476,
        malware: 5560,
        exclude: &[],
        min_max_scale: false,
    },
    KnownDataset {
        name: "tuandromd",
        file_name: "TUANDROMD.csv",
        label_column: "Label",
        samples: 4465,
        features: 241,
        benign: 903,
        malware: 3565,
        exclude: &[],
        min_max_scale: false,
    },
    KnownDataset {
        name: "kronodroid",
        file_name: "kronodroid.csv",
        label_column: "Malware",
        samples: 78137,
        features: 463,
        benign: 36935,
        malware: 41382,
        exclude: &[
            "Package",
            "sha256",
            "EarliestModDate",
            "HighestModDate",
            "MalFamily",
            "Detection_Ratio",
            "Scanners",
            "Categories",
        ],
        min_max_scale: true,
    },
];

pub fn known_dataset(name: &str) -> Option<&'static KnownDataset> {
    KNOWN_DATASETS
        .iter()
        .find(|k| k.name.eq_ignore_ascii_case(name.trim()))
}

impl KnownDataset {
    pub fn source(&self) -> DatasetSource {
        DatasetSource {
            name: self.name.to_string(),
            path: PathBuf::from(self.file_name),
            label_column: self.label_column.to_string(),
            mapping: LabelMapping::default(),
            exclude_columns: self.exclude.iter().map(|s| s.to_string()).collect(),
            min_max_scale: self.min_max_scale,
        }
    }

    /// Describes every way `ds` differs from the published shape.
    pub fn mismatches<T: Scalar>(&self, ds: &Dataset<T>) -> Vec<String> {
        let c = ds.class_counts();
        let checks = [
            ("samples", self.samples, ds.len()),
            ("features", self.features, ds.n_features()),
            ("benign", self.benign, c.benign),
            ("malware", self.malware, c.malware),
        ];
        checks
            .iter()
            .filter(|(_, want, got)| want != got)
            .map(|(what, want, got)| format!("{}: expected {want} {what}, found {got}", self.name))
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    /// Rows dropped for missing or non-numeric feature cells.
    pub dropped_rows: usize,
    /// Deviations from the published dataset shape, if the name is known.
    pub warnings: Vec<String>,
}

/// Loads a CSV with a header row. Every column other than `label_column` is a feature.
pub fn load_csv<T: Scalar>(
    path: &Path,
    label_column: &str,
    mapping: &LabelMapping,
) -> Result<(Dataset<T>, LoadReport)> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    load_csv_with(path, &name, label_column, mapping, &[])
}

pub fn load_csv_with<T: Scalar>(
    path: &Path,
    name: &str,
    label_column: &str,
    mapping: &LabelMapping,
    exclude: &[String],
) -> Result<(Dataset<T>, LoadReport)> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(file);

    let header = reader.headers().map_err(csv_err)?.clone();
    if header.is_empty() {
        return Err(Error::Dataset {
            name: name.to_string(),
            reason: format!("{} is empty", path.display()),
        });
    }
    let label_idx = header
        .iter()
        .position(|h| h == label_column)
        .or_else(|| {
            header
                .iter()
                .position(|h| h.eq_ignore_ascii_case(label_column))
        })
        .ok_or_else(|| Error::MissingLabelColumn(label_column.to_string()))?;
    let excluded: HashSet<&str> = exclude.iter().map(String::as_str).collect();
    let feature_cols: Vec<usize> = (0..header.len())
        .filter(|&i| i != label_idx && !excluded.contains(&header[i]))
        .collect();
    let feature_names = feature_cols
        .iter()
        .map(|&i| header[i].to_string())
        .collect();

    let mut data: Vec<T> = Vec::new();
    let mut labels = Vec::new();
    let mut report = LoadReport::default();
    let mut row_buf = Vec::with_capacity(feature_cols.len());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        // header is line 1
        let line = i + 2;
        let raw_label = &record[label_idx];
        let label = mapping.get(raw_label).ok_or_else(|| Error::UnknownLabel {
            value: raw_label.to_string(),
            line,
        })?;
        row_buf.clear();
        let parsed = feature_cols
            .iter()
            .all(|&c| match record[c].parse::<f64>() {
                Ok(v) if v.is_finite() => {
                    row_buf.push(T::of(v));
                    true
                }
                _ => false,
            });
        if parsed {
            data.extend_from_slice(&row_buf);
            labels.push(label);
        } else {
            report.dropped_rows += 1;
        }
    }

    if labels.is_empty() {
        return Err(Error::Dataset {
            name: name.to_string(),
            reason: format!("{} has no usable rows", path.display()),
        });
    }
    if report.dropped_rows > 0 {
        warn!(
            "{name}: dropped {} row(s) with missing or non-numeric cells",
            report.dropped_rows
        );
    }
    let features = Matrix::from_vec(labels.len(), feature_cols.len(), data)?;
    let ds = Dataset::new(name, features, labels, feature_names)?;
    if !ds.has_both_classes() {
        return Err(Error::Dataset {
            name: name.to_string(),
            reason: "labels contain a single class".into(),
        });
    }
    if let Some(known) = known_dataset(name) {
        for w in known.mismatches(&ds) {
            warn!("{w}");
            report.warnings.push(w);
        }
    }
    Ok((ds, report))
}

/// Writes `ds` with a header row; the label goes last as `0`/`1`.
pub fn write_csv<T: Scalar>(ds: &Dataset<T>, path: &Path, label_column: &str) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header: Vec<&str> = ds.feature_names.iter().map(String::as_str).collect();
    header.push(label_column);
    w.write_record(&header).map_err(csv_err)?;
    for (row, &y) in ds.features.iter_rows().zip(&ds.labels) {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(y.to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Per-column `[min, max]` rescaling fitted on one matrix and applied to others.
#[derive(Clone, Debug, PartialEq)]
pub struct MinMaxScaler<T> {
    min: Vec<T>,
    range: Vec<T>,
}

impl<T: Scalar> MinMaxScaler<T> {
    pub fn fit(x: &Matrix<T>) -> Self {
        let mut min = vec![T::infinity(); x.cols()];
        let mut max = vec![T::neg_infinity(); x.cols()];
        for row in x.iter_rows() {
            for ((lo, hi), &v) in min.iter_mut().zip(&mut max).zip(row) {
                *lo = lo.min(v);
                *hi = hi.max(v);
            }
        }
        let range = min.iter().zip(&max).map(|(&lo, &hi)| hi - lo).collect();
        Self { min, range }
    }

    /// Constant columns map to 0. Values outside the fitted range are not clipped.
    pub fn transform(&self, x: &mut Matrix<T>) {
        let cols = x.cols();
        for i in 0..x.rows() {
            for (j, v) in x.row_mut(i).iter_mut().enumerate().take(cols) {
                let r = self.range[j];
                *v = if r > T::zero() {
                    (*v - self.min[j]) / r
                } else {
                    T::zero()
                };
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitSpec {
    pub holdout_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            holdout_fraction: 0.2,
            seed: 0,
            stratified: true,
        }
    }
}

/// Minimum per-class count for a stratified holdout.
pub const MIN_PER_CLASS: usize = 5;

fn check_fraction(f: f64, what: &str) -> Result<()> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "{what} must lie in (0, 1), got {f}"
        )))
    }
}

fn class_indices(labels: &[u8], indices: &[usize]) -> [Vec<usize>; 2] {
    let mut out = [Vec::new(), Vec::new()];
    for &i in indices {
        out[labels[i] as usize].push(i);
    }
    out
}

/// Row indices `(train, test)`, each sorted ascending.
pub fn holdout_indices(labels: &[u8], spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    check_fraction(spec.holdout_fraction, "holdout fraction")?;
    let n = labels.len();
    let mut rng = seed::rng_from(seed::derive_seed(spec.seed, &[seed::stream::HOLDOUT]));
    let all: Vec<usize> = (0..n).collect();

    let mut test = Vec::new();
    let mut train = Vec::new();
    if spec.stratified {
        for (class, mut idx) in class_indices(labels, &all).into_iter().enumerate() {
            if idx.len() < MIN_PER_CLASS {
                return Err(Error::Partition(format!(
                    "class {class} has {} samples; stratified holdout needs at least {MIN_PER_CLASS}",
                    idx.len()
                )));
            }
            idx.shuffle(&mut rng);
            let k = (spec.holdout_fraction * idx.len() as f64).round() as usize;
            let k = k.clamp(1, idx.len() - 1);
            test.extend_from_slice(&idx[..k]);
            train.extend_from_slice(&idx[k..]);
        }
    } else {
        if n < 2 {
            return Err(Error::Partition(format!("{n} samples cannot be split")));
        }
        let mut idx = all;
        idx.shuffle(&mut rng);
        let k = ((spec.holdout_fraction * n as f64).round() as usize).clamp(1, n - 1);
        test.extend_from_slice(&idx[..k]);
        train.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn holdout_split<T: Scalar>(
    ds: &Dataset<T>,
    spec: &SplitSpec,
) -> Result<(Dataset<T>, Dataset<T>)> {
    let (train, test) = holdout_indices(&ds.labels, spec)?;
    Ok((ds.subset(&train), ds.subset(&test)))
}

/// One client's private data: a local training split and a local test split
/// on which the client's accuracy is measured.
#[derive(Clone, Debug, PartialEq)]
pub struct ClientShard<T> {
    pub client_id: usize,
    pub train: Dataset<T>,
    pub local_test: Dataset<T>,
    /// Row indices into the partitioned dataset.
    pub train_indices: Vec<usize>,
    pub local_test_indices: Vec<usize>,
}

impl<T> ClientShard<T> {
    pub fn len(&self) -> usize {
        self.train_indices.len() + self.local_test_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Shard sizes for `n` samples over `k` clients: the first `n mod k` get one extra.
pub fn shard_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| n / k + usize::from(i < n % k)).collect()
}

/// IID partition: shuffle, cut into near-equal shards, then split each shard
/// per class so that `local_test_fraction` of it (at least one sample of each
/// class) is held back for local evaluation.
pub fn partition_clients<T: Scalar>(
    train: &Dataset<T>,
    n_clients: usize,
    local_test_fraction: f64,
    seed_value: u64,
) -> Result<Vec<ClientShard<T>>> {
    if n_clients < 2 {
        return Err(Error::Partition(format!(
            "need at least 2 clients, got {n_clients}"
        )));
    }
    check_fraction(local_test_fraction, "local test fraction")?;
    // Each shard needs ≥2 samples of each class so both local splits keep both classes.
    if train.len() < 4 * n_clients {
        return Err(Error::Partition(format!(
            "{} samples are too few for {n_clients} clients",
            train.len()
        )));
    }
    let mut rng = seed::rng_from(seed::derive_seed(seed_value, &[seed::stream::PARTITION]));
    let mut order: Vec<usize> = (0..train.len()).collect();
    order.shuffle(&mut rng);

    let mut shards = Vec::with_capacity(n_clients);
    let mut offset = 0;
    for (client_id, size) in shard_sizes(train.len(), n_clients).into_iter().enumerate() {
        let members = &order[offset..offset + size];
        offset += size;
        let mut local_train = Vec::new();
        let mut local_test = Vec::new();
        for (class, idx) in class_indices(&train.labels, members)
            .into_iter()
            .enumerate()
        {
            if idx.len() < 2 {
                return Err(Error::Partition(format!(
                    "client {client_id} received {} sample(s) of class {class}; each client needs at least 2",
                    idx.len()
                )));
            }
            let k =
                ((local_test_fraction * idx.len() as f64).round() as usize).clamp(1, idx.len() - 1);
            local_test.extend_from_slice(&idx[..k]);
            local_train.extend_from_slice(&idx[k..]);
        }
        local_train.sort_unstable();
        local_test.sort_unstable();
        shards.push(ClientShard {
            client_id,
            train: train.subset(&local_train),
            local_test: train.subset(&local_test),
            train_indices: local_train,
            local_test_indices: local_test,
        });
    }
    Ok(shards)
}
