//! Tabular and grayscale-image datasets: loading, validation, min-max
//! normalization, column projection and leave-one-out iteration.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Classification,
    Regression,
}

/// A dense, row-major feature matrix with its target vector.
///
/// For classification the targets hold class indices `0..n_classes` stored as
/// `f64`. Subsets produced by [`Dataset::subset_rows`] keep the class count of
/// their parent even when a class no longer occurs in the subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    feature_names: Vec<String>,
    features: Vec<f64>,
    targets: Vec<f64>,
    task: Task,
    n_classes: usize,
    class_labels: Option<Vec<String>>,
    source_shape: Option<(usize, usize)>,
}

impl Dataset {
    /// Builds a dataset from row vectors. For classification the class count is
    /// `max(target) + 1`.
    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        targets: Vec<f64>,
        task: Task,
    ) -> Result<Self> {
        let p = feature_names.len();
        let mut features = Vec::with_capacity(rows.len() * p);
        for row in &rows {
            if row.len() != p {
                return Err(Error::ShapeMismatch {
                    expected: p,
                    found: row.len(),
                });
            }
            features.extend_from_slice(row);
        }
        Self::from_flat(feature_names, features, targets, task, None)
    }

    /// Builds a dataset from a row-major buffer. `n_classes` defaults to
    /// `max(target) + 1` for classification.
    pub fn from_flat(
        feature_names: Vec<String>,
        features: Vec<f64>,
        targets: Vec<f64>,
        task: Task,
        n_classes: Option<usize>,
    ) -> Result<Self> {
        let p = feature_names.len();
        let n = targets.len();
        if n == 0 || p == 0 {
            return Err(Error::EmptyDataset);
        }
        if features.len() != n * p {
            return Err(Error::ShapeMismatch {
                expected: n * p,
                found: features.len(),
            });
        }
        let mut seen = HashSet::with_capacity(p);
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate feature name `{name}`"
                )));
            }
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, feature {}",
                pos / p,
                pos % p
            )));
        }
        let n_classes = match task {
            Task::Regression => {
                if targets.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidDataset("non-finite target".into()));
                }
                0
            }
            Task::Classification => {
                let mut max = 0usize;
                for &t in &targets {
                    if !(t >= 0.0 && t.fract() == 0.0 && t < u32::MAX as f64) {
                        return Err(Error::InvalidDataset(format!(
                            "class target {t} is not a non-negative integer"
                        )));
                    }
                    max = max.max(t as usize);
                }
                match n_classes {
                    Some(j) if j <= max => {
                        return Err(Error::InvalidDataset(format!(
                            "class index {max} exceeds class count {j}"
                        )))
                    }
                    Some(j) => j,
                    None => max + 1,
                }
            }
        };
        Ok(Dataset {
            feature_names,
            features,
            targets,
            task,
            n_classes,
            class_labels: None,
            source_shape: None,
        })
    }

    pub fn with_class_labels(mut self, labels: Vec<String>) -> Self {
        self.class_labels = Some(labels);
        self
    }

    /// Marks the dataset as flattened `rows × cols` images.
    pub fn with_source_shape(mut self, rows: usize, cols: usize) -> Result<Self> {
        if rows * cols != self.n_features() {
            return Err(Error::ShapeMismatch {
                expected: self.n_features(),
                found: rows * cols,
            });
        }
        self.source_shape = Some((rows, cols));
        Ok(self)
    }

    /// Same data viewed as a regression problem over the numeric targets.
    pub fn as_regression(&self) -> Dataset {
        let mut d = self.clone();
        d.task = Task::Regression;
        d.n_classes = 0;
        d
    }

    pub fn n_samples(&self) -> usize {
        self.targets.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_labels(&self) -> Option<&[String]> {
        self.class_labels.as_deref()
    }

    pub fn source_shape(&self) -> Option<(usize, usize)> {
        self.source_shape
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.n_features();
        &self.features[i * p..(i + 1) * p]
    }

    #[inline]
    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.features[row * self.feature_names.len() + feature]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.n_features())
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    #[inline]
    pub fn target(&self, i: usize) -> f64 {
        self.targets[i]
    }

    /// Raw row-major feature buffer.
    pub fn features(&self) -> &[f64] {
        &self.features
    }

    /// Rows at `indices`, in the given order (repeats allowed).
    pub fn subset_rows(&self, indices: &[usize]) -> Result<Dataset> {
        if indices.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let p = self.n_features();
        let n = self.n_samples();
        let mut features = Vec::with_capacity(indices.len() * p);
        let mut targets = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            features.extend_from_slice(self.row(i));
            targets.push(self.targets[i]);
        }
        Ok(Dataset {
            features,
            targets,
            ..self.clone_meta()
        })
    }

    fn clone_meta(&self) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            features: Vec::new(),
            targets: Vec::new(),
            task: self.task,
            n_classes: self.n_classes,
            class_labels: self.class_labels.clone(),
            source_shape: self.source_shape,
        }
    }
}

/// Parses a CSV file with a header row. The target column is removed from the
/// features; classification labels are encoded `0..J` in sorted label order
/// (numeric order when every label parses as a number).
pub fn load_csv(path: impl AsRef<Path>, target_column: &str, task: Task) -> Result<Dataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let target_idx = header
        .iter()
        .position(|h| h == target_column)
        .ok_or_else(|| Error::MissingColumn(target_column.to_string()))?;
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != target_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut features = Vec::new();
    let mut raw_targets = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        for (col, cell) in record.iter().enumerate() {
            if col == target_idx {
                raw_targets.push(cell.trim().to_string());
                continue;
            }
            let v = parse_finite(cell).ok_or_else(|| Error::UnparseableCell {
                row,
                col,
                value: cell.to_string(),
            })?;
            features.push(v);
        }
    }
    let n = raw_targets.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    if n < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            found: n,
        });
    }

    match task {
        Task::Regression => {
            let mut targets = Vec::with_capacity(n);
            for (row, cell) in raw_targets.iter().enumerate() {
                targets.push(parse_finite(cell).ok_or_else(|| Error::UnparseableCell {
                    row,
                    col: target_idx,
                    value: cell.clone(),
                })?);
            }
            Dataset::from_flat(feature_names, features, targets, task, None)
        }
        Task::Classification => {
            let (labels, targets) = encode_labels(&raw_targets);
            if labels.len() < 2 {
                return Err(Error::SingleClass);
            }
            Ok(
                Dataset::from_flat(feature_names, features, targets, task, Some(labels.len()))?
                    .with_class_labels(labels),
            )
        }
    }
}

fn parse_finite(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn encode_labels(raw: &[String]) -> (Vec<String>, Vec<f64>) {
    let mut unique: Vec<&String> = raw.iter().collect::<HashSet<_>>().into_iter().collect();
    let numeric: Option<Vec<f64>> = unique.iter().map(|s| parse_finite(s)).collect();
    match numeric {
        Some(_) => unique.sort_by(|a, b| {
            parse_finite(a)
                .unwrap()
                .total_cmp(&parse_finite(b).unwrap())
                .then_with(|| a.cmp(b))
        }),
        None => unique.sort(),
    }
    let index: BTreeMap<&str, usize> = unique
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let targets = raw.iter().map(|s| index[s.as_str()] as f64).collect();
    (unique.into_iter().cloned().collect(), targets)
}

const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// Loads an IDX image/label pair (the MNIST container format). Each image is
/// flattened row-major into features named `px_<row>_<col>`.
pub fn load_idx(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset> {
    let images_path = images_path.as_ref();
    let labels_path = labels_path.as_ref();
    let images = fs::read(images_path).map_err(|e| Error::io(images_path, e))?;
    let labels = fs::read(labels_path).map_err(|e| Error::io(labels_path, e))?;

    let header = read_be_words(&images, 4, images_path)?;
    check_magic(header[0], IDX_IMAGES_MAGIC, images_path)?;
    let (count, rows, cols) = (header[1] as usize, header[2] as usize, header[3] as usize);
    let pixels = rows * cols;
    let needed = 16 + count * pixels;
    if images.len() < needed {
        return Err(Error::TruncatedFile {
            path: images_path.to_path_buf(),
            needed,
            found: images.len(),
        });
    }

    let label_header = read_be_words(&labels, 2, labels_path)?;
    check_magic(label_header[0], IDX_LABELS_MAGIC, labels_path)?;
    let label_count = label_header[1] as usize;
    if label_count != count {
        return Err(Error::CountMismatch {
            images: count,
            labels: label_count,
        });
    }
    if labels.len() < 8 + count {
        return Err(Error::TruncatedFile {
            path: labels_path.to_path_buf(),
            needed: 8 + count,
            found: labels.len(),
        });
    }
    if count == 0 || pixels == 0 {
        return Err(Error::EmptyDataset);
    }

    let features: Vec<f64> = images[16..needed].iter().map(|&b| f64::from(b)).collect();
    let raw: Vec<String> = labels[8..8 + count].iter().map(|b| b.to_string()).collect();
    let (class_labels, targets) = encode_labels(&raw);
    let feature_names = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| format!("px_{r}_{c}")))
        .collect();
    let n_classes = class_labels.len();
    Dataset::from_flat(
        feature_names,
        features,
        targets,
        Task::Classification,
        Some(n_classes),
    )?
    .with_class_labels(class_labels)
    .with_source_shape(rows, cols)
}

fn read_be_words(bytes: &[u8], words: usize, path: &Path) -> Result<Vec<u32>> {
    if bytes.len() < words * 4 {
        return Err(Error::TruncatedFile {
            path: path.to_path_buf(),
            needed: words * 4,
            found: bytes.len(),
        });
    }
    Ok(bytes[..words * 4]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

fn check_magic(found: u32, expected: u32, path: &Path) -> Result<()> {
    if found != expected {
        return Err(Error::BadMagic {
            path: path.to_path_buf(),
            found,
            expected,
        });
    }
    Ok(())
}

/// Per-feature `(min, max)` ranges for min-max scaling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    pub feature_names: Vec<String>,
    pub ranges: Vec<(f64, f64)>,
}

impl NormalizationParams {
    /// Scales one row into `[0, 1]`. Constant features map to 0; values outside
    /// the fitted range are clamped.
    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.ranges.len() {
            return Err(Error::ShapeMismatch {
                expected: self.ranges.len(),
                found: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(&self.ranges)
            .map(|(&x, &(lo, hi))| scale(x, lo, hi))
            .collect())
    }
}

#[inline]
fn scale(x: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

pub fn fit_normalizer(d: &Dataset) -> NormalizationParams {
    let p = d.n_features();
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); p];
    for row in d.rows() {
        for (r, &x) in ranges.iter_mut().zip(row) {
            r.0 = r.0.min(x);
            r.1 = r.1.max(x);
        }
    }
    NormalizationParams {
        feature_names: d.feature_names.clone(),
        ranges,
    }
}

pub fn apply_normalizer(d: &Dataset, params: &NormalizationParams) -> Result<Dataset> {
    if params.ranges.len() != d.n_features() {
        return Err(Error::ShapeMismatch {
            expected: params.ranges.len(),
            found: d.n_features(),
        });
    }
    if params.feature_names != d.feature_names {
        return Err(Error::FeatureNameMismatch);
    }
    let p = d.n_features();
    let features = d
        .features
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let (lo, hi) = params.ranges[i % p];
            scale(x, lo, hi)
        })
        .collect();
    Ok(Dataset {
        features,
        targets: d.targets.clone(),
        ..d.clone_meta()
    })
}

/// One leave-one-out fold.
#[derive(Debug, Clone)]
pub struct LooSplit {
    pub train: Dataset,
    pub held_out: Vec<f64>,
    pub held_out_target: f64,
    pub held_out_index: usize,
}

/// The fold holding out row `index`; training rows keep their original order.
pub fn loo_split(d: &Dataset, index: usize) -> Result<LooSplit> {
    let n = d.n_samples();
    if index >= n {
        return Err(Error::IndexOutOfRange { index, len: n });
    }
    let rest: Vec<usize> = (0..n).filter(|&i| i != index).collect();
    Ok(LooSplit {
        train: d.subset_rows(&rest)?,
        held_out: d.row(index).to_vec(),
        held_out_target: d.target(index),
        held_out_index: index,
    })
}

/// All `n` leave-one-out folds, in row order.
pub fn loo_splits(d: &Dataset) -> Result<impl Iterator<Item = LooSplit> + '_> {
    let n = d.n_samples();
    if n < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            found: n,
        });
    }
    Ok((0..n).map(move |i| loo_split(d, i).expect("index in range")))
}

/// Projects the dataset onto `indices`, in the order given.
pub fn select_features(d: &Dataset, indices: &[usize]) -> Result<Dataset> {
    if indices.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let p = d.n_features();
    let mut seen = vec![false; p];
    for &j in indices {
        if j >= p {
            return Err(Error::IndexOutOfRange { index: j, len: p });
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::DuplicateIndex(j));
        }
    }
    let features = d
        .rows()
        .flat_map(|row| indices.iter().map(move |&j| row[j]))
        .collect();
    Ok(Dataset {
        feature_names: indices
            .iter()
            .map(|&j| d.feature_names[j].clone())
            .collect(),
        features,
        targets: d.targets.clone(),
        source_shape: None,
        ..d.clone_meta()
    })
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    fn column(values: &[f64]) -> Dataset {
        Dataset::new(
            vec!["x".into()],
            values.iter().map(|&v| vec![v]).collect(),
            vec![0.0; values.len()],
            Task::Regression,
        )
        .unwrap()
    }

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn csv_binary_labels_sorted() {
        let f = write_tmp("a,b,label\n1,2,B\n3,4,A\n5,6,B\n7,8,A\n");
        let d = load_csv(f.path(), "label", Task::Classification).unwrap();
        assert_eq!(d.n_samples(), 4);
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.n_classes(), 2);
        assert_eq!(d.targets(), &[1.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            d.class_labels().unwrap(),
            &["A".to_string(), "B".to_string()]
        );
        assert_eq!(d.feature_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(d.row(2), &[5.0, 6.0]);
    }

    #[test]
    fn csv_numeric_labels_sort_numerically() {
        let f = write_tmp("x,y\n1,10\n2,2\n3,1\n");
        let d = load_csv(f.path(), "y", Task::Classification).unwrap();
        assert_eq!(d.class_labels().unwrap(), &["1", "2", "10"]);
        assert_eq!(d.targets(), &[2.0, 1.0, 0.0]);
    }

    #[test]
    fn csv_errors() {
        let f = write_tmp("a,b,label\n1,,A\n3,4,B\n");
        assert!(matches!(
            load_csv(f.path(), "label", Task::Classification),
            Err(Error::UnparseableCell { row: 0, col: 1, .. })
        ));
        let f = write_tmp("a,label\n1,A\n2,B\n");
        assert!(matches!(
            load_csv(f.path(), "nope", Task::Classification),
            Err(Error::MissingColumn(_))
        ));
        let f = write_tmp("a,label\n");
        assert!(matches!(
            load_csv(f.path(), "label", Task::Classification),
            Err(Error::EmptyDataset)
        ));
        let f = write_tmp("a,label\n1,A\n2,A\n");
        assert!(matches!(
            load_csv(f.path(), "label", Task::Classification),
            Err(Error::SingleClass)
        ));
        let f = write_tmp("a,label\n1,A\nnan,B\n");
        assert!(matches!(
            load_csv(f.path(), "label", Task::Classification),
            Err(Error::UnparseableCell { row: 1, col: 0, .. })
        ));
    }

    fn idx_images(count: u32, rows: u32, cols: u32, pixels: &[u8]) -> Vec<u8> {
        let mut v = Vec::new();
        for w in [IDX_IMAGES_MAGIC, count, rows, cols] {
            v.extend_from_slice(&w.to_be_bytes());
        }
        v.extend_from_slice(pixels);
        v
    }

    fn idx_labels(magic: u32, labels: &[u8]) -> Vec<u8> {
        let mut v = magic.to_be_bytes().to_vec();
        v.extend_from_slice(&(labels.len() as u32).to_be_bytes());
        v.extend_from_slice(labels);
        v
    }

    fn write_bytes(bytes: &[u8]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(bytes).unwrap();
        f
    }

    #[test]
    fn idx_two_images() {
        let img = write_bytes(&idx_images(2, 2, 2, &[0, 10, 20, 30, 255, 0, 0, 1]));
        let lab = write_bytes(&idx_labels(IDX_LABELS_MAGIC, &[7, 3]));
        let d = load_idx(img.path(), lab.path()).unwrap();
        assert_eq!((d.n_samples(), d.n_features()), (2, 4));
        assert_eq!(d.source_shape(), Some((2, 2)));
        assert_eq!(d.feature_names()[3], "px_1_1");
        assert_eq!(d.row(1), &[255.0, 0.0, 0.0, 1.0]);
        assert_eq!(d.targets(), &[1.0, 0.0]);
        assert_eq!(d.class_labels().unwrap(), &["3", "7"]);
    }

    #[test]
    fn idx_errors() {
        let img = write_bytes(&idx_images(2, 2, 2, &[0; 8]));
        let bad = write_bytes(&idx_labels(0x0000_0803, &[1, 2]));
        assert!(matches!(
            load_idx(img.path(), bad.path()),
            Err(Error::BadMagic { .. })
        ));
        let short = write_bytes(&idx_labels(IDX_LABELS_MAGIC, &[1]));
        assert!(matches!(
            load_idx(img.path(), short.path()),
            Err(Error::CountMismatch {
                images: 2,
                labels: 1
            })
        ));
        let trunc = write_bytes(&idx_images(2, 2, 2, &[0; 5]));
        let lab = write_bytes(&idx_labels(IDX_LABELS_MAGIC, &[1, 2]));
        assert!(matches!(
            load_idx(trunc.path(), lab.path()),
            Err(Error::TruncatedFile {
                needed: 24,
                found: 21,
                ..
            })
        ));
    }

    #[test]
    fn normalizer_fit_and_apply() {
        let d = column(&[2.0, 4.0, 6.0]);
        let np = fit_normalizer(&d);
        assert_eq!(np.ranges, vec![(2.0, 6.0)]);
        let scaled = apply_normalizer(&d, &np).unwrap();
        assert_eq!(scaled.features(), &[0.0, 0.5, 1.0]);
        assert_eq!(np.transform_row(&[8.0]).unwrap(), vec![1.0]);
        assert_eq!(np.transform_row(&[-1.0]).unwrap(), vec![0.0]);

        let constant = column(&[5.0, 5.0, 5.0]);
        let np = fit_normalizer(&constant);
        assert_eq!(np.ranges, vec![(5.0, 5.0)]);
        assert_eq!(
            apply_normalizer(&constant, &np).unwrap().features(),
            &[0.0; 3]
        );

        let single = column(&[3.5]);
        assert_eq!(fit_normalizer(&single).ranges, vec![(3.5, 3.5)]);
    }

    #[test]
    fn normalizer_shape_mismatch() {
        let d = column(&[1.0, 2.0]);
        let other = Dataset::new(
            vec!["x".into(), "y".into()],
            vec![vec![1.0, 2.0]],
            vec![0.0],
            Task::Regression,
        )
        .unwrap();
        let np = fit_normalizer(&other);
        assert!(matches!(
            apply_normalizer(&d, &np),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn loo_basics() {
        let d = column(&[1.0, 2.0, 3.0]);
        let splits: Vec<_> = loo_splits(&d).unwrap().collect();
        assert_eq!(splits.len(), 3);
        for (i, s) in splits.iter().enumerate() {
            assert_eq!(s.held_out_index, i);
            assert_eq!(s.train.n_samples(), 2);
            assert!(!s.train.features().contains(&s.held_out[0]));
        }
        assert_eq!(splits[1].train.features(), &[1.0, 3.0]);
        assert!(matches!(
            loo_splits(&column(&[1.0, 2.0])).err(),
            Some(Error::TooFewSamples {
                needed: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn select_features_cases() {
        let names: Vec<String> = (0..13).map(|j| format!("f{j}")).collect();
        let d = Dataset::new(
            names,
            vec![(0..13).map(f64::from).collect(); 3],
            vec![0.0, 1.0, 0.0],
            Task::Classification,
        )
        .unwrap();
        let s = select_features(&d, &[0, 5, 9]).unwrap();
        assert_eq!(s.n_features(), 3);
        assert_eq!(s.row(0), &[0.0, 5.0, 9.0]);
        assert_eq!(s.feature_names()[1], "f5");
        assert!(matches!(
            select_features(&d, &[2, 2]),
            Err(Error::DuplicateIndex(2))
        ));
        assert!(matches!(select_features(&d, &[]), Err(Error::EmptyDataset)));
        assert!(matches!(
            select_features(&d, &[13]),
            Err(Error::IndexOutOfRange { index: 13, len: 13 })
        ));
    }

    #[test]
    fn rejects_invalid_construction() {
        assert!(Dataset::new(
            vec!["a".into(), "a".into()],
            vec![vec![1.0, 2.0]],
            vec![0.0],
            Task::Regression
        )
        .is_err());
        assert!(Dataset::new(
            vec!["a".into()],
            vec![vec![f64::NAN]],
            vec![0.0],
            Task::Regression
        )
        .is_err());
        assert!(Dataset::new(
            vec!["a".into()],
            vec![vec![1.0]],
            vec![0.5],
            Task::Classification
        )
        .is_err());
    }
}
