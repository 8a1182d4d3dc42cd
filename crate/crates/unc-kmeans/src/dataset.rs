//! Dataset representation, CSV ingestion, Euclidean geometry, and the SSEDM
//! objective (the within-cluster sum of squared distances to the mean).

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An immutable point in m-dimensional Euclidean space.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting empty coordinate lists and non-finite values.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ContractViolation(
                "a point needs at least one coordinate".into(),
            ));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::ContractViolation(format!(
                "non-finite coordinate {c}"
            )));
        }
        Ok(Self { coords })
    }

    /// Internal constructor for coordinates already known to be finite.
    pub(crate) fn from_coords_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// An instance: n points sharing one dimensionality, plus a label for reports.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    points: Vec<Point>,
    dim: usize,
}

impl Dataset {
    pub fn new(name: impl Into<String>, points: Vec<Point>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyDataset)?;
        let dim = first.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
        Ok(Self {
            name: name.into(),
            points,
            dim,
        })
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_rows(name: impl Into<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let points = rows.into_iter().map(Point::new).collect::<Result<_>>()?;
        Self::new(name, points)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }

    /// Number of distinct positions (exact coordinate equality; duplicates
    /// are allowed in a dataset but cap how many centers can be selected).
    pub fn distinct_count(&self) -> usize {
        let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(self.points.len());
        for p in &self.points {
            // normalize -0.0 to +0.0 so bit patterns agree with numeric equality
            let key: Vec<u64> = p.coords.iter().map(|c| (c + 0.0).to_bits()).collect();
            seen.insert(key);
        }
        seen.len()
    }
}

/// A cluster assignment: one label in [0, k) per dataset point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<usize>,
    k: usize,
}

impl Assignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&label) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::LabelOutOfRange { label, k });
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Squared Euclidean distance over raw coordinate slices (no dimension check).
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Euclidean distance between two points of equal dimensionality.
pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(sq_dist(a.coords(), b.coords()).sqrt())
}

/// Coordinate-wise arithmetic mean of a non-empty set of points.
pub fn centroid<'a, I>(points: I) -> Result<Point>
where
    I: IntoIterator<Item = &'a Point>,
{
    let mut iter = points.into_iter();
    let first = iter.next().ok_or(Error::EmptyCluster)?;
    let mut sums = first.coords().to_vec();
    let mut count = 1usize;
    for p in iter {
        if p.dim() != sums.len() {
            return Err(Error::DimensionMismatch {
                left: sums.len(),
                right: p.dim(),
            });
        }
        for (s, c) in sums.iter_mut().zip(p.coords()) {
            *s += c;
        }
        count += 1;
    }
    for s in &mut sums {
        *s /= count as f64;
    }
    Ok(Point::from_coords_unchecked(sums))
}

/// Neumaier-compensated accumulator; keeps iris-scale SSEDM error well under
/// 1e-9 relative.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sum over clusters of squared distances from each member to its cluster
/// mean. Means are derived from the assignment itself; empty clusters
/// contribute zero.
pub fn ssedm(dataset: &Dataset, assignment: &Assignment) -> Result<f64> {
    if assignment.len() != dataset.len() {
        return Err(Error::ContractViolation(format!(
            "assignment covers {} points, dataset has {}",
            assignment.len(),
            dataset.len()
        )));
    }
    let k = assignment.k();
    let dim = dataset.dim();
    let mut sums = vec![0.0f64; k * dim];
    let mut counts = vec![0usize; k];
    for (point, &label) in dataset.points().iter().zip(assignment.labels()) {
        counts[label] += 1;
        for (s, c) in sums[label * dim..(label + 1) * dim].iter_mut().zip(point.coords()) {
            *s += c;
        }
    }
    let mut means = sums;
    for (label, count) in counts.iter().enumerate() {
        if *count > 0 {
            for m in &mut means[label * dim..(label + 1) * dim] {
                *m /= *count as f64;
            }
        }
    }
    let mut total = CompensatedSum::default();
    for (point, &label) in dataset.points().iter().zip(assignment.labels()) {
        total.add(sq_dist(point.coords(), &means[label * dim..(label + 1) * dim]));
    }
    Ok(total.value())
}

/// Options for delimited-text ingestion of UCI-style numeric files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvOptions {
    /// Skip the first row.
    pub has_header: bool,
    /// Single ASCII field separator; use ' ' for space-separated files.
    pub delimiter: char,
    /// Column indices (into the raw row) to discard, e.g. a class label.
    pub drop_columns: Vec<usize>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            has_header: false,
            delimiter: ',',
            drop_columns: Vec::new(),
        }
    }
}

/// Loads a delimited numeric file. Row numbers in errors are 1-based and
/// count the header row if present.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    if !options.delimiter.is_ascii() {
        return Err(Error::InvalidConfig(format!(
            "delimiter {:?} is not an ASCII character",
            options.delimiter
        )));
    }
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .delimiter(options.delimiter as u8)
        .from_reader(file);

    let drop: HashSet<usize> = options.drop_columns.iter().copied().collect();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected_width: Option<usize> = None;
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        if options.has_header && i == 0 {
            continue;
        }
        let width = record.len();
        let expected = *expected_width.get_or_insert(width);
        if width != expected {
            return Err(Error::Parse {
                row,
                message: format!("expected {expected} columns, found {width}"),
            });
        }
        if let Some(&bad) = drop.iter().find(|&&c| c >= width) {
            return Err(Error::InvalidConfig(format!(
                "drop column {bad} out of range: rows have {width} columns"
            )));
        }
        let mut coords = Vec::with_capacity(width - drop.len());
        for (col, cell) in record.iter().enumerate() {
            if drop.contains(&col) {
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                message: format!("column {col}: {cell:?} is not a number"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    row,
                    message: format!("column {col}: {cell:?} is not finite"),
                });
            }
            coords.push(value);
        }
        if coords.is_empty() {
            return Err(Error::Parse {
                row,
                message: "no columns left after dropping".into(),
            });
        }
        rows.push(coords);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    Dataset::from_rows(name, rows)
}

/// Per-column feature scaling applied before clustering. Defaults to `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    None,
    MinMax,
    ZScore,
}

impl Scaling {
    /// Returns a scaled copy of the dataset. Constant columns map to 0.
    /// Z-scores use the population standard deviation.
    pub fn apply(self, dataset: &Dataset) -> Dataset {
        if self == Scaling::None {
            return dataset.clone();
        }
        let n = dataset.len() as f64;
        let dim = dataset.dim();
        let mut offset = vec![0.0f64; dim];
        let mut scale = vec![1.0f64; dim];
        match self {
            Scaling::None => unreachable!(),
            Scaling::MinMax => {
                for c in 0..dim {
                    let column = dataset.points().iter().map(|p| p.coords()[c]);
                    let min = column.clone().fold(f64::INFINITY, f64::min);
                    let max = column.fold(f64::NEG_INFINITY, f64::max);
                    offset[c] = min;
                    scale[c] = if max > min { max - min } else { 0.0 };
                }
            }
            Scaling::ZScore => {
                for c in 0..dim {
                    let mean =
                        dataset.points().iter().map(|p| p.coords()[c]).sum::<f64>() / n;
                    let var = dataset
                        .points()
                        .iter()
                        .map(|p| {
                            let d = p.coords()[c] - mean;
                            d * d
                        })
                        .sum::<f64>()
                        / n;
                    offset[c] = mean;
                    scale[c] = var.sqrt();
                }
            }
        }
        let points = dataset
            .points()
            .iter()
            .map(|p| {
                let coords = p
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(c, &x)| {
                        if scale[c] > 0.0 {
                            (x - offset[c]) / scale[c]
                        } else {
                            0.0
                        }
                    })
                    .collect();
                Point::from_coords_unchecked(coords)
            })
            .collect();
        Dataset {
            name: dataset.name.clone(),
            points,
            dim,
        }
    }
}

impl FromStr for Scaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Scaling::None),
            "minmax" => Ok(Scaling::MinMax),
            "zscore" => Ok(Scaling::ZScore),
            other => Err(Error::InvalidConfig(format!(
                "unknown scaling {other:?} (expected none|minmax|zscore)"
            ))),
        }
    }
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scaling::None => "none",
            Scaling::MinMax => "minmax",
            Scaling::ZScore => "zscore",
        };
        f.write_str(s)
    }
}
