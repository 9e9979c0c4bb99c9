use std::collections::HashSet;
use std::fmt;

use crate::scalar::{self, Extended, Scalar};

use super::MetricError;

/// A finite metric space: labeled points and a full symmetric distance matrix.
///
/// Construction only checks structure (square matrix, unique labels). Metric
/// axioms are checked by [`FiniteMetricSpace::validate`] so that invalid
/// inputs can still be loaded and reported on.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace<T> {
    id: String,
    labels: Vec<String>,
    dist: Vec<T>,
    pseudo: bool,
}

impl<T: Scalar> FiniteMetricSpace<T> {
    pub fn new(
        id: impl Into<String>,
        labels: Vec<String>,
        rows: Vec<Vec<T>>,
    ) -> Result<Self, MetricError> {
        let n = labels.len();
        if rows.len() != n {
            return Err(MetricError::Dimension {
                expected: n,
                found: rows.len(),
                row: None,
            });
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::Dimension {
                    expected: n,
                    found: row.len(),
                    row: Some(i),
                });
            }
            dist.extend(row);
        }
        Self::from_flat(id, labels, dist)
    }

    /// Builds a space from a row-major `n * n` matrix.
    pub fn from_flat(
        id: impl Into<String>,
        labels: Vec<String>,
        dist: Vec<T>,
    ) -> Result<Self, MetricError> {
        let n = labels.len();
        if dist.len() != n * n {
            return Err(MetricError::Dimension {
                expected: n * n,
                found: dist.len(),
                row: None,
            });
        }
        let mut seen = HashSet::with_capacity(n);
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(MetricError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            id: id.into(),
            labels,
            dist,
            pseudo: false,
        })
    }

    /// Builds a space from a distance function on indices.
    pub fn from_fn(
        id: impl Into<String>,
        labels: Vec<String>,
        mut d: impl FnMut(usize, usize) -> T,
    ) -> Result<Self, MetricError> {
        let n = labels.len();
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dist.push(d(i, j));
            }
        }
        Self::from_flat(id, labels, dist)
    }

    /// Allows zero distances between distinct points.
    pub fn with_pseudo(mut self, pseudo: bool) -> Self {
        self.pseudo = pseudo;
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_pseudo(&self) -> bool {
        self.pseudo
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> T {
        self.dist[i * self.labels.len() + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        let n = self.labels.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    /// Every unordered pair `(i, j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn diameter(&self) -> T {
        self.dist.iter().copied().fold(T::zero(), scalar::max)
    }

    /// Diameter of a subset; zero for empty and singleton sets.
    pub fn diameter_of(&self, indices: &[usize]) -> T {
        let mut best = T::zero();
        for (a, &i) in indices.iter().enumerate() {
            for &j in &indices[a + 1..] {
                best = scalar::max(best, self.d(i, j));
            }
        }
        best
    }

    /// `d(x, A) = min_{a in A} d(x, a)`; infinite for empty `A`.
    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> Extended<T> {
        set.iter()
            .map(|&a| Extended::Finite(self.d(x, a)))
            .fold(Extended::Infinite, Extended::min)
    }

    /// `min d(a, b)` over `a in A, b in B`; infinite if either is empty.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Extended<T> {
        let mut best = Extended::Infinite;
        for &i in a {
            for &j in b {
                best = best.min(Extended::Finite(self.d(i, j)));
            }
        }
        best
    }

    /// Closed ball `{y : d(center, y) <= radius}`.
    pub fn ball(&self, center: usize, radius: T) -> PointSubset {
        let indices = self
            .points()
            .filter(|&y| self.d(center, y) <= radius)
            .collect();
        PointSubset::from_sorted(self.id.clone(), indices)
    }

    /// Open ball `{y : d(center, y) < radius}`.
    pub fn open_ball(&self, center: usize, radius: T) -> PointSubset {
        let indices = self
            .points()
            .filter(|&y| self.d(center, y) < radius)
            .collect();
        PointSubset::from_sorted(self.id.clone(), indices)
    }

    /// Closed neighborhood `B_radius(A) = {x : d(x, A) <= radius}`.
    pub fn neighborhood(&self, set: &[usize], radius: T) -> PointSubset {
        let indices = self
            .points()
            .filter(|&x| set.iter().any(|&a| self.d(x, a) <= radius))
            .collect();
        PointSubset::from_sorted(self.id.clone(), indices)
    }

    /// Subspace on the given indices with the restricted metric.
    pub fn restrict(&self, id: impl Into<String>, indices: &[usize]) -> Self {
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let mut dist = Vec::with_capacity(indices.len() * indices.len());
        for &i in indices {
            for &j in indices {
                dist.push(self.d(i, j));
            }
        }
        Self {
            id: id.into(),
            labels,
            dist,
            pseudo: self.pseudo,
        }
    }

    /// Sorted, de-duplicated list of all off-diagonal distances.
    pub fn realized_distances(&self) -> Vec<T> {
        let mut values: Vec<T> = self.pairs().map(|(i, j)| self.d(i, j)).collect();
        values.sort_by(scalar::cmp);
        values.dedup();
        values
    }

    /// Checks every metric axiom and lists each violation with its witnesses.
    pub fn validate(&self) -> ValidationReport {
        self.validate_within(T::zero())
    }

    /// Like [`validate`](Self::validate), but symmetry and the triangle
    /// inequality may fail by up to `tol`.
    pub fn validate_within(&self, tol: T) -> ValidationReport {
        let n = self.len();
        let zero = T::zero();
        let mut violations = Vec::new();
        for i in 0..n {
            if self.d(i, i) != zero {
                violations.push(Violation::Diagonal { i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dij = self.d(i, j);
                if !(dij >= zero) {
                    violations.push(Violation::Negative { i, j });
                }
                if i < j {
                    if scalar::abs_diff(dij, self.d(j, i)) > tol {
                        violations.push(Violation::Asymmetric { i, j });
                    }
                    if dij == zero && !self.pseudo {
                        violations.push(Violation::ZeroDistance { i, j });
                    }
                }
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                let dik = self.d(i, k);
                for j in 0..n {
                    if j == i || j == k {
                        continue;
                    }
                    if dik > self.d(i, j) + self.d(j, k) + tol {
                        violations.push(Violation::Triangle { i, j, k });
                    }
                }
            }
        }
        ValidationReport {
            space_id: self.id.clone(),
            violations,
        }
    }
}

/// One violated metric axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `d(i, i) != 0`.
    Diagonal {
        i: usize,
    },
    Negative {
        i: usize,
        j: usize,
    },
    /// `d(i, j) != d(j, i)`.
    Asymmetric {
        i: usize,
        j: usize,
    },
    /// Distinct points at distance zero in a space not flagged pseudo-metric.
    ZeroDistance {
        i: usize,
        j: usize,
    },
    /// `d(i, k) > d(i, j) + d(j, k)`.
    Triangle {
        i: usize,
        j: usize,
        k: usize,
    },
}

impl Violation {
    pub fn describe<T: Scalar>(&self, space: &FiniteMetricSpace<T>) -> String {
        let l = |i: usize| space.label(i);
        match *self {
            Violation::Diagonal { i } => format!("diagonal d({0},{0})={1}", l(i), space.d(i, i)),
            Violation::Negative { i, j } => {
                format!("negative d({},{})={}", l(i), l(j), space.d(i, j))
            }
            Violation::Asymmetric { i, j } => format!(
                "symmetry d({0},{1})={2} d({1},{0})={3}",
                l(i),
                l(j),
                space.d(i, j),
                space.d(j, i)
            ),
            Violation::ZeroDistance { i, j } => format!("zero-distance ({},{})", l(i), l(j)),
            Violation::Triangle { i, j, k } => format!(
                "triangle ({},{},{}) {} > {} + {}",
                l(i),
                l(j),
                l(k),
                space.d(i, k),
                space.d(i, j),
                space.d(j, k)
            ),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Diagonal { .. } => "diagonal",
            Violation::Negative { .. } => "negative",
            Violation::Asymmetric { .. } => "symmetry",
            Violation::ZeroDistance { .. } => "zero-distance",
            Violation::Triangle { .. } => "triangle",
        }
    }
}

/// Result of [`FiniteMetricSpace::validate`]; empty iff the space is a metric space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub space_id: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A subset of the points of one space, stored as sorted unique indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSubset {
    pub space_id: String,
    indices: Vec<usize>,
}

impl PointSubset {
    pub fn new(space_id: impl Into<String>, mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self {
            space_id: space_id.into(),
            indices,
        }
    }

    fn from_sorted(space_id: String, indices: Vec<usize>) -> Self {
        Self { space_id, indices }
    }

    pub fn whole<T: Scalar>(space: &FiniteMetricSpace<T>) -> Self {
        Self::from_sorted(space.id().to_string(), space.points().collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &PointSubset) -> PointSubset {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        PointSubset::new(self.space_id.clone(), indices)
    }

    pub fn difference(&self, other: &PointSubset) -> PointSubset {
        let indices = self
            .indices
            .iter()
            .copied()
            .filter(|&i| !other.contains(i))
            .collect();
        PointSubset::from_sorted(self.space_id.clone(), indices)
    }

    pub fn is_subset_of(&self, other: &PointSubset) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    /// Checks that all indices are valid points of `space`.
    pub fn check_against<T: Scalar>(
        &self,
        space: &FiniteMetricSpace<T>,
    ) -> Result<(), MetricError> {
        match self.indices.last() {
            Some(&max) if max >= space.len() => Err(MetricError::IndexOutOfRange {
                space: space.id().to_string(),
                index: max,
                len: space.len(),
            }),
            _ => Ok(()),
        }
    }

    pub fn labels<'a, T: Scalar>(&'a self, space: &'a FiniteMetricSpace<T>) -> Vec<&'a str> {
        self.indices.iter().map(|&i| space.label(i)).collect()
    }
}

impl fmt::Display for PointSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.space_id)?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}
