//! Finite metric spaces, metric families, group actions and the basic
//! metric-building operations (restriction, quotient, ℓᵖ product).

mod action;
mod product;
mod space;

use std::collections::HashSet;

use thiserror::Error;

pub use action::{quotient, quotient_with_projection, GroupAction, Quotient};
pub use product::{product, product_index, LpExponent};
pub use space::{FiniteMetricSpace, PointSubset, ValidationReport, Violation};

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("dimension mismatch: expected {expected} entries, found {found}{}", row.map(|r| format!(" in row {r}")).unwrap_or_default())]
    Dimension {
        expected: usize,
        found: usize,
        row: Option<usize>,
    },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("duplicate member id `{0}` in family")]
    DuplicateMember(String),
    #[error("point index {index} out of range for space `{space}` with {len} points")]
    IndexOutOfRange {
        space: String,
        index: usize,
        len: usize,
    },
    #[error("invalid group action: {0}")]
    Action(String),
    #[error("action is not isometric: d({x},{y}) != d({element}{x},{element}{y})")]
    NotIsometric {
        element: String,
        x: String,
        y: String,
    },
    #[error("result is not a metric space: {0}")]
    InvalidResult(String),
    #[error("product of an empty list of spaces")]
    EmptyProduct,
    #[error("exponent p = {0} is not in [1, ∞]")]
    BadExponent(f64),
    #[error("ℓ^{0} products need a floating point scalar")]
    ExactExponent(f64),
}

/// An indexed collection of finite metric spaces with unique member ids.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricFamily<T> {
    pub id: String,
    members: Vec<FiniteMetricSpace<T>>,
}

impl<T: Scalar> MetricFamily<T> {
    pub fn new(
        id: impl Into<String>,
        members: Vec<FiniteMetricSpace<T>>,
    ) -> Result<Self, MetricError> {
        let mut seen = HashSet::new();
        for m in &members {
            if !seen.insert(m.id().to_string()) {
                return Err(MetricError::DuplicateMember(m.id().to_string()));
            }
        }
        Ok(Self {
            id: id.into(),
            members,
        })
    }

    pub fn single(space: FiniteMetricSpace<T>) -> Self {
        Self {
            id: space.id().to_string(),
            members: vec![space],
        }
    }

    pub fn members(&self) -> &[FiniteMetricSpace<T>] {
        &self.members
    }

    pub fn member(&self, id: &str) -> Option<&FiniteMetricSpace<T>> {
        self.members.iter().find(|m| m.id() == id)
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.members.iter().position(|m| m.id() == id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Largest member diameter (zero for an empty family).
    pub fn max_diameter(&self) -> T {
        self.members
            .iter()
            .map(|m| m.diameter())
            .fold(T::zero(), crate::scalar::max)
    }

    /// The family of subspaces named by `subsets`; member ids are given by `name`.
    pub fn subfamily(
        &self,
        id: impl Into<String>,
        subsets: &[PointSubset],
        mut name: impl FnMut(usize, &PointSubset) -> String,
    ) -> Result<Self, MetricError> {
        let mut members = Vec::with_capacity(subsets.len());
        for (k, s) in subsets.iter().enumerate() {
            let space = self.member(&s.space_id).ok_or_else(|| {
                MetricError::InvalidResult(format!("unknown member `{}`", s.space_id))
            })?;
            s.check_against(space)?;
            members.push(space.restrict(name(k, s), s.indices()));
        }
        Self::new(id, members)
    }
}

#[cfg(test)]
mod tests;
