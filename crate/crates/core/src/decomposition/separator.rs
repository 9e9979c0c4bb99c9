use crate::maps::FamilyMap;
use crate::metric::{FiniteMetricSpace, MetricFamily, PointSubset};
use crate::scalar::{self, Scalar};

use super::DecompositionError;

/// `f(x) = d(x, X₂) - d(x, X₁)` for a space covered by `X₁ ∪ X₂`, together
/// with the finite piece of the real line it maps onto.
#[derive(Clone, Debug)]
pub struct SeparatorMap<T> {
    pub values: Vec<T>,
    /// The distinct values, sorted, as points of the line.
    pub line: FiniteMetricSpace<T>,
    /// The map `{X} -> {line}`.
    pub map: FamilyMap,
}

impl<T: Scalar> SeparatorMap<T> {
    /// `f⁻¹((-∞, bound])`.
    pub fn sublevel(&self, space_id: &str, bound: T) -> PointSubset {
        let idx = (0..self.values.len())
            .filter(|&x| self.values[x] <= bound)
            .collect();
        PointSubset::new(space_id, idx)
    }

    /// `f⁻¹([-bound, ∞))`.
    pub fn superlevel(&self, space_id: &str, bound: T) -> PointSubset {
        let idx = (0..self.values.len())
            .filter(|&x| self.values[x] >= T::zero() - bound)
            .collect();
        PointSubset::new(space_id, idx)
    }

    /// `|f(x) - f(y)| <= factor · d(x, y) + tol` on all pairs.
    pub fn is_lipschitz(&self, space: &FiniteMetricSpace<T>, factor: T, tol: T) -> bool {
        space.pairs().all(|(x, y)| {
            scalar::le_tol(
                scalar::abs_diff(self.values[x], self.values[y]),
                factor * space.d(x, y),
                tol,
            )
        })
    }
}

pub fn union_separator_map<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    x1: &PointSubset,
    x2: &PointSubset,
) -> Result<SeparatorMap<T>, DecompositionError> {
    x1.check_against(space)?;
    x2.check_against(space)?;
    if let Some(x) = space.points().find(|&x| !x1.contains(x) && !x2.contains(x)) {
        return Err(DecompositionError::NotCovered(space.label(x).to_string()));
    }
    let values: Vec<T> = space
        .points()
        .map(|x| {
            let to2 = space
                .dist_to_set(x, x2.indices())
                .finite()
                .unwrap_or_else(T::zero);
            let to1 = space
                .dist_to_set(x, x1.indices())
                .finite()
                .unwrap_or_else(T::zero);
            to2 - to1
        })
        .collect();
    let mut distinct = values.clone();
    distinct.sort_by(scalar::cmp);
    distinct.dedup();
    let line = crate::generators::line(&format!("{}:line", space.id()), &distinct)?;
    let assignment = values
        .iter()
        .map(|v| {
            distinct
                .iter()
                .position(|d| d == v)
                .expect("value is listed")
        })
        .collect();
    let map =
        FamilyMap::new(space.id(), line.id()).with_function(space.id(), line.id(), assignment);
    Ok(SeparatorMap { values, line, map })
}

/// Singleton families for use with the map returned by [`union_separator_map`].
pub fn separator_families<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    sep: &SeparatorMap<T>,
) -> (MetricFamily<T>, MetricFamily<T>) {
    (
        MetricFamily::single(space.clone()),
        MetricFamily::single(sep.line.clone()),
    )
}
