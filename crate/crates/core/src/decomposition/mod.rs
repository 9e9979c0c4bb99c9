//! `r`-disjoint decompositions: `r`-components, staged decomposition
//! certificates, exhaustive and greedy search, fibering witnesses and the
//! separator map used to split a space covered by two subsets.

mod certificate;
mod fibering;
mod search;
mod separator;

use thiserror::Error;

use crate::cover::CoverError;
use crate::maps::MapError;
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::scalar::Scalar;
use crate::union_find::UnionFind;

pub use certificate::{
    check_decomposition, piece_family, DecompositionCertificate, MemberPieces, Stage, StageNext,
};
pub use fibering::{ball_preimage_family, check_fibering_witness, FiberingReport, FiberingWitness};
pub use search::{
    search_decomposition, search_family, SearchMode, SearchOutcome, EXACT_COLOR_CEILING,
    EXACT_POINT_CEILING,
};
pub use separator::{separator_families, union_separator_map, SeparatorMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompositionError {
    #[error("certificate is for family `{found}` but `{expected}` was supplied")]
    FamilyMismatch { expected: String, found: String },
    #[error("unknown member `{member}` in family `{family}`")]
    UnknownMember { family: String, member: String },
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
    #[error("stages form a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("piece {piece} of color {color} of member `{member}` is empty")]
    EmptyPiece {
        member: String,
        color: usize,
        piece: usize,
    },
    #[error("member `{member}` refers to point {index} but has {len} points")]
    IndexOutOfRange {
        member: String,
        index: usize,
        len: usize,
    },
    #[error(
        "exact search is limited to {limit} points; `{space}` has {found} (use greedy search)"
    )]
    PointCeiling {
        space: String,
        found: usize,
        limit: usize,
    },
    #[error("exact search is limited to n <= {limit}; got {found} (use greedy search)")]
    ColorCeiling { found: usize, limit: usize },
    #[error("X1 and X2 do not cover point `{0}`")]
    NotCovered(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Partition of a space into its `r`-components.
#[derive(Clone, Debug, PartialEq)]
pub struct RPartition<T> {
    pub space_id: String,
    pub r: T,
    /// Blocks sorted internally and ordered by smallest point.
    pub blocks: Vec<Vec<usize>>,
}

impl<T: Scalar> RPartition<T> {
    /// Block index of every point.
    pub fn block_of(&self, points: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; points];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x] = b;
            }
        }
        out
    }

    /// Every block of `finer` lies inside a block of `self`.
    pub fn coarsens(&self, finer: &RPartition<T>) -> bool {
        let points = self.blocks.iter().map(Vec::len).sum();
        let of = self.block_of(points);
        finer
            .blocks
            .iter()
            .all(|b| b.iter().all(|&x| of[x] == of[b[0]]))
    }
}

/// Connected components of the graph with an edge wherever `d(x, y) <= r`.
///
/// Distinct blocks are more than `r` apart, and no coarser partition has
/// that property.
pub fn r_components<T: Scalar>(space: &FiniteMetricSpace<T>, r: T) -> RPartition<T> {
    RPartition {
        space_id: space.id().to_string(),
        r,
        blocks: components_of(space, &space.points().collect::<Vec<_>>(), r),
    }
}

/// `r`-components of the subset `points`, as lists of original indices.
pub(crate) fn components_of<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    points: &[usize],
    r: T,
) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(points.len());
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            if space.d(points[a], points[b]) <= r {
                uf.union(a, b);
            }
        }
    }
    uf.groups()
        .into_iter()
        .map(|g| g.into_iter().map(|k| points[k]).collect())
        .collect()
}
