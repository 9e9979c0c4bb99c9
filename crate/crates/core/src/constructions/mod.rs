//! Auxiliary constructions used in permanence arguments: the minimax
//! ultrametric, shell sequences and the embedding into a tree of rays.

mod rays;
mod ultrametric;

use thiserror::Error;

use crate::decomposition::DecompositionError;
use crate::metric::MetricError;

pub use rays::{
    four_point_violation, ray_tree_embed, shell_sequence, RayEmbedding, RayTree, ShellSequence,
};
pub use ultrametric::{
    minimax_ultrametric, scale_balls_partition, strong_triangle_violation, BallPartition,
    Ultrametric,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("pieces do not cover point `{0}`")]
    NotCovered(String),
    #[error("shell {0} is not contained in shell {next}", next = .0 + 1)]
    NotNested(usize),
    #[error("the last shell misses point `{0}`")]
    ShellsIncomplete(String),
    #[error("no shells given")]
    NoShells,
    #[error("scale must be non-negative")]
    NegativeScale,
    #[error(
        "pieces {} and {} minus shell {n} are not {n}-disjoint: `{}` and `{}` are at distance {distance}",
        .pieces.0, .pieces.1, .labels.0, .labels.1
    )]
    Hypothesis {
        n: usize,
        pieces: (usize, usize),
        points: (usize, usize),
        labels: (String, String),
        distance: String,
    },
    #[error("not an ultrametric: d({x}, {z}) > max(d({x}, {y}), d({y}, {z}))")]
    NotUltrametric { x: String, y: String, z: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}
