use rayon::prelude::*;

use crate::decomposition::{r_components, DecompositionCertificate, MemberPieces, RPartition};
use crate::metric::FiniteMetricSpace;
use crate::scalar::{self, Scalar};
use crate::union_find::UnionFind;

use super::ConstructionError;

/// A space with the minimax metric and the spanning tree it was read from.
#[derive(Clone, Debug)]
pub struct Ultrametric<T> {
    pub space: FiniteMetricSpace<T>,
    /// Minimum spanning tree edges `(x, y, d(x, y))` in the order Kruskal
    /// accepted them.
    pub tree: Vec<(usize, usize, T)>,
}

/// `d'(x, y) = max(1, min over chains x = x_0, ..., x_n = y of the longest
/// hop)` for `x != y`.
///
/// The minimax chain between two points runs along a minimum spanning tree,
/// so `d'` is the largest edge on the tree path, floored at 1. The result
/// satisfies the strong triangle inequality and `d' <= max(d, 1)`.
pub fn minimax_ultrametric<T: Scalar>(space: &FiniteMetricSpace<T>) -> Ultrametric<T> {
    let n = space.len();
    let mut edges: Vec<(usize, usize)> = space.pairs().collect();
    edges.sort_by(|a, b| scalar::cmp(&space.d(a.0, a.1), &space.d(b.0, b.1)).then(a.cmp(b)));
    let mut uf = UnionFind::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    let mut adjacent: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (x, y) in edges {
        if uf.union(x, y) {
            let w = space.d(x, y);
            tree.push((x, y, w));
            adjacent[x].push((y, w));
            adjacent[y].push((x, w));
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    // Largest edge on the tree path from each source, by one traversal each.
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|source| {
            let mut hop = vec![T::zero(); n];
            let mut seen = vec![false; n];
            let mut stack = vec![source];
            seen[source] = true;
            while let Some(u) = stack.pop() {
                for &(v, w) in &adjacent[u] {
                    if !seen[v] {
                        seen[v] = true;
                        hop[v] = scalar::max(hop[u], w);
                        stack.push(v);
                    }
                }
            }
            (0..n)
                .map(|y| {
                    if y == source {
                        T::zero()
                    } else {
                        scalar::max(hop[y], T::one())
                    }
                })
                .collect()
        })
        .collect();
    let space = FiniteMetricSpace::new(format!("{}'", space.id()), space.labels().to_vec(), rows)
        .expect("same labels, square matrix");
    Ultrametric { space, tree }
}

/// First triple with `d(x, z) > max(d(x, y), d(y, z)) + tol`, scanning `x`
/// in order.
pub fn strong_triangle_violation<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    tol: T,
) -> Option<(usize, usize, usize)> {
    let n = space.len();
    (0..n).into_par_iter().find_map_first(|x| {
        for y in 0..n {
            for z in 0..n {
                let bound = scalar::max(space.d(x, y), space.d(y, z));
                if space.d(x, z) > bound + tol {
                    return Some((x, y, z));
                }
            }
        }
        None
    })
}

/// Closed `r`-balls of an ultrametric space with the matching
/// zero-dimensional certificate.
#[derive(Clone, Debug)]
pub struct BallPartition<T> {
    pub partition: RPartition<T>,
    /// One color whose pieces are the balls; leaf bound is the largest ball
    /// diameter. Family and member id are the space id.
    pub certificate: DecompositionCertificate<T>,
}

/// Partitions an ultrametric space into closed `r`-balls.
///
/// In an ultrametric two `r`-balls coincide or are disjoint, and distinct
/// balls are more than `r` apart, so the balls are exactly the
/// `r`-components. Both are computed and compared.
pub fn scale_balls_partition<T: Scalar>(
    u: &FiniteMetricSpace<T>,
    r: T,
) -> Result<BallPartition<T>, ConstructionError> {
    let not_ultra = |(x, y, z): (usize, usize, usize)| ConstructionError::NotUltrametric {
        x: u.label(x).to_string(),
        y: u.label(y).to_string(),
        z: u.label(z).to_string(),
    };
    if r < T::zero() {
        return Err(ConstructionError::NegativeScale);
    }
    if let Some(w) = strong_triangle_violation(u, T::zero()) {
        return Err(not_ultra(w));
    }
    let mut assigned = vec![false; u.len()];
    let mut blocks = Vec::new();
    for x in u.points() {
        if assigned[x] {
            continue;
        }
        let ball = u.ball(x, r).indices().to_vec();
        for &y in &ball {
            assigned[y] = true;
        }
        blocks.push(ball);
    }
    let components = r_components(u, r);
    assert_eq!(
        components.blocks, blocks,
        "balls of an ultrametric are its r-components"
    );
    let bound = blocks
        .iter()
        .map(|b| u.diameter_of(b))
        .fold(T::zero(), scalar::max);
    let certificate = DecompositionCertificate::leaf(
        u.id(),
        r,
        0,
        bound,
        vec![MemberPieces {
            member: u.id().to_string(),
            colors: vec![blocks.clone()],
        }],
    );
    Ok(BallPartition {
        partition: RPartition {
            space_id: u.id().to_string(),
            r,
            blocks,
        },
        certificate,
    })
}
