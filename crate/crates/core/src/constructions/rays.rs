use crate::maps::FamilyMap;
use crate::metric::{FiniteMetricSpace, PointSubset};
use crate::scalar::{self, Scalar};

use super::ConstructionError;

/// Nested shells `Y'(1) ⊆ Y'(2) ⊆ ...` grown from the sets `Y(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellSequence {
    /// `shells[k]` is `Y'(k + 1)`.
    pub shells: Vec<PointSubset>,
    /// Point used as `Y'(1)` when every `Y(n)` is empty.
    pub designated: Option<usize>,
    /// The last shell is the whole space.
    pub exhausts: bool,
}

/// `Y'(1) = Y(1)`, `Y'(n) = B_{n-1}(Y'(n-1)) ∪ Y(n)`; when all `Y(n)` are
/// empty, `Y'(1)` is the point with index 0.
pub fn shell_sequence<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    pieces: &[PointSubset],
) -> Result<ShellSequence, ConstructionError> {
    if pieces.is_empty() {
        return Err(ConstructionError::NoShells);
    }
    for p in pieces {
        p.check_against(space)?;
    }
    let designated = (pieces.iter().all(PointSubset::is_empty) && !space.is_empty()).then_some(0);
    let first = match designated {
        Some(x) => PointSubset::new(space.id(), vec![x]),
        None => pieces[0].clone(),
    };
    let mut shells = vec![first];
    for (k, piece) in pieces.iter().enumerate().skip(1) {
        let radius = T::from_usize(k).expect("shell index fits the scalar");
        let grown = space.neighborhood(shells[k - 1].indices(), radius);
        shells.push(grown.union(piece));
    }
    let exhausts = shells.last().is_some_and(|s| s.len() == space.len());
    Ok(ShellSequence {
        shells,
        designated,
        exhausts,
    })
}

/// Rays `L_0, ..., L_{k-1}` of length `depth` glued at a root.
#[derive(Clone, Debug)]
pub struct RayTree<T> {
    pub rays: usize,
    pub depth: usize,
    /// Root has index 0 and label `p`; vertex `m` of ray `j` is `L<j>:<m>`.
    pub space: FiniteMetricSpace<T>,
}

impl<T: Scalar> RayTree<T> {
    pub const ROOT: usize = 0;

    pub fn new(id: impl Into<String>, rays: usize, depth: usize) -> Self {
        let mut labels = vec!["p".to_string()];
        let mut at = vec![(0, 0)];
        for j in 0..rays {
            for m in 1..=depth {
                labels.push(format!("L{j}:{m}"));
                at.push((j, m));
            }
        }
        let space = FiniteMetricSpace::from_fn(id, labels, |a, b| {
            let ((ja, ma), (jb, mb)) = (at[a], at[b]);
            let d = if ja == jb || ma == 0 || mb == 0 {
                ma.abs_diff(mb)
            } else {
                ma + mb
            };
            T::from_usize(d).expect("tree distance fits the scalar")
        })
        .expect("ray labels are unique");
        Self { rays, depth, space }
    }

    /// Index of vertex `m` on ray `j`; `m = 0` is the root.
    pub fn vertex(&self, j: usize, m: usize) -> usize {
        if m == 0 {
            Self::ROOT
        } else {
            1 + j * self.depth + (m - 1)
        }
    }
}

/// `f: X -> T` sending the first shell to the root and a point first
/// reached in shell `n + 1` to vertex `n` of the ray of its piece.
#[derive(Clone, Debug)]
pub struct RayEmbedding<T> {
    pub tree: RayTree<T>,
    /// `(ray, m)` for every point; `m = 0` means the root.
    pub positions: Vec<(usize, usize)>,
    pub map: FamilyMap,
}

impl<T: Scalar> RayEmbedding<T> {
    /// First pair with `d_T(f x, f y) > 2 d(x, y) + 2`.
    pub fn coarseness_violation(&self, space: &FiniteMetricSpace<T>) -> Option<(usize, usize)> {
        let f = &self.map.functions[0].assignment;
        let two = T::one() + T::one();
        space
            .pairs()
            .find(|&(x, y)| self.tree.space.d(f[x], f[y]) > two * space.d(x, y) + two)
    }
}

/// Builds the ray-tree map after checking its hypotheses: the pieces cover
/// `X`, the shells are nested and end with `X`, and for every shell index
/// `n` the sets `X_j ∖ Y'(n)` are `n`-disjoint. The last condition is what
/// makes the ray of a point unambiguous; a violation is reported with the
/// first offending pair and never repaired.
pub fn ray_tree_embed<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    pieces: &[PointSubset],
    shells: &[PointSubset],
) -> Result<RayEmbedding<T>, ConstructionError> {
    for p in pieces.iter().chain(shells) {
        p.check_against(space)?;
    }
    if let Some(x) = space
        .points()
        .find(|&x| !pieces.iter().any(|p| p.contains(x)))
    {
        return Err(ConstructionError::NotCovered(space.label(x).to_string()));
    }
    let last = shells.last().ok_or(ConstructionError::NoShells)?;
    for (k, w) in shells.windows(2).enumerate() {
        if !w[0].is_subset_of(&w[1]) {
            return Err(ConstructionError::NotNested(k + 1));
        }
    }
    if let Some(x) = space.points().find(|&x| !last.contains(x)) {
        return Err(ConstructionError::ShellsIncomplete(
            space.label(x).to_string(),
        ));
    }
    for (k, shell) in shells.iter().enumerate() {
        let n = k + 1;
        let scale = T::from_usize(n).expect("shell index fits the scalar");
        let outside: Vec<Vec<usize>> = pieces
            .iter()
            .map(|p| {
                p.indices()
                    .iter()
                    .copied()
                    .filter(|&x| !shell.contains(x))
                    .collect()
            })
            .collect();
        for j in 0..pieces.len() {
            for l in j + 1..pieces.len() {
                for &x in &outside[j] {
                    if let Some(&y) = outside[l].iter().find(|&&y| space.d(x, y) <= scale) {
                        return Err(ConstructionError::Hypothesis {
                            n,
                            pieces: (j, l),
                            points: (x, y),
                            labels: (space.label(x).to_string(), space.label(y).to_string()),
                            distance: space.d(x, y).to_string(),
                        });
                    }
                }
            }
        }
    }
    let tree = RayTree::new(format!("T({})", space.id()), pieces.len(), shells.len() + 1);
    let mut positions = vec![(0, 0); space.len()];
    for n in 1..shells.len() {
        for &y in shells[n].indices() {
            if !shells[n - 1].contains(y) {
                let ray = pieces
                    .iter()
                    .position(|p| p.contains(y))
                    .expect("pieces cover X");
                positions[y] = (ray, n);
            }
        }
    }
    let assignment = positions.iter().map(|&(j, m)| tree.vertex(j, m)).collect();
    let map = FamilyMap::new(space.id(), tree.space.id()).with_function(
        space.id(),
        tree.space.id(),
        assignment,
    );
    Ok(RayEmbedding {
        tree,
        positions,
        map,
    })
}

/// First quadruple among `points` where the two largest of the sums
/// `d(x,y) + d(z,w)`, `d(x,z) + d(y,w)`, `d(x,w) + d(y,z)` differ by more
/// than `tol`. Tree metrics have none.
pub fn four_point_violation<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    points: &[usize],
    tol: T,
) -> Option<[usize; 4]> {
    let d = |a: usize, b: usize| space.d(points[a], points[b]);
    let k = points.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for e in c + 1..k {
                    let mut sums = [d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)];
                    sums.sort_by(scalar::cmp);
                    if sums[2] - sums[1] > tol {
                        return Some([points[a], points[b], points[c], points[e]]);
                    }
                }
            }
        }
    }
    None
}
