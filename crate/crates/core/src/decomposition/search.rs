use rayon::prelude::*;

use crate::metric::{FiniteMetricSpace, MetricFamily};
use crate::scalar::Scalar;

use super::{components_of, DecompositionCertificate, DecompositionError, MemberPieces};

/// Largest space accepted by exact search.
pub const EXACT_POINT_CEILING: usize = 20;
/// Largest `n` accepted by exact search.
pub const EXACT_COLOR_CEILING: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Exhaustive over colorings; answers are decisive.
    Exact,
    /// Balls of radius `bound / 2` colored greedily; may miss solutions.
    Greedy,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// Exact search proved that no decomposition exists.
    None,
    /// Greedy search failed; a decomposition may still exist.
    Unknown,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(v) => Some(v),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(v) => SearchOutcome::Found(f(v)),
            SearchOutcome::None => SearchOutcome::None,
            SearchOutcome::Unknown => SearchOutcome::Unknown,
        }
    }
}

/// Searches for `n + 1` colors, each an `r`-disjoint union of pieces of
/// diameter at most `bound`.
pub fn search_decomposition<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    r: T,
    n: usize,
    bound: T,
    mode: SearchMode,
) -> Result<SearchOutcome<MemberPieces>, DecompositionError> {
    match mode {
        SearchMode::Exact => exact(space, r, n, bound),
        SearchMode::Greedy => Ok(greedy(space, r, n, bound)),
    }
}

/// Runs the search on every member and assembles a single-stage certificate.
/// The outcome is `None` if any member has none, else `Unknown` if any
/// member is unknown.
pub fn search_family<T: Scalar>(
    family: &MetricFamily<T>,
    r: T,
    n: usize,
    bound: T,
    mode: SearchMode,
) -> Result<SearchOutcome<DecompositionCertificate<T>>, DecompositionError> {
    let outcomes: Vec<_> = family
        .members()
        .iter()
        .map(|m| search_decomposition(m, r, n, bound, mode))
        .collect::<Result<_, _>>()?;
    let mut members = Vec::new();
    let mut unknown = false;
    for o in outcomes {
        match o {
            SearchOutcome::Found(mp) => members.push(mp),
            SearchOutcome::None => return Ok(SearchOutcome::None),
            SearchOutcome::Unknown => unknown = true,
        }
    }
    if unknown {
        return Ok(SearchOutcome::Unknown);
    }
    Ok(SearchOutcome::Found(DecompositionCertificate::leaf(
        family.id.clone(),
        r,
        n,
        bound,
        members,
    )))
}

/// Pieces for a coloring: the `r`-components of each color class.
fn pieces_of<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    coloring: &[usize],
    colors: usize,
    r: T,
) -> MemberPieces {
    let mut out = Vec::new();
    for c in 0..colors {
        let class: Vec<usize> = (0..coloring.len()).filter(|&x| coloring[x] == c).collect();
        if class.is_empty() {
            continue;
        }
        out.push(components_of(space, &class, r));
    }
    MemberPieces {
        member: space.id().to_string(),
        colors: out,
    }
}

struct Exact<'a, T> {
    space: &'a FiniteMetricSpace<T>,
    r: T,
    bound: T,
    colors: usize,
}

impl<T: Scalar> Exact<'_, T> {
    /// Whether adding `x` to color `c` keeps the `r`-component of `x`
    /// within the diameter bound. Components only grow as points are
    /// added, so a violation can never be repaired later.
    fn admits(&self, coloring: &[usize], x: usize, c: usize) -> bool {
        let mut comp = vec![x];
        let mut k = 0;
        while k < comp.len() {
            let y = comp[k];
            for z in 0..coloring.len() {
                if coloring[z] == c && !comp.contains(&z) && self.space.d(y, z) <= self.r {
                    comp.push(z);
                }
            }
            k += 1;
        }
        comp.iter()
            .all(|&a| comp.iter().all(|&b| self.space.d(a, b) <= self.bound))
    }

    /// Depth-first search in canonical order: a point may only open the
    /// next unused color, which removes color permutations.
    fn extend(&self, coloring: &mut Vec<usize>, used: usize) -> bool {
        let x = coloring.len();
        if x == self.space.len() {
            return true;
        }
        for c in 0..(used + 1).min(self.colors) {
            if self.admits(coloring, x, c) {
                coloring.push(c);
                if self.extend(coloring, used.max(c + 1)) {
                    return true;
                }
                coloring.pop();
            }
        }
        false
    }

    /// Admissible canonical prefixes of length `depth`, in search order.
    fn prefixes(&self, depth: usize) -> Vec<(Vec<usize>, usize)> {
        let mut level = vec![(Vec::new(), 0usize)];
        for x in 0..depth.min(self.space.len()) {
            let mut next = Vec::new();
            for (prefix, used) in level {
                for c in 0..(used + 1).min(self.colors) {
                    if self.admits(&prefix, x, c) {
                        let mut p = prefix.clone();
                        p.push(c);
                        next.push((p, used.max(c + 1)));
                    }
                }
            }
            level = next;
        }
        level
    }
}

fn exact<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    r: T,
    n: usize,
    bound: T,
) -> Result<SearchOutcome<MemberPieces>, DecompositionError> {
    if space.len() > EXACT_POINT_CEILING {
        return Err(DecompositionError::PointCeiling {
            space: space.id().to_string(),
            found: space.len(),
            limit: EXACT_POINT_CEILING,
        });
    }
    if n > EXACT_COLOR_CEILING {
        return Err(DecompositionError::ColorCeiling {
            found: n,
            limit: EXACT_COLOR_CEILING,
        });
    }
    let search = Exact {
        space,
        r,
        bound,
        colors: n + 1,
    };
    let prefixes = search.prefixes(4);
    let found = prefixes.par_iter().find_map_first(|(prefix, used)| {
        let mut coloring = prefix.clone();
        search.extend(&mut coloring, *used).then_some(coloring)
    });
    Ok(match found {
        Some(coloring) => SearchOutcome::Found(pieces_of(space, &coloring, n + 1, r)),
        None => SearchOutcome::None,
    })
}

fn greedy<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    r: T,
    n: usize,
    bound: T,
) -> SearchOutcome<MemberPieces> {
    let two = T::one() + T::one();
    let radius = bound / two;
    let mut assigned = vec![false; space.len()];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for x in space.points() {
        if assigned[x] {
            continue;
        }
        let piece: Vec<usize> = space
            .points()
            .filter(|&y| !assigned[y] && space.d(x, y) <= radius)
            .collect();
        for &y in &piece {
            assigned[y] = true;
        }
        pieces.push(piece);
    }
    let mut colors: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
    for piece in pieces {
        let slot = colors.iter().position(|class| {
            class.iter().all(|q| {
                space
                    .set_distance(q, &piece)
                    .finite()
                    .is_some_and(|d| d > r)
            })
        });
        match slot {
            Some(c) => colors[c].push(piece),
            None => return SearchOutcome::Unknown,
        }
    }
    colors.retain(|c| !c.is_empty());
    SearchOutcome::Found(MemberPieces {
        member: space.id().to_string(),
        colors,
    })
}
