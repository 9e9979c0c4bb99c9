//! Bundled example spaces: lines, paths, grids, trees, rays, random metric
//! spaces and random isometric group actions.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cover::generators::path_interval_cover;
use crate::cover::{AsdimCertificate, AsdimEntry, MemberCover};
use crate::decomposition::{DecompositionCertificate, FiberingWitness, MemberPieces};
use crate::maps::{preimage_family, FamilyMap};
use crate::metric::{FiniteMetricSpace, GroupAction, MetricError, MetricFamily, PointSubset};
use crate::scalar::{self, Scalar};

/// Points on the real line at the given coordinates, labeled by coordinate.
pub fn line<T: Scalar>(id: &str, coords: &[T]) -> Result<FiniteMetricSpace<T>, MetricError> {
    let labels = coords.iter().map(|c| c.to_string()).collect();
    FiniteMetricSpace::from_fn(id, labels, |i, j| scalar::abs_diff(coords[i], coords[j]))
}

/// Unit-step path `0, 1, ..., n-1`.
pub fn path<T: Scalar>(id: &str, n: usize) -> FiniteMetricSpace<T> {
    let coords: Vec<T> = (0..n).map(|i| T::from_usize(i).unwrap()).collect();
    line(id, &coords).expect("path labels are unique")
}

/// `w × h` unit grid with the ℓ¹ metric; point `(x, y)` has index `x * h + y`.
pub fn grid<T: Scalar>(id: &str, w: usize, h: usize) -> FiniteMetricSpace<T> {
    let labels = (0..w)
        .flat_map(|x| (0..h).map(move |y| format!("({x},{y})")))
        .collect();
    FiniteMetricSpace::from_fn(id, labels, |a, b| {
        let (xa, ya, xb, yb) = (a / h, a % h, b / h, b % h);
        T::from_usize(xa.abs_diff(xb) + ya.abs_diff(yb)).unwrap()
    })
    .expect("grid labels are unique")
}

/// Path metric of a weighted tree given by parent pointers.
///
/// `parents[0]` must be `None` (the root); every other node points to an
/// earlier node. `lengths[i]` is the length of the edge to the parent.
pub fn tree<T: Scalar>(
    id: &str,
    parents: &[Option<usize>],
    lengths: &[T],
    labels: Vec<String>,
) -> Result<FiniteMetricSpace<T>, MetricError> {
    let n = parents.len();
    let mut depth = vec![T::zero(); n];
    let mut level = vec![0usize; n];
    for i in 1..n {
        let p = parents[i].expect("only the root has no parent");
        assert!(p < i, "parents must precede children");
        depth[i] = depth[p] + lengths[i];
        level[i] = level[p] + 1;
    }
    let lca = |mut a: usize, mut b: usize| {
        while a != b {
            if level[a] >= level[b] {
                a = parents[a].unwrap();
            } else {
                b = parents[b].unwrap();
            }
        }
        a
    };
    FiniteMetricSpace::from_fn(id, labels, |a, b| {
        if a == b {
            T::zero()
        } else {
            let c = lca(a, b);
            (depth[a] - depth[c]) + (depth[b] - depth[c])
        }
    })
}

/// Random tree with unit edges where every node has at most `max_children` children.
pub fn random_tree<T: Scalar, R: Rng>(
    rng: &mut R,
    id: &str,
    n: usize,
    max_children: usize,
) -> FiniteMetricSpace<T> {
    let mut parents = vec![None];
    let mut children = vec![0usize];
    for i in 1..n {
        let open: Vec<usize> = (0..i).filter(|&p| children[p] < max_children).collect();
        let p = *open.choose(rng).expect("some node has room");
        parents.push(Some(p));
        children[p] += 1;
        children.push(0);
    }
    let lengths = vec![T::one(); n];
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    tree(id, &parents, &lengths, labels).expect("tree labels are unique")
}

/// A star: one center and several rays, each ray given by its successive gaps.
///
/// Labels are `c` for the center and `a{j}.{k}` for the `k`-th point of ray `j`.
/// Returns the space and, for each ray, its point indices (center excluded).
pub fn star<T: Scalar>(id: &str, rays: &[Vec<T>]) -> (FiniteMetricSpace<T>, Vec<Vec<usize>>) {
    let mut parents = vec![None];
    let mut lengths = vec![T::zero()];
    let mut labels = vec!["c".to_string()];
    let mut members = Vec::new();
    for (j, gaps) in rays.iter().enumerate() {
        let mut prev = 0;
        let mut ray = Vec::new();
        for (k, &g) in gaps.iter().enumerate() {
            parents.push(Some(prev));
            lengths.push(g);
            labels.push(format!("a{j}.{k}"));
            prev = labels.len() - 1;
            ray.push(prev);
        }
        members.push(ray);
    }
    let space = tree(id, &parents, &lengths, labels).expect("star labels are unique");
    (space, members)
}

/// `n` distinct random integer points in `[0, side)^dim` with the ℓ¹ metric.
pub fn random_lattice_points<T: Scalar, R: Rng>(
    rng: &mut R,
    id: &str,
    n: usize,
    dim: usize,
    side: i64,
) -> FiniteMetricSpace<T> {
    let capacity = (side as usize).saturating_pow(dim as u32);
    let n = n.min(capacity);
    let mut pts: Vec<Vec<i64>> = Vec::with_capacity(n);
    while pts.len() < n {
        let p: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..side)).collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteMetricSpace::from_fn(id, labels, |a, b| {
        let s: i64 = pts[a].iter().zip(&pts[b]).map(|(x, y)| (x - y).abs()).sum();
        T::from_i64(s).unwrap()
    })
    .expect("labels are unique")
}

/// `n` random points in `[0, scale)^dim` with the Euclidean metric.
pub fn random_euclidean<R: Rng>(
    rng: &mut R,
    id: &str,
    n: usize,
    dim: usize,
    scale: f64,
) -> FiniteMetricSpace<f64> {
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>() * scale).collect())
        .collect();
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteMetricSpace::from_fn(id, labels, |a, b| {
        if a == b {
            return 0.0;
        }
        pts[a]
            .iter()
            .zip(&pts[b])
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    })
    .expect("labels are unique")
}

/// Random integer metric: shortest-path closure of random edge weights in
/// `1..=max_weight` on a complete graph.
pub fn random_graph_metric<T: Scalar, R: Rng>(
    rng: &mut R,
    id: &str,
    n: usize,
    max_weight: i64,
) -> FiniteMetricSpace<T> {
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=max_weight);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteMetricSpace::from_fn(id, labels, |a, b| T::from_i64(d[a][b]).unwrap())
        .expect("labels are unique")
}

/// Symmetry groups of the square lattice used for random isometric actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeGroup {
    Trivial,
    /// `(x, y) ↦ (-x, y)`.
    Reflection,
    /// `(x, y) ↦ (-x, -y)`.
    HalfTurn,
    /// Rotations by multiples of 90°.
    QuarterTurns,
    /// `(x, y) ↦ (±x, ±y)`.
    Klein,
}

impl LatticeGroup {
    pub const ALL: [LatticeGroup; 5] = [
        LatticeGroup::Trivial,
        LatticeGroup::Reflection,
        LatticeGroup::HalfTurn,
        LatticeGroup::QuarterTurns,
        LatticeGroup::Klein,
    ];

    fn generators(self) -> Vec<fn((i64, i64)) -> (i64, i64)> {
        match self {
            LatticeGroup::Trivial => vec![],
            LatticeGroup::Reflection => vec![|(x, y)| (-x, y)],
            LatticeGroup::HalfTurn => vec![|(x, y)| (-x, -y)],
            LatticeGroup::QuarterTurns => vec![|(x, y)| (-y, x)],
            LatticeGroup::Klein => vec![|(x, y)| (-x, y), |(x, y)| (x, -y)],
        }
    }
}

/// A random union of orbits of lattice points under `group`, with the ℓ¹
/// metric, and the (isometric) action of `group` on it.
pub fn random_symmetric_space<T: Scalar, R: Rng>(
    rng: &mut R,
    id: &str,
    group: LatticeGroup,
    max_points: usize,
    radius: i64,
) -> (FiniteMetricSpace<T>, GroupAction) {
    let gens = group.generators();
    let mut pts: Vec<(i64, i64)> = Vec::new();
    let mut attempts = 0;
    while attempts < 200 {
        attempts += 1;
        let seed = (
            rng.gen_range(-radius..=radius),
            rng.gen_range(-radius..=radius),
        );
        let mut orbit = vec![seed];
        let mut k = 0;
        while k < orbit.len() {
            for g in &gens {
                let q = g(orbit[k]);
                if !orbit.contains(&q) {
                    orbit.push(q);
                }
            }
            k += 1;
        }
        if orbit.iter().any(|p| pts.contains(p)) {
            continue;
        }
        if pts.len() + orbit.len() > max_points {
            if pts.is_empty() {
                continue;
            }
            break;
        }
        pts.extend(orbit);
    }
    let n = pts.len();
    let labels = pts.iter().map(|(x, y)| format!("({x},{y})")).collect();
    let space = FiniteMetricSpace::from_fn(id, labels, |a, b| {
        T::from_i64((pts[a].0 - pts[b].0).abs() + (pts[a].1 - pts[b].1).abs()).unwrap()
    })
    .expect("lattice points are distinct");
    let perm_gens: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| {
            (0..n)
                .map(|i| pts.iter().position(|&q| q == g(pts[i])).unwrap())
                .collect()
        })
        .collect();
    let action = GroupAction::generated_by(n, &perm_gens).expect("lattice symmetries form a group");
    (space, action)
}

/// Projection of the `n × n` unit grid onto its first coordinate, with a
/// complete fibering witness.
///
/// Source family `grid` (member `g`, see [`grid`]), target family `line`
/// (member `p`, the unit path). The schedule is `1, 2, 4, ...` up to the first
/// radius `>= n - 1`. The preimage of a radius-`k` ball is a strip of at most
/// `2k + 1` columns; its certificate at `r = 1`, `n = 1` colors bands of two
/// rows alternately, with leaf bound `2k + 1`. The target certificate covers
/// the path by intervals of `4λ` points for `λ = 1, 2, 4`.
pub fn grid_projection(n: usize) -> (MetricFamily<i64>, MetricFamily<i64>, FiberingWitness<i64>) {
    assert!(n >= 2);
    let source = MetricFamily::new("grid", vec![grid::<i64>("g", n, n)]).expect("one member");
    let target = MetricFamily::new("line", vec![path::<i64>("p", n)]).expect("one member");
    let map =
        FamilyMap::new("grid", "line").with_function("g", "p", (0..n * n).map(|i| i / n).collect());
    let mut schedule = vec![1usize];
    while *schedule.last().unwrap() < n - 1 {
        schedule.push(schedule.last().unwrap() * 2);
    }
    let line = &target.members()[0];
    let mut inner = Vec::new();
    for &k in &schedule {
        let balls: Vec<PointSubset> = line.points().map(|y| line.ball(y, k as i64)).collect();
        let members = preimage_family(&map, &balls)
            .iter()
            .enumerate()
            .map(|(j, strip)| {
                let mut colors = vec![Vec::<Vec<usize>>::new(), Vec::new()];
                for (pos, &o) in strip.indices().iter().enumerate() {
                    let band = (o % n) / 2;
                    let class = &mut colors[band % 2];
                    if class.len() <= band / 2 {
                        class.push(Vec::new());
                    }
                    class[band / 2].push(pos);
                }
                colors.retain(|c| !c.is_empty());
                MemberPieces {
                    member: format!("g#{j}"),
                    colors,
                }
            })
            .collect();
        let cert =
            DecompositionCertificate::leaf(format!("grid@{k}"), 1, 1, 2 * k as i64 + 1, members);
        inner.push((k as i64, cert));
    }
    let entries = [1usize, 2, 4]
        .iter()
        .map(|&l| AsdimEntry {
            lambda: l as i64,
            mesh: 4 * l as i64,
            covers: vec![MemberCover::uncolored(
                "p",
                &path_interval_cover(line, 4 * l, 2 * l),
            )],
        })
        .collect();
    let witness = FiberingWitness {
        map,
        schedule: schedule.iter().map(|&k| k as i64).collect(),
        inner,
        target_certificate: Some(AsdimCertificate {
            family_id: "line".into(),
            n: 1,
            entries,
        }),
    };
    (source, target, witness)
}


/// Input for the ray-tree construction: a star with random integer gaps,
/// its rays (each with the center) as pieces, and `Y(n)` the ball of radius
/// `n / 2` about the center for `n = 1, ..., N`, where `Y(N)` is everything.
///
/// Points on different rays outside `Y(n)` are more than `n` apart, so the
/// pieces satisfy the disjointness hypothesis.
pub fn ray_instance<R: Rng>(
    rng: &mut R,
    id: &str,
    rays: usize,
    max_points: usize,
) -> (FiniteMetricSpace<i64>, Vec<PointSubset>, Vec<PointSubset>) {
    let per_ray = ((max_points - 1) / rays).max(1);
    let gaps: Vec<Vec<i64>> = (0..rays)
        .map(|_| {
            let len = rng.gen_range(1..=per_ray);
            (0..len).map(|_| rng.gen_range(1..=3)).collect()
        })
        .collect();
    let (space, members) = star(id, &gaps);
    let pieces = members
        .into_iter()
        .map(|mut ray| {
            ray.push(0);
            PointSubset::new(id, ray)
        })
        .collect();
    let reach = space.row(0).iter().copied().max().unwrap_or(0) as usize;
    let ys = (1..=(2 * reach).max(1))
        .map(|n| space.ball(0, n as i64 / 2))
        .collect();
    (space, pieces, ys)
}
