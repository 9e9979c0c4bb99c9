//! Acceptance gate. Prints one line per criterion and exits nonzero if any
//! criterion fails. Every expected value is computed here, independently of
//! the library code under test.

mod common;

use std::time::{Duration, Instant};

use coarsekit::cone::{
    chain_oracle, cone_distance, phi, phi_closed_exp, phi_closed_exp_height, suite, ConePoint,
    RhoFunction,
};
use coarsekit::constructions::{
    minimax_ultrametric, ray_tree_embed, shell_sequence, strong_triangle_violation,
    ConstructionError,
};
use coarsekit::cover::{
    product_control_closed, product_control_count, pushforward_quotient_cover, Cover,
};
use coarsekit::decomposition::{
    check_decomposition, check_fibering_witness, r_components, search_decomposition,
    union_separator_map, DecompositionCertificate, SearchMode, SearchOutcome,
};
use coarsekit::format;
use coarsekit::generators::{
    grid_projection, random_euclidean, random_graph_metric, random_lattice_points,
    random_symmetric_space, ray_instance, LatticeGroup,
};
use coarsekit::metric::{
    product, quotient_with_projection, FiniteMetricSpace, LpExponent, MetricFamily, PointSubset,
};
use coarsekit::{IntSpace, Space};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const PHI_GRID_TOLERANCE: f64 = 1e-7;
const PHI_GRID_BUDGET: Duration = Duration::from_secs(1);
const SUITE_SAMPLES: usize = 1000;
const SUITE_BUDGET: Duration = Duration::from_secs(10);
const CHAIN_TOLERANCE: f64 = 1e-6;
const PRODUCT_RELATIVE_TOLERANCE: f64 = 1e-12;
const FIBERING_BUDGET: Duration = Duration::from_secs(5);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn int_space(n: usize, d: impl Fn(usize, usize) -> i64) -> IntSpace {
    FiniteMetricSpace::from_fn("x", labels(n), d).expect("distinct labels")
}

fn criterion_phi_grid() -> Outcome {
    let start = Instant::now();
    let exp = RhoFunction::Exponential;
    let mut worst = (0.0f64, 0.0, 0.0);
    let mut count = 0;
    for ti in 0..=10 {
        let t = ti as f64 * 0.5;
        for ri in 0..=1000 {
            let r = ri as f64 * 0.1;
            let numeric = phi(&exp, t, r).expect("valid input").value;
            let closed = phi_closed_exp(t, r).expect("valid input");
            let gap = (numeric - closed).abs();
            if gap > worst.0 {
                worst = (gap, t, r);
            }
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst.0 <= PHI_GRID_TOLERANCE && elapsed < PHI_GRID_BUDGET,
        format!(
            "{count} grid points, max |numeric - closed| = {:.2e} at t = {}, r = {} (limit {PHI_GRID_TOLERANCE:e}), {:.2?} (limit {PHI_GRID_BUDGET:?})",
            worst.0, worst.1, worst.2, elapsed
        ),
    )
}

fn criterion_phi_suite() -> Outcome {
    let start = Instant::now();
    let family = suite::standard_family();
    let reports: Vec<_> = family
        .par_iter()
        .enumerate()
        .map(|(k, rho)| suite::phi_suite(rho, SUITE_SAMPLES, k as u64))
        .collect();
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    for r in &reports {
        for p in r.properties.iter().filter(|p| !p.passed()) {
            failures.push(format!(
                "{} property {} ({} violations)",
                r.rho, p.number, p.violations
            ));
        }
    }
    let shape_ok = family.len() == 7 && reports.iter().all(|r| r.properties.len() == 9);
    outcome(
        failures.is_empty() && shape_ok && elapsed < SUITE_BUDGET,
        if failures.is_empty() {
            format!(
                "9 properties × {} rho × {SUITE_SAMPLES} samples, no violations, {elapsed:.2?} (limit {SUITE_BUDGET:?})",
                family.len()
            )
        } else {
            failures.join("; ")
        },
    )
}

fn criterion_chain_oracle() -> Outcome {
    let family = suite::standard_family();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_with: f64 = 0.0;
    let mut worst_undercut: f64 = 0.0;
    for k in 0..200 {
        let rho = &family[k % family.len()];
        let n = rng.gen_range(1..=12);
        let y = random_euclidean(&mut rng, "y", n, 2, 40.0);
        let a = ConePoint::new(rng.gen_range(0..n), rng.gen_range(0.0..8.0)).unwrap();
        let b = ConePoint::new(rng.gen_range(0..n), rng.gen_range(0.0..8.0)).unwrap();
        let exact = cone_distance(rho, &y, &a, &b).unwrap();
        let top = a.height.max(b.height);
        let r = y.d(a.base, b.base);
        let star = match rho {
            RhoFunction::Exponential => phi_closed_exp_height(top, r),
            _ => phi(rho, top, r).unwrap().height,
        };
        let with = chain_oracle(rho, &y, &a, &b, &[star]).unwrap();
        worst_with = worst_with.max((with - exact).abs());
        let heights: Vec<f64> = (0..rng.gen_range(0..=4))
            .map(|_| rng.gen_range(0.0..12.0))
            .collect();
        let without = chain_oracle(rho, &y, &a, &b, &heights).unwrap();
        worst_undercut = worst_undercut.max(exact - without);
    }
    outcome(
        worst_with <= CHAIN_TOLERANCE && worst_undercut <= CHAIN_TOLERANCE,
        format!(
            "200 cases, max |chain - distance| with minimizer height {worst_with:.2e}, max undercut without it {worst_undercut:.2e} (limit {CHAIN_TOLERANCE:e})"
        ),
    )
}

/// `min_x max_{U ∋ x} d(x, X \ U)`; `None` for infinity.
fn lebesgue_oracle(space: &IntSpace, elements: &[Vec<usize>]) -> Option<i64> {
    let mut worst: Option<i64> = None;
    for x in space.points() {
        let mut best: Option<i64> = Some(0);
        for e in elements.iter().filter(|e| e.contains(&x)) {
            let gap = space
                .points()
                .filter(|y| !e.contains(y))
                .map(|y| space.d(x, y))
                .min();
            best = match (best, gap) {
                (_, None) | (None, _) => None,
                (Some(a), Some(b)) => Some(a.max(b)),
            };
        }
        worst = match (worst, best) {
            (None, b) => b,
            (a, None) => a,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
    }
    worst
}

fn multiplicity_oracle(points: usize, elements: &[Vec<usize>]) -> usize {
    (0..points)
        .map(|x| elements.iter().filter(|e| e.contains(&x)).count())
        .max()
        .unwrap_or(0)
}

fn mesh_oracle(space: &IntSpace, elements: &[Vec<usize>]) -> i64 {
    elements
        .iter()
        .flat_map(|e| e.iter().flat_map(move |&a| e.iter().map(move |&b| (a, b))))
        .map(|(a, b)| space.d(a, b))
        .max()
        .unwrap_or(0)
}

fn criterion_quotient_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut violations = Vec::new();
    let mut largest_group = 0;
    for case in 0..100 {
        let group = LatticeGroup::ALL[case % LatticeGroup::ALL.len()];
        let (space, action) = random_symmetric_space::<i64, _>(&mut rng, "x", group, 30, 6);
        let order = action.order();
        largest_group = largest_group.max(order);
        let elements: Vec<Vec<usize>> = space
            .points()
            .map(|x| {
                let s = rng.gen_range(0..=4);
                space.points().filter(|&y| space.d(x, y) <= s).collect()
            })
            .collect();
        let cover = Cover::new(&space, elements.clone()).expect("balls cover");
        let dim = multiplicity_oracle(space.len(), &elements) - 1;
        let lambda = lebesgue_oracle(&space, &elements);
        let mesh = mesh_oracle(&space, &elements);
        let q = quotient_with_projection(&space, &action, 0).expect("isometric action");
        let pushed = pushforward_quotient_cover(&cover, &q);
        let q_elements: Vec<Vec<usize>> = pushed.elements().to_vec();
        let expected: Vec<Vec<usize>> = elements
            .iter()
            .map(|e| {
                let mut img: Vec<usize> = e.iter().map(|&x| q.projection[x]).collect();
                img.sort_unstable();
                img.dedup();
                img
            })
            .collect();
        let q_dim = multiplicity_oracle(q.space.len(), &q_elements) - 1;
        let q_lambda = lebesgue_oracle(&q.space, &q_elements);
        let q_mesh = mesh_oracle(&q.space, &q_elements);
        let lebesgue_ok = match (lambda, q_lambda) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => b >= a,
        };
        let checks = [
            (q_elements == expected, "images"),
            (pushed.dimension() == q_dim, "reported dimension"),
            (q_dim + 1 <= order * (dim + 1), "dimension bound"),
            (lebesgue_ok, "lebesgue"),
            (q_mesh <= mesh, "mesh"),
        ];
        for (ok, what) in checks {
            if !ok {
                violations.push(format!("case {case} ({group:?}): {what}"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        if violations.is_empty() {
            format!("100 actions (largest group order {largest_group}, up to 30 points), zero violations")
        } else {
            violations.join("; ")
        },
    )
}

fn lp_oracle(parts: &[f64], p: LpExponent) -> f64 {
    match p {
        LpExponent::Infinity => parts.iter().copied().fold(0.0, f64::max),
        LpExponent::Finite(p) => parts.iter().map(|x| x.powf(p)).sum::<f64>().powf(p.recip()),
    }
}

fn criterion_product_inequalities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let exponents = [
        LpExponent::Finite(1.0),
        LpExponent::Finite(2.0),
        LpExponent::Finite(4.0),
        LpExponent::Infinity,
    ];
    let mut pairs = 0;
    let mut worst_oracle: f64 = 0.0;
    let mut failures = Vec::new();
    for config in 0..100 {
        let m = rng.gen_range(1..=4);
        let factors: Vec<Space> = (0..m)
            .map(|k| {
                let size = rng.gen_range(2..=4);
                random_euclidean(&mut rng, &format!("f{k}"), size, 2, 10.0)
            })
            .collect();
        let refs: Vec<&Space> = factors.iter().collect();
        let products: Vec<Space> = exponents
            .iter()
            .map(|&p| product(&refs, p).unwrap())
            .collect();
        let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        for _ in 0..10 {
            let a: Vec<usize> = sizes.iter().map(|&n| rng.gen_range(0..n)).collect();
            let b: Vec<usize> = sizes.iter().map(|&n| rng.gen_range(0..n)).collect();
            let (ia, ib) = (
                coarsekit::metric::product_index(&sizes, &a),
                coarsekit::metric::product_index(&sizes, &b),
            );
            let parts: Vec<f64> = (0..m).map(|k| factors[k].d(a[k], b[k])).collect();
            let d: Vec<f64> = products.iter().map(|s| s.d(ia, ib)).collect();
            for (k, &p) in exponents.iter().enumerate() {
                let expected = lp_oracle(&parts, p);
                let rel = (d[k] - expected).abs() / expected.max(f64::MIN_POSITIVE);
                worst_oracle = worst_oracle.max(if expected == 0.0 { d[k] } else { rel });
            }
            for i in 0..exponents.len() {
                for j in i..exponents.len() {
                    let (dp, dq) = (d[i], d[j]);
                    let factor =
                        (m as f64).powf(exponents[i].reciprocal() - exponents[j].reciprocal());
                    let slack = PRODUCT_RELATIVE_TOLERANCE * dp.max(dq);
                    if dq > dp + slack || dp > factor * dq + slack {
                        failures.push(format!(
                            "config {config}: p = {}, q = {}: d_q = {dq}, d_p = {dp}, bound {}",
                            exponents[i],
                            exponents[j],
                            factor * dq
                        ));
                    }
                }
            }
            pairs += 1;
        }
    }
    let ok = failures.is_empty() && worst_oracle <= PRODUCT_RELATIVE_TOLERANCE;
    outcome(
        ok,
        if failures.is_empty() {
            format!(
                "{pairs} pairs, p ≤ q in {{1, 2, 4, inf}}, up to 4 factors, no violations; max relative gap to direct formula {worst_oracle:.1e} (limit {PRODUCT_RELATIVE_TOLERANCE:e})"
            )
        } else {
            failures.join("; ")
        },
    )
}

/// Minimax over all simple chains, by depth-first search.
fn minimax_brute(space: &IntSpace, x: usize, y: usize) -> i64 {
    fn walk(space: &IntSpace, at: usize, y: usize, hop: i64, seen: &mut Vec<bool>, best: &mut i64) {
        if hop >= *best {
            return;
        }
        if at == y {
            *best = hop;
            return;
        }
        for next in space.points() {
            if !seen[next] {
                seen[next] = true;
                walk(space, next, y, hop.max(space.d(at, next)), seen, best);
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; space.len()];
    seen[x] = true;
    let mut best = i64::MAX;
    walk(space, x, y, 0, &mut seen, &mut best);
    best
}

fn strong_triangle_oracle<T: coarsekit::Scalar>(space: &FiniteMetricSpace<T>) -> bool {
    let n = space.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| space.d(x, z) <= coarsekit::scalar::max(space.d(x, y), space.d(y, z)))
        })
    })
}

fn criterion_ultrametric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let spaces: Vec<IntSpace> = (0..500)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            {
                let w = rng.gen_range(1..=12);
                random_graph_metric(&mut rng, "x", n, w)
            }
        })
        .collect();
    let mismatches: usize = spaces
        .par_iter()
        .map(|space| {
            let u = minimax_ultrametric(space);
            space
                .pairs()
                .filter(|&(x, y)| u.space.d(x, y) != minimax_brute(space, x, y).max(1))
                .count()
        })
        .sum();
    let large: Vec<(IntSpace, Space)> = (0..12)
        .map(|k| {
            let n = rng.gen_range(50..=200);
            (
                random_graph_metric(&mut rng, "g", n, 40),
                random_euclidean(&mut rng, &format!("e{k}"), n, 3, 100.0),
            )
        })
        .collect();
    let strong_ok = large.par_iter().all(|(g, e)| {
        let (ug, ue) = (minimax_ultrametric(g), minimax_ultrametric(e));
        strong_triangle_oracle(&ug.space)
            && strong_triangle_oracle(&ue.space)
            && strong_triangle_violation(&ug.space, 0).is_none()
            && strong_triangle_violation(&ue.space, 0.0).is_none()
            && g.pairs().all(|(x, y)| ug.space.d(x, y) <= g.d(x, y).max(1))
            && e.pairs()
                .all(|(x, y)| ue.space.d(x, y) <= e.d(x, y).max(1.0))
    });
    let floor_ok = spaces.iter().all(|s| {
        let u = minimax_ultrametric(s);
        s.pairs().all(|(x, y)| u.space.d(x, y) <= s.d(x, y).max(1))
    });
    outcome(
        mismatches == 0 && strong_ok && floor_ok,
        format!(
            "500 spaces of ≤ 8 points: {mismatches} pairs differ from all-chains search; strong triangle inequality on 24 spaces of 50..200 points: {}; d' ≤ max(d, 1): {}",
            if strong_ok { "holds" } else { "violated" },
            if floor_ok && strong_ok { "holds" } else { "violated" },
        ),
    )
}

fn criterion_ray_tree() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut violations = 0;
    let mut errors = Vec::new();
    let mut largest = 0;
    for k in 0..50 {
        let rays = rng.gen_range(2..=4);
        let (space, pieces, ys) = ray_instance(&mut rng, "s", rays, 60);
        largest = largest.max(space.len());
        let shells = match shell_sequence(&space, &ys) {
            Ok(s) => s.shells,
            Err(e) => {
                errors.push(format!("instance {k}: {e}"));
                continue;
            }
        };
        let embedding = match ray_tree_embed(&space, &pieces, &shells) {
            Ok(e) => e,
            Err(e) => {
                errors.push(format!("instance {k}: {e}"));
                continue;
            }
        };
        let f = &embedding.map.functions[0].assignment;
        violations += space
            .pairs()
            .filter(|&(x, y)| embedding.tree.space.d(f[x], f[y]) > 2 * space.d(x, y) + 2)
            .count();
    }
    let read = |name: &str| std::fs::read_to_string(common::fixture(name)).expect("fixture");
    let family = format::parse_family::<i64>(&read("star.txt")).expect("fixture parses");
    let star = &family.members()[0];
    let bad = format::parse_subsets(&read("star.bad.pieces"), star).expect("fixture parses");
    let ys = format::parse_subsets(&read("star.shells"), star).expect("fixture parses");
    let shells = shell_sequence(star, &ys.sets).expect("valid shells").shells;
    let rejected = matches!(
        ray_tree_embed(star, &bad.sets, &shells),
        Err(ConstructionError::Hypothesis { .. })
    );
    outcome(
        violations == 0 && errors.is_empty() && rejected,
        format!(
            "50 instances (up to {largest} points, 2-4 pieces): {violations} pairs with d_T > 2d + 2, {} construction errors{}; violating fixture {}",
            errors.len(),
            if errors.is_empty() { String::new() } else { format!(" ({})", errors.join("; ")) },
            if rejected { "rejected" } else { "accepted" }
        ),
    )
}

fn criterion_separator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut failures = Vec::new();
    for case in 0..100 {
        let n = rng.gen_range(2..=30);
        let space: IntSpace = random_lattice_points(&mut rng, "x", n, 2, 12);
        let n = space.len();
        let (mut x1, mut x2) = (Vec::new(), Vec::new());
        for x in 0..n {
            match rng.gen_range(0..3) {
                0 => x1.push(x),
                1 => x2.push(x),
                _ => {
                    x1.push(x);
                    x2.push(x);
                }
            }
        }
        let (s1, s2) = (
            PointSubset::new("x", x1.clone()),
            PointSubset::new("x", x2.clone()),
        );
        let sep = match union_separator_map(&space, &s1, &s2) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let to = |x: usize, set: &[usize]| set.iter().map(|&s| space.d(x, s)).min();
        let lipschitz = space
            .pairs()
            .all(|(x, y)| (sep.values[x] - sep.values[y]).abs() <= 2 * space.d(x, y));
        if !lipschitz {
            failures.push(format!("case {case}: not 2-Lipschitz"));
        }
        let max_d = space.diameter();
        for bound in 0..=max_d + 1 {
            let ball = |set: &[usize]| -> Vec<usize> {
                (0..n)
                    .filter(|&x| to(x, set).is_some_and(|v| v <= bound))
                    .collect()
            };
            if sep.sublevel("x", bound).indices() != ball(&x2).as_slice()
                || sep.superlevel("x", bound).indices() != ball(&x1).as_slice()
            {
                failures.push(format!("case {case}: level sets differ at D = {bound}"));
                break;
            }
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "100 covered spaces: 2-Lipschitz and both level-set identities hold for every D"
                .to_string()
        } else {
            failures.join("; ")
        },
    )
}

/// Least number of `r`-disjoint unions of pieces of diameter `<= bound`
/// covering the space, by dynamic programming over subsets.
fn min_colors(d: &[Vec<i64>], r: i64, bound: i64) -> usize {
    let n = d.len();
    let full = (1usize << n) - 1;
    let good: Vec<bool> = (0..=full)
        .map(|set| {
            let mut seen = 0usize;
            for start in 0..n {
                if set >> start & 1 == 0 || seen >> start & 1 == 1 {
                    continue;
                }
                let mut comp = 1usize << start;
                let mut frontier = vec![start];
                while let Some(a) = frontier.pop() {
                    for b in 0..n {
                        if set >> b & 1 == 1 && comp >> b & 1 == 0 && d[a][b] <= r {
                            comp |= 1 << b;
                            frontier.push(b);
                        }
                    }
                }
                seen |= comp;
                for a in 0..n {
                    for b in 0..n {
                        if comp >> a & 1 == 1 && comp >> b & 1 == 1 && d[a][b] > bound {
                            return false;
                        }
                    }
                }
            }
            true
        })
        .collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for set in 1..=full {
        let low = set & set.wrapping_neg();
        let rest = set & !low;
        let mut sub = rest;
        loop {
            let part = sub | low;
            if good[part] && best[set & !part] != usize::MAX {
                best[set] = best[set].min(best[set & !part] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full]
}

#[derive(Default)]
struct DecompositionTally {
    cases: usize,
    found: usize,
    mismatches: Vec<String>,
}

impl DecompositionTally {
    fn merge(mut self, other: Self) -> Self {
        self.cases += other.cases;
        self.found += other.found;
        self.mismatches.extend(other.mismatches);
        self
    }
}

fn decide(d: &[Vec<i64>], combos: &[(i64, i64)]) -> DecompositionTally {
    let n = d.len();
    let space = int_space(n, |a, b| d[a][b]);
    let family = MetricFamily::single(space.clone());
    let mut tally = DecompositionTally::default();
    for &(r, bound) in combos {
        let need = min_colors(d, r, bound);
        for colors in 0..=2usize {
            tally.cases += 1;
            let outcome = search_decomposition(&space, r, colors, bound, SearchMode::Exact)
                .expect("valid search");
            let ok = match outcome {
                SearchOutcome::Found(pieces) => {
                    tally.found += 1;
                    let cert = DecompositionCertificate::leaf(
                        family.id.clone(),
                        r,
                        colors,
                        bound,
                        vec![pieces],
                    );
                    need <= colors + 1
                        && check_decomposition(&cert, &family, 0).is_ok_and(|v| v.passed())
                }
                SearchOutcome::None => need > colors + 1,
                SearchOutcome::Unknown => false,
            };
            if !ok && tally.mismatches.len() < 5 {
                tally
                    .mismatches
                    .push(format!("{d:?} r = {r} n = {colors} bound = {bound}"));
            }
        }
    }
    tally
}

/// Fills a symmetric matrix from the upper-triangle values in `vals`.
fn matrix(n: usize, vals: &[i64]) -> Vec<Vec<i64>> {
    let mut d = vec![vec![0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            d[i][j] = vals[k];
            d[j][i] = vals[k];
            k += 1;
        }
    }
    d
}

fn is_metric(d: &[Vec<i64>]) -> bool {
    let n = d.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| d[i][k] <= d[i][j] + d[j][k])))
}

/// Every assignment of `values` to the pairs of `n` points that is a metric.
fn labeled_metrics(n: usize, values: &[i64]) -> Vec<Vec<Vec<i64>>> {
    let pairs = n * (n - 1) / 2;
    let total = values.len().pow(pairs as u32);
    (0..total)
        .filter_map(|mut code| {
            let vals: Vec<i64> = (0..pairs)
                .map(|_| {
                    let v = values[code % values.len()];
                    code /= values.len();
                    v
                })
                .collect();
            let d = matrix(n, &vals);
            is_metric(&d).then_some(d)
        })
        .collect()
}

/// One representative per isomorphism class of graphs on six vertices, as
/// upper-triangle edge masks.
fn graph_classes_on_six() -> Vec<u32> {
    const N: usize = 6;
    let pairs: Vec<(usize, usize)> = (0..N)
        .flat_map(|i| (i + 1..N).map(move |j| (i, j)))
        .collect();
    let index = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..N).collect();
    permutations(&mut p, 0, &mut perms);
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| {
            pairs
                .iter()
                .map(|&(a, b)| index(perm[a], perm[b]))
                .collect()
        })
        .collect();
    (0u32..1 << pairs.len())
        .into_par_iter()
        .filter(|&g| {
            maps.iter().all(|m| {
                let image = (0..pairs.len())
                    .filter(|&e| g >> e & 1 == 1)
                    .fold(0u32, |acc, e| acc | 1 << m[e]);
                image >= g
            })
        })
        .collect()
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

fn criterion_decomposition_oracle() -> Outcome {
    let start = Instant::now();
    // Up to four points: every labeled metric with distances 1..=5, every
    // scale and bound in 0..=5.
    let all_scales: Vec<(i64, i64)> = (0..=5).flat_map(|r| (0..=5).map(move |b| (r, b))).collect();
    let small: Vec<Vec<Vec<i64>>> = (1..=4)
        .flat_map(|n| labeled_metrics(n, &[1, 2, 3, 4, 5]))
        .collect();
    let small_tally = small
        .par_iter()
        .map(|d| decide(d, &all_scales))
        .reduce(DecompositionTally::default, DecompositionTally::merge);
    // Five and six points. The outcome depends on d only through the graphs
    // {d <= r} and {d <= bound}; every nested pair G1 ⊆ G2 of graphs is
    // realized by d = 3 on G1, 4 on G2 \ G1 and 5 elsewhere, with
    // (r, bound) = (3, 4) or (4, 3).
    let nested = [(3, 4), (4, 3)];
    let five = labeled_metrics(5, &[3, 4, 5]);
    let five_tally = five
        .par_iter()
        .map(|d| decide(d, &nested))
        .reduce(DecompositionTally::default, DecompositionTally::merge);
    let classes = graph_classes_on_six();
    let six_tally = classes
        .par_iter()
        .flat_map_iter(|&g2| {
            let edges: Vec<usize> = (0..15).filter(|&e| g2 >> e & 1 == 1).collect();
            (0u32..1 << edges.len()).map(move |sub| {
                let vals: Vec<i64> = (0..15)
                    .map(|e| match edges.iter().position(|&x| x == e) {
                        Some(k) if sub >> k & 1 == 1 => 3,
                        Some(_) => 4,
                        None => 5,
                    })
                    .collect();
                matrix(6, &vals)
            })
        })
        .map(|d| decide(&d, &nested))
        .reduce(DecompositionTally::default, DecompositionTally::merge);
    let six_spaces = six_tally.cases / (nested.len() * 3);
    let total = small_tally.merge(five_tally).merge(six_tally);
    outcome(
        total.mismatches.is_empty() && classes.len() == 156,
        format!(
            "{} searches ({} found) over {} metrics on ≤ 4 points, {} on 5 points and {} on 6 points from {} graph classes; {} disagreements{} ({:.2?})",
            total.cases,
            total.found,
            small.len(),
            five.len(),
            six_spaces,
            classes.len(),
            total.mismatches.len(),
            if total.mismatches.is_empty() {
                String::new()
            } else {
                format!(": {}", total.mismatches.join("; "))
            },
            start.elapsed()
        ),
    )
}

fn criterion_fibering() -> Outcome {
    let start = Instant::now();
    let (source, target, witness) = grid_projection(16);
    let full = check_fibering_witness(&witness, &source, &target, 0).expect("resolvable witness");
    let mut flips = 0;
    for k in 0..witness.inner.len() {
        let mut cut = witness.clone();
        cut.inner.remove(k);
        let report = check_fibering_witness(&cut, &source, &target, 0).expect("resolvable witness");
        if !report.verdict.passed() {
            flips += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        full.verdict.passed() && flips == witness.inner.len() && elapsed < FIBERING_BUDGET,
        format!(
            "16×16 grid projection: full witness {}, {flips} of {} deletions fail, {elapsed:.2?} (limit {FIBERING_BUDGET:?})",
            if full.verdict.passed() { "passes" } else { "fails" },
            witness.inner.len()
        ),
    )
}

fn criterion_recurrence() -> Outcome {
    let mut f: u128 = 3;
    let mut bad = Vec::new();
    for n in 2..=20u32 {
        if n > 2 {
            f = 3 * f + 2;
        }
        let closed = 3u128.pow(n - 1) + 3u128.pow(n - 2) - 1;
        if f != closed
            || product_control_count(n) != Some(f)
            || product_control_closed(n) != Some(closed)
        {
            bad.push(n);
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("n = 2..=20: recurrence, closed form and library agree; f(20) = {f}")
        } else {
            format!("mismatch at n = {bad:?}")
        },
    )
}

/// Blocks of the transitive closure of `d <= r`, by bitset Warshall.
fn closure_blocks<T: coarsekit::Scalar>(space: &FiniteMetricSpace<T>, r: T) -> Vec<Vec<u64>> {
    let n = space.len();
    let words = n.div_ceil(64);
    let mut reach: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = vec![0u64; words];
            for j in 0..n {
                if space.d(i, j) <= r {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k / 64] >> (k % 64) & 1 == 1 {
                for (w, v) in row.iter_mut().zip(&via) {
                    *w |= v;
                }
            }
        }
    }
    reach
}

fn components_agree<T: coarsekit::Scalar>(space: &FiniteMetricSpace<T>, ladder: &[T]) -> bool {
    let n = space.len();
    let mut previous = None;
    for &r in ladder {
        let part = r_components(space, r);
        let of = part.block_of(n);
        let reach = closure_blocks(space, r);
        let same = (0..n)
            .all(|i| (0..n).all(|j| (of[i] == of[j]) == (reach[i][j / 64] >> (j % 64) & 1 == 1)));
        let sorted = part
            .blocks
            .iter()
            .all(|b| b.windows(2).all(|w| w[0] < w[1]))
            && part.blocks.windows(2).all(|w| w[0][0] < w[1][0]);
        if !same || !sorted || previous.as_ref().is_some_and(|p| !part.coarsens(p)) {
            return false;
        }
        previous = Some(part);
    }
    true
}

fn criterion_components() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut cases: Vec<(IntSpace, Vec<i64>)> = Vec::new();
    let mut floats: Vec<(Space, Vec<f64>)> = Vec::new();
    for k in 0..500 {
        let n = rng.gen_range(1..=200);
        if k % 2 == 0 {
            let s: IntSpace = if k % 4 == 0 {
                random_graph_metric(&mut rng, "g", n, 30)
            } else {
                random_lattice_points(&mut rng, "l", n, 2, 60)
            };
            let mut ladder = s.realized_distances();
            ladder.shuffle(&mut rng);
            ladder.truncate(6);
            ladder.extend([0, 1, 2]);
            ladder.sort_unstable();
            ladder.dedup();
            cases.push((s, ladder));
        } else {
            let s = random_euclidean(&mut rng, "e", n, 2, 100.0);
            let mut ladder: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..30.0)).collect();
            ladder.extend(s.realized_distances().choose_multiple(&mut rng, 2).copied());
            ladder.sort_by(|a, b| a.partial_cmp(b).unwrap());
            floats.push((s, ladder));
        }
    }
    let int_ok = cases
        .par_iter()
        .filter(|(s, l)| !components_agree(s, l))
        .count();
    let float_ok = floats
        .par_iter()
        .filter(|(s, l)| !components_agree(s, l))
        .count();
    outcome(
        int_ok + float_ok == 0,
        format!(
            "500 spaces of ≤ 200 points, r ladders of up to 9 scales: {} disagree with transitive closure or fail to coarsen",
            int_ok + float_ok
        ),
    )
}

fn criterion_determinism() -> Outcome {
    let mut differ = Vec::new();
    for args in common::CORPUS {
        let render = |jobs: &str| {
            let mut argv = args.to_vec();
            argv.extend(["--format", "machine", "--jobs", jobs]);
            common::coarsekit(&argv).render()
        };
        let one = render("1");
        if one != render("4") || one != render("1") {
            differ.push(args.join(" "));
        }
    }
    outcome(
        differ.is_empty(),
        format!(
            "{} corpus invocations, {} differ between --jobs 1 and --jobs 4{}",
            common::CORPUS.len(),
            differ.len(),
            if differ.is_empty() {
                String::new()
            } else {
                format!(": {}", differ.join("; "))
            }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("phi closed form", criterion_phi_grid),
        ("phi property suite", criterion_phi_suite),
        ("cone chain oracle", criterion_chain_oracle),
        ("quotient cover bounds", criterion_quotient_bounds),
        (
            "product metric inequalities",
            criterion_product_inequalities,
        ),
        ("minimax ultrametric", criterion_ultrametric),
        ("ray-tree coarseness", criterion_ray_tree),
        ("union separator", criterion_separator),
        ("decomposition search", criterion_decomposition_oracle),
        ("fibering witness", criterion_fibering),
        ("product control recurrence", criterion_recurrence),
        ("r-components", criterion_components),
        ("report determinism", criterion_determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{}] {name}: {}",
            k + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
