use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::generators::{self, LatticeGroup};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[test]
fn two_point_space_is_valid() {
    let s = FiniteMetricSpace::new(
        "s",
        labels(&["a", "b"]),
        vec![vec![0.0, 1.0], vec![1.0, 0.0]],
    )
    .unwrap();
    assert!(s.validate().is_valid());
}

#[test]
fn triangle_violation_is_witnessed() {
    let s = FiniteMetricSpace::new(
        "s",
        labels(&["a", "b", "c"]),
        vec![vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]],
    )
    .unwrap();
    let report = s.validate();
    assert_eq!(
        report.violations,
        vec![Violation::Triangle { i: 0, j: 1, k: 2 }]
    );
    assert_eq!(
        report.violations[0].describe(&s),
        "triangle (a,b,c) 5 > 1 + 1"
    );
}

#[test]
fn validation_tolerance_absorbs_rounding() {
    let s = FiniteMetricSpace::new(
        "s",
        labels(&["a", "b", "c"]),
        vec![
            vec![0.0, 1.0, 2.0 + 1e-12],
            vec![1.0, 0.0, 1.0],
            vec![2.0 + 1e-12, 1.0, 0.0],
        ],
    )
    .unwrap();
    assert!(!s.validate().is_valid());
    assert!(s.validate_within(1e-9).is_valid());
    assert!(!s.validate_within(1e-13).is_valid());
}

#[test]
fn asymmetry_is_reported() {
    let s = FiniteMetricSpace::new("s", labels(&["a", "b"]), vec![vec![0, 2], vec![3, 0]]).unwrap();
    let report = s.validate();
    assert!(report
        .violations
        .contains(&Violation::Asymmetric { i: 0, j: 1 }));
}

#[test]
fn dimension_mismatch_is_structural() {
    let err =
        FiniteMetricSpace::new("s", labels(&["a", "b"]), vec![vec![0, 1], vec![1]]).unwrap_err();
    assert!(matches!(err, MetricError::Dimension { row: Some(1), .. }));
    let err =
        FiniteMetricSpace::<i64>::new("s", labels(&["a", "b"]), vec![vec![0, 1]]).unwrap_err();
    assert!(matches!(err, MetricError::Dimension { row: None, .. }));
}

#[test]
fn zero_distance_needs_pseudo_flag() {
    let s = FiniteMetricSpace::new("s", labels(&["a", "b"]), vec![vec![0, 0], vec![0, 0]]).unwrap();
    assert_eq!(
        s.validate().violations,
        vec![Violation::ZeroDistance { i: 0, j: 1 }]
    );
    assert!(s.with_pseudo(true).validate().is_valid());
}

#[test]
fn duplicate_members_rejected() {
    let a = generators::path::<i64>("m", 2);
    let b = generators::path::<i64>("m", 3);
    assert!(matches!(
        MetricFamily::new("f", vec![a, b]),
        Err(MetricError::DuplicateMember(_))
    ));
}

fn negation_on_line() -> (FiniteMetricSpace<i64>, GroupAction) {
    let space = generators::line("x", &[-2, -1, 0, 1, 2]).unwrap();
    let action = GroupAction::new(
        labels(&["e", "s"]),
        vec![vec![0, 1, 2, 3, 4], vec![4, 3, 2, 1, 0]],
        vec![vec![0, 1], vec![1, 0]],
    )
    .unwrap();
    (space, action)
}

#[test]
fn quotient_of_line_by_negation() {
    let (space, action) = negation_on_line();
    let q = quotient_with_projection(&space, &action, 0).unwrap();
    // Orbits {±2}, {±1}, {0}; representatives are the lowest indices.
    assert_eq!(q.representatives, vec![0, 1, 2]);
    assert_eq!(q.space.labels(), &labels(&["F·-2", "F·-1", "F·0"])[..]);
    let (f2, f1, f0) = (0, 1, 2);
    assert_eq!(q.space.d(f1, f2), 1);
    assert_eq!(q.space.d(f0, f1), 1);
    assert_eq!(q.space.d(f0, f2), 2);
    assert_eq!(q.projection, vec![0, 1, 2, 1, 0]);
}

#[test]
fn quotient_by_trivial_group_is_isometric() {
    let space = generators::path::<f64>("p", 6);
    let q = quotient(&space, &GroupAction::trivial(6), 1e-9).unwrap();
    for (i, j) in space.pairs() {
        assert_eq!(q.d(i, j), space.d(i, j));
    }
}

#[test]
fn quotient_swapping_far_points() {
    // c fixed; p and q swapped; d(c, p) = d(c, q) = 3.
    let space = FiniteMetricSpace::new(
        "x",
        labels(&["c", "p", "q"]),
        vec![
            vec![0.0, 3.0, 3.0],
            vec![3.0, 0.0, 6.0],
            vec![3.0, 6.0, 0.0],
        ],
    );
    let space = space.unwrap();
    let action = GroupAction::generated_by(3, &[vec![0, 2, 1]]).unwrap();
    let q = quotient(&space, &action, 1e-9).unwrap();
    assert_eq!(q.len(), 2);
    assert_eq!(q.d(0, 1), 3.0);

    // d(p, q) = 10 breaks the triangle inequality through c; the orbit
    // formula still yields d(Fc, Fp) = 3.
    let bad = FiniteMetricSpace::new(
        "x",
        labels(&["c", "p", "q"]),
        vec![vec![0, 3, 3], vec![3, 0, 10], vec![3, 10, 0]],
    )
    .unwrap();
    assert!(!bad.validate().is_valid());
    let q = quotient(&bad, &action, 0);
    assert!(
        q.is_ok(),
        "the quotient of the fixture is still a metric: {q:?}"
    );
    assert_eq!(q.unwrap().d(0, 1), 3);
}

#[test]
fn non_isometric_action_rejected() {
    let space = generators::line::<i64>("x", &[0, 1, 5]).unwrap();
    let action = GroupAction::generated_by(3, &[vec![1, 0, 2]]).unwrap();
    assert!(matches!(
        quotient(&space, &action, 0),
        Err(MetricError::NotIsometric { .. })
    ));
}

#[test]
fn bad_group_tables_rejected() {
    // Not associative / no identity.
    let err = GroupAction::new(
        labels(&["a", "b"]),
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![1, 0], vec![0, 0]],
    );
    assert!(err.is_err());
    // Table says s·s = s but permutation squares to identity.
    let err = GroupAction::new(
        labels(&["e", "s"]),
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![0, 1], vec![1, 1]],
    );
    assert!(err.is_err());
}

fn two_point(d: f64) -> FiniteMetricSpace<f64> {
    FiniteMetricSpace::new("s", labels(&["0", "1"]), vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
}

#[test]
fn product_diagonals() {
    let a = two_point(3.0);
    let b = two_point(4.0);
    let diag = |p| {
        let prod = product(&[&a, &b], p).unwrap();
        let x = prod.index_of("(0,0)").unwrap();
        let y = prod.index_of("(1,1)").unwrap();
        prod.d(x, y)
    };
    assert_eq!(diag(LpExponent::Finite(1.0)), 7.0);
    assert_eq!(diag(LpExponent::Finite(2.0)), 5.0);
    assert_eq!(diag(LpExponent::Infinity), 4.0);
}

#[test]
fn product_errors() {
    assert!(matches!(
        product::<f64>(&[], LpExponent::Infinity),
        Err(MetricError::EmptyProduct)
    ));
    assert!(matches!(
        LpExponent::new(0.5),
        Err(MetricError::BadExponent(_))
    ));
    let p = generators::path::<i64>("p", 2);
    assert!(matches!(
        product(&[&p, &p], LpExponent::Finite(2.0)),
        Err(MetricError::ExactExponent(_))
    ));
    assert!(product(&[&p, &p], LpExponent::Finite(1.0)).is_ok());
}

#[test]
fn balls_are_closed() {
    let p = generators::path::<i64>("p", 4);
    assert_eq!(p.ball(1, 1).indices(), &[0, 1, 2]);
    assert_eq!(p.ball(1, 0).indices(), &[1]);
    assert_eq!(p.ball(1, 3).indices(), &[0, 1, 2, 3]);
    assert_eq!(p.open_ball(1, 1).indices(), &[1]);
}

#[test]
fn randomized_quotients_are_metrics_and_contracting() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..60 {
        let group = LatticeGroup::ALL[round % LatticeGroup::ALL.len()];
        let (space, action) =
            generators::random_symmetric_space::<i64, _>(&mut rng, "x", group, 30, 7);
        let q = quotient_with_projection(&space, &action, 0).unwrap();
        assert!(q.space.validate().is_valid());
        for (x, y) in space.pairs() {
            assert!(q.space.d(q.projection[x], q.projection[y]) <= space.d(x, y));
        }
    }
}

fn small_space() -> impl Strategy<Value = FiniteMetricSpace<f64>> {
    (1usize..5, 1usize..4).prop_flat_map(|(n, dim)| {
        proptest::collection::vec(proptest::collection::vec(-50.0f64..50.0, dim), n).prop_map(
            move |pts| {
                let labels = (0..pts.len()).map(|i| format!("p{i}")).collect();
                FiniteMetricSpace::from_fn("s", labels, |a, b| {
                    if a == b {
                        0.0
                    } else {
                        pts[a]
                            .iter()
                            .zip(&pts[b])
                            .map(|(x, y)| (x - y).abs())
                            .sum::<f64>()
                    }
                })
                .unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn product_metric_inequalities(
        factors in proptest::collection::vec(small_space(), 1..=4),
        a_seed in any::<u64>(),
        b_seed in any::<u64>(),
    ) {
        let refs: Vec<&FiniteMetricSpace<f64>> = factors.iter().collect();
        let m = refs.len() as f64;
        let exps = [
            LpExponent::Finite(1.0),
            LpExponent::Finite(2.0),
            LpExponent::Finite(4.0),
            LpExponent::Infinity,
        ];
        let spaces: Vec<_> = exps.iter().map(|&p| product(&refs, p).unwrap()).collect();
        let n = spaces[0].len();
        let (x, y) = ((a_seed as usize) % n, (b_seed as usize) % n);
        for (i, p) in exps.iter().enumerate() {
            for (j, q) in exps.iter().enumerate().skip(i) {
                let dp = spaces[i].d(x, y);
                let dq = spaces[j].d(x, y);
                let c = m.powf(p.reciprocal() - q.reciprocal());
                prop_assert!(dq <= dp * (1.0 + 1e-12) + 1e-300, "{dq} > {dp}");
                prop_assert!(dp <= c * dq * (1.0 + 1e-12) + 1e-300, "{dp} > {c} * {dq}");
            }
        }
    }
}
