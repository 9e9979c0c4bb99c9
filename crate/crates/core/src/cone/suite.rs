//! Randomized checks of the properties of `φ_t`.
//!
//! Limits are finitized: unboundedness in `r` is checked along `r = 4^k`
//! for `k <= 40`, decay in `t` by doubling `t` up to `10^6`. Strict
//! monotonicity asks for an output gap of `min(1e-6, g)`, where `g` is the
//! provable lower bound `Δr / max(ρ(s_max), 1)` on the gap (`s_max` is the
//! end of the search interval); for fast-growing `ρ` the slope of `φ_t` can
//! drop below `1e-3` and the bare `1e-6` resolution is not attainable. Such
//! samples are counted in the note of that property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{phi_value, RhoFunction};

/// Slack on every inequality.
pub const TOLERANCE: f64 = 1e-6;
/// Allowed error of the numeric inverse.
pub const INVERSE_TOLERANCE: f64 = 1e-4;

pub const PROPERTY_NAMES: [&str; 9] = [
    "antitone in t",
    "strictly increasing",
    "unbounded in r",
    "Lipschitz",
    "decays in t",
    "invertible",
    "concave",
    "subadditive",
    "height shift",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub t2: f64,
    pub delta: f64,
    pub r: f64,
    pub r2: f64,
    pub lambda: f64,
    pub m: f64,
}

impl Sample {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        Self {
            t: rng.gen_range(0.0..=10.0),
            t2: rng.gen_range(0.0..=10.0),
            delta: rng.gen_range(0.0..=10.0),
            r: rng.gen_range(0.0..=100.0),
            r2: rng.gen_range(0.0..=100.0),
            lambda: rng.gen_range(0.0..=1.0),
            m: rng.gen_range(1.0..=10.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyResult {
    /// 1-based property number.
    pub number: usize,
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// First violating sample, in sample order.
    pub witness: Option<String>,
    pub note: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub rho: String,
    pub samples: usize,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }
}

/// The parameters exercised by default: constants, affine, exponential, a
/// four-step function and a 50-point table.
pub fn standard_family() -> Vec<RhoFunction<f64>> {
    let table = (0..50)
        .map(|k| {
            let s = k as f64 * 0.25;
            (s, 0.5 + 0.02 * (k * k) as f64)
        })
        .collect();
    vec![
        RhoFunction::Constant(0.0),
        RhoFunction::Constant(5.0),
        RhoFunction::Affine { m: 1.0, l: 0.0 },
        RhoFunction::Affine { m: 3.0, l: 2.0 },
        RhoFunction::Exponential,
        RhoFunction::Step(vec![(0.0, 0.5), (2.0, 2.0), (5.0, 10.0), (8.0, 40.0)]),
        RhoFunction::Table(table),
    ]
}

/// Outcome of one property on one sample.
#[derive(Clone, Copy, Debug, Default)]
struct Outcome {
    applicable: bool,
    ok: bool,
    /// Strict-monotonicity samples whose gap is below the bare `1e-6`.
    below_resolution: bool,
}

fn applies(ok: bool) -> Outcome {
    Outcome {
        applicable: true,
        ok,
        below_resolution: false,
    }
}

struct Phi<'a>(&'a RhoFunction<f64>);

impl Phi<'_> {
    fn at(&self, t: f64, r: f64) -> f64 {
        phi_value(self.0, t, r).expect("sampled inputs are non-negative")
    }
}

fn inverse(phi: &Phi<'_>, t: f64, value: f64) -> f64 {
    let mut hi = 1.0;
    while phi.at(t, hi) < value {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo <= 1e-9 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if phi.at(t, mid) < value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_sample(rho: &RhoFunction<f64>, s: &Sample) -> [Outcome; 9] {
    let phi = Phi(rho);
    let tol = TOLERANCE;
    let f = |r: f64| phi.at(s.t, r);
    let (fr, fr2) = (f(s.r), f(s.r2));
    let mut out = [Outcome::default(); 9];

    let (lo, hi) = (s.t.min(s.t2), s.t.max(s.t2));
    out[0] = applies(phi.at(hi, s.r) <= phi.at(lo, s.r) + tol);

    let (a, b) = (s.r.min(s.r2), s.r.max(s.r2));
    if b - a >= 1e-3 {
        let gap = f(b) - f(a);
        let s_max = s.t + b / (2.0 * rho.floor_one(s.t));
        let provable = (b - a) / rho.floor_one(s_max);
        let needed = tol.min(provable);
        out[1] = Outcome {
            applicable: true,
            ok: gap > 0.0 && gap >= needed * (1.0 - 1e-6),
            below_resolution: gap <= tol,
        };
    }

    let mut previous = 0.0;
    let mut grew = false;
    let mut monotone = true;
    for k in 0..=40 {
        let v = f(4f64.powi(k));
        monotone &= v >= previous - tol;
        previous = v;
        if v > 50.0 {
            grew = true;
            break;
        }
    }
    out[2] = applies(grew && monotone);

    out[3] = applies((fr2 - fr).abs() <= (s.r2 - s.r).abs() / rho.floor_one(s.t) + tol);

    if rho.is_unbounded() {
        let mut t = 1.0;
        while t <= 1e6 && phi.at(t, s.r) > 1e-3 {
            t *= 2.0;
        }
        out[4] = applies(t <= 1e6);
    }

    out[5] = applies((inverse(&phi, s.t, fr) - s.r).abs() <= INVERSE_TOLERANCE);

    let mid = s.lambda * s.r + (1.0 - s.lambda) * s.r2;
    out[6] = applies(f(mid) >= s.lambda * fr + (1.0 - s.lambda) * fr2 - tol);

    out[7] = applies(f(s.r + s.r2) <= fr + fr2 + tol && f(s.m * s.r) <= s.m * fr + tol);

    out[8] = applies(fr <= phi.at(s.t + s.delta, s.r) + 2.0 * s.delta + tol);
    out
}

/// Runs all nine properties on `samples` random parameter draws.
///
/// Draws come from a ChaCha stream seeded with `seed`; the report does not
/// depend on the number of worker threads.
pub fn phi_suite(rho: &RhoFunction<f64>, samples: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Sample> = (0..samples).map(|_| Sample::draw(&mut rng)).collect();
    let outcomes: Vec<[Outcome; 9]> = draws.par_iter().map(|s| check_sample(rho, s)).collect();
    let properties = (0..9)
        .map(|p| {
            let checked = outcomes.iter().filter(|o| o[p].applicable).count();
            let failing: Vec<usize> = (0..samples)
                .filter(|&k| outcomes[k][p].applicable && !outcomes[k][p].ok)
                .collect();
            let witness = failing.first().map(|&k| format!("{:?}", draws[k]));
            let note = match p {
                1 => {
                    let thin = outcomes.iter().filter(|o| o[p].below_resolution).count();
                    (thin > 0).then(|| {
                        format!("{thin} samples with output gap <= 1e-6 (slope of φ_t below 1e-3)")
                    })
                }
                4 if checked == 0 => Some("skipped: ρ is bounded".to_string()),
                _ => None,
            };
            PropertyResult {
                number: p + 1,
                name: PROPERTY_NAMES[p],
                checked,
                violations: failing.len(),
                witness,
                note,
            }
        })
        .collect();
    SuiteReport {
        rho: rho.to_string(),
        samples,
        properties,
    }
}
