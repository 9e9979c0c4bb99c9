//! Cones over metric spaces.
//!
//! For a non-decreasing `ρ: [0, ∞) -> [0, ∞)` the cone `C(Y)` is `Y × [0, ∞)`
//! with the largest metric below
//! `d'((y, t), (y', t')) = |t - t'| + d_Y(y, y') / max(ρ(max(t, t')), 1)`.
//! It has the closed expression `φ_{max(t, t')}(d_Y(y, y')) + |t - t'|`, which
//! is what [`cone_distance`] evaluates. The cone is infinite; finite pieces
//! of it are built on request with [`cone_sample`].

mod phi;
mod rho;
pub mod suite;

use std::cmp::Ordering;

use thiserror::Error;

use crate::maps::{self, FamilyMap, MapError, MonotoneEnvelope, PropernessReport};
use crate::metric::{FiniteMetricSpace, MetricError, MetricFamily, PointSubset};
use crate::scalar::Real;

pub use phi::{phi, phi_closed_exp, phi_closed_exp_height, PhiValue, SEARCH_TOLERANCE};
pub use rho::RhoFunction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("{0} must be finite and non-negative, got {1}")]
    Negative(&'static str, f64),
    #[error("invalid ρ: {0}")]
    Rho(String),
    #[error("point {index} is out of range for `{space}` with {len} points")]
    OutOfRange {
        space: String,
        index: usize,
        len: usize,
    },
    #[error("X0 is empty")]
    EmptyBase,
    #[error("f has {found} values but X0 has {expected} points")]
    AssignmentLength { expected: usize, found: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A point `(y, t)` of `C(Y)`; `base` indexes `Y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConePoint<T> {
    pub base: usize,
    pub height: T,
}

impl<T: Real> ConePoint<T> {
    pub fn new(base: usize, height: T) -> Result<Self, ConeError> {
        check_height(height)?;
        Ok(Self { base, height })
    }
}

fn check_height<T: Real>(t: T) -> Result<(), ConeError> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(ConeError::Negative(
            "height",
            t.to_f64().unwrap_or(f64::NAN),
        ))
    }
}

fn check_point<T: Real>(y: &FiniteMetricSpace<T>, p: &ConePoint<T>) -> Result<(), ConeError> {
    if p.base >= y.len() {
        return Err(ConeError::OutOfRange {
            space: y.id().to_string(),
            index: p.base,
            len: y.len(),
        });
    }
    check_height(p.height)
}

/// `φ_t(r)`, by the closed form when `ρ` is exponential.
pub fn phi_value<T: Real>(rho: &RhoFunction<T>, t: T, r: T) -> Result<T, ConeError> {
    match rho {
        RhoFunction::Exponential => phi_closed_exp(t, r),
        _ => phi(rho, t, r).map(|p| p.value),
    }
}

/// `d_{C(Y)}(a, b) = φ_{max(t, t')}(d_Y(y, y')) + |t - t'|`.
pub fn cone_distance<T: Real>(
    rho: &RhoFunction<T>,
    y: &FiniteMetricSpace<T>,
    a: &ConePoint<T>,
    b: &ConePoint<T>,
) -> Result<T, ConeError> {
    check_point(y, a)?;
    check_point(y, b)?;
    let top = a.height.max(b.height);
    Ok(phi_value(rho, top, y.d(a.base, b.base))? + (a.height - b.height).abs())
}

/// The one-link chain length `d'(a, b)`.
pub fn link_length<T: Real>(
    rho: &RhoFunction<T>,
    y: &FiniteMetricSpace<T>,
    a: &ConePoint<T>,
    b: &ConePoint<T>,
) -> T {
    let top = a.height.max(b.height);
    (a.height - b.height).abs() + y.d(a.base, b.base) / rho.floor_one(top)
}

/// Shortest chain from `a` to `b` through the points `Y × heights`, with
/// links measured by `d'`. Every chain bounds the cone distance from above.
pub fn chain_oracle<T: Real>(
    rho: &RhoFunction<T>,
    y: &FiniteMetricSpace<T>,
    a: &ConePoint<T>,
    b: &ConePoint<T>,
    heights: &[T],
) -> Result<T, ConeError> {
    check_point(y, a)?;
    check_point(y, b)?;
    for &h in heights {
        check_height(h)?;
    }
    let mut nodes = vec![*a, *b];
    for &h in heights {
        nodes.extend(y.points().map(|base| ConePoint { base, height: h }));
    }
    // Dense Dijkstra from node 0.
    let n = nodes.len();
    let mut dist = vec![T::infinity(); n];
    let mut done = vec![false; n];
    dist[0] = T::zero();
    for _ in 0..n {
        let u = (0..n)
            .filter(|&k| !done[k])
            .min_by(|&i, &j| dist[i].partial_cmp(&dist[j]).unwrap_or(Ordering::Equal))
            .expect("unvisited node remains");
        if u == 1 {
            break;
        }
        done[u] = true;
        for v in 0..n {
            if !done[v] {
                let via = dist[u] + link_length(rho, y, &nodes[u], &nodes[v]);
                if via < dist[v] {
                    dist[v] = via;
                }
            }
        }
    }
    Ok(dist[1])
}

/// The finite subset `Y × heights` of `C(Y)` as a metric space.
#[derive(Clone, Debug)]
pub struct ConeSample<T> {
    pub space: FiniteMetricSpace<T>,
    /// Distinct heights in increasing order.
    pub heights: Vec<T>,
    base_len: usize,
}

impl<T: Real> ConeSample<T> {
    /// Index of `(y, heights[k])`.
    pub fn index(&self, base: usize, k: usize) -> usize {
        k * self.base_len + base
    }

    pub fn height_index(&self, t: T) -> Option<usize> {
        self.heights.iter().position(|&h| h == t)
    }

    pub fn point(&self, index: usize) -> ConePoint<T> {
        ConePoint {
            base: index % self.base_len,
            height: self.heights[index / self.base_len],
        }
    }
}

/// Materializes `Y × heights` with the cone metric. Points are labelled
/// `<label>@<height>`; the space id is `C(<id>)`.
pub fn cone_sample<T: Real>(
    rho: &RhoFunction<T>,
    y: &FiniteMetricSpace<T>,
    heights: &[T],
) -> Result<ConeSample<T>, ConeError> {
    for &h in heights {
        check_height(h)?;
    }
    let mut hs = heights.to_vec();
    hs.sort_by(|a, b| a.partial_cmp(b).expect("finite heights"));
    hs.dedup();
    let n = y.len();
    let points: Vec<ConePoint<T>> = hs
        .iter()
        .flat_map(|&height| (0..n).map(move |base| ConePoint { base, height }))
        .collect();
    let labels = points
        .iter()
        .map(|p| format!("{}@{}", y.label(p.base), p.height))
        .collect();
    // Entries are checked above, so the distance cannot fail.
    let space = FiniteMetricSpace::from_fn(format!("C({})", y.id()), labels, |i, j| {
        cone_distance(rho, y, &points[i], &points[j]).expect("checked cone points")
    })?;
    Ok(ConeSample {
        space,
        heights: hs,
        base_len: n,
    })
}

/// `θ_t: Y -> C(Y)`, `y ↦ (y, t)`, with its checked Lipschitz bound and
/// coarse envelopes.
#[derive(Clone, Debug)]
pub struct ThetaEmbedding<T> {
    pub source: MetricFamily<T>,
    pub target: MetricFamily<T>,
    pub map: FamilyMap,
    /// `1 / max(ρ(t), 1)`.
    pub lipschitz: T,
    /// First pair breaking the Lipschitz bound, if any.
    pub lipschitz_violation: Option<(usize, usize)>,
    pub control: MonotoneEnvelope<T>,
    pub properness: PropernessReport<T>,
}

pub fn theta_embedding<T: Real>(
    rho: &RhoFunction<T>,
    y: &FiniteMetricSpace<T>,
    t: T,
    tol: T,
) -> Result<ThetaEmbedding<T>, ConeError> {
    let sample = cone_sample(rho, y, &[t])?;
    let assignment: Vec<usize> = y.points().map(|b| sample.index(b, 0)).collect();
    let lipschitz = T::one() / rho.floor_one(t);
    let lipschitz_violation = y.pairs().find(|&(a, b)| {
        let image = sample.space.d(assignment[a], assignment[b]);
        image > lipschitz * y.d(a, b) + tol
    });
    let source = MetricFamily::single(y.clone());
    let target = MetricFamily::single(sample.space);
    let map = FamilyMap::new(&source.id, &target.id).with_function(
        y.id(),
        target.members()[0].id(),
        assignment,
    );
    let control = maps::control_envelope(&map, &source, &target)?;
    let properness = maps::properness_envelope(&map, &source, &target)?;
    Ok(ThetaEmbedding {
        source,
        target,
        map,
        lipschitz,
        lipschitz_violation,
        control,
        properness,
    })
}

/// Extension of `f: X0 -> Y` to `F': X -> C(Y)` for the cone parameter
/// `ρ(t) = max(ρ'(3t + 2), 1)`.
#[derive(Clone, Debug)]
pub struct ConeExtension<T> {
    pub rho: RhoFunction<T>,
    /// `p(x)`: a nearest point of `X0`, lowest index on ties.
    pub nearest: Vec<usize>,
    /// `F'(x) = (f(p(x)), d(x, X0))`.
    pub points: Vec<ConePoint<T>>,
}

/// The step function `max(ρ'(3t + 2), 1)` for a step envelope `ρ'`.
pub fn extension_rho<T: Real>(rho_prime: &MonotoneEnvelope<T>) -> RhoFunction<T> {
    let two = T::one() + T::one();
    let three = two + T::one();
    let mut steps = vec![(T::zero(), rho_prime.eval(two).max(T::one()))];
    for (at, value) in rho_prime.points() {
        if at > two {
            let v = value.max(T::one());
            if v > steps.last().unwrap().1 {
                steps.push(((at - two) / three, v));
            }
        }
    }
    RhoFunction::Step(steps)
}

pub fn cone_extension<T: Real>(
    x: &FiniteMetricSpace<T>,
    x0: &PointSubset,
    f: &[usize],
    y: &FiniteMetricSpace<T>,
    rho_prime: &MonotoneEnvelope<T>,
) -> Result<ConeExtension<T>, ConeError> {
    x0.check_against(x)?;
    if x0.is_empty() {
        return Err(ConeError::EmptyBase);
    }
    if f.len() != x0.len() {
        return Err(ConeError::AssignmentLength {
            expected: x0.len(),
            found: f.len(),
        });
    }
    if let Some(&bad) = f.iter().find(|&&v| v >= y.len()) {
        return Err(ConeError::OutOfRange {
            space: y.id().to_string(),
            index: bad,
            len: y.len(),
        });
    }
    let base = x0.indices();
    let mut nearest = Vec::with_capacity(x.len());
    let mut points = Vec::with_capacity(x.len());
    for p in x.points() {
        // `min_by` keeps the first of equal elements.
        let k = (0..base.len())
            .min_by(|&i, &j| {
                x.d(p, base[i])
                    .partial_cmp(&x.d(p, base[j]))
                    .unwrap_or(Ordering::Equal)
            })
            .expect("X0 is non-empty");
        nearest.push(base[k]);
        points.push(ConePoint {
            base: f[k],
            height: x.d(p, base[k]),
        });
    }
    Ok(ConeExtension {
        rho: extension_rho(rho_prime),
        nearest,
        points,
    })
}

impl<T: Real> ConeExtension<T> {
    /// `max_{x ∈ X0} d_{C(Y)}((f(x), 0), F'(x))`.
    pub fn closeness_on_base(
        &self,
        x0: &PointSubset,
        f: &[usize],
        y: &FiniteMetricSpace<T>,
    ) -> Result<T, ConeError> {
        let mut worst = T::zero();
        for (k, &p) in x0.indices().iter().enumerate() {
            let start = ConePoint {
                base: f[k],
                height: T::zero(),
            };
            worst = worst.max(cone_distance(&self.rho, y, &start, &self.points[p])?);
        }
        Ok(worst)
    }

    /// First pair with `d(F'x, F'x') > d(x, x') + ρ(d(x, x')) + tol`, with
    /// both sides of the inequality.
    pub fn control_violation(
        &self,
        x: &FiniteMetricSpace<T>,
        y: &FiniteMetricSpace<T>,
        tol: T,
    ) -> Result<Option<(usize, usize, T, T)>, ConeError> {
        for (a, b) in x.pairs() {
            let image = cone_distance(&self.rho, y, &self.points[a], &self.points[b])?;
            let d = x.d(a, b);
            let bound = d + self.rho.eval(d);
            if image > bound + tol {
                return Ok(Some((a, b, image, bound)));
            }
        }
        Ok(None)
    }

    /// `F'` as a family map into the cone sample at the heights it uses.
    pub fn to_map(
        &self,
        x: &FiniteMetricSpace<T>,
        y: &FiniteMetricSpace<T>,
    ) -> Result<(ConeSample<T>, FamilyMap), ConeError> {
        let heights: Vec<T> = self.points.iter().map(|p| p.height).collect();
        let sample = cone_sample(&self.rho, y, &heights)?;
        let assignment = self
            .points
            .iter()
            .map(|p| {
                sample.index(
                    p.base,
                    sample.height_index(p.height).expect("height sampled"),
                )
            })
            .collect();
        let map = FamilyMap::new(x.id(), sample.space.id()).with_function(
            x.id(),
            sample.space.id(),
            assignment,
        );
        Ok((sample, map))
    }
}
