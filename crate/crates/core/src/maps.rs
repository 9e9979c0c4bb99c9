//! Maps of metric families and finite-scale estimates of their coarse
//! properties: control functions, effective-properness envelopes, closeness
//! of maps, coarse surjectivity and inverse images of subfamilies.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::metric::{FiniteMetricSpace, MetricFamily, PointSubset};
use crate::scalar::{self, Extended, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("map goes from `{found}` but family `{expected}` was supplied")]
    FamilyMismatch { expected: String, found: String },
    #[error("unknown member `{member}` in family `{family}`")]
    UnknownMember { family: String, member: String },
    #[error("member `{0}` is not the domain of any function")]
    UncoveredDomain(String),
    #[error("function {function} assigns {found} points but its domain has {expected}")]
    AssignmentLength {
        function: usize,
        expected: usize,
        found: usize,
    },
    #[error("function {function} maps point {point} to index {image} outside the target")]
    ImageOutOfRange {
        function: usize,
        point: usize,
        image: usize,
    },
    #[error("no function of the second map matches `{source_member} -> {target_member}`")]
    NoPairing {
        source_member: String,
        target_member: String,
    },
}

/// One function `f: X -> Y` of a family map, given by point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFunction {
    pub source: String,
    pub target: String,
    pub assignment: Vec<usize>,
}

/// A map of metric families: a collection of functions such that every
/// source member is the domain of at least one of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMap {
    pub source: String,
    pub target: String,
    pub functions: Vec<MapFunction>,
}

/// A function of a map resolved against its families.
pub struct Resolved<'a, T> {
    pub domain: &'a FiniteMetricSpace<T>,
    pub codomain: &'a FiniteMetricSpace<T>,
    pub assignment: &'a [usize],
}

impl FamilyMap {
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            target: target.into(),
            functions: Vec::new(),
        }
    }

    pub fn with_function(
        mut self,
        source: impl Into<String>,
        target: impl Into<String>,
        assignment: Vec<usize>,
    ) -> Self {
        self.functions.push(MapFunction {
            source: source.into(),
            target: target.into(),
            assignment,
        });
        self
    }

    /// Identity map of a family onto itself.
    pub fn identity<T: Scalar>(family: &MetricFamily<T>) -> Self {
        let mut map = Self::new(&family.id, &family.id);
        for m in family.members() {
            map = map.with_function(m.id(), m.id(), m.points().collect());
        }
        map
    }

    /// Checks the map against its source and target families.
    pub fn validate<T: Scalar>(
        &self,
        source: &MetricFamily<T>,
        target: &MetricFamily<T>,
    ) -> Result<(), MapError> {
        self.resolve(source, target).map(|_| ())
    }

    pub fn resolve<'a, T: Scalar>(
        &'a self,
        source: &'a MetricFamily<T>,
        target: &'a MetricFamily<T>,
    ) -> Result<Vec<Resolved<'a, T>>, MapError> {
        if source.id != self.source {
            return Err(MapError::FamilyMismatch {
                expected: source.id.clone(),
                found: self.source.clone(),
            });
        }
        if target.id != self.target {
            return Err(MapError::FamilyMismatch {
                expected: target.id.clone(),
                found: self.target.clone(),
            });
        }
        let mut out = Vec::with_capacity(self.functions.len());
        for (k, f) in self.functions.iter().enumerate() {
            let domain = source
                .member(&f.source)
                .ok_or_else(|| MapError::UnknownMember {
                    family: source.id.clone(),
                    member: f.source.clone(),
                })?;
            let codomain = target
                .member(&f.target)
                .ok_or_else(|| MapError::UnknownMember {
                    family: target.id.clone(),
                    member: f.target.clone(),
                })?;
            if f.assignment.len() != domain.len() {
                return Err(MapError::AssignmentLength {
                    function: k,
                    expected: domain.len(),
                    found: f.assignment.len(),
                });
            }
            if let Some((point, &image)) = f
                .assignment
                .iter()
                .enumerate()
                .find(|(_, &y)| y >= codomain.len())
            {
                return Err(MapError::ImageOutOfRange {
                    function: k,
                    point,
                    image,
                });
            }
            out.push(Resolved {
                domain,
                codomain,
                assignment: &f.assignment,
            });
        }
        for m in source.members() {
            if !self.functions.iter().any(|f| f.source == m.id()) {
                return Err(MapError::UncoveredDomain(m.id().to_string()));
            }
        }
        Ok(out)
    }

    /// `g ∘ f` for every `f` in `self` and `g` in `outer` with matching members.
    pub fn then(&self, outer: &FamilyMap) -> FamilyMap {
        let mut out = FamilyMap::new(&self.source, &outer.target);
        for f in &self.functions {
            for g in outer.functions.iter().filter(|g| g.source == f.target) {
                let assignment = f.assignment.iter().map(|&y| g.assignment[y]).collect();
                out = out.with_function(&f.source, &g.target, assignment);
            }
        }
        out
    }
}

/// A pair `(x, y)` of points in the domain of function `function`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub function: usize,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Breakpoint<T> {
    pub at: T,
    pub value: T,
    pub witness: PairWitness,
}

/// Non-decreasing step function on `[0, ∞)` supported on realized distances.
///
/// Evaluating between breakpoints returns the value of the next lower one.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneEnvelope<T> {
    pub breakpoints: Vec<Breakpoint<T>>,
}

impl<T: Scalar> MonotoneEnvelope<T> {
    pub fn eval(&self, s: T) -> T {
        let k = self.breakpoints.partition_point(|b| b.at <= s);
        if k == 0 {
            T::zero()
        } else {
            self.breakpoints[k - 1].value
        }
    }

    /// Sorted `(at, value)` pairs.
    pub fn points(&self) -> Vec<(T, T)> {
        self.breakpoints.iter().map(|b| (b.at, b.value)).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.breakpoints
            .windows(2)
            .all(|w| w[0].at < w[1].at && w[0].value <= w[1].value)
    }
}

struct Sample<T> {
    source: T,
    image: T,
    witness: PairWitness,
}

fn samples<T: Scalar>(resolved: &[Resolved<'_, T>]) -> Vec<Sample<T>> {
    let mut out: Vec<Sample<T>> = resolved
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, r)| {
            r.domain.pairs().map(move |(x, y)| Sample {
                source: r.domain.d(x, y),
                image: r.codomain.d(r.assignment[x], r.assignment[y]),
                witness: PairWitness { function: k, x, y },
            })
        })
        .collect();
    out.sort_by(|a, b| scalar::cmp(&a.source, &b.source));
    out
}

/// Smallest non-decreasing `ρ` with `d_Y(fx, fy) <= ρ(d_X(x, y))` on all pairs
/// of all functions: the running maximum of image distances ordered by
/// source distance.
pub fn control_envelope<T: Scalar>(
    map: &FamilyMap,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> Result<MonotoneEnvelope<T>, MapError> {
    let resolved = map.resolve(source, target)?;
    let samples = samples(&resolved);
    let diagonal = PairWitness {
        function: 0,
        x: 0,
        y: 0,
    };
    let mut breakpoints = vec![Breakpoint {
        at: T::zero(),
        value: T::zero(),
        witness: diagonal,
    }];
    let mut k = 0;
    while k < samples.len() {
        let at = samples[k].source;
        let mut best: Option<&Sample<T>> = None;
        while k < samples.len() && samples[k].source == at {
            if best.map_or(true, |b| samples[k].image > b.image) {
                best = Some(&samples[k]);
            }
            k += 1;
        }
        let best = best.expect("group is non-empty");
        let last = breakpoints.last_mut().unwrap();
        if best.image > last.value {
            if last.at == at {
                last.value = best.image;
                last.witness = best.witness;
            } else {
                breakpoints.push(Breakpoint {
                    at,
                    value: best.image,
                    witness: best.witness,
                });
            }
        }
    }
    Ok(MonotoneEnvelope { breakpoints })
}

/// Finite-data report on effective properness.
#[derive(Clone, Debug, PartialEq)]
pub struct PropernessReport<T> {
    pub envelope: MonotoneEnvelope<T>,
    /// Set when the envelope looks bounded: constant over the top half of the
    /// realized distances, or zero at the largest one.
    pub flagged: bool,
    /// Largest realized source distance; the envelope says nothing beyond it.
    pub max_scale: T,
}

impl<T: Scalar> PropernessReport<T> {
    pub fn summary(&self) -> String {
        if self.flagged {
            format!("not proper-looking at scales up to {}", self.max_scale)
        } else {
            format!(
                "consistent with effectively proper at scales up to {}",
                self.max_scale
            )
        }
    }
}

/// Largest non-decreasing `δ` with `δ(d_X(x, y)) <= d_Y(fx, fy)` on all pairs:
/// `δ(s) = min { d_Y(fx, fy) : d_X(x, y) >= s }` at realized distances.
pub fn properness_envelope<T: Scalar>(
    map: &FamilyMap,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> Result<PropernessReport<T>, MapError> {
    let resolved = map.resolve(source, target)?;
    let samples = samples(&resolved);
    // Distinct realized source distances with the suffix minimum of images.
    let mut groups: Vec<(T, T, PairWitness)> = Vec::new();
    let mut k = samples.len();
    let mut running: Option<(T, PairWitness)> = None;
    while k > 0 {
        let at = samples[k - 1].source;
        while k > 0 && samples[k - 1].source == at {
            let s = &samples[k - 1];
            if running.map_or(true, |(v, _)| s.image < v) {
                running = Some((s.image, s.witness));
            }
            k -= 1;
        }
        let (v, w) = running.unwrap();
        groups.push((at, v, w));
    }
    groups.reverse();
    let mut breakpoints = vec![Breakpoint {
        at: T::zero(),
        value: T::zero(),
        witness: PairWitness {
            function: 0,
            x: 0,
            y: 0,
        },
    }];
    for &(at, value, witness) in &groups {
        let last = breakpoints.last_mut().unwrap();
        if value > last.value {
            if last.at == at {
                last.value = value;
                last.witness = witness;
            } else {
                breakpoints.push(Breakpoint { at, value, witness });
            }
        }
    }
    let positive: Vec<&(T, T, PairWitness)> = groups.iter().filter(|g| g.0 > T::zero()).collect();
    let max_scale = positive.last().map_or(T::zero(), |g| g.0);
    let top = &positive[positive.len() / 2..];
    let constant_top = top.len() >= 2 && top.iter().all(|g| g.1 == top[0].1);
    let zero_at_top = positive.last().is_some_and(|g| g.1 == T::zero());
    Ok(PropernessReport {
        envelope: MonotoneEnvelope { breakpoints },
        flagged: constant_top || zero_at_top,
        max_scale,
    })
}

fn sup_distance<T: Scalar>(codomain: &FiniteMetricSpace<T>, f: &[usize], h: &[usize]) -> T {
    f.iter()
        .zip(h)
        .map(|(&a, &b)| codomain.d(a, b))
        .fold(T::zero(), scalar::max)
}

fn one_sided<T: Scalar>(
    from: &FamilyMap,
    to: &FamilyMap,
    target: &MetricFamily<T>,
) -> Result<T, MapError> {
    let mut worst = T::zero();
    for f in &from.functions {
        let codomain = target
            .member(&f.target)
            .ok_or_else(|| MapError::UnknownMember {
                family: target.id.clone(),
                member: f.target.clone(),
            })?;
        let best = to
            .functions
            .iter()
            .filter(|h| h.source == f.source && h.target == f.target)
            .map(|h| sup_distance(codomain, &f.assignment, &h.assignment))
            .reduce(scalar::min)
            .ok_or_else(|| MapError::NoPairing {
                source_member: f.source.clone(),
                target_member: f.target.clone(),
            })?;
        worst = scalar::max(worst, best);
    }
    Ok(worst)
}

/// Smallest `C` such that every function of either map has a partner in the
/// other map (same domain and codomain) within sup-distance `C`.
pub fn closeness_constant<T: Scalar>(
    a: &FamilyMap,
    b: &FamilyMap,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> Result<T, MapError> {
    a.validate(source, target)?;
    b.validate(source, target)?;
    Ok(scalar::max(
        one_sided(a, b, target)?,
        one_sided(b, a, target)?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OntoReport<T> {
    /// Every target member is the range of some function.
    pub ranges_covered: bool,
    /// Least `C` with every target point within `C` of an image point.
    pub constant: Extended<T>,
}

impl<T: Scalar> OntoReport<T> {
    pub fn is_onto(&self) -> bool {
        self.ranges_covered && !self.constant.is_infinite()
    }
}

pub fn coarsely_onto<T: Scalar>(
    map: &FamilyMap,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> Result<OntoReport<T>, MapError> {
    let resolved = map.resolve(source, target)?;
    let ranges_covered = target
        .members()
        .iter()
        .all(|t| map.functions.iter().any(|f| f.target == t.id()));
    if !ranges_covered {
        return Ok(OntoReport {
            ranges_covered,
            constant: Extended::Infinite,
        });
    }
    let mut constant = T::zero();
    for r in &resolved {
        let mut image = r.assignment.to_vec();
        image.sort_unstable();
        image.dedup();
        for y in r.codomain.points() {
            let gap = r
                .codomain
                .dist_to_set(y, &image)
                .finite()
                .unwrap_or_else(T::zero);
            constant = scalar::max(constant, gap);
        }
    }
    Ok(OntoReport {
        ranges_covered,
        constant: Extended::Finite(constant),
    })
}

/// All inverse images `f⁻¹(A)` for `A` in `subsets` and `f` in the map,
/// de-duplicated in order of first appearance, empty ones dropped.
pub fn preimage_family(map: &FamilyMap, subsets: &[PointSubset]) -> Vec<PointSubset> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in subsets {
        for f in map.functions.iter().filter(|f| f.target == a.space_id) {
            let indices: Vec<usize> = f
                .assignment
                .iter()
                .enumerate()
                .filter(|(_, &y)| a.contains(y))
                .map(|(x, _)| x)
                .collect();
            if indices.is_empty() {
                continue;
            }
            let pre = PointSubset::new(f.source.clone(), indices);
            if seen.insert(pre.clone()) {
                out.push(pre);
            }
        }
    }
    out
}
