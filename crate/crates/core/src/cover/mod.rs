//! Covers of finite metric spaces: dimension, Lebesgue number, mesh,
//! colorings, and the certificates built from them.

mod certificate;
pub mod generators;
mod ops;

use thiserror::Error;

use crate::metric::{FiniteMetricSpace, PointSubset};
use crate::scalar::{Extended, Scalar};

pub use certificate::{
    check_an_control, check_asdim_certificate, AnControlCertificate, AnEntry, AsdimCertificate,
    AsdimEntry, MemberCover,
};
pub use ops::{
    product_control_closed, product_control_count, product_cover, pushforward_quotient_cover,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("element {0} is empty")]
    EmptyElement(usize),
    #[error("element {element} refers to point {index} but the space has {len} points")]
    IndexOutOfRange {
        element: usize,
        index: usize,
        len: usize,
    },
    #[error("point `{0}` lies in no element")]
    Uncovered(String),
    #[error("{colors} colors given for {elements} elements")]
    ColorCount { colors: usize, elements: usize },
    #[error("unknown member `{member}` in family `{family}`")]
    UnknownMember { family: String, member: String },
    #[error("certificate is for family `{found}` but `{expected}` was supplied")]
    FamilyMismatch { expected: String, found: String },
    #[error(
        "point `{point}` of factor {factor} lies in {count} color classes, fewer than {needed}"
    )]
    Multiplicity {
        factor: usize,
        point: String,
        count: usize,
        needed: usize,
    },
    #[error("color {color} of factor {factor} exceeds the {colors} allowed colors")]
    ColorRange {
        factor: usize,
        color: usize,
        colors: usize,
    },
}

/// A cover of the points `0..points` of one space by non-empty subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub space_id: String,
    points: usize,
    elements: Vec<Vec<usize>>,
}

impl Cover {
    /// Builds a cover, checking indices, non-emptiness and coverage.
    pub fn new<T: Scalar>(
        space: &FiniteMetricSpace<T>,
        elements: Vec<Vec<usize>>,
    ) -> Result<Self, CoverError> {
        let n = space.len();
        let mut covered = vec![false; n];
        let mut clean = Vec::with_capacity(elements.len());
        for (k, mut e) in elements.into_iter().enumerate() {
            if e.is_empty() {
                return Err(CoverError::EmptyElement(k));
            }
            e.sort_unstable();
            e.dedup();
            if let Some(&index) = e.iter().find(|&&i| i >= n) {
                return Err(CoverError::IndexOutOfRange {
                    element: k,
                    index,
                    len: n,
                });
            }
            for &i in &e {
                covered[i] = true;
            }
            clean.push(e);
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(CoverError::Uncovered(space.label(x).to_string()));
        }
        Ok(Self {
            space_id: space.id().to_string(),
            points: n,
            elements: clean,
        })
    }

    /// Cover of `space` by its points' singletons.
    pub fn singletons<T: Scalar>(space: &FiniteMetricSpace<T>) -> Self {
        Self::new(space, space.points().map(|i| vec![i]).collect()).expect("singletons cover")
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn subsets(&self) -> Vec<PointSubset> {
        self.elements
            .iter()
            .map(|e| PointSubset::new(self.space_id.clone(), e.clone()))
            .collect()
    }

    /// Number of elements containing each point.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut count = vec![0; self.points];
        for e in &self.elements {
            for &i in e {
                count[i] += 1;
            }
        }
        count
    }

    /// Largest `n` such that some point lies in `n + 1` elements, with that point.
    pub fn dimension_witness(&self) -> (usize, usize) {
        let m = self.multiplicities();
        let (x, &c) = m
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("covers of empty spaces have no dimension");
        (c - 1, x)
    }

    pub fn dimension(&self) -> usize {
        if self.points == 0 {
            return 0;
        }
        self.dimension_witness().0
    }

    fn membership(&self) -> Vec<Vec<bool>> {
        self.elements
            .iter()
            .map(|e| {
                let mut m = vec![false; self.points];
                for &i in e {
                    m[i] = true;
                }
                m
            })
            .collect()
    }

    /// Lebesgue number for open balls with the point attaining the minimum:
    /// `min_x max_{U ∋ x} min_{y ∉ U} d(x, y)`, infinite when some `U = X`.
    pub fn lebesgue_witness<T: Scalar>(
        &self,
        space: &FiniteMetricSpace<T>,
    ) -> (Extended<T>, Option<usize>) {
        let member = self.membership();
        let mut best: (Extended<T>, Option<usize>) = (Extended::Infinite, None);
        for x in space.points() {
            let mut at_x = Extended::Finite(T::zero());
            for k in 0..self.elements.len() {
                if !member[k][x] {
                    continue;
                }
                let gap = space
                    .points()
                    .filter(|&y| !member[k][y])
                    .map(|y| Extended::Finite(space.d(x, y)))
                    .fold(Extended::Infinite, Extended::min);
                at_x = at_x.max(gap);
            }
            if best.1.is_none() || at_x < best.0 {
                best = (at_x, Some(x));
            }
        }
        best
    }

    pub fn lebesgue_number<T: Scalar>(&self, space: &FiniteMetricSpace<T>) -> Extended<T> {
        self.lebesgue_witness(space).0
    }

    /// Largest element diameter and the element attaining it.
    pub fn mesh_witness<T: Scalar>(&self, space: &FiniteMetricSpace<T>) -> (T, Option<usize>) {
        let mut best = (T::zero(), None);
        for (k, e) in self.elements.iter().enumerate() {
            let d = space.diameter_of(e);
            if best.1.is_none() || d > best.0 {
                best = (d, Some(k));
            }
        }
        best
    }

    pub fn mesh<T: Scalar>(&self, space: &FiniteMetricSpace<T>) -> T {
        self.mesh_witness(space).0
    }
}

/// A cover with a color in `0..=n` attached to every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredCover {
    pub cover: Cover,
    pub colors: Vec<usize>,
}

impl ColoredCover {
    pub fn new(cover: Cover, colors: Vec<usize>) -> Result<Self, CoverError> {
        if colors.len() != cover.len() {
            return Err(CoverError::ColorCount {
                colors: colors.len(),
                elements: cover.len(),
            });
        }
        Ok(Self { cover, colors })
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |c| c + 1)
    }

    /// Element indices of color `c`.
    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&k| self.colors[k] == c)
            .collect()
    }

    /// First pair of same-colored elements at distance `<= r`.
    pub fn disjointness_violation<T: Scalar>(
        &self,
        space: &FiniteMetricSpace<T>,
        r: T,
    ) -> Option<(usize, usize, T)> {
        let elements = self.cover.elements();
        for a in 0..elements.len() {
            for b in a + 1..elements.len() {
                if self.colors[a] != self.colors[b] {
                    continue;
                }
                let d = space
                    .set_distance(&elements[a], &elements[b])
                    .finite()
                    .expect("elements are non-empty");
                if d <= r {
                    return Some((a, b, d));
                }
            }
        }
        None
    }

    /// Number of distinct colors whose elements contain each point.
    pub fn color_multiplicities(&self) -> Vec<usize> {
        let k = self.color_count();
        let mut seen = vec![vec![false; k]; self.cover.points()];
        for (e, &c) in self.cover.elements().iter().zip(&self.colors) {
            for &i in e {
                seen[i][c] = true;
            }
        }
        seen.iter()
            .map(|s| s.iter().filter(|&&b| b).count())
            .collect()
    }
}

/// Colors the elements of `cover` in order, each with the least color whose
/// class stays `r`-disjoint. `None` if more than `colors` colors are needed.
pub fn color_greedily<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    cover: &Cover,
    colors: usize,
    r: T,
) -> Option<ColoredCover> {
    let elements = cover.elements();
    let mut assigned: Vec<usize> = Vec::with_capacity(elements.len());
    for (k, e) in elements.iter().enumerate() {
        let c = (0..colors).find(|&c| {
            (0..k).all(|j| {
                assigned[j] != c
                    || space
                        .set_distance(e, &elements[j])
                        .finite()
                        .is_some_and(|d| d > r)
            })
        })?;
        assigned.push(c);
    }
    Some(ColoredCover {
        cover: cover.clone(),
        colors: assigned,
    })
}
