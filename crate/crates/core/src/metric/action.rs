use crate::scalar::{self, Scalar};

use super::{FiniteMetricSpace, MetricError};

/// A finite group acting by permutations on the points of one space.
///
/// Convention: `compose[g][h]` is the element `g·h`, and `(g·h)x = g(h(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub elements: Vec<String>,
    pub perms: Vec<Vec<usize>>,
    pub compose: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(
        elements: Vec<String>,
        perms: Vec<Vec<usize>>,
        compose: Vec<Vec<usize>>,
    ) -> Result<Self, MetricError> {
        let action = Self {
            elements,
            perms,
            compose,
        };
        action.check_group()?;
        Ok(action)
    }

    /// The trivial group on `n` points.
    pub fn trivial(n: usize) -> Self {
        Self {
            elements: vec!["e".into()],
            perms: vec![(0..n).collect()],
            compose: vec![vec![0]],
        }
    }

    /// Builds the action generated by closing `generators` under composition.
    pub fn generated_by(n: usize, generators: &[Vec<usize>]) -> Result<Self, MetricError> {
        let identity: Vec<usize> = (0..n).collect();
        let mut perms = vec![identity];
        for g in generators {
            if g.len() != n {
                return Err(MetricError::Action("generator has wrong length".into()));
            }
            if !perms.contains(g) {
                perms.push(g.clone());
            }
        }
        let mut k = 0;
        while k < perms.len() {
            for g in 0..generators.len() {
                let p: Vec<usize> = (0..n).map(|x| generators[g][perms[k][x]]).collect();
                if !perms.contains(&p) {
                    perms.push(p);
                }
            }
            k += 1;
        }
        let find = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let compose = (0..perms.len())
            .map(|g| {
                (0..perms.len())
                    .map(|h| find(&(0..n).map(|x| perms[g][perms[h][x]]).collect()))
                    .collect()
            })
            .collect();
        let elements = (0..perms.len())
            .map(|g| {
                if g == 0 {
                    "e".to_string()
                } else {
                    format!("g{g}")
                }
            })
            .collect();
        Self::new(elements, perms, compose)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.perms.first().map_or(0, Vec::len)
    }

    pub fn identity(&self) -> Option<usize> {
        let m = self.order();
        (0..m).find(|&e| (0..m).all(|g| self.compose[e][g] == g && self.compose[g][e] == g))
    }

    /// Exhaustively checks the group axioms and that the permutations form a
    /// homomorphic image of the composition table.
    pub fn check_group(&self) -> Result<(), MetricError> {
        let m = self.elements.len();
        let err = |s: String| Err(MetricError::Action(s));
        if m == 0 {
            return err("empty group".into());
        }
        if self.perms.len() != m || self.compose.len() != m {
            return err("element, permutation and table counts differ".into());
        }
        let n = self.perms[0].len();
        for (g, p) in self.perms.iter().enumerate() {
            if p.len() != n {
                return err(format!(
                    "permutation of `{}` has wrong length",
                    self.elements[g]
                ));
            }
            let mut seen = vec![false; n];
            for &x in p {
                if x >= n || seen[x] {
                    return err(format!("`{}` is not a permutation", self.elements[g]));
                }
                seen[x] = true;
            }
        }
        for row in &self.compose {
            if row.len() != m || row.iter().any(|&v| v >= m) {
                return err("composition table is not an m×m table of elements".into());
            }
        }
        let Some(e) = self.identity() else {
            return err("no identity element".into());
        };
        if self.perms[e].iter().enumerate().any(|(i, &x)| i != x) {
            return err(format!(
                "identity `{}` does not act trivially",
                self.elements[e]
            ));
        }
        for g in 0..m {
            for h in 0..m {
                for k in 0..m {
                    let left = self.compose[self.compose[g][h]][k];
                    let right = self.compose[g][self.compose[h][k]];
                    if left != right {
                        return err(format!(
                            "not associative at ({},{},{})",
                            self.elements[g], self.elements[h], self.elements[k]
                        ));
                    }
                }
            }
        }
        for g in 0..m {
            if !(0..m).any(|h| self.compose[g][h] == e && self.compose[h][g] == e) {
                return err(format!("`{}` has no inverse", self.elements[g]));
            }
        }
        for g in 0..m {
            for h in 0..m {
                let gh = self.compose[g][h];
                if (0..n).any(|x| self.perms[gh][x] != self.perms[g][self.perms[h][x]]) {
                    return err(format!(
                        "permutation of {0}{1} differs from {0} after {1}",
                        self.elements[g], self.elements[h]
                    ));
                }
            }
        }
        Ok(())
    }

    /// Checks that every element acts by an isometry of `space` (up to `tol`).
    pub fn check_isometric<T: Scalar>(
        &self,
        space: &FiniteMetricSpace<T>,
        tol: T,
    ) -> Result<(), MetricError> {
        if self.degree() != space.len() {
            return Err(MetricError::Action(format!(
                "action on {} points applied to space `{}` with {} points",
                self.degree(),
                space.id(),
                space.len()
            )));
        }
        for (g, p) in self.perms.iter().enumerate() {
            for (x, y) in space.pairs() {
                let before = space.d(x, y);
                let after = space.d(p[x], p[y]);
                if !scalar::le_tol(scalar::abs_diff(before, after), T::zero(), tol) {
                    return Err(MetricError::NotIsometric {
                        element: self.elements[g].clone(),
                        x: space.label(x).to_string(),
                        y: space.label(y).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Orbit of `x`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.perms.iter().map(|p| p[x]).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

/// A quotient space together with the quotient map.
#[derive(Clone, Debug)]
pub struct Quotient<T> {
    pub space: FiniteMetricSpace<T>,
    /// `projection[x]` is the quotient point of `x`.
    pub projection: Vec<usize>,
    /// Orbit representative (minimal index) of each quotient point.
    pub representatives: Vec<usize>,
}

/// `F\X` with `d(Fx, Fx') = min_h d(x, h x')`.
pub fn quotient<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    action: &GroupAction,
    tol: T,
) -> Result<FiniteMetricSpace<T>, MetricError> {
    quotient_with_projection(space, action, tol).map(|q| q.space)
}

pub fn quotient_with_projection<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    action: &GroupAction,
    tol: T,
) -> Result<Quotient<T>, MetricError> {
    action.check_group()?;
    action.check_isometric(space, tol)?;
    let n = space.len();
    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in 0..n {
        if projection[x] != usize::MAX {
            continue;
        }
        let q = representatives.len();
        for y in action.orbit(x) {
            projection[y] = q;
        }
        representatives.push(x);
    }
    let labels = representatives
        .iter()
        .map(|&x| format!("F·{}", space.label(x)))
        .collect();
    let reps = &representatives;
    let quotient = FiniteMetricSpace::from_fn(space.id().to_string(), labels, |a, b| {
        if a == b {
            return T::zero();
        }
        let (x, y) = (reps[a], reps[b]);
        action
            .perms
            .iter()
            .map(|p| space.d(x, p[y]))
            .reduce(scalar::min)
            .unwrap_or_else(T::zero)
    })?
    .with_pseudo(space.is_pseudo());
    let report = quotient.validate();
    if let Some(v) = report.violations.first() {
        return Err(MetricError::InvalidResult(v.describe(&quotient)));
    }
    Ok(Quotient {
        space: quotient,
        projection,
        representatives,
    })
}
