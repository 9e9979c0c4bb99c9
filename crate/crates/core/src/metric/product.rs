use std::fmt;
use std::str::FromStr;

use crate::scalar::{self, Scalar};

use super::{FiniteMetricSpace, MetricError};

/// Exponent of an ℓᵖ product metric, `1 <= p <= ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

impl LpExponent {
    pub fn new(p: f64) -> Result<Self, MetricError> {
        if p.is_infinite() && p > 0.0 {
            Ok(LpExponent::Infinity)
        } else if p >= 1.0 {
            Ok(LpExponent::Finite(p))
        } else {
            Err(MetricError::BadExponent(p))
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            LpExponent::Finite(p) => p.recip(),
            LpExponent::Infinity => 0.0,
        }
    }

    /// Combines per-factor distances.
    pub fn combine<T: Scalar>(self, parts: &[T]) -> Result<T, MetricError> {
        match self {
            LpExponent::Infinity => Ok(parts.iter().copied().fold(T::zero(), scalar::max)),
            LpExponent::Finite(p) if p == 1.0 => {
                Ok(parts.iter().copied().fold(T::zero(), |a, b| a + b))
            }
            LpExponent::Finite(p) => T::lp_sum(parts, p).ok_or(MetricError::ExactExponent(p)),
        }
    }
}

impl FromStr for LpExponent {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "∞" | "infinity" => Ok(LpExponent::Infinity),
            _ => s
                .parse::<f64>()
                .map_err(|_| MetricError::BadExponent(f64::NAN))
                .and_then(LpExponent::new),
        }
    }
}

impl fmt::Display for LpExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpExponent::Finite(p) => write!(f, "{p}"),
            LpExponent::Infinity => f.write_str("inf"),
        }
    }
}

/// Index of the product point with per-factor coordinates `coords`
/// (first factor most significant).
pub fn product_index(sizes: &[usize], coords: &[usize]) -> usize {
    coords
        .iter()
        .zip(sizes)
        .fold(0, |acc, (&c, &n)| acc * n + c)
}

fn coords_of(sizes: &[usize], mut index: usize, out: &mut [usize]) {
    for k in (0..sizes.len()).rev() {
        out[k] = index % sizes[k];
        index /= sizes[k];
    }
}

/// ℓᵖ product of `spaces`; point labels are `(a,b,...)`.
pub fn product<T: Scalar>(
    spaces: &[&FiniteMetricSpace<T>],
    p: LpExponent,
) -> Result<FiniteMetricSpace<T>, MetricError> {
    if spaces.is_empty() {
        return Err(MetricError::EmptyProduct);
    }
    if let LpExponent::Finite(v) = p {
        if v != 1.0 {
            T::lp_sum(&[T::zero()], v).ok_or(MetricError::ExactExponent(v))?;
        }
    }
    let sizes: Vec<usize> = spaces.iter().map(|s| s.len()).collect();
    let total: usize = sizes.iter().product();
    let m = spaces.len();
    let mut coords = vec![vec![0usize; m]; total];
    for (i, c) in coords.iter_mut().enumerate() {
        coords_of(&sizes, i, c);
    }
    let labels = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().zip(spaces).map(|(&k, s)| s.label(k)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let id = spaces.iter().map(|s| s.id()).collect::<Vec<_>>().join("×");
    let mut parts = vec![T::zero(); m];
    let mut dist = Vec::with_capacity(total * total);
    for a in &coords {
        for b in &coords {
            for k in 0..m {
                parts[k] = spaces[k].d(a[k], b[k]);
            }
            dist.push(p.combine(&parts)?);
        }
    }
    FiniteMetricSpace::from_flat(id, labels, dist)
}
