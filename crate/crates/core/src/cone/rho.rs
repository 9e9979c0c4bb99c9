use std::fmt;
use std::str::FromStr;

use crate::scalar::Real;

use super::ConeError;

/// Non-decreasing, non-negative function on `[0, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub enum RhoFunction<T> {
    Constant(T),
    /// `m·s + l`.
    Affine {
        m: T,
        l: T,
    },
    /// `e^s`.
    Exponential,
    /// Right-continuous step function: value `v_i` on `[s_i, s_{i+1})`, zero
    /// below `s_0`.
    Step(Vec<(T, T)>),
    /// Piecewise linear through the points, constant outside their range.
    Table(Vec<(T, T)>),
}

fn check_points<T: Real>(points: &[(T, T)], kind: &str) -> Result<(), ConeError> {
    if points.is_empty() {
        return Err(ConeError::Rho(format!("{kind} needs at least one point")));
    }
    for w in points.windows(2) {
        if !(w[0].0 < w[1].0) {
            return Err(ConeError::Rho(format!("{kind} positions must increase")));
        }
        if w[1].1 < w[0].1 {
            return Err(ConeError::Rho(format!("{kind} values must not decrease")));
        }
    }
    if points
        .iter()
        .any(|p| !(p.1 >= T::zero()) || !p.0.is_finite() || !p.1.is_finite())
    {
        return Err(ConeError::Rho(format!(
            "{kind} values must be finite and non-negative"
        )));
    }
    Ok(())
}

impl<T: Real> RhoFunction<T> {
    pub fn constant(c: T) -> Result<Self, ConeError> {
        if !(c >= T::zero()) || !c.is_finite() {
            return Err(ConeError::Rho(
                "constant must be finite and non-negative".into(),
            ));
        }
        Ok(Self::Constant(c))
    }

    pub fn affine(m: T, l: T) -> Result<Self, ConeError> {
        if !(m >= T::zero() && l >= T::zero()) || !m.is_finite() || !l.is_finite() {
            return Err(ConeError::Rho(
                "affine coefficients must be non-negative".into(),
            ));
        }
        Ok(Self::Affine { m, l })
    }

    pub fn step(points: Vec<(T, T)>) -> Result<Self, ConeError> {
        check_points(&points, "step")?;
        Ok(Self::Step(points))
    }

    pub fn table(points: Vec<(T, T)>) -> Result<Self, ConeError> {
        check_points(&points, "table")?;
        Ok(Self::Table(points))
    }

    /// Parses a table file: one `s v` pair per line, `#` comments allowed.
    pub fn parse_table(text: &str) -> Result<Self, ConeError> {
        let mut points = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .and_then(T::from_f64)
                    .ok_or_else(|| ConeError::Rho(format!("line {}: bad number `{s}`", k + 1)))
            };
            if fields.len() != 2 {
                return Err(ConeError::Rho(format!("line {}: expected `s v`", k + 1)));
            }
            points.push((parse(fields[0])?, parse(fields[1])?));
        }
        Self::table(points)
    }

    pub fn eval(&self, s: T) -> T {
        match self {
            RhoFunction::Constant(c) => *c,
            RhoFunction::Affine { m, l } => *m * s + *l,
            RhoFunction::Exponential => s.exp(),
            RhoFunction::Step(points) => {
                let k = points.partition_point(|p| p.0 <= s);
                if k == 0 {
                    T::zero()
                } else {
                    points[k - 1].1
                }
            }
            RhoFunction::Table(points) => {
                let k = points.partition_point(|p| p.0 <= s);
                if k == 0 {
                    points[0].1
                } else if k == points.len() {
                    points[k - 1].1
                } else {
                    let (s0, v0) = points[k - 1];
                    let (s1, v1) = points[k];
                    v0 + (v1 - v0) * (s - s0) / (s1 - s0)
                }
            }
        }
    }

    /// `max(ρ(s), 1)`.
    pub fn floor_one(&self, s: T) -> T {
        self.eval(s).max(T::one())
    }

    /// Points in `(lo, hi)` where `max(ρ, 1)` may fail to be smooth.
    pub fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        let one = T::one();
        let mut out = Vec::new();
        match self {
            RhoFunction::Constant(_) | RhoFunction::Exponential => {}
            RhoFunction::Affine { m, l } => {
                if *m > T::zero() && *l < one {
                    out.push((one - *l) / *m);
                }
            }
            RhoFunction::Step(points) => out.extend(points.iter().map(|p| p.0)),
            RhoFunction::Table(points) => {
                out.extend(points.iter().map(|p| p.0));
                for w in points.windows(2) {
                    let ((s0, v0), (s1, v1)) = (w[0], w[1]);
                    if v0 < one && v1 > one {
                        out.push(s0 + (one - v0) * (s1 - s0) / (v1 - v0));
                    }
                }
            }
        }
        out.retain(|&s| s > lo && s < hi);
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        out.dedup();
        out
    }

    /// Whether `ρ(s) -> ∞`.
    pub fn is_unbounded(&self) -> bool {
        match self {
            RhoFunction::Affine { m, .. } => *m > T::zero(),
            RhoFunction::Exponential => true,
            _ => false,
        }
    }
}

impl<T: Real> fmt::Display for RhoFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |points: &[(T, T)]| {
            points
                .iter()
                .map(|(s, v)| format!("{s}:{v}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            RhoFunction::Constant(c) => write!(f, "const:{c}"),
            RhoFunction::Affine { m, l } => write!(f, "affine:{m},{l}"),
            RhoFunction::Exponential => f.write_str("exp"),
            RhoFunction::Step(points) => write!(f, "step:{}", list(points)),
            RhoFunction::Table(points) => write!(f, "table:{}", list(points)),
        }
    }
}

/// Parses `const:c`, `affine:M,L`, `exp`, `step:s1:v1,s2:v2,...` and the
/// inline table form `table:s1:v1,...` (table files are read by the caller).
impl<T: Real> FromStr for RhoFunction<T> {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .ok()
                .and_then(T::from_f64)
                .ok_or_else(|| ConeError::Rho(format!("bad number `{x}` in `{s}`")))
        };
        let pairs = |body: &str| -> Result<Vec<(T, T)>, ConeError> {
            body.split(',')
                .map(|p| {
                    let (a, b) = p
                        .split_once(':')
                        .ok_or_else(|| ConeError::Rho(format!("expected `s:v`, found `{p}`")))?;
                    Ok((num(a)?, num(b)?))
                })
                .collect()
        };
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "exp" if body.is_empty() => Ok(RhoFunction::Exponential),
            "const" => Self::constant(num(body)?),
            "affine" => {
                let (m, l) = body
                    .split_once(',')
                    .ok_or_else(|| ConeError::Rho(format!("expected `affine:M,L`, found `{s}`")))?;
                Self::affine(num(m)?, num(l)?)
            }
            "step" => Self::step(pairs(body)?),
            "table" => Self::table(pairs(body)?),
            _ => Err(ConeError::Rho(format!("unknown function `{s}`"))),
        }
    }
}
