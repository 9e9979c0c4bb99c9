//! Scalar types used for distances.
//!
//! Every metric construction in this crate is generic over [`Scalar`], an
//! ordered numeric type. Floating point types compare with an absolute
//! tolerance, exact types (integers, rationals) compare exactly. The cone
//! construction needs transcendental functions and is restricted to [`Real`].

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_rational::Rational64;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Ordered numeric type that can serve as a distance.
pub trait Scalar:
    Num + PartialOrd + Copy + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic and comparisons are exact.
    const EXACT: bool;

    /// Short name used in reports.
    const NAME: &'static str;

    /// Tolerance used by certificate comparisons when none is given.
    fn default_tolerance() -> Self;

    /// Parses one whitespace-free token of a document.
    fn parse_token(token: &str) -> Option<Self>;

    /// `(sum parts^p)^(1/p)` for a finite exponent `p > 1`.
    ///
    /// Exact types return `None`; only `p = 1` and `p = ∞` are available to them.
    fn lp_sum(_parts: &[Self], _p: f64) -> Option<Self> {
        None
    }

    /// Converts a tolerance given on the command line.
    fn tolerance_from_f64(value: f64) -> Option<Self> {
        Self::from_f64(value)
    }
}

/// Floating point scalar, required by the cone construction.
pub trait Real: Scalar + Float {}

impl Real for f32 {}
impl Real for f64 {}

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "f64";

    fn default_tolerance() -> Self {
        1e-9
    }

    fn parse_token(token: &str) -> Option<Self> {
        token.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn lp_sum(parts: &[Self], p: f64) -> Option<Self> {
        Some(parts.iter().map(|v| v.powf(p)).sum::<f64>().powf(p.recip()))
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    const NAME: &'static str = "f32";

    fn default_tolerance() -> Self {
        1e-5
    }

    fn parse_token(token: &str) -> Option<Self> {
        token.parse::<f32>().ok().filter(|v| v.is_finite())
    }

    fn lp_sum(parts: &[Self], p: f64) -> Option<Self> {
        let p = p as f32;
        Some(parts.iter().map(|v| v.powf(p)).sum::<f32>().powf(p.recip()))
    }
}

impl Scalar for i64 {
    const EXACT: bool = true;
    const NAME: &'static str = "int";

    fn default_tolerance() -> Self {
        0
    }

    fn parse_token(token: &str) -> Option<Self> {
        token.parse::<i64>().ok()
    }

    fn tolerance_from_f64(value: f64) -> Option<Self> {
        (value >= 0.0).then(|| value.floor() as i64)
    }
}

impl Scalar for Rational64 {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn default_tolerance() -> Self {
        Rational64::from_integer(0)
    }

    fn parse_token(token: &str) -> Option<Self> {
        token.parse::<Rational64>().ok()
    }
}

/// Larger of two scalars.
pub fn max<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Smaller of two scalars.
pub fn min<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// `|a - b|` without requiring a signed trait.
pub fn abs_diff<T: Scalar>(a: T, b: T) -> T {
    if a < b {
        b - a
    } else {
        a - b
    }
}

/// `a <= b` up to an absolute tolerance.
pub fn le_tol<T: Scalar>(a: T, b: T, tol: T) -> bool {
    a <= b + tol
}

/// Total order for sorting; incomparable values (NaN) sort as equal.
pub fn cmp<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// A scalar extended by `+∞`.
///
/// Used wherever a quantity is unbounded on finite data, e.g. the Lebesgue
/// number of a cover containing the whole space. The infinite case is kept
/// distinct from any float so that reports can print it explicitly.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Extended<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn min(self, other: Self) -> Self {
        match (self, other) {
            (Extended::Infinite, o) => o,
            (s, Extended::Infinite) => s,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(min(a, b)),
        }
    }

    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (Extended::Infinite, _) | (_, Extended::Infinite) => Extended::Infinite,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(max(a, b)),
        }
    }

    /// `self >= bound` up to tolerance.
    pub fn ge_tol(self, bound: T, tol: T) -> bool {
        match self {
            Extended::Infinite => true,
            Extended::Finite(v) => le_tol(bound, v, tol),
        }
    }
}

impl<T: Display> Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}
