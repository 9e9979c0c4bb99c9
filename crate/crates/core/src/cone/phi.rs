use crate::scalar::Real;

use super::{ConeError, RhoFunction};

/// Absolute tolerance on the minimizing height in the line search.
pub const SEARCH_TOLERANCE: f64 = 1e-9;

/// `φ_t(r)` and a height `s >= t` attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiValue<T> {
    pub value: T,
    pub height: T,
}

fn check_inputs<T: Real>(t: T, r: T) -> Result<(), ConeError> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(ConeError::Negative("t", t.to_f64().unwrap_or(f64::NAN)));
    }
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(ConeError::Negative("r", r.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Minimizes `f` on `[a, b]` by golden-section search; returns `(s, f(s))`.
fn golden<T: Real>(mut a: T, mut b: T, f: impl Fn(T) -> T) -> (T, T) {
    let tol = T::from_f64(SEARCH_TOLERANCE).unwrap();
    let inv_phi = T::from_f64((5f64.sqrt() - 1.0) / 2.0).unwrap();
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..400 {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `φ_t(r) = inf_{s >= t} 2(s - t) + r / max(ρ(s), 1)`.
///
/// Only `s <= t + r / (2 max(ρ(t), 1))` can beat `s = t`, since past that
/// point the `2(s - t)` term alone exceeds the value at `s = t`. The
/// interval is split at the breakpoints of `max(ρ, 1)`; each piece is
/// searched by golden section, and the piece ends are evaluated exactly.
/// Pieces whose lower bound `2(a - t) + r / max(ρ(b), 1)` cannot beat the
/// best value so far are skipped.
pub fn phi<T: Real>(rho: &RhoFunction<T>, t: T, r: T) -> Result<PhiValue<T>, ConeError> {
    check_inputs(t, r)?;
    if r == T::zero() {
        return Ok(PhiValue {
            value: T::zero(),
            height: t,
        });
    }
    let two = T::one() + T::one();
    let objective = |s: T| two * (s - t) + r / rho.floor_one(s);
    let hi = t + r / (two * rho.floor_one(t));
    let mut knots = vec![t];
    knots.extend(rho.breakpoints(t, hi));
    if hi > t {
        knots.push(hi);
    }
    let mut best = PhiValue {
        value: objective(t),
        height: t,
    };
    for &k in &knots[1..] {
        let v = objective(k);
        if v < best.value {
            best = PhiValue {
                value: v,
                height: k,
            };
        }
    }
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let lower = two * (a - t) + r / rho.floor_one(b);
        if lower >= best.value {
            continue;
        }
        let (s, v) = golden(a, b, objective);
        if v < best.value {
            best = PhiValue {
                value: v,
                height: s,
            };
        }
    }
    Ok(best)
}

/// Closed form of `φ_t(r)` for `ρ(s) = e^s`: `e^{-t} r` when `r < 2e^t`,
/// else `2(ln(r/2) - t) + 2`.
pub fn phi_closed_exp<T: Real>(t: T, r: T) -> Result<T, ConeError> {
    check_inputs(t, r)?;
    let two = T::one() + T::one();
    Ok(if r < two * t.exp() {
        (-t).exp() * r
    } else {
        two * ((r / two).ln() - t) + two
    })
}

/// Height attaining the closed form: `t` on the linear branch, else `ln(r/2)`.
pub fn phi_closed_exp_height<T: Real>(t: T, r: T) -> T {
    let two = T::one() + T::one();
    if r < two * t.exp() {
        t
    } else {
        (r / two).ln()
    }
}
