//! Scalar root finding and minimisation used by the shooting solvers.

use crate::error::{Error, Result};

pub const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection for `f(x) = 0` on a bracket where `f(lo)` and `f(hi)` have opposite signs.
///
/// Stops once |f| ≤ `f_tol` or the bracket is narrower than `x_tol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, f_tol: f64, x_tol: f64) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Root { x: lo, residual: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, residual: 0.0, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure(format!(
            "no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})"
        )));
    }
    let mut best = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for it in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.abs() < best.1.abs() {
            best = (mid, fm);
        }
        if fm.abs() <= f_tol {
            return Ok(Root { x: mid, residual: fm, iterations: it });
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= x_tol {
            if best.1.abs() <= f_tol {
                return Ok(Root { x: best.0, residual: best.1, iterations: it });
            }
            return Err(Error::NoConvergence {
                iterations: it,
                detail: format!("bracket collapsed at x = {} with residual {:e}", best.0, best.1),
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_BISECTIONS,
        detail: format!("best x = {} with residual {:e}", best.0, best.1),
    })
}

/// Indices `i` such that `ys[i]` and `ys[i + 1]` bracket a root.
///
/// An exact zero at a sample is reported once, through the interval that ends at it.
pub fn sign_changes(ys: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..ys.len().saturating_sub(1) {
        let (a, b) = (ys[i], ys[i + 1]);
        if (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0) || (a == 0.0 && i == 0) {
            out.push(i);
        }
    }
    out
}

/// Golden-section search for a minimum of a unimodal function on [a, b].
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while (b - a).abs() > x_tol && iterations < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}
