//! Direct minimisation of the discretised energy in polar coordinates about the wall vertex.
//!
//! With ρ(θ) on θ ∈ [θ₂, π − θ₁],
//! `E(ρ) = (g/3)∫ρ³ sin θ dθ + σ∫sqrt(ρ² + ρ′²) dθ − ⟦γ⟧(ρ(θ₂) + ρ(π − θ₁))`
//! is minimised subject to `½∫ρ² dθ = V`. The length term is discretised on the cells between
//! nodes (midpoint ρ, one-sided ρ′); the other integrals use the trapezoid rule. The minimiser is
//! independent of the shooting construction and serves as a cross-check of it.

use std::f64::consts::PI;

use crate::curve::PolarSample;
use crate::error::{Error, Result};
use crate::model::FluidParams;

pub const MIN_NODES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub multiplier: f64,
}

impl PolarGrid {
    fn nodes(params: &FluidParams, n: usize) -> Result<Vec<f64>> {
        if n < MIN_NODES {
            return Err(Error::InvalidParams(format!("the polar grid needs at least {MIN_NODES} nodes, got {n}")));
        }
        let (a, b) = (params.theta2, PI - params.theta1);
        Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
    }

    /// Circular arc about the vertex, ρ ≡ R.
    pub fn constant(params: &FluidParams, n: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParams(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { theta: Self::nodes(params, n)?, rho: vec![radius; n], multiplier: 0.0 })
    }

    /// Circular arc about the vertex enclosing `params.volume`.
    pub fn constant_for_volume(params: &FluidParams, n: usize) -> Result<Self> {
        let span = PI - params.theta1 - params.theta2;
        Self::constant(params, n, (2.0 * params.volume / span).sqrt())
    }

    /// Linear interpolation of polar samples (any order) onto the uniform grid.
    pub fn from_samples(params: &FluidParams, n: usize, samples: &[PolarSample]) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.theta, s.rho)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.len() < 2 {
            return Err(Error::InvalidParams("need at least two samples".into()));
        }
        let theta = Self::nodes(params, n)?;
        let rho = theta
            .iter()
            .map(|&t| {
                let j = pts.partition_point(|p| p.0 <= t).clamp(1, pts.len() - 1);
                let (a, b) = (pts[j - 1], pts[j]);
                let s = if b.0 > a.0 { ((t - a.0) / (b.0 - a.0)).clamp(0.0, 1.0) } else { 0.0 };
                a.1 + s * (b.1 - a.1)
            })
            .collect();
        Ok(Self { theta, rho, multiplier: 0.0 })
    }

    pub fn spacing(&self) -> f64 {
        self.theta[1] - self.theta[0]
    }

    fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if i == 0 || i + 1 == self.theta.len() {
            0.5 * h
        } else {
            h
        }
    }

    /// Cartesian points ordered from the left wall to the right wall.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.theta.iter().zip(&self.rho).rev().map(|(&t, &r)| (r * t.cos(), r * t.sin())).collect()
    }
}

pub fn volume_of(grid: &PolarGrid) -> f64 {
    grid.rho.iter().enumerate().map(|(i, r)| 0.5 * grid.weight(i) * r * r).sum()
}

pub fn volume_gradient(grid: &PolarGrid) -> Vec<f64> {
    grid.rho.iter().enumerate().map(|(i, r)| grid.weight(i) * r).collect()
}

pub fn energy(grid: &PolarGrid, params: &FluidParams) -> f64 {
    let h = grid.spacing();
    let n = grid.rho.len();
    let rho = &grid.rho;
    let mut gravity = 0.0;
    for i in 0..n {
        gravity += grid.weight(i) * rho[i].powi(3) * grid.theta[i].sin();
    }
    let mut length = 0.0;
    for i in 0..n - 1 {
        let m = 0.5 * (rho[i] + rho[i + 1]);
        let s = (rho[i + 1] - rho[i]) / h;
        length += h * m.hypot(s);
    }
    params.g / 3.0 * gravity + params.sigma * length - params.gamma_jump * (rho[0] + rho[n - 1])
}

pub fn gradient(grid: &PolarGrid, params: &FluidParams) -> Vec<f64> {
    let h = grid.spacing();
    let n = grid.rho.len();
    let rho = &grid.rho;
    let mut out: Vec<f64> = (0..n).map(|i| params.g * grid.weight(i) * rho[i] * rho[i] * grid.theta[i].sin()).collect();
    for i in 0..n - 1 {
        let m = 0.5 * (rho[i] + rho[i + 1]);
        let s = (rho[i + 1] - rho[i]) / h;
        let l = m.hypot(s);
        out[i] += params.sigma * h * (0.5 * m - s / h) / l;
        out[i + 1] += params.sigma * h * (0.5 * m + s / h) / l;
    }
    out[0] -= params.gamma_jump;
    out[n - 1] -= params.gamma_jump;
    out
}

/// Tridiagonal Hessian of E − λ𝒱 as (lower, diagonal, upper).
fn lagrangian_hessian(grid: &PolarGrid, params: &FluidParams, lambda: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let h = grid.spacing();
    let n = grid.rho.len();
    let rho = &grid.rho;
    let mut diag: Vec<f64> = (0..n)
        .map(|i| grid.weight(i) * (2.0 * params.g * rho[i] * grid.theta[i].sin() - lambda))
        .collect();
    let mut off = vec![0.0; n - 1];
    for i in 0..n - 1 {
        let m = 0.5 * (rho[i] + rho[i + 1]);
        let s = (rho[i + 1] - rho[i]) / h;
        let l = m.hypot(s);
        // l = |A (ρᵢ, ρᵢ₊₁)| with rows (½, ½) and (−1/h, 1/h).
        let q = [[0.5, -1.0 / h], [0.5, 1.0 / h]];
        let v = [m, s];
        let mut hess = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let aa = q[a][0] * q[b][0] + q[a][1] * q[b][1];
                let av = q[a][0] * v[0] + q[a][1] * v[1];
                let bv = q[b][0] * v[0] + q[b][1] * v[1];
                hess[a][b] = params.sigma * h * (aa / l - av * bv / (l * l * l));
            }
        }
        diag[i] += hess[0][0];
        diag[i + 1] += hess[1][1];
        off[i] += hess[0][1];
    }
    (off.clone(), diag, off)
}

/// Thomas algorithm; `None` on a vanishing pivot.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if piv.abs() < 1e-300 {
        return None;
    }
    c[0] = if n > 1 { upper[0] / piv } else { 0.0 };
    d[0] = rhs[0] / piv;
    for i in 1..n {
        piv = diag[i] - lower[i - 1] * c[i - 1];
        if piv.abs() < 1e-300 || !piv.is_finite() {
            return None;
        }
        c[i] = if i + 1 < n { upper[i] / piv } else { 0.0 };
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / piv;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Some(x)
}

fn project(grid: &mut PolarGrid, volume: f64) {
    let scale = (volume / volume_of(grid)).sqrt();
    for r in &mut grid.rho {
        *r *= scale;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Bound on the constrained gradient, scaled by the node weights.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iterations: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimized {
    pub grid: PolarGrid,
    /// ⟨∇E, ∇𝒱⟩ / ⟨∇𝒱, ∇𝒱⟩ at the minimiser.
    pub multiplier: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub energy: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn constrained_residual(grid: &PolarGrid, params: &FluidParams) -> (Vec<f64>, f64, Vec<f64>, f64) {
    let ge = gradient(grid, params);
    let gv = volume_gradient(grid);
    let lambda = dot(&ge, &gv) / dot(&gv, &gv);
    let r: Vec<f64> = ge.iter().zip(&gv).map(|(e, v)| e - lambda * v).collect();
    let norm = r.iter().enumerate().map(|(i, x)| (x / grid.weight(i)).abs()).fold(0.0, f64::max);
    (r, lambda, gv, norm)
}

/// Minimises the energy on the volume constraint set.
///
/// Each step solves the Newton system of the Lagrangian restricted to the constraint tangent
/// (tridiagonal Hessian bordered by ∇𝒱), falls back to a scaled gradient step when that direction
/// does not descend, then rescales ρ onto the constraint and backtracks until the energy drops.
pub fn minimize(params: &FluidParams, init: PolarGrid, opts: MinimizeOptions) -> Result<Minimized> {
    if !(params.volume > 0.0) {
        return Err(Error::InvalidParams("the oracle needs a positive volume".into()));
    }
    if init.rho.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidParams("initial radii must be positive".into()));
    }
    let mut grid = init;
    project(&mut grid, params.volume);
    let mut e = energy(&grid, params);
    let mut iterations = 0;
    loop {
        let (r, lambda, gv, norm) = constrained_residual(&grid, params);
        grid.multiplier = lambda;
        if norm < opts.tol {
            return Ok(Minimized { multiplier: lambda, iterations, gradient_norm: norm, energy: e, grid });
        }
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                detail: format!("constrained gradient norm {norm:e}"),
            });
        }
        iterations += 1;
        let (lo, di, up) = lagrangian_hessian(&grid, params, lambda);
        let neg_r: Vec<f64> = r.iter().map(|x| -x).collect();
        let newton = solve_tridiagonal(&lo, &di, &up, &neg_r).zip(solve_tridiagonal(&lo, &di, &up, &gv)).map(|(a, b)| {
            let mu = -dot(&gv, &a) / dot(&gv, &b);
            a.iter().zip(&b).map(|(x, y)| x + mu * y).collect::<Vec<f64>>()
        });
        let gradient_step = || -> Vec<f64> {
            let scale = 1e-2 * params.volume / (grid.theta[grid.theta.len() - 1] - grid.theta[0]);
            r.iter().enumerate().map(|(i, x)| -scale * x / grid.weight(i)).collect()
        };
        let direction = match newton {
            Some(d) if d.iter().all(|x| x.is_finite()) && dot(&d, &r) < 0.0 => d,
            _ => gradient_step(),
        };
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial = grid.clone();
            let mut ok = true;
            for (t, d) in trial.rho.iter_mut().zip(&direction) {
                *t += alpha * d;
                ok &= *t > 0.0;
            }
            if ok {
                project(&mut trial, params.volume);
                let et = energy(&trial, params);
                if et <= e + 1e-14 * e.abs().max(1.0) {
                    grid = trial;
                    e = et;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iterations,
                detail: format!("line search stalled with constrained gradient norm {norm:e}"),
            });
        }
    }
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

fn directed(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter()
        .map(|&p| {
            if b.len() == 1 {
                return (p.0 - b[0].0).hypot(p.1 - b[0].1);
            }
            b.windows(2).map(|w| point_segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two polylines.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    directed(a, b).max(directed(b, a))
}
