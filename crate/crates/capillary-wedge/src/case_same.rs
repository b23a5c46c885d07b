//! Contact slopes of the same strict sign, written for ψ₁, ψ₂ < 0.
//!
//! Two families of profiles meet the walls with these slopes:
//!
//! * the *interior* branch, two arcs joined at a point of zero shifted height where the slope
//!   reaches its maximum ψ_m ∈ [max(ψ₁, ψ₂), 0);
//! * the *boundary* branch, a single arc whose steepest point is the contact with the larger
//!   slope, parametrised by the shifted height of that contact.
//!
//! At ψ_m = max(ψ₁, ψ₂) and zero contact height the two branches coincide.

use serde::{Deserialize, Serialize};

use crate::case_opposite::{wall_pressure, VolumeBreakdown};
use crate::error::{Error, Result};
use crate::model::{ContactConfig, FluidParams, Side};
use crate::options::SolveOptions;
use crate::profile::{locate_vertex, Arc, Piece, Profile, Shape};
use crate::quadrature::QuadSettings;
use crate::roots::{bisect, golden_min, sign_changes};

/// Largest λ of the interior scan ψ_m = ψ_hi·10^(−λ) used for the threshold search.
pub const INTERIOR_LAMBDA_MAX: f64 = 6.0;

fn require_negative(config: &ContactConfig) -> Result<f64> {
    if !(config.psi1 < 0.0 && config.psi2 < 0.0) {
        return Err(Error::Domain(format!(
            "same-sign branches need both slopes negative, got ({}, {})",
            config.psi1, config.psi2
        )));
    }
    Ok(config.max_psi())
}

/// Contacts of the interior branch, relative to the junction at x_m = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorContacts {
    pub x1: f64,
    pub u1: f64,
    pub x2: f64,
    pub u2: f64,
    pub r1: f64,
    pub r2: f64,
}

fn interior_arcs(psi_m: f64, config: &ContactConfig, params: &FluidParams, x_m: f64) -> Result<(Arc, Arc)> {
    let hi = require_negative(config)?;
    if !(psi_m >= hi && psi_m < 0.0) {
        return Err(Error::Domain(format!("psi_m must lie in [{hi}, 0), got {psi_m}")));
    }
    Ok((
        Arc::new(psi_m, 0.0, true, x_m, params.sigma, params.g),
        Arc::new(psi_m, 0.0, false, x_m, params.sigma, params.g),
    ))
}

pub fn interior_contacts(psi_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<InteriorContacts> {
    let (left, right) = interior_arcs(psi_m, config, params, 0.0)?;
    let r1 = -left.dx(config.psi1, quad)?;
    let r2 = right.dx(config.psi2, quad)?;
    Ok(InteriorContacts { x1: -r1, u1: left.y(config.psi1), x2: r2, u2: right.y(config.psi2), r1, r2 })
}

pub fn interior_apex_x(psi_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<f64> {
    let c = interior_contacts(psi_m, config, params, quad)?;
    Ok(locate_vertex(c.r1, c.r2, c.u1, c.u2, params.theta1, params.theta2)?.x_m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case2InteriorState {
    pub psi_m: f64,
    pub x_m: f64,
    pub y0: f64,
    pub p0: f64,
    pub x1: f64,
    pub u1: f64,
    pub x2: f64,
    pub u2: f64,
    pub volume: VolumeBreakdown,
}

pub fn interior_state(psi_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<Case2InteriorState> {
    let c = interior_contacts(psi_m, config, params, quad)?;
    let vertex = locate_vertex(c.r1, c.r2, c.u1, c.u2, params.theta1, params.theta2)?;
    let (x_m, y0) = (vertex.x_m, vertex.y0);
    let (x1, x2) = (x_m - c.r1, x_m + c.r2);
    let scale = params.scale();
    let sm = psi_m.sin();
    let v1 = -c.r1 * c.u1 - scale * (config.psi1.sin() - sm);
    let v2 = -(c.r2 * c.u2 - scale * (config.psi2.sin() - sm));
    let v3 = -0.5 * (c.u1 - y0) * x1;
    let v4 = 0.5 * (c.u2 - y0) * x2;
    let v5 = x_m * (c.u1 - c.u2);
    Ok(Case2InteriorState {
        psi_m,
        x_m,
        y0,
        p0: wall_pressure(x1, c.u1, x2, c.u2, params),
        x1,
        u1: c.u1,
        x2,
        u2: c.u2,
        volume: VolumeBreakdown { v1, v2, v3, v4, v5, total: v1 + v2 + v3 + v4 + v5 },
    })
}

/// Enclosed volume and pressure constant of the interior branch at ψ_m.
pub fn interior_volume(psi_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<(f64, f64)> {
    let s = interior_state(psi_m, config, params, quad)?;
    Ok((s.volume.total, s.p0))
}

/// The two half-profile areas of the interior branch computed by nested quadrature.
pub fn interior_sweeps(psi_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<(f64, f64)> {
    let (left, right) = interior_arcs(psi_m, config, params, 0.0)?;
    Ok((left.sweep(config.psi1, quad)?, -right.sweep(config.psi2, quad)?))
}

impl Case2InteriorState {
    pub fn profile(&self, config: &ContactConfig, params: &FluidParams) -> Profile {
        let left = Arc::new(self.psi_m, 0.0, true, self.x_m, params.sigma, params.g);
        let right = Arc::new(self.psi_m, 0.0, false, self.x_m, params.sigma, params.g);
        Profile {
            shape: Shape::Arcs(vec![
                Piece { arc: left, from: config.psi1, to: self.psi_m },
                Piece { arc: right, from: self.psi_m, to: config.psi2 },
            ]),
            y0: self.y0,
            x1: self.x1,
            u1: self.u1,
            x2: self.x2,
            u2: self.u2,
            psi1: config.psi1,
            psi2: config.psi2,
            sigma: params.sigma,
            g: params.g,
        }
    }
}

/// The contact carrying the steepest point of a boundary-branch profile.
pub fn boundary_anchor(config: &ContactConfig) -> Side {
    if config.psi1 >= config.psi2 {
        Side::Left
    } else {
        Side::Right
    }
}

/// Contacts of the boundary branch, with the anchor contact at shifted height `u`.
///
/// `u ≤ 0` when the left contact is the anchor and `u ≥ 0` when the right one is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryContacts {
    pub anchor: Side,
    pub u1: f64,
    pub u2: f64,
    /// x2 − x1.
    pub width: f64,
}

fn boundary_arc(u: f64, config: &ContactConfig, params: &FluidParams, x_anchor: f64) -> Result<(Side, Arc)> {
    require_negative(config)?;
    let side = boundary_anchor(config);
    match side {
        Side::Left if u <= 0.0 => Ok((side, Arc::new(config.psi1, -u, false, x_anchor, params.sigma, params.g))),
        Side::Right if u >= 0.0 => Ok((side, Arc::new(config.psi2, u, true, x_anchor, params.sigma, params.g))),
        Side::Left => Err(Error::Domain(format!("left-anchored boundary branch needs u1 <= 0, got {u}"))),
        Side::Right => Err(Error::Domain(format!("right-anchored boundary branch needs u2 >= 0, got {u}"))),
    }
}

pub fn boundary_contacts(u: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<BoundaryContacts> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("anchor height must be finite, got {u}")));
    }
    let (anchor, arc) = boundary_arc(u, config, params, 0.0)?;
    Ok(match anchor {
        Side::Left => BoundaryContacts { anchor, u1: u, u2: arc.y(config.psi2), width: arc.dx(config.psi2, quad)? },
        Side::Right => BoundaryContacts { anchor, u1: arc.y(config.psi1), u2: u, width: -arc.dx(config.psi1, quad)? },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case2BoundaryState {
    pub anchor: Side,
    /// Shifted height of the anchor contact.
    pub u: f64,
    pub y0: f64,
    pub p0: f64,
    pub x1: f64,
    pub u1: f64,
    pub x2: f64,
    pub u2: f64,
    /// Area above the lower contact.
    pub v_upper: f64,
    /// Triangle below the lower contact.
    pub v_lower: f64,
    pub volume: f64,
}

pub fn boundary_state(u: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<Case2BoundaryState> {
    let c = boundary_contacts(u, config, params, quad)?;
    let vertex = locate_vertex(0.0, c.width, c.u1, c.u2, params.theta1, params.theta2)?;
    let (x1, y0) = (vertex.x_m, vertex.y0);
    let x2 = x1 + c.width;
    let (_, arc) = boundary_arc(u, config, params, 0.0)?;
    let swept = match c.anchor {
        Side::Left => -arc.sweep(config.psi2, quad)?,
        Side::Right => arc.sweep(config.psi1, quad)? + c.width * (c.u1 - c.u2),
    };
    let cot = |t: f64| t.cos() / t.sin();
    let rise = c.u1 - c.u2;
    let v_upper = swept - 0.5 * rise * rise * cot(params.theta1);
    let h = c.u2 - y0;
    let v_lower = 0.5 * h * h * (cot(params.theta1) + cot(params.theta2));
    Ok(Case2BoundaryState {
        anchor: c.anchor,
        u,
        y0,
        p0: wall_pressure(x1, c.u1, x2, c.u2, params),
        x1,
        u1: c.u1,
        x2,
        u2: c.u2,
        v_upper,
        v_lower,
        volume: v_upper + v_lower,
    })
}

pub fn boundary_volume(u: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<f64> {
    Ok(boundary_state(u, config, params, quad)?.volume)
}

impl Case2BoundaryState {
    pub fn profile(&self, config: &ContactConfig, params: &FluidParams) -> Profile {
        let arc = match self.anchor {
            Side::Left => Arc::new(config.psi1, -self.u, false, self.x1, params.sigma, params.g),
            Side::Right => Arc::new(config.psi2, self.u, true, self.x2, params.sigma, params.g),
        };
        Profile {
            shape: Shape::Arcs(vec![Piece { arc, from: config.psi1, to: config.psi2 }]),
            y0: self.y0,
            x1: self.x1,
            u1: self.u1,
            x2: self.x2,
            u2: self.u2,
            psi1: config.psi1,
            psi2: config.psi2,
            sigma: params.sigma,
            g: params.g,
        }
    }
}

/// Signed anchor height from the depth d ≥ 0 below or above the zero line.
fn anchor_height(config: &ContactConfig, d: f64) -> f64 {
    match boundary_anchor(config) {
        Side::Left => -d,
        Side::Right => d,
    }
}

fn psi_m_of(config: &ContactConfig, lambda: f64) -> f64 {
    config.max_psi() * 10f64.powf(-lambda)
}

/// Volume ranges of the two branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchThresholds {
    /// Smallest volume reached by the interior branch.
    pub v_m: f64,
    pub psi_m_star: f64,
    /// Largest volume reached by the boundary branch.
    pub v_1: f64,
    /// Anchor height at which `v_1` is attained.
    pub u_star: f64,
    /// Volume of the state shared by both branches.
    pub seam: f64,
    /// Whether some volumes admit a profile on each branch.
    pub overlap: bool,
}

fn scan<F>(opts: &SolveOptions, grid: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    opts.execution.map(grid, |&x| f(x)).into_iter().collect()
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Minimum of `f` over a sampled grid, refined by golden section around the best sample.
fn refine_min<F>(opts: &SolveOptions, grid: &[f64], values: &[f64], f: F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let (i, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::ScanFailure("empty scan".into()))?;
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (x, fx) = golden_min(&f, lo, hi, opts.golden_tol)?;
    Ok(if values[i] <= fx { (grid[i], values[i]) } else { (x, fx) })
}

/// Scans both branches for the extreme volumes they reach.
pub fn thresholds(config: &ContactConfig, params: &FluidParams, opts: &SolveOptions) -> Result<BranchThresholds> {
    require_negative(config)?;
    let quad = opts.quad;
    let n = opts.branch_scan;
    let v_int = |lambda: f64| Ok(interior_volume(psi_m_of(config, lambda), config, params, quad)?.0);
    let lambdas = uniform(0.0, INTERIOR_LAMBDA_MAX, n);
    let values = scan(opts, &lambdas, v_int)?;
    let (lambda_star, v_m) = refine_min(opts, &lambdas, &values, v_int)?;

    let v_b = |d: f64| boundary_volume(anchor_height(config, d), config, params, quad);
    let mut reach = 1.0;
    while v_b(reach)? > v_m / 10.0 {
        reach *= 2.0;
        if reach > 1e8 {
            return Err(Error::ScanFailure("boundary volume does not decay with the anchor height".into()));
        }
    }
    let depths = uniform(0.0, reach, n);
    let neg: Vec<f64> = scan(opts, &depths, v_b)?.into_iter().map(|v| -v).collect();
    let (d_star, neg_v1) = refine_min(opts, &depths, &neg, |d| Ok(-v_b(d)?))?;
    let v_1 = -neg_v1;
    let seam = values[0];
    let slack = 1e-9 * v_m.abs().max(1.0);
    if v_1 < v_m - slack {
        return Err(Error::ScanFailure(format!(
            "boundary maximum {v_1} fell below interior minimum {v_m}; the branches failed to meet"
        )));
    }
    Ok(BranchThresholds {
        v_m,
        psi_m_star: psi_m_of(config, lambda_star),
        v_1,
        u_star: anchor_height(config, d_star),
        seam,
        overlap: v_1 > v_m + slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Case2State {
    Interior(Case2InteriorState),
    Boundary(Case2BoundaryState),
}

impl Case2State {
    pub fn volume(&self) -> f64 {
        match self {
            Case2State::Interior(s) => s.volume.total,
            Case2State::Boundary(s) => s.volume,
        }
    }

    pub fn p0(&self) -> f64 {
        match self {
            Case2State::Interior(s) => s.p0,
            Case2State::Boundary(s) => s.p0,
        }
    }

    pub fn profile(&self, config: &ContactConfig, params: &FluidParams) -> Profile {
        match self {
            Case2State::Interior(s) => s.profile(config, params),
            Case2State::Boundary(s) => s.profile(config, params),
        }
    }

    fn left_contact(&self) -> (f64, f64) {
        match self {
            Case2State::Interior(s) => (s.x1, s.u1 - s.y0),
            Case2State::Boundary(s) => (s.x1, s.u1 - s.y0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case2Roots {
    /// Interior-branch states first, each branch ordered along its scan.
    pub states: Vec<Case2State>,
    pub principal: usize,
}

fn roots_on<F>(opts: &SolveOptions, grid: &[f64], target: f64, f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    let values: Vec<f64> = scan(opts, grid, |x| Ok(f(x)? - target))?;
    let f_tol = opts.volume_tolerance(target);
    let mut out = Vec::new();
    for i in sign_changes(&values) {
        out.push(bisect(|x| Ok(f(x)? - target), grid[i], grid[i + 1], f_tol, opts.root_tol)?.x);
    }
    Ok(out)
}

/// All interior- and boundary-branch profiles enclosing the prescribed volume.
pub fn shoot(params: &FluidParams, config: &ContactConfig, opts: &SolveOptions) -> Result<Case2Roots> {
    require_negative(config)?;
    let target = params.volume;
    if target <= 0.0 {
        return Err(Error::Domain("shooting needs a positive volume".into()));
    }
    let quad = opts.quad;
    let n = opts.branch_scan;

    let v_int = |lambda: f64| Ok(interior_volume(psi_m_of(config, lambda), config, params, quad)?.0);
    let mut lambda_max = 2.0;
    while v_int(lambda_max)? <= target {
        lambda_max += 2.0;
        if lambda_max > 250.0 {
            return Err(Error::ScanFailure(format!("interior branch does not reach volume {target}")));
        }
    }
    let mut states = Vec::new();
    for lambda in roots_on(opts, &uniform(0.0, lambda_max, n), target, v_int)? {
        states.push(Case2State::Interior(interior_state(psi_m_of(config, lambda), config, params, quad)?));
    }

    let v_b = |d: f64| boundary_volume(anchor_height(config, d), config, params, quad);
    let mut reach = 1.0;
    while v_b(reach)? >= target {
        reach *= 2.0;
        if reach > 1e8 {
            return Err(Error::ScanFailure("boundary volume does not decay with the anchor height".into()));
        }
    }
    let scale = params.scale();
    for d in roots_on(opts, &uniform(0.0, reach, n), target, v_b)? {
        let s = Case2State::Boundary(boundary_state(anchor_height(config, d), config, params, quad)?);
        let (x, h) = s.left_contact();
        let duplicate = states.iter().any(|o| {
            let (xo, ho) = o.left_contact();
            (x - xo).abs() + (h - ho).abs() < 1e-7 * scale.sqrt().max(1.0)
        });
        if !duplicate {
            states.push(s);
        }
    }
    if states.is_empty() {
        return Err(Error::NoSolution(format!("no same-sign profile encloses volume {target}")));
    }
    Ok(Case2Roots { states, principal: 0 })
}
