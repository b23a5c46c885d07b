//! Contact slopes of opposite sign: one arc through a horizontal extremum.
//!
//! The shooting parameter is the shifted height `u_m` of the extremum at (x_m, u_m), negative for
//! an interior maximum and positive for an interior minimum. The same construction covers the
//! same-sign configurations in which one contact slope is exactly zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ContactConfig, FluidParams, RegimeTag};
use crate::options::SolveOptions;
use crate::profile::{locate_vertex, Arc, Piece, Profile, Shape};
use crate::quadrature::{Kernel, QuadSettings};
use crate::roots::{bisect, sign_changes};

/// Offsets of the contacts from the extremum: x1 = x_m − r1 and x2 = x_m + r2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactData {
    pub u1: f64,
    pub u2: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Signed pieces of the enclosed area.
///
/// `v1` and `v2` are the areas between each half of the profile and the vertical through the
/// extremum, `v3` and `v4` the wall triangles, `v5` the rectangle x_m (u1 − u2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeBreakdown {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
    pub v5: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case1State {
    pub u_m: f64,
    pub x_m: f64,
    pub y0: f64,
    pub p0: f64,
    pub x1: f64,
    pub u1: f64,
    pub x2: f64,
    pub u2: f64,
    pub r1: f64,
    pub r2: f64,
    pub volume: VolumeBreakdown,
}

/// −1 when the profile has a maximum, +1 when it has a minimum.
pub fn orientation(config: &ContactConfig) -> Result<f64> {
    let (p1, p2) = (config.psi1, config.psi2);
    match config.regime {
        RegimeTag::OppositeMax => Ok(-1.0),
        RegimeTag::OppositeMin => Ok(1.0),
        RegimeTag::SameSign if p1 == 0.0 && p2 == 0.0 => {
            Err(Error::Domain("both contact slopes vanish: the surface is flat".into()))
        }
        RegimeTag::SameSign if p1 >= 0.0 && p2 <= 0.0 => Ok(-1.0),
        RegimeTag::SameSign if p1 <= 0.0 && p2 >= 0.0 => Ok(1.0),
        RegimeTag::SameSign => Err(Error::Domain(format!(
            "slopes ({p1}, {p2}) have the same strict sign; no horizontal extremum exists"
        ))),
    }
}

fn arc_for(u_m: f64, config: &ContactConfig, params: &FluidParams) -> Result<Arc> {
    let s = orientation(config)?;
    if !(u_m.is_finite() && u_m * s > 0.0) {
        let want = if s < 0.0 { "negative" } else { "positive" };
        return Err(Error::Domain(format!("u_m must be {want} for this configuration, got {u_m}")));
    }
    Ok(Arc::new(0.0, u_m.abs(), s > 0.0, 0.0, params.sigma, params.g))
}

pub fn contact_data(u_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<ContactData> {
    let arc = arc_for(u_m, config, params)?;
    Ok(ContactData {
        u1: arc.y(config.psi1),
        u2: arc.y(config.psi2),
        r1: -arc.dx(config.psi1, quad)?,
        r2: arc.dx(config.psi2, quad)?,
    })
}

pub fn apex_x(u_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<f64> {
    let c = contact_data(u_m, config, params, quad)?;
    Ok(locate_vertex(c.r1, c.r2, c.u1, c.u2, params.theta1, params.theta2)?.x_m)
}

/// Pressure constant from the right contact: P₀ = g (x2 tan θ₂ − u2).
pub fn pressure(x2: f64, u2: f64, theta2: f64, g: f64) -> f64 {
    g * (x2 * theta2.tan() - u2)
}

/// Pressure constant from the left contact: P₀ = g ((−x1) tan θ₁ − u1).
pub fn left_wall_pressure(x1: f64, u1: f64, theta1: f64, g: f64) -> f64 {
    g * (-x1 * theta1.tan() - u1)
}

/// Pressure from whichever wall is further from vertical.
pub fn wall_pressure(x1: f64, u1: f64, x2: f64, u2: f64, params: &FluidParams) -> f64 {
    if params.theta2.cos().abs() >= params.theta1.cos().abs() {
        pressure(x2, u2, params.theta2, params.g)
    } else {
        left_wall_pressure(x1, u1, params.theta1, params.g)
    }
}

pub fn state_at(u_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<Case1State> {
    let arc = arc_for(u_m, config, params)?;
    let c = contact_data(u_m, config, params, quad)?;
    let vertex = locate_vertex(c.r1, c.r2, c.u1, c.u2, params.theta1, params.theta2)?;
    let x_m = vertex.x_m;
    let y0 = vertex.y0;
    let (x1, x2) = (x_m - c.r1, x_m + c.r2);
    let (h1, h2) = (c.u1 - y0, c.u2 - y0);
    let v1 = arc.sweep(config.psi1, quad)?;
    let v2 = -arc.sweep(config.psi2, quad)?;
    let v3 = -0.5 * h1 * x1;
    let v4 = 0.5 * h2 * x2;
    let v5 = x_m * (c.u1 - c.u2);
    let volume = VolumeBreakdown { v1, v2, v3, v4, v5, total: v1 + v2 + v3 + v4 + v5 };
    Ok(Case1State {
        u_m,
        x_m,
        y0,
        p0: wall_pressure(x1, c.u1, x2, c.u2, params),
        x1,
        u1: c.u1,
        x2,
        u2: c.u2,
        r1: c.r1,
        r2: c.r2,
        volume,
    })
}

pub fn volume(u_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<VolumeBreakdown> {
    Ok(state_at(u_m, config, params, quad)?.volume)
}

impl Case1State {
    pub fn profile(&self, config: &ContactConfig, params: &FluidParams) -> Profile {
        let arc = Arc::new(0.0, self.u_m.abs(), self.u_m > 0.0, self.x_m, params.sigma, params.g);
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

/// Every state of the family matching the prescribed volume.
#[derive(Debug, Clone, PartialEq)]
pub struct Case1Roots {
    /// Ordered by increasing extremum depth |u_m|.
    pub states: Vec<Case1State>,
    pub principal: usize,
    /// True when monotonicity of the volume in u_m is known and plain bisection was used.
    pub monotone: bool,
    /// Bisection steps summed over all roots.
    pub iterations: usize,
}

/// Volume as a function of the extremum depth d = |u_m|.
struct DepthFamily<'a> {
    sign: f64,
    config: &'a ContactConfig,
    params: &'a FluidParams,
    quad: QuadSettings,
}

impl DepthFamily<'_> {
    fn volume(&self, d: f64) -> Result<f64> {
        Ok(volume(self.sign * d, self.config, self.params, self.quad)?.total)
    }

    fn state(&self, d: f64) -> Result<Case1State> {
        state_at(self.sign * d, self.config, self.params, self.quad)
    }
}

/// Depth interval [small, big] with V(small) > target > V(big).
fn bracket(family: &DepthFamily, target: f64, seed: f64) -> Result<(f64, f64)> {
    let mut small = seed;
    while family.volume(small)? <= target {
        small *= 0.1;
        if small < 1e-8 * (1.0 - 1e-9) {
            return Err(Error::BracketFailure(format!(
                "volume {target} exceeds the family's reach at depth {small:e}"
            )));
        }
    }
    let mut big = (2.0 * small).max(1.0);
    while family.volume(big)? >= target {
        big *= 2.0;
        if big > 1e8 {
            return Err(Error::BracketFailure(format!("volume stays above {target} up to depth {big:e}")));
        }
    }
    Ok((small, big))
}

/// Shooting on u_m for the prescribed volume.
///
/// With an interior maximum and ⟦γ⟧ < 0 the volume is monotone in u_m and a single bisection
/// suffices. Otherwise a log-spaced pre-scan over the bracket locates every sign change and each
/// is refined separately.
pub fn shoot(params: &FluidParams, config: &ContactConfig, opts: &SolveOptions) -> Result<Case1Roots> {
    let target = params.volume;
    if target <= 0.0 {
        return Err(Error::Domain("shooting needs a positive volume".into()));
    }
    let sign = orientation(config)?;
    let family = DepthFamily { sign, config, params, quad: opts.quad };
    let (small, big) = bracket(&family, target, opts.bracket_seed)?;
    let f_tol = opts.volume_tolerance(target);
    let residual = |d: f64| Ok(family.volume(d)? - target);
    let monotone = sign < 0.0 && params.gamma_jump < 0.0;
    let mut iterations = 0;
    let depths = if monotone {
        let root = bisect(residual, small, big, f_tol, opts.root_tol)?;
        iterations = root.iterations;
        vec![root.x]
    } else {
        let n = opts.prescan.max(2);
        let grid: Vec<f64> = (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                small * (big / small).powf(s)
            })
            .collect();
        let values = opts.execution.map(&grid, |&d| family.volume(d).map(|v| v - target));
        let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
        let mut found = Vec::new();
        for i in sign_changes(&values) {
            let root = bisect(residual, grid[i], grid[i + 1], f_tol, opts.root_tol)?;
            iterations += root.iterations;
            found.push(root.x);
        }
        if found.is_empty() {
            return Err(Error::ScanFailure(format!(
                "bracket [{small:e}, {big:e}] showed no sign change on {n} samples"
            )));
        }
        found
    };
    let states = depths.into_iter().map(|d| family.state(d)).collect::<Result<Vec<_>>>()?;
    Ok(Case1Roots { states, principal: 0, monotone, iterations })
}

/// Shooting for an interior minimum. The family is not known to be monotone, so every root is
/// reported; callers are expected to gate the result on its residuals.
pub fn solve_opposite_min(params: &FluidParams, config: &ContactConfig, opts: &SolveOptions) -> Result<Case1Roots> {
    if orientation(config)? < 0.0 {
        return Err(Error::Domain("configuration has an interior maximum, not a minimum".into()));
    }
    shoot(params, config, opts)
}

/// ∫ sin φ / D dφ from the extremum to each contact; a cheap identity used by the tests.
pub fn height_check(u_m: f64, config: &ContactConfig, params: &FluidParams, quad: QuadSettings) -> Result<(f64, f64)> {
    let arc = arc_for(u_m, config, params)?;
    let r = arc.radical;
    Ok((
        arc.sign() * arc.scale * r.integral_from_anchor(Kernel::Sin, config.psi1, quad)?,
        arc.sign() * arc.scale * r.integral_from_anchor(Kernel::Sin, config.psi2, quad)?,
    ))
}
