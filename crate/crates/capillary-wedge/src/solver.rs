//! Regime dispatch and assembly of validated steady states.

use serde::{Deserialize, Serialize};

use crate::case_opposite::{self, VolumeBreakdown};
use crate::case_same::{self, BranchThresholds, Case2State};
use crate::curve::{self, PolarProfile, ResidualReport, ShiftedCurve};
use crate::error::{Error, Result};
use crate::model::{derive_contact_config, ContactConfig, FluidParams, RegimeTag, Side};
use crate::options::SolveOptions;
use crate::profile::{Profile, Shape};

/// Which family a state belongs to, with its shooting parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Branch {
    ApexMax { u_m: f64 },
    ApexMin { u_m: f64 },
    Interior { psi_m: f64 },
    Boundary { anchor: Side, u: f64 },
    Flat,
    Empty,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::ApexMax { .. } => "apex-max",
            Branch::ApexMin { .. } => "apex-min",
            Branch::Interior { .. } => "interior",
            Branch::Boundary { .. } => "boundary",
            Branch::Flat => "flat",
            Branch::Empty => "empty",
        }
    }

    pub fn shoot_param(&self) -> Option<(&'static str, f64)> {
        match *self {
            Branch::ApexMax { u_m } | Branch::ApexMin { u_m } => Some(("u_m", u_m)),
            Branch::Interior { psi_m } => Some(("psi_m", psi_m)),
            Branch::Boundary { anchor: Side::Left, u } => Some(("u1", u)),
            Branch::Boundary { anchor: Side::Right, u } => Some(("u2", u)),
            Branch::Flat | Branch::Empty => None,
        }
    }
}

/// A solved, sampled and checked steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyState {
    /// Shooting parameter, expressed in the frame the state was solved in.
    pub branch: Branch,
    /// Solved for the reflected wedge and reflected back.
    pub mirrored: bool,
    pub reduced_confidence: bool,
    pub pressure: f64,
    /// Volume of the state as computed by its branch.
    pub volume: f64,
    pub breakdown: Option<VolumeBreakdown>,
    /// Physical contact points (left, right).
    pub contacts: [[f64; 2]; 2],
    /// Physical-frame samples, left wall to right wall.
    pub curve: ShiftedCurve,
    pub polar: PolarProfile,
    pub residuals: ResidualReport,
    pub diagnostics: Vec<String>,
}

impl SteadyState {
    pub fn accepted(&self) -> bool {
        self.residuals.passes()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub params: FluidParams,
    pub config: ContactConfig,
    pub states: Vec<SteadyState>,
    pub principal: usize,
    pub thresholds: Option<BranchThresholds>,
}

impl Solution {
    pub fn principal_state(&self) -> &SteadyState {
        &self.states[self.principal]
    }
}

/// Parameters and contact data of the frame the solver works in, and whether it is reflected.
///
/// Same-sign configurations with both slopes positive are solved in the reflected wedge, where
/// both slopes are negative.
pub fn solve_frame(params: &FluidParams, config: &ContactConfig) -> Result<(FluidParams, ContactConfig, bool)> {
    if config.regime == RegimeTag::SameSign && config.psi1 > 0.0 && config.psi2 > 0.0 {
        let m = params.mirrored();
        Ok((m, derive_contact_config(&m)?, true))
    } else {
        Ok((*params, *config, false))
    }
}

fn cot(t: f64) -> f64 {
    t.cos() / t.sin()
}

fn flat_profile(params: &FluidParams, config: &ContactConfig) -> Profile {
    let h = (2.0 * params.volume / (cot(params.theta1) + cot(params.theta2))).sqrt();
    Profile {
        shape: Shape::Flat,
        y0: -h,
        x1: -h * cot(params.theta1),
        u1: 0.0,
        x2: h * cot(params.theta2),
        u2: 0.0,
        psi1: config.psi1,
        psi2: config.psi2,
        sigma: params.sigma,
        g: params.g,
    }
}

fn empty_profile(params: &FluidParams, config: &ContactConfig) -> Profile {
    Profile {
        shape: Shape::Empty,
        y0: 0.0,
        x1: 0.0,
        u1: 0.0,
        x2: 0.0,
        u2: 0.0,
        psi1: config.psi1,
        psi2: config.psi2,
        sigma: params.sigma,
        g: params.g,
    }
}

/// Rebuilds the analytic profile of a branch in the solve frame.
pub fn branch_profile(
    params: &FluidParams,
    config: &ContactConfig,
    branch: Branch,
    opts: &SolveOptions,
) -> Result<(Profile, f64, Option<VolumeBreakdown>)> {
    let quad = opts.quad;
    Ok(match branch {
        Branch::ApexMax { u_m } | Branch::ApexMin { u_m } => {
            let s = case_opposite::state_at(u_m, config, params, quad)?;
            (s.profile(config, params), s.volume.total, Some(s.volume))
        }
        Branch::Interior { psi_m } => {
            let s = case_same::interior_state(psi_m, config, params, quad)?;
            (s.profile(config, params), s.volume.total, Some(s.volume))
        }
        Branch::Boundary { u, .. } => {
            let s = case_same::boundary_state(u, config, params, quad)?;
            (s.profile(config, params), s.volume, None)
        }
        Branch::Flat => (flat_profile(params, config), params.volume, None),
        Branch::Empty => (empty_profile(params, config), 0.0, None),
    })
}

/// Samples and checks one branch state. `params` and `config` describe the original wedge.
pub fn assemble(
    params: &FluidParams,
    config: &ContactConfig,
    branch: Branch,
    mirrored: bool,
    reduced_confidence: bool,
    opts: &SolveOptions,
) -> Result<SteadyState> {
    let (fp, fc) = if mirrored {
        let m = params.mirrored();
        (m, derive_contact_config(&m)?)
    } else {
        (*params, *config)
    };
    let (profile, volume, breakdown) = branch_profile(&fp, &fc, branch, opts)?;
    let pressure = profile.pressure();
    let shifted = curve::reconstruct(&profile, opts.samples, opts.quad)?;
    let frame_physical = curve::to_physical(&shifted, pressure, fp.g);
    let residuals = curve::residuals(&profile, &fp, &frame_physical, opts.quad)?;
    let physical = if mirrored { curve::reflect(&frame_physical) } else { frame_physical };
    let polar = match profile.shape {
        Shape::Empty => PolarProfile { samples: Vec::new(), monotone: true, range_excess: 0.0 },
        _ => curve::to_polar(&physical, params.theta1, params.theta2)?,
    };
    let first = physical.samples[0];
    let last = physical.samples[physical.samples.len() - 1];

    let mut diagnostics = Vec::new();
    let green = profile.closed_form_area();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    if rel(volume, green) > 1e-5 {
        diagnostics.push(format!("branch volume {volume} disagrees with the contact-data area {green}"));
    }
    if residuals.area_residual > 1e-5 {
        diagnostics.push(format!(
            "polygon area disagrees with the target volume (relative {:e}); the polygon area is authoritative",
            residuals.area_residual
        ));
    }
    if let Shape::Arcs(_) = profile.shape {
        let pts: Vec<(f64, f64)> = physical.samples.iter().map(|s| (s.x, s.y)).collect();
        let mut poly = pts.clone();
        poly.push((0.0, 0.0));
        if curve::find_self_intersection(&poly).is_some() {
            diagnostics.push("sampled region boundary intersects itself".into());
        }
    }
    diagnostics.extend(residuals.failures());
    Ok(SteadyState {
        branch,
        mirrored,
        reduced_confidence,
        pressure,
        volume,
        breakdown,
        contacts: [[first.x, first.y], [last.x, last.y]],
        curve: physical,
        polar,
        residuals,
        diagnostics,
    })
}

/// Solves for every steady state enclosing `params.volume`.
pub fn solve(params: &FluidParams, opts: &SolveOptions) -> Result<Solution> {
    let config = derive_contact_config(params)?;
    let (fp, fc, mirrored) = solve_frame(params, &config)?;
    let mut thresholds = None;
    let mut reduced = false;

    let branches: Vec<Branch> = if params.volume == 0.0 {
        vec![Branch::Empty]
    } else if fc.psi1 == 0.0 && fc.psi2 == 0.0 {
        vec![Branch::Flat]
    } else if fc.psi1 < 0.0 && fc.psi2 < 0.0 {
        thresholds = Some(case_same::thresholds(&fc, &fp, opts)?);
        let roots = case_same::shoot(&fp, &fc, opts)?;
        roots
            .states
            .iter()
            .map(|s| match s {
                Case2State::Interior(i) => Branch::Interior { psi_m: i.psi_m },
                Case2State::Boundary(b) => Branch::Boundary { anchor: b.anchor, u: b.u },
            })
            .collect()
    } else {
        let orientation = case_opposite::orientation(&fc)?;
        let roots = if orientation > 0.0 {
            reduced = fc.regime == RegimeTag::OppositeMin;
            case_opposite::solve_opposite_min(&fp, &fc, opts)?
        } else {
            case_opposite::shoot(&fp, &fc, opts)?
        };
        roots
            .states
            .iter()
            .map(|s| if s.u_m < 0.0 { Branch::ApexMax { u_m: s.u_m } } else { Branch::ApexMin { u_m: s.u_m } })
            .collect()
    };

    let built = opts.execution.map(&branches, |&b| assemble(params, &config, b, mirrored, reduced, opts));
    let states = built.into_iter().collect::<Result<Vec<_>>>()?;
    if reduced {
        if let Some(bad) = states.iter().find(|s| !s.accepted()) {
            return Err(Error::ValidationFailure(format!(
                "interior-minimum profile failed its residual checks: {}",
                bad.residuals.failures().join("; ")
            )));
        }
    }
    Ok(Solution { params: *params, config, states, principal: 0, thresholds })
}

/// Branch thresholds of a same-sign configuration, in the frame with both slopes negative.
pub fn branch_thresholds(params: &FluidParams, opts: &SolveOptions) -> Result<(BranchThresholds, bool)> {
    let config = derive_contact_config(params)?;
    if config.regime != RegimeTag::SameSign {
        return Err(Error::Domain(format!("thresholds are defined for same-sign slopes, got {:?}", config.regime)));
    }
    let (fp, fc, mirrored) = solve_frame(params, &config)?;
    if !(fc.psi1 < 0.0 && fc.psi2 < 0.0) {
        return Err(Error::Domain("a contact slope is zero; only the extremum family exists".into()));
    }
    Ok((case_same::thresholds(&fc, &fp, opts)?, mirrored))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_volume_is_the_empty_state() {
        let p = FluidParams::new(1.0, 1.0, -0.3, 0.8, 0.6, 0.0);
        let sol = solve(&p, &SolveOptions::default()).unwrap();
        assert_eq!(sol.states.len(), 1);
        assert_eq!(sol.states[0].branch, Branch::Empty);
        assert!(sol.states[0].accepted());
    }

    #[test]
    fn right_angle_contacts_give_a_flat_surface() {
        let t = std::f64::consts::FRAC_PI_2 - 0.4;
        let p = FluidParams::new(1.0, 1.0, (0.4f64).sin(), t, t, 1.3);
        let config = derive_contact_config(&p).unwrap();
        assert!(config.psi1.abs() < 1e-15 && config.psi2.abs() < 1e-15);
        let sol = solve(&p, &SolveOptions::default()).unwrap();
        let st = sol.principal_state();
        assert_eq!(st.branch, Branch::Flat);
        assert!(st.residuals.area_residual < 1e-12);
        assert!(st.curve.samples.iter().all(|s| (s.y - st.curve.samples[0].y).abs() < 1e-15));
    }

    #[test]
    fn residuals_detect_a_perturbed_surface_tension() {
        let p = FluidParams::new(1.0, 1.0, -0.4, 0.9, 0.7, 1.0);
        let opts = SolveOptions::default();
        let st = solve(&p, &opts).unwrap().states.remove(0);
        assert!(st.accepted());
        let config = derive_contact_config(&p).unwrap();
        let (profile, _, _) = branch_profile(&p, &config, st.branch, &opts).unwrap();
        let off = FluidParams { sigma: p.sigma * (1.0 + 1e-3), ..p };
        let r = curve::residuals(&profile, &off, &st.curve, opts.quad).unwrap();
        assert!(r.ode_residual > 1e-4, "{}", r.ode_residual);
        assert!(!r.passes());
    }

    #[test]
    fn positive_slopes_are_solved_mirrored() {
        let p = FluidParams::new(1.0, 1.0, 0.9, 0.4, 1.2, 1.0);
        let config = derive_contact_config(&p).unwrap();
        assert!(config.psi1 > 0.0 && config.psi2 > 0.0);
        let sol = solve(&p, &SolveOptions::default()).unwrap();
        assert!(sol.states.iter().all(|s| s.mirrored && s.accepted()));
        let (_, mirrored) = branch_thresholds(&p, &SolveOptions::default()).unwrap();
        assert!(mirrored);
    }

    #[test]
    fn thresholds_reject_opposite_slopes() {
        let p = FluidParams::new(1.0, 1.0, -0.5, 0.8, 0.8, 1.0);
        assert!(matches!(branch_thresholds(&p, &SolveOptions::default()), Err(Error::Domain(_))));
    }
}
