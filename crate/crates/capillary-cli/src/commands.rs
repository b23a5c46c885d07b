use std::io::Write;
use std::path::Path;

use capillary_wedge::case_same::BranchThresholds;
use capillary_wedge::curve::{self, CurveSample, ResidualReport, ShiftedCurve};
use capillary_wedge::model::derive_contact_config;
use capillary_wedge::solver::{self, Branch};
use capillary_wedge::sweep::{self, Axis, SweepRow};
use capillary_wedge::{ContactConfig, FluidParams, RegimeTag, SteadyState};
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::format::{g17, to_json};
use crate::CliError;

pub const SCHEMA: &str = "capillary-steady/1";

/// Largest distance allowed between a stored curve and its recomputation.
const CURVE_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Serialize, Deserialize)]
pub struct ShootParam {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Serialize)]
struct StateDoc<'a> {
    branch: Branch,
    shoot_param: Option<ShootParam>,
    mirrored: bool,
    reduced_confidence: bool,
    accepted: bool,
    #[serde(rename = "P0")]
    p0: f64,
    volume: f64,
    contacts: [[f64; 2]; 2],
    residuals: &'a ResidualReport,
    diagnostics: &'a [String],
    curve: &'a [CurveSample],
}

#[derive(Debug, Serialize)]
struct SolveDoc<'a> {
    schema: &'static str,
    params: FluidParams,
    regime: RegimeTag,
    contact: ContactConfig,
    principal: usize,
    thresholds: Option<BranchThresholds>,
    solutions: Vec<StateDoc<'a>>,
}

fn state_doc(s: &SteadyState) -> StateDoc<'_> {
    StateDoc {
        branch: s.branch,
        shoot_param: s.branch.shoot_param().map(|(name, value)| ShootParam { name: name.into(), value }),
        mirrored: s.mirrored,
        reduced_confidence: s.reduced_confidence,
        accepted: s.accepted(),
        p0: s.pressure,
        volume: s.volume,
        contacts: s.contacts,
        residuals: &s.residuals,
        diagnostics: &s.diagnostics,
        curve: &s.curve.samples,
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| CliError::Input(format!("cannot write output: {e}")))
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    to_json(value).map_err(|e| CliError::Numerical(format!("serialisation failed: {e}")))
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Numerical(format!("csv output failed: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Numerical(format!("csv output failed: {e}")))
}

pub fn solve(run: &RunConfig, polar: bool, state: Option<usize>) -> Result<(), CliError> {
    let sol = capillary_wedge::solve(&run.params, &run.solve_options())?;
    let bytes = match run.format {
        Format::Json => json(&SolveDoc {
            schema: SCHEMA,
            params: sol.params,
            regime: sol.config.regime,
            contact: sol.config,
            principal: sol.principal,
            thresholds: sol.thresholds,
            solutions: sol.states.iter().map(state_doc).collect(),
        })?,
        Format::Csv => {
            let index = state.unwrap_or(sol.principal);
            let s = sol.states.get(index).ok_or_else(|| {
                CliError::Input(format!("state {index} requested but only {} solutions exist", sol.states.len()))
            })?;
            if sol.states.len() > 1 && state.is_none() {
                eprintln!("{} solutions found; writing the principal one (select with --state)", sol.states.len());
            }
            if polar {
                let rows = s.polar.samples.iter().map(|p| vec![g17(p.theta), g17(p.rho), g17(p.x), g17(p.y)]);
                csv_table(&["theta", "rho", "x", "y"], rows)?
            } else {
                let rows = s.curve.samples.iter().map(|c| vec![g17(c.psi), g17(c.x), g17(c.y)]);
                csv_table(&["psi", "x", "y"], rows)?
            }
        }
    };
    emit(run.out.as_deref(), &bytes)?;
    let rejected: Vec<String> = sol
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.accepted())
        .map(|(i, s)| format!("solution {i}: {}", s.residuals.failures().join("; ")))
        .collect();
    if rejected.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(rejected.join("\n")))
    }
}

#[derive(Debug, Serialize)]
struct SweepDoc<'a> {
    schema: &'static str,
    params: FluidParams,
    regime: RegimeTag,
    axis: &'static str,
    monotone: bool,
    rows: &'a [SweepRow],
}

pub fn sweep(run: &RunConfig) -> Result<(), CliError> {
    let spec = run.sweep.as_ref().ok_or_else(|| CliError::Input("sweep needs --axis, --from and --to".into()))?;
    let axis = Axis::parse(&spec.axis)?;
    let points = sweep::axis_points(spec.from, spec.to, spec.count, spec.log)?;
    let config = derive_contact_config(&run.params)?;
    let rows = sweep::sweep(&run.params, axis, &points, &run.solve_options())?;
    let monotone = rows.last().is_some_and(|r| r.monotone);
    let bytes = match run.format {
        Format::Json => json(&SweepDoc { schema: SCHEMA, params: run.params, regime: config.regime, axis: axis.name(), monotone, rows: &rows })?,
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(g17).unwrap_or_default();
            let table = rows.iter().map(|r| {
                vec![
                    r.index.to_string(),
                    g17(r.value),
                    opt(r.volume),
                    opt(r.pressure),
                    r.monotone.to_string(),
                    r.error.clone().unwrap_or_default(),
                ]
            });
            csv_table(&["index", axis.name(), "volume", "P0", "monotone", "error"], table)?
        }
    };
    emit(run.out.as_deref(), &bytes)?;
    if let Some(bad) = rows.iter().find(|r| r.error.is_some()) {
        eprintln!("point {} ({}): {}", bad.index, g17(bad.value), bad.error.as_deref().unwrap_or_default());
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct StoredState {
    branch: Branch,
    mirrored: bool,
    curve: Vec<CurveSample>,
}

#[derive(Debug, Deserialize)]
struct StoredDoc {
    schema: String,
    params: FluidParams,
    solutions: Vec<StoredState>,
}

#[derive(Debug, Serialize)]
struct CheckDoc {
    index: usize,
    branch: Branch,
    curve_deviation: f64,
    residuals: Option<ResidualReport>,
    passes: bool,
    failures: Vec<String>,
}

#[derive(Debug, Serialize)]
struct ValidateDoc<'a> {
    schema: &'static str,
    params: FluidParams,
    valid: bool,
    solutions: &'a [CheckDoc],
}

pub fn read_stored(path: &Path) -> Result<(FluidParams, StoredDocStates), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let doc: StoredDoc =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{} is not a solution file: {e}", path.display())))?;
    if doc.schema != SCHEMA {
        return Err(CliError::Input(format!("unsupported schema {:?}, expected {SCHEMA:?}", doc.schema)));
    }
    Ok((doc.params, StoredDocStates(doc.solutions)))
}

pub struct StoredDocStates(Vec<StoredState>);

fn check_state(index: usize, s: &StoredState, params: &FluidParams, run: &RunConfig) -> Result<CheckDoc, CliError> {
    let opts = run.solve_options();
    let frame = if s.mirrored { params.mirrored() } else { *params };
    let config = derive_contact_config(&frame)?;
    let (profile, _, _) = solver::branch_profile(&frame, &config, s.branch, &opts)?;
    let stored = ShiftedCurve { samples: s.curve.clone() };
    let stored_frame = if s.mirrored { curve::reflect(&stored) } else { stored };
    let fresh = curve::to_physical(&curve::reconstruct(&profile, stored_frame.samples.len(), opts.quad)?, profile.pressure(), frame.g);
    let deviation = if fresh.samples.len() == stored_frame.samples.len() {
        fresh.samples.iter().zip(&stored_frame.samples).map(|(a, b)| (a.x - b.x).hypot(a.y - b.y)).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let mut failures = Vec::new();
    let residuals = if stored_frame.samples.is_empty() {
        failures.push("stored curve has no samples".into());
        None
    } else {
        let r = curve::residuals(&profile, &frame, &stored_frame, opts.quad)?;
        failures.extend(r.failures());
        Some(r)
    };
    if !(deviation <= CURVE_MATCH_TOL * frame.scale().max(1.0)) {
        failures.push(format!("stored curve departs from the recomputed profile by {deviation:e}"));
    }
    Ok(CheckDoc { index, branch: s.branch, curve_deviation: deviation, residuals, passes: failures.is_empty(), failures })
}

pub fn validate(run: &RunConfig, stored: &StoredDocStates) -> Result<(), CliError> {
    let checks = stored.0.iter().enumerate().map(|(i, s)| check_state(i, s, &run.params, run)).collect::<Result<Vec<_>, _>>()?;
    let valid = !checks.is_empty() && checks.iter().all(|c| c.passes);
    let bytes = match run.format {
        Format::Json => json(&ValidateDoc { schema: SCHEMA, params: run.params, valid, solutions: &checks })?,
        Format::Csv => {
            let opt = |r: &Option<ResidualReport>, f: fn(&ResidualReport) -> f64| r.as_ref().map(|r| g17(f(r))).unwrap_or_default();
            let rows = checks.iter().map(|c| {
                vec![
                    c.index.to_string(),
                    c.branch.name().to_string(),
                    opt(&c.residuals, |r| r.ode_residual),
                    opt(&c.residuals, |r| r.bc_residual),
                    opt(&c.residuals, |r| r.area_residual),
                    opt(&c.residuals, |r| r.wall_residual),
                    c.residuals.as_ref().is_some_and(|r| r.polar_monotone).to_string(),
                    g17(c.curve_deviation),
                    c.passes.to_string(),
                ]
            });
            csv_table(&["index", "branch", "ode", "bc", "area", "wall", "polar_monotone", "curve_deviation", "passes"], rows)?
        }
    };
    emit(run.out.as_deref(), &bytes)?;
    if valid {
        Ok(())
    } else if checks.is_empty() {
        Err(CliError::Validation("the file holds no solutions".into()))
    } else {
        let msgs: Vec<String> = checks.iter().filter(|c| !c.passes).map(|c| format!("solution {}: {}", c.index, c.failures.join("; "))).collect();
        Err(CliError::Validation(msgs.join("\n")))
    }
}

#[derive(Debug, Serialize)]
struct ThresholdsDoc {
    schema: &'static str,
    params: FluidParams,
    regime: RegimeTag,
    /// Thresholds were computed in the reflected wedge.
    mirrored: bool,
    #[serde(rename = "V_m")]
    v_m: f64,
    #[serde(rename = "V_1")]
    v_1: f64,
    overlap: bool,
    detail: BranchThresholds,
}

pub fn thresholds(run: &RunConfig) -> Result<(), CliError> {
    let config = derive_contact_config(&run.params)?;
    if config.regime != RegimeTag::SameSign {
        return Err(CliError::Input(format!(
            "thresholds exist only for same-sign contact slopes; this configuration is {}",
            serde_json::to_string(&config.regime).unwrap_or_default().trim_matches('"')
        )));
    }
    let (t, mirrored) = solver::branch_thresholds(&run.params, &run.solve_options())?;
    let bytes = match run.format {
        Format::Json => json(&ThresholdsDoc {
            schema: SCHEMA,
            params: run.params,
            regime: config.regime,
            mirrored,
            v_m: t.v_m,
            v_1: t.v_1,
            overlap: t.overlap,
            detail: t,
        })?,
        Format::Csv => csv_table(
            &["V_m", "V_1", "overlap", "psi_m_star", "u_star", "seam"],
            [vec![g17(t.v_m), g17(t.v_1), t.overlap.to_string(), g17(t.psi_m_star), g17(t.u_star), g17(t.seam)]],
        )?,
    };
    emit(run.out.as_deref(), &bytes)
}
