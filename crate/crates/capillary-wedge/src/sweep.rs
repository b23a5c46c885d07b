//! Volume of a solution family tabulated along its shooting parameter.

use serde::{Deserialize, Serialize};

use crate::case_opposite;
use crate::case_same;
use crate::error::{Error, Result};
use crate::model::{derive_contact_config, FluidParams, RegimeTag};
use crate::options::SolveOptions;
use crate::solver::solve_frame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Extremum height of the opposite-sign family.
    UM,
    /// Maximal slope of the same-sign interior branch.
    PsiM,
    /// Anchor-contact height of the same-sign boundary branch.
    U,
}

impl Axis {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "u_m" | "um" => Ok(Axis::UM),
            "psi_m" | "psim" => Ok(Axis::PsiM),
            "u1" | "u2" | "u" => Ok(Axis::U),
            _ => Err(Error::InvalidParams(format!("unknown sweep axis {name:?}; expected u_m, psi_m or u1"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::UM => "u_m",
            Axis::PsiM => "psi_m",
            Axis::U => "u",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub volume: Option<f64>,
    pub pressure: Option<f64>,
    pub error: Option<String>,
    /// Volumes up to this row are strictly monotone.
    pub monotone: bool,
}

/// Volume and pressure of the family member at `value`, in the frame the family is solved in.
pub fn family_point(params: &FluidParams, axis: Axis, value: f64, opts: &SolveOptions) -> Result<(f64, f64)> {
    let config = derive_contact_config(params)?;
    let (fp, fc, _) = solve_frame(params, &config)?;
    let same = fc.regime == RegimeTag::SameSign && fc.psi1 < 0.0 && fc.psi2 < 0.0;
    match axis {
        Axis::UM if !same => {
            let s = case_opposite::state_at(value, &fc, &fp, opts.quad)?;
            Ok((s.volume.total, s.p0))
        }
        Axis::PsiM if same => case_same::interior_volume(value, &fc, &fp, opts.quad),
        Axis::U if same => {
            let s = case_same::boundary_state(value, &fc, &fp, opts.quad)?;
            Ok((s.volume, s.p0))
        }
        _ => Err(Error::Domain(format!("axis {} does not parametrise the {:?} family", axis.name(), fc.regime))),
    }
}

/// Evaluates every axis point; rows keep axis order whatever the execution policy.
pub fn sweep(params: &FluidParams, axis: Axis, values: &[f64], opts: &SolveOptions) -> Result<Vec<SweepRow>> {
    derive_contact_config(params)?;
    let points = opts.execution.map(values, |&v| family_point(params, axis, v, opts));
    let mut rows = Vec::with_capacity(values.len());
    let mut direction = 0.0;
    let mut monotone = true;
    let mut last: Option<f64> = None;
    for (index, (&value, point)) in values.iter().zip(points).enumerate() {
        let (volume, pressure, error) = match point {
            Ok((v, p)) => (Some(v), Some(p), None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        match (last, volume) {
            (Some(a), Some(b)) => {
                let step = (b - a).signum();
                if b == a || (direction != 0.0 && step != direction) {
                    monotone = false;
                }
                if direction == 0.0 {
                    direction = step;
                }
            }
            (_, None) => monotone = false,
            _ => {}
        }
        last = volume.or(last);
        rows.push(SweepRow { index, value, volume, pressure, error, monotone });
    }
    Ok(rows)
}

/// `n` points from `lo` to `hi`, log-spaced when both ends share a sign and `log` is set.
pub fn axis_points(lo: f64, hi: f64, n: usize, log: bool) -> Result<Vec<f64>> {
    if n < 2 || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParams(format!("an axis needs finite ends and at least 2 points, got n = {n}")));
    }
    if log {
        if lo * hi <= 0.0 {
            return Err(Error::InvalidParams("log spacing needs both ends nonzero with one sign".into()));
        }
        let (a, b) = (lo.abs().ln(), hi.abs().ln());
        let s = lo.signum();
        let mut xs: Vec<f64> = (0..n).map(|i| s * (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
        xs[0] = lo;
        xs[n - 1] = hi;
        return Ok(xs);
    }
    Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apex_sweep_is_monotone_for_negative_jump() {
        let p = FluidParams::new(1.0, 1.0, -0.5, 0.9, 0.6, 1.0);
        let xs = axis_points(-10.0, -1e-2, 32, true).unwrap();
        let rows = sweep(&p, Axis::UM, &xs, &SolveOptions::default()).unwrap();
        assert_eq!(rows.len(), 32);
        assert!(rows.iter().all(|r| r.monotone && r.volume.is_some()));
        assert!(rows.iter().enumerate().all(|(i, r)| r.index == i && r.value == xs[i]));
    }

    #[test]
    fn wrong_axis_is_reported_per_row() {
        let p = FluidParams::new(1.0, 1.0, -0.5, 0.9, 0.6, 1.0);
        let rows = sweep(&p, Axis::PsiM, &[-0.1, -0.2], &SolveOptions::default()).unwrap();
        assert!(rows.iter().all(|r| r.error.is_some() && !r.monotone));
    }

    #[test]
    fn out_of_range_points_break_monotonicity() {
        let p = FluidParams::new(1.0, 1.0, 0.9, 1.2, 0.4, 1.0);
        let rows = sweep(&p, Axis::U, &[2.0, 1.0, -0.5], &SolveOptions::default()).unwrap();
        assert!(rows[1].monotone);
        assert!(!rows[2].monotone && rows[2].error.is_some());
    }

    #[test]
    fn axis_parsing_and_spacing() {
        assert_eq!(Axis::parse("u1").unwrap(), Axis::U);
        assert!(Axis::parse("theta").is_err());
        let xs = axis_points(1e-3, 1e3, 7, true).unwrap();
        assert!((xs[3] - 1.0).abs() < 1e-12);
        assert_eq!((xs[0], xs[6]), (1e-3, 1e3));
        assert!(axis_points(-1.0, 1.0, 3, true).is_err());
    }
}
