use serde::{Deserialize, Serialize};

use crate::parallel::Execution;
use crate::quadrature::QuadSettings;

/// Numerical knobs shared by every solver path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub quad: QuadSettings,
    pub execution: Execution,
    /// Points per output curve.
    pub samples: usize,
    /// Samples of the shooting pre-scan in the opposite-sign regime.
    pub prescan: usize,
    /// Samples of each same-sign branch scan.
    pub branch_scan: usize,
    /// Initial offset of the shooting bracket from its singular end.
    pub bracket_seed: f64,
    /// Absolute tolerance on the shooting parameter.
    pub root_tol: f64,
    /// Tolerance of golden-section refinement.
    pub golden_tol: f64,
    /// Relative volume tolerance; the absolute floor is the same number.
    pub volume_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            quad: QuadSettings::default(),
            execution: Execution::default(),
            samples: 512,
            prescan: 256,
            branch_scan: 128,
            bracket_seed: 1e-3,
            root_tol: 1e-12,
            golden_tol: 1e-10,
            volume_tol: 1e-8,
        }
    }
}

impl SolveOptions {
    pub fn volume_tolerance(&self, volume: f64) -> f64 {
        self.volume_tol * volume.abs().max(1.0)
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }
}

/// Acceptance thresholds for a reconstructed state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ode: f64,
    pub bc: f64,
    pub area: f64,
    pub wall: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { ode: 1e-6, bc: 1e-8, area: 1e-6, wall: 1e-9 }
    }
}
