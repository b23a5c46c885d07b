//! Run configuration: built-in defaults, then the JSON config file, then command-line flags.

use std::path::{Path, PathBuf};

use capillary_wedge::quadrature::QuadSettings;
use capillary_wedge::{FluidParams, SolveOptions};
use clap::ValueEnum;
use serde::Deserialize;

use crate::CliError;

pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Option<String>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub count: Option<usize>,
    pub log: Option<bool>,
}

/// Every setting is optional here; missing values fall back to the layer below.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub g: Option<f64>,
    pub sigma: Option<f64>,
    pub gamma_jump: Option<f64>,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub volume: Option<f64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub degrees: Option<bool>,
    pub sweep: Option<SweepSpec>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl Layer {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad config {}: {e}", path.display())))
    }

    /// `top` wins wherever it sets a value.
    pub fn overlay(mut self, top: &Layer) -> Self {
        overlay!(self, top, g, sigma, gamma_jump, theta1, theta2, volume, samples, tol, out, format, degrees);
        if let Some(t) = &top.sweep {
            let mut s = self.sweep.take().unwrap_or_default();
            overlay!(s, t, axis, from, to, count, log);
            self.sweep = Some(s);
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: String,
    pub from: f64,
    pub to: f64,
    pub count: usize,
    pub log: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: FluidParams,
    pub samples: usize,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub sweep: Option<Sweep>,
}

impl RunConfig {
    /// Resolves a merged layer. Angles are converted when `degrees` is set; `volume` may be
    /// omitted only when `need_volume` is false, in which case it is zero.
    pub fn resolve(layer: &Layer, need_volume: bool) -> Result<Self, CliError> {
        let missing = |name: &str| CliError::Input(format!("missing required parameter {name}"));
        let degrees = layer.degrees.unwrap_or(false);
        let angle = |v: f64| if degrees { v.to_radians() } else { v };
        let theta1 = angle(layer.theta1.ok_or_else(|| missing("theta1"))?);
        let theta2 = angle(layer.theta2.ok_or_else(|| missing("theta2"))?);
        let volume = match layer.volume {
            Some(v) => v,
            None if need_volume => return Err(missing("volume")),
            None => 0.0,
        };
        let params = FluidParams::new(
            layer.g.unwrap_or(1.0),
            layer.sigma.unwrap_or(1.0),
            layer.gamma_jump.unwrap_or(0.0),
            theta1,
            theta2,
            volume,
        );
        params.validate().map_err(|e| CliError::Input(e.to_string()))?;
        let samples = layer.samples.unwrap_or(SolveOptions::default().samples);
        if samples < MIN_SAMPLES {
            return Err(CliError::Input(format!("samples must be at least {MIN_SAMPLES}, got {samples}")));
        }
        if let Some(t) = layer.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Input(format!("tol must be positive, got {t}")));
            }
        }
        let sweep = match &layer.sweep {
            Some(s) if s.axis.is_some() || s.from.is_some() || s.to.is_some() || s.count.is_some() => Some(Sweep {
                axis: s.axis.clone().ok_or_else(|| missing("sweep axis"))?,
                from: s.from.ok_or_else(|| missing("sweep from"))?,
                to: s.to.ok_or_else(|| missing("sweep to"))?,
                count: s.count.unwrap_or(64),
                log: s.log.unwrap_or(false),
            }),
            _ => None,
        };
        Ok(Self { params, samples, tol: layer.tol, out: layer.out.clone(), format: layer.format.unwrap_or_default(), sweep })
    }

    pub fn solve_options(&self) -> SolveOptions {
        let mut opts = SolveOptions { samples: self.samples, ..SolveOptions::default() };
        if let Some(t) = self.tol {
            opts.quad = QuadSettings::with_tol(t);
        }
        opts
    }
}
