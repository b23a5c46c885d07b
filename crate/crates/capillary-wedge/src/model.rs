//! Physical parameters, contact angles and regime classification.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on |⟦γ⟧/σ| before it is rejected; values inside it are clamped to ±1.
pub const JUMP_CLAMP: f64 = 1e-12;

/// Physical inputs of the wedge problem.
///
/// Walls leave the vertex at polar angles `π − theta1` (left) and `theta2` (right).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidParams {
    pub g: f64,
    pub sigma: f64,
    pub gamma_jump: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub volume: f64,
}

impl FluidParams {
    pub fn new(g: f64, sigma: f64, gamma_jump: f64, theta1: f64, theta2: f64, volume: f64) -> Self {
        Self { g, sigma, gamma_jump, theta1, theta2, volume }
    }

    /// Checks every parameter constraint, naming the first one violated.
    pub fn validate(&self) -> Result<()> {
        let all = [self.g, self.sigma, self.gamma_jump, self.theta1, self.theta2, self.volume];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidParams(format!("g must be positive, got {}", self.g)));
        }
        if self.sigma <= 0.0 {
            return Err(Error::InvalidParams(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.volume < 0.0 {
            return Err(Error::InvalidParams(format!("volume must be non-negative, got {}", self.volume)));
        }
        if !(self.theta1 > 0.0 && self.theta1 < PI) {
            return Err(Error::InvalidParams(format!("theta1 must lie in (0, pi), got {}", self.theta1)));
        }
        if !(self.theta2 > 0.0 && self.theta2 < PI) {
            return Err(Error::InvalidParams(format!("theta2 must lie in (0, pi), got {}", self.theta2)));
        }
        if self.theta1 + self.theta2 >= PI {
            return Err(Error::InvalidParams(format!(
                "theta1 + theta2 must be below pi, got {}",
                self.theta1 + self.theta2
            )));
        }
        if self.jump_ratio_raw().abs() > 1.0 + JUMP_CLAMP {
            return Err(Error::InvalidParams(format!(
                "|gamma_jump / sigma| must not exceed 1, got {}",
                self.jump_ratio_raw()
            )));
        }
        Ok(())
    }

    fn jump_ratio_raw(&self) -> f64 {
        self.gamma_jump / self.sigma
    }

    /// ⟦γ⟧/σ, clamped to [−1, 1].
    pub fn jump_ratio(&self) -> f64 {
        self.jump_ratio_raw().clamp(-1.0, 1.0)
    }

    /// 2σ/g, the squared capillary length scale that appears in every radical.
    pub fn k(&self) -> f64 {
        2.0 * self.sigma / self.g
    }

    /// σ/g.
    pub fn scale(&self) -> f64 {
        self.sigma / self.g
    }

    /// Same fluid with the walls exchanged (the reflection x → −x).
    pub fn mirrored(&self) -> Self {
        Self { theta1: self.theta2, theta2: self.theta1, ..*self }
    }

    pub fn with_volume(&self, volume: f64) -> Self {
        Self { volume, ..*self }
    }

    /// sin ψ₁ written directly in terms of the wall angle and ⟦γ⟧/σ.
    pub fn young_sin_psi1(&self) -> f64 {
        let j = self.jump_ratio();
        -j * self.theta1.sin() + (1.0 - j * j).sqrt() * self.theta1.cos()
    }

    /// sin ψ₂ written directly in terms of the wall angle and ⟦γ⟧/σ.
    pub fn young_sin_psi2(&self) -> f64 {
        let j = self.jump_ratio();
        j * self.theta2.sin() - (1.0 - j * j).sqrt() * self.theta2.cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

/// Which contact carries the larger slope angle in the same-sign regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dominant {
    Left,
    Right,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeTag {
    /// ψ₁ > 0 > ψ₂: the shifted profile has an interior maximum.
    OppositeMax,
    /// ψ₁ < 0 < ψ₂: the shifted profile has an interior minimum.
    OppositeMin,
    /// ψ₁·ψ₂ ≥ 0.
    SameSign,
}

/// Contact angle γ, contact slope angles ψ₁, ψ₂ and the resulting regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactConfig {
    pub gamma: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub regime: RegimeTag,
    /// Set only in the same-sign regime.
    pub dominant: Option<Dominant>,
}

impl ContactConfig {
    pub fn max_psi(&self) -> f64 {
        self.psi1.max(self.psi2)
    }
}

pub fn derive_contact_config(params: &FluidParams) -> Result<ContactConfig> {
    params.validate()?;
    let mut ratio = params.gamma_jump / params.sigma;
    if (ratio.abs() - 1.0).abs() <= JUMP_CLAMP {
        ratio = ratio.signum();
    }
    let gamma = (-ratio).asin();
    let psi1 = gamma + FRAC_PI_2 - params.theta1;
    let psi2 = -gamma - FRAC_PI_2 + params.theta2;
    let mut config = ContactConfig { gamma, psi1, psi2, regime: RegimeTag::SameSign, dominant: None };
    config.regime = classify_regime(&config);
    if config.regime == RegimeTag::SameSign {
        config.dominant = Some(if psi1 > psi2 {
            Dominant::Left
        } else if psi2 > psi1 {
            Dominant::Right
        } else {
            Dominant::Tie
        });
    }
    Ok(config)
}

pub fn classify_regime(config: &ContactConfig) -> RegimeTag {
    if config.psi1 > 0.0 && config.psi2 < 0.0 {
        RegimeTag::OppositeMax
    } else if config.psi1 < 0.0 && config.psi2 > 0.0 {
        RegimeTag::OppositeMin
    } else {
        RegimeTag::SameSign
    }
}

/// For θ₂ ≤ θ₁ ≤ π/2 in the same-sign regime, both slope angles must be negative and ⟦γ⟧ positive.
///
/// Returns `None` when the wall angles fall outside that window, where no such statement applies.
pub fn same_sign_consistency(params: &FluidParams, config: &ContactConfig) -> Option<bool> {
    let window = params.theta2 <= params.theta1 && params.theta1 <= FRAC_PI_2;
    if !window || config.regime != RegimeTag::SameSign {
        return None;
    }
    Some(params.gamma_jump > 0.0 && config.psi1 < 0.0 && config.psi2 < 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn params(gj: f64, t1: f64, t2: f64) -> FluidParams {
        FluidParams::new(1.0, 1.0, gj, t1, t2, 1.0)
    }

    #[test]
    fn neutral_jump_gives_right_angle_contacts() {
        let c = derive_contact_config(&params(0.0, FRAC_PI_3, FRAC_PI_6)).unwrap();
        assert_eq!(c.gamma, 0.0);
        assert!((c.psi1 - FRAC_PI_6).abs() < 1e-15);
        assert!((c.psi2 + FRAC_PI_3).abs() < 1e-15);
        assert_eq!(c.regime, RegimeTag::OppositeMax);
    }

    #[test]
    fn full_wetting_jump_saturates_gamma() {
        let c = derive_contact_config(&params(-1.0, FRAC_PI_4, FRAC_PI_4)).unwrap();
        assert!((c.gamma - FRAC_PI_2).abs() < 1e-15);
        assert!((c.psi1 - 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert!((c.psi2 + 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert_eq!(c.regime, RegimeTag::OppositeMax);
    }

    #[test]
    fn vertical_left_wall_same_sign_reference() {
        let c = derive_contact_config(&params(0.9, FRAC_PI_2, 0.2)).unwrap();
        assert!((c.gamma - -1.1197695149986342).abs() < 1e-14);
        assert!((c.psi1 - -1.1197695149986342).abs() < 1e-14);
        assert!((c.psi2 - -0.25102681179626235).abs() < 1e-14);
        assert_eq!(c.regime, RegimeTag::SameSign);
        assert_eq!(c.dominant, Some(Dominant::Right));
    }

    #[test]
    fn regime_sign_patterns() {
        let mk = |p1, p2| ContactConfig { gamma: 0.0, psi1: p1, psi2: p2, regime: RegimeTag::SameSign, dominant: None };
        assert_eq!(classify_regime(&mk(FRAC_PI_6, -FRAC_PI_3)), RegimeTag::OppositeMax);
        assert_eq!(classify_regime(&mk(-0.3, -0.2)), RegimeTag::SameSign);
        assert_eq!(classify_regime(&mk(-0.3, 0.2)), RegimeTag::OppositeMin);
        assert_eq!(classify_regime(&mk(0.0, -0.2)), RegimeTag::SameSign);
    }

    #[test]
    fn near_unit_ratio_is_clamped_and_beyond_rejected() {
        assert!(derive_contact_config(&params(1.0 + 5e-13, 1.0, 1.0)).is_ok());
        assert!(matches!(derive_contact_config(&params(1.0 + 1e-9, 1.0, 1.0)), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn invalid_inputs_name_the_constraint() {
        let bad = [
            params(0.0, 0.0, 0.5),
            params(0.0, 2.0, 1.5),
            FluidParams::new(-1.0, 1.0, 0.0, 1.0, 1.0, 1.0),
            FluidParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 1.0),
            FluidParams::new(1.0, 1.0, 0.0, 1.0, 1.0, -1.0),
        ];
        for p in bad {
            assert!(matches!(derive_contact_config(&p), Err(Error::InvalidParams(_))), "{p:?}");
        }
    }

    #[test]
    fn contact_window_consistency() {
        let p = params(0.9, 1.2, 0.4);
        let c = derive_contact_config(&p).unwrap();
        assert_eq!(same_sign_consistency(&p, &c), Some(true));
        let p = params(-0.5, 1.0, 0.5);
        let c = derive_contact_config(&p).unwrap();
        assert_eq!(same_sign_consistency(&p, &c), None);
    }
}
