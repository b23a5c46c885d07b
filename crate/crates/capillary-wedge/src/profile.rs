//! Analytic description of a solution curve in the shifted frame.
//!
//! Along a steady profile parametrised by its slope angle ψ,
//! `dx/dψ = σ cos ψ / (g y)` and `dy/dψ = σ sin ψ / (g y)`, so that
//! `y(ψ)² = d² + (2σ/g)(cos a − cos ψ)` around any reference point of height ±d and slope `a`.
//! An [`Arc`] stores such a reference point; the case modules assemble arcs into a [`Profile`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{Kernel, QuadSettings, Radical};

/// One branch of y(ψ) = ±D(ψ) through the anchor point (x_anchor, ±d) of slope `anchor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub radical: Radical,
    /// y > 0 along the arc when set, y < 0 otherwise.
    pub upper: bool,
    pub x_anchor: f64,
    /// σ/g.
    pub scale: f64,
}

impl Arc {
    pub fn new(anchor: f64, depth: f64, upper: bool, x_anchor: f64, sigma: f64, g: f64) -> Self {
        Self { radical: Radical::new(anchor, depth, 2.0 * sigma / g), upper, x_anchor, scale: sigma / g }
    }

    pub fn sign(&self) -> f64 {
        if self.upper {
            1.0
        } else {
            -1.0
        }
    }

    pub fn anchor(&self) -> f64 {
        self.radical.anchor
    }

    pub fn y(&self, psi: f64) -> f64 {
        self.sign() * self.radical.value(psi)
    }

    /// x(ψ) − x_anchor.
    pub fn dx(&self, psi: f64, settings: QuadSettings) -> Result<f64> {
        Ok(self.scale * self.sign() * self.radical.integral_from_anchor(Kernel::Cos, psi, settings)?)
    }

    pub fn x(&self, psi: f64, settings: QuadSettings) -> Result<f64> {
        Ok(self.x_anchor + self.dx(psi, settings)?)
    }

    /// x(q) − x(p) from a single local integral.
    pub fn dx_between(&self, p: f64, q: f64, settings: QuadSettings) -> Result<f64> {
        Ok(self.scale * self.sign() * self.radical.integral_between(Kernel::Cos, p, q, settings)?)
    }

    /// y(q) − y(p) without cancellation.
    pub fn dy_between(&self, p: f64, q: f64) -> f64 {
        let (dp, dq) = (self.radical.value(p), self.radical.value(q));
        // D(q)² − D(p)² = k (cos p − cos q).
        let diff_sq = self.radical.k * 2.0 * (0.5 * (p + q)).sin() * (0.5 * (q - p)).sin();
        let sum = dp + dq;
        if sum == 0.0 {
            return 0.0;
        }
        self.sign() * diff_sq / sum
    }

    /// ∫ (x − x_anchor) dy along the arc from the anchor to ψ = b.
    pub fn sweep(&self, b: f64, settings: QuadSettings) -> Result<f64> {
        Ok(self.scale * self.scale * self.radical.nested_from_anchor(b, settings)?)
    }

    /// x at every requested angle, accumulated outward from the anchor by local integrals.
    pub fn xs(&self, psis: &[f64], settings: QuadSettings) -> Result<Vec<f64>> {
        let mut order: Vec<usize> = (0..psis.len()).collect();
        // Signed distance from the anchor in t keeps the two sides of a zero anchor apart.
        let key = |p: f64| {
            let t = self.radical.t_of(p);
            if self.anchor() == 0.0 && p < 0.0 {
                -t
            } else {
                t
            }
        };
        order.sort_by(|&i, &j| key(psis[i]).total_cmp(&key(psis[j])));
        let mut out = vec![0.0; psis.len()];
        let anchor = self.anchor();
        let (neg, pos): (Vec<usize>, Vec<usize>) = order.into_iter().partition(|&i| key(psis[i]) < 0.0);
        for (group, rev) in [(pos, false), (neg, true)] {
            let mut prev = anchor;
            let mut acc = 0.0;
            let iter: Box<dyn Iterator<Item = &usize>> = if rev { Box::new(group.iter().rev()) } else { Box::new(group.iter()) };
            for &i in iter {
                acc += self.dx_between(prev, psis[i], settings)?;
                prev = psis[i];
                out[i] = self.x_anchor + acc;
            }
        }
        Ok(out)
    }
}

/// A stretch of an arc with ψ running monotonically from `from` to `to`, traversed left to right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub arc: Arc,
    pub from: f64,
    pub to: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Arcs(Vec<Piece>),
    /// Horizontal surface at shifted height zero.
    Flat,
    /// No fluid.
    Empty,
}

/// A complete shifted-frame solution: the curve between the two contacts and the wall vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub shape: Shape,
    /// Height of the wall vertex in the shifted frame; the physical pressure is P₀ = −g·y0.
    pub y0: f64,
    pub x1: f64,
    pub u1: f64,
    pub x2: f64,
    pub u2: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub sigma: f64,
    pub g: f64,
}

impl Profile {
    pub fn pressure(&self) -> f64 {
        -self.g * self.y0
    }

    /// Enclosed area from the contact data alone.
    pub fn closed_form_area(&self) -> f64 {
        match self.shape {
            Shape::Empty => 0.0,
            _ => enclosed_area(self.x1, self.u1, self.x2, self.u2, self.y0, self.psi1, self.psi2, self.sigma / self.g),
        }
    }
}

/// Abscissa of the reference point and shifted height of the wall vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub x_m: f64,
    pub y0: f64,
}

/// Places the reference point so that both contacts lie on their walls.
///
/// The contacts are (x_m − r1, u1) on the left wall and (x_m + r2, u2) on the right wall, with the
/// walls meeting at (0, y0). The system is solved in sine/cosine form, which stays regular when
/// either wall is vertical.
pub fn locate_vertex(r1: f64, r2: f64, u1: f64, u2: f64, theta1: f64, theta2: f64) -> Result<Vertex> {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let det = (theta1 + theta2).sin();
    if det.abs() < 1e-12 {
        return Err(Error::DegenerateGeometry(format!(
            "walls are nearly parallel (sin(theta1 + theta2) = {det:e})"
        )));
    }
    let x_m = (r1 * s1 * c2 - r2 * c1 * s2 - (u1 - u2) * c1 * c2) / det;
    let y0 = (s1 * u2 * c2 + s2 * u1 * c1 - s1 * s2 * (r1 + r2)) / det;
    Ok(Vertex { x_m, y0 })
}

/// Area between the walls and a profile joining (x1, u1) to (x2, u2).
///
/// Along any steady profile y dx = (σ/g) d(sin ψ), so Green's theorem reduces the area to the
/// contact data: A = ½(x1 h1 − x2 h2) − (σ/g)(sin ψ1 − sin ψ2) + y0 (x1 − x2), with h = u − y0.
#[allow(clippy::too_many_arguments)]
pub fn enclosed_area(x1: f64, u1: f64, x2: f64, u2: f64, y0: f64, psi1: f64, psi2: f64, scale: f64) -> f64 {
    0.5 * (x1 * (u1 - y0) - x2 * (u2 - y0)) - scale * (psi1.sin() - psi2.sin()) + y0 * (x1 - x2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_reproduces_tangent_form() {
        let (t1, t2) = (0.9, 0.6);
        let (r1, r2, u1, u2) = (0.7, 1.3, -1.2, -1.9);
        let v = locate_vertex(r1, r2, u1, u2, t1, t2).unwrap();
        let tan_form = (r1 * t1.tan() - r2 * t2.tan() - (u1 - u2)) / (t1.tan() + t2.tan());
        assert!((v.x_m - tan_form).abs() < 1e-13);
        let x1 = v.x_m - r1;
        let x2 = v.x_m + r2;
        assert!((u1 - v.y0 + x1 * t1.tan()).abs() < 1e-13);
        assert!((u2 - v.y0 - x2 * t2.tan()).abs() < 1e-13);
    }

    #[test]
    fn vertical_left_wall_puts_reference_at_r1() {
        let v = locate_vertex(0.8, 0.3, -1.0, -1.4, std::f64::consts::FRAC_PI_2, 0.5).unwrap();
        assert!((v.x_m - 0.8).abs() < 1e-15);
    }

    #[test]
    fn parallel_walls_are_rejected() {
        assert!(matches!(locate_vertex(1.0, 1.0, 0.0, 0.0, 1.0, std::f64::consts::PI - 1.0), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn arc_first_integral_holds() {
        let arc = Arc::new(0.0, 0.8, false, 0.0, 1.3, 0.7);
        for psi in [-1.2, -0.3, 0.0, 0.4, 1.1] {
            let y = arc.y(psi);
            let lhs = 0.7 * y * y / 2.0 - 0.7 * 0.64 / 2.0;
            assert!((lhs - 1.3 * (1.0 - psi.cos())).abs() < 1e-14);
        }
    }

    #[test]
    fn cumulative_positions_match_direct_integrals() {
        let s = QuadSettings::default();
        let arc = Arc::new(0.0, 0.5, false, 0.25, 1.0, 1.0);
        let psis = [0.9, 0.3, -0.2, -1.0, 0.0];
        let xs = arc.xs(&psis, s).unwrap();
        for (p, x) in psis.iter().zip(xs) {
            assert!((arc.x(*p, s).unwrap() - x).abs() < 1e-12);
        }
        let apex = Arc::new(-0.4, 0.0, true, 0.0, 1.0, 1.0);
        let psis = [-0.5, -0.9, -1.3];
        let xs = apex.xs(&psis, s).unwrap();
        for (p, x) in psis.iter().zip(xs) {
            assert!((apex.x(*p, s).unwrap() - x).abs() < 1e-12);
        }
    }

    #[test]
    fn stable_height_difference() {
        let arc = Arc::new(-0.4, 0.0, false, 0.0, 1.0, 1.0);
        let (p, q) = (-0.9, -0.9 - 1e-7);
        let direct = arc.y(q) - arc.y(p);
        assert!((arc.dy_between(p, q) - direct).abs() < 1e-12);
    }
}
