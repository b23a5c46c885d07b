//! Sampling of solution profiles, frame changes and residual checks.
//!
//! The shifted frame puts the pressure level at y = 0; the physical frame puts the wall vertex
//! at the origin, with v = y + P₀/g.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FluidParams;
use crate::options::Tolerances;
use crate::profile::{Arc, Piece, Profile, Shape};
use crate::quadrature::QuadSettings;

/// Samples per piece of the coarser dense reconstruction used for the area check.
pub const AREA_SAMPLES: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub psi: f64,
    pub x: f64,
    pub y: f64,
}

/// Samples ordered from the left contact to the right contact.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ShiftedCurve {
    pub samples: Vec<CurveSample>,
}

/// Slope angles along a piece, uniform in the signed distance t from the arc's anchor.
///
/// The profile is smooth in t even where y vanishes, so this spacing is regular in arc length.
fn piece_angles(piece: &Piece, n: usize) -> Vec<f64> {
    let r = piece.arc.radical;
    let a = r.anchor;
    let signed_t = |p: f64| {
        let t = r.t_of(p);
        if a == 0.0 && p < 0.0 {
            -t
        } else {
            t
        }
    };
    let (t0, t1) = (signed_t(piece.from), signed_t(piece.to));
    let sa = (0.5 * a).sin();
    let sgn = if a != 0.0 { a.signum() } else { 1.0 };
    let n = n.max(2);
    (0..n)
        .map(|i| {
            if i == 0 {
                return piece.from;
            }
            if i == n - 1 {
                return piece.to;
            }
            let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
            let (s, tt) = if a == 0.0 { (t.signum(), t.abs()) } else { (sgn, t) };
            let sh = s * (sa * sa + 0.5 * tt * tt).sqrt();
            2.0 * sh.clamp(-1.0, 1.0).asin()
        })
        .collect()
}

fn sample_piece(piece: &Piece, n: usize, quad: QuadSettings) -> Result<Vec<CurveSample>> {
    let psis = piece_angles(piece, n);
    let xs = piece.arc.xs(&psis, quad)?;
    Ok(psis.iter().zip(xs).map(|(&psi, x)| CurveSample { psi, x, y: piece.arc.y(psi) }).collect())
}

fn split_counts(pieces: &[Piece], n: usize) -> Vec<usize> {
    if pieces.len() == 1 {
        return vec![n];
    }
    let total: f64 = pieces.iter().map(|p| p.arc.radical.t_of(p.from) + p.arc.radical.t_of(p.to)).sum();
    let mut counts: Vec<usize> = pieces
        .iter()
        .map(|p| {
            let w = (p.arc.radical.t_of(p.from) + p.arc.radical.t_of(p.to)) / total.max(f64::MIN_POSITIVE);
            ((w * (n + pieces.len() - 1) as f64).round() as usize).max(8)
        })
        .collect();
    let sum: usize = counts.iter().sum::<usize>() + 1 - pieces.len();
    if sum != n {
        let widest = (0..counts.len()).max_by_key(|&i| counts[i]).unwrap_or(0);
        counts[widest] = (counts[widest] as isize + n as isize - sum as isize).max(8) as usize;
    }
    counts
}

/// Samples the profile with `n` points in total (junctions shared between pieces).
pub fn reconstruct(profile: &Profile, n: usize, quad: QuadSettings) -> Result<ShiftedCurve> {
    let n = n.max(2);
    let samples = match &profile.shape {
        Shape::Empty => vec![CurveSample { psi: 0.0, x: 0.0, y: profile.y0 }],
        Shape::Flat => (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                CurveSample { psi: 0.0, x: profile.x1 + (profile.x2 - profile.x1) * s, y: 0.0 }
            })
            .collect(),
        Shape::Arcs(pieces) => {
            let counts = split_counts(pieces, n);
            let mut out: Vec<CurveSample> = Vec::with_capacity(n);
            for (piece, &m) in pieces.iter().zip(&counts) {
                let part = sample_piece(piece, m, quad)?;
                let skip = usize::from(!out.is_empty());
                out.extend(part.into_iter().skip(skip));
            }
            out
        }
    };
    Ok(ShiftedCurve { samples })
}

/// Physical frame: vertex at the origin, heights v = y + P₀/g.
pub fn to_physical(curve: &ShiftedCurve, p0: f64, g: f64) -> ShiftedCurve {
    let lift = p0 / g;
    ShiftedCurve { samples: curve.samples.iter().map(|s| CurveSample { y: s.y + lift, ..*s }).collect() }
}

pub fn to_shifted(curve: &ShiftedCurve, p0: f64, g: f64) -> ShiftedCurve {
    let lift = p0 / g;
    ShiftedCurve { samples: curve.samples.iter().map(|s| CurveSample { y: s.y - lift, ..*s }).collect() }
}

/// Reflection x → −x, which also reverses the sample order and the slope angles.
pub fn reflect(curve: &ShiftedCurve) -> ShiftedCurve {
    ShiftedCurve { samples: curve.samples.iter().rev().map(|s| CurveSample { psi: -s.psi, x: -s.x, y: s.y }).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarSample {
    pub theta: f64,
    pub rho: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarProfile {
    pub samples: Vec<PolarSample>,
    /// θ strictly decreasing from the left wall to the right wall.
    pub monotone: bool,
    /// Largest distance of θ outside [θ₂, π − θ₁].
    pub range_excess: f64,
}

/// Polar description of a physical-frame curve about the wall vertex.
pub fn to_polar(curve: &ShiftedCurve, theta1: f64, theta2: f64) -> Result<PolarProfile> {
    let mut samples = Vec::with_capacity(curve.samples.len());
    for s in &curve.samples {
        let rho = s.x.hypot(s.y);
        if rho == 0.0 {
            return Err(Error::DegenerateSample(format!("sample at the vertex (psi = {})", s.psi)));
        }
        samples.push(PolarSample { theta: s.y.atan2(s.x), rho, x: s.x, y: s.y });
    }
    let monotone = samples.windows(2).all(|w| w[1].theta < w[0].theta);
    let (lo, hi) = (theta2, std::f64::consts::PI - theta1);
    let range_excess = samples
        .iter()
        .map(|s| (lo - s.theta).max(s.theta - hi).max(0.0))
        .fold(0.0, f64::max);
    Ok(PolarProfile { samples, monotone, range_excess })
}

/// Signed area of a closed polygon (counter-clockwise positive).
pub fn shoelace_unchecked(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (x0, y0) = points[i];
        let (x1, y1) = points[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let orient = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// First pair of non-adjacent polygon edges that cross, if any.
pub fn find_self_intersection(points: &[(f64, f64)]) -> Option<(usize, usize)> {
    let n = points.len();
    if n < 4 {
        return None;
    }
    let edge = |i: usize| (points[i], points[(i + 1) % n]);
    for i in 0..n {
        let (a, b) = edge(i);
        let (minx, maxx) = (a.0.min(b.0), a.0.max(b.0));
        let (miny, maxy) = (a.1.min(b.1), a.1.max(b.1));
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = edge(j);
            if c.0.max(d.0) < minx || c.0.min(d.0) > maxx || c.1.max(d.1) < miny || c.1.min(d.1) > maxy {
                continue;
            }
            if segments_cross(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Area of a simple polygon; self-intersecting input is rejected.
pub fn shoelace_area(points: &[(f64, f64)]) -> Result<f64> {
    if let Some((i, j)) = find_self_intersection(points) {
        return Err(Error::DegenerateSample(format!("polygon edges {i} and {j} cross")));
    }
    Ok(shoelace_unchecked(points).abs())
}

/// Closed boundary of the fluid region: the curve from right to left, then the vertex.
pub fn region_polygon(curve: &ShiftedCurve, vertex: (f64, f64)) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = curve.samples.iter().rev().map(|s| (s.x, s.y)).collect();
    pts.push(vertex);
    pts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Largest pointwise defect of σ (sin ψ)' − (g v − P₀).
    pub ode_residual: f64,
    /// Largest mismatch between measured and prescribed sin ψ at the contacts.
    pub bc_residual: f64,
    /// Dense polygon area against the target volume, relative to max(1, V).
    pub area_residual: f64,
    /// Largest angular distance of a contact from its wall.
    pub wall_residual: f64,
    pub polar_monotone: bool,
    pub tolerances: Tolerances,
}

impl ResidualReport {
    pub fn passes(&self) -> bool {
        let t = &self.tolerances;
        self.ode_residual <= t.ode
            && self.bc_residual <= t.bc
            && self.area_residual <= t.area
            && self.wall_residual <= t.wall
            && self.polar_monotone
    }

    /// Names of the failed checks.
    pub fn failures(&self) -> Vec<String> {
        let t = &self.tolerances;
        let mut out = Vec::new();
        let mut check = |name: &str, value: f64, tol: f64| {
            if !(value <= tol) {
                out.push(format!("{name} residual {value:e} exceeds {tol:e}"));
            }
        };
        check("ode", self.ode_residual, t.ode);
        check("bc", self.bc_residual, t.bc);
        check("area", self.area_residual, t.area);
        check("wall", self.wall_residual, t.wall);
        if !self.polar_monotone {
            out.push("polar angle is not monotone along the curve".into());
        }
        out
    }
}

/// Pointwise ODE defect at interior samples of a piece.
fn piece_ode_residual(piece: &Piece, psis: &[f64], params: &FluidParams, quad: QuadSettings) -> Result<f64> {
    let arc = &piece.arc;
    let (lo, hi) = (piece.from.min(piece.to), piece.from.max(piece.to));
    let mut worst: f64 = 0.0;
    for i in 1..psis.len().saturating_sub(1) {
        let psi = psis[i];
        let spacing = (psi - psis[i - 1]).abs().min((psis[i + 1] - psi).abs());
        let room = (psi - lo).min(hi - psi);
        let h = (1e-4 * spacing).max(1e-7).min(0.01 * room);
        if !(h > 0.0) {
            continue;
        }
        let y = arc.y(psi);
        let r = if psi.cos().abs() >= 0.05 {
            let dx = arc.dx_between(psi - h, psi + h, quad)?;
            let dsin = 2.0 * psi.cos() * h.sin();
            params.sigma * dsin / dx - params.g * y
        } else {
            let dy = arc.dy_between(psi - h, psi + h) / (2.0 * h);
            params.g * y * dy - params.sigma * psi.sin()
        };
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// sin ψ at the `from` end of a piece, measured from chords and extrapolated to zero length.
fn measured_contact_sin(arc: &Arc, end: f64, inward: f64, span: f64) -> f64 {
    let h = 1e-7f64.min(0.25 * span);
    let chord = |step: f64| {
        let q = end + inward * step;
        let dx = arc.dx_between(end, q, QuadSettings::with_tol(1e-15)).unwrap_or(f64::NAN);
        let dy = arc.dy_between(end, q);
        inward.signum() * arc.y(q).signum() * dy / dx.hypot(dy)
    };
    2.0 * chord(0.5 * h) - chord(h)
}

fn contact_sines(pieces: &[Piece]) -> (f64, f64) {
    let first = &pieces[0];
    let last = &pieces[pieces.len() - 1];
    let s1 = measured_contact_sin(&first.arc, first.from, (first.to - first.from).signum(), (first.to - first.from).abs());
    let s2 = measured_contact_sin(&last.arc, last.to, (last.from - last.to).signum(), (last.to - last.from).abs());
    (s1, s2)
}

/// Residual checks of a profile against `params`, using the sampled physical curve for the
/// geometric checks.
pub fn residuals(profile: &Profile, params: &FluidParams, physical: &ShiftedCurve, quad: QuadSettings) -> Result<ResidualReport> {
    let tolerances = Tolerances::default();
    let volume = params.volume;
    match &profile.shape {
        Shape::Empty => Ok(ResidualReport {
            ode_residual: 0.0,
            bc_residual: 0.0,
            area_residual: 0.0,
            wall_residual: 0.0,
            polar_monotone: true,
            tolerances,
        }),
        Shape::Flat => {
            let ends = [physical.samples[0], physical.samples[physical.samples.len() - 1]];
            let wall = wall_residual(ends[0], ends[1], params);
            let area = shoelace_unchecked(&region_polygon(physical, (0.0, 0.0)));
            let polar = to_polar(physical, params.theta1, params.theta2)?;
            let bc = params.young_sin_psi1().abs().max(params.young_sin_psi2().abs());
            Ok(ResidualReport {
                ode_residual: 0.0,
                bc_residual: bc,
                area_residual: (area - volume).abs() / volume.max(1.0),
                wall_residual: wall,
                polar_monotone: polar.monotone,
                tolerances,
            })
        }
        Shape::Arcs(pieces) => {
            let mut ode: f64 = 0.0;
            for (piece, n) in pieces.iter().zip(split_counts(pieces, physical.samples.len())) {
                ode = ode.max(piece_ode_residual(piece, &piece_angles(piece, n), params, quad)?);
            }
            let (s1, s2) = contact_sines(pieces);
            let bc = (s1 - params.young_sin_psi1()).abs().max((s2 - params.young_sin_psi2()).abs());
            let coarse = reconstruct(profile, AREA_SAMPLES * pieces.len(), quad)?;
            let fine = reconstruct(profile, 2 * AREA_SAMPLES * pieces.len(), quad)?;
            let vertex = (0.0, profile.y0);
            let a1 = shoelace_unchecked(&region_polygon(&coarse, vertex));
            let a2 = shoelace_unchecked(&region_polygon(&fine, vertex));
            let area = (4.0 * a2 - a1) / 3.0;
            let ends = [physical.samples[0], physical.samples[physical.samples.len() - 1]];
            let polar = to_polar(physical, params.theta1, params.theta2)?;
            Ok(ResidualReport {
                ode_residual: ode,
                bc_residual: bc,
                area_residual: (area - volume).abs() / volume.max(1.0),
                wall_residual: wall_residual(ends[0], ends[1], params),
                polar_monotone: polar.monotone,
                tolerances,
            })
        }
    }
}

fn wall_residual(left: CurveSample, right: CurveSample, params: &FluidParams) -> f64 {
    let t1 = left.y.atan2(left.x);
    let t2 = right.y.atan2(right.x);
    (t1 - (std::f64::consts::PI - params.theta1)).abs().max((t2 - params.theta2).abs())
}
