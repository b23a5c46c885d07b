//! One-dimensional integrals of the form ∫ N(φ) / D(φ) dφ.
//!
//! Every denominator met by the solver is a radical
//! `D(φ) = sqrt(d² + k·(cos a − cos φ))` with anchor angle `a`, depth `d ≥ 0` and `k = 2σ/g`.
//! When `d = 0` the integrand has an inverse square-root singularity at `φ = a`. Integrals that
//! start at the anchor are therefore computed in the variable `t = sqrt(cos a − cos φ)`, where
//! the integrand is bounded.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_PANELS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    /// Absolute tolerance.
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_panels: DEFAULT_MAX_PANELS }
    }
}

impl QuadSettings {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Numerator selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Cos,
    Sin,
    One,
}

impl Kernel {
    pub fn eval(self, phi: f64) -> f64 {
        match self {
            Kernel::Cos => phi.cos(),
            Kernel::Sin => phi.sin(),
            Kernel::One => 1.0,
        }
    }
}

/// Denominator families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Denominator {
    /// sqrt(u_m² + k(1 − cos φ)): profiles around an extremum of height u_m.
    Shifted { u_m: f64 },
    /// sqrt(k(cos ψ_m − cos φ)): profiles around a point of maximal slope at zero height.
    Apex { psi_m: f64 },
    /// sqrt(u_c² + k(cos ψ_c − cos φ)): profiles anchored at a contact of height u_c and slope ψ_c.
    Contact { u_c: f64, psi_c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralSpec {
    pub kernel: Kernel,
    pub denominator: Denominator,
    pub sigma: f64,
    pub g: f64,
    pub bounds: (f64, f64),
    pub settings: QuadSettings,
}

impl IntegralSpec {
    pub fn new(kernel: Kernel, denominator: Denominator, sigma: f64, g: f64, a: f64, b: f64) -> Self {
        Self { kernel, denominator, sigma, g, bounds: (a, b), settings: QuadSettings::default() }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.settings.tol = tol;
        self
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.settings.max_panels = max_panels;
        self
    }

    pub fn radical(&self) -> Radical {
        let k = 2.0 * self.sigma / self.g;
        match self.denominator {
            Denominator::Shifted { u_m } => Radical::new(0.0, u_m.abs(), k),
            Denominator::Apex { psi_m } => Radical::new(psi_m, 0.0, k),
            Denominator::Contact { u_c, psi_c } => Radical::new(psi_c, u_c.abs(), k),
        }
    }
}

/// ∫ N/D over the spec bounds directly in φ. The denominator must stay away from zero.
pub fn integrate_regular(spec: &IntegralSpec) -> Result<f64> {
    let (a, b) = spec.bounds;
    if a == b {
        return Ok(0.0);
    }
    let rad = spec.radical();
    let kernel = spec.kernel;
    let mut bad = None;
    let value = adaptive(
        |phi| {
            let v = kernel.eval(phi) / rad.value(phi);
            if !v.is_finite() && bad.is_none() {
                bad = Some(phi);
            }
            v
        },
        a,
        b,
        spec.settings,
    );
    if let Some(phi) = bad {
        return Err(Error::Domain(format!("denominator vanishes or is undefined at phi = {phi}")));
    }
    value
}

/// Improper ∫ N/D for the apex family, one endpoint sitting at the singular angle ψ_m.
pub fn integrate_apex_singular(spec: &IntegralSpec) -> Result<f64> {
    let psi_m = match spec.denominator {
        Denominator::Apex { psi_m } => psi_m,
        _ => return Err(Error::Domain("singular integration requires the apex denominator".into())),
    };
    let (a, b) = spec.bounds;
    if a == b {
        return Ok(0.0);
    }
    let rad = spec.radical();
    if b == psi_m {
        Ok(-rad.integral_from_anchor(spec.kernel, a, spec.settings)?)
    } else if a == psi_m {
        rad.integral_from_anchor(spec.kernel, b, spec.settings)
    } else {
        Err(Error::Domain(format!("one bound must equal psi_m = {psi_m}, got ({a}, {b})")))
    }
}

/// The radical sqrt(d² + k(cos a − cos φ)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radical {
    pub anchor: f64,
    pub depth: f64,
    pub k: f64,
}

impl Radical {
    pub fn new(anchor: f64, depth: f64, k: f64) -> Self {
        Self { anchor, depth: depth.abs(), k }
    }

    /// cos a − cos φ, evaluated through half angles to avoid cancellation.
    pub fn gap(&self, phi: f64) -> f64 {
        let sh = (0.5 * phi).sin();
        let sa = (0.5 * self.anchor).sin();
        2.0 * (sh - sa) * (sh + sa)
    }

    /// D(φ); NaN where the radicand is negative.
    pub fn value(&self, phi: f64) -> f64 {
        let r = self.depth * self.depth + self.k * self.gap(phi);
        if r < 0.0 {
            if r > -1e-14 * (self.depth * self.depth + self.k) {
                return 0.0;
            }
            return f64::NAN;
        }
        r.sqrt()
    }

    /// t(φ) = sqrt(cos a − cos φ), clamped at zero.
    pub fn t_of(&self, phi: f64) -> f64 {
        self.gap(phi).max(0.0).sqrt()
    }

    fn side_of(&self, phi: f64) -> Result<f64> {
        let sa = (0.5 * self.anchor).sin();
        if sa != 0.0 {
            let sh = (0.5 * phi).sin();
            if sh * sa < 0.0 || sh.abs() < sa.abs() * (1.0 - 1e-14) - 1e-300 {
                return Err(Error::Domain(format!(
                    "angle {phi} lies between zero and the anchor {}",
                    self.anchor
                )));
            }
            Ok(sa.signum())
        } else if phi == 0.0 {
            Ok(1.0)
        } else {
            Ok(phi.signum())
        }
    }

    /// Geometric breakpoints around t = d/√k, where D changes from ≈ d to ≈ √k·t.
    fn knees(&self) -> Vec<f64> {
        if self.depth == 0.0 {
            return Vec::new();
        }
        let knee = self.depth / self.k.sqrt();
        (-6..=6).map(|j| knee * 4f64.powi(j)).collect()
    }

    fn diverges(&self, kernel: Kernel) -> bool {
        self.anchor == 0.0 && self.depth == 0.0 && kernel != Kernel::Sin
    }

    /// Integrand in the t variable on the side `sgn`, including the Jacobian dφ/dt.
    fn t_integrand(&self, kernel: Kernel, sgn: f64, t: f64) -> f64 {
        let d = self.depth;
        let tw = if d == 0.0 { 1.0 / self.k.sqrt() } else { t / (d * d + self.k * t * t).sqrt() };
        if kernel == Kernel::Sin {
            // sin φ dφ = 2t dt exactly.
            return 2.0 * tw;
        }
        let sa = (0.5 * self.anchor).sin();
        let sh = sgn * (sa * sa + 0.5 * t * t).sqrt();
        let ch = (1.0 - sh * sh).max(0.0).sqrt();
        let num = match kernel {
            Kernel::Cos => 1.0 - 2.0 * sh * sh,
            Kernel::One => 1.0,
            Kernel::Sin => unreachable!(),
        };
        if sa == 0.0 {
            num * sgn * std::f64::consts::SQRT_2 / (ch * (d * d + self.k * t * t).sqrt())
        } else {
            num * tw / (sh * ch)
        }
    }

    /// ∫_a^b N/D dφ with `a` the anchor.
    pub fn integral_from_anchor(&self, kernel: Kernel, b: f64, settings: QuadSettings) -> Result<f64> {
        if b == self.anchor {
            return Ok(0.0);
        }
        if self.diverges(kernel) {
            return Err(Error::DivergentIntegral(
                "zero depth with the anchor at zero slope: the integral diverges".into(),
            ));
        }
        let sgn = self.side_of(b)?;
        let tb = self.t_of(b);
        adaptive_with_breaks(|t| self.t_integrand(kernel, sgn, t), 0.0, tb, &self.knees(), settings)
    }

    /// ∫_p^q N/D dφ for two angles on the admissible side(s) of the anchor.
    pub fn integral_between(&self, kernel: Kernel, p: f64, q: f64, settings: QuadSettings) -> Result<f64> {
        if p == q {
            return Ok(0.0);
        }
        if self.anchor == 0.0 && p * q < 0.0 {
            let left = self.integral_between(kernel, p, 0.0, settings)?;
            let right = self.integral_between(kernel, 0.0, q, settings)?;
            return Ok(left + right);
        }
        let sgn = if p != self.anchor { self.side_of(p)? } else { self.side_of(q)? };
        self.side_of(q)?;
        if self.diverges(kernel) && (p == 0.0 || q == 0.0) {
            return Err(Error::DivergentIntegral("interval touches the singular anchor at zero".into()));
        }
        let (tp, tq) = (self.t_of(p), self.t_of(q));
        adaptive_with_breaks(|t| self.t_integrand(kernel, sgn, t), tp, tq, &self.knees(), settings)
    }

    /// ∫_a^b R(φ) sin φ / D(φ) dφ where R(φ) = ∫_a^φ cos/D and `a` is the anchor.
    ///
    /// This is the area swept between a profile arc and the vertical through its anchor, in units
    /// of (σ/g)². The outer integral runs in t, and R is accumulated on the outer nodes.
    pub fn nested_from_anchor(&self, b: f64, settings: QuadSettings) -> Result<f64> {
        if b == self.anchor {
            return Ok(0.0);
        }
        if self.diverges(Kernel::Cos) {
            return Err(Error::DivergentIntegral("nested integral diverges at zero depth and zero anchor".into()));
        }
        let sgn = self.side_of(b)?;
        let tb = self.t_of(b);
        let inner_settings = QuadSettings {
            tol: (settings.tol * 1e-2 / tb.max(1.0)).max(1e-16),
            max_panels: settings.max_panels,
        };
        let inner = |t: f64| self.t_integrand(Kernel::Cos, sgn, t);
        let knees = self.knees();
        let mut cumulative = Cumulative::new(inner, inner_settings, &knees);
        let d = self.depth;
        let k = self.k;
        let mut failure = None;
        let value = adaptive_with_breaks(
            |t| {
                let r = match cumulative.at(t) {
                    Ok(r) => r,
                    Err(e) => {
                        failure.get_or_insert(e);
                        return 0.0;
                    }
                };
                let tw = if d == 0.0 { 1.0 / k.sqrt() } else { t / (d * d + k * t * t).sqrt() };
                2.0 * r * tw
            },
            0.0,
            tb,
            &knees,
            settings,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }
}

/// Running integral F(t) = ∫_0^t f, remembered at every queried node.
struct Cumulative<'a, F: Fn(f64) -> f64> {
    f: F,
    settings: QuadSettings,
    breaks: &'a [f64],
    known: Vec<(f64, f64)>,
}

impl<'a, F: Fn(f64) -> f64> Cumulative<'a, F> {
    fn new(f: F, settings: QuadSettings, breaks: &'a [f64]) -> Self {
        Self { f, settings, breaks, known: vec![(0.0, 0.0)] }
    }

    fn at(&mut self, t: f64) -> Result<f64> {
        let idx = self.known.partition_point(|&(tk, _)| tk <= t);
        let (t0, v0) = self.known[idx - 1];
        if t0 == t {
            return Ok(v0);
        }
        let v = v0 + adaptive_with_breaks(&self.f, t0, t, self.breaks, self.settings)?;
        self.known.insert(idx, (t, v));
        Ok(v)
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// 21-point Kronrod estimate and |Kronrod − Gauss| on [a, b].
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive 21-point Gauss–Kronrod quadrature with an absolute tolerance.
///
/// Panels are bisected in order of decreasing error estimate; the result is deterministic.
pub fn adaptive<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, settings: QuadSettings) -> Result<f64> {
    adaptive_with_breaks(f, a, b, &[], settings)
}

/// [`adaptive`] started from panels split at the given interior points.
///
/// Breakpoints outside (a, b) are ignored. They let the first estimates see features much
/// narrower than the interval.
pub fn adaptive_with_breaks<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breaks: &[f64], settings: QuadSettings) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return adaptive_with_breaks(f, b, a, breaks, settings).map(|v| -v);
    }
    let mut edges: Vec<f64> = breaks.iter().copied().filter(|&t| t > a && t < b).collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges.insert(0, a);
    edges.push(b);
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let (value, err) = gk21(&mut f, w[0], w[1]);
        if !value.is_finite() {
            return Err(Error::DivergentIntegral(format!("non-finite integrand on [{}, {}]", w[0], w[1])));
        }
        total += value;
        total_err += err;
        heap.push(Panel { a: w[0], b: w[1], value, err });
    }
    let mut settled: Vec<Panel> = Vec::new();
    let mut count = heap.len();
    loop {
        let floor = 64.0 * f64::EPSILON * total.abs();
        if total_err <= settings.tol.max(floor) || heap.is_empty() {
            break;
        }
        if count >= settings.max_panels {
            return Err(Error::ToleranceNotMet { tol: settings.tol, panels: count, estimate: total_err });
        }
        let p = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Width at the resolution limit: keep the panel as is.
            total_err -= p.err;
            settled.push(Panel { err: 0.0, ..p });
            continue;
        }
        let (v1, e1) = gk21(&mut f, p.a, mid);
        let (v2, e2) = gk21(&mut f, mid, p.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::DivergentIntegral(format!("non-finite integrand on [{}, {}]", p.a, p.b)));
        }
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: p.b, value: v2, err: e2 });
        count += 1;
        if count % 4096 == 0 {
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(settled);
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(panels.iter().map(|p| p.value).sum())
}
