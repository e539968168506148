//! Convective travelling waves: profiles moving at constant speed `c` with
//! `U = c` everywhere and `Phi = 0`.
//!
//! In the co-moving frame such a wave is determined by its height deviation
//! `delta(x) = h(x) - h0` alone: mass conservation pins `U`, the momentum
//! balance integrates to the profile relation
//!
//! ```text
//! g' h^2 / 2 + phi h^3 = kappa + g|| * int_{-inf}^x delta(y) dy,
//! ```
//!
//! and the endstate depth satisfies the friction balance
//! `g|| h0 = c_f c^2`. Any bounded `delta` with a well-defined integral
//! yields a wave: smooth bumps, admissible jumps (across which
//! `g'h^2/2 + phi h^3` is continuous), and zero-mean periodic shapes. The
//! small-scale enstrophy `phi` carries all the variation; `kappa` and the
//! total integral of `delta` tune the enstrophy endstates.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::model::PhysParams;
use crate::numerics::interp::HermiteTable;
use crate::numerics::ode::{rk45_at_nodes, OdeOptions};
use crate::numerics::quad::{cumulative_uniform, gauss_legendre, simpson_uniform};
use crate::{error::RgError, Result};

/// Tolerance on the equilibrium residual `g|| h0 - c_f c^2` of an endstate.
const EQUILIBRIUM_TOL: f64 = 1e-9;
/// Samples closer than this to the endstate count as converged when the
/// asymptotic support of a profile is located.
const ENDSTATE_TOL: f64 = 1e-12;

/// A jump sample inside a sampled height deviation: the node index and the
/// left limit of `delta` there (arrays store right limits at jump nodes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleJump {
    pub index: usize,
    pub left_value: f64,
}

/// Height-deviation shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum DeltaShape {
    /// Constant profile, `delta = 0`.
    Zero,
    /// `amplitude * exp(-1 / (1 - s^2))` for `s = (x - center)/half_width`
    /// inside `|s| < 1`, zero outside. Compactly supported and smooth.
    Bump {
        amplitude: f64,
        center: f64,
        half_width: f64,
    },
    /// `amplitude * sin(2 pi x / period)`; zero mean over a period.
    Sine { amplitude: f64, period: f64 },
    /// Piecewise-linear interpolation of uniform samples over the profile
    /// grid, with explicit jump nodes. Values are right limits at jumps.
    Samples {
        values: Vec<f64>,
        jumps: Vec<SampleJump>,
    },
}

/// Specification of a travelling wave via its height deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    /// Endstate depth; the wave speed follows from the friction balance.
    pub h0: f64,
    /// Wave speed, positive. Must satisfy `g|| h0 = c_f c^2`.
    pub c: f64,
    /// Integration constant of the profile relation; fixes the upstream
    /// enstrophy through `phi(-inf) = (kappa - g' h0^2/2) / h0^3`.
    pub kappa: f64,
    pub delta: DeltaShape,
    pub domain: (f64, f64),
    pub n_samples: usize,
    /// Present for periodic waves; must equal the domain length.
    pub period: Option<f64>,
}

/// `kappa` that produces upstream enstrophy `phi_minus` at depth `h0`.
pub fn kappa_for(h0: f64, phi_minus: f64, p: &PhysParams) -> f64 {
    0.5 * p.g_perp * h0 * h0 + phi_minus * h0 * h0 * h0
}

/// Which one-sided limit to take at a discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A located profile discontinuity with both one-sided limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpPoint {
    pub x: f64,
    pub index: usize,
    pub h_left: f64,
    pub h_right: f64,
    pub phi_left: f64,
    pub phi_right: f64,
}

/// Continuous evaluators behind a profile's sample arrays.
#[derive(Debug, Clone)]
enum Field {
    /// `h = h0 + delta(x)` with `phi` from the profile relation.
    Delta {
        shape: DeltaShape,
        /// Cumulative integral of the bump shape on its reference interval,
        /// present only for `DeltaShape::Bump`.
        bump_cdf: Option<HermiteTable>,
        /// Node cumulative integrals for `DeltaShape::Samples`.
        sample_cum: Option<Vec<f64>>,
        x0: f64,
        dx: f64,
    },
    /// Smooth tail solving the profile ODE left of a single admissible jump.
    SingleJump {
        x_jump: f64,
        h_jump_left: f64,
        h0: f64,
        phi_left: f64,
        phi_right: f64,
        left_tail: HermiteTable,
    },
    /// Mollification of another field by a compact kernel of width `eps`.
    Mollified {
        base: Box<Field>,
        base_jumps: Vec<f64>,
        eps: f64,
        nodes: Vec<f64>,
        weights: Vec<f64>,
    },
}

/// A travelling-wave profile: uniform samples plus a continuous evaluator.
///
/// Arrays are right-continuous at jump nodes; `jumps` carries both limits.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    pub xs: Vec<f64>,
    pub h: Vec<f64>,
    pub phi: Vec<f64>,
    pub jumps: Vec<JumpPoint>,
    pub h0: f64,
    pub c: f64,
    pub kappa: f64,
    pub phi_minus: f64,
    pub phi_plus: f64,
    pub params: PhysParams,
    pub period: Option<f64>,
    field: Field,
}

fn check_equilibrium(h0: f64, c: f64, p: &PhysParams) -> Result<()> {
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(RgError::NonPositiveHeight(h0));
    }
    if !(c > 0.0) {
        return Err(RgError::InvalidParameter(format!(
            "wave speed must be positive, got c = {c}"
        )));
    }
    let residual = p.g_parallel * h0 - p.c_f * c * c;
    if residual.abs() > EQUILIBRIUM_TOL * (p.g_parallel * h0).abs().max(1.0) {
        return Err(RgError::NonEquilibriumEndstate { residual });
    }
    Ok(())
}

fn uniform_grid(domain: (f64, f64), n: usize) -> Result<(Vec<f64>, f64)> {
    if n < 9 {
        return Err(RgError::GridTooCoarse(format!(
            "{n} samples; profiles need at least 9"
        )));
    }
    if !(domain.1 > domain.0) {
        return Err(RgError::InvalidParameter(format!(
            "empty domain [{}, {}]",
            domain.0, domain.1
        )));
    }
    let dx = (domain.1 - domain.0) / (n - 1) as f64;
    Ok(((0..n).map(|i| domain.0 + i as f64 * dx).collect(), dx))
}

/// Normalized mollifier kernel `exp(-1/(1-s^2)) / Z` on (-1, 1).
fn mollifier_norm() -> f64 {
    // All derivatives vanish at the endpoints, so the midpoint-free
    // composite Simpson rule converges spectrally here.
    let n = 4097;
    let dx = 2.0 / (n - 1) as f64;
    let ys: Vec<f64> = (0..n)
        .map(|i| {
            let s: f64 = -1.0 + i as f64 * dx;
            let r = 1.0 - s * s;
            if r <= 0.0 {
                0.0
            } else {
                (-1.0 / r).exp()
            }
        })
        .collect();
    simpson_uniform(&ys, dx)
}

fn bump_shape(s: f64) -> f64 {
    let r = 1.0 - s * s;
    if r <= 0.0 {
        0.0
    } else {
        (-1.0 / r).exp()
    }
}

fn build_bump_cdf() -> HermiteTable {
    let n = 4097;
    let dx = 2.0 / (n - 1) as f64;
    let ys: Vec<f64> = (0..n).map(|i| bump_shape(-1.0 + i as f64 * dx)).collect();
    let cum = cumulative_uniform(&ys, dx);
    HermiteTable::new(-1.0, dx, cum, ys)
}

impl Field {
    /// Height deviation, right-continuous.
    fn delta(&self, x: f64) -> f64 {
        self.delta_side(x, Side::Right)
    }

    fn delta_side(&self, x: f64, side: Side) -> f64 {
        match self {
            Field::Delta {
                shape, x0, dx, ..
            } => match shape {
                DeltaShape::Zero => 0.0,
                DeltaShape::Bump {
                    amplitude,
                    center,
                    half_width,
                } => amplitude * bump_shape((x - center) / half_width),
                DeltaShape::Sine { amplitude, period } => {
                    amplitude * (2.0 * std::f64::consts::PI * x / period).sin()
                }
                DeltaShape::Samples { values, jumps } => {
                    let n = values.len();
                    let mut s = (x - x0) / dx;
                    // Snap to grid nodes so jump-side logic sees exact hits.
                    if (s - s.round()).abs() < 1e-9 {
                        s = s.round();
                    }
                    if s <= 0.0 || s >= (n - 1) as f64 {
                        return 0.0;
                    }
                    let i = s.floor() as usize;
                    let t = s - i as f64;
                    // The right endpoint of a cell ending at a jump node uses
                    // the recorded left limit.
                    let right_node = jumps
                        .iter()
                        .find(|j| j.index == i + 1)
                        .map_or(values[i + 1], |j| j.left_value);
                    let left_node = values[i];
                    if t == 0.0 {
                        if side == Side::Left {
                            if let Some(j) = jumps.iter().find(|j| j.index == i) {
                                return j.left_value;
                            }
                        }
                        return values[i];
                    }
                    left_node + t * (right_node - left_node)
                }
            },
            Field::SingleJump {
                x_jump,
                h_jump_left,
                h0,
                left_tail,
                ..
            } => {
                if x < *x_jump || (x == *x_jump && side == Side::Left) {
                    let h = if x == *x_jump {
                        *h_jump_left
                    } else {
                        left_tail.eval(x)
                    };
                    h - h0
                } else {
                    0.0
                }
            }
            Field::Mollified {
                base,
                base_jumps,
                eps,
                nodes,
                weights,
            } => convolve_with(base, base_jumps, *eps, nodes, weights, x, &|f, y| {
                f.delta(y)
            }),
        }
    }

    /// Integral of `delta` from the far left (or the domain start, for
    /// periodic shapes) up to `x`.
    fn delta_integral(&self, x: f64, kappa: f64, h0: f64, p: &PhysParams) -> f64 {
        match self {
            Field::Delta {
                shape,
                bump_cdf,
                sample_cum,
                x0,
                dx,
            } => match shape {
                DeltaShape::Zero => 0.0,
                DeltaShape::Bump {
                    amplitude,
                    center,
                    half_width,
                } => {
                    let s = ((x - center) / half_width).clamp(-1.0, 1.0);
                    amplitude * half_width * bump_cdf.as_ref().unwrap().eval(s)
                }
                DeltaShape::Sine { amplitude, period } => {
                    let k = 2.0 * std::f64::consts::PI / period;
                    amplitude / k * ((k * x0).cos() - (k * x).cos())
                }
                DeltaShape::Samples { values, jumps } => {
                    let cum = sample_cum.as_ref().unwrap();
                    let n = values.len();
                    let mut s = (x - x0) / dx;
                    if (s - s.round()).abs() < 1e-9 {
                        s = s.round();
                    }
                    if s <= 0.0 {
                        return 0.0;
                    }
                    if s >= (n - 1) as f64 {
                        return cum[n - 1];
                    }
                    let i = s.floor() as usize;
                    let t = s - i as f64;
                    let right_node = jumps
                        .iter()
                        .find(|j| j.index == i + 1)
                        .map_or(values[i + 1], |j| j.left_value);
                    let a = values[i];
                    let b = a + t * (right_node - a);
                    cum[i] + 0.5 * (a + b) * t * dx
                }
            },
            Field::SingleJump {
                x_jump,
                phi_left,
                phi_right,
                left_tail,
                h_jump_left,
                ..
            } => {
                // The profile relation gives the integral in closed form.
                let (h, phi) = if x < *x_jump {
                    (left_tail.eval(x), *phi_left)
                } else if x == *x_jump {
                    (*h_jump_left, *phi_left)
                } else {
                    (h0, *phi_right)
                };
                (0.5 * p.g_perp * h * h + phi * h * h * h - kappa) / p.g_parallel
            }
            Field::Mollified {
                base,
                base_jumps,
                eps,
                nodes,
                weights,
            } => {
                // Convolve the base integral; constants pass through since
                // the kernel has unit mass.
                convolve_with(base, base_jumps, *eps, nodes, weights, x, &|f, y| {
                    f.delta_integral(y, kappa, h0, p)
                })
            }
        }
    }

    /// Classical derivative of `delta`, away from jumps. At a jump node the
    /// value is the right-side limit.
    fn delta_deriv(&self, x: f64, p: &PhysParams) -> f64 {
        match self {
            Field::Delta { shape, x0, dx, .. } => match shape {
                DeltaShape::Zero => 0.0,
                DeltaShape::Bump {
                    amplitude,
                    center,
                    half_width,
                } => {
                    let s = (x - center) / half_width;
                    let r = 1.0 - s * s;
                    if r <= 0.0 {
                        0.0
                    } else {
                        amplitude * bump_shape(s) * (-2.0 * s / (r * r)) / half_width
                    }
                }
                DeltaShape::Sine { amplitude, period } => {
                    let k = 2.0 * std::f64::consts::PI / period;
                    amplitude * k * (k * x).cos()
                }
                DeltaShape::Samples { values, jumps } => {
                    let n = values.len();
                    let mut s = (x - x0) / dx;
                    if (s - s.round()).abs() < 1e-9 {
                        s = s.round();
                    }
                    if s < 0.0 || s >= (n - 1) as f64 {
                        return 0.0;
                    }
                    let i = s.floor() as usize;
                    let right_node = jumps
                        .iter()
                        .find(|j| j.index == i + 1)
                        .map_or(values[i + 1], |j| j.left_value);
                    (right_node - values[i]) / dx
                }
            },
            Field::SingleJump {
                x_jump,
                h0,
                phi_left,
                left_tail,
                ..
            } => {
                if x < *x_jump {
                    // The tail solves the profile ODE with constant phi.
                    let h = left_tail.eval(x);
                    p.g_parallel * (h - h0) / (p.g_perp * h + 3.0 * phi_left * h * h)
                } else {
                    0.0
                }
            }
            Field::Mollified {
                base,
                base_jumps,
                eps,
                nodes,
                weights,
            } => {
                // Differentiating the convolution splits into the smooth part
                // plus one kernel term per jump of the base field.
                let mut d = convolve_with(base, base_jumps, *eps, nodes, weights, x, &|f, y| {
                    f.delta_deriv(y, p)
                });
                let z = MOLLIFIER_Z.with(|z| *z);
                for j in base_jumps {
                    let s = (x - j) / eps;
                    let jump = base.delta_side(*j, Side::Right) - base.delta_side(*j, Side::Left);
                    d += bump_shape(s) / (eps * z) * jump;
                }
                d
            }
        }
    }

    fn jump_locations(&self) -> Vec<f64> {
        match self {
            Field::Delta {
                shape: DeltaShape::Samples { jumps, .. },
                x0,
                dx,
                ..
            } => jumps.iter().map(|j| x0 + j.index as f64 * dx).collect(),
            Field::SingleJump { x_jump, .. } => vec![*x_jump],
            _ => Vec::new(),
        }
    }
}

/// Kernel-weighted average of a base-field quantity over `(x - eps, x + eps)`,
/// split at jump preimages so every Gauss panel sees a smooth integrand.
fn convolve_with(
    base: &Field,
    base_jumps: &[f64],
    eps: f64,
    nodes: &[f64],
    weights: &[f64],
    x: f64,
    value: &dyn Fn(&Field, f64) -> f64,
) -> f64 {
    // delta_eps(x) = int rho(s) delta(x - eps s) ds over s in (-1, 1).
    let mut cuts: Vec<f64> = vec![-1.0, 1.0];
    for j in base_jumps {
        let s = (x - j) / eps;
        if s > -1.0 && s < 1.0 {
            cuts.push(s);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-300 {
            continue;
        }
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (s, wt) in nodes.iter().zip(weights) {
            let si = mid + half * s;
            acc += wt * half * bump_shape(si) * value(base, x - eps * si);
        }
    }
    acc / MOLLIFIER_Z.with(|z| *z)
}

thread_local! {
    static MOLLIFIER_Z: f64 = mollifier_norm();
}

impl WaveProfile {
    /// Sample spacing of the profile grid.
    pub fn dx(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    /// Evaluate `(h, phi)` at `x`, right-continuous at jumps. Outside the
    /// sampled domain the profile continues with its endstates.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        self.eval_side(x, Side::Right)
    }

    /// One-sided evaluation at `x`.
    pub fn eval_side(&self, x: f64, side: Side) -> (f64, f64) {
        let p = &self.params;
        match &self.field {
            Field::SingleJump {
                x_jump,
                h_jump_left,
                phi_left,
                phi_right,
                left_tail,
                ..
            } => {
                if x < *x_jump || (x == *x_jump && side == Side::Left) {
                    let h = if x == *x_jump {
                        *h_jump_left
                    } else {
                        left_tail.eval(x)
                    };
                    (h, *phi_left)
                } else {
                    (self.h0, *phi_right)
                }
            }
            field => {
                let d = field.delta_side(x, side);
                let h = self.h0 + d;
                // The integral is continuous across jumps; only h is one-sided.
                let integral = field.delta_integral(x, self.kappa, self.h0, p);
                let phi = (self.kappa + p.g_parallel * integral
                    - 0.5 * p.g_perp * h * h)
                    / (h * h * h);
                (h, phi)
            }
        }
    }

    /// Classical derivative `h'(x)` away from jumps (right-side limit at a
    /// jump node).
    pub fn h_deriv(&self, x: f64) -> f64 {
        self.field.delta_deriv(x, &self.params)
    }

    /// Classical derivative `phi'(x)` away from jumps, obtained by
    /// differentiating the profile relation.
    pub fn phi_deriv(&self, x: f64) -> f64 {
        let (h, phi) = self.eval(x);
        let hp = self.h_deriv(x);
        let p = &self.params;
        (p.g_parallel * (h - self.h0) - p.g_perp * h * hp) / (h * h * h) - 3.0 * phi * hp / h
    }

    /// True when the profile has no discontinuities.
    pub fn is_smooth(&self) -> bool {
        self.jumps.is_empty()
    }

    /// Index range `[lo, hi]` outside of which the samples agree with the
    /// endstates to on-grid precision. Errors for periodic profiles.
    pub fn support_indices(&self) -> Result<(usize, usize)> {
        if self.period.is_some() {
            return Err(RgError::NotAsymptoticallyConstant);
        }
        let tol_h = ENDSTATE_TOL * self.h0.max(1.0);
        let lo = self
            .h
            .iter()
            .zip(&self.phi)
            .position(|(h, phi)| {
                (h - self.h0).abs() > tol_h || (phi - self.phi_minus).abs() > ENDSTATE_TOL
            })
            .unwrap_or(self.xs.len() / 2);
        let hi = self
            .h
            .iter()
            .zip(&self.phi)
            .rposition(|(h, phi)| {
                (h - self.h0).abs() > tol_h || (phi - self.phi_plus).abs() > ENDSTATE_TOL
            })
            .unwrap_or(self.xs.len() / 2);
        let mut lo = lo.saturating_sub(1);
        let mut hi = (hi + 1).min(self.xs.len() - 1);
        // A jump whose one-sided value equals the endstate would otherwise
        // be trimmed away with the constant run beyond it; every jump stays
        // strictly inside the bracket.
        for j in &self.jumps {
            lo = lo.min(j.index.saturating_sub(1));
            hi = hi.max((j.index + 1).min(self.xs.len() - 1));
        }
        Ok((lo, hi))
    }

    /// Sup-norm residual of the profile relation over the sample grid, with
    /// the delta-integral recomputed independently by quadrature of the
    /// sampled deviation. Small residuals certify construction consistency.
    pub fn relation_residual(&self) -> f64 {
        let p = &self.params;
        let dx = self.dx();
        let n = self.xs.len();
        // Segment-aware cumulative integral of delta from the samples alone.
        let mut breaks: Vec<usize> = self.jumps.iter().map(|j| j.index).collect();
        breaks.push(n);
        let mut cum = vec![0.0; n];
        let mut lo = 0usize;
        let mut base = 0.0;
        for &hi in &breaks {
            if hi > lo {
                let mut seg: Vec<f64> = self.h[lo..hi].iter().map(|h| h - self.h0).collect();
                // Close the segment with the left limit at the jump node.
                if hi < n {
                    let j = self.jumps.iter().find(|j| j.index == hi).unwrap();
                    seg.push(j.h_left - self.h0);
                }
                let c = cumulative_uniform(&seg, dx);
                for (k, v) in c.iter().take(hi - lo).enumerate() {
                    cum[lo + k] = base + v;
                }
                base += *c.last().unwrap();
            }
            lo = hi;
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let h = self.h[i];
            let lhs = 0.5 * p.g_perp * h * h + self.phi[i] * h * h * h;
            let rhs = self.kappa + p.g_parallel * cum[i];
            worst = worst.max((lhs - rhs).abs());
        }
        worst
    }

    /// Write the profile as CSV (`x,h,phi`), jump locations in a leading
    /// comment.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        if !self.jumps.is_empty() {
            let locs: Vec<String> = self.jumps.iter().map(|j| format!("{}", j.x)).collect();
            writeln!(out, "# jumps: {}", locs.join(", "))?;
        }
        writeln!(out, "x,h,phi")?;
        for i in 0..self.xs.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e}",
                self.xs[i], self.h[i], self.phi[i]
            )?;
        }
        Ok(())
    }
}

fn finish_profile(
    spec_domain: (f64, f64),
    n: usize,
    h0: f64,
    c: f64,
    kappa: f64,
    period: Option<f64>,
    field: Field,
    p: &PhysParams,
) -> Result<WaveProfile> {
    let (xs, dx) = uniform_grid(spec_domain, n)?;
    let mut prof = WaveProfile {
        xs,
        h: Vec::with_capacity(n),
        phi: Vec::with_capacity(n),
        jumps: Vec::new(),
        h0,
        c,
        kappa,
        phi_minus: 0.0,
        phi_plus: 0.0,
        params: *p,
        period,
        field,
    };
    for i in 0..n {
        let (h, phi) = prof.eval_side(prof.xs[i], Side::Right);
        if !(h > 0.0) || !h.is_finite() {
            return Err(RgError::NonPositiveHeight(h));
        }
        if !(phi > 0.0) || !phi.is_finite() {
            return Err(RgError::NegativeEnstrophy {
                name: "phi",
                value: phi,
            });
        }
        prof.h.push(h);
        prof.phi.push(phi);
    }
    // Locate jumps on the grid and record both limits.
    for xj in prof.field.jump_locations() {
        let index = ((xj - prof.xs[0]) / dx).round() as usize;
        let (h_left, phi_left) = prof.eval_side(xj, Side::Left);
        let (h_right, phi_right) = prof.eval_side(xj, Side::Right);
        prof.jumps.push(JumpPoint {
            x: xj,
            index,
            h_left,
            h_right,
            phi_left,
            phi_right,
        });
    }
    prof.jumps
        .sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    prof.phi_minus = (kappa - 0.5 * p.g_perp * h0 * h0) / (h0 * h0 * h0);
    let total = prof
        .field
        .delta_integral(prof.xs[n - 1], kappa, h0, p);
    prof.phi_plus = (kappa + p.g_parallel * total - 0.5 * p.g_perp * h0 * h0) / (h0 * h0 * h0);
    if period.is_some() {
        prof.phi_minus = prof.phi[0];
        prof.phi_plus = prof.phi[0];
    }
    Ok(prof)
}

/// Build a travelling wave from a height deviation.
///
/// Non-periodic shapes must vanish at the domain ends so the profile is
/// asymptotically constant on the grid.
pub fn construct_from_delta(spec: &ProfileSpec, p: &PhysParams) -> Result<WaveProfile> {
    check_equilibrium(spec.h0, spec.c, p)?;
    if spec.period.is_some() {
        return construct_periodic(spec, p);
    }
    let (xs, dx) = uniform_grid(spec.domain, spec.n_samples)?;
    let field = make_delta_field(&spec.delta, xs[0], dx, spec.n_samples, spec.domain)?;
    let edge_l = field.delta(spec.domain.0);
    let edge_r = field.delta(spec.domain.1);
    if edge_l.abs() > 1e-10 || edge_r.abs() > 1e-10 {
        return Err(RgError::NotAsymptoticallyConstant);
    }
    finish_profile(
        spec.domain,
        spec.n_samples,
        spec.h0,
        spec.c,
        spec.kappa,
        None,
        field,
        p,
    )
}

fn make_delta_field(
    shape: &DeltaShape,
    x0: f64,
    dx: f64,
    n: usize,
    domain: (f64, f64),
) -> Result<Field> {
    match shape {
        DeltaShape::Bump {
            center, half_width, ..
        } => {
            if !(*half_width > 0.0) {
                return Err(RgError::InvalidParameter(format!(
                    "bump half_width = {half_width}"
                )));
            }
            if center - half_width < domain.0 || center + half_width > domain.1 {
                return Err(RgError::NotAsymptoticallyConstant);
            }
            Ok(Field::Delta {
                shape: shape.clone(),
                bump_cdf: Some(build_bump_cdf()),
                sample_cum: None,
                x0,
                dx,
            })
        }
        DeltaShape::Samples { values, jumps } => {
            if values.len() != n {
                return Err(RgError::InvalidParameter(format!(
                    "sampled delta has {} values for {} grid nodes",
                    values.len(),
                    n
                )));
            }
            for j in jumps {
                if j.index == 0 || j.index >= n {
                    return Err(RgError::InvalidParameter(format!(
                        "jump index {} outside the grid",
                        j.index
                    )));
                }
            }
            // Segment-aware fourth-order cumulative integral at the nodes.
            let mut breaks: Vec<usize> = jumps.iter().map(|j| j.index).collect();
            breaks.sort_unstable();
            breaks.push(n);
            let mut cum = vec![0.0; n];
            let mut lo = 0usize;
            let mut base = 0.0;
            for &hi in &breaks {
                if hi > lo {
                    let mut seg: Vec<f64> = values[lo..hi].to_vec();
                    if hi < n {
                        let j = jumps.iter().find(|j| j.index == hi).unwrap();
                        seg.push(j.left_value);
                    }
                    let c = cumulative_uniform(&seg, dx);
                    for (k, v) in c.iter().take(hi - lo).enumerate() {
                        cum[lo + k] = base + v;
                    }
                    base += *c.last().unwrap();
                }
                lo = hi;
            }
            Ok(Field::Delta {
                shape: shape.clone(),
                bump_cdf: None,
                sample_cum: Some(cum),
                x0,
                dx,
            })
        }
        _ => Ok(Field::Delta {
            shape: shape.clone(),
            bump_cdf: None,
            sample_cum: None,
            x0,
            dx,
        }),
    }
}

/// Build a periodic travelling wave (`spec.period` required; the domain must
/// span exactly one period and `delta` must have zero mean).
pub fn construct_periodic(spec: &ProfileSpec, p: &PhysParams) -> Result<WaveProfile> {
    check_equilibrium(spec.h0, spec.c, p)?;
    let period = spec.period.ok_or_else(|| {
        RgError::InvalidParameter("construct_periodic needs spec.period".into())
    })?;
    if ((spec.domain.1 - spec.domain.0) - period).abs() > 1e-9 * period {
        return Err(RgError::InvalidParameter(format!(
            "domain length {} does not match period {period}",
            spec.domain.1 - spec.domain.0
        )));
    }
    let (xs, dx) = uniform_grid(spec.domain, spec.n_samples)?;
    let field = make_delta_field(&spec.delta, xs[0], dx, spec.n_samples, spec.domain)?;
    let mean = field.delta_integral(spec.domain.1, spec.kappa, spec.h0, p) / period;
    let scale = (1..spec.n_samples)
        .map(|i| field.delta(xs[i]).abs())
        .fold(1e-30, f64::max);
    if mean.abs() > 1e-10 * scale.max(1e-6) {
        return Err(RgError::NonZeroMean(mean));
    }
    finish_profile(
        spec.domain,
        spec.n_samples,
        spec.h0,
        spec.c,
        spec.kappa,
        Some(period),
        field,
        p,
    )
}

/// Depth just left of an admissible jump onto `(h_right, phi_right)`:
/// the unique positive root of
/// `phi_left h^3 + g' h^2 / 2 = phi_right h_right^3 + g' h_right^2 / 2`.
pub fn jump_height(h_right: f64, phi_left: f64, phi_right: f64, p: &PhysParams) -> Result<f64> {
    if !(h_right > 0.0) {
        return Err(RgError::NonPositiveHeight(h_right));
    }
    if phi_left < 0.0 || phi_right < 0.0 {
        return Err(RgError::NegativeEnstrophy {
            name: "phi",
            value: phi_left.min(phi_right),
        });
    }
    let rhs = phi_right * h_right.powi(3) + 0.5 * p.g_perp * h_right * h_right;
    if phi_left == 0.0 {
        return Ok((2.0 * rhs / p.g_perp).sqrt());
    }
    let f = |h: f64| phi_left * h * h * h + 0.5 * p.g_perp * h * h - rhs;
    // f is strictly increasing on h > 0 with f(0) < 0: bracket then bisect
    // with a Newton polish.
    let mut hi = h_right.max((rhs / phi_left).cbrt()).max(1e-12);
    while f(hi) <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(RgError::NoPositiveRoot(
                "jump-height cubic has no bracketable root".into(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * hi.max(1.0) {
            break;
        }
    }
    let mut h = 0.5 * (lo + hi);
    for _ in 0..4 {
        let df = 3.0 * phi_left * h * h + p.g_perp * h;
        h -= f(h) / df;
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(RgError::NoPositiveRoot(format!(
            "jump-height iteration left the positive axis (h = {h})"
        )));
    }
    Ok(h)
}

/// Specification of a single-jump travelling wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleJumpSpec {
    pub h0: f64,
    pub phi_left: f64,
    pub phi_right: f64,
    pub x_jump: f64,
    pub domain: (f64, f64),
    pub n_samples: usize,
}

/// Build the travelling wave that decays to `(h0, phi_left)` far upstream
/// and jumps onto the exact endstate `(h0, phi_right)` at `x_jump`: the
/// smooth tail solves the profile ODE backward from the jump height.
///
/// The wave speed is the equilibrium velocity of `h0`. `x_jump` is snapped
/// to the sample grid.
pub fn construct_single_jump(spec: &SingleJumpSpec, p: &PhysParams) -> Result<WaveProfile> {
    let c = p.equilibrium_velocity(spec.h0);
    check_equilibrium(spec.h0, c, p)?;
    if spec.phi_left <= 0.0 || spec.phi_right <= 0.0 {
        return Err(RgError::NegativeEnstrophy {
            name: "phi",
            value: spec.phi_left.min(spec.phi_right),
        });
    }
    let (xs, dx) = uniform_grid(spec.domain, spec.n_samples)?;
    let kappa = kappa_for(spec.h0, spec.phi_left, p);

    if (spec.phi_left - spec.phi_right).abs() < 1e-14 {
        // Degenerate: no jump, constant profile.
        return finish_profile(
            spec.domain,
            spec.n_samples,
            spec.h0,
            c,
            kappa,
            None,
            make_delta_field(&DeltaShape::Zero, xs[0], dx, spec.n_samples, spec.domain)?,
            p,
        );
    }

    let jump_index = ((spec.x_jump - xs[0]) / dx).round() as usize;
    if jump_index == 0 || jump_index + 1 >= spec.n_samples {
        return Err(RgError::InvalidParameter(format!(
            "x_jump = {} leaves no room on the domain",
            spec.x_jump
        )));
    }
    let x_jump = xs[jump_index];
    let h_jump_left = jump_height(spec.h0, spec.phi_left, spec.phi_right, p)?;

    // Backward integration of the smooth tail, sampled on the grid nodes.
    let h0 = spec.h0;
    let (g_perp, g_par, phi_l) = (p.g_perp, p.g_parallel, spec.phi_left);
    let mut rhs = |_x: f64, h: &f64| g_par * (h - h0) / (g_perp * h + 3.0 * phi_l * h * h);
    let nodes: Vec<f64> = (0..=jump_index).rev().map(|i| xs[i]).collect();
    let opts = OdeOptions {
        rtol: 1e-12,
        atol: 1e-16,
        ..OdeOptions::default()
    };
    let tail_rev = rk45_at_nodes(&mut rhs, &nodes, h_jump_left, &opts)?;
    let mut tail: Vec<f64> = tail_rev.into_iter().rev().collect();
    for h in &mut tail {
        if !(*h > 0.0) || !h.is_finite() {
            return Err(RgError::IntegrationFailure(
                "profile tail left the positive depth region".into(),
            ));
        }
    }
    let slopes: Vec<f64> = tail.iter().map(|h| rhs(0.0, h)).collect();
    let left_tail = HermiteTable::new(xs[0], dx, tail, slopes);

    finish_profile(
        spec.domain,
        spec.n_samples,
        spec.h0,
        c,
        kappa,
        None,
        Field::SingleJump {
            x_jump,
            h_jump_left,
            h0: spec.h0,
            phi_left: spec.phi_left,
            phi_right: spec.phi_right,
            left_tail,
        },
        p,
    )
}

/// Replace a profile by its mollification with a compact kernel of width
/// `eps`. Endstates, speed, and `kappa` are preserved; jumps disappear.
pub fn mollify(profile: &WaveProfile, eps: f64) -> Result<WaveProfile> {
    if !(eps > 0.0) {
        return Err(RgError::InvalidParameter(format!(
            "mollifier width must be positive, got {eps}"
        )));
    }
    if profile.period.is_some() {
        return Err(RgError::NotAsymptoticallyConstant);
    }
    let lo = profile.xs[0];
    let hi = *profile.xs.last().unwrap();
    for j in &profile.jumps {
        if j.x - eps < lo || j.x + eps > hi {
            return Err(RgError::InvalidParameter(format!(
                "mollifier width {eps} spills over the domain at the jump x = {}",
                j.x
            )));
        }
    }
    let (nodes, weights) = gauss_legendre(48);
    let field = Field::Mollified {
        base: Box::new(profile.field.clone()),
        base_jumps: profile.jumps.iter().map(|j| j.x).collect(),
        eps,
        nodes,
        weights,
    };
    finish_profile(
        (lo, hi),
        profile.xs.len(),
        profile.h0,
        profile.c,
        profile.kappa,
        None,
        field,
        &profile.params,
    )
}

/// Sup-norm of the large-scale enstrophy in each snapshot, for relaxation
/// decay studies: returns `(t, max |Phi|)` pairs in time order.
pub fn phi_decay_diagnostic(snaps: &[crate::solver::Snapshot]) -> Vec<(f64, f64)> {
    snaps
        .iter()
        .map(|s| (s.t, s.diagnostics.max_abs_phi_large))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const G_PERP: f64 = 9.510565162951535; // 10 cos(pi/10)
    const G_PAR: f64 = 3.0901699437494745; // 10 sin(pi/10)

    fn gentle() -> PhysParams {
        PhysParams::new(G_PERP, G_PAR, 1.0, 0.8).unwrap()
    }

    fn bump_spec() -> ProfileSpec {
        // Smooth wave over a compact bump; upstream enstrophy 4.
        let p = gentle();
        ProfileSpec {
            h0: 1.0,
            c: p.equilibrium_velocity(1.0),
            kappa: kappa_for(1.0, 4.0, &p),
            delta: DeltaShape::Bump {
                amplitude: 0.02,
                center: 3.0,
                half_width: 1.0,
            },
            domain: (0.0, 8.0),
            n_samples: 1601,
            period: None,
        }
    }

    #[test]
    fn bump_profile_hits_prescribed_endstates() {
        let p = gentle();
        let prof = construct_from_delta(&bump_spec(), &p).unwrap();
        assert!((prof.phi_minus - 4.0).abs() < 1e-12);
        assert!(prof.is_smooth());
        // phi(+inf) = phi(-inf) + g|| * int(delta) / h0^3.
        let mut shape = |x: f64| {
            let s: f64 = x - 3.0;
            let r = 1.0 - s * s;
            if r <= 0.0 {
                0.0
            } else {
                0.02 * (-1.0 / r).exp()
            }
        };
        let integral = crate::numerics::quad::gauss_integrate(&mut shape, 2.0, 4.0, 64);
        let expect = 4.0 + G_PAR * integral;
        assert!(
            (prof.phi_plus - expect).abs() < 1e-9,
            "phi_plus = {}, expected {expect}",
            prof.phi_plus
        );
        // Samples at the ends sit on the endstates.
        assert!((prof.h[0] - 1.0).abs() < 1e-14);
        assert!((prof.phi[0] - 4.0).abs() < 1e-12);
        assert!((prof.h.last().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bump_profile_satisfies_the_relation() {
        let p = gentle();
        let prof = construct_from_delta(&bump_spec(), &p).unwrap();
        assert!(prof.relation_residual() < 1e-8);
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let p = gentle();
        let prof = construct_from_delta(&bump_spec(), &p).unwrap();
        let eps = 1e-5;
        for i in (100..1500).step_by(37) {
            let x = prof.xs[i];
            let hp = prof.h_deriv(x);
            let fd_h = (prof.eval(x + eps).0 - prof.eval(x - eps).0) / (2.0 * eps);
            assert!(
                (hp - fd_h).abs() < 1e-6 * (1.0 + hp.abs()),
                "at x = {x}: analytic h' {hp}, FD {fd_h}"
            );
            let pp = prof.phi_deriv(x);
            let fd_p = (prof.eval(x + eps).1 - prof.eval(x - eps).1) / (2.0 * eps);
            assert!(
                (pp - fd_p).abs() < 1e-6 * (1.0 + pp.abs()),
                "at x = {x}: analytic phi' {pp}, FD {fd_p}"
            );
        }
    }

    #[test]
    fn differentiated_relation_holds_along_the_smooth_wave() {
        // d/dx (g' h^2/2 + phi h^3) = g|| (h - h0) pointwise.
        let p = gentle();
        let prof = construct_from_delta(&bump_spec(), &p).unwrap();
        for i in (100..1500).step_by(23) {
            let x = prof.xs[i];
            let (h, phi) = prof.eval(x);
            let lhs = (p.g_perp * h + 3.0 * phi * h * h) * prof.h_deriv(x)
                + prof.phi_deriv(x) * h * h * h;
            let rhs = p.g_parallel * (h - 1.0);
            assert!(
                (lhs - rhs).abs() < 1e-10,
                "at x = {x}: relation derivative residual {}",
                lhs - rhs
            );
        }
    }

    #[test]
    fn non_equilibrium_speed_is_rejected() {
        let p = gentle();
        let mut spec = bump_spec();
        spec.c *= 1.01;
        assert!(matches!(
            construct_from_delta(&spec, &p),
            Err(RgError::NonEquilibriumEndstate { .. })
        ));
    }

    #[test]
    fn negative_phi_from_bad_kappa_is_rejected() {
        let p = gentle();
        let mut spec = bump_spec();
        spec.kappa = 0.5 * G_PERP - 0.1; // phi_minus < 0
        assert!(construct_from_delta(&spec, &p).is_err());
    }

    #[test]
    fn jump_height_reference_value() {
        // Enstrophy rise 0.2 -> 0.5 lifts the upstream depth by about 2.9%.
        let p = gentle();
        let h = jump_height(1.0, 0.2, 0.5, &p).unwrap();
        assert!((h - 1.0292).abs() < 1e-3, "h = {h}");
        // The root actually solves the cubic.
        let lhs = 0.2 * h.powi(3) + 0.5 * G_PERP * h * h;
        let rhs = 0.5 * 1.0 + 0.5 * G_PERP;
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn jump_height_against_bisection_oracle() {
        let p = gentle();
        for (hr, pl, pr) in [
            (1.0, 0.2, 0.5),
            (1.0, 0.3, 0.1),
            (0.4, 1.0, 2.5),
            (2.0, 0.05, 0.8),
        ] {
            let root = jump_height(hr, pl, pr, &p).unwrap();
            // Plain bisection on the same cubic, no Newton polish.
            let rhs = pr * hr * hr * hr + 0.5 * G_PERP * hr * hr;
            let f = |h: f64| pl * h * h * h + 0.5 * G_PERP * h * h - rhs;
            let (mut lo, mut hi) = (1e-9, 100.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            assert!(
                (root - 0.5 * (lo + hi)).abs() < 1e-9,
                "root {root} vs oracle {}",
                0.5 * (lo + hi)
            );
        }
    }

    #[test]
    fn jump_height_identity_cases() {
        let p = gentle();
        // Equal enstrophies: no jump.
        let h = jump_height(1.3, 0.7, 0.7, &p).unwrap();
        assert!((h - 1.3).abs() < 1e-12);
        // phi_left = 0 reduces to the quadratic branch.
        let h = jump_height(1.0, 0.0, 0.5, &p).unwrap();
        let expect = ((2.0 * (0.5 + 0.5 * G_PERP)) / G_PERP).sqrt();
        assert!((h - expect).abs() < 1e-12);
    }

    fn fig3_spec() -> SingleJumpSpec {
        SingleJumpSpec {
            h0: 1.0,
            phi_left: 0.2,
            phi_right: 0.5,
            x_jump: 217.0,
            domain: (0.0, 250.0),
            n_samples: 2501,
        }
    }

    #[test]
    fn single_jump_profile_structure() {
        let p = PhysParams::new(G_PERP, G_PAR, 1.0, 0.9).unwrap();
        let prof = construct_single_jump(&fig3_spec(), &p).unwrap();
        assert_eq!(prof.jumps.len(), 1);
        let j = &prof.jumps[0];
        assert!((j.x - 217.0).abs() < 1e-12);
        assert!((j.h_left - 1.0292).abs() < 1e-3);
        assert_eq!(j.h_right, 1.0);
        assert_eq!(j.phi_left, 0.2);
        assert_eq!(j.phi_right, 0.5);
        // Far upstream the wave sits on its endstate.
        assert!((prof.h[0] - 1.0).abs() < 1e-12);
        assert!((prof.phi_minus - 0.2).abs() < 1e-12);
        assert!((prof.phi_plus - 0.5).abs() < 1e-12);
        // Depth grows monotonically toward the jump.
        for i in 1..=prof.jumps[0].index - 1 {
            assert!(prof.h[i] + 1e-15 >= prof.h[i - 1], "at i = {i}");
        }
    }

    #[test]
    fn single_jump_satisfies_the_relation_residual() {
        let p = PhysParams::new(G_PERP, G_PAR, 1.0, 0.9).unwrap();
        let prof = construct_single_jump(&fig3_spec(), &p).unwrap();
        assert!(
            prof.relation_residual() < 1e-8,
            "residual {}",
            prof.relation_residual()
        );
    }

    #[test]
    fn single_jump_agrees_with_construct_from_delta_on_its_own_samples() {
        let p = PhysParams::new(G_PERP, G_PAR, 1.0, 0.9).unwrap();
        let reference = construct_single_jump(&fig3_spec(), &p).unwrap();
        let jump = &reference.jumps[0];
        let values: Vec<f64> = reference.h.iter().map(|h| h - 1.0).collect();
        let spec = ProfileSpec {
            h0: 1.0,
            c: reference.c,
            kappa: reference.kappa,
            delta: DeltaShape::Samples {
                values,
                jumps: vec![SampleJump {
                    index: jump.index,
                    left_value: jump.h_left - 1.0,
                }],
            },
            domain: (0.0, 250.0),
            n_samples: 2501,
            period: None,
        };
        let rebuilt = construct_from_delta(&spec, &p).unwrap();
        for i in 0..reference.xs.len() {
            assert!(
                (rebuilt.h[i] - reference.h[i]).abs() < 1e-8,
                "h mismatch at node {i}"
            );
            assert!(
                (rebuilt.phi[i] - reference.phi[i]).abs() < 1e-8,
                "phi mismatch at node {i}: {} vs {}",
                rebuilt.phi[i],
                reference.phi[i]
            );
        }
    }

    #[test]
    fn periodic_profile_requires_zero_mean() {
        let p = gentle();
        let c = p.equilibrium_velocity(1.0);
        let spec = ProfileSpec {
            h0: 1.0,
            c,
            kappa: kappa_for(1.0, 2.0, &p),
            delta: DeltaShape::Sine {
                amplitude: 0.01,
                period: 10.0,
            },
            domain: (0.0, 10.0),
            n_samples: 1001,
            period: Some(10.0),
        };
        let prof = construct_periodic(&spec, &p).unwrap();
        assert_eq!(prof.period, Some(10.0));
        // Ends of the period line up.
        assert!((prof.h[0] - prof.h.last().unwrap()).abs() < 1e-12);
        assert!((prof.phi[0] - prof.phi.last().unwrap()).abs() < 1e-10);

        let bad = ProfileSpec {
            delta: DeltaShape::Bump {
                amplitude: 0.01,
                center: 5.0,
                half_width: 1.0,
            },
            ..spec
        };
        assert!(matches!(
            construct_periodic(&bad, &p),
            Err(RgError::NonZeroMean(_))
        ));
    }

    #[test]
    fn mollification_preserves_endstates_and_smooths_the_jump() {
        let p = PhysParams::new(G_PERP, G_PAR, 1.0, 0.9).unwrap();
        let sharp = construct_single_jump(&fig3_spec(), &p).unwrap();
        let smooth = mollify(&sharp, 0.5).unwrap();
        assert!(smooth.is_smooth());
        assert!((smooth.phi_minus - sharp.phi_minus).abs() < 1e-12);
        assert!((smooth.phi_plus - sharp.phi_plus).abs() < 1e-10);
        // Away from the jump the profiles agree.
        let (h_a, phi_a) = sharp.eval(100.0);
        let (h_b, phi_b) = smooth.eval(100.0);
        assert!((h_a - h_b).abs() < 1e-10);
        assert!((phi_a - phi_b).abs() < 1e-10);
        // At the jump the mollification interpolates.
        let (h_mid, _) = smooth.eval(217.0);
        assert!(h_mid < sharp.jumps[0].h_left && h_mid > 1.0);
        // Convolving h and phi separately breaks the nonlinear relation
        // near the blended jump by O(eps^2), nowhere else.
        assert!(
            smooth.relation_residual() < 1e-4,
            "residual {}",
            smooth.relation_residual()
        );
    }

    #[test]
    fn mollification_converges_to_the_sharp_profile() {
        let p = PhysParams::new(G_PERP, G_PAR, 1.0, 0.9).unwrap();
        let sharp = construct_single_jump(&fig3_spec(), &p).unwrap();
        // L1 distance of h over a window around the jump shrinks like eps.
        let window: Vec<f64> = (0..400).map(|i| 215.0 + i as f64 * 0.01).collect();
        let mut prev = f64::INFINITY;
        for eps in [0.4, 0.2, 0.1] {
            let smooth = mollify(&sharp, eps).unwrap();
            let l1: f64 = window
                .iter()
                .map(|&x| (smooth.eval(x).0 - sharp.eval(x).0).abs() * 0.01)
                .sum();
            assert!(l1 < 0.7 * prev, "eps = {eps}: L1 = {l1}, prev = {prev}");
            prev = l1;
        }
    }

    #[test]
    fn csv_export_lists_jumps_and_columns() {
        let p = PhysParams::new(G_PERP, G_PAR, 1.0, 0.9).unwrap();
        let prof = construct_single_jump(&fig3_spec(), &p).unwrap();
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# jumps: 217");
        assert_eq!(lines.next().unwrap(), "x,h,phi");
        assert_eq!(text.lines().count(), 2 + 2501);
    }

    #[test]
    fn support_indices_bracket_the_active_region() {
        // The bump lives on [2, 4] but its tails sink below the endstate
        // tolerance slightly inside, so the bracket lands near the edges
        // from either side.
        let p = gentle();
        let prof = construct_from_delta(&bump_spec(), &p).unwrap();
        let (lo, hi) = prof.support_indices().unwrap();
        assert!((prof.xs[lo] - 2.0).abs() < 0.3);
        assert!((prof.xs[hi] - 4.0).abs() < 0.3);
        assert!(prof.xs[lo] < 3.0 && 3.0 < prof.xs[hi]);
    }
}
