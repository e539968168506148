//! Numerical Evans function and eigenvalue counting for convective waves.
//!
//! The scalar eigenvalue ODE is integrated in its first-order form
//! `w1 = U`, `w2 = P U' - C_f c^2 U` with `P = h^2 (g' + 3 h phi)` taken
//! along the profile:
//!
//! ```text
//! w1' = (C_f c^2 w1 + w2) / P
//! w2' = (lambda^2 h + 2 lambda C_f c) w1
//! ```
//!
//! Both components are continuous across admissible profile jumps, so
//! integration passes through discontinuities without interface algebra. A
//! solution decaying to the left (relative to the weight) is shot from the
//! left truncation point, one decaying to the right from the right point,
//! and `D(lambda)` is their Wronskian at the matching point, the largest
//! jump. Each run subtracts the locally growing (left) or decaying (right)
//! spatial eigenvalue of the frozen-coefficient system, keeping the
//! integrated variables asymptotically constant; those eigenvalues sum to
//! the trace `C_f c^2 / P`, so the shifted Wronskian is independent of the
//! matching point. Dividing by the geometric mean of the two endstate
//! frozen Wronskians `P (mu_1 - mu_2)` makes `D` identically one on
//! constant profiles and `D -> 1` as `Re lambda -> +inf` along the real
//! axis. The normalization uses endstate data only, so mollifying a jump
//! perturbs `D` by `O(eps)` and nothing else; the unstable point spectrum
//! is exactly the zero set of `D` in the open right half plane.
//!
//! A weighted run changes only the admissibility requirement: the spatial
//! eigenvalues must straddle the weight line, `Re gamma_1 > -theta_- >
//! Re gamma_2` at the left endstate and the mirror condition on the right.
//! The weight never multiplies profile data. Contour counting refuses
//! rectangles that meet the (weighted) essential spectrum; lambda inside a
//! region of inconsistent splitting surfaces as `SplittingFailure` instead
//! of a silent miscount.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::RgError;
use crate::model::PhysParams;
use crate::numerics::ode::{rk45, rk45_at_nodes, OdeOptions};
use crate::profiles::{Side, WaveProfile};
use crate::spectral::constant::{essential_range, spatial_eigenvalues, weighted_dispersion_roots};
use crate::Result;

/// Minimum |D| tolerated while walking a counting contour.
const ZERO_THRESHOLD: f64 = 1e-6;

/// Exponential weight rates for the two tails. Zero is the unweighted
/// space; negative rates shift the tail essential spectrum leftward, the
/// convective-stability topology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub theta_minus: f64,
    pub theta_plus: f64,
}

impl Weights {
    /// Endstate rates `-g_par / (2 h0 (g' + 3 h0 phi))`, half the decay rate
    /// of the stationary tail equation. They center the admissible corridor
    /// between the spatial eigenvalues on the closed right half plane.
    pub fn default_for(profile: &WaveProfile) -> Self {
        let p = &profile.params;
        let rate =
            |phi: f64| -p.g_parallel / (2.0 * profile.h0 * (p.g_perp + 3.0 * profile.h0 * phi));
        Weights {
            theta_minus: rate(profile.phi_minus),
            theta_plus: rate(profile.phi_plus),
        }
    }
}

/// Left-decaying solution of the first-order system on the profile grid,
/// normalized to unit sup norm of `u`.
#[derive(Debug, Clone)]
pub struct EvansSolution {
    pub xs: Vec<f64>,
    pub u: Vec<Complex64>,
    pub du: Vec<Complex64>,
}

/// Rectangle `[re_min, re_max] x [-im_max, im_max]` walked counterclockwise.
/// `re_min > 0` keeps the contour clear of the origin, where the essential
/// spectrum touches the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_max: f64,
}

/// Outcome of an eigenvalue count over a contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnstableCount {
    /// Winding number of `D` along the contour; `None` when essential
    /// spectrum enters the rectangle and the argument principle does not
    /// apply.
    pub winding: Option<i64>,
    /// True when an endstate dispersion curve or the algebraic essential
    /// segment meets the closed rectangle.
    pub essential_intrusion: bool,
}

impl UnstableCount {
    /// Unstable modes the contour certifies: enclosed zeros of `D`, plus
    /// one when essential spectrum itself intrudes.
    pub fn enclosed(&self) -> u64 {
        self.winding.unwrap_or(0).max(0) as u64 + u64::from(self.essential_intrusion)
    }
}

fn big_p(h: f64, phi: f64, p: &PhysParams) -> f64 {
    h * h * (p.g_perp + 3.0 * h * phi)
}

/// Spatial eigenvalues of the frozen-coefficient system at a local state,
/// ordered by real part (principal square root). At the endstates they
/// coincide with `spatial_eigenvalues`, branch included.
fn local_mu(
    h: f64,
    phi: f64,
    lambda: Complex64,
    p: &PhysParams,
    c: f64,
) -> (Complex64, Complex64) {
    let pp = big_p(h, phi, p);
    let t = p.c_f * c * c / pp;
    let rad = Complex64::new(t * t, 0.0)
        + 4.0 * (lambda * lambda * h + 2.0 * lambda * p.c_f * c) / pp;
    let s = rad.sqrt();
    let half_t = Complex64::new(0.5 * t, 0.0);
    (half_t + 0.5 * s, half_t - 0.5 * s)
}

fn thetas(weights: Option<Weights>) -> (f64, f64) {
    match weights {
        Some(w) => (w.theta_minus, w.theta_plus),
        None => (0.0, 0.0),
    }
}

/// Consistent splitting in the chosen weight at both endstates.
fn check_splitting(
    profile: &WaveProfile,
    lambda: Complex64,
    weights: Option<Weights>,
) -> Result<()> {
    let p = &profile.params;
    let (tm, tp) = thetas(weights);
    for (phi, theta, side) in [
        (profile.phi_minus, tm, "left"),
        (profile.phi_plus, tp, "right"),
    ] {
        let (g1, g2) = spatial_eigenvalues(lambda, profile.h0, phi, p)?;
        if !(g1.re > -theta && -theta > g2.re) {
            return Err(RgError::SplittingFailure {
                lambda,
                detail: format!(
                    "{side} endstate eigenvalues Re = ({:.6}, {:.6}) do not straddle \
                     the weight line {:.6}",
                    g1.re, g2.re, -theta
                ),
            });
        }
    }
    Ok(())
}

/// Matching point: the largest jump strictly inside `(x_lo, x_hi)`, first
/// among ties; otherwise 0 when interior, else the midpoint.
fn matching_point(profile: &WaveProfile, x_lo: f64, x_hi: f64) -> f64 {
    let mut best: Option<(f64, f64)> = None;
    for j in &profile.jumps {
        let size = (j.h_left - j.h_right).abs();
        if j.x > x_lo && j.x < x_hi && best.map_or(true, |(s, _)| size > s) {
            best = Some((size, j.x));
        }
    }
    best.map(|(_, x)| x).unwrap_or(if x_lo < 0.0 && 0.0 < x_hi {
        0.0
    } else {
        0.5 * (x_lo + x_hi)
    })
}

/// Smooth pieces of `[a, b]` split at interior jumps, in spatial order.
fn split_segments(profile: &WaveProfile, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut bounds = vec![a];
    for j in &profile.jumps {
        if j.x > a && j.x < b {
            bounds.push(j.x);
        }
    }
    bounds.push(b);
    bounds.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Which local eigenvalue a run subtracts from the flow.
#[derive(Clone, Copy)]
enum Shift {
    Growing,
    Decaying,
}

/// Integrate the shifted system across `segments` in traversal order (each
/// pair is `(start, end)` of one smooth piece). Magnitudes are renormalized
/// chunk by chunk; the accumulated log scale is returned beside the state.
fn integrate_side(
    profile: &WaveProfile,
    lambda: Complex64,
    segments: &[(f64, f64)],
    mut v: [Complex64; 2],
    shift: Shift,
) -> Result<([Complex64; 2], f64)> {
    let p = &profile.params;
    let c = profile.c;
    let cfc2 = p.c_f * c * c;
    let opts = OdeOptions {
        rtol: 1e-10,
        atol: 1e-250,
        ..OdeOptions::default()
    };
    let mut log_scale = 0.0;
    for &(a, b) in segments {
        let lo = a.min(b);
        let hi = a.max(b);
        // Stage points may land just outside the segment; clamp to the
        // segment's own one-sided limits so jumps never leak across.
        let mut rhs = |x: f64, v: &[Complex64; 2]| -> [Complex64; 2] {
            let (h, phi) = if x <= lo {
                profile.eval_side(lo, Side::Right)
            } else if x >= hi {
                profile.eval_side(hi, Side::Left)
            } else {
                profile.eval(x)
            };
            let pp = big_p(h, phi, p);
            let s = match shift {
                Shift::Growing => local_mu(h, phi, lambda, p, c).0,
                Shift::Decaying => local_mu(h, phi, lambda, p, c).1,
            };
            [
                (cfc2 * v[0] + v[1]) / pp - s * v[0],
                (lambda * lambda * h + 2.0 * lambda * p.c_f * c) * v[0] - s * v[1],
            ]
        };
        let chunk = (25.0 / (1.0 + 0.35 * lambda.norm())).clamp(0.25, 25.0);
        let n_chunks = ((b - a).abs() / chunk).ceil().max(1.0) as usize;
        for k in 0..n_chunks {
            let x0 = a + (b - a) * k as f64 / n_chunks as f64;
            let x1 = if k + 1 == n_chunks {
                b
            } else {
                a + (b - a) * (k + 1) as f64 / n_chunks as f64
            };
            v = rk45(&mut rhs, x0, x1, v, &opts, &mut |_, _| {})?;
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if !n.is_finite() || n == 0.0 {
                return Err(RgError::OverflowGuard);
            }
            v = [v[0] / n, v[1] / n];
            log_scale += n.ln();
        }
    }
    Ok((v, log_scale))
}

/// Evans function `D(lambda)` of the wave, in the weight `weights` (none
/// for the unweighted space). Analytic and nonvanishing where consistent
/// splitting holds; its zeros in the open right half plane are the unstable
/// eigenvalues.
pub fn evans(
    profile: &WaveProfile,
    lambda: Complex64,
    weights: Option<Weights>,
) -> Result<Complex64> {
    let (i_lo, i_hi) = profile.support_indices()?;
    let x_lo = profile.xs[i_lo];
    let x_hi = profile.xs[i_hi];
    check_splitting(profile, lambda, weights)?;
    let p = &profile.params;
    let c = profile.c;
    let cfc2 = p.c_f * c * c;
    let x_m = matching_point(profile, x_lo, x_hi);

    // Shoot along the locally growing direction from the left, the locally
    // decaying one from the right.
    let (h_l, phi_l) = profile.eval_side(x_lo, Side::Right);
    let (h_r, phi_r) = profile.eval_side(x_hi, Side::Left);
    let p_l = big_p(h_l, phi_l, p);
    let p_r = big_p(h_r, phi_r, p);
    let (mu1_l, mu2_l) = local_mu(h_l, phi_l, lambda, p, c);
    let (mu1_r, mu2_r) = local_mu(h_r, phi_r, lambda, p, c);
    let one = Complex64::new(1.0, 0.0);
    let v_l0 = [one, p_l * mu1_l - cfc2];
    let v_r0 = [one, p_r * mu2_r - cfc2];

    let segs_left = split_segments(profile, x_lo, x_m);
    let mut segs_right = split_segments(profile, x_m, x_hi);
    segs_right.reverse();
    for seg in &mut segs_right {
        *seg = (seg.1, seg.0);
    }

    let (v_l, log_l) = integrate_side(profile, lambda, &segs_left, v_l0, Shift::Growing)?;
    let (v_r, log_r) = integrate_side(profile, lambda, &segs_right, v_r0, Shift::Decaying)?;
    let det = v_l[0] * v_r[1] - v_l[1] * v_r[0];

    // Endstate frozen Wronskians. Each factor's square root stays in the
    // right half plane wherever local_mu itself is branch-clean, so the
    // product adds no cuts of its own.
    let z_l = p_l * (mu1_l - mu2_l);
    let z_r = p_r * (mu1_r - mu2_r);
    let norm = -(z_l.sqrt() * z_r.sqrt());
    if norm.norm() < 1e-12 * p_l.max(p_r) * (1.0 + lambda.norm()) {
        return Err(RgError::SplittingFailure {
            lambda,
            detail: "frozen Wronskian degenerates at an endstate".into(),
        });
    }

    let m = det / norm;
    let mag = m.norm();
    if mag == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let total = log_l + log_r + mag.ln();
    if total > 600.0 {
        return Err(RgError::OverflowGuard);
    }
    Ok(m / mag * total.exp())
}

/// Left-decaying solution on the full profile grid, for eigenfunction
/// reconstruction and residual checks. The run is shifted by the constant
/// left rate `gamma_1^-` and unshifted exactly at the nodes, so `u` carries
/// the true shape with sup norm one; `du` is recovered through the
/// first-order system, right-continuous like the sample arrays.
pub fn evans_solution(
    profile: &WaveProfile,
    lambda: Complex64,
    weights: Option<Weights>,
) -> Result<EvansSolution> {
    profile.support_indices()?;
    check_splitting(profile, lambda, weights)?;
    let p = &profile.params;
    let c = profile.c;
    let cfc2 = p.c_f * c * c;
    let (g1, _) = spatial_eigenvalues(lambda, profile.h0, profile.phi_minus, p)?;
    let xs = &profile.xs;
    let n = xs.len();
    let x0 = xs[0];
    if g1.re * (xs[n - 1] - x0) > 600.0 {
        return Err(RgError::OverflowGuard);
    }

    let mut boundaries = vec![0usize];
    for j in &profile.jumps {
        if j.index > 0 && j.index < n - 1 {
            boundaries.push(j.index);
        }
    }
    boundaries.push(n - 1);
    boundaries.dedup();

    let (h_l, phi_l) = profile.eval_side(x0, Side::Right);
    let mut v = [
        Complex64::new(1.0, 0.0),
        Complex64::new(big_p(h_l, phi_l, p), 0.0) * g1 - cfc2,
    ];
    let opts = OdeOptions {
        rtol: 1e-10,
        atol: 1e-250,
        ..OdeOptions::default()
    };
    let mut states = vec![[Complex64::new(0.0, 0.0); 2]; n];
    for w in boundaries.windows(2) {
        let (a_idx, b_idx) = (w[0], w[1]);
        let (lo, hi) = (xs[a_idx], xs[b_idx]);
        let mut rhs = |x: f64, v: &[Complex64; 2]| -> [Complex64; 2] {
            let (h, phi) = if x <= lo {
                profile.eval_side(lo, Side::Right)
            } else if x >= hi {
                profile.eval_side(hi, Side::Left)
            } else {
                profile.eval(x)
            };
            let pp = big_p(h, phi, p);
            [
                (cfc2 * v[0] + v[1]) / pp - g1 * v[0],
                (lambda * lambda * h + 2.0 * lambda * p.c_f * c) * v[0] - g1 * v[1],
            ]
        };
        let vals = rk45_at_nodes(&mut rhs, &xs[a_idx..=b_idx], v, &opts)?;
        for (off, val) in vals.iter().enumerate() {
            states[a_idx + off] = *val;
        }
        v = *vals.last().unwrap();
        if !(v[0].is_finite() && v[1].is_finite()) {
            return Err(RgError::OverflowGuard);
        }
    }

    // Undo the shift at bounded magnitude: u_i = v1_i e^{g1 (x_i-x0) - K},
    // K the sup of the log magnitudes, so sup |u| = 1 exactly.
    let log_mag: Vec<f64> = states
        .iter()
        .zip(xs)
        .map(|(s, &x)| g1.re * (x - x0) + s[0].norm().ln())
        .collect();
    let k = log_mag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !k.is_finite() {
        return Err(RgError::OverflowGuard);
    }
    let mut u = Vec::with_capacity(n);
    let mut du = Vec::with_capacity(n);
    for i in 0..n {
        let delta = xs[i] - x0;
        let phase = Complex64::new(0.0, g1.im * delta).exp();
        let unshift = |z: Complex64| -> Complex64 {
            let m = z.norm();
            if m == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                z / m * (g1.re * delta - k + m.ln()).exp() * phase
            }
        };
        let ui = unshift(states[i][0]);
        let w2i = unshift(states[i][1]);
        let pp = big_p(profile.h[i], profile.phi[i], p);
        u.push(ui);
        du.push((cfc2 * ui + w2i) / pp);
    }
    Ok(EvansSolution {
        xs: profile.xs.clone(),
        u,
        du,
    })
}

/// Count unstable modes inside the rectangle by the argument principle,
/// after checking that no essential spectrum (in the run's weight) meets
/// it. Phase steps are refined adaptively below pi/2.
pub fn count_unstable(
    profile: &WaveProfile,
    contour: &ContourSpec,
    weights: Option<Weights>,
) -> Result<UnstableCount> {
    if !(contour.re_min > 0.0 && contour.re_max > contour.re_min && contour.im_max > 0.0) {
        return Err(RgError::InvalidParameter(
            "contour rectangle needs 0 < re_min < re_max and im_max > 0".into(),
        ));
    }
    profile.support_indices()?;
    let p = &profile.params;
    let h0 = profile.h0;
    let c = profile.c;
    let (tm, tp) = thetas(weights);

    let (lo, hi) = essential_range(profile);
    let mut intrusion = lo <= contour.re_max && hi >= contour.re_min;
    if !intrusion {
        'sides: for (phi0, theta) in [(profile.phi_minus, tm), (profile.phi_plus, tp)] {
            let a = p.g_perp + 3.0 * h0 * phi0;
            let b = 2.0 * p.c_f * c / h0;
            let xi_max = 3.0 * (contour.im_max + b + p.g_parallel + 1.0) / (h0 * a).sqrt() + 2.0;
            let steps = 20_000;
            for k in 0..=steps {
                let xi = -xi_max + 2.0 * xi_max * k as f64 / steps as f64;
                for r in weighted_dispersion_roots(xi, theta, h0, phi0, p) {
                    if r.re >= contour.re_min
                        && r.re <= contour.re_max
                        && r.im.abs() <= contour.im_max
                    {
                        intrusion = true;
                        break 'sides;
                    }
                }
            }
        }
    }
    if intrusion {
        return Ok(UnstableCount {
            winding: None,
            essential_intrusion: true,
        });
    }

    let corners = [
        Complex64::new(contour.re_min, -contour.im_max),
        Complex64::new(contour.re_max, -contour.im_max),
        Complex64::new(contour.re_max, contour.im_max),
        Complex64::new(contour.re_min, contour.im_max),
    ];
    let mut points = Vec::new();
    for e in 0..4 {
        let (za, zb) = (corners[e], corners[(e + 1) % 4]);
        let count = ((zb - za).norm() / 0.5).ceil().max(4.0) as usize;
        for k in 0..count {
            points.push(za + (zb - za) * (k as f64 / count as f64));
        }
    }

    let mut eval = |lambda: Complex64| -> Result<Complex64> {
        let d = evans(profile, lambda, weights)?;
        let m = d.norm();
        if m < ZERO_THRESHOLD {
            return Err(RgError::ContourThroughZero {
                min_abs: m,
                threshold: ZERO_THRESHOLD,
            });
        }
        Ok(d)
    };
    let values: Vec<Complex64> = points
        .iter()
        .map(|&z| eval(z))
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for i in 0..points.len() {
        let j = (i + 1) % points.len();
        total += refine_arc(&mut eval, points[i], values[i], points[j], values[j], 26)?;
    }
    let w = total / TAU;
    let rounded = w.round();
    if (w - rounded).abs() > 0.25 {
        return Err(RgError::IntegrationFailure(format!(
            "contour phase did not close to an integer winding (got {w:.6})"
        )));
    }
    Ok(UnstableCount {
        winding: Some(rounded as i64),
        essential_intrusion: false,
    })
}

/// Phase increment of `D` from `za` to `zb`, bisecting until every step
/// turns by less than pi/2.
fn refine_arc(
    eval: &mut impl FnMut(Complex64) -> Result<Complex64>,
    za: Complex64,
    da: Complex64,
    zb: Complex64,
    db: Complex64,
    depth: u32,
) -> Result<f64> {
    let step = (db / da).arg();
    if step.abs() < FRAC_PI_2 {
        return Ok(step);
    }
    if depth == 0 {
        return Err(RgError::IntegrationFailure(
            "contour refinement exhausted its subdivision budget".into(),
        ));
    }
    let zm = 0.5 * (za + zb);
    let dm = eval(zm)?;
    Ok(refine_arc(eval, za, da, zm, dm, depth - 1)?
        + refine_arc(eval, zm, dm, zb, db, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{construct_single_jump, SingleJumpSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const G_PERP: f64 = 9.510565162951535;
    const G_PAR: f64 = 3.090169943749474;

    fn fig2_params() -> PhysParams {
        PhysParams::new(G_PERP, G_PAR, 1.0, 0.9).unwrap()
    }

    fn fig4_params() -> PhysParams {
        PhysParams::new(8.660254037844387, 5.0, 0.05, 0.04).unwrap()
    }

    fn fig3_profile(n: usize) -> WaveProfile {
        let spec = SingleJumpSpec {
            h0: 1.0,
            phi_left: 0.2,
            phi_right: 0.5,
            x_jump: 217.0,
            domain: (0.0, 250.0),
            n_samples: n,
        };
        construct_single_jump(&spec, &fig2_params()).unwrap()
    }

    fn constant_profile(phi0: f64, p: &PhysParams) -> WaveProfile {
        let spec = SingleJumpSpec {
            h0: 1.0,
            phi_left: phi0,
            phi_right: phi0,
            x_jump: 20.0,
            domain: (0.0, 40.0),
            n_samples: 401,
        };
        construct_single_jump(&spec, p).unwrap()
    }

    #[test]
    fn constant_profiles_have_unit_evans_function() {
        let p = fig2_params();
        let prof = constant_profile(0.35, &p);
        let lambdas = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 2.0),
            Complex64::new(3.0, -4.0),
            Complex64::new(0.01, 0.3),
        ];
        for lambda in lambdas {
            let d = evans(&prof, lambda, None).unwrap();
            assert!(
                (d - Complex64::new(1.0, 0.0)).norm() < 1e-9,
                "lambda = {lambda}, D = {d}"
            );
            let dw = evans(&prof, lambda, Some(Weights::default_for(&prof))).unwrap();
            assert!((dw - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn evans_values_are_conjugate_symmetric() {
        let prof = fig3_profile(2001);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..12 {
            let lambda = Complex64::new(rng.gen_range(0.05..4.0), rng.gen_range(-6.0..6.0));
            let d = evans(&prof, lambda, None).unwrap();
            let dc = evans(&prof, lambda.conj(), None).unwrap();
            assert!(
                (dc - d.conj()).norm() < 1e-10 * d.norm(),
                "lambda = {lambda}: D = {d}, D(conj) = {dc}"
            );
        }
    }

    #[test]
    fn normalization_approaches_one_for_large_real_lambda() {
        // High contrast between the endstate impedances makes a wrong
        // matching normalization show up as an O(1) offset.
        let p = fig2_params();
        let spec = SingleJumpSpec {
            h0: 1.0,
            phi_left: 0.2,
            phi_right: 5.0,
            x_jump: 130.0,
            domain: (0.0, 160.0),
            n_samples: 1601,
        };
        let prof = construct_single_jump(&spec, &p).unwrap();
        let err = |lambda: f64| {
            let d = evans(&prof, Complex64::new(lambda, 0.0), None).unwrap();
            (d - Complex64::new(1.0, 0.0)).norm()
        };
        let (e25, e50, e100) = (err(25.0), err(50.0), err(100.0));
        assert!(e100 < 0.02, "e25 = {e25}, e50 = {e50}, e100 = {e100}");
        assert!(e100 < 0.7 * e50 && e50 < 0.7 * e25);
    }

    #[test]
    fn weights_do_not_change_the_evans_value_where_both_apply() {
        let prof = fig3_profile(2001);
        let lambda = Complex64::new(0.8, 1.2);
        let plain = evans(&prof, lambda, None).unwrap();
        let weighted = evans(&prof, lambda, Some(Weights::default_for(&prof))).unwrap();
        assert!((plain - weighted).norm() < 1e-12 * plain.norm());
    }

    #[test]
    fn stable_wave_has_no_zeros_in_a_small_right_half_plane_box() {
        let prof = fig3_profile(2001);
        let contour = ContourSpec {
            re_min: 0.5,
            re_max: 1.5,
            im_max: 1.0,
        };
        let count = count_unstable(&prof, &contour, None).unwrap();
        assert_eq!(count.winding, Some(0));
        assert!(!count.essential_intrusion);
        assert_eq!(count.enclosed(), 0);
    }

    #[test]
    fn evans_stays_away_from_zero_on_the_imaginary_side_of_a_stable_wave() {
        let prof = fig3_profile(2001);
        for alpha in [0.3, 1.0, 3.0] {
            let d = evans(&prof, Complex64::new(1e-4, alpha), None).unwrap();
            assert!(d.norm() > 1e-3, "alpha = {alpha}, |D| = {}", d.norm());
        }
    }

    #[test]
    fn unstable_endstates_report_essential_intrusion() {
        let p = fig4_params();
        let prof = constant_profile(0.1, &p);
        let contour = ContourSpec {
            re_min: 1e-3,
            re_max: 2.0,
            im_max: 4.0,
        };
        let count = count_unstable(&prof, &contour, None).unwrap();
        assert_eq!(count.winding, None);
        assert!(count.essential_intrusion);
        assert!(count.enclosed() >= 1);
    }

    #[test]
    fn splitting_failure_inside_the_unweighted_essential_region() {
        use crate::spectral::constant::dispersion_roots;
        let p = fig4_params();
        let prof = constant_profile(0.1, &p);
        // A dispersion root at small xi sits on the essential curve; just
        // left of it the splitting cannot be consistent.
        let on_curve = dispersion_roots(0.3, 1.0, 0.1, &p)
            .into_iter()
            .max_by(|a, b| a.re.partial_cmp(&b.re).unwrap())
            .unwrap();
        assert!(on_curve.re > 0.0);
        let hit = [0.05, 0.1, 0.2].iter().any(|s| {
            matches!(
                evans(&prof, on_curve - Complex64::new(*s, 0.0), None),
                Err(RgError::SplittingFailure { .. })
            )
        });
        assert!(hit, "no splitting failure found left of the essential curve");
    }

    #[test]
    fn weighted_count_is_zero_for_the_unstable_parameter_wave() {
        // Endstates fail the hydrodynamic condition, so the unweighted
        // essential spectrum fills the contour; the default weights move it
        // across the axis and the weighted point count is clean.
        let p = fig4_params();
        let spec = SingleJumpSpec {
            h0: 1.0,
            phi_left: 0.3,
            phi_right: 0.1,
            x_jump: 80.0,
            domain: (0.0, 110.0),
            n_samples: 1101,
        };
        let prof = construct_single_jump(&spec, &p).unwrap();
        let contour = ContourSpec {
            re_min: 0.05,
            re_max: 1.5,
            im_max: 3.0,
        };
        let unweighted = count_unstable(&prof, &contour, None).unwrap();
        assert!(unweighted.essential_intrusion);
        let weights = Weights::default_for(&prof);
        let count = count_unstable(&prof, &contour, Some(weights)).unwrap();
        assert_eq!(count.winding, Some(0));
        assert!(!count.essential_intrusion);
    }

    #[test]
    fn left_solution_stays_consistent_with_the_first_order_system() {
        let prof = fig3_profile(2001);
        let lambda = Complex64::new(0.4, 0.3);
        let sol = evans_solution(&prof, lambda, None).unwrap();
        let sup = sol.u.iter().map(|u| u.norm()).fold(0.0, f64::max);
        assert!((sup - 1.0).abs() < 1e-12);
        // Decay on the far left: the support starts well inside the domain.
        assert!(sol.u[0].norm() < 1e-6);
        // w2 = P u' - C_f c^2 u is continuous at the jump even though du
        // and P both jump there.
        let p = &prof.params;
        let cfc2 = p.c_f * prof.c * prof.c;
        let j = prof.jumps[0].index;
        let w2 = |i: usize| {
            big_p(prof.h[i], prof.phi[i], p) * sol.du[i] - cfc2 * sol.u[i]
        };
        let left_step = (w2(j - 1) - w2(j - 2)).norm() + 1e-300;
        assert!((w2(j) - w2(j - 1)).norm() < 20.0 * left_step);
    }

    #[test]
    fn contour_validation_rejects_bad_rectangles() {
        let prof = fig3_profile(601);
        for bad in [
            ContourSpec {
                re_min: 0.0,
                re_max: 1.0,
                im_max: 1.0,
            },
            ContourSpec {
                re_min: 1.0,
                re_max: 0.5,
                im_max: 1.0,
            },
            ContourSpec {
                re_min: 0.5,
                re_max: 1.0,
                im_max: 0.0,
            },
        ] {
            assert!(matches!(
                count_unstable(&prof, &bad, None),
                Err(RgError::InvalidParameter(_))
            ));
        }
    }
}
