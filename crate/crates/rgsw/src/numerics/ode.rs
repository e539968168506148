//! Adaptive Dormand-Prince 5(4) integration for the small ODE systems that
//! show up here: scalar profile equations and 2-component complex
//! eigenvalue systems. Steps are chosen by the usual scaled-error PI-free
//! controller; integration direction follows the sign of `x1 - x0`.

use crate::{error::RgError, Result};
use num_complex::Complex64;

/// State vectors the integrator can advance.
pub trait OdeState: Copy {
    fn zero() -> Self;
    /// `self += a * x`.
    fn axpy(&mut self, a: f64, x: &Self);
    /// Scaled RMS of `err` against `atol + rtol * max(|y0|, |y1|)`, per component.
    fn error_ratio(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64;
}

impl OdeState for f64 {
    fn zero() -> Self {
        0.0
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn error_ratio(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64 {
        let scale = atol + rtol * y0.abs().max(y1.abs());
        (err / scale).abs()
    }
}

impl OdeState for [Complex64; 2] {
    fn zero() -> Self {
        [Complex64::ZERO; 2]
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        self[0] += a * x[0];
        self[1] += a * x[1];
    }
    fn error_ratio(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            let scale = atol + rtol * y0[i].norm().max(y1[i].norm());
            let r = err[i].norm() / scale;
            acc += r * r;
        }
        (acc / 2.0).sqrt()
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// 5th-order weights equal A[5]; the embedded 4th-order weights follow.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integration options. `max_step` bounds the step magnitude; `max_steps`
/// bounds total accepted+rejected steps.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

/// Advance `y` from `x0` to `x1`. Calls `observe(x, y)` after every accepted
/// step (and once at the start).
pub fn rk45<S: OdeState>(
    f: &mut impl FnMut(f64, &S) -> S,
    x0: f64,
    x1: f64,
    y0: S,
    opts: &OdeOptions,
    observe: &mut impl FnMut(f64, &S),
) -> Result<S> {
    let span = x1 - x0;
    if span == 0.0 {
        observe(x0, &y0);
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    observe(x, &y);

    let mut h = (span.abs() / 100.0).min(opts.max_step).max(1e-12) * dir;
    let mut k: [S; 7] = [S::zero(); 7];
    k[0] = f(x, &y);

    for _ in 0..opts.max_steps {
        let remaining = x1 - x;
        if remaining.abs() <= 1e-14 * (1.0 + x.abs()) {
            return Ok(y);
        }
        if h.abs() > remaining.abs() {
            h = remaining;
        }

        for i in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i + 1) {
                yi.axpy(h * A[i][j], kj);
            }
            k[i + 1] = f(x + C[i] * h, &yi);
        }
        // k[6] is the FSAL derivative at the 5th-order solution.
        let mut y5 = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y5.axpy(h * A[5][j], kj);
        }
        let mut err = S::zero();
        for (j, kj) in k.iter().enumerate() {
            err.axpy(h * (if j < 6 { A[5][j] } else { 0.0 } - B4[j]), kj);
        }
        let ratio = S::error_ratio(&err, &y, &y5, opts.atol, opts.rtol);

        if ratio <= 1.0 {
            x += h;
            y = y5;
            k[0] = k[6];
            observe(x, &y);
        } else {
            k[0] = f(x, &y);
        }
        let factor = if ratio > 0.0 {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * factor).clamp(-opts.max_step, opts.max_step);
        if h.abs() < 1e-14 * (1.0 + x.abs()) {
            return Err(RgError::IntegrationFailure(format!(
                "step size underflow at x = {x}"
            )));
        }
    }
    Err(RgError::IntegrationFailure(format!(
        "step budget exhausted at x = {x} (of [{x0}, {x1}])"
    )))
}

/// Integrate across `nodes` (monotone in either direction), returning the
/// solution at every node. The integrator restarts cleanly at each node, so
/// right-hand sides may be only piecewise smooth provided the kinks lie on
/// nodes.
pub fn rk45_at_nodes<S: OdeState>(
    f: &mut impl FnMut(f64, &S) -> S,
    nodes: &[f64],
    y0: S,
    opts: &OdeOptions,
) -> Result<Vec<S>> {
    let mut out = Vec::with_capacity(nodes.len());
    let mut y = y0;
    out.push(y);
    for w in nodes.windows(2) {
        y = rk45(f, w[0], w[1], y, opts, &mut |_, _| {})?;
        out.push(y);
    }
    Ok(out)
}
