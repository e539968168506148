//! Finite-difference differentiation on uniform grids, segment-aware so that
//! stencils never straddle a discontinuity. Weights come from Fornberg's
//! recurrence, which handles the one-sided stencils near segment edges.

use crate::{error::RgError, Result};

/// Fornberg weights for the `m`-th derivative at `z` from nodes `xs`.
/// Returns one weight per node, exact for polynomials up to degree
/// `xs.len() - 1`.
pub fn fornberg_weights(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(m < n, "need more nodes than the derivative order");
    // Fornberg 1988, generation of finite difference formulas on arbitrary grids.
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

fn stencil_window(i: usize, n: usize, width: usize) -> (usize, usize) {
    let half = width / 2;
    let lo = i.saturating_sub(half).min(n.saturating_sub(width));
    (lo, lo + width)
}

/// `m`-th derivative of `ys` sampled at uniform spacing `dx`, fourth-order
/// stencils, one-sided at the ends. `ys.len()` must be at least `m + 5`.
pub fn derivative_uniform(ys: &[f64], dx: f64, m: usize) -> Result<Vec<f64>> {
    let n = ys.len();
    let width = 5 + m.saturating_sub(1);
    if n < width {
        return Err(RgError::GridTooCoarse(format!(
            "{n} samples cannot support a {width}-point stencil"
        )));
    }
    let mut out = vec![0.0; n];
    for i in 0..n {
        let (lo, hi) = stencil_window(i, n, width);
        let xs: Vec<f64> = (lo..hi).map(|j| (j as f64 - i as f64) * dx).collect();
        let w = fornberg_weights(0.0, &xs, m);
        out[i] = w.iter().zip(&ys[lo..hi]).map(|(wi, yi)| wi * yi).sum();
    }
    Ok(out)
}

/// Derivative over a grid split into smooth segments at `breaks` (indices of
/// the first sample of each new segment). Stencils stay inside segments.
pub fn derivative_segmented(ys: &[f64], dx: f64, m: usize, breaks: &[usize]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ys.len());
    let mut lo = 0;
    let mut bounds: Vec<usize> = breaks.to_vec();
    bounds.push(ys.len());
    for hi in bounds {
        if hi > lo {
            out.extend(derivative_uniform(&ys[lo..hi], dx, m)?);
        }
        lo = hi;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_reproduce_central_first_derivative() {
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = fornberg_weights(0.0, &xs, 1);
        let expect = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn fourth_order_on_a_cubic_is_exact() {
        let dx = 0.1;
        let ys: Vec<f64> = (0..40).map(|i| (i as f64 * dx).powi(3)).collect();
        let d = derivative_uniform(&ys, dx, 1).unwrap();
        for (i, di) in d.iter().enumerate() {
            let x = i as f64 * dx;
            assert!((di - 3.0 * x * x).abs() < 1e-10, "at x = {x}");
        }
        let d2 = derivative_uniform(&ys, dx, 2).unwrap();
        for (i, di) in d2.iter().enumerate() {
            let x = i as f64 * dx;
            assert!((di - 6.0 * x).abs() < 1e-9, "at x = {x}");
        }
    }

    #[test]
    fn segmented_derivative_ignores_the_jump() {
        // Two smooth pieces with a step between them; stencils must not mix.
        let dx = 0.05;
        let n = 60;
        let ys: Vec<f64> = (0..n)
            .map(|i| {
                let x = i as f64 * dx;
                if i < 30 {
                    x.sin()
                } else {
                    10.0 + x.cos()
                }
            })
            .collect();
        let d = derivative_segmented(&ys, dx, 1, &[30]).unwrap();
        for (i, di) in d.iter().enumerate() {
            let x = i as f64 * dx;
            let exact = if i < 30 { x.cos() } else { -x.sin() };
            // One-sided stencils at segment edges carry a larger constant.
            assert!((di - exact).abs() < 1e-5, "at i = {i}");
        }
    }
}
