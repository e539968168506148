//! Small numerical kernels shared by the physics modules: an adaptive
//! Runge-Kutta integrator, finite-difference weights, fixed-grid quadrature,
//! Gauss-Legendre rules, and cubic Hermite tables.
//!
//! Nothing here knows about the model; everything is deterministic.

pub mod fd;
pub mod interp;
pub mod ode;
pub mod quad;

/// Compensated (Kahan) summation. Used where conservation drift is measured
/// against tolerances near machine precision.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_adversarial_input() {
        let xs: Vec<f64> = (0..100_000).map(|i| 1e-10 + (i as f64) * 0.0).collect();
        let exact = 1e-10 * 100_000.0;
        assert!((kahan_sum(xs.iter().copied()) - exact).abs() < 1e-22);
    }
}
