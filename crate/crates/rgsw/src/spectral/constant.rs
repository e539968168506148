//! Spectrum of the linearization about a constant equilibrium state.
//!
//! About `(h, U, Phi, phi) = (h0, c, 0, phi0)` with `c` the equilibrium
//! velocity of `h0`, Fourier modes `e^{i xi x + lambda t}` of the reduced
//! scalar problem satisfy the dispersion relation
//!
//! ```text
//!     lambda^2 + (2 C_f c / h0) lambda + i xi g|| + xi^2 h0 (g' + 3 h0 phi0) = 0.
//! ```
//!
//! Conversely, fixing `lambda` and solving for spatial behaviour `e^{gamma x}`
//! gives the characteristic roots used by the Evans machinery to separate
//! decay from growth at the two infinities.

use num_complex::Complex64;

use crate::error::RgError;
use crate::model::{froude_endstate, PhysParams};
use crate::profiles::WaveProfile;
use crate::Result;

/// Relative tolerance deciding when a radicand sits on the principal branch
/// cut of the square root.
const CUT_TOL: f64 = 1e-12;

/// Temporal eigenvalues of the constant-state linearization at spatial
/// frequency `xi`. The first root vanishes at `xi = 0`, the second equals
/// `-2 C_f c / h0` there; both depend continuously on `xi`.
pub fn dispersion_roots(xi: f64, h0: f64, phi0: f64, p: &PhysParams) -> [Complex64; 2] {
    let c = p.equilibrium_velocity(h0);
    let b = 2.0 * p.c_f * c / h0;
    let q = Complex64::new(
        xi * xi * h0 * (p.g_perp + 3.0 * h0 * phi0),
        xi * p.g_parallel,
    );
    let s = (Complex64::new(b * b, 0.0) - 4.0 * q).sqrt();
    [
        0.5 * (-Complex64::new(b, 0.0) + s),
        0.5 * (-Complex64::new(b, 0.0) - s),
    ]
}

/// Largest real part attained by either dispersion root over a uniform grid
/// of `n` frequencies spanning `[xi_lo, xi_hi]`.
pub fn dispersion_max_re(h0: f64, phi0: f64, p: &PhysParams, xi_lo: f64, xi_hi: f64, n: usize) -> f64 {
    let n = n.max(2);
    let step = (xi_hi - xi_lo) / (n - 1) as f64;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let xi = xi_lo + i as f64 * step;
        for root in dispersion_roots(xi, h0, phi0, p) {
            worst = worst.max(root.re);
        }
    }
    worst
}

/// Hydrodynamic stability of the constant state: strict Froude condition
/// `F < 2`, equivalently `c^2 < 4 h0 (g' + 3 h0 phi0)`. The marginal case
/// `F = 2` counts as unstable.
pub fn hydro_stable(h0: f64, phi0: f64, p: &PhysParams) -> bool {
    froude_endstate(h0, phi0, p) < 2.0
}

/// Dispersion roots in the exponentially weighted topology `e^{theta x}`:
/// the essential-spectrum curves move to where the spatial root has real
/// part `-theta`, so they solve the quadratic with `gamma = -theta + i xi`.
/// `theta = 0` recovers [`dispersion_roots`].
pub fn weighted_dispersion_roots(
    xi: f64,
    theta: f64,
    h0: f64,
    phi0: f64,
    p: &PhysParams,
) -> [Complex64; 2] {
    let c = p.equilibrium_velocity(h0);
    let b = 2.0 * p.c_f * c / h0;
    let a = h0 * (p.g_perp + 3.0 * h0 * phi0);
    let gamma = Complex64::new(-theta, xi);
    let q = p.g_parallel * gamma - a * gamma * gamma;
    let s = (Complex64::new(b * b, 0.0) - 4.0 * q).sqrt();
    [
        0.5 * (-Complex64::new(b, 0.0) + s),
        0.5 * (-Complex64::new(b, 0.0) - s),
    ]
}

/// Spatial characteristic roots `(gamma_1, gamma_2)` of the reduced problem
/// at a constant state, `Re gamma_1 >= Re gamma_2`. At `lambda = 0` they are
/// `g|| / (h0 (g' + 3 h0 phi0))` and `0`.
///
/// The principal square root makes both roots analytic in `lambda` away from
/// the set where the radicand is real and nonpositive; on that set the roots
/// collide or swap branches and the call fails with [`RgError::BranchCut`],
/// so contours must be routed around it.
pub fn spatial_eigenvalues(
    lambda: Complex64,
    h0: f64,
    phi0: f64,
    p: &PhysParams,
) -> Result<(Complex64, Complex64)> {
    let c = p.equilibrium_velocity(h0);
    let a = p.g_perp + 3.0 * h0 * phi0;
    let g = p.g_parallel;
    let w = Complex64::new(g * g, 0.0) + 4.0 * a * (2.0 * p.c_f * c * lambda + h0 * lambda * lambda);
    if w.re <= 0.0 && w.im.abs() <= CUT_TOL * (1.0 + w.norm()) {
        return Err(RgError::BranchCut(lambda));
    }
    let s = w.sqrt();
    let den = 2.0 * h0 * a;
    Ok(((g + s) / den, (g - s) / den))
}

/// Real interval swept by `-2 (C_f - C_t) c^3 / (h^3 phi)` along the profile,
/// jump limits included: the segment of essential spectrum contributed by the
/// enstrophy relaxation mode.
pub fn essential_range(profile: &WaveProfile) -> (f64, f64) {
    let p = &profile.params;
    let c = profile.c;
    let coeff = -2.0 * (p.c_f - p.c_t) * c * c * c;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut push = |h: f64, phi: f64| {
        let v = coeff / (h * h * h * phi);
        lo = lo.min(v);
        hi = hi.max(v);
    };
    for (h, phi) in profile.h.iter().zip(&profile.phi) {
        push(*h, *phi);
    }
    for j in &profile.jumps {
        push(j.h_left, j.phi_left);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const G_PERP: f64 = 9.510565162951535;
    const G_PAR: f64 = 3.090169943749474;

    fn fig2_params() -> PhysParams {
        PhysParams::new(G_PERP, G_PAR, 1.0, 0.9).unwrap()
    }

    #[test]
    fn dispersion_roots_satisfy_vieta() {
        let p = fig2_params();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let xi: f64 = rng.gen_range(-80.0..80.0);
            let h0: f64 = rng.gen_range(0.3..3.0);
            let phi0: f64 = rng.gen_range(0.05..2.0);
            let c = p.equilibrium_velocity(h0);
            let [r1, r2] = dispersion_roots(xi, h0, phi0, &p);
            let sum = r1 + r2;
            let prod = r1 * r2;
            let b = 2.0 * p.c_f * c / h0;
            let q = Complex64::new(xi * xi * h0 * (p.g_perp + 3.0 * h0 * phi0), xi * p.g_parallel);
            let scale = b.abs().max(q.norm()).max(1.0);
            assert!((sum + b).norm() < 1e-12 * scale);
            assert!((prod - q).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn zero_frequency_roots_are_zero_and_drag() {
        let p = fig2_params();
        let (h0, phi0) = (1.0, 0.2);
        let c = p.equilibrium_velocity(h0);
        let [r1, r2] = dispersion_roots(0.0, h0, phi0, &p);
        assert!(r1.norm() < 1e-14);
        assert!((r2 - Complex64::new(-2.0 * p.c_f * c / h0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn froude_two_is_the_exact_stability_threshold() {
        // g' + 3 h0 phi0 = 9.5 + 0.75 = 10.25 and g|| / C_f = 41 are exact
        // in binary, so F = sqrt(41 / 10.25) = 2 exactly; the marginal state
        // must count as unstable.
        let p = PhysParams::new(9.5, 41.0, 1.0, 0.5).unwrap();
        let (h0, phi_marginal) = (1.0, 0.25);
        assert_eq!(froude_endstate(h0, phi_marginal, &p), 2.0);
        assert!(!hydro_stable(h0, phi_marginal, &p));
        assert!(hydro_stable(h0, phi_marginal + 1e-6, &p));
        assert!(!hydro_stable(h0, phi_marginal - 1e-6, &p));
    }

    #[test]
    fn unstable_states_have_positive_growth_at_every_nonzero_frequency() {
        // For F > 2 one dispersion branch stays in the right half plane for
        // all xi != 0; for F < 2 both branches stay in the closed left half
        // plane, touching it only at xi = 0.
        let p = PhysParams::new(9.5, 41.0, 1.0, 0.5).unwrap();
        let h0 = 1.0;
        let phi_marginal = 0.25;
        for xi in [-40.0, -3.0, 0.7, 12.0] {
            let unstable = dispersion_roots(xi, h0, phi_marginal - 1e-3, &p);
            assert!(unstable.iter().any(|r| r.re > 0.0), "xi = {xi}");
            let stable = dispersion_roots(xi, h0, phi_marginal + 1e-3, &p);
            assert!(stable.iter().all(|r| r.re < 0.0), "xi = {xi}");
        }
    }

    #[test]
    fn grid_maximum_matches_the_froude_verdict() {
        let p = fig2_params();
        let stable = dispersion_max_re(1.0, 0.2, &p, -100.0, 100.0, 4001);
        assert!(stable <= 0.0);
        assert!(hydro_stable(1.0, 0.2, &p));

        let p4 = PhysParams::new(8.660254037844387, 5.0, 0.05, 0.04).unwrap();
        let unstable = dispersion_max_re(1.0, 0.1, &p4, -100.0, 100.0, 4001);
        assert!(unstable > 0.0);
        assert!(!hydro_stable(1.0, 0.1, &p4));
    }

    #[test]
    fn spatial_roots_at_lambda_zero() {
        let p = fig2_params();
        let (h0, phi0) = (1.0, 0.35);
        let (g1, g2) = spatial_eigenvalues(Complex64::new(0.0, 0.0), h0, phi0, &p).unwrap();
        let expect = p.g_parallel / (h0 * (p.g_perp + 3.0 * h0 * phi0));
        assert!((g1 - Complex64::new(expect, 0.0)).norm() < 1e-13);
        assert!(g2.norm() < 1e-13);
    }

    #[test]
    fn spatial_roots_invert_the_dispersion_relation() {
        // If lambda solves the dispersion relation at frequency xi, then
        // gamma = i xi must be a spatial root at that lambda.
        let p = fig2_params();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..120 {
            let xi: f64 = rng.gen_range(0.05..40.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let h0: f64 = rng.gen_range(0.4..2.5);
            let phi0: f64 = rng.gen_range(0.05..1.5);
            for lambda in dispersion_roots(xi, h0, phi0, &p) {
                let (g1, g2) = spatial_eigenvalues(lambda, h0, phi0, &p).unwrap();
                let target = Complex64::new(0.0, xi);
                let err = (g1 - target).norm().min((g2 - target).norm());
                assert!(
                    err < 1e-10 * xi.abs().max(1.0),
                    "xi = {xi}, lambda = {lambda}, roots ({g1}, {g2})"
                );
            }
        }
    }

    #[test]
    fn branch_cut_points_are_detected() {
        let p = fig2_params();
        let (h0, phi0) = (1.0, 0.2);
        let c = p.equilibrium_velocity(h0);
        let a = p.g_perp + 3.0 * h0 * phi0;
        // Real lambda with the radicand at exactly -1:
        // h0 lambda^2 + 2 C_f c lambda + (g||^2 + 1) / (4a) = 0.
        let disc = 4.0 * p.c_f * p.c_f * c * c - h0 * (p.g_parallel * p.g_parallel + 1.0) / a;
        assert!(disc > 0.0, "test setup expects real roots");
        let lambda = Complex64::new((-2.0 * p.c_f * c + disc.sqrt()) / (2.0 * h0), 0.0);
        assert!(matches!(
            spatial_eigenvalues(lambda, h0, phi0, &p),
            Err(RgError::BranchCut(_))
        ));
        // Off the real axis the radicand leaves the negative half line.
        let nudged = lambda + Complex64::new(0.0, 0.05);
        assert!(spatial_eigenvalues(nudged, h0, phi0, &p).is_ok());
    }

    #[test]
    fn essential_range_endpoints_sit_on_the_extreme_states() {
        use crate::profiles::{construct_single_jump, SingleJumpSpec};
        let p = fig2_params();
        let spec = SingleJumpSpec {
            h0: 1.0,
            phi_left: 0.2,
            phi_right: 0.5,
            x_jump: 217.0,
            domain: (0.0, 250.0),
            n_samples: 2001,
        };
        let prof = construct_single_jump(&spec, &p).unwrap();
        let (lo, hi) = essential_range(&prof);
        let coeff = -2.0 * (p.c_f - p.c_t) * prof.c.powi(3);
        // h^3 phi is smallest on the upstream endstate (h = 1, phi = 0.2):
        // with coeff < 0 that is the most negative value. It is largest on
        // the downstream endstate (h = 1, phi = 0.5), the value nearest zero.
        assert!(coeff < 0.0 && hi < 0.0);
        assert!((lo - coeff / 0.2).abs() < 1e-9 * coeff.abs());
        assert!((hi - coeff / 0.5).abs() < 1e-9 * coeff.abs());
    }

    #[test]
    fn zero_weight_reduces_to_the_plain_dispersion_roots() {
        let p = fig2_params();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..80 {
            let xi: f64 = rng.gen_range(-30.0..30.0);
            let h0: f64 = rng.gen_range(0.4..2.5);
            let phi0: f64 = rng.gen_range(0.05..1.5);
            let plain = dispersion_roots(xi, h0, phi0, &p);
            let weighted = weighted_dispersion_roots(xi, 0.0, h0, phi0, &p);
            for (a, b) in plain.iter().zip(weighted.iter()) {
                assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
            }
        }
    }

    #[test]
    fn weighted_roots_are_spatial_preimages_of_the_weight_line() {
        // lambda on a weighted dispersion curve must send gamma = -theta + i xi
        // back through the spatial quadratic.
        let p = fig2_params();
        let (h0, phi0) = (1.0, 0.3);
        let a = h0 * (p.g_perp + 3.0 * h0 * phi0);
        let theta = -p.g_parallel / (2.0 * h0 * (p.g_perp + 3.0 * h0 * phi0));
        let c = p.equilibrium_velocity(h0);
        let b = 2.0 * p.c_f * c / h0;
        for k in 0..60 {
            let xi = -12.0 + 24.0 * k as f64 / 59.0;
            let gamma = Complex64::new(-theta, xi);
            for lambda in weighted_dispersion_roots(xi, theta, h0, phi0, &p) {
                let resid = lambda * lambda
                    + b * lambda
                    + p.g_parallel * gamma
                    - a * gamma * gamma;
                assert!(resid.norm() < 1e-9 * (1.0 + lambda.norm_sqr()));
            }
        }
    }

    #[test]
    fn optimal_weight_pushes_the_unstable_endstate_curves_left() {
        // Root-region parameters with F > 2: unweighted curves reach into the
        // right half plane, while the curves weighted by the endstate rate
        // theta = -g|| / (2 h0 (g' + 3 h0 phi0)) stay strictly to the left.
        let p = PhysParams {
            g_perp: 8.660254037844387,
            g_parallel: 5.0,
            c_f: 0.05,
            c_t: 0.04,
        };
        for phi0 in [0.3, 0.1] {
            let h0 = 1.0;
            assert!(!hydro_stable(h0, phi0, &p));
            let theta = -p.g_parallel / (2.0 * h0 * (p.g_perp + 3.0 * h0 * phi0));
            let mut unweighted_max = f64::NEG_INFINITY;
            let mut weighted_max = f64::NEG_INFINITY;
            for k in 0..=4000 {
                let xi = -200.0 + 0.1 * k as f64;
                for r in dispersion_roots(xi, h0, phi0, &p) {
                    unweighted_max = unweighted_max.max(r.re);
                }
                for r in weighted_dispersion_roots(xi, theta, h0, phi0, &p) {
                    weighted_max = weighted_max.max(r.re);
                }
            }
            assert!(unweighted_max > 0.1, "got {unweighted_max}");
            assert!(weighted_max < -1e-3, "got {weighted_max}");
        }
    }
}
