//! Relaxation equilibrium: friction balances gravity, `U = sqrt(g|| h / c_f)`.
//!
//! On slow scales the model collapses to a 2x2 system for `(h, phi)`: a
//! Burgers-type conservation law `h_t + q(h)_x = 0` with convex flux
//! `q(h) = sqrt(g|| h^3 / c_f)`, plus small-scale enstrophy advected at the
//! fluid velocity. Its Riemann solution is a slow `phi`-contact moving at
//! `u(h_L)` followed by a faster `h`-wave (shock for `h_L > h_R`,
//! rarefaction for `h_L < h_R`) across which `phi` is constant.

use serde::{Deserialize, Serialize};

use crate::{error::RgError, model::PhysParams, Result};

/// State of the equilibrium system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumState {
    pub h: f64,
    pub phi: f64,
}

impl EquilibriumState {
    pub fn new(h: f64, phi: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(RgError::NonPositiveHeight(h));
        }
        if !(phi >= 0.0) {
            return Err(RgError::NegativeEnstrophy {
                name: "phi",
                value: phi,
            });
        }
        Ok(EquilibriumState { h, phi })
    }
}

/// Equilibrium discharge `q(h) = sqrt(g|| h^3 / c_f)`.
pub fn q_of_h(h: f64, p: &PhysParams) -> f64 {
    (p.g_parallel * h * h * h / p.c_f).sqrt()
}

/// Equilibrium velocity `u(h) = sqrt(g|| h / c_f)`.
pub fn u_of_h(h: f64, p: &PhysParams) -> f64 {
    (p.g_parallel * h / p.c_f).sqrt()
}

/// Characteristic speed of the equilibrium law,
/// `alpha*(h) = q'(h) = (3/2) sqrt(g|| h / c_f)`.
pub fn alpha_star(h: f64, p: &PhysParams) -> f64 {
    1.5 * u_of_h(h, p)
}

/// The fast wave of the equilibrium Riemann solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HeightWave {
    Shock {
        speed: f64,
    },
    Rarefaction {
        left_edge_speed: f64,
        right_edge_speed: f64,
    },
}

/// Exact solution of the equilibrium Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRiemannSolution {
    pub left: EquilibriumState,
    pub right: EquilibriumState,
    /// Speed of the phi-contact, `u(h_L)`.
    pub contact_speed: f64,
    /// State between the contact and the height wave: `(h_L, phi_R)`.
    pub intermediate: EquilibriumState,
    /// `None` when `h_L = h_R` (the solution is the contact alone).
    pub height_wave: Option<HeightWave>,
    g_parallel_over_cf: f64,
}

/// Solve the equilibrium Riemann problem.
///
/// The contact always travels slower than every speed in the height wave:
/// `q` is convex with `q(0) = 0`, so chord and tangent slopes at `h_L`
/// exceed `q(h_L)/h_L = u(h_L)`.
pub fn riemann_solve(
    left: &EquilibriumState,
    right: &EquilibriumState,
    p: &PhysParams,
) -> EquilibriumRiemannSolution {
    let contact_speed = u_of_h(left.h, p);
    let intermediate = EquilibriumState {
        h: left.h,
        phi: right.phi,
    };
    let height_wave = if left.h == right.h {
        None
    } else if left.h > right.h {
        let speed = (q_of_h(right.h, p) - q_of_h(left.h, p)) / (right.h - left.h);
        Some(HeightWave::Shock { speed })
    } else {
        Some(HeightWave::Rarefaction {
            left_edge_speed: alpha_star(left.h, p),
            right_edge_speed: alpha_star(right.h, p),
        })
    };
    EquilibriumRiemannSolution {
        left: *left,
        right: *right,
        contact_speed,
        intermediate,
        height_wave,
        g_parallel_over_cf: p.g_parallel / p.c_f,
    }
}

impl EquilibriumRiemannSolution {
    /// Sample the self-similar solution at `xi = x / t`.
    pub fn sample(&self, xi: f64) -> EquilibriumState {
        if xi < self.contact_speed {
            return self.left;
        }
        match self.height_wave {
            None => self.intermediate,
            Some(HeightWave::Shock { speed }) => {
                if xi < speed {
                    self.intermediate
                } else {
                    self.right
                }
            }
            Some(HeightWave::Rarefaction {
                left_edge_speed,
                right_edge_speed,
            }) => {
                if xi < left_edge_speed {
                    self.intermediate
                } else if xi > right_edge_speed {
                    self.right
                } else {
                    // Invert alpha*(h) = xi inside the fan.
                    EquilibriumState {
                        h: 4.0 * xi * xi / (9.0 * self.g_parallel_over_cf),
                        phi: self.right.phi,
                    }
                }
            }
        }
    }
}

/// Outcome of the subcharacteristic comparison at a uniform equilibrium:
/// the equilibrium speed `alpha*` must lie strictly between the acoustic
/// speeds `U -/+ a` of the full system, which happens exactly when the
/// endstate Froude number is below 2.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SubcharacteristicCheck {
    pub satisfied: bool,
    pub froude: f64,
    pub alpha: f64,
    pub char_lo: f64,
    pub char_hi: f64,
}

/// Compare equilibrium and full-system characteristic speeds at the uniform
/// equilibrium `(h0, phi0)`.
pub fn subcharacteristic_check(h0: f64, phi0: f64, p: &PhysParams) -> SubcharacteristicCheck {
    let u = u_of_h(h0, p);
    let a = (p.g_perp * h0 + 3.0 * phi0 * h0 * h0).sqrt();
    let alpha = alpha_star(h0, p);
    SubcharacteristicCheck {
        satisfied: u - a < alpha && alpha < u + a,
        froude: crate::model::froude_endstate(h0, phi0, p),
        alpha,
        char_lo: u - a,
        char_hi: u + a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steep_params() -> PhysParams {
        // 30-degree incline, weak friction; equilibrium speeds are O(10).
        PhysParams::new(10.0 * (std::f64::consts::PI / 6.0).cos(), 5.0, 0.05, 0.04).unwrap()
    }

    #[test]
    fn equilibrium_speeds_hand_values() {
        let p = steep_params();
        assert!((u_of_h(1.0, &p) - 10.0).abs() < 1e-12);
        assert!((q_of_h(1.0, &p) - 10.0).abs() < 1e-12);
        assert!((alpha_star(1.0, &p) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_star_is_the_flux_derivative() {
        let p = steep_params();
        for h in [0.2, 0.7, 1.0, 3.5] {
            let eps = 1e-6 * h;
            let fd = (q_of_h(h + eps, &p) - q_of_h(h - eps, &p)) / (2.0 * eps);
            assert!((alpha_star(h, &p) - fd).abs() < 1e-7, "at h = {h}");
        }
    }

    #[test]
    fn dam_break_wave_speeds() {
        let p = steep_params();
        let left = EquilibriumState::new(1.0, 0.3).unwrap();
        let right = EquilibriumState::new(0.2, 0.1).unwrap();
        let sol = riemann_solve(&left, &right, &p);
        assert!((sol.contact_speed - 10.0).abs() < 1e-9);
        let expect = (25.0 - 5.0f64.sqrt()) / 2.0;
        match sol.height_wave {
            Some(HeightWave::Shock { speed }) => {
                assert!((speed - expect).abs() < 1e-9, "shock speed {speed}");
            }
            other => panic!("expected a shock, got {other:?}"),
        }
        assert_eq!(sol.intermediate.h, 1.0);
        assert_eq!(sol.intermediate.phi, 0.1);
    }

    #[test]
    fn rising_height_gives_a_rarefaction_with_ordered_edges() {
        let p = steep_params();
        let left = EquilibriumState::new(0.5, 0.1).unwrap();
        let right = EquilibriumState::new(2.0, 0.6).unwrap();
        let sol = riemann_solve(&left, &right, &p);
        match sol.height_wave {
            Some(HeightWave::Rarefaction {
                left_edge_speed,
                right_edge_speed,
            }) => {
                assert!(sol.contact_speed < left_edge_speed);
                assert!(left_edge_speed < right_edge_speed);
                assert!((left_edge_speed - alpha_star(0.5, &p)).abs() < 1e-12);
                assert!((right_edge_speed - alpha_star(2.0, &p)).abs() < 1e-12);
            }
            other => panic!("expected a rarefaction, got {other:?}"),
        }
        // Fan samples interpolate the edge heights monotonically.
        let mut prev = 0.5;
        for k in 1..=20 {
            let xi = alpha_star(0.5, &p)
                + (alpha_star(2.0, &p) - alpha_star(0.5, &p)) * k as f64 / 20.0;
            let s = sol.sample(xi);
            assert!(s.h >= prev - 1e-12);
            assert_eq!(s.phi, 0.6);
            prev = s.h;
        }
        assert!((sol.sample(alpha_star(2.0, &p)).h - 2.0).abs() < 1e-9);
    }

    #[test]
    fn equal_heights_collapse_to_the_contact_alone() {
        let p = steep_params();
        let left = EquilibriumState::new(1.3, 0.5).unwrap();
        let right = EquilibriumState::new(1.3, 0.05).unwrap();
        let sol = riemann_solve(&left, &right, &p);
        assert!(sol.height_wave.is_none());
        let ahead = sol.sample(sol.contact_speed + 1e-9);
        assert_eq!(ahead.phi, 0.05);
        assert_eq!(ahead.h, 1.3);
        let behind = sol.sample(sol.contact_speed - 1e-9);
        assert_eq!(behind.phi, 0.5);
    }

    #[test]
    fn shocks_are_lax_admissible_and_trail_the_contact() {
        let p = steep_params();
        for (hl, hr) in [(1.0, 0.2), (2.0, 1.9), (0.5, 0.01), (4.0, 0.3)] {
            let sol = riemann_solve(
                &EquilibriumState::new(hl, 0.1).unwrap(),
                &EquilibriumState::new(hr, 0.4).unwrap(),
                &p,
            );
            let Some(HeightWave::Shock { speed }) = sol.height_wave else {
                panic!("expected shock for hl = {hl}, hr = {hr}");
            };
            assert!(sol.contact_speed < speed);
            assert!(alpha_star(hr, &p) < speed && speed < alpha_star(hl, &p));
        }
    }

    #[test]
    fn subcharacteristic_condition_tracks_froude_two() {
        let gentle = PhysParams::new(
            10.0 * (std::f64::consts::PI / 10.0).cos(),
            10.0 * (std::f64::consts::PI / 10.0).sin(),
            1.0,
            0.9,
        )
        .unwrap();
        let check = subcharacteristic_check(1.0, 0.2, &gentle);
        assert!(check.satisfied);
        assert!(check.froude < 2.0);

        let steep = steep_params();
        let check = subcharacteristic_check(1.0, 0.3, &steep);
        assert!(!check.satisfied);
        assert!(check.froude > 2.0);
        assert!(check.alpha > check.char_hi);
    }
}
