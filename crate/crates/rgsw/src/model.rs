//! The 4x4 first-order balance law for shear shallow-water flow on an
//! incline.
//!
//! Unknowns are depth `h`, mean velocity `U`, large-scale enstrophy `Phi`
//! and small-scale enstrophy `phi`. Writing `S = Phi + phi` for the total
//! enstrophy, the conserved quantities are `(h, hU, hE, h phi)` with
//! specific energy `E = U^2/2 + e`, internal energy `e = (g'h + S h^2)/2`,
//! and pressure `p = g'h^2/2 + S h^3`. Mass and small-scale enstrophy are
//! conserved; momentum and energy carry gravity/friction relaxation terms.
//! The convective part has characteristic speeds `U - a, U, U, U + a` with
//! `a = sqrt(g'h + 3 S h^2)`, so admissible states behave like isentropic
//! gas dynamics with a doubled contact field.

use serde::{Deserialize, Serialize};

use crate::{error::RgError, Result};

/// Physical parameters: normal and tangential gravity components
/// (`g_perp = g cos(theta)`, `g_parallel = g sin(theta)` for inclination
/// `theta`), wall friction `c_f`, and turbulence dissipation `c_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub g_perp: f64,
    pub g_parallel: f64,
    pub c_f: f64,
    pub c_t: f64,
}

impl PhysParams {
    pub fn new(g_perp: f64, g_parallel: f64, c_f: f64, c_t: f64) -> Result<Self> {
        if !(g_perp > 0.0) || !g_perp.is_finite() {
            return Err(RgError::InvalidParameter(format!("g_perp = {g_perp}")));
        }
        if !(g_parallel >= 0.0) || !g_parallel.is_finite() {
            return Err(RgError::InvalidParameter(format!(
                "g_parallel = {g_parallel}"
            )));
        }
        if !(c_f > 0.0) || !c_f.is_finite() {
            return Err(RgError::InvalidParameter(format!("c_f = {c_f}")));
        }
        if !(c_t >= 0.0) || !c_t.is_finite() {
            return Err(RgError::InvalidParameter(format!("c_t = {c_t}")));
        }
        Ok(PhysParams {
            g_perp,
            g_parallel,
            c_f,
            c_t,
        })
    }

    /// Velocity of the uniform equilibrium flow of depth `h`, from the
    /// friction balance `g_parallel h = c_f U^2`.
    pub fn equilibrium_velocity(&self, h: f64) -> f64 {
        (self.g_parallel * h / self.c_f).sqrt()
    }
}

/// Primitive state `(h, U, Phi, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub h: f64,
    pub u: f64,
    pub phi_large: f64,
    pub phi_small: f64,
}

impl PrimitiveState {
    /// Validating constructor: positive depth, nonnegative enstrophies.
    pub fn new(h: f64, u: f64, phi_large: f64, phi_small: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(RgError::NonPositiveHeight(h));
        }
        if !(phi_large >= 0.0) {
            return Err(RgError::NegativeEnstrophy {
                name: "Phi",
                value: phi_large,
            });
        }
        if !(phi_small >= 0.0) {
            return Err(RgError::NegativeEnstrophy {
                name: "phi",
                value: phi_small,
            });
        }
        Ok(PrimitiveState {
            h,
            u,
            phi_large,
            phi_small,
        })
    }

    /// Non-validating constructor for solver internals, where conservative
    /// round trips can leave an enstrophy a few ulps below zero.
    pub(crate) fn raw(h: f64, u: f64, phi_large: f64, phi_small: f64) -> Self {
        PrimitiveState {
            h,
            u,
            phi_large,
            phi_small,
        }
    }

    /// Total enstrophy `S = Phi + phi`.
    pub fn entropy(&self) -> f64 {
        self.phi_large + self.phi_small
    }
}

/// Conserved state `(h, hU, hE, h phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedState {
    pub h: f64,
    pub hu: f64,
    pub he: f64,
    pub hphi: f64,
}

impl ConservedState {
    pub fn as_array(&self) -> [f64; 4] {
        [self.h, self.hu, self.he, self.hphi]
    }

    pub fn from_array(q: [f64; 4]) -> Self {
        ConservedState {
            h: q[0],
            hu: q[1],
            he: q[2],
            hphi: q[3],
        }
    }
}

/// Specific internal energy `e = (g'h + S h^2)/2`.
pub fn internal_energy(s: &PrimitiveState, p: &PhysParams) -> f64 {
    0.5 * (p.g_perp * s.h + s.entropy() * s.h * s.h)
}

/// Pressure `p = g'h^2/2 + S h^3`.
pub fn pressure(s: &PrimitiveState, p: &PhysParams) -> f64 {
    let h = s.h;
    0.5 * p.g_perp * h * h + s.entropy() * h * h * h
}

/// Pressure in terms of `(h, e)`: `p = 2 h e - g'h^2/2`. Identical to
/// [`pressure`] on admissible states; kept as a cross-check form.
pub fn pressure_he(h: f64, e: f64, p: &PhysParams) -> f64 {
    2.0 * h * e - 0.5 * p.g_perp * h * h
}

/// Map a primitive state to conserved variables.
pub fn to_conserved(s: &PrimitiveState, p: &PhysParams) -> ConservedState {
    let e = internal_energy(s, p);
    let energy = 0.5 * s.u * s.u + e;
    ConservedState {
        h: s.h,
        hu: s.h * s.u,
        he: s.h * energy,
        hphi: s.h * s.phi_small,
    }
}

/// Recover the primitive state from conserved variables.
///
/// The total enstrophy comes out of the internal energy as
/// `S = (2e - g'h)/h^2` and the large-scale part as `Phi = S - phi`; both
/// are algebraic recoveries and may land a few ulps negative for states at
/// the admissibility boundary. Only positivity of `h` is enforced here.
pub fn to_primitive(q: &ConservedState, p: &PhysParams) -> Result<PrimitiveState> {
    if !(q.h > 0.0) || !q.h.is_finite() {
        return Err(RgError::NonPositiveHeight(q.h));
    }
    let u = q.hu / q.h;
    let e = q.he / q.h - 0.5 * u * u;
    let entropy = (2.0 * e - p.g_perp * q.h) / (q.h * q.h);
    let phi_small = q.hphi / q.h;
    Ok(PrimitiveState::raw(
        q.h,
        u,
        entropy - phi_small,
        phi_small,
    ))
}

/// Convective flux `(hU, hU^2 + p, hUE + Up, h phi U)`.
pub fn flux(s: &PrimitiveState, p: &PhysParams) -> [f64; 4] {
    let pr = pressure(s, p);
    let e = internal_energy(s, p);
    let energy = 0.5 * s.u * s.u + e;
    [
        s.h * s.u,
        s.h * s.u * s.u + pr,
        s.h * s.u * energy + s.u * pr,
        s.h * s.phi_small * s.u,
    ]
}

/// Effective drag coefficient `C = (c_f phi + c_t Phi) / (Phi + phi)`,
/// with the convention `C = c_f` at vanishing total enstrophy (clear water
/// feels wall friction only).
pub fn drag_coefficient(s: &PrimitiveState, p: &PhysParams) -> f64 {
    let entropy = s.entropy();
    if entropy == 0.0 {
        p.c_f
    } else {
        (p.c_f * s.phi_small + p.c_t * s.phi_large) / entropy
    }
}

/// Relaxation source `(0, g||h - C|U|U, (g||h - c_f|U|U)U, 0)`.
///
/// Momentum feels the mixed drag `C`; the energy supply keeps only wall
/// friction `c_f`, the difference feeding enstrophy production.
pub fn source(s: &PrimitiveState, p: &PhysParams) -> [f64; 4] {
    let drag = drag_coefficient(s, p);
    let speed_sq = s.u.abs() * s.u;
    [
        0.0,
        p.g_parallel * s.h - drag * speed_sq,
        (p.g_parallel * s.h - p.c_f * speed_sq) * s.u,
        0.0,
    ]
}

/// Sound speed `a = sqrt(g'h + 3 S h^2)`; equals `sqrt(6e - 2g'h)`.
pub fn sound_speed(s: &PrimitiveState, p: &PhysParams) -> Result<f64> {
    let rad = p.g_perp * s.h + 3.0 * s.entropy() * s.h * s.h;
    if rad <= 0.0 {
        return Err(RgError::ImaginarySoundSpeed(rad));
    }
    Ok(rad.sqrt())
}

/// Characteristic speeds `(U - a, U, U, U + a)` of the convective part.
pub fn characteristics(s: &PrimitiveState, p: &PhysParams) -> Result<[f64; 4]> {
    let a = sound_speed(s, p)?;
    Ok([s.u - a, s.u, s.u, s.u + a])
}

/// Total enstrophy `S = Phi + phi`, the mathematical entropy of the
/// convective part.
pub fn entropy(s: &PrimitiveState) -> f64 {
    s.entropy()
}

/// Entropy production rate along smooth solutions,
/// `dS/dt = (1 - phi/S)(c_t - c_f)|U|^3 / h^3`.
///
/// Nonpositive when `c_f >= c_t`: wall production cannot outrun dissipation.
pub fn entropy_production(s: &PrimitiveState, p: &PhysParams) -> Result<f64> {
    let entropy = s.entropy();
    if entropy == 0.0 {
        return Err(RgError::ZeroEntropy);
    }
    Ok((1.0 - s.phi_small / entropy) * (p.c_t - p.c_f) * s.u.abs().powi(3) / s.h.powi(3))
}

/// Local Froude number `F~ = U / a`.
pub fn froude(s: &PrimitiveState, p: &PhysParams) -> Result<f64> {
    Ok(s.u / sound_speed(s, p)?)
}

/// Froude number of the uniform equilibrium with depth `h0` and enstrophy
/// `phi0`: `F = sqrt(g|| / (c_f (g' + 3 h0 phi0)))`. Agrees with
/// [`froude`] evaluated on that equilibrium state.
pub fn froude_endstate(h0: f64, phi0: f64, p: &PhysParams) -> f64 {
    (p.g_parallel / (p.c_f * (p.g_perp + 3.0 * h0 * phi0))).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    const G_PERP_FIG2: f64 = 9.510565162951535; // 10 cos(pi/10)
    const G_PAR_FIG2: f64 = 3.090169943749474; // 10 sin(pi/10)

    fn params(g_perp: f64, g_parallel: f64, c_f: f64, c_t: f64) -> PhysParams {
        PhysParams::new(g_perp, g_parallel, c_f, c_t).unwrap()
    }

    #[test]
    fn still_water_conserved_state() {
        let p = params(9.5106, 1.0, 1.0, 0.5);
        let s = PrimitiveState::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let q = to_conserved(&s, &p);
        assert_eq!(q.h, 1.0);
        assert_eq!(q.hu, 0.0);
        assert!((q.he - 4.7553).abs() < 1e-12);
        assert_eq!(q.hphi, 0.0);
    }

    #[test]
    fn primitive_recovery_splits_enstrophies() {
        let p = params(10.0, 1.0, 1.0, 0.5);
        let q = ConservedState {
            h: 1.0,
            hu: 0.0,
            he: 0.5 * (10.0 + 0.2),
            hphi: 0.2,
        };
        let s = to_primitive(&q, &p).unwrap();
        assert!((s.phi_small - 0.2).abs() < 1e-14);
        assert!(s.phi_large.abs() < 1e-14);
    }

    #[test]
    fn round_trip_is_exact_to_machine_precision() {
        let p = params(G_PERP_FIG2, G_PAR_FIG2, 1.0, 0.9);
        let s = PrimitiveState::new(0.37, -2.4, 1.3, 0.8).unwrap();
        let back = to_primitive(&to_conserved(&s, &p), &p).unwrap();
        assert!((back.h - s.h).abs() < 1e-12);
        assert!((back.u - s.u).abs() < 1e-12);
        assert!((back.phi_large - s.phi_large).abs() < 1e-12);
        assert!((back.phi_small - s.phi_small).abs() < 1e-12);
    }

    #[test]
    fn flux_hand_value() {
        let p = params(10.0, 1.0, 1.0, 0.5);
        let s = PrimitiveState::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let f = flux(&s, &p);
        // p = 5 + 1 = 6, e = 5.5, E = 6.
        assert_eq!(f[0], 1.0);
        assert!((f[1] - 7.0).abs() < 1e-13);
        assert!((f[2] - 12.0).abs() < 1e-13);
        assert!((f[3] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn pressure_forms_agree() {
        let p = params(G_PERP_FIG2, G_PAR_FIG2, 1.0, 0.9);
        for s in [
            PrimitiveState::new(0.2, 1.0, 0.3, 0.15).unwrap(),
            PrimitiveState::new(3.0, -4.0, 0.0, 2.0).unwrap(),
            PrimitiveState::new(1.7, 0.0, 5.0, 0.0).unwrap(),
        ] {
            let a = pressure(&s, &p);
            let b = pressure_he(s.h, internal_energy(&s, &p), &p);
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn source_vanishes_at_equilibrium() {
        let p = params(G_PERP_FIG2, G_PAR_FIG2, 1.0, 0.9);
        let h0 = 1.0;
        let c = p.equilibrium_velocity(h0);
        let s = PrimitiveState::new(h0, c, 0.0, 0.2).unwrap();
        let src = source(&s, &p);
        for v in src {
            assert!(v.abs() < 1e-13, "residual source {v}");
        }
    }

    #[test]
    fn source_hand_value() {
        let p = params(10.0, 5.0, 0.05, 0.04);
        let s = PrimitiveState::new(1.0, 2.0, 0.0, 0.5).unwrap();
        let src = source(&s, &p);
        assert!((src[1] - 4.8).abs() < 1e-13);
        assert!((src[2] - 4.8 * 2.0).abs() < 1e-13);
    }

    #[test]
    fn drag_defaults_to_wall_friction_in_clear_water() {
        let p = params(10.0, 5.0, 0.05, 0.04);
        let s = PrimitiveState::new(1.0, 3.0, 0.0, 0.0).unwrap();
        assert_eq!(drag_coefficient(&s, &p), 0.05);
    }

    #[test]
    fn sound_speed_hand_value_and_energy_form() {
        let p = params(9.5106, G_PAR_FIG2, 1.0, 0.9);
        let s = PrimitiveState::new(1.0, 0.0, 0.0, 0.2).unwrap();
        let a = sound_speed(&s, &p).unwrap();
        assert!((a - 3.1797).abs() < 1e-4);
        let alt = (6.0 * internal_energy(&s, &p) - 2.0 * p.g_perp * s.h).sqrt();
        assert!((a - alt).abs() < 1e-12);
    }

    #[test]
    fn characteristics_are_ordered() {
        let p = params(G_PERP_FIG2, G_PAR_FIG2, 1.0, 0.9);
        let s = PrimitiveState::new(0.8, -1.2, 0.4, 0.1).unwrap();
        let lam = characteristics(&s, &p).unwrap();
        assert!(lam[0] < lam[1]);
        assert_eq!(lam[1], lam[2]);
        assert!(lam[2] < lam[3]);
    }

    #[test]
    fn entropy_production_hand_value_and_sign() {
        let p = params(10.0, 1.0, 1.0, 0.9);
        let s = PrimitiveState::new(1.0, 1.0, 0.5, 0.5).unwrap();
        let rate = entropy_production(&s, &p).unwrap();
        assert!((rate - (-0.05)).abs() < 1e-13);

        let p_prod = params(10.0, 1.0, 0.5, 0.9);
        assert!(entropy_production(&s, &p_prod).unwrap() > 0.0);
        let s_zero = PrimitiveState::new(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            entropy_production(&s_zero, &p),
            Err(RgError::ZeroEntropy)
        ));
    }

    #[test]
    fn froude_matches_reference_values() {
        // Upstream state of the two-enstrophy Riemann experiment.
        let p = params(G_PERP_FIG2, G_PAR_FIG2, 1.0, 0.9);
        let c = p.equilibrium_velocity(1.0);
        let s = PrimitiveState::new(1.0, c, 0.0, 0.2).unwrap();
        assert!((froude(&s, &p).unwrap() - 0.5528).abs() < 1e-4);

        // Steeper incline, weak friction: supercritical.
        let p4 = params(10.0 * (std::f64::consts::PI / 6.0).cos(), 5.0, 0.05, 0.04);
        assert!((froude_endstate(1.0, 0.3, &p4) - 3.234).abs() < 1e-3);
    }

    #[test]
    fn endstate_froude_equals_local_froude_at_equilibrium() {
        let p = params(G_PERP_FIG2, G_PAR_FIG2, 1.0, 0.9);
        for (h0, phi0) in [(1.0, 0.2), (0.3, 1.7), (2.5, 0.0)] {
            let c = p.equilibrium_velocity(h0);
            let s = PrimitiveState::new(h0, c, 0.0, phi0).unwrap();
            let f_local = froude(&s, &p).unwrap();
            let f_end = froude_endstate(h0, phi0, &p);
            assert!((f_local - f_end).abs() < 1e-12);
        }
    }

    #[test]
    fn clear_water_froude_reduces_to_saint_venant() {
        let p = params(8.0, 2.0, 0.1, 0.0);
        let f = froude_endstate(1.7, 0.0, &p);
        assert!((f - (2.0_f64 / (0.1 * 8.0)).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn constructors_reject_bad_states() {
        assert!(matches!(
            PrimitiveState::new(0.0, 1.0, 0.0, 0.0),
            Err(RgError::NonPositiveHeight(_))
        ));
        assert!(matches!(
            PrimitiveState::new(1.0, 1.0, -0.1, 0.0),
            Err(RgError::NegativeEnstrophy { .. })
        ));
        assert!(PhysParams::new(10.0, 1.0, 0.0, 0.0).is_err());
        assert!(PhysParams::new(-1.0, 1.0, 0.1, 0.0).is_err());
    }
}
