//! JSON schemas for the profile, stability, dispersion, and Riemann
//! subcommands. `simulate` and `preset` use [`rgsw::SimConfig`] as is.

use serde::{Deserialize, Serialize};

use rgsw::equilibrium::EquilibriumState;
use rgsw::model::PhysParams;
use rgsw::profiles::{
    construct_from_delta, construct_periodic, construct_single_jump, ProfileSpec, SingleJumpSpec,
};
use rgsw::spectral::{ContourSpec, StabilityMode};
use rgsw::{Result, WaveProfile};

/// Revalidate parameters that arrived through deserialization.
pub fn validated(p: &PhysParams) -> Result<PhysParams> {
    PhysParams::new(p.g_perp, p.g_parallel, p.c_f, p.c_t)
}

/// Travelling-wave request shared by `profile` and `stability`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaveConfig {
    /// Smooth upstream tail jumping onto the downstream endstate.
    SingleJump(SingleJumpSpec),
    /// Wave given by its height deviation from the endstate.
    Smooth(ProfileSpec),
    /// Periodic wave given by its height deviation.
    Periodic(ProfileSpec),
}

impl WaveConfig {
    pub fn build(&self, p: &PhysParams) -> Result<WaveProfile> {
        match self {
            WaveConfig::SingleJump(spec) => construct_single_jump(spec, p),
            WaveConfig::Smooth(spec) => construct_from_delta(spec, p),
            WaveConfig::Periodic(spec) => construct_periodic(spec, p),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub params: PhysParams,
    pub wave: WaveConfig,
    /// Replace jumps by a smooth blend of this width before writing.
    #[serde(default)]
    pub mollify: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub params: PhysParams,
    pub wave: WaveConfig,
    pub mode: StabilityMode,
    /// Also count unstable eigenvalues inside this rectangle.
    #[serde(default)]
    pub evans: Option<ContourSpec>,
    #[serde(default)]
    pub mollify: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersionConfig {
    pub params: PhysParams,
    pub h0: f64,
    pub phi0: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub n_points: usize,
    /// Exponential weight rate; omitted means the unweighted relation.
    #[serde(default)]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiemannConfig {
    pub params: PhysParams,
    pub left: EquilibriumState,
    pub right: EquilibriumState,
}

/// Header data written next to a profile's CSV samples.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileSummary {
    pub h0: f64,
    pub c: f64,
    pub kappa: f64,
    pub phi_minus: f64,
    pub phi_plus: f64,
    pub period: Option<f64>,
    pub relation_residual: f64,
    pub jumps: Vec<JumpSummary>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JumpSummary {
    pub x: f64,
    pub h_left: f64,
    pub h_right: f64,
    pub phi_left: f64,
    pub phi_right: f64,
}

impl ProfileSummary {
    pub fn of(wave: &WaveProfile) -> Self {
        ProfileSummary {
            h0: wave.h0,
            c: wave.c,
            kappa: wave.kappa,
            phi_minus: wave.phi_minus,
            phi_plus: wave.phi_plus,
            period: wave.period,
            relation_residual: wave.relation_residual(),
            jumps: wave
                .jumps
                .iter()
                .map(|j| JumpSummary {
                    x: j.x,
                    h_left: j.h_left,
                    h_right: j.h_right,
                    phi_left: j.phi_left,
                    phi_right: j.phi_right,
                })
                .collect(),
        }
    }
}
