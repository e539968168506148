//! Stability classification of asymptotically constant travelling waves.
//!
//! Three notions of spectral stability are reported, ordered from the most
//! demanding to the least. All of them require the friction ordering
//! `C_f >= C_t`; they differ in which endstate Froude numbers must stay
//! below the subcharacteristic threshold 2:
//!
//! * standard: both endstates,
//! * convective: only the downstream endstate `F_+` (growth advected away
//!   from the wave is tolerated),
//! * extended convective: neither (a moving-window norm absorbs both tails).
//!
//! The strict-inequality variants are reported as `strongly_stable`. For
//! discontinuous waves the standard strong flag is withheld: the available
//! characterization at the discontinuous level is the non-strict one, and
//! marginal cases are not resolved here. The convective and extended flags
//! do not suffer this gap.
//!
//! Periodic profiles carry no endstates and are rejected outright.

use serde::{Deserialize, Serialize};

use crate::error::RgError;
use crate::model::froude_endstate;
use crate::profiles::WaveProfile;
use crate::spectral::constant::essential_range;
use crate::spectral::evans::Weights;
use crate::Result;

/// Which stability notion a caller asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityMode {
    Standard,
    Convective,
    ExtendedConvective,
}

/// Verdict for one stability notion.
///
/// `strongly_stable` is `None` when the strict criterion is not available
/// for the given profile class, never as shorthand for "false".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeVerdict {
    pub stable: bool,
    pub strongly_stable: Option<bool>,
}

/// Full stability report for an asymptotically constant wave.
///
/// All three mode verdicts are always populated; `mode` records which one
/// the caller asked for. `theta_minus`/`theta_plus` are the default
/// exponential weights (half the limiting drift coefficient of the reduced
/// scalar equation at each endstate) and `essential_range` brackets the
/// real parts of the essential spectrum contributed by the wave profile.
/// The two Evans fields are filled in by eigenvalue-counting drivers and
/// absent otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub mode: StabilityMode,
    pub cf_ct_ok: bool,
    pub froude_minus: f64,
    pub froude_plus: f64,
    pub standard: ModeVerdict,
    pub convective: ModeVerdict,
    pub extended_convective: ModeVerdict,
    pub essential_range: (f64, f64),
    pub theta_minus: f64,
    pub theta_plus: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evans_winding: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub essential_intrusion: Option<bool>,
}

impl StabilityReport {
    /// Verdict for the mode stored in `self.mode`.
    pub fn requested(&self) -> ModeVerdict {
        match self.mode {
            StabilityMode::Standard => self.standard,
            StabilityMode::Convective => self.convective,
            StabilityMode::ExtendedConvective => self.extended_convective,
        }
    }
}

/// Classifies an asymptotically constant wave under every stability notion.
///
/// Criteria are algebraic in the endstates: the friction ordering
/// `C_f >= C_t` and the endstate Froude numbers against the threshold 2,
/// non-strict for `stable` and strict for `strongly_stable`. The standard
/// strong flag is reported only for smooth profiles.
///
/// Errors with `NotAsymptoticallyConstant` on periodic profiles.
pub fn stability_verdict(profile: &WaveProfile, mode: StabilityMode) -> Result<StabilityReport> {
    if profile.period.is_some() {
        return Err(RgError::NotAsymptoticallyConstant);
    }
    let p = &profile.params;
    let cf_ct_ok = p.c_f >= p.c_t;
    let fm = froude_endstate(profile.h0, profile.phi_minus, p);
    let fp = froude_endstate(profile.h0, profile.phi_plus, p);
    let smooth = profile.is_smooth();

    let standard = ModeVerdict {
        stable: cf_ct_ok && fp <= 2.0 && fm <= 2.0,
        strongly_stable: if smooth {
            Some(cf_ct_ok && fp < 2.0 && fm < 2.0)
        } else {
            None
        },
    };
    let convective = ModeVerdict {
        stable: cf_ct_ok && fp <= 2.0,
        strongly_stable: Some(cf_ct_ok && fp < 2.0),
    };
    let extended_convective = ModeVerdict {
        stable: cf_ct_ok,
        strongly_stable: Some(cf_ct_ok),
    };

    let weights = Weights::default_for(profile);
    Ok(StabilityReport {
        mode,
        cf_ct_ok,
        froude_minus: fm,
        froude_plus: fp,
        standard,
        convective,
        extended_convective,
        essential_range: essential_range(profile),
        theta_minus: weights.theta_minus,
        theta_plus: weights.theta_plus,
        evans_winding: None,
        essential_intrusion: None,
    })
}
