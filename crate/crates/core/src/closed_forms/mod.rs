//! Closed-form results for matrix-weighted trees and the checks that
//! compare them against direct numerical computation.
//!
//! Every check returns data ([`VerificationReport`], [`InterlacingReport`],
//! [`RankVerdict`]) rather than panicking, so callers can aggregate results
//! across many instances. Tolerances scale with dimension or norm and are
//! documented on each function.

mod ginverse;
mod identities;
mod inverse;
mod rank;
mod spectral;

use serde::Serialize;

pub use ginverse::{ginverse_distance_recovery, ginverse_invariance_check, pair_contraction};
pub use identities::{verify_identities, IDENTITY_NAMES};
pub use inverse::{
    distance_determinant, distance_inverse, distance_inverse_factored, distance_log_determinant,
    invertibility_check, Invertibility,
};
pub use rank::{
    rank_characterization_probe, rank_deficient_weighting, rank_deficient_weighting_at,
    scalar_cofactor, DeficientWeighting, RankVerdict,
};
pub use spectral::{inertia_check, interlacing_check, InterlacingReport, InterlacingTriple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one numerical identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    /// Frobenius norm of `LHS - RHS`; `None` when skipped.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub n: usize,
    pub s: usize,
}

impl VerificationReport {
    /// Status is `Pass` iff `residual <= tolerance` (NaN fails).
    pub fn measured(name: impl Into<String>, residual: f64, tolerance: f64, n: usize, s: usize) -> Self {
        let status = if residual <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name: name.into(),
            residual: Some(residual),
            tolerance,
            status,
            reason: None,
            n,
            s,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>, n: usize, s: usize) -> Self {
        Self {
            name: name.into(),
            residual: None,
            tolerance: 0.0,
            status: CheckStatus::Skipped,
            reason: Some(reason.into()),
            n,
            s,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}
