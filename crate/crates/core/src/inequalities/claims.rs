use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::ConvexityKind;
use crate::error::{Error, Result};
use crate::interval::Expression;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClaimId {
    GammaHm,
    GammaSum,
    GammaProd,
    DigammaHm,
    DigammaHmRefined,
    TrigammaHm,
    TrigammaSum,
    TrigammaProd,
    GgGap,
    GaGap,
    PhiNonneg,
    KernelBBounds,
    KernelBDecreasing,
    ZPsi2Increasing,
    GgSlopeIncreasing,
    AlzerWells,
    FDecreasing,
    KUnimodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
    /// Increasing on `(0, 1)`, decreasing on `(1, inf)`.
    PeakAtOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClaimShape {
    /// An inequality evaluated at single points.
    Pointwise,
    /// Monotonicity, checked on consecutive grid points.
    Monotone(Direction),
    /// A two-point convexity inequality over `(x, y, k)`.
    Convexity(ConvexityKind),
}

impl ClaimId {
    pub const ALL: [ClaimId; 18] = [
        ClaimId::GammaHm,
        ClaimId::GammaSum,
        ClaimId::GammaProd,
        ClaimId::DigammaHm,
        ClaimId::DigammaHmRefined,
        ClaimId::TrigammaHm,
        ClaimId::TrigammaSum,
        ClaimId::TrigammaProd,
        ClaimId::GgGap,
        ClaimId::GaGap,
        ClaimId::PhiNonneg,
        ClaimId::KernelBBounds,
        ClaimId::KernelBDecreasing,
        ClaimId::ZPsi2Increasing,
        ClaimId::GgSlopeIncreasing,
        ClaimId::AlzerWells,
        ClaimId::FDecreasing,
        ClaimId::KUnimodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::GammaHm => "GAMMA_HM",
            ClaimId::GammaSum => "GAMMA_SUM",
            ClaimId::GammaProd => "GAMMA_PROD",
            ClaimId::DigammaHm => "DIGAMMA_HM",
            ClaimId::DigammaHmRefined => "DIGAMMA_HM_REFINED",
            ClaimId::TrigammaHm => "TRIGAMMA_HM",
            ClaimId::TrigammaSum => "TRIGAMMA_SUM",
            ClaimId::TrigammaProd => "TRIGAMMA_PROD",
            ClaimId::GgGap => "GG_GAP",
            ClaimId::GaGap => "GA_GAP",
            ClaimId::PhiNonneg => "PHI_NONNEG",
            ClaimId::KernelBBounds => "KERNEL_B_BOUNDS",
            ClaimId::KernelBDecreasing => "KERNEL_B_DECREASING",
            ClaimId::ZPsi2Increasing => "Z_PSI2_INCREASING",
            ClaimId::GgSlopeIncreasing => "GG_SLOPE_INCREASING",
            ClaimId::AlzerWells => "ALZER_WELLS",
            ClaimId::FDecreasing => "F_DECREASING",
            ClaimId::KUnimodal => "K_UNIMODAL",
        }
    }

    /// The mathematical statement being checked.
    pub fn statement(self) -> &'static str {
        match self {
            ClaimId::GammaHm => "2Γ(z)Γ(1/z)/(Γ(z)+Γ(1/z)) ≥ 1, z > 0",
            ClaimId::GammaSum => "Γ(z) + Γ(1/z) ≥ 2, z > 0",
            ClaimId::GammaProd => "Γ(z)Γ(1/z) ≥ 1, z > 0",
            ClaimId::DigammaHm => "2ψ(z)ψ(1/z)/(ψ(z)+ψ(1/z)) ≥ −γ, z > 0",
            ClaimId::DigammaHmRefined => "2ψ(z)ψ(1/z)/(ψ(z)+ψ(1/z)) ≥ −γ·2z/(z²+1), z > 0",
            ClaimId::TrigammaHm => "2ψ′(z)ψ′(1/z)/(ψ′(z)+ψ′(1/z)) ≤ π²/6, z > 0",
            ClaimId::TrigammaSum => "ψ′(z) + ψ′(1/z) ≥ π²/3, z > 0",
            ClaimId::TrigammaProd => "ψ′(z)ψ′(1/z) ≥ (π²/6)², z > 0",
            ClaimId::GgGap => "ψ′(x^(1−k)y^k) ≤ ψ′(x)^(1−k)ψ′(y)^k, x, y > 0, k ∈ [0,1]",
            ClaimId::GaGap => "ψ′(x^(1−k)y^k) ≤ (1−k)ψ′(x) + kψ′(y), x, y > 0, k ∈ [0,1]",
            ClaimId::PhiNonneg => "ψ″(z) + zψ‴(z) ≥ 0, z > 0",
            ClaimId::KernelBBounds => "0 < re^(−r)/(1−e^(−r)) < 1, r > 0",
            ClaimId::KernelBDecreasing => "re^(−r)/(1−e^(−r)) decreasing on (0, ∞)",
            ClaimId::ZPsi2Increasing => "zψ″(z) increasing on (0, ∞)",
            ClaimId::GgSlopeIncreasing => "zψ″(z)/ψ′(z) increasing on (0, ∞)",
            ClaimId::AlzerWells => "ψ′(z)ψ‴(z) − 2ψ″(z)² ≤ 0, z > 0",
            ClaimId::FDecreasing => "zψ″(z)/ψ′(z)² decreasing on (0, ∞)",
            ClaimId::KUnimodal => {
                "2ψ′(z)ψ′(1/z)/(ψ′(z)+ψ′(1/z)) increasing on (0,1), decreasing on (1,∞)"
            }
        }
    }

    pub fn shape(self) -> ClaimShape {
        match self {
            ClaimId::GgGap => ClaimShape::Convexity(ConvexityKind::GG),
            ClaimId::GaGap => ClaimShape::Convexity(ConvexityKind::GA),
            ClaimId::KernelBDecreasing | ClaimId::FDecreasing => {
                ClaimShape::Monotone(Direction::Decreasing)
            }
            ClaimId::ZPsi2Increasing | ClaimId::GgSlopeIncreasing => {
                ClaimShape::Monotone(Direction::Increasing)
            }
            ClaimId::KUnimodal => ClaimShape::Monotone(Direction::PeakAtOne),
            _ => ClaimShape::Pointwise,
        }
    }

    /// Interval expression backing certification, if the claim is certifiable.
    pub fn expression(self) -> Option<Expression> {
        match self {
            ClaimId::TrigammaHm => Some(Expression::HarmonicMean),
            ClaimId::TrigammaSum => Some(Expression::Sum),
            ClaimId::TrigammaProd => Some(Expression::Product),
            ClaimId::PhiNonneg => Some(Expression::Phi),
            ClaimId::AlzerWells => Some(Expression::AlzerWells),
            ClaimId::KernelBBounds => Some(Expression::KernelB),
            _ => None,
        }
    }

    pub fn is_certifiable(self) -> bool {
        self.expression().is_some()
    }

    /// Claims attaining equality at `z = 1`.
    pub fn equality_at_one(self) -> bool {
        matches!(
            self,
            ClaimId::TrigammaHm
                | ClaimId::TrigammaSum
                | ClaimId::TrigammaProd
                | ClaimId::GammaHm
                | ClaimId::GammaSum
                | ClaimId::GammaProd
                | ClaimId::DigammaHm
                | ClaimId::DigammaHmRefined
        )
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown claim {s:?}")))
    }
}

impl Serialize for ClaimId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in ClaimId::ALL {
            assert_eq!(c.name().parse::<ClaimId>().unwrap(), c);
        }
        assert!("NOSUCH".parse::<ClaimId>().is_err());
        assert!("trigamma_hm".parse::<ClaimId>().is_err());
    }

    #[test]
    fn certifiable_set() {
        let certifiable: Vec<_> = ClaimId::ALL.iter().filter(|c| c.is_certifiable()).collect();
        assert_eq!(certifiable.len(), 6);
        assert!(!ClaimId::GammaHm.is_certifiable());
        assert!(!ClaimId::KUnimodal.is_certifiable());
    }
}
