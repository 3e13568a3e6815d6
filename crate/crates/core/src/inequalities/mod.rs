//! Registry of the verifiable claims about Γ, ψ and ψ′, with point
//! evaluation, grid scanning and interval certification.

mod certify;
mod claims;
mod scan;

pub use certify::{certify, CertStatus, Certificate, CertifyOptions};
pub use claims::{ClaimId, ClaimShape, Direction};
pub use scan::{
    scan, slope_sign_changes, PointRecord, PointStatus, ScanGrid, ScanReport, SignChanges, Spacing,
    Violation, CONVEXITY_WEIGHTS,
};

use crate::error::{Error, Result};
use crate::interval::EnclosureConfig;
use crate::specfun::{EvalConfig, PolyOrder, EULER_GAMMA, PI_SQ_OVER_3, PI_SQ_OVER_6};

/// Default relative tolerance for floating-point claim checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// `2ab / (a + b)`.
pub fn harmonic_mean(a: f64, b: f64) -> Result<f64> {
    let s = a + b;
    if !(s.abs() > 1e-300) {
        return Err(Error::DegenerateDenominator(s));
    }
    Ok(2.0 * (a * b) / s)
}

/// `r e^{-r} / (1 - e^{-r})`, written as `r / (e^r - 1)`.
pub fn kernel_b(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            function: "kernel_b",
            value: r,
        });
    }
    Ok(r / r.exp_m1())
}

/// Deliberate evaluator faults for smoke-testing the verification battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// `psi''` returned with the wrong sign.
    FlipPsi2Sign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvexityKind {
    /// `psi'(x^{1-k} y^k) <= psi'(x)^{1-k} psi'(y)^k`
    GG,
    /// `psi'(x^{1-k} y^k) <= (1-k) psi'(x) + k psi'(y)`
    GA,
}

/// Result of checking one claim at one point (or one consecutive pair).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimEval {
    pub lhs: f64,
    pub rhs: f64,
    /// Oriented distance from the bound; negative means violated.
    pub margin: f64,
    pub satisfied: bool,
}

impl ClaimEval {
    fn new(lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> Self {
        let satisfied = margin >= -tolerance * scale(lhs, rhs);
        ClaimEval {
            lhs,
            rhs,
            margin,
            satisfied,
        }
    }

    /// Margin relative to `max(1, |lhs|, |rhs|)`.
    pub fn scaled_margin(&self) -> f64 {
        self.margin / scale(self.lhs, self.rhs)
    }
}

fn scale(lhs: f64, rhs: f64) -> f64 {
    1.0_f64.max(lhs.abs()).max(rhs.abs())
}

/// Evaluation context shared by point checks, scans and certification.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Verifier {
    pub eval: EvalConfig,
    pub enclosure: EnclosureConfig,
    pub fault: Option<Fault>,
}

impl Verifier {
    pub fn with_fault(fault: Fault) -> Self {
        Verifier {
            fault: Some(fault),
            ..Verifier::default()
        }
    }

    pub fn trigamma(&self, z: f64) -> Result<f64> {
        self.eval.trigamma(z)
    }

    pub fn psi2(&self, z: f64) -> Result<f64> {
        let v = self.eval.polygamma(PolyOrder::TETRAGAMMA, z)?;
        Ok(match self.fault {
            Some(Fault::FlipPsi2Sign) => -v,
            None => v,
        })
    }

    pub fn psi3(&self, z: f64) -> Result<f64> {
        self.eval.polygamma(PolyOrder::PENTAGAMMA, z)
    }

    /// `K(z)`: harmonic mean of `psi'(z)` and `psi'(1/z)`.
    pub fn trigamma_hm(&self, z: f64) -> Result<f64> {
        harmonic_mean(self.trigamma(z)?, self.trigamma(1.0 / z)?)
    }

    /// `phi(z) = psi''(z) + z psi'''(z)`.
    pub fn phi(&self, z: f64) -> Result<f64> {
        Ok(self.psi2(z)? + z * self.psi3(z)?)
    }

    pub fn alzer_wells(&self, z: f64) -> Result<f64> {
        let p2 = self.psi2(z)?;
        Ok(self.trigamma(z)? * self.psi3(z)? - 2.0 * p2 * p2)
    }

    /// `z psi''(z) / psi'(z)^2`.
    pub fn f_ratio(&self, z: f64) -> Result<f64> {
        let p1 = self.trigamma(z)?;
        Ok(z * self.psi2(z)? / (p1 * p1))
    }

    /// The function whose monotonicity a monotone claim asserts.
    pub fn tracked_value(&self, claim: ClaimId, z: f64) -> Result<f64> {
        match claim {
            ClaimId::KernelBDecreasing => kernel_b(z),
            ClaimId::ZPsi2Increasing => Ok(z * self.psi2(z)?),
            ClaimId::GgSlopeIncreasing => Ok(z * self.psi2(z)? / self.trigamma(z)?),
            ClaimId::FDecreasing => self.f_ratio(z),
            ClaimId::KUnimodal => self.trigamma_hm(z),
            other => Err(Error::Precondition(format!(
                "{other} is not a monotonicity claim"
            ))),
        }
    }

    /// Checks a pointwise claim at `z`.
    pub fn claim_lhs_rhs(&self, claim: ClaimId, z: f64) -> Result<ClaimEval> {
        self.claim_lhs_rhs_tol(claim, z, DEFAULT_TOLERANCE)
    }

    pub fn claim_lhs_rhs_tol(&self, claim: ClaimId, z: f64, tolerance: f64) -> Result<ClaimEval> {
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::Domain {
                function: "claim",
                value: z,
            });
        }
        let inv = 1.0 / z;
        let ge = |lhs: f64, rhs: f64| ClaimEval::new(lhs, rhs, lhs - rhs, tolerance);
        let le = |lhs: f64, rhs: f64| ClaimEval::new(lhs, rhs, rhs - lhs, tolerance);
        Ok(match claim {
            ClaimId::GammaHm => {
                let lhs = harmonic_mean(self.eval.gamma(z)?, self.eval.gamma(inv)?)?;
                ge(lhs, 1.0)
            }
            ClaimId::GammaSum => ge(self.eval.gamma(z)? + self.eval.gamma(inv)?, 2.0),
            ClaimId::GammaProd => ge(self.eval.gamma(z)? * self.eval.gamma(inv)?, 1.0),
            ClaimId::DigammaHm | ClaimId::DigammaHmRefined => {
                let a = self.eval.digamma(z)?;
                let b = self.eval.digamma(inv)?;
                if !((a + b).abs() > 1e-12) {
                    return Err(Error::DegenerateDenominator(a + b));
                }
                let lhs = harmonic_mean(a, b)?;
                let rhs = if claim == ClaimId::DigammaHm {
                    -EULER_GAMMA
                } else {
                    -EULER_GAMMA * (2.0 * z / (z * z + 1.0))
                };
                ge(lhs, rhs)
            }
            ClaimId::TrigammaHm => le(self.trigamma_hm(z)?, PI_SQ_OVER_6),
            ClaimId::TrigammaSum => ge(self.trigamma(z)? + self.trigamma(inv)?, PI_SQ_OVER_3),
            ClaimId::TrigammaProd => ge(
                self.trigamma(z)? * self.trigamma(inv)?,
                PI_SQ_OVER_6 * PI_SQ_OVER_6,
            ),
            ClaimId::PhiNonneg => ge(self.phi(z)?, 0.0),
            ClaimId::AlzerWells => le(self.alzer_wells(z)?, 0.0),
            ClaimId::KernelBBounds => {
                let b = kernel_b(z)?;
                ClaimEval::new(b, 1.0, b.min(1.0 - b), tolerance)
            }
            other => {
                return Err(match other.shape() {
                    ClaimShape::Monotone(_) => Error::PairwiseClaim(other),
                    _ => Error::Precondition(format!("{other} takes (x, y, k); use convexity_gap")),
                })
            }
        })
    }

    /// Checks a monotonicity claim on the consecutive pair `z_prev < z_next`.
    /// `lhs` is the tracked function at `z_next`, `rhs` at `z_prev`.
    pub fn claim_step(
        &self,
        claim: ClaimId,
        z_prev: f64,
        z_next: f64,
        tolerance: f64,
    ) -> Result<ClaimEval> {
        let ClaimShape::Monotone(direction) = claim.shape() else {
            return Err(Error::Precondition(format!(
                "{claim} is not a monotonicity claim"
            )));
        };
        if !(z_prev < z_next) {
            return Err(Error::Precondition(format!(
                "pair must be increasing, got ({z_prev}, {z_next})"
            )));
        }
        let lhs = self.tracked_value(claim, z_next)?;
        let rhs = self.tracked_value(claim, z_prev)?;
        Ok(step_eval(direction, z_prev, z_next, rhs, lhs, tolerance))
    }

    /// Right side minus left side of the GG- or GA-convexity inequality.
    pub fn convexity_gap(&self, kind: ConvexityKind, x: f64, y: f64, k: f64) -> Result<f64> {
        Ok(self
            .convexity_eval(kind, x, y, k, DEFAULT_TOLERANCE)?
            .margin)
    }

    pub fn convexity_eval(
        &self,
        kind: ConvexityKind,
        x: f64,
        y: f64,
        k: f64,
        tolerance: f64,
    ) -> Result<ClaimEval> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::Precondition(format!(
                "weight k = {k} outside [0, 1]"
            )));
        }
        let px = self.trigamma(x)?;
        let py = self.trigamma(y)?;
        // both means of a repeated argument are that argument
        let (m, rhs) = if x == y {
            (x, px)
        } else {
            let m = x.powf(1.0 - k) * y.powf(k);
            let rhs = match kind {
                ConvexityKind::GG => px.powf(1.0 - k) * py.powf(k),
                ConvexityKind::GA => (1.0 - k) * px + k * py,
            };
            (m, rhs)
        };
        let lhs = self.trigamma(m)?;
        Ok(ClaimEval::new(lhs, rhs, rhs - lhs, tolerance))
    }
}

// lhs = f(z_next), rhs = f(z_prev)
pub(crate) fn step_eval(
    direction: Direction,
    z_prev: f64,
    z_next: f64,
    rhs: f64,
    lhs: f64,
    tolerance: f64,
) -> ClaimEval {
    let diff = lhs - rhs;
    let margin = match direction {
        Direction::Increasing => diff,
        Direction::Decreasing => -diff,
        Direction::PeakAtOne => {
            if z_next <= 1.0 {
                diff
            } else if z_prev >= 1.0 {
                -diff
            } else {
                diff.abs()
            }
        }
    };
    ClaimEval::new(lhs, rhs, margin, tolerance)
}

/// [`Verifier::claim_lhs_rhs`] with the default configuration.
pub fn claim_lhs_rhs(claim: ClaimId, z: f64) -> Result<ClaimEval> {
    Verifier::default().claim_lhs_rhs(claim, z)
}

/// [`Verifier::convexity_gap`] with the default configuration.
pub fn convexity_gap(kind: ConvexityKind, x: f64, y: f64, k: f64) -> Result<f64> {
    Verifier::default().convexity_gap(kind, x, y, k)
}
