use serde::Serialize;

use super::{step_eval, ClaimEval, ClaimId, ClaimShape, Verifier};
use crate::error::{Error, Result};

/// Weights `k` tried for every `(x, y)` pair of a convexity scan.
pub const CONVEXITY_WEIGHTS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

// 1/phi; drives the low-discrepancy choice of convexity partners
const GOLDEN_FRACTION: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub z_min: f64,
    pub z_max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl ScanGrid {
    pub fn new(z_min: f64, z_max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        let grid = ScanGrid {
            z_min,
            z_max,
            count,
            spacing,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn log(z_min: f64, z_max: f64, count: usize) -> Result<Self> {
        Self::new(z_min, z_max, count, Spacing::Log)
    }

    pub fn linear(z_min: f64, z_max: f64, count: usize) -> Result<Self> {
        Self::new(z_min, z_max, count, Spacing::Linear)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_min > 0.0 && self.z_min < self.z_max && self.z_max.is_finite()) {
            return Err(Error::Grid(format!(
                "need 0 < z_min < z_max < inf, got [{}, {}]",
                self.z_min, self.z_max
            )));
        }
        if self.count < 2 {
            return Err(Error::Grid(format!(
                "need at least 2 points, got {}",
                self.count
            )));
        }
        Ok(())
    }

    /// Grid points in increasing order; the endpoints are exactly `z_min` and `z_max`.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let last = (n - 1) as f64;
        let mut pts: Vec<f64> = match self.spacing {
            Spacing::Log => {
                let (a, b) = (self.z_min.ln(), self.z_max.ln());
                (0..n)
                    .map(|i| (a + (b - a) * (i as f64 / last)).exp())
                    .collect()
            }
            Spacing::Linear => {
                let (a, b) = (self.z_min, self.z_max);
                (0..n).map(|i| a + (b - a) * (i as f64 / last)).collect()
            }
        };
        pts[0] = self.z_min;
        pts[n - 1] = self.z_max;
        pts
    }

    /// Ratio (log) or difference (linear) between neighbouring points.
    pub fn step(&self) -> f64 {
        let last = (self.count - 1) as f64;
        match self.spacing {
            Spacing::Log => ((self.z_max.ln() - self.z_min.ln()) / last).exp(),
            Spacing::Linear => (self.z_max - self.z_min) / last,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    Pass,
    Violation,
    Error(String),
}

impl PointStatus {
    pub fn label(&self) -> &'static str {
        match self {
            PointStatus::Pass => "pass",
            PointStatus::Violation => "violation",
            PointStatus::Error(_) => "error",
        }
    }
}

/// One evaluated point. For monotonicity claims `z` is the right end of the
/// pair and `partner` the left end; for convexity claims `(z, partner, k)`
/// is `(x, y, k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub z: f64,
    pub partner: Option<f64>,
    pub k: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// Oriented margin, negative when violated.
    pub margin: f64,
    pub status: PointStatus,
}

impl PointRecord {
    fn from_eval(z: f64, partner: Option<f64>, k: Option<f64>, e: &ClaimEval) -> Self {
        PointRecord {
            z,
            partner,
            k,
            lhs: e.lhs,
            rhs: e.rhs,
            margin: e.margin,
            status: if e.satisfied {
                PointStatus::Pass
            } else {
                PointStatus::Violation
            },
        }
    }

    fn from_error(z: f64, partner: Option<f64>, k: Option<f64>, err: &Error) -> Self {
        PointRecord {
            z,
            partner,
            k,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            status: PointStatus::Error(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub z: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub claim: ClaimId,
    pub grid: ScanGrid,
    pub tolerance: f64,
    /// Smallest margin divided by `max(1, |lhs|, |rhs|)`.
    pub worst_margin: f64,
    pub worst_location: f64,
    pub violations: Vec<Violation>,
    pub samples: usize,
    pub errors: usize,
    pub records: Vec<PointRecord>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.errors == 0
    }
}

struct Accumulator {
    worst_margin: f64,
    worst_location: f64,
    violations: Vec<Violation>,
    errors: usize,
    records: Vec<PointRecord>,
}

impl Accumulator {
    fn with_capacity(n: usize) -> Self {
        Accumulator {
            worst_margin: f64::INFINITY,
            worst_location: f64::NAN,
            violations: Vec::new(),
            errors: 0,
            records: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, z: f64, partner: Option<f64>, k: Option<f64>, r: Result<ClaimEval>) {
        match r {
            Ok(e) => {
                let scaled = e.scaled_margin();
                // strict comparison keeps the first grid index on ties
                if scaled < self.worst_margin {
                    self.worst_margin = scaled;
                    self.worst_location = z;
                }
                if !e.satisfied {
                    self.violations.push(Violation {
                        z,
                        lhs: e.lhs,
                        rhs: e.rhs,
                    });
                }
                self.records.push(PointRecord::from_eval(z, partner, k, &e));
            }
            Err(err) => {
                self.errors += 1;
                self.records
                    .push(PointRecord::from_error(z, partner, k, &err));
            }
        }
    }

    fn finish(self, claim: ClaimId, grid: ScanGrid, tolerance: f64) -> ScanReport {
        ScanReport {
            claim,
            grid,
            tolerance,
            worst_margin: self.worst_margin,
            worst_location: self.worst_location,
            violations: self.violations,
            samples: self.records.len(),
            errors: self.errors,
            records: self.records,
        }
    }
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance > 0.0 && tolerance.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "tolerance must be positive, got {tolerance}"
        )))
    }
}

/// Index of the convexity partner of grid point `i` among `n` points.
fn partner_index(i: usize, n: usize) -> usize {
    let frac = ((i + 1) as f64 * GOLDEN_FRACTION).fract();
    ((frac * n as f64) as usize).min(n - 1)
}

impl Verifier {
    /// Evaluates `claim` over `grid`. Pointwise claims are checked at every
    /// point, monotonicity claims on consecutive pairs, and convexity claims
    /// on one `(x, y)` pair per point for every weight in [`CONVEXITY_WEIGHTS`].
    /// Per-point failures are recorded and counted, never fatal.
    pub fn scan(&self, claim: ClaimId, grid: &ScanGrid, tolerance: f64) -> Result<ScanReport> {
        grid.validate()?;
        check_tolerance(tolerance)?;
        let zs = grid.points();
        let n = zs.len();
        let acc = match claim.shape() {
            ClaimShape::Pointwise => {
                let mut acc = Accumulator::with_capacity(n);
                for &z in &zs {
                    acc.push(z, None, None, self.claim_lhs_rhs_tol(claim, z, tolerance));
                }
                acc
            }
            ClaimShape::Monotone(direction) => {
                let values: Vec<Result<f64>> =
                    zs.iter().map(|&z| self.tracked_value(claim, z)).collect();
                let mut acc = Accumulator::with_capacity(n - 1);
                for i in 1..n {
                    let (z_prev, z_next) = (zs[i - 1], zs[i]);
                    let r = if !(z_prev < z_next) {
                        Err(Error::Grid(format!("grid not increasing at {z_next}")))
                    } else {
                        match (&values[i - 1], &values[i]) {
                            (Ok(rhs), Ok(lhs)) => {
                                Ok(step_eval(direction, z_prev, z_next, *rhs, *lhs, tolerance))
                            }
                            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                        }
                    };
                    acc.push(z_next, Some(z_prev), None, r);
                }
                acc
            }
            ClaimShape::Convexity(kind) => {
                let mut acc = Accumulator::with_capacity(n * CONVEXITY_WEIGHTS.len());
                for (i, &x) in zs.iter().enumerate() {
                    let y = zs[partner_index(i, n)];
                    for k in CONVEXITY_WEIGHTS {
                        acc.push(
                            x,
                            Some(y),
                            Some(k),
                            self.convexity_eval(kind, x, y, k, tolerance),
                        );
                    }
                }
                acc
            }
        };
        Ok(acc.finish(claim, *grid, tolerance))
    }
}

/// [`Verifier::scan`] with the default configuration.
pub fn scan(claim: ClaimId, grid: &ScanGrid, tolerance: f64) -> Result<ScanReport> {
    Verifier::default().scan(claim, grid, tolerance)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignChanges {
    pub count: usize,
    /// Grid points at which consecutive differences change sign.
    pub locations: Vec<f64>,
}

/// Counts sign changes of the consecutive differences of `values` sampled at
/// `zs`. Zero differences carry the previous sign.
pub fn slope_sign_changes(zs: &[f64], values: &[f64]) -> Result<SignChanges> {
    if zs.len() != values.len() {
        return Err(Error::Precondition(format!(
            "{} abscissae but {} values",
            zs.len(),
            values.len()
        )));
    }
    let mut locations = Vec::new();
    let mut prev_sign = 0.0_f64;
    for i in 1..values.len() {
        let d = values[i] - values[i - 1];
        if d.is_nan() {
            return Err(Error::Precondition(format!(
                "non-finite value near z = {}",
                zs[i]
            )));
        }
        if d == 0.0 {
            continue;
        }
        let s = d.signum();
        if prev_sign != 0.0 && s != prev_sign {
            locations.push(zs[i - 1]);
        }
        prev_sign = s;
    }
    Ok(SignChanges {
        count: locations.len(),
        locations,
    })
}
