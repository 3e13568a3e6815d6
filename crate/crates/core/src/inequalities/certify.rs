use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::{ClaimId, Verifier};
use crate::error::{Error, Result};
use crate::interval::{enclose_expression, Expression, Interval};
use crate::specfun::PI_SQ_OVER_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertStatus {
    Proven,
    Inconclusive,
    Refuted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Deepest bisection level a box may reach.
    pub max_depth: u32,
    /// Total number of enclosures evaluated before giving up.
    pub max_boxes: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            max_depth: 60,
            max_boxes: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub claim: ClaimId,
    #[serde(rename = "box")]
    pub region: Interval,
    pub exclusion_radius: f64,
    pub status: CertStatus,
    /// Smallest lower bound of the margin over all leaf boxes.
    pub min_margin: f64,
    pub boxes_examined: usize,
    /// Deepest bisection level reached.
    pub max_depth: u32,
    /// A box on which the margin enclosure is strictly negative.
    pub witness: Option<Interval>,
}

/// Rigorous enclosure of `pi^2/6`.
fn pi_sq_over_6() -> Interval {
    Interval::from_bounds(PI_SQ_OVER_6.next_down(), PI_SQ_OVER_6.next_up())
}

/// Enclosure of the oriented margin of `claim` over `x`; the claim holds on
/// `x` when the lower bound is positive.
fn margin_enclosure(
    verifier: &Verifier,
    claim: ClaimId,
    expr: Expression,
    x: Interval,
) -> Result<Interval> {
    let v = enclose_expression(expr, x, &verifier.enclosure)?;
    let c6 = pi_sq_over_6();
    Ok(match claim {
        ClaimId::TrigammaHm => c6.sub(v),
        ClaimId::TrigammaSum => v.sub(c6.scale(2.0)),
        ClaimId::TrigammaProd => v.sub(c6.mul(c6)),
        ClaimId::PhiNonneg => v,
        ClaimId::AlzerWells => v.neg(),
        ClaimId::KernelBBounds => {
            let upper = Interval::point(1.0).sub(v);
            Interval::from_bounds(v.lo().min(upper.lo()), v.hi().min(upper.hi()))
        }
        other => return Err(Error::NotCertifiable(other)),
    })
}

fn split(x: Interval) -> Option<(Interval, Interval)> {
    let (lo, hi) = (x.lo(), x.hi());
    let mid = if hi > 2.0 * lo {
        (lo * hi).sqrt()
    } else {
        0.5 * (lo + hi)
    };
    if lo < mid && mid < hi {
        Some((
            Interval::from_bounds(lo, mid),
            Interval::from_bounds(mid, hi),
        ))
    } else {
        None
    }
}

struct Pending {
    priority: f64,
    lower: f64,
    order: usize,
    depth: u32,
    x: Interval,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    // max-heap: lowest relative margin first, then earliest discovered
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .priority
            .total_cmp(&self.priority)
            .then_with(|| other.order.cmp(&self.order))
    }
}

fn relative_lower(m: Interval) -> f64 {
    m.lo() / 1.0_f64.max(m.lo().abs()).max(m.hi().abs())
}

impl Verifier {
    /// Adaptive-bisection proof that `claim` holds strictly on `region`,
    /// minus `(1 - exclusion_radius, 1 + exclusion_radius)` for claims with
    /// equality at `z = 1`.
    pub fn certify(
        &self,
        claim: ClaimId,
        region: Interval,
        exclusion_radius: f64,
        options: CertifyOptions,
    ) -> Result<Certificate> {
        let expr = claim.expression().ok_or(Error::NotCertifiable(claim))?;
        if !(region.lo() > 0.0) {
            return Err(Error::Precondition(format!(
                "box {region} must lie in (0, inf)"
            )));
        }
        if !(exclusion_radius >= 0.0 && exclusion_radius.is_finite()) {
            return Err(Error::Precondition(format!(
                "exclusion radius must be non-negative, got {exclusion_radius}"
            )));
        }
        if options.max_boxes == 0 {
            return Err(Error::Precondition("max_boxes must be positive".into()));
        }
        let mut roots = Vec::with_capacity(2);
        if claim.equality_at_one() && region.contains(1.0) {
            if exclusion_radius == 0.0 {
                return Err(Error::Precondition(format!(
                    "{claim} attains equality at z = 1 inside {region}; a positive exclusion radius is required"
                )));
            }
            let (a, b) = (1.0 - exclusion_radius, 1.0 + exclusion_radius);
            if region.lo() < a {
                roots.push(Interval::from_bounds(region.lo(), a.min(region.hi())));
            }
            if region.hi() > b {
                roots.push(Interval::from_bounds(b.max(region.lo()), region.hi()));
            }
        } else {
            roots.push(region);
        }

        let mut cert = Certificate {
            claim,
            region,
            exclusion_radius: if claim.equality_at_one() {
                exclusion_radius
            } else {
                0.0
            },
            status: CertStatus::Proven,
            min_margin: f64::INFINITY,
            boxes_examined: 0,
            max_depth: 0,
            witness: None,
        };
        bisect(&roots, options, &mut cert, |x| {
            margin_enclosure(self, claim, expr, x)
        })?;
        Ok(cert)
    }
}

/// Runs the bisection over `roots`, filling in the status and statistics of
/// `cert`. Enclosure failures other than `NotCertifiable` mark the box as
/// undecided.
fn bisect<F>(
    roots: &[Interval],
    options: CertifyOptions,
    cert: &mut Certificate,
    margin: F,
) -> Result<()>
where
    F: Fn(Interval) -> Result<Interval>,
{
    let mut heap = BinaryHeap::new();
    let mut order = 0usize;
    let mut unresolved = false;
    let mut queue = roots.iter().map(|&x| (x, 0u32)).collect::<Vec<_>>();

    loop {
        for (x, depth) in queue.drain(..) {
            cert.boxes_examined += 1;
            cert.max_depth = cert.max_depth.max(depth);
            let m = match margin(x) {
                Ok(m) => Some(m),
                Err(e @ Error::NotCertifiable(_)) => return Err(e),
                Err(_) => None,
            };
            match m {
                Some(m) if m.lo() > 0.0 => cert.min_margin = cert.min_margin.min(m.lo()),
                Some(m) if m.hi() < 0.0 => {
                    cert.min_margin = cert.min_margin.min(m.lo());
                    cert.witness.get_or_insert(x);
                }
                _ => {
                    let lower = m.map_or(f64::NEG_INFINITY, |m| m.lo());
                    if depth >= options.max_depth || split(x).is_none() {
                        unresolved = true;
                        cert.min_margin = cert.min_margin.min(lower);
                    } else {
                        heap.push(Pending {
                            priority: m.map_or(f64::NEG_INFINITY, relative_lower),
                            lower,
                            order,
                            depth,
                            x,
                        });
                        order += 1;
                    }
                }
            }
        }
        if cert.witness.is_some() {
            break;
        }
        let Some(p) = heap.pop() else { break };
        if cert.boxes_examined + 2 > options.max_boxes {
            heap.push(p);
            break;
        }
        let (l, r) = split(p.x).expect("queued boxes are splittable");
        queue.push((l, p.depth + 1));
        queue.push((r, p.depth + 1));
    }

    cert.status = if cert.witness.is_some() {
        CertStatus::Refuted
    } else if unresolved || !heap.is_empty() {
        for p in heap.iter() {
            cert.min_margin = cert.min_margin.min(p.lower);
        }
        CertStatus::Inconclusive
    } else {
        CertStatus::Proven
    };
    Ok(())
}

/// [`Verifier::certify`] with the default configuration and box budget.
pub fn certify(
    claim: ClaimId,
    region: Interval,
    exclusion_radius: f64,
    max_depth: u32,
) -> Result<Certificate> {
    Verifier::default().certify(
        claim,
        region,
        exclusion_radius,
        CertifyOptions {
            max_depth,
            ..CertifyOptions::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn trigamma_hm_on_two_three() {
        let c = certify(ClaimId::TrigammaHm, iv(2.0, 3.0), 0.0, 40).unwrap();
        assert_eq!(c.status, CertStatus::Proven);
        assert!(c.min_margin > 0.0);
        assert!(c.witness.is_none());
    }

    #[test]
    fn equality_point_needs_exclusion() {
        let e = certify(ClaimId::TrigammaHm, iv(0.999, 1.001), 0.0, 40);
        assert!(matches!(e, Err(Error::Precondition(_))));
        let e = certify(ClaimId::TrigammaSum, iv(1.0, 2.0), 0.0, 40);
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn gamma_claims_are_not_certifiable() {
        let e = certify(ClaimId::GammaHm, iv(1.0, 2.0), 0.0, 40);
        assert!(matches!(e, Err(Error::NotCertifiable(ClaimId::GammaHm))));
    }

    #[test]
    fn exclusion_covering_the_box_is_trivially_proven() {
        let c = certify(ClaimId::TrigammaProd, iv(0.9995, 1.0005), 1e-3, 10).unwrap();
        assert_eq!(c.status, CertStatus::Proven);
        assert_eq!(c.boxes_examined, 0);
    }

    #[test]
    fn depth_limit_gives_inconclusive() {
        let c = certify(ClaimId::TrigammaHm, iv(0.5, 2.0), 1e-3, 0).unwrap();
        assert_eq!(c.status, CertStatus::Inconclusive);
    }

    fn blank(claim: ClaimId, region: Interval) -> Certificate {
        Certificate {
            claim,
            region,
            exclusion_radius: 0.0,
            status: CertStatus::Proven,
            min_margin: f64::INFINITY,
            boxes_examined: 0,
            max_depth: 0,
            witness: None,
        }
    }

    #[test]
    fn a_false_bound_is_refuted() {
        // margin z - 2 is negative on [1, 2)
        let region = iv(1.0, 3.0);
        let mut cert = blank(ClaimId::PhiNonneg, region);
        bisect(&[region], CertifyOptions::default(), &mut cert, |x| {
            Ok(x.sub(Interval::point(2.0)))
        })
        .unwrap();
        assert_eq!(cert.status, CertStatus::Refuted);
        let w = cert.witness.unwrap();
        assert!(w.hi() < 2.0);
        assert!(cert.min_margin < 0.0);
    }

    #[test]
    fn box_budget_gives_inconclusive() {
        // margin (z - 2)^2 touches zero, so bisection never finishes
        let region = iv(1.0, 3.0);
        let mut cert = blank(ClaimId::PhiNonneg, region);
        let opts = CertifyOptions {
            max_depth: 200,
            max_boxes: 500,
        };
        bisect(&[region], opts, &mut cert, |x| {
            x.sub(Interval::point(2.0)).powi(2)
        })
        .unwrap();
        assert_eq!(cert.status, CertStatus::Inconclusive);
        assert!(cert.boxes_examined <= 500);
        assert!(cert.min_margin <= 0.0);
    }

    #[test]
    fn kernel_b_bounds() {
        let c = certify(ClaimId::KernelBBounds, iv(1e-3, 50.0), 0.0, 60).unwrap();
        assert_eq!(c.status, CertStatus::Proven);
    }

    #[test]
    fn split_uses_geometric_midpoint_on_wide_boxes() {
        let (l, r) = split(iv(0.01, 100.0)).unwrap();
        assert!((l.hi() - 1.0).abs() < 1e-15);
        assert_eq!(r.hi(), 100.0);
        let (l, _) = split(iv(2.0, 3.0)).unwrap();
        assert_eq!(l.hi(), 2.5);
        assert!(split(iv(1.0, 1.0)).is_none());
    }
}
