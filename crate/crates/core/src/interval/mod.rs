//! Outward-rounded interval arithmetic.
//!
//! Rather than switching hardware rounding modes, every primitive result is
//! pushed one representable step outward with `next_down` / `next_up`. Basic
//! operations are correctly rounded in IEEE 754, so one step suffices for
//! them; `exp` and `ln` come from the platform libm, which is accurate to
//! within one ulp, and are widened by two steps.

mod enclosure;

use std::fmt;

use serde::Serialize;

pub use enclosure::{
    enclose_expression, polygamma_enclosure, reciprocal, tail_bracket, EnclosureConfig, Expression,
};

use crate::error::{Error, Result};

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo <= hi && lo.is_finite() && hi.is_finite() {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        debug_assert!(x.is_finite());
        Interval { lo: x, hi: x }
    }

    /// Smallest interval guaranteed to contain `num / den`.
    pub fn ratio(num: f64, den: f64) -> Self {
        let q = num / den;
        Interval {
            lo: down(q),
            hi: up(q),
        }
    }

    pub(crate) fn from_bounds(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "[{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: down(self.lo + rhs.lo),
            hi: up(self.hi + rhs.hi),
        }
    }

    pub fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: down(self.lo - rhs.hi),
            hi: up(self.hi - rhs.lo),
        }
    }

    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(self, rhs: Interval) -> Interval {
        // Non-negative operands are the hot path in the enclosures.
        if self.lo >= 0.0 && rhs.lo >= 0.0 {
            return Interval {
                lo: down(self.lo * rhs.lo).max(0.0),
                hi: up(self.hi * rhs.hi),
            };
        }
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }

    pub fn scale(self, k: f64) -> Interval {
        self.mul(Interval::point(k))
    }

    pub fn recip(self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Interval {
            lo: down(1.0 / self.hi),
            hi: up(1.0 / self.lo),
        })
    }

    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero {
                lo: rhs.lo,
                hi: rhs.hi,
            });
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval {
            lo: down(lo),
            hi: up(hi),
        })
    }

    pub fn exp(self) -> Interval {
        Interval {
            lo: down(down(self.lo.exp())).max(0.0),
            hi: up(up(self.hi.exp())),
        }
    }

    pub fn ln(self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(Error::LogNonPositive {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Interval {
            lo: down(down(self.lo.ln())),
            hi: up(up(self.hi.ln())),
        })
    }

    /// Integer power by repeated outward-rounded multiplication.
    pub fn powi(self, n: i32) -> Result<Interval> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        if n == 0 {
            return Ok(Interval::point(1.0));
        }
        let mag = |x: f64| -> (f64, f64) {
            let (mut lo, mut hi) = (1.0_f64, 1.0_f64);
            for _ in 0..n {
                lo = down(lo * x);
                hi = up(hi * x);
            }
            (lo.max(0.0), hi)
        };
        let odd = n % 2 == 1;
        Ok(if self.lo >= 0.0 {
            Interval {
                lo: mag(self.lo).0,
                hi: mag(self.hi).1,
            }
        } else if self.hi <= 0.0 {
            let (a_lo, a_hi) = (mag(-self.hi), mag(-self.lo));
            if odd {
                Interval {
                    lo: -a_hi.1,
                    hi: -a_lo.0,
                }
            } else {
                Interval {
                    lo: a_lo.0,
                    hi: a_hi.1,
                }
            }
        } else if odd {
            Interval {
                lo: -mag(-self.lo).1,
                hi: mag(self.hi).1,
            }
        } else {
            Interval {
                lo: 0.0,
                hi: mag(self.hi.max(-self.lo)).1,
            }
        })
    }

    /// `self^y = exp(y ln self)` for `self > 0`.
    pub fn pow(self, y: Interval) -> Result<Interval> {
        Ok(y.mul(self.ln()?).exp())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.16e}, {:.16e}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Exp,
    Ln,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operand {
    Interval(Interval),
    Scalar(f64),
}

impl From<Interval> for Operand {
    fn from(x: Interval) -> Self {
        Operand::Interval(x)
    }
}

impl From<f64> for Operand {
    fn from(x: f64) -> Self {
        Operand::Scalar(x)
    }
}

/// Single entry point for the primitive operations. Unary operations ignore
/// `y`. `Power` with an integral scalar exponent uses repeated
/// multiplication, otherwise `exp(y ln x)`.
pub fn interval_arith(op: ArithOp, x: Interval, y: Operand) -> Result<Interval> {
    let yi = match y {
        Operand::Interval(i) => i,
        Operand::Scalar(s) => Interval::new(s, s)?,
    };
    let r = match op {
        ArithOp::Add => x.add(yi),
        ArithOp::Sub => x.sub(yi),
        ArithOp::Mul => x.mul(yi),
        ArithOp::Div => x.div(yi)?,
        ArithOp::Exp => x.exp(),
        ArithOp::Ln => x.ln()?,
        ArithOp::Power => match y {
            Operand::Scalar(s) if s.fract() == 0.0 && s.abs() <= i32::MAX as f64 => {
                x.powi(s as i32)?
            }
            _ => x.pow(yi)?,
        },
    };
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn construction() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn add_and_mul_examples() {
        let s = interval_arith(ArithOp::Add, iv(1.0, 2.0), iv(3.0, 4.0).into()).unwrap();
        assert!(s.contains(4.0) && s.contains(6.0));
        assert!(s.lo() >= 4.0 - 1e-15 && s.hi() <= 6.0 + 1e-15);

        let p = interval_arith(ArithOp::Mul, iv(1.0, 2.0), iv(-1.0, 1.0).into()).unwrap();
        assert!(p.contains(-2.0) && p.contains(2.0));
        assert!(p.lo() >= -2.0 - 1e-15 && p.hi() <= 2.0 + 1e-15);
    }

    #[test]
    fn division_by_zero_interval() {
        let r = interval_arith(ArithOp::Div, iv(1.0, 1.0), iv(0.0, 1.0).into());
        assert!(matches!(r, Err(Error::DivisionByZero { .. })));
    }

    #[test]
    fn log_of_nonpositive() {
        let r = interval_arith(ArithOp::Ln, iv(-1.0, 2.0), Operand::Scalar(0.0));
        assert!(matches!(r, Err(Error::LogNonPositive { .. })));
    }

    #[test]
    fn outward_by_at_least_one_step() {
        let r = iv(0.1, 0.1).add(iv(0.2, 0.2));
        let exact = 0.1 + 0.2;
        assert!(r.lo() < exact && r.hi() > exact);
        let e = iv(1.0, 1.0).exp();
        assert!(e.contains(std::f64::consts::E));
        let l = iv(2.0, 2.0).ln().unwrap();
        assert!(l.contains(std::f64::consts::LN_2));
    }

    #[test]
    fn powers() {
        let x = iv(-2.0, 3.0);
        let sq = x.powi(2).unwrap();
        assert!(sq.lo() == 0.0 && sq.contains(9.0) && sq.hi() < 9.0 + 1e-12);
        let cube = x.powi(3).unwrap();
        assert!(cube.contains(-8.0) && cube.contains(27.0));
        let neg = iv(-3.0, -2.0).powi(2).unwrap();
        assert!(neg.contains(4.0) && neg.contains(9.0) && neg.lo() > 3.9);
        let inv = iv(2.0, 4.0).powi(-2).unwrap();
        assert!(inv.contains(1.0 / 16.0) && inv.contains(0.25));
        let root = interval_arith(ArithOp::Power, iv(4.0, 4.0), Operand::Scalar(0.5)).unwrap();
        assert!(root.contains(2.0) && root.width() < 1e-14);
    }

    #[test]
    fn mixed_sign_products() {
        let a = iv(-3.0, -1.0);
        let b = iv(2.0, 5.0);
        let p = a.mul(b);
        assert!(p.contains(-15.0) && p.contains(-2.0) && p.hi() < 0.0);
        let q = a.div(b).unwrap();
        assert!(q.contains(-1.5) && q.contains(-0.2));
    }

    #[test]
    fn set_operations() {
        let a = iv(0.0, 2.0);
        let b = iv(1.0, 3.0);
        assert_eq!(a.intersect(&b), Some(iv(1.0, 2.0)));
        assert_eq!(a.hull(&b), iv(0.0, 3.0));
        assert!(iv(1.0, 2.0).is_subset_of(&a));
        assert!(iv(3.5, 4.0).intersect(&a).is_none());
    }
}
