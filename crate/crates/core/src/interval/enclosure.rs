//! Rigorous enclosures of `psi^(c)` over an interval of arguments.
//!
//! `|psi^(c)(z)| = c! * S(z)` with `S(z) = sum_{n>=0} (n+z)^-(c+1)`, which is
//! decreasing in `z`, so `S([a, b]) ⊆ [S_lower(b), S_upper(a)]`. Each point
//! bound is an explicit partial sum of `terms` terms plus a bracket for the
//! remaining tail. The tail bracket is the intersection of
//!
//! * the convexity bracket `[∫_w^∞ f + f(w)/2, ∫_{w-1/2}^∞ f]`, a refinement
//!   of the integral comparison `[∫_w^∞ f, ∫_{w-1}^∞ f]`, and
//! * the Euler-Maclaurin bracket: for completely monotone `f` the remainder
//!   after `K` correction terms has the sign of, and is smaller than, the
//!   first omitted term, so the tail lies between the `K`- and `(K+1)`-term
//!   truncations.
//!
//! Partial sums are accumulated tail first, from the smallest term up. The
//! explicit head terms play the role of the upward recurrence for small
//! arguments.

use std::sync::OnceLock;

use num_rational::Ratio;

use super::Interval;
use crate::error::{Error, Result};
use crate::specfun::{bernoulli_even_ratio, PolyOrder, MAX_EVEN_INDEX};

// Internal orders go one past PolyOrder so derivative bounds stay available.
const MAX_ORDER: u8 = 4;
const MAX_TERMS: usize = 1 << 20;
const MIN_TERMS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnclosureConfig {
    /// Explicit series terms before the tail bracket.
    pub terms: usize,
    /// Euler-Maclaurin correction terms in the tail bracket (0..=11).
    pub tail_order: usize,
    /// Terms are doubled while the tail contribution is wider than this.
    pub max_width: f64,
}

impl Default for EnclosureConfig {
    fn default() -> Self {
        EnclosureConfig {
            terms: 16,
            tail_order: 6,
            max_width: 1e-12,
        }
    }
}

impl EnclosureConfig {
    pub fn with_terms(terms: usize) -> Self {
        EnclosureConfig {
            terms,
            ..EnclosureConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms < MIN_TERMS || self.terms > MAX_TERMS {
            return Err(Error::Config(format!(
                "terms must be in {MIN_TERMS}..={MAX_TERMS}, got {}",
                self.terms
            )));
        }
        if self.tail_order >= MAX_EVEN_INDEX {
            return Err(Error::Config(format!(
                "tail_order must be below {MAX_EVEN_INDEX}, got {}",
                self.tail_order
            )));
        }
        if !(self.max_width > 0.0) {
            return Err(Error::Config(format!(
                "max_width must be positive, got {}",
                self.max_width
            )));
        }
        Ok(())
    }
}

// em_coef(c)[k-1] encloses B_{2k} (c+1)(c+2)...(c+2k-1) / (2k)!
fn em_coefs(c: u8) -> &'static [Interval] {
    static TABLE: OnceLock<Vec<Vec<Interval>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (1..=MAX_ORDER as i128)
            .map(|c| {
                (1..=MAX_EVEN_INDEX as i128)
                    .map(|k| {
                        let b = bernoulli_even_ratio(k as usize).expect("index in range");
                        // (2k+c-1)! / ((2k)! c!)
                        let mut r = Ratio::from_integer(1i128);
                        for i in 1..c {
                            r *= 2 * k + i;
                        }
                        for i in 1..=c {
                            r /= i;
                        }
                        let a = b * r;
                        Interval::ratio(*a.numer() as f64, *a.denom() as f64)
                    })
                    .collect()
            })
            .collect()
    });
    &table[c as usize - 1]
}

/// Bracket for `sum_{n>=0} (n+w)^-(c+1)` at a point `w > 0`.
pub fn tail_bracket(c: u8, w: f64, order: usize) -> Result<Interval> {
    if c == 0 || c > MAX_ORDER {
        return Err(Error::UnsupportedOrder(c));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::Domain {
            function: "tail_bracket",
            value: w,
        });
    }
    if order >= MAX_EVEN_INDEX {
        return Err(Error::Config(format!("tail order {order} too large")));
    }
    let ci = c as i32;
    let cf = Interval::point(c as f64);
    let inv = Interval::point(w).recip()?;
    let inv_c = inv.powi(ci)?;
    let f_w = inv_c.mul(inv);
    let integral = inv_c.div(cf)?;
    let base = integral.add(f_w.scale(0.5));

    // Euler-Maclaurin: tail between the K- and (K+1)-term truncations.
    let inv2 = inv.mul(inv);
    let coefs = em_coefs(c);
    let mut p = f_w.mul(inv);
    let mut e_k = base;
    for coef in &coefs[..order] {
        e_k = e_k.add(coef.mul(p));
        p = p.mul(inv2);
    }
    let e_next = e_k.add(coefs[order].mul(p));
    let em = e_k.hull(&e_next);

    // Convexity bracket; the upper side needs w > 1/2.
    let elem = if w > 0.5 {
        let shifted = Interval::point(w).sub(Interval::point(0.5));
        let upper = shifted.recip()?.powi(ci)?.div(cf)?;
        Interval::from_bounds(base.lo(), upper.hi().max(base.lo()))
    } else {
        Interval::from_bounds(base.lo(), f64::INFINITY)
    };
    let out = em.intersect(&elem);
    debug_assert!(out.is_some(), "disjoint tail brackets at w={w}");
    Ok(out.unwrap_or(em))
}

// Bracket of S(z) at a point, plus the width contributed by the tail.
fn series_bounds(c: u8, z: f64, terms: usize, order: usize) -> Result<(Interval, f64)> {
    let ci = c as i32 + 1;
    let nz = terms as f64 + z;
    // tail is decreasing in w, and n + z may round either way
    let t_lo = tail_bracket(c, nz.next_up(), order)?;
    let t_hi = tail_bracket(c, nz.next_down(), order)?;
    let mut lo = t_lo.lo();
    let mut hi = t_hi.hi();
    let tail_width = hi - lo;
    for k in (0..terms).rev() {
        let x = if k == 0 {
            Interval::point(z)
        } else {
            let s = k as f64 + z;
            Interval::from_bounds(s.next_down(), s.next_up())
        };
        let t = x.powi(-ci)?;
        lo = (lo + t.lo()).next_down();
        hi = (hi + t.hi()).next_up();
    }
    Ok((Interval::from_bounds(lo, hi), tail_width))
}

fn factorial(c: u8) -> f64 {
    (1..=c as u32).map(f64::from).product()
}

fn raw_enclosure(c: u8, x: Interval, terms: usize, order: usize) -> Result<(Interval, f64)> {
    let (s_at_hi, w_hi) = series_bounds(c, x.hi(), terms, order)?;
    let (s_at_lo, w_lo) = if x.is_point() {
        (s_at_hi, w_hi)
    } else {
        series_bounds(c, x.lo(), terms, order)?
    };
    let cf = factorial(c);
    let lo = (cf * s_at_hi.lo()).next_down();
    let hi = (cf * s_at_lo.hi()).next_up();
    let mag = Interval::from_bounds(lo, hi);
    let out = if c % 2 == 1 { mag } else { mag.neg() };
    Ok((out, cf * w_hi.max(w_lo)))
}

// Intersection over the halving chain terms, terms/2, ... (>= MIN_TERMS), so
// doubling `terms` can only shrink the result.
fn chained(c: u8, x: Interval, terms: usize, order: usize) -> Result<(Interval, f64)> {
    let (mut acc, tail) = raw_enclosure(c, x, terms, order)?;
    let mut m = terms / 2;
    while m >= MIN_TERMS {
        let (r, _) = raw_enclosure(c, x, m, order)?;
        acc = acc.intersect(&r).unwrap_or(acc);
        m /= 2;
    }
    Ok((acc, tail))
}

pub(crate) fn enclose_order(c: u8, x: Interval, cfg: &EnclosureConfig) -> Result<Interval> {
    if c == 0 || c > MAX_ORDER {
        return Err(Error::UnsupportedOrder(c));
    }
    if !(x.lo() > 0.0) {
        return Err(Error::Domain {
            function: "polygamma_enclosure",
            value: x.lo(),
        });
    }
    cfg.validate()?;
    let mut terms = cfg.terms;
    loop {
        let (enc, tail_width) = chained(c, x, terms, cfg.tail_order)?;
        if tail_width <= cfg.max_width || terms * 2 > MAX_TERMS {
            return Ok(enc);
        }
        terms *= 2;
    }
}

/// Interval guaranteed to contain `psi^(c)(z)` for every `z` in `x`,
/// `c >= 1`, `x.lo() > 0`.
pub fn polygamma_enclosure(
    order: PolyOrder,
    x: Interval,
    cfg: &EnclosureConfig,
) -> Result<Interval> {
    if order.get() == 0 {
        return Err(Error::UnsupportedOrder(0));
    }
    enclose_order(order.get(), x, cfg)
}

/// `[1, 1] / x`.
pub fn reciprocal(x: Interval) -> Result<Interval> {
    Interval::point(1.0).div(x)
}

/// Composite expressions used by the certifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expression {
    /// `psi'(z)`
    Trigamma,
    /// `psi'(1/z)`
    TrigammaReciprocal,
    /// `2 psi'(z) psi'(1/z) / (psi'(z) + psi'(1/z))`
    HarmonicMean,
    /// `psi'(z) + psi'(1/z)`
    Sum,
    /// `psi'(z) psi'(1/z)`
    Product,
    /// `psi''(z) + z psi'''(z)`
    Phi,
    /// `psi'(z) psi'''(z) - 2 psi''(z)^2`
    AlzerWells,
    /// `r e^-r / (1 - e^-r) = r / (e^r - 1)`
    KernelB,
}

/// Intersection of the natural extension of `f` over `x` with the mean-value
/// form `f(m) + f'(x) (x - m)`. `parts` maps enclosures of `psi^(c)`, indexed
/// by `c = 1..=4`, to enclosures of `(f, f')`.
fn centered<F>(x: Interval, cfg: &EnclosureConfig, parts: F) -> Result<Interval>
where
    F: Fn(&[Interval; 5], Interval) -> Result<(Interval, Interval)>,
{
    let derivs = |x: Interval| -> Result<[Interval; 5]> {
        let mut d = [Interval::point(0.0); 5];
        for c in 1..=MAX_ORDER {
            d[c as usize] = enclose_order(c, x, cfg)?;
        }
        Ok(d)
    };
    let (natural, slope) = parts(&derivs(x)?, x)?;
    if x.is_point() {
        return Ok(natural);
    }
    let m = Interval::point(x.mid());
    let (at_mid, _) = parts(&derivs(m)?, m)?;
    let mean_value = at_mid.add(slope.mul(x.sub(m)));
    Ok(natural.intersect(&mean_value).unwrap_or(natural))
}

pub fn enclose_expression(
    expr: Expression,
    x: Interval,
    cfg: &EnclosureConfig,
) -> Result<Interval> {
    let trig = |arg: Interval| enclose_order(1, arg, cfg);
    let r = match expr {
        Expression::Trigamma => trig(x)?,
        Expression::TrigammaReciprocal => trig(reciprocal(x)?)?,
        Expression::HarmonicMean => {
            let a = trig(x)?;
            let b = trig(reciprocal(x)?)?;
            // monotone form 2 / (1/a + 1/b)
            Interval::point(2.0).div(a.recip()?.add(b.recip()?))?
        }
        Expression::Sum => trig(x)?.add(trig(reciprocal(x)?)?),
        Expression::Product => trig(x)?.mul(trig(reciprocal(x)?)?),
        // phi' = 2 psi''' + z psi''''
        Expression::Phi => centered(x, cfg, |d, x| {
            Ok((d[2].add(x.mul(d[3])), d[3].scale(2.0).add(x.mul(d[4]))))
        })?,
        // derivative psi' psi'''' - 3 psi'' psi'''
        Expression::AlzerWells => centered(x, cfg, |d, _| {
            let v = d[1].mul(d[3]).sub(d[2].powi(2)?.scale(2.0));
            Ok((v, d[1].mul(d[4]).sub(d[2].mul(d[3]).scale(3.0))))
        })?,
        Expression::KernelB => {
            if !(x.lo() > 0.0) {
                return Err(Error::Domain {
                    function: "kernel_b",
                    value: x.lo(),
                });
            }
            x.div(x.exp().sub(Interval::point(1.0)))?
        }
    };
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow)
    }
}
