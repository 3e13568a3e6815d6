//! Log-gamma, digamma and polygamma functions on `(0, inf)`.
//!
//! Every function lifts its argument with the upward recurrence until it
//! reaches `EvalConfig::recurrence_threshold`, then applies the Bernoulli
//! asymptotic expansion. The lifted terms are accumulated smallest first.
//! Only orders 0 through 3 are supported; negative arguments are rejected
//! rather than reflected.

mod bernoulli;

use std::sync::OnceLock;

pub use bernoulli::{bernoulli_even, bernoulli_even_ratio, MAX_EVEN_INDEX};

use crate::error::{Error, Result};

/// Euler-Mascheroni constant, correctly rounded.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// `pi^2 / 6 = psi'(1)`, correctly rounded.
pub const PI_SQ_OVER_6: f64 = 1.644_934_066_848_226_4;
/// `pi^2 / 3`; exactly twice [`PI_SQ_OVER_6`].
pub const PI_SQ_OVER_3: f64 = 2.0 * PI_SQ_OVER_6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub euler_gamma: f64,
    pub pi_sq_over_6: f64,
    pub pi_sq_over_3: f64,
}

pub const CONSTANTS: Constants = Constants {
    euler_gamma: EULER_GAMMA,
    pi_sq_over_6: PI_SQ_OVER_6,
    pi_sq_over_3: PI_SQ_OVER_3,
};

/// Order of the polygamma function: 0 is digamma, 1 trigamma, up to 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyOrder(u8);

impl PolyOrder {
    pub const DIGAMMA: PolyOrder = PolyOrder(0);
    pub const TRIGAMMA: PolyOrder = PolyOrder(1);
    pub const TETRAGAMMA: PolyOrder = PolyOrder(2);
    pub const PENTAGAMMA: PolyOrder = PolyOrder(3);

    pub fn new(c: u8) -> Result<Self> {
        if c <= 3 {
            Ok(PolyOrder(c))
        } else {
            Err(Error::UnsupportedOrder(c))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// Truncation choices for the recurrence + asymptotic evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Arguments below this are lifted with the recurrence first.
    pub recurrence_threshold: f64,
    /// Number of Bernoulli terms in the asymptotic expansion.
    pub asym_terms: usize,
    /// Explicit terms used by [`EvalConfig::polygamma_series`].
    pub series_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            recurrence_threshold: 16.0,
            asym_terms: 8,
            series_terms: 50,
        }
    }
}

// Coefficient tables for the asymptotic expansions, index k-1 for B_{2k}.
struct AsymTables {
    log_gamma: [f64; MAX_EVEN_INDEX],
    digamma: [f64; MAX_EVEN_INDEX],
    // B_{2k} (2k+c-1)! / (2k)! for c = 1, 2, 3
    polygamma: [[f64; MAX_EVEN_INDEX]; 3],
}

fn tables() -> &'static AsymTables {
    static T: OnceLock<AsymTables> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = AsymTables {
            log_gamma: [0.0; MAX_EVEN_INDEX],
            digamma: [0.0; MAX_EVEN_INDEX],
            polygamma: [[0.0; MAX_EVEN_INDEX]; 3],
        };
        for k in 1..=MAX_EVEN_INDEX {
            let b = bernoulli_even_ratio(k).expect("index in range");
            let two_k = 2 * k as i128;
            let lg = b / (two_k * (two_k - 1));
            let dg = b / two_k;
            t.log_gamma[k - 1] = *lg.numer() as f64 / *lg.denom() as f64;
            t.digamma[k - 1] = *dg.numer() as f64 / *dg.denom() as f64;
            for c in 1..=3usize {
                // (2k+c-1)! / (2k)! = (2k+1)(2k+2)...(2k+c-1)
                let rising: f64 = (1..c).map(|i| (2 * k + i) as f64).product();
                t.polygamma[c - 1][k - 1] = rising * (*b.numer() as f64 / *b.denom() as f64);
            }
        }
        t
    })
}

fn check_arg(function: &'static str, z: f64) -> Result<()> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { function, value: z })
    }
}

fn factorial(c: u8) -> f64 {
    (1..=c as u32).map(f64::from).product()
}

impl EvalConfig {
    pub fn new(recurrence_threshold: f64, asym_terms: usize, series_terms: usize) -> Result<Self> {
        let cfg = EvalConfig {
            recurrence_threshold,
            asym_terms,
            series_terms,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.recurrence_threshold >= 8.0) || !self.recurrence_threshold.is_finite() {
            return Err(Error::Config(format!(
                "recurrence_threshold must be >= 8, got {}",
                self.recurrence_threshold
            )));
        }
        if self.asym_terms == 0 || self.asym_terms > MAX_EVEN_INDEX {
            return Err(Error::Config(format!(
                "asym_terms must be in 1..={MAX_EVEN_INDEX}, got {}",
                self.asym_terms
            )));
        }
        if self.series_terms < 50 {
            return Err(Error::Config(format!(
                "series_terms must be >= 50, got {}",
                self.series_terms
            )));
        }
        Ok(())
    }

    /// Number of unit steps needed to lift `z` to the asymptotic region.
    fn lift_steps(&self, z: f64) -> usize {
        if z >= self.recurrence_threshold {
            0
        } else {
            (self.recurrence_threshold - z).ceil() as usize
        }
    }

    pub fn log_gamma(&self, z: f64) -> Result<f64> {
        check_arg("log_gamma", z)?;
        if z <= 20.0 && z.fract() == 0.0 {
            // (z-1)! is exact in binary64 for z <= 20.
            return Ok(factorial(z as u8 - 1).ln());
        }
        let m = self.lift_steps(z);
        let x = z + m as f64;
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let t = tables();
        let mut series = 0.0;
        let mut p = inv;
        for coef in &t.log_gamma[..self.asym_terms] {
            series += coef * p;
            p *= inv2;
        }
        let ln_2pi_half = 0.918_938_533_204_672_8;
        let lifted = (x - 0.5) * x.ln() - x + ln_2pi_half + series;
        if m == 0 {
            return Ok(lifted);
        }
        let prod: f64 = (0..m).map(|k| z + k as f64).product();
        Ok(lifted - prod.ln())
    }

    pub fn gamma(&self, z: f64) -> Result<f64> {
        Ok(self.log_gamma(z)?.exp())
    }

    pub fn digamma(&self, z: f64) -> Result<f64> {
        check_arg("digamma", z)?;
        let m = self.lift_steps(z);
        let x = z + m as f64;
        let inv2 = 1.0 / (x * x);
        let t = tables();
        let mut series = 0.0;
        let mut p = inv2;
        for coef in &t.digamma[..self.asym_terms] {
            series += coef * p;
            p *= inv2;
        }
        let asym = x.ln() - 0.5 / x - series;
        let lift: f64 = (0..m).rev().map(|k| 1.0 / (z + k as f64)).sum();
        Ok(asym - lift)
    }

    pub fn trigamma(&self, z: f64) -> Result<f64> {
        self.polygamma(PolyOrder::TRIGAMMA, z)
    }

    pub fn polygamma(&self, order: PolyOrder, z: f64) -> Result<f64> {
        let c = order.get();
        if c == 0 {
            return self.digamma(z);
        }
        check_arg("polygamma", z)?;
        let m = self.lift_steps(z);
        let x = z + m as f64;
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let cf = factorial(c);
        let xc = x.powi(c as i32);
        // magnitude: (c-1)!/x^c + c!/(2 x^{c+1}) + sum B_{2k} (2k+c-1)!/(2k)! / x^{2k+c}
        let mut series = 0.0;
        let mut p = inv2 / xc;
        for coef in &tables().polygamma[c as usize - 1][..self.asym_terms] {
            series += coef * p;
            p *= inv2;
        }
        let asym = factorial(c - 1) / xc + 0.5 * cf / (xc * x) + series;
        let e = c as i32 + 1;
        let lift: f64 = (0..m).rev().map(|k| (z + k as f64).powi(-e)).sum();
        let magnitude = asym + cf * lift;
        Ok(if c % 2 == 1 { magnitude } else { -magnitude })
    }

    /// Direct partial sum of the defining series with a midpoint tail
    /// estimate. Slow and less accurate; kept as a cross-check path.
    pub fn polygamma_series(&self, order: PolyOrder, z: f64) -> Result<f64> {
        check_arg("polygamma_series", z)?;
        let n = self.series_terms;
        let nf = n as f64;
        match order.get() {
            0 => {
                // -gamma - 1/z + sum_{k>=1} z / (k (k + z))
                let head: f64 = (1..=n)
                    .rev()
                    .map(|k| {
                        let k = k as f64;
                        z / (k * (k + z))
                    })
                    .sum();
                let tail = (z / (nf + 0.5)).ln_1p();
                Ok(-EULER_GAMMA - 1.0 / z + head + tail)
            }
            c => {
                let e = c as i32 + 1;
                let head: f64 = (0..n).rev().map(|k| (z + k as f64).powi(-e)).sum();
                let tail = (nf - 0.5 + z).powi(-(c as i32)) / c as f64;
                let magnitude = factorial(c) * (head + tail);
                Ok(if c % 2 == 1 { magnitude } else { -magnitude })
            }
        }
    }
}

fn default_config() -> &'static EvalConfig {
    static CFG: OnceLock<EvalConfig> = OnceLock::new();
    CFG.get_or_init(EvalConfig::default)
}

/// `ln Gamma(z)` for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64> {
    default_config().log_gamma(z)
}

/// `Gamma(z)` for `z > 0`; overflows to `+inf` above about 171.6.
pub fn gamma(z: f64) -> Result<f64> {
    default_config().gamma(z)
}

pub fn digamma(z: f64) -> Result<f64> {
    default_config().digamma(z)
}

pub fn trigamma(z: f64) -> Result<f64> {
    default_config().trigamma(z)
}

/// `psi^(c)(z)` for `c` in `0..=3`.
pub fn polygamma(order: PolyOrder, z: f64) -> Result<f64> {
    default_config().polygamma(order, z)
}
