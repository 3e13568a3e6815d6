//! Adaptive Gauss-Kronrod quadrature for the integral representations.
//!
//! This is an independent oracle for the series-based evaluators, not a
//! production path. Semi-infinite integrals are mapped onto `[0, 1)` with
//! `r = t / (1 - t)`; every kernel decays like `e^{-zr}`, so the mapped
//! integrand vanishes at `t = 1`. Panels are bisected largest-error first.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::specfun;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_PANELS: usize = 4000;
// Below this the near-zero series replaces r / (1 - e^{-r}).
const SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

/// Built-in integrand families on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrandSpec {
    /// `r^c e^{-zr} / (1 - e^{-r})`, `c >= 1`; integrates to `|psi^(c)(z)|`.
    PolygammaKernel { c: u8, z: f64 },
    /// `r^c e^{-zr}`; integrates to `c! / z^{c+1}`.
    PlainExponential { c: u8, z: f64 },
    /// `(e^{-r} - e^{-zr}) / (1 - e^{-r})`; integrates to `psi(z) + gamma`.
    DigammaShifted { z: f64 },
    /// `e^{-r}/r - e^{-zr} / (1 - e^{-r})`; integrates to `psi(z)`.
    DigammaGauss { z: f64 },
    /// `r^{z-1} e^{-r}`; integrates to `Gamma(z)`.
    GammaIntegral { z: f64 },
}

/// `r / (1 - e^{-r})`, continuous at 0 with value 1.
pub fn r_over_one_minus_exp(r: f64) -> f64 {
    if r < SERIES_CUTOFF {
        1.0 + r * (0.5 + r / 12.0)
    } else {
        -r / (-r).exp_m1()
    }
}

impl IntegrandSpec {
    fn validate(&self) -> Result<()> {
        let (z, c_ok) = match *self {
            IntegrandSpec::PolygammaKernel { c, z } => (z, (1..=3).contains(&c)),
            IntegrandSpec::PlainExponential { c, z } => (z, c <= 10),
            IntegrandSpec::DigammaShifted { z }
            | IntegrandSpec::DigammaGauss { z }
            | IntegrandSpec::GammaIntegral { z } => (z, true),
        };
        if !c_ok {
            return Err(Error::Precondition(format!(
                "unsupported integrand {self:?}"
            )));
        }
        if z.is_finite() && z > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain {
                function: "integrate",
                value: z,
            })
        }
    }

    fn eval(&self, r: f64) -> f64 {
        match *self {
            IntegrandSpec::PolygammaKernel { c, z } => {
                r.powi(c as i32 - 1) * (-z * r).exp() * r_over_one_minus_exp(r)
            }
            IntegrandSpec::PlainExponential { c, z } => r.powi(c as i32) * (-z * r).exp(),
            IntegrandSpec::DigammaShifted { z } => {
                if r < SERIES_CUTOFF {
                    (z - 1.0) * (1.0 - 0.5 * z * r + z * (2.0 * z - 1.0) * r * r / 12.0)
                } else {
                    // (e^{-r} - e^{-zr}) / r * r / (1 - e^{-r}), factored on the
                    // slower exponential so neither factor overflows
                    let diff = if z >= 1.0 {
                        -(-r).exp() * (-(z - 1.0) * r).exp_m1()
                    } else {
                        (-z * r).exp() * (-(1.0 - z) * r).exp_m1()
                    };
                    diff / r * r_over_one_minus_exp(r)
                }
            }
            IntegrandSpec::DigammaGauss { z } => {
                if r < SERIES_CUTOFF {
                    (z - 1.5)
                        + r * (5.0 / 12.0 + 0.5 * z - 0.5 * z * z)
                        + r * r * (z * z * z / 6.0 - z * z / 4.0 + z / 12.0 - 1.0 / 6.0)
                } else {
                    ((-r).exp() - (-z * r).exp() * r_over_one_minus_exp(r)) / r
                }
            }
            IntegrandSpec::GammaIntegral { z } => r.powf(z - 1.0) * (-r).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = (fc * WGK[7]).abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    let floor = 50.0 * f64::EPSILON * resabs * half.abs();
    Panel {
        a,
        b,
        value,
        err: err.max(floor),
    }
}

// Neumaier-compensated sum.
fn compensated_sum<I: Iterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Adaptive GK15 on `[a, b]`. Converged once the summed error estimate is
/// at most `tol * max(1, |value|)`.
pub(crate) fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(tol >= 1e-13) {
        return Err(Error::Precondition(format!(
            "tolerance {tol:e} below 1e-13"
        )));
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&mut f, a, b);
    let mut evaluations = 15;
    heap.push(first);
    loop {
        let value = compensated_sum(heap.iter().map(|p| p.value));
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                err_estimate: f64::INFINITY,
                tol,
                evaluations,
            });
        }
        if err <= tol * value.abs().max(1.0) {
            return Ok(QuadResult {
                value,
                err_estimate: err,
                evaluations,
            });
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::NonConvergence {
                err_estimate: err,
                tol,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(gk15(&mut f, worst.a, mid));
        heap.push(gk15(&mut f, mid, worst.b));
        evaluations += 30;
    }
}

/// `∫_0^∞ f(r) dr` via `r = t / (1 - t)`.
pub(crate) fn adaptive_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    tol: f64,
) -> Result<QuadResult> {
    adaptive(
        |t| {
            let s = 1.0 - t;
            let v = f(t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Integrates a built-in family over `[0, inf)`.
pub fn integrate(integrand: IntegrandSpec, tol: f64) -> Result<QuadResult> {
    integrand.validate()?;
    match integrand {
        // r = u^{1/z} removes the endpoint singularity of r^{z-1}:
        // Gamma(z) = (1/z) ∫_0^∞ exp(-u^{1/z}) du
        IntegrandSpec::GammaIntegral { z } if z < 1.0 => {
            let p = 1.0 / z;
            let mut q = adaptive_semi_infinite(|u| (-u.powf(p)).exp(), tol)?;
            q.value *= p;
            q.err_estimate *= p;
            Ok(q)
        }
        _ => adaptive_semi_infinite(|r| integrand.eval(r), tol),
    }
}

/// `A(r) = r^3/(1 - e^{-r}) - ∫_0^r s^2/(1 - e^{-s}) ds`.
pub fn kernel_a(r: f64, tol: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            function: "kernel_a",
            value: r,
        });
    }
    let inner = adaptive(|s| s * r_over_one_minus_exp(s), 0.0, r, tol)?;
    Ok(r * r * r_over_one_minus_exp(r) - inner.value)
}

/// Both sides of the convolution identity with `f = 1`,
/// `g(s) = s^2/(1 - e^{-s})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionCheck {
    /// `∫_0^∞ [∫_0^r g(s) ds] e^{-zr} dr` by nested quadrature.
    pub convolution: f64,
    /// `(∫ e^{-zr} dr)(∫ g(r) e^{-zr} dr)` by two separate quadratures.
    pub product: f64,
    /// `-psi''(z) / z` from the series evaluator.
    pub reference: f64,
    /// `|convolution - reference|`.
    pub residual: f64,
}

pub fn convolution_check(z: f64, tol: f64) -> Result<ConvolutionCheck> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            function: "convolution_check",
            value: z,
        });
    }
    let inner_tol = (tol * 1e-2).max(1e-13);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let outer = adaptive_semi_infinite(
        |r| {
            let decay = (-z * r).exp();
            if decay == 0.0 || failure.borrow().is_some() {
                return 0.0;
            }
            match adaptive(|s| s * r_over_one_minus_exp(s), 0.0, r, inner_tol) {
                Ok(q) => q.value * decay,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let convolution = outer?.value;
    let laplace_one = integrate(IntegrandSpec::PlainExponential { c: 0, z }, tol)?.value;
    let laplace_g = integrate(IntegrandSpec::PolygammaKernel { c: 2, z }, tol)?.value;
    let reference = -specfun::polygamma(specfun::PolyOrder::TETRAGAMMA, z)? / z;
    Ok(ConvolutionCheck {
        convolution,
        product: laplace_one * laplace_g,
        reference,
        residual: (convolution - reference).abs(),
    })
}
