use std::f64::consts::PI;

use proptest::prelude::*;

use psi_bounds::specfun::{self, digamma, log_gamma, polygamma, trigamma, PolyOrder, EULER_GAMMA};

fn order() -> impl Strategy<Value = PolyOrder> {
    (0u8..=3).prop_map(|c| PolyOrder::new(c).unwrap())
}

fn factorial(c: u8) -> f64 {
    (1..=c as u32).map(f64::from).product()
}

// Reference values to 20 digits from 30-digit arithmetic:
// z, ln Gamma, psi, psi', psi'', psi'''
const REFERENCE: [(f64, [f64; 5]); 8] = [
    (
        0.001,
        [
            6.907_178_885_383_853_7,
            -1000.575_571_931_810_3,
            1_000_001.642_533_195_9,
            -2_000_000_002.397_632_3,
            6_000_000_000_006.469_1,
        ],
    ),
    (
        0.1,
        [
            2.252_712_651_734_206,
            -10.423_754_940_411_077,
            101.433_299_150_792_76,
            -2001.861_457_378_344,
            60_004.512_876_790_27,
        ],
    ),
    (
        0.5,
        [
            0.572_364_942_924_700_1,
            -1.963_510_026_021_423_5,
            4.934_802_200_544_679,
            -16.828_796_644_234_32,
            97.409_091_034_002_44,
        ],
    ),
    (
        0.7,
        [
            0.260_867_246_531_666_5,
            -1.220_023_553_697_934_6,
            2.834_049_156_694_610_6,
            -6.434_992_874_190_922_5,
            25.879_149_678_427_73,
        ],
    ),
    (
        3.3,
        [
            0.987_098_577_894_734_6,
            1.034_822_489_059_621_7,
            0.353_501_541_841_061_8,
            -0.123_751_185_264_942_71,
            0.085_849_667_336_884_92,
        ],
    ),
    (
        15.9,
        [
            27.625_493_215_168_69,
            2.734_543_070_175_774,
            0.064_912_281_599_060_12,
            -0.004_212_128_690_139_697,
            0.000_546_455_266_763_765_9,
        ],
    ),
    (
        16.1,
        [
            28.173_694_494_813_54,
            2.747_442_005_514_623,
            0.064_080_645_042_418_56,
            -0.004_104_927_541_910_055,
            0.000_525_734_152_128_345_3,
        ],
    ),
    (
        250.0,
        [
            1128.523_770_872_990_7,
            5.519_459_584_531_046,
            0.004_008_010_666_632_534,
            -0.000_016_064_127_999_317_344,
            1.287_700_479_836_163_5e-7,
        ],
    ),
];

#[test]
fn reference_values() {
    for (z, refs) in REFERENCE {
        let lg = log_gamma(z).unwrap();
        assert!(
            (lg - refs[0]).abs() <= 1e-13 * refs[0].abs().max(1.0),
            "lnGamma({z}) = {lg}"
        );
        for c in 0..=3u8 {
            let v = polygamma(PolyOrder::new(c).unwrap(), z).unwrap();
            let r = refs[c as usize + 1];
            assert!(
                (v - r).abs() <= 4e-15 * r.abs(),
                "psi^({c})({z}) = {v}, expected {r}"
            );
        }
    }
}

#[test]
fn worked_examples() {
    assert_eq!(log_gamma(1.0).unwrap(), 0.0);
    assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-15);
    assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-15);
    assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-15);
    assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-15);
    assert!((digamma(0.5).unwrap() + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-15);
    assert!((trigamma(0.5).unwrap() - PI * PI / 2.0).abs() < 1e-14);
    assert!((trigamma(2.0).unwrap() - (PI * PI / 6.0 - 1.0)).abs() < 1e-15);
    assert_eq!(
        polygamma(PolyOrder::TRIGAMMA, 1.0).unwrap(),
        trigamma(1.0).unwrap()
    );
    assert!(
        (polygamma(PolyOrder::TETRAGAMMA, 1.0).unwrap() + 2.404_113_806_319_188_5).abs() < 1e-14
    );
    assert!((polygamma(PolyOrder::PENTAGAMMA, 1.0).unwrap() - PI.powi(4) / 15.0).abs() < 1e-14);
    for z in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(trigamma(z).is_err());
        assert!(log_gamma(z).is_err());
    }
    assert!(PolyOrder::new(4).is_err());
}

proptest! {
    #[test]
    fn recurrence(order in order(), z in 0.1f64..50.0) {
        let c = order.get();
        let a = polygamma(order, z).unwrap();
        let b = polygamma(order, z + 1.0).unwrap();
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        let step = if c == 0 { 1.0 / z } else { sign * factorial(c) / z.powi(c as i32 + 1) };
        prop_assert!((b - a - step).abs() <= 1e-11 * a.abs().max(1.0), "c={c} z={z}");
    }

    #[test]
    fn log_gamma_recurrence(z in 0.1f64..50.0) {
        let a = log_gamma(z).unwrap();
        let b = log_gamma(z + 1.0).unwrap();
        prop_assert!((b - a - z.ln()).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn sign_law(order in (1u8..=3).prop_map(|c| PolyOrder::new(c).unwrap()), e in -4.0f64..4.0) {
        let z = 10f64.powf(e);
        let v = polygamma(order, z).unwrap();
        let expected = if order.get() % 2 == 1 { 1.0 } else { -1.0 };
        prop_assert_eq!(v.signum(), expected);
    }

    #[test]
    fn trigamma_decreasing(e in -4.0f64..4.0, r in 1.0001f64..2.0) {
        let z = 10f64.powf(e);
        prop_assert!(trigamma(z * r).unwrap() < trigamma(z).unwrap());
    }

    #[test]
    fn reflection(z in 0.01f64..0.99) {
        // psi'(z) + psi'(1 - z) = pi^2 / sin^2(pi z)
        let lhs = trigamma(z).unwrap() + trigamma(1.0 - z).unwrap();
        let s = (PI * z).sin();
        let rhs = PI * PI / (s * s);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs);
        // psi(1 - z) - psi(z) = pi cot(pi z)
        let d = digamma(1.0 - z).unwrap() - digamma(z).unwrap();
        let cot = PI / (PI * z).tan();
        prop_assert!((d - cot).abs() <= 1e-13 * cot.abs().max(1.0) * (1.0 / z).max(1.0));
    }

    #[test]
    fn duplication(z in 0.01f64..100.0) {
        // 4 psi'(2z) = psi'(z) + psi'(z + 1/2)
        let lhs = 4.0 * trigamma(2.0 * z).unwrap();
        let rhs = trigamma(z).unwrap() + trigamma(z + 0.5).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-14 * rhs);
        // 2 psi(2z) = psi(z) + psi(z + 1/2) + 2 ln 2
        let lhs = 2.0 * digamma(2.0 * z).unwrap();
        let rhs = digamma(z).unwrap() + digamma(z + 0.5).unwrap() + 2.0 * 2f64.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0) * (1.0 / z).max(1.0));
    }

    #[test]
    fn z_psi2_increasing(e in -2.0f64..2.0, r in 1.001f64..2.0) {
        let z = 10f64.powf(e);
        let f = |z: f64| z * polygamma(PolyOrder::TETRAGAMMA, z).unwrap();
        prop_assert!(f(z * r) > f(z));
    }

    #[test]
    fn gamma_is_exp_log_gamma(z in 0.05f64..30.0) {
        let g = specfun::gamma(z).unwrap();
        prop_assert!((g.ln() - log_gamma(z).unwrap()).abs() <= 1e-14 * g.ln().abs().max(1.0));
    }
}
