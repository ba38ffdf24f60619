// 1F1 and the even/odd Weber solutions against partial sums in exact rational
// arithmetic. Arguments are chosen dyadic so they are exact in f64 too.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use isosusy::specfun::{self, PrecisionConfig, WeberArgs};

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// `Σ (α)_k / (β)_k x^k / k!` until a term is below `10⁻³⁰` of the sum and
/// all later terms keep one sign and shrink.
fn kummer_exact(alpha: f64, beta: f64, x: f64) -> f64 {
    let (a, b, x) = (rat(alpha), rat(beta), rat(x));
    let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 0..2000u32 {
        sum += &term;
        let kk = BigRational::from_integer(BigInt::from(k));
        let next = &term * (&a + &kk) * &x / ((&b + &kk) * (&kk + BigRational::one()));
        let settled = (&a + &kk).is_positive() && next.abs() < term.abs();
        if settled && next.abs() < sum.abs() * &tiny {
            break;
        }
        term = next;
    }
    sum.to_f64().expect("representable")
}

const EPSILONS: [f64; 7] = [-7.75, -4.5, -2.5, -1.25, -0.5, 0.75, 3.5];
const ZS: [f64; 7] = [-5.5, -3.0, -1.25, 0.0, 0.5, 2.75, 6.0];

#[test]
fn kummer_matches_exact_partial_sums() {
    let cfg = PrecisionConfig::default();
    for &e in &EPSILONS {
        for &z in &ZS {
            let x = 0.5 * z * z;
            for (alpha, beta) in [(0.5 * e + 0.25, 0.5), (0.5 * e + 0.75, 1.5)] {
                let exact = kummer_exact(alpha, beta, x);
                let ours = specfun::kummer_1f1(alpha, beta, x, &cfg).unwrap();
                let err = (ours - exact).abs() / exact.abs().max(1.0);
                assert!(err < 1e-13, "1F1({alpha}; {beta}; {x}) = {ours}, exact {exact}");
            }
        }
    }
}

#[test]
fn weber_solutions_match_exact_sums() {
    let cfg = PrecisionConfig::default();
    for &e in &EPSILONS {
        for &z in &ZS {
            let args = WeberArgs::new(e, z);
            let g = (-0.25 * z * z).exp();
            let x = 0.5 * z * z;
            let y1 = g * kummer_exact(0.5 * e + 0.25, 0.5, x);
            let y2 = z * g * kummer_exact(0.5 * e + 0.75, 1.5, x);
            let r1 = specfun::weber_y1(args, &cfg).unwrap();
            let r2 = specfun::weber_y2(args, &cfg).unwrap();
            assert!((r1 - y1).abs() <= 1e-13 * y1.abs().max(1.0), "y1({e}, {z})");
            assert!((r2 - y2).abs() <= 1e-13 * y2.abs().max(1.0), "y2({e}, {z})");
        }
    }
}

#[test]
fn terminating_solutions_are_hermite_functions() {
    // at ε = −(n + 1/2) the solution of matching parity is a multiple of
    // e^{−z²/4} He_n(z), with He_n(z) = 2^{−n/2} H_n(z/√2)
    let cfg = PrecisionConfig::default();
    for n in 0..8usize {
        let e = -(n as f64) - 0.5;
        let he = |z: f64| 2f64.powf(-0.5 * n as f64) * specfun::hermite(n, z / 2f64.sqrt());
        let y = |z: f64| {
            let args = WeberArgs::new(e, z);
            if n % 2 == 0 {
                specfun::weber_y1(args, &cfg)
            } else {
                specfun::weber_y2(args, &cfg)
            }
            .unwrap()
        };
        let ratios: Vec<f64> = [0.3, 0.9, 1.7, 2.9, 4.1]
            .iter()
            .map(|&z| y(z) / ((-0.25 * z * z).exp() * he(z)))
            .collect();
        for r in &ratios {
            assert!((r / ratios[0] - 1.0).abs() < 1e-12, "n={n}: {ratios:?}");
        }
        // exact sums agree with the polynomial too
        let z = 2.9;
        let (alpha, beta) = if n % 2 == 0 {
            (0.5 * e + 0.25, 0.5)
        } else {
            (0.5 * e + 0.75, 1.5)
        };
        let odd = if n % 2 == 0 { 1.0 } else { z };
        let exact = odd * kummer_exact(alpha, beta, 0.5 * z * z);
        assert!((exact / he(z) / ratios[0] - 1.0).abs() < 1e-12, "n={n}");
    }
}
