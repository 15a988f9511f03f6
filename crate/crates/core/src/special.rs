//! Real Gamma function.
//!
//! Lanczos approximation (g = 607/128, 15 terms) for arguments ≥ ½ and the
//! reflection formula Γ(x) = π / (sin(πx) Γ(1 − x)) below that. Relative
//! accuracy is around 1e-15 on (−1, 0) ∪ (0, 3) in double precision.

use crate::scalar::Real;

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

/// sin(πx) with exact argument reduction to |r| ≤ ½.
pub fn sin_pi<T: Real>(x: T) -> T {
    let n = x.round();
    let r = x - n;
    let s = (T::PI() * r).sin();
    // (−1)^n
    let odd = (n / T::lit(2.0)).fract() != T::zero();
    if odd {
        -s
    } else {
        s
    }
}

/// Euler Gamma function on the real line.
///
/// Returns NaN at the poles x ∈ {0, −1, −2, …}.
pub fn gamma<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x <= T::zero() && x == x.floor() {
        return T::nan();
    }
    let half = T::lit(0.5);
    if x < half {
        return T::PI() / (sin_pi(x) * gamma_lanczos(T::one() - x));
    }
    gamma_lanczos(x)
}

fn gamma_lanczos<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    let z = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::from_count(k));
    }
    let t = z + T::lit(LANCZOS_G) + half;
    // t^(z+½) split in two to delay overflow for large arguments.
    let p = t.powf((z + half) * half);
    (T::lit(2.0) * T::PI()).sqrt() * p * (p * (-t).exp()) * acc
}
