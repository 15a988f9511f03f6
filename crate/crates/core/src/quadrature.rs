//! Globally adaptive Gauss–Kronrod (7/15) quadrature over a set of panels.
//!
//! The caller supplies panel breakpoints (for oscillatory integrands, one
//! panel per half period). All panels enter a single max-heap keyed on the
//! local error estimate; the worst interval is bisected until the summed
//! error satisfies the tolerance or the interval budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

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

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct Options<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_intervals: usize,
}

/// Integral estimate with its error bound and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub abs_error: T,
    pub evaluations: usize,
    pub intervals: usize,
}

impl<T: Real> Estimate<T> {
    pub fn zero() -> Self {
        Estimate {
            value: T::zero(),
            abs_error: T::zero(),
            evaluations: 0,
            intervals: 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Segment<T> {}

impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // ties broken on position so the refinement order is reproducible
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

/// One 15-point Kronrod evaluation on [a, b]; returns (value, error estimate).
pub fn kronrod15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half_len = half_len.abs();

    let fc = f(center);
    let mut res_k = fc * T::lit(WGK[7]);
    let mut res_g = fc * T::lit(WG[3]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half_len;
    res_abs = res_abs * abs_half_len;
    res_asc = res_asc * abs_half_len;
    let mut err = ((res_k - res_g) * half_len).abs();

    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * scale.min(T::one());
    }
    let round_off = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(round_off);
    }
    (value, err)
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`, starting from
/// one segment per consecutive pair of breakpoints.
pub fn integrate_panels<T: Real, F: Fn(T) -> T>(
    f: &F,
    breakpoints: &[T],
    opts: &Options<T>,
) -> Result<Estimate<T>> {
    if breakpoints.len() < 2 {
        return Ok(Estimate::zero());
    }
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 2);
    let mut total = T::zero();
    let mut total_err = T::zero();
    let mut evaluations = 0usize;

    for w in breakpoints.windows(2) {
        let (value, error) = kronrod15(f, w[0], w[1]);
        evaluations += 15;
        total = total + value;
        total_err = total_err + error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    let target = |total: T| opts.abs_tol.max(opts.rel_tol * total.abs());
    let half = T::lit(0.5);

    while total_err > target(total) && heap.len() < opts.max_intervals {
        let worst = heap.pop().expect("heap is never empty here");
        let mid = half * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval has collapsed to machine resolution
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod15(f, worst.a, mid);
        let (v2, e2) = kronrod15(f, mid, worst.b);
        evaluations += 30;
        total = total + (v1 + v2 - worst.value);
        total_err = total_err + (e1 + e2 - worst.error);
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }

    // Re-sum in position order to shed the running-sum drift.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let value: T = segments.iter().map(|s| s.value).sum();
    let abs_error: T = segments.iter().map(|s| s.error).sum();
    let intervals = segments.len();

    if abs_error > target(value) {
        return Err(Error::Convergence {
            achieved: (abs_error / value.abs().max(T::min_positive_value())).as_f64(),
            requested: opts.rel_tol.as_f64(),
            intervals,
        });
    }

    Ok(Estimate {
        value,
        abs_error,
        evaluations,
        intervals,
    })
}
