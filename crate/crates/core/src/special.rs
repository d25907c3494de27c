//! Gaussian special functions and quadrature used by the exact oracles.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

const TWO_PI: f64 = 2.0 * PI;

/// Standard normal density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    libm::exp(-0.5 * x * x) / libm::sqrt(TWO_PI)
}

/// Standard normal CDF, `Φ(x) = erfc(-x/√2)/2`, accurate in both tails.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `P(lo ≤ X ≤ hi)` for a standard normal X, evaluated on the tail that
/// avoids cancellation.
pub fn norm_interval(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    if lo >= 0.0 {
        norm_cdf(-lo) - norm_cdf(-hi)
    } else {
        norm_cdf(hi) - norm_cdf(lo)
    }
}

/// Inverse of the standard normal CDF (Wichura, algorithm AS 241, PPND16).
///
/// Relative accuracy is about 1e-16 over (0, 1).
pub fn norm_inv(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if libm::fabs(q) <= 0.425 {
        let r = 0.180625 - q * q;
        let num = ((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_813e4) * r
            + 6.726_577_092_700_87e4)
            * r
            + 4.592_195_393_154_987e4)
            * r
            + 1.373_169_376_550_946e4)
            * r
            + 1.971_590_950_306_551_3e3)
            * r
            + 1.331_416_678_917_843_8e2)
            * r
            + 3.387_132_872_796_366_5;
        let den = ((((((5.226_495_278_852_545e3 * r + 2.872_908_573_572_194_3e4) * r
            + 3.930_789_580_009_271e4)
            * r
            + 2.121_379_430_158_659_7e4)
            * r
            + 5.394_196_021_424_751e3)
            * r
            + 6.871_870_074_920_579e2)
            * r
            + 4.231_333_070_160_091e1)
            * r
            + 1.0;
        return q * num / den;
    }
    let mut r = if q < 0.0 { p } else { 1.0 - p };
    r = libm::sqrt(-libm::log(r));
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r
            + 2.417_807_251_774_506e-1)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_545)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
            + 1.519_866_656_361_645_7e-2)
            * r
            + 1.481_039_764_274_800_8e-1)
            * r
            + 6.897_673_349_851e-1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 1.242_660_947_388_078_4e-3)
            * r
            + 2.653_218_952_657_612_4e-2)
            * r
            + 2.965_605_718_285_048_7e-1)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 1.487_536_129_085_061_5e-2)
            * r
            + 1.369_298_809_227_358e-1)
            * r
            + 5.998_322_065_558_88e-1)
            * r
            + 1.0;
        num / den
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

const GL_X: [&[f64]; 3] = [
    &[
        -0.932_469_514_203_152_2,
        -0.661_209_386_466_264_7,
        -0.238_619_186_083_197,
    ],
    &[
        -0.981_560_634_246_719_1,
        -0.904_117_256_370_475,
        -0.769_902_674_194_305,
        -0.587_317_954_286_617_1,
        -0.367_831_498_998_180_2,
        -0.125_233_408_511_469_2,
    ],
    &[
        -0.993_128_599_185_094_9,
        -0.963_971_927_277_913_8,
        -0.912_234_428_251_325_9,
        -0.839_116_971_822_218_8,
        -0.746_331_906_460_150_8,
        -0.636_053_680_726_515,
        -0.510_867_001_950_827_1,
        -0.373_706_088_715_419_6,
        -0.227_785_851_141_645_1,
        -0.076_526_521_133_497_33,
    ],
];

const GL_W: [&[f64]; 3] = [
    &[
        0.171_324_492_379_170_5,
        0.360_761_573_048_138_4,
        0.467_913_934_572_690_4,
    ],
    &[
        0.047_175_336_386_511_77,
        0.106_939_325_995_318_3,
        0.160_078_328_543_346_4,
        0.203_167_426_723_065_9,
        0.233_492_536_538_354_7,
        0.249_147_045_813_402_9,
    ],
    &[
        0.017_614_007_139_152_12,
        0.040_601_429_800_386_94,
        0.062_672_048_334_109_06,
        0.083_276_741_576_704_75,
        0.101_930_119_817_240_4,
        0.118_194_531_961_518_4,
        0.131_688_638_449_176_6,
        0.142_096_109_318_382_1,
        0.149_172_986_472_603_7,
        0.152_753_387_130_725_9,
    ],
];

/// Upper bivariate normal probability `P(X > h, Y > k)` for standard normals
/// with correlation `rho` (Genz's BVND, double precision).
pub fn bvn_upper(h: f64, k: f64, rho: f64) -> f64 {
    bvn_upper_c(h, k, rho, (1.0 - rho) * (1.0 + rho))
}

/// [`bvn_upper`] with `1 − rho²` supplied by the caller, which keeps full
/// relative precision when `|rho|` is within rounding of 1.
pub fn bvn_upper_c(h: f64, k: f64, rho: f64, one_minus_rho2: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&rho));
    if h == f64::INFINITY || k == f64::INFINITY {
        return 0.0;
    }
    if h == f64::NEG_INFINITY {
        return norm_cdf(-k);
    }
    if k == f64::NEG_INFINITY {
        return norm_cdf(-h);
    }
    let ar = libm::fabs(rho);
    let ng = if ar < 0.3 {
        0
    } else if ar < 0.75 {
        1
    } else {
        2
    };
    let (xs_gl, ws_gl) = (GL_X[ng], GL_W[ng]);
    let hh = h;
    let mut kk = k;
    let mut hk = hh * kk;
    let mut bvn = 0.0;
    if ar < 0.925 {
        let hs = (hh * hh + kk * kk) / 2.0;
        let asr = libm::asin(rho);
        for (x, w) in xs_gl.iter().zip(ws_gl) {
            let sn = libm::sin(asr * (x + 1.0) / 2.0);
            bvn += w * libm::exp((sn * hk - hs) / (1.0 - sn * sn));
            let sn = libm::sin(asr * (-x + 1.0) / 2.0);
            bvn += w * libm::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        return bvn * asr / (2.0 * TWO_PI) + norm_cdf(-hh) * norm_cdf(-kk);
    }
    if rho < 0.0 {
        kk = -kk;
        hk = -hk;
    }
    if one_minus_rho2 > 0.0 {
        let as_ = one_minus_rho2;
        let mut a = libm::sqrt(as_);
        let bs = (hh - kk) * (hh - kk);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 16.0;
        bvn = a
            * libm::exp(-(bs / as_ + hk) / 2.0)
            * (1.0 - c * (bs - as_) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as_ * as_ / 5.0);
        if -hk < 100.0 {
            let b = libm::sqrt(bs);
            bvn -= libm::exp(-hk / 2.0)
                * libm::sqrt(TWO_PI)
                * norm_cdf(-b / a)
                * b
                * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (x, w) in xs_gl.iter().zip(ws_gl) {
            let xs = (a * (x + 1.0)) * (a * (x + 1.0));
            let rs = libm::sqrt(1.0 - xs);
            bvn += a
                * w
                * (libm::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs
                    - libm::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
            let xs = as_ * (-x + 1.0) * (-x + 1.0) / 4.0;
            let rs = libm::sqrt(1.0 - xs);
            bvn += a
                * w
                * libm::exp(-(bs / xs + hk) / 2.0)
                * (libm::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs
                    - (1.0 + c * xs * (1.0 + d * xs)));
        }
        bvn = -bvn / TWO_PI;
    }
    if rho > 0.0 {
        bvn += norm_cdf(-f64::max(hh, kk));
    } else {
        bvn = -bvn;
        if kk > hh {
            if hh < 0.0 {
                bvn += norm_cdf(kk) - norm_cdf(hh);
            } else {
                bvn += norm_cdf(-hh) - norm_cdf(-kk);
            }
        }
    }
    bvn
}

/// `P(x_lo ≤ X ≤ x_hi, y_lo ≤ Y ≤ y_hi)` for standard bivariate normals with
/// correlation `rho`. Infinite bounds are allowed.
pub fn bvn_rectangle(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, rho: f64) -> f64 {
    bvn_rectangle_c(x_lo, x_hi, y_lo, y_hi, rho, (1.0 - rho) * (1.0 + rho))
}

/// [`bvn_rectangle`] with `1 − rho²` supplied by the caller.
pub fn bvn_rectangle_c(
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
    rho: f64,
    one_minus_rho2: f64,
) -> f64 {
    if x_hi <= x_lo || y_hi <= y_lo {
        return 0.0;
    }
    let u = |h, k| bvn_upper_c(h, k, rho, one_minus_rho2);
    let p = u(x_lo, y_lo) - u(x_hi, y_lo) - u(x_lo, y_hi) + u(x_hi, y_hi);
    p.max(0.0)
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * GK_WK[7];
    let mut gauss = fc * GK_WG[3];
    for i in 0..7 {
        let dx = h * GK_X[i];
        let s = f(c - dx) + f(c + dx);
        kron += GK_WK[i] * s;
        if i % 2 == 1 {
            gauss += GK_WG[i / 2] * s;
        }
    }
    (kron * h, libm::fabs((kron - gauss) * h))
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]` to an
/// absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    stack.push((a, b, abs_tol, 0));
    let mut total = 0.0;
    while let Some((lo, hi, tol, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        if err <= tol || depth >= 48 || hi - lo <= f64::EPSILON * libm::fabs(lo).max(1.0) {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, tol / 2.0, depth + 1));
            stack.push((mid, hi, tol / 2.0, depth + 1));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_cdf_round_trips() {
        for i in 1..2000 {
            let p = i as f64 / 2000.0;
            let x = norm_inv(p);
            assert!((norm_cdf(x) - p).abs() < 1e-15, "p={p}");
        }
        for p in [1e-300, 1e-100, 1e-20, 1e-10, 1e-5] {
            let x = norm_inv(p);
            assert!(((norm_cdf(x) - p) / p).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn inverse_cdf_known_quantiles() {
        assert_eq!(norm_inv(0.5), 0.0);
        assert!((norm_inv(0.975) - 1.959_963_984_540_054).abs() < 1e-14);
        assert!((norm_inv(0.025) + 1.959_963_984_540_054).abs() < 1e-14);
    }

    #[test]
    fn bvn_special_cases() {
        // independent
        assert!((bvn_upper(0.3, -0.2, 0.0) - norm_cdf(-0.3) * norm_cdf(0.2)).abs() < 1e-15);
        // P(X>0, Y>0) = 1/4 + asin(ρ)/(2π)
        for rho in [-0.99, -0.9, -0.5, 0.1, 0.5, 0.8, 0.95, 0.999] {
            let want = 0.25 + libm::asin(rho) / TWO_PI;
            assert!((bvn_upper(0.0, 0.0, rho) - want).abs() < 1e-14, "rho={rho}");
        }
        assert!((bvn_upper(0.7, 0.2, 1.0) - norm_cdf(-0.7)).abs() < 1e-15);
        assert!((bvn_upper(0.7, -1.2, -1.0) - (norm_cdf(1.2) - norm_cdf(0.7))).abs() < 1e-15);
    }

    #[test]
    fn gk_integrates_gaussian() {
        let v = integrate(norm_pdf, -1.0, 2.0, 1e-15);
        assert!((v - (norm_cdf(2.0) - norm_cdf(-1.0))).abs() < 1e-14);
    }
}
