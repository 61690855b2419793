//! Numerical helpers for the boundary-element oracle: globally adaptive
//! Gauss–Kronrod (7/15) quadrature and the complete elliptic integral K.

use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Outcome of [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol`, bisecting
/// the segment with the largest error estimate until the summed estimate
/// falls below tolerance or `max_segments` is reached. Integrable endpoint
/// singularities are handled since nodes never touch the endpoints.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, max_segments: usize) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let mut segments = vec![gk15(&f, a, b)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let tol = rel_tol * value.abs();
        if error <= tol || error < f64::MIN_POSITIVE {
            return Quadrature {
                value,
                error,
                converged: true,
            };
        }
        if segments.len() >= max_segments {
            return Quadrature {
                value,
                error,
                converged: false,
            };
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval no longer divisible in floating point.
            segments.push(Segment { error: 0.0, ..s });
            continue;
        }
        segments.push(gk15(&f, s.a, mid));
        segments.push(gk15(&f, mid, s.b));
    }
}

/// Complete elliptic integral of the first kind written in terms of the
/// complementary modulus k' = √(1 − m), via the arithmetic–geometric mean:
/// K = π / (2·AGM(1, k')).
pub fn elliptic_k_complementary(k_prime: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&k_prime));
    if k_prime == 0.0 {
        return f64::INFINITY;
    }
    let (mut a, mut b) = (1.0f64, k_prime);
    while (a - b).abs() > 1e-15 * a {
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    PI / (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomial_exactly() {
        let r = integrate(|x| 3.0 * x * x + 1.0, 0.0, 2.0, 1e-14, 100);
        assert!(r.converged);
        assert_relative_eq!(r.value, 10.0, max_relative = 1e-14);
    }

    #[test]
    fn integrates_log_singularity() {
        // ∫₀¹ ln x dx = −1
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, 1e-12, 500);
        assert!(r.converged);
        assert_relative_eq!(r.value, -1.0, max_relative = 1e-11);
    }

    #[test]
    fn integrates_inverse_sqrt() {
        // ∫₀¹ x^{-1/2} dx = 2
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10, 2000);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn elliptic_k_reference_values() {
        // K(0) = π/2; K(m = 1/2) = 1.854074677301372 (A&S table 17.1)
        assert_relative_eq!(elliptic_k_complementary(1.0), PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(
            elliptic_k_complementary(0.5f64.sqrt()),
            1.854_074_677_301_372,
            max_relative = 1e-14
        );
        // K(m = 0.99) = 3.695637362989875
        assert_relative_eq!(
            elliptic_k_complementary(0.01f64.sqrt()),
            3.695_637_362_989_875,
            max_relative = 1e-13
        );
        assert!(elliptic_k_complementary(0.0).is_infinite());
    }

    #[test]
    fn elliptic_k_log_asymptote() {
        // K ≈ ln(4/k') for k' → 0
        let kp = 1e-9;
        assert_relative_eq!(elliptic_k_complementary(kp), (4.0 / kp).ln(), max_relative = 1e-12);
    }
}
