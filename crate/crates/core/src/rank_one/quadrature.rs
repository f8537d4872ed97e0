//! Adaptive Gauss–Kronrod (7/15) quadrature on boxes and an improper
//! integral driver over `R^d` with radius doubling and geometric tail
//! extrapolation.

use alloc::vec;
use alloc::vec::Vec;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Starting truncation radius.
    pub r0: f64,
    pub radius_max: f64,
    /// Maximum number of subintervals per one-dimensional integral.
    pub max_intervals: usize,
    /// Increment ratio counted as non-decaying by the divergence test.
    pub divergence_ratio: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            r0: 1.0,
            radius_max: 1.0e6,
            max_intervals: 400,
            divergence_ratio: 0.9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

/// One 15-point Kronrod panel with the embedded 7-point Gauss error.
pub fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> QuadResult {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    QuadResult { value: k * h, error: libm::fabs((k - g) * h) }
}

/// Globally adaptive bisection: the panel with the largest error estimate
/// is split until the total estimate meets `max(abs_tol, rel_tol |I|)`.
pub fn adaptive(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> QuadResult {
    let first = gk15(f, a, b);
    let mut panels = vec![(a, b, first)];
    loop {
        let value: f64 = panels.iter().map(|p| p.2.value).sum();
        let error: f64 = panels.iter().map(|p| p.2.error).sum();
        let tol = f64::max(abs_tol, rel_tol * libm::fabs(value));
        if error <= tol || panels.len() >= max_intervals {
            return QuadResult { value, error };
        }
        let (worst, _) =
            panels
                .iter()
                .enumerate()
                .fold((0, -1.0), |acc, (i, p)| if p.2.error > acc.1 { (i, p.2.error) } else { acc });
        let (lo, hi, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval exhausted at machine precision.
            return QuadResult { value, error };
        }
        panels.push((lo, mid, gk15(f, lo, mid)));
        panels.push((mid, hi, gk15(f, mid, hi)));
    }
}

/// Iterated adaptive integration over the box `[lo, hi]`, innermost axis last.
pub fn adaptive_box(
    f: &dyn Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> QuadResult {
    let d = lo.len();
    let mut point = vec![0.0; d];
    let mut inner_error = 0.0;
    let r = nested(f, lo, hi, 0, &mut point, abs_tol, rel_tol, max_intervals, &mut inner_error);
    QuadResult { value: r.value, error: r.error + inner_error }
}

#[allow(clippy::too_many_arguments)]
fn nested(
    f: &dyn Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    axis: usize,
    point: &mut Vec<f64>,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
    inner_error: &mut f64,
) -> QuadResult {
    let d = lo.len();
    if d == 0 {
        return QuadResult { value: f(&[]), error: 0.0 };
    }
    if axis + 1 == d {
        let mut g = |x: f64| {
            point[axis] = x;
            f(point)
        };
        return adaptive(&mut g, lo[axis], hi[axis], abs_tol, rel_tol, max_intervals);
    }
    let width = hi[axis] - lo[axis];
    let inner_abs = 0.1 * abs_tol / f64::max(width, 1e-300);
    let inner_rel = 0.1 * rel_tol;
    let mut worst_inner = 0.0f64;
    let mut g = |x: f64| {
        point[axis] = x;
        let r = nested(f, lo, hi, axis + 1, point, inner_abs, inner_rel, max_intervals, inner_error);
        worst_inner = f64::max(worst_inner, r.error);
        r.value
    };
    let r = adaptive(&mut g, lo[axis], hi[axis], abs_tol, rel_tol, max_intervals);
    *inner_error += worst_inner * width;
    r
}

/// Integral over `[-R, R]^d` split at the origin along every axis.
fn central_box(f: &dyn Fn(&[f64]) -> f64, d: usize, r: f64, cfg: &QuadConfig, tol: f64) -> QuadResult {
    let mut total = QuadResult { value: 0.0, error: 0.0 };
    for orthant in 0..(1usize << d) {
        let mut lo = vec![0.0; d];
        let mut hi = vec![0.0; d];
        for i in 0..d {
            if orthant >> i & 1 == 1 {
                hi[i] = r;
            } else {
                lo[i] = -r;
            }
        }
        let q = adaptive_box(f, &lo, &hi, tol / (1usize << d) as f64, cfg.rel_tol, cfg.max_intervals);
        total.value += q.value;
        total.error += q.error;
    }
    total
}

/// Integral over `[-2R, 2R]^d ∖ [-R, R]^d`, as `2d` disjoint boxes: on the
/// `i`-th pair `R <= |x_i| <= 2R`, `|x_j| <= R` for `j < i` and
/// `|x_j| <= 2R` for `j > i`.
fn shell(f: &dyn Fn(&[f64]) -> f64, d: usize, r: f64, cfg: &QuadConfig, tol: f64) -> QuadResult {
    let mut total = QuadResult { value: 0.0, error: 0.0 };
    for i in 0..d {
        for sign in [-1.0, 1.0] {
            let mut lo = vec![0.0; d];
            let mut hi = vec![0.0; d];
            for j in 0..d {
                let (a, b) = if j == i {
                    if sign > 0.0 {
                        (r, 2.0 * r)
                    } else {
                        (-2.0 * r, -r)
                    }
                } else if j < i {
                    (-r, r)
                } else {
                    (-2.0 * r, 2.0 * r)
                };
                lo[j] = a;
                hi[j] = b;
            }
            let q = adaptive_box(f, &lo, &hi, tol / (2 * d) as f64, cfg.rel_tol, cfg.max_intervals);
            total.value += q.value;
            total.error += q.error;
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImproperResult {
    pub value: f64,
    pub est_error: f64,
    pub converged: bool,
    pub diverged: bool,
    /// Partial integrals `I(R)` over `[-R, R]^d` for `R = r0, 2 r0, ...`.
    pub partials: Vec<(f64, f64)>,
    /// Partial integrals were non-decreasing up to quadrature error.
    pub monotone: bool,
}

/// `∫_{R^d} f` by doubling the truncation cube. Once the shell increments
/// `Δ_k` decay geometrically with ratio `q`, the remaining tail is taken as
/// `Δ_k q / (1 - q)`. Two consecutive ratios at or above
/// `cfg.divergence_ratio` mark the integral divergent.
pub fn improper(f: &dyn Fn(&[f64]) -> f64, d: usize, cfg: &QuadConfig) -> ImproperResult {
    let tol = cfg.abs_tol;
    let mut r = cfg.r0;
    let inner = central_box(f, d, r, cfg, tol * 0.5);
    let mut sum = inner.value;
    let mut quad_err = inner.error;
    let mut partials = vec![(r, sum)];
    let mut increments: Vec<f64> = Vec::new();
    let mut estimates: Vec<f64> = Vec::new();
    let mut slow = 0;
    let mut monotone = true;
    let out =
        |value: f64, est_error: f64, converged: bool, diverged: bool, partials: Vec<(f64, f64)>, monotone: bool| {
            ImproperResult { value, est_error, converged, diverged, partials, monotone }
        };
    while 2.0 * r <= cfg.radius_max {
        let s = shell(f, d, r, cfg, tol * 0.25);
        r *= 2.0;
        sum += s.value;
        quad_err += s.error;
        if s.value < -s.error - 1e-300 {
            monotone = false;
        }
        partials.push((r, sum));
        let scale = f64::max(cfg.abs_tol, cfg.rel_tol * libm::fabs(sum));
        if libm::fabs(s.value) <= 1e-3 * scale && increments.last().is_none_or(|&p| libm::fabs(p) <= scale) {
            return out(sum, quad_err + libm::fabs(s.value), true, false, partials, monotone);
        }
        if let Some(&prev) = increments.last() {
            let ratio = if prev != 0.0 { s.value / prev } else { f64::INFINITY };
            if ratio >= cfg.divergence_ratio {
                slow += 1;
                if slow >= 2 {
                    return out(sum, f64::INFINITY, false, true, partials, monotone);
                }
            } else {
                slow = 0;
            }
            if ratio > 0.0 && ratio < cfg.divergence_ratio {
                let estimate = sum + s.value * ratio / (1.0 - ratio);
                if let Some(&last) = estimates.last() {
                    let change = libm::fabs(estimate - last);
                    let target = f64::max(cfg.abs_tol, cfg.rel_tol * libm::fabs(estimate));
                    if change <= target {
                        return out(estimate, change + quad_err, true, false, partials, monotone);
                    }
                }
                estimates.push(estimate);
            }
        }
        increments.push(s.value);
    }
    let value = estimates.last().copied().unwrap_or(sum);
    let err = match estimates.len() {
        0 | 1 => f64::INFINITY,
        n => libm::fabs(estimates[n - 1] - estimates[n - 2]) + quad_err,
    };
    out(value, err, false, false, partials, monotone)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = gk15(&mut |x| x * x * x + 2.0 * x, 0.0, 2.0);
        assert!(libm::fabs(r.value - 8.0) < 1e-13);
    }

    #[test]
    fn gaussian_on_box() {
        let f = |x: &[f64]| libm::exp(-x[0] * x[0] - x[1] * x[1]);
        let r = adaptive_box(&f, &[-6.0, -6.0], &[6.0, 6.0], 1e-11, 1e-11, 200);
        assert!(libm::fabs(r.value - core::f64::consts::PI) < 1e-9);
    }

    #[test]
    fn lorentzian_improper() {
        let f = |x: &[f64]| 1.0 / (1.0 + x[0] * x[0]);
        let r = improper(&f, 1, &QuadConfig::default());
        assert!(r.converged);
        assert!(libm::fabs(r.value - core::f64::consts::PI) < 1e-8, "{}", r.value);
        assert!(r.monotone);
    }

    #[test]
    fn slow_decay_flags_divergence() {
        let f = |x: &[f64]| 1.0 / libm::sqrt(1.0 + x[0] * x[0]);
        let r = improper(&f, 1, &QuadConfig::default());
        assert!(r.diverged);
        assert!(!r.converged);
    }
}
