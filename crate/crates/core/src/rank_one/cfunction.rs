//! Scalar partial c-functions as products of rank-one integrals, the exact
//! convergence condition, the stationary-phase checks on `h = η∘ℋ` and the
//! `t^{d/2}` asymptotic.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive};

use super::iwasawa::RankOneBlock;
use super::quadrature::{improper, QuadConfig};
use crate::domains::rho_ph;
use crate::error::{Error, Result};
use crate::linalg::{self, Rat};
use crate::parabolics::{separating, ParabolicSet};
use crate::root_datum::SymmetricRootDatum;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CFunctionValue {
    pub value: f64,
    pub est_error: f64,
    pub converged: bool,
    pub diverged: bool,
}

/// A block with its exponent `k = ⟨ν, β⟩ / ⟨β, β⟩`; the integrand is
/// `e^{-(k + c_ρ) α(ℋ(n̄))}` with `ρ_β = c_ρ β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockExponent {
    pub block: RankOneBlock,
    pub k: f64,
}

fn integrand(b: BlockExponent) -> impl Fn(&[f64]) -> f64 {
    let s = b.k + b.block.rho_coefficient();
    move |x: &[f64]| libm::exp(-s * b.block.alpha_h_closed(x))
}

pub fn c_block(b: BlockExponent, cfg: &QuadConfig) -> CFunctionValue {
    let f = integrand(b);
    let r = improper(&f, b.block.dim(), cfg);
    CFunctionValue {
        value: r.value,
        est_error: r.est_error,
        converged: r.converged && r.monotone,
        diverged: r.diverged,
    }
}

/// Product of the per-block integrals; relative errors add.
pub fn c_partial(blocks: &[BlockExponent], cfg: &QuadConfig) -> CFunctionValue {
    let mut out = CFunctionValue { value: 1.0, est_error: 0.0, converged: true, diverged: false };
    let mut rel = 0.0;
    for b in blocks {
        let c = c_block(*b, cfg);
        out.value *= c.value;
        rel += c.est_error / libm::fabs(c.value);
        out.converged &= c.converged;
        out.diverged |= c.diverged;
    }
    out.est_error = rel * libm::fabs(out.value);
    out
}

/// The same product computed as one integral over the concatenated
/// coordinates; practical up to three dimensions.
pub fn c_joint(blocks: &[BlockExponent], cfg: &QuadConfig) -> CFunctionValue {
    let dims: Vec<usize> = blocks.iter().map(|b| b.block.dim()).collect();
    let parts: Vec<_> = blocks.iter().map(|b| integrand(*b)).collect();
    let f = |x: &[f64]| {
        let mut off = 0;
        let mut v = 1.0;
        for (p, &n) in parts.iter().zip(&dims) {
            v *= p(&x[off..off + n]);
            off += n;
        }
        v
    };
    let r = improper(&f, dims.iter().sum(), cfg);
    CFunctionValue {
        value: r.value,
        est_error: r.est_error,
        converged: r.converged && r.monotone,
        diverged: r.diverged,
    }
}

/// `Re⟨-λ + ρ_{Ph}, α⟩ > 0` for all `α ∈ Σ(P) ∩ Σ(Q̄)`.
pub fn convergence_region(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet, lambda: &[Rat]) -> bool {
    let nu = linalg::sub(&rho_ph(d, p), lambda);
    separating(p, q).iter().all(|i| d.inner(&nu, d.root(i)).is_positive())
}

/// One block per indivisible root `β ∈ Σ(P) ∩ Σ(Q̄)`, with multiplicities
/// `(m_β, m_2β)` and exponent `k = ⟨ν, β⟩ / ⟨β, β⟩`.
pub fn blocks_for_pair(
    d: &SymmetricRootDatum,
    p: &ParabolicSet,
    q: &ParabolicSet,
    nu: &[Rat],
) -> Result<Vec<(usize, BlockExponent, Rat)>> {
    let sep = separating(p, q);
    let mut out = Vec::new();
    for i in sep.iter() {
        let beta = d.root(i);
        let half = linalg::scale(beta, &linalg::frac(1, 2));
        if d.index_of(&half).is_some() {
            continue;
        }
        let double = d.index_of(&linalg::scale(beta, &linalg::rat(2)));
        let m2 = double.filter(|&j| sep.contains(j)).map_or(0, |j| d.mult(j));
        let block = RankOneBlock::new(d.mult(i), m2)?;
        let k = d.inner(nu, beta) / d.inner(beta, beta);
        let kf = k.to_f64().ok_or_else(|| Error::InvalidArgument("exponent out of range".into()))?;
        out.push((i, BlockExponent { block, k: kf }, k));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HCheckReport {
    pub h_at_origin: f64,
    /// Minimum of `h` over grid points outside the excluded ball.
    pub min_off_origin: f64,
    /// Minimum of `h` on the unit sphere; a lower bound `r` for escaping.
    pub min_on_sphere: f64,
    /// Finite-difference Hessian at the origin, row-major, Richardson
    /// combination of steps `1e-3` and `1e-4`.
    pub hessian: Vec<f64>,
    /// Relative difference of the two finite-difference Hessians.
    pub fd_rel_diff: f64,
    pub positive_definite: bool,
    pub passed: bool,
    /// A grid point where `h` fails to be positive.
    pub witness: Option<Vec<f64>>,
}

fn cholesky_ok(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * n + i] = libm::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn fd_hessian(h: &dyn Fn(&[f64]) -> f64, n: usize, step: f64) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    let at = |pairs: &[(usize, f64)]| {
        let mut x = vec![0.0; n];
        for &(i, v) in pairs {
            x[i] += v;
        }
        h(&x)
    };
    let h0 = at(&[]);
    for i in 0..n {
        out[i * n + i] = (at(&[(i, step)]) - 2.0 * h0 + at(&[(i, -step)])) / (step * step);
        for j in 0..i {
            let v = (at(&[(i, step), (j, step)]) - at(&[(i, step), (j, -step)]) - at(&[(i, -step), (j, step)])
                + at(&[(i, -step), (j, -step)]))
                / (4.0 * step * step);
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    out
}

/// Grid checks of `h(n̄) = k_η α(ℋ(n̄))`, with `ℋ` from the numerical
/// factorization: `h(e) = 0`, `h > 0` on `[-2, 2]^d` outside the ball of
/// radius `0.05`, `h` bounded below on the unit sphere, and a positive
/// definite Hessian at `e`.
pub fn h_function_checks(block: RankOneBlock, k_eta: f64) -> Result<HCheckReport> {
    if !(k_eta > 0.0) {
        return Err(Error::InvalidArgument("η must be positive on the block root".into()));
    }
    let n = block.dim();
    let h = |x: &[f64]| k_eta * block.alpha_h(x).unwrap_or(f64::NAN);
    let h_at_origin = h(&vec![0.0; n]);

    let steps: usize = if n == 1 { 400 } else { 40 };
    let side = steps + 1;
    let mut min_off = f64::INFINITY;
    let mut witness = None;
    let total = side.pow(n as u32);
    let mut x = vec![0.0; n];
    for code in 0..total {
        let mut c = code;
        for xi in x.iter_mut() {
            *xi = -2.0 + 4.0 * (c % side) as f64 / steps as f64;
            c /= side;
        }
        let norm = libm::sqrt(x.iter().map(|v| v * v).sum());
        if norm < 0.05 {
            continue;
        }
        let v = h(&x);
        if v < min_off {
            min_off = v;
        }
        if !(v > 0.0) && witness.is_none() {
            witness = Some(x.clone());
        }
    }

    let mut min_sphere = f64::INFINITY;
    if n == 1 {
        min_sphere = f64::min(h(&[1.0]), h(&[-1.0]));
    } else {
        let (nt, np) = (60, 120);
        for i in 0..=nt {
            let theta = core::f64::consts::PI * i as f64 / nt as f64;
            for j in 0..np {
                let phi = 2.0 * core::f64::consts::PI * j as f64 / np as f64;
                let p = [libm::sin(theta) * libm::cos(phi), libm::sin(theta) * libm::sin(phi), libm::cos(theta)];
                min_sphere = f64::min(min_sphere, h(&p[..n]));
            }
        }
    }

    let coarse = fd_hessian(&h, n, 1e-3);
    let fine = fd_hessian(&h, n, 1e-4);
    let norm = |m: &[f64]| libm::sqrt(m.iter().map(|v| v * v).sum());
    let diff: Vec<f64> = coarse.iter().zip(&fine).map(|(a, b)| a - b).collect();
    let fd_rel_diff = norm(&diff) / norm(&fine);
    let hessian: Vec<f64> = coarse.iter().zip(&fine).map(|(c, f)| (100.0 * f - c) / 99.0).collect();
    let positive_definite = cholesky_ok(&hessian, n).is_some();

    let passed =
        libm::fabs(h_at_origin) < 1e-14 && min_off > 0.0 && min_sphere > 0.0 && positive_definite && witness.is_none();
    Ok(HCheckReport {
        h_at_origin,
        min_off_origin: min_off,
        min_on_sphere: min_sphere,
        hessian,
        fd_rel_diff,
        positive_definite,
        passed,
        witness,
    })
}

/// Determinant via the Cholesky factor.
fn spd_det(a: &[f64], n: usize) -> Option<f64> {
    let l = cholesky_ok(a, n)?;
    Some((0..n).map(|i| l[i * n + i] * l[i * n + i]).product())
}

/// A block with exponents `k_μ` and `k_η` along `μ + tη`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticBlock {
    pub block: RankOneBlock,
    pub k_mu: f64,
    pub k_eta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticRow {
    pub t: f64,
    pub value: f64,
    pub scaled: f64,
    /// Relative change of `scaled` from the previous row.
    pub drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub d: usize,
    pub rows: Vec<AsymptoticRow>,
    /// Richardson extrapolation in `1/t` from the last two rows.
    pub limit_estimate: f64,
    /// Relative drift between the last two rows.
    pub drift: f64,
    /// `J(0) π^{d/2} / sqrt(det S)` with `S` half the numerical Hessian of
    /// `h` and `J(0) = 1` for Lebesgue measure on the unipotent coordinates.
    pub predicted: f64,
    pub prediction_rel_diff: f64,
    pub passed: bool,
}

/// Default schedule `10^2, 10^3, 10^4, 10^5`.
pub const DEFAULT_T_SCHEDULE: [f64; 4] = [1e2, 1e3, 1e4, 1e5];

/// Evaluates `t^{d/2} c(μ + tη)` along `ts`, compares with the Gaussian
/// prediction, and passes when the last drift is within `drift_tol` and
/// the extrapolated limit is within `prediction_tol` of the prediction.
pub fn asymptotic_td2(
    blocks: &[AsymptoticBlock],
    ts: &[f64],
    cfg: &QuadConfig,
    drift_tol: f64,
    prediction_tol: f64,
) -> Result<AsymptoticReport> {
    if ts.len() < 2 {
        return Err(Error::InvalidArgument("need at least two values of t".into()));
    }
    let d: usize = blocks.iter().map(|b| b.block.dim()).sum();
    let mut predicted = 1.0;
    for b in blocks {
        let hc = h_function_checks(b.block, b.k_eta)?;
        let n = b.block.dim();
        let s: Vec<f64> = hc.hessian.iter().map(|v| 0.5 * v).collect();
        let det = spd_det(&s, n).ok_or_else(|| Error::InvalidArgument("Hessian not positive definite".into()))?;
        predicted *= libm::pow(core::f64::consts::PI, n as f64 / 2.0) / libm::sqrt(det);
    }
    let mut rows: Vec<AsymptoticRow> = Vec::new();
    let mut cfg_t = *cfg;
    for &t in ts {
        let be: Vec<BlockExponent> =
            blocks.iter().map(|b| BlockExponent { block: b.block, k: b.k_mu + t * b.k_eta }).collect();
        cfg_t.abs_tol = f64::min(cfg.abs_tol, cfg.rel_tol * libm::pow(t, -(d as f64) / 2.0));
        let c = c_partial(&be, &cfg_t);
        if !c.converged {
            return Err(Error::InvalidArgument("integral did not converge along the ray".into()));
        }
        let scaled = libm::pow(t, d as f64 / 2.0) * c.value;
        let drift = rows.last().map_or(0.0, |r| libm::fabs(scaled - r.scaled) / libm::fabs(scaled));
        rows.push(AsymptoticRow { t, value: c.value, scaled, drift });
    }
    let (a, b) = (rows[rows.len() - 2], rows[rows.len() - 1]);
    let limit_estimate = (b.t * b.scaled - a.t * a.scaled) / (b.t - a.t);
    let prediction_rel_diff = libm::fabs(limit_estimate - predicted) / libm::fabs(predicted);
    let drift = b.drift;
    Ok(AsymptoticReport {
        d,
        rows,
        limit_estimate,
        drift,
        predicted,
        prediction_rel_diff,
        passed: drift <= drift_tol && prediction_rel_diff <= prediction_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    /// `∫_R (1 + x²)^{-s} dx = √π Γ(s - ½) / Γ(s)`.
    fn sl2_closed(s: f64) -> f64 {
        libm::sqrt(PI) * libm::exp(libm::lgamma(s - 0.5) - libm::lgamma(s))
    }

    /// `∫ ((1 + |z|²/2)² + y²)^{-s/2} = 2π^{3/2} Γ((s-1)/2) / (Γ(s/2)(s-2))`.
    fn su21_closed(s: f64) -> f64 {
        2.0 * libm::pow(PI, 1.5) * libm::exp(libm::lgamma((s - 1.0) / 2.0) - libm::lgamma(s / 2.0)) / (s - 2.0)
    }

    #[test]
    fn lorentzian_is_pi() {
        let c = c_block(BlockExponent { block: RankOneBlock::SL2, k: 0.5 }, &QuadConfig::default());
        assert!(c.converged);
        assert!(libm::fabs(c.value - PI) < 1e-8);
    }

    #[test]
    fn sl2_family_matches_closed_form() {
        for k in [0.3, 0.5, 1.0, 2.5, 7.0] {
            let c = c_block(BlockExponent { block: RankOneBlock::SL2, k }, &QuadConfig::default());
            assert!(c.converged, "k = {k}");
            let want = sl2_closed(k + 0.5);
            assert!(libm::fabs(c.value - want) < 1e-7 * want, "k = {k}: {} vs {}", c.value, want);
        }
    }

    #[test]
    fn divergence_at_and_below_boundary() {
        for k in [0.0, -0.2] {
            let c = c_block(BlockExponent { block: RankOneBlock::SL2, k }, &QuadConfig::default());
            assert!(c.diverged && !c.converged);
        }
    }

    #[test]
    fn product_of_two_blocks() {
        let cfg = QuadConfig { abs_tol: 1e-8, rel_tol: 1e-8, ..QuadConfig::default() };
        let b = BlockExponent { block: RankOneBlock::SL2, k: 1.5 };
        let single = c_block(b, &cfg).value;
        let prod = c_partial(&[b, b], &cfg);
        assert!(libm::fabs(prod.value - single * single) < 1e-12);
        let joint = c_joint(&[b, b], &cfg);
        assert!(joint.converged);
        assert!(libm::fabs(joint.value - single * single) < 1e-6, "{} vs {}", joint.value, single * single);
    }

    #[test]
    fn su21_rho_point() {
        let cfg = QuadConfig { abs_tol: 1e-7, rel_tol: 1e-7, ..QuadConfig::default() };
        let c = c_block(BlockExponent { block: RankOneBlock::SU21, k: 2.0 }, &cfg);
        assert!(c.converged);
        let want = su21_closed(4.0);
        assert!(libm::fabs(want - PI * PI / 2.0) < 1e-12);
        assert!(libm::fabs(c.value - want) < 1e-5 * want, "{} vs {}", c.value, want);
    }

    #[test]
    fn h_checks_both_blocks() {
        let r = h_function_checks(RankOneBlock::SL2, 1.0).unwrap();
        assert!(r.passed);
        assert!(libm::fabs(r.hessian[0] - 2.0) < 1e-6);
        assert!(r.fd_rel_diff <= 1e-4);
        let r = h_function_checks(RankOneBlock::SU21, 1.0).unwrap();
        assert!(r.passed, "{:?}", r);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(libm::fabs(r.hessian[i * 3 + j] - want) < 1e-5);
            }
        }
        assert!(h_function_checks(RankOneBlock::SL2, -1.0).is_err());
    }

    #[test]
    fn sl2_asymptotic() {
        let b = AsymptoticBlock { block: RankOneBlock::SL2, k_mu: 0.5, k_eta: 2.0 };
        let r = asymptotic_td2(&[b], &[1e4, 1e5], &QuadConfig::default(), 1e-2, 2e-2).unwrap();
        assert!(r.passed, "{:?}", r);
        assert!(libm::fabs(r.predicted - libm::sqrt(PI / 2.0)) < 1e-6);
    }
}
