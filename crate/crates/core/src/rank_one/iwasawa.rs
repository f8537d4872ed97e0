//! Matrix models of the two real-rank-one blocks and their Iwasawa
//! projections, computed by Gram–Schmidt against the standard flag.
//!
//! `(1,0)`: `SL(2,R)`, `A` diagonal, `N` upper unipotent and
//! `n̄(x) = [[1,0],[x,1]]`; `α(diag(a, -a)) = 2a`.
//!
//! `(2,1)`: `SU(2,1)` for the form `J = antidiag(1,1,1)`, Cartan involution
//! `g -> (g*)⁻¹`, `A = diag(e^t, 1, e^-t)`, `N` upper unipotent and
//! `n̄(z, y) = [[1,0,0],[z,1,0],[iy - |z|²/2, -z̄, 1]]`; `α(log a) = t`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Block with multiplicities `(m_α, m_2α) ∈ {(1,0), (2,1)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOneBlock {
    pub m_alpha: u32,
    pub m_2alpha: u32,
}

impl RankOneBlock {
    pub const SL2: RankOneBlock = RankOneBlock { m_alpha: 1, m_2alpha: 0 };
    pub const SU21: RankOneBlock = RankOneBlock { m_alpha: 2, m_2alpha: 1 };

    pub fn new(m_alpha: u32, m_2alpha: u32) -> Result<Self> {
        match (m_alpha, m_2alpha) {
            (1, 0) | (2, 1) => Ok(RankOneBlock { m_alpha, m_2alpha }),
            _ => Err(Error::UnsupportedBlock { m_alpha, m_2alpha }),
        }
    }

    /// Real dimension of `N̄_α`.
    pub fn dim(&self) -> usize {
        (self.m_alpha + self.m_2alpha) as usize
    }

    /// `ρ = c α` with `c = (m_α + 2 m_2α) / 2`.
    pub fn rho_coefficient(&self) -> f64 {
        (self.m_alpha + 2 * self.m_2alpha) as f64 / 2.0
    }

    /// Matrix size of the model.
    pub fn matrix_size(&self) -> usize {
        if *self == Self::SL2 {
            2
        } else {
            3
        }
    }

    /// `n̄` at real coordinates (`x` or `(Re z, Im z, y)`), as a complex
    /// matrix in row-major order.
    pub fn nbar(&self, c: &[f64]) -> Vec<Complex64> {
        let z0 = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        if *self == Self::SL2 {
            Vec::from([one, z0, Complex64::new(c[0], 0.0), one])
        } else {
            let z = Complex64::new(c[0], c[1]);
            let w = Complex64::new(-0.5 * z.norm_sqr(), c[2]);
            Vec::from([one, z0, z0, z, one, z0, w, -z.conj(), one])
        }
    }

    /// `α(ℋ(n̄))` from the closed forms `e^{α(ℋ)} = 1 + x²` and
    /// `e^{2α(ℋ)} = (1 + |z|²/2)² + y²`.
    pub fn alpha_h_closed(&self, c: &[f64]) -> f64 {
        if *self == Self::SL2 {
            libm::log1p(c[0] * c[0])
        } else {
            let a = 1.0 + 0.5 * (c[0] * c[0] + c[1] * c[1]);
            0.5 * libm::log(a * a + c[2] * c[2])
        }
    }

    /// `α(ℋ(n̄))` through the numerical factorization.
    pub fn alpha_h(&self, c: &[f64]) -> Result<f64> {
        let h = iwasawa_h(self, c)?;
        Ok(if *self == Self::SL2 { h[0] - h[1] } else { h[0] })
    }
}

/// Upper-triangular factor of `g = k r` (columns orthonormalized in order),
/// with positive real diagonal. Row-major, size `n`.
pub fn gram_schmidt_r(g: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut r = alloc::vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| g[i * n + j]).collect();
        for (k, qk) in q.iter().enumerate() {
            let c: Complex64 = qk.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            r[k * n + j] = c;
            for i in 0..n {
                v[i] -= c * qk[i];
            }
        }
        let norm = libm::sqrt(v.iter().map(|x| x.norm_sqr()).sum());
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::Factorization);
        }
        r[j * n + j] = Complex64::new(norm, 0.0);
        q.push(v.iter().map(|x| x / norm).collect());
    }
    Ok(r)
}

/// `ℋ(n̄) = log a` for `n̄ = k a n`, as the diagonal of `log a`.
pub fn iwasawa_h(block: &RankOneBlock, coords: &[f64]) -> Result<Vec<f64>> {
    if coords.len() != block.dim() || coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::Factorization);
    }
    let n = block.matrix_size();
    let r = gram_schmidt_r(&block.nbar(coords), n)?;
    Ok((0..n).map(|i| libm::log(r[i * n + i].re)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        libm::fabs(a - b) <= tol * f64::max(1.0, libm::fabs(b))
    }

    #[test]
    fn identity_has_zero_projection() {
        for b in [RankOneBlock::SL2, RankOneBlock::SU21] {
            let h = iwasawa_h(&b, &alloc::vec![0.0; b.dim()]).unwrap();
            assert!(h.iter().all(|x| libm::fabs(*x) < 1e-15));
        }
    }

    /// Oracle for SL(2): explicit 2x2 QR, `r11 = |first column|`,
    /// `r22 = det / r11`.
    #[test]
    fn sl2_matches_explicit_qr() {
        for i in -40..=40 {
            let x = i as f64 * 0.37;
            let r11 = libm::sqrt(1.0 + x * x);
            let r22 = 1.0 / r11;
            let h = iwasawa_h(&RankOneBlock::SL2, &[x]).unwrap();
            assert!(close(h[0], libm::log(r11), 1e-12) && close(h[1], libm::log(r22), 1e-12));
            let a = RankOneBlock::SL2.alpha_h(&[x]).unwrap();
            assert!(close(libm::exp(a), 1.0 + x * x, 1e-12));
            assert!(close(a, RankOneBlock::SL2.alpha_h(&[-x]).unwrap(), 1e-12));
        }
    }

    #[test]
    fn su21_nbar_preserves_form() {
        let b = RankOneBlock::SU21;
        for c in [[0.3, -1.2, 0.7], [2.0, 0.5, -3.0]] {
            let g = b.nbar(&c);
            // g* J g = J with J the antidiagonal form.
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = Complex64::new(0.0, 0.0);
                    for k in 0..3 {
                        s += g[k * 3 + i].conj() * g[(2 - k) * 3 + j];
                    }
                    let want = if i + j == 2 { 1.0 } else { 0.0 };
                    assert!((s - Complex64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn su21_matches_closed_form() {
        let b = RankOneBlock::SU21;
        for i in -5..=5 {
            for j in -5..=5 {
                let c = [0.4 * i as f64, -0.3 * j as f64, 0.25 * (i * j) as f64];
                let h = iwasawa_h(&b, &c).unwrap();
                assert!(close(h[0], b.alpha_h_closed(&c), 1e-12));
                // The middle entry of a is 1 and det a = 1.
                assert!(libm::fabs(h[1]) < 1e-12);
                assert!(libm::fabs(h[0] + h[2]) < 1e-12);
            }
        }
    }

    #[test]
    fn unsupported_block() {
        assert_eq!(RankOneBlock::new(3, 0), Err(Error::UnsupportedBlock { m_alpha: 3, m_2alpha: 0 }));
        assert!(RankOneBlock::new(1, 0).is_ok());
    }

    #[test]
    fn non_finite_input_rejected() {
        assert_eq!(iwasawa_h(&RankOneBlock::SL2, &[f64::NAN]), Err(Error::Factorization));
    }
}
