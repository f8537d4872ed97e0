use proptest::prelude::*;

use rootsigma_core::cone::RationalCone;
use rootsigma_core::linalg::{self, frac, rat, QMatrix, QVec};
use rootsigma_core::parabolics::{enumerate_parabolics, enumerate_q_extreme, preceq, preceq_via_b, preceq_via_c};
use rootsigma_core::rank_one::{c_block, iwasawa_h, BlockExponent, QuadConfig, RankOneBlock};
use rootsigma_core::root_datum::{fixtures, RawDatum};
use rootsigma_core::SymmetricRootDatum;

fn int_vec(n: usize, r: i64) -> impl Strategy<Value = QVec> {
    proptest::collection::vec(-r..=r, n).prop_map(|v| v.into_iter().map(rat).collect())
}

/// Products of elementary matrices: integral with determinant 1.
fn unimodular(n: usize) -> impl Strategy<Value = QMatrix> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2), 0..6).prop_map(move |ops| {
        let mut m = QMatrix::identity(n);
        for (i, j, k) in ops {
            if i == j {
                continue;
            }
            let mut e = QMatrix::identity(n);
            e[(i, j)] = rat(k);
            m = e.mul(&m);
        }
        m
    })
}

/// The same datum in coordinates `x' = M x`.
fn change_basis(raw: &RawDatum, m: &QMatrix) -> RawDatum {
    let mi = m.inverse().unwrap();
    let mit = mi.transpose();
    RawDatum {
        dim: raw.dim,
        gram: mit.mul(&raw.gram).mul(&mi),
        sigma: m.mul(&raw.sigma).mul(&mi),
        roots: raw.roots.iter().map(|a| mit.mul_vec(a)).collect(),
        mult: raw.mult.clone(),
        st_trivial: raw.st_trivial.clone(),
        whh_generators: raw.whh_generators.iter().map(|w| m.mul(w).mul(&mi)).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn double_description_round_trip(gens in proptest::collection::vec(int_vec(3, 3), 0..6)) {
        let c = RationalCone::from_generators(3, &gens);
        prop_assert!(c.is_consistent());
        for g in &gens {
            prop_assert!(c.contains(g));
        }
        prop_assert!(c.dual().dual().same_set(&c));
        // The inequality description is exact on the dual side too.
        let d = RationalCone::from_inequalities(3, &gens);
        for g in &d.generators {
            prop_assert!(gens.iter().all(|a| linalg::dot(a, g) >= rat(0)));
        }
    }

    #[test]
    fn cone_membership_matches_combinations(gens in proptest::collection::vec(int_vec(2, 4), 1..5),
                                            coeffs in proptest::collection::vec(0i64..5, 5)) {
        let c = RationalCone::from_generators(2, &gens);
        let mut x = linalg::zero_vec(2);
        for (g, k) in gens.iter().zip(&coeffs) {
            x = linalg::add(&x, &linalg::scale(g, &rat(*k)));
        }
        prop_assert!(c.contains(&x));
    }

    #[test]
    fn inverse_is_two_sided(m in unimodular(4), s in 1i64..5) {
        let a = m.scale(&frac(s, 3));
        let inv = a.inverse().unwrap();
        prop_assert!(a.mul(&inv).is_identity() && inv.mul(&a).is_identity());
    }

    #[test]
    fn split_a2_is_coordinate_free(m in unimodular(2)) {
        let base = fixtures::split_a2();
        let d = SymmetricRootDatum::new(change_basis(&base.to_raw(), &m)).unwrap();
        let ps = enumerate_parabolics(&d);
        prop_assert_eq!(ps.len(), 6);
        prop_assert_eq!(enumerate_q_extreme(&d).len(), 6);
        for p in &ps {
            for q in &ps {
                let a = preceq(&d, p, q);
                prop_assert_eq!(a, preceq_via_b(&d, p, q));
                prop_assert_eq!(a, preceq_via_c(&d, p, q));
            }
        }
    }

    #[test]
    fn sl2_block_matches_closed_form(k in 0.3f64..6.0) {
        let c = c_block(BlockExponent { block: RankOneBlock::SL2, k }, &QuadConfig::default());
        let s = k + 0.5;
        let want = libm::sqrt(std::f64::consts::PI) * libm::exp(libm::lgamma(s - 0.5) - libm::lgamma(s));
        prop_assert!(c.converged);
        prop_assert!((c.value - want).abs() <= 1e-7 * want);
    }

    #[test]
    fn su21_projection_matches_closed_form(x in -5.0f64..5.0, y in -5.0f64..5.0, z in -20.0f64..20.0) {
        let h = iwasawa_h(&RankOneBlock::SU21, &[x, y, z]).unwrap();
        let a = 1.0 + 0.5 * (x * x + y * y);
        prop_assert!((h[0] - 0.5 * (a * a + z * z).ln()).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn doubled_a2_orders_survive_basis_change(m in unimodular(4), pairs in proptest::collection::vec((0usize..36, 0usize..36), 40)) {
        let d0 = fixtures::doubled_a2();
        let d = SymmetricRootDatum::new(change_basis(&d0.to_raw(), &m)).unwrap();
        let ps = enumerate_parabolics(&d);
        prop_assert_eq!(ps.len(), 36);
        prop_assert_eq!(enumerate_q_extreme(&d).len(), 6);
        for (i, j) in pairs {
            let (p, q) = (&ps[i], &ps[j]);
            let a = preceq(&d, p, q);
            prop_assert_eq!(a, preceq_via_b(&d, p, q));
            prop_assert_eq!(a, preceq_via_c(&d, p, q));
        }
    }
}
