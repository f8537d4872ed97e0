//! Polyhedral cones over the rationals, kept in both generator and
//! inequality form. Conversion between the two uses the double description
//! method with the combinatorial adjacency test.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::linalg::{self, QMatrix, QVec, Rat};

/// `{x : a·x >= 0 for all inequalities a} = cone(generators)`.
///
/// A lineality direction `l` appears as the pair `l, -l` among the
/// generators; an equation `a·x = 0` as the pair `a, -a` among the
/// inequalities. Both lists hold primitive integer vectors without
/// repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    pub dim: usize,
    pub generators: Vec<QVec>,
    pub inequalities: Vec<QVec>,
}

impl RationalCone {
    pub fn from_generators(dim: usize, generators: &[QVec]) -> Self {
        let inequalities = double_description(dim, generators);
        let generators = double_description(dim, &inequalities);
        RationalCone { dim, generators, inequalities }
    }

    pub fn from_inequalities(dim: usize, inequalities: &[QVec]) -> Self {
        let generators = double_description(dim, inequalities);
        let inequalities = double_description(dim, &generators);
        RationalCone { dim, generators, inequalities }
    }

    /// The dual cone `{y : y·x >= 0 for x in self}`.
    pub fn dual(&self) -> RationalCone {
        RationalCone { dim: self.dim, generators: self.inequalities.clone(), inequalities: self.generators.clone() }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.inequalities.iter().all(|a| !linalg::dot(a, x).is_negative())
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains_cone(&self, other: &RationalCone) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    pub fn same_set(&self, other: &RationalCone) -> bool {
        self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_everything(&self) -> bool {
        self.inequalities.is_empty()
    }

    /// Consistency of the two descriptions.
    pub fn is_consistent(&self) -> bool {
        self.generators.iter().all(|g| self.contains(g))
            && self.same_set(&RationalCone::from_inequalities(self.dim, &self.inequalities))
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        linalg::span_dim(&self.generators)
    }
}

fn push_unique(out: &mut Vec<QVec>, v: QVec) {
    if !linalg::is_zero(&v) && !out.contains(&v) {
        out.push(v);
    }
}

/// Generators of `{x : a·x >= 0, a in constraints}` in dimension `dim`:
/// a lineality basis as `±` pairs followed by the extreme rays, all
/// primitive and sorted.
pub fn double_description(dim: usize, constraints: &[QVec]) -> Vec<QVec> {
    let mut lineality: Vec<QVec> = (0..dim)
        .map(|i| {
            let mut e = linalg::zero_vec(dim);
            e[i] = Rat::from_integer(1.into());
            e
        })
        .collect();
    // Each ray carries the set of processed constraints it satisfies with equality.
    let mut rays: Vec<(QVec, BTreeSet<usize>)> = Vec::new();

    for (k, a) in constraints.iter().enumerate() {
        if linalg::is_zero(a) {
            for r in rays.iter_mut() {
                r.1.insert(k);
            }
            continue;
        }
        if let Some(pos) = lineality.iter().position(|l| !linalg::dot(a, l).is_zero()) {
            let mut l0 = lineality.remove(pos);
            let mut v0 = linalg::dot(a, &l0);
            if v0.is_negative() {
                l0 = linalg::neg(&l0);
                v0 = -v0;
            }
            let project = |x: &QVec| {
                let c = linalg::dot(a, x) / &v0;
                linalg::sub(x, &linalg::scale(&l0, &c))
            };
            lineality = lineality.iter().map(project).collect();
            for r in rays.iter_mut() {
                r.0 = linalg::primitive(&project(&r.0));
                r.1.insert(k);
            }
            // The new ray is tight on every earlier constraint.
            let zeros: BTreeSet<usize> = (0..k).collect();
            rays.push((linalg::primitive(&l0), zeros));
            continue;
        }
        let vals: Vec<Rat> = rays.iter().map(|r| linalg::dot(a, &r.0)).collect();
        let mut next: Vec<(QVec, BTreeSet<usize>)> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if v.is_positive() {
                next.push(r.clone());
            } else if v.is_zero() {
                let mut z = r.1.clone();
                z.insert(k);
                next.push((r.0.clone(), z));
            }
        }
        for (i, (p, vp)) in rays.iter().zip(&vals).enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (j, (n, vn)) in rays.iter().zip(&vals).enumerate() {
                if !vn.is_negative() {
                    continue;
                }
                let common: BTreeSet<usize> = p.1.intersection(&n.1).copied().collect();
                let blocked = rays.iter().enumerate().any(|(m, r)| m != i && m != j && common.is_subset(&r.1));
                if blocked {
                    continue;
                }
                let combo = linalg::sub(&linalg::scale(&n.0, vp), &linalg::scale(&p.0, vn));
                let mut z = common;
                z.insert(k);
                next.push((linalg::primitive(&combo), z));
            }
        }
        rays = next;
    }

    let mut out = Vec::new();
    for l in lineality {
        let l = linalg::primitive(&l);
        push_unique(&mut out, l.clone());
        push_unique(&mut out, linalg::neg(&l));
    }
    let mut extreme = Vec::new();
    for (r, _) in rays {
        push_unique(&mut extreme, r);
    }
    extreme.sort();
    out.extend(extreme);
    out
}

/// Coordinates on `a_q` and `a_q^*` relative to a rational basis `B_q` of
/// `a_q`. A vector `X = B_q x`; a covector `λ` vanishing on `a_h` has
/// coordinates `y = B_q^T λ` and is recovered as `λ = E y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFrame {
    pub basis: QMatrix,
    pub embed: QMatrix,
}

impl QFrame {
    pub fn new(q_basis: &[QVec], h_basis: &[QVec], n: usize) -> Self {
        let k = q_basis.len();
        let basis = QMatrix::from_cols(q_basis, n);
        let mut all = q_basis.to_vec();
        all.extend(h_basis.iter().cloned());
        let m = QMatrix::from_cols(&all, n);
        let inv_t = m.transpose().inverse().expect("a_q and a_h bases span a");
        let mut embed = QMatrix::zeros(n, k);
        for r in 0..n {
            for c in 0..k {
                embed[(r, c)] = inv_t[(r, c)].clone();
            }
        }
        QFrame { basis, embed }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn vector_coords(&self, x: &[Rat]) -> Option<QVec> {
        self.basis.solve(x)
    }

    pub fn vector(&self, x: &[Rat]) -> QVec {
        self.basis.mul_vec(x)
    }

    pub fn covector_coords(&self, lambda: &[Rat]) -> QVec {
        self.basis.transpose().mul_vec(lambda)
    }

    pub fn covector(&self, y: &[Rat]) -> QVec {
        self.embed.mul_vec(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use alloc::vec;

    fn v(xs: &[i64]) -> QVec {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn quadrant() {
        let c = RationalCone::from_inequalities(2, &[v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(c.generators, vec![v(&[0, 1]), v(&[1, 0])]);
        assert!(c.contains(&v(&[3, 4])));
        assert!(!c.contains(&v(&[-1, 4])));
        assert!(c.is_consistent());
    }

    #[test]
    fn half_plane_has_lineality() {
        let c = RationalCone::from_inequalities(2, &[v(&[1, 1])]);
        assert_eq!(c.generators.len(), 3);
        assert!(c.contains(&v(&[1, -1])) && c.contains(&v(&[-1, 1])));
        assert!(c.generators.contains(&v(&[1, 0])) || c.generators.contains(&v(&[0, 1])));
        assert!(c.is_consistent());
    }

    #[test]
    fn zero_cone_and_whole_space() {
        let zero = RationalCone::from_generators(2, &[]);
        assert!(zero.is_zero());
        assert!(zero.dual().is_everything());
        let all = RationalCone::from_inequalities(2, &[]);
        assert!(all.is_everything());
        assert_eq!(all.generators.len(), 4);
    }

    #[test]
    fn redundant_generators_are_removed() {
        let c = RationalCone::from_generators(2, &[v(&[1, 0]), v(&[1, 1]), v(&[0, 1]), v(&[2, 1])]);
        assert_eq!(c.generators, vec![v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c.inequalities.len(), 2);
    }

    #[test]
    fn ray_in_plane() {
        let c = RationalCone::from_generators(2, &[v(&[1, -1])]);
        assert_eq!(c.generators, vec![v(&[1, -1])]);
        // One equation (as a pair) and one inequality.
        assert_eq!(c.inequalities.len(), 3);
        assert!(!c.contains(&v(&[1, 0])));
    }

    #[test]
    fn pointed_3d_cone_over_square() {
        let gens = [v(&[1, 1, 1]), v(&[1, -1, 1]), v(&[-1, 1, 1]), v(&[-1, -1, 1]), v(&[0, 0, 1])];
        let c = RationalCone::from_generators(3, &gens);
        assert_eq!(c.generators.len(), 4);
        assert_eq!(c.inequalities.len(), 4);
        let dd = c.dual().dual();
        assert!(dd.same_set(&c));
    }

    #[test]
    fn frame_round_trip() {
        let d = crate::root_datum::fixtures::doubled_a2();
        let f = QFrame::new(&d.q_basis(), &d.h_basis(), d.dim());
        assert_eq!(f.dim(), 2);
        for r in d.roots() {
            let lam = d.restrict_q(r);
            assert_eq!(f.covector(&f.covector_coords(&lam)), lam);
            let x = d.pr_q().mul_vec(&d.sharp(r));
            let xc = f.vector_coords(&x).unwrap();
            assert_eq!(f.vector(&xc), x);
            assert_eq!(linalg::dot(&f.covector_coords(&lam), &xc), linalg::dot(&lam, &x));
        }
    }
}
