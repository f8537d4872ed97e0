//! Minimal parabolics as positive systems, their sigma / sigma-theta parts,
//! and the ordering between them.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, rat, QMatrix, QVec, Rat};
use crate::root_datum::{restricted_system, SymmetricRootDatum};
use crate::rootset::RootSet;

/// A minimal parabolic, stored as its positive system `Σ(P)` together with a
/// regular vector `X` such that `Σ(P) = {α : α(X) > 0}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParabolicSet {
    pub positive: RootSet,
    pub witness: QVec,
}

impl ParabolicSet {
    /// Builds a parabolic from a positive set, attaching the canonical
    /// witness. Fails if the set is not the positive set of a chamber.
    pub fn from_positive(d: &SymmetricRootDatum, positive: RootSet) -> Result<Self> {
        let witness = canonical_witness(d.gram_inv(), d.roots(), &positive, d.dim());
        for i in 0..d.num_roots() {
            let v = linalg::dot(d.root(i), &witness);
            if v.is_positive() != positive.contains(i) || v.is_zero() {
                return Err(Error::InvalidArgument(format!("{:?} is not a positive system", positive)));
            }
        }
        Ok(ParabolicSet { positive, witness })
    }

    /// `Σ(P̄) = -Σ(P)`.
    pub fn opposite(&self, d: &SymmetricRootDatum) -> ParabolicSet {
        ParabolicSet { positive: self.positive.map(|i| d.neg(i)), witness: linalg::neg(&self.witness) }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.positive.contains(i)
    }
}

/// `gram^{-1}` of the unweighted sum of a positive system; strictly
/// positive on every root of that system.
fn canonical_witness(gram_inv: &QMatrix, roots: &[QVec], positive: &RootSet, n: usize) -> QVec {
    let mut s = linalg::zero_vec(n);
    for i in positive.iter() {
        s = linalg::add(&s, &roots[i]);
    }
    gram_inv.mul_vec(&s)
}

/// A deterministic regular vector `(1, k, k^2, ...)` for the first `k >= 2`
/// on which no covector in `roots` vanishes.
pub(crate) fn generic_vector(roots: &[QVec], n: usize) -> QVec {
    let mut k = 2i64;
    loop {
        let mut x = Vec::with_capacity(n);
        let mut p = rat(1);
        for _ in 0..n {
            x.push(p.clone());
            p *= rat(k);
        }
        if roots.iter().all(|r| !linalg::dot(r, &x).is_zero()) {
            return x;
        }
        k += 1;
    }
}

/// Indecomposable roots of a positive system: those not of the form
/// `β + γ` with `β, γ` positive (`β = γ` allowed).
pub(crate) fn simple_roots(roots: &[QVec], index: &BTreeMap<QVec, usize>, positive: &RootSet) -> Vec<usize> {
    let pos: Vec<usize> = positive.to_vec();
    let mut decomposable = BTreeSet::new();
    for (a, &i) in pos.iter().enumerate() {
        for &j in &pos[a..] {
            if let Some(&k) = index.get(&linalg::add(&roots[i], &roots[j])) {
                decomposable.insert(k);
            }
        }
    }
    pos.into_iter().filter(|i| !decomposable.contains(i)).collect()
}

/// Crosses the wall of `alpha`: every positive multiple of `alpha` changes sign.
pub(crate) fn cross_wall(roots: &[QVec], neg: &[usize], positive: &RootSet, alpha: usize) -> RootSet {
    let mut out = positive.clone();
    for i in positive.iter() {
        if positive_multiple(&roots[i], &roots[alpha]) {
            out.remove(i);
            out.insert(neg[i]);
        }
    }
    out
}

fn positive_multiple(a: &[Rat], b: &[Rat]) -> bool {
    linalg::same_ray(a, b)
}

/// All positive systems (chambers) of a negation-closed covector family,
/// found by wall-crossing from the chamber of `seed`.
pub(crate) fn positive_systems(roots: &[QVec], seed: &[Rat]) -> Vec<RootSet> {
    let index: BTreeMap<QVec, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let neg: Vec<usize> = roots.iter().map(|r| index[&linalg::neg(r)]).collect();
    let start: RootSet = (0..roots.len()).filter(|&i| linalg::dot(&roots[i], seed).is_positive()).collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(p) = queue.pop_front() {
        for a in simple_roots(roots, &index, &p) {
            let next = cross_wall(roots, &neg, &p, a);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// All of `P(A)`, sorted by positive set.
pub fn enumerate_parabolics(d: &SymmetricRootDatum) -> Vec<ParabolicSet> {
    let seed = generic_vector(d.roots(), d.dim());
    positive_systems(d.roots(), &seed)
        .into_iter()
        .map(|p| {
            let witness = canonical_witness(d.gram_inv(), d.roots(), &p, d.dim());
            ParabolicSet { positive: p, witness }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tau {
    Sigma,
    SigmaTheta,
}

/// `Σ(P, τ) = Σ(P) ∩ τΣ(P)`.
pub fn tau_set(d: &SymmetricRootDatum, p: &ParabolicSet, which: Tau) -> RootSet {
    p.positive.filter(|i| {
        let j = match which {
            Tau::Sigma => d.sigma_star(i),
            Tau::SigmaTheta => d.sigma_theta(i),
        };
        p.contains(j)
    })
}

/// `Σ(Q)₋`: the sigma-theta part minus the flagged roots of `a_q^*`.
pub fn minus_set(d: &SymmetricRootDatum, q: &ParabolicSet) -> RootSet {
    tau_set(d, q, Tau::SigmaTheta).filter(|i| !(d.in_q(i) && d.st_trivial().contains(i)))
}

/// `Σ(P) ∩ Σ(Q̄)`.
pub fn separating(p: &ParabolicSet, q: &ParabolicSet) -> RootSet {
    p.positive.filter(|i| !q.contains(i))
}

/// `P ⪰ Q`: `Σ(Q,σθ) ⊂ Σ(P,σθ)` and `Σ(P,σ) ⊂ Σ(Q,σ)`.
pub fn preceq(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> bool {
    tau_set(d, q, Tau::SigmaTheta).is_subset(&tau_set(d, p, Tau::SigmaTheta))
        && tau_set(d, p, Tau::Sigma).is_subset(&tau_set(d, q, Tau::Sigma))
}

/// `Σ(P) ∩ Σ(Q̄) ⊂ Σ(P,σθ)` and `Σ(P̄) ∩ Σ(Q) ⊂ Σ(Q,σ)`.
pub fn preceq_via_b(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> bool {
    separating(p, q).is_subset(&tau_set(d, p, Tau::SigmaTheta))
        && separating(q, p).is_subset(&tau_set(d, q, Tau::Sigma))
}

/// `Σ(P) ∩ Σ(Q̄) = Σ(P,σθ) ∩ Σ(Q̄,σ)`.
pub fn preceq_via_c(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> bool {
    let q_bar = q.opposite(d);
    separating(p, q) == tau_set(d, p, Tau::SigmaTheta).intersection(&tau_set(d, &q_bar, Tau::Sigma))
}

/// `Σ(P,σθ) = Σ(P) ∖ a_h^*`.
pub fn is_q_extreme(d: &SymmetricRootDatum, p: &ParabolicSet) -> bool {
    tau_set(d, p, Tau::SigmaTheta) == p.positive.filter(|i| !d.in_h(i))
}

pub fn enumerate_q_extreme(d: &SymmetricRootDatum) -> Vec<ParabolicSet> {
    enumerate_parabolics(d).into_iter().filter(|p| is_q_extreme(d, p)).collect()
}

/// The positive system of restricted roots cut out by a q-extreme `P`, as
/// indices into `restricted_system(d)`.
pub fn envelope_p0(d: &SymmetricRootDatum, p: &ParabolicSet) -> Result<RootSet> {
    if !is_q_extreme(d, p) {
        return Err(Error::NotQExtreme(format!("{:?}", p.positive)));
    }
    let sys = restricted_system(d);
    Ok(p.positive
        .iter()
        .filter(|&i| !d.in_h(i))
        .map(|i| sys.index_of(&d.restrict_q(d.root(i))).expect("restriction of a root outside a_h^*"))
        .collect())
}

/// The finite poset `(P(A), ⪰)` with the order relation tabulated.
#[derive(Clone, Debug)]
pub struct ParabolicPoset {
    pub parabolics: Vec<ParabolicSet>,
    /// `geq[i][j]` holds iff `P_i ⪰ P_j`.
    pub geq: Vec<Vec<bool>>,
}

impl ParabolicPoset {
    pub fn new(d: &SymmetricRootDatum) -> Self {
        let parabolics = enumerate_parabolics(d);
        let geq = parabolics.iter().map(|p| parabolics.iter().map(|q| preceq(d, p, q)).collect()).collect();
        ParabolicPoset { parabolics, geq }
    }

    pub fn len(&self) -> usize {
        self.parabolics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parabolics.is_empty()
    }

    pub fn index_of(&self, p: &ParabolicSet) -> Option<usize> {
        self.parabolics.binary_search(p).ok()
    }

    /// Covering relations `(i, j)` with `P_i ≻ P_j`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let strict = |i: usize, j: usize| i != j && self.geq[i][j];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if strict(i, j) && !(0..n).any(|k| strict(i, k) && strict(k, j)) {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !(0..self.len()).any(|j| j != i && self.geq[j][i])).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !(0..self.len()).any(|j| j != i && self.geq[i][j])).collect()
    }
}

pub fn hasse(d: &SymmetricRootDatum) -> Vec<(usize, usize)> {
    ParabolicPoset::new(d).hasse()
}

pub fn maximal_elements(d: &SymmetricRootDatum) -> Vec<ParabolicSet> {
    let poset = ParabolicPoset::new(d);
    poset.maximal().into_iter().map(|i| poset.parabolics[i].clone()).collect()
}

pub fn minimal_elements(d: &SymmetricRootDatum) -> Vec<ParabolicSet> {
    let poset = ParabolicPoset::new(d);
    poset.minimal().into_iter().map(|i| poset.parabolics[i].clone()).collect()
}

/// Adjacent when `Σ(P) ∩ Σ(Q̄)` spans a line.
pub fn adjacent(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> bool {
    let sep: Vec<QVec> = separating(p, q).iter().map(|i| d.root(i).clone()).collect();
    linalg::span_dim(&sep) == 1
}

/// A gallery `P = P_0, ..., P_n = Q` of adjacent parabolics along which
/// `Σ(P) ∩ Σ(P̄_j)` grows. At each step the first simple root of `P_j`
/// (in root order) that is negative for `Q` is crossed.
pub fn chain(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> Result<Vec<ParabolicSet>> {
    let index: BTreeMap<QVec, usize> = d.roots().iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let neg: Vec<usize> = (0..d.num_roots()).map(|i| d.neg(i)).collect();
    let mut out = Vec::from([p.clone()]);
    let mut current = p.positive.clone();
    while current != q.positive {
        let wall = simple_roots(d.roots(), &index, &current)
            .into_iter()
            .find(|&a| !q.contains(a))
            .ok_or_else(|| Error::Internal(String::from("no wall separates the chambers")))?;
        current = cross_wall(d.roots(), &neg, &current, wall);
        out.push(ParabolicSet::from_positive(d, current.clone())?);
        if out.len() > d.num_roots() + 1 {
            return Err(Error::Internal(String::from("gallery longer than the number of roots")));
        }
    }
    Ok(out)
}
