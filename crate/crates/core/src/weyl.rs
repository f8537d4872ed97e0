//! Weyl groups, chambers of `a_q`, the sets `a_q^+(Q)`, coset
//! representatives for `W(a_q)/W_{K∩H}(a_q)` and conjugated data.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, frac, rat, QMatrix, QVec};
use crate::parabolics::{
    enumerate_parabolics, enumerate_q_extreme, generic_vector, is_q_extreme, positive_systems, preceq, tau_set,
    ParabolicSet, Tau,
};
use crate::root_datum::{restricted_system, SymmetricRootDatum, DEFAULT_GROUP_CAP};
use crate::rootset::RootSet;

/// A linear map of `a`, with a word in the generators that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: QMatrix,
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { matrix: QMatrix::identity(n), word: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

/// Closure of `gens` under multiplication, breadth first by word length.
/// The identity comes first.
pub fn generate_group(n: usize, gens: &[QMatrix], cap: usize) -> Result<Vec<WeylElement>> {
    let mut seen: BTreeSet<QMatrix> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = WeylElement::identity(n);
    seen.insert(id.matrix.clone());
    queue.push_back(id);
    while let Some(e) = queue.pop_front() {
        for (k, g) in gens.iter().enumerate() {
            let m = g.mul(&e.matrix);
            if !seen.contains(&m) {
                if seen.len() >= cap {
                    return Err(Error::GroupTooLarge(cap));
                }
                seen.insert(m.clone());
                let mut word = e.word.clone();
                word.push(k);
                queue.push_back(WeylElement { matrix: m, word });
            }
        }
        out.push(e);
    }
    Ok(out)
}

/// `W(a)`, generated by the reflections in all roots.
pub fn weyl_group(d: &SymmetricRootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    let gens: Vec<QMatrix> = d.roots().iter().map(|r| d.reflection(r)).collect();
    generate_group(d.dim(), &gens, cap)
}

/// `W(a_q)`, generated by reflections in the restricted roots, acting on
/// `a` and trivially on `a_h`.
pub fn restricted_weyl_group(d: &SymmetricRootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    generate_group(d.dim(), &d.restricted_reflections(), cap)
}

/// `W_{K∩H}(a_q)`, generated by the datum's generators.
pub fn whh_group(d: &SymmetricRootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    generate_group(d.dim(), d.whh_generators(), cap)
}

/// A connected component of `a_q^reg`, given by the restricted roots that
/// are positive on it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chamber {
    /// Indices into `restricted_system(d)` of the positive restricted roots.
    pub positive: RootSet,
    /// Sign of each restricted root, in restricted-root order.
    pub sign_vector: Vec<i8>,
    /// Interior point, a vector of `a` lying in `a_q`.
    pub witness: QVec,
}

pub fn chambers_q(d: &SymmetricRootDatum) -> Vec<Chamber> {
    let sys = restricted_system(d);
    let seed = d.pr_q().mul_vec(&generic_vector(&sys.roots_q, d.dim()));
    positive_systems(&sys.roots_q, &seed)
        .into_iter()
        .map(|positive| chamber_from_positive(d, &sys.roots_q, positive))
        .collect()
}

fn chamber_from_positive(d: &SymmetricRootDatum, roots_q: &[QVec], positive: RootSet) -> Chamber {
    let mut s = linalg::zero_vec(d.dim());
    for i in positive.iter() {
        s = linalg::add(&s, &roots_q[i]);
    }
    let witness = d.sharp(&s);
    let sign_vector = (0..roots_q.len()).map(|i| if positive.contains(i) { 1 } else { -1 }).collect();
    Chamber { positive, sign_vector, witness }
}

/// The chamber `a_q^+(P)` of a q-extreme parabolic.
pub fn chamber_of(d: &SymmetricRootDatum, p: &ParabolicSet) -> Result<Chamber> {
    let positive = crate::parabolics::envelope_p0(d, p)?;
    Ok(chamber_from_positive(d, &restricted_system(d).roots_q, positive))
}

/// The open cone `a_q^+(Q) = {H ∈ a_q : α(H) > 0, α ∈ Σ(Q,σθ)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaqPlus {
    /// The roots of `Σ(Q,σθ)`, as covectors.
    pub inequalities: Vec<QVec>,
    /// Indices into `chambers_q(d)` of the chambers contained in the cone.
    pub chambers: Vec<usize>,
}

impl FaqPlus {
    /// Membership of a vector of `a_q`.
    pub fn contains(&self, x: &[linalg::Rat]) -> bool {
        self.inequalities.iter().all(|a| linalg::dot(a, x).is_positive())
    }
}

pub fn faq_plus(d: &SymmetricRootDatum, q: &ParabolicSet) -> FaqPlus {
    let inequalities: Vec<QVec> = tau_set(d, q, Tau::SigmaTheta).iter().map(|i| d.root(i).clone()).collect();
    let mut out = FaqPlus { inequalities, chambers: Vec::new() };
    out.chambers = chambers_q(d).iter().enumerate().filter(|(_, c)| out.contains(&c.witness)).map(|(i, _)| i).collect();
    out
}

/// `P_σ(A, Q)`: q-extreme parabolics dominating `Q`.
pub fn p_sigma_a_q(d: &SymmetricRootDatum, q: &ParabolicSet) -> Vec<ParabolicSet> {
    enumerate_q_extreme(d).into_iter().filter(|p| preceq(d, p, q)).collect()
}

/// The q-extreme `P ⪰ Q` with `a_q^+(P) = C`, obtained from the chamber
/// point `X` pushed off the `a_h`-walls by `t Y` with `Y = pr_h(witness(Q))`.
pub fn build_from_chamber(d: &SymmetricRootDatum, q: &ParabolicSet, c: &Chamber) -> Result<ParabolicSet> {
    let cone = faq_plus(d, q);
    if !cone.contains(&c.witness) {
        return Err(Error::ChamberOutsideCone(format!("{:?}", q.positive)));
    }
    let x = &c.witness;
    let y = d.pr_h().mul_vec(&q.witness);
    let mut t: Option<linalg::Rat> = None;
    for r in d.roots() {
        let ax = linalg::dot(r, x);
        if ax.is_zero() {
            continue;
        }
        let bound = ax.abs() / (linalg::dot(r, &y).abs() + rat(1));
        t = Some(match t {
            Some(t) if t < bound => t,
            _ => bound,
        });
    }
    let t = t.unwrap_or_else(|| rat(1)) * frac(1, 2);
    let xt = linalg::add(x, &linalg::scale(&y, &t));
    let positive: RootSet = (0..d.num_roots()).filter(|&i| linalg::dot(d.root(i), &xt).is_positive()).collect();
    let p = ParabolicSet::from_positive(d, positive)?;
    if !is_q_extreme(d, &p) || !preceq(d, &p, q) || chamber_of(d, &p)?.positive != c.positive {
        return Err(Error::Internal(format!("perturbed chamber point gives {:?}", p.positive)));
    }
    Ok(p)
}

/// Representatives of the left cosets `w W_{K∩H}(a_q)` in `W(a_q)`, each
/// lifted to `W(a)`. The identity coset is represented by the identity.
pub fn script_w(d: &SymmetricRootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    let wq = restricted_weyl_group(d, cap)?;
    let wkh = whh_group(d, cap)?;
    let mut covered: BTreeSet<QMatrix> = BTreeSet::new();
    let mut reps = Vec::new();
    for w in &wq {
        if covered.contains(&w.matrix) {
            continue;
        }
        for h in &wkh {
            covered.insert(w.matrix.mul(&h.matrix));
        }
        reps.push(w.clone());
    }
    let wa = weyl_group(d, cap)?;
    let bq = QMatrix::from_cols(&d.q_basis(), d.dim());
    let mut lifts = Vec::new();
    for w in reps {
        let target = w.matrix.mul(&bq);
        match wa.iter().find(|u| u.matrix.mul(&bq) == target) {
            Some(u) => lifts.push(u.clone()),
            None => return Err(Error::NoLift(format!("{:?}", w.word))),
        }
    }
    Ok(lifts)
}

pub fn script_w_default(d: &SymmetricRootDatum) -> Result<Vec<WeylElement>> {
    script_w(d, DEFAULT_GROUP_CAP)
}

fn normalizes_aq(d: &SymmetricRootDatum, v: &QMatrix) -> bool {
    v.is_square() && v.rows() == d.dim() && v.mul(d.pr_q()) == d.pr_q().mul(v).mul(d.pr_q()) && v.inverse().is_some()
}

/// The datum with flags transported by `v`: `S_v = v S_e` and
/// `W_{K∩H}` conjugated by `v`.
pub fn conjugate(d: &SymmetricRootDatum, v: &WeylElement) -> Result<SymmetricRootDatum> {
    if !normalizes_aq(d, &v.matrix) {
        return Err(Error::NotNormalizing);
    }
    let flags: RootSet =
        d.st_trivial().iter().map(|i| d.act_root(&v.matrix, i).ok_or(Error::NotNormalizing)).collect::<Result<_>>()?;
    let inv = v.matrix.inverse().ok_or(Error::NotNormalizing)?;
    let whh = d.whh_generators().iter().map(|g| v.matrix.mul(g).mul(&inv)).collect();
    d.with_flags(&flags, whh)
}

/// `Σ(v⁻¹Qv) = v⁻¹Σ(Q)`.
pub fn conjugate_parabolic(d: &SymmetricRootDatum, v: &WeylElement, q: &ParabolicSet) -> Result<ParabolicSet> {
    let vt = v.matrix.transpose();
    let positive: RootSet = q
        .positive
        .iter()
        .map(|i| d.index_of(&vt.mul_vec(d.root(i))).ok_or(Error::NotNormalizing))
        .collect::<Result<_>>()?;
    ParabolicSet::from_positive(d, positive)
}

/// Image `v·S` of a root set.
pub fn act_set(d: &SymmetricRootDatum, v: &WeylElement, s: &RootSet) -> Result<RootSet> {
    s.iter().map(|i| d.act_root(&v.matrix, i).ok_or(Error::NotNormalizing)).collect()
}

/// For each `Q`, the chambers of `a_q^+(Q)` paired with their preimages in
/// `P_σ(A, Q)`; used by bijection checks.
pub fn chamber_map(d: &SymmetricRootDatum, q: &ParabolicSet) -> Result<BTreeMap<Chamber, ParabolicSet>> {
    let mut map = BTreeMap::new();
    for p in p_sigma_a_q(d, q) {
        let c = chamber_of(d, &p)?;
        if map.insert(c, p).is_some() {
            return Err(Error::Internal(String::from("two dominating parabolics share a chamber")));
        }
    }
    Ok(map)
}

/// Parabolics of the datum, for callers that only need the list.
pub fn parabolics(d: &SymmetricRootDatum) -> Vec<ParabolicSet> {
    enumerate_parabolics(d)
}
