//! Symmetric root data: a rational inner-product space `a` with an
//! orthogonal involution `sigma`, a root system on it, multiplicities and
//! the flags recording on which roots of `a_q^*` the involution
//! `sigma theta` acts trivially.
//!
//! Roots are covectors on `a`, written in the coordinates dual to a fixed
//! basis of `a`. The Cartan involution acts as `-I` on `a` and is never
//! stored. The dual action of `sigma` on a covector `alpha` is
//! `alpha o sigma`, i.e. `sigma^T alpha` in coordinates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, frac, rat, QMatrix, QVec, Rat};
use crate::rootset::RootSet;
use crate::weyl;

/// Default cap on the size of generated reflection groups.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// Unvalidated datum, as read from a file or assembled by hand.
///
/// `st_trivial` holds indices into `roots`. `whh_generators` are `dim x dim`
/// matrices on `a` that act on `a_q` as elements of `W(a_q)` and trivially on
/// `a_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct RawDatum {
    pub dim: usize,
    pub gram: QMatrix,
    pub sigma: QMatrix,
    pub roots: Vec<QVec>,
    pub mult: Vec<u32>,
    pub st_trivial: Vec<usize>,
    pub whh_generators: Vec<QMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, code: &str, message: String) {
        self.violations.push(Violation { code: code.into(), message });
    }

    pub fn has(&self, code: &str) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.code, v.message)?;
        }
        Ok(())
    }
}

fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{}", x)).collect();
    format!("({})", parts.join(","))
}

fn covector_inner(gram_inv: &QMatrix, a: &[Rat], b: &[Rat]) -> Rat {
    linalg::dot(a, &gram_inv.mul_vec(b))
}

fn reflect(gram_inv: &QMatrix, alpha: &[Rat], beta: &[Rat]) -> QVec {
    let c = covector_inner(gram_inv, beta, alpha) * rat(2) / covector_inner(gram_inv, alpha, alpha);
    linalg::sub(beta, &linalg::scale(alpha, &c))
}

/// Checks every structural invariant of a raw datum, collecting all
/// violations with witnesses.
pub fn validate(raw: &RawDatum) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = raw.dim;
    let shape_ok = |m: &QMatrix| m.rows() == n && m.cols() == n;
    if !shape_ok(&raw.gram) {
        rep.fail("shape", format!("gram is {}x{}, expected {n}x{n}", raw.gram.rows(), raw.gram.cols()));
    }
    if !shape_ok(&raw.sigma) {
        rep.fail("shape", format!("sigma is {}x{}, expected {n}x{n}", raw.sigma.rows(), raw.sigma.cols()));
    }
    if let Some(r) = raw.roots.iter().find(|r| r.len() != n) {
        rep.fail("shape", format!("root {} has length {}, expected {n}", fmt_vec(r), r.len()));
    }
    if raw.mult.len() != raw.roots.len() {
        rep.fail("shape", format!("{} multiplicities for {} roots", raw.mult.len(), raw.roots.len()));
    }
    if let Some(&i) = raw.st_trivial.iter().find(|&&i| i >= raw.roots.len()) {
        rep.fail("shape", format!("st_trivial index {i} out of range"));
    }
    if raw.whh_generators.iter().any(|g| !shape_ok(g)) {
        rep.fail("shape", "whh generator has wrong shape".into());
    }
    if !rep.passed() {
        return rep;
    }

    let gram = &raw.gram;
    let sigma = &raw.sigma;
    if !gram.is_symmetric() {
        rep.fail("gram-symmetric", "gram is not symmetric".into());
    } else if !gram.is_positive_definite() {
        rep.fail("gram-definite", "gram is not positive definite".into());
    }
    if !sigma.mul(sigma).is_identity() {
        rep.fail("sigma-involution", "sigma^2 != I".into());
    }
    if sigma.transpose().mul(gram).mul(sigma) != *gram {
        rep.fail("sigma-orthogonal", "σ not orthogonal with respect to gram".into());
    }
    if !rep.passed() {
        return rep;
    }
    let gram_inv = gram.inverse().expect("positive definite gram is invertible");

    let mut index: BTreeMap<&QVec, usize> = BTreeMap::new();
    for (i, r) in raw.roots.iter().enumerate() {
        if linalg::is_zero(r) {
            rep.fail("root-nonzero", "zero vector listed as a root".into());
        }
        if index.insert(r, i).is_some() {
            rep.fail("root-distinct", format!("root {} listed twice", fmt_vec(r)));
        }
    }
    if !rep.passed() {
        return rep;
    }
    let lookup = |v: &QVec| index.get(v).copied();

    for (i, r) in raw.roots.iter().enumerate() {
        let m = raw.mult[i];
        if m == 0 {
            rep.fail("mult-positive", format!("mult({}) = 0", fmt_vec(r)));
        }
        match lookup(&linalg::neg(r)) {
            None => rep.fail("negation-closed", format!("-α missing for α = {}", fmt_vec(r))),
            Some(j) if raw.mult[j] != m => rep
                .fail("mult-negation", format!("mult(−α) ≠ mult(α) for α = {}: {} vs {}", fmt_vec(r), raw.mult[j], m)),
            _ => {}
        }
        let s = sigma.transpose().mul_vec(r);
        match lookup(&s) {
            None => rep.fail("sigma-closed", format!("σ*α = {} missing for α = {}", fmt_vec(&s), fmt_vec(r))),
            Some(j) if raw.mult[j] != m => {
                rep.fail("mult-sigma", format!("mult(σ*α) ≠ mult(α) for α = {}: {} vs {}", fmt_vec(r), raw.mult[j], m))
            }
            _ => {}
        }
        for b in &raw.roots {
            let image = reflect(&gram_inv, r, b);
            if lookup(&image).is_none() {
                rep.fail(
                    "reflection-closed",
                    format!("s_α(β) = {} missing for α = {}, β = {}", fmt_vec(&image), fmt_vec(r), fmt_vec(b)),
                );
            }
        }
    }

    for &i in &raw.st_trivial {
        let r = &raw.roots[i];
        let s = sigma.transpose().mul_vec(r);
        if s != linalg::neg(r) {
            rep.fail("st-trivial-in-aq", format!("flagged root {} does not vanish on a_h", fmt_vec(r)));
        }
        if let Some(j) = lookup(&linalg::neg(r)) {
            if !raw.st_trivial.contains(&j) {
                rep.fail("st-trivial-negation", format!("flagged root {} but not its negative", fmt_vec(r)));
            }
        }
    }
    if !rep.passed() {
        return rep;
    }

    // Generators of W_{K∩H}(a_q) must lie in W(a_q) and fix a_h pointwise.
    if !raw.whh_generators.is_empty() {
        let pr_h = QMatrix::identity(n).add(sigma).scale(&frac(1, 2));
        for (k, g) in raw.whh_generators.iter().enumerate() {
            if g.mul(&pr_h) != pr_h {
                rep.fail("whh-fixes-ah", format!("whh generator {k} does not act trivially on a_h"));
            }
        }
        if rep.passed() {
            let restricted = restricted_reflections(n, &gram_inv, sigma, &raw.roots);
            match weyl::generate_group(n, &restricted, DEFAULT_GROUP_CAP) {
                Ok(group) => {
                    for (k, g) in raw.whh_generators.iter().enumerate() {
                        if !group.iter().any(|e| e.matrix == *g) {
                            rep.fail("whh-in-weyl", format!("whh generator {k} is not an element of W(a_q)"));
                        }
                    }
                }
                Err(e) => rep.fail("whh-in-weyl", format!("{e}")),
            }
        }
    }
    rep
}

fn restricted_covectors(sigma: &QMatrix, roots: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    for r in roots {
        let s = sigma.transpose().mul_vec(r);
        let q = linalg::scale(&linalg::sub(r, &s), &frac(1, 2));
        if !linalg::is_zero(&q) && !out.contains(&q) {
            out.push(q);
        }
    }
    out.sort();
    out
}

fn reflection_matrix(n: usize, gram_inv: &QMatrix, alpha: &[Rat]) -> QMatrix {
    // s_α(X) = X - α(X) H_α, H_α = 2 gram⁻¹ α / ⟨α, α⟩.
    let h = linalg::scale(&gram_inv.mul_vec(alpha), &(rat(2) / covector_inner(gram_inv, alpha, alpha)));
    let mut m = QMatrix::identity(n);
    for r in 0..n {
        for c in 0..n {
            m[(r, c)] -= &h[r] * &alpha[c];
        }
    }
    m
}

fn restricted_reflections(n: usize, gram_inv: &QMatrix, sigma: &QMatrix, roots: &[QVec]) -> Vec<QMatrix> {
    restricted_covectors(sigma, roots).iter().map(|b| reflection_matrix(n, gram_inv, b)).collect()
}

/// Position of a root relative to the decomposition `a^* = a_h^* + a_q^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    /// `alpha` vanishes on `a_q`.
    H,
    /// `alpha` vanishes on `a_h`.
    Q,
    Mixed,
}

/// A validated symmetric root datum with roots in canonical lexicographic
/// order.
#[derive(Clone, Debug)]
pub struct SymmetricRootDatum {
    dim: usize,
    gram: QMatrix,
    gram_inv: QMatrix,
    sigma: QMatrix,
    roots: Vec<QVec>,
    mult: Vec<u32>,
    st_trivial: RootSet,
    whh_generators: Vec<QMatrix>,
    index: BTreeMap<QVec, usize>,
    neg: Vec<usize>,
    sigma_of: Vec<usize>,
    kind: Vec<RootKind>,
    pr_h: QMatrix,
    pr_q: QMatrix,
}

impl PartialEq for SymmetricRootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.gram == other.gram
            && self.sigma == other.sigma
            && self.roots == other.roots
            && self.mult == other.mult
            && self.st_trivial == other.st_trivial
            && self.whh_generators == other.whh_generators
    }
}

impl SymmetricRootDatum {
    /// Validates `raw` and brings it into canonical form.
    pub fn new(raw: RawDatum) -> Result<Self> {
        let report = validate(&raw);
        if !report.passed() {
            return Err(Error::Invalid(report));
        }
        let RawDatum { dim, gram, sigma, roots, mult, st_trivial, whh_generators } = raw;
        let mut order: Vec<usize> = (0..roots.len()).collect();
        order.sort_by(|&a, &b| roots[a].cmp(&roots[b]));
        let mut new_pos = vec![0; roots.len()];
        for (new, &old) in order.iter().enumerate() {
            new_pos[old] = new;
        }
        let roots: Vec<QVec> = order.iter().map(|&i| roots[i].clone()).collect();
        let mult: Vec<u32> = order.iter().map(|&i| mult[i]).collect();
        let st_trivial: RootSet = st_trivial.iter().map(|&i| new_pos[i]).collect();

        let gram_inv = gram.inverse().expect("validated gram is invertible");
        let index: BTreeMap<QVec, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let sigma_t = sigma.transpose();
        let neg = roots.iter().map(|r| index[&linalg::neg(r)]).collect();
        let sigma_of: Vec<usize> = roots.iter().map(|r| index[&sigma_t.mul_vec(r)]).collect();
        let kind = roots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let s = &roots[sigma_of[i]];
                if s == r {
                    RootKind::H
                } else if *s == linalg::neg(r) {
                    RootKind::Q
                } else {
                    RootKind::Mixed
                }
            })
            .collect();
        let half = frac(1, 2);
        let id = QMatrix::identity(dim);
        let pr_h = id.add(&sigma).scale(&half);
        let pr_q = id.sub(&sigma).scale(&half);
        Ok(SymmetricRootDatum {
            dim,
            gram,
            gram_inv,
            sigma,
            roots,
            mult,
            st_trivial,
            whh_generators,
            index,
            neg,
            sigma_of,
            kind,
            pr_h,
            pr_q,
        })
    }

    /// The datum back in raw form (canonical root order).
    pub fn to_raw(&self) -> RawDatum {
        RawDatum {
            dim: self.dim,
            gram: self.gram.clone(),
            sigma: self.sigma.clone(),
            roots: self.roots.clone(),
            mult: self.mult.clone(),
            st_trivial: self.st_trivial.to_vec(),
            whh_generators: self.whh_generators.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &QMatrix {
        &self.gram_inv
    }

    pub fn sigma(&self) -> &QMatrix {
        &self.sigma
    }

    pub fn roots(&self) -> &[QVec] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &QVec {
        &self.roots[i]
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn all_roots(&self) -> RootSet {
        (0..self.roots.len()).collect()
    }

    pub fn mult(&self, i: usize) -> u32 {
        self.mult[i]
    }

    pub fn st_trivial(&self) -> &RootSet {
        &self.st_trivial
    }

    pub fn whh_generators(&self) -> &[QMatrix] {
        &self.whh_generators
    }

    pub fn index_of(&self, covector: &[Rat]) -> Option<usize> {
        self.index.get(covector).copied()
    }

    /// Index of `-alpha`.
    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    /// Index of `sigma^* alpha = alpha o sigma`.
    pub fn sigma_star(&self, i: usize) -> usize {
        self.sigma_of[i]
    }

    /// Index of `sigma theta alpha = -sigma^* alpha`.
    pub fn sigma_theta(&self, i: usize) -> usize {
        self.neg[self.sigma_of[i]]
    }

    pub fn kind(&self, i: usize) -> RootKind {
        self.kind[i]
    }

    pub fn in_h(&self, i: usize) -> bool {
        self.kind[i] == RootKind::H
    }

    pub fn in_q(&self, i: usize) -> bool {
        self.kind[i] == RootKind::Q
    }

    /// Roots lying in `a_h^*`.
    pub fn h_roots(&self) -> RootSet {
        self.all_roots().filter(|i| self.in_h(i))
    }

    /// Roots lying in `a_q^*`.
    pub fn q_roots(&self) -> RootSet {
        self.all_roots().filter(|i| self.in_q(i))
    }

    /// Inner product of two covectors, induced by the gram matrix.
    pub fn inner(&self, a: &[Rat], b: &[Rat]) -> Rat {
        covector_inner(&self.gram_inv, a, b)
    }

    /// `H_alpha = 2 gram^{-1}(alpha) / <alpha, alpha>`.
    pub fn coroot(&self, covector: &[Rat]) -> QVec {
        let c = rat(2) / self.inner(covector, covector);
        linalg::scale(&self.gram_inv.mul_vec(covector), &c)
    }

    /// Musical isomorphism `a^* -> a`.
    pub fn sharp(&self, covector: &[Rat]) -> QVec {
        self.gram_inv.mul_vec(covector)
    }

    pub fn sigma_covector(&self, covector: &[Rat]) -> QVec {
        self.sigma.transpose().mul_vec(covector)
    }

    pub fn pr_h(&self) -> &QMatrix {
        &self.pr_h
    }

    pub fn pr_q(&self) -> &QMatrix {
        &self.pr_q
    }

    /// Restriction of a covector to `a_q`, extended by zero on `a_h`.
    pub fn restrict_q(&self, covector: &[Rat]) -> QVec {
        self.pr_q.transpose().mul_vec(covector)
    }

    /// Restriction of a covector to `a_h`, extended by zero on `a_q`.
    pub fn restrict_h(&self, covector: &[Rat]) -> QVec {
        self.pr_h.transpose().mul_vec(covector)
    }

    pub fn is_q_covector(&self, covector: &[Rat]) -> bool {
        self.sigma_covector(covector) == linalg::neg(covector)
    }

    /// Basis of `a_q` (columns of `pr_q` in echelon order).
    pub fn q_basis(&self) -> Vec<QVec> {
        self.pr_q.column_basis()
    }

    pub fn h_basis(&self) -> Vec<QVec> {
        self.pr_h.column_basis()
    }

    pub fn dim_q(&self) -> usize {
        self.pr_q.rank()
    }

    /// Matrix of the reflection in a covector, acting on `a`.
    pub fn reflection(&self, covector: &[Rat]) -> QMatrix {
        reflection_matrix(self.dim, &self.gram_inv, covector)
    }

    /// Action of a linear map `v` of `a` on covectors: `alpha -> alpha o v^{-1}`.
    pub fn act_covector(&self, v: &QMatrix, covector: &[Rat]) -> QVec {
        let inv = v.inverse().expect("Weyl elements are invertible");
        inv.transpose().mul_vec(covector)
    }

    /// Image of a root under `v`, as a root index.
    pub fn act_root(&self, v: &QMatrix, i: usize) -> Option<usize> {
        self.index_of(&self.act_covector(v, &self.roots[i]))
    }

    /// Copy of this datum with new `sigma theta`-triviality flags and
    /// `W_{K∩H}` generators. Revalidates.
    pub fn with_flags(&self, st_trivial: &RootSet, whh_generators: Vec<QMatrix>) -> Result<Self> {
        let mut raw = self.to_raw();
        raw.st_trivial = st_trivial.to_vec();
        raw.whh_generators = whh_generators;
        Self::new(raw)
    }

    /// Reflections in all restricted roots, as matrices on `a`.
    pub fn restricted_reflections(&self) -> Vec<QMatrix> {
        restricted_reflections(self.dim, &self.gram_inv, &self.sigma, &self.roots)
    }
}

/// A finite root system with multiplicities on a rational inner-product
/// space, used as input to the builders.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseRootSystem {
    pub gram: QMatrix,
    pub roots: Vec<QVec>,
    pub mult: Vec<u32>,
}

impl BaseRootSystem {
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// Checks the base as a split datum (`sigma = -I`, no flags).
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        validate(&RawDatum {
            dim: n,
            gram: self.gram.clone(),
            sigma: QMatrix::identity(n).scale(&rat(-1)),
            roots: self.roots.clone(),
            mult: self.mult.clone(),
            st_trivial: Vec::new(),
            whh_generators: Vec::new(),
        })
    }
}

/// Group case `G' x G'` with the swap involution: roots `(alpha, 0)` and
/// `(0, beta)` on `a' x a'`.
pub fn build_doubled(base: &BaseRootSystem) -> Result<SymmetricRootDatum> {
    let report = base.validate();
    if !report.passed() {
        return Err(Error::InvalidBase(report));
    }
    let m = base.dim();
    let n = 2 * m;
    let mut gram = QMatrix::zeros(n, n);
    let mut sigma = QMatrix::zeros(n, n);
    for r in 0..m {
        for c in 0..m {
            gram[(r, c)] = base.gram[(r, c)].clone();
            gram[(m + r, m + c)] = base.gram[(r, c)].clone();
        }
        sigma[(r, m + r)] = Rat::one();
        sigma[(m + r, r)] = Rat::one();
    }
    let mut roots = Vec::new();
    let mut mult = Vec::new();
    for (a, &k) in base.roots.iter().zip(&base.mult) {
        let mut left = linalg::zero_vec(n);
        let mut right = linalg::zero_vec(n);
        left[..m].clone_from_slice(&a[..m]);
        right[m..].clone_from_slice(&a[..m]);
        roots.push(left);
        mult.push(k);
        roots.push(right);
        mult.push(k);
    }
    // W_{K∩H}(a_q) is all of W(a_q) in the group case.
    let whh = restricted_reflections(n, &gram.inverse().expect("validated"), &sigma, &roots);
    SymmetricRootDatum::new(RawDatum { dim: n, gram, sigma, roots, mult, st_trivial: Vec::new(), whh_generators: whh })
}

/// Split datum: `sigma = -I`, so `a = a_q`. `st_trivial` lists covectors
/// which must be roots.
pub fn build_split(
    base: &BaseRootSystem,
    st_trivial: &[QVec],
    whh_generators: Vec<QMatrix>,
) -> Result<SymmetricRootDatum> {
    let report = base.validate();
    if !report.passed() {
        return Err(Error::InvalidBase(report));
    }
    let n = base.dim();
    let mut flags = Vec::new();
    for f in st_trivial {
        match base.roots.iter().position(|r| r == f) {
            Some(i) => flags.push(i),
            None => return Err(Error::FlagNotRoot(fmt_vec(f))),
        }
    }
    SymmetricRootDatum::new(RawDatum {
        dim: n,
        gram: base.gram.clone(),
        sigma: QMatrix::identity(n).scale(&rat(-1)),
        roots: base.roots.clone(),
        mult: base.mult.clone(),
        st_trivial: flags,
        whh_generators,
    })
}

/// Restricted roots `Σ(g, a_q)`, each stored as the restriction `pr_q alpha`
/// extended by zero on `a_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedRootSystem {
    pub roots_q: Vec<QVec>,
    pub mult_q: Vec<u32>,
    /// Some contributing root is not flagged `sigma theta`-trivial.
    pub flags_q: Vec<bool>,
    /// Roots of `a` restricting to each restricted root.
    pub contributors: Vec<RootSet>,
    index: BTreeMap<QVec, usize>,
}

impl RestrictedRootSystem {
    pub fn len(&self) -> usize {
        self.roots_q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots_q.is_empty()
    }

    pub fn index_of(&self, covector: &[Rat]) -> Option<usize> {
        self.index.get(covector).copied()
    }

    pub fn neg(&self, i: usize) -> usize {
        self.index[&linalg::neg(&self.roots_q[i])]
    }
}

/// Groups the nonzero restrictions `alpha|_{a_q}` and sums multiplicities.
pub fn restricted_system(datum: &SymmetricRootDatum) -> RestrictedRootSystem {
    let mut groups: BTreeMap<QVec, (u32, bool, RootSet)> = BTreeMap::new();
    for i in 0..datum.num_roots() {
        let q = datum.restrict_q(datum.root(i));
        if linalg::is_zero(&q) {
            continue;
        }
        let minus = !(datum.in_q(i) && datum.st_trivial().contains(i));
        let entry = groups.entry(q).or_insert((0, false, RootSet::new()));
        entry.0 += datum.mult(i);
        entry.1 |= minus;
        entry.2.insert(i);
    }
    let mut sys = RestrictedRootSystem {
        roots_q: Vec::new(),
        mult_q: Vec::new(),
        flags_q: Vec::new(),
        contributors: Vec::new(),
        index: BTreeMap::new(),
    };
    for (k, (q, (m, f, c))) in groups.into_iter().enumerate() {
        sys.index.insert(q.clone(), k);
        sys.roots_q.push(q);
        sys.mult_q.push(m);
        sys.flags_q.push(f);
        sys.contributors.push(c);
    }
    sys
}

/// Bundled fixtures.
pub mod fixtures {
    use super::*;

    pub const NAMES: [&str; 5] = ["doubled_a1", "doubled_a2", "split_a1", "split_a2", "split_bc1"];

    /// `A_1` on `Q` with `<alpha, alpha> = 1`.
    pub fn base_a1() -> BaseRootSystem {
        BaseRootSystem {
            gram: QMatrix::from_rows(&[vec![rat(1)]], 1),
            roots: vec![vec![rat(-1)], vec![rat(1)]],
            mult: vec![1, 1],
        }
    }

    /// `A_2` with simple roots `e_1^*, e_2^*` and the gram matrix that makes
    /// the covector inner products `2, 2, -1`.
    pub fn base_a2() -> BaseRootSystem {
        let gram = QMatrix::from_rows(&[vec![frac(2, 3), frac(1, 3)], vec![frac(1, 3), frac(2, 3)]], 2);
        let mut roots = Vec::new();
        for (a, b) in [(1, 0), (0, 1), (1, 1)] {
            roots.push(vec![rat(a), rat(b)]);
            roots.push(vec![rat(-a), rat(-b)]);
        }
        BaseRootSystem { gram, mult: vec![1; roots.len()], roots }
    }

    /// `BC_1` with `m_alpha = 2`, `m_{2 alpha} = 1`.
    pub fn base_bc1() -> BaseRootSystem {
        BaseRootSystem {
            gram: QMatrix::from_rows(&[vec![rat(1)]], 1),
            roots: vec![vec![rat(-2)], vec![rat(-1)], vec![rat(1)], vec![rat(2)]],
            mult: vec![1, 2, 2, 1],
        }
    }

    /// Empty root system on a one-dimensional space.
    pub fn base_empty() -> BaseRootSystem {
        BaseRootSystem { gram: QMatrix::identity(1), roots: Vec::new(), mult: Vec::new() }
    }

    pub fn doubled_a1() -> SymmetricRootDatum {
        build_doubled(&base_a1()).expect("fixture")
    }

    pub fn doubled_a2() -> SymmetricRootDatum {
        build_doubled(&base_a2()).expect("fixture")
    }

    pub fn split_a1() -> SymmetricRootDatum {
        build_split(&base_a1(), &[], Vec::new()).expect("fixture")
    }

    /// Split `A_2` with `sigma theta` trivial on the root spaces of `±e_1^*`
    /// and trivial `W_{K∩H}`, so that `script W` is all of `W(a_q)`.
    pub fn split_a2() -> SymmetricRootDatum {
        build_split(&base_a2(), &[vec![rat(1), rat(0)], vec![rat(-1), rat(0)]], Vec::new()).expect("fixture")
    }

    pub fn split_bc1() -> SymmetricRootDatum {
        build_split(&base_bc1(), &[], Vec::new()).expect("fixture")
    }

    pub fn by_name(name: &str) -> Option<SymmetricRootDatum> {
        Some(match name {
            "doubled_a1" => doubled_a1(),
            "doubled_a2" => doubled_a2(),
            "split_a1" => split_a1(),
            "split_a2" => split_a2(),
            "split_bc1" => split_bc1(),
            _ => return None,
        })
    }

    pub fn all() -> Vec<(&'static str, SymmetricRootDatum)> {
        NAMES.iter().map(|&n| (n, by_name(n).expect("listed fixture"))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    /// Brute-force invariant oracle, independent of `validate`: enumerates
    /// every root and checks closure by direct search in the list.
    fn brute_force_valid(d: &SymmetricRootDatum) -> bool {
        let roots = d.roots();
        let contains = |v: &QVec| roots.iter().any(|r| r == v);
        for (i, a) in roots.iter().enumerate() {
            if !contains(&linalg::neg(a)) || !contains(&d.sigma().transpose().mul_vec(a)) {
                return false;
            }
            let ha = d.coroot(a);
            for b in roots {
                let img = linalg::sub(b, &linalg::scale(a, &linalg::dot(b, &ha)));
                if !contains(&img) {
                    return false;
                }
            }
            let j = roots.iter().position(|r| *r == linalg::neg(a)).unwrap();
            if d.mult(i) != d.mult(j) {
                return false;
            }
        }
        true
    }

    #[test]
    fn doubled_a1_passes() {
        let d = doubled_a1();
        assert!(validate(&d.to_raw()).passed());
        assert!(brute_force_valid(&d));
        assert_eq!(d.dim(), 2);
        assert_eq!(d.num_roots(), 4);
        assert!(d.st_trivial().is_empty());
    }

    #[test]
    fn doubled_a2_counts() {
        let d = doubled_a2();
        assert_eq!(d.dim(), 4);
        assert_eq!(d.num_roots(), 12);
        assert!(brute_force_valid(&d));
    }

    #[test]
    fn doubled_empty() {
        let d = build_doubled(&base_empty()).unwrap();
        assert_eq!(d.num_roots(), 0);
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn mult_asymmetry_fails() {
        let mut raw = split_a1().to_raw();
        raw.mult = vec![1, 2];
        let rep = validate(&raw);
        assert!(rep.has("mult-negation"));
        assert!(rep.violations.iter().any(|v| v.message.contains("mult(−α) ≠ mult(α)")));
        assert!(matches!(SymmetricRootDatum::new(raw), Err(Error::Invalid(_))));
    }

    #[test]
    fn non_orthogonal_sigma_fails() {
        let mut raw = doubled_a1().to_raw();
        raw.gram = QMatrix::from_rows(&[vec![rat(1), rat(0)], vec![rat(0), rat(2)]], 2);
        let rep = validate(&raw);
        assert!(rep.violations.iter().any(|v| v.message.contains("σ not orthogonal")));
    }

    #[test]
    fn missing_reflection_image_is_reported() {
        // A_2 minus one pair: not reflection closed.
        let mut base = base_a2();
        base.roots.truncate(4);
        base.mult.truncate(4);
        let rep = base.validate();
        assert!(rep.has("reflection-closed"));
        assert!(matches!(build_split(&base, &[], Vec::new()), Err(Error::InvalidBase(_))));
    }

    #[test]
    fn split_flags_must_be_roots() {
        let err = build_split(&base_a1(), &[vec![rat(3)]], Vec::new()).unwrap_err();
        assert!(matches!(err, Error::FlagNotRoot(_)));
    }

    #[test]
    fn flagged_root_outside_aq_rejected() {
        let mut raw = doubled_a1().to_raw();
        raw.st_trivial = vec![0, 3];
        assert!(validate(&raw).has("st-trivial-in-aq"));
    }

    #[test]
    fn split_bc1_valid() {
        let d = split_bc1();
        assert!(brute_force_valid(&d));
        assert_eq!(d.num_roots(), 4);
        let i = d.index_of(&[rat(2)]).unwrap();
        assert_eq!(d.mult(i), 1);
    }

    #[test]
    fn projections_are_complementary_and_orthogonal() {
        for (_, d) in all() {
            let n = d.dim();
            assert!(d.pr_h().add(d.pr_q()).is_identity());
            assert!(d.pr_h().mul(d.pr_q()).is_zero());
            // Gram-orthogonal: pr_h^T G pr_q = 0.
            assert!(d.pr_h().transpose().mul(d.gram()).mul(d.pr_q()).is_zero());
            assert_eq!(d.dim_q() + d.h_basis().len(), n);
        }
    }

    #[test]
    fn sigma_permutes_roots_preserving_mult() {
        for (_, d) in all() {
            for i in 0..d.num_roots() {
                let j = d.sigma_star(i);
                assert_eq!(d.mult(i), d.mult(j));
                assert_eq!(d.sigma_star(j), i);
            }
        }
    }

    #[test]
    fn restricted_doubled_a1() {
        let d = doubled_a1();
        let r = restricted_system(&d);
        assert_eq!(r.len(), 2);
        // (α,0) and (0,-α) restrict to the same root of a_q.
        for k in 0..2 {
            assert_eq!(r.mult_q[k], 2);
            assert_eq!(r.contributors[k].len(), 2);
        }
        let alpha_bar = vec![frac(1, 2), frac(-1, 2)];
        let k = r.index_of(&alpha_bar).unwrap();
        let contributors: Vec<&QVec> = r.contributors[k].iter().map(|i| d.root(i)).collect();
        assert!(contributors.contains(&&vec![rat(1), rat(0)]));
        assert!(contributors.contains(&&vec![rat(0), rat(-1)]));
    }

    #[test]
    fn restricted_split_is_identity() {
        let d = split_a1();
        let r = restricted_system(&d);
        assert_eq!(r.roots_q, d.roots().to_vec());
        assert_eq!(r.mult_q, vec![1, 1]);
    }

    #[test]
    fn restricted_doubled_a2_has_six_roots() {
        let r = restricted_system(&doubled_a2());
        assert_eq!(r.len(), 6);
        assert!(r.mult_q.iter().all(|&m| m == 2));
    }

    #[test]
    fn restricted_flags() {
        let d = split_a2();
        let r = restricted_system(&d);
        let flagged = r.index_of(&[rat(1), rat(0)]).unwrap();
        assert!(!r.flags_q[flagged]);
        assert_eq!(r.flags_q.iter().filter(|f| !**f).count(), 2);
    }

    #[test]
    fn canonical_order_independent_of_input_order() {
        let d = doubled_a2();
        let mut raw = d.to_raw();
        raw.roots.reverse();
        raw.mult.reverse();
        let d2 = SymmetricRootDatum::new(raw).unwrap();
        assert_eq!(d, d2);
        assert_eq!(restricted_system(&d), restricted_system(&d2));
    }
}
