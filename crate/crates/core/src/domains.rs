//! Half-sums of roots, the exponent `δ`, the cones `Γ(Q)` and `Γ(Q)°`, and
//! the real parts of the tube domains `Ω_{P,Q}`, `Ω_Q`, `Ω̂_Q`, `Υ_Q`, `Υ̂_Q`.
//!
//! Covectors in `a_q^*` are ambient covectors vanishing on `a_h`. Cones are
//! held in the coordinates of a [`QFrame`].

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::cone::{QFrame, RationalCone};
use crate::error::{Error, Result};
use crate::linalg::{self, frac, rat, QMatrix, QVec, Rat};
use crate::parabolics::{minus_set, preceq, tau_set, ParabolicSet, Tau};
use crate::root_datum::{restricted_system, SymmetricRootDatum};
use crate::rootset::RootSet;
use crate::weyl::{conjugate_parabolic, p_sigma_a_q, WeylElement};

/// `ρ_S = ½ Σ_{α∈S} m_α α`.
pub fn rho(d: &SymmetricRootDatum, s: &RootSet) -> QVec {
    let mut out = linalg::zero_vec(d.dim());
    for i in s.iter() {
        out = linalg::add(&out, &linalg::scale(d.root(i), &rat(d.mult(i) as i64)));
    }
    linalg::scale(&out, &frac(1, 2))
}

pub fn rho_p(d: &SymmetricRootDatum, p: &ParabolicSet) -> QVec {
    rho(d, &p.positive)
}

/// `ρ_{Ph}`: half-sum over `Σ(P) ∩ a_h^*`.
pub fn rho_ph(d: &SymmetricRootDatum, p: &ParabolicSet) -> QVec {
    rho(d, &p.positive.filter(|i| d.in_h(i)))
}

/// `δ = (2ρ_{Ph} + ρ_{Σ(P,σ)∖a_h^*})|_{a_h}`, after checking
/// `(ρ_P + ρ_{Ph})|_{a_h} = δ` and `ρ_{Σ(P,σθ)}|_{a_h} = 0`.
pub fn delta_exponent(d: &SymmetricRootDatum, p: &ParabolicSet) -> Result<QVec> {
    let ph = rho_ph(d, p);
    let sigma_part = tau_set(d, p, Tau::Sigma).filter(|i| !d.in_h(i));
    let delta = d.restrict_h(&linalg::add(&linalg::scale(&ph, &rat(2)), &rho(d, &sigma_part)));
    let lhs = d.restrict_h(&linalg::add(&rho_p(d, p), &ph));
    if lhs != delta {
        return Err(Error::IdentityViolation(format!("(ρ_P + ρ_Ph)|a_h ≠ δ for {:?}", p.positive)));
    }
    if !linalg::is_zero(&d.restrict_h(&rho(d, &tau_set(d, p, Tau::SigmaTheta)))) {
        return Err(Error::IdentityViolation(format!("ρ of the σθ-part does not vanish on a_h for {:?}", p.positive)));
    }
    Ok(delta)
}

pub fn q_frame(d: &SymmetricRootDatum) -> QFrame {
    QFrame::new(&d.q_basis(), &d.h_basis(), d.dim())
}

/// `pr_q(gram⁻¹ α)` for each `α` in `s`, as vectors of `a_q`.
fn q_directions(d: &SymmetricRootDatum, s: &RootSet) -> Vec<QVec> {
    s.iter().map(|i| d.pr_q().mul_vec(&d.sharp(d.root(i)))).collect()
}

fn to_coords(frame: &QFrame, xs: &[QVec]) -> Vec<QVec> {
    xs.iter().map(|x| frame.vector_coords(x).expect("vector lies in a_q")).collect()
}

/// `Γ(Q)`: the cone in `a_q` spanned by `H_α + σθ H_α = 2 pr_q H_α`,
/// `α ∈ Σ(Q)₋`, in frame coordinates.
pub fn gamma_cone(d: &SymmetricRootDatum, q: &ParabolicSet) -> RationalCone {
    let frame = q_frame(d);
    let gens: Vec<QVec> = minus_set(d, q)
        .iter()
        .map(|i| {
            let h = d.coroot(d.root(i));
            linalg::scale(&d.pr_q().mul_vec(&h), &rat(2))
        })
        .collect();
    RationalCone::from_generators(frame.dim(), &to_coords(&frame, &gens))
}

/// `Γ(Q)° = {λ ∈ a_q^* : ⟨λ, α⟩ >= 0, α ∈ Σ(Q)₋}`, built from the
/// inequalities; generators come from double description.
pub fn gamma_dual(d: &SymmetricRootDatum, q: &ParabolicSet) -> RationalCone {
    let frame = q_frame(d);
    let ineqs = to_coords(&frame, &q_directions(d, &minus_set(d, q)));
    RationalCone::from_inequalities(frame.dim(), &ineqs)
}

/// Closure of `a_q^{*+}(Q) = {λ : ⟨λ, α⟩ > 0, α ∈ Σ(Q,σθ)}` in frame
/// coordinates.
pub fn faq_star_plus_closure(d: &SymmetricRootDatum, q: &ParabolicSet) -> RationalCone {
    let frame = q_frame(d);
    let ineqs = to_coords(&frame, &q_directions(d, &tau_set(d, q, Tau::SigmaTheta)));
    RationalCone::from_inequalities(frame.dim(), &ineqs)
}

/// `basepoint - C` for a closed cone `C ⊂ a_q^*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePiece {
    pub basepoint: QVec,
    /// Vectors `X` of `a_q`; the piece is `{λ : (λ - basepoint)(X) <= 0}`.
    pub normals: Vec<QVec>,
    /// Covectors `r` with piece `= basepoint + cone(r)`.
    pub rays: Vec<QVec>,
}

impl ConePiece {
    fn contains(&self, lambda: &[Rat]) -> bool {
        let diff = linalg::sub(lambda, &self.basepoint);
        self.normals.iter().all(|x| !linalg::dot(&diff, x).is_positive())
    }
}

/// `⟨λ, normal⟩ <= bound`, pairing through the gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: QVec,
    pub bound: Rat,
}

/// Real part of a tube domain in `a_q^*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Union(Vec<ConePiece>),
    HalfSpaces(Vec<HalfSpace>),
    /// `{λ : λ(X) > 0}` for each listed vector `X`.
    OpenCone(Vec<QVec>),
    Intersection(Vec<Domain>),
    /// `v·D = {λ : v⁻¹·λ ∈ D}`, where `v⁻¹·λ = v^T λ` on covectors.
    Transformed(QMatrix, Box<Domain>),
}

impl Domain {
    /// Membership of a rational covector; covectors outside `a_q^*` are
    /// never members.
    pub fn contains(&self, d: &SymmetricRootDatum, lambda: &[Rat]) -> bool {
        d.is_q_covector(lambda) && self.contains_unchecked(d, lambda)
    }

    fn contains_unchecked(&self, d: &SymmetricRootDatum, lambda: &[Rat]) -> bool {
        match self {
            Domain::Union(pieces) => pieces.iter().any(|p| p.contains(lambda)),
            Domain::HalfSpaces(hs) => hs.iter().all(|h| d.inner(lambda, &h.normal) <= h.bound),
            Domain::OpenCone(xs) => xs.iter().all(|x| linalg::dot(lambda, x).is_positive()),
            Domain::Intersection(ds) => ds.iter().all(|x| x.contains_unchecked(d, lambda)),
            Domain::Transformed(v, inner) => inner.contains_unchecked(d, &v.transpose().mul_vec(lambda)),
        }
    }

    pub fn is_unconstrained(&self) -> bool {
        match self {
            Domain::HalfSpaces(hs) => hs.is_empty(),
            Domain::OpenCone(xs) => xs.is_empty(),
            Domain::Union(ps) => ps.iter().any(|p| p.normals.is_empty()),
            Domain::Intersection(ds) => ds.iter().all(Domain::is_unconstrained),
            Domain::Transformed(_, inner) => inner.is_unconstrained(),
        }
    }
}

fn require_dominating(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> Result<()> {
    if !preceq(d, p, q) {
        return Err(Error::NotDominating { p: format!("{:?}", p.positive), q: format!("{:?}", q.positive) });
    }
    Ok(())
}

/// `-(ρ_P - ρ_{Ph})`, the basepoint of `Ω_{P,Q}`.
pub fn omega_basepoint(d: &SymmetricRootDatum, p: &ParabolicSet) -> QVec {
    linalg::neg(&linalg::sub(&rho_p(d, p), &rho_ph(d, p)))
}

fn omega_piece(
    d: &SymmetricRootDatum,
    frame: &QFrame,
    p: &ParabolicSet,
    q: &ParabolicSet,
    dual: &RationalCone,
) -> ConePiece {
    ConePiece {
        basepoint: omega_basepoint(d, p),
        normals: q_directions(d, &minus_set(d, q)),
        rays: dual.generators.iter().map(|y| linalg::neg(&frame.covector(y))).collect(),
    }
}

/// `Ω_{P,Q} = -(ρ_P - ρ_{Ph}) - Γ(Q)°`.
pub fn omega_pq(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> Result<Domain> {
    require_dominating(d, p, q)?;
    let frame = q_frame(d);
    Ok(Domain::Union(Vec::from([omega_piece(d, &frame, p, q, &gamma_dual(d, q))])))
}

/// `Ω_Q`: union of `Ω_{P,Q}` over `P ∈ P_σ(A, Q)`.
pub fn omega_q(d: &SymmetricRootDatum, q: &ParabolicSet) -> Domain {
    let frame = q_frame(d);
    let dual = gamma_dual(d, q);
    Domain::Union(p_sigma_a_q(d, q).iter().map(|p| omega_piece(d, &frame, p, q, &dual)).collect())
}

/// Restricted roots `β` with `gram⁻¹ β ∈ Γ(Q)`.
pub fn hull_roots(d: &SymmetricRootDatum, q: &ParabolicSet) -> Vec<QVec> {
    let frame = q_frame(d);
    let gamma = gamma_cone(d, q);
    restricted_system(d)
        .roots_q
        .into_iter()
        .filter(|b| {
            let x = frame.vector_coords(&d.sharp(b)).expect("restricted root is dual to a_q");
            gamma.contains(&x)
        })
        .collect()
}

/// `Ω̂_Q`: `⟨λ, β⟩ <= max_P ⟨-ρ_P, β⟩` for the restricted roots `β` in
/// `gram(Γ(Q))`, the maximum over `P ∈ P_σ(A, Q)`.
pub fn omega_hat(d: &SymmetricRootDatum, q: &ParabolicSet) -> Domain {
    let ps = p_sigma_a_q(d, q);
    let hs = hull_roots(d, q)
        .into_iter()
        .map(|b| {
            let bound = ps.iter().map(|p| -d.inner(&rho_p(d, p), &b)).max().expect("P_σ(A, Q) is never empty");
            HalfSpace { normal: b, bound }
        })
        .collect();
    Domain::HalfSpaces(hs)
}

/// Exact containment of a union of cone pieces in an intersection of
/// half-spaces, checked on basepoints and rays.
pub fn union_in_halfspaces(d: &SymmetricRootDatum, union: &Domain, hull: &Domain) -> Result<bool> {
    let (Domain::Union(pieces), Domain::HalfSpaces(hs)) = (union, hull) else {
        return Err(Error::InvalidArgument(String::from("expected a union of pieces and a half-space system")));
    };
    Ok(pieces.iter().all(|p| {
        hs.iter().all(|h| {
            d.inner(&p.basepoint, &h.normal) <= h.bound && p.rays.iter().all(|r| !d.inner(r, &h.normal).is_positive())
        })
    }))
}

/// The open cone `a_q^{*+}(Q)`.
pub fn faq_star_plus(d: &SymmetricRootDatum, q: &ParabolicSet) -> Domain {
    Domain::OpenCone(q_directions(d, &tau_set(d, q, Tau::SigmaTheta)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolsetCertificate {
    pub holds: bool,
    /// Generators of the closure of `a_q^{*+}(Q)` checked, as covectors.
    pub rays_checked: usize,
    /// A generator outside `Γ(Q)°`, when the containment fails.
    pub witness: Option<QVec>,
}

/// Certifies `a_q^{*+}(Q) ⊂ Γ(Q)°`, so that
/// `-(ρ_P - ρ_{Ph}) - a_q^{*+}(Q) ⊂ Ω_{P,Q}`.
pub fn check_subset_holset(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> Result<HolsetCertificate> {
    require_dominating(d, p, q)?;
    let frame = q_frame(d);
    let closure = faq_star_plus_closure(d, q);
    let dual = gamma_dual(d, q);
    let witness = closure.generators.iter().find(|g| !dual.contains(g)).map(|g| frame.covector(g));
    Ok(HolsetCertificate { holds: witness.is_none(), rays_checked: closure.generators.len(), witness })
}

/// `Υ_Q = ⋂_v v Ω_{v⁻¹Qv}` over the representatives `v ∈ W`.
pub fn upsilon(d: &SymmetricRootDatum, q: &ParabolicSet, script_w: &[WeylElement]) -> Result<Domain> {
    intersect_translates(d, q, script_w, omega_q)
}

/// `Υ̂_Q = ⋂_v v Ω̂_{v⁻¹Qv}`.
pub fn upsilon_hat(d: &SymmetricRootDatum, q: &ParabolicSet, script_w: &[WeylElement]) -> Result<Domain> {
    intersect_translates(d, q, script_w, omega_hat)
}

fn intersect_translates(
    d: &SymmetricRootDatum,
    q: &ParabolicSet,
    script_w: &[WeylElement],
    f: fn(&SymmetricRootDatum, &ParabolicSet) -> Domain,
) -> Result<Domain> {
    let mut parts = Vec::new();
    for v in script_w {
        let q0 = conjugate_parabolic(d, v, q)?;
        parts.push(Domain::Transformed(v.matrix.clone(), Box::new(f(d, &q0))));
    }
    Ok(Domain::Intersection(parts))
}

/// The direct inequality form of `Ω_{P,P}`:
/// `⟨λ + ρ_P - ρ_{Ph}, α⟩ <= 0` for `α ∈ Σ(P)₋`.
pub fn omega_pp_by_inequalities(d: &SymmetricRootDatum, p: &ParabolicSet, lambda: &[Rat]) -> bool {
    let shifted = linalg::sub(lambda, &omega_basepoint(d, p));
    d.is_q_covector(lambda) && minus_set(d, p).iter().all(|i| !d.inner(&shifted, d.root(i)).is_positive())
}

/// Rational points of `a_q^*` on a grid in frame coordinates, with
/// coordinates in `{-r, -r + 1/2, ..., r}`. Capped at `limit` points.
pub fn q_grid(d: &SymmetricRootDatum, r: i64, limit: usize) -> Vec<QVec> {
    let frame = q_frame(d);
    let k = frame.dim();
    let side = (4 * r + 1) as usize;
    let mut out = Vec::new();
    let total = side.checked_pow(k as u32).unwrap_or(usize::MAX);
    let step = if total > limit { total / limit + 1 } else { 1 };
    let mut code = 0usize;
    while code < total && out.len() < limit {
        let mut c = code;
        let mut y = Vec::with_capacity(k);
        for _ in 0..k {
            y.push(frac((c % side) as i64 - 2 * r, 2));
            c /= side;
        }
        out.push(frame.covector(&y));
        code += step;
    }
    if k == 0 {
        out.truncate(1);
    }
    out
}

/// `true` iff every covector in `points` is in `a` exactly when it is in `b`.
pub fn agree_on(d: &SymmetricRootDatum, a: &Domain, b: &Domain, points: &[QVec]) -> Option<QVec> {
    points.iter().find(|l| a.contains(d, l) != b.contains(d, l)).cloned()
}

/// A point of `points` in `a` but not in `b`.
pub fn escapes(d: &SymmetricRootDatum, a: &Domain, b: &Domain, points: &[QVec]) -> Option<QVec> {
    points.iter().find(|l| a.contains(d, l) && !b.contains(d, l)).cloned()
}

/// Sanity: a cone piece is never empty since it contains its basepoint.
pub fn basepoint_is_member(d: &SymmetricRootDatum, p: &ParabolicSet, q: &ParabolicSet) -> Result<bool> {
    let b = omega_basepoint(d, p);
    Ok(omega_pq(d, p, q)?.contains(d, &b))
}
