//! Brute-force verification of the combinatorial and polyhedral identities
//! over one datum. Every check runs over its whole finite universe and
//! records the first counterexample in canonical order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cone::RationalCone;
use crate::domains::{
    agree_on, check_subset_holset, delta_exponent, escapes, faq_star_plus, gamma_cone, gamma_dual, omega_basepoint,
    omega_hat, omega_pp_by_inequalities, omega_pq, omega_q, q_frame, q_grid, rho, rho_ph, union_in_halfspaces, upsilon,
    upsilon_hat,
};
use crate::linalg::{self, QVec};
use crate::parabolics::{
    adjacent, chain, minus_set, preceq, preceq_via_b, preceq_via_c, separating, tau_set, ParabolicPoset, ParabolicSet,
    Tau,
};
use crate::root_datum::{validate, RawDatum, SymmetricRootDatum, DEFAULT_GROUP_CAP};
use crate::rootset::RootSet;
use crate::weyl::{
    act_set, build_from_chamber, chamber_of, chambers_q, conjugate, conjugate_parabolic, faq_plus, p_sigma_a_q,
    script_w,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCertificate {
    pub lemma: String,
    pub statement: String,
    pub datum: String,
    /// Number of items (parabolics, pairs, triples, grid points) visited.
    pub universe: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<String>,
}

impl LemmaCertificate {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Run triple checks over all triples instead of comparable pairs.
    pub exhaustive: bool,
    /// Grid for membership comparisons: half-integer frame coordinates in
    /// `[-grid_radius, grid_radius]`, at most `grid_limit` points.
    pub grid_radius: i64,
    pub grid_limit: usize,
    pub group_cap: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { exhaustive: false, grid_radius: 2, grid_limit: 300, group_cap: DEFAULT_GROUP_CAP }
    }
}

/// Lemma ids in the order certificates are emitted.
pub const LEMMAS: [(&str, &str); 24] = [
    ("validate", "the datum satisfies every axiom of a symmetric root datum"),
    ("disjoint-union", "Σ(P) is the disjoint union of Σ(P,σ) and Σ(P,σθ)"),
    ("ordering-equivalence-abc", "the three characterizations of P ⪰ Q agree"),
    ("partial-order", "⪰ is reflexive, antisymmetric and transitive"),
    ("shared-q-and-h-roots", "P ⪰ Q implies Σ(P)∩a_q* = Σ(Q)∩a_q* and Σ(P)∩a_h* = Σ(Q)∩a_h*"),
    ("separating-avoids-ah", "P ⪰ Q implies Σ(P)∩Σ(Q̄)∩a_h* = ∅"),
    ("sandwich", "for P ⪰ R: P ⪰ Q ⪰ R iff Σ(P)∩Σ(Q̄) ⊂ Σ(P)∩Σ(R̄)"),
    ("sandwich-disjoint-union", "P ⪰ Q ⪰ R implies Σ(P)∩Σ(R̄) = (Σ(P)∩Σ(Q̄)) ⊔ (Σ(Q)∩Σ(R̄))"),
    ("chain-monotone", "for P ⪰ Q the gallery from P to Q is adjacent-stepped and ⪰-monotone"),
    ("maximal-is-q-extreme", "the maximal elements of ⪰ are the q-extreme parabolics"),
    ("q-extreme-dominates", "every Q is dominated by some q-extreme P"),
    ("chamber-bijection", "P ↦ a_q^+(P) is a bijection from P_σ(A,Q) to the chambers in a_q^+(Q)"),
    ("build-from-chamber", "build_from_chamber inverts P ↦ a_q^+(P)"),
    ("rho-sigma-theta", "ρ of Σ(P,σθ) vanishes on a_h"),
    ("delta-identity", "(ρ_P + ρ_Ph) restricted to a_h equals δ"),
    ("rho-ph-invariance", "P ⪰ Q implies ρ_Ph = ρ_Qh"),
    ("gamma-double-dual", "Γ(Q)°° = Γ(Q)"),
    ("chamber-cone-in-gamma-dual", "P ⪰ Q implies a_q^{*+}(Q) ⊂ Γ(Q)°"),
    ("omega-pp-inequalities", "Ω_{P,P} agrees with its inequality system on a grid"),
    ("hull-containment", "Ω_Q ⊂ Ω̂_Q exactly and Υ_Q ⊂ Υ̂_Q on a grid"),
    ("hull-unconstrained", "Σ(Q)₋ = ∅ implies Ω̂_Q is unconstrained"),
    ("upsilon-contains-translate", "Υ_Q contains -(ρ_P - ρ_Ph) - a_q^{*+}(Q) for P ∈ P_σ(A,Q) on a grid"),
    ("upsilon-trivial-w", "when W is trivial, Υ_Q = Ω_Q on a grid"),
    ("conjugation-covariance", "Σ(Q)_{σ_v,-} = v·Σ(v⁻¹Qv)₋ for all v ∈ W"),
];

fn statement(id: &str) -> String {
    LEMMAS.iter().find(|(l, _)| *l == id).map(|(_, s)| s.to_string()).unwrap_or_default()
}

struct Check {
    cert: LemmaCertificate,
}

impl Check {
    fn new(id: &str, datum: &str) -> Self {
        Check {
            cert: LemmaCertificate {
                lemma: id.to_string(),
                statement: statement(id),
                datum: datum.to_string(),
                universe: 0,
                status: Status::Pass,
                counterexample: None,
            },
        }
    }

    /// Counts one item; records the first failure.
    fn item(&mut self, ok: bool, cx: impl FnOnce() -> String) {
        self.cert.universe += 1;
        if !ok && self.cert.status == Status::Pass {
            self.cert.status = Status::Fail;
            self.cert.counterexample = Some(cx());
        }
    }

    fn done(self) -> LemmaCertificate {
        self.cert
    }
}

fn show_vec(v: &[linalg::Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn show_set(d: &SymmetricRootDatum, s: &RootSet) -> String {
    let parts: Vec<String> = s.iter().map(|i| show_vec(d.root(i))).collect();
    format!("{{{}}}", parts.join(", "))
}

fn show_p(d: &SymmetricRootDatum, p: &ParabolicSet) -> String {
    show_set(d, &p.positive)
}

/// Runs every check on a raw datum. A datum that fails validation yields a
/// single failing `validate` certificate.
pub fn run_suite(raw: &RawDatum, name: &str, opts: &SuiteOptions) -> Vec<LemmaCertificate> {
    let mut c = Check::new("validate", name);
    let report = validate(raw);
    c.item(report.passed(), || format!("{}", report));
    let d = match SymmetricRootDatum::new(raw.clone()) {
        Ok(d) if c.cert.status == Status::Pass => d,
        Ok(_) => return Vec::from([c.done()]),
        Err(e) => {
            c.item(false, || format!("{:?}", e));
            return Vec::from([c.done()]);
        }
    };
    let mut out = Vec::from([c.done()]);
    out.extend(run_checks(&d, name, opts));
    out
}

/// Runs every check except validation on an already validated datum.
pub fn run_checks(d: &SymmetricRootDatum, name: &str, opts: &SuiteOptions) -> Vec<LemmaCertificate> {
    let poset = ParabolicPoset::new(d);
    let ps = &poset.parabolics;
    let n = ps.len();
    let geq = |i: usize, j: usize| poset.geq[i][j];
    let mut out = Vec::new();

    let mut c = Check::new("disjoint-union", name);
    for p in ps {
        let s = tau_set(d, p, Tau::Sigma);
        let st = tau_set(d, p, Tau::SigmaTheta);
        c.item(s.is_disjoint(&st) && s.union(&st) == p.positive, || show_p(d, p));
    }
    out.push(c.done());

    let mut c = Check::new("ordering-equivalence-abc", name);
    for p in ps {
        for q in ps {
            let a = preceq(d, p, q);
            c.item(a == preceq_via_b(d, p, q) && a == preceq_via_c(d, p, q), || {
                format!("P = {}, Q = {}", show_p(d, p), show_p(d, q))
            });
        }
    }
    out.push(c.done());

    let mut c = Check::new("partial-order", name);
    for i in 0..n {
        c.item(geq(i, i), || format!("not reflexive at {}", show_p(d, &ps[i])));
    }
    for i in 0..n {
        for j in 0..n {
            c.item(i == j || !(geq(i, j) && geq(j, i)), || {
                format!("not antisymmetric: {} and {}", show_p(d, &ps[i]), show_p(d, &ps[j]))
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !opts.exhaustive && !geq(i, j) {
                continue;
            }
            for k in 0..n {
                if !opts.exhaustive && !geq(j, k) {
                    continue;
                }
                c.item(!(geq(i, j) && geq(j, k)) || geq(i, k), || {
                    format!("not transitive: {}, {}, {}", show_p(d, &ps[i]), show_p(d, &ps[j]), show_p(d, &ps[k]))
                });
            }
        }
    }
    out.push(c.done());

    let mut c = Check::new("shared-q-and-h-roots", name);
    let mut c2 = Check::new("separating-avoids-ah", name);
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (&ps[i], &ps[j]);
            let comparable = geq(i, j);
            let ok = !comparable
                || (p.positive.filter(|a| d.in_q(a)) == q.positive.filter(|a| d.in_q(a))
                    && p.positive.filter(|a| d.in_h(a)) == q.positive.filter(|a| d.in_h(a)));
            c.item(ok, || format!("P = {}, Q = {}", show_p(d, p), show_p(d, q)));
            let ok = !comparable || separating(p, q).filter(|a| d.in_h(a)).is_empty();
            c2.item(ok, || format!("P = {}, Q = {}", show_p(d, p), show_p(d, q)));
        }
    }
    out.push(c.done());
    out.push(c2.done());

    let mut c = Check::new("sandwich", name);
    let mut c2 = Check::new("sandwich-disjoint-union", name);
    for i in 0..n {
        for k in 0..n {
            let applies = geq(i, k);
            if !opts.exhaustive && !applies {
                continue;
            }
            let (p, r) = (&ps[i], &ps[k]);
            let pr = separating(p, r);
            for j in 0..n {
                let q = &ps[j];
                let between = geq(i, j) && geq(j, k);
                let cx = || format!("P = {}, Q = {}, R = {}", show_p(d, p), show_p(d, q), show_p(d, r));
                c.item(!applies || between == separating(p, q).is_subset(&pr), cx);
                let ok = !between || {
                    let (a, b) = (separating(p, q), separating(q, r));
                    a.is_disjoint(&b) && a.union(&b) == pr
                };
                c2.item(ok, cx);
            }
        }
    }
    out.push(c.done());
    out.push(c2.done());

    let mut c = Check::new("chain-monotone", name);
    for i in 0..n {
        for j in 0..n {
            if !geq(i, j) {
                continue;
            }
            let (p, q) = (&ps[i], &ps[j]);
            let ok = match chain(d, p, q) {
                Ok(ch) => {
                    ch.first() == Some(p)
                        && ch.last() == Some(q)
                        && ch.windows(2).all(|w| adjacent(d, &w[0], &w[1]) && preceq(d, &w[0], &w[1]))
                }
                Err(_) => false,
            };
            c.item(ok, || format!("P = {}, Q = {}", show_p(d, p), show_p(d, q)));
        }
    }
    out.push(c.done());

    let q_extreme: Vec<bool> = ps.iter().map(|p| crate::parabolics::is_q_extreme(d, p)).collect();
    let maximal = poset.maximal();
    let mut c = Check::new("maximal-is-q-extreme", name);
    for i in 0..n {
        c.item(maximal.contains(&i) == q_extreme[i], || show_p(d, &ps[i]));
    }
    out.push(c.done());

    let mut c = Check::new("q-extreme-dominates", name);
    for j in 0..n {
        c.item((0..n).any(|i| q_extreme[i] && geq(i, j)), || show_p(d, &ps[j]));
    }
    out.push(c.done());

    let chambers = chambers_q(d);
    let mut c = Check::new("chamber-bijection", name);
    let mut c2 = Check::new("build-from-chamber", name);
    for q in ps {
        let cone = faq_plus(d, q);
        let dominating = p_sigma_a_q(d, q);
        let images: Vec<_> = dominating.iter().filter_map(|p| chamber_of(d, p).ok()).collect();
        let mut distinct = images.iter().map(|ch| &ch.positive).collect::<Vec<_>>();
        distinct.sort();
        distinct.dedup();
        let ok = images.len() == dominating.len()
            && distinct.len() == images.len()
            && images.len() == cone.chambers.len()
            && images.iter().all(|ch| cone.contains(&ch.witness));
        c.item(ok, || {
            format!("Q = {}: {} dominating q-extreme, {} chambers", show_p(d, q), dominating.len(), cone.chambers.len())
        });
        for &k in &cone.chambers {
            let ch = &chambers[k];
            let ok = match build_from_chamber(d, q, ch) {
                Ok(p) => {
                    dominating.contains(&p) && chamber_of(d, &p).map(|x| x.positive == ch.positive).unwrap_or(false)
                }
                Err(_) => false,
            };
            c2.item(ok, || format!("Q = {}, chamber witness {}", show_p(d, q), show_vec(&ch.witness)));
        }
    }
    out.push(c.done());
    out.push(c2.done());

    let mut c = Check::new("rho-sigma-theta", name);
    let mut c2 = Check::new("delta-identity", name);
    for p in ps {
        c.item(linalg::is_zero(&d.restrict_h(&rho(d, &tau_set(d, p, Tau::SigmaTheta)))), || show_p(d, p));
        c2.item(delta_exponent(d, p).is_ok(), || show_p(d, p));
    }
    out.push(c.done());
    out.push(c2.done());

    let mut c = Check::new("rho-ph-invariance", name);
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (&ps[i], &ps[j]);
            c.item(!geq(i, j) || rho_ph(d, p) == rho_ph(d, q), || {
                format!("P = {}, Q = {}", show_p(d, p), show_p(d, q))
            });
        }
    }
    out.push(c.done());

    let k = q_frame(d).dim();
    let mut c = Check::new("gamma-double-dual", name);
    for q in ps {
        let g = gamma_cone(d, q);
        let dd = RationalCone::from_inequalities(k, &gamma_dual(d, q).generators);
        c.item(dd.same_set(&g), || show_p(d, q));
    }
    out.push(c.done());

    let mut c = Check::new("chamber-cone-in-gamma-dual", name);
    for i in 0..n {
        for j in 0..n {
            if !geq(i, j) {
                continue;
            }
            let (p, q) = (&ps[i], &ps[j]);
            let cert = check_subset_holset(d, p, q);
            c.item(cert.as_ref().map(|x| x.holds).unwrap_or(false), || {
                let w = cert.as_ref().ok().and_then(|x| x.witness.as_ref()).map(|w| show_vec(w)).unwrap_or_default();
                format!("P = {}, Q = {}, ray {}", show_p(d, p), show_p(d, q), w)
            });
        }
    }
    out.push(c.done());

    let grid = q_grid(d, opts.grid_radius, opts.grid_limit);
    let mut c = Check::new("omega-pp-inequalities", name);
    for (i, p) in ps.iter().enumerate() {
        if !q_extreme[i] {
            continue;
        }
        match omega_pq(d, p, p) {
            Ok(dom) => {
                for l in &grid {
                    c.item(dom.contains(d, l) == omega_pp_by_inequalities(d, p, l), || {
                        format!("P = {}, λ = {}", show_p(d, p), show_vec(l))
                    });
                }
            }
            Err(e) => c.item(false, || format!("P = {}: {:?}", show_p(d, p), e)),
        }
    }
    out.push(c.done());

    let w = script_w(d, opts.group_cap);
    let mut hull = Check::new("hull-containment", name);
    let mut unc = Check::new("hull-unconstrained", name);
    let mut ups = Check::new("upsilon-contains-translate", name);
    let mut triv = Check::new("upsilon-trivial-w", name);
    for q in ps {
        let om = omega_q(d, q);
        let hat = omega_hat(d, q);
        hull.item(union_in_halfspaces(d, &om, &hat).unwrap_or(false), || format!("Q = {}", show_p(d, q)));
        unc.item(!minus_set(d, q).is_empty() || hat.is_unconstrained(), || format!("Q = {}", show_p(d, q)));
        let w = match &w {
            Ok(w) => w,
            Err(e) => {
                hull.item(false, || format!("W: {:?}", e));
                continue;
            }
        };
        match (upsilon(d, q, w), upsilon_hat(d, q, w)) {
            (Ok(u), Ok(uh)) => {
                let esc = escapes(d, &u, &uh, &grid);
                hull.item(esc.is_none(), || format!("Q = {}, λ = {}", show_p(d, q), show_vec(esc.as_ref().unwrap())));
                let open = faq_star_plus(d, q);
                for p in p_sigma_a_q(d, q) {
                    let b = omega_basepoint(d, &p);
                    for mu in grid.iter().filter(|m| open.contains(d, m)) {
                        let l: QVec = linalg::sub(&b, mu);
                        ups.item(u.contains(d, &l), || {
                            format!("Q = {}, P = {}, λ = {}", show_p(d, q), show_p(d, &p), show_vec(&l))
                        });
                    }
                }
                if w.len() == 1 {
                    let bad = agree_on(d, &u, &om, &grid);
                    triv.item(bad.is_none(), || {
                        format!("Q = {}, λ = {}", show_p(d, q), show_vec(bad.as_ref().unwrap()))
                    });
                }
            }
            (Err(e), _) | (_, Err(e)) => hull.item(false, || format!("Q = {}: {:?}", show_p(d, q), e)),
        }
    }
    out.push(hull.done());
    out.push(unc.done());
    out.push(ups.done());
    out.push(triv.done());

    let mut c = Check::new("conjugation-covariance", name);
    match &w {
        Ok(w) => {
            for v in w {
                let dv = match conjugate(d, v) {
                    Ok(x) => x,
                    Err(e) => {
                        c.item(false, || format!("v = {:?}: {:?}", v.word, e));
                        continue;
                    }
                };
                for q in ps {
                    let ok = conjugate_parabolic(d, v, q)
                        .and_then(|q0| act_set(d, v, &minus_set(d, &q0)))
                        .map(|rhs| rhs == minus_set(&dv, q))
                        .unwrap_or(false);
                    c.item(ok, || format!("v = {:?}, Q = {}", v.word, show_p(d, q)));
                }
            }
        }
        Err(e) => c.item(false, || format!("W: {:?}", e)),
    }
    out.push(c.done());
    out
}

/// `true` iff every certificate passed.
pub fn all_passed(certs: &[LemmaCertificate]) -> bool {
    certs.iter().all(LemmaCertificate::passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::fixtures;

    #[test]
    fn lemma_table_matches_output_order() {
        let d = fixtures::doubled_a1();
        let certs = run_suite(&d.to_raw(), "doubled_a1", &SuiteOptions::default());
        let ids: Vec<&str> = certs.iter().map(|c| c.lemma.as_str()).collect();
        let table: Vec<&str> = LEMMAS.iter().map(|(l, _)| *l).collect();
        assert_eq!(ids, table);
        assert!(all_passed(&certs), "{:?}", certs.iter().find(|c| !c.passed()));
    }

    #[test]
    fn every_fixture_passes() {
        for (name, d) in fixtures::all() {
            if name == "doubled_a2" {
                continue;
            }
            let certs = run_suite(&d.to_raw(), name, &SuiteOptions::default());
            for c in &certs {
                assert!(c.passed(), "{name}: {:?}", c);
            }
        }
    }

    #[test]
    fn corrupted_multiplicity_fails_validation() {
        let mut raw = fixtures::doubled_a1().to_raw();
        raw.mult[0] = 2;
        let certs = run_suite(&raw, "bad", &SuiteOptions::default());
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].status, Status::Fail);
        assert!(certs[0].counterexample.is_some());
    }

    #[test]
    fn empty_datum_is_vacuous() {
        let d = crate::root_datum::build_doubled(&fixtures::base_empty()).unwrap();
        let certs = run_suite(&d.to_raw(), "empty", &SuiteOptions::default());
        assert!(all_passed(&certs));
        let by = |id: &str| certs.iter().find(|c| c.lemma == id).unwrap().universe;
        assert_eq!(by("disjoint-union"), 1);
        assert_eq!(by("ordering-equivalence-abc"), 1);
        assert_eq!(by("sandwich"), 1);
    }

    #[test]
    fn deterministic() {
        let d = fixtures::split_a2().to_raw();
        assert_eq!(run_suite(&d, "x", &SuiteOptions::default()), run_suite(&d, "x", &SuiteOptions::default()));
    }
}
