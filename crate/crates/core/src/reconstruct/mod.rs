//! Ultrafilters on `N⋆(C)`, the twist `Σ⋆ → G⋆` they form, and the maps
//! comparing it with the algebra and with a twist it came from.

mod embed;
mod hat;

use std::sync::Arc;

pub use embed::{certify_uniqueness, certify_uniqueness_cocycle, phi_embedding, PhiEmbedding, UniquenessReport};
pub use hat::{certify_graded_iso, HatMap, IsoReport};

use crate::error::{check_cap, pow_count, Error, Result};
use crate::finring::Elem;
use crate::groupoid::{Degree, GradedGroupoid};
use crate::pairs::{
    LexVectors, NormaliserList, NormaliserSemigroup, PairClassification, StructuredAlgebra, UngradedReport, Vector,
    Verdict,
};
use crate::twist::{CocycleTwist, ExplicitTwist};
use crate::Config;

const NONE: usize = usize::MAX;

/// `↑n` for a minimal nonzero `n`, stored by its generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ultrafilter {
    /// Index into the normaliser semigroup.
    pub generator: usize,
    pub degree: Degree,
}

/// The ultrafilters `↑n`, `n` minimal nonzero, in generator order. Every
/// member of `↑n` must share the degree of `n`.
pub fn ultrafilters(ns: &NormaliserSemigroup) -> Result<Vec<Ultrafilter>> {
    let mut out = Vec::new();
    for n in ns.minimal_nonzero() {
        let degree = ns
            .degree(n)
            .ok_or_else(|| Error::Precondition("normaliser semigroup contains an inhomogeneous element".into()))?;
        if let Some(m) = ns.up_set(n).into_iter().find(|&m| ns.degree(m) != Some(degree)) {
            return Err(Error::TheoremViolation(format!(
                "ultrafilter ↑{n} mixes degrees (member {m})"
            )));
        }
        out.push(Ultrafilter { generator: n, degree });
    }
    Ok(out)
}

/// The twist `G⋆^(0) × R^× → Σ⋆ → G⋆` of ultrafilters.
#[derive(Debug, Clone)]
pub struct UltrafilterTwist {
    semigroup: NormaliserSemigroup,
    ultrafilters: Vec<Ultrafilter>,
    /// Semigroup index to Σ⋆ arrow, for minimal generators.
    arrow_of: Vec<usize>,
    twist: ExplicitTwist,
    /// G⋆ arrow to its representative in Σ⋆.
    reps: Vec<usize>,
}

fn broken(what: impl Into<String>) -> Error {
    Error::TheoremViolation(format!("ultrafilter groupoid: {}", what.into()))
}

/// Builds `Σ⋆` and `G⋆` with both gradings and validates the twist.
pub fn build_sigma_star(alg: &StructuredAlgebra, semigroup: NormaliserSemigroup) -> Result<UltrafilterTwist> {
    let ns = &semigroup;
    let ufs = ultrafilters(ns)?;
    let n = ufs.len();
    let mut arrow_of = vec![NONE; ns.len()];
    for (k, u) in ufs.iter().enumerate() {
        arrow_of[u.generator] = k;
    }
    let f = |i: usize| alg.format_elem(ns.element(i));
    let lift = |i: Option<usize>, what: &str| -> Result<usize> {
        i.map(|i| arrow_of[i])
            .filter(|&a| a != NONE)
            .ok_or_else(|| broken(format!("{what} is not an ultrafilter")))
    };
    let (mut src, mut rng) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for u in &ufs {
        let g = u.generator;
        let d = ns.dagger(g);
        src.push(lift(ns.product(d, g), &format!("s(↑({}))", f(g)))?);
        rng.push(lift(ns.product(g, d), &format!("r(↑({}))", f(g)))?);
    }
    let units: Vec<usize> = (0..n).filter(|&k| ns.is_idempotent(ufs[k].generator)).collect();
    let mut compose = vec![NONE; n * n];
    for a in 0..n {
        for b in 0..n {
            if src[a] == rng[b] {
                let p = ns.product(ufs[a].generator, ufs[b].generator);
                compose[a * n + b] = lift(p, &format!("↑({})·↑({})", f(ufs[a].generator), f(ufs[b].generator)))?;
            }
        }
    }
    let ring = alg.ring();
    let units_r = ring.units();
    // t·U = ↑(t u)
    let mut scaled = vec![NONE; n * units_r.len()];
    for (k, u) in ufs.iter().enumerate() {
        for (j, &t) in units_r.iter().enumerate() {
            let v = alg.scale(t, ns.element(u.generator));
            scaled[k * units_r.len() + j] = lift(ns.index_of(&v), &format!("{}·↑({})", ring.label(t), f(u.generator)))?;
        }
    }
    let mut orbit = vec![NONE; n];
    let mut reps = Vec::new();
    for k in 0..n {
        if orbit[k] != NONE {
            continue;
        }
        let members: Vec<usize> = (0..units_r.len()).map(|j| scaled[k * units_r.len() + j]).collect();
        let rep = members
            .iter()
            .copied()
            .find(|m| units.contains(m))
            .unwrap_or_else(|| *members.iter().min().expect("R^× is nonempty"));
        for &m in &members {
            orbit[m] = reps.len();
        }
        reps.push(rep);
    }
    let sigma_labels: Vec<String> = ufs.iter().map(|u| format!("↑({})", f(u.generator))).collect();
    let gamma = alg.gamma().clone();
    let sigma = GradedGroupoid::from_fn(
        sigma_labels.clone(),
        units.clone(),
        src.clone(),
        rng.clone(),
        |a, b| (compose[a * n + b] != NONE).then(|| compose[a * n + b]),
        ufs.iter().map(|u| u.degree).collect(),
        gamma.clone(),
    )
    .map_err(|e| broken(format!("Σ⋆ fails the groupoid axioms: {e}")))?;
    let m = reps.len();
    let mut g_compose = vec![NONE; m * m];
    for x in 0..m {
        for y in 0..m {
            let (a, b) = (reps[x], reps[y]);
            if orbit[src[a]] != orbit[rng[b]] {
                continue;
            }
            // the unit in an orbit is unique, so a and b compose
            let ab = compose[a * n + b];
            if ab == NONE {
                return Err(broken("representatives of composable classes do not compose"));
            }
            g_compose[x * m + y] = orbit[ab];
        }
    }
    let g_units: Vec<usize> = {
        let mut u: Vec<usize> = units.iter().map(|&k| orbit[k]).collect();
        u.sort_unstable();
        u
    };
    let g_star = GradedGroupoid::from_fn(
        reps.iter().map(|&k| format!("[{}]", f(ufs[k].generator))).collect(),
        g_units,
        reps.iter().map(|&k| orbit[src[k]]).collect(),
        reps.iter().map(|&k| orbit[rng[k]]).collect(),
        |x, y| (g_compose[x * m + y] != NONE).then(|| g_compose[x * m + y]),
        reps.iter().map(|&k| ufs[k].degree).collect(),
        gamma,
    )
    .map_err(|e| broken(format!("G⋆ fails the groupoid axioms: {e}")))?;
    let mut i_entries = Vec::new();
    for &u in &units {
        for (j, &t) in units_r.iter().enumerate() {
            i_entries.push((orbit[u], t, scaled[u * units_r.len() + j]));
        }
    }
    let twist = ExplicitTwist::validate(ring.clone(), sigma, Arc::new(g_star), &i_entries, orbit)
        .map_err(|e| broken(format!("Σ⋆ → G⋆ is not a graded twist: {e}")))?;
    Ok(UltrafilterTwist {
        semigroup,
        ultrafilters: ufs,
        arrow_of,
        twist,
        reps,
    })
}

impl UltrafilterTwist {
    pub fn semigroup(&self) -> &NormaliserSemigroup {
        &self.semigroup
    }

    pub fn ultrafilters(&self) -> &[Ultrafilter] {
        &self.ultrafilters
    }

    pub fn twist(&self) -> &ExplicitTwist {
        &self.twist
    }

    pub fn sigma_star(&self) -> &GradedGroupoid {
        self.twist.sigma()
    }

    pub fn g_star(&self) -> &Arc<GradedGroupoid> {
        self.twist.base()
    }

    /// The generator of ultrafilter `u`.
    pub fn generator(&self, u: usize) -> &Vector {
        self.semigroup.element(self.ultrafilters[u].generator)
    }

    /// The ultrafilter generated by a minimal normaliser.
    pub fn arrow_generated_by(&self, v: &[Elem]) -> Option<usize> {
        let i = self.semigroup.index_of(v)?;
        (self.arrow_of[i] != NONE).then_some(self.arrow_of[i])
    }

    /// Members of ultrafilter `u`, as semigroup indices.
    pub fn members(&self, u: usize) -> Vec<usize> {
        self.semigroup.up_set(self.ultrafilters[u].generator)
    }

    /// `V_n = {U : n ∈ U}` for a semigroup index `n`.
    pub fn v_set(&self, n: usize) -> Vec<usize> {
        (0..self.ultrafilters.len())
            .filter(|&u| self.semigroup.leq(self.ultrafilters[u].generator, n))
            .collect()
    }

    /// The section of `q'` picking orbit representatives.
    pub fn section(&self) -> &[usize] {
        &self.reps
    }

    /// The cocycle of [`Self::section`].
    pub fn cocycle(&self) -> Result<CocycleTwist> {
        self.twist.to_cocycle(&self.reps)
    }

    /// `V_n V_m = V_{nm}` and `V_n⁻¹ = V_{n†}` for all `n, m`.
    pub fn check_basis_identities(&self, alg: &StructuredAlgebra) -> Verdict {
        let ns = &self.semigroup;
        let s = self.sigma_star();
        let f = |i: usize| alg.format_elem(ns.element(i));
        let v: Vec<Vec<usize>> = (0..ns.len()).map(|i| self.v_set(i)).collect();
        for i in 0..ns.len() {
            let mut inv: Vec<usize> = v[i].iter().map(|&u| s.inv(u)).collect();
            inv.sort_unstable();
            if inv != v[ns.dagger(i)] {
                return Verdict::fail(format!("V_{{{}}}⁻¹ ≠ V_{{n†}}", f(i)));
            }
            for j in 0..ns.len() {
                let Some(ij) = ns.product(i, j) else {
                    return Verdict::fail(format!("{} · {} leaves the semigroup", f(i), f(j)));
                };
                let mut prod: Vec<usize> = v[i]
                    .iter()
                    .flat_map(|&a| v[j].iter().filter_map(move |&b| s.compose(a, b)))
                    .collect();
                prod.sort_unstable();
                prod.dedup();
                if prod != v[ij] {
                    return Verdict::fail(format!("V_{{{}}} V_{{{}}} ≠ V_{{nm}}", f(i), f(j)));
                }
            }
        }
        Verdict::Holds
    }

    /// `φ(c)` on the unit ultrafilters, in unit order: the scalar `t` with
    /// `f c = t f` for the generator `f` of each unit.
    pub fn phi(&self, alg: &StructuredAlgebra, c: &[Elem]) -> Result<Vec<Elem>> {
        let r = alg.ring();
        let mut out = Vec::new();
        for &u in self.sigma_star().units() {
            let f = self.generator(u);
            let fc = alg.mul(f, c);
            let t = r
                .elements()
                .find(|&t| alg.scale(t, f) == fc)
                .ok_or_else(|| Error::TheoremViolation(format!("φ is undefined at {}", alg.format_elem(c))))?;
            out.push(t);
        }
        Ok(out)
    }

    /// `φ(e) = 1_{V_e}` on `I(C)`; `φ` injective and multiplicative on `C`.
    pub fn check_phi(&self, alg: &StructuredAlgebra, idempotents: &[Vector], cap: u64) -> Result<Verdict> {
        let r = alg.ring();
        let units = self.sigma_star().units();
        for e in idempotents {
            let want: Vec<Elem> = units
                .iter()
                .map(|&u| {
                    let f = self.generator(u);
                    if alg.mul(f, e) == *f {
                        r.one()
                    } else {
                        r.zero()
                    }
                })
                .collect();
            if self.phi(alg, e)? != want {
                return Ok(Verdict::fail(format!("φ({}) ≠ 1_V", alg.format_elem(e))));
            }
        }
        let k = alg.c_basis().len();
        let total = pow_count(r.size(), k);
        check_cap("elements of C", total, cap)?;
        let elems: Vec<Vector> = LexVectors::new(r.size(), k)
            .map(|co| alg.embed(alg.c_basis(), &co))
            .collect();
        let images: Vec<Vec<Elem>> = elems.iter().map(|c| self.phi(alg, c)).collect::<Result<_>>()?;
        for (c, im) in elems.iter().zip(&images).skip(1) {
            if im.iter().all(|&x| x == r.zero()) {
                return Ok(Verdict::fail(format!("φ({}) = 0", alg.format_elem(c))));
            }
        }
        let pairs_ok = total.saturating_mul(total) <= cap as u128;
        let picks: Vec<usize> = if pairs_ok {
            (0..elems.len()).collect()
        } else {
            (0..k).map(|i| elems.iter().position(|c| *c == alg.basis_vec(alg.c_basis()[i])).expect("basis")).collect()
        };
        for &a in &picks {
            for &b in &picks {
                let lhs = self.phi(alg, &alg.mul(&elems[a], &elems[b]))?;
                let rhs: Vec<Elem> = images[a].iter().zip(&images[b]).map(|(&x, &y)| r.mul(x, y)).collect();
                if lhs != rhs {
                    return Ok(Verdict::fail(format!(
                        "φ({} {}) ≠ φ·φ",
                        alg.format_elem(&elems[a]),
                        alg.format_elem(&elems[b])
                    )));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// The arrows of degree `ε`.
    fn epsilon_arrows(&self) -> Vec<usize> {
        let eps = self.sigma_star().gamma().identity();
        (0..self.ultrafilters.len()).filter(|&u| self.ultrafilters[u].degree == eps).collect()
    }

    /// Matches `c_{Σ⋆}⁻¹(ε)` and `c_{G⋆}⁻¹(ε)` against the reconstruction of
    /// `(A_ε, C)`, whose basis sits at `positions` in `alg`.
    pub fn check_epsilon_fiber(
        &self,
        eps: &UltrafilterTwist,
        positions: &[usize],
    ) -> Verdict {
        let mine = self.epsilon_arrows();
        if mine.len() != eps.ultrafilters.len() {
            return Verdict::fail(format!(
                "{} ultrafilters of degree ε against {} from (A_ε, C)",
                mine.len(),
                eps.ultrafilters.len()
            ));
        }
        let mut to_eps = vec![NONE; self.ultrafilters.len()];
        for &u in &mine {
            let g = self.generator(u);
            let restricted: Vector = positions.iter().map(|&p| g[p]).collect();
            match eps.arrow_generated_by(&restricted) {
                Some(w) => to_eps[u] = w,
                None => return Verdict::fail(format!("{} has no counterpart", self.sigma_star().label(u))),
            }
        }
        let (s, se) = (self.sigma_star(), eps.sigma_star());
        for &a in &mine {
            for &b in &mine {
                let want = s.compose(a, b).map(|ab| to_eps[ab]);
                if se.compose(to_eps[a], to_eps[b]) != want {
                    return Verdict::fail(format!("composition differs at ({}, {})", s.label(a), s.label(b)));
                }
                if (self.twist.q(a) == self.twist.q(b)) != (eps.twist.q(to_eps[a]) == eps.twist.q(to_eps[b])) {
                    return Verdict::fail(format!("orbits differ at ({}, {})", s.label(a), s.label(b)));
                }
            }
        }
        Verdict::Holds
    }
}

/// Σ⋆ / G⋆ together with the checks run on them.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub twist: UltrafilterTwist,
    pub basis_identities: Verdict,
    pub phi: Verdict,
    /// Against the reconstruction of `(A_ε, C)`; `None` when ungraded.
    pub epsilon_fiber: Option<Verdict>,
    pub epsilon_principal: bool,
    pub epsilon_effective: bool,
    /// gr-ADP ⇔ principal and gr-ACP ⇔ effective on `c_{G⋆}⁻¹(ε)`.
    pub diagonal_cross_check: Verdict,
}

impl Reconstruction {
    pub fn hausdorff(&self) -> &'static str {
        "finite discrete, automatic"
    }

    /// `c_{G⋆}⁻¹(ε)` as a groupoid.
    pub fn epsilon_groupoid(&self) -> Result<GradedGroupoid> {
        let g = self.twist.g_star();
        Ok(g.restrict_to_degree(g.gamma().identity())?.0)
    }
}

/// The prerequisites reconstruction needs, as failures.
fn prerequisites(base: &UngradedReport, spans: &Verdict) -> Vec<String> {
    let mut out = Vec::new();
    for (name, v) in [
        ("WT", &base.wt),
        ("local units", &base.local_units),
        ("C = span I(C)", &base.c_spanned_by_idempotents),
        ("A = span N⋆(C)", spans),
    ] {
        if !v.holds() {
            out.push(format!("{name}: {v}"));
        }
    }
    out
}

fn build_checked(alg: &StructuredAlgebra, list: &NormaliserList, ids: &[Vector], cfg: &Config) -> Result<(UltrafilterTwist, Verdict, Verdict)> {
    let ns = NormaliserSemigroup::build(alg, list, cfg.exec)?;
    let uf = build_sigma_star(alg, ns)?;
    let basis = uf.check_basis_identities(alg);
    let phi = match uf.check_phi(alg, ids, cfg.cap) {
        Ok(v) => v,
        Err(Error::CapExceeded { .. }) => Verdict::Undecided("cap".into()),
        Err(e) => return Err(e),
    };
    Ok((uf, basis, phi))
}

/// Reconstructs `Σ⋆ → G⋆` from `N⋆(C)`. Refuses with the failed
/// prerequisites listed when WT, local units or the spanning conditions fail.
pub fn reconstruct(alg: &StructuredAlgebra, cl: &PairClassification, cfg: &Config) -> Result<Reconstruction> {
    let failed = prerequisites(&cl.epsilon, &cl.n_star_spans);
    if !failed.is_empty() {
        return Err(Error::Precondition(format!("reconstruction needs {}", failed.join("; "))));
    }
    let list = cl.n_star.as_ref().expect("N⋆(C) spans A");
    let ids = cl.epsilon.idempotents.as_ref().expect("local units were decided");
    let eps = alg.gamma().identity();
    let positions = alg.fiber(eps);
    let ids_full: Vec<Vector> = ids.iter().map(|e| alg.embed(&positions, e)).collect();
    let (twist, basis_identities, phi) = build_checked(alg, list, &ids_full, cfg)?;
    let epsilon_fiber = if alg.is_trivially_graded() {
        None
    } else {
        let eps_alg = alg.epsilon_part();
        let eps_list = cl
            .epsilon
            .normalisers
            .as_ref()
            .ok_or_else(|| Error::Precondition("N(C) in A_ε was not enumerated".into()))?;
        let (eps_twist, _, _) = build_checked(&eps_alg, eps_list, ids, cfg)?;
        Some(twist.check_epsilon_fiber(&eps_twist, &positions))
    };
    let g_eps = twist.g_star().restrict_to_degree(eps)?.0;
    let (principal, effective) = (g_eps.is_principal(), g_eps.is_effective());
    let diagonal_cross_check = cross_check(cl, principal, effective);
    Ok(Reconstruction {
        twist,
        basis_identities,
        phi,
        epsilon_fiber,
        epsilon_principal: principal,
        epsilon_effective: effective,
        diagonal_cross_check,
    })
}

fn cross_check(cl: &PairClassification, principal: bool, effective: bool) -> Verdict {
    match cl.gr_aqp().as_bool() {
        Some(true) => {}
        Some(false) => return Verdict::Undecided("not gr-AQP".into()),
        None => return Verdict::Undecided("gr-AQP undecided".into()),
    }
    let mut bad = Vec::new();
    match cl.gr_adp().as_bool() {
        Some(v) if v != principal => bad.push(format!("gr-ADP {v} but principal {principal}")),
        None => return Verdict::Undecided("gr-ADP undecided".into()),
        _ => {}
    }
    match cl.gr_acp().as_bool() {
        Some(v) if v != effective => bad.push(format!("gr-ACP {v} but effective {effective}")),
        None => return Verdict::Undecided("gr-ACP undecided".into()),
        _ => {}
    }
    if bad.is_empty() {
        Verdict::Holds
    } else {
        Verdict::Fails(bad)
    }
}

/// The ungraded construction from all of `N(C)`, with `A` ungraded.
pub fn reconstruct_ungraded(alg: &StructuredAlgebra, cl: &PairClassification, cfg: &Config) -> Result<Reconstruction> {
    let flat = alg.forget_grading();
    let u = &cl.ungraded;
    let failed = prerequisites(u, &u.a_spanned_by_normalisers);
    if !failed.is_empty() {
        return Err(Error::Precondition(format!("reconstruction needs {}", failed.join("; "))));
    }
    let list = u.normalisers.as_ref().expect("N(C) spans A");
    let ids = u.idempotents.as_ref().expect("local units were decided");
    let (twist, basis_identities, phi) = build_checked(&flat, list, ids, cfg)?;
    let g = twist.g_star();
    let (principal, effective) = (g.is_principal(), g.is_effective());
    Ok(Reconstruction {
        twist,
        basis_identities,
        phi,
        epsilon_fiber: None,
        epsilon_principal: principal,
        epsilon_effective: effective,
        diagonal_cross_check: Verdict::Undecided("ungraded construction".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{classify_pair, tests::m2};

    #[test]
    fn m2_sizes() {
        let cfg = Config::default();
        for (p, sigma, g) in [(2, 4, 4), (3, 8, 4)] {
            let alg = m2(p, true);
            let cl = classify_pair(&alg, &cfg).unwrap();
            let rec = reconstruct(&alg, &cl, &cfg).unwrap();
            assert_eq!(rec.twist.sigma_star().len(), sigma);
            assert_eq!(rec.twist.g_star().len(), g);
            assert!(rec.basis_identities.holds());
            assert!(rec.phi.holds(), "{}", rec.phi);
            assert_eq!(rec.epsilon_fiber, Some(Verdict::Holds));
            assert!(rec.epsilon_principal);
            assert!(rec.diagonal_cross_check.holds());
        }
    }

    #[test]
    fn m2_f2_labels() {
        let cfg = Config::default();
        let alg = m2(2, true);
        let cl = classify_pair(&alg, &cfg).unwrap();
        let rec = reconstruct(&alg, &cl, &cfg).unwrap();
        let g = rec.twist.g_star();
        assert_eq!(g.labels(), ["[E22]", "[E21]", "[E12]", "[E11]"]);
        let e12 = g.by_label("[E12]").unwrap();
        assert_eq!(g.degree(e12), Degree(1));
        assert_eq!(g.label(g.src(e12)), "[E22]");
    }
}
