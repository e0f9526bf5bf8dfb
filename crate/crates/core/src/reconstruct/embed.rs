use super::{certify_graded_iso, reconstruct, IsoReport, Reconstruction, UltrafilterTwist};
use crate::error::{Error, Result};
use crate::finring::Elem;
use crate::pairs::{check_lbh, classify_pair, PairClassification, StructuredAlgebra, Vector, Verdict};
use crate::steinberg::SteinbergAlgebra;
use crate::twist::{check_twist_morphism, from_cocycle, product_section, CocycleTwist, ExplicitTwist};
use crate::Config;

/// Bisections tried per arrow when checking independence of `X`.
const MAX_BISECTIONS: usize = 64;

/// `Φ: Σ → Σ⋆` and `Φ_G: G → G⋆`.
#[derive(Debug, Clone)]
pub struct PhiEmbedding {
    pub sigma_map: Vec<usize>,
    pub g_map: Vec<usize>,
    /// Same value for every homogeneous bisection tried.
    pub x_independent: Verdict,
    /// Graded groupoid homomorphisms commuting with `i` and `q`.
    pub morphism: Verdict,
    pub equivariant: bool,
    pub injective: bool,
    /// `Φ(Σ^(0)) = Σ⋆^(0)`.
    pub units_onto: bool,
    pub surjective: bool,
    /// First arrow of Σ⋆ outside the image.
    pub witness: Option<usize>,
    /// When surjective: `(Φ, Φ_G)` is an isomorphism of graded twists.
    pub isomorphism: Option<Verdict>,
}

/// `(1̃_X U_x)^↑` where `U_x` consists of the idempotents equal to 1 at the
/// unit `x` of G.
fn upclosure(
    alg: &StructuredAlgebra,
    uf: &UltrafilterTwist,
    ind: &[Elem],
    x: usize,
    ids: &[Vector],
) -> Result<usize> {
    let r = alg.ring();
    let ns = uf.semigroup();
    let mut set = Vec::new();
    for e in ids.iter().filter(|e| e[x] == r.one()) {
        let p = alg.mul(ind, e);
        let k = ns
            .index_of(&p)
            .ok_or_else(|| Error::TheoremViolation(format!("1̃_X e = {} is not a normaliser", alg.format_elem(&p))))?;
        set.push(k);
    }
    let min = set
        .iter()
        .copied()
        .find(|&m| set.iter().all(|&s| ns.leq(m, s)))
        .ok_or_else(|| Error::TheoremViolation("1̃_X U_x has no least element".into()))?;
    uf.arrow_generated_by(ns.element(min))
        .ok_or_else(|| Error::TheoremViolation(format!("↑({}) is not an ultrafilter", alg.format_elem(ns.element(min)))))
}

/// Computes `Φ(σ) = (1̃_X U_{s(σ)})^↑` with `X` the singleton `{σ}`, then
/// again with every homogeneous bisection through `σ` (up to a bound).
/// `st` must be the Steinberg algebra of `explicit.to_cocycle(section)` and
/// `alg` its structure-constant form.
pub fn phi_embedding(
    explicit: &ExplicitTwist,
    section: &[usize],
    st: &SteinbergAlgebra,
    alg: &StructuredAlgebra,
    uf: &UltrafilterTwist,
    cfg: &Config,
) -> Result<PhiEmbedding> {
    let (sig, g, r) = (explicit.sigma(), &**explicit.base(), &**explicit.ring());
    let ids = alg.idempotents_of_c(cfg.cap)?;
    let bisections = match g.all_homogeneous_bisections(cfg.cap) {
        Ok(b) => Some(b),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut sigma_map = Vec::with_capacity(sig.len());
    let mut x_independent = if bisections.is_some() {
        Verdict::Holds
    } else {
        Verdict::Undecided("cap".into())
    };
    for s in 0..sig.len() {
        let a = explicit.q(s);
        let t = explicit.scalar_between(s, section[a]).expect("same fiber");
        let x = g.src(a);
        let single = st.indicator(&[a], Some(&[t]))?;
        let phi = upclosure(alg, uf, &single.coeffs, x, &ids)?;
        sigma_map.push(phi);
        if let (Some(bs), true) = (&bisections, x_independent.holds()) {
            for (_, b) in bs.iter().filter(|(_, b)| b.contains(a)).take(MAX_BISECTIONS) {
                let scalars: Vec<Elem> = b.arrows().iter().map(|&c| if c == a { t } else { r.one() }).collect();
                let ind = st.indicator(b.arrows(), Some(&scalars))?;
                if upclosure(alg, uf, &ind.coeffs, x, &ids)? != phi {
                    let labels: Vec<&str> = b.arrows().iter().map(|&c| g.label(c)).collect();
                    x_independent = Verdict::fail(format!("{} with X = {{{}}}", sig.label(s), labels.join(", ")));
                    break;
                }
            }
        }
    }
    let tw = uf.twist();
    let g_map: Vec<usize> = (0..g.len()).map(|a| tw.q(sigma_map[section[a]])).collect();
    let morphism = match check_twist_morphism(explicit, tw, &sigma_map, &g_map, false) {
        Ok(()) => Verdict::Holds,
        Err(w) => Verdict::fail(w),
    };
    let equivariant = (0..sig.len()).all(|s| {
        r.units()
            .iter()
            .all(|&t| sigma_map[explicit.act(t, s)] == tw.act(t, sigma_map[s]))
    });
    let target = uf.sigma_star();
    let mut hit = vec![false; target.len()];
    let mut injective = true;
    for &p in &sigma_map {
        injective &= !hit[p];
        hit[p] = true;
    }
    let mut unit_images: Vec<usize> = sig.units().iter().map(|&u| sigma_map[u]).collect();
    unit_images.sort_unstable();
    let units_onto = unit_images == target.units();
    let witness = hit.iter().position(|&h| !h);
    let surjective = witness.is_none();
    let isomorphism = surjective.then(|| match check_twist_morphism(explicit, tw, &sigma_map, &g_map, true) {
        Ok(()) => Verdict::Holds,
        Err(w) => Verdict::fail(w),
    });
    Ok(PhiEmbedding {
        sigma_map,
        g_map,
        x_independent,
        morphism,
        equivariant,
        injective,
        units_onto,
        surjective,
        witness,
        isomorphism,
    })
}

/// The three conditions that must agree for a graded twist.
#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub classification: PairClassification,
    /// (a) gr-AQP.
    pub gr_aqp: Verdict,
    /// (b) LBH on `Σ_ε → G_ε`.
    pub lbh: Verdict,
    /// (c) Φ surjective.
    pub phi_surjective: bool,
    pub reconstruction: Reconstruction,
    pub phi: PhiEmbedding,
    /// Label of the first ultrafilter outside the image of Φ.
    pub witness: Option<String>,
    /// With LBH: each element of `N⋆(C)` has support a bisection of G.
    pub supports_are_bisections: Option<Verdict>,
    /// When gr-AQP holds.
    pub graded_iso: Option<IsoReport>,
    /// `Holds` when (a), (b), (c) are decided and equal.
    pub agreement: Verdict,
}

impl UniquenessReport {
    /// All three conditions hold and Φ is an isomorphism of graded twists.
    pub fn recovered(&self) -> bool {
        self.agreement.holds() && self.phi_surjective && self.phi.isomorphism.as_ref().is_some_and(Verdict::holds)
    }
}

/// Runs (a), (b) and (c) independently on the twist and its Steinberg pair.
/// A decided disagreement is a [`Error::TheoremViolation`].
pub fn certify_uniqueness(explicit: &ExplicitTwist, section: &[usize], cfg: &Config) -> Result<UniquenessReport> {
    let cocycle = explicit.to_cocycle(section)?;
    let st = SteinbergAlgebra::new(cocycle.clone());
    let alg = st.to_structured();
    let classification = classify_pair(&alg, cfg)?;
    let gr_aqp = classification.gr_aqp();
    let lbh = check_lbh(&cocycle, cfg)?.verdict;
    let reconstruction = reconstruct(&alg, &classification, cfg)?;
    let uf = &reconstruction.twist;
    let phi = phi_embedding(explicit, section, &st, &alg, uf, cfg)?;
    let witness = phi.witness.map(|w| uf.sigma_star().label(w).to_string());
    let supports_are_bisections = lbh.holds().then(|| {
        let g = st.groupoid();
        let list = classification.n_star.as_ref();
        match list.and_then(|l| {
            l.elements()
                .into_iter()
                .find(|n| !g.is_bisection(&(0..n.len()).filter(|&k| n[k] != 0).collect::<Vec<_>>()))
        }) {
            Some(n) => Verdict::fail(alg.format_elem(&n)),
            None if list.is_some() => Verdict::Holds,
            None => Verdict::Undecided("N⋆(C) not enumerated".into()),
        }
    });
    let graded_iso = if gr_aqp.holds() {
        Some(certify_graded_iso(&alg, &classification, uf, cfg)?)
    } else {
        None
    };
    let agreement = match (gr_aqp.as_bool(), lbh.as_bool()) {
        (Some(a), Some(b)) => {
            let c = phi.surjective;
            if a == b && b == c {
                Verdict::Holds
            } else {
                return Err(Error::TheoremViolation(format!(
                    "gr-AQP {a}, LBH on Σ_ε {b}, Φ surjective {c}"
                )));
            }
        }
        _ => Verdict::Undecided(format!("gr-AQP {gr_aqp}, LBH {lbh}")),
    };
    Ok(UniquenessReport {
        classification,
        gr_aqp,
        lbh,
        phi_surjective: phi.surjective,
        reconstruction,
        phi,
        witness,
        supports_are_bisections,
        graded_iso,
        agreement,
    })
}

/// [`certify_uniqueness`] for the twist `G × R^×` of a cocycle.
pub fn certify_uniqueness_cocycle(c: &CocycleTwist, cfg: &Config) -> Result<UniquenessReport> {
    certify_uniqueness(&from_cocycle(c), &product_section(c), cfg)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finring::make_modular_ring;
    use crate::groupoid::{Degree, FiniteGroup, GradedGroupoid, GradingGroup};

    fn z2_twist(p: u32, graded: bool, omega_xx: i64) -> CocycleTwist {
        let z2 = FiniteGroup::cyclic(2).relabel(vec!["e".into(), "x".into()]);
        let gamma = Arc::new(if graded {
            GradingGroup::Finite(FiniteGroup::cyclic(2))
        } else {
            GradingGroup::trivial()
        });
        let g = Arc::new(GradedGroupoid::group_groupoid(&z2, gamma, |a| Degree(if graded { a as i64 } else { 0 })).unwrap());
        let r = Arc::new(make_modular_ring(p).unwrap());
        let w = r.from_int(omega_xx);
        CocycleTwist::new(r, g, &[(1, 1, w)]).unwrap()
    }

    #[test]
    fn graded_group_ring_is_recovered() {
        let cfg = Config::default();
        for w in [1, -1, 2] {
            let rep = certify_uniqueness_cocycle(&z2_twist(5, true, w), &cfg).unwrap();
            assert!(rep.gr_aqp.holds(), "{}", rep.gr_aqp);
            assert!(rep.lbh.holds());
            assert!(rep.recovered());
            assert_eq!(rep.reconstruction.twist.sigma_star().len(), 8);
            assert_eq!(rep.reconstruction.twist.g_star().len(), 2);
            let iso = rep.graded_iso.as_ref().unwrap().verdict();
            assert!(iso.holds(), "{iso}");
            assert!(rep.phi.x_independent.holds());
            assert_eq!(rep.supports_are_bisections, Some(Verdict::Holds));
        }
    }

    #[test]
    fn trivially_graded_group_ring_fails_all_three() {
        let cfg = Config::default();
        let rep = certify_uniqueness_cocycle(&z2_twist(5, false, 1), &cfg).unwrap();
        assert!(rep.gr_aqp.fails());
        assert!(rep.lbh.fails());
        assert!(!rep.phi_surjective);
        assert!(rep.phi.injective && rep.phi.units_onto && rep.phi.equivariant);
        assert!(rep.phi.morphism.holds());
        assert_eq!(rep.witness.as_deref(), Some("↑(e + 2*x)"));
        assert_eq!(rep.reconstruction.twist.sigma_star().len(), 16);
        assert_eq!(rep.reconstruction.twist.g_star().len(), 4);
    }

    #[test]
    fn matrix_model_is_recovered() {
        let cfg = Config::default();
        for p in [2, 3] {
            let g = Arc::new(GradedGroupoid::pair_groupoid_linear(3));
            let r = Arc::new(make_modular_ring(p).unwrap());
            let rep = certify_uniqueness_cocycle(&CocycleTwist::trivial(r, g), &cfg).unwrap();
            assert!(rep.recovered());
            assert!(rep.graded_iso.unwrap().verdict().holds());
            assert!(rep.reconstruction.diagonal_cross_check.holds());
        }
    }
}
