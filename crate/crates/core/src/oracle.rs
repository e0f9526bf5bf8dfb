//! Brute-force reference implementations, written from the definitions and
//! kept deliberately naive. Used by the tests and by `--oracle`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_cap, pow_count, Result};
use crate::finring::{Elem, FiniteRing};
use crate::instance::TwistInstance;
use crate::pairs::{structural_normalisers, LexVectors, NormaliserList, StructuredAlgebra, Vector, Verdict};
use crate::reconstruct::UltrafilterTwist;
use crate::steinberg::SteinbergElement;
use crate::twist::ExplicitTwist;
use crate::Config;

pub const FILTER_ORACLE_MAX: usize = 24;
pub const NORMALISER_ORACLE_MAX: u128 = 10_000;

/// `{t : ∃s, ts = 1}`.
pub fn oracle_units(r: &FiniteRing) -> Vec<Elem> {
    r.elements()
        .filter(|&t| r.elements().any(|s| r.mul(t, s) == r.one()))
        .collect()
}

/// Literal DT2 over a discrete base: for each `α`, with `B = {α}` and any
/// `S(α) ∈ q⁻¹(α)`, `t ↦ i(r(α), t) S(α)` is a bijection `R^× → q⁻¹(α)`.
pub fn oracle_dt2(tw: &ExplicitTwist) -> std::result::Result<(), String> {
    let (g, s, r) = (&**tw.base(), tw.sigma(), &**tw.ring());
    for a in 0..g.len() {
        let fiber: Vec<usize> = (0..s.len()).filter(|&x| tw.q(x) == a).collect();
        let Some(&lift) = fiber.first() else {
            return Err(format!("q is not onto {}", g.label(a)));
        };
        let mut image: Vec<usize> = Vec::new();
        for &t in r.units() {
            match s.compose(tw.i(g.rng(a), t), lift) {
                Some(x) => image.push(x),
                None => return Err(format!("i(r({}), {}) does not compose", g.label(a), r.label(t))),
            }
        }
        image.sort_unstable();
        let n = image.len();
        image.dedup();
        if image.len() != n || image != fiber {
            return Err(format!("R^× → q⁻¹({}) is not a bijection", g.label(a)));
        }
    }
    Ok(())
}

fn partner_of(alg: &StructuredAlgebra, elems: &[Vector], n: &Vector) -> Option<Vector> {
    elems.iter().find(|m| is_pair(alg, n, m)).cloned()
}

fn is_pair(alg: &StructuredAlgebra, n: &[Elem], m: &[Elem]) -> bool {
    if alg.mul(&alg.mul(n, m), n) != n || alg.mul(&alg.mul(m, n), m) != m {
        return false;
    }
    alg.c_basis().iter().all(|&c| {
        let c = alg.basis_vec(c);
        alg.in_c(&alg.mul(&alg.mul(m, &c), n)) && alg.in_c(&alg.mul(&alg.mul(n, &c), m))
    })
}

/// All filters on a finite normaliser set (given as vectors, `0` included),
/// and the ultrafilters among them. Filters are sets of indices into `elems`.
#[derive(Debug, Clone)]
pub struct OracleFilters {
    pub filters: Vec<Vec<usize>>,
    pub ultrafilters: Vec<Vec<usize>>,
}

/// Every subset not containing 0 that is up-closed and downward directed
/// under `n ≤ m ⟺ n = m n† n`. At most 24 elements.
pub fn oracle_filters(alg: &StructuredAlgebra, elems: &[Vector]) -> Result<OracleFilters> {
    check_cap("filter oracle elements", elems.len() as u128, FILTER_ORACLE_MAX as u64)?;
    let nonzero: Vec<usize> = (0..elems.len()).filter(|&i| !alg.is_zero(&elems[i])).collect();
    let k = nonzero.len();
    let daggers: Vec<Vector> = nonzero
        .iter()
        .map(|&i| partner_of(alg, elems, &elems[i]).expect("every element is a normaliser"))
        .collect();
    let leq = |a: usize, b: usize| {
        let (n, m) = (&elems[nonzero[a]], &elems[nonzero[b]]);
        alg.mul(m, &alg.mul(&daggers[a], n)) == *n
    };
    let mut up = vec![0u32; k];
    let mut down = vec![0u32; k];
    for a in 0..k {
        for b in 0..k {
            if leq(a, b) {
                up[a] |= 1 << b;
                down[b] |= 1 << a;
            }
        }
    }
    let mut filters = Vec::new();
    for mask in 1u32..(1u32 << k) {
        let bits = || (0..k).filter(move |&a| mask >> a & 1 == 1);
        if bits().any(|a| up[a] & !mask != 0) {
            continue;
        }
        let directed = bits().all(|a| bits().all(|b| down[a] & down[b] & mask != 0));
        if directed {
            filters.push(mask);
        }
    }
    let ultra: Vec<u32> = filters
        .iter()
        .copied()
        .filter(|&f| !filters.iter().any(|&h| h != f && h & f == f))
        .collect();
    let to_sets = |ms: &[u32]| -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = ms
            .iter()
            .map(|&m| (0..k).filter(|&a| m >> a & 1 == 1).map(|a| nonzero[a]).collect())
            .collect();
        v.sort();
        v
    };
    Ok(OracleFilters {
        filters: to_sets(&filters),
        ultrafilters: to_sets(&ultra),
    })
}

/// `{mn : m ∈ U, n ∈ V}^↑` among `elems`, or `None` if some product is 0.
pub fn oracle_filter_product(alg: &StructuredAlgebra, elems: &[Vector], u: &[usize], v: &[usize]) -> Option<Vec<usize>> {
    let mut prods = Vec::new();
    for &m in u {
        for &n in v {
            let p = alg.mul(&elems[m], &elems[n]);
            if alg.is_zero(&p) {
                return None;
            }
            prods.push(p);
        }
    }
    let mut out: Vec<usize> = (0..elems.len())
        .filter(|&x| {
            prods.iter().any(|p| {
                let d = partner_of(alg, elems, p).expect("products of normalisers are normalisers");
                alg.mul(&elems[x], &alg.mul(&d, p)) == *p
            })
        })
        .collect();
    out.sort_unstable();
    Some(out)
}

/// A random normalized section of `q`.
pub fn random_section(tw: &ExplicitTwist, rng: &mut impl Rng) -> Vec<usize> {
    let g = tw.base();
    (0..g.len())
        .map(|a| {
            if g.is_unit(a) {
                tw.i(a, tw.ring().one())
            } else {
                *tw.fiber_over(a).choose(rng).expect("fibers are nonempty")
            }
        })
        .collect()
}

/// `(f*g)(σ) = Σ_{α ∈ G^{r(σ)} ∩ supp f} f(S(α)) g(S(α)⁻¹σ)` for functions on
/// Σ, evaluated at every `σ`.
pub fn oracle_convolution(tw: &ExplicitTwist, section: &[usize], f: &[Elem], h: &[Elem]) -> Vec<Elem> {
    let (s, g, r) = (tw.sigma(), &**tw.base(), &**tw.ring());
    (0..s.len())
        .map(|sigma| {
            let x = g.rng(tw.q(sigma));
            let mut acc = r.zero();
            for a in (0..g.len()).filter(|&a| g.rng(a) == x) {
                let fa = f[section[a]];
                if fa == r.zero() {
                    continue;
                }
                let rest = s
                    .compose(s.inv(section[a]), sigma)
                    .expect("S(α)⁻¹ and σ share a range");
                acc = r.add(acc, r.mul(fa, h[rest]));
            }
            acc
        })
        .collect()
}

/// Coefficients `h(S(α))`.
pub fn collapse(section: &[usize], h: &[Elem]) -> Vec<Elem> {
    section.iter().map(|&s| h[s]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleNormaliser {
    pub n: Vector,
    /// Every `m` satisfying the three conditions, in lexicographic order.
    pub partners: Vec<Vector>,
}

/// For every `n`, all `m` with `mnm = m`, `nmn = n`, `mCn ∪ nCm ⊆ C`, by a
/// scan over all of `A`. With `homogeneous_only`, `n` ranges over
/// homogeneous vectors.
pub fn oracle_normalisers(alg: &StructuredAlgebra, homogeneous_only: bool) -> Result<Vec<OracleNormaliser>> {
    let q = alg.ring().size();
    let total = pow_count(q, alg.dim());
    check_cap("normaliser oracle candidates", total, NORMALISER_ORACLE_MAX as u64)?;
    let all: Vec<Vector> = LexVectors::new(q, alg.dim()).collect();
    let mut out = Vec::new();
    for n in &all {
        if homogeneous_only && !alg.is_homogeneous(n) {
            continue;
        }
        let partners: Vec<Vector> = all.iter().filter(|m| is_pair(alg, n, m)).cloned().collect();
        if !partners.is_empty() {
            out.push(OracleNormaliser { n: n.clone(), partners });
        }
    }
    Ok(out)
}

/// `ultrafilters` and the `↑(uv)` composition against the literal filter
/// enumeration and `{mn}^↑`.
pub fn agree_filters(alg: &StructuredAlgebra, uf: &UltrafilterTwist) -> Result<Verdict> {
    let ns = uf.semigroup();
    if ns.len() > FILTER_ORACLE_MAX {
        return Ok(Verdict::Undecided(format!("{} elements exceed {FILTER_ORACLE_MAX}", ns.len())));
    }
    let elems = ns.elements();
    let lit = oracle_filters(alg, elems)?;
    let mut mine: Vec<Vec<usize>> = (0..uf.ultrafilters().len()).map(|u| uf.members(u)).collect();
    mine.sort();
    if mine != lit.ultrafilters {
        return Ok(Verdict::fail(format!(
            "{} ultrafilters against {} by enumeration",
            mine.len(),
            lit.ultrafilters.len()
        )));
    }
    let s = uf.sigma_star();
    for a in 0..s.len() {
        for b in 0..s.len() {
            let lit = oracle_filter_product(alg, elems, &uf.members(a), &uf.members(b));
            let main = s.compose(a, b).map(|ab| uf.members(ab));
            if lit != main {
                return Ok(Verdict::fail(format!("product ({}, {})", s.label(a), s.label(b))));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// `convolve` against the literal sum, at the instance section and at two
/// random sections.
pub fn agree_convolution(t: &TwistInstance, seed: u64) -> Verdict {
    let st = t.steinberg();
    let tw = &t.explicit;
    let g = st.groupoid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sections = [t.section.clone(), random_section(tw, &mut rng), random_section(tw, &mut rng)];
    let ex = |f: &SteinbergElement| st.expand(f, tw, &t.section);
    for a in 0..g.len() {
        let fa = ex(&st.delta(a));
        for b in 0..g.len() {
            let fb = ex(&st.delta(b));
            let main = ex(&st.convolve(&st.delta(a), &st.delta(b)));
            for (k, sec) in sections.iter().enumerate() {
                if oracle_convolution(tw, sec, &fa, &fb) != main {
                    return Verdict::fail(format!("δ_{} * δ_{} (section {k})", g.label(a), g.label(b)));
                }
            }
        }
    }
    Verdict::Holds
}

/// An enumerated normaliser list against the Eq. (2.1) scan, partners
/// included.
pub fn agree_normalisers(alg: &StructuredAlgebra, list: &NormaliserList) -> Result<Verdict> {
    let q = alg.ring().size();
    if pow_count(q, alg.dim()) > NORMALISER_ORACLE_MAX {
        return Ok(Verdict::Undecided(format!("|R|^dim exceeds {NORMALISER_ORACLE_MAX}")));
    }
    let lit = oracle_normalisers(alg, list.homogeneous)?;
    if lit.len() != list.entries.len() {
        return Ok(Verdict::fail(format!("{} normalisers against {} by scan", list.entries.len(), lit.len())));
    }
    for (o, (n, partners)) in lit.iter().zip(&list.entries) {
        if o.n != *n || o.partners != *partners {
            return Ok(Verdict::fail(alg.format_elem(n)));
        }
    }
    Ok(Verdict::Holds)
}

/// The structural list is the bisection-supported part of `N⋆(C)`; with the
/// local bisection hypothesis that is all of it.
pub fn agree_structural(t: &TwistInstance, cfg: &Config) -> Result<Verdict> {
    let st = t.steinberg();
    let alg = st.to_structured();
    let g = st.groupoid();
    if pow_count(alg.ring().size(), alg.dim()) > NORMALISER_ORACLE_MAX {
        return Ok(Verdict::Undecided(format!("|R|^|G| exceeds {NORMALISER_ORACLE_MAX}")));
    }
    let structural = structural_normalisers(&st, cfg)?;
    let lit = oracle_normalisers(&alg, true)?;
    let supported: Vec<&OracleNormaliser> = lit
        .iter()
        .filter(|o| g.is_bisection(&(0..o.n.len()).filter(|&k| o.n[k] != 0).collect::<Vec<_>>()))
        .collect();
    if supported.len() != structural.entries.len() {
        return Ok(Verdict::fail(format!(
            "{} structural normalisers against {} bisection-supported",
            structural.entries.len(),
            supported.len()
        )));
    }
    for (o, (n, m)) in supported.iter().zip(&structural.entries) {
        if o.n != *n || !o.partners.contains(&m[0]) {
            return Ok(Verdict::fail(alg.format_elem(n)));
        }
    }
    Ok(Verdict::Holds)
}
