use super::UltrafilterTwist;
use crate::error::{Error, Result};
use crate::finring::linalg::{is_bijective, RMatrix, Span};
use crate::finring::Elem;
use crate::pairs::{PairClassification, StructuredAlgebra, Verdict};
use crate::steinberg::{SteinbergAlgebra, SteinbergElement};
use crate::Config;

/// `a ↦ â` from `A` into `A_R(G⋆; Σ⋆)`.
pub struct HatMap<'a> {
    alg: &'a StructuredAlgebra,
    uf: &'a UltrafilterTwist,
    target: SteinbergAlgebra,
}

impl<'a> HatMap<'a> {
    pub fn new(alg: &'a StructuredAlgebra, uf: &'a UltrafilterTwist) -> Result<Self> {
        Ok(Self {
            alg,
            uf,
            target: SteinbergAlgebra::new(uf.cocycle()?),
        })
    }

    /// `A_R(G⋆; Σ⋆)`, coordinates taken at the orbit representatives.
    pub fn target(&self) -> &SteinbergAlgebra {
        &self.target
    }

    /// `φ(c)(x)` at a unit ultrafilter `x`.
    fn phi_at(&self, c: &[Elem], x: usize) -> Result<Elem> {
        let (alg, r) = (self.alg, self.alg.ring());
        let f = self.uf.generator(x);
        let fc = alg.mul(f, c);
        r.elements()
            .find(|&t| alg.scale(t, f) == fc)
            .ok_or_else(|| Error::TheoremViolation(format!("φ is undefined at {}", alg.format_elem(c))))
    }

    /// `â(U) = φ(P(n† a_α))(s(U))` with `α = c(U)`, for every `n ∈ U`; the
    /// values must agree.
    pub fn on_sigma(&self, a: &[Elem]) -> Result<Vec<Elem>> {
        let (alg, uf) = (self.alg, self.uf);
        let ns = uf.semigroup();
        let s = uf.sigma_star();
        let comps = alg.components(a);
        let mut out = Vec::with_capacity(s.len());
        for (u, filter) in uf.ultrafilters().iter().enumerate() {
            let Some(a_alpha) = comps.get(&filter.degree) else {
                out.push(alg.ring().zero());
                continue;
            };
            let mut value = None;
            for n in uf.members(u) {
                let p = alg.apply_p(&alg.mul(ns.element(ns.dagger(n)), a_alpha))?;
                let t = self.phi_at(&p, s.src(u))?;
                match value {
                    None => value = Some(t),
                    Some(v) if v != t => {
                        return Err(Error::TheoremViolation(format!(
                            "â({}) depends on the choice of n in {}",
                            alg.format_elem(a),
                            s.label(u)
                        )))
                    }
                    _ => {}
                }
            }
            out.push(value.expect("ultrafilters are nonempty"));
        }
        Ok(out)
    }

    pub fn hat(&self, a: &[Elem]) -> Result<SteinbergElement> {
        let f = self.on_sigma(a)?;
        self.target.from_coeffs(self.uf.section().iter().map(|&u| f[u]).collect())
    }

    /// `â(tU) = t⁻¹ â(U)` for all `t`, `U`.
    pub fn check_contravariant(&self, a: &[Elem]) -> Result<bool> {
        let f = self.on_sigma(a)?;
        let (r, tw) = (self.alg.ring(), self.uf.twist());
        for u in 0..f.len() {
            for &t in r.units() {
                if f[tw.act(t, u)] != r.mul(r.inv(t).expect("unit"), f[u]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The checks that make `a ↦ â` a graded isomorphism taking `C` onto the
/// diagonal.
#[derive(Debug, Clone)]
pub struct IsoReport {
    pub well_defined: Verdict,
    pub contravariant: Verdict,
    pub bijective: Verdict,
    pub multiplicative: Verdict,
    pub graded: Verdict,
    pub diagonal: Verdict,
}

impl IsoReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(&[
            ("well-defined", &self.well_defined),
            ("â(tU) = t⁻¹â(U)", &self.contravariant),
            ("bijective", &self.bijective),
            ("multiplicative", &self.multiplicative),
            ("graded", &self.graded),
            ("C onto the diagonal", &self.diagonal),
        ])
    }
}

/// Certifies `A ≅ A_R(G⋆; Σ⋆)` as graded algebras. Refused unless gr-AQP
/// has been verified.
pub fn certify_graded_iso(
    alg: &StructuredAlgebra,
    cl: &PairClassification,
    uf: &UltrafilterTwist,
    cfg: &Config,
) -> Result<IsoReport> {
    let gr = cl.gr_aqp();
    if !gr.holds() {
        return Err(Error::Precondition(format!("certification needs gr-AQP, which is {gr}")));
    }
    let h = HatMap::new(alg, uf)?;
    let d = alg.dim();
    let mut hats = Vec::with_capacity(d);
    for k in 0..d {
        match h.hat(&alg.basis_vec(k)) {
            Ok(x) => hats.push(x),
            Err(Error::TheoremViolation(w)) => {
                let und = || Verdict::Undecided("hat is not well-defined".into());
                return Ok(IsoReport {
                    well_defined: Verdict::fail(w),
                    contravariant: und(),
                    bijective: und(),
                    multiplicative: und(),
                    graded: und(),
                    diagonal: und(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    let lab = |k: usize| alg.labels()[k].clone();
    let mut contravariant = Verdict::Holds;
    for k in 0..d {
        if !h.check_contravariant(&alg.basis_vec(k))? {
            contravariant = Verdict::fail(lab(k));
            break;
        }
    }
    let g = uf.g_star();
    let ring = alg.ring();
    let m = RMatrix::from_columns(g.len(), &hats.iter().map(|x| x.coeffs.clone()).collect::<Vec<_>>());
    let bijective = if is_bijective(ring, &m, cfg.cap)? {
        Verdict::Holds
    } else {
        Verdict::fail(format!("{}×{} matrix is not invertible", g.len(), d))
    };
    let st = h.target();
    let mut multiplicative = Verdict::Holds;
    'mul: for i in 0..d {
        for j in 0..d {
            let prod = alg.mul(&alg.basis_vec(i), &alg.basis_vec(j));
            if h.hat(&prod)? != st.convolve(&hats[i], &hats[j]) {
                multiplicative = Verdict::fail(format!("({}, {})", lab(i), lab(j)));
                break 'mul;
            }
        }
    }
    let mut graded = Verdict::Holds;
    for (k, x) in hats.iter().enumerate() {
        if x.support().iter().any(|&a| g.degree(a) != alg.degree(k)) {
            graded = Verdict::fail(lab(k));
            break;
        }
    }
    let mut diagonal = Verdict::Holds;
    if let Some(&c) = alg.c_basis().iter().find(|&&c| !st.in_diagonal(&hats[c])) {
        diagonal = Verdict::fail(lab(c));
    } else {
        let gens: Vec<Vec<Elem>> = alg.c_basis().iter().map(|&c| hats[c].coeffs.clone()).collect();
        let span = Span::new(ring, g.len(), &gens, cfg.cap)?;
        if let Some(&u) = g.units().iter().find(|&&u| !span.contains(&st.delta(u).coeffs)) {
            diagonal = Verdict::fail(format!("δ_{} is not the image of C", g.label(u)));
        }
    }
    Ok(IsoReport {
        well_defined: Verdict::Holds,
        contravariant,
        bijective,
        multiplicative,
        graded,
        diagonal,
    })
}
