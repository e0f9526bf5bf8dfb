//! The twisted Steinberg algebra `A_R(G; Σ)` of a finite graded twist.
//!
//! Elements are stored by their values on the section `α ↦ S(α)` of the
//! cocycle form; the value at `t·S(α)` is `t⁻¹` times the stored coefficient.
//! Evaluating the convolution sum at section points gives
//! `δ_α * δ_β = ω(α, β) δ_{αβ}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing};
use crate::groupoid::{Bisection, Degree, GradedGroupoid};
use crate::pairs::{Expectation, StructuredAlgebra};
use crate::twist::{CocycleTwist, ExplicitTwist};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SteinbergElement {
    pub coeffs: Vec<Elem>,
}

impl SteinbergElement {
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&a| self.coeffs[a] != 0).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SteinbergAlgebra {
    twist: CocycleTwist,
}

impl SteinbergAlgebra {
    pub fn new(twist: CocycleTwist) -> Self {
        Self { twist }
    }

    pub fn twist(&self) -> &CocycleTwist {
        &self.twist
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        self.twist.ring()
    }

    pub fn groupoid(&self) -> &Arc<GradedGroupoid> {
        self.twist.base()
    }

    pub fn dim(&self) -> usize {
        self.groupoid().len()
    }

    pub fn zero(&self) -> SteinbergElement {
        SteinbergElement {
            coeffs: vec![self.ring().zero(); self.dim()],
        }
    }

    pub fn delta(&self, a: usize) -> SteinbergElement {
        let mut f = self.zero();
        f.coeffs[a] = self.ring().one();
        f
    }

    pub fn from_coeffs(&self, coeffs: Vec<Elem>) -> Result<SteinbergElement> {
        if coeffs.len() != self.dim() || coeffs.iter().any(|&c| c as usize >= self.ring().size()) {
            return Err(Error::Invalid("coefficient vector does not fit the algebra".into()));
        }
        Ok(SteinbergElement { coeffs })
    }

    /// `1̃_X` for `X = {u_α·S(α) : α ∈ B}`. The coefficient at `α` is `u_α`
    /// (all ones when `scalars` is `None`).
    pub fn indicator(&self, b: &[usize], scalars: Option<&[Elem]>) -> Result<SteinbergElement> {
        let g = self.groupoid();
        if !g.is_bisection(b) {
            return Err(Error::Invalid("indicator of a set that is not a bisection".into()));
        }
        let r = self.ring();
        let mut f = self.zero();
        for (k, &a) in b.iter().enumerate() {
            let u = scalars.map_or(r.one(), |s| s[k]);
            if !r.is_unit(u) {
                return Err(Error::Invalid("indicator scalars must be units".into()));
            }
            f.coeffs[a] = u;
        }
        Ok(f)
    }

    pub fn indicator_of(&self, b: &Bisection) -> SteinbergElement {
        self.indicator(b.arrows(), None).expect("bisection")
    }

    pub fn convolve(&self, f: &SteinbergElement, h: &SteinbergElement) -> SteinbergElement {
        let (g, r) = (self.groupoid(), self.ring());
        let mut out = self.zero();
        for a in f.support() {
            for b in h.support() {
                if let Some(ab) = g.compose(a, b) {
                    let v = r.mul(r.mul(f.coeffs[a], h.coeffs[b]), self.twist.omega(a, b));
                    out.coeffs[ab] = r.add(out.coeffs[ab], v);
                }
            }
        }
        out
    }

    pub fn add(&self, f: &SteinbergElement, h: &SteinbergElement) -> SteinbergElement {
        let r = self.ring();
        SteinbergElement {
            coeffs: f.coeffs.iter().zip(&h.coeffs).map(|(&x, &y)| r.add(x, y)).collect(),
        }
    }

    pub fn scale(&self, t: Elem, f: &SteinbergElement) -> SteinbergElement {
        let r = self.ring();
        SteinbergElement {
            coeffs: f.coeffs.iter().map(|&x| r.mul(t, x)).collect(),
        }
    }

    pub fn homogeneous_degree(&self, f: &SteinbergElement) -> Option<Degree> {
        let g = self.groupoid();
        g.homogeneous_degree(&f.support())
    }

    pub fn graded_components(&self, f: &SteinbergElement) -> BTreeMap<Degree, SteinbergElement> {
        let g = self.groupoid();
        let mut out: BTreeMap<Degree, SteinbergElement> = BTreeMap::new();
        for a in f.support() {
            out.entry(g.degree(a)).or_insert_with(|| self.zero()).coeffs[a] = f.coeffs[a];
        }
        out
    }

    /// Basis of the diagonal `C`: the `δ_u` for units `u`.
    pub fn diagonal_basis(&self) -> Vec<usize> {
        self.groupoid().units().to_vec()
    }

    pub fn in_diagonal(&self, f: &SteinbergElement) -> bool {
        f.support().iter().all(|&a| self.groupoid().is_unit(a))
    }

    /// Restriction to the unit arrows, defined on `A_ε`.
    pub fn expectation(&self, f: &SteinbergElement) -> Result<SteinbergElement> {
        let g = self.groupoid();
        let eps = g.gamma().identity();
        if let Some(&a) = f.support().iter().find(|&&a| g.degree(a) != eps) {
            return Err(Error::Precondition(format!(
                "expectation is defined on A_ε; support meets {}",
                g.label(a)
            )));
        }
        Ok(self.restrict_to_units(f))
    }

    /// Restriction of `f` to the unit space, on all of `A`.
    pub fn restrict_to_units(&self, f: &SteinbergElement) -> SteinbergElement {
        let g = self.groupoid();
        let mut out = self.zero();
        for &u in g.units() {
            out.coeffs[u] = f.coeffs[u];
        }
        out
    }

    /// The function on Σ: `f(t·S(α)) = t⁻¹ f(S(α))`, where `section` is the
    /// section the cocycle was taken with.
    pub fn expand(&self, f: &SteinbergElement, sigma: &ExplicitTwist, section: &[usize]) -> Vec<Elem> {
        let r = self.ring();
        let mut out = vec![r.zero(); sigma.sigma().len()];
        for (a, &s) in section.iter().enumerate() {
            for &t in r.units() {
                out[sigma.act(t, s)] = r.mul(r.inv(t).expect("unit"), f.coeffs[a]);
            }
        }
        out
    }

    /// The structure-constant form: basis `δ_α`, `C` spanned by unit arrows and
    /// `P` the restriction to units on every basis element.
    pub fn to_structured(&self) -> StructuredAlgebra {
        let (g, r) = (self.groupoid(), self.ring());
        let n = g.len();
        let mut products = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(ab) = g.compose(a, b) {
                    products.push((a, b, vec![(ab, self.twist.omega(a, b))]));
                }
            }
        }
        let images = (0..n)
            .map(|a| {
                let mut v = vec![r.zero(); n];
                if g.is_unit(a) {
                    v[a] = r.one();
                }
                v
            })
            .collect();
        StructuredAlgebra::new(
            r.clone(),
            g.gamma().clone(),
            g.labels().to_vec(),
            &products,
            (0..n).map(|a| g.degree(a)).collect(),
            g.units().to_vec(),
            Some(Expectation {
                domain: (0..n).collect(),
                images,
            }),
        )
        .expect("a twisted groupoid algebra satisfies the algebra axioms")
    }

    /// Sparse rendering `{(1,2): 1, (2,1): 4}`.
    pub fn format(&self, f: &SteinbergElement) -> String {
        let g = self.groupoid();
        let r = self.ring();
        let parts: Vec<String> = f
            .support()
            .iter()
            .map(|&a| format!("{}: {}", g.label(a), r.label(f.coeffs[a])))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_modular_ring;
    use crate::groupoid::{FiniteGroup, GradingGroup};

    fn r2(n: u32) -> SteinbergAlgebra {
        let r = Arc::new(make_modular_ring(n).unwrap());
        let g = Arc::new(GradedGroupoid::pair_groupoid_linear(2));
        SteinbergAlgebra::new(CocycleTwist::trivial(r, g))
    }

    #[test]
    fn matrix_unit_relation() {
        let a = r2(2);
        // (1,2) * (2,1) = (1,1)
        assert_eq!(a.convolve(&a.delta(1), &a.delta(2)), a.delta(0));
        let one = a.indicator_of(&a.groupoid().unit_bisection());
        for k in 0..4 {
            assert_eq!(a.convolve(&one, &a.delta(k)), a.delta(k));
            assert_eq!(a.convolve(&a.delta(k), &one), a.delta(k));
        }
    }

    #[test]
    fn twisted_square() {
        let r = Arc::new(make_modular_ring(5).unwrap());
        let z2 = FiniteGroup::cyclic(2).relabel(vec!["e".into(), "x".into()]);
        let g = Arc::new(GradedGroupoid::group_groupoid(&z2, Arc::new(GradingGroup::trivial()), |_| Degree(0)).unwrap());
        let c = CocycleTwist::new(r, g, &[(1, 1, 4)]).unwrap();
        let a = SteinbergAlgebra::new(c);
        assert_eq!(a.convolve(&a.delta(1), &a.delta(1)), a.scale(4, &a.delta(0)));
    }

    #[test]
    fn components_and_expectation() {
        let a = r2(3);
        let f = a.add(&a.delta(0), &a.delta(1));
        let parts = a.graded_components(&f);
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![Degree(0), Degree(1)]);
        let sum = parts.values().fold(a.zero(), |acc, p| a.add(&acc, p));
        assert_eq!(sum, f);
        assert!(a.expectation(&f).is_err());
        assert_eq!(a.expectation(&a.delta(3)).unwrap(), a.delta(3));
        assert_eq!(a.restrict_to_units(&f), a.delta(0));
        assert!(a.indicator(&[0, 1], None).is_err());
        assert_eq!(a.format(&f), "{(1,1): 1, (1,2): 1}");
    }

    #[test]
    fn trivially_graded_expectation() {
        let r = Arc::new(make_modular_ring(2).unwrap());
        let g = Arc::new(GradedGroupoid::pair_groupoid(2, Arc::new(GradingGroup::trivial()), |_, _| Degree(0)).unwrap());
        let a = SteinbergAlgebra::new(CocycleTwist::trivial(r, g));
        let f = a.add(&a.delta(0), &a.delta(1));
        assert_eq!(a.expectation(&f).unwrap(), a.delta(0));
        assert_eq!(a.expectation(&a.delta(2)).unwrap(), a.zero());
    }
}
