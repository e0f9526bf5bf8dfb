//! Graded algebras given by structure constants, their normalisers, and the
//! diagonal / Cartan / quasi-Cartan pair conditions.

mod classify;
mod normalisers;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use classify::{analyze_ungraded, check_lbh, check_wt, classify_pair, LbhReport, PairClassification, UngradedReport, Verdict};
pub use normalisers::{
    exhaustive_normalisers, structural_normalisers, NormaliserList, NormaliserSemigroup, SemigroupLaws, Strategy,
};

use crate::error::{check_cap, pow_count, Axiom, AxiomViolation, Error, Result};
use crate::finring::{Elem, FiniteRing};
use crate::groupoid::{Degree, GradingGroup};

/// Coefficient vector over the basis.
pub type Vector = Vec<Elem>;

/// `P` on the basis elements in `domain`; `images[k]` is `P(b_{domain[k]})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub domain: Vec<usize>,
    pub images: Vec<Vector>,
}

#[derive(Debug, Clone)]
pub struct StructuredAlgebra {
    ring: Arc<FiniteRing>,
    gamma: Arc<GradingGroup>,
    labels: Vec<String>,
    table: Vec<Vec<(usize, Elem)>>,
    degree: Vec<Degree>,
    c_basis: Vec<usize>,
    in_c: Vec<bool>,
    expectation: Option<Expectation>,
}

impl StructuredAlgebra {
    /// Validates structure constants `b_i b_j = Σ c_ijk b_k` given as
    /// `(i, j, [(k, c)])`; omitted products are zero.
    pub fn new(
        ring: Arc<FiniteRing>,
        gamma: Arc<GradingGroup>,
        labels: Vec<String>,
        products: &[(usize, usize, Vec<(usize, Elem)>)],
        degree: Vec<Degree>,
        c_basis: Vec<usize>,
        expectation: Option<Expectation>,
    ) -> Result<Self> {
        let d = labels.len();
        if degree.len() != d {
            return Err(Error::Invalid("every basis element needs a degree".into()));
        }
        let mut table = vec![Vec::new(); d * d];
        for (i, j, terms) in products {
            if *i >= d || *j >= d || terms.iter().any(|&(k, c)| k >= d || c as usize >= ring.size()) {
                return Err(Error::Invalid("structure constant out of range".into()));
            }
            let mut acc = vec![ring.zero(); d];
            for &(k, c) in terms {
                acc[k] = ring.add(acc[k], c);
            }
            table[i * d + j] = sparse(&acc, &ring);
        }
        let mut c_sorted = c_basis;
        c_sorted.sort_unstable();
        c_sorted.dedup();
        if c_sorted.iter().any(|&c| c >= d) {
            return Err(Error::Invalid("C basis index out of range".into()));
        }
        let mut in_c = vec![false; d];
        for &c in &c_sorted {
            in_c[c] = true;
        }
        let alg = Self {
            ring,
            gamma,
            labels,
            table,
            degree,
            c_basis: c_sorted,
            in_c,
            expectation,
        };
        alg.check()?;
        Ok(alg)
    }

    fn check(&self) -> Result<()> {
        let d = self.dim();
        for (k, &g) in self.degree.iter().enumerate() {
            if !self.gamma.contains(g) {
                return Err(AxiomViolation::new(Axiom::Homogeneity, "degree outside the grading group")
                    .with_witness(self.labels[k].clone())
                    .into());
            }
        }
        for i in 0..d {
            for j in 0..d {
                let want = self.gamma.mul(self.degree[i], self.degree[j]);
                if let Some(&(k, _)) = self.table[i * d + j].iter().find(|&&(k, _)| self.degree[k] != want) {
                    return Err(AxiomViolation::new(Axiom::Homogeneity, "product leaves its degree")
                        .with_witness(format!("{}·{} has a {} term", self.labels[i], self.labels[j], self.labels[k]))
                        .into());
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.mul(&self.basis_vec(i), &self.basis_vec(j));
                for k in 0..d {
                    let jk = self.mul(&self.basis_vec(j), &self.basis_vec(k));
                    let bk = self.basis_vec(k);
                    let bi = self.basis_vec(i);
                    if self.mul(&ij, &bk) != self.mul(&bi, &jk) {
                        return Err(AxiomViolation::new(Axiom::AlgebraAssociativity, "(ab)c != a(bc)")
                            .with_witness(format!("({}, {}, {})", self.labels[i], self.labels[j], self.labels[k]))
                            .into());
                    }
                }
            }
        }
        let eps = self.gamma.identity();
        let sub = |d: &str| AxiomViolation::new(Axiom::Subalgebra, d);
        if let Some(&c) = self.c_basis.iter().find(|&&c| self.degree[c] != eps) {
            return Err(sub("C is not contained in A_ε").with_witness(self.labels[c].clone()).into());
        }
        for &a in &self.c_basis {
            for &b in &self.c_basis {
                let ab = self.mul(&self.basis_vec(a), &self.basis_vec(b));
                if !self.in_c(&ab) {
                    return Err(sub("C is not closed under multiplication")
                        .with_witness(format!("{}·{}", self.labels[a], self.labels[b]))
                        .into());
                }
                if ab != self.mul(&self.basis_vec(b), &self.basis_vec(a)) {
                    return Err(sub("C is not commutative")
                        .with_witness(format!("({}, {})", self.labels[a], self.labels[b]))
                        .into());
                }
            }
        }
        if let Some(p) = &self.expectation {
            let ex = |d: &str| AxiomViolation::new(Axiom::Expectation, d);
            if p.domain.len() != p.images.len() || p.images.iter().any(|v| v.len() != d) {
                return Err(Error::Invalid("expectation rows do not match the basis".into()));
            }
            let fiber = self.fiber(eps);
            let mut dom = p.domain.clone();
            dom.sort_unstable();
            if dom != fiber && dom != (0..d).collect::<Vec<_>>() {
                return Err(ex("P must be given on A_ε or on all of A").into());
            }
            for (k, img) in p.domain.iter().zip(&p.images) {
                if !self.in_c(img) {
                    return Err(ex("P does not take values in C").with_witness(self.labels[*k].clone()).into());
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn gamma(&self) -> &Arc<GradingGroup> {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> Degree {
        self.degree[i]
    }

    pub fn degrees_of_basis(&self) -> &[Degree] {
        &self.degree
    }

    pub fn c_basis(&self) -> &[usize] {
        &self.c_basis
    }

    pub fn expectation(&self) -> Option<&Expectation> {
        self.expectation.as_ref()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Elem)] {
        &self.table[i * self.dim() + j]
    }

    /// Nonzero `(i, j, b_i b_j)` triples in row order.
    pub fn products(&self) -> Vec<(usize, usize, Vec<(usize, Elem)>)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if !self.table[i * d + j].is_empty() {
                    out.push((i, j, self.table[i * d + j].clone()));
                }
            }
        }
        out
    }

    pub fn zero(&self) -> Vector {
        vec![self.ring.zero(); self.dim()]
    }

    pub fn basis_vec(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = self.ring.one();
        v
    }

    pub fn is_zero(&self, v: &[Elem]) -> bool {
        v.iter().all(|&x| x == self.ring.zero())
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vector {
        let r = &*self.ring;
        let d = self.dim();
        let mut out = vec![r.zero(); d];
        for (i, &x) in a.iter().enumerate() {
            if x == r.zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == r.zero() {
                    continue;
                }
                let xy = r.mul(x, y);
                for &(k, c) in &self.table[i * d + j] {
                    out[k] = r.add(out[k], r.mul(xy, c));
                }
            }
        }
        out
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| self.ring.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| self.ring.sub(x, y)).collect()
    }

    pub fn scale(&self, t: Elem, a: &[Elem]) -> Vector {
        a.iter().map(|&x| self.ring.mul(t, x)).collect()
    }

    pub fn in_c(&self, v: &[Elem]) -> bool {
        v.iter().enumerate().all(|(k, &x)| x == self.ring.zero() || self.in_c[k])
    }

    pub fn is_c_basis(&self, k: usize) -> bool {
        self.in_c[k]
    }

    /// Basis indices of degree `g`.
    pub fn fiber(&self, g: Degree) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.degree[k] == g).collect()
    }

    /// Degrees carried by some basis element, ascending.
    pub fn degrees(&self) -> Vec<Degree> {
        let mut d = self.degree.clone();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The degree of a nonzero homogeneous vector.
    pub fn homogeneous_degree(&self, v: &[Elem]) -> Option<Degree> {
        let mut it = v
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != self.ring.zero())
            .map(|(k, _)| self.degree[k]);
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    pub fn is_homogeneous(&self, v: &[Elem]) -> bool {
        self.is_zero(v) || self.homogeneous_degree(v).is_some()
    }

    pub fn components(&self, v: &[Elem]) -> BTreeMap<Degree, Vector> {
        let mut out: BTreeMap<Degree, Vector> = BTreeMap::new();
        for (k, &x) in v.iter().enumerate() {
            if x != self.ring.zero() {
                out.entry(self.degree[k]).or_insert_with(|| self.zero())[k] = x;
            }
        }
        out
    }

    /// `P(v)`; fails when `P` is missing or `v` leaves its domain.
    pub fn apply_p(&self, v: &[Elem]) -> Result<Vector> {
        let p = self
            .expectation
            .as_ref()
            .ok_or_else(|| Error::Precondition("no conditional expectation supplied".into()))?;
        let r = &*self.ring;
        let mut out = self.zero();
        for (k, &x) in v.iter().enumerate() {
            if x == r.zero() {
                continue;
            }
            let Some(pos) = p.domain.iter().position(|&d| d == k) else {
                return Err(Error::Precondition(format!(
                    "{} lies outside the domain of P",
                    self.format_elem(v)
                )));
            };
            for (o, &y) in out.iter_mut().zip(&p.images[pos]) {
                *o = r.add(*o, r.mul(x, y));
            }
        }
        Ok(out)
    }

    /// Renders `v` as `4*e + 2*x`; coefficients alone for a basis vector
    /// labelled `1`.
    pub fn format_elem(&self, v: &[Elem]) -> String {
        let r = &*self.ring;
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != r.zero())
            .map(|(k, &x)| {
                let l = &self.labels[k];
                match (x == r.one(), l.as_str()) {
                    (_, "1") => r.label(x).to_string(),
                    (true, _) => l.clone(),
                    (false, _) => format!("{}*{}", r.label(x), l),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    fn sub_algebra(&self, keep: &[usize], gamma: Arc<GradingGroup>, degree: Vec<Degree>, p: Option<Expectation>) -> Self {
        let d = self.dim();
        let mut pos = vec![usize::MAX; d];
        for (i, &k) in keep.iter().enumerate() {
            pos[k] = i;
        }
        let m = keep.len();
        let mut table = vec![Vec::new(); m * m];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                table[i * m + j] = self.table[a * d + b]
                    .iter()
                    .map(|&(k, c)| {
                        assert_ne!(pos[k], usize::MAX, "subalgebra is not closed");
                        (pos[k], c)
                    })
                    .collect();
            }
        }
        let c_basis: Vec<usize> = self.c_basis.iter().map(|&c| pos[c]).collect();
        let mut in_c = vec![false; m];
        for &c in &c_basis {
            in_c[c] = true;
        }
        let restrict = |v: &Vector| keep.iter().map(|&k| v[k]).collect::<Vector>();
        let expectation = p.map(|p| Expectation {
            domain: p.domain.iter().map(|&k| pos[k]).collect(),
            images: p.images.iter().map(restrict).collect(),
        });
        Self {
            ring: self.ring.clone(),
            gamma,
            labels: keep.iter().map(|&k| self.labels[k].clone()).collect(),
            table,
            degree,
            c_basis,
            in_c,
            expectation,
        }
    }

    /// `A_ε` with the same `C`; `P` restricted to `A_ε`.
    pub fn epsilon_part(&self) -> Self {
        let eps = self.gamma.identity();
        let keep = self.fiber(eps);
        let p = self.expectation.as_ref().map(|p| {
            let (domain, images) = p
                .domain
                .iter()
                .zip(&p.images)
                .filter(|(k, _)| self.degree[**k] == eps)
                .map(|(k, v)| (*k, v.clone()))
                .unzip();
            Expectation { domain, images }
        });
        let trivial = Arc::new(GradingGroup::trivial());
        let n = keep.len();
        self.sub_algebra(&keep, trivial, vec![Degree(0); n], p)
    }

    /// The same algebra with every basis element in degree `ε`. `P` survives
    /// only if it was given on all of `A`.
    pub fn forget_grading(&self) -> Self {
        let d = self.dim();
        let p = self.expectation.clone().filter(|p| p.domain.len() == d);
        let keep: Vec<usize> = (0..d).collect();
        self.sub_algebra(&keep, Arc::new(GradingGroup::trivial()), vec![Degree(0); d], p)
    }

    pub fn is_trivially_graded(&self) -> bool {
        let eps = self.gamma.identity();
        self.degree.iter().all(|&g| g == eps)
    }

    /// The idempotents of `C`, in lexicographic order.
    pub fn idempotents_of_c(&self, cap: u64) -> Result<Vec<Vector>> {
        let r = &*self.ring;
        let k = self.c_basis.len();
        check_cap("idempotents of C", pow_count(r.size(), k), cap)?;
        let mut out = Vec::new();
        for coeffs in LexVectors::new(r.size(), k) {
            let mut v = self.zero();
            for (&c, &x) in self.c_basis.iter().zip(&coeffs) {
                v[c] = x;
            }
            if self.mul(&v, &v) == v {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// The vector with coefficients `coeffs` on `positions`, zero elsewhere.
    pub fn embed(&self, positions: &[usize], coeffs: &[Elem]) -> Vector {
        let mut v = self.zero();
        for (&p, &x) in positions.iter().zip(coeffs) {
            v[p] = x;
        }
        v
    }
}

fn sparse(v: &[Elem], r: &FiniteRing) -> Vec<(usize, Elem)> {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != r.zero())
        .map(|(k, &x)| (k, x))
        .collect()
}

/// All vectors in `R^len` in lexicographic order (first coordinate most
/// significant).
#[derive(Debug, Clone)]
pub struct LexVectors {
    q: usize,
    cur: Option<Vec<Elem>>,
}

impl LexVectors {
    pub fn new(q: usize, len: usize) -> Self {
        Self {
            q,
            cur: Some(vec![0; len]),
        }
    }

    /// The `index`-th vector of the enumeration.
    pub fn nth_vector(q: usize, len: usize, mut index: u128) -> Vec<Elem> {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = (index % q as u128) as Elem;
            index /= q as u128;
        }
        v
    }
}

impl Iterator for LexVectors {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut k = next.len();
        loop {
            if k == 0 {
                self.cur = None;
                break;
            }
            k -= 1;
            next[k] += 1;
            if (next[k] as usize) < self.q {
                self.cur = Some(next);
                break;
            }
            next[k] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::finring::make_modular_ring;

    /// `M_2(R)` with matrix-unit basis `E11, E12, E21, E22`.
    pub(crate) fn m2(n: u32, graded: bool) -> StructuredAlgebra {
        let r = Arc::new(make_modular_ring(n).unwrap());
        let idx = |i: usize, j: usize| i * 2 + j;
        let mut prods = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    prods.push((idx(i, j), idx(j, k), vec![(idx(i, k), 1)]));
                }
            }
        }
        let (gamma, degree) = if graded {
            (
                Arc::new(GradingGroup::Integers),
                vec![Degree(0), Degree(1), Degree(-1), Degree(0)],
            )
        } else {
            (Arc::new(GradingGroup::trivial()), vec![Degree(0); 4])
        };
        let labels = ["E11", "E12", "E21", "E22"].iter().map(|s| s.to_string()).collect();
        let images = if graded {
            vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1]]
        } else {
            vec![vec![1, 0, 0, 0], vec![0; 4], vec![0; 4], vec![0, 0, 0, 1]]
        };
        let domain = if graded { vec![0, 3] } else { vec![0, 1, 2, 3] };
        StructuredAlgebra::new(r, gamma, labels, &prods, degree, vec![0, 3], Some(Expectation { domain, images }))
            .unwrap()
    }

    #[test]
    fn matrix_algebra_basics() {
        let a = m2(2, true);
        assert_eq!(a.mul(&a.basis_vec(1), &a.basis_vec(2)), a.basis_vec(0));
        assert_eq!(a.homogeneous_degree(&a.basis_vec(1)), Some(Degree(1)));
        let mixed = a.add(&a.basis_vec(0), &a.basis_vec(1));
        assert_eq!(a.homogeneous_degree(&mixed), None);
        assert_eq!(a.components(&mixed).len(), 2);
        assert_eq!(a.format_elem(&mixed), "E11 + E12");
        let ids = a.idempotents_of_c(100).unwrap();
        assert_eq!(ids.len(), 4);
        let eps = a.epsilon_part();
        assert_eq!(eps.dim(), 2);
        assert!(eps.forget_grading().expectation().is_some());
        assert!(a.forget_grading().expectation().is_none());
        assert!(a.apply_p(&a.basis_vec(1)).is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        let r = Arc::new(make_modular_ring(3).unwrap());
        let g = Arc::new(GradingGroup::trivial());
        // a·a = b, b·a = a: (aa)a = a but a(aa) = ab = 0
        let e = StructuredAlgebra::new(
            r.clone(),
            g.clone(),
            vec!["a".into(), "b".into()],
            &[(0, 0, vec![(1, 1)]), (1, 0, vec![(0, 1)])],
            vec![Degree(0); 2],
            vec![],
            None,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Axiom(ref v) if v.axiom == Axiom::AlgebraAssociativity), "{e}");
        let z = Arc::new(GradingGroup::Integers);
        let e = StructuredAlgebra::new(
            r,
            z,
            vec!["a".into(), "b".into()],
            &[(0, 0, vec![(1, 1)])],
            vec![Degree(0), Degree(1)],
            vec![],
            None,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Axiom(ref v) if v.axiom == Axiom::Homogeneity));
    }

    #[test]
    fn lex_vectors() {
        let all: Vec<_> = LexVectors::new(3, 2).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        for (k, v) in all.iter().enumerate() {
            assert_eq!(&LexVectors::nth_vector(3, 2, k as u128), v);
        }
        assert_eq!(LexVectors::new(2, 0).count(), 1);
    }
}
