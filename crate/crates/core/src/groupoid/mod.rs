//! Finite groupoids with the discrete topology, graded by a group.
//!
//! Every subset of a finite discrete groupoid is compact open, so the ample
//! and Hausdorff hypotheses hold automatically and a bisection is just a set
//! on which `src` and `rng` are injective.

mod bisection;
mod group;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub use bisection::Bisection;
pub use group::{Degree, FiniteGroup, GradingGroup};

use crate::error::{Axiom, AxiomViolation, Error, Result};

/// Default bound on the number of arrows.
pub const DEFAULT_ARROW_CAP: usize = 64;

const NONE: u32 = u32::MAX;

/// Unvalidated groupoid tables, as read from an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidData {
    pub labels: Vec<String>,
    pub units: Vec<usize>,
    pub src: Vec<usize>,
    pub rng: Vec<usize>,
    /// Triples `(α, β, αβ)`.
    pub compose: Vec<(usize, usize, usize)>,
    pub grading: Vec<Degree>,
}

#[derive(Debug, Clone)]
pub struct GradedGroupoid {
    labels: Vec<String>,
    src: Vec<usize>,
    rng: Vec<usize>,
    inv: Vec<usize>,
    compose: Vec<u32>,
    grading: Vec<Degree>,
    units: Vec<usize>,
    is_unit: Vec<bool>,
    gamma: Arc<GradingGroup>,
}

impl PartialEq for GradedGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.src == other.src
            && self.rng == other.rng
            && self.compose == other.compose
            && self.grading == other.grading
            && self.gamma == other.gamma
    }
}

impl GradedGroupoid {
    /// Checks every groupoid axiom exhaustively, reporting the first failure.
    pub fn validate(data: GroupoidData, gamma: Arc<GradingGroup>, arrow_cap: usize) -> Result<Self> {
        let n = data.labels.len();
        if n > arrow_cap {
            return Err(Error::CapExceeded {
                what: "groupoid arrows".into(),
                needed: n as u128,
                cap: arrow_cap as u64,
            });
        }
        let lab = |a: usize| data.labels[a].clone();
        let units_err = |d: &str| AxiomViolation::new(Axiom::GroupoidUnits, d);
        if data.src.len() != n || data.rng.len() != n || data.grading.len() != n {
            return Err(Error::Invalid("src, rng and grading must cover every arrow".into()));
        }
        let mut is_unit = vec![false; n];
        for &u in &data.units {
            if u >= n {
                return Err(Error::Invalid(format!("unit index {u} out of range")));
            }
            is_unit[u] = true;
        }
        for &u in &data.units {
            if data.src[u] != u || data.rng[u] != u {
                return Err(units_err("unit not fixed by src and rng").with_witness(lab(u)).into());
            }
        }
        for a in 0..n {
            if data.src[a] >= n || !is_unit[data.src[a]] || data.rng[a] >= n || !is_unit[data.rng[a]] {
                return Err(units_err("src or rng of an arrow is not a unit").with_witness(lab(a)).into());
            }
        }
        let comp_err = |d: &str| AxiomViolation::new(Axiom::GroupoidComposition, d);
        let mut compose = vec![NONE; n * n];
        for &(a, b, c) in &data.compose {
            if a >= n || b >= n || c >= n {
                return Err(Error::Invalid("composition triple out of range".into()));
            }
            let slot = &mut compose[a * n + b];
            if *slot != NONE && *slot as usize != c {
                return Err(comp_err("conflicting composites")
                    .with_witness(format!("({}, {})", lab(a), lab(b)))
                    .into());
            }
            *slot = c as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let defined = compose[a * n + b] != NONE;
                let composable = data.src[a] == data.rng[b];
                if defined != composable {
                    let d = if composable {
                        "composite missing for a composable pair"
                    } else {
                        "composite given for a non-composable pair"
                    };
                    return Err(comp_err(d).with_witness(format!("({}, {})", lab(a), lab(b))).into());
                }
                if defined {
                    let c = compose[a * n + b] as usize;
                    if data.src[c] != data.src[b] || data.rng[c] != data.rng[a] {
                        return Err(comp_err("src/rng of a composite")
                            .with_witness(format!("({}, {}) -> {}", lab(a), lab(b), lab(c)))
                            .into());
                    }
                }
            }
        }
        for a in 0..n {
            let (s, r) = (data.src[a], data.rng[a]);
            if compose[r * n + a] as usize != a || compose[a * n + s] as usize != a {
                return Err(units_err("unit law fails").with_witness(lab(a)).into());
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = compose[a * n + b];
                if ab == NONE {
                    continue;
                }
                for c in 0..n {
                    let bc = compose[b * n + c];
                    if bc == NONE {
                        continue;
                    }
                    if compose[ab as usize * n + c] != compose[a * n + bc as usize] {
                        return Err(AxiomViolation::new(Axiom::GroupoidAssociativity, "(ab)c != a(bc)")
                            .with_witness(format!("({}, {}, {})", lab(a), lab(b), lab(c)))
                            .into());
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            let found = (0..n).find(|&b| {
                compose[a * n + b] as usize == data.rng[a] && compose[b * n + a] as usize == data.src[a]
            });
            match found {
                Some(b) => inv[a] = b,
                None => {
                    return Err(AxiomViolation::new(Axiom::GroupoidInverse, "arrow without inverse")
                        .with_witness(lab(a))
                        .into())
                }
            }
        }
        let grad_err = |d: &str| AxiomViolation::new(Axiom::Grading, d);
        for (a, &d) in data.grading.iter().enumerate() {
            if !gamma.contains(d) {
                return Err(grad_err("degree outside the grading group").with_witness(lab(a)).into());
            }
        }
        for &u in &data.units {
            if data.grading[u] != gamma.identity() {
                return Err(grad_err("unit of nonzero degree").with_witness(lab(u)).into());
            }
        }
        for a in 0..n {
            for b in 0..n {
                let c = compose[a * n + b];
                if c == NONE {
                    continue;
                }
                let want = gamma.mul(data.grading[a], data.grading[b]);
                if data.grading[c as usize] != want {
                    return Err(grad_err("grading is not a homomorphism")
                        .with_witness(format!(
                            "c({} {}) = {} but c({}) c({}) = {}",
                            lab(a),
                            lab(b),
                            gamma.label(data.grading[c as usize]),
                            lab(a),
                            lab(b),
                            gamma.label(want)
                        ))
                        .into());
                }
            }
        }
        let mut units = data.units.clone();
        units.sort_unstable();
        units.dedup();
        Ok(Self {
            labels: data.labels,
            src: data.src,
            rng: data.rng,
            inv,
            compose,
            grading: data.grading,
            units,
            is_unit,
            gamma,
        })
    }

    /// Builds a groupoid from a composition function, validating the result.
    pub fn from_fn(
        labels: Vec<String>,
        units: Vec<usize>,
        src: Vec<usize>,
        rng: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
        grading: Vec<Degree>,
        gamma: Arc<GradingGroup>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut triples = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = compose(a, b) {
                    triples.push((a, b, c));
                }
            }
        }
        let data = GroupoidData {
            labels,
            units,
            src,
            rng,
            compose: triples,
            grading,
        };
        Self::validate(data, gamma, usize::MAX)
    }

    /// The full equivalence relation on `{1..n}`; `(i,j)` has src `(j,j)` and
    /// rng `(i,i)`. `degree(i, j)` must define a homomorphism.
    pub fn pair_groupoid(n: usize, gamma: Arc<GradingGroup>, degree: impl Fn(usize, usize) -> Degree) -> Result<Self> {
        let idx = |i: usize, j: usize| i * n + j;
        let labels = (0..n * n).map(|a| format!("({},{})", a / n + 1, a % n + 1)).collect();
        let units = (0..n).map(|i| idx(i, i)).collect();
        let src = (0..n * n).map(|a| idx(a % n, a % n)).collect();
        let rng = (0..n * n).map(|a| idx(a / n, a / n)).collect();
        let grading = (0..n * n).map(|a| degree(a / n + 1, a % n + 1)).collect();
        Self::from_fn(
            labels,
            units,
            src,
            rng,
            |a, b| (a % n == b / n).then(|| idx(a / n, b % n)),
            grading,
            gamma,
        )
    }

    /// `R_n` graded by `c(i,j) = j - i` into the integers.
    pub fn pair_groupoid_linear(n: usize) -> Self {
        Self::pair_groupoid(n, Arc::new(GradingGroup::Integers), |i, j| Degree(j as i64 - i as i64))
            .expect("pair groupoid is valid")
    }

    /// A group viewed as a groupoid with one unit, graded by `degree`.
    pub fn group_groupoid(
        group: &FiniteGroup,
        gamma: Arc<GradingGroup>,
        degree: impl Fn(usize) -> Degree,
    ) -> Result<Self> {
        let n = group.order();
        let e = group.identity();
        Self::from_fn(
            group.labels().to_vec(),
            vec![e],
            vec![e; n],
            vec![e; n],
            |a, b| Some(group.mul(a, b)),
            (0..n).map(degree).collect(),
            gamma,
        )
    }

    /// Disjoint union; labels of `other` get `suffix` appended when they clash.
    pub fn disjoint_union(&self, other: &Self, suffix: &str) -> Result<Self> {
        if self.gamma != other.gamma {
            return Err(Error::Invalid("disjoint union needs a common grading group".into()));
        }
        let k = self.len();
        let mut labels = self.labels.clone();
        for l in &other.labels {
            if self.labels.contains(l) {
                labels.push(format!("{l}{suffix}"));
            } else {
                labels.push(l.clone());
            }
        }
        let units = self.units.iter().copied().chain(other.units.iter().map(|u| u + k)).collect();
        let src = self.src.iter().copied().chain(other.src.iter().map(|u| u + k)).collect();
        let rng = self.rng.iter().copied().chain(other.rng.iter().map(|u| u + k)).collect();
        let grading = self.grading.iter().chain(&other.grading).copied().collect();
        Self::from_fn(
            labels,
            units,
            src,
            rng,
            |a, b| match (a < k, b < k) {
                (true, true) => self.compose(a, b),
                (false, false) => other.compose(a - k, b - k).map(|c| c + k),
                _ => None,
            },
            grading,
            self.gamma.clone(),
        )
    }

    /// The same groupoid with every arrow in degree `ε` of `gamma`.
    pub fn with_trivial_grading(&self, gamma: Arc<GradingGroup>) -> Self {
        let mut g = self.clone();
        g.grading = vec![gamma.identity(); self.len()];
        g.gamma = gamma;
        g
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn by_label(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn rng(&self, a: usize) -> usize {
        self.rng[a]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let c = self.compose[a * self.len() + b];
        (c != NONE).then_some(c as usize)
    }

    pub fn degree(&self, a: usize) -> Degree {
        self.grading[a]
    }

    pub fn gamma(&self) -> &Arc<GradingGroup> {
        &self.gamma
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.is_unit[a]
    }

    /// Arrows with the given range, in arrow order.
    pub fn with_range(&self, u: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.rng[a] == u).collect()
    }

    /// The fiber `G_γ` as a sorted arrow list.
    pub fn fiber(&self, d: Degree) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.grading[a] == d).collect()
    }

    /// Degrees that occur, ascending.
    pub fn degrees(&self) -> Vec<Degree> {
        self.grading.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn fibers(&self) -> BTreeMap<Degree, Vec<usize>> {
        let mut out: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        for a in 0..self.len() {
            out.entry(self.grading[a]).or_default().push(a);
        }
        out
    }

    pub fn isotropy(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.src[a] == self.rng[a]).collect()
    }

    pub fn is_principal(&self) -> bool {
        self.isotropy().len() == self.units.len()
    }

    /// Interior of the isotropy equals the unit space. Under the discrete
    /// topology the interior of any set is the set itself, so this coincides
    /// with [`is_principal`](Self::is_principal).
    pub fn is_effective(&self) -> bool {
        let interior = self.isotropy();
        let effective = interior.len() == self.units.len();
        assert_eq!(effective, self.is_principal(), "effective and principal diverged");
        effective
    }

    /// The subgroupoid `G_ε` together with its embedding into `self`.
    pub fn restrict_to_degree(&self, d: Degree) -> Result<(Self, Vec<usize>)> {
        if d != self.gamma.identity() {
            return Err(Error::Invalid(format!(
                "the fiber of degree {} is not a subgroupoid",
                self.gamma.label(d)
            )));
        }
        Ok(self.restrict(&self.fiber(d)))
    }

    /// Full subgroupoid on an arrow subset closed under composition and
    /// inverses that contains every unit. Panics otherwise.
    pub(crate) fn restrict(&self, arrows: &[usize]) -> (Self, Vec<usize>) {
        let n = self.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &a) in arrows.iter().enumerate() {
            pos[a] = i;
        }
        let m = arrows.len();
        let mut compose = vec![NONE; m * m];
        for (i, &a) in arrows.iter().enumerate() {
            for (j, &b) in arrows.iter().enumerate() {
                if let Some(c) = self.compose(a, b) {
                    assert_ne!(pos[c], usize::MAX, "restriction is not closed");
                    compose[i * m + j] = pos[c] as u32;
                }
            }
        }
        let sub = Self {
            labels: arrows.iter().map(|&a| self.labels[a].clone()).collect(),
            src: arrows.iter().map(|&a| pos[self.src[a]]).collect(),
            rng: arrows.iter().map(|&a| pos[self.rng[a]]).collect(),
            inv: arrows.iter().map(|&a| pos[self.inv[a]]).collect(),
            compose,
            grading: arrows.iter().map(|&a| self.grading[a]).collect(),
            units: self.units.iter().map(|&u| pos[u]).collect(),
            is_unit: arrows.iter().map(|&a| self.is_unit[a]).collect(),
            gamma: self.gamma.clone(),
        };
        (sub, arrows.to_vec())
    }

    /// Raw tables in the interchange form.
    pub fn to_data(&self) -> GroupoidData {
        let n = self.len();
        let mut compose = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.compose(a, b) {
                    compose.push((a, b, c));
                }
            }
        }
        GroupoidData {
            labels: self.labels.clone(),
            units: self.units.clone(),
            src: self.src.clone(),
            rng: self.rng.clone(),
            compose,
            grading: self.grading.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Arc<GradingGroup> {
        Arc::new(GradingGroup::Integers)
    }

    #[test]
    fn pair_groupoid_r2() {
        let g = GradedGroupoid::pair_groupoid_linear(2);
        assert_eq!(g.len(), 4);
        assert_eq!(g.label(1), "(1,2)");
        assert_eq!(g.compose(1, 2), Some(0));
        assert_eq!(g.compose(1, 1), None);
        assert_eq!(g.degree(1), Degree(1));
        assert_eq!(g.degree(2), Degree(-1));
        assert!(g.is_principal() && g.is_effective());
        for a in 0..g.len() {
            assert_eq!(g.src(g.inv(a)), g.rng(a));
            assert_eq!(g.inv(g.inv(a)), a);
        }
    }

    #[test]
    fn bad_grading_rejected() {
        let err = GradedGroupoid::pair_groupoid(2, z(), |i, j| Degree(if i == j { 0 } else { 1 })).unwrap_err();
        match err {
            Error::Axiom(v) => {
                assert_eq!(v.axiom, Axiom::Grading);
                assert!(v.witnesses[0].contains("(1,2) (2,1)"), "{:?}", v.witnesses);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn group_groupoid_not_principal() {
        let z2 = FiniteGroup::cyclic(2);
        let gamma = Arc::new(GradingGroup::Finite(z2.clone()));
        let g = GradedGroupoid::group_groupoid(&z2, gamma, |a| Degree(a as i64)).unwrap();
        assert!(!g.is_principal());
        assert!(!g.is_effective());
        let (e, emb) = g.restrict_to_degree(Degree(0)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(emb, vec![0]);
        assert!(g.restrict_to_degree(Degree(1)).is_err());
    }

    #[test]
    fn disjoint_union_isotropy() {
        let z2 = FiniteGroup::cyclic(2);
        let r2 = GradedGroupoid::pair_groupoid(2, z(), |_, _| Degree(0)).unwrap();
        let g2 = GradedGroupoid::group_groupoid(&z2, z(), |_| Degree(0)).unwrap();
        let u = r2.disjoint_union(&g2, "'").unwrap();
        assert_eq!(u.len(), 6);
        assert!(!u.is_principal());
        assert_eq!(u.isotropy().len(), 4);
    }

    #[test]
    fn epsilon_fiber_of_r2() {
        let g = GradedGroupoid::pair_groupoid_linear(2);
        let (e, _) = g.restrict_to_degree(Degree(0)).unwrap();
        assert_eq!(e.len(), 2);
        let fibers = g.fibers();
        assert_eq!(fibers.values().map(Vec::len).sum::<usize>(), g.len());
        assert!(g.units().iter().all(|&u| g.degree(u) == Degree(0)));
    }

    #[test]
    fn validation_order_and_messages() {
        let gamma = z();
        let base = GradedGroupoid::pair_groupoid_linear(2).to_data();
        let mut missing = base.clone();
        missing.compose.retain(|&(a, b, _)| (a, b) != (1, 2));
        let e = GradedGroupoid::validate(missing, gamma.clone(), 64).unwrap_err();
        assert!(matches!(e, Error::Axiom(ref v) if v.axiom == Axiom::GroupoidComposition));
        let mut units = base.clone();
        units.src[0] = 3;
        let e = GradedGroupoid::validate(units, gamma.clone(), 64).unwrap_err();
        assert!(matches!(e, Error::Axiom(ref v) if v.axiom == Axiom::GroupoidUnits));
        let e = GradedGroupoid::validate(base, gamma, 3).unwrap_err();
        assert!(matches!(e, Error::CapExceeded { .. }));
    }

    #[test]
    fn non_associative_rejected() {
        // one object, three arrows, a left-zero-like table that is not a group
        let gamma = Arc::new(GradingGroup::trivial());
        let t = [[0, 1, 2], [1, 0, 1], [2, 2, 0]];
        let e = GradedGroupoid::from_fn(
            vec!["e".into(), "a".into(), "b".into()],
            vec![0],
            vec![0; 3],
            vec![0; 3],
            |a, b| Some(t[a][b]),
            vec![Degree(0); 3],
            gamma,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Axiom(ref v) if v.axiom == Axiom::GroupoidAssociativity), "{e}");
    }
}
