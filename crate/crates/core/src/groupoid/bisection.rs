use std::collections::{BTreeSet, VecDeque};

use super::{Degree, GradedGroupoid};
use crate::error::{check_cap, Result};

/// A set of arrows on which `src` and `rng` are injective, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bisection {
    arrows: Vec<usize>,
}

impl Bisection {
    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.arrows.binary_search(&a).is_ok()
    }
}

impl GradedGroupoid {
    pub fn is_bisection(&self, set: &[usize]) -> bool {
        let mut s = BTreeSet::new();
        let mut r = BTreeSet::new();
        let mut seen = BTreeSet::new();
        set.iter()
            .all(|&a| !seen.insert(a) || (s.insert(self.src(a)) && r.insert(self.rng(a))))
    }

    pub fn bisection(&self, set: &[usize]) -> Option<Bisection> {
        if !self.is_bisection(set) {
            return None;
        }
        let mut arrows = set.to_vec();
        arrows.sort_unstable();
        arrows.dedup();
        Some(Bisection { arrows })
    }

    pub fn unit_bisection(&self) -> Bisection {
        Bisection {
            arrows: self.units().to_vec(),
        }
    }

    /// The common degree of a nonempty homogeneous set.
    pub fn homogeneous_degree(&self, set: &[usize]) -> Option<Degree> {
        let d = self.degree(*set.first()?);
        set.iter().all(|&a| self.degree(a) == d).then_some(d)
    }

    /// `BD = {αβ : α ∈ B, β ∈ D, src(α) = rng(β)}`.
    pub fn bisection_product(&self, b: &Bisection, d: &Bisection) -> Bisection {
        let mut out = Vec::new();
        for &x in &b.arrows {
            for &y in &d.arrows {
                if let Some(z) = self.compose(x, y) {
                    out.push(z);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        debug_assert!(self.is_bisection(&out));
        Bisection { arrows: out }
    }

    pub fn bisection_inverse(&self, b: &Bisection) -> Bisection {
        let mut out: Vec<usize> = b.arrows.iter().map(|&a| self.inv(a)).collect();
        out.sort_unstable();
        Bisection { arrows: out }
    }

    pub fn singleton_bisections(&self) -> Vec<Bisection> {
        (0..self.len()).map(|a| Bisection { arrows: vec![a] }).collect()
    }

    /// Closure of `gens` under products and inverses, in breadth-first order.
    pub fn bisection_closure(&self, gens: &[Bisection], cap: u64) -> Result<Vec<Bisection>> {
        let mut seen: BTreeSet<Bisection> = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue: VecDeque<Bisection> = gens.iter().cloned().collect();
        while let Some(b) = queue.pop_front() {
            if !seen.insert(b.clone()) {
                continue;
            }
            check_cap("bisection closure", seen.len() as u128, cap)?;
            order.push(b.clone());
            let inv = self.bisection_inverse(&b);
            if !seen.contains(&inv) {
                queue.push_back(inv);
            }
            for other in order.clone() {
                for p in [self.bisection_product(&b, &other), self.bisection_product(&other, &b)] {
                    if !seen.contains(&p) {
                        queue.push_back(p);
                    }
                }
            }
        }
        Ok(order)
    }

    /// Every nonempty bisection contained in a single fiber `G_γ`, grouped by
    /// ascending degree and listed in lexicographic arrow order within a fiber.
    pub fn all_homogeneous_bisections(&self, cap: u64) -> Result<Vec<(Degree, Bisection)>> {
        let mut out = Vec::new();
        for (d, fiber) in self.fibers() {
            let mut cur = Vec::new();
            let mut used_s = BTreeSet::new();
            let mut used_r = BTreeSet::new();
            self.extend_bisections(&fiber, 0, &mut cur, &mut used_s, &mut used_r, d, &mut out, cap)?;
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_bisections(
        &self,
        fiber: &[usize],
        from: usize,
        cur: &mut Vec<usize>,
        used_s: &mut BTreeSet<usize>,
        used_r: &mut BTreeSet<usize>,
        d: Degree,
        out: &mut Vec<(Degree, Bisection)>,
        cap: u64,
    ) -> Result<()> {
        for i in from..fiber.len() {
            let a = fiber[i];
            let (s, r) = (self.src(a), self.rng(a));
            if used_s.contains(&s) || used_r.contains(&r) {
                continue;
            }
            cur.push(a);
            used_s.insert(s);
            used_r.insert(r);
            out.push((d, Bisection { arrows: cur.clone() }));
            check_cap("homogeneous bisections", out.len() as u128, cap)?;
            self.extend_bisections(fiber, i + 1, cur, used_s, used_r, d, out, cap)?;
            cur.pop();
            used_s.remove(&s);
            used_r.remove(&r);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::groupoid::{FiniteGroup, GradingGroup};

    #[test]
    fn bisection_examples() {
        let g = GradedGroupoid::pair_groupoid_linear(2);
        // arrows: 0=(1,1) 1=(1,2) 2=(2,1) 3=(2,2)
        assert!(g.is_bisection(g.units()));
        assert!(g.is_bisection(&[1, 2]));
        assert!(!g.is_bisection(&[0, 1]));
        let b = g.bisection(&[1]).unwrap();
        let d = g.bisection(&[2]).unwrap();
        assert_eq!(g.bisection_product(&b, &d).arrows(), &[0]);
        assert_eq!(g.homogeneous_degree(g.bisection_inverse(&b).arrows()), Some(Degree(-1)));
    }

    #[test]
    fn closure_stays_bisections() {
        let g = GradedGroupoid::pair_groupoid_linear(3);
        let closed = g.bisection_closure(&g.singleton_bisections(), 10_000).unwrap();
        for b in &closed {
            for d in &closed {
                assert!(g.is_bisection(g.bisection_product(b, d).arrows()));
            }
            assert!(g.is_bisection(g.bisection_inverse(b).arrows()));
        }
        // singletons plus the empty bisection
        assert_eq!(closed.len(), 10);
    }

    #[test]
    fn homogeneous_bisections_count() {
        let z2 = FiniteGroup::cyclic(2);
        let g = GradedGroupoid::group_groupoid(&z2, Arc::new(GradingGroup::trivial()), |_| Degree(0)).unwrap();
        // one object: the bisections are the singletons
        assert_eq!(g.all_homogeneous_bisections(100).unwrap().len(), 2);
        let r2 = GradedGroupoid::pair_groupoid(2, Arc::new(GradingGroup::trivial()), |_, _| Degree(0)).unwrap();
        // 4 singletons + {11,22} + {12,21}
        assert_eq!(r2.all_homogeneous_bisections(100).unwrap().len(), 6);
        let all = r2.all_homogeneous_bisections(100).unwrap();
        for (_, b) in &all {
            assert!(r2.is_bisection(b.arrows()));
        }
    }
}
