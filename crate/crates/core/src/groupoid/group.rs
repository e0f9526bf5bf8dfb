//! Grading groups.

use std::fmt;

use crate::error::{Axiom, AxiomViolation, Result};

/// An element of the grading group. For [`GradingGroup::Integers`] it is the
/// integer itself; for a finite group it is an index into the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Degree(pub i64);

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    cyclic: Option<usize>,
}

impl FiniteGroup {
    pub fn new(labels: Vec<String>, mul: &[Vec<usize>], identity: usize) -> Result<Self> {
        let n = labels.len();
        let fail = |d: String| AxiomViolation::new(Axiom::GroupAxiom, d);
        if n == 0 {
            return Err(fail("empty group".into()).into());
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(fail(format!("multiplication table must be {n}x{n}")).into());
        }
        if mul.iter().flatten().any(|&v| v >= n) {
            return Err(fail("table entry out of range".into()).into());
        }
        if identity >= n {
            return Err(fail("identity out of range".into()).into());
        }
        for a in 0..n {
            if mul[identity][a] != a || mul[a][identity] != a {
                return Err(fail("identity law fails".into())
                    .with_witness(labels[a].clone())
                    .into());
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(fail("associativity fails".into())
                            .with_witness(format!("({}, {}, {})", labels[a], labels[b], labels[c]))
                            .into());
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == identity && mul[b][a] == identity) {
                Some(b) => inverse[a] = b,
                None => {
                    return Err(fail("element without inverse".into())
                        .with_witness(labels[a].clone())
                        .into())
                }
            }
        }
        Ok(Self {
            labels,
            mul: mul.iter().flatten().copied().collect(),
            identity,
            inverse,
            cyclic: None,
        })
    }

    /// `Z/n` with elements labelled `0..n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let labels = (0..n).map(|k| k.to_string()).collect();
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut g = Self::new(labels, &mul, 0).expect("cyclic group table is valid");
        g.cyclic = Some(n);
        g
    }

    /// Relabels the elements; labels must be distinct.
    pub fn relabel(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.labels.len());
        self.labels = labels;
        self
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cyclic_order(&self) -> Option<usize> {
        self.cyclic
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order()).map(|r| r.to_vec()).collect()
    }
}

/// The group a groupoid is graded by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradingGroup {
    /// The additive integers. Only finitely many degrees ever occur.
    Integers,
    Finite(FiniteGroup),
}

impl GradingGroup {
    pub fn trivial() -> Self {
        GradingGroup::Finite(FiniteGroup::cyclic(1))
    }

    pub fn identity(&self) -> Degree {
        match self {
            GradingGroup::Integers => Degree(0),
            GradingGroup::Finite(g) => Degree(g.identity() as i64),
        }
    }

    pub fn mul(&self, a: Degree, b: Degree) -> Degree {
        match self {
            GradingGroup::Integers => Degree(a.0 + b.0),
            GradingGroup::Finite(g) => Degree(g.mul(a.0 as usize, b.0 as usize) as i64),
        }
    }

    pub fn inv(&self, a: Degree) -> Degree {
        match self {
            GradingGroup::Integers => Degree(-a.0),
            GradingGroup::Finite(g) => Degree(g.inverse(a.0 as usize) as i64),
        }
    }

    pub fn contains(&self, a: Degree) -> bool {
        match self {
            GradingGroup::Integers => true,
            GradingGroup::Finite(g) => a.0 >= 0 && (a.0 as usize) < g.order(),
        }
    }

    pub fn label(&self, a: Degree) -> String {
        match self {
            GradingGroup::Integers => a.0.to_string(),
            GradingGroup::Finite(g) => g.labels()[a.0 as usize].clone(),
        }
    }

    pub fn by_label(&self, label: &str) -> Option<Degree> {
        match self {
            GradingGroup::Integers => label.trim().parse().ok().map(Degree),
            GradingGroup::Finite(g) => g.labels().iter().position(|l| l == label).map(|p| Degree(p as i64)),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, GradingGroup::Finite(g) if g.order() == 1)
    }

    pub fn describe(&self) -> String {
        match self {
            GradingGroup::Integers => "Z".into(),
            GradingGroup::Finite(g) => match g.cyclic_order() {
                Some(1) => "trivial".into(),
                Some(n) => format!("Z/{n}"),
                None => format!("finite group of order {}", g.order()),
            },
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
