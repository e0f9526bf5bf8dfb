//! Normalisers of `C`: `n` with a partner `m` such that `mnm = m`, `nmn = n`
//! and `mCn ∪ nCm ⊆ C`.

use std::collections::HashMap;

use super::{LexVectors, StructuredAlgebra, Vector};
use crate::error::{check_cap, pow_count, Error, Result};
use crate::finring::linalg::{howell_solve, RMatrix, Span};
use crate::finring::Elem;
use crate::groupoid::Degree;
use crate::par::Exec;
use crate::steinberg::SteinbergAlgebra;
use crate::Config;

/// How the partner `m` of a candidate `n` is searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// `Linear` over `Z/n`, `Scan` over table rings.
    #[default]
    Auto,
    /// `nmn = n` and the `C`-conditions are linear in `m`; solve them and scan
    /// only the affine solution set for `mnm = m`.
    Linear,
    /// Try every `m` in the algebra.
    Scan,
}

/// Normalisers in lexicographic order with all their partners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormaliserList {
    pub homogeneous: bool,
    pub entries: Vec<(Vector, Vec<Vector>)>,
}

impl NormaliserList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn elements(&self) -> Vec<Vector> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }

    /// First normaliser with more than one partner.
    pub fn non_unique_partner(&self) -> Option<&Vector> {
        self.entries.iter().find(|(_, m)| m.len() > 1).map(|(n, _)| n)
    }
}

/// Whether `(n, m)` satisfies the normaliser equations.
pub fn is_normaliser_pair(alg: &StructuredAlgebra, n: &[Elem], m: &[Elem]) -> bool {
    let mn = alg.mul(m, n);
    let nm = alg.mul(n, m);
    if alg.mul(&mn, m) != m || alg.mul(&nm, n) != n {
        return false;
    }
    alg.c_basis().iter().all(|&c| {
        let cv = alg.basis_vec(c);
        alg.in_c(&alg.mul(&alg.mul(m, &cv), n)) && alg.in_c(&alg.mul(&alg.mul(n, &cv), m))
    })
}

fn linear_partners(alg: &StructuredAlgebra, n: &[Elem], cap: u64) -> Result<Vec<Vector>> {
    let r = &**alg.ring();
    let d = alg.dim();
    if alg.is_zero(n) {
        return Ok(vec![alg.zero()]);
    }
    let outside: Vec<usize> = (0..d).filter(|&k| !alg.is_c_basis(k)).collect();
    let cn: Vec<Vector> = alg.c_basis().iter().map(|&c| alg.mul(&alg.basis_vec(c), n)).collect();
    let nc: Vec<Vector> = alg.c_basis().iter().map(|&c| alg.mul(n, &alg.basis_vec(c))).collect();
    let mut columns = Vec::with_capacity(d);
    for j in 0..d {
        let bj = alg.basis_vec(j);
        let mut col = alg.mul(&alg.mul(n, &bj), n);
        for (x, y) in cn.iter().zip(&nc) {
            let left = alg.mul(&bj, x);
            let right = alg.mul(y, &bj);
            col.extend(outside.iter().map(|&k| left[k]));
            col.extend(outside.iter().map(|&k| right[k]));
        }
        columns.push(col);
    }
    let rows = columns[0].len();
    let mat = RMatrix::from_columns(rows, &columns);
    let mut rhs = n.to_vec();
    rhs.resize(rows, r.zero());
    let rep = howell_solve(r, &mat, &rhs)?;
    let Some(x0) = rep.solution else {
        return Ok(Vec::new());
    };
    let span = Span::new(r, d, &rep.kernel, cap)?;
    let mut out: Vec<Vector> = span
        .elements(r, cap)?
        .into_iter()
        .map(|k| alg.add(&x0, &k))
        .filter(|m| alg.mul(&alg.mul(m, n), m) == *m)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn scan_partners(alg: &StructuredAlgebra, n: &[Elem]) -> Vec<Vector> {
    LexVectors::new(alg.ring().size(), alg.dim())
        .filter(|m| is_normaliser_pair(alg, n, m))
        .collect()
}

/// Candidate enumeration: zero, then the nonzero vectors of each scope
/// segment in lexicographic order.
struct Candidates {
    q: usize,
    segments: Vec<(Vec<usize>, u128)>,
    total: u128,
}

impl Candidates {
    fn new(alg: &StructuredAlgebra, homogeneous: bool) -> Self {
        let q = alg.ring().size();
        let segs: Vec<Vec<usize>> = if homogeneous {
            alg.degrees().into_iter().map(|g| alg.fiber(g)).collect()
        } else {
            vec![(0..alg.dim()).collect()]
        };
        let segments: Vec<(Vec<usize>, u128)> = segs
            .into_iter()
            .map(|s| {
                let c = pow_count(q, s.len()).saturating_sub(1);
                (s, c)
            })
            .collect();
        let total = segments.iter().fold(1u128, |a, (_, c)| a.saturating_add(*c));
        Self { q, segments, total }
    }

    fn get(&self, alg: &StructuredAlgebra, mut idx: u128) -> Vector {
        if idx == 0 {
            return alg.zero();
        }
        idx -= 1;
        for (pos, count) in &self.segments {
            if idx < *count {
                let coeffs = LexVectors::nth_vector(self.q, pos.len(), idx + 1);
                return alg.embed(pos, &coeffs);
            }
            idx -= count;
        }
        unreachable!("candidate index out of range")
    }
}

/// Every normaliser of `C` in `alg` (only homogeneous ones when
/// `homogeneous`), with every partner `m` found anywhere in the algebra.
pub fn exhaustive_normalisers(
    alg: &StructuredAlgebra,
    homogeneous: bool,
    strategy: Strategy,
    cfg: &Config,
) -> Result<NormaliserList> {
    let cands = Candidates::new(alg, homogeneous);
    check_cap("normaliser candidates", cands.total, cfg.cap)?;
    let strategy = match strategy {
        Strategy::Auto if alg.ring().modulus().is_some() => Strategy::Linear,
        Strategy::Auto => Strategy::Scan,
        s => s,
    };
    if strategy == Strategy::Scan {
        let space = pow_count(alg.ring().size(), alg.dim());
        check_cap("normaliser pair scan", cands.total.saturating_mul(space), cfg.cap)?;
    }
    let found: Vec<Result<Option<(Vector, Vec<Vector>)>>> = cfg.exec.map(cands.total as usize, |i| {
        let n = cands.get(alg, i as u128);
        let partners = match strategy {
            Strategy::Scan => scan_partners(alg, &n),
            _ => linear_partners(alg, &n, cfg.cap)?,
        };
        Ok((!partners.is_empty()).then_some((n, partners)))
    });
    let mut entries = Vec::new();
    for f in found {
        if let Some(e) = f? {
            entries.push(e);
        }
    }
    entries.sort();
    Ok(NormaliserList { homogeneous, entries })
}

/// `{Σ_{α∈B} u_α δ_α : B a homogeneous bisection, u_α ∈ R^×} ∪ {0}` with the
/// partner `Σ (u_α ω(α, α⁻¹))⁻¹ δ_{α⁻¹}`. Complete exactly when every
/// homogeneous normaliser has bisection support.
pub fn structural_normalisers(st: &SteinbergAlgebra, cfg: &Config) -> Result<NormaliserList> {
    let g = st.groupoid();
    let r = &**st.ring();
    let alg = st.to_structured();
    let bis = g.all_homogeneous_bisections(cfg.cap)?;
    let total: u128 = bis
        .iter()
        .map(|(_, b)| pow_count(r.units().len(), b.len()))
        .fold(1, |a, c| a.saturating_add(c));
    check_cap("structural normalisers", total, cfg.cap)?;
    let mut entries = vec![(alg.zero(), vec![alg.zero()])];
    let m = r.units().len();
    for (_, b) in &bis {
        for choice in LexVectors::new(m, b.len()) {
            let mut n = alg.zero();
            let mut dag = alg.zero();
            for (&a, &k) in b.arrows().iter().zip(&choice) {
                let u = r.units()[k as usize];
                n[a] = u;
                let w = st.twist().omega(a, g.inv(a));
                dag[g.inv(a)] = r.inv(r.mul(u, w)).expect("unit");
            }
            if !is_normaliser_pair(&alg, &n, &dag) {
                return Err(Error::TheoremViolation(format!(
                    "bisection element {} is not a normaliser",
                    alg.format_elem(&n)
                )));
            }
            entries.push((n, vec![dag]));
        }
    }
    entries.sort();
    entries.dedup();
    Ok(NormaliserList {
        homogeneous: true,
        entries,
    })
}

const NONE: u32 = u32::MAX;

/// A finite set of normalisers with its dagger and product table.
#[derive(Debug, Clone)]
pub struct NormaliserSemigroup {
    elements: Vec<Vector>,
    index: HashMap<Vector, usize>,
    dagger: Vec<usize>,
    dagger_unique: bool,
    prod: Vec<u32>,
    zero: usize,
    degree: Vec<Option<Degree>>,
}

/// First failure of each inverse-semigroup law, if any.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SemigroupLaws {
    pub closure: Option<String>,
    pub anti_homomorphism: Option<String>,
    pub involution: Option<String>,
    pub idempotents_commute: Option<String>,
    pub idempotents_are_ic: Option<String>,
}

impl SemigroupLaws {
    pub fn all_hold(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<(&'static str, &str)> {
        [
            ("closure", &self.closure),
            ("(mn)† = n†m†", &self.anti_homomorphism),
            ("n†† = n", &self.involution),
            ("idempotents commute", &self.idempotents_commute),
            ("idempotents = I(C)", &self.idempotents_are_ic),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }
}

impl NormaliserSemigroup {
    pub fn build(alg: &StructuredAlgebra, list: &NormaliserList, exec: Exec) -> Result<Self> {
        let elements = list.elements();
        let index: HashMap<Vector, usize> = elements.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let zero = *index
            .get(&alg.zero())
            .ok_or_else(|| Error::Precondition("0 is missing from the normaliser set".into()))?;
        let mut dagger = Vec::with_capacity(elements.len());
        for (n, partners) in &list.entries {
            let m = &partners[0];
            match index.get(m) {
                Some(&k) => dagger.push(k),
                None => {
                    return Err(Error::Precondition(format!(
                        "partner {} of {} is not in the set",
                        alg.format_elem(m),
                        alg.format_elem(n)
                    )))
                }
            }
        }
        let k = elements.len();
        let prod: Vec<u32> = exec.map(k * k, |ij| {
            let p = alg.mul(&elements[ij / k], &elements[ij % k]);
            index.get(&p).map_or(NONE, |&x| x as u32)
        });
        let degree = elements.iter().map(|v| alg.homogeneous_degree(v)).collect();
        Ok(Self {
            dagger_unique: list.non_unique_partner().is_none(),
            elements,
            index,
            dagger,
            prod,
            zero,
            degree,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Vector {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Vector] {
        &self.elements
    }

    pub fn index_of(&self, v: &[Elem]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn dagger(&self, i: usize) -> usize {
        self.dagger[i]
    }

    pub fn dagger_unique(&self) -> bool {
        self.dagger_unique
    }

    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        let p = self.prod[i * self.len() + j];
        (p != NONE).then_some(p as usize)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    /// `None` for zero.
    pub fn degree(&self, i: usize) -> Option<Degree> {
        self.degree[i]
    }

    pub fn is_closed(&self) -> bool {
        !self.prod.contains(&NONE)
    }

    pub fn is_idempotent(&self, i: usize) -> bool {
        self.product(i, i) == Some(i)
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_idempotent(i)).collect()
    }

    /// `n ≤ m` iff `n = m n† n`.
    pub fn leq(&self, n: usize, m: usize) -> bool {
        self.product(self.dagger(n), n)
            .and_then(|e| self.product(m, e))
            == Some(n)
    }

    /// `↑n` in element order.
    pub fn up_set(&self, n: usize) -> Vec<usize> {
        (0..self.len()).filter(|&m| self.leq(n, m)).collect()
    }

    /// Nonzero elements with nothing nonzero strictly below them.
    pub fn minimal_nonzero(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&n| n != self.zero)
            .filter(|&n| (0..self.len()).all(|m| m == n || m == self.zero || !self.leq(m, n)))
            .collect()
    }

    pub fn laws(&self, alg: &StructuredAlgebra, ic: &[Vector]) -> SemigroupLaws {
        let f = |i: usize| alg.format_elem(&self.elements[i]);
        let k = self.len();
        let mut laws = SemigroupLaws::default();
        'outer: for i in 0..k {
            for j in 0..k {
                match self.product(i, j) {
                    None => {
                        laws.closure.get_or_insert(format!("{} · {}", f(i), f(j)));
                        continue;
                    }
                    Some(p) => {
                        let want = self.product(self.dagger(j), self.dagger(i));
                        if want != Some(self.dagger(p)) && laws.anti_homomorphism.is_none() {
                            laws.anti_homomorphism = Some(format!("({}, {})", f(i), f(j)));
                        }
                    }
                }
                if laws.closure.is_some() && laws.anti_homomorphism.is_some() {
                    break 'outer;
                }
            }
        }
        if let Some(i) = (0..k).find(|&i| self.dagger(self.dagger(i)) != i) {
            laws.involution = Some(f(i));
        }
        let idem = self.idempotents();
        'comm: for &e in &idem {
            for &g in &idem {
                if self.product(e, g) != self.product(g, e) {
                    laws.idempotents_commute = Some(format!("({}, {})", f(e), f(g)));
                    break 'comm;
                }
            }
        }
        let mut mine: Vec<&Vector> = idem.iter().map(|&i| &self.elements[i]).collect();
        mine.sort();
        let mut theirs: Vec<&Vector> = ic.iter().collect();
        theirs.sort();
        if mine != theirs {
            let extra = mine
                .iter()
                .find(|v| !theirs.contains(v))
                .or_else(|| theirs.iter().find(|v| !mine.contains(v)));
            laws.idempotents_are_ic = Some(extra.map_or_else(String::new, |v| alg.format_elem(v)));
        }
        laws
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::tests::m2;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn m2_f2_graded_normalisers() {
        let a = m2(2, true);
        let list = exhaustive_normalisers(&a, true, Strategy::Auto, &cfg()).unwrap();
        let shown: Vec<String> = list.elements().iter().map(|v| a.format_elem(v)).collect();
        assert_eq!(shown, ["0", "E22", "E21", "E12", "E11", "E11 + E22"]);
        assert!(list.non_unique_partner().is_none());
        let e12 = a.basis_vec(1);
        let (_, partners) = list.entries.iter().find(|(n, _)| *n == e12).unwrap();
        assert_eq!(partners, &vec![a.basis_vec(2)]);
        let scan = exhaustive_normalisers(&a, true, Strategy::Scan, &cfg()).unwrap();
        assert_eq!(scan, list);
    }

    #[test]
    fn semigroup_laws_hold_on_m2() {
        for p in [2, 3] {
            let a = m2(p, true);
            let list = exhaustive_normalisers(&a, true, Strategy::Auto, &cfg()).unwrap();
            let s = NormaliserSemigroup::build(&a, &list, Exec::Sequential).unwrap();
            let ic = a.idempotents_of_c(100).unwrap();
            let laws = s.laws(&a, &ic);
            assert!(laws.all_hold(), "{laws:?}");
            assert!(s.is_closed());
            // minimal nonzero: scalar multiples of matrix units
            assert_eq!(s.minimal_nonzero().len(), 4 * (p as usize - 1));
        }
    }

    #[test]
    fn linear_and_scan_agree_ungraded() {
        let a = m2(3, false);
        let l = exhaustive_normalisers(&a, false, Strategy::Linear, &cfg()).unwrap();
        let s = exhaustive_normalisers(&a, false, Strategy::Scan, &cfg()).unwrap();
        assert_eq!(l, s);
        let seq = exhaustive_normalisers(
            &a,
            false,
            Strategy::Linear,
            &Config {
                exec: Exec::Sequential,
                ..cfg()
            },
        )
        .unwrap();
        assert_eq!(l, seq);
    }

    #[test]
    fn cap_applies() {
        let a = m2(3, false);
        let tight = Config { cap: 10, ..cfg() };
        assert!(matches!(
            exhaustive_normalisers(&a, false, Strategy::Auto, &tight),
            Err(Error::CapExceeded { .. })
        ));
    }
}
