//! The pair conditions and the diagonal / Cartan / quasi-Cartan verdicts.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::normalisers::{exhaustive_normalisers, NormaliserList, Strategy};
use super::{LexVectors, StructuredAlgebra, Vector};
use crate::error::{pow_count, Error, Result};
use crate::finring::linalg::{kernel, RMatrix, Span};
use crate::steinberg::SteinbergAlgebra;
use crate::twist::CocycleTwist;
use crate::Config;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// Fails, with witnesses.
    Fails(Vec<String>),
    /// Could not be decided, with the reason.
    Undecided(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn fail(w: impl Into<String>) -> Self {
        Verdict::Fails(vec![w.into()])
    }

    /// Conjunction of named conditions: the first failure wins, then the first
    /// undecided condition.
    pub fn all(parts: &[(&str, &Verdict)]) -> Verdict {
        if let Some((name, Verdict::Fails(w))) = parts.iter().find(|(_, v)| v.fails()) {
            return Verdict::Fails(w.iter().map(|w| format!("{name}: {w}")).collect());
        }
        if let Some((name, Verdict::Undecided(r))) = parts.iter().find(|(_, v)| matches!(v, Verdict::Undecided(_))) {
            return Verdict::Undecided(format!("{name}: {r}"));
        }
        Verdict::Holds
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails(_) => Some(false),
            Verdict::Undecided(_) => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("true"),
            Verdict::Fails(w) if w.is_empty() => f.write_str("false"),
            Verdict::Fails(w) => write!(f, "false [{}]", w.join("; ")),
            Verdict::Undecided(r) => write!(f, "undecided({r})"),
        }
    }
}

/// Converts a cap overflow into an undecided verdict.
fn capped<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(t) => Ok(Ok(t)),
        Err(Error::CapExceeded { .. }) => Ok(Err("cap".into())),
        Err(e) => Err(e),
    }
}

/// The conditions on an ungraded pair `(A, C)`.
#[derive(Debug, Clone)]
pub struct UngradedReport {
    pub wt: Verdict,
    /// `I(C) = {0}`, so WT holds vacuously.
    pub wt_degenerate: bool,
    pub local_units: Verdict,
    pub local_unit: Option<Vector>,
    pub c_spanned_by_idempotents: Verdict,
    pub a_spanned_by_normalisers: Verdict,
    pub expectation: Verdict,
    pub faithful: Verdict,
    /// `linear`, `exhaustive` or `sampled`.
    pub faithful_method: &'static str,
    pub implemented_by_idempotents: Verdict,
    pub free_span: Verdict,
    pub maximal_commutative: Verdict,
    pub idempotents: Option<Vec<Vector>>,
    pub normalisers: Option<NormaliserList>,
}

impl UngradedReport {
    /// WT and pair conditions (i)-(iv).
    pub fn base(&self) -> Verdict {
        Verdict::all(&[
            ("WT", &self.wt),
            ("local units", &self.local_units),
            ("C = span I(C)", &self.c_spanned_by_idempotents),
            ("A = span N(C)", &self.a_spanned_by_normalisers),
            ("conditional expectation", &self.expectation),
            ("faithful", &self.faithful),
        ])
    }

    pub fn adp(&self) -> Verdict {
        Verdict::all(&[("pair", &self.base()), ("spanned by free normalisers", &self.free_span)])
    }

    pub fn acp(&self) -> Verdict {
        Verdict::all(&[("pair", &self.base()), ("C maximal commutative", &self.maximal_commutative)])
    }

    pub fn aqp(&self) -> Verdict {
        Verdict::all(&[("pair", &self.base()), ("implemented by idempotents", &self.implemented_by_idempotents)])
    }
}

/// First `(t, e)` with `t ≠ 0`, `e ∈ I(C)` nonzero and `te = 0`, scanning `t`
/// outermost.
pub fn check_wt(alg: &StructuredAlgebra, ids: &[Vector]) -> Verdict {
    let r = &**alg.ring();
    for t in r.elements().filter(|&t| t != r.zero()) {
        for e in ids.iter().filter(|e| !alg.is_zero(e)) {
            if alg.is_zero(&alg.scale(t, e)) {
                return Verdict::fail(format!("({}, {})", r.label(t), alg.format_elem(e)));
            }
        }
    }
    Verdict::Holds
}

fn check_local_units(alg: &StructuredAlgebra, ids: &[Vector]) -> (Verdict, Option<Vector>) {
    let d = alg.dim();
    let fixed = |e: &Vector| {
        (0..d)
            .filter(|&k| {
                let b = alg.basis_vec(k);
                alg.mul(e, &b) == b && alg.mul(&b, e) == b
            })
            .count()
    };
    let mut best: Option<(usize, &Vector)> = None;
    for e in ids {
        let f = fixed(e);
        if f == d {
            return (Verdict::Holds, Some(e.clone()));
        }
        if best.is_none_or(|(bf, _)| f > bf) {
            best = Some((f, e));
        }
    }
    let witness = match best {
        Some((_, e)) => (0..d)
            .find(|&k| {
                let b = alg.basis_vec(k);
                alg.mul(e, &b) != b || alg.mul(&b, e) != b
            })
            .map_or_else(String::new, |k| alg.labels()[k].clone()),
        None => alg.labels().first().cloned().unwrap_or_default(),
    };
    (Verdict::fail(witness), None)
}

fn spans_all(alg: &StructuredAlgebra, gens: &[Vector], cap: u64) -> Result<Verdict> {
    let span = match capped(Span::new(alg.ring(), alg.dim(), gens, cap))? {
        Ok(s) => s,
        Err(r) => return Ok(Verdict::Undecided(r)),
    };
    Ok(match (0..alg.dim()).find(|&k| !span.contains(&alg.basis_vec(k))) {
        Some(k) => Verdict::fail(alg.labels()[k].clone()),
        None => Verdict::Holds,
    })
}

fn check_expectation(alg: &StructuredAlgebra) -> Result<Verdict> {
    if alg.expectation().is_none() {
        return Ok(Verdict::Undecided("no expectation on this algebra".into()));
    }
    for &c in alg.c_basis() {
        let b = alg.basis_vec(c);
        if alg.apply_p(&b)? != b {
            return Ok(Verdict::fail(format!("P({}) != {}", alg.labels()[c], alg.labels()[c])));
        }
    }
    for a in 0..alg.dim() {
        let av = alg.basis_vec(a);
        let pa = alg.apply_p(&av)?;
        for &c in alg.c_basis() {
            for &c2 in alg.c_basis() {
                let (cv, c2v) = (alg.basis_vec(c), alg.basis_vec(c2));
                let lhs = alg.apply_p(&alg.mul(&alg.mul(&cv, &av), &c2v))?;
                let rhs = alg.mul(&alg.mul(&cv, &pa), &c2v);
                if lhs != rhs {
                    let l = alg.labels();
                    return Ok(Verdict::fail(format!("P({} {} {})", l[c], l[a], l[c2])));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

fn check_faithful(alg: &StructuredAlgebra, ns: &[Vector], cfg: &Config) -> Result<(Verdict, &'static str)> {
    let r = &**alg.ring();
    let d = alg.dim();
    // a ↦ (P(n a))_n is linear; faithfulness is triviality of its kernel
    let mut columns: Vec<Vector> = vec![Vec::new(); d];
    for n in ns {
        for (j, col) in columns.iter_mut().enumerate() {
            col.extend(alg.apply_p(&alg.mul(n, &alg.basis_vec(j)))?);
        }
    }
    if r.modulus().is_some() {
        let rows = columns[0].len();
        if rows == 0 {
            return Ok((
                if d == 0 { Verdict::Holds } else { Verdict::fail(alg.labels()[0].clone()) },
                "linear",
            ));
        }
        let m = RMatrix::from_columns(rows, &columns);
        let ker = kernel(r, &m, cfg.cap)?;
        return Ok(match ker.first() {
            Some(k) => (Verdict::fail(alg.format_elem(k)), "linear"),
            None => (Verdict::Holds, "linear"),
        });
    }
    let witnessed = |a: &Vector| ns.iter().any(|n| !alg.is_zero(&alg.apply_p(&alg.mul(n, a)).expect("domain")));
    let total = pow_count(r.size(), d);
    if total <= cfg.cap as u128 {
        for a in LexVectors::new(r.size(), d).skip(1) {
            if !witnessed(&a) {
                return Ok((Verdict::fail(alg.format_elem(&a)), "exhaustive"));
            }
        }
        return Ok((Verdict::Holds, "exhaustive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples: Vec<Vector> = (0..d).map(|k| alg.basis_vec(k)).collect();
    for _ in 0..4096 {
        samples.push((0..d).map(|_| rng.gen_range(0..r.size()) as u16).collect());
    }
    for a in samples.iter().filter(|a| !alg.is_zero(a)) {
        if !witnessed(a) {
            return Ok((Verdict::fail(alg.format_elem(a)), "sampled"));
        }
    }
    Ok((Verdict::Holds, "sampled"))
}

fn check_implemented(alg: &StructuredAlgebra, ns: &[Vector], ids: &[Vector]) -> Result<Verdict> {
    for n in ns {
        let p = alg.apply_p(n)?;
        if !ids.iter().any(|e| alg.mul(n, e) == p && alg.mul(e, n) == p) {
            return Ok(Verdict::fail(alg.format_elem(n)));
        }
    }
    Ok(Verdict::Holds)
}

fn check_commutant(alg: &StructuredAlgebra, cfg: &Config) -> Result<Verdict> {
    let d = alg.dim();
    let mut columns: Vec<Vector> = vec![Vec::new(); d];
    for &c in alg.c_basis() {
        let cv = alg.basis_vec(c);
        for (j, col) in columns.iter_mut().enumerate() {
            let b = alg.basis_vec(j);
            col.extend(alg.sub(&alg.mul(&b, &cv), &alg.mul(&cv, &b)));
        }
    }
    let gens: Vec<Vector> = if columns.first().is_none_or(|c| c.is_empty()) {
        (0..d).map(|k| alg.basis_vec(k)).collect()
    } else {
        let m = RMatrix::from_columns(columns[0].len(), &columns);
        match capped(kernel(alg.ring(), &m, cfg.cap))? {
            Ok(k) => k,
            Err(r) => return Ok(Verdict::Undecided(r)),
        }
    };
    Ok(match gens.iter().find(|g| !alg.in_c(g)) {
        Some(g) => Verdict::fail(alg.format_elem(g)),
        None => Verdict::Holds,
    })
}

/// Checks every condition on `(alg, C)` with the grading ignored.
pub fn analyze_ungraded(alg: &StructuredAlgebra, cfg: &Config) -> Result<UngradedReport> {
    let und = |r: &str| Verdict::Undecided(r.to_string());
    let ids = capped(alg.idempotents_of_c(cfg.cap))?;
    let (wt, wt_degenerate, local_units, local_unit, c_span) = match &ids {
        Ok(ids) => {
            let (lu, e) = check_local_units(alg, ids);
            let c_gens: Vec<Vector> = ids.clone();
            let span = capped(Span::new(alg.ring(), alg.dim(), &c_gens, cfg.cap))?;
            let c_span = match span {
                Ok(s) => match alg.c_basis().iter().find(|&&c| !s.contains(&alg.basis_vec(c))) {
                    Some(&c) => Verdict::fail(alg.labels()[c].clone()),
                    None => Verdict::Holds,
                },
                Err(r) => Verdict::Undecided(r),
            };
            (check_wt(alg, ids), ids.iter().all(|e| alg.is_zero(e)), lu, e, c_span)
        }
        Err(r) => (und(r), false, und(r), None, und(r)),
    };
    let expectation = check_expectation(alg)?;
    let ns = capped(exhaustive_normalisers(alg, false, Strategy::Auto, cfg))?;
    let (a_span, faithful, method, implemented, free_span) = match &ns {
        Ok(list) => {
            let elems = list.elements();
            let a_span = spans_all(alg, &elems, cfg.cap)?;
            let free: Vec<Vector> = list
                .entries
                .iter()
                .filter(|(n, m)| {
                    let m = &m[0];
                    alg.in_c(n) || alg.is_zero(&alg.mul(&alg.mul(m, n), &alg.mul(n, m)))
                })
                .map(|(n, _)| n.clone())
                .collect();
            let free_span = spans_all(alg, &free, cfg.cap)?;
            let (faithful, method, implemented) = if alg.expectation().is_some() {
                let (f, m) = match capped(check_faithful(alg, &elems, cfg))? {
                    Ok(x) => x,
                    Err(r) => (Verdict::Undecided(r), "linear"),
                };
                let imp = match &ids {
                    Ok(ids) => check_implemented(alg, &elems, ids)?,
                    Err(r) => und(r),
                };
                (f, m, imp)
            } else {
                let r = "no expectation on this algebra";
                (und(r), "none", und(r))
            };
            (a_span, faithful, method, implemented, free_span)
        }
        Err(r) => (und(r), und(r), "none", und(r), und(r)),
    };
    let maximal_commutative = check_commutant(alg, cfg)?;
    Ok(UngradedReport {
        wt,
        wt_degenerate,
        local_units,
        local_unit,
        c_spanned_by_idempotents: c_span,
        a_spanned_by_normalisers: a_span,
        expectation,
        faithful,
        faithful_method: method,
        implemented_by_idempotents: implemented,
        free_span,
        maximal_commutative,
        idempotents: ids.ok(),
        normalisers: ns.ok(),
    })
}

#[derive(Debug, Clone)]
pub struct PairClassification {
    /// `(A_ε, C)`.
    pub epsilon: UngradedReport,
    /// `(A, C)` with the grading forgotten.
    pub ungraded: UngradedReport,
    /// `N⋆(C)`, the homogeneous normalisers.
    pub n_star: Option<NormaliserList>,
    pub n_star_spans: Verdict,
    /// `n†` has degree `γ⁻¹` and `nn†, n†n ∈ A_ε` for every `n ∈ N⋆(C)`.
    pub dagger_degrees: Verdict,
}

impl PairClassification {
    pub fn adp(&self) -> Verdict {
        self.ungraded.adp()
    }

    pub fn acp(&self) -> Verdict {
        self.ungraded.acp()
    }

    pub fn aqp(&self) -> Verdict {
        self.ungraded.aqp()
    }

    pub fn gr_adp(&self) -> Verdict {
        Verdict::all(&[("(A_ε, C) ADP", &self.epsilon.adp()), ("N⋆(C) spans A", &self.n_star_spans)])
    }

    pub fn gr_acp(&self) -> Verdict {
        Verdict::all(&[("(A_ε, C) ACP", &self.epsilon.acp()), ("N⋆(C) spans A", &self.n_star_spans)])
    }

    pub fn gr_aqp(&self) -> Verdict {
        Verdict::all(&[("(A_ε, C) AQP", &self.epsilon.aqp()), ("N⋆(C) spans A", &self.n_star_spans)])
    }
}

/// Span of `N⋆(C)` checked degree by degree.
fn n_star_spans(alg: &StructuredAlgebra, list: &NormaliserList, cap: u64) -> Result<Verdict> {
    let ring = alg.ring();
    for g in alg.degrees() {
        let fiber = alg.fiber(g);
        let gens: Vec<Vector> = list
            .elements()
            .into_iter()
            .filter(|v| alg.homogeneous_degree(v) == Some(g))
            .map(|v| fiber.iter().map(|&k| v[k]).collect())
            .collect();
        let span = match capped(Span::new(ring, fiber.len(), &gens, cap))? {
            Ok(s) => s,
            Err(r) => return Ok(Verdict::Undecided(r)),
        };
        for (i, &k) in fiber.iter().enumerate() {
            let mut e = vec![ring.zero(); fiber.len()];
            e[i] = ring.one();
            if !span.contains(&e) {
                return Ok(Verdict::fail(format!("{} (degree {})", alg.labels()[k], alg.gamma().label(g))));
            }
        }
    }
    Ok(Verdict::Holds)
}

fn dagger_degrees(alg: &StructuredAlgebra, list: &NormaliserList) -> Verdict {
    let gamma = alg.gamma();
    let eps = gamma.identity();
    for (n, partners) in &list.entries {
        let Some(g) = alg.homogeneous_degree(n) else { continue };
        let m = &partners[0];
        let ok_m = alg.homogeneous_degree(m) == Some(gamma.inv(g));
        let in_eps = |v: &Vector| alg.is_zero(v) || alg.homogeneous_degree(v) == Some(eps);
        if !ok_m || !in_eps(&alg.mul(n, m)) || !in_eps(&alg.mul(m, n)) {
            return Verdict::fail(alg.format_elem(n));
        }
    }
    Verdict::Holds
}

/// Ungraded and graded verdicts for `(A, C)`.
pub fn classify_pair(alg: &StructuredAlgebra, cfg: &Config) -> Result<PairClassification> {
    let eps_alg = alg.epsilon_part();
    let epsilon = analyze_ungraded(&eps_alg, cfg)?;
    let ungraded = if alg.is_trivially_graded() {
        epsilon.clone()
    } else {
        analyze_ungraded(&alg.forget_grading(), cfg)?
    };
    let n_star = capped(exhaustive_normalisers(alg, true, Strategy::Auto, cfg))?;
    let (spans, dag) = match &n_star {
        Ok(list) => (n_star_spans(alg, list, cfg.cap)?, dagger_degrees(alg, list)),
        Err(r) => (Verdict::Undecided(r.clone()), Verdict::Undecided(r.clone())),
    };
    Ok(PairClassification {
        epsilon,
        ungraded,
        n_star: n_star.ok(),
        n_star_spans: spans,
        dagger_degrees: dag,
    })
}

#[derive(Debug, Clone)]
pub struct LbhReport {
    pub verdict: Verdict,
    /// Normalisers of the diagonal in `A_R(G_ε; Σ_ε)`, when enumerated.
    pub normalisers: Option<NormaliserList>,
}

/// Whether every normaliser of the diagonal in `A_R(G_ε; Σ_ε)` has support
/// a bisection of `G_ε`.
pub fn check_lbh(twist: &CocycleTwist, cfg: &Config) -> Result<LbhReport> {
    let base = twist.base();
    let (g_eps, emb) = base.restrict_to_degree(base.gamma().identity())?;
    let g_eps = Arc::new(g_eps);
    let c_eps = twist.restrict(g_eps.clone(), &emb);
    let st = SteinbergAlgebra::new(c_eps);
    let alg = st.to_structured();
    let list = match capped(exhaustive_normalisers(&alg, false, Strategy::Auto, cfg))? {
        Ok(l) => l,
        Err(r) => {
            return Ok(LbhReport {
                verdict: Verdict::Undecided(r),
                normalisers: None,
            })
        }
    };
    let bad = list.entries.iter().map(|(n, _)| n).find(|n| {
        let supp: Vec<usize> = (0..n.len()).filter(|&k| n[k] != 0).collect();
        !g_eps.is_bisection(&supp)
    });
    Ok(LbhReport {
        verdict: match bad {
            Some(n) => Verdict::fail(alg.format_elem(n)),
            None => Verdict::Holds,
        },
        normalisers: Some(list),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::tests::m2;

    #[test]
    fn m2_is_graded_diagonal() {
        let cfg = Config::default();
        for p in [2, 3] {
            let c = classify_pair(&m2(p, true), &cfg).unwrap();
            assert!(c.gr_adp().holds(), "{}", c.gr_adp());
            assert!(c.gr_acp().holds());
            assert!(c.gr_aqp().holds());
            // P is only given on A_ε
            assert!(matches!(c.aqp(), Verdict::Undecided(_)));
            assert!(c.dagger_degrees.holds());
        }
        let u = classify_pair(&m2(3, false), &cfg).unwrap();
        assert!(u.adp().holds() && u.acp().holds() && u.aqp().holds());
        assert_eq!(u.adp(), u.gr_adp());
        assert_eq!(u.ungraded.faithful_method, "linear");
    }

    #[test]
    fn verdict_conjunction() {
        let f = Verdict::fail("x");
        let u = Verdict::Undecided("cap".into());
        assert_eq!(Verdict::all(&[("a", &u), ("b", &f)]), Verdict::fail("b: x"));
        assert_eq!(Verdict::all(&[("a", &Verdict::Holds), ("b", &u)]), Verdict::Undecided("b: cap".into()));
        assert_eq!(Verdict::all(&[]), Verdict::Holds);
        assert_eq!(f.to_string(), "false [x]");
    }
}
