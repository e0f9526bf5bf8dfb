//! The commands behind the `cartan` binary. Each returns an exit code and an
//! ordered report rendered as text or JSON.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::Error;
use crate::instance::{self, Instance, Payload, TwistInstance};
use crate::oracle;
use crate::pairs::{check_lbh, classify_pair, PairClassification, StructuredAlgebra, UngradedReport, Verdict};
use crate::reconstruct::{certify_graded_iso, certify_uniqueness, reconstruct, IsoReport, UniquenessReport};
use crate::Config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_AXIOM: i32 = 2;
pub const EXIT_THEOREM: i32 = 3;

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub cfg: Config,
    /// Run the brute-force cross-checks as well.
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Omega,
    Explicit,
    Algebra,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: Map<String, Value>,
    /// A document to print instead of the report (`convert` without a path).
    pub document: Option<String>,
}

impl Outcome {
    fn new(code: i32, report: Map<String, Value>) -> Self {
        Self {
            code,
            report,
            document: None,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if let Some(d) = &self.document {
            return d.clone();
        }
        if json {
            let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            render_text(&self.report, 0, &mut s);
            s
        }
    }
}

fn render_text(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (k, v) in map {
        match v {
            Value::Object(m) => {
                out.push_str(&format!("{pad}{k}:\n"));
                render_text(m, indent + 2, out);
            }
            Value::Array(a) => {
                let items: Vec<String> = a.iter().map(scalar_text).collect();
                out.push_str(&format!("{pad}{k}: [{}]\n", items.join(", ")));
            }
            _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(v))),
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Axiom(_) => EXIT_AXIOM,
        Error::TheoremViolation(_) => EXIT_THEOREM,
        Error::Precondition(_) => EXIT_AXIOM,
        Error::Io(_) | Error::Schema(_) | Error::Invalid(_) | Error::NotModular(_) | Error::CapExceeded { .. } => {
            EXIT_IO
        }
    }
}

fn error_outcome(mut report: Map<String, Value>, e: &Error) -> Outcome {
    match e {
        Error::Axiom(v) => {
            report.insert("status".into(), "axiom violation".into());
            report.insert("axiom".into(), v.axiom.name().into());
            report.insert("detail".into(), v.detail.clone().into());
            report.insert("witnesses".into(), v.witnesses.clone().into());
        }
        Error::TheoremViolation(w) => {
            report.insert("status".into(), "theorem violation".into());
            report.insert("detail".into(), w.clone().into());
        }
        Error::Precondition(w) => {
            report.insert("status".into(), "refused".into());
            report.insert("detail".into(), w.clone().into());
        }
        other => {
            report.insert("status".into(), "error".into());
            report.insert("detail".into(), other.to_string().into());
        }
    }
    Outcome::new(exit_code(e), report)
}

fn header(cmd: &str, path: &Path) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), cmd.into());
    let stem = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    m.insert("instance".into(), stem.into());
    m
}

fn v(x: &Verdict) -> Value {
    Value::from(x.to_string())
}

fn describe(inst: &Instance, m: &mut Map<String, Value>) {
    if let Some(n) = &inst.name {
        m.insert("name".into(), n.clone().into());
    }
    m.insert("ring".into(), inst.ring.describe().into());
    m.insert("gamma".into(), inst.gamma.describe().into());
    let kind = match &inst.payload {
        Payload::Twist(t) if t.from_explicit => "twist (explicit Σ)",
        Payload::Twist(_) => "twist (cocycle)",
        Payload::Algebra(_) => "algebra",
    };
    m.insert("kind".into(), kind.into());
}

/// Load, validate and describe.
pub fn cmd_validate(path: &Path, opts: &Options) -> Outcome {
    let mut rep = header("validate", path);
    let inst = match instance::load(path).and_then(|i| i.validate_extra(opts.cfg.cap).map(|_| i)) {
        Ok(i) => i,
        Err(e) => return error_outcome(rep, &e),
    };
    describe(&inst, &mut rep);
    let mut code = EXIT_OK;
    match &inst.payload {
        Payload::Twist(t) => {
            let g = t.explicit.base();
            rep.insert("G arrows".into(), g.len().into());
            rep.insert("G units".into(), g.units().len().into());
            rep.insert("Σ arrows".into(), t.explicit.sigma().len().into());
            rep.insert("cocycle".into(), cocycle_text(t).into());
            if opts.oracle {
                let dt2 = match oracle::oracle_dt2(&t.explicit) {
                    Ok(()) => Verdict::Holds,
                    Err(w) => Verdict::fail(w),
                };
                let units = if oracle::oracle_units(&inst.ring) == inst.ring.units() {
                    Verdict::Holds
                } else {
                    Verdict::fail("unit scan differs")
                };
                code = code.max(oracle_code(&[&dt2, &units]));
                let mut o = Map::new();
                o.insert("literal DT2".into(), v(&dt2));
                o.insert("unit scan".into(), v(&units));
                rep.insert("oracle".into(), o.into());
            }
        }
        Payload::Algebra(a) => {
            rep.insert("dim".into(), a.dim().into());
            rep.insert("dim C".into(), a.c_basis().len().into());
            rep.insert("expectation".into(), expectation_text(a).into());
        }
    }
    rep.insert("status".into(), "valid".into());
    Outcome::new(code, rep)
}

fn cocycle_text(t: &TwistInstance) -> String {
    let c = &t.cocycle;
    if c.is_trivial() {
        return "trivial".into();
    }
    let (g, r) = (c.base(), c.ring());
    let parts: Vec<String> = c
        .entries()
        .into_iter()
        .map(|(a, b, w)| format!("ω({}, {}) = {}", g.label(a), g.label(b), r.label(w)))
        .collect();
    parts.join(", ")
}

fn expectation_text(a: &StructuredAlgebra) -> &'static str {
    match a.expectation() {
        None => "none",
        Some(p) if p.domain.len() == a.dim() => "on A",
        Some(_) => "on A_ε",
    }
}

fn oracle_code(vs: &[&Verdict]) -> i32 {
    if vs.iter().any(|x| x.fails()) {
        EXIT_THEOREM
    } else {
        EXIT_OK
    }
}

fn ungraded_map(u: &UngradedReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("WT".into(), v(&u.wt));
    if u.wt_degenerate {
        m.insert("WT degenerate".into(), "I(C) = {0}".into());
    }
    m.insert("local units".into(), v(&u.local_units));
    m.insert("C = span I(C)".into(), v(&u.c_spanned_by_idempotents));
    m.insert("A = span N(C)".into(), v(&u.a_spanned_by_normalisers));
    m.insert("conditional expectation".into(), v(&u.expectation));
    m.insert("faithful".into(), v(&u.faithful));
    m.insert("faithfulness method".into(), u.faithful_method.into());
    m.insert("implemented by idempotents".into(), v(&u.implemented_by_idempotents));
    m.insert("spanned by free normalisers".into(), v(&u.free_span));
    m.insert("C maximal commutative".into(), v(&u.maximal_commutative));
    m.insert(
        "|N(C)|".into(),
        u.normalisers.as_ref().map_or(Value::from("undecided(cap)"), |l| l.len().into()),
    );
    m.insert("ADP".into(), v(&u.adp()));
    m.insert("ACP".into(), v(&u.acp()));
    m.insert("AQP".into(), v(&u.aqp()));
    m
}

fn classification_map(alg: &StructuredAlgebra, cl: &PairClassification) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("dim".into(), alg.dim().into());
    m.insert(
        "|N⋆(C)|".into(),
        cl.n_star.as_ref().map_or(Value::from("undecided(cap)"), |l| l.len().into()),
    );
    m.insert("(A_ε, C)".into(), ungraded_map(&cl.epsilon).into());
    if alg.is_trivially_graded() {
        m.insert("(A, C) ungraded".into(), "same as (A_ε, C)".into());
    } else {
        m.insert("(A, C) ungraded".into(), ungraded_map(&cl.ungraded).into());
    }
    m.insert("N⋆(C) spans A".into(), v(&cl.n_star_spans));
    m.insert("n† has degree γ⁻¹".into(), v(&cl.dagger_degrees));
    m.insert("ADP".into(), v(&cl.adp()));
    m.insert("ACP".into(), v(&cl.acp()));
    m.insert("AQP".into(), v(&cl.aqp()));
    m.insert("gr-ADP".into(), v(&cl.gr_adp()));
    m.insert("gr-ACP".into(), v(&cl.gr_acp()));
    m.insert("gr-AQP".into(), v(&cl.gr_aqp()));
    m
}

fn implication(p: bool, q: &Verdict) -> Verdict {
    match (p, q.as_bool()) {
        (false, _) | (true, Some(true)) => Verdict::Holds,
        (true, Some(false)) => Verdict::fail(q.to_string()),
        (true, None) => Verdict::Undecided(q.to_string()),
    }
}

fn load_valid(path: &Path, rep: &Map<String, Value>) -> Result<Instance, Outcome> {
    instance::load(path).map_err(|e| error_outcome(rep.clone(), &e))
}

/// Pair verdicts, LBH and the groupoid cross-checks.
pub fn cmd_classify(path: &Path, opts: &Options) -> Outcome {
    let mut rep = header("classify", path);
    let inst = match load_valid(path, &rep) {
        Ok(i) => i,
        Err(o) => return o,
    };
    describe(&inst, &mut rep);
    let alg = inst.algebra();
    let cl = match classify_pair(&alg, &opts.cfg) {
        Ok(c) => c,
        Err(e) => return error_outcome(rep, &e),
    };
    rep.extend(classification_map(&alg, &cl));
    let mut code = EXIT_OK;
    if let Some(t) = inst.twist() {
        let lbh = match check_lbh(&t.cocycle, &opts.cfg) {
            Ok(l) => l.verdict,
            Err(e) => return error_outcome(rep, &e),
        };
        rep.insert("LBH on Σ_ε".into(), v(&lbh));
        let g = t.explicit.base();
        let g_eps = match g.restrict_to_degree(g.gamma().identity()) {
            Ok((h, _)) => h,
            Err(e) => return error_outcome(rep, &e),
        };
        let (p, e) = (g_eps.is_principal(), g_eps.is_effective());
        rep.insert("G_ε principal".into(), p.into());
        rep.insert("G_ε effective".into(), e.into());
        let pa = implication(p, &cl.gr_adp());
        let ea = implication(e, &cl.gr_acp());
        rep.insert("principal(G_ε) ⇒ gr-ADP".into(), v(&pa));
        rep.insert("effective(G_ε) ⇒ gr-ACP".into(), v(&ea));
        if pa.fails() || ea.fails() {
            code = EXIT_THEOREM;
        }
    }
    rep.insert(
        "note".into(),
        "finite discrete groupoids are effective exactly when principal, so ADP and ACP verdicts co-vary".into(),
    );
    if opts.oracle {
        let mut o = Map::new();
        let mut all = Vec::new();
        let lists = [
            ("N⋆(C)", &alg, cl.n_star.as_ref()),
            ("N(C) in A_ε", &alg.epsilon_part(), cl.epsilon.normalisers.as_ref()),
        ];
        for (name, a, list) in lists {
            let x = match list {
                Some(l) => oracle::agree_normalisers(a, l).unwrap_or_else(|e| Verdict::Undecided(e.to_string())),
                None => Verdict::Undecided("not enumerated".into()),
            };
            o.insert(format!("{name} against the scan"), v(&x));
            all.push(x);
        }
        if let Some(t) = inst.twist() {
            let x = oracle::agree_structural(t, &opts.cfg).unwrap_or_else(|e| Verdict::Undecided(e.to_string()));
            o.insert("structural normalisers".into(), v(&x));
            all.push(x);
        }
        code = code.max(oracle_code(&all.iter().collect::<Vec<_>>()));
        rep.insert("oracle".into(), o.into());
    }
    Outcome::new(code, rep)
}

fn iso_map(r: &IsoReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("well-defined".into(), v(&r.well_defined));
    m.insert("â(tU) = t⁻¹â(U)".into(), v(&r.contravariant));
    m.insert("bijective".into(), v(&r.bijective));
    m.insert("multiplicative".into(), v(&r.multiplicative));
    m.insert("graded".into(), v(&r.graded));
    m.insert("C onto the diagonal".into(), v(&r.diagonal));
    m.insert("verdict".into(), v(&r.verdict()));
    m
}

/// Builds `Σ⋆ → G⋆`, optionally writing it as an instance file.
pub fn cmd_reconstruct(path: &Path, emit: Option<&Path>, opts: &Options) -> Outcome {
    let mut rep = header("reconstruct", path);
    let inst = match load_valid(path, &rep) {
        Ok(i) => i,
        Err(o) => return o,
    };
    describe(&inst, &mut rep);
    let alg = inst.algebra();
    let cl = match classify_pair(&alg, &opts.cfg) {
        Ok(c) => c,
        Err(e) => return error_outcome(rep, &e),
    };
    let rec = match reconstruct(&alg, &cl, &opts.cfg) {
        Ok(r) => r,
        Err(e) => return error_outcome(rep, &e),
    };
    let uf = &rec.twist;
    let (s, g) = (uf.sigma_star(), uf.g_star());
    let mut sm = Map::new();
    sm.insert("arrows".into(), s.len().into());
    sm.insert("units".into(), s.units().len().into());
    rep.insert("Σ⋆".into(), sm.into());
    let mut gm = Map::new();
    gm.insert("arrows".into(), g.len().into());
    gm.insert("units".into(), g.units().len().into());
    gm.insert("principal".into(), g.is_principal().into());
    let degrees: Map<String, Value> = (0..g.len())
        .map(|a| (g.label(a).to_string(), Value::from(g.gamma().label(g.degree(a)))))
        .collect();
    gm.insert("degrees".into(), degrees.into());
    rep.insert("G⋆".into(), gm.into());
    let cocycle = match uf.cocycle() {
        Ok(c) => c,
        Err(e) => return error_outcome(rep, &e),
    };
    let ti = TwistInstance::from_cocycle(cocycle);
    rep.insert("twist".into(), cocycle_text(&ti).into());
    let mut checks = Map::new();
    checks.insert("V_n V_m = V_nm, V_n⁻¹ = V_n†".into(), v(&rec.basis_identities));
    checks.insert("φ on C".into(), v(&rec.phi));
    let eps = rec.epsilon_fiber.clone().unwrap_or(Verdict::Holds);
    checks.insert(
        "c_G⋆⁻¹(ε) = G of (A_ε, C)".into(),
        match &rec.epsilon_fiber {
            Some(x) => v(x),
            None => "trivially graded".into(),
        },
    );
    checks.insert("c_G⋆⁻¹(ε) principal".into(), rec.epsilon_principal.into());
    checks.insert("c_G⋆⁻¹(ε) effective".into(), rec.epsilon_effective.into());
    checks.insert("gr-ADP ⇔ principal, gr-ACP ⇔ effective".into(), v(&rec.diagonal_cross_check));
    checks.insert("Hausdorff".into(), rec.hausdorff().into());
    rep.insert("checks".into(), checks.into());
    let mut code = oracle_code(&[&rec.basis_identities, &rec.phi, &eps, &rec.diagonal_cross_check]);
    let gr = cl.gr_aqp();
    if gr.holds() {
        match certify_graded_iso(&alg, &cl, uf, &opts.cfg) {
            Ok(r) => {
                if !r.verdict().holds() {
                    code = EXIT_THEOREM;
                }
                rep.insert("isomorphism A ≅ A_R(G⋆; Σ⋆)".into(), iso_map(&r).into());
            }
            Err(e) => return error_outcome(rep, &e),
        }
    } else {
        rep.insert("isomorphism A ≅ A_R(G⋆; Σ⋆)".into(), format!("refused: gr-AQP is {gr}").into());
    }
    if opts.oracle {
        let f = oracle::agree_filters(&alg, uf).unwrap_or_else(|e| Verdict::Undecided(e.to_string()));
        code = code.max(oracle_code(&[&f]));
        let mut o = Map::new();
        o.insert("ultrafilters and products".into(), v(&f));
        rep.insert("oracle".into(), o.into());
    }
    if let Some(out) = emit {
        let name = inst.name.as_ref().map(|n| format!("{n}_star"));
        let doc = match instance::twist_document(name, uf.twist(), true) {
            Ok(d) => d,
            Err(e) => return error_outcome(rep, &e),
        };
        if let Err(e) = std::fs::write(out, instance::to_json(&doc)) {
            return error_outcome(rep, &Error::Io(e));
        }
        rep.insert("emitted".into(), out.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned()).into());
    }
    Outcome::new(code, rep)
}

fn uniqueness_map(u: &UniquenessReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("(a) gr-AQP".into(), v(&u.gr_aqp));
    m.insert("(b) LBH on Σ_ε".into(), v(&u.lbh));
    m.insert("(c) Φ surjective".into(), u.phi_surjective.into());
    let p = &u.phi;
    let mut pm = Map::new();
    pm.insert("injective".into(), p.injective.into());
    pm.insert("R^×-equivariant".into(), p.equivariant.into());
    pm.insert("Φ(Σ^(0)) = Σ⋆^(0)".into(), p.units_onto.into());
    pm.insert("graded twist morphism".into(), v(&p.morphism));
    pm.insert("independent of X".into(), v(&p.x_independent));
    m.insert("Φ".into(), pm.into());
    m.insert("|Σ|".into(), p.sigma_map.len().into());
    m.insert("|Σ⋆|".into(), u.reconstruction.twist.sigma_star().len().into());
    if let Some(s) = &u.supports_are_bisections {
        m.insert("supports of N⋆(C) are bisections".into(), v(s));
    }
    if let Some(i) = &u.graded_iso {
        m.insert("isomorphism A ≅ A_R(G⋆; Σ⋆)".into(), v(&i.verdict()));
    }
    let agreement = match (u.agreement.holds(), u.phi_surjective) {
        (true, true) => "consistent (all true)".to_string(),
        (true, false) => "consistent (all false)".to_string(),
        _ => u.agreement.to_string(),
    };
    m.insert("agreement".into(), agreement.into());
    if u.recovered() {
        m.insert("result".into(), "twist recovered up to isomorphism".into());
    } else if let Some(w) = &u.witness {
        m.insert("result".into(), format!("Φ-surjectivity counterexample: {w}").into());
    }
    m
}

/// Twist → pair → reconstruction → Φ, with the three-way agreement check.
pub fn cmd_roundtrip(path: &Path, opts: &Options) -> Outcome {
    let mut rep = header("roundtrip", path);
    let inst = match load_valid(path, &rep) {
        Ok(i) => i,
        Err(o) => return o,
    };
    describe(&inst, &mut rep);
    let Some(t) = inst.twist() else {
        rep.insert("status".into(), "error".into());
        rep.insert("detail".into(), "roundtrip needs a twist-backed instance".into());
        return Outcome::new(EXIT_IO, rep);
    };
    let u = match certify_uniqueness(&t.explicit, &t.section, &opts.cfg) {
        Ok(u) => u,
        Err(e) => return error_outcome(rep, &e),
    };
    rep.extend(uniqueness_map(&u));
    let mut code = EXIT_OK;
    let extra: Vec<&Verdict> = [u.supports_are_bisections.as_ref(), Some(&u.phi.morphism), Some(&u.phi.x_independent)]
        .into_iter()
        .flatten()
        .collect();
    if oracle_code(&extra) != EXIT_OK
        || !(u.phi.injective && u.phi.equivariant && u.phi.units_onto)
        || u.graded_iso.as_ref().is_some_and(|i| !i.verdict().holds())
        || u.phi.isomorphism.as_ref().is_some_and(|i| !i.holds())
    {
        code = EXIT_THEOREM;
    }
    if opts.oracle {
        let alg = t.steinberg().to_structured();
        let conv = oracle::agree_convolution(t, opts.cfg.seed);
        let filt = oracle::agree_filters(&alg, &u.reconstruction.twist).unwrap_or_else(|e| Verdict::Undecided(e.to_string()));
        let st = oracle::agree_structural(t, &opts.cfg).unwrap_or_else(|e| Verdict::Undecided(e.to_string()));
        code = code.max(oracle_code(&[&conv, &filt, &st]));
        let mut o = Map::new();
        o.insert("convolution (3 sections)".into(), v(&conv));
        o.insert("ultrafilters and products".into(), v(&filt));
        o.insert("structural normalisers".into(), v(&st));
        rep.insert("oracle".into(), o.into());
    }
    Outcome::new(code, rep)
}

/// Rewrites an instance in another form.
pub fn cmd_convert(path: &Path, to: Form, output: Option<&Path>) -> Outcome {
    let rep = header("convert", path);
    let inst = match load_valid(path, &rep) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let doc = match (&inst.payload, to) {
        (Payload::Twist(t), Form::Omega) => instance::twist_document(inst.name.clone(), &t.explicit, false),
        (Payload::Twist(t), Form::Explicit) => instance::twist_document(inst.name.clone(), &t.explicit, true),
        (_, Form::Algebra) => Ok(instance::algebra_document(inst.name.clone(), &inst.algebra())),
        (Payload::Algebra(_), _) => Err(Error::Invalid("an abstract algebra has no twist form".into())),
    };
    let doc = match doc {
        Ok(d) => instance::to_json(&d),
        Err(e) => return error_outcome(rep, &e),
    };
    match output {
        Some(out) => {
            if let Err(e) = std::fs::write(out, &doc) {
                return error_outcome(rep, &Error::Io(e));
            }
            let mut rep = rep;
            rep.insert("written".into(), out.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned()).into());
            Outcome::new(EXIT_OK, rep)
        }
        None => Outcome {
            code: EXIT_OK,
            report: rep,
            document: Some(doc),
        },
    }
}
