//! Instance files: one JSON document per ring, grading group and either a
//! graded twist or an abstract graded algebra with `C` and `P`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Axiom, AxiomViolation, Error, Result};
use crate::finring::{make_modular_ring, Elem, FiniteRing, RingKind};
use crate::groupoid::{Degree, FiniteGroup, GradedGroupoid, GradingGroup, GroupoidData, DEFAULT_ARROW_CAP};
use crate::pairs::{check_wt, Expectation, StructuredAlgebra, Verdict};
use crate::steinberg::SteinbergAlgebra;
use crate::twist::{from_cocycle, product_section, CocycleTwist, ExplicitTwist};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub ring: RingBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<GroupoidBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraBlock>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingBlock {
    Mod(u32),
    Table(RingTable),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingTable {
    pub elements: Vec<String>,
    /// Entries are element labels or indices.
    pub add: Vec<Vec<Value>>,
    pub mul: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum GammaBlock {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "cyclic")]
    Cyclic(usize),
    #[serde(rename = "table")]
    Table(GammaTable),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaTable {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    pub identity: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidBlock {
    pub arrows: Vec<String>,
    pub units: Vec<String>,
    pub src: Map<String, Value>,
    pub rng: Map<String, Value>,
    /// `[α, β, αβ]`.
    pub compose: Vec<[String; 3]>,
    /// Arrow to degree: an integer over `Z`, a label otherwise. Omitted
    /// arrows have degree `ε`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Map<String, Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum TwistBlock {
    /// `[α, β, ω(α, β)]`; omitted pairs are 1.
    #[serde(rename = "omega")]
    Omega(Vec<(String, String, Value)>),
    #[serde(rename = "explicit")]
    Explicit(ExplicitBlock),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitBlock {
    pub sigma: GroupoidBlock,
    pub q: Map<String, Value>,
    /// `[x, t, i(x, t)]` with `x` a unit of G.
    pub i: Vec<(String, Value, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    pub basis: Vec<String>,
    /// `[b_i, b_j, [[b_k, c], ...]]`; omitted products are 0.
    pub mul: Vec<(String, String, Vec<(String, Value)>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg: Option<Map<String, Value>>,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    /// `[b, [[c_k, t], ...]]` giving `P(b)`, over the ε-component or all of A.
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<(String, Vec<(String, Value)>)>>,
}

/// A validated twist with the section its cocycle was taken at.
#[derive(Debug, Clone)]
pub struct TwistInstance {
    pub explicit: ExplicitTwist,
    pub section: Vec<usize>,
    pub cocycle: CocycleTwist,
    /// Whether the file gave Σ explicitly.
    pub from_explicit: bool,
}

impl TwistInstance {
    pub fn from_cocycle(c: CocycleTwist) -> Self {
        Self {
            explicit: from_cocycle(&c),
            section: product_section(&c),
            cocycle: c,
            from_explicit: false,
        }
    }

    pub fn from_explicit(t: ExplicitTwist) -> Result<Self> {
        let section = t.canonical_section();
        let cocycle = t.to_cocycle(&section)?;
        Ok(Self {
            explicit: t,
            section,
            cocycle,
            from_explicit: true,
        })
    }

    pub fn steinberg(&self) -> SteinbergAlgebra {
        SteinbergAlgebra::new(self.cocycle.clone())
    }
}

#[derive(Debug, Clone)]
pub enum Payload {
    Twist(TwistInstance),
    Algebra(StructuredAlgebra),
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: Option<String>,
    pub ring: Arc<FiniteRing>,
    pub gamma: Arc<GradingGroup>,
    pub payload: Payload,
}

impl Instance {
    /// The pair `(A, C)`: the Steinberg pair for twists.
    pub fn algebra(&self) -> StructuredAlgebra {
        match &self.payload {
            Payload::Twist(t) => t.steinberg().to_structured(),
            Payload::Algebra(a) => a.clone(),
        }
    }

    pub fn twist(&self) -> Option<&TwistInstance> {
        match &self.payload {
            Payload::Twist(t) => Some(t),
            Payload::Algebra(_) => None,
        }
    }

    /// Axioms not enforced at load time: WT for abstract pairs.
    pub fn validate_extra(&self, cap: u64) -> Result<()> {
        let Payload::Algebra(alg) = &self.payload else { return Ok(()) };
        let ids = alg.idempotents_of_c(cap)?;
        if let Verdict::Fails(w) = check_wt(alg, &ids) {
            let mut v = AxiomViolation::new(Axiom::WithoutTorsion, "te = 0 for a nonzero idempotent e and t ≠ 0");
            for w in w {
                v = v.with_witness(w);
            }
            return Err(v.into());
        }
        Ok(())
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

pub fn load(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<Instance> {
    let doc: Document = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    from_document(&doc)
}

fn resolve(labels: &[String], l: &str, what: &str) -> Result<usize> {
    labels
        .iter()
        .position(|x| x == l)
        .ok_or_else(|| schema(format!("unknown {what} label {l:?}")))
}

fn value_str(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| schema(format!("expected a label, got {v}")))
}

/// A ring element: a label, or an integer (reduced mod n, or an index into a
/// table ring).
pub fn scalar(r: &FiniteRing, v: &Value) -> Result<Elem> {
    match v {
        Value::String(s) => r
            .by_label(s)
            .or_else(|| match (r.kind(), s.trim().parse::<i64>()) {
                (RingKind::Modular(_), Ok(k)) => Some(r.from_int(k)),
                _ => None,
            })
            .ok_or_else(|| schema(format!("unknown ring element {s:?}"))),
        Value::Number(n) => {
            let k = n.as_i64().ok_or_else(|| schema(format!("bad ring element {n}")))?;
            match r.kind() {
                RingKind::Modular(_) => Ok(r.from_int(k)),
                RingKind::Table if (0..r.size() as i64).contains(&k) => Ok(k as Elem),
                RingKind::Table => Err(schema(format!("ring element index {k} out of range"))),
            }
        }
        _ => Err(schema(format!("bad ring element {v}"))),
    }
}

fn degree(gamma: &GradingGroup, v: &Value) -> Result<Degree> {
    match (gamma, v) {
        (GradingGroup::Integers, Value::Number(n)) => n
            .as_i64()
            .map(Degree)
            .ok_or_else(|| schema(format!("bad integer degree {n}"))),
        (_, Value::String(s)) => gamma.by_label(s).ok_or_else(|| schema(format!("unknown degree {s:?}"))),
        _ => Err(schema(format!("bad degree {v}"))),
    }
}

fn degree_value(gamma: &GradingGroup, d: Degree) -> Value {
    match gamma {
        GradingGroup::Integers => Value::from(d.0),
        GradingGroup::Finite(_) => Value::from(gamma.label(d)),
    }
}

fn ring_from_block(b: &RingBlock) -> Result<FiniteRing> {
    match b {
        RingBlock::Mod(n) => make_modular_ring(*n),
        RingBlock::Table(t) => {
            let idx = |v: &Value| -> Result<usize> {
                match v {
                    Value::String(s) => resolve(&t.elements, s, "ring"),
                    Value::Number(n) => n
                        .as_u64()
                        .map(|k| k as usize)
                        .filter(|&k| k < t.elements.len())
                        .ok_or_else(|| schema(format!("ring table entry {n} out of range"))),
                    _ => Err(schema(format!("bad ring table entry {v}"))),
                }
            };
            let table = |m: &[Vec<Value>]| -> Result<Vec<Vec<usize>>> {
                m.iter().map(|row| row.iter().map(idx).collect()).collect()
            };
            FiniteRing::from_tables(t.elements.clone(), &table(&t.add)?, &table(&t.mul)?)
        }
    }
}

fn gamma_from_block(b: Option<&GammaBlock>) -> Result<GradingGroup> {
    Ok(match b {
        None | Some(GammaBlock::Trivial) => GradingGroup::trivial(),
        Some(GammaBlock::Integers) => GradingGroup::Integers,
        Some(GammaBlock::Cyclic(n)) if *n >= 1 => GradingGroup::Finite(FiniteGroup::cyclic(*n)),
        Some(GammaBlock::Cyclic(_)) => return Err(schema("cyclic group of order 0")),
        Some(GammaBlock::Table(t)) => {
            let mul = t
                .mul
                .iter()
                .map(|row| row.iter().map(|l| resolve(&t.elements, l, "group")).collect())
                .collect::<Result<Vec<Vec<usize>>>>()?;
            let id = resolve(&t.elements, &t.identity, "group")?;
            GradingGroup::Finite(FiniteGroup::new(t.elements.clone(), &mul, id)?)
        }
    })
}

fn groupoid_from_block(b: &GroupoidBlock, gamma: &Arc<GradingGroup>) -> Result<GradedGroupoid> {
    let labels = &b.arrows;
    let map = |m: &Map<String, Value>, what: &str| -> Result<Vec<usize>> {
        for k in m.keys() {
            resolve(labels, k, "arrow")?;
        }
        labels
            .iter()
            .map(|a| {
                let v = m.get(a).ok_or_else(|| schema(format!("{what} missing for arrow {a:?}")))?;
                resolve(labels, value_str(v)?, "arrow")
            })
            .collect()
    };
    let units = b
        .units
        .iter()
        .map(|u| resolve(labels, u, "arrow"))
        .collect::<Result<Vec<_>>>()?;
    let compose = b
        .compose
        .iter()
        .map(|[x, y, z]| Ok((resolve(labels, x, "arrow")?, resolve(labels, y, "arrow")?, resolve(labels, z, "arrow")?)))
        .collect::<Result<Vec<_>>>()?;
    let mut grading = vec![gamma.identity(); labels.len()];
    if let Some(g) = &b.grading {
        for (k, v) in g {
            grading[resolve(labels, k, "arrow")?] = degree(gamma, v)?;
        }
    }
    let data = GroupoidData {
        labels: labels.clone(),
        units,
        src: map(&b.src, "src")?,
        rng: map(&b.rng, "rng")?,
        compose,
        grading,
    };
    GradedGroupoid::validate(data, gamma.clone(), DEFAULT_ARROW_CAP)
}

fn sparse_vec(r: &FiniteRing, basis: &[String], terms: &[(String, Value)]) -> Result<Vec<Elem>> {
    let mut v = vec![r.zero(); basis.len()];
    for (l, c) in terms {
        let k = resolve(basis, l, "basis")?;
        v[k] = r.add(v[k], scalar(r, c)?);
    }
    Ok(v)
}

fn algebra_from_block(b: &AlgebraBlock, ring: &Arc<FiniteRing>, gamma: &Arc<GradingGroup>) -> Result<StructuredAlgebra> {
    let r = &**ring;
    let basis = &b.basis;
    let mut products = Vec::new();
    for (x, y, terms) in &b.mul {
        let v = sparse_vec(r, basis, terms)?;
        let sparse = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != r.zero())
            .map(|(k, &c)| (k, c))
            .collect();
        products.push((resolve(basis, x, "basis")?, resolve(basis, y, "basis")?, sparse));
    }
    let mut deg = vec![gamma.identity(); basis.len()];
    if let Some(d) = &b.deg {
        for (k, v) in d {
            deg[resolve(basis, k, "basis")?] = degree(gamma, v)?;
        }
    }
    let mut c_basis = b.c.iter().map(|l| resolve(basis, l, "basis")).collect::<Result<Vec<_>>>()?;
    c_basis.sort_unstable();
    let expectation = match &b.p {
        None => None,
        Some(p) => {
            let mut entries = p
                .iter()
                .map(|(l, terms)| Ok((resolve(basis, l, "basis")?, sparse_vec(r, basis, terms)?)))
                .collect::<Result<Vec<_>>>()?;
            entries.sort_by_key(|e| e.0);
            let (domain, images) = entries.into_iter().unzip();
            Some(Expectation { domain, images })
        }
    };
    StructuredAlgebra::new(ring.clone(), gamma.clone(), basis.clone(), &products, deg, c_basis, expectation)
}

fn explicit_from_block(
    b: &ExplicitBlock,
    ring: &Arc<FiniteRing>,
    base: Arc<GradedGroupoid>,
    gamma: &Arc<GradingGroup>,
) -> Result<ExplicitTwist> {
    let sigma = groupoid_from_block(&b.sigma, gamma)?;
    for k in b.q.keys() {
        resolve(&b.sigma.arrows, k, "Σ arrow")?;
    }
    let q_map = b
        .sigma
        .arrows
        .iter()
        .map(|s| {
            let v = b.q.get(s).ok_or_else(|| schema(format!("q missing for {s:?}")))?;
            resolve(base.labels(), value_str(v)?, "arrow")
        })
        .collect::<Result<Vec<_>>>()?;
    let i_entries = b
        .i
        .iter()
        .map(|(x, t, s)| {
            Ok((
                resolve(base.labels(), x, "arrow")?,
                scalar(ring, t)?,
                resolve(&b.sigma.arrows, s, "Σ arrow")?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    ExplicitTwist::validate(ring.clone(), sigma, base, &i_entries, q_map)
}

pub fn from_document(doc: &Document) -> Result<Instance> {
    if doc.schema != SCHEMA_VERSION {
        return Err(schema(format!("unsupported schema version {}", doc.schema)));
    }
    let ring = Arc::new(ring_from_block(&doc.ring)?);
    let gamma = Arc::new(gamma_from_block(doc.gamma.as_ref())?);
    let payload = match (&doc.groupoid, &doc.twist, &doc.algebra) {
        (Some(g), twist, None) => {
            let base = Arc::new(groupoid_from_block(g, &gamma)?);
            let t = match twist {
                None => TwistInstance::from_cocycle(CocycleTwist::trivial(ring.clone(), base)),
                Some(TwistBlock::Omega(entries)) => {
                    let e = entries
                        .iter()
                        .map(|(a, b, t)| {
                            Ok((resolve(&g.arrows, a, "arrow")?, resolve(&g.arrows, b, "arrow")?, scalar(&ring, t)?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    TwistInstance::from_cocycle(CocycleTwist::new(ring.clone(), base, &e)?)
                }
                Some(TwistBlock::Explicit(b)) => {
                    TwistInstance::from_explicit(explicit_from_block(b, &ring, base, &gamma)?)?
                }
            };
            Payload::Twist(t)
        }
        (None, None, Some(a)) => Payload::Algebra(algebra_from_block(a, &ring, &gamma)?),
        (None, Some(_), None) => return Err(schema("a twist block needs a groupoid block")),
        (None, None, None) => return Err(schema("one of groupoid or algebra is required")),
        _ => return Err(schema("groupoid and algebra payloads are exclusive")),
    };
    Ok(Instance {
        name: doc.name.clone(),
        ring,
        gamma,
        payload,
    })
}

pub fn ring_block(r: &FiniteRing) -> RingBlock {
    match r.kind() {
        RingKind::Modular(n) => RingBlock::Mod(n),
        RingKind::Table => {
            let (add, mul) = r.tables();
            let lab = |m: Vec<Vec<usize>>| -> Vec<Vec<Value>> {
                m.into_iter()
                    .map(|row| row.into_iter().map(|k| Value::from(r.label(k as Elem))).collect())
                    .collect()
            };
            RingBlock::Table(RingTable {
                elements: r.labels().to_vec(),
                add: lab(add),
                mul: lab(mul),
            })
        }
    }
}

pub fn gamma_block(g: &GradingGroup) -> Option<GammaBlock> {
    Some(match g {
        GradingGroup::Integers => GammaBlock::Integers,
        _ if g.is_trivial() => return None,
        GradingGroup::Finite(f) => {
            let default: Vec<String> = (0..f.order()).map(|k| k.to_string()).collect();
            match f.cyclic_order() {
                Some(n) if f.labels() == default => GammaBlock::Cyclic(n),
                _ => GammaBlock::Table(GammaTable {
                    elements: f.labels().to_vec(),
                    mul: f
                        .table()
                        .into_iter()
                        .map(|row| row.into_iter().map(|k| f.labels()[k].clone()).collect())
                        .collect(),
                    identity: f.labels()[f.identity()].clone(),
                }),
            }
        }
    })
}

pub fn groupoid_block(g: &GradedGroupoid) -> GroupoidBlock {
    let l = |a: usize| g.label(a).to_string();
    let map = |f: &dyn Fn(usize) -> usize| -> Map<String, Value> {
        (0..g.len()).map(|a| (l(a), Value::from(l(f(a))))).collect()
    };
    let mut compose = Vec::new();
    for a in 0..g.len() {
        for b in 0..g.len() {
            if let Some(c) = g.compose(a, b) {
                compose.push([l(a), l(b), l(c)]);
            }
        }
    }
    let eps = g.gamma().identity();
    let grading: Map<String, Value> = (0..g.len())
        .filter(|&a| g.degree(a) != eps)
        .map(|a| (l(a), degree_value(g.gamma(), g.degree(a))))
        .collect();
    GroupoidBlock {
        arrows: g.labels().to_vec(),
        units: g.units().iter().map(|&u| l(u)).collect(),
        src: map(&|a| g.src(a)),
        rng: map(&|a| g.rng(a)),
        compose,
        grading: (!grading.is_empty()).then_some(grading),
    }
}

pub fn omega_block(c: &CocycleTwist) -> TwistBlock {
    let (g, r) = (c.base(), c.ring());
    TwistBlock::Omega(
        c.entries()
            .into_iter()
            .map(|(a, b, t)| (g.label(a).to_string(), g.label(b).to_string(), Value::from(r.label(t))))
            .collect(),
    )
}

pub fn explicit_block(t: &ExplicitTwist) -> TwistBlock {
    let (s, g, r) = (t.sigma(), t.base(), t.ring());
    TwistBlock::Explicit(ExplicitBlock {
        sigma: groupoid_block(s),
        q: (0..s.len())
            .map(|x| (s.label(x).to_string(), Value::from(g.label(t.q(x)))))
            .collect(),
        i: t.i_entries()
            .into_iter()
            .map(|(x, u, y)| (g.label(x).to_string(), Value::from(r.label(u)), s.label(y).to_string()))
            .collect(),
    })
}

fn sparse_terms(alg: &StructuredAlgebra, v: &[Elem]) -> Vec<(String, Value)> {
    let r = alg.ring();
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != r.zero())
        .map(|(k, &c)| (alg.labels()[k].clone(), Value::from(r.label(c))))
        .collect()
}

pub fn algebra_block(alg: &StructuredAlgebra) -> AlgebraBlock {
    let l = |k: usize| alg.labels()[k].clone();
    let mul = alg
        .products()
        .into_iter()
        .map(|(i, j, v)| {
            let terms = v.into_iter().map(|(k, c)| (l(k), Value::from(alg.ring().label(c)))).collect();
            (l(i), l(j), terms)
        })
        .collect();
    let eps = alg.gamma().identity();
    let deg: Map<String, Value> = (0..alg.dim())
        .filter(|&k| alg.degree(k) != eps)
        .map(|k| (l(k), degree_value(alg.gamma(), alg.degree(k))))
        .collect();
    AlgebraBlock {
        basis: alg.labels().to_vec(),
        mul,
        deg: (!deg.is_empty()).then_some(deg),
        c: alg.c_basis().iter().map(|&k| l(k)).collect(),
        p: alg.expectation().map(|p| {
            p.domain
                .iter()
                .zip(&p.images)
                .map(|(&k, v)| (l(k), sparse_terms(alg, v)))
                .collect()
        }),
    }
}

/// A twist-backed document, in omega or explicit form.
pub fn twist_document(name: Option<String>, t: &ExplicitTwist, explicit: bool) -> Result<Document> {
    let twist = if explicit {
        explicit_block(t)
    } else {
        omega_block(&t.to_cocycle(&t.canonical_section())?)
    };
    Ok(Document {
        schema: SCHEMA_VERSION,
        name,
        description: None,
        ring: ring_block(t.ring()),
        gamma: gamma_block(t.base().gamma()),
        groupoid: Some(groupoid_block(t.base())),
        twist: Some(twist),
        algebra: None,
    })
}

pub fn algebra_document(name: Option<String>, alg: &StructuredAlgebra) -> Document {
    Document {
        schema: SCHEMA_VERSION,
        name,
        description: None,
        ring: ring_block(alg.ring()),
        gamma: gamma_block(alg.gamma()),
        groupoid: None,
        twist: None,
        algebra: Some(algebra_block(alg)),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
