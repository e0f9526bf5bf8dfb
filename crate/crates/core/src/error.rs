use std::fmt;

/// The axiom a structure failed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Axiom {
    RingAxiom,
    GroupAxiom,
    GroupoidUnits,
    GroupoidComposition,
    GroupoidAssociativity,
    GroupoidInverse,
    Grading,
    Cocycle,
    Homomorphism,
    TwistUnits,
    Dt1Exactness,
    Dt2LocalTriviality,
    Dt3Centrality,
    GradedDiagram,
    AlgebraAssociativity,
    Homogeneity,
    Subalgebra,
    Expectation,
    WithoutTorsion,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::RingAxiom => "ring axioms",
            Axiom::GroupAxiom => "group axioms",
            Axiom::GroupoidUnits => "groupoid units",
            Axiom::GroupoidComposition => "groupoid composition",
            Axiom::GroupoidAssociativity => "groupoid associativity",
            Axiom::GroupoidInverse => "groupoid inverses",
            Axiom::Grading => "grading cocycle",
            Axiom::Cocycle => "2-cocycle",
            Axiom::Homomorphism => "twist homomorphism",
            Axiom::TwistUnits => "twist unit spaces",
            Axiom::Dt1Exactness => "DT1 exactness",
            Axiom::Dt2LocalTriviality => "DT2 local triviality",
            Axiom::Dt3Centrality => "DT3 centrality",
            Axiom::GradedDiagram => "graded twist diagram",
            Axiom::AlgebraAssociativity => "associativity",
            Axiom::Homogeneity => "homogeneity",
            Axiom::Subalgebra => "diagonal subalgebra",
            Axiom::Expectation => "conditional expectation",
            Axiom::WithoutTorsion => "WT",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A violated axiom together with the elements that witness the violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub detail: String,
    pub witnesses: Vec<String>,
}

impl AxiomViolation {
    pub fn new(axiom: Axiom, detail: impl Into<String>) -> Self {
        Self {
            axiom,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.detail)?;
        if !self.witnesses.is_empty() {
            write!(f, " [{}]", self.witnesses.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("axiom violation: {0}")]
    Axiom(AxiomViolation),
    #[error("{what}: enumeration of {needed} candidates exceeds cap {cap}")]
    CapExceeded { what: String, needed: u128, cap: u64 },
    #[error("ring {0} has no Howell-form backend (table-defined ring)")]
    NotModular(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<AxiomViolation> for Error {
    fn from(v: AxiomViolation) -> Self {
        Error::Axiom(v)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_cap(what: &str, needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        Err(Error::CapExceeded {
            what: what.to_string(),
            needed,
            cap,
        })
    } else {
        Ok(())
    }
}

/// `base^exp` saturating into `u128`.
pub(crate) fn pow_count(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
