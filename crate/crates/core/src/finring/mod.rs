//! Finite commutative unital rings.
//!
//! Two backends: residues `Z/nZ` and rings given by explicit addition and
//! multiplication tables (e.g. `F_4`, which is not a residue ring). Either way
//! the carrier is `0..size` and every operation is a table lookup; the ring
//! axioms are checked exhaustively when a ring is built.

pub mod linalg;

use crate::error::{Axiom, AxiomViolation, Error, Result};

/// A ring element, as an index into the carrier.
pub type Elem = u16;

/// Rings larger than this are rejected at construction.
pub const MAX_RING_SIZE: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingKind {
    Modular(u32),
    Table,
}

#[derive(Debug, Clone)]
pub struct FiniteRing {
    kind: RingKind,
    size: usize,
    labels: Vec<String>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    zero: Elem,
    one: Elem,
    units: Vec<Elem>,
    inverse: Vec<Option<Elem>>,
    idempotents: Vec<Elem>,
}

/// Builds `Z/nZ`.
pub fn make_modular_ring(n: u32) -> Result<FiniteRing> {
    if n < 2 {
        return Err(Error::Invalid(format!("modulus {n} < 2")));
    }
    let size = n as usize;
    if size > MAX_RING_SIZE {
        return Err(Error::Invalid(format!(
            "ring of {size} elements exceeds the {MAX_RING_SIZE}-element limit"
        )));
    }
    let mut add = vec![0; size * size];
    let mut mul = vec![0; size * size];
    for a in 0..size {
        for b in 0..size {
            add[a * size + b] = ((a + b) % size) as Elem;
            mul[a * size + b] = ((a * b) % size) as Elem;
        }
    }
    let labels = (0..size).map(|a| a.to_string()).collect();
    FiniteRing::assemble(RingKind::Modular(n), labels, add, mul)
}

impl FiniteRing {
    /// Builds a ring from full operation tables over `labels`.
    pub fn from_tables(labels: Vec<String>, add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Self> {
        let size = labels.len();
        if size < 2 {
            return Err(Error::Invalid("a ring table needs at least two elements".into()));
        }
        if size > MAX_RING_SIZE {
            return Err(Error::Invalid(format!(
                "ring of {size} elements exceeds the {MAX_RING_SIZE}-element limit"
            )));
        }
        let flatten = |t: &[Vec<usize>], name: &str| -> Result<Vec<Elem>> {
            if t.len() != size || t.iter().any(|row| row.len() != size) {
                return Err(Error::Invalid(format!("{name} table must be {size}x{size}")));
            }
            let mut out = Vec::with_capacity(size * size);
            for row in t {
                for &v in row {
                    if v >= size {
                        return Err(Error::Invalid(format!("{name} table entry {v} out of range")));
                    }
                    out.push(v as Elem);
                }
            }
            Ok(out)
        };
        let add = flatten(add, "add")?;
        let mul = flatten(mul, "mul")?;
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::Invalid(format!("duplicate ring label {l:?}")));
            }
        }
        Self::assemble(RingKind::Table, labels, add, mul)
    }

    fn assemble(kind: RingKind, labels: Vec<String>, add: Vec<Elem>, mul: Vec<Elem>) -> Result<Self> {
        let size = labels.len();
        let at = |t: &[Elem], a: usize, b: usize| t[a * size + b] as usize;
        let zero = (0..size)
            .find(|&z| (0..size).all(|a| at(&add, z, a) == a && at(&add, a, z) == a))
            .ok_or_else(|| AxiomViolation::new(Axiom::RingAxiom, "no additive identity"))?;
        let one = (0..size)
            .find(|&u| (0..size).all(|a| at(&mul, u, a) == a && at(&mul, a, u) == a))
            .ok_or_else(|| AxiomViolation::new(Axiom::RingAxiom, "no multiplicative identity"))?;
        let fail = |what: &str, w: String| Error::from(AxiomViolation::new(Axiom::RingAxiom, what).with_witness(w));
        let mut neg = vec![0; size];
        for a in 0..size {
            let n = (0..size)
                .find(|&b| at(&add, a, b) == zero)
                .ok_or_else(|| fail("element without additive inverse", labels[a].clone()))?;
            neg[a] = n as Elem;
        }
        for a in 0..size {
            for b in 0..size {
                if at(&add, a, b) != at(&add, b, a) {
                    return Err(fail("addition not commutative", format!("{},{}", labels[a], labels[b])));
                }
                if at(&mul, a, b) != at(&mul, b, a) {
                    return Err(fail("multiplication not commutative", format!("{},{}", labels[a], labels[b])));
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                let ab_add = at(&add, a, b);
                let ab_mul = at(&mul, a, b);
                for c in 0..size {
                    let w = || format!("{},{},{}", labels[a], labels[b], labels[c]);
                    if at(&add, ab_add, c) != at(&add, a, at(&add, b, c)) {
                        return Err(fail("addition not associative", w()));
                    }
                    if at(&mul, ab_mul, c) != at(&mul, a, at(&mul, b, c)) {
                        return Err(fail("multiplication not associative", w()));
                    }
                    if at(&mul, a, at(&add, b, c)) != at(&add, at(&mul, a, b), at(&mul, a, c)) {
                        return Err(fail("distributivity fails", w()));
                    }
                }
            }
        }
        let mut inverse = vec![None; size];
        let mut units = Vec::new();
        let mut idempotents = Vec::new();
        for a in 0..size {
            if let Some(b) = (0..size).find(|&b| at(&mul, a, b) == one) {
                inverse[a] = Some(b as Elem);
                units.push(a as Elem);
            }
            if at(&mul, a, a) == a {
                idempotents.push(a as Elem);
            }
        }
        Ok(Self {
            kind,
            size,
            labels,
            add,
            mul,
            neg,
            zero: zero as Elem,
            one: one as Elem,
            units,
            inverse,
            idempotents,
        })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn modulus(&self) -> Option<u32> {
        match self.kind {
            RingKind::Modular(n) => Some(n),
            RingKind::Table => None,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        self.inverse[a as usize]
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inverse[a as usize].is_some()
    }

    /// The unit group `R^×`, ascending.
    pub fn units(&self) -> &[Elem] {
        &self.units
    }

    /// Position of a unit in [`Self::units`].
    pub fn unit_index(&self, a: Elem) -> Option<usize> {
        self.units.binary_search(&a).ok()
    }

    pub fn idempotents(&self) -> &[Elem] {
        &self.idempotents
    }

    /// True iff the only idempotents are 0 and 1.
    pub fn is_indecomposable(&self) -> bool {
        self.idempotents.len() == 2
    }

    /// The image of an integer under `Z -> R`.
    pub fn from_int(&self, k: i64) -> Elem {
        match self.kind {
            RingKind::Modular(n) => k.rem_euclid(n as i64) as Elem,
            RingKind::Table => {
                let reps = k.unsigned_abs() % (self.size as u64 * 2).max(1);
                let mut acc = self.zero;
                for _ in 0..reps {
                    acc = self.add(acc, self.one);
                }
                if k < 0 {
                    self.neg(acc)
                } else {
                    acc
                }
            }
        }
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn by_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label).map(|p| p as Elem)
    }

    pub fn describe(&self) -> String {
        match self.kind {
            RingKind::Modular(n) => format!("Z/{n}"),
            RingKind::Table => format!("table ring of order {}", self.size),
        }
    }

    /// Raw operation tables, row-major.
    pub fn tables(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let rows = |t: &[Elem]| {
            t.chunks(self.size)
                .map(|r| r.iter().map(|&v| v as usize).collect())
                .collect()
        };
        (rows(&self.add), rows(&self.mul))
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.add == other.add && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

/// The field with four elements as a table ring with labels `0, 1, w, w2`.
pub fn f4() -> FiniteRing {
    // w^2 = w + 1
    let labels = ["0", "1", "w", "w2"].map(String::from).to_vec();
    let add = vec![
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ];
    let mul = vec![
        vec![0, 0, 0, 0],
        vec![0, 1, 2, 3],
        vec![0, 2, 3, 1],
        vec![0, 3, 1, 2],
    ];
    FiniteRing::from_tables(labels, &add, &mul).expect("F_4 tables are a field")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_units(r: &FiniteRing) -> Vec<Elem> {
        r.elements()
            .filter(|&t| r.elements().any(|s| r.mul(t, s) == r.one()))
            .collect()
    }

    #[test]
    fn small_fields() {
        let f2 = make_modular_ring(2).unwrap();
        assert_eq!(f2.units(), &[1]);
        assert!(f2.is_indecomposable());
        let f5 = make_modular_ring(5).unwrap();
        assert_eq!(f5.units(), &[1, 2, 3, 4]);
        assert!(f5.is_indecomposable());
    }

    #[test]
    fn z6_is_decomposable() {
        let z6 = make_modular_ring(6).unwrap();
        // e*e = e over Z/6
        let scan: Vec<Elem> = z6.elements().filter(|&e| z6.mul(e, e) == e).collect();
        assert_eq!(scan, vec![0, 1, 3, 4]);
        assert_eq!(z6.idempotents(), &[0, 1, 3, 4]);
        assert!(!z6.is_indecomposable());
        assert_eq!(z6.units(), &[1, 5]);
    }

    #[test]
    fn indecomposable_iff_prime_power() {
        for n in 2..=64u32 {
            let r = make_modular_ring(n).unwrap();
            let mut m = n;
            let p = (2..=n).find(|p| n % p == 0).unwrap();
            while m % p == 0 {
                m /= p;
            }
            assert_eq!(r.is_indecomposable(), m == 1, "n = {n}");
            assert_eq!(r.units(), brute_units(&r).as_slice(), "n = {n}");
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(make_modular_ring(0).is_err());
        assert!(make_modular_ring(1).is_err());
        assert!(make_modular_ring(257).is_err());
        assert!(make_modular_ring(256).is_ok());
    }

    #[test]
    fn f4_table_ring() {
        let f = f4();
        assert_eq!(f.units().len(), 3);
        assert!(f.is_indecomposable());
        let w = f.by_label("w").unwrap();
        assert_eq!(f.label(f.mul(w, w)), "w2");
        assert_eq!(f.from_int(3), f.one());
        assert_eq!(f.from_int(2), f.zero());
    }

    #[test]
    fn table_ring_axioms_enforced() {
        let labels = vec!["a".to_string(), "b".to_string()];
        // multiplication with no identity
        let add = vec![vec![0, 1], vec![1, 0]];
        let mul = vec![vec![0, 0], vec![0, 0]];
        match FiniteRing::from_tables(labels, &add, &mul) {
            Err(Error::Axiom(v)) => assert_eq!(v.axiom, Axiom::RingAxiom),
            other => panic!("expected ring axiom violation, got {other:?}"),
        }
    }

    #[test]
    fn units_closed_under_mul_and_inverse() {
        for n in [2u32, 4, 5, 6, 9, 12] {
            let r = make_modular_ring(n).unwrap();
            for &a in r.units() {
                assert!(r.is_unit(r.inv(a).unwrap()));
                for &b in r.units() {
                    assert!(r.is_unit(r.mul(a, b)));
                }
            }
            assert!(r.units().contains(&r.one()));
        }
    }
}
