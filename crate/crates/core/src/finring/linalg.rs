//! Linear algebra over a finite ring.
//!
//! Over `Z/nZ` everything goes through the Howell normal form, which gives
//! canonical generators for the row span and makes membership testing a
//! greedy reduction. Table-defined rings have no such backend and fall back to
//! exhaustive enumeration under a state cap.

use std::collections::HashSet;

use super::{Elem, FiniteRing};
use crate::error::{check_cap, pow_count, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds the matrix whose columns are `columns`.
    pub fn from_columns(rows: usize, columns: &[Vec<Elem>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix column");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn identity(ring: &FiniteRing, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn apply(&self, ring: &FiniteRing, x: &[Elem]) -> Vec<Elem> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(ring.zero(), |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
            })
            .collect()
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// A unit `u` of `Z/n` with `u*a = gcd(a, n)` (mod n).
fn normalizing_unit(a: i64, n: i64) -> i64 {
    let g = gcd(a, n);
    let ng = n / g;
    let a1 = (a / g).rem_euclid(ng.max(1));
    let inv = if ng == 1 {
        0
    } else {
        let (_, s, _) = ext_gcd(a1, ng);
        s.rem_euclid(ng)
    };
    (0..g)
        .map(|k| inv + k * ng)
        .find(|&u| gcd(u, n) == 1)
        .expect("a normalizing unit always exists")
}

struct ModRows {
    n: i64,
    rows: Vec<Vec<i64>>,
}

impl ModRows {
    fn combine(&mut self, dst: usize, a: i64, src: usize, b: i64) {
        // rows[dst] = a*rows[dst] + b*rows[src]
        let n = self.n;
        for j in 0..self.rows[dst].len() {
            let v = (a * self.rows[dst][j] + b * self.rows[src][j]).rem_euclid(n);
            self.rows[dst][j] = v;
        }
    }

    /// Howell normal form in place; returns the number of nonzero rows.
    fn howell(&mut self, cols: usize) -> usize {
        let n = self.n;
        let mut r = 0;
        for c in 0..cols {
            if r >= self.rows.len() {
                break;
            }
            let mut i = r + 1;
            while i < self.rows.len() {
                let b = self.rows[i][c];
                if b != 0 {
                    let a = self.rows[r][c];
                    let (g, s, t) = ext_gcd(a, b);
                    let (u, v) = (a / g, b / g);
                    let old_r = self.rows[r].clone();
                    let old_i = self.rows[i].clone();
                    for j in 0..old_r.len() {
                        self.rows[r][j] = (s * old_r[j] + t * old_i[j]).rem_euclid(n);
                        self.rows[i][j] = (-v * old_r[j] + u * old_i[j]).rem_euclid(n);
                    }
                }
                i += 1;
            }
            let a = self.rows[r][c];
            if a == 0 {
                continue;
            }
            let u = normalizing_unit(a, n);
            for j in 0..self.rows[r].len() {
                self.rows[r][j] = (u * self.rows[r][j]).rem_euclid(n);
            }
            let h = self.rows[r][c];
            for i in 0..r {
                let q = self.rows[i][c] / h;
                if q != 0 {
                    self.combine(i, 1, r, -q);
                }
            }
            // annihilator row keeps the span of the lower rows saturated
            let ann = n / h;
            let extra: Vec<i64> = self.rows[r].iter().map(|&x| (ann * x).rem_euclid(n)).collect();
            if extra.iter().any(|&x| x != 0) {
                self.rows.push(extra);
            }
            r += 1;
        }
        self.rows.truncate(r);
        r
    }

    /// Column of the leading entry of each row.
    fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|row| row.iter().position(|&x| x != 0).unwrap_or(row.len()))
            .collect()
    }

    /// Reduces `v` against the rows on the first `upto` columns. Returns false
    /// if some entry cannot be cleared.
    fn reduce(&self, v: &mut [i64], upto: usize) -> bool {
        let pivots = self.pivots();
        let n = self.n;
        for c in 0..upto {
            if v[c] == 0 {
                continue;
            }
            match pivots.iter().position(|&p| p == c) {
                Some(r) => {
                    let h = self.rows[r][c];
                    if v[c] % h != 0 {
                        return false;
                    }
                    let q = v[c] / h;
                    for (x, &y) in v.iter_mut().zip(&self.rows[r]) {
                        *x = (*x - q * y).rem_euclid(n);
                    }
                }
                None => return false,
            }
        }
        true
    }
}

fn modulus_of(ring: &FiniteRing) -> Result<i64> {
    ring.modulus()
        .map(|n| n as i64)
        .ok_or_else(|| Error::NotModular(ring.describe()))
}

fn to_i64(v: &[Elem]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

fn to_elems(v: &[i64]) -> Vec<Elem> {
    v.iter().map(|&x| x as Elem).collect()
}

/// Howell normal form of the row span of `m`, zero rows removed.
pub fn howell_form(ring: &FiniteRing, m: &RMatrix) -> Result<RMatrix> {
    let n = modulus_of(ring)?;
    let mut rows = ModRows {
        n,
        rows: m.to_rows().iter().map(|r| to_i64(r)).collect(),
    };
    rows.howell(m.cols());
    let out: Vec<Vec<Elem>> = rows.rows.iter().map(|r| to_elems(r)).collect();
    Ok(RMatrix::from_rows(m.cols(), &out))
}

/// Outcome of solving `M x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub solvable: bool,
    pub solution: Option<Vec<Elem>>,
    /// Generators of `{x : M x = 0}`.
    pub kernel: Vec<Vec<Elem>>,
    /// Howell form of the row span of `M`.
    pub row_span: RMatrix,
}

/// Solves `M x = b` over `Z/nZ` through the Howell form of `[M^T | I]`.
pub fn howell_solve(ring: &FiniteRing, m: &RMatrix, b: &[Elem]) -> Result<SolveReport> {
    let n = modulus_of(ring)?;
    if b.len() != m.rows() {
        return Err(Error::Invalid(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let (r, c) = (m.rows(), m.cols());
    let mut aug = Vec::with_capacity(c);
    for j in 0..c {
        let mut row = vec![0i64; r + c];
        for i in 0..r {
            row[i] = m.get(i, j) as i64;
        }
        row[r + j] = 1 % n;
        aug.push(row);
    }
    let mut h = ModRows { n, rows: aug };
    h.howell(r + c);
    let mut v = vec![0i64; r + c];
    for i in 0..r {
        v[i] = b[i] as i64;
    }
    let solvable = h.reduce(&mut v, r);
    let solution = solvable.then(|| v[r..].iter().map(|&x| (-x).rem_euclid(n) as Elem).collect());
    let pivots = h.pivots();
    let kernel = h
        .rows
        .iter()
        .zip(&pivots)
        .filter(|(_, &p)| p >= r)
        .map(|(row, _)| to_elems(&row[r..]))
        .collect();
    Ok(SolveReport {
        solvable,
        solution,
        kernel,
        row_span: howell_form(ring, m)?,
    })
}

fn for_each_vector(ring: &FiniteRing, len: usize, mut f: impl FnMut(&[Elem]) -> bool) {
    let q = ring.size() as Elem;
    let mut x = vec![0 as Elem; len];
    loop {
        if !f(&x) {
            return;
        }
        let mut k = 0;
        loop {
            if k == len {
                return;
            }
            x[k] += 1;
            if x[k] < q {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

/// One solution of `M x = b`, if any. Exhaustive over table rings.
pub fn solve(ring: &FiniteRing, m: &RMatrix, b: &[Elem], cap: u64) -> Result<Option<Vec<Elem>>> {
    if ring.modulus().is_some() {
        return Ok(howell_solve(ring, m, b)?.solution);
    }
    check_cap("exhaustive solve", pow_count(ring.size(), m.cols()), cap)?;
    let mut found = None;
    for_each_vector(ring, m.cols(), |x| {
        if m.apply(ring, x) == b {
            found = Some(x.to_vec());
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// Generators of the kernel of `M`. Exhaustive over table rings (returns the
/// whole kernel).
pub fn kernel(ring: &FiniteRing, m: &RMatrix, cap: u64) -> Result<Vec<Vec<Elem>>> {
    if ring.modulus().is_some() {
        let b = vec![ring.zero(); m.rows()];
        return Ok(howell_solve(ring, m, &b)?
            .kernel
            .into_iter()
            .filter(|k| k.iter().any(|&x| x != 0))
            .collect());
    }
    check_cap("exhaustive kernel", pow_count(ring.size(), m.cols()), cap)?;
    let mut out = Vec::new();
    for_each_vector(ring, m.cols(), |x| {
        if x.iter().any(|&v| v != ring.zero()) && m.apply(ring, x).iter().all(|&v| v == ring.zero()) {
            out.push(x.to_vec());
        }
        true
    });
    Ok(out)
}

/// Whether the square matrix `m` is invertible, i.e. `x -> M x` is a bijection
/// of `R^n`. On a finite module injective and bijective coincide.
pub fn is_bijective(ring: &FiniteRing, m: &RMatrix, cap: u64) -> Result<bool> {
    if m.rows() != m.cols() {
        return Ok(false);
    }
    Ok(kernel(ring, m, cap)?.is_empty())
}

/// The R-span of a finite set of vectors of a fixed length.
#[derive(Debug, Clone)]
pub struct Span {
    dim: usize,
    repr: SpanRepr,
}

#[derive(Debug, Clone)]
enum SpanRepr {
    Howell(ModRowsOwned),
    Enumerated(HashSet<Vec<Elem>>),
}

#[derive(Debug, Clone)]
struct ModRowsOwned {
    n: i64,
    rows: Vec<Vec<i64>>,
}

impl Span {
    pub fn new(ring: &FiniteRing, dim: usize, gens: &[Vec<Elem>], cap: u64) -> Result<Self> {
        if let Some(n) = ring.modulus() {
            let mut rows = ModRows {
                n: n as i64,
                rows: gens.iter().map(|g| to_i64(g)).collect(),
            };
            rows.howell(dim);
            return Ok(Self {
                dim,
                repr: SpanRepr::Howell(ModRowsOwned {
                    n: rows.n,
                    rows: rows.rows,
                }),
            });
        }
        let mut set: HashSet<Vec<Elem>> = HashSet::new();
        set.insert(vec![ring.zero(); dim]);
        for g in gens {
            let mut next = HashSet::with_capacity(set.len() * 2);
            for s in &set {
                for t in ring.elements() {
                    let v: Vec<Elem> = s.iter().zip(g).map(|(&a, &b)| ring.add(a, ring.mul(t, b))).collect();
                    next.insert(v);
                }
                check_cap("span enumeration", next.len() as u128, cap)?;
            }
            set = next;
        }
        Ok(Self {
            dim,
            repr: SpanRepr::Enumerated(set),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.dim);
        match &self.repr {
            SpanRepr::Howell(h) => {
                let rows = ModRows {
                    n: h.n,
                    rows: h.rows.clone(),
                };
                let mut w = to_i64(v);
                rows.reduce(&mut w, self.dim)
            }
            SpanRepr::Enumerated(set) => set.contains(v),
        }
    }

    /// Every element of the span, in no particular order.
    pub fn elements(&self, ring: &FiniteRing, cap: u64) -> Result<Vec<Vec<Elem>>> {
        match &self.repr {
            SpanRepr::Enumerated(set) => {
                check_cap("span elements", set.len() as u128, cap)?;
                Ok(set.iter().cloned().collect())
            }
            SpanRepr::Howell(h) => {
                // each element is uniquely Σ c_i h_i with 0 <= c_i < n / pivot_i
                let rows = ModRows {
                    n: h.n,
                    rows: h.rows.clone(),
                };
                let pivots = rows.pivots();
                let orders: Vec<i64> = rows.rows.iter().zip(&pivots).map(|(r, &p)| h.n / r[p]).collect();
                let total = orders.iter().fold(1u128, |acc, &o| acc.saturating_mul(o as u128));
                check_cap("span elements", total, cap)?;
                let mut out = vec![vec![ring.zero(); self.dim]];
                for (row, &ord) in rows.rows.iter().zip(&orders) {
                    let mut next = Vec::with_capacity(out.len() * ord as usize);
                    for v in &out {
                        for c in 0..ord {
                            next.push(
                                v.iter()
                                    .zip(row)
                                    .map(|(&x, &y)| ((x as i64 + c * y).rem_euclid(h.n)) as Elem)
                                    .collect(),
                            );
                        }
                    }
                    out = next;
                }
                Ok(out)
            }
        }
    }

    /// Whether the span is all of `R^dim`.
    pub fn is_full(&self, ring: &FiniteRing) -> bool {
        (0..self.dim).all(|i| {
            let mut e = vec![ring.zero(); self.dim];
            e[i] = ring.one();
            self.contains(&e)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{f4, make_modular_ring};
    use proptest::prelude::*;

    fn brute_solutions(ring: &FiniteRing, m: &RMatrix, b: &[Elem]) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        for_each_vector(ring, m.cols(), |x| {
            if m.apply(ring, x) == b {
                out.push(x.to_vec());
            }
            true
        });
        out
    }

    #[test]
    fn identity_over_f5() {
        let r = make_modular_ring(5).unwrap();
        let m = RMatrix::identity(&r, 3);
        let rep = howell_solve(&r, &m, &[3, 0, 4]).unwrap();
        assert!(rep.solvable);
        assert_eq!(rep.solution.unwrap(), vec![3, 0, 4]);
        assert!(rep.kernel.iter().all(|k| k.iter().all(|&x| x == 0)));
    }

    #[test]
    fn two_x_mod_four() {
        let r = make_modular_ring(4).unwrap();
        let m = RMatrix::from_rows(1, &[vec![2]]);
        let rep = howell_solve(&r, &m, &[1]).unwrap();
        assert!(!rep.solvable);
        let rep = howell_solve(&r, &m, &[2]).unwrap();
        assert!(rep.solvable);
        let x = rep.solution.unwrap();
        // exhaustive scan over x in Z/4: 2x = 2 iff x in {1, 3}
        assert_eq!(brute_solutions(&r, &m, &[2]), vec![vec![1], vec![3]]);
        assert!(x == vec![1] || x == vec![3]);
        assert_eq!(rep.kernel, vec![vec![2]]);
    }

    #[test]
    fn howell_form_is_deterministic_and_canonical() {
        let r = make_modular_ring(12).unwrap();
        let a = RMatrix::from_rows(2, &[vec![4, 6], vec![8, 0]]);
        let b = RMatrix::from_rows(2, &[vec![8, 0], vec![4, 6], vec![0, 0]]);
        let ha = howell_form(&r, &a).unwrap();
        assert_eq!(ha, howell_form(&r, &a).unwrap());
        // same row span, same Howell form
        assert_eq!(ha, howell_form(&r, &b).unwrap());
    }

    #[test]
    fn table_rings_need_exhaustive_route() {
        let f = f4();
        let m = RMatrix::identity(&f, 2);
        assert!(matches!(howell_solve(&f, &m, &[1, 2]), Err(Error::NotModular(_))));
        assert_eq!(solve(&f, &m, &[1, 2], 1_000_000).unwrap(), Some(vec![1, 2]));
        assert!(is_bijective(&f, &m, 1_000_000).unwrap());
        let span = Span::new(&f, 2, &[vec![1, 2]], 1000).unwrap();
        assert!(span.contains(&[2, 3]));
        assert!(!span.contains(&[1, 1]));
        assert!(!span.is_full(&f));
    }

    #[test]
    fn cap_is_enforced() {
        let f = f4();
        let m = RMatrix::zeros(1, 12);
        assert!(matches!(solve(&f, &m, &[1], 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn bijectivity_over_z4() {
        let r = make_modular_ring(4).unwrap();
        let m = RMatrix::from_rows(2, &[vec![1, 1], vec![0, 3]]);
        assert!(is_bijective(&r, &m, 10).unwrap());
        let m = RMatrix::from_rows(2, &[vec![2, 0], vec![0, 1]]);
        assert!(!is_bijective(&r, &m, 10).unwrap());
    }

    fn small_system() -> impl Strategy<Value = (u32, usize, usize, Vec<u16>, Vec<u16>)> {
        (2u32..=16).prop_flat_map(|n| {
            (1usize..=3).prop_flat_map(move |rows| {
                (1usize..=(8 / rows).min(3)).prop_flat_map(move |cols| {
                    (
                        Just(n),
                        Just(rows),
                        Just(cols),
                        proptest::collection::vec(0..n as u16, rows * cols),
                        proptest::collection::vec(0..n as u16, rows),
                    )
                })
            })
        })
    }

    proptest! {
        #[test]
        fn solvability_matches_exhaustive_search((n, rows, cols, entries, b) in small_system()) {
            let ring = make_modular_ring(n).unwrap();
            let m = RMatrix { rows, cols, data: entries };
            let rep = howell_solve(&ring, &m, &b).unwrap();
            let brute = brute_solutions(&ring, &m, &b);
            prop_assert_eq!(rep.solvable, !brute.is_empty());
            if let Some(x) = &rep.solution {
                prop_assert_eq!(&m.apply(&ring, x), &b);
            }
            // kernel generators span exactly the homogeneous solutions
            let zero = vec![0; rows];
            let homog = brute_solutions(&ring, &m, &zero);
            let span = Span::new(&ring, cols, &rep.kernel, 1 << 20).unwrap();
            for k in &rep.kernel {
                prop_assert_eq!(&m.apply(&ring, k), &zero);
            }
            for h in &homog {
                prop_assert!(span.contains(h));
            }
            let mut listed = span.elements(&ring, 1 << 20).unwrap();
            listed.sort();
            let mut homog = homog;
            homog.sort();
            prop_assert_eq!(listed, homog);
        }

        #[test]
        fn span_membership_matches_enumeration((n, rows, cols, entries, _b) in small_system()) {
            let ring = make_modular_ring(n).unwrap();
            let gens: Vec<Vec<Elem>> = entries.chunks(cols).map(|c| c.to_vec()).collect();
            let span = Span::new(&ring, cols, &gens, 1 << 20).unwrap();
            let mut reachable = HashSet::new();
            for_each_vector(&ring, rows, |coef| {
                let mut v = vec![0; cols];
                for (g, &c) in gens.iter().zip(coef) {
                    for (x, &y) in v.iter_mut().zip(g) {
                        *x = ring.add(*x, ring.mul(c, y));
                    }
                }
                reachable.insert(v);
                true
            });
            for_each_vector(&ring, cols, |v| {
                assert_eq!(span.contains(v), reachable.contains(v));
                true
            });
        }
    }
}
