//! Exact arithmetic mod an odd prime and sparse linear algebra.
//!
//! Scalars are least nonnegative residues stored as `u32`. Vectors and
//! matrices are sparse with strictly increasing column indices and no stored
//! zeros. Row reduction is over the prime field, so ranks, kernels and
//! membership tests are exact.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Arithmetic tables for one odd prime.
#[derive(Clone, Debug)]
pub struct PrimeContext {
    p: u32,
    inv: Vec<u32>,
}

fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeContext {
    pub fn new(p: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let mut inv = vec![0u32; p as usize];
        inv[1] = 1;
        for a in 2..p {
            // p = (p/a)*a + p%a  =>  inv(a) = -(p/a) * inv(p%a)
            inv[a as usize] = ((p - p / a) as u64 * inv[(p % a) as usize] as u64 % p as u64) as u32;
        }
        Ok(PrimeContext { p, inv })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse of a nonzero residue.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0 && a < self.p);
        self.inv[a as usize]
    }

    /// Least nonnegative residue of an arbitrary integer.
    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(&self, e: i64) -> u32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            self.p - 1
        }
    }

    /// Generalized binomial coefficient mod p: zero for `b < 0`, Lucas'
    /// theorem for `a >= 0`, and `binom(a, b) = (-1)^b binom(b - a - 1, b)`
    /// for negative tops (so `binom(-1, n) = (-1)^n`).
    pub fn binom(&self, a: i64, b: i64) -> u32 {
        if b < 0 {
            return 0;
        }
        if a >= 0 {
            if b > a {
                return 0;
            }
            return self.binom_lucas(a as u64, b as u64);
        }
        let top = b - a - 1;
        self.mul(self.sign(b), self.binom_lucas(top as u64, b as u64))
    }

    fn binom_lucas(&self, mut a: u64, mut b: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u32;
        while b > 0 {
            let (ad, bd) = (a % p, b % p);
            if bd > ad {
                return 0;
            }
            acc = self.mul(acc, self.binom_small(ad as u32, bd as u32));
            a /= p;
            b /= p;
        }
        acc
    }

    fn binom_small(&self, a: u32, b: u32) -> u32 {
        let mut num = 1u32;
        let mut den = 1u32;
        for k in 0..b {
            num = self.mul(num, (a - k) % self.p);
            den = self.mul(den, (k + 1) % self.p);
        }
        self.mul(num, self.inv(den))
    }
}

/// Sparse vector: `(column, value)` pairs with strictly increasing columns
/// and nonzero values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FpVec {
    pub entries: Vec<(usize, u32)>,
}

impl FpVec {
    pub fn zero() -> Self {
        FpVec::default()
    }

    pub fn unit(col: usize) -> Self {
        FpVec {
            entries: vec![(col, 1)],
        }
    }

    /// Builds a vector from unsorted, possibly repeated pairs.
    pub fn from_pairs(pc: &PrimeContext, pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for (c, v) in pairs {
            let e = map.entry(c).or_insert(0u32);
            *e = pc.add(*e, v % pc.p());
        }
        FpVec {
            entries: map.into_iter().filter(|&(_, v)| v != 0).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, col: usize) -> u32 {
        match self.entries.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn leading(&self) -> Option<(usize, u32)> {
        self.entries.first().copied()
    }

    pub fn scale(&self, pc: &PrimeContext, c: u32) -> FpVec {
        if c == 0 {
            return FpVec::zero();
        }
        FpVec {
            entries: self
                .entries
                .iter()
                .map(|&(i, v)| (i, pc.mul(v, c)))
                .collect(),
        }
    }

    /// `self + c * other`, merged in one pass.
    pub fn add_scaled(&self, pc: &PrimeContext, other: &FpVec, c: u32) -> FpVec {
        if c == 0 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, av) = self.entries[i];
            let (b, bv) = other.entries[j];
            if a < b {
                out.push((a, av));
                i += 1;
            } else if b < a {
                out.push((b, pc.mul(bv, c)));
                j += 1;
            } else {
                let v = pc.add(av, pc.mul(bv, c));
                if v != 0 {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.entries[i..]);
        out.extend(other.entries[j..].iter().map(|&(b, bv)| (b, pc.mul(bv, c))));
        FpVec { entries: out }
    }
}

/// A subspace kept in reduced row echelon form, with strictly increasing
/// pivot columns and pivot entries normalized to 1.
#[derive(Clone, Debug, Default)]
pub struct FpSubspace {
    n_cols: usize,
    basis: Vec<FpVec>,
    pivots: Vec<usize>,
}

impl FpSubspace {
    pub fn empty(n_cols: usize) -> Self {
        FpSubspace {
            n_cols,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(
        pc: &PrimeContext,
        n_cols: usize,
        rows: impl IntoIterator<Item = FpVec>,
    ) -> Self {
        let mut s = FpSubspace::empty(n_cols);
        for r in rows {
            s.add_row(pc, r);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn basis(&self) -> &[FpVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result has no support on pivot
    /// columns.
    pub fn reduce(&self, pc: &PrimeContext, v: &FpVec) -> FpVec {
        self.reduce_with_coords(pc, v).0
    }

    /// Reduces `v` and also reports the coefficient taken of each basis row.
    pub fn reduce_with_coords(&self, pc: &PrimeContext, v: &FpVec) -> (FpVec, Vec<u32>) {
        let mut cur = v.clone();
        let mut coords = vec![0u32; self.basis.len()];
        for (k, row) in self.basis.iter().enumerate() {
            let c = cur.get(self.pivots[k]);
            if c != 0 {
                coords[k] = c;
                cur = cur.add_scaled(pc, row, pc.neg(c));
            }
        }
        (cur, coords)
    }

    /// Adds a row, keeping reduced echelon form. Returns `true` when the rank
    /// grew.
    pub fn add_row(&mut self, pc: &PrimeContext, v: FpVec) -> bool {
        let red = self.reduce(pc, &v);
        let Some((pivot, lead)) = red.leading() else {
            return false;
        };
        let norm = red.scale(pc, pc.inv(lead));
        // Clear the new pivot column from the existing rows.
        for row in self.basis.iter_mut() {
            let c = row.get(pivot);
            if c != 0 {
                *row = row.add_scaled(pc, &norm, pc.neg(c));
            }
        }
        let at = self.pivots.partition_point(|&q| q < pivot);
        self.pivots.insert(at, pivot);
        self.basis.insert(at, norm);
        true
    }

    /// Coordinates of `v` in the basis, or `None` when `v` is outside the
    /// span. A vector of the wrong length is a usage bug.
    pub fn membership(&self, pc: &PrimeContext, v: &FpVec) -> Result<Option<Vec<u32>>> {
        if let Some(&(c, _)) = v.entries.last() {
            if c >= self.n_cols {
                return Err(Error::DimensionMismatch {
                    expected: self.n_cols,
                    found: c + 1,
                });
            }
        }
        let (res, coords) = self.reduce_with_coords(pc, v);
        Ok(if res.is_zero() { Some(coords) } else { None })
    }

    pub fn contains(&self, pc: &PrimeContext, v: &FpVec) -> bool {
        self.reduce(pc, v).is_zero()
    }
}

/// A basis of explicitly chosen rows together with the bookkeeping needed to
/// express arbitrary vectors as combinations of those original rows (not of
/// their echelon forms).
#[derive(Clone, Debug)]
pub struct RowBasis {
    rref: Vec<FpVec>,
    pivots: Vec<usize>,
    /// `rref[k] = sum_j comb[k][j] * original_row[j]`
    comb: Vec<Vec<u32>>,
    n_rows: usize,
}

impl RowBasis {
    /// Builds from independent rows; returns `None` if the rows are dependent.
    pub fn from_independent_rows(pc: &PrimeContext, n_cols: usize, rows: &[FpVec]) -> Option<Self> {
        debug_assert!(rows
            .iter()
            .all(|r| r.entries.last().is_none_or(|&(c, _)| c < n_cols)));
        let mut rb = RowBasis {
            rref: Vec::new(),
            pivots: Vec::new(),
            comb: Vec::new(),
            n_rows: rows.len(),
        };
        for (j, r) in rows.iter().enumerate() {
            let mut cur = r.clone();
            let mut taken = vec![0u32; rows.len()];
            taken[j] = 1;
            for (k, row) in rb.rref.iter().enumerate() {
                let c = cur.get(rb.pivots[k]);
                if c != 0 {
                    cur = cur.add_scaled(pc, row, pc.neg(c));
                    for (t, &cc) in taken.iter_mut().zip(rb.comb[k].iter()) {
                        *t = pc.sub(*t, pc.mul(c, cc));
                    }
                }
            }
            let (pivot, lead) = cur.leading()?;
            let s = pc.inv(lead);
            let norm = cur.scale(pc, s);
            let taken: Vec<u32> = taken.iter().map(|&t| pc.mul(t, s)).collect();
            // Back-substitute to keep the rref reduced.
            for k in 0..rb.rref.len() {
                let c = rb.rref[k].get(pivot);
                if c != 0 {
                    rb.rref[k] = rb.rref[k].add_scaled(pc, &norm, pc.neg(c));
                    let updated: Vec<u32> = rb.comb[k]
                        .iter()
                        .zip(taken.iter())
                        .map(|(&a, &b)| pc.sub(a, pc.mul(c, b)))
                        .collect();
                    rb.comb[k] = updated;
                }
            }
            let at = rb.pivots.partition_point(|&q| q < pivot);
            rb.pivots.insert(at, pivot);
            rb.rref.insert(at, norm);
            rb.comb.insert(at, taken);
        }
        Some(rb)
    }

    pub fn dim(&self) -> usize {
        self.rref.len()
    }

    /// Coordinates of `v` over the original rows, or `None` if outside the
    /// span.
    pub fn express(&self, pc: &PrimeContext, v: &FpVec) -> Option<Vec<u32>> {
        let mut cur = v.clone();
        let mut coords = vec![0u32; self.n_rows];
        for (k, row) in self.rref.iter().enumerate() {
            let c = cur.get(self.pivots[k]);
            if c != 0 {
                cur = cur.add_scaled(pc, row, pc.neg(c));
                for (out, &cc) in coords.iter_mut().zip(self.comb[k].iter()) {
                    *out = pc.add(*out, pc.mul(c, cc));
                }
            }
        }
        if cur.is_zero() {
            Some(coords)
        } else {
            None
        }
    }
}

struct RrefData {
    rank: usize,
    kernel: FpSubspace,
    row_space: FpSubspace,
}

/// Sparse matrix over F_p. Immutable once built; row reduction is computed on
/// demand and cached per instance.
pub struct FpSparseMatrix {
    pc: PrimeContext,
    n_cols: usize,
    rows: Vec<FpVec>,
    reduced: OnceLock<RrefData>,
}

impl FpSparseMatrix {
    pub fn new(pc: &PrimeContext, n_cols: usize) -> Self {
        FpSparseMatrix {
            pc: pc.clone(),
            n_cols,
            rows: Vec::new(),
            reduced: OnceLock::new(),
        }
    }

    pub fn from_rows(pc: &PrimeContext, n_cols: usize, rows: Vec<FpVec>) -> Self {
        FpSparseMatrix {
            pc: pc.clone(),
            n_cols,
            rows,
            reduced: OnceLock::new(),
        }
    }

    pub fn push_row(&mut self, row: FpVec) {
        assert!(
            self.reduced.get().is_none(),
            "matrix is frozen once reduced"
        );
        self.rows.push(row);
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &FpVec) -> FpVec {
        let pairs = self.rows.iter().enumerate().filter_map(|(r, row)| {
            let mut acc = 0u32;
            for &(c, a) in &row.entries {
                acc = self.pc.add(acc, self.pc.mul(a, v.get(c)));
            }
            (acc != 0).then_some((r, acc))
        });
        FpVec {
            entries: pairs.collect(),
        }
    }

    fn reduce_once(&self) -> &RrefData {
        self.reduced.get_or_init(|| {
            let pc = &self.pc;
            let row_space = FpSubspace::from_rows(pc, self.n_cols, self.rows.iter().cloned());
            let rank = row_space.dim();
            // Kernel from the reduced rows: one basis vector per free column.
            let pivot_set: std::collections::BTreeSet<usize> =
                row_space.pivots().iter().copied().collect();
            let mut kernel = FpSubspace::empty(self.n_cols);
            for f in 0..self.n_cols {
                if pivot_set.contains(&f) {
                    continue;
                }
                let mut entries = vec![(f, 1u32)];
                for (k, row) in row_space.basis().iter().enumerate() {
                    let c = row.get(f);
                    if c != 0 {
                        entries.push((row_space.pivots()[k], pc.neg(c)));
                    }
                }
                entries.sort_unstable_by_key(|&(c, _)| c);
                kernel.add_row(pc, FpVec { entries });
            }
            RrefData {
                rank,
                kernel,
                row_space,
            }
        })
    }

    /// Rank together with a basis of the right kernel `{x : Mx = 0}`.
    pub fn kernel_and_rank(&self) -> (usize, &FpSubspace) {
        let d = self.reduce_once();
        (d.rank, &d.kernel)
    }

    pub fn rank(&self) -> usize {
        self.reduce_once().rank
    }

    pub fn row_space(&self) -> &FpSubspace {
        &self.reduce_once().row_space
    }
}
