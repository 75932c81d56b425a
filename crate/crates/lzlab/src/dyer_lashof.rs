//! The Dyer-Lashof algebra as the nonnegative-excess quotient of the
//! opposite Lambda algebra.
//!
//! A length-`s` admissible word `b^(e_1) Q^(i_1) .. b^(e_s) Q^(i_s)` of
//! nonnegative excess is a basis monomial (written `bQ<i>` / `Q<i>`). The
//! right Steenrod action is defined through the kappa duality with the
//! invariant subalgebra `B[s]`: the action matrix is the transpose of the
//! left action on `B[s]`, conjugated by the pairing. The closed one-variable
//! formula for `(bQ^i) P^k` stays an independent oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::fp::{FpSparseMatrix, FpSubspace, FpVec};
use crate::invariants::{steenrod_apply, BsBasis, SteenrodOp};
use crate::lambda::{LambdaElem, LambdaGen, LambdaMono};
use crate::{Context, Error, PrimeContext, Result};

/// An admissible word of nonnegative excess, reusing the Lambda-side
/// generator storage (`eps = 1` marks a Bockstein prefix).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DlMono(pub LambdaMono);

impl DlMono {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, p: u32) -> i64 {
        self.0.degree(p)
    }
}

impl fmt::Display for DlMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 .0.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in self.0 .0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if g.eps == 1 {
                write!(f, "bQ{}", g.upper)?;
            } else {
                write!(f, "Q{}", g.upper)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DlElem {
    pub terms: BTreeMap<DlMono, u32>,
}

impl DlElem {
    pub fn zero() -> Self {
        DlElem::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, pc: &PrimeContext, m: DlMono, c: u32) {
        let c = c % pc.p();
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = pc.add(*o.get(), c);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn scale(&self, pc: &PrimeContext, c: u32) -> DlElem {
        let c = c % pc.p();
        if c == 0 {
            return DlElem::zero();
        }
        DlElem {
            terms: self
                .terms
                .iter()
                .map(|(m, &v)| (m.clone(), pc.mul(v, c)))
                .collect(),
        }
    }

    pub fn add(&self, pc: &PrimeContext, other: &DlElem) -> DlElem {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(pc, m.clone(), c);
        }
        out
    }

    /// Coordinates over a sorted basis slice; monomials outside the slice
    /// are a usage bug.
    pub fn to_vec(&self, basis: &[DlMono]) -> FpVec {
        let entries = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let idx = basis
                    .binary_search(m)
                    .unwrap_or_else(|_| panic!("monomial {m} outside the basis slice"));
                (idx, c)
            })
            .collect();
        FpVec { entries }
    }

    pub fn from_vec(pc: &PrimeContext, basis: &[DlMono], v: &FpVec) -> DlElem {
        let mut out = DlElem::zero();
        for &(i, c) in &v.entries {
            out.add_term(pc, basis[i].clone(), c);
        }
        out
    }
}

impl fmt::Display for DlElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::lambda::fmt_terms(f, self.terms.iter().map(|(m, &c)| (m.to_string(), c)))
    }
}

/// The kappa pairing between a degree slice of `B[s]` and the matching
/// slice of the Dyer-Lashof algebra, with its inverse. Construction fails
/// loudly when the dimensions differ or the matrix is singular, since that
/// would falsify the duality the right action is built on.
pub struct Pairing {
    pub s: usize,
    pub t: i64,
    pub bs: Arc<BsBasis>,
    pub r_basis: Vec<DlMono>,
    /// `mat[b][r] = <b-th product, r-th monomial>`
    pub mat: Vec<Vec<u32>>,
    pub inv: Vec<Vec<u32>>,
}

impl Context {
    /// Straightens and then deletes every admissible monomial of negative
    /// excess, renaming the survivors.
    pub fn project_to_r(&self, e: &LambdaElem) -> DlElem {
        let pc = self.pc();
        let p = self.p();
        let mut out = DlElem::zero();
        for (m, &c) in &self.straighten(e).terms {
            if m.excess(p) >= 0 {
                out.add_term(pc, DlMono(m.clone()), c);
            }
        }
        out
    }

    /// Admissible monomials of nonnegative excess in `(s, t)`, sorted.
    pub fn r_basis(&self, s: usize, t: i64) -> Vec<DlMono> {
        self.admissible_basis(s, t)
            .into_iter()
            .filter(|m| m.excess(self.p()) >= 0)
            .map(DlMono)
            .collect()
    }

    /// The power operation: multiply every index by p on all-Bockstein
    /// monomials, kill everything else, then truncate any negative excess
    /// that appears (none does for length <= 3).
    pub fn theta(&self, e: &DlElem) -> DlElem {
        let pc = self.pc();
        let p = self.p();
        let mut out = DlElem::zero();
        for (m, &c) in &e.terms {
            if !m.0.all_lambda() {
                continue;
            }
            let word: Vec<LambdaGen> =
                m.0 .0
                    .iter()
                    .map(|g| LambdaGen::new(1, i64::from(g.upper) * i64::from(p)).unwrap())
                    .collect();
            let mapped = LambdaMono(word);
            debug_assert!(mapped.is_admissible(p));
            if mapped.excess(p) >= 0 {
                out.add_term(pc, DlMono(mapped), c);
            }
        }
        out
    }

    /// The pairing table at `(s, t)`, cached compute-once.
    pub fn pairing(&self, s: usize, t: i64) -> Result<Arc<Pairing>> {
        self.pairings
            .get_or_compute((s, t), || self.pairing_uncached(s, t).map(Arc::new))
    }

    fn pairing_uncached(&self, s: usize, t: i64) -> Result<Pairing> {
        let pc = self.pc();
        let bs = self.bs_basis(s, t);
        let r_basis = self.r_basis(s, t);
        if bs.dim() != r_basis.len() {
            return Err(Error::DualityFalsified {
                s,
                t,
                dim_b: bs.dim(),
                dim_r: r_basis.len(),
                invertible: false,
            });
        }
        let n = bs.dim();
        let mut mat = vec![vec![0u32; n]; n];
        for (bi, prod) in bs.products.iter().enumerate() {
            let expansion = self.uv_expand(s, &prod.word);
            for (ri, mono) in r_basis.iter().enumerate() {
                mat[bi][ri] = self.kappa_pair(&expansion, &mono.0)?;
            }
        }
        let Some(inv) = invert_matrix(pc, &mat) else {
            return Err(Error::DualityFalsified {
                s,
                t,
                dim_b: n,
                dim_r: n,
                invertible: false,
            });
        };
        Ok(Pairing {
            s,
            t,
            bs,
            r_basis,
            mat,
            inv,
        })
    }

    /// The right action of `op` on a homogeneous element of `R_s` in degree
    /// `t`, computed as the pairing transpose of the left action on `B[s]`:
    /// `<e.op, b> = <e, op.b>` for every `b` in the lower-degree basis.
    pub fn right_action(&self, op: SteenrodOp, e: &DlElem, s: usize, t: i64) -> Result<DlElem> {
        let pc = self.pc();
        if e.is_zero() {
            return Ok(DlElem::zero());
        }
        let t_out = t - op.degree(self.p());
        if t_out < 0 {
            return Ok(DlElem::zero());
        }
        let here = self.pairing(s, t)?;
        let lower = self.pairing(s, t_out)?;
        if lower.r_basis.is_empty() {
            return Ok(DlElem::zero());
        }
        let e_coords = e.to_vec(&here.r_basis);
        // w_j = <e, op . b'_j>
        let mut w = vec![0u32; lower.bs.dim()];
        for (j, prod) in lower.bs.products.iter().enumerate() {
            let image = steenrod_apply(pc, op, &prod.poly);
            if image.is_zero() {
                continue;
            }
            let coords = here.bs.express(self, &image).unwrap_or_else(|| {
                panic!(
                    "Steenrod image of {} left B[{s}] in degree {t}",
                    prod.word_string()
                )
            });
            let mut acc = 0u32;
            for (bi, &cb) in coords.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                for &(ri, ce) in &e_coords.entries {
                    acc = pc.add(acc, pc.mul(cb, pc.mul(here.mat[bi][ri], ce)));
                }
            }
            w[j] = acc;
        }
        // Solve pairing' x = w.
        let mut out = DlElem::zero();
        for (ri, mono) in lower.r_basis.iter().enumerate() {
            let mut xr = 0u32;
            for (j, &wj) in w.iter().enumerate() {
                xr = pc.add(xr, pc.mul(lower.inv[ri][j], wj));
            }
            out.add_term(pc, mono.clone(), xr);
        }
        Ok(out)
    }

    /// Closed form for `(bQ^i) P^k` on length-one elements:
    /// `(-1)^k binom((p-1)(i-k) - 1, k) bQ^(i-k)`, truncated to nonnegative
    /// excess. Used only as a test oracle for the duality-defined action.
    pub fn nishida_bq_single(&self, i: i64, k: i64) -> DlElem {
        let pc = self.pc();
        assert!(i >= 1 && k >= 1);
        let mut out = DlElem::zero();
        if i - k < 1 {
            return out;
        }
        let c = pc.mul(
            pc.sign(k),
            pc.binom(i64::from(self.p() - 1) * (i - k) - 1, k),
        );
        out.add_term(
            pc,
            DlMono(LambdaMono(vec![LambdaGen::new(1, i - k).unwrap()])),
            c,
        );
        out
    }

    /// Basis of `Ann(R_s)_t`, computed as the annihilator of the
    /// Steenrod-decomposable part of `B[s]_t` under the kappa pairing (the
    /// dual of the degreewise indecomposables).
    pub fn ann_basis(&self, s: usize, t: i64) -> Result<Vec<DlElem>> {
        let pc = self.pc();
        let here = self.pairing(s, t)?;
        let n = here.r_basis.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        let abar = self.abar_and_indecomposables(s, t, crate::invariants::Ambient::Bs);
        let mut rows = Vec::new();
        for u in abar.subspace.basis() {
            let mut row = FpVec::zero();
            for &(bi, cu) in &u.entries {
                let mat_row = FpVec {
                    entries: here.mat[bi]
                        .iter()
                        .enumerate()
                        .filter(|&(_, &v)| v != 0)
                        .map(|(j, &v)| (j, v))
                        .collect(),
                };
                row = row.add_scaled(pc, &mat_row, cu);
            }
            rows.push(row);
        }
        let m = FpSparseMatrix::from_rows(pc, n, rows);
        let (_, kernel) = m.kernel_and_rank();
        Ok(kernel
            .basis()
            .iter()
            .map(|v| DlElem::from_vec(pc, &here.r_basis, v))
            .collect())
    }

    /// The same space computed the other way, as the simultaneous kernel of
    /// the right action of the Bockstein and of every `P^k` that can act
    /// out of degree `t`. Kept as an independent route for cross-checks.
    pub fn ann_basis_by_kernels(&self, s: usize, t: i64) -> Result<Vec<DlElem>> {
        let pc = self.pc();
        let basis = self.r_basis(s, t);
        if basis.is_empty() {
            return Ok(Vec::new());
        }
        let mut ops = vec![SteenrodOp::Beta];
        let mut k = 1;
        while 2 * i64::from(k) * i64::from(self.p() - 1) <= t {
            ops.push(SteenrodOp::P(k));
            k += 1;
        }
        let mut rows: Vec<Vec<(usize, u32)>> = Vec::new();
        for op in ops {
            let t_out = t - op.degree(self.p());
            let out_basis = self.r_basis(s, t_out);
            let mut op_rows = vec![Vec::new(); out_basis.len()];
            for (j, mono) in basis.iter().enumerate() {
                let mut e = DlElem::zero();
                e.add_term(pc, mono.clone(), 1);
                let image = self.right_action(op, &e, s, t)?;
                for (m, &c) in &image.terms {
                    let ri = out_basis.binary_search(m).expect("image in out basis");
                    op_rows[ri].push((j, c));
                }
            }
            rows.extend(op_rows.into_iter().filter(|r| !r.is_empty()));
        }
        let m = FpSparseMatrix::from_rows(
            pc,
            basis.len(),
            rows.into_iter().map(|entries| FpVec { entries }).collect(),
        );
        let (_, kernel) = m.kernel_and_rank();
        Ok(kernel
            .basis()
            .iter()
            .map(|v| DlElem::from_vec(pc, &basis, v))
            .collect())
    }

    pub fn parse_dl_elem(&self, s: &str) -> Result<DlElem> {
        let terms = crate::lambda::parse_element(self.pc(), s, parse_dl_mono)?;
        let mut out = DlElem::zero();
        for (m, c) in terms {
            out.add_term(self.pc(), m, c);
        }
        Ok(out)
    }
}

pub fn parse_dl_mono(s: &str) -> Result<DlMono> {
    let s = s.trim();
    if s == "1" {
        return Ok(DlMono(LambdaMono::one()));
    }
    let mut gens = Vec::new();
    for tok in s.split_whitespace() {
        let (eps, rest) = match tok.strip_prefix("bQ") {
            Some(r) => (1u8, r),
            None => match tok.strip_prefix('Q') {
                Some(r) => (0u8, r),
                None => return Err(Error::Parse(format!("bad Dyer-Lashof token {tok:?}"))),
            },
        };
        let upper: i64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in {tok:?}")))?;
        let g = LambdaGen::new(eps, upper)
            .ok_or_else(|| Error::Parse(format!("token {tok:?} out of range")))?;
        gens.push(g);
    }
    Ok(DlMono(LambdaMono(gens)))
}

/// Span of a family of elements inside a slice, for rank computations.
pub fn dl_span(pc: &PrimeContext, basis: &[DlMono], elems: &[DlElem]) -> FpSubspace {
    FpSubspace::from_rows(pc, basis.len(), elems.iter().map(|e| e.to_vec(basis)))
}

fn invert_matrix(pc: &PrimeContext, mat: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = mat.len();
    let mut a: Vec<Vec<u32>> = mat.to_vec();
    let mut inv: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = pc.inv(a[col][col]);
        for j in 0..n {
            a[col][j] = pc.mul(a[col][j], scale);
            inv[col][j] = pc.mul(inv[col][j], scale);
        }
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for j in 0..n {
                a[r][j] = pc.sub(a[r][j], pc.mul(f, a[col][j]));
                inv[r][j] = pc.sub(inv[r][j], pc.mul(f, inv[col][j]));
            }
        }
    }
    Some(inv)
}
