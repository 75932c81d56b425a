//! Arithmetic in `E(x_1..x_s) (x) F_p[y_1..y_s]`.
//!
//! A monomial is an exterior mask over the `x_i` (degree one each) plus an
//! exponent vector over the `y_i` (degree two each). The exponent vector is
//! signed so the same type doubles as the Laurent variant used when clearing
//! denominators in localized identity checks; ordinary elements keep all
//! exponents nonnegative.

use std::collections::BTreeMap;
use std::fmt;

use crate::fp::{FpVec, PrimeContext};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PolyMono {
    pub x_mask: u32,
    pub y_exp: Vec<i32>,
}

impl PolyMono {
    pub fn one(s: usize) -> Self {
        PolyMono {
            x_mask: 0,
            y_exp: vec![0; s],
        }
    }

    /// x_i, 1-indexed.
    pub fn x(s: usize, i: usize) -> Self {
        PolyMono {
            x_mask: 1 << (i - 1),
            y_exp: vec![0; s],
        }
    }

    /// y_i^e, 1-indexed.
    pub fn y(s: usize, i: usize, e: i32) -> Self {
        let mut m = PolyMono::one(s);
        m.y_exp[i - 1] = e;
        m
    }

    pub fn rank(&self) -> usize {
        self.y_exp.len()
    }

    pub fn degree(&self) -> i64 {
        i64::from(self.x_mask.count_ones())
            + 2 * self.y_exp.iter().map(|&e| i64::from(e)).sum::<i64>()
    }

    fn pad(&self, s: usize) -> PolyMono {
        let mut m = self.clone();
        m.y_exp.resize(s, 0);
        m
    }
}

/// Sign of moving every `x` in `b` into place past the `x`s of `a`:
/// `(-1)^(#{(i, j) in a x b : i > j})`. `None` when the masks share a
/// factor.
pub(crate) fn exterior_merge_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(i64::from(inversions))
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    pub terms: BTreeMap<PolyMono, u32>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one(s: usize) -> Self {
        Poly::from_mono(PolyMono::one(s))
    }

    pub fn from_mono(m: PolyMono) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, 1);
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, pc: &PrimeContext, m: PolyMono, c: u32) {
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

    pub fn add(&self, pc: &PrimeContext, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(pc, m.clone(), c);
        }
        out
    }

    pub fn scale(&self, pc: &PrimeContext, c: u32) -> Poly {
        let c = c % pc.p();
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, &v)| (m.clone(), pc.mul(v, c)))
                .collect(),
        }
    }

    pub fn sub(&self, pc: &PrimeContext, other: &Poly) -> Poly {
        self.add(pc, &other.scale(pc, pc.neg(1)))
    }

    pub fn mul(&self, pc: &PrimeContext, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let Some(inv) = exterior_merge_sign(ma.x_mask, mb.x_mask) else {
                    continue;
                };
                let s = ma.rank().max(mb.rank());
                let mut m = ma.pad(s);
                let mbp = mb.pad(s);
                m.x_mask |= mbp.x_mask;
                for (e, &f) in m.y_exp.iter_mut().zip(mbp.y_exp.iter()) {
                    *e += f;
                }
                out.add_term(pc, m, pc.mul(pc.mul(ca, cb), pc.sign(inv)));
            }
        }
        out
    }

    pub fn pow(&self, pc: &PrimeContext, e: u32) -> Poly {
        let s = self.rank().unwrap_or(0);
        let mut acc = Poly::one(s);
        for _ in 0..e {
            acc = acc.mul(pc, self);
        }
        acc
    }

    /// Common rank of the monomials, when there is one.
    pub fn rank(&self) -> Option<usize> {
        self.terms.keys().next().map(|m| m.rank())
    }

    /// Common degree of the terms, when homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        it.all(|m| m.degree() == d).then_some(d)
    }

    pub fn pad(&self, s: usize) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, &c)| (m.pad(s), c)).collect(),
        }
    }

    /// Exact division for purely polynomial (no exterior part) operands, by
    /// long division on the lexicographic leading terms.
    pub fn div_exact(&self, pc: &PrimeContext, divisor: &Poly) -> Result<Poly> {
        assert!(
            self.terms.keys().all(|m| m.x_mask == 0) && divisor.terms.keys().all(|m| m.x_mask == 0),
            "div_exact is for the polynomial part only"
        );
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        let s = divisor.rank().unwrap();
        let (lm_g, lc_g) = {
            let (m, &c) = divisor.terms.iter().next_back().unwrap();
            (m.clone(), c)
        };
        let lc_g_inv = pc.inv(lc_g);
        let mut rem = self.pad(s);
        let mut quot = Poly::zero();
        while let Some((lm_r, lc_r)) = rem.terms.iter().next_back().map(|(m, &c)| (m.clone(), c)) {
            let mut q_exp = Vec::with_capacity(s);
            for (er, eg) in lm_r.y_exp.iter().zip(lm_g.y_exp.iter()) {
                if er < eg {
                    return Err(Error::InexactDivision);
                }
                q_exp.push(er - eg);
            }
            let qm = PolyMono {
                x_mask: 0,
                y_exp: q_exp,
            };
            let qc = pc.mul(lc_r, lc_g_inv);
            quot.add_term(pc, qm.clone(), qc);
            let step = Poly::from_mono(qm).scale(pc, qc).mul(pc, divisor);
            rem = rem.sub(pc, &step);
        }
        Ok(quot)
    }
}

impl fmt::Display for PolyMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for i in 0..self.rank() {
            if self.x_mask >> i & 1 == 1 {
                parts.push(format!("x{}", i + 1));
            }
        }
        for (i, &e) in self.y_exp.iter().enumerate() {
            parts.push(format!("y{}^{}", i + 1, e));
        }
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::lambda::fmt_terms(f, self.terms.iter().map(|(m, &c)| (m.to_string(), c)))
    }
}

/// The Bockstein or a power operation.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SteenrodOp {
    Beta,
    P(u32),
}

impl SteenrodOp {
    pub fn degree(&self, p: u32) -> i64 {
        match self {
            SteenrodOp::Beta => 1,
            SteenrodOp::P(k) => 2 * i64::from(*k) * i64::from(p - 1),
        }
    }
}

impl fmt::Display for SteenrodOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SteenrodOp::Beta => write!(f, "b"),
            SteenrodOp::P(k) => write!(f, "P{k}"),
        }
    }
}

/// The unstable action on `P_s`: the Bockstein is the derivation with
/// `b(x_i) = y_i`, `b(y_i) = 0`; the total power is the ring map
/// `y_i -> y_i + y_i^p`, `x_i -> x_i`, so `P^k(y^m) = binom(m, k)
/// y^(m + k(p-1))` with the Cartan formula distributing over products.
pub fn steenrod_apply(pc: &PrimeContext, op: SteenrodOp, e: &Poly) -> Poly {
    let p = pc.p();
    let mut out = Poly::zero();
    match op {
        SteenrodOp::Beta => {
            for (m, &c) in &e.terms {
                let mut seen_before = 0u32;
                for i in 0..m.rank() {
                    if m.x_mask >> i & 1 == 0 {
                        continue;
                    }
                    let mut nm = m.clone();
                    nm.x_mask &= !(1 << i);
                    nm.y_exp[i] += 1;
                    out.add_term(pc, nm, pc.mul(c, pc.sign(i64::from(seen_before))));
                    seen_before += 1;
                }
            }
        }
        SteenrodOp::P(0) => return e.clone(),
        SteenrodOp::P(k) => {
            for (m, &c) in &e.terms {
                let mut exps = m.y_exp.clone();
                distribute_power(pc, p, m, c, 0, k, &mut exps, &mut out);
            }
        }
    }
    out
}

fn distribute_power(
    pc: &PrimeContext,
    p: u32,
    m: &PolyMono,
    coeff: u32,
    var: usize,
    k_left: u32,
    exps: &mut Vec<i32>,
    out: &mut Poly,
) {
    if coeff == 0 {
        return;
    }
    if var == m.rank() {
        if k_left == 0 {
            out.add_term(
                pc,
                PolyMono {
                    x_mask: m.x_mask,
                    y_exp: exps.clone(),
                },
                coeff,
            );
        }
        return;
    }
    let orig = m.y_exp[var];
    for kj in 0..=k_left {
        let b = pc.binom(i64::from(orig), i64::from(kj));
        if b == 0 {
            continue;
        }
        exps[var] = orig + (kj * (p - 1)) as i32;
        distribute_power(pc, p, m, pc.mul(coeff, b), var + 1, k_left - kj, exps, out);
    }
    exps[var] = orig;
}

/// Substitution action of a matrix `(a_ij)` sending `y_j -> sum_i a_ij y_i`
/// and `x_j -> sum_i a_ij x_i`.
pub fn substitute(pc: &PrimeContext, e: &Poly, s: usize, a: &[Vec<u32>]) -> Poly {
    let mut pow_cache: BTreeMap<(usize, i32), Poly> = BTreeMap::new();
    let y_form = |j: usize| {
        let mut f = Poly::zero();
        for i in 0..s {
            f.add_term(pc, PolyMono::y(s, i + 1, 1), a[i][j]);
        }
        f
    };
    let mut out = Poly::zero();
    for (m, &c) in &e.terms {
        assert!(m.rank() == s);
        let mut acc = Poly::one(s).scale(pc, c);
        for j in 0..s {
            if m.x_mask >> j & 1 == 1 {
                let mut xf = Poly::zero();
                for i in 0..s {
                    xf.add_term(pc, PolyMono::x(s, i + 1), a[i][j]);
                }
                acc = acc.mul(pc, &xf);
            }
        }
        for j in 0..s {
            let ej = m.y_exp[j];
            if ej == 0 {
                continue;
            }
            assert!(ej > 0, "substitution needs nonnegative exponents");
            let powed = pow_cache
                .entry((j, ej))
                .or_insert_with(|| y_form(j).pow(pc, ej as u32))
                .clone();
            acc = acc.mul(pc, &powed);
        }
        out = out.add(pc, &acc);
    }
    out
}

/// Every monomial of total degree `t`, sorted.
pub fn ps_monomials(s: usize, t: i64) -> Vec<PolyMono> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << s) {
        let xd = i64::from(mask.count_ones());
        let rest = t - xd;
        if rest < 0 || rest % 2 != 0 {
            continue;
        }
        let ydeg = (rest / 2) as i32;
        if s == 0 {
            if ydeg == 0 {
                out.push(PolyMono {
                    x_mask: mask,
                    y_exp: Vec::new(),
                });
            }
            continue;
        }
        let mut exps = vec![0i32; s];
        fill_compositions(s, ydeg, 0, &mut exps, mask, &mut out);
    }
    out.sort();
    out
}

fn fill_compositions(
    s: usize,
    left: i32,
    var: usize,
    exps: &mut Vec<i32>,
    mask: u32,
    out: &mut Vec<PolyMono>,
) {
    if var + 1 == s {
        exps[var] = left;
        out.push(PolyMono {
            x_mask: mask,
            y_exp: exps.clone(),
        });
        exps[var] = 0;
        return;
    }
    for e in 0..=left {
        exps[var] = e;
        fill_compositions(s, left - e, var + 1, exps, mask, out);
        exps[var] = 0;
    }
}

/// Coordinates of a homogeneous polynomial over a sorted monomial slice.
pub fn poly_to_vec(poly: &Poly, slice: &[PolyMono]) -> FpVec {
    let entries = poly
        .terms
        .iter()
        .map(|(m, &c)| {
            let idx = slice
                .binary_search(m)
                .unwrap_or_else(|_| panic!("monomial {m} outside the degree slice"));
            (idx, c)
        })
        .collect::<BTreeMap<_, _>>();
    FpVec {
        entries: entries.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc3() -> PrimeContext {
        PrimeContext::new(3).unwrap()
    }

    fn xy(_s: usize, mask: u32, exps: &[i32]) -> Poly {
        Poly::from_mono(PolyMono {
            x_mask: mask,
            y_exp: exps.to_vec(),
        })
    }

    #[test]
    fn exterior_signs() {
        let pc = pc3();
        let x1 = Poly::from_mono(PolyMono::x(2, 1));
        let x2 = Poly::from_mono(PolyMono::x(2, 2));
        // x2 * x1 = -x1 x2
        let m = x2.mul(&pc, &x1);
        assert_eq!(m, xy(2, 0b11, &[0, 0]).scale(&pc, 2));
        // x1 * x1 = 0
        assert!(x1.mul(&pc, &x1).is_zero());
    }

    #[test]
    fn steenrod_known_values() {
        let pc = pc3();
        // b(x1) = y1
        let b = steenrod_apply(&pc, SteenrodOp::Beta, &Poly::from_mono(PolyMono::x(1, 1)));
        assert_eq!(b, xy(1, 0, &[1]));
        // P^1(y1) = y1^3
        let r = steenrod_apply(&pc, SteenrodOp::P(1), &xy(1, 0, &[1]));
        assert_eq!(r, xy(1, 0, &[3]));
        // P^k(y1) = 0 for k >= 2, P^k(x1) = 0 for k >= 1.
        assert!(steenrod_apply(&pc, SteenrodOp::P(2), &xy(1, 0, &[1])).is_zero());
        assert!(
            steenrod_apply(&pc, SteenrodOp::P(1), &Poly::from_mono(PolyMono::x(1, 1))).is_zero()
        );
        // P^1(y1 y2) = y1^3 y2 + y1 y2^3  (Cartan)
        let r = steenrod_apply(&pc, SteenrodOp::P(1), &xy(2, 0, &[1, 1]));
        assert_eq!(r, xy(2, 0, &[3, 1]).add(&pc, &xy(2, 0, &[1, 3])));
        // The Bockstein is a derivation: b(x1 x2) = y1 x2 - x1 y2.
        let x1x2 = xy(2, 0b11, &[0, 0]);
        let b = steenrod_apply(&pc, SteenrodOp::Beta, &x1x2);
        let expect = xy(2, 0b10, &[1, 0]).add(&pc, &xy(2, 0b01, &[0, 1]).scale(&pc, 2));
        assert_eq!(b, expect);
        // b^2 = 0 on a sample.
        let e = xy(2, 0b11, &[2, 5]);
        let bb = steenrod_apply(
            &pc,
            SteenrodOp::Beta,
            &steenrod_apply(&pc, SteenrodOp::Beta, &e),
        );
        assert!(bb.is_zero());
    }

    #[test]
    fn cartan_on_products() {
        let pc = pc3();
        let a = xy(2, 0b01, &[2, 0]);
        let b = xy(2, 0, &[1, 3]);
        let ab = a.mul(&pc, &b);
        let lhs = steenrod_apply(&pc, SteenrodOp::P(2), &ab);
        let mut rhs = Poly::zero();
        for i in 0..=2u32 {
            let pa = steenrod_apply(&pc, SteenrodOp::P(i), &a);
            let pb = steenrod_apply(&pc, SteenrodOp::P(2 - i), &b);
            rhs = rhs.add(&pc, &pa.mul(&pc, &pb));
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_is_exact_inverse_of_multiplication() {
        let pc = pc3();
        let f = xy(2, 0, &[1, 0]).add(&pc, &xy(2, 0, &[0, 1]).scale(&pc, 2));
        let g = xy(2, 0, &[2, 1]).add(&pc, &xy(2, 0, &[0, 2]));
        let prod = f.mul(&pc, &g);
        assert_eq!(prod.div_exact(&pc, &f).unwrap(), g);
        assert_eq!(prod.div_exact(&pc, &g).unwrap(), f);
        assert!(xy(2, 0, &[1, 1]).div_exact(&pc, &f).is_err());
    }

    #[test]
    fn slice_enumeration_counts() {
        let ms = ps_monomials(1, 3);
        assert_eq!(
            ms,
            vec![PolyMono {
                x_mask: 1,
                y_exp: vec![1]
            }]
        );
        for t in 0..=12 {
            for m in ps_monomials(2, t) {
                assert_eq!(m.degree(), t);
            }
        }
        // Degree 4, s = 2: y1^2, y1y2, y2^2 and x1x2*y_i.
        assert_eq!(ps_monomials(2, 4).len(), 5);
    }
}
