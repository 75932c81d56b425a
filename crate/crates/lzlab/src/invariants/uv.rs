//! The upper-triangular-invariant coordinates: an exterior algebra on
//! `u_1..u_s` tensored with Laurent polynomials in `v_1..v_s`.
//!
//! `B[s]` generators expand here through closed monomial forms and the
//! Dickson recurrence; the kappa map pairs such expansions with admissible
//! words of the opposite Lambda algebra, and the boundary operator of the
//! ambient chain complex acts on raw exponents.

use std::collections::BTreeMap;
use std::fmt;

use super::{BsGen, GenKey, Poly, PolyMono};
use crate::fp::PrimeContext;
use crate::lambda::LambdaMono;
use crate::{Context, Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct UvMono {
    pub u_mask: u32,
    pub v_exp: Vec<i32>,
}

impl UvMono {
    pub fn one(s: usize) -> Self {
        UvMono {
            u_mask: 0,
            v_exp: vec![0; s],
        }
    }

    pub fn rank(&self) -> usize {
        self.v_exp.len()
    }

    pub fn degree(&self) -> i64 {
        i64::from(self.u_mask.count_ones())
            + 2 * self.v_exp.iter().map(|&e| i64::from(e)).sum::<i64>()
    }

    fn pad(&self, s: usize) -> UvMono {
        let mut m = self.clone();
        m.v_exp.resize(s, 0);
        m
    }

    /// The `(eps_k, i_k)` profile with `v_k = (p-1) i_k - eps_k`, all
    /// `i_k >= 0`; errors when some exponent does not fit the pattern.
    pub fn profile(&self, p: u32) -> Result<Vec<(u8, i64)>> {
        let q = i64::from(p - 1);
        let mut out = Vec::with_capacity(self.rank());
        for k in 0..self.rank() {
            let eps = u8::from(self.u_mask >> k & 1 == 1);
            let num = i64::from(self.v_exp[k]) + i64::from(eps);
            if num % q != 0 || num / q < 0 {
                return Err(Error::Unparametrizable(self.to_string()));
            }
            out.push((eps, num / q));
        }
        Ok(out)
    }

    /// The destabilization inequality satisfied by every expansion of a
    /// `B[s]` element: the profile exists and its excess
    /// `2 i_1 - eps_1 - sum_{k>=2} (2(p-1) i_k - eps_k)` is nonnegative.
    pub fn destab_ok(&self, p: u32) -> bool {
        let Ok(profile) = self.profile(p) else {
            return false;
        };
        let Some(&(e1, i1)) = profile.first() else {
            return true;
        };
        let mut e = 2 * i1 - i64::from(e1);
        for &(ek, ik) in &profile[1..] {
            e -= 2 * i64::from(p - 1) * ik - i64::from(ek);
        }
        e >= 0
    }
}

impl fmt::Display for UvMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for k in 0..self.rank() {
            if self.u_mask >> k & 1 == 1 {
                parts.push(format!("u{}", k + 1));
            }
            parts.push(format!("v{}^{}", k + 1, self.v_exp[k]));
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UvElem {
    pub terms: BTreeMap<UvMono, u32>,
}

impl UvElem {
    pub fn zero() -> Self {
        UvElem::default()
    }

    pub fn one(s: usize) -> Self {
        UvElem::from_mono(UvMono::one(s))
    }

    pub fn from_mono(m: UvMono) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, 1);
        UvElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, pc: &PrimeContext, m: UvMono, c: u32) {
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

    pub fn add(&self, pc: &PrimeContext, other: &UvElem) -> UvElem {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(pc, m.clone(), c);
        }
        out
    }

    pub fn scale(&self, pc: &PrimeContext, c: u32) -> UvElem {
        let c = c % pc.p();
        if c == 0 {
            return UvElem::zero();
        }
        UvElem {
            terms: self
                .terms
                .iter()
                .map(|(m, &v)| (m.clone(), pc.mul(v, c)))
                .collect(),
        }
    }

    pub fn mul(&self, pc: &PrimeContext, other: &UvElem) -> UvElem {
        let mut out = UvElem::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let Some(inv) = super::poly::exterior_merge_sign(ma.u_mask, mb.u_mask) else {
                    continue;
                };
                let s = ma.rank().max(mb.rank());
                let mut m = ma.pad(s);
                let mbp = mb.pad(s);
                m.u_mask |= mbp.u_mask;
                for (e, &f) in m.v_exp.iter_mut().zip(mbp.v_exp.iter()) {
                    *e += f;
                }
                out.add_term(pc, m, pc.mul(pc.mul(ca, cb), pc.sign(inv)));
            }
        }
        out
    }

    pub fn pow(&self, pc: &PrimeContext, e: u32) -> UvElem {
        let s = self.terms.keys().next().map_or(0, UvMono::rank);
        let mut acc = UvElem::one(s);
        for _ in 0..e {
            acc = acc.mul(pc, self);
        }
        acc
    }

    pub fn pad(&self, s: usize) -> UvElem {
        UvElem {
            terms: self.terms.iter().map(|(m, &c)| (m.pad(s), c)).collect(),
        }
    }

    /// Division by a single v-monomial (exponent subtraction). Errors when
    /// the divisor is not a monomial.
    pub fn div_monomial(&self, pc: &PrimeContext, divisor: &UvElem) -> Result<UvElem> {
        if divisor.terms.len() != 1 {
            return Err(Error::InexactDivision);
        }
        let (dm, &dc) = divisor.terms.iter().next().unwrap();
        if dm.u_mask != 0 {
            return Err(Error::InexactDivision);
        }
        let inv = pc.inv(dc);
        let mut out = UvElem::zero();
        for (m, &c) in &self.terms {
            let s = m.rank().max(dm.rank());
            let mut nm = m.pad(s);
            let dmp = dm.pad(s);
            for (e, &f) in nm.v_exp.iter_mut().zip(dmp.v_exp.iter()) {
                *e -= f;
            }
            out.add_term(pc, nm, pc.mul(c, inv));
        }
        Ok(out)
    }
}

impl fmt::Display for UvElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::lambda::fmt_terms(f, self.terms.iter().map(|(m, &c)| (m.to_string(), c)))
    }
}

impl Context {
    /// The uv expansion of a named invariant. `V_i` and `q_{s,0}` are
    /// single v-monomials; `q_{s,i}` follows the Dickson recurrence;
    /// `R_{s;s-1}` has a closed monomial form, lower `R_{s;i}` follow their
    /// recurrence, and the two-index classes divide out `q_{s,0}`.
    pub fn uv_gen(&self, key: GenKey) -> UvElem {
        self.gen_uv
            .get_or_compute(key.clone(), || self.uv_gen_uncached(&key))
    }

    fn uv_gen_uncached(&self, key: &GenKey) -> UvElem {
        let pc = self.pc();
        let p = self.p();
        match key {
            GenKey::V { s } => {
                let s = usize::from(*s);
                let mut m = UvMono::one(s);
                for j in 1..s {
                    m.v_exp[j - 1] = (p.pow((s - 1 - j) as u32) * (p - 1)) as i32;
                }
                m.v_exp[s - 1] = 1;
                UvElem::from_mono(m)
            }
            GenKey::Q { s, i } => {
                // q_{s,i} = q_{s-1,i-1}^p + q_{s-1,i} V_s^(p-1)
                let su = usize::from(*s);
                let a = self.uv_q(su - 1, i64::from(*i) - 1).pad(su).pow(pc, p);
                let vs = self.uv_gen(GenKey::V { s: *s }).pow(pc, p - 1);
                let b = self.uv_q(su - 1, i64::from(*i)).pad(su).mul(pc, &vs);
                a.add(pc, &b)
            }
            GenKey::R { s: s8, idx } if idx.len() == 1 => {
                let s = usize::from(*s8);
                let i = usize::from(idx[0]);
                if i == s - 1 {
                    let vs = self.uv_gen(GenKey::V { s: *s8 }).pow(pc, p - 1);
                    let mut tail = UvMono::one(s);
                    tail.u_mask = 1 << (s - 1);
                    tail.v_exp[s - 1] = -1;
                    vs.mul(pc, &UvElem::from_mono(tail))
                } else {
                    // R_{s;i} = R_{s-1;i} V_s^(p-1) + q_{s-1,i} R_{s;s-1}
                    let prev = self
                        .uv_gen(GenKey::R {
                            s: *s8 - 1,
                            idx: idx.clone(),
                        })
                        .pad(s);
                    let vs = self.uv_gen(GenKey::V { s: *s8 }).pow(pc, p - 1);
                    let qi = self.uv_q(s - 1, i64::from(idx[0])).pad(s);
                    let top = self.uv_gen(GenKey::R {
                        s: *s8,
                        idx: vec![(s - 1) as u8],
                    });
                    prev.mul(pc, &vs).add(pc, &qi.mul(pc, &top))
                }
            }
            GenKey::R { s, idx } => {
                assert_eq!(idx.len(), 2, "uv expansion handles k <= 2 index sets");
                // R_{s;i,j} = -R_{s;i} R_{s;j} q_{s,0}^{-1}
                let a = self.uv_gen(GenKey::R {
                    s: *s,
                    idx: vec![idx[0]],
                });
                let b = self.uv_gen(GenKey::R {
                    s: *s,
                    idx: vec![idx[1]],
                });
                let q0 = self.uv_q(usize::from(*s), 0);
                a.mul(pc, &b)
                    .div_monomial(pc, &q0)
                    .expect("q_{s,0} expands to a single v-monomial")
                    .scale(pc, pc.neg(1))
            }
            GenKey::LOmit { .. } | GenKey::M { .. } => {
                unreachable!("no uv expansion for raw determinants")
            }
        }
    }

    /// `q_{s,i}` in uv coordinates (zero for `i < 0`, one for `i = s`).
    pub fn uv_q(&self, s: usize, i: i64) -> UvElem {
        let pc = self.pc();
        let p = self.p();
        if i < 0 {
            return UvElem::zero();
        }
        if i == s as i64 {
            return UvElem::one(s);
        }
        if i == 0 {
            // q_{s,0} = prod_k V_k^(p-1), a single monomial.
            let mut acc = UvElem::one(s);
            for k in 1..=s {
                let v = self.uv_gen(GenKey::V { s: k as u8 }).pad(s);
                acc = acc.mul(pc, &v.pow(pc, p - 1));
            }
            return acc;
        }
        self.uv_gen(GenKey::Q {
            s: s as u8,
            i: i as u8,
        })
    }

    /// Expands a product of `B[s]` generators.
    pub fn uv_expand(&self, s: usize, word: &[(BsGen, u32)]) -> UvElem {
        let pc = self.pc();
        let mut acc = UvElem::one(s);
        for (g, e) in word {
            let gx = match g {
                BsGen::Q { s, i } => self.uv_q(usize::from(*s), i64::from(*i)),
                BsGen::R { s, idx } => self.uv_gen(GenKey::R {
                    s: *s,
                    idx: idx.clone(),
                }),
            };
            acc = acc.mul(pc, &gx.pad(s).pow(pc, *e));
        }
        acc
    }

    /// The kappa pairing of a uv element against an admissible word: terms
    /// whose `(eps, i)` profile matches the word contribute
    /// `coefficient * (-1)^(i_1 + ... + i_s)`.
    pub fn kappa_pair(&self, g: &UvElem, m: &LambdaMono) -> Result<u32> {
        let pc = self.pc();
        let target: Vec<(u8, i64)> =
            m.0.iter()
                .map(|gen| (gen.eps, i64::from(gen.upper)))
                .collect();
        let mut acc = 0u32;
        for (mono, &c) in &g.terms {
            if mono.rank() != target.len() {
                continue;
            }
            let profile = mono.profile(self.p())?;
            if profile == target {
                let isum: i64 = profile.iter().map(|&(_, i)| i).sum();
                acc = pc.add(acc, pc.mul(c, pc.sign(isum)));
            }
        }
        Ok(acc)
    }

    /// Bilinear extension of the pairing to elements of the Lambda algebra.
    pub fn kappa_pair_elem(&self, g: &UvElem, e: &crate::lambda::LambdaElem) -> Result<u32> {
        let pc = self.pc();
        let mut acc = 0u32;
        for (m, &c) in &e.terms {
            acc = pc.add(acc, pc.mul(c, self.kappa_pair(g, m)?));
        }
        Ok(acc)
    }

    /// Chain boundary on raw uv exponents: a monomial ending in
    /// `u_s v_s^{-1}` maps to `(-1)^(eps_1 + .. + eps_{s-1})` times its
    /// length `s-1` prefix, everything else to zero.
    pub fn gamma_differential(&self, g: &UvElem) -> UvElem {
        let pc = self.pc();
        let mut out = UvElem::zero();
        for (m, &c) in &g.terms {
            let s = m.rank();
            if s == 0 {
                continue;
            }
            if m.u_mask >> (s - 1) & 1 != 1 || m.v_exp[s - 1] != -1 {
                continue;
            }
            let prefix = UvMono {
                u_mask: m.u_mask & !(1 << (s - 1)),
                v_exp: m.v_exp[..s - 1].to_vec(),
            };
            let eps_sum = i64::from(prefix.u_mask.count_ones());
            out.add_term(pc, prefix, pc.mul(c, pc.sign(eps_sum)));
        }
        out
    }

    /// Verifies that `rhs` (in uv coordinates) equals `lhs` (a polynomial
    /// invariant) after substituting `u_i = M_{i;i-1}/L_{i-1}` and
    /// `v_i = V_i/q_{i-1,0}` and clearing every denominator. Returns the
    /// difference polynomial on failure.
    pub fn uv_verify(&self, lhs: &Poly, s: usize, rhs: &UvElem) -> Result<Option<Poly>> {
        let pc = self.pc();
        // Per-position extremes over the rhs terms.
        let mut need_u = vec![0u32; s];
        let mut pos_v = vec![0i32; s];
        let mut neg_v = vec![0i32; s];
        for m in rhs.terms.keys() {
            if m.rank() != s {
                return Err(Error::Unparametrizable(m.to_string()));
            }
            for k in 0..s {
                need_u[k] = need_u[k].max(m.u_mask >> k & 1);
                pos_v[k] = pos_v[k].max(m.v_exp[k].max(0));
                neg_v[k] = neg_v[k].max((-m.v_exp[k]).max(0));
            }
        }
        // Common multiplier D = prod L_{k-1}^E q_{k-1,0}^K V_k^K'.
        let mut d = Poly::one(s);
        for k in 1..=s {
            if need_u[k - 1] == 1 {
                d = d.mul(pc, &self.l_poly(k - 1, k - 1).pad(s));
            }
            d = d.mul(
                pc,
                &self.dickson_q(k - 1, 0).pad(s).pow(pc, pos_v[k - 1] as u32),
            );
            d = d.mul(pc, &self.v_poly(k).pad(s).pow(pc, neg_v[k - 1] as u32));
        }
        let lhs_side = lhs.pad(s).mul(pc, &d);

        let mut rhs_side = Poly::zero();
        for (m, &c) in &rhs.terms {
            let mut term = Poly::one(s).scale(pc, c);
            for k in 1..=s {
                let eps = m.u_mask >> (k - 1) & 1;
                if eps == 1 {
                    term = term.mul(pc, &self.mui_m(k, &[k - 1]).unwrap().pad(s));
                }
                // Denominator bookkeeping: multiply by what D over-supplies.
                if need_u[k - 1] == 1 && eps == 0 {
                    term = term.mul(pc, &self.l_poly(k - 1, k - 1).pad(s));
                }
                let v = m.v_exp[k - 1];
                let vp = v.max(0) as u32;
                let vn = (-v).max(0) as u32;
                term = term.mul(
                    pc,
                    &self
                        .v_poly(k)
                        .pad(s)
                        .pow(pc, vp + (neg_v[k - 1] as u32 - vn)),
                );
                term = term.mul(
                    pc,
                    &self
                        .dickson_q(k - 1, 0)
                        .pad(s)
                        .pow(pc, vn + (pos_v[k - 1] as u32 - vp)),
                );
            }
            rhs_side = rhs_side.add(pc, &term);
        }
        let diff = lhs_side.sub(pc, &rhs_side);
        Ok((!diff.is_zero()).then_some(diff))
    }
}

/// Parses the polynomial grammar `c*x1*x3*y1^4*y2^0 + ...`.
pub fn parse_poly(pc: &PrimeContext, s: usize, text: &str) -> Result<Poly> {
    let terms = crate::lambda::parse_element(pc, text, |mono| parse_poly_mono(s, mono))?;
    let mut out = Poly::zero();
    for (m, c) in terms {
        out.add_term(pc, m, c);
    }
    Ok(out)
}

fn parse_poly_mono(s: usize, text: &str) -> Result<PolyMono> {
    let text = text.trim();
    let mut m = PolyMono::one(s);
    if text == "1" {
        return Ok(m);
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let bad = || Error::Parse(format!("bad monomial factor {factor:?}"));
        let (var, rest) = factor.split_at(1);
        let (idx, exp) = match rest.split_once('^') {
            Some((i, e)) => (i, Some(e)),
            None => (rest, None),
        };
        let i: usize = idx.parse().map_err(|_| bad())?;
        if i == 0 || i > s {
            return Err(bad());
        }
        match (var, exp) {
            ("x", None) => m.x_mask |= 1 << (i - 1),
            ("y", Some(e)) => m.y_exp[i - 1] += e.parse::<i32>().map_err(|_| bad())?,
            ("y", None) => m.y_exp[i - 1] += 1,
            _ => return Err(bad()),
        }
    }
    Ok(m)
}

/// Parses the uv grammar `u1*v1^-1*u2*v2^3`.
pub fn parse_uv(pc: &PrimeContext, s: usize, text: &str) -> Result<UvElem> {
    let terms = crate::lambda::parse_element(pc, text, |mono| parse_uv_mono(s, mono))?;
    let mut out = UvElem::zero();
    for (m, c) in terms {
        out.add_term(pc, m, c);
    }
    Ok(out)
}

fn parse_uv_mono(s: usize, text: &str) -> Result<UvMono> {
    let text = text.trim();
    let mut m = UvMono::one(s);
    if text == "1" {
        return Ok(m);
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let bad = || Error::Parse(format!("bad uv factor {factor:?}"));
        let (var, rest) = factor.split_at(1);
        let (idx, exp) = match rest.split_once('^') {
            Some((i, e)) => (i, Some(e)),
            None => (rest, None),
        };
        let i: usize = idx.parse().map_err(|_| bad())?;
        if i == 0 || i > s {
            return Err(bad());
        }
        match (var, exp) {
            ("u", None) => m.u_mask |= 1 << (i - 1),
            ("v", Some(e)) => m.v_exp[i - 1] += e.parse::<i32>().map_err(|_| bad())?,
            _ => return Err(bad()),
        }
    }
    Ok(m)
}
