//! Dickson-Mui invariant theory: the bracket determinants, the Dickson
//! classes `q_{s,i}`, the Mui classes `M_{s;I}` and `R_{s;I}`, the
//! subalgebra `B[s]` they generate, the action of the Steenrod algebra on
//! everything, and the degreewise indecomposable computations.

pub mod poly;
pub mod uv;

use std::fmt;
use std::sync::Arc;

use crate::fp::{FpSubspace, FpVec, RowBasis};
use crate::{Context, Error, Result};

pub use poly::{poly_to_vec, ps_monomials, steenrod_apply, substitute, Poly, PolyMono, SteenrodOp};

/// Memo key for the cached generator polynomials (and their uv expansions).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum GenKey {
    /// `L_{s,omit} = [0, .., ^omit, .., s]`; `omit == s` gives `L_s`.
    LOmit { s: u8, omit: u8 },
    /// `V_s = L_s / L_{s-1}`.
    V { s: u8 },
    /// `q_{s,i} = L_{s,i} / L_s`.
    Q { s: u8, i: u8 },
    /// `M_{s;I}`.
    M { s: u8, idx: Vec<u8> },
    /// `R_{s;I} = M_{s;I} L_s^(p-2)`.
    R { s: u8, idx: Vec<u8> },
}

/// A generator of the subalgebra `B[s]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BsGen {
    Q { s: u8, i: u8 },
    R { s: u8, idx: Vec<u8> },
}

impl BsGen {
    pub fn degree(&self, p: u32) -> i64 {
        let p = i64::from(p);
        match self {
            BsGen::Q { s, i } => 2 * (p.pow(u32::from(*s)) - p.pow(u32::from(*i))),
            BsGen::R { s, idx } => {
                let ones: i64 = (0..*s).map(|j| p.pow(u32::from(j))).sum();
                idx.len() as i64 + 2 * (p - 1) * ones
                    - 2 * idx.iter().map(|&i| p.pow(u32::from(i))).sum::<i64>()
            }
        }
    }
}

impl fmt::Display for BsGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BsGen::Q { s, i } => write!(f, "q_{{{s},{i}}}"),
            BsGen::R { s, idx } => {
                let list: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                write!(f, "R_{{{s};{}}}", list.join(","))
            }
        }
    }
}

/// A product of `B[s]` generators with its expanded polynomial.
#[derive(Clone, Debug)]
pub struct BsProduct {
    /// `(generator, exponent)` pairs, deterministic order.
    pub word: Vec<(BsGen, u32)>,
    pub poly: Poly,
}

impl BsProduct {
    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "1".to_string();
        }
        self.word
            .iter()
            .map(|(g, e)| {
                if *e == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Basis data for one degree slice of `B[s]`: an independent, spanning set
/// of generator products, plus the machinery to express any polynomial of
/// that degree in their span.
pub struct BsBasis {
    pub s: usize,
    pub t: i64,
    pub monos: Vec<PolyMono>,
    pub products: Vec<BsProduct>,
    pub expr: Option<RowBasis>,
}

impl BsBasis {
    pub fn dim(&self) -> usize {
        self.products.len()
    }

    /// Coordinates of `poly` over the product basis; `None` outside the
    /// span.
    pub fn express(&self, ctx: &Context, poly: &Poly) -> Option<Vec<u32>> {
        if poly.is_zero() {
            return Some(vec![0; self.dim()]);
        }
        let v = poly_to_vec(poly, &self.monos);
        self.expr.as_ref()?.express(ctx.pc(), &v)
    }
}

impl Context {
    fn gen_poly(&self, key: GenKey) -> Poly {
        self.gen_polys
            .get_or_compute(key.clone(), || self.gen_poly_uncached(&key))
    }

    fn gen_poly_uncached(&self, key: &GenKey) -> Poly {
        let pc = self.pc();
        match key {
            GenKey::LOmit { s, omit } => {
                let exps: Vec<u32> = (0..=u32::from(*s))
                    .filter(|&r| r != u32::from(*omit))
                    .collect();
                self.bracket(usize::from(*s), 0, &exps)
                    .expect("pure-y bracket cannot fail")
            }
            GenKey::V { s } => {
                let ls = self.l_poly(usize::from(*s), usize::from(*s));
                let prev = self
                    .l_poly(usize::from(*s - 1), usize::from(*s - 1))
                    .pad(usize::from(*s));
                ls.div_exact(pc, &prev).expect("L_{s-1} divides L_s")
            }
            GenKey::Q { s, i } => {
                let num = self.l_poly(usize::from(*s), usize::from(*i));
                let den = self.l_poly(usize::from(*s), usize::from(*s));
                num.div_exact(pc, &den).expect("L_s divides L_{s,i}")
            }
            GenKey::M { s, idx } => {
                let exps: Vec<u32> = (0..u32::from(*s))
                    .filter(|r| !idx.contains(&(*r as u8)))
                    .collect();
                self.bracket(usize::from(*s), idx.len(), &exps)
                    .expect("bracket row count was validated by the caller")
            }
            GenKey::R { s, idx } => {
                let m = self.gen_poly(GenKey::M {
                    s: *s,
                    idx: idx.clone(),
                });
                let ls = self.l_poly(usize::from(*s), usize::from(*s));
                m.mul(pc, &ls.pow(pc, self.p() - 2))
            }
        }
    }

    /// The bracket determinant with `k` exterior rows `(x_1 .. x_s)` on top
    /// and rows `(y_1^{p^r} .. y_s^{p^r})` below, one per entry of
    /// `y_pows`. Expanded by Laplace along the exterior rows, which absorbs
    /// the `1/k!` normalization; `k >= p` is rejected because the
    /// normalization is not defined there.
    pub fn bracket(&self, s: usize, k: usize, y_pows: &[u32]) -> Result<Poly> {
        assert_eq!(k + y_pows.len(), s, "bracket needs s rows total");
        if k as u32 >= self.p() {
            return Err(Error::TooManyExteriorRows { k, p: self.p() });
        }
        let pc = self.pc();
        let p = self.p();
        if s == 0 {
            return Ok(Poly::one(0));
        }
        let mut out = Poly::zero();
        // Choose the x-columns S (ascending), then sum over bijections of
        // the remaining columns to the y-rows.
        let cols: Vec<usize> = (0..s).collect();
        for subset in subsets_of_size(&cols, k) {
            let mask: u32 = subset.iter().map(|&c| 1u32 << c).sum();
            let rest: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|c| !subset.contains(c))
                .collect();
            // Laplace sign: rows 1..k against columns subset (1-indexed).
            let row_sum: i64 = (1..=k as i64).sum();
            let col_sum: i64 = subset.iter().map(|&c| c as i64 + 1).sum();
            let sign = pc.sign(row_sum + col_sum);
            for (perm, psign) in permutations_with_sign(rest.len()) {
                let mut mono = PolyMono {
                    x_mask: mask,
                    y_exp: vec![0; s],
                };
                for (row, &pi) in perm.iter().enumerate() {
                    let col = rest[pi];
                    mono.y_exp[col] += p.pow(y_pows[row]) as i32;
                }
                out.add_term(pc, mono, pc.mul(sign, pc.sign(psign)));
            }
        }
        Ok(out)
    }

    /// `L_{s,omit}`, with `L_s = l_poly(s, s)` and `L_0 = 1`.
    pub fn l_poly(&self, s: usize, omit: usize) -> Poly {
        if s == 0 {
            return Poly::one(0);
        }
        self.gen_poly(GenKey::LOmit {
            s: s as u8,
            omit: omit as u8,
        })
    }

    /// `V_s = L_s / L_{s-1}`, the product of the monic linear forms ending
    /// in `y_s`.
    pub fn v_poly(&self, s: usize) -> Poly {
        assert!(s >= 1);
        self.gen_poly(GenKey::V { s: s as u8 })
    }

    /// `q_{s,i}` for `0 <= i <= s` (with `q_{s,s} = 1`); negative `i` gives
    /// zero, matching the usual convention.
    pub fn dickson_q(&self, s: usize, i: i64) -> Poly {
        if i < 0 {
            return Poly::zero();
        }
        let i = i as usize;
        assert!(i <= s, "q_{{s,i}} needs i <= s");
        if i == s {
            return Poly::one(s);
        }
        self.gen_poly(GenKey::Q {
            s: s as u8,
            i: i as u8,
        })
    }

    /// `M_{s;I}` for a strictly increasing index set `I` in `0..s`.
    pub fn mui_m(&self, s: usize, idx: &[usize]) -> Result<Poly> {
        self.check_mui_idx(s, idx)?;
        Ok(self.gen_poly(GenKey::M {
            s: s as u8,
            idx: idx.iter().map(|&i| i as u8).collect(),
        }))
    }

    /// `R_{s;I} = M_{s;I} L_s^(p-2)`.
    pub fn mui_r(&self, s: usize, idx: &[usize]) -> Result<Poly> {
        self.check_mui_idx(s, idx)?;
        Ok(self.gen_poly(GenKey::R {
            s: s as u8,
            idx: idx.iter().map(|&i| i as u8).collect(),
        }))
    }

    fn check_mui_idx(&self, s: usize, idx: &[usize]) -> Result<()> {
        assert!(
            !idx.is_empty() && idx.windows(2).all(|w| w[0] < w[1]) && *idx.last().unwrap() < s,
            "index set must be strictly increasing inside 0..s"
        );
        if idx.len() as u32 >= self.p() {
            return Err(Error::TooManyExteriorRows {
                k: idx.len(),
                p: self.p(),
            });
        }
        Ok(())
    }

    /// The generators of `B[s]`, in the deterministic order used by the
    /// product enumeration: `q_{s,0..s-1}`, `R_{s;i}`, `R_{s;i,j}`.
    pub fn bs_generators(&self, s: usize) -> Vec<BsGen> {
        let mut gens = Vec::new();
        for i in 0..s {
            gens.push(BsGen::Q {
                s: s as u8,
                i: i as u8,
            });
        }
        for i in 0..s {
            gens.push(BsGen::R {
                s: s as u8,
                idx: vec![i as u8],
            });
        }
        for i in 0..s {
            for j in (i + 1)..s {
                gens.push(BsGen::R {
                    s: s as u8,
                    idx: vec![i as u8, j as u8],
                });
            }
        }
        gens
    }

    pub fn bs_gen_poly(&self, g: &BsGen) -> Poly {
        match g {
            BsGen::Q { s, i } => self.dickson_q(usize::from(*s), i64::from(*i)),
            BsGen::R { s, idx } => self
                .mui_r(
                    usize::from(*s),
                    &idx.iter().map(|&i| usize::from(i)).collect::<Vec<_>>(),
                )
                .expect("B[s] generators have k <= 2 < p"),
        }
    }

    /// Basis of the degree-`t` slice of `B[s]`: all products of generators
    /// of total degree `t` are enumerated, expanded and row reduced; a
    /// maximal independent subfamily of the products themselves is kept as
    /// the basis.
    pub fn bs_basis(&self, s: usize, t: i64) -> Arc<BsBasis> {
        self.bs_bases
            .get_or_compute((s, t), || Arc::new(self.bs_basis_uncached(s, t)))
    }

    fn bs_basis_uncached(&self, s: usize, t: i64) -> BsBasis {
        let pc = self.pc();
        let monos = ps_monomials(s, t);
        if t < 0 {
            return BsBasis {
                s,
                t,
                monos,
                products: Vec::new(),
                expr: None,
            };
        }
        let gens = self.bs_generators(s);
        let degs: Vec<i64> = gens.iter().map(|g| g.degree(self.p())).collect();
        let mut words: Vec<Vec<(usize, u32)>> = Vec::new();
        let mut cur: Vec<(usize, u32)> = Vec::new();
        // R-type generators square to zero, so their exponents stay <= 1.
        fn enumerate(
            gens: &[BsGen],
            degs: &[i64],
            from: usize,
            left: i64,
            cur: &mut Vec<(usize, u32)>,
            out: &mut Vec<Vec<(usize, u32)>>,
        ) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for g in from..gens.len() {
                if degs[g] > left {
                    continue;
                }
                let max_e = match gens[g] {
                    BsGen::Q { .. } => left / degs[g],
                    BsGen::R { .. } => 1,
                };
                for e in 1..=max_e {
                    if degs[g] * e > left {
                        break;
                    }
                    cur.push((g, e as u32));
                    enumerate(gens, degs, g + 1, left - degs[g] * e, cur, out);
                    cur.pop();
                }
            }
        }
        enumerate(&gens, &degs, 0, t, &mut cur, &mut words);
        if t == 0 {
            words.push(Vec::new());
        }

        let mut space = FpSubspace::empty(monos.len());
        let mut products = Vec::new();
        let mut rows = Vec::new();
        for word in words {
            let mut poly = Poly::one(s);
            for &(g, e) in &word {
                let gp = self.bs_gen_poly(&gens[g]);
                poly = poly.mul(pc, &gp.pow(pc, e));
                if poly.is_zero() {
                    break;
                }
            }
            if poly.is_zero() {
                continue;
            }
            debug_assert_eq!(poly.degree(), Some(t));
            let v = poly_to_vec(&poly, &monos);
            if space.add_row(pc, v.clone()) {
                rows.push(v);
                products.push(BsProduct {
                    word: word
                        .into_iter()
                        .map(|(g, e)| (gens[g].clone(), e))
                        .collect(),
                    poly,
                });
            }
        }
        let expr = RowBasis::from_independent_rows(pc, monos.len(), &rows);
        BsBasis {
            s,
            t,
            monos,
            products,
            expr,
        }
    }

    /// The degree-`t` part of `Abar * ambient` (the span of `b(ambient)` and
    /// all `P^k(ambient)`, `k >= 1`) together with the dimension of the
    /// quotient `ambient_t / (Abar * ambient)_t`.
    pub fn abar_and_indecomposables(&self, s: usize, t: i64, ambient: Ambient) -> AbarResult {
        let pc = self.pc();
        let p = self.p();
        let mut ops = vec![SteenrodOp::Beta];
        let mut k = 1;
        while 2 * i64::from(k) * i64::from(p - 1) <= t {
            ops.push(SteenrodOp::P(k));
            k += 1;
        }
        match ambient {
            Ambient::Bs => {
                let bs_t = self.bs_basis(s, t);
                let mut sub = FpSubspace::empty(bs_t.dim());
                for op in ops {
                    let src = self.bs_basis(s, t - op.degree(p));
                    for prod in &src.products {
                        let img = steenrod_apply(pc, op, &prod.poly);
                        if img.is_zero() {
                            continue;
                        }
                        let coords = bs_t.express(self, &img).unwrap_or_else(|| {
                            panic!(
                                "Steenrod image {op} of {} left B[{s}] in degree {t}",
                                prod.word_string()
                            )
                        });
                        sub.add_row(pc, FpVec::from_pairs(pc, coords.into_iter().enumerate()));
                    }
                }
                let ambient_dim = bs_t.dim();
                AbarResult {
                    indec_dim: ambient_dim - sub.dim(),
                    ambient_dim,
                    subspace: sub,
                }
            }
            Ambient::Ps => {
                let slice = ps_monomials(s, t);
                let mut sub = FpSubspace::empty(slice.len());
                for op in ops {
                    for m in ps_monomials(s, t - op.degree(p)) {
                        let img = steenrod_apply(pc, op, &Poly::from_mono(m));
                        if !img.is_zero() {
                            sub.add_row(pc, poly_to_vec(&img, &slice));
                        }
                    }
                }
                let ambient_dim = slice.len();
                AbarResult {
                    indec_dim: ambient_dim - sub.dim(),
                    ambient_dim,
                    subspace: sub,
                }
            }
        }
    }

    /// Checks the quadratic relations among the Mui classes, the Dickson
    /// recurrence, the `V_s` factorization and the degree formulas, as exact
    /// polynomial identities. Product relations whose right-hand side needs
    /// `k` exterior rows with `k >= p` are reported as skipped.
    pub fn verify_mui_relations(&self, s: usize) -> MuiReport {
        let pc = self.pc();
        let p = self.p();
        let mut checks = Vec::new();
        let mut push = |name: String, outcome: std::result::Result<Option<Poly>, Error>| {
            let line = match outcome {
                Ok(None) => MuiCheck {
                    name,
                    status: MuiStatus::Pass,
                },
                Ok(Some(diff)) => MuiCheck {
                    name,
                    status: MuiStatus::Fail(diff.to_string()),
                },
                Err(e) => MuiCheck {
                    name,
                    status: MuiStatus::Skipped(e.to_string()),
                },
            };
            checks.push(line);
        };

        // R_{s;i}^2 = 0.
        for i in 0..s {
            let r = self.mui_r(s, &[i]).unwrap();
            let sq = r.mul(pc, &r);
            push(
                format!("R_{{{s};{i}}}^2 = 0"),
                Ok((!sq.is_zero()).then_some(sq)),
            );
        }

        // R_{s;i_1} .. R_{s;i_k} = (-1)^(k(k-1)/2) R_{s;I} q_{s,0}^(k-1).
        for k in 2..=s {
            for idx in subsets_of_size(&(0..s).collect::<Vec<_>>(), k) {
                let name = format!(
                    "R-product collapse at I = {{{}}}",
                    idx.iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                let rhs_gen = match self.mui_r(s, &idx) {
                    Ok(g) => g,
                    Err(e) => {
                        push(name, Err(e));
                        continue;
                    }
                };
                let mut lhs = Poly::one(s);
                for &i in &idx {
                    lhs = lhs.mul(pc, &self.mui_r(s, &[i]).unwrap());
                }
                let sign = pc.sign((k as i64) * (k as i64 - 1) / 2);
                let rhs = rhs_gen
                    .mul(pc, &self.dickson_q(s, 0).pow(pc, k as u32 - 1))
                    .scale(pc, sign);
                let diff = lhs.sub(pc, &rhs);
                push(name, Ok((!diff.is_zero()).then_some(diff)));
            }
        }

        // q_{s,i} = q_{s-1,i-1}^p + q_{s-1,i} V_s^(p-1), with q_{s-1,s-1}=1
        // and q at negative index zero.
        if s >= 1 {
            for i in 0..s {
                let lhs = self.dickson_q(s, i as i64);
                let a = self.dickson_q(s - 1, i as i64 - 1).pad(s).pow(pc, p);
                let b = self
                    .dickson_q(s - 1, i as i64)
                    .pad(s)
                    .mul(pc, &self.v_poly(s).pow(pc, p - 1));
                let diff = lhs.sub(pc, &a.add(pc, &b));
                push(
                    format!("q_{{{s},{i}}} recurrence"),
                    Ok((!diff.is_zero()).then_some(diff)),
                );
            }
            // V_s * L_{s-1} = L_s.
            let diff = self
                .v_poly(s)
                .mul(pc, &self.l_poly(s - 1, s - 1).pad(s))
                .sub(pc, &self.l_poly(s, s));
            push(
                format!("V_{s} = L_{s}/L_{}", s - 1),
                Ok((!diff.is_zero()).then_some(diff)),
            );
        }

        // Degree formulas.
        for g in self.bs_generators(s) {
            let poly = self.bs_gen_poly(&g);
            let ok = poly.degree() == Some(g.degree(p));
            push(
                format!("deg {g} = {}", g.degree(p)),
                Ok((!ok).then(Poly::zero)),
            );
        }

        MuiReport { s, p, checks }
    }

    /// Applies a generating set of `GL_s` (a transposition, a transvection
    /// and a primitive-root scaling) and reports whether `e` is fixed by
    /// each.
    pub fn gl_invariance_check(&self, e: &Poly, s: usize) -> GlReport {
        let pc = self.pc();
        let p = self.p();
        let mut rows = Vec::new();
        let mut check = |name: &str, a: Vec<Vec<u32>>| {
            let image = substitute(pc, e, s, &a);
            rows.push((name.to_string(), image == e.pad(s)));
        };
        let identity = |s: usize| -> Vec<Vec<u32>> {
            (0..s)
                .map(|i| (0..s).map(|j| u32::from(i == j)).collect())
                .collect()
        };
        if s >= 2 {
            let mut swap = identity(s);
            swap[0][0] = 0;
            swap[1][1] = 0;
            swap[0][1] = 1;
            swap[1][0] = 1;
            check("transposition (1 2)", swap);
            let mut trans = identity(s);
            trans[0][1] = 1; // y_2 -> y_2 + y_1
            check("transvection y2 += y1", trans);
        }
        let mut scale = identity(s);
        scale[0][0] = primitive_root(p);
        check("primitive-root scaling of y1", scale);
        GlReport { rows }
    }
}

/// Where an `Abar`-multiple computation takes place.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Ambient {
    Bs,
    Ps,
}

pub struct AbarResult {
    /// Span of the Steenrod images, in coordinates of the ambient basis
    /// (`B[s]` products or the monomial slice).
    pub subspace: FpSubspace,
    pub ambient_dim: usize,
    pub indec_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MuiStatus {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct MuiCheck {
    pub name: String,
    pub status: MuiStatus,
}

#[derive(Clone, Debug)]
pub struct MuiReport {
    pub s: usize,
    pub p: u32,
    pub checks: Vec<MuiCheck>,
}

impl MuiReport {
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.status, MuiStatus::Fail(_)))
    }
}

pub struct GlReport {
    pub rows: Vec<(String, bool)>,
}

impl GlReport {
    pub fn all_fixed(&self) -> bool {
        self.rows.iter().all(|&(_, ok)| ok)
    }
}

fn primitive_root(p: u32) -> u32 {
    'outer: for g in 2..p {
        let mut x = 1u64;
        for _ in 0..(p - 2) {
            x = x * u64::from(g) % u64::from(p);
            if x == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    1
}

pub(crate) fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        items: &[usize],
        k: usize,
        from: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// All permutations of `0..n` with the parity of each.
fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, sign: &mut i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if k <= 1 {
            out.push((perm.clone(), *sign));
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, sign, out);
            if i < k - 1 {
                if k.is_multiple_of(2) {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
                *sign += 1;
            }
        }
    }
    let mut sign = 0i64;
    heap(n, &mut perm, &mut sign, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx3() -> Context {
        Context::new(3).unwrap()
    }

    fn parse(ctx: &Context, s: usize, text: &str) -> Poly {
        uv::parse_poly(ctx.pc(), s, text).unwrap()
    }

    #[test]
    fn bracket_known_values() {
        let ctx = ctx3();
        // [0] = y1
        assert_eq!(ctx.bracket(1, 0, &[0]).unwrap(), parse(&ctx, 1, "y1^1"));
        // [0,1] = y1 y2^p - y2 y1^p = L_2
        let l2 = ctx.bracket(2, 0, &[0, 1]).unwrap();
        assert_eq!(l2, parse(&ctx, 2, "y1^1*y2^3 + 2*y1^3*y2^1"));
        assert_eq!(l2, ctx.l_poly(2, 2));
        // [1;0] = x1 y2 - x2 y1
        let b = ctx.bracket(2, 1, &[0]).unwrap();
        assert_eq!(b, parse(&ctx, 2, "x1*y2^1 + 2*x2*y1^1"));
        // k >= p is rejected.
        assert!(matches!(
            ctx.bracket(3, 3, &[]),
            Err(Error::TooManyExteriorRows { .. })
        ));
    }

    #[test]
    fn dickson_known_values() {
        let ctx = ctx3();
        assert_eq!(ctx.dickson_q(2, 2), Poly::one(2));
        assert_eq!(ctx.dickson_q(1, 0), parse(&ctx, 1, "y1^2"));
        assert_eq!(ctx.dickson_q(2, 0).degree(), Some(2 * (9 - 1)));
        assert_eq!(ctx.dickson_q(2, 1).degree(), Some(2 * (9 - 3)));
        assert!(ctx.dickson_q(2, -1).is_zero());
    }

    #[test]
    fn mui_known_values() {
        let ctx = ctx3();
        // R_{1;0} = x1 y1 at p = 3 (M_{1;0} = x1, L_1^{p-2} = y1).
        assert_eq!(ctx.mui_r(1, &[0]).unwrap(), parse(&ctx, 1, "x1*y1^1"));
        // Degree formula for R_{2;i}.
        for i in 0..2usize {
            let r = ctx.mui_r(2, &[i]).unwrap();
            assert_eq!(
                r.degree(),
                Some(1 + 2 * 2 * (1 + 3) - 2 * 3i64.pow(i as u32))
            );
        }
        // R_{2;0}^2 = 0.
        let r0 = ctx.mui_r(2, &[0]).unwrap();
        assert!(r0.mul(ctx.pc(), &r0).is_zero());
    }

    #[test]
    fn mui_relations_small_ranks() {
        for p in [3u32, 5] {
            let ctx = Context::new(p).unwrap();
            for s in 1..=2usize {
                let rep = ctx.verify_mui_relations(s);
                assert!(rep.all_pass(), "p={p} s={s}: {:?}", rep.checks);
            }
        }
    }

    #[test]
    fn bs_basis_known_values() {
        let ctx = ctx3();
        assert_eq!(ctx.bs_basis(2, 0).dim(), 1);
        assert_eq!(ctx.bs_basis(1, 3).dim(), 1);
        assert_eq!(ctx.bs_basis(1, 4).dim(), 1);
        assert_eq!(ctx.bs_basis(1, 2).dim(), 0);
        // dim B[2]_48 = 2 at p=3: q20^3 and q21^4.
        assert_eq!(ctx.bs_basis(2, 48).dim(), 2);
    }

    #[test]
    fn abar_known_values() {
        let ctx = ctx3();
        // (1, 3) in B[1]: R_{1;0} survives.
        let r = ctx.abar_and_indecomposables(1, 3, Ambient::Bs);
        assert_eq!((r.ambient_dim, r.indec_dim), (1, 1));
        // (1, 8) in B[1]: P^1(q_{1,0}) = 2 q_{1,0}^2 kills the slice.
        let r = ctx.abar_and_indecomposables(1, 8, Ambient::Bs);
        assert_eq!((r.ambient_dim, r.indec_dim), (1, 0));
        // (1, 3) in P_1: x1 y1 is not hit.
        let r = ctx.abar_and_indecomposables(1, 3, Ambient::Ps);
        assert_eq!(r.indec_dim, 1);
        // (1, 4) in B[1]: q_{1,0} = beta(R_{1;0}) is decomposable.
        let r = ctx.abar_and_indecomposables(1, 4, Ambient::Bs);
        assert_eq!((r.ambient_dim, r.indec_dim), (1, 0));
    }

    #[test]
    fn gl_invariance_known_values() {
        let ctx = ctx3();
        let q20 = ctx.dickson_q(2, 0);
        assert!(ctx.gl_invariance_check(&q20, 2).all_fixed());
        let q21 = ctx.dickson_q(2, 1);
        assert!(ctx.gl_invariance_check(&q21, 2).all_fixed());
        // y1 alone is moved by the transposition.
        let y1 = Poly::from_mono(PolyMono::y(2, 1, 1));
        assert!(!ctx.gl_invariance_check(&y1, 2).all_fixed());
        // R_{2;i} are invariants too.
        let r0 = ctx.mui_r(2, &[0]).unwrap();
        assert!(ctx.gl_invariance_check(&r0, 2).all_fixed());
    }
}
