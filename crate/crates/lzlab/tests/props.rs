//! Property tests for the arithmetic core and the element grammars.

use proptest::prelude::*;

use lzlab::fp::{FpSparseMatrix, FpVec, PrimeContext};
use lzlab::lambda::{LambdaElem, LambdaGen, LambdaMono};
use lzlab::Context;

/// Pascal's rule for the generalized binomial, over the stated window.
#[test]
fn binomial_pascal_window() {
    for p in [3u32, 5] {
        let pc = PrimeContext::new(p).unwrap();
        for a in -50..=50i64 {
            for b in 0..=50i64 {
                let lhs = pc.binom(a, b);
                let rhs = pc.add(pc.binom(a - 1, b), pc.binom(a - 1, b - 1));
                assert_eq!(lhs, rhs, "p={p} a={a} b={b}");
            }
        }
    }
}

/// One deterministic large case at the stated scale: random 160x200 matrices
/// over F_3 and F_5.
#[test]
fn rank_nullity_at_scale() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for p in [3u32, 5] {
        let pc = PrimeContext::new(p).unwrap();
        let n_cols = 200;
        let rows: Vec<FpVec> = (0..160)
            .map(|_| {
                FpVec::from_pairs(
                    &pc,
                    (0..n_cols).filter_map(|c| {
                        if rng.random_range(0..4u32) == 0 {
                            Some((c, rng.random_range(1..p)))
                        } else {
                            None
                        }
                    }),
                )
            })
            .collect();
        let m = FpSparseMatrix::from_rows(&pc, n_cols, rows);
        let (rank, kernel) = m.kernel_and_rank();
        assert_eq!(rank + kernel.dim(), n_cols);
        for v in kernel.basis() {
            assert!(m.apply(v).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// rank + nullity = columns and every kernel vector annihilates, on
    /// random sparse matrices.
    #[test]
    fn rank_nullity_and_kernel(
        n_cols in 1usize..24,
        n_rows in 0usize..24,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pc = PrimeContext::new(3).unwrap();
        let rows: Vec<FpVec> = (0..n_rows)
            .map(|_| {
                FpVec::from_pairs(
                    &pc,
                    (0..n_cols).filter_map(|c| {
                        if rng.random_range(0..3u32) == 0 {
                            Some((c, rng.random_range(1..3u32)))
                        } else {
                            None
                        }
                    }),
                )
            })
            .collect();
        let m = FpSparseMatrix::from_rows(&pc, n_cols, rows);
        let (rank, kernel) = m.kernel_and_rank();
        prop_assert_eq!(rank + kernel.dim(), n_cols);
        for v in kernel.basis() {
            prop_assert!(m.apply(v).is_zero());
        }
    }

    /// Membership is consistent: a vector reduced into the span is always
    /// recovered with exact coordinates.
    #[test]
    fn membership_recovers_combinations(
        dim in 1usize..12,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pc = PrimeContext::new(5).unwrap();
        let span = lzlab::fp::FpSubspace::from_rows(
            &pc,
            dim + 4,
            (0..dim).map(|_| {
                FpVec::from_pairs(
                    &pc,
                    (0..dim + 4).filter_map(|c| {
                        if rng.random_range(0..2u32) == 0 {
                            Some((c, rng.random_range(1..5u32)))
                        } else {
                            None
                        }
                    }),
                )
            }),
        );
        let mut v = FpVec::zero();
        let mut expect = vec![0u32; span.dim()];
        for (k, row) in span.basis().iter().enumerate() {
            let c = rng.random_range(0..5u32);
            expect[k] = c;
            v = v.add_scaled(&pc, row, c);
        }
        prop_assert_eq!(span.membership(&pc, &v).unwrap(), Some(expect));
    }

    /// Grammar round trips: display then parse is the identity on elements.
    #[test]
    fn lambda_grammar_round_trip(
        words in proptest::collection::vec(
            (proptest::collection::vec((0u8..2, -1i64..12), 1..4), 1u32..3),
            1..4,
        ),
    ) {
        let ctx = Context::new(3).unwrap();
        let mut e = LambdaElem::zero();
        for (gens, c) in words {
            let mono: Option<Vec<LambdaGen>> = gens
                .into_iter()
                .map(|(eps, lower)| LambdaGen::new(eps, lower + 1))
                .collect();
            if let Some(g) = mono {
                e.add_term(ctx.pc(), LambdaMono(g), c);
            }
        }
        let back = ctx.parse_lambda_elem(&e.to_string()).unwrap();
        prop_assert_eq!(back, e);
    }

    /// Degree bookkeeping: multiplication adds bidegrees, the differential
    /// raises the length by one and lowers the internal degree by one.
    #[test]
    fn bidegree_bookkeeping(
        a in (1u8..3, 0i64..8, 1u8..3, 0i64..8),
    ) {
        let ctx = Context::new(3).unwrap();
        let (s1, i1, s2, i2) = a;
        let mk = |len: u8, base: i64| {
            LambdaMono((0..len).map(|k| LambdaGen::lam(base + i64::from(k))).collect())
        };
        let (m1, m2) = (mk(s1, i1), mk(s2, i2));
        let x = ctx.lambda_mul(&LambdaElem::from_mono(m1.clone()), &LambdaElem::from_mono(m2.clone()));
        if let Some((s, t)) = x.bidegree(3) {
            prop_assert_eq!(s, m1.len() + m2.len());
            prop_assert_eq!(t, m1.degree(3) + m2.degree(3));
        }
        let d = ctx.differential(&LambdaElem::from_mono(m1.clone()));
        if let Some((s, t)) = d.bidegree(3) {
            prop_assert_eq!(s, m1.len() + 1);
            prop_assert_eq!(t, m1.degree(3) - 1);
        }
    }
}
