use hallgebra::presver::{
    check_k_coefficient_chain, check_lemma_41_traced, check_s2, check_s2_reduction, check_term_a, reduce,
    reduce_mixed, serre_mixed_expr, NCExpr, RatLaurent, RewriteOrder, TRACE_CAP,
};
use hallgebra::qlaurent::{qint, LaurentPoly};
use proptest::prelude::*;

#[test]
fn serre_sums_vanish_up_to_eight() {
    for d in 1..=3 {
        for n in 1..=8 {
            let start = std::time::Instant::now();
            let out = check_lemma_41_traced(n, d).unwrap();
            assert!(out.holds, "n={n} d={d}: {} / {}", out.residue, out.mirrored_residue);
            assert!(start.elapsed().as_secs_f64() < 5.0, "n={n} d={d} too slow");
        }
    }
}

#[test]
fn telescoping_and_pairing() {
    for m in 1..=10 {
        assert!(check_s2(m));
    }
    for n in 1..=5 {
        for d in 1..=2 {
            assert!(check_s2_reduction(n, d));
        }
    }
}

#[test]
fn term_a_all_p() {
    for n in 1..=5 {
        for p in 0..=n {
            assert!(check_term_a(n, p), "n={n} p={p}");
        }
    }
}

#[test]
fn k_coefficient_chain_to_eight() {
    for n in 1..=8 {
        assert!(check_k_coefficient_chain(n), "n={n}");
    }
}

#[test]
fn term_a_oracle_geometric_sum() {
    // [5] as Σ v^{2a}, a = -2..2
    let geo = LaurentPoly::from_pairs((-2..=2).map(|a| (1, 2 * a)));
    assert_eq!(qint(5, 1), geo);
}

#[test]
fn rewrite_orders_agree_on_serre_sums() {
    for n in 1..=4 {
        for d in 1..=2 {
            let e = serre_mixed_expr(n, d);
            let base = reduce(&e, d, 2 * d as i64, RewriteOrder::Leftmost, TRACE_CAP).unwrap().normal;
            let right = reduce(&e, d, 2 * d as i64, RewriteOrder::Rightmost, TRACE_CAP).unwrap().normal;
            assert_eq!(base, right);
            for seed in 0..3 {
                let r = reduce(&e, d, 2 * d as i64, RewriteOrder::Shuffled(seed), TRACE_CAP).unwrap().normal;
                assert_eq!(base, r);
            }
        }
    }
}

fn symbol() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("E+"), Just("E-"), Just("K"), Just("K-")]
}

fn coef() -> impl Strategy<Value = RatLaurent> {
    (-3i64..=3, -3i64..=3).prop_map(|(c, e)| RatLaurent::from_poly(LaurentPoly::from_pairs([(c, e)])))
}

fn expr() -> impl Strategy<Value = NCExpr> {
    proptest::collection::vec((coef(), proptest::collection::vec(symbol(), 0..5)), 0..4).prop_map(|terms| {
        terms.into_iter().fold(NCExpr::zero(), |acc, (c, w)| &acc + &NCExpr::term(c, &w))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_product_is_associative(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn free_product_is_bilinear(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn reduction_is_linear_and_order_independent(a in expr(), b in expr(), seed in 0u64..1000) {
        let ra = reduce(&a, 1, 2, RewriteOrder::Leftmost, TRACE_CAP).unwrap().normal;
        let rb = reduce(&b, 1, 2, RewriteOrder::Leftmost, TRACE_CAP).unwrap().normal;
        let rs = reduce(&(&a + &b), 1, 2, RewriteOrder::Shuffled(seed), TRACE_CAP).unwrap().normal;
        prop_assert_eq!(&ra + &rb, rs);
    }

    #[test]
    fn reduction_is_multiplicative(a in expr(), b in expr()) {
        // NF(ab) = NF(NF(a) NF(b)) once normal forms are read back as words
        let back = |x: &NCExpr| {
            let nf = reduce(x, 1, 2, RewriteOrder::Leftmost, TRACE_CAP).unwrap().normal;
            nf.terms().fold(NCExpr::zero(), |acc, ((bm, ak, m), c)| {
                let mut w = vec!["E-"; bm as usize];
                w.extend(std::iter::repeat_n(if ak >= 0 { "K" } else { "K-" }, ak.unsigned_abs() as usize));
                w.extend(std::iter::repeat_n("E+", m as usize));
                &acc + &NCExpr::term(c.clone(), &w)
            })
        };
        let lhs = reduce(&(&a * &b), 1, 2, RewriteOrder::Leftmost, TRACE_CAP).unwrap().normal;
        let rhs = reduce(&(&back(&a) * &back(&b)), 1, 2, RewriteOrder::Leftmost, TRACE_CAP).unwrap().normal;
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn reduce_mixed_matches_general_kernel() {
    let e = serre_mixed_expr(3, 1);
    assert_eq!(reduce_mixed(&e, 1, 2).unwrap(), reduce(&e, 1, 2, RewriteOrder::Leftmost, TRACE_CAP).unwrap().normal);
}
