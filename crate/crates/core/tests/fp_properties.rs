use pfractal::fp_hypersurface::{colength, ColengthConfig, FpPoly, ParsedPoly, RankBackend};
use proptest::prelude::*;

/// A random f in the maximal ideal of `F_p[x_1..x_s]`.
fn arb_poly(p: u64, s: usize, max_exp: u32) -> impl Strategy<Value = FpPoly> {
    let term = (1..p as i64, prop::collection::vec(0..=max_exp, s));
    prop::collection::vec(term, 1..4).prop_filter_map("f must be a nonzero non-unit", move |terms| {
        let f = FpPoly::from_terms(p, s, terms).ok()?;
        (!f.is_zero() && f.constant_term() == 0).then_some(f)
    })
}

/// `(f, n)` with `p^(s (n + 1)) <= 2^limit`.
fn arb_case(limit: u32) -> impl Strategy<Value = (FpPoly, u32)> {
    prop_oneof![
        (1usize..=3).prop_flat_map(move |s| (arb_poly(2, s, 4), 0..=(limit / s as u32 - 1))),
        (1usize..=3).prop_flat_map(move |s| {
            // 3^k <= 2^limit
            let k = (limit as f64 / 3f64.log2()).floor() as u32;
            (arb_poly(3, s, 3), 0u32..=(k / s as u32).saturating_sub(1))
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_consistency((f, n) in arb_case(15), frac in 0.0f64..=1.0) {
        let p = f.characteristic();
        let q = p.pow(n);
        let a = (frac * q as f64).round() as u64;
        let lhs = colength(&f, p * a, n + 1).unwrap();
        let rhs = p.pow(f.nvars() as u32) * colength(&f, a, n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn colength_is_monotone_and_saturates((f, n) in arb_case(8)) {
        let p = f.characteristic();
        let q = p.pow(n);
        let dim = q.pow(f.nvars() as u32);
        let mut prev = 0;
        for a in 0..=q {
            let c = colength(&f, a, n).unwrap();
            prop_assert!(prev <= c && c <= dim);
            prev = c;
        }
        prop_assert_eq!(prev, dim);
        prop_assert_eq!(colength(&f, 0, n).unwrap(), 0);
    }

    #[test]
    fn backends_agree((f, n) in arb_case(12)) {
        let q = f.characteristic().pow(n);
        for a in [1, q.saturating_sub(1).max(1)] {
            let dense = ColengthConfig { backend: RankBackend::Dense, ..Default::default() };
            let sparse = ColengthConfig { backend: RankBackend::Sparse, ..Default::default() };
            prop_assert_eq!(
                pfractal::fp_hypersurface::colength_with(&f, a, n, &dense).unwrap(),
                pfractal::fp_hypersurface::colength_with(&f, a, n, &sparse).unwrap()
            );
        }
    }
}

#[test]
fn nodal_cubic_four_thousand_dimensions() {
    let (f, _) = ParsedPoly::parse("x^3+y^3+x*y*z").unwrap().to_fp(2).unwrap();
    // FS(4) = 2^12 - colength(f, 15, 4)
    assert_eq!(colength(&f, 15, 4).unwrap(), 4095);
}
