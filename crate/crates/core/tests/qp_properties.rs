use pfractal::exact_arith::{Rat, RationalGF, UniPoly};
use pfractal::fp_hypersurface::{parse_var_list, ParsedPoly};
use pfractal::phi_lab::{perfect_square_indicator, PhiFunction};
use pfractal::qp_series::{
    detect_recurrence, gf_of_certified, multiplicity_from_series, qp_of_series, weak_pfractal_report, QuasiPolynomial,
    Verdict,
};
use proptest::prelude::*;

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d).unwrap())
}

fn arb_qp() -> impl Strategy<Value = QuasiPolynomial> {
    (prop::sample::select(vec![2u64, 3, 5]), 0usize..=3)
        .prop_flat_map(|(p, d)| {
            let table = (1usize..=6).prop_flat_map(|m| prop::collection::vec(arb_rat(), m));
            (Just(p), prop::collection::vec(table, d + 1))
        })
        .prop_map(|(p, tables)| QuasiPolynomial::new(p, tables).unwrap())
}

fn geometric_product(qp: &QuasiPolynomial) -> UniPoly {
    let mut q = UniPoly::one();
    for (j, t) in qp.tables().iter().enumerate() {
        let c = Rat::int_pow(qp.prime(), (j * t.len()) as u32);
        q = &q * &(UniPoly::one() - UniPoly::monomial(c, t.len()));
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip(qp in arb_qp()) {
        let g = qp.series();
        let back = qp_of_series(&g, qp.degree(), qp.period(), qp.prime()).unwrap();
        for n in 0..(qp.degree() + 2) * qp.period() {
            prop_assert_eq!(back.eval(n), qp.eval(n));
        }
        prop_assert_eq!(back, qp);
    }

    #[test]
    fn expansion_matches_evaluation(qp in arb_qp()) {
        let coeffs = qp.series().expand(50).unwrap();
        for (n, c) in coeffs.iter().enumerate() {
            prop_assert_eq!(c, &qp.eval(n));
        }
    }

    #[test]
    fn multiplicity_is_mean_of_leading_table(qp in arb_qp()) {
        let m = multiplicity_from_series(&qp.series(), qp.degree() as u32, qp.prime()).unwrap();
        prop_assert_eq!(m, qp.leading_mean());
    }

    #[test]
    fn denominator_divides_geometric_product(qp in arb_qp()) {
        prop_assert!(qp.series().den().divides(&geometric_product(&qp)).unwrap());
    }

    #[test]
    fn certificates_are_sound(qp in arb_qp()) {
        let prefix: Vec<Rat> = (0..40).map(|n| qp.eval(n)).collect();
        if let Some(cert) = detect_recurrence(&prefix, 12, 15).unwrap() {
            prop_assert!(cert.holds_on(&prefix));
            let g = gf_of_certified(&prefix, &cert).unwrap();
            prop_assert_eq!(g.expand(prefix.len()).unwrap(), prefix);
        }
    }

    #[test]
    fn short_recurrences_are_found(qp in arb_qp()) {
        // the denominator degree bounds the order of the minimal recurrence
        let order = qp.series().den().degree().unwrap();
        prop_assume!(order <= 8);
        let prefix: Vec<Rat> = (0..30).map(|n| qp.eval(n)).collect();
        let cert = detect_recurrence(&prefix, 8, 12).unwrap().unwrap();
        prop_assert!(cert.order <= order);
        prop_assert_eq!(gf_of_certified(&prefix, &cert).unwrap(), qp.series());
    }
}

fn phi(text: &str, vars: &str, p: u64) -> PhiFunction {
    let vars = parse_var_list(vars).unwrap();
    PhiFunction::hypersurface(ParsedPoly::parse(text).unwrap().to_fp_with(p, &vars).unwrap()).unwrap()
}

#[test]
fn report_for_a_variable() {
    let rep = weak_pfractal_report(&phi("x", "x,y", 2), 2, 7, 3).unwrap();
    assert_eq!(rep.verdict, Verdict::CertifiedRational);
    let want = RationalGF::new(UniPoly::one(), UniPoly::from_ints(&[1, -2])).unwrap();
    assert_eq!(rep.gf.unwrap(), want);
}

#[test]
fn report_for_reflected_nodal_cubic() {
    let rep = weak_pfractal_report(&phi("x^3+y^3+x*y*z", "x,y,z", 2).reflect(), 3, 5, 2).unwrap();
    assert!(rep.is_certified());
    let gf = rep.gf.unwrap();
    let all = RationalGF::new(UniPoly::one(), UniPoly::from_ints(&[1, -8])).unwrap();
    let fss = &all - &gf;
    assert_eq!(fss, RationalGF::new(UniPoly::one(), UniPoly::from_ints(&[1, -1])).unwrap());
}

#[test]
fn report_for_perfect_square_indicator() {
    let rep = weak_pfractal_report(&perfect_square_indicator(2).unwrap().reflect(), 0, 199, 10).unwrap();
    assert_eq!(rep.verdict, Verdict::NoRecurrenceFound { max_order: 10, prefix_len: 200 });
    assert!(rep.certificate.is_none() && rep.gf.is_none());
    // the unreflected function is eventually zero
    let rep = weak_pfractal_report(&perfect_square_indicator(2).unwrap(), 0, 30, 3).unwrap();
    assert!(rep.is_certified());
}
