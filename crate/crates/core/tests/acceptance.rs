//! One line per acceptance criterion. Exits non-zero if any criterion fails
//! or runs past its time limit.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pfractal::cyclo_cancel::{
    cancellation_analyze, check_pd_not_root, question_check, sm_dimension, vl_sum_dimension, CancellationInput,
};
use pfractal::exact_arith::numtheory::{factorize, totient};
use pfractal::exact_arith::{Rat, RationalGF, UniPoly};
use pfractal::fp_hypersurface::{colength, parse_var_list, FpPoly, ParsedPoly};
use pfractal::phi_lab::{fs_function, hk_function, perfect_square_indicator, DyadicPoint, PhiFunction};
use pfractal::qp_series::{
    detect_recurrence, fit_quasi_polynomial, multiplicity_from_series, qp_of_series, rnc_hk, series_of_qp,
    weak_pfractal_report, QuasiPolynomial,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

/// Number, name, time limit in seconds, check.
type Criterion = (u32, &'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_integer(x)).collect()
}

fn poly(text: &str, vars: &str, p: u64) -> Result<FpPoly, String> {
    let vars = ok(parse_var_list(vars))?;
    ok(ok(ParsedPoly::parse(text))?.to_fp_with(p, &vars))
}

fn phi(text: &str, vars: &str, p: u64) -> Result<PhiFunction, String> {
    ok(PhiFunction::hypersurface(poly(text, vars, p)?))
}

fn c1_nodal_signature() -> Check {
    let f = poly("x^3+y^3+x*y*z", "x,y,z", 2)?;
    let fs: Vec<u64> = (1..=4).map(|n| fs_function(&f, n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure!(fs == [1, 1, 1, 1], "FS(1..4) = {fs:?}");
    Ok(format!("FS(1..4) = {fs:?}"))
}

fn random_poly(rng: &mut ChaCha8Rng, p: u64, s: usize) -> FpPoly {
    loop {
        let nterms = rng.gen_range(1..=3);
        let terms: Vec<(i64, Vec<u32>)> = (0..nterms)
            .map(|_| (rng.gen_range(1..p as i64), (0..s).map(|_| rng.gen_range(0..=3)).collect()))
            .collect();
        let f = FpPoly::from_terms(p, s, terms).unwrap();
        if !f.is_zero() && f.constant_term() == 0 {
            return f;
        }
    }
}

fn c2_frobenius_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut largest = 0u64;
    for case in 0..50 {
        let p = if rng.gen_bool(0.5) { 2u64 } else { 3 };
        let s = rng.gen_range(1..=3usize);
        // p^(s(n+1)) <= 2^15
        let nmax = (0..).take_while(|&n| p.pow(s as u32 * (n + 1)) <= 1 << 15).last().unwrap();
        let n = rng.gen_range(0..=nmax);
        let a = rng.gen_range(0..=p.pow(n));
        let f = random_poly(&mut rng, p, s);
        let coarse = ok(colength(&f, a, n))?;
        let fine = ok(colength(&f, p * a, n + 1))?;
        ensure!(
            fine == p.pow(s as u32) * coarse,
            "case {case}: f = {f}, a = {a}, n = {n}: {fine} != {}^{s} * {coarse}",
            p
        );
        largest = largest.max(p.pow(s as u32 * (n + 1)));
    }
    Ok(format!("50 cases, largest algebra dimension {largest}"))
}

fn c3_products() -> Check {
    let cases = [("x^2", "x", "y^2", "y", "x^2*y^2", 2u64), ("x", "x", "y", "y", "x*y", 3)];
    let mut points = 0;
    for (f, fv, g, gv, fg, p) in cases {
        let combined = ok(phi(f, fv, p)?.product_phi(&phi(g, gv, p)?))?;
        let direct = phi(fg, "x,y", p)?;
        let mut ts: Vec<DyadicPoint> = Vec::new();
        let n = if p == 2 { 3 } else { 2 };
        for a in 0..=p.pow(n) {
            ts.push(ok(DyadicPoint::new(a, n, p))?);
        }
        if p == 2 {
            ts.push(ok(DyadicPoint::new(1u32, 4, 2))?);
        }
        ensure!(ts.len() == 10, "expected 10 points, built {}", ts.len());
        for t in &ts {
            let (l, r) = (ok(combined.eval(t))?, ok(direct.eval(t))?);
            ensure!(l == r, "{fg} at {t}: combinator {l}, direct {r}");
            points += 1;
        }
    }

    let f = poly("x^2*y^2", "x,y", 2)?;
    let hk: Vec<u64> = (0..=4).map(|n| hk_function(&f, n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure!(hk == [1, 4, 12, 28, 60], "HK(x^2 y^2) = {hk:?}");
    let fit = ok(fit_quasi_polynomial(&ints(&[1, 4, 12, 28, 60]), 2, 1, 1, 1))?;
    let e = ok(multiplicity_from_series(&fit.series(), 1, 2))?;
    ensure!(e == Rat::from_integer(4), "e_HK(x^2 y^2) = {e}");

    let mut parts = Vec::new();
    for v in ["x", "y"] {
        let h = poly(&format!("{v}^2"), v, 2)?;
        let prefix: Vec<Rat> = (0..=4).map(|n| hk_function(&h, n).map(Rat::from_integer)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let fit = ok(fit_quasi_polynomial(&prefix, 2, 0, 1, 1))?;
        parts.push(ok(multiplicity_from_series(&fit.series(), 0, 2))?);
    }
    ensure!(parts[0].clone() + parts[1].clone() == e, "e_HK(x^2) + e_HK(y^2) = {} + {} != {e}", parts[0], parts[1]);
    Ok(format!("{points} points agree, e_HK(x^2 y^2) = {e} = {} + {}", parts[0], parts[1]))
}

fn gf(num: &[i64], den: &[&[i64]]) -> Result<RationalGF, String> {
    let den = den.iter().fold(UniPoly::one(), |acc, f| &acc * &UniPoly::from_ints(f));
    ok(RationalGF::new(UniPoly::from_ints(num), den))
}

fn c4_rnc_five() -> Check {
    let p = 2i64;
    let prefix: Vec<Rat> = (0..12).map(|n| rnc_hk(5, 2, n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let fit = ok(fit_quasi_polynomial(&prefix, 2, 2, 4, 0))?;
    let p2 = p * p;
    let want = gf(&[1, 1 + 2 * p2, 2 + 2 * p2, 3 + p2], &[&[1, -p2], &[1, 0, 1], &[1, 1]])?;
    let got = fit.series();
    ensure!(got == want, "fitted series {got} != {want}");
    let expanded = ok(want.expand(prefix.len()))?;
    ensure!(expanded == prefix, "closed form expands to {expanded:?}");
    Ok(format!("G = {got}"))
}

fn c5_direct_sum() -> Check {
    let table = ints(&[-4, 0, 2, -3, -1, 3]);
    let inp = ok(CancellationInput::new(2, 2, Rat::from_integer(6), table.clone()))?;
    let want = gf(&[-2, -18, -18, 11, 18], &[&[1, -4], &[-1, 1], &[1, 1], &[1, 1, 1]])?;
    let seq: Vec<Rat> = (0..40)
        .map(|n| Rat::from_integer(6) * Rat::int_pow(4, n as u32) + table[n % 6].clone())
        .collect();
    ensure!(ok(want.expand(40))? == seq, "closed form does not expand to the sequence");
    let qp = ok(QuasiPolynomial::new(2, vec![table, vec![Rat::zero()], vec![Rat::from_integer(6)]]))?;
    let from_qp = series_of_qp(&qp);
    ensure!(from_qp == want, "series_of_qp gives {from_qp}");
    let rep = ok(cancellation_analyze(&inp))?;
    ensure!(rep.simplified == want, "cancellation_analyze gives {}", rep.simplified);
    ensure!(rep.dividing_cyclotomics == [6], "dividing cyclotomics {:?}", rep.dividing_cyclotomics);
    Ok(format!("G = {want}, dividing = {{Phi_6}}"))
}

fn c6_rank_sweep() -> Check {
    let mut count = 0;
    for m in 1..=30usize {
        let want = m - totient(m as u64) as usize;
        for p in [2u64, 3, 5] {
            for d in [1u32, 2] {
                let got = ok(sm_dimension(m, p, d))?;
                ensure!(got == want, "dim S_{m} (p={p}, d={d}) = {got}, expected {want}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} systems"))
}

fn c7_two_primes() -> Check {
    let mut checked = Vec::new();
    for m in 1..=30usize {
        if factorize(m as u64).len() <= 2 {
            let got = ok(vl_sum_dimension(m))?;
            let want = m - totient(m as u64) as usize;
            ensure!(got == want, "dim sum V_l for M = {m} is {got}, expected {want}");
            checked.push(m);
        }
    }
    let rec = ok(question_check(30, 2, 1))?;
    ensure!(rec.containment_ok, "containment fails for M = 30: {rec:?}");
    Ok(format!(
        "{} moduli; M=30: dim S = {}, dim sum V = {}, status {:?}",
        checked.len(),
        rec.sm_dim,
        rec.vl_dim,
        rec.status
    ))
}

fn c8_pd_not_root() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let rat = |rng: &mut ChaCha8Rng| Rat::new(rng.gen_range(-50i64..=50), rng.gen_range(1i64..=9)).unwrap();
    for case in 0..1000 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let d = rng.gen_range(1..=3u32);
        let ad = loop {
            let r = rat(&mut rng);
            if !r.is_zero() {
                break r;
            }
        };
        let m = rng.gen_range(1..=12usize);
        let a0: Vec<Rat> = (0..m).map(|_| rat(&mut rng)).collect();
        let inp = ok(CancellationInput::new(p, d, ad, a0))?;
        ensure!(check_pd_not_root(&inp), "case {case}: 1/p^d is a root for {inp:?}");
    }
    Ok("1000 inputs".into())
}

fn c9_perfect_squares() -> Check {
    let prefix: Vec<Rat> = (0..200u64)
        .map(|n| {
            let r = (n as f64).sqrt().round() as u64;
            if r * r == n { Rat::one() } else { Rat::zero() }
        })
        .collect();
    let (max_order, max_start) = (10, 200 - 2 * 10 - 1);
    let found = ok(detect_recurrence(&prefix, max_order, max_start))?;
    ensure!(found.is_none(), "spurious recurrence {found:?}");
    let rep = ok(weak_pfractal_report(&ok(perfect_square_indicator(2))?.reflect(), 0, 199, max_order))?;
    ensure!(rep.prefix == prefix, "e_(0,n) of the reflected indicator differs from the indicator");
    ensure!(!rep.is_certified(), "report certifies {:?}", rep.certificate);
    Ok(format!("no recurrence of order <= {max_order} from any start <= {max_start}"))
}

fn random_qp(rng: &mut ChaCha8Rng) -> QuasiPolynomial {
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let d = rng.gen_range(0..=3usize);
    let tables = (0..=d)
        .map(|_| {
            let m = rng.gen_range(1..=6usize);
            (0..m).map(|_| Rat::new(rng.gen_range(-20i64..=20), rng.gen_range(1i64..=6)).unwrap()).collect()
        })
        .collect();
    QuasiPolynomial::new(p, tables).unwrap()
}

fn c10_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    for case in 0..500 {
        let qp = random_qp(&mut rng);
        let g = series_of_qp(&qp);
        let back = ok(qp_of_series(&g, qp.degree(), qp.period(), qp.prime()))?;
        for n in 0..=30 {
            ensure!(back.eval(n) == qp.eval(n), "case {case}: {qp} and {back} differ at n = {n}");
        }
        let e = ok(multiplicity_from_series(&g, qp.degree() as u32, qp.prime()))?;
        ensure!(e == qp.leading_mean(), "case {case}: multiplicity {e} != mean {}", qp.leading_mean());
    }
    Ok("500 quasi-polynomials".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "nodal cubic F-signature", 60, c1_nodal_signature),
        (2, "Frobenius consistency", 120, c2_frobenius_consistency),
        (3, "product formula and additivity", 30, c3_products),
        (4, "R_5 series", 5, c4_rnc_five),
        (5, "direct sum series", 5, c5_direct_sum),
        (6, "rank theorem sweep", 60, c6_rank_sweep),
        (7, "two prime factors", 30, c7_two_primes),
        (8, "1/p^d is never a root", 10, c8_pd_not_root),
        (9, "perfect squares not recurrent", 10, c9_perfect_squares),
        (10, "quasi-polynomial round trip", 60, c10_round_trip),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > Duration::from_secs(limit) => Err(format!("over the {limit} s limit")),
            other => other,
        };
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {id:>2} {tag} [{name}] {:.2}s/{limit}s: {detail}", took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
