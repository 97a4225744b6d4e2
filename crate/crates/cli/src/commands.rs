use std::fmt::Write as _;
use std::path::Path;

use pfractal::cyclo_cancel::{
    cancellation_analyze, question_check, sm_dimension, CancellationInput, CancellationReport, QuestionRecord,
};
use pfractal::exact_arith::numtheory::totient;
use pfractal::exact_arith::{Rat, RationalGF};
use pfractal::fp_hypersurface::{ColengthConfig, FpPoly, ParsedPoly, Var};
use pfractal::phi_lab::{e_sequence, DyadicPoint, PhiFunction};
use pfractal::qp_series::{
    fit_quasi_polynomial, multiplicity_from_series, rnc_hk, sequence_report, FittedSequence, PFractalReport,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::input::{self, SequenceFile, SeriesFile};
use crate::{PolyArgs, ReportArgs};

pub struct Output {
    pub json: Value,
    pub text: String,
}

impl Output {
    fn new(data: &impl Serialize, text: String) -> Output {
        Output {
            json: serde_json::to_value(data).expect("serializable output"),
            text,
        }
    }
}

fn var_names(vars: &[Var]) -> Vec<String> {
    vars.iter().map(Var::to_string).collect()
}

fn hypersurface(f: FpPoly, budget: u64) -> Result<PhiFunction, CliError> {
    Ok(PhiFunction::hypersurface_with(f, ColengthConfig::with_budget(budget))?)
}

fn default_max_start(len: usize, max_order: usize, given: Option<usize>) -> Result<usize, CliError> {
    if let Some(s) = given {
        return Ok(s);
    }
    (len > 2 * max_order).then(|| len - 1 - 2 * max_order).ok_or_else(|| {
        CliError::Domain(format!(
            "{len} terms are too few to search for recurrences of order <= {max_order} (need {})",
            2 * max_order + 1
        ))
    })
}

fn write_report(text: &mut String, rep: &PFractalReport) {
    match &rep.certificate {
        Some(c) => {
            let coeffs: Vec<String> = c.coeffs.iter().map(Rat::to_string).collect();
            let _ = writeln!(
                text,
                "recurrence of order {} from n = {}: [{}], checked on {} terms",
                c.order,
                c.start,
                coeffs.join(", "),
                c.verified_len
            );
        }
        None => {
            let _ = writeln!(
                text,
                "no recurrence of order <= {} starting at n <= {}",
                rep.max_order, rep.max_start
            );
        }
    }
    if let Some(g) = &rep.gf {
        let _ = writeln!(text, "G(z) = {g}");
    }
}

#[derive(Serialize)]
struct HkOut {
    command: &'static str,
    f: String,
    p: u64,
    vars: Vec<String>,
    n_from: u32,
    terms: Vec<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<PFractalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicity: Option<Rat>,
}

pub fn hk(args: &PolyArgs, nmax: u32, rep: &ReportArgs) -> Result<Output, CliError> {
    let (f, vars) = input::poly(&args.f, args.p, args.vars.as_deref())?;
    let s = f.nvars() as u32;
    let phi = hypersurface(f.clone(), args.budget)?;
    let terms = e_sequence(&phi, s, nmax)?;

    let mut text = format!("HK of {f} over F_{} in {}\n", args.p, var_names(&vars).join(","));
    for (n, v) in terms.iter().enumerate() {
        let _ = writeln!(text, "{n}\t{v}");
    }
    let mut out = HkOut {
        command: "hk",
        f: f.to_string(),
        p: args.p,
        vars: var_names(&vars),
        n_from: 0,
        terms: terms.clone(),
        report: None,
        multiplicity: None,
    };
    if rep.report {
        let max_start = default_max_start(terms.len(), rep.max_order, None)?;
        let report = sequence_report(format!("HK({f})"), terms, rep.max_order, max_start)?;
        write_report(&mut text, &report);
        if let Some(g) = &report.gf {
            let e = multiplicity_from_series(g, s - 1, args.p)?;
            let _ = writeln!(text, "e_HK = {e}");
            out.multiplicity = Some(e);
        }
        out.report = Some(report);
    }
    Ok(Output::new(&out, text))
}

#[derive(Serialize)]
struct FsOut {
    command: &'static str,
    f: String,
    p: u64,
    vars: Vec<String>,
    n_from: u32,
    terms: Vec<Rat>,
    /// Report on the colengths `p^(sn) - FS(n)`, `n >= 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<PFractalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fss: Option<RationalGF>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signature: Option<Rat>,
}

pub fn fs(args: &PolyArgs, nmax: u32, rep: &ReportArgs) -> Result<Output, CliError> {
    if nmax < 1 {
        return Err(CliError::Domain("the F-signature table starts at n = 1; pass --nmax >= 1".into()));
    }
    let (f, vars) = input::poly(&args.f, args.p, args.vars.as_deref())?;
    let s = f.nvars() as u32;
    let phi = hypersurface(f.clone(), args.budget)?.reflect();
    let colengths = e_sequence(&phi, s, nmax)?;
    let ps = Rat::int_pow(args.p, s);
    let mut scale = Rat::one();
    let mut all = Vec::with_capacity(colengths.len());
    for c in &colengths {
        all.push(scale.clone() - c.clone());
        scale *= ps.clone();
    }
    let terms = all[1..].to_vec();

    let mut text = format!("FS of {f} over F_{} in {}\n", args.p, var_names(&vars).join(","));
    for (n, v) in terms.iter().enumerate() {
        let _ = writeln!(text, "{}\t{v}", n + 1);
    }
    let mut out = FsOut {
        command: "fs",
        f: f.to_string(),
        p: args.p,
        vars: var_names(&vars),
        n_from: 1,
        terms,
        report: None,
        fss: None,
        signature: None,
    };
    if rep.report {
        let max_start = default_max_start(colengths.len(), rep.max_order, None)?;
        let report = sequence_report(format!("p^(sn) - FS({f})"), colengths, rep.max_order, max_start)?;
        write_report(&mut text, &report);
        if let Some(g) = &report.gf {
            let fss = &RationalGF::geometric(ps.clone()) - g;
            let sig = multiplicity_from_series(&fss, s, args.p)?;
            let _ = writeln!(text, "FSS(z) = {fss}\ns = {sig}");
            out.fss = Some(fss);
            out.signature = Some(sig);
        }
        out.report = Some(report);
    }
    Ok(Output::new(&out, text))
}

#[derive(Serialize)]
struct PointValue {
    t: String,
    value: Rat,
}

#[derive(Serialize)]
struct PhiOut {
    command: &'static str,
    f: String,
    p: u64,
    vars: Vec<String>,
    reflect: bool,
    values: Vec<PointValue>,
}

pub fn phi(args: &PolyArgs, points: Option<&str>, level: Option<u32>, reflect: bool) -> Result<Output, CliError> {
    let (f, vars) = input::poly(&args.f, args.p, args.vars.as_deref())?;
    let ts = match (points, level) {
        (Some(text), _) => input::points(text, args.p)?,
        (None, Some(n)) => {
            let q = args
                .p
                .checked_pow(n)
                .ok_or_else(|| CliError::Domain(format!("{}^{n} points are too many to tabulate", args.p)))?;
            (0..=q).map(|a| DyadicPoint::new(a, n, args.p)).collect::<Result<_, _>>()?
        }
        (None, None) => return Err(CliError::Usage("pass --points or --level".into())),
    };
    let mut phi = hypersurface(f.clone(), args.budget)?;
    if reflect {
        phi = phi.reflect();
    }
    let values: Vec<Rat> = ts.par_iter().map(|t| phi.eval(t)).collect::<Result<_, _>>()?;

    let mut text = format!("{phi}\n");
    for (t, v) in ts.iter().zip(&values) {
        let _ = writeln!(text, "{t}\t{v}");
    }
    let out = PhiOut {
        command: "phi",
        f: f.to_string(),
        p: args.p,
        vars: var_names(&vars),
        reflect,
        values: ts
            .iter()
            .zip(values)
            .map(|(t, value)| PointValue { t: t.to_string(), value })
            .collect(),
    };
    Ok(Output::new(&out, text))
}

#[derive(Serialize)]
struct FitOut {
    command: &'static str,
    #[serde(flatten)]
    fit: FittedSequence,
    series: RationalGF,
}

pub fn series_fit(file: &Path, d: usize, m: usize, max_offset: usize) -> Result<Output, CliError> {
    let seq: SequenceFile = input::read_json(file)?;
    let fit = fit_quasi_polynomial(&seq.terms, seq.p, d, m, max_offset)?;
    let series = fit.series();
    let head: Vec<String> = fit.head.iter().map(Rat::to_string).collect();
    let text = format!(
        "offset {} (head [{}]), {} further terms checked\ne_n = {}\nG(z) = {series}\n",
        fit.offset,
        head.join(", "),
        fit.verified_terms,
        fit.qp
    );
    Ok(Output::new(
        &FitOut {
            command: "series fit",
            fit,
            series,
        },
        text,
    ))
}

#[derive(Serialize)]
struct DetectOut {
    command: &'static str,
    #[serde(flatten)]
    report: PFractalReport,
}

pub fn series_detect(file: &Path, max_order: usize, max_start: Option<usize>) -> Result<Output, CliError> {
    let seq: SequenceFile = input::read_json(file)?;
    let max_start = default_max_start(seq.terms.len(), max_order, max_start)?;
    let report = sequence_report(file.display().to_string(), seq.terms, max_order, max_start)?;
    let mut text = String::new();
    write_report(&mut text, &report);
    Ok(Output::new(
        &DetectOut {
            command: "series detect",
            report,
        },
        text,
    ))
}

fn series_and_prime(file: &Path, p: Option<u64>) -> Result<(RationalGF, Option<u64>), CliError> {
    match input::read_json::<SeriesFile>(file)? {
        SeriesFile::Gf(g) => Ok((g, p)),
        SeriesFile::Qp(qp) => match p {
            Some(p) if p != qp.prime() => Err(CliError::Usage(format!(
                "--p {p} disagrees with the prime {} in {}",
                qp.prime(),
                file.display()
            ))),
            _ => Ok((qp.series(), Some(qp.prime()))),
        },
    }
}

#[derive(Serialize)]
struct MultiplicityOut {
    command: &'static str,
    series: RationalGF,
    p: u64,
    d: u32,
    multiplicity: Rat,
}

pub fn series_multiplicity(file: &Path, d: u32, p: Option<u64>) -> Result<Output, CliError> {
    let (series, p) = series_and_prime(file, p)?;
    let p = p.ok_or_else(|| CliError::Usage("--p is required for a series file".into()))?;
    let multiplicity = multiplicity_from_series(&series, d, p)?;
    let text = format!("lim (1 - {p}^{d} z) G(z) = {multiplicity}\n");
    Ok(Output::new(
        &MultiplicityOut {
            command: "series multiplicity",
            series,
            p,
            d,
            multiplicity,
        },
        text,
    ))
}

#[derive(Serialize)]
struct ExpandOut {
    command: &'static str,
    series: RationalGF,
    terms: Vec<Rat>,
}

pub fn series_expand(file: &Path, n: usize) -> Result<Output, CliError> {
    let (series, _) = series_and_prime(file, None)?;
    let terms = series.expand(n)?;
    let cells: Vec<String> = terms.iter().map(Rat::to_string).collect();
    let text = format!("[{}]\n", cells.join(", "));
    Ok(Output::new(
        &ExpandOut {
            command: "series expand",
            series,
            terms,
        },
        text,
    ))
}

#[derive(Serialize)]
struct AnalyzeOut {
    command: &'static str,
    p: u64,
    d: u32,
    ad: Rat,
    a0: Vec<Rat>,
    #[serde(flatten)]
    report: CancellationReport,
}

pub fn cancel_analyze(p: u64, d: u32, ad: &str, a0: &str) -> Result<Output, CliError> {
    let ad: Rat = ad.trim().parse()?;
    let a0 = input::rats(a0)?;
    let inp = CancellationInput::new(p, d, ad.clone(), a0.clone())?;
    let report = cancellation_analyze(&inp)?;
    let dividing: Vec<String> = report.dividing_cyclotomics.iter().map(|k| format!("Phi_{k}")).collect();
    let text = format!(
        "P(z) = {}\nQ(z) = {}\n1/{p}^{d} is a root of P: {}\ndividing cyclotomics: {{{}}}\nG(z) = {}\n",
        report.p_poly,
        report.q_poly,
        !report.pd_root_check,
        dividing.join(", "),
        report.simplified
    );
    Ok(Output::new(
        &AnalyzeOut {
            command: "cancel analyze",
            p,
            d,
            ad,
            a0,
            report,
        },
        text,
    ))
}

#[derive(Serialize)]
struct SmOut {
    command: &'static str,
    m: usize,
    p: u64,
    d: u32,
    dim: usize,
    totient: u64,
}

pub fn cancel_sm(m: usize, p: u64, d: u32) -> Result<Output, CliError> {
    let dim = sm_dimension(m, p, d)?;
    let phi = totient(m as u64);
    let text = format!("dim S_{m} = {dim} (M - phi(M) = {m} - {phi})\n");
    Ok(Output::new(
        &SmOut {
            command: "cancel sm",
            m,
            p,
            d,
            dim,
            totient: phi,
        },
        text,
    ))
}

#[derive(Serialize)]
struct QuestionOut {
    command: &'static str,
    #[serde(flatten)]
    record: QuestionRecord,
}

pub fn cancel_question(m: usize, p: u64, d: u32) -> Result<Output, CliError> {
    let record = question_check(m, p, d)?;
    let text = format!(
        "M = {m}: dim S_M = {}, dim sum V_l = {}, contained: {}, equal: {}, {} distinct primes, {:?}\n",
        record.sm_dim, record.vl_dim, record.containment_ok, record.equal, record.distinct_primes, record.status
    );
    Ok(Output::new(
        &QuestionOut {
            command: "cancel question",
            record,
        },
        text,
    ))
}

#[derive(Serialize)]
struct ProductPoint {
    t: String,
    phi_f: Rat,
    phi_g: Rat,
    combined: Rat,
    direct: Rat,
    equal: bool,
}

#[derive(Serialize)]
struct ProductOut {
    command: &'static str,
    f: String,
    g: String,
    p: u64,
    f_vars: Vec<String>,
    g_vars: Vec<String>,
    points: Vec<ProductPoint>,
    all_equal: bool,
}

pub fn product_check(
    f: &str,
    g: &str,
    p: u64,
    points: &str,
    f_vars: Option<&str>,
    g_vars: Option<&str>,
    budget: u64,
) -> Result<Output, CliError> {
    let (fp, gp) = (ParsedPoly::parse(f)?, ParsedPoly::parse(g)?);
    let fv = input::vars_of(&fp, f_vars)?;
    let gv = input::vars_of(&gp, g_vars)?;
    for (name, vs) in [("f", &fv), ("g", &gv)] {
        if vs.is_empty() {
            return Err(CliError::Domain(format!("{name} involves no variables")));
        }
    }
    if let Some(v) = fv.iter().find(|v| gv.contains(v)) {
        return Err(CliError::Domain(format!("f and g share the variable {v}")));
    }
    let joined: Vec<Var> = fv.iter().chain(&gv).copied().collect();
    let fg = fp.to_fp_with(p, &joined)?.mul(&gp.to_fp_with(p, &joined)?)?;
    let phi_f = hypersurface(fp.to_fp_with(p, &fv)?, budget)?;
    let phi_g = hypersurface(gp.to_fp_with(p, &gv)?, budget)?;
    let combined = phi_f.product_phi(&phi_g)?;
    let direct = hypersurface(fg, budget)?;

    let ts = input::points(points, p)?;
    let rows: Vec<ProductPoint> = ts
        .par_iter()
        .map(|t| -> Result<ProductPoint, CliError> {
            let (c, d) = (combined.eval(t)?, direct.eval(t)?);
            Ok(ProductPoint {
                t: t.to_string(),
                phi_f: phi_f.eval(t)?,
                phi_g: phi_g.eval(t)?,
                equal: c == d,
                combined: c,
                direct: d,
            })
        })
        .collect::<Result<_, _>>()?;
    let all_equal = rows.iter().all(|r| r.equal);

    let mut text = String::from("t\tphi_f\tphi_g\tcombined\tdirect\n");
    for r in &rows {
        let _ = writeln!(
            text,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.t,
            r.phi_f,
            r.phi_g,
            r.combined,
            r.direct,
            if r.equal { "ok" } else { "MISMATCH" }
        );
    }
    let out = ProductOut {
        command: "product-check",
        f: f.to_string(),
        g: g.to_string(),
        p,
        f_vars: var_names(&fv),
        g_vars: var_names(&gv),
        points: rows,
        all_equal,
    };
    Ok(Output::new(&out, text))
}

#[derive(Serialize)]
struct RncOut {
    command: &'static str,
    g: u64,
    p: u64,
    terms: Vec<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<FittedSequence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<RationalGF>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicity: Option<Rat>,
}

pub fn rnc(g: u64, p: u64, nmax: u32, fit: bool, m: Option<usize>) -> Result<Output, CliError> {
    let terms: Vec<Rat> = (0..=nmax).map(|n| rnc_hk(g, p, n)).collect::<Result<_, _>>()?;
    let mut text = format!("HK of R_{g} over F_{p}\n");
    for (n, v) in terms.iter().enumerate() {
        let _ = writeln!(text, "{n}\t{v}");
    }
    let mut out = RncOut {
        command: "rnc",
        g,
        p,
        terms: terms.clone(),
        fit: None,
        series: None,
        multiplicity: None,
    };
    if fit {
        let m = m.unwrap_or(totient(g) as usize);
        // (p^n - 1) mod g is periodic once p^n is divisible by the p-part of g
        let max_offset = (1..).take_while(|&k| p.saturating_pow(k) <= g).count();
        let fitted = fit_quasi_polynomial(&terms, p, 2, m, max_offset)?;
        let series = fitted.series();
        let e = multiplicity_from_series(&series, 2, p)?;
        let _ = writeln!(
            text,
            "e_n = {} from n = {}\nG(z) = {series}\ne_HK = {e}",
            fitted.qp, fitted.offset
        );
        out.fit = Some(fitted);
        out.series = Some(series);
        out.multiplicity = Some(e);
    }
    Ok(Output::new(&out, text))
}
