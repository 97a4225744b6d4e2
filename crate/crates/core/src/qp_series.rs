//! Quasi-polynomials in `p^n`, their generating series, and exact
//! linear-recurrence certificates for finite prefixes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::numtheory::is_prime;
use crate::exact_arith::{residue_limit, Rat, RationalGF, UniPoly};
use crate::phi_lab::{e_sequence, PhiFunction};

/// `e(n) = Σ_j a_j(n mod M_j) p^(j n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiPolynomial {
    p: u64,
    d: usize,
    tables: Vec<Vec<Rat>>,
}

/// Shortest period of a cyclic table.
fn minimal_period(table: &[Rat]) -> usize {
    let m = table.len();
    (1..=m)
        .filter(|l| m.is_multiple_of(*l))
        .find(|&l| (l..m).all(|i| table[i] == table[i % l]))
        .unwrap_or(m)
}

impl QuasiPolynomial {
    /// `tables[j]` is the table of `a_j`. Tables are cut to their minimal
    /// periods and vanishing top tables are dropped.
    pub fn new(p: u64, tables: Vec<Vec<Rat>>) -> Result<QuasiPolynomial> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if tables.is_empty() || tables.iter().any(Vec::is_empty) {
            return Err(Error::precondition("every coefficient table needs at least one entry"));
        }
        let mut tables: Vec<Vec<Rat>> = tables
            .into_iter()
            .map(|mut t| {
                let l = minimal_period(&t);
                t.truncate(l);
                t
            })
            .collect();
        while tables.len() > 1 && tables.last().is_some_and(|t| t.iter().all(Rat::is_zero)) {
            tables.pop();
        }
        Ok(QuasiPolynomial {
            p,
            d: tables.len() - 1,
            tables,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn tables(&self) -> &[Vec<Rat>] {
        &self.tables
    }

    pub fn table(&self, j: usize) -> &[Rat] {
        &self.tables[j]
    }

    /// Least common multiple of the table periods.
    pub fn period(&self) -> usize {
        self.tables.iter().fold(1, |acc, t| acc.lcm(&t.len()))
    }

    pub fn eval(&self, n: usize) -> Rat {
        let pn = Rat::from_integer(BigInt::from(self.p).pow(n as u32));
        let mut acc = Rat::zero();
        let mut pow = Rat::one();
        for t in &self.tables {
            acc += t[n % t.len()].clone() * pow.clone();
            pow *= pn.clone();
        }
        acc
    }

    /// `(Σ_i a_d(i)) / M_d`.
    pub fn leading_mean(&self) -> Rat {
        let t = &self.tables[self.d];
        let total: Rat = t.iter().cloned().sum();
        total / Rat::from_integer(t.len() as u64)
    }

    /// The generating series `Σ_n e(n) z^n` in canonical form.
    pub fn series(&self) -> RationalGF {
        let mut acc = RationalGF::zero();
        for (j, t) in self.tables.iter().enumerate() {
            let pj = Rat::int_pow(self.p, j as u32);
            let mut num = Vec::with_capacity(t.len());
            let mut scale = Rat::one();
            for a in t {
                num.push(a.clone() * scale.clone());
                scale *= pj.clone();
            }
            // scale is now p^(j M_j)
            let den = UniPoly::one() - UniPoly::monomial(scale, t.len());
            let term = RationalGF::new(UniPoly::new(num), den).expect("nonzero denominator");
            acc = &acc + &term;
        }
        acc
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, t) in self.tables.iter().enumerate().rev() {
            if t.iter().all(Rat::is_zero) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cells: Vec<String> = t.iter().map(Rat::to_string).collect();
            if t.len() == 1 {
                write!(f, "{}", cells[0])?;
            } else {
                write!(f, "[{}]", cells.join(", "))?;
            }
            match j {
                0 => {}
                1 => write!(f, "*{}^n", self.p)?,
                _ => write!(f, "*{}^({j}n)", self.p)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for QuasiPolynomial {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: u64,
            d: Option<usize>,
            tables: Vec<Vec<Rat>>,
        }
        let raw = Raw::deserialize(de)?;
        if let Some(d) = raw.d {
            if d + 1 != raw.tables.len() {
                return Err(serde::de::Error::custom(format!(
                    "d = {d} needs {} tables, got {}",
                    d + 1,
                    raw.tables.len()
                )));
            }
        }
        QuasiPolynomial::new(raw.p, raw.tables).map_err(serde::de::Error::custom)
    }
}

pub fn qp_eval(qp: &QuasiPolynomial, n: usize) -> Rat {
    qp.eval(n)
}

pub fn series_of_qp(qp: &QuasiPolynomial) -> RationalGF {
    qp.series()
}

/// Monomial-basis coefficients of the polynomial through `(xs[k], ys[k])`.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> UniPoly {
    // Newton divided differences, then expand the Newton form.
    let n = xs.len();
    let mut coef = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = coef[k].clone() - coef[k - 1].clone();
            let den = xs[k].clone() - xs[k - level].clone();
            coef[k] = num / den;
        }
    }
    let mut poly = UniPoly::zero();
    for k in (0..n).rev() {
        let linear = UniPoly::new(vec![-xs[k].clone(), Rat::one()]);
        poly = &(&poly * &linear) + &UniPoly::constant(coef[k].clone());
    }
    poly
}

/// Tables `a_0..a_d` of period `m` matching `value(n)` at the first `d + 1`
/// indices `n >= offset` of every residue class mod `m`.
fn solve_tables(value: impl Fn(usize) -> Rat, offset: usize, p: u64, d: usize, m: usize) -> Vec<Vec<Rat>> {
    let mut tables = vec![vec![Rat::zero(); m]; d + 1];
    for i in 0..m {
        let first = offset + (i + m - offset % m) % m;
        let idx: Vec<usize> = (0..=d).map(|k| first + k * m).collect();
        let xs: Vec<Rat> = idx
            .iter()
            .map(|&n| Rat::from_integer(BigInt::from(p).pow(n as u32)))
            .collect();
        let ys: Vec<Rat> = idx.iter().map(|&n| value(n)).collect();
        let poly = interpolate(&xs, &ys);
        for (j, table) in tables.iter_mut().enumerate() {
            table[i] = poly.coeff(j);
        }
    }
    tables
}

/// Inverse of [`series_of_qp`]: the quasi-polynomial of degree `<= d` and
/// period dividing `m` whose generating series is `g`.
pub fn qp_of_series(g: &RationalGF, d: usize, m: usize, p: u64) -> Result<QuasiPolynomial> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::precondition("period must be positive"));
    }
    let mut q = UniPoly::one();
    for j in 0..=d {
        let pj = Rat::int_pow(p, (j * m) as u32);
        q = &q * &(UniPoly::one() - UniPoly::monomial(pj, m));
    }
    if !g.is_zero() && (!g.is_proper() || !g.den().divides(&q)?) {
        return Err(Error::precondition(format!(
            "series is not of the form P/Q with Q = prod (1 - p^(jM) z^M), j <= {d}, M = {m}"
        )));
    }
    let coeffs = g.expand(m * (d + 1))?;
    let tables = solve_tables(|n| coeffs[n].clone(), 0, p, d, m);
    QuasiPolynomial::new(p, tables)
}

/// A sequence that agrees with a quasi-polynomial from `offset` on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FittedSequence {
    pub offset: usize,
    /// The sequence values at `0..offset`.
    pub head: Vec<Rat>,
    pub qp: QuasiPolynomial,
    /// Terms checked beyond the ones used for interpolation.
    pub verified_terms: usize,
}

impl FittedSequence {
    pub fn eval(&self, n: usize) -> Rat {
        match self.head.get(n) {
            Some(v) => v.clone(),
            None => self.qp.eval(n),
        }
    }

    pub fn series(&self) -> RationalGF {
        let correction: Vec<Rat> = self
            .head
            .iter()
            .enumerate()
            .map(|(n, v)| v.clone() - self.qp.eval(n))
            .collect();
        &self.qp.series() + &RationalGF::from_poly(UniPoly::new(correction))
    }
}

/// Fit a quasi-polynomial of degree `<= d` and period dividing `m` to a
/// prefix, trying offsets `0..=max_offset` and keeping the first one that
/// reproduces every remaining term.
pub fn fit_quasi_polynomial(prefix: &[Rat], p: u64, d: usize, m: usize, max_offset: usize) -> Result<FittedSequence> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::precondition("period must be positive"));
    }
    let need = m * (d + 1);
    if prefix.len() < need {
        return Err(Error::precondition(format!(
            "a fit with d = {d}, M = {m} needs {need} terms, got {}",
            prefix.len()
        )));
    }
    for offset in 0..=max_offset.min(prefix.len() - need) {
        let tables = solve_tables(|n| prefix[n].clone(), offset, p, d, m);
        let qp = QuasiPolynomial::new(p, tables)?;
        if (offset..prefix.len()).all(|n| qp.eval(n) == prefix[n]) {
            return Ok(FittedSequence {
                offset,
                head: prefix[..offset].to_vec(),
                qp,
                verified_terms: prefix.len() - offset - need,
            });
        }
    }
    Err(Error::Inconsistent(format!(
        "no quasi-polynomial with d = {d}, M = {m} fits the prefix from any offset <= {max_offset}"
    )))
}

/// `e_n = Σ_{j=1..order} c_j e_(n-j)` for `start + order <= n < verified_len`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceCertificate {
    pub order: usize,
    pub coeffs: Vec<Rat>,
    pub start: usize,
    pub verified_len: usize,
}

impl RecurrenceCertificate {
    /// `1 - Σ c_j z^j`.
    pub fn characteristic(&self) -> UniPoly {
        let mut c = vec![Rat::one()];
        c.extend(self.coeffs.iter().map(|x| -x.clone()));
        UniPoly::new(c)
    }

    pub fn holds_on(&self, prefix: &[Rat]) -> bool {
        self.coeffs.len() == self.order
            && self.verified_len <= prefix.len()
            && (self.start + self.order..self.verified_len).all(|n| {
                let rhs: Rat = (1..=self.order)
                    .map(|j| self.coeffs[j - 1].clone() * prefix[n - j].clone())
                    .sum();
                rhs == prefix[n]
            })
    }
}

/// Reduced row echelon form over `Q`, grown one augmented row at a time.
struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new() }
    }

    /// Add `[coeffs | rhs]`; false if the system became inconsistent.
    fn push(&mut self, mut row: Vec<Rat>) -> bool {
        for (c, piv) in &self.rows {
            if !row[*c].is_zero() {
                let f = row[*c].clone();
                for (x, y) in row.iter_mut().zip(piv) {
                    if !y.is_zero() {
                        *x -= f.clone() * y.clone();
                    }
                }
            }
        }
        let Some(c) = (0..self.width).find(|&c| !row[c].is_zero()) else {
            return row[self.width].is_zero();
        };
        let inv = row[c].recip().expect("nonzero pivot");
        for x in row.iter_mut() {
            *x *= inv.clone();
        }
        for (_, other) in self.rows.iter_mut() {
            if !other[c].is_zero() {
                let f = other[c].clone();
                for (x, y) in other.iter_mut().zip(&row) {
                    if !y.is_zero() {
                        *x -= f.clone() * y.clone();
                    }
                }
            }
        }
        self.rows.push((c, row));
        true
    }

    /// A solution with free unknowns set to zero.
    fn solution(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.width];
        for (c, row) in &self.rows {
            x[*c] = row[self.width].clone();
        }
        x
    }
}

/// Smallest order, then smallest start, of a linear recurrence that holds
/// on the whole prefix. Order 0 means the prefix is zero from `start` on.
pub fn detect_recurrence(prefix: &[Rat], max_order: usize, max_start: usize) -> Result<Option<RecurrenceCertificate>> {
    let need = 2 * max_order + max_start + 1;
    if prefix.len() < need {
        return Err(Error::precondition(format!(
            "prefix of length {} is too short for max_order {max_order} and max_start {max_start} (need {need})",
            prefix.len()
        )));
    }
    let len = prefix.len();
    for m in 0..=max_order {
        let mut ech = Echelon::new(m);
        let mut best: Option<(usize, Vec<Rat>)> = None;
        // equations n = len-1 down to m; start = n - m
        for n in (m..len).rev() {
            let mut row: Vec<Rat> = (1..=m).map(|j| prefix[n - j].clone()).collect();
            row.push(prefix[n].clone());
            if !ech.push(row) {
                break;
            }
            let start = n - m;
            if start <= max_start {
                best = Some((start, ech.solution()));
            }
        }
        if let Some((start, coeffs)) = best {
            let cert = RecurrenceCertificate {
                order: m,
                coeffs,
                start,
                verified_len: len,
            };
            debug_assert!(cert.holds_on(prefix));
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// The rational function whose expansion continues the prefix according
/// to the certificate.
pub fn gf_of_certified(prefix: &[Rat], cert: &RecurrenceCertificate) -> Result<RationalGF> {
    if !cert.holds_on(prefix) {
        return Err(Error::Inconsistent("certificate does not hold on the prefix".into()));
    }
    let len = cert.verified_len;
    let b = cert.characteristic();
    let series = UniPoly::new(prefix[..len].to_vec());
    let num = (&b * &series).truncate(cert.start + cert.order);
    let gf = RationalGF::new(num, b)?;
    if gf.expand(len)? != prefix[..len] {
        return Err(Error::Inconsistent("reconstructed series does not reproduce the prefix".into()));
    }
    Ok(gf)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// A recurrence fits every computed term. Evidence from a finite prefix,
    /// not a proof of rationality.
    CertifiedRational,
    NoRecurrenceFound { max_order: usize, prefix_len: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PFractalReport {
    pub source: String,
    pub prefix: Vec<Rat>,
    pub max_order: usize,
    pub max_start: usize,
    pub certificate: Option<RecurrenceCertificate>,
    pub gf: Option<RationalGF>,
    pub verdict: Verdict,
}

impl PFractalReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedRational
    }
}

/// Recurrence search plus series reconstruction for an explicit prefix.
pub fn sequence_report(source: impl Into<String>, prefix: Vec<Rat>, max_order: usize, max_start: usize) -> Result<PFractalReport> {
    let certificate = detect_recurrence(&prefix, max_order, max_start)?;
    let gf = certificate.as_ref().map(|c| gf_of_certified(&prefix, c)).transpose()?;
    let verdict = match &certificate {
        Some(_) => Verdict::CertifiedRational,
        None => Verdict::NoRecurrenceFound {
            max_order,
            prefix_len: prefix.len(),
        },
    };
    Ok(PFractalReport {
        source: source.into(),
        prefix,
        max_order,
        max_start,
        certificate,
        gf,
        verdict,
    })
}

/// Search for a recurrence in `e_{s,n}(φ)`, `n = 0..=nmax`. Recurrences
/// may start anywhere that leaves at least `max_order + 1` equations.
pub fn weak_pfractal_report(phi: &PhiFunction, s: u32, nmax: usize, max_order: usize) -> Result<PFractalReport> {
    if nmax < 2 * max_order + 1 {
        return Err(Error::precondition(format!(
            "nmax = {nmax} is too small for max_order {max_order} (need at least {})",
            2 * max_order + 1
        )));
    }
    let prefix = e_sequence(phi, s, nmax as u32)?;
    let max_start = nmax - 2 * max_order;
    sequence_report(format!("e_{{{s},n}}({phi})"), prefix, max_order, max_start)
}

/// `lim_{z -> 1/p^d} (1 - p^d z) g(z)`.
pub fn multiplicity_from_series(g: &RationalGF, d: u32, p: u64) -> Result<Rat> {
    residue_limit(g, d, p)
}

/// Hilbert-Kunz function of the rational normal cone of degree `g`:
/// `((g+1)/2) p^(2n) + (-v^2 + v g - g + 1)/2` with `v = (p^n - 1) mod g`.
pub fn rnc_hk(g: u64, p: u64, n: u32) -> Result<Rat> {
    if g < 2 {
        return Err(Error::precondition("the cone degree g must be at least 2"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let gb = BigInt::from(g);
    let pn = BigInt::from(p).pow(n);
    let v: BigInt = (&pn - 1u32).mod_floor(&gb);
    let two = Rat::from_integer(2);
    let lead = Rat::from_integer(g + 1) / two.clone() * Rat::from_integer(&pn * &pn);
    let tail = Rat::from_integer(-&v * &v + &v * &gb - &gb + 1u32) / two;
    Ok(lead + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn rs(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_integer(x)).collect()
    }

    fn gf(num: &[i64], den: &[i64]) -> RationalGF {
        RationalGF::new(UniPoly::from_ints(num), UniPoly::from_ints(den)).unwrap()
    }

    fn r5_qp(p: u64) -> QuasiPolynomial {
        let m = 4;
        let a0: Vec<Rat> = (0..m)
            .map(|n| rnc_hk(5, p, n as u32).unwrap() - Rat::from_integer(3) * Rat::int_pow(p, 2 * n as u32))
            .collect();
        QuasiPolynomial::new(p, vec![a0, vec![Rat::zero()], rs(&[3])]).unwrap()
    }

    #[test]
    fn normalization() {
        let qp = QuasiPolynomial::new(2, vec![rs(&[1, 2, 1, 2]), rs(&[0, 0])]).unwrap();
        assert_eq!(qp.degree(), 0);
        assert_eq!(qp.table(0), &rs(&[1, 2])[..]);
        assert!(QuasiPolynomial::new(4, vec![rs(&[1])]).is_err());
        assert!(QuasiPolynomial::new(2, vec![vec![]]).is_err());
    }

    #[test]
    fn eval_examples() {
        let one = QuasiPolynomial::new(7, vec![rs(&[1])]).unwrap();
        assert!((0..5).all(|n| one.eval(n) == Rat::one()));
        assert_eq!(r5_qp(2).eval(1), Rat::from_integer(12));
        let qp = QuasiPolynomial::new(3, vec![rs(&[0, -1]), rs(&[1])]).unwrap();
        assert_eq!(qp.eval(3), Rat::from_integer(26));
    }

    #[test]
    fn series_examples() {
        let one = QuasiPolynomial::new(2, vec![rs(&[1])]).unwrap();
        assert_eq!(one.series(), gf(&[1], &[1, -1]));
        // p = 2: numerator 7z^3 + 10z^2 + 9z + 1 over (1-4z)(1+z^2)(1+z)
        let den = &(&UniPoly::from_ints(&[1, -4]) * &UniPoly::from_ints(&[1, 0, 1])) * &UniPoly::from_ints(&[1, 1]);
        let want = RationalGF::new(UniPoly::from_ints(&[1, 9, 10, 7]), den).unwrap();
        assert_eq!(r5_qp(2).series(), want);
        // p = g: the polynomial ((p+1)/2) p^(2n)
        for p in [3u64, 5, 7] {
            let lead = Rat::from_integer(p + 1) / Rat::from_integer(2);
            let qp = QuasiPolynomial::new(p, vec![rs(&[0]), rs(&[0]), vec![lead.clone()]]).unwrap();
            let want = RationalGF::new(UniPoly::constant(lead), UniPoly::one_minus(Rat::int_pow(p, 2))).unwrap();
            assert_eq!(qp.series(), want);
        }
    }

    #[test]
    fn r5_tables_at_p_two_and_nineteen() {
        assert_eq!(r5_qp(2).table(0), &rs(&[-2, 0, 1, 1])[..]);
        assert_eq!(r5_qp(19).table(0), &rs(&[-2, 1])[..]);
    }

    #[test]
    fn qp_of_series_examples() {
        let one = qp_of_series(&gf(&[1], &[1, -1]), 0, 1, 2).unwrap();
        assert_eq!(one, QuasiPolynomial::new(2, vec![rs(&[1])]).unwrap());
        let qp = r5_qp(2);
        assert_eq!(qp_of_series(&qp.series(), 2, 4, 2).unwrap(), qp);
        assert!(qp_of_series(&gf(&[1], &[1, -3]), 1, 1, 2).is_err());
        assert!(qp_of_series(&gf(&[1, 0, 1], &[1, -1]), 0, 1, 2).is_err());
    }

    #[test]
    fn recurrence_examples() {
        let geo: Vec<Rat> = (0..12).map(|n| Rat::int_pow(5, n)).collect();
        let c = detect_recurrence(&geo, 3, 2).unwrap().unwrap();
        assert_eq!((c.order, c.coeffs.clone(), c.start), (1, rs(&[5]), 0));

        let r3: Vec<Rat> = (0..14).map(|n| rnc_hk(3, 2, n).unwrap()).collect();
        assert_eq!(&r3[..6], &rs(&[1, 8, 31, 128, 511, 2048])[..]);
        let c = detect_recurrence(&r3, 4, 3).unwrap().unwrap();
        assert_eq!((c.order, c.coeffs.clone(), c.start), (3, rs(&[4, 1, -4]), 0));
        assert!(c.holds_on(&r3));

        let squares: Vec<Rat> = (0..200u32)
            .map(|n| {
                let r = (n as f64).sqrt().round() as u32;
                if r * r == n { Rat::one() } else { Rat::zero() }
            })
            .collect();
        assert_eq!(detect_recurrence(&squares, 10, 179).unwrap(), None);
        assert!(detect_recurrence(&squares, 10, 180).is_err());
    }

    #[test]
    fn late_start_is_found() {
        // 5, 0, then 2^n from n = 2
        let mut seq = rs(&[5, 0]);
        seq.extend((2..12).map(|n| Rat::int_pow(2, n)));
        let c = detect_recurrence(&seq, 2, 3).unwrap().unwrap();
        assert_eq!((c.order, c.start), (1, 2));
        let g = gf_of_certified(&seq, &c).unwrap();
        assert_eq!(g.expand(20).unwrap()[..12], seq[..]);
    }

    #[test]
    fn gf_of_certified_examples() {
        let ones = rs(&[1; 6]);
        let c = RecurrenceCertificate { order: 1, coeffs: rs(&[1]), start: 0, verified_len: 6 };
        assert_eq!(gf_of_certified(&ones, &c).unwrap(), gf(&[1], &[1, -1]));

        let r3: Vec<Rat> = (0..14).map(|n| rnc_hk(3, 2, n).unwrap()).collect();
        let c = detect_recurrence(&r3, 4, 3).unwrap().unwrap();
        let den = &UniPoly::from_ints(&[1, -4]) * &UniPoly::from_ints(&[1, 0, -1]);
        let want = RationalGF::new(UniPoly::from_ints(&[1, 4, -2]), den).unwrap();
        let got = gf_of_certified(&r3, &c).unwrap();
        assert_eq!(got, want);
        let a0: Vec<Rat> = (0..2).map(|n| r3[n].clone() - Rat::from_integer(2) * Rat::int_pow(4, n as u32)).collect();
        let qp = QuasiPolynomial::new(2, vec![a0, rs(&[0]), rs(&[2])]).unwrap();
        assert_eq!(qp.series(), got);

        let geo: Vec<Rat> = (0..6).map(|n| Rat::int_pow(3, n)).collect();
        let c = RecurrenceCertificate { order: 1, coeffs: rs(&[3]), start: 0, verified_len: 6 };
        assert_eq!(gf_of_certified(&geo, &c).unwrap(), gf(&[1], &[1, -3]));

        let bad = RecurrenceCertificate { order: 1, coeffs: rs(&[2]), start: 0, verified_len: 6 };
        assert!(gf_of_certified(&geo, &bad).is_err());
    }

    #[test]
    fn eventually_zero_has_order_zero() {
        let prefix = rs(&[3, 1, 0, 0, 0, 0, 0]);
        let cert = detect_recurrence(&prefix, 2, 2).unwrap().unwrap();
        assert_eq!((cert.order, cert.start), (0, 2));
        assert!(cert.coeffs.is_empty());
        assert_eq!(gf_of_certified(&prefix, &cert).unwrap(), gf(&[3, 1], &[1]));
        let zero = rs(&[0; 5]);
        let cert = detect_recurrence(&zero, 2, 0).unwrap().unwrap();
        assert_eq!((cert.order, cert.start), (0, 0));
        assert!(gf_of_certified(&zero, &cert).unwrap().is_zero());
    }

    #[test]
    fn multiplicity_examples() {
        for p in [2u64, 3, 5, 7] {
            let pp = Rat::from_integer(p);
            let g = RationalGF::new(
                UniPoly::constant((pp.clone() + Rat::one()) / Rat::from_integer(2)),
                UniPoly::new(vec![Rat::one(), -pp.clone() * pp]),
            )
            .unwrap();
            assert_eq!(multiplicity_from_series(&g, 2, p).unwrap(), Rat::from_integer(p + 1) / Rat::from_integer(2));
        }
        let qp = QuasiPolynomial::new(3, vec![rs(&[0]), rs(&[2, 4])]).unwrap();
        assert_eq!(multiplicity_from_series(&qp.series(), 1, 3).unwrap(), Rat::from_integer(3));
        assert_eq!(qp.leading_mean(), Rat::from_integer(3));
        assert_eq!(multiplicity_from_series(&gf(&[1], &[1, -1]), 1, 2).unwrap(), Rat::zero());
    }

    #[test]
    fn rnc_at_p_equal_g_is_polynomial_only_from_n_one() {
        // the closed form gives HK(0) = 1 while ((p+1)/2) p^(2n) gives 3
        assert_eq!(rnc_hk(5, 5, 0).unwrap(), Rat::one());
        for n in 1..6 {
            assert_eq!(rnc_hk(5, 5, n).unwrap(), Rat::from_integer(3) * Rat::int_pow(25, n));
        }
        let prefix: Vec<Rat> = (0..8).map(|n| rnc_hk(5, 5, n).unwrap()).collect();
        let fit = fit_quasi_polynomial(&prefix, 5, 2, 1, 1).unwrap();
        assert_eq!(fit.offset, 1);
        assert_eq!(multiplicity_from_series(&fit.series(), 2, 5).unwrap(), Rat::from_integer(3));
    }

    #[test]
    fn rnc_examples() {
        assert_eq!(rnc_hk(3, 2, 2).unwrap(), Rat::from_integer(31));
        assert_eq!(rnc_hk(7, 2, 1).unwrap(), Rat::from_integer(16));
        assert_eq!(rnc_hk(5, 5, 1).unwrap(), Rat::from_integer(75));
        for g in [2u64, 3, 5, 7] {
            assert_eq!(rnc_hk(g, 2, 0).unwrap(), Rat::one());
        }
        assert!(rnc_hk(1, 2, 0).is_err());
    }

    #[test]
    fn fit_with_offset() {
        let hk = rs(&[1, 4, 12, 28, 60]);
        assert!(fit_quasi_polynomial(&hk, 2, 1, 1, 0).is_err());
        let fit = fit_quasi_polynomial(&hk, 2, 1, 1, 1).unwrap();
        assert_eq!(fit.offset, 1);
        assert_eq!(fit.qp, QuasiPolynomial::new(2, vec![rs(&[-4]), rs(&[4])]).unwrap());
        assert_eq!(fit.verified_terms, 2);
        assert_eq!(fit.series().expand(5).unwrap(), hk);
        assert_eq!(multiplicity_from_series(&fit.series(), 1, 2).unwrap(), Rat::from_integer(4));
        assert_eq!(fit.eval(0), Rat::one());
        assert_eq!(fit.eval(5), Rat::from_integer(124));
    }

    #[test]
    fn report_json_shape() {
        let geo: Vec<Rat> = (0..6).map(|n| Rat::int_pow(2, n)).collect();
        let rep = sequence_report("geo", geo, 2, 1).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["verdict"]["kind"], "certified-rational");
        assert_eq!(json["gf"]["den"], serde_json::json!(["-1", "2"]));
        assert_eq!(r("1/2"), Rat::new(1, 2).unwrap());
    }

    #[test]
    fn qp_json_round_trip() {
        let qp = r5_qp(2);
        let text = serde_json::to_string(&qp).unwrap();
        let back: QuasiPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, qp);
        let bad = r#"{"p": 2, "d": 3, "tables": [["1"]]}"#;
        assert!(serde_json::from_str::<QuasiPolynomial>(bad).is_err());
    }
}
