//! Cancellation in the series of `e_n = a_d p^(d n) + a_0(n)` with `a_0` of
//! period `M`: which cyclotomic factors of `1 - z^M` divide the numerator,
//! and the linear spaces `S_M` and `V_l` of tables that produce them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::numtheory::{divisors, factorize, is_prime, totient};
use crate::exact_arith::{cyclotomic, Rat, RationalGF, UniPoly};

/// `e_n = a_d p^(d n) + a_0(n mod M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CancellationInput {
    p: u64,
    d: u32,
    a_d: Rat,
    a0: Vec<Rat>,
}

impl CancellationInput {
    /// The table is used with the period it is given, without reducing it.
    pub fn new(p: u64, d: u32, a_d: Rat, a0: Vec<Rat>) -> Result<CancellationInput> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 {
            return Err(Error::precondition("d must be positive"));
        }
        if a_d.is_zero() {
            return Err(Error::precondition("a_d must be nonzero"));
        }
        if a0.is_empty() {
            return Err(Error::precondition("a_0 table must be nonempty"));
        }
        Ok(CancellationInput { p, d, a_d, a0 })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn leading(&self) -> &Rat {
        &self.a_d
    }

    pub fn table(&self) -> &[Rat] {
        &self.a0
    }

    pub fn period(&self) -> usize {
        self.a0.len()
    }

    pub fn eval(&self, n: usize) -> Rat {
        self.a_d.clone() * Rat::int_pow(self.p, self.d * n as u32) + self.a0[n % self.a0.len()].clone()
    }

    fn pd(&self) -> Rat {
        Rat::int_pow(self.p, self.d)
    }
}

/// Numerator and denominator of `a_d/(1 - p^d z) + (Σ a_0(i) z^i)/(1 - z^M)`
/// over the common denominator `(1 - p^d z)(1 - z^M)`.
pub fn build_pq(inp: &CancellationInput) -> (UniPoly, UniPoly) {
    let m = inp.period();
    let pd = inp.pd();
    let a0 = &inp.a0;
    let mut coeffs = vec![Rat::zero(); m + 1];
    coeffs[0] = inp.a_d.clone() + a0[0].clone();
    for i in 1..m {
        coeffs[i] = a0[i].clone() - pd.clone() * a0[i - 1].clone();
    }
    coeffs[m] = -inp.a_d.clone() - pd.clone() * a0[m - 1].clone();
    let q = &UniPoly::one_minus(pd) * &(UniPoly::one() - UniPoly::monomial(Rat::one(), m));
    (UniPoly::new(coeffs), q)
}

/// Whether `P(1/p^d) != 0`.
pub fn check_pd_not_root(inp: &CancellationInput) -> bool {
    let (p, _) = build_pq(inp);
    let z = inp.pd().recip().expect("p^d is nonzero");
    !p.eval(&z).is_zero()
}

/// The condition `P(ζ_M) = 0` as a linear system in `a_0(0..M)`, written in
/// the basis `1, ζ, ..., ζ^(φ(M)-1)` of `Q(ζ_M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SMSystem {
    pub m: usize,
    pub p: u64,
    pub d: u32,
    /// `φ(M)` rows, `M` columns.
    pub matrix: Vec<Vec<Rat>>,
    /// `Φ_M(X) = X^φ(M) - Σ b_i X^i`.
    pub cyclotomic_coeffs: Vec<Rat>,
}

impl SMSystem {
    pub fn rank(&self) -> usize {
        rank(&self.matrix)
    }

    /// Whether the table is a solution.
    pub fn is_solution(&self, table: &[Rat]) -> bool {
        table.len() == self.m
            && self.matrix.iter().all(|row| {
                row.iter()
                    .zip(table)
                    .map(|(a, x)| a.clone() * x.clone())
                    .sum::<Rat>()
                    .is_zero()
            })
    }
}

/// Coordinates of `ζ^e`, `e = 0..count`, in the power basis of `Q(ζ_M)`.
fn zeta_powers(b: &[Rat], count: usize) -> Vec<Vec<Rat>> {
    let phi = b.len();
    let mut out = Vec::with_capacity(count);
    let mut cur = vec![Rat::zero(); phi];
    cur[0] = Rat::one();
    for _ in 0..count {
        out.push(cur.clone());
        // multiply by ζ, then rewrite ζ^φ = Σ b_i ζ^i
        let top = cur[phi - 1].clone();
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = Rat::zero();
        if !top.is_zero() {
            for (c, bi) in cur.iter_mut().zip(b) {
                *c += top.clone() * bi.clone();
            }
        }
    }
    out
}

pub fn sm_system(m: usize, p: u64, d: u32) -> Result<SMSystem> {
    if m == 0 {
        return Err(Error::precondition("M must be positive"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d == 0 {
        return Err(Error::precondition("d must be positive"));
    }
    let phi_m = cyclotomic(m as u64);
    let deg = phi_m.degree().expect("cyclotomic polynomials are nonzero");
    let b: Vec<Rat> = (0..deg).map(|i| -phi_m.coeff(i)).collect();
    let powers = zeta_powers(&b, m);
    let pd = Rat::int_pow(p, d);
    let mut matrix = vec![vec![Rat::zero(); m]; deg];
    for k in 0..m {
        // column k: ζ^k - p^d ζ^(k+1)
        let next = &powers[(k + 1) % m];
        for (r, row) in matrix.iter_mut().enumerate() {
            row[k] = powers[k][r].clone() - pd.clone() * next[r].clone();
        }
    }
    Ok(SMSystem {
        m,
        p,
        d,
        matrix,
        cyclotomic_coeffs: b,
    })
}

/// `dim S_M = M - rank`. Fails if the rank differs from `φ(M)`.
pub fn sm_dimension(m: usize, p: u64, d: u32) -> Result<usize> {
    let sys = sm_system(m, p, d)?;
    let r = sys.rank();
    let phi = totient(m as u64) as usize;
    if r != phi {
        return Err(Error::Inconsistent(format!("rank of the S_{m} system is {r}, expected φ({m}) = {phi}")));
    }
    Ok(m - r)
}

/// Basis of the `l`-periodic tables of length `M`.
pub fn vl_basis(m: usize, l: usize) -> Result<Vec<Vec<Rat>>> {
    if l == 0 || !m.is_multiple_of(l) || l == m {
        return Err(Error::precondition(format!("{l} is not a proper divisor of {m}")));
    }
    Ok((0..l)
        .map(|r| {
            (0..m)
                .map(|i| if i % l == r { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect())
}

fn proper_divisors(m: usize) -> Vec<usize> {
    divisors(m as u64)
        .into_iter()
        .map(|x| x as usize)
        .filter(|&l| l != m)
        .collect()
}

/// `dim Σ_{l | M, l != M} V_l`.
pub fn vl_sum_dimension(m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::precondition("M must be positive"));
    }
    let mut rows = Vec::new();
    for l in proper_divisors(m) {
        rows.extend(vl_basis(m, l)?);
    }
    Ok(rank(&rows))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuestionStatus {
    /// `M` has at most two distinct prime factors, where equality is known.
    Known,
    /// Three or more distinct prime factors: the comparison is only an
    /// observation.
    Observation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuestionRecord {
    pub m: usize,
    pub p: u64,
    pub d: u32,
    pub sm_dim: usize,
    pub vl_dim: usize,
    pub containment_ok: bool,
    pub equal: bool,
    pub distinct_primes: usize,
    pub status: QuestionStatus,
}

/// Compare `dim S_M` with `dim Σ V_l` and check `V_l ⊆ S_M`.
pub fn question_check(m: usize, p: u64, d: u32) -> Result<QuestionRecord> {
    if m < 2 {
        return Err(Error::precondition("M must be at least 2"));
    }
    let sys = sm_system(m, p, d)?;
    let sm_dim = sm_dimension(m, p, d)?;
    let vl_dim = vl_sum_dimension(m)?;
    let mut containment_ok = true;
    for l in proper_divisors(m) {
        containment_ok &= vl_basis(m, l)?.iter().all(|v| sys.is_solution(v));
    }
    if !containment_ok {
        return Err(Error::Inconsistent(format!("some V_l is not contained in S_{m}")));
    }
    let distinct_primes = factorize(m as u64).len();
    Ok(QuestionRecord {
        m,
        p,
        d,
        sm_dim,
        vl_dim,
        containment_ok,
        equal: sm_dim == vl_dim,
        distinct_primes,
        status: if distinct_primes <= 2 {
            QuestionStatus::Known
        } else {
            QuestionStatus::Observation
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CancellationReport {
    #[serde(rename = "P")]
    pub p_poly: UniPoly,
    #[serde(rename = "Q")]
    pub q_poly: UniPoly,
    pub pd_root_check: bool,
    /// Divisors `k` of `M` with `Φ_k | P`.
    pub dividing_cyclotomics: Vec<u64>,
    pub simplified: RationalGF,
}

pub fn cancellation_analyze(inp: &CancellationInput) -> Result<CancellationReport> {
    let (p_poly, q_poly) = build_pq(inp);
    let mut dividing = Vec::new();
    for k in divisors(inp.period() as u64) {
        if cyclotomic(k).divides(&p_poly)? {
            dividing.push(k);
        }
    }
    let simplified = RationalGF::new(p_poly.clone(), q_poly.clone())?;
    Ok(CancellationReport {
        pd_root_check: check_pd_not_root(inp),
        p_poly,
        q_poly,
        dividing_cyclotomics: dividing,
        simplified,
    })
}

/// Rank over `Q` by Gaussian elimination.
fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip().expect("nonzero pivot");
        let pivot = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = row[c].clone() * inv.clone();
                for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                    *x -= f.clone() * y.clone();
                }
            }
        }
        r += 1;
    }
    r
}
