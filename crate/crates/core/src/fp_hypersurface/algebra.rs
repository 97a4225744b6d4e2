use super::poly::Monomial;
use crate::error::{Error, Result};
use crate::exact_arith::numtheory::is_prime;

/// Default cap on `p^(s n)`, the dimension of the truncated algebra.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

/// The algebra `F_p[x_1..x_s] / (x_1^q, ..., x_s^q)` with `q = p^n`, with
/// its monomial basis in graded-lexicographic order.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    p: u64,
    s: usize,
    n: u32,
    q: u64,
    basis: Vec<Monomial>,
    /// Mixed-radix code of a monomial (base `q`) -> position in `basis`.
    position: Vec<u32>,
}

/// Dimension `p^(s n)`, or `None` on overflow.
pub fn algebra_dimension(p: u64, s: usize, n: u32) -> Option<u128> {
    (p as u128).checked_pow(n.checked_mul(s as u32)?)
}

impl TruncatedAlgebra {
    pub fn new(p: u64, s: usize, n: u32, budget: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::precondition("the algebra needs at least one variable"));
        }
        let dim = algebra_dimension(p, s, n).unwrap_or(u128::MAX);
        if dim > budget as u128 {
            return Err(Error::Budget {
                dimension: dim,
                budget,
            });
        }
        let q = p.pow(n);
        let dim = dim as usize;
        let mut basis: Vec<Monomial> = (0..dim)
            .map(|mut code| {
                let mut m = vec![0u32; s];
                for e in m.iter_mut() {
                    *e = (code as u64 % q) as u32;
                    code /= q as usize;
                }
                m
            })
            .collect();
        basis.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let mut position = vec![0u32; dim];
        for (i, m) in basis.iter().enumerate() {
            position[code_of(m, q)] = i as u32;
        }
        Ok(TruncatedAlgebra {
            p,
            s,
            n,
            q,
            basis,
            position,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.s
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    /// `q = p^n`, the exponent bound.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Graded-lex position of a monomial with all exponents below `q`.
    pub fn index_of(&self, m: &[u32]) -> usize {
        self.position[code_of(m, self.q)] as usize
    }

    pub(crate) fn position_by_code(&self, code: usize) -> u32 {
        self.position[code]
    }
}

pub(crate) fn code_of(m: &[u32], q: u64) -> usize {
    m.iter()
        .rev()
        .fold(0usize, |acc, &e| acc * q as usize + e as usize)
}
