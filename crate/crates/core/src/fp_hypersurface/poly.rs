use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact_arith::numtheory::{digits, is_prime};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// Sparse polynomial over the prime field `F_p` in a fixed number of
/// variables. Only nonzero coefficients in `1..p` are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl FpPoly {
    pub fn zero(p: u64, nvars: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::precondition("characteristic too large"));
        }
        Ok(FpPoly {
            p,
            nvars,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(p: u64, nvars: usize) -> Result<Self> {
        let mut f = FpPoly::zero(p, nvars)?;
        f.terms.insert(vec![0; nvars], 1);
        Ok(f)
    }

    /// Build from integer coefficients, reducing modulo `p`; terms that
    /// reduce to zero are dropped and repeated monomials are combined.
    pub fn from_terms<I, C>(p: u64, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, Monomial)>,
        C: Into<BigInt>,
    {
        let mut f = FpPoly::zero(p, nvars)?;
        let pb = BigInt::from(p);
        for (c, m) in terms {
            if m.len() != nvars {
                return Err(Error::InvalidPolynomial(format!(
                    "exponent vector of length {} in a ring with {nvars} variables",
                    m.len()
                )));
            }
            let c: BigInt = c.into();
            let r = ((c % &pb) + &pb) % &pb;
            f.add_term(m, r.to_u64().expect("reduced coefficient") as u32);
        }
        Ok(f)
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(p: u64, nvars: usize, i: usize) -> Result<Self> {
        let mut m = vec![0; nvars];
        m[i] = 1;
        FpPoly::from_terms(p, nvars, [(1, m)])
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.p as u32;
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c % p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ((*o.get() as u64 + c as u64) % p as u64) as u32;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> u32 {
        self.terms.get(&vec![0; self.nvars]).copied().unwrap_or(0)
    }

    /// Lowest total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).min()
    }

    /// Whether every term has all exponents below `bound`.
    pub fn is_reduced_below(&self, bound: u64) -> bool {
        self.terms
            .keys()
            .all(|m| m.iter().all(|&e| (e as u64) < bound))
    }

    /// Check that `q` is a power `p^n` of the characteristic; returns `n`.
    pub fn frobenius_exponent(&self, q: u64) -> Result<u32> {
        let mut n = 0;
        let mut r = 1u64;
        while r < q {
            r = r.checked_mul(self.p).ok_or_else(|| Error::Overflow("p^n".into()))?;
            n += 1;
        }
        if r != q {
            return Err(Error::precondition(format!(
                "{q} is not a power of the characteristic {}",
                self.p
            )));
        }
        Ok(n)
    }

    /// Reduction modulo `(x_1^q, ..., x_s^q)`: drop every term with an
    /// exponent `>= q`.
    pub fn truncate(&self, q: u64) -> Result<FpPoly> {
        self.frobenius_exponent(q)?;
        Ok(self.truncate_below(q))
    }

    pub(crate) fn truncate_below(&self, bound: u64) -> FpPoly {
        FpPoly {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().all(|&e| (e as u64) < bound))
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Product with every exponent kept below `bound`.
    pub(crate) fn mul_truncated(&self, other: &FpPoly, bound: u64) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        debug_assert_eq!(self.nvars, other.nvars);
        let p = self.p;
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let mut m = Vec::with_capacity(self.nvars);
                let mut keep = true;
                for (x, y) in ma.iter().zip(mb) {
                    let e = x + y;
                    if e as u64 >= bound {
                        keep = false;
                        break;
                    }
                    m.push(e);
                }
                if keep {
                    let slot = acc.entry(m).or_insert(0);
                    *slot = (*slot + ca as u64 * cb as u64) % p;
                }
            }
        }
        FpPoly {
            p,
            nvars: self.nvars,
            terms: acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(m, c)| (m, c as u32))
                .collect(),
        }
    }

    /// Exact product, no truncation.
    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly> {
        if self.p != other.p || self.nvars != other.nvars {
            return Err(Error::precondition("multiplying polynomials from different rings"));
        }
        Ok(self.mul_truncated(other, u64::MAX))
    }

    /// Substitute `x_i -> x_i^(p^k)`, which equals the `p^k`-th power in
    /// characteristic `p`. Terms that land outside the box below `bound`
    /// are dropped.
    pub(crate) fn frobenius_scaled(&self, k: u32, bound: u64) -> FpPoly {
        let factor = match self.p.checked_pow(k) {
            Some(f) => f,
            None => {
                // Only a constant term can survive.
                let mut out = FpPoly {
                    p: self.p,
                    nvars: self.nvars,
                    terms: BTreeMap::new(),
                };
                let c = self.constant_term();
                if c != 0 && bound > 0 {
                    out.terms.insert(vec![0; self.nvars], c);
                }
                return out;
            }
        };
        FpPoly {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, &c)| {
                    let mut out = Vec::with_capacity(m.len());
                    for &e in m {
                        let s = (e as u64).checked_mul(factor)?;
                        if s >= bound {
                            return None;
                        }
                        out.push(s as u32);
                    }
                    Some((out, c))
                })
                .collect(),
        }
    }

    /// `f^a` modulo `(x_1^q, ..., x_s^q)`.
    ///
    /// Uses the base-`p` digits `a = sum a_i p^i`: each factor `f^(a_i p^i)`
    /// is `f^(a_i)` with exponents scaled by `p^i`, so only powers below `p`
    /// are ever multiplied out.
    pub fn power_mod(&self, a: u64, q: u64) -> Result<FpPoly> {
        self.frobenius_exponent(q)?;
        let mut result = FpPoly::one(self.p, self.nvars)?.truncate_below(q);
        if a == 0 {
            return Ok(result);
        }
        let base = self.truncate_below(q);
        let ds = digits(a, self.p);
        let max_digit = ds.iter().copied().max().unwrap_or(0) as usize;
        // powers[k] = f^k mod m^[q] for k <= max digit
        let mut powers = vec![FpPoly::one(self.p, self.nvars)?.truncate_below(q)];
        for k in 1..=max_digit {
            let next = powers[k - 1].mul_truncated(&base, q);
            powers.push(next);
        }
        for (i, &d) in ds.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let piece = powers[d as usize].frobenius_scaled(i as u32, q);
            result = result.mul_truncated(&piece, q);
            if result.is_zero() {
                break;
            }
        }
        Ok(result)
    }

    /// Re-home this polynomial in a ring with `nvars` variables, sending
    /// variable `i` to `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Result<FpPoly> {
        if positions.len() != self.nvars || positions.iter().any(|&i| i >= nvars) {
            return Err(Error::precondition("invalid variable embedding"));
        }
        let terms = self.terms.iter().map(|(m, &c)| {
            let mut out = vec![0; nvars];
            for (e, &pos) in m.iter().zip(positions) {
                out[pos] = *e;
            }
            (out, c)
        });
        let mut f = FpPoly::zero(self.p, nvars)?;
        for (m, c) in terms {
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// Indices of variables that occur with a positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .collect()
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if c != 1 || m.iter().all(|&e| e == 0) {
                factors.push(c.to_string());
            }
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{e}", i + 1)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(p={}, s={}: {})", self.p, self.nvars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodal(p: u64) -> FpPoly {
        FpPoly::from_terms(p, 3, [(1, vec![3, 0, 0]), (1, vec![0, 3, 0]), (1, vec![1, 1, 1])]).unwrap()
    }

    #[test]
    fn coefficients_reduced_mod_p() {
        let f = FpPoly::from_terms(3, 1, [(4, vec![1]), (-1, vec![2]), (3, vec![3])]).unwrap();
        let got: Vec<_> = f.terms().map(|(m, c)| (m.clone(), c)).collect();
        assert_eq!(got, vec![(vec![1], 1), (vec![2], 2)]);
        assert!(FpPoly::zero(4, 1).is_err());
    }

    #[test]
    fn truncate_examples() {
        let f = nodal(2);
        let t = f.truncate(2).unwrap();
        assert_eq!(t.terms().map(|(m, _)| m.clone()).collect::<Vec<_>>(), vec![vec![1, 1, 1]]);
        let x = FpPoly::var(2, 1, 0).unwrap();
        assert_eq!(x.truncate(4).unwrap(), x);
        let x2y2 = FpPoly::from_terms(2, 2, [(1, vec![2, 2])]).unwrap();
        assert!(x2y2.truncate(2).unwrap().is_zero());
        assert!(f.truncate(6).is_err());
    }

    #[test]
    fn power_zero_is_one() {
        let f = nodal(3);
        assert_eq!(f.power_mod(0, 9).unwrap(), FpPoly::one(3, 3).unwrap());
    }

    #[test]
    fn frobenius_square_in_char_two() {
        let f = FpPoly::from_terms(2, 2, [(1, vec![1, 0]), (1, vec![0, 1])]).unwrap();
        let sq = f.power_mod(2, 4).unwrap();
        let want = FpPoly::from_terms(2, 2, [(1, vec![2, 0]), (1, vec![0, 2])]).unwrap();
        assert_eq!(sq, want);
    }

    #[test]
    fn power_matches_naive_product() {
        for (p, q, a) in [(2u64, 4u64, 3u64), (2, 8, 7), (3, 9, 8), (3, 27, 13), (5, 25, 17)] {
            let f = nodal(p);
            let mut naive = FpPoly::one(p, 3).unwrap();
            for _ in 0..a {
                naive = naive.mul(&f).unwrap();
            }
            assert_eq!(f.power_mod(a, q).unwrap(), naive.truncate(q).unwrap(), "p={p} q={q} a={a}");
        }
    }

    #[test]
    fn embedding() {
        let x = FpPoly::var(2, 1, 0).unwrap();
        let e = x.embed(3, &[2]).unwrap();
        assert_eq!(e, FpPoly::var(2, 3, 2).unwrap());
        assert_eq!(e.support_vars(), vec![2]);
    }
}
