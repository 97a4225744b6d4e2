//! Polynomials over `F_p` modulo Frobenius powers of the maximal ideal, and
//! the colength `dim_k A / (x_1^q, ..., x_s^q, f^a)` with `q = p^n`.

mod algebra;
mod lattice;
mod parse;
mod poly;
pub mod rank;

use std::collections::BTreeMap;

use rayon::prelude::*;

pub use algebra::{algebra_dimension, TruncatedAlgebra, DEFAULT_BUDGET};
pub use parse::{parse_var_list, ParsedPoly, Var};
pub use poly::{FpPoly, Monomial};
pub use rank::RankBackend;

use crate::error::{Error, Result};
use algebra::code_of;
use rank::SparseRow;

/// Knobs for colength computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColengthConfig {
    /// Largest admissible dimension `p^(s n)` of the truncated algebra.
    pub budget: u64,
    pub backend: RankBackend,
}

impl Default for ColengthConfig {
    fn default() -> Self {
        ColengthConfig {
            budget: DEFAULT_BUDGET,
            backend: RankBackend::Auto,
        }
    }
}

impl ColengthConfig {
    pub fn with_budget(budget: u64) -> Self {
        ColengthConfig {
            budget,
            ..Default::default()
        }
    }
}

/// Rank over `F_p` of multiplication by `g` on the truncated algebra.
pub fn mult_rank(g: &FpPoly, alg: &TruncatedAlgebra) -> Result<usize> {
    mult_rank_with(g, alg, RankBackend::Auto)
}

/// [`mult_rank`] with an explicit elimination backend.
///
/// The map preserves cosets of the lattice spanned by differences of the
/// exponents of `g`, so it splits into independent blocks; each block is
/// ranked separately (in parallel).
pub fn mult_rank_with(g: &FpPoly, alg: &TruncatedAlgebra, backend: RankBackend) -> Result<usize> {
    if g.characteristic() != alg.characteristic() || g.nvars() != alg.nvars() {
        return Err(Error::precondition("polynomial and algebra live over different rings"));
    }
    let q = alg.q();
    if !g.is_reduced_below(q) {
        return Err(Error::precondition("multiplier must be truncated modulo the Frobenius power"));
    }
    if g.is_zero() {
        return Ok(0);
    }
    let support: Vec<(Vec<u32>, u32)> = g.terms().map(|(m, c)| (m.clone(), c)).collect();
    let lat = lattice::Lattice::from_differences(support.iter().map(|(m, _)| m.as_slice()));

    let mut blocks: BTreeMap<Vec<i64>, Vec<u32>> = BTreeMap::new();
    for (i, m) in alg.basis().iter().enumerate() {
        blocks.entry(lat.reduce(m)).or_default().push(i as u32);
    }

    let p = alg.characteristic();
    let qs = q as usize;
    let term_codes: Vec<(usize, &[u32], u32)> = support
        .iter()
        .map(|(m, c)| (code_of(m, q), m.as_slice(), *c))
        .collect();

    let rank_of_block = |sources: &Vec<u32>| -> usize {
        let mut rows: Vec<SparseRow> = Vec::with_capacity(sources.len());
        let mut cols: Vec<u32> = Vec::new();
        for &src in sources {
            let m = &alg.basis()[src as usize];
            let base = code_of(m, q);
            let mut row: SparseRow = Vec::with_capacity(term_codes.len());
            for &(tc, t, c) in &term_codes {
                if m.iter().zip(t).all(|(a, b)| (*a as usize + *b as usize) < qs) {
                    let idx = alg.position_by_code(base + tc);
                    row.push((idx, c));
                }
            }
            row.sort_unstable_by_key(|e| e.0);
            cols.extend(row.iter().map(|e| e.0));
            rows.push(row);
        }
        cols.sort_unstable();
        cols.dedup();
        for row in rows.iter_mut() {
            for e in row.iter_mut() {
                e.0 = cols.binary_search(&e.0).expect("column present") as u32;
            }
        }
        rank::rank(&mut rows, cols.len(), p, backend)
    };

    let blocks: Vec<Vec<u32>> = blocks.into_values().collect();
    Ok(blocks.par_iter().map(rank_of_block).sum())
}

/// `dim_k A / (x_1^(p^n), ..., x_s^(p^n), f^a)` with the default budget.
pub fn colength(f: &FpPoly, a: u64, n: u32) -> Result<u64> {
    colength_with(f, a, n, &ColengthConfig::default())
}

pub fn colength_with(f: &FpPoly, a: u64, n: u32, cfg: &ColengthConfig) -> Result<u64> {
    check_in_maximal_ideal(f)?;
    let alg = TruncatedAlgebra::new(f.characteristic(), f.nvars(), n, cfg.budget)?;
    let dim = alg.dimension() as u64;
    if a == 0 {
        return Ok(0);
    }
    let g = f.power_mod(a, alg.q())?;
    let r = mult_rank_with(&g, &alg, cfg.backend)? as u64;
    Ok(dim - r)
}

/// Reject `f = 0` and `f` with a nonzero constant term.
pub fn check_in_maximal_ideal(f: &FpPoly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("f must be nonzero".into()));
    }
    if f.nvars() == 0 {
        return Err(Error::InvalidPolynomial("f must involve at least one variable".into()));
    }
    if f.constant_term() != 0 {
        return Err(Error::InvalidPolynomial(
            "f has a nonzero constant term, so it is not in the maximal ideal".into(),
        ));
    }
    Ok(())
}
