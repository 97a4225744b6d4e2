//! Exact rational arithmetic: rationals, dense polynomials in `z`, rational
//! generating functions, cyclotomic polynomials, partial fractions and
//! residues.

mod cyclotomic;
pub mod numtheory;
mod rat;
mod ratfunc;
mod roots;
mod unipoly;

pub use cyclotomic::cyclotomic;
pub use rat::Rat;
pub use ratfunc::{partial_fractions, residue_limit, RationalGF};
pub use roots::rational_roots;
pub use unipoly::UniPoly;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivRem,
    Gcd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyOpResult {
    Single(UniPoly),
    Pair(UniPoly, UniPoly),
}

/// Dispatching form of the polynomial operations.
pub fn poly_arith(a: &UniPoly, b: &UniPoly, op: PolyOp) -> Result<PolyOpResult> {
    Ok(match op {
        PolyOp::Add => PolyOpResult::Single(a + b),
        PolyOp::Sub => PolyOpResult::Single(a - b),
        PolyOp::Mul => PolyOpResult::Single(a * b),
        PolyOp::DivRem => {
            let (q, r) = a.divrem(b)?;
            PolyOpResult::Pair(q, r)
        }
        PolyOp::Gcd => PolyOpResult::Single(a.gcd(b)?),
    })
}
