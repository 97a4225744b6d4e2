use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::numtheory::divisors;
use super::{Rat, UniPoly};
use crate::error::{Error, Result};

/// Largest constant / leading coefficient whose divisors we enumerate.
const MAX_TRIAL: u64 = 1 << 40;

/// Distinct rational roots of `poly`, ascending, found with the rational
/// root test on its primitive integer form.
pub fn rational_roots(poly: &UniPoly) -> Result<Vec<Rat>> {
    if poly.is_zero() {
        return Err(Error::precondition("the zero polynomial has no finite root set"));
    }
    let (mut work, _) = poly.primitive_part();
    let mut roots = Vec::new();
    // Pull out z = 0 first so the constant term is nonzero.
    if work.coeff(0).is_zero() {
        roots.push(Rat::zero());
        while work.coeff(0).is_zero() {
            work = work.div_exact(&UniPoly::monomial(Rat::one(), 1))?;
        }
    }
    if work.degree() == Some(0) {
        return Ok(roots);
    }
    let to_u64 = |b: &BigInt| -> Result<u64> {
        b.abs()
            .to_u64()
            .filter(|&v| v <= MAX_TRIAL)
            .ok_or_else(|| Error::precondition("coefficients too large for the rational root test"))
    };
    let c0 = to_u64(work.coeff(0).numer())?;
    let lead = to_u64(work.leading().expect("nonzero").numer())?;
    let (ds0, dsl) = (divisors(c0), divisors(lead));
    let mut candidates = Vec::new();
    for &u in &ds0 {
        for &v in &dsl {
            let r = Rat::new(u, v)?;
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        if work.eval(&r).is_zero() {
            roots.push(r);
        }
    }
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        // (2z - 1)(z + 3) z
        let p = &(&UniPoly::from_ints(&[-1, 2]) * &UniPoly::from_ints(&[3, 1])) * &UniPoly::from_ints(&[0, 1]);
        assert_eq!(
            rational_roots(&p).unwrap(),
            vec![Rat::from(-3), Rat::zero(), Rat::new(1, 2).unwrap()]
        );
    }

    #[test]
    fn irrational_roots_absent() {
        assert!(rational_roots(&UniPoly::from_ints(&[-2, 0, 1])).unwrap().is_empty());
    }
}
