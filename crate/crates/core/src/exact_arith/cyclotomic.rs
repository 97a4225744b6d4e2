use std::collections::HashMap;

use super::numtheory::divisors;
use super::{Rat, UniPoly};

/// The `m`-th cyclotomic polynomial, obtained by dividing `z^m - 1` by
/// `Phi_d` for every proper divisor `d` of `m`.
///
/// # Panics
/// If `m == 0`.
pub fn cyclotomic(m: u64) -> UniPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut memo = HashMap::new();
    cyclotomic_memo(m, &mut memo)
}

fn cyclotomic_memo(m: u64, memo: &mut HashMap<u64, UniPoly>) -> UniPoly {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    let mut acc = &UniPoly::monomial(Rat::one(), m as usize) - &UniPoly::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let phi_d = cyclotomic_memo(d, memo);
        acc = acc.div_exact(&phi_d).expect("cyclotomic divisors divide z^m - 1");
    }
    memo.insert(m, acc.clone());
    acc
}
