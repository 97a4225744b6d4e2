use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{Rat, UniPoly};
use crate::error::{Error, Result};

/// A rational function `num / den` in canonical form.
///
/// Canonical means `num` and `den` are coprime and `den` is a primitive
/// integer polynomial with positive leading coefficient; the zero function
/// is `0 / 1`. Two rational functions are equal iff their canonical forms
/// are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RationalGF {
    num: UniPoly,
    den: UniPoly,
}

impl RationalGF {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalGF::zero());
        }
        let g = num.gcd(&den)?;
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let (den, factor) = den.primitive_part();
        Ok(RationalGF {
            num: num.scale(&factor),
            den,
        })
    }

    pub fn zero() -> Self {
        RationalGF {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RationalGF::new(p, UniPoly::one()).expect("unit denominator")
    }

    /// `1 / (1 - delta z)`, the series of `delta^n`.
    pub fn geometric(delta: Rat) -> Self {
        RationalGF::new(UniPoly::one(), UniPoly::one_minus(delta)).expect("nonzero denominator")
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value at a point that is not a pole.
    pub fn eval(&self, z: &Rat) -> Result<Rat> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::precondition(format!("{z} is a pole")));
        }
        Ok(self.num.eval(z) / d)
    }

    /// First `n` Taylor coefficients at `z = 0`.
    pub fn expand(&self, n: usize) -> Result<Vec<Rat>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::precondition(
                "rational function has a pole at 0 and no power series expansion",
            ));
        }
        let inv = d0.recip()?;
        let den = self.den.coeffs();
        let mut out: Vec<Rat> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.num.coeff(k);
            for (j, dj) in den.iter().enumerate().skip(1).take(k) {
                if !dj.is_zero() {
                    acc -= dj * &out[k - j];
                }
            }
            out.push(acc * &inv);
        }
        Ok(out)
    }
}

impl Add<&RationalGF> for &RationalGF {
    type Output = RationalGF;
    fn add(self, rhs: &RationalGF) -> RationalGF {
        RationalGF::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
        .expect("product of nonzero denominators")
    }
}

impl Sub<&RationalGF> for &RationalGF {
    type Output = RationalGF;
    fn sub(self, rhs: &RationalGF) -> RationalGF {
        self + &(-rhs)
    }
}

impl Mul<&RationalGF> for &RationalGF {
    type Output = RationalGF;
    fn mul(self, rhs: &RationalGF) -> RationalGF {
        RationalGF::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Neg for &RationalGF {
    type Output = RationalGF;
    fn neg(self) -> RationalGF {
        RationalGF {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for RationalGF {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: UniPoly,
            den: UniPoly,
        }
        let raw = Raw::deserialize(d)?;
        RationalGF::new(raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}

/// Decompose `g = sum a_i / (1 - delta_i z)`, returning `(a_i, delta_i)` by
/// increasing `delta_i`.
///
/// The denominator must split over the rationals into distinct factors
/// `1 - delta z` with `delta != 0`, and the fraction must be proper.
pub fn partial_fractions(g: &RationalGF) -> Result<Vec<(Rat, Rat)>> {
    if g.is_zero() {
        return Ok(Vec::new());
    }
    let dn = g.num().degree().unwrap_or(0);
    let dd = g.den().degree().unwrap_or(0);
    if dn >= dd {
        return Err(Error::precondition("partial fractions need deg num < deg den"));
    }
    if g.den().coeff(0).is_zero() {
        return Err(Error::precondition("denominator vanishes at z = 0"));
    }
    let roots = super::roots::rational_roots(g.den())?;
    if roots.len() != dd {
        return Err(Error::precondition(
            "denominator has repeated or irrational roots",
        ));
    }
    let mut deltas: Vec<Rat> = roots.iter().map(|r| r.recip().expect("nonzero root")).collect();
    deltas.sort();
    let mut out = Vec::with_capacity(deltas.len());
    for (i, di) in deltas.iter().enumerate() {
        // a_i = num(1/d_i) * den(0) / prod_{k != i} (1 - d_k / d_i), using
        // den = den(0) * prod (1 - d_k z).
        let at = di.recip()?;
        let mut denom = Rat::one();
        for (k, dk) in deltas.iter().enumerate() {
            if k != i {
                denom *= &(Rat::one() - dk / di);
            }
        }
        let a = g.num().eval(&at) / (g.den().coeff(0) * denom);
        out.push((a, di.clone()));
    }
    Ok(out)
}

/// `lim_{z -> 1/p^d} (1 - p^d z) g(z)`.
///
/// Zero when `1/p^d` is not a pole; fails when it is a pole of order two or
/// more.
pub fn residue_limit(g: &RationalGF, d: u32, p: u64) -> Result<Rat> {
    let scale = Rat::int_pow(p, d);
    let z0 = scale.recip()?;
    if !g.den().eval(&z0).is_zero() {
        return Ok(Rat::zero());
    }
    let linear = UniPoly::new(vec![-z0.clone(), Rat::one()]);
    let rest = g.den().div_exact(&linear)?;
    let rest_at = rest.eval(&z0);
    if rest_at.is_zero() {
        return Err(Error::precondition(format!(
            "1/{p}^{d} is a pole of order at least two"
        )));
    }
    // (1 - p^d z) = -p^d (z - z0)
    Ok(-(scale * g.num().eval(&z0)) / rest_at)
}

impl RationalGF {
    pub fn is_proper(&self) -> bool {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => true,
            (Some(a), Some(b)) => a < b,
            (Some(_), None) => false,
        }
    }

    /// Whether `z` is a pole. In canonical form every root of `den` is one.
    pub fn has_pole_at(&self, z: &Rat) -> bool {
        self.den.eval(z).is_zero()
    }
}

impl Default for RationalGF {
    fn default() -> Self {
        RationalGF::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn canonical_equality() {
        let a = RationalGF::new(p(&[2, 2]), p(&[2, 0, -2])).unwrap();
        let b = RationalGF::new(p(&[1]), p(&[1, -1])).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.den(), &p(&[-1, 1]));
        assert_eq!(b.num(), &p(&[-1]));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalGF::new(p(&[1]), UniPoly::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn expand_geometric() {
        let g = RationalGF::geometric(Rat::from(3));
        assert_eq!(g.expand(4).unwrap(), vec![1, 3, 9, 27].into_iter().map(Rat::from).collect::<Vec<_>>());
    }

    #[test]
    fn partial_fractions_two_poles() {
        let g = RationalGF::new(p(&[1]), &p(&[1, -1]) * &p(&[1, -2])).unwrap();
        let pf = partial_fractions(&g).unwrap();
        assert_eq!(pf, vec![(Rat::from(-1), Rat::from(1)), (Rat::from(2), Rat::from(2))]);
        // recombination oracle
        let back = pf.iter().fold(RationalGF::zero(), |acc, (a, d)| {
            &acc + &RationalGF::new(UniPoly::constant(a.clone()), UniPoly::one_minus(d.clone())).unwrap()
        });
        assert_eq!(back, g);
    }

    #[test]
    fn partial_fractions_single_and_zero() {
        let g = RationalGF::new(p(&[3]), p(&[1, -25])).unwrap();
        assert_eq!(partial_fractions(&g).unwrap(), vec![(Rat::from(3), Rat::from(25))]);
        let z = RationalGF::new(UniPoly::zero(), p(&[1, -1])).unwrap();
        assert!(partial_fractions(&z).unwrap().is_empty());
    }

    #[test]
    fn partial_fractions_errors() {
        // repeated root
        let g = RationalGF::new(p(&[1]), p(&[1, -2, 1])).unwrap();
        assert!(partial_fractions(&g).is_err());
        // irrational roots
        let g = RationalGF::new(p(&[1]), p(&[1, 0, -2])).unwrap();
        assert!(partial_fractions(&g).is_err());
        // improper
        let g = RationalGF::new(p(&[0, 1]), p(&[1, -2])).unwrap();
        assert!(partial_fractions(&g).is_err());
    }

    #[test]
    fn residue_examples() {
        for prime in [2u64, 3, 5, 7] {
            let half = r((prime as i64) + 1, 2);
            let g = RationalGF::new(UniPoly::constant(half.clone()), UniPoly::one_minus(Rat::int_pow(prime, 2))).unwrap();
            assert_eq!(residue_limit(&g, 2, prime).unwrap(), half);
        }
        let g = RationalGF::geometric(Rat::one());
        assert_eq!(residue_limit(&g, 0, 7).unwrap(), Rat::one());
        assert_eq!(residue_limit(&g, 1, 2).unwrap(), Rat::zero());
        let double = RationalGF::new(p(&[1]), &p(&[1, -2]) * &p(&[1, -2])).unwrap();
        assert!(residue_limit(&double, 1, 2).is_err());
    }
}
