//! Functions on the `p`-adic rationals of `[0, 1]`: the normalized colength
//! function of a hypersurface and the algebra generated from it by sums,
//! products, reflection and the shift operators `T_{p^n|b}`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_arith::numtheory::{checked_pow, is_prime};
use crate::exact_arith::Rat;
use crate::fp_hypersurface::{check_in_maximal_ideal, colength_with, ColengthConfig, FpPoly};

fn pow_or_overflow(p: u64, n: u32) -> Result<u64> {
    checked_pow(p, n).ok_or_else(|| Error::Overflow(format!("{p}^{n} does not fit in 64 bits")))
}

/// The point `a / p^n` of `[0, 1]`, stored in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicPoint {
    a: BigUint,
    n: u32,
    p: u64,
}

impl DyadicPoint {
    pub fn new(a: impl Into<BigUint>, n: u32, p: u64) -> Result<DyadicPoint> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut a: BigUint = a.into();
        if a > BigUint::from(p).pow(n) {
            return Err(Error::precondition(format!("{a}/{p}^{n} lies outside [0, 1]")));
        }
        let mut n = n;
        let pb = BigUint::from(p);
        while n > 0 && (&a % &pb).is_zero() {
            a /= &pb;
            n -= 1;
        }
        Ok(DyadicPoint { a, n, p })
    }

    pub fn zero(p: u64) -> Result<DyadicPoint> {
        DyadicPoint::new(0u32, 0, p)
    }

    pub fn one(p: u64) -> Result<DyadicPoint> {
        DyadicPoint::new(1u32, 0, p)
    }

    /// Parse `"3/8"`, `"3/2^3"`, `"0"` or `"1"`. The denominator must be a
    /// power of `p`.
    pub fn parse(text: &str, p: u64) -> Result<DyadicPoint> {
        let text = text.trim();
        let bad = || Error::Parse(format!("bad dyadic point {text:?} for p = {p}"));
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (text, "1"),
        };
        let a: BigUint = num.parse().map_err(|_| bad())?;
        let n = match den.split_once('^') {
            Some((base, exp)) => {
                if base.trim().parse::<u64>().map_err(|_| bad())? != p {
                    return Err(bad());
                }
                exp.trim().parse::<u32>().map_err(|_| bad())?
            }
            None => {
                let mut d: u64 = den.parse().map_err(|_| bad())?;
                let mut n = 0;
                while d > 1 && d.is_multiple_of(p) {
                    d /= p;
                    n += 1;
                }
                if d != 1 {
                    return Err(bad());
                }
                n
            }
        };
        DyadicPoint::new(a, n, p)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.a
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> Rat {
        Rat::from_integer(num_bigint::BigInt::from(self.a.clone())) / Rat::int_pow(self.p, self.n)
    }

    /// `1 - t`.
    pub fn complement(&self) -> DyadicPoint {
        let q = BigUint::from(self.p).pow(self.n);
        DyadicPoint::new(q - &self.a, self.n, self.p).expect("in range")
    }
}

impl fmt::Display for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, BigUint::from(self.p).pow(self.n))
        }
    }
}

type CustomFn = dyn Fn(&DyadicPoint) -> Result<Rat> + Send + Sync;

enum Kind {
    Hypersurface { f: FpPoly, config: ColengthConfig },
    Sum(PhiFunction, PhiFunction),
    Product(PhiFunction, PhiFunction),
    Scalar(Rat, PhiFunction),
    Reflection(PhiFunction),
    Shift { n: u32, b: u64, inner: PhiFunction },
    Constant(Rat),
    Custom { label: String, eval: Box<CustomFn> },
}

struct Node {
    p: u64,
    kind: Kind,
    cache: RwLock<HashMap<DyadicPoint, Rat>>,
}

/// A lazily evaluated function on `{a / p^n} ∩ [0, 1]` with exact rational
/// values. Cloning is cheap and clones share the value cache.
#[derive(Clone)]
pub struct PhiFunction(Arc<Node>);

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhiFunction({self})")
    }
}

impl fmt::Display for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Hypersurface { f: poly, .. } => write!(f, "phi[{poly}; p={}]", self.0.p),
            Kind::Sum(a, b) => write!(f, "({a} + {b})"),
            Kind::Product(a, b) => write!(f, "({a} * {b})"),
            Kind::Scalar(c, a) => write!(f, "{c}*{a}"),
            Kind::Reflection(a) => write!(f, "reflect({a})"),
            Kind::Shift { n, b, inner } => write!(f, "T[{}^{n}|{b}]({inner})", self.0.p),
            Kind::Constant(c) => write!(f, "{c}"),
            Kind::Custom { label, .. } => write!(f, "{label}"),
        }
    }
}

impl PhiFunction {
    fn build(p: u64, kind: Kind) -> PhiFunction {
        PhiFunction(Arc::new(Node {
            p,
            kind,
            cache: RwLock::new(HashMap::new()),
        }))
    }

    /// `t = a/p^n ↦ p^(-s n) dim_k A / (x_i^(p^n), f^a)`.
    pub fn hypersurface(f: FpPoly) -> Result<PhiFunction> {
        PhiFunction::hypersurface_with(f, ColengthConfig::default())
    }

    pub fn hypersurface_with(f: FpPoly, config: ColengthConfig) -> Result<PhiFunction> {
        check_in_maximal_ideal(&f)?;
        Ok(PhiFunction::build(f.characteristic(), Kind::Hypersurface { f, config }))
    }

    pub fn constant(p: u64, c: Rat) -> Result<PhiFunction> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PhiFunction::build(p, Kind::Constant(c)))
    }

    /// A function given by a closure on canonical points.
    pub fn custom<F>(p: u64, label: impl Into<String>, eval: F) -> Result<PhiFunction>
    where
        F: Fn(&DyadicPoint) -> Result<Rat> + Send + Sync + 'static,
    {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PhiFunction::build(
            p,
            Kind::Custom {
                label: label.into(),
                eval: Box::new(eval),
            },
        ))
    }

    pub fn prime(&self) -> u64 {
        self.0.p
    }

    fn same_prime(&self, other: &PhiFunction) -> Result<()> {
        if self.0.p != other.0.p {
            return Err(Error::precondition(format!(
                "cannot combine functions for p = {} and p = {}",
                self.0.p, other.0.p
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &PhiFunction) -> Result<PhiFunction> {
        self.same_prime(other)?;
        Ok(PhiFunction::build(self.0.p, Kind::Sum(self.clone(), other.clone())))
    }

    /// Pointwise product.
    pub fn product(&self, other: &PhiFunction) -> Result<PhiFunction> {
        self.same_prime(other)?;
        Ok(PhiFunction::build(self.0.p, Kind::Product(self.clone(), other.clone())))
    }

    pub fn scalar(&self, c: Rat) -> PhiFunction {
        PhiFunction::build(self.0.p, Kind::Scalar(c, self.clone()))
    }

    /// `t ↦ φ(1 - t)`.
    pub fn reflect(&self) -> PhiFunction {
        PhiFunction::build(self.0.p, Kind::Reflection(self.clone()))
    }

    /// `T_{p^n|b}`: `a/p^m ↦ φ((a + b p^m) / p^(m+n))`, for `0 <= b < p^n`.
    pub fn shift(&self, n: u32, b: u64) -> Result<PhiFunction> {
        let q = pow_or_overflow(self.0.p, n)?;
        if b >= q {
            return Err(Error::precondition(format!("shift offset {b} must be below {}^{n}", self.0.p)));
        }
        Ok(PhiFunction::build(
            self.0.p,
            Kind::Shift {
                n,
                b,
                inner: self.clone(),
            },
        ))
    }

    /// `φ + ψ - φψ`, the function of a product of hypersurfaces in disjoint
    /// variables.
    pub fn product_phi(&self, other: &PhiFunction) -> Result<PhiFunction> {
        let both = self.product(other)?.scalar(-Rat::one());
        self.sum(other)?.sum(&both)
    }

    pub fn eval(&self, t: &DyadicPoint) -> Result<Rat> {
        if t.p != self.0.p {
            return Err(Error::precondition(format!(
                "point {t} is for p = {}, function for p = {}",
                t.p, self.0.p
            )));
        }
        if let Some(v) = self.0.cache.read().get(t) {
            return Ok(v.clone());
        }
        let v = self.eval_uncached(t)?;
        self.0.cache.write().entry(t.clone()).or_insert_with(|| v.clone());
        Ok(v)
    }

    fn eval_uncached(&self, t: &DyadicPoint) -> Result<Rat> {
        let p = self.0.p;
        match &self.0.kind {
            Kind::Hypersurface { f, config } => {
                let a = t
                    .a
                    .to_u64()
                    .ok_or_else(|| Error::Overflow(format!("level {} is out of reach for colength", t.n)))?;
                let c = colength_with(f, a, t.n, config)?;
                let dim = Rat::int_pow(p, t.n * f.nvars() as u32);
                Ok(Rat::from_integer(c) / dim)
            }
            Kind::Sum(a, b) => Ok(a.eval(t)? + b.eval(t)?),
            Kind::Product(a, b) => {
                let x = a.eval(t)?;
                if x.is_zero() {
                    return Ok(x);
                }
                Ok(x * b.eval(t)?)
            }
            Kind::Scalar(c, a) => Ok(c.clone() * a.eval(t)?),
            Kind::Reflection(a) => a.eval(&t.complement()),
            Kind::Shift { n, b, inner } => {
                let num = BigUint::from(*b) * BigUint::from(p).pow(t.n) + &t.a;
                let level = t
                    .n
                    .checked_add(*n)
                    .ok_or_else(|| Error::Overflow("shift level overflow".into()))?;
                inner.eval(&DyadicPoint::new(num, level, p)?)
            }
            Kind::Constant(c) => Ok(c.clone()),
            Kind::Custom { eval, .. } => eval(t),
        }
    }

    /// Number of cached values at this node.
    pub fn cache_len(&self) -> usize {
        self.0.cache.read().len()
    }
}

/// `φ(t)`.
pub fn phi_eval(phi: &PhiFunction, t: &DyadicPoint) -> Result<Rat> {
    phi.eval(t)
}

pub fn reflect(phi: &PhiFunction) -> PhiFunction {
    phi.reflect()
}

pub fn shift(phi: &PhiFunction, n: u32, b: u64) -> Result<PhiFunction> {
    phi.shift(n, b)
}

pub fn product_phi(phi: &PhiFunction, psi: &PhiFunction) -> Result<PhiFunction> {
    phi.product_phi(psi)
}

/// `e_{s,n}(φ) = p^(n s) φ(1/p^n)` for `n = 0..=nmax`.
pub fn e_sequence(phi: &PhiFunction, s: u32, nmax: u32) -> Result<Vec<Rat>> {
    let p = phi.prime();
    (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let t = DyadicPoint::new(1u32, n, p)?;
            Ok(Rat::int_pow(p, n * s) * phi.eval(&t)?)
        })
        .collect()
}

/// `HK_f(n) = dim_k A / (x_i^(p^n), f)`.
pub fn hk_function(f: &FpPoly, n: u32) -> Result<u64> {
    hk_function_with(f, n, &ColengthConfig::default())
}

pub fn hk_function_with(f: &FpPoly, n: u32, config: &ColengthConfig) -> Result<u64> {
    colength_with(f, 1, n, config)
}

/// `FS_f(n) = p^(s n) - dim_k A / (x_i^(p^n), f^(p^n - 1))`.
pub fn fs_function(f: &FpPoly, n: u32) -> Result<u64> {
    fs_function_with(f, n, &ColengthConfig::default())
}

pub fn fs_function_with(f: &FpPoly, n: u32, config: &ColengthConfig) -> Result<u64> {
    let p = f.characteristic();
    let q = pow_or_overflow(p, n)?;
    let c = colength_with(f, q - 1, n, config)?;
    Ok(q.pow(f.nvars() as u32) - c)
}

/// The function that is 1 at `(p^n - 1)/p^n` for perfect squares `n` and 0
/// elsewhere. Its reflection has a non-recurrent `e_{0,n}` sequence.
pub fn perfect_square_indicator(p: u64) -> Result<PhiFunction> {
    PhiFunction::custom(p, "perfect-square-indicator", move |t| {
        let hit = &t.a + 1u32 == BigUint::from(t.p).pow(t.n) && {
            let r = (t.n as f64).sqrt() as u32;
            (r.saturating_sub(1)..=r + 1).any(|r| r * r == t.n)
        };
        Ok(if hit { Rat::one() } else { Rat::zero() })
    })
}

impl FromStr for DyadicPoint {
    type Err = Error;

    /// Parses `a/2^n` style points only when the prime is written out;
    /// use [`DyadicPoint::parse`] otherwise.
    fn from_str(s: &str) -> Result<Self> {
        let (_, den) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("{s:?} does not name its prime")))?;
        let (base, _) = den
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("{s:?} does not name its prime")))?;
        let p: u64 = base.trim().parse().map_err(|_| Error::Parse(format!("bad prime in {s:?}")))?;
        DyadicPoint::parse(s, p)
    }
}
