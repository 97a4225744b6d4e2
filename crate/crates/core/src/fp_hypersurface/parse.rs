//! Text form of polynomials: `c*x1^e1*x2^e2 + ...`.
//!
//! Variables are `x1, x2, ...`; `x, y, z, w` are aliases for `x1..x4`.
//! Coefficients are arbitrary integers and are reduced modulo the
//! characteristic only when the polynomial is placed over `F_p`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::FpPoly;
use crate::error::{Error, Result};

/// A variable `x_k`, identified by its 1-based index `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn parse(name: &str) -> Result<Var> {
        let name = name.trim();
        let k = match name {
            "x" => 1,
            "y" => 2,
            "z" => 3,
            "w" => 4,
            _ => name
                .strip_prefix('x')
                .and_then(|d| d.parse::<u32>().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?,
        };
        Ok(Var(k))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A polynomial with integer coefficients, as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPoly {
    terms: Vec<(BigInt, BTreeMap<Var, u32>)>,
}

impl ParsedPoly {
    pub fn parse(text: &str) -> Result<ParsedPoly> {
        Parser::new(text).parse()
    }

    /// Distinct variables that occur, ascending.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(_, m)| m.keys().copied())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Place over `F_p` using the variables that occur, in index order.
    pub fn to_fp(&self, p: u64) -> Result<(FpPoly, Vec<Var>)> {
        let vars = self.variables();
        Ok((self.to_fp_with(p, &vars)?, vars))
    }

    /// Place over `F_p` in the ring whose variables are `vars`, in that
    /// order. Every occurring variable must be listed.
    pub fn to_fp_with(&self, p: u64, vars: &[Var]) -> Result<FpPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (c, m) in &self.terms {
            let mut exps = vec![0u32; vars.len()];
            for (v, &e) in m {
                let pos = vars.iter().position(|w| w == v).ok_or_else(|| {
                    Error::Parse(format!("variable {v} is not among the ring variables"))
                })?;
                exps[pos] += e;
            }
            terms.push((c.clone(), exps));
        }
        FpPoly::from_terms(p, vars.len(), terms)
    }
}

/// Parse a comma separated variable list such as `x,y,z` or `x1,x3`.
pub fn parse_var_list(text: &str) -> Result<Vec<Var>> {
    let vars: Vec<Var> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Var::parse)
        .collect::<Result<_>>()?;
    let mut sorted = vars.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != vars.len() {
        return Err(Error::Parse(format!("repeated variable in {text:?}")));
    }
    Ok(vars)
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<ParsedPoly> {
        if self.chars.is_empty() {
            return Err(self.err("empty polynomial"));
        }
        let mut terms = Vec::new();
        let mut sign = BigInt::one();
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (c, m) = self.term()?;
            terms.push((sign * c, m));
            match self.peek() {
                None => break,
                Some('+') => sign = BigInt::one(),
                Some('-') => sign = -BigInt::one(),
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
        Ok(ParsedPoly { terms })
    }

    fn term(&mut self) -> Result<(BigInt, BTreeMap<Var, u32>)> {
        let mut coeff = BigInt::one();
        let mut mono = BTreeMap::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.integer()?,
                Some(c) if c.is_ascii_alphabetic() => {
                    let v = self.variable()?;
                    let e = if self.peek() == Some('^') {
                        self.pos += 1;
                        let e = self.integer()?;
                        u32::try_from(e).map_err(|_| self.err("exponent too large"))?
                    } else {
                        1
                    };
                    *mono.entry(v).or_insert(0) += e;
                }
                _ => return Err(self.err("expected a coefficient or variable")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        mono.retain(|_, e| *e > 0);
        if coeff.is_zero() {
            mono.clear();
        }
        Ok((coeff, mono))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn variable(&mut self) -> Result<Var> {
        let start = self.pos;
        self.pos += 1;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Var::parse(&s).map_err(|_| self.err(&format!("unknown variable {s:?}")))
    }
}
