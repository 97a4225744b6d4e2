use std::path::Path;

use pfractal::exact_arith::{Rat, RationalGF};
use pfractal::fp_hypersurface::{parse_var_list, FpPoly, ParsedPoly, Var};
use pfractal::phi_lab::DyadicPoint;
use pfractal::qp_series::QuasiPolynomial;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

/// `{"p": 2, "terms": ["1", "4", ...]}`
#[derive(Debug, Deserialize)]
pub struct SequenceFile {
    pub p: u64,
    pub terms: Vec<Rat>,
}

/// Either a series `{"num", "den"}` or a quasi-polynomial `{"p", "d", "tables"}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SeriesFile {
    Qp(QuasiPolynomial),
    Gf(RationalGF),
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Format {
        path: path.to_owned(),
        source,
    })
}

pub fn vars_of(parsed: &ParsedPoly, vars: Option<&str>) -> Result<Vec<Var>, CliError> {
    match vars {
        Some(v) => Ok(parse_var_list(v)?),
        None => Ok(parsed.variables()),
    }
}

pub fn poly(text: &str, p: u64, vars: Option<&str>) -> Result<(FpPoly, Vec<Var>), CliError> {
    let parsed = ParsedPoly::parse(text)?;
    let vars = vars_of(&parsed, vars)?;
    let f = parsed.to_fp_with(p, &vars)?;
    Ok((f, vars))
}

pub fn points(text: &str, p: u64) -> Result<Vec<DyadicPoint>, CliError> {
    let pts: Vec<DyadicPoint> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| DyadicPoint::parse(s, p))
        .collect::<Result<_, _>>()?;
    if pts.is_empty() {
        return Err(CliError::Usage("no points given".into()));
    }
    Ok(pts)
}

pub fn rats(text: &str) -> Result<Vec<Rat>, CliError> {
    let v: Vec<Rat> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(CliError::Usage("empty table".into()));
    }
    Ok(v)
}
