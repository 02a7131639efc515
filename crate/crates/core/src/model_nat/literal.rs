//! Map literals and atom environment files.
//!
//! ```text
//! map     ::= "{" (piece ("," piece)*)? "}"
//! piece   ::= class "->" class
//! class   ::= residue "/" modulus          modulus is 2^k, written as a number or "2^k"
//! binding ::= ident "=" map                one per line; '#' starts a comment line
//! ```
//!
//! `{ 0/2 -> 1/2, 1/2 -> 0/2 }` is the swap of evens and odds.

use thiserror::Error;

use super::{AtomEnv, MapError, Piece, ResidueMap, MAX_BITS};
use crate::syntax::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: MapError },
}

fn syntax(line: usize, message: impl Into<String>) -> LiteralError {
    LiteralError::Syntax { line, message: message.into() }
}

pub fn parse_map(text: &str) -> Result<ResidueMap, LiteralError> {
    parse_map_on_line(text, 1)
}

fn parse_map_on_line(text: &str, line: usize) -> Result<ResidueMap, LiteralError> {
    let body = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| syntax(line, "map literal must be enclosed in braces"))?;
    let mut pieces = Vec::new();
    if !body.trim().is_empty() {
        for item in body.split(',') {
            let (lhs, rhs) = item
                .split_once("->")
                .ok_or_else(|| syntax(line, format!("expected `r/m -> r'/m'`, found `{}`", item.trim())))?;
            let (k, r) = parse_class(lhs, line)?;
            let (k_out, r_out) = parse_class(rhs, line)?;
            pieces.push(Piece::new(k, r, k_out, r_out));
        }
    }
    ResidueMap::new(pieces).map_err(|source| LiteralError::Invalid { line, source })
}

fn parse_class(text: &str, line: usize) -> Result<(u32, u64), LiteralError> {
    let (r, m) = text
        .trim()
        .split_once('/')
        .ok_or_else(|| syntax(line, format!("expected `residue/modulus`, found `{}`", text.trim())))?;
    let r: u64 = r
        .trim()
        .parse()
        .map_err(|_| syntax(line, format!("bad residue `{}`", r.trim())))?;
    let m = m.trim();
    let k = if let Some(exp) = m.strip_prefix("2^") {
        exp.parse::<u32>().map_err(|_| syntax(line, format!("bad exponent in `{m}`")))?
    } else {
        let modulus: u64 = m.parse().map_err(|_| syntax(line, format!("bad modulus `{m}`")))?;
        if !modulus.is_power_of_two() {
            return Err(syntax(line, format!("modulus {modulus} is not a power of two")));
        }
        modulus.trailing_zeros()
    };
    if k > MAX_BITS {
        return Err(LiteralError::Invalid { line, source: MapError::ModulusTooLarge(k) });
    }
    Ok((k, r))
}

/// Parses an environment file of `name = { ... }` lines.
pub fn parse_env(text: &str) -> Result<AtomEnv, LiteralError> {
    let mut env = AtomEnv::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (name, map) = trimmed
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected `name = { ... }`"))?;
        let name = name.trim();
        if !is_identifier(name) {
            return Err(syntax(line, format!("`{name}` is not a valid atom name")));
        }
        if env.get(name).is_some() {
            return Err(syntax(line, format!("atom `{name}` bound twice")));
        }
        env.bind(name, parse_map_on_line(map, line)?);
    }
    Ok(env)
}
