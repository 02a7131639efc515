use std::collections::BTreeMap;

use thiserror::Error;

use super::{alpha_map, compose, interleave, invert, ResidueMap};
use crate::terms::MonoidTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no binding for atom `{0}`")]
    MissingAtomBinding(String),
    #[error("cannot invert non-invertible atom `{0}`")]
    InvertNonInvertible(String),
    #[error("atom `{0}` is declared invertible but is bound to a map that is not a total bijection")]
    NotABijection(String),
}

/// Bindings of atom names to maps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomEnv {
    bindings: BTreeMap<String, ResidueMap>,
}

impl AtomEnv {
    pub fn new() -> AtomEnv {
        AtomEnv::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, map: ResidueMap) -> &mut Self {
        self.bindings.insert(name.into(), map);
        self
    }

    pub fn with(mut self, name: impl Into<String>, map: ResidueMap) -> Self {
        self.bind(name, map);
        self
    }

    pub fn get(&self, name: &str) -> Option<&ResidueMap> {
        self.bindings.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ResidueMap)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Looks up an atom, checking that invertible atoms are bound to bijections.
    pub fn lookup(&self, name: &str, invertible: bool) -> Result<&ResidueMap, EvalError> {
        let map = self.get(name).ok_or_else(|| EvalError::MissingAtomBinding(name.to_string()))?;
        if invertible && !map.is_total_bijection() {
            return Err(EvalError::NotABijection(name.to_string()));
        }
        Ok(map)
    }
}

pub fn eval_monoid_term(m: &MonoidTerm, env: &AtomEnv) -> Result<ResidueMap, EvalError> {
    if let Some(name) = m.inverted_partial_atom() {
        return Err(EvalError::InvertNonInvertible(name));
    }
    eval_unchecked(m, env)
}

fn eval_unchecked(m: &MonoidTerm, env: &AtomEnv) -> Result<ResidueMap, EvalError> {
    Ok(match m {
        MonoidTerm::One => ResidueMap::identity(),
        MonoidTerm::Alpha => alpha_map(),
        MonoidTerm::AlphaInv => invert(&alpha_map()),
        MonoidTerm::Atom { name, invertible } => env.lookup(name, *invertible)?.clone(),
        MonoidTerm::Star(a, b) => interleave(&eval_unchecked(a, env)?, &eval_unchecked(b, env)?),
        MonoidTerm::Compose(g, f) => compose(&eval_unchecked(g, env)?, &eval_unchecked(f, env)?),
        MonoidTerm::Inv(f) => invert(&eval_unchecked(f, env)?),
    })
}

/// Evaluates a path: the first term is applied first.
pub fn eval_path(path: &[MonoidTerm], env: &AtomEnv) -> Result<ResidueMap, EvalError> {
    path.iter().try_fold(ResidueMap::identity(), |acc, m| Ok(compose(&eval_monoid_term(m, env)?, &acc)))
}

/// A point where two composites disagree; `None` values are undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub n: u64,
    pub lhs: Option<u64>,
    pub rhs: Option<u64>,
}

/// Least `n` at which the two path composites differ in value or definedness.
///
/// Exactly equal composites give `None` without scanning. Otherwise `0..bound`
/// is scanned; if the composites only differ beyond `bound`, the least
/// difference is located exactly from the canonical forms.
pub fn refute(
    lhs: &[MonoidTerm],
    rhs: &[MonoidTerm],
    env: &AtomEnv,
    bound: u64,
) -> Result<Option<Witness>, EvalError> {
    let l = eval_path(lhs, env)?;
    let r = eval_path(rhs, env)?;
    Ok(witness_between(&l, &r, bound))
}

pub(crate) fn witness_between(l: &ResidueMap, r: &ResidueMap, bound: u64) -> Option<Witness> {
    if l == r {
        return None;
    }
    let n = (0..bound)
        .find(|&n| l.apply(n) != r.apply(n))
        .or_else(|| l.first_difference(r))
        .expect("unequal canonical maps differ somewhere");
    Some(Witness { n, lhs: l.apply(n), rhs: r.apply(n) })
}
