//! Typing of monoid terms by tree patterns, and first-order unification over
//! the binary constructor with the constant `x`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::terms::MonoidTerm;
use crate::trees::{TreePattern, VarId};

/// An equation between two patterns.
pub type Equation = (TreePattern, TreePattern);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("atom `{0}` has no associativity typing")]
    AtomPresent(String),
}

/// Most general typing of a monoid term as a canonical associativity arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifted {
    pub src: TreePattern,
    pub tgt: TreePattern,
    pub constraints: Vec<Equation>,
}

/// Supplies fresh metavariables and collects composition constraints.
#[derive(Debug, Default)]
pub struct Lifter {
    next: u32,
    constraints: Vec<Equation>,
}

impl Lifter {
    /// Fresh variables will start at `first`.
    pub fn starting_at(first: u32) -> Lifter {
        Lifter { next: first, constraints: Vec::new() }
    }

    pub fn fresh(&mut self) -> TreePattern {
        let v = VarId(self.next);
        self.next += 1;
        TreePattern::Var(v)
    }

    pub fn constrain(&mut self, a: TreePattern, b: TreePattern) {
        self.constraints.push((a, b));
    }

    pub fn into_constraints(self) -> Vec<Equation> {
        self.constraints
    }

    /// Returns `(src, tgt)`, recording composition constraints.
    pub fn lift(&mut self, m: &MonoidTerm) -> Result<(TreePattern, TreePattern), LiftError> {
        use MonoidTerm::*;
        Ok(match m {
            One => {
                let v = self.fresh();
                (v.clone(), v)
            }
            Alpha | AlphaInv => {
                let (a, b, c) = (self.fresh(), self.fresh(), self.fresh());
                let right = TreePattern::pair(a.clone(), TreePattern::pair(b.clone(), c.clone()));
                let left = TreePattern::pair(TreePattern::pair(a, b), c);
                if matches!(m, Alpha) {
                    (right, left)
                } else {
                    (left, right)
                }
            }
            Atom { name, .. } => return Err(LiftError::AtomPresent(name.clone())),
            Star(f, g) => {
                let (fs, ft) = self.lift(f)?;
                let (gs, gt) = self.lift(g)?;
                (TreePattern::pair(fs, gs), TreePattern::pair(ft, gt))
            }
            Compose(g, f) => {
                let (fs, ft) = self.lift(f)?;
                let (gs, gt) = self.lift(g)?;
                self.constrain(ft, gs);
                (fs, gt)
            }
            Inv(f) => {
                let (fs, ft) = self.lift(f)?;
                (ft, fs)
            }
        })
    }
}

/// Lifts a single term with variables numbered from zero.
pub fn lift(m: &MonoidTerm) -> Result<Lifted, LiftError> {
    let mut lifter = Lifter::default();
    let (src, tgt) = lifter.lift(m)?;
    Ok(Lifted { src, tgt, constraints: lifter.into_constraints() })
}

/// An idempotent substitution of patterns for metavariables.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<VarId, TreePattern>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    // Callers guarantee idempotence, e.g. by using ground patterns only.
    pub(crate) fn from_map(map: BTreeMap<VarId, TreePattern>) -> Substitution {
        Substitution { map }
    }

    pub fn get(&self, v: VarId) -> Option<&TreePattern> {
        self.map.get(&v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &TreePattern)> {
        self.map.iter().map(|(v, p)| (*v, p))
    }

    pub fn apply(&self, p: &TreePattern) -> TreePattern {
        match p {
            TreePattern::Leaf => TreePattern::Leaf,
            TreePattern::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| p.clone()),
            TreePattern::Pair(l, r) => TreePattern::pair(self.apply(l), self.apply(r)),
        }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, p)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} := {p}")?;
        }
        f.write_str("}")
    }
}

// Follows variable bindings until reaching a non-variable or an unbound variable.
fn walk(bindings: &BTreeMap<VarId, TreePattern>, p: &TreePattern) -> TreePattern {
    let mut cur = p.clone();
    while let TreePattern::Var(v) = cur {
        match bindings.get(&v) {
            Some(next) => cur = next.clone(),
            None => break,
        }
    }
    cur
}

fn occurs(bindings: &BTreeMap<VarId, TreePattern>, v: VarId, p: &TreePattern) -> bool {
    match walk(bindings, p) {
        TreePattern::Leaf => false,
        TreePattern::Var(w) => w == v,
        TreePattern::Pair(l, r) => occurs(bindings, v, &l) || occurs(bindings, v, &r),
    }
}

fn resolve(bindings: &BTreeMap<VarId, TreePattern>, p: &TreePattern) -> TreePattern {
    match walk(bindings, p) {
        TreePattern::Pair(l, r) => TreePattern::pair(resolve(bindings, &l), resolve(bindings, &r)),
        other => other,
    }
}

/// Most general unifier of all equations, or `None` on a clash between `x`
/// and a pair, or when a variable would have to contain itself.
pub fn unify(eqs: &[Equation]) -> Option<Substitution> {
    let mut bindings: BTreeMap<VarId, TreePattern> = BTreeMap::new();
    let mut work: Vec<Equation> = eqs.iter().rev().cloned().collect();
    while let Some((a, b)) = work.pop() {
        let (a, b) = (walk(&bindings, &a), walk(&bindings, &b));
        match (a, b) {
            (TreePattern::Var(v), TreePattern::Var(w)) if v == w => {}
            (TreePattern::Var(v), other) | (other, TreePattern::Var(v)) => {
                if occurs(&bindings, v, &other) {
                    return None;
                }
                bindings.insert(v, other);
            }
            (TreePattern::Leaf, TreePattern::Leaf) => {}
            (TreePattern::Pair(l1, r1), TreePattern::Pair(l2, r2)) => {
                work.push(((*r1).clone(), (*r2).clone()));
                work.push(((*l1).clone(), (*l2).clone()));
            }
            _ => return None,
        }
    }
    let map = bindings.keys().map(|&v| (v, resolve(&bindings, &TreePattern::Var(v)))).collect();
    Some(Substitution { map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_monoid;
    use proptest::prelude::*;

    fn v(i: u32) -> TreePattern {
        TreePattern::Var(VarId(i))
    }

    fn p(a: TreePattern, b: TreePattern) -> TreePattern {
        TreePattern::pair(a, b)
    }

    #[test]
    fn lift_examples() {
        let l = lift(&MonoidTerm::Alpha).unwrap();
        assert_eq!(l.src, p(v(0), p(v(1), v(2))));
        assert_eq!(l.tgt, p(p(v(0), v(1)), v(2)));
        assert!(l.constraints.is_empty());

        let l = lift(&MonoidTerm::One).unwrap();
        assert_eq!(l.src, l.tgt);

        let l = lift(&parse_monoid("alpha . one # one").unwrap()).unwrap();
        assert_eq!(l.src, p(v(0), v(1)));
        assert_eq!(l.tgt, p(p(v(2), v(3)), v(4)));
        assert_eq!(l.constraints, vec![(p(v(0), v(1)), p(v(2), p(v(3), v(4))))]);

        assert_eq!(lift(&MonoidTerm::atom("f")), Err(LiftError::AtomPresent("f".into())));
    }

    #[test]
    fn unify_examples() {
        let s = unify(&[(v(0), p(TreePattern::Leaf, TreePattern::Leaf))]).unwrap();
        assert_eq!(s.get(VarId(0)), Some(&p(TreePattern::Leaf, TreePattern::Leaf)));

        // a*(b*c) = (a*b)*c forces a = a*b.
        let assoc = (p(v(0), p(v(1), v(2))), p(p(v(0), v(1)), v(2)));
        assert!(unify(&[assoc]).is_none());

        assert!(unify(&[]).unwrap().is_empty());
        assert!(unify(&[(TreePattern::Leaf, p(v(0), v(1)))]).is_none());
    }

    #[test]
    fn unifier_is_idempotent() {
        let eqs = vec![(v(0), p(v(1), v(2))), (v(1), p(v(3), TreePattern::Leaf)), (v(2), v(3))];
        let s = unify(&eqs).unwrap();
        for (_, pat) in s.iter() {
            assert_eq!(s.apply(pat), *pat);
        }
        assert_eq!(s.apply(&v(0)), p(p(v(3), TreePattern::Leaf), v(3)));
    }

    fn pattern() -> impl Strategy<Value = TreePattern> {
        let leaf = prop_oneof![Just(TreePattern::Leaf), (0u32..5).prop_map(v)];
        leaf.prop_recursive(4, 16, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| p(a, b)))
    }

    proptest! {
        #[test]
        fn unifiers_equate_both_sides(eqs in prop::collection::vec((pattern(), pattern()), 0..4)) {
            if let Some(s) = unify(&eqs) {
                for (a, b) in &eqs {
                    prop_assert_eq!(s.apply(a), s.apply(b));
                }
                for (var, pat) in s.iter() {
                    prop_assert!(!pat.occurs(var));
                }
            }
        }

        #[test]
        fn identical_sides_always_unify(a in pattern()) {
            prop_assert!(unify(&[(a.clone(), a)]).is_some());
        }
    }
}
