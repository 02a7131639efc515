//! Pointwise semantics of typed arrows.
//!
//! A tree `u` is interpreted as an iterated disjoint union of copies of ℕ; an
//! element is a leaf address in `u` together with a natural number. The
//! generalised code `u -> x` packs an element into ℕ by nesting the pairing
//! `(n, i) -> 2n + i`. Atoms are bound to endomorphisms of ℕ and act on `u`
//! by conjugation with code and decode.
//!
//! This evaluator never builds a [`ResidueMap`](super::ResidueMap) for a
//! structural arrow, so it gives an independent route to the value of a
//! typed term under convolution.

use super::eval::{AtomEnv, EvalError};
use super::cantor_code;
use crate::terms::ArrowTerm;
use crate::trees::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// A leaf address plus a natural number.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub path: Vec<Side>,
    pub n: u64,
}

impl Element {
    pub fn at_leaf(n: u64) -> Element {
        Element { path: Vec::new(), n }
    }

    fn prefixed(mut self, side: Side) -> Element {
        self.path.insert(0, side);
        self
    }

    fn split_head(&self) -> Option<(Side, Element)> {
        let (&head, rest) = self.path.split_first()?;
        Some((head, Element { path: rest.to_vec(), n: self.n }))
    }
}

/// Generalised code: packs an element of `u` into ℕ.
pub fn encode(u: &Tree, e: &Element) -> u64 {
    match (u.children(), e.split_head()) {
        (None, None) => e.n,
        (Some((l, _)), Some((Side::Left, rest))) => cantor_code(encode(l, &rest), 0),
        (Some((_, r)), Some((Side::Right, rest))) => cantor_code(encode(r, &rest), 1),
        _ => panic!("address {:?} does not fit tree {u}", e.path),
    }
}

/// Generalised decode: unpacks a natural into an element of `u`.
pub fn decode(u: &Tree, n: u64) -> Element {
    match u.children() {
        None => Element::at_leaf(n),
        Some((l, r)) => {
            if n.is_multiple_of(2) {
                decode(l, n / 2).prefixed(Side::Left)
            } else {
                decode(r, n / 2).prefixed(Side::Right)
            }
        }
    }
}

/// Applies a well-typed arrow to an element of its source. `Ok(None)` means
/// the arrow is undefined there (a partial atom).
pub fn apply_arrow(f: &ArrowTerm, e: &Element, env: &AtomEnv) -> Result<Option<Element>, EvalError> {
    apply_dir(f, e, env, false)
}

fn apply_dir(f: &ArrowTerm, e: &Element, env: &AtomEnv, inverse: bool) -> Result<Option<Element>, EvalError> {
    use ArrowTerm::*;
    use Side::*;
    Ok(match f {
        Id(_) => Some(e.clone()),
        Tau(..) | TauInv(..) => {
            let forward = matches!(f, Tau(..)) != inverse;
            Some(if forward { reassoc_left(e) } else { reassoc_right(e) })
        }
        Code(u) | Decode(u) => {
            let coding = matches!(f, Code(_)) != inverse;
            Some(if coding { Element::at_leaf(encode(u, e)) } else { decode(u, e.n) })
        }
        Atom(sig) => {
            let map = env.lookup(&sig.name, sig.invertible)?;
            if inverse {
                if !sig.invertible {
                    return Err(EvalError::InvertNonInvertible(sig.name.clone()));
                }
                map.inverse().apply(encode(&sig.tgt, e)).map(|m| decode(&sig.src, m))
            } else {
                map.apply(encode(&sig.src, e)).map(|m| decode(&sig.tgt, m))
            }
        }
        Tensor(a, b) => {
            let (side, rest) = e.split_head().expect("tensor argument must be a pair element");
            let branch = if side == Left { a } else { b };
            apply_dir(branch, &rest, env, inverse)?.map(|out| out.prefixed(side))
        }
        Compose(g, h) => {
            let (first, second) = if inverse { (g, h) } else { (h, g) };
            match apply_dir(first, e, env, inverse)? {
                Some(mid) => apply_dir(second, &mid, env, inverse)?,
                None => None,
            }
        }
        Inv(a) => apply_dir(a, e, env, !inverse)?,
    })
}

// a*(b*c) -> (a*b)*c on addresses.
fn reassoc_left(e: &Element) -> Element {
    use Side::*;
    let p = &e.path;
    let path = match p.as_slice() {
        [Left, rest @ ..] => [&[Left, Left][..], rest].concat(),
        [Right, Left, rest @ ..] => [&[Left, Right][..], rest].concat(),
        [Right, Right, rest @ ..] => [&[Right][..], rest].concat(),
        _ => panic!("address {p:?} does not fit a*(b*c)"),
    };
    Element { path, n: e.n }
}

fn reassoc_right(e: &Element) -> Element {
    use Side::*;
    let p = &e.path;
    let path = match p.as_slice() {
        [Left, Left, rest @ ..] => [&[Left][..], rest].concat(),
        [Left, Right, rest @ ..] => [&[Right, Left][..], rest].concat(),
        [Right, rest @ ..] => [&[Right, Right][..], rest].concat(),
        _ => panic!("address {p:?} does not fit (a*b)*c"),
    };
    Element { path, n: e.n }
}

/// The convolution of a typed arrow `f: u -> v` at `n`: code into ℕ after
/// `f` after decode from ℕ.
pub fn convolve_at(f: &ArrowTerm, src: &Tree, tgt: &Tree, n: u64, env: &AtomEnv) -> Result<Option<u64>, EvalError> {
    Ok(apply_arrow(f, &decode(src, n), env)?.map(|out| encode(tgt, &out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_nat::alpha_map;
    use crate::terms::{alpha_expansion, code_term, decode_term};
    use crate::trees::{enumerate_trees, parse_tree};

    #[test]
    fn decode_inverts_encode() {
        for r in 1..=5 {
            for u in enumerate_trees(r) {
                for n in 0..200 {
                    assert_eq!(encode(&u, &decode(&u, n)), n);
                }
            }
        }
    }

    #[test]
    fn tau_convolves_to_alpha() {
        let x = Tree::Leaf;
        let tau = ArrowTerm::Tau(x.clone(), x.clone(), x.clone());
        let src = parse_tree("(x*(x*x))").unwrap();
        let tgt = parse_tree("((x*x)*x)").unwrap();
        let alpha = alpha_map();
        for n in 0..256 {
            assert_eq!(convolve_at(&tau, &src, &tgt, n, &AtomEnv::new()).unwrap(), alpha.apply(n));
        }
    }

    #[test]
    fn expansion_is_pointwise_alpha() {
        let e = alpha_expansion();
        let alpha = alpha_map();
        for n in 0..256 {
            assert_eq!(convolve_at(&e, &Tree::Leaf, &Tree::Leaf, n, &AtomEnv::new()).unwrap(), alpha.apply(n));
        }
    }

    #[test]
    fn code_terms_agree_with_primitive_codes() {
        for u in enumerate_trees(4) {
            for n in 0..64 {
                let e = decode(&u, n);
                let via_term = apply_arrow(&code_term(&u), &e, &AtomEnv::new()).unwrap().unwrap();
                assert_eq!(via_term, Element::at_leaf(n));
                let back = apply_arrow(&decode_term(&u), &via_term, &AtomEnv::new()).unwrap().unwrap();
                assert_eq!(back, e);
            }
        }
    }

    #[test]
    fn inverse_of_composite_reverses_order() {
        let x = Tree::Leaf;
        let f = ArrowTerm::compose(
            ArrowTerm::Code(parse_tree("(x*x)").unwrap()),
            ArrowTerm::tensor(ArrowTerm::Code(parse_tree("(x*x)").unwrap()), ArrowTerm::Id(x.clone())),
        );
        let inv = ArrowTerm::inv(f.clone());
        let src = parse_tree("((x*x)*x)").unwrap();
        for n in 0..64 {
            let e = decode(&src, n);
            let there = apply_arrow(&f, &e, &AtomEnv::new()).unwrap().unwrap();
            assert_eq!(apply_arrow(&inv, &there, &AtomEnv::new()).unwrap().unwrap(), e);
        }
    }
}
