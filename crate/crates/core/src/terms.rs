//! Arrow syntax for the free semi-monoidal category on a self-similar
//! generator ([`ArrowTerm`]) and for its strictified endomorphism monoid
//! ([`MonoidTerm`]), together with the canonical-arrow builders and the
//! flattening map between them.

use std::fmt;

use thiserror::Error;

use crate::trees::{left_comb, Tree};

/// A named arrow with explicit source and target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomSig {
    pub name: String,
    pub src: Tree,
    pub tgt: Tree,
    pub invertible: bool,
}

/// Typed arrow terms. `Compose(g, f)` means "g after f".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArrowTerm {
    Id(Tree),
    /// `a*(b*c) -> (a*b)*c`
    Tau(Tree, Tree, Tree),
    /// `(a*b)*c -> a*(b*c)`
    TauInv(Tree, Tree, Tree),
    /// Generalised code `u -> x`.
    Code(Tree),
    /// Generalised decode `x -> u`.
    Decode(Tree),
    Atom(AtomSig),
    Tensor(Box<ArrowTerm>, Box<ArrowTerm>),
    Compose(Box<ArrowTerm>, Box<ArrowTerm>),
    Inv(Box<ArrowTerm>),
}

/// Arrows of the endomorphism monoid of the generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonoidTerm {
    One,
    Alpha,
    AlphaInv,
    Atom { name: String, invertible: bool },
    Star(Box<MonoidTerm>, Box<MonoidTerm>),
    Compose(Box<MonoidTerm>, Box<MonoidTerm>),
    Inv(Box<MonoidTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch in `{term}`: {left} != {right}")]
    Mismatch { term: String, left: Tree, right: Tree },
    #[error("cannot invert `{term}`: atom `{atom}` is not invertible")]
    NotInvertible { term: String, atom: String },
}

impl ArrowTerm {
    pub fn id(t: Tree) -> Self {
        ArrowTerm::Id(t)
    }

    pub fn tensor(f: ArrowTerm, g: ArrowTerm) -> Self {
        ArrowTerm::Tensor(Box::new(f), Box::new(g))
    }

    /// `g` after `f`.
    pub fn compose(g: ArrowTerm, f: ArrowTerm) -> Self {
        ArrowTerm::Compose(Box::new(g), Box::new(f))
    }

    pub fn inv(f: ArrowTerm) -> Self {
        ArrowTerm::Inv(Box::new(f))
    }

    pub fn atom(name: &str, src: Tree, tgt: Tree, invertible: bool) -> Self {
        ArrowTerm::Atom(AtomSig { name: name.to_string(), src, tgt, invertible })
    }

    /// Computes `(source, target)`, checking every composite and inverse.
    pub fn typecheck(&self) -> Result<(Tree, Tree), TypeError> {
        use ArrowTerm::*;
        Ok(match self {
            Id(t) => (t.clone(), t.clone()),
            Tau(a, b, c) => (
                Tree::pair(a.clone(), Tree::pair(b.clone(), c.clone())),
                Tree::pair(Tree::pair(a.clone(), b.clone()), c.clone()),
            ),
            TauInv(a, b, c) => (
                Tree::pair(Tree::pair(a.clone(), b.clone()), c.clone()),
                Tree::pair(a.clone(), Tree::pair(b.clone(), c.clone())),
            ),
            Code(u) => (u.clone(), Tree::Leaf),
            Decode(u) => (Tree::Leaf, u.clone()),
            Atom(sig) => (sig.src.clone(), sig.tgt.clone()),
            Tensor(f, g) => {
                let (fs, ft) = f.typecheck()?;
                let (gs, gt) = g.typecheck()?;
                (Tree::pair(fs, gs), Tree::pair(ft, gt))
            }
            Compose(g, f) => {
                let (fs, ft) = f.typecheck()?;
                let (gs, gt) = g.typecheck()?;
                if ft != gs {
                    return Err(TypeError::Mismatch { term: self.to_string(), left: ft, right: gs });
                }
                (fs, gt)
            }
            Inv(f) => {
                if let Some(atom) = f.non_invertible_atom() {
                    return Err(TypeError::NotInvertible { term: self.to_string(), atom });
                }
                let (fs, ft) = f.typecheck()?;
                (ft, fs)
            }
        })
    }

    pub fn src(&self) -> Result<Tree, TypeError> {
        self.typecheck().map(|(s, _)| s)
    }

    pub fn tgt(&self) -> Result<Tree, TypeError> {
        self.typecheck().map(|(_, t)| t)
    }

    fn non_invertible_atom(&self) -> Option<String> {
        use ArrowTerm::*;
        match self {
            Atom(sig) if !sig.invertible => Some(sig.name.clone()),
            Tensor(a, b) | Compose(a, b) => a.non_invertible_atom().or_else(|| b.non_invertible_atom()),
            Inv(f) => f.non_invertible_atom(),
            _ => None,
        }
    }

    pub fn has_atoms(&self) -> bool {
        use ArrowTerm::*;
        match self {
            Atom(_) => true,
            Tensor(a, b) | Compose(a, b) => a.has_atoms() || b.has_atoms(),
            Inv(f) => f.has_atoms(),
            _ => false,
        }
    }

    pub fn atoms(&self, out: &mut Vec<AtomSig>) {
        use ArrowTerm::*;
        match self {
            Atom(sig) => {
                if !out.contains(sig) {
                    out.push(sig.clone())
                }
            }
            Tensor(a, b) | Compose(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
            Inv(f) => f.atoms(out),
            _ => {}
        }
    }

    /// Structural inverse: pushes inversion down to the generators.
    /// Atoms are wrapped in `Inv`.
    pub fn inverse(&self) -> ArrowTerm {
        use ArrowTerm::*;
        match self {
            Id(t) => Id(t.clone()),
            Tau(a, b, c) => TauInv(a.clone(), b.clone(), c.clone()),
            TauInv(a, b, c) => Tau(a.clone(), b.clone(), c.clone()),
            Code(u) => Decode(u.clone()),
            Decode(u) => Code(u.clone()),
            Atom(_) => ArrowTerm::inv(self.clone()),
            Tensor(f, g) => ArrowTerm::tensor(f.inverse(), g.inverse()),
            Compose(g, f) => ArrowTerm::compose(f.inverse(), g.inverse()),
            Inv(f) => (**f).clone(),
        }
    }
}

impl MonoidTerm {
    pub fn star(f: MonoidTerm, g: MonoidTerm) -> Self {
        MonoidTerm::Star(Box::new(f), Box::new(g))
    }

    /// `g` after `f`.
    pub fn compose(g: MonoidTerm, f: MonoidTerm) -> Self {
        MonoidTerm::Compose(Box::new(g), Box::new(f))
    }

    pub fn inv(f: MonoidTerm) -> Self {
        MonoidTerm::Inv(Box::new(f))
    }

    pub fn atom(name: &str) -> Self {
        MonoidTerm::Atom { name: name.to_string(), invertible: true }
    }

    pub fn partial_atom(name: &str) -> Self {
        MonoidTerm::Atom { name: name.to_string(), invertible: false }
    }

    pub fn has_atoms(&self) -> bool {
        use MonoidTerm::*;
        match self {
            Atom { .. } => true,
            Star(a, b) | Compose(a, b) => a.has_atoms() || b.has_atoms(),
            Inv(f) => f.has_atoms(),
            _ => false,
        }
    }

    pub fn count_alphas(&self) -> usize {
        use MonoidTerm::*;
        match self {
            Alpha | AlphaInv => 1,
            Star(a, b) | Compose(a, b) => a.count_alphas() + b.count_alphas(),
            Inv(f) => f.count_alphas(),
            _ => 0,
        }
    }

    /// Name of the first non-invertible atom under an `Inv`, if any.
    pub fn inverted_partial_atom(&self) -> Option<String> {
        fn first_partial(m: &MonoidTerm) -> Option<String> {
            match m {
                MonoidTerm::Atom { name, invertible: false } => Some(name.clone()),
                MonoidTerm::Star(a, b) | MonoidTerm::Compose(a, b) => {
                    first_partial(a).or_else(|| first_partial(b))
                }
                MonoidTerm::Inv(f) => first_partial(f),
                _ => None,
            }
        }
        use MonoidTerm::*;
        match self {
            Inv(f) => first_partial(f),
            Star(a, b) | Compose(a, b) => a.inverted_partial_atom().or_else(|| b.inverted_partial_atom()),
            _ => None,
        }
    }
}

/// Generalised code arrow `u -> x`, built from `Code(x*x)`, identities and tensors.
pub fn code_term(u: &Tree) -> ArrowTerm {
    match u.children() {
        None => ArrowTerm::Id(Tree::Leaf),
        Some((l, r)) if l.is_leaf() && r.is_leaf() => ArrowTerm::Code(u.clone()),
        Some((l, r)) => ArrowTerm::compose(
            ArrowTerm::Code(Tree::pair(Tree::Leaf, Tree::Leaf)),
            ArrowTerm::tensor(code_term(l), code_term(r)),
        ),
    }
}

/// Generalised decode arrow `x -> u`, the formal inverse of [`code_term`].
pub fn decode_term(u: &Tree) -> ArrowTerm {
    match u.children() {
        None => ArrowTerm::Id(Tree::Leaf),
        Some((l, r)) if l.is_leaf() && r.is_leaf() => ArrowTerm::Decode(u.clone()),
        Some((l, r)) => ArrowTerm::compose(
            ArrowTerm::tensor(decode_term(l), decode_term(r)),
            ArrowTerm::Decode(Tree::pair(Tree::Leaf, Tree::Leaf)),
        ),
    }
}

/// The self-similarity arrow `u -> v`: decode into `v` after coding `u`.
pub fn xsub(u: &Tree, v: &Tree) -> ArrowTerm {
    ArrowTerm::compose(decode_term(v), code_term(u))
}

/// How [`wsub_with`] rotates a tree into left-comb form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    /// Rotate along the right spine of the whole tree.
    RightSpine,
    /// Normalise both subtrees first, then merge the two combs.
    ChildrenFirst,
}

/// The canonical associativity arrow `s -> t`, or `None` when ranks differ.
pub fn wsub(s: &Tree, t: &Tree) -> Option<ArrowTerm> {
    wsub_with(s, t, Rotation::RightSpine)
}

pub fn wsub_with(s: &Tree, t: &Tree, rotation: Rotation) -> Option<ArrowTerm> {
    if s.rank() != t.rank() {
        return None;
    }
    let to_comb = |tree: &Tree| match rotation {
        Rotation::RightSpine => spine_to_comb(tree),
        Rotation::ChildrenFirst => children_to_comb(tree),
    };
    Some(compose_simpl(to_comb(t).inverse(), to_comb(s)))
}

fn compose_simpl(g: ArrowTerm, f: ArrowTerm) -> ArrowTerm {
    match (&g, &f) {
        (ArrowTerm::Id(_), _) => f,
        (_, ArrowTerm::Id(_)) => g,
        _ => ArrowTerm::compose(g, f),
    }
}

fn tensor_simpl(f: ArrowTerm, g: ArrowTerm) -> ArrowTerm {
    match (&f, &g) {
        (ArrowTerm::Id(a), ArrowTerm::Id(b)) => ArrowTerm::Id(Tree::pair(a.clone(), b.clone())),
        _ => ArrowTerm::tensor(f, g),
    }
}

// t -> left_comb(rank t), rotating at the top of the right spine.
fn spine_to_comb(t: &Tree) -> ArrowTerm {
    match t.children() {
        None => ArrowTerm::Id(Tree::Leaf),
        Some((l, r)) => match r.children() {
            None => tensor_simpl(spine_to_comb(l), ArrowTerm::Id(Tree::Leaf)),
            Some((r1, r2)) => {
                let rotated = Tree::pair(Tree::pair(l.clone(), r1.clone()), r2.clone());
                compose_simpl(
                    spine_to_comb(&rotated),
                    ArrowTerm::Tau(l.clone(), r1.clone(), r2.clone()),
                )
            }
        },
    }
}

fn children_to_comb(t: &Tree) -> ArrowTerm {
    match t.children() {
        None => ArrowTerm::Id(Tree::Leaf),
        Some((l, r)) => {
            let both = tensor_simpl(children_to_comb(l), children_to_comb(r));
            compose_simpl(merge_combs(l.rank(), r.rank()), both)
        }
    }
}

// left_comb(a) * left_comb(b) -> left_comb(a + b)
fn merge_combs(a: usize, b: usize) -> ArrowTerm {
    if b == 1 {
        return ArrowTerm::Id(Tree::pair(left_comb(a), Tree::Leaf));
    }
    let step = ArrowTerm::Tau(left_comb(a), left_comb(b - 1), Tree::Leaf);
    compose_simpl(tensor_simpl(merge_combs(a, b - 1), ArrowTerm::Id(Tree::Leaf)), step)
}

/// Replaces objects by the generator, tensors by the induced tensor, the
/// associator by its monoid counterpart and code/decode arrows by the identity.
pub fn flatten(f: &ArrowTerm) -> MonoidTerm {
    use ArrowTerm::*;
    match f {
        Id(_) | Code(_) | Decode(_) => MonoidTerm::One,
        Tau(..) => MonoidTerm::Alpha,
        TauInv(..) => MonoidTerm::AlphaInv,
        Atom(sig) => MonoidTerm::Atom { name: sig.name.clone(), invertible: sig.invertible },
        Tensor(a, b) => MonoidTerm::star(flatten(a), flatten(b)),
        Compose(g, f) => MonoidTerm::compose(flatten(g), flatten(f)),
        Inv(a) => MonoidTerm::inv(flatten(a)),
    }
}

/// The associator of the induced tensor written out through code and decode:
/// `code . (code # id) . tau(x,x,x) . (id # decode) . decode`, of type `x -> x`.
pub fn alpha_expansion() -> ArrowTerm {
    alpha_expansion_around(ArrowTerm::Tau(Tree::Leaf, Tree::Leaf, Tree::Leaf))
}

pub(crate) fn alpha_expansion_around(middle: ArrowTerm) -> ArrowTerm {
    let x = Tree::Leaf;
    let xx = Tree::pair(Tree::Leaf, Tree::Leaf);
    ArrowTerm::compose(
        ArrowTerm::Code(xx.clone()),
        ArrowTerm::compose(
            ArrowTerm::tensor(ArrowTerm::Code(xx.clone()), ArrowTerm::Id(x.clone())),
            ArrowTerm::compose(
                middle,
                ArrowTerm::compose(
                    ArrowTerm::tensor(ArrowTerm::Id(x), ArrowTerm::Decode(xx.clone())),
                    ArrowTerm::Decode(xx),
                ),
            ),
        ),
    )
}

// Display uses the surface grammar. Precedence: compose (0) < tensor (1) < primary (2).

impl fmt::Display for ArrowTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_arrow(self, 0, f)
    }
}

fn write_arrow(t: &ArrowTerm, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    use ArrowTerm::*;
    match t {
        Id(a) => write!(f, "id({a})"),
        Tau(a, b, c) => write!(f, "tau({a},{b},{c})"),
        TauInv(a, b, c) => write!(f, "tau_inv({a},{b},{c})"),
        Code(u) => write!(f, "code({u})"),
        Decode(u) => write!(f, "decode({u})"),
        Atom(sig) => f.write_str(&sig.name),
        Inv(a) => {
            f.write_str("inv(")?;
            write_arrow(a, 0, f)?;
            f.write_str(")")
        }
        Tensor(a, b) => {
            if level > 1 {
                f.write_str("(")?;
            }
            write_arrow(a, 1, f)?;
            f.write_str(" # ")?;
            write_arrow(b, 2, f)?;
            if level > 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
        Compose(g, h) => {
            if level > 0 {
                f.write_str("(")?;
            }
            write_arrow(g, 1, f)?;
            f.write_str(" . ")?;
            write_arrow(h, 0, f)?;
            if level > 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for MonoidTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_monoid(self, 0, f)
    }
}

fn write_monoid(t: &MonoidTerm, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    use MonoidTerm::*;
    match t {
        One => f.write_str("one"),
        Alpha => f.write_str("alpha"),
        AlphaInv => f.write_str("alpha_inv"),
        Atom { name, .. } => f.write_str(name),
        Inv(a) => {
            f.write_str("inv(")?;
            write_monoid(a, 0, f)?;
            f.write_str(")")
        }
        Star(a, b) => {
            if level > 1 {
                f.write_str("(")?;
            }
            write_monoid(a, 1, f)?;
            f.write_str(" # ")?;
            write_monoid(b, 2, f)?;
            if level > 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
        Compose(g, h) => {
            if level > 0 {
                f.write_str("(")?;
            }
            write_monoid(g, 1, f)?;
            f.write_str(" . ")?;
            write_monoid(h, 0, f)?;
            if level > 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}
