//! Surface grammar for terms.
//!
//! ```text
//! term    ::= tensor ("." term)?            compose, right argument applied first
//! tensor  ::= primary ("#" primary)*        left-associative
//! primary ::= "(" term ")" | "inv(" term ")" | keyword-form | ident
//! ```
//!
//! Typed keyword forms are `id(T)`, `tau(T,T,T)`, `tau_inv(T,T,T)`,
//! `code(T)` and `decode(T)`; monoid keywords are `one`, `alpha` and
//! `alpha_inv`. `#` binds tighter than `.`.

use thiserror::Error;

use crate::terms::{ArrowTerm, AtomSig, MonoidTerm};
use crate::trees::{parse_tree_prefix, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term syntax error at offset {position}: {message}")]
pub struct TermParseError {
    pub position: usize,
    pub message: String,
}

const RESERVED: &[&str] = &["id", "tau", "tau_inv", "code", "decode", "inv", "one", "alpha", "alpha_inv", "x"];

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !RESERVED.contains(&s)
}

/// Parses a typed term; `atoms` resolves identifiers to their signatures.
pub fn parse_arrow_term(
    s: &str,
    atoms: &dyn Fn(&str) -> Option<AtomSig>,
) -> Result<ArrowTerm, TermParseError> {
    let mut p = Parser { src: s, pos: 0 };
    let t = p.term(&ArrowKind { atoms })?;
    p.finish()?;
    Ok(t)
}

/// Parses a monoid term; `invertible` reports whether a named atom is invertible.
pub fn parse_monoid_term(
    s: &str,
    invertible: &dyn Fn(&str) -> bool,
) -> Result<MonoidTerm, TermParseError> {
    let mut p = Parser { src: s, pos: 0 };
    let t = p.term(&MonoidKind { invertible })?;
    p.finish()?;
    Ok(t)
}

/// Parses a monoid term treating every atom as invertible.
pub fn parse_monoid(s: &str) -> Result<MonoidTerm, TermParseError> {
    parse_monoid_term(s, &|_| true)
}

trait TermKind {
    type Term;
    fn keyword(&self, p: &mut Parser<'_>, word: &str, at: usize) -> Result<Self::Term, TermParseError>;
    fn tensor(&self, a: Self::Term, b: Self::Term) -> Self::Term;
    fn compose(&self, g: Self::Term, f: Self::Term) -> Self::Term;
    fn inv(&self, f: Self::Term) -> Self::Term;
}

struct ArrowKind<'a> {
    atoms: &'a dyn Fn(&str) -> Option<AtomSig>,
}

impl TermKind for ArrowKind<'_> {
    type Term = ArrowTerm;

    fn keyword(&self, p: &mut Parser<'_>, word: &str, at: usize) -> Result<ArrowTerm, TermParseError> {
        match word {
            "id" | "code" | "decode" => {
                p.expect('(')?;
                let t = p.tree()?;
                p.expect(')')?;
                Ok(match word {
                    "id" => ArrowTerm::Id(t),
                    "code" => ArrowTerm::Code(t),
                    _ => ArrowTerm::Decode(t),
                })
            }
            "tau" | "tau_inv" => {
                p.expect('(')?;
                let a = p.tree()?;
                p.expect(',')?;
                let b = p.tree()?;
                p.expect(',')?;
                let c = p.tree()?;
                p.expect(')')?;
                Ok(if word == "tau" { ArrowTerm::Tau(a, b, c) } else { ArrowTerm::TauInv(a, b, c) })
            }
            "one" | "alpha" | "alpha_inv" => Err(p.error_at(at, &format!("`{word}` is a monoid term, not a typed arrow"))),
            name => (self.atoms)(name)
                .map(ArrowTerm::Atom)
                .ok_or_else(|| p.error_at(at, &format!("undeclared atom `{name}`"))),
        }
    }

    fn tensor(&self, a: ArrowTerm, b: ArrowTerm) -> ArrowTerm {
        ArrowTerm::tensor(a, b)
    }

    fn compose(&self, g: ArrowTerm, f: ArrowTerm) -> ArrowTerm {
        ArrowTerm::compose(g, f)
    }

    fn inv(&self, f: ArrowTerm) -> ArrowTerm {
        ArrowTerm::inv(f)
    }
}

struct MonoidKind<'a> {
    invertible: &'a dyn Fn(&str) -> bool,
}

impl TermKind for MonoidKind<'_> {
    type Term = MonoidTerm;

    fn keyword(&self, p: &mut Parser<'_>, word: &str, at: usize) -> Result<MonoidTerm, TermParseError> {
        match word {
            "one" => Ok(MonoidTerm::One),
            "alpha" => Ok(MonoidTerm::Alpha),
            "alpha_inv" => Ok(MonoidTerm::AlphaInv),
            "id" | "tau" | "tau_inv" | "code" | "decode" | "x" => {
                Err(p.error_at(at, &format!("`{word}` is a typed arrow, not a monoid term")))
            }
            name => Ok(MonoidTerm::Atom { name: name.to_string(), invertible: (self.invertible)(name) }),
        }
    }

    fn tensor(&self, a: MonoidTerm, b: MonoidTerm) -> MonoidTerm {
        MonoidTerm::star(a, b)
    }

    fn compose(&self, g: MonoidTerm, f: MonoidTerm) -> MonoidTerm {
        MonoidTerm::compose(g, f)
    }

    fn inv(&self, f: MonoidTerm) -> MonoidTerm {
        MonoidTerm::inv(f)
    }
}

struct Parser<'s> {
    src: &'s str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn error_at(&self, position: usize, message: &str) -> TermParseError {
        TermParseError { position, message: message.to_string() }
    }

    fn expect(&mut self, c: char) -> Result<(), TermParseError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error_at(self.pos, &format!("expected '{c}'")))
        }
    }

    fn finish(&mut self) -> Result<(), TermParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error_at(self.pos, &format!("unexpected '{c}'"))),
        }
    }

    fn tree(&mut self) -> Result<Tree, TermParseError> {
        self.skip_ws();
        let (t, used) = parse_tree_prefix(self.rest()).map_err(|e| TermParseError {
            position: self.pos + e.position,
            message: e.message,
        })?;
        self.pos += used;
        Ok(t)
    }

    fn word(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphanumeric() || c == '_' || (i > 0 && c == '\'')))
            .map(|(i, _)| i)
            .unwrap_or(self.rest().len());
        if len == 0 || self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return None;
        }
        self.pos += len;
        Some((self.src[start..start + len].to_string(), start))
    }

    fn term<K: TermKind>(&mut self, kind: &K) -> Result<K::Term, TermParseError> {
        let head = self.tensor(kind)?;
        if self.peek() == Some('.') {
            self.pos += 1;
            let rest = self.term(kind)?;
            Ok(kind.compose(head, rest))
        } else {
            Ok(head)
        }
    }

    fn tensor<K: TermKind>(&mut self, kind: &K) -> Result<K::Term, TermParseError> {
        let mut acc = self.primary(kind)?;
        while self.peek() == Some('#') {
            self.pos += 1;
            let next = self.primary(kind)?;
            acc = kind.tensor(acc, next);
        }
        Ok(acc)
    }

    fn primary<K: TermKind>(&mut self, kind: &K) -> Result<K::Term, TermParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.term(kind)?;
                self.expect(')')?;
                Ok(t)
            }
            None => Err(self.error_at(self.pos, "unexpected end of input")),
            Some(_) => {
                let Some((word, at)) = self.word() else {
                    return Err(self.error_at(self.pos, "expected a term"));
                };
                if word == "inv" {
                    self.expect('(')?;
                    let t = self.term(kind)?;
                    self.expect(')')?;
                    return Ok(kind.inv(t));
                }
                kind.keyword(self, &word, at)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::parse_tree;
    use proptest::prelude::*;

    fn no_atoms(_: &str) -> Option<AtomSig> {
        None
    }

    #[test]
    fn parses_typed_terms() {
        let t = parse_arrow_term("(decode((x*x)) # id(x)) . (id(x) # code((x*x)))", &no_atoms).unwrap();
        assert_eq!(t.typecheck().unwrap().0, parse_tree("(x*(x*x))").unwrap());
        assert_eq!(t.typecheck().unwrap().1, parse_tree("((x*x)*x)").unwrap());
        let tau = parse_arrow_term("tau(x, (x*x), x)", &no_atoms).unwrap();
        assert!(matches!(tau, ArrowTerm::Tau(..)));
    }

    #[test]
    fn rejects_undeclared_atoms_and_wrong_kinds() {
        assert!(parse_arrow_term("f . id(x)", &no_atoms).is_err());
        assert!(parse_arrow_term("alpha", &no_atoms).is_err());
        assert!(parse_monoid("tau(x,x,x)").is_err());
        assert!(parse_monoid("alpha .").is_err());
        assert!(parse_monoid("(alpha").is_err());
    }

    #[test]
    fn resolves_typed_atoms() {
        let lookup = |name: &str| {
            (name == "f").then(|| AtomSig {
                name: "f".into(),
                src: Tree::Leaf,
                tgt: Tree::Leaf,
                invertible: true,
            })
        };
        let t = parse_arrow_term("inv(f) . f", &lookup).unwrap();
        assert!(t.has_atoms());
    }

    #[test]
    fn parses_monoid_terms() {
        assert_eq!(
            parse_monoid("alpha . inv(alpha)").unwrap(),
            MonoidTerm::compose(MonoidTerm::Alpha, MonoidTerm::inv(MonoidTerm::Alpha))
        );
        assert_eq!(
            parse_monoid("one # f . g").unwrap(),
            MonoidTerm::compose(
                MonoidTerm::star(MonoidTerm::One, MonoidTerm::atom("f")),
                MonoidTerm::atom("g")
            )
        );
        let partial = parse_monoid_term("p", &|n| n != "p").unwrap();
        assert_eq!(partial, MonoidTerm::partial_atom("p"));
    }

    fn monoid_strategy() -> impl Strategy<Value = MonoidTerm> {
        let leaf = prop_oneof![
            Just(MonoidTerm::One),
            Just(MonoidTerm::Alpha),
            Just(MonoidTerm::AlphaInv),
            Just(MonoidTerm::atom("f")),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| MonoidTerm::star(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| MonoidTerm::compose(a, b)),
                inner.prop_map(MonoidTerm::inv),
            ]
        })
    }

    proptest! {
        #[test]
        fn monoid_print_parse_round_trip(m in monoid_strategy()) {
            prop_assert_eq!(parse_monoid(&m.to_string()).unwrap(), m);
        }
    }
}
