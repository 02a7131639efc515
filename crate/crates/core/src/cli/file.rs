//! The line-oriented diagram file format.
//!
//! ```text
//! # comment
//! object p = (x*(x*x))                  typed node
//! node a                                untyped node
//! atom f : x -> (x*x)                   typed atom, append `partial` if not invertible
//! atom g partial                        untyped atom; undeclared untyped atoms are invertible
//! arrow e : p -> q = tau(x,x,x)
//! check e;k = l                         `;` separates edges, first edge first
//! check all
//! ```
//!
//! A file with no `check` line is treated as `check all`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coherence::{Diagram, DiagramKind, EdgeId, EdgeLabel, Path};
use crate::syntax::{is_identifier, parse_arrow_term, parse_monoid_term};
use crate::terms::AtomSig;
use crate::trees::{parse_tree, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FileError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomDecl {
    pub name: String,
    /// Source and target trees; absent in untyped files.
    pub signature: Option<(Tree, Tree)>,
    pub invertible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    All,
    Paths(Path, Path),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramFile {
    pub diagram: Diagram,
    pub atoms: Vec<AtomDecl>,
    pub checks: Vec<Check>,
}

impl DiagramFile {
    /// The declared checks, or `check all` when there are none.
    pub fn effective_checks(&self) -> Vec<Check> {
        if self.checks.is_empty() {
            vec![Check::All]
        } else {
            self.checks.clone()
        }
    }

    pub fn parse(text: &str) -> Result<DiagramFile, FileError> {
        let mut p = FileParser::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            p.line = i + 1;
            p.statement(line)?;
        }
        Ok(DiagramFile {
            diagram: p.diagram.unwrap_or_else(Diagram::untyped),
            atoms: p.atoms.into_values().collect(),
            checks: p.checks,
        })
    }
}

#[derive(Default)]
struct FileParser {
    line: usize,
    diagram: Option<Diagram>,
    atoms: BTreeMap<String, AtomDecl>,
    checks: Vec<Check>,
}

impl FileParser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, FileError> {
        Err(FileError { line: self.line, message: message.into() })
    }

    fn ident<'a>(&self, s: &'a str, what: &str) -> Result<&'a str, FileError> {
        let s = s.trim();
        if is_identifier(s) {
            Ok(s)
        } else {
            self.err(format!("invalid {what} name `{s}`"))
        }
    }

    fn tree(&self, s: &str) -> Result<Tree, FileError> {
        parse_tree(s.trim()).or_else(|e| self.err(format!("bad tree `{}`: {}", s.trim(), e.message)))
    }

    // Fixes the diagram kind on first use and rejects mixing.
    fn diagram(&mut self, kind: DiagramKind) -> Result<&mut Diagram, FileError> {
        match &self.diagram {
            Some(d) if d.kind() != kind => {
                let line = self.line;
                return Err(FileError { line, message: "typed and untyped declarations cannot be mixed".into() });
            }
            Some(_) => {}
            None => {
                self.diagram = Some(match kind {
                    DiagramKind::Typed => Diagram::typed(),
                    DiagramKind::Untyped => Diagram::untyped(),
                })
            }
        }
        Ok(self.diagram.as_mut().unwrap())
    }

    fn statement(&mut self, line: &str) -> Result<(), FileError> {
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match keyword {
            "object" => self.object(rest),
            "node" => self.node(rest),
            "atom" => self.atom(rest),
            "arrow" => self.arrow(rest),
            "check" => self.check(rest),
            other => self.err(format!("unknown directive `{other}`")),
        }
    }

    fn object(&mut self, rest: &str) -> Result<(), FileError> {
        let Some((name, tree)) = rest.split_once('=') else {
            return self.err("expected `object <id> = <tree>`");
        };
        let name = self.ident(name, "object")?.to_string();
        let tree = self.tree(tree)?;
        let line = self.line;
        self.diagram(DiagramKind::Typed)?
            .add_object(&name, tree)
            .map(|_| ())
            .map_err(|e| FileError { line, message: e.to_string() })
    }

    fn node(&mut self, rest: &str) -> Result<(), FileError> {
        let name = self.ident(rest, "node")?.to_string();
        let line = self.line;
        self.diagram(DiagramKind::Untyped)?
            .add_node(&name)
            .map(|_| ())
            .map_err(|e| FileError { line, message: e.to_string() })
    }

    fn atom(&mut self, rest: &str) -> Result<(), FileError> {
        let mut body = rest.trim();
        let mut invertible = true;
        if let Some(head) = body.strip_suffix("partial") {
            if head.is_empty() || head.ends_with(char::is_whitespace) {
                body = head.trim_end();
                invertible = false;
            }
        }
        let (name, signature) = match body.split_once(':') {
            Some((name, sig)) => {
                let Some((s, t)) = sig.split_once("->") else {
                    return self.err("expected `atom <id> : <tree> -> <tree>`");
                };
                (name, Some((self.tree(s)?, self.tree(t)?)))
            }
            None => (body, None),
        };
        let name = self.ident(name, "atom")?.to_string();
        if self.atoms.contains_key(&name) {
            return self.err(format!("atom `{name}` is declared twice"));
        }
        let kind = if signature.is_some() { DiagramKind::Typed } else { DiagramKind::Untyped };
        self.diagram(kind)?;
        self.atoms.insert(name.clone(), AtomDecl { name, signature, invertible });
        Ok(())
    }

    fn arrow(&mut self, rest: &str) -> Result<(), FileError> {
        let parsed = rest.split_once(':').and_then(|(name, tail)| {
            let (ends, term) = tail.split_once('=')?;
            let (src, tgt) = ends.split_once("->")?;
            Some((name, src, tgt, term))
        });
        let Some((name, src, tgt, term)) = parsed else {
            return self.err("expected `arrow <id> : <src> -> <tgt> = <term>`");
        };
        let name = self.ident(name, "arrow")?.to_string();
        let Some(d) = &self.diagram else {
            return self.err("arrow declared before any node");
        };
        let lookup = |n: &str| d.node_by_name(n.trim());
        let (Some(s), Some(t)) = (lookup(src), lookup(tgt)) else {
            let missing = if lookup(src).is_none() { src } else { tgt };
            return self.err(format!("undeclared node `{}`", missing.trim()));
        };
        let label = if d.is_typed() {
            let atoms = |n: &str| {
                let decl = self.atoms.get(n)?;
                let (src, tgt) = decl.signature.clone()?;
                Some(AtomSig { name: n.to_string(), src, tgt, invertible: decl.invertible })
            };
            EdgeLabel::Typed(parse_arrow_term(term.trim(), &atoms).or_else(|e| self.err(e.to_string()))?)
        } else {
            let invertible = |n: &str| self.atoms.get(n).is_none_or(|a| a.invertible);
            EdgeLabel::Untyped(parse_monoid_term(term.trim(), &invertible).or_else(|e| self.err(e.to_string()))?)
        };
        let line = self.line;
        self.diagram
            .as_mut()
            .unwrap()
            .add_edge(&name, s, t, label)
            .map(|_| ())
            .map_err(|e| FileError { line, message: e.to_string() })
    }

    fn path(&self, expr: &str) -> Result<Path, FileError> {
        let Some(d) = &self.diagram else {
            return self.err("check before any arrow");
        };
        expr.split(';')
            .map(|name| {
                let name = name.trim();
                d.edge_by_name(name).map_or_else(|| self.err(format!("undeclared arrow `{name}`")), Ok)
            })
            .collect()
    }

    fn check(&mut self, rest: &str) -> Result<(), FileError> {
        if rest.trim() == "all" {
            self.checks.push(Check::All);
            return Ok(());
        }
        let Some((lhs, rhs)) = rest.split_once('=') else {
            return self.err("expected `check <path> = <path>` or `check all`");
        };
        let (lhs, rhs) = (self.path(lhs)?, self.path(rhs)?);
        let d = self.diagram.as_ref().unwrap();
        let l = d.path_endpoints(&lhs).or_else(|e| self.err(e))?;
        let r = d.path_endpoints(&rhs).or_else(|e| self.err(e))?;
        if l != r {
            return self.err("the two paths are not parallel");
        }
        self.checks.push(Check::Paths(lhs, rhs));
        Ok(())
    }
}

fn path_text(d: &Diagram, p: &[EdgeId]) -> String {
    p.iter().map(|&e| d.edge(e).name.as_str()).collect::<Vec<_>>().join(";")
}

impl fmt::Display for DiagramFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.diagram;
        for a in &self.atoms {
            write!(f, "atom {}", a.name)?;
            if let Some((s, t)) = &a.signature {
                write!(f, " : {s} -> {t}")?;
            }
            writeln!(f, "{}", if a.invertible { "" } else { " partial" })?;
        }
        for n in d.nodes() {
            match &n.label {
                Some(t) => writeln!(f, "object {} = {t}", n.name)?,
                None => writeln!(f, "node {}", n.name)?,
            }
        }
        for e in d.edges() {
            writeln!(f, "arrow {} : {} -> {} = {}", e.name, d.node(e.src).name, d.node(e.tgt).name, e.label)?;
        }
        for c in &self.checks {
            match c {
                Check::All => writeln!(f, "check all")?,
                Check::Paths(l, r) => writeln!(f, "check {} = {}", path_text(d, l), path_text(d, r))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TYPED: &str = "\
# naturality of the associator
atom f : x -> x
atom g : x -> x partial
object s = (x*(x*x))
object t = ((x*x)*x)
arrow a : s -> t = tau(x,x,x)
arrow b : s -> s = f # (g # f)
arrow c : t -> t = (f # g) # f
check b;a = a;c
";

    #[test]
    fn typed_file_round_trips() {
        let f = DiagramFile::parse(TYPED).unwrap();
        assert!(f.diagram.is_typed());
        assert_eq!(f.diagram.edges().len(), 3);
        assert!(!f.atoms[1].invertible);
        let again = DiagramFile::parse(&f.to_string()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn untyped_file_round_trips() {
        let text = "atom p partial\nnode a\nnode b\narrow f : a -> b = alpha . p # one\narrow g : a -> b = one\ncheck all\n";
        let f = DiagramFile::parse(text).unwrap();
        assert!(!f.diagram.is_typed());
        assert_eq!(f.to_string(), text);
        assert_eq!(DiagramFile::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("node a\nobject b = x\n", 2),
            ("node a\narrow f : a -> c = one\n", 2),
            ("object a = (x*\n", 1),
            ("node a\n\n# c\narrow f : a -> a = tau(x,x,x)\n", 4),
            ("node a\nnode b\narrow f : a -> b = one\narrow g : b -> a = one\ncheck f = g\n", 5),
            ("frobnicate\n", 1),
            ("node a\nnode a\n", 2),
            ("object a = x\narrow f : a -> a = h\n", 2),
        ];
        for (text, line) in cases {
            let e = DiagramFile::parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
    }

    #[test]
    fn missing_checks_mean_all() {
        let f = DiagramFile::parse("node a\n").unwrap();
        assert_eq!(f.effective_checks(), vec![Check::All]);
    }
}
