//! Free non-empty binary trees over a single leaf symbol `x`.
//!
//! Trees are the objects shared by the posetal associativity category, the
//! indiscrete self-similarity category and the free category on the
//! self-similar generator. [`TreePattern`] adds metavariables so that tree
//! shapes can be inferred by unification.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A binary tree whose leaves are all the generator symbol `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Pair(Arc<Tree>, Arc<Tree>),
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree::Leaf
    }

    pub fn pair(left: Tree, right: Tree) -> Tree {
        Tree::Pair(Arc::new(left), Arc::new(right))
    }

    /// Number of leaves.
    pub fn rank(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Pair(l, r) => l.rank() + r.rank(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn children(&self) -> Option<(&Tree, &Tree)> {
        match self {
            Tree::Leaf => None,
            Tree::Pair(l, r) => Some((l, r)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Pair(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn to_pattern(&self) -> TreePattern {
        match self {
            Tree::Leaf => TreePattern::Leaf,
            Tree::Pair(l, r) => TreePattern::pair(l.to_pattern(), r.to_pattern()),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => f.write_str("x"),
            Tree::Pair(l, r) => write!(f, "({l}*{r})"),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn rank(t: &Tree) -> usize {
    t.rank()
}

/// All trees of rank `r`, each exactly once.
///
/// Order: by rank of the left subtree ascending, then recursively by the
/// left and right enumerations. Rank 0 yields nothing.
pub fn enumerate_trees(r: usize) -> Vec<Tree> {
    let mut table: Vec<Vec<Tree>> = vec![Vec::new(), vec![Tree::Leaf]];
    for n in 2..=r {
        let mut level = Vec::new();
        for left_rank in 1..n {
            for l in &table[left_rank] {
                for rt in &table[n - left_rank] {
                    level.push(Tree::pair(l.clone(), rt.clone()));
                }
            }
        }
        table.push(level);
    }
    table.into_iter().nth(r).unwrap_or_default()
}

/// The fully left-nested tree `((x*x)*x)*...` of rank `r` (at least 1).
pub fn left_comb(r: usize) -> Tree {
    assert!(r >= 1, "trees have rank at least 1");
    (1..r).fold(Tree::Leaf, |acc, _| Tree::pair(acc, Tree::Leaf))
}

pub fn print_tree(t: &Tree) -> String {
    t.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("tree syntax error at offset {position}: {message}")]
pub struct TreeParseError {
    pub position: usize,
    pub message: String,
}

/// Parses `T ::= "x" | "(" T "*" T ")"`. Whitespace between tokens is ignored.
pub fn parse_tree(s: &str) -> Result<Tree, TreeParseError> {
    let mut cursor = TreeCursor::new(s);
    let tree = cursor.tree()?;
    cursor.skip_ws();
    if cursor.pos < cursor.bytes.len() {
        return Err(cursor.error("trailing input"));
    }
    Ok(tree)
}

/// Parses a tree prefix of `s`, returning the tree and the number of bytes consumed.
pub(crate) fn parse_tree_prefix(s: &str) -> Result<(Tree, usize), TreeParseError> {
    let mut cursor = TreeCursor::new(s);
    let tree = cursor.tree()?;
    Ok((tree, cursor.pos))
}

struct TreeCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TreeCursor<'a> {
    fn new(s: &'a str) -> Self {
        TreeCursor { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> TreeParseError {
        TreeParseError { position: self.pos, message: message.to_string() }
    }

    fn expect(&mut self, c: u8) -> Result<(), TreeParseError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn tree(&mut self) -> Result<Tree, TreeParseError> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'x') => {
                self.pos += 1;
                Ok(Tree::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                let l = self.tree()?;
                self.expect(b'*')?;
                let r = self.tree()?;
                self.expect(b')')?;
                Ok(Tree::pair(l, r))
            }
            Some(_) => Err(self.error("expected 'x' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Identifier of a unification metavariable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// A tree that may contain metavariables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TreePattern {
    Leaf,
    Pair(Arc<TreePattern>, Arc<TreePattern>),
    Var(VarId),
}

impl TreePattern {
    pub fn pair(left: TreePattern, right: TreePattern) -> TreePattern {
        TreePattern::Pair(Arc::new(left), Arc::new(right))
    }

    pub fn var(id: VarId) -> TreePattern {
        TreePattern::Var(id)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            TreePattern::Leaf => true,
            TreePattern::Var(_) => false,
            TreePattern::Pair(l, r) => l.is_ground() && r.is_ground(),
        }
    }

    pub fn occurs(&self, v: VarId) -> bool {
        match self {
            TreePattern::Leaf => false,
            TreePattern::Var(w) => *w == v,
            TreePattern::Pair(l, r) => l.occurs(v) || r.occurs(v),
        }
    }

    /// Collects variables in left-to-right order, with repeats.
    pub fn vars(&self, out: &mut Vec<VarId>) {
        match self {
            TreePattern::Leaf => {}
            TreePattern::Var(v) => out.push(*v),
            TreePattern::Pair(l, r) => {
                l.vars(out);
                r.vars(out);
            }
        }
    }

    /// The tree, if no metavariable occurs.
    pub fn to_tree(&self) -> Option<Tree> {
        match self {
            TreePattern::Leaf => Some(Tree::Leaf),
            TreePattern::Var(_) => None,
            TreePattern::Pair(l, r) => Some(Tree::pair(l.to_tree()?, r.to_tree()?)),
        }
    }

    /// Replaces every metavariable by the leaf `x`.
    pub fn ground_with_leaf(&self) -> Tree {
        match self {
            TreePattern::Leaf | TreePattern::Var(_) => Tree::Leaf,
            TreePattern::Pair(l, r) => Tree::pair(l.ground_with_leaf(), r.ground_with_leaf()),
        }
    }
}

impl From<&Tree> for TreePattern {
    fn from(t: &Tree) -> Self {
        t.to_pattern()
    }
}

impl fmt::Display for TreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreePattern::Leaf => f.write_str("x"),
            TreePattern::Var(v) => write!(f, "{v}"),
            TreePattern::Pair(l, r) => write!(f, "({l}*{r})"),
        }
    }
}

impl fmt::Debug for TreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Tree {
        Tree::Leaf
    }

    fn p(l: Tree, r: Tree) -> Tree {
        Tree::pair(l, r)
    }

    // Independent recursive counter: number of binary trees with n leaves.
    fn brute_count(n: usize) -> usize {
        if n == 1 {
            return 1;
        }
        (1..n).map(|k| brute_count(k) * brute_count(n - k)).sum()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&x()), 1);
        assert_eq!(rank(&p(p(x(), x()), x())), 3);
        assert_eq!(rank(&p(x(), p(x(), p(x(), x())))), 4);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_trees(1), vec![x()]);
        assert_eq!(enumerate_trees(3).len(), 2);
        assert_eq!(enumerate_trees(4).len(), 5);
        for r in 1..=10 {
            let trees = enumerate_trees(r);
            assert_eq!(trees.len(), brute_count(r), "rank {r}");
            let mut dedup = trees.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), trees.len());
            assert!(trees.iter().all(|t| t.rank() == r));
        }
    }

    #[test]
    fn enumeration_order_is_left_rank_ascending() {
        let trees = enumerate_trees(3);
        assert_eq!(trees[0], p(x(), p(x(), x())));
        assert_eq!(trees[1], p(p(x(), x()), x()));
    }

    #[test]
    fn left_comb_shapes() {
        assert_eq!(left_comb(1), x());
        assert_eq!(left_comb(2), p(x(), x()));
        assert_eq!(left_comb(3), p(p(x(), x()), x()));
        for r in 1..12 {
            assert_eq!(left_comb(r).rank(), r);
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_tree("x").unwrap(), x());
        assert_eq!(parse_tree("((x*x)*x)").unwrap(), p(p(x(), x()), x()));
        let err = parse_tree("(x*").unwrap_err();
        assert_eq!(err.position, 3);
        assert!(parse_tree("x x").is_err());
        assert!(parse_tree("(x*y)").is_err());
    }

    #[test]
    fn parse_print_round_trip() {
        for r in 1..=8 {
            for t in enumerate_trees(r) {
                assert_eq!(parse_tree(&print_tree(&t)).unwrap(), t);
            }
        }
    }

    #[test]
    fn pattern_coercion_is_lossless() {
        for t in enumerate_trees(5) {
            let pat = t.to_pattern();
            assert!(pat.is_ground());
            assert_eq!(pat.to_tree(), Some(t));
        }
        let open = TreePattern::pair(TreePattern::Leaf, TreePattern::var(VarId(0)));
        assert_eq!(open.to_tree(), None);
        assert_eq!(open.ground_with_leaf(), p(x(), x()));
    }
}
