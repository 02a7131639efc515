use std::fmt;

use thiserror::Error;

use crate::terms::{flatten, ArrowTerm, MonoidTerm};
use crate::trees::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

/// A sequence of edges, traversed first to last.
pub type Path = Vec<EdgeId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramKind {
    /// Nodes carry trees, edges carry typed arrows.
    Typed,
    /// Every node is the generator, edges carry monoid terms.
    Untyped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub label: Option<Tree>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeLabel {
    Typed(ArrowTerm),
    Untyped(MonoidTerm),
}

impl EdgeLabel {
    pub fn flattened(&self) -> MonoidTerm {
        match self {
            EdgeLabel::Typed(f) => flatten(f),
            EdgeLabel::Untyped(m) => m.clone(),
        }
    }

    pub fn has_atoms(&self) -> bool {
        match self {
            EdgeLabel::Typed(f) => f.has_atoms(),
            EdgeLabel::Untyped(m) => m.has_atoms(),
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Typed(t) => t.fmt(f),
            EdgeLabel::Untyped(m) => m.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: NodeId,
    pub tgt: NodeId,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("name `{0}` is already used")]
    DuplicateName(String),
    #[error("a {0} diagram cannot hold this element")]
    KindMismatch(&'static str),
    #[error("unknown node {0:?}")]
    UnknownNode(NodeId),
}

/// A directed multigraph with tree-labelled nodes (typed) or unlabelled
/// nodes (untyped), and term-labelled edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    kind: DiagramKind,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl Diagram {
    pub fn typed() -> Diagram {
        Diagram { kind: DiagramKind::Typed, nodes: Vec::new(), edges: Vec::new() }
    }

    pub fn untyped() -> Diagram {
        Diagram { kind: DiagramKind::Untyped, nodes: Vec::new(), edges: Vec::new() }
    }

    pub fn kind(&self) -> DiagramKind {
        self.kind
    }

    pub fn is_typed(&self) -> bool {
        self.kind == DiagramKind::Typed
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.name == name).map(NodeId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    fn check_fresh(&self, name: &str) -> Result<(), DiagramError> {
        if self.node_by_name(name).is_some() || self.edge_by_name(name).is_some() {
            return Err(DiagramError::DuplicateName(name.to_string()));
        }
        Ok(())
    }

    fn check_node(&self, id: NodeId) -> Result<(), DiagramError> {
        if id.0 >= self.nodes.len() {
            return Err(DiagramError::UnknownNode(id));
        }
        Ok(())
    }

    /// Adds a tree-labelled node to a typed diagram.
    pub fn add_object(&mut self, name: &str, tree: Tree) -> Result<NodeId, DiagramError> {
        if !self.is_typed() {
            return Err(DiagramError::KindMismatch("untyped"));
        }
        self.check_fresh(name)?;
        self.nodes.push(Node { name: name.to_string(), label: Some(tree) });
        Ok(NodeId(self.nodes.len() - 1))
    }

    /// Adds an unlabelled node to an untyped diagram.
    pub fn add_node(&mut self, name: &str) -> Result<NodeId, DiagramError> {
        if self.is_typed() {
            return Err(DiagramError::KindMismatch("typed"));
        }
        self.check_fresh(name)?;
        self.nodes.push(Node { name: name.to_string(), label: None });
        Ok(NodeId(self.nodes.len() - 1))
    }

    pub fn add_edge(&mut self, name: &str, src: NodeId, tgt: NodeId, label: EdgeLabel) -> Result<EdgeId, DiagramError> {
        match (&label, self.kind) {
            (EdgeLabel::Typed(_), DiagramKind::Typed) | (EdgeLabel::Untyped(_), DiagramKind::Untyped) => {}
            (_, DiagramKind::Typed) => return Err(DiagramError::KindMismatch("typed")),
            (_, DiagramKind::Untyped) => return Err(DiagramError::KindMismatch("untyped")),
        }
        self.check_fresh(name)?;
        self.check_node(src)?;
        self.check_node(tgt)?;
        self.edges.push(Edge { name: name.to_string(), src, tgt, label });
        Ok(EdgeId(self.edges.len() - 1))
    }

    pub fn add_arrow(&mut self, name: &str, src: NodeId, tgt: NodeId, term: ArrowTerm) -> Result<EdgeId, DiagramError> {
        self.add_edge(name, src, tgt, EdgeLabel::Typed(term))
    }

    pub fn add_monoid_edge(
        &mut self,
        name: &str,
        src: NodeId,
        tgt: NodeId,
        term: MonoidTerm,
    ) -> Result<EdgeId, DiagramError> {
        self.add_edge(name, src, tgt, EdgeLabel::Untyped(term))
    }

    pub fn has_atoms(&self) -> bool {
        self.edges.iter().any(|e| e.label.has_atoms())
    }

    /// Checks each edge term and its agreement with the endpoint labels.
    pub fn typecheck_edges(&self, edges: &[EdgeId]) -> Result<(), String> {
        for &id in edges {
            let e = self.edge(id);
            match &e.label {
                EdgeLabel::Typed(term) => {
                    let (s, t) = term.typecheck().map_err(|err| format!("edge {}: {err}", e.name))?;
                    for (node, tree, end) in [(e.src, s, "source"), (e.tgt, t, "target")] {
                        let label = self.node(node).label.as_ref().expect("typed diagrams label every node");
                        if *label != tree {
                            return Err(format!(
                                "edge {}: {end} is {tree} but node {} is {label}",
                                e.name,
                                self.node(node).name
                            ));
                        }
                    }
                }
                EdgeLabel::Untyped(m) => {
                    if let Some(atom) = m.inverted_partial_atom() {
                        return Err(format!("edge {}: cannot invert non-invertible atom `{atom}`", e.name));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that consecutive edges meet; returns the endpoints.
    pub fn path_endpoints(&self, path: &[EdgeId]) -> Result<(NodeId, NodeId), String> {
        let first = path.first().ok_or_else(|| "empty path".to_string())?;
        for &id in path {
            if id.0 >= self.edges.len() {
                return Err(format!("unknown edge {id:?}"));
            }
        }
        for pair in path.windows(2) {
            let (a, b) = (self.edge(pair[0]), self.edge(pair[1]));
            if a.tgt != b.src {
                return Err(format!("edge {} does not end where edge {} starts", a.name, b.name));
            }
        }
        Ok((self.edge(*first).src, self.edge(*path.last().unwrap()).tgt))
    }

    pub fn path_names(&self, path: &[EdgeId]) -> String {
        if path.is_empty() {
            return "(identity)".to_string();
        }
        path.iter().map(|&e| self.edge(e).name.as_str()).collect::<Vec<_>>().join(";")
    }
}
