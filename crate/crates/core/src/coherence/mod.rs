//! Diagrams and the commutativity decision pipeline.
//!
//! A diagram is first flattened to the endomorphism monoid of the generator.
//! If it has no atoms and the flattened edges admit a consistent typing by
//! associativity arrows (found by unification), every such typing commutes and
//! the diagram is reported as guaranteed. Otherwise all parallel composites are
//! compared exactly in the naturals model.

mod diagram;
mod paths;
mod unify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use diagram::{Diagram, DiagramError, DiagramKind, Edge, EdgeId, EdgeLabel, Node, NodeId, Path};
pub use paths::{parallel_pairs, simple_paths};
pub use unify::{lift, unify, Equation, LiftError, Lifted, Lifter, Substitution};

use crate::model_nat::witness_between;
use crate::model_nat::{compose, eval_monoid_term, AtomEnv, EvalError, ResidueMap, Witness};
use crate::terms::{wsub, xsub, MonoidTerm};
use crate::trees::{Tree, TreePattern, VarId};

/// Scan bound used when none is given.
pub const DEFAULT_BOUND: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid path: {0}")]
    BadPath(String),
    #[error("search bound must be positive")]
    ZeroBound,
    #[error("both diagrams must be typed")]
    NotTyped,
    #[error("ill-typed diagram: {0}")]
    IllTyped(String),
    #[error("not a graph isomorphism: {0}")]
    NotGraphIso(String),
}

/// A consistent associativity typing of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guarantee {
    /// Ground substitution; node `i` is metavariable `i`.
    pub substitution: Substitution,
    node_trees: Vec<Tree>,
}

impl Guarantee {
    pub fn node_tree(&self, n: NodeId) -> &Tree {
        &self.node_trees[n.0]
    }

    pub fn node_trees(&self) -> &[Tree] {
        &self.node_trees
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub lhs_path: Path,
    pub rhs_path: Path,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Guaranteed(Guarantee),
    Refuted(Refutation),
    ModelCommutesUnproven { bound: u64 },
    IllTyped(String),
}

impl Verdict {
    pub fn is_guaranteed(&self) -> bool {
        matches!(self, Verdict::Guaranteed(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Guaranteed(_) => "GUARANTEED",
            Verdict::Refuted(_) => "REFUTED",
            Verdict::ModelCommutesUnproven { .. } => "MODEL_COMMUTES_UNPROVEN",
            Verdict::IllTyped(_) => "ILL_TYPED",
        }
    }
}

fn show_value(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Guaranteed(_) => f.write_str("GUARANTEED"),
            Verdict::Refuted(r) => write!(
                f,
                "REFUTED n={} lhs={} rhs={}",
                r.witness.n,
                show_value(r.witness.lhs),
                show_value(r.witness.rhs)
            ),
            Verdict::ModelCommutesUnproven { bound } => write!(f, "MODEL_COMMUTES_UNPROVEN bound={bound}"),
            Verdict::IllTyped(detail) => write!(f, "ILL_TYPED {detail}"),
        }
    }
}

/// Decides commutativity of every pair of parallel simple paths in `d`.
/// Cycles are compared against the identity.
pub fn decide(d: &Diagram, env: Option<&AtomEnv>, bound: u64) -> Result<Verdict, DecideError> {
    let edges: Vec<EdgeId> = d.edge_ids().collect();
    let allowed = vec![true; edges.len()];
    // Typing is checked before path enumeration so errors surface first.
    if let Err(detail) = d.typecheck_edges(&edges) {
        return Ok(Verdict::IllTyped(detail));
    }
    let pairs = parallel_pairs(d, &allowed);
    run(d, &edges, &pairs, env, bound)
}

/// Decides whether two parallel paths agree, using only their edges.
pub fn decide_paths(
    d: &Diagram,
    lhs: &[EdgeId],
    rhs: &[EdgeId],
    env: Option<&AtomEnv>,
    bound: u64,
) -> Result<Verdict, DecideError> {
    let l = d.path_endpoints(lhs).map_err(DecideError::BadPath)?;
    let r = d.path_endpoints(rhs).map_err(DecideError::BadPath)?;
    if l != r {
        return Err(DecideError::BadPath(format!(
            "{} and {} are not parallel",
            d.path_names(lhs),
            d.path_names(rhs)
        )));
    }
    let edges: Vec<EdgeId> = lhs.iter().chain(rhs).copied().collect::<BTreeSet<_>>().into_iter().collect();
    run(d, &edges, &[(lhs.to_vec(), rhs.to_vec())], env, bound)
}

fn run(
    d: &Diagram,
    edges: &[EdgeId],
    pairs: &[(Path, Path)],
    env: Option<&AtomEnv>,
    bound: u64,
) -> Result<Verdict, DecideError> {
    if bound == 0 {
        return Err(DecideError::ZeroBound);
    }
    if let Err(detail) = d.typecheck_edges(edges) {
        return Ok(Verdict::IllTyped(detail));
    }
    let flat: BTreeMap<EdgeId, MonoidTerm> = edges.iter().map(|&e| (e, d.edge(e).label.flattened())).collect();
    if !flat.values().any(MonoidTerm::has_atoms) {
        if let Some(g) = guarantee(d, &flat) {
            return Ok(Verdict::Guaranteed(g));
        }
    }

    let empty = AtomEnv::new();
    let env = env.unwrap_or(&empty);
    let mut maps = BTreeMap::new();
    for (&e, m) in &flat {
        maps.insert(e, eval_monoid_term(m, env)?);
    }
    let composite = |p: &Path| p.iter().fold(ResidueMap::identity(), |acc, e| compose(&maps[e], &acc));
    for (lhs, rhs) in pairs {
        if let Some(witness) = witness_between(&composite(lhs), &composite(rhs), bound) {
            return Ok(Verdict::Refuted(Refutation { lhs_path: lhs.clone(), rhs_path: rhs.clone(), witness }));
        }
    }
    Ok(Verdict::ModelCommutesUnproven { bound })
}

// One metavariable per node, one lifted typing per edge, all unified.
fn guarantee(d: &Diagram, flat: &BTreeMap<EdgeId, MonoidTerm>) -> Option<Guarantee> {
    let nodes = d.nodes().len() as u32;
    let mut lifter = Lifter::starting_at(nodes);
    for (&e, m) in flat {
        let (s, t) = lifter.lift(m).ok()?;
        let edge = d.edge(e);
        lifter.constrain(TreePattern::Var(VarId(edge.src.0 as u32)), s);
        lifter.constrain(TreePattern::Var(VarId(edge.tgt.0 as u32)), t);
    }
    let mgu = unify(&lifter.into_constraints())?;

    let node_trees: Vec<Tree> =
        (0..nodes).map(|i| mgu.apply(&TreePattern::Var(VarId(i))).ground_with_leaf()).collect();
    let mut ground: BTreeMap<VarId, TreePattern> =
        mgu.iter().map(|(v, p)| (v, p.ground_with_leaf().to_pattern())).collect();
    for (i, t) in node_trees.iter().enumerate() {
        ground.insert(VarId(i as u32), t.to_pattern());
    }
    Some(Guarantee { substitution: Substitution::from_map(ground), node_trees })
}

/// The typed diagram over the trees assigned by `g`, with each edge replaced
/// by the canonical associativity arrow between its endpoint trees.
pub fn strictness_witness(d: &Diagram, g: &Guarantee) -> Diagram {
    let mut w = Diagram::typed();
    for id in d.node_ids() {
        w.add_object(&d.node(id).name, g.node_tree(id).clone()).expect("names are unique in the input");
    }
    for e in d.edges() {
        let (s, t) = (g.node_tree(e.src), g.node_tree(e.tgt));
        let term = wsub(s, t).expect("a consistent typing preserves rank along edges");
        w.add_arrow(&e.name, e.src, e.tgt, term).expect("names are unique in the input");
    }
    w
}

/// A bijection between the nodes and edges of two diagrams that respects
/// sources and targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIso {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
}

impl GraphIso {
    pub fn identity(d: &Diagram) -> GraphIso {
        GraphIso { nodes: d.node_ids().collect(), edges: d.edge_ids().collect() }
    }

    fn validate(&self, d1: &Diagram, d2: &Diagram) -> Result<(), DecideError> {
        let bad = |m: String| Err(DecideError::NotGraphIso(m));
        if self.nodes.len() != d1.nodes().len() || d1.nodes().len() != d2.nodes().len() {
            return bad("node counts differ".into());
        }
        if self.edges.len() != d1.edges().len() || d1.edges().len() != d2.edges().len() {
            return bad("edge counts differ".into());
        }
        let nodes: BTreeSet<_> = self.nodes.iter().filter(|n| n.0 < d2.nodes().len()).collect();
        let edges: BTreeSet<_> = self.edges.iter().filter(|e| e.0 < d2.edges().len()).collect();
        if nodes.len() != self.nodes.len() || edges.len() != self.edges.len() {
            return bad("map is not a bijection".into());
        }
        for (i, e) in d1.edges().iter().enumerate() {
            let image = d2.edge(self.edges[i]);
            if image.src != self.nodes[e.src.0] || image.tgt != self.nodes[e.tgt.0] {
                return bad(format!("edge {} does not map onto an edge between the image nodes", e.name));
            }
        }
        Ok(())
    }
}

/// Whether every square relating an edge of `d1` to its image in `d2`, with
/// the self-similarity arrows between endpoint trees as verticals, commutes.
pub fn sim_equivalent(
    d1: &Diagram,
    d2: &Diagram,
    eta: &GraphIso,
    env: Option<&AtomEnv>,
    bound: u64,
) -> Result<bool, DecideError> {
    if !d1.is_typed() || !d2.is_typed() {
        return Err(DecideError::NotTyped);
    }
    eta.validate(d1, d2)?;
    for d in [d1, d2] {
        let all: Vec<_> = d.edge_ids().collect();
        d.typecheck_edges(&all).map_err(DecideError::IllTyped)?;
    }
    let tree = |d: &Diagram, n: NodeId| d.node(n).label.clone().expect("typed diagrams label every node");

    for (i, e) in d1.edges().iter().enumerate() {
        let image = d2.edge(eta.edges[i]);
        let (ts, tt) = (tree(d1, e.src), tree(d1, e.tgt));
        let (us, ut) = (tree(d2, image.src), tree(d2, image.tgt));

        let mut sq = Diagram::typed();
        let n_ts = sq.add_object("top_src", ts.clone()).unwrap();
        let n_tt = sq.add_object("top_tgt", tt.clone()).unwrap();
        let n_us = sq.add_object("bottom_src", us.clone()).unwrap();
        let n_ut = sq.add_object("bottom_tgt", ut.clone()).unwrap();
        let top = sq.add_edge("top", n_ts, n_tt, e.label.clone()).unwrap();
        let bottom = sq.add_edge("bottom", n_us, n_ut, image.label.clone()).unwrap();
        let left = sq.add_arrow("left", n_us, n_ts, xsub(&us, &ts)).unwrap();
        let right = sq.add_arrow("right", n_ut, n_tt, xsub(&ut, &tt)).unwrap();

        if decide_paths(&sq, &[left, top], &[bottom, right], env, bound)?.is_refuted() {
            return Ok(false);
        }
    }
    Ok(true)
}
