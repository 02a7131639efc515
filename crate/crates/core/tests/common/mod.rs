#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfsim::coherence::{Diagram, EdgeLabel, NodeId};
use selfsim::model_nat::typed::convolve_at;
use selfsim::model_nat::{random_map, random_partial_map, AtomEnv, ResidueMap};
use selfsim::terms::{wsub, xsub, ArrowTerm, AtomSig};
use selfsim::trees::{enumerate_trees, Tree};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tree(rng: &mut ChaCha8Rng, max_rank: usize) -> Tree {
    let r = rng.gen_range(1..=max_rank);
    enumerate_trees(r).choose(rng).unwrap().clone()
}

/// Atom-free arrows from `u` to `v` built from the canonical constructors.
pub fn canonical_arrows(u: &Tree, v: &Tree) -> Vec<ArrowTerm> {
    let mut out = vec![xsub(u, v)];
    if let Some(w) = wsub(u, v) {
        out.push(w);
    }
    if u == v {
        out.push(ArrowTerm::Id(u.clone()));
    }
    if let (Some((a, bc)), Some((ab, c2))) = (u.children(), v.children()) {
        if let (Some((b, c)), Some((a2, b2))) = (bc.children(), ab.children()) {
            if a == a2 && b == b2 && c == c2 {
                out.push(ArrowTerm::Tau(a.clone(), b.clone(), c.clone()));
            }
        }
        let (ul, ur) = u.children().unwrap();
        let (vl, vr) = v.children().unwrap();
        out.push(ArrowTerm::tensor(xsub(ul, vl), xsub(ur, vr)));
        if let (Some(l), Some(r)) = (wsub(ul, vl), wsub(ur, vr)) {
            out.push(ArrowTerm::tensor(l, r));
        }
    }
    if v.is_leaf() {
        out.push(selfsim::terms::code_term(u));
    }
    if u.is_leaf() {
        out.push(ArrowTerm::Decode(v.clone()));
    }
    out
}

/// A typed atom-free diagram on 2..=5 nodes, trees of rank at most `max_rank`.
pub fn random_canonical_diagram(seed: u64, max_rank: usize) -> Diagram {
    let mut rng = rng(seed);
    let mut d = Diagram::typed();
    let n = rng.gen_range(2..=5);
    // Nodes of equal rank make wsub and tau edges likely.
    let base = rng.gen_range(1..=max_rank);
    for i in 0..n {
        let r = if rng.gen_bool(0.7) { base } else { rng.gen_range(1..=max_rank) };
        let t = enumerate_trees(r).choose(&mut rng).unwrap().clone();
        d.add_object(&format!("n{i}"), t).unwrap();
    }
    let m = rng.gen_range(1..=6);
    for j in 0..m {
        let s = NodeId(rng.gen_range(0..n));
        let t = NodeId(rng.gen_range(0..n));
        let u = d.node(s).label.clone().unwrap();
        let v = d.node(t).label.clone().unwrap();
        let term = canonical_arrows(&u, &v).choose(&mut rng).unwrap().clone();
        d.add_arrow(&format!("e{j}"), s, t, term).unwrap();
    }
    d
}

/// A typed diagram whose edges mix canonical arrows and atoms, with a
/// matching environment of random bindings.
pub fn random_atom_diagram(seed: u64, max_rank: usize) -> (Diagram, AtomEnv) {
    let mut rng = rng(seed);
    let mut d = Diagram::typed();
    let mut env = AtomEnv::new();
    let n = rng.gen_range(2..=4);
    for i in 0..n {
        let t = random_tree(&mut rng, max_rank);
        d.add_object(&format!("n{i}"), t).unwrap();
    }
    let m = rng.gen_range(2..=5);
    for j in 0..m {
        let s = NodeId(rng.gen_range(0..n));
        let t = NodeId(rng.gen_range(0..n));
        let u = d.node(s).label.clone().unwrap();
        let v = d.node(t).label.clone().unwrap();
        let term = if rng.gen_bool(0.5) {
            let name = format!("f{j}");
            let invertible = rng.gen_bool(0.8);
            let map = if invertible {
                random_map(rng.gen(), rng.gen_range(1..=6))
            } else {
                random_partial_map(rng.gen(), rng.gen_range(2..=6))
            };
            env.bind(name.clone(), map);
            let atom = ArrowTerm::Atom(AtomSig { name, src: u.clone(), tgt: v.clone(), invertible });
            // Sometimes sandwich the atom between canonical arrows.
            if rng.gen_bool(0.3) {
                let pre = canonical_arrows(&u, &u).choose(&mut rng).unwrap().clone();
                ArrowTerm::compose(atom, pre)
            } else {
                atom
            }
        } else {
            canonical_arrows(&u, &v).choose(&mut rng).unwrap().clone()
        };
        d.add_arrow(&format!("e{j}"), s, t, term).unwrap();
    }
    (d, env)
}

/// Pointwise value of a path through the typed evaluator, `None` when undefined.
pub fn typed_path_at(d: &Diagram, path: &[selfsim::coherence::EdgeId], n: u64, env: &AtomEnv) -> Option<u64> {
    let mut cur = Some(n);
    for &e in path {
        let edge = d.edge(e);
        let EdgeLabel::Typed(f) = &edge.label else { panic!("typed diagram expected") };
        let src = d.node(edge.src).label.as_ref().unwrap();
        let tgt = d.node(edge.tgt).label.as_ref().unwrap();
        cur = convolve_at(f, src, tgt, cur?, env).unwrap();
    }
    cur
}

/// Independent pointwise inverse of a residue map, solved piece by piece.
pub fn inverse_at(m: &ResidueMap, n: u64) -> Option<u64> {
    m.pieces().iter().find_map(|p| {
        let modulus = 1u64 << p.k_out;
        (n % modulus == p.r_out).then(|| p.r + (1u64 << p.k) * (n / modulus))
    })
}
