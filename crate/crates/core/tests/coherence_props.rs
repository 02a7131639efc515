mod common;

use common::*;
use selfsim::coherence::{
    decide, parallel_pairs, sim_equivalent, strictness_witness, Diagram, EdgeLabel, GraphIso, Verdict,
};
use selfsim::model_nat::{compose, eval_monoid_term, AtomEnv, ResidueMap};
use selfsim::terms::{alpha_expansion, xsub, ArrowTerm};
use selfsim::trees::enumerate_trees;

const BOUND: u64 = 4096;

fn flattened_composites(d: &Diagram, env: &AtomEnv) -> Vec<(ResidueMap, ResidueMap)> {
    let maps: Vec<ResidueMap> = d.edges().iter().map(|e| eval_monoid_term(&e.label.flattened(), env).unwrap()).collect();
    let composite = |p: &Vec<selfsim::coherence::EdgeId>| {
        p.iter().fold(ResidueMap::identity(), |acc, e| compose(&maps[e.0], &acc))
    };
    let all = vec![true; d.edges().len()];
    parallel_pairs(d, &all).iter().map(|(l, r)| (composite(l), composite(r))).collect()
}

#[test]
fn guaranteed_verdicts_are_sound() {
    let empty = AtomEnv::new();
    let mut guaranteed = 0;
    for seed in 0..600 {
        let d = random_canonical_diagram(seed, 5);
        let v = decide(&d, None, BOUND).unwrap();
        if !v.is_guaranteed() {
            continue;
        }
        guaranteed += 1;
        for (l, r) in flattened_composites(&d, &empty) {
            assert_eq!(l, r, "seed {seed}");
        }
        // Independent pointwise route on a prefix.
        let all = vec![true; d.edges().len()];
        for (l, r) in parallel_pairs(&d, &all) {
            for n in 0..256 {
                assert_eq!(typed_path_at(&d, &l, n, &empty), typed_path_at(&d, &r, n, &empty), "seed {seed} n {n}");
            }
        }
    }
    println!("{guaranteed} of 600 random canonical diagrams guaranteed");
    assert!(guaranteed >= 100, "only {guaranteed} guaranteed diagrams");
}

#[test]
fn refutations_are_genuine() {
    for seed in 0..300 {
        let (d, env) = random_atom_diagram(seed, 4);
        let v = decide(&d, Some(&env), BOUND).unwrap();
        if d.has_atoms() {
            assert!(!v.is_guaranteed(), "seed {seed}");
        }
        if let Verdict::Refuted(r) = v {
            let lhs = typed_path_at(&d, &r.lhs_path, r.witness.n, &env);
            let rhs = typed_path_at(&d, &r.rhs_path, r.witness.n, &env);
            assert_eq!((lhs, rhs), (r.witness.lhs, r.witness.rhs), "seed {seed}");
            assert_ne!(lhs, rhs);
        }
    }
}

#[test]
fn flattening_agrees_with_typed_evaluation() {
    for seed in 0..100 {
        let (d, env) = random_atom_diagram(1000 + seed, 4);
        let all = vec![true; d.edges().len()];
        for ((l, r), (fl, fr)) in parallel_pairs(&d, &all).iter().zip(flattened_composites(&d, &env)) {
            for n in 0..512 {
                assert_eq!(typed_path_at(&d, l, n, &env), fl.apply(n));
                assert_eq!(typed_path_at(&d, r, n, &env), fr.apply(n));
            }
        }
    }
}

// Retypes every node of `d` and conjugates each edge by self-similarity
// arrows, so that every vertical square commutes by construction.
fn conjugated(d: &Diagram, seed: u64) -> Diagram {
    let mut rng = rng(seed);
    let mut out = Diagram::typed();
    let trees: Vec<_> = d.nodes().iter().map(|_| random_tree(&mut rng, 4)).collect();
    for (n, t) in d.nodes().iter().zip(&trees) {
        out.add_object(&n.name, t.clone()).unwrap();
    }
    for e in d.edges() {
        let EdgeLabel::Typed(f) = &e.label else { unreachable!() };
        let ts = d.node(e.src).label.as_ref().unwrap();
        let tt = d.node(e.tgt).label.as_ref().unwrap();
        let g = ArrowTerm::compose(xsub(tt, &trees[e.tgt.0]), ArrowTerm::compose(f.clone(), xsub(&trees[e.src.0], ts)));
        out.add_arrow(&e.name, e.src, e.tgt, g).unwrap();
    }
    out
}

#[test]
fn equivalent_diagrams_commute_together() {
    let mut agreements = 0;
    for seed in 0..150 {
        let (d1, env) = random_atom_diagram(5000 + seed, 3);
        let d2 = conjugated(&d1, seed);
        assert!(sim_equivalent(&d1, &d2, &GraphIso::identity(&d1), Some(&env), BOUND).unwrap(), "seed {seed}");
        let v1 = decide(&d1, Some(&env), BOUND).unwrap();
        let v2 = decide(&d2, Some(&env), BOUND).unwrap();
        assert_eq!(v1.is_refuted(), v2.is_refuted(), "seed {seed}: {v1} vs {v2}");
        agreements += 1;
    }
    assert_eq!(agreements, 150);
}

#[test]
fn strictness_witnesses_are_equivalent() {
    let mut checked = 0;
    for seed in 0..300 {
        let d = random_canonical_diagram(seed, 4);
        let Verdict::Guaranteed(g) = decide(&d, None, BOUND).unwrap() else { continue };
        let w = strictness_witness(&d, &g);
        for id in w.node_ids() {
            assert_eq!(w.node(id).label.as_ref(), Some(g.node_tree(id)));
        }
        assert!(decide(&w, None, BOUND).unwrap().is_guaranteed(), "seed {seed}");
        assert!(sim_equivalent(&d, &w, &GraphIso::identity(&d), None, BOUND).unwrap(), "seed {seed}");
        checked += 1;
    }
    assert!(checked >= 50, "{checked}");
}

#[test]
fn replacing_an_edge_breaks_equivalence() {
    let x = selfsim::trees::Tree::Leaf;
    for r in 1..=4 {
        for u in enumerate_trees(r) {
            let v = enumerate_trees(r).last().unwrap().clone();
            let mut d1 = Diagram::typed();
            let a = d1.add_object("a", u.clone()).unwrap();
            let b = d1.add_object("b", v.clone()).unwrap();
            let mut d2 = d1.clone();
            d1.add_arrow("e", a, b, xsub(&u, &v)).unwrap();
            // Same endpoints, but routed through the associator on x.
            let alt = ArrowTerm::compose(xsub(&x, &v), ArrowTerm::compose(alpha_expansion(), xsub(&u, &x)));
            d2.add_arrow("e", a, b, alt).unwrap();
            assert!(!sim_equivalent(&d1, &d2, &GraphIso::identity(&d1), None, BOUND).unwrap(), "{u} -> {v}");
        }
    }
}
