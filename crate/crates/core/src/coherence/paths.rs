use super::diagram::{Diagram, EdgeId, NodeId, Path};

/// Simple paths from `from` to `to` using only edges with `allowed[e]` set.
///
/// No node is visited twice, except that a path may close back on `from`.
/// When `from == to` the list starts with the empty path, followed by the
/// simple cycles through `from`.
pub fn simple_paths(d: &Diagram, allowed: &[bool], from: NodeId, to: NodeId) -> Vec<Path> {
    let mut out = Vec::new();
    if from == to {
        out.push(Vec::new());
    }
    let mut visited = vec![false; d.nodes().len()];
    visited[from.0] = true;
    let mut path = Vec::new();
    extend(d, allowed, from, to, &mut visited, &mut path, &mut out);
    out
}

fn extend(
    d: &Diagram,
    allowed: &[bool],
    at: NodeId,
    to: NodeId,
    visited: &mut [bool],
    path: &mut Vec<EdgeId>,
    out: &mut Vec<Path>,
) {
    for id in d.edge_ids() {
        let e = d.edge(id);
        if !allowed[id.0] || e.src != at {
            continue;
        }
        path.push(id);
        if e.tgt == to {
            out.push(path.clone());
        } else if !visited[e.tgt.0] {
            visited[e.tgt.0] = true;
            extend(d, allowed, e.tgt, to, visited, path, out);
            visited[e.tgt.0] = false;
        }
        path.pop();
    }
}

/// Every unordered pair of distinct parallel simple paths, node pairs in
/// index order, paths in discovery order.
pub fn parallel_pairs(d: &Diagram, allowed: &[bool]) -> Vec<(Path, Path)> {
    let mut pairs = Vec::new();
    for u in d.node_ids() {
        for v in d.node_ids() {
            let paths = simple_paths(d, allowed, u, v);
            for i in 0..paths.len() {
                for j in i + 1..paths.len() {
                    pairs.push((paths[i].clone(), paths[j].clone()));
                }
            }
        }
    }
    pairs
}
