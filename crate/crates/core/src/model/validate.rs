use std::collections::HashSet;
use std::fmt;

use super::{replay_tracking, GraphClass, Instance, ModelError, Node, Solution, Vertex};

/// A way in which a claimed solution fails to extend the partial representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IllegalOp { mod_type: super::ModType },
    HostNotPath,
    EmptySubtree(Vertex),
    NodeOutOfRange(Vertex, Node),
    Disconnected(Vertex),
    NotAPath(Vertex),
    /// `uv` is an edge but the subtrees are disjoint.
    MissingIntersection(Vertex, Vertex),
    /// The subtrees meet but `uv` is not an edge.
    SpuriousIntersection(Vertex, Vertex),
    PredrawnChanged(Vertex),
    /// `R_inner` is a strict subset of `R_outer`.
    ProperContainment { inner: Vertex, outer: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IllegalOp { mod_type } => write!(f, "derivation not allowed for {mod_type}"),
            Violation::HostNotPath => write!(f, "host tree is not a path"),
            Violation::EmptySubtree(v) => write!(f, "vertex {v} has an empty subtree"),
            Violation::NodeOutOfRange(v, x) => write!(f, "vertex {v} uses missing node {x}"),
            Violation::Disconnected(v) => write!(f, "subtree of {v} is disconnected"),
            Violation::NotAPath(v) => write!(f, "subtree of {v} is not a path"),
            Violation::MissingIntersection(u, v) => write!(f, "edge {u}-{v} not represented"),
            Violation::SpuriousIntersection(u, v) => {
                write!(f, "subtrees of non-adjacent {u} and {v} intersect")
            }
            Violation::PredrawnChanged(v) => write!(f, "pre-drawn subtree of {v} changed"),
            Violation::ProperContainment { inner, outer } => {
                write!(f, "subtree of {inner} strictly inside subtree of {outer}")
            }
        }
    }
}

/// Checks that `solution` is a representation of the instance's graph and class
/// that extends its partial representation. An empty list means valid.
pub fn validate_representation(
    instance: &Instance,
    solution: &Solution,
) -> Result<Vec<Violation>, ModelError> {
    let graph = &instance.graph;
    let n = graph.n();
    if solution.rep.0.len() != n {
        return Err(ModelError::RepresentationSize {
            got: solution.rep.0.len(),
            expected: n,
        });
    }
    let mut expected_predrawn: Vec<Vec<Node>> = instance
        .partial
        .predrawn
        .values()
        .map(|s| s.nodes().to_vec())
        .collect();
    let derived = replay_tracking(&instance.partial.tree, &solution.derivation, &mut expected_predrawn)?;
    if derived != solution.tree {
        return Err(ModelError::DerivationMismatch);
    }
    let tree = &solution.tree;
    let mut out = Vec::new();

    if !solution.derivation.legal_for(instance.mod_type) {
        out.push(Violation::IllegalOp {
            mod_type: instance.mod_type,
        });
    }
    let class = instance.class;
    let path_host = tree.is_path();
    if class.needs_path_host() && !path_host {
        out.push(Violation::HostNotPath);
    }

    let mut usable = vec![true; n];
    for (v, sub) in solution.rep.0.iter().enumerate() {
        if sub.is_empty() {
            out.push(Violation::EmptySubtree(v));
            usable[v] = false;
            continue;
        }
        if let Some(&x) = sub.nodes().iter().find(|&&x| x >= tree.node_count()) {
            out.push(Violation::NodeOutOfRange(v, x));
            usable[v] = false;
            continue;
        }
        if !tree.is_connected_set(sub.nodes()) {
            out.push(Violation::Disconnected(v));
        } else if class.needs_path_subtrees() && !tree.is_path_set(sub.nodes()) {
            out.push(Violation::NotAPath(v));
        }
    }

    // intersection pattern via per-node occupancy lists
    let mut occupants: Vec<Vec<Vertex>> = vec![Vec::new(); tree.node_count()];
    for (v, sub) in solution.rep.0.iter().enumerate() {
        if usable[v] {
            for &x in sub.nodes() {
                occupants[x].push(v);
            }
        }
    }
    let mut meeting: HashSet<(Vertex, Vertex)> = HashSet::new();
    for list in &occupants {
        for (i, &u) in list.iter().enumerate() {
            for &v in &list[i + 1..] {
                meeting.insert((u.min(v), u.max(v)));
            }
        }
    }
    for (u, v) in graph.edges() {
        if usable[u] && usable[v] && !meeting.contains(&(u, v)) {
            out.push(Violation::MissingIntersection(u, v));
        }
    }
    let mut spurious: Vec<_> = meeting
        .iter()
        .filter(|&&(u, v)| !graph.has_edge(u, v))
        .copied()
        .collect();
    spurious.sort_unstable();
    out.extend(spurious.into_iter().map(|(u, v)| Violation::SpuriousIntersection(u, v)));

    for ((&v, _), expected) in instance.partial.predrawn.iter().zip(&expected_predrawn) {
        if solution.rep.0[v].nodes() != expected.as_slice() {
            out.push(Violation::PredrawnChanged(v));
        }
    }

    if class == GraphClass::ProperInterval && path_host {
        out.extend(proper_containments(solution));
    }
    Ok(out)
}

/// Strict containments among subtrees of a path host, in `O(n log n)`.
fn proper_containments(solution: &Solution) -> Vec<Violation> {
    let order = solution.tree.path_order().expect("path host");
    let mut pos = vec![0usize; order.len()];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let mut spans: Vec<(usize, usize, Vertex)> = solution
        .rep
        .0
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_empty() && s.nodes().iter().all(|&x| x < pos.len()))
        .map(|(v, s)| {
            let lo = s.nodes().iter().map(|&x| pos[x]).min().unwrap();
            let hi = s.nodes().iter().map(|&x| pos[x]).max().unwrap();
            (lo, hi, v)
        })
        .collect();
    // left ascending, right descending: any later span ending no further right
    // than an earlier distinct span is nested inside it
    spans.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
    let mut out = Vec::new();
    let mut widest: Option<(usize, usize, Vertex)> = None;
    for &(lo, hi, v) in &spans {
        if let Some((wlo, whi, w)) = widest {
            if hi <= whi && (lo, hi) != (wlo, whi) {
                out.push(Violation::ProperContainment { inner: v, outer: w });
                continue;
            }
        }
        if widest.map_or(true, |(_, whi, _)| hi > whi) {
            widest = Some((lo, hi, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::model::*;

    fn solution(tree: HostTree, rep: Vec<Vec<Node>>) -> Solution {
        Solution {
            tree,
            derivation: TreeDerivation::default(),
            rep: Representation(rep.into_iter().map(Subtree::new).collect()),
        }
    }

    #[test]
    fn path_on_two_nodes_is_valid() {
        let inst = Instance::recognition(Graph::path(2), GraphClass::Interval, ModType::Fixed, HostTree::path(2)).unwrap();
        let sol = solution(HostTree::path(2), vec![vec![0], vec![0, 1], vec![1]]);
        assert!(validate_representation(&inst, &sol).unwrap().is_empty());
    }

    #[test]
    fn wrong_pattern_is_reported() {
        let inst = Instance::recognition(Graph::path(2), GraphClass::Interval, ModType::Fixed, HostTree::path(2)).unwrap();
        let sol = solution(HostTree::path(2), vec![vec![0], vec![1], vec![0]]);
        let v = validate_representation(&inst, &sol).unwrap();
        assert!(v.contains(&Violation::SpuriousIntersection(0, 2)));
        assert!(v.contains(&Violation::MissingIntersection(0, 1)));
        assert!(v.contains(&Violation::MissingIntersection(1, 2)));
    }

    #[test]
    fn strict_containment_flagged_for_pint() {
        let inst = Instance::recognition(Graph::path(1), GraphClass::ProperInterval, ModType::Fixed, HostTree::path(3)).unwrap();
        let sol = solution(HostTree::path(3), vec![vec![1], vec![0, 1, 2]]);
        let v = validate_representation(&inst, &sol).unwrap();
        assert_eq!(v, vec![Violation::ProperContainment { inner: 0, outer: 1 }]);
        let equal = solution(HostTree::path(3), vec![vec![1, 2], vec![1, 2]]);
        assert!(validate_representation(&inst, &equal).unwrap().is_empty());
    }

    #[test]
    fn predrawn_must_follow_subdivision() {
        let mut predrawn = BTreeMap::new();
        predrawn.insert(0, Subtree::new(vec![0, 1]));
        let partial = PartialRepresentation {
            tree: HostTree::path(2),
            predrawn,
        };
        let inst = Instance::new(Graph::empty(1), GraphClass::Interval, ModType::Sub, partial).unwrap();
        let derivation = TreeDerivation {
            ops: vec![TreeOp::SubdivideEdge {
                edge: (0, 1),
                inserted: vec![2],
            }],
        };
        let tree = HostTree::new(3, &[(0, 2), (2, 1)]).unwrap();
        let good = Solution {
            tree: tree.clone(),
            derivation: derivation.clone(),
            rep: Representation(vec![Subtree::new(vec![0, 1, 2])]),
        };
        assert!(validate_representation(&inst, &good).unwrap().is_empty());
        let bad = Solution {
            tree,
            derivation,
            rep: Representation(vec![Subtree::new(vec![0, 1])]),
        };
        let v = validate_representation(&inst, &bad).unwrap();
        assert!(v.contains(&Violation::PredrawnChanged(0)));
        assert!(v.contains(&Violation::Disconnected(0)));
    }

    #[test]
    fn illegal_op_for_fixed_and_mismatch_is_structural() {
        let inst = Instance::recognition(Graph::empty(1), GraphClass::Chordal, ModType::Fixed, HostTree::path(1)).unwrap();
        let derivation = TreeDerivation {
            ops: vec![TreeOp::AttachBranch {
                anchor: 0,
                edges: vec![(0, 1)],
            }],
        };
        let sol = Solution {
            tree: HostTree::path(2),
            derivation: derivation.clone(),
            rep: Representation(vec![Subtree::single(1)]),
        };
        let v = validate_representation(&inst, &sol).unwrap();
        assert_eq!(v, vec![Violation::IllegalOp { mod_type: ModType::Fixed }]);
        let wrong_tree = Solution {
            tree: HostTree::path(3),
            derivation,
            rep: Representation(vec![Subtree::single(1)]),
        };
        assert_eq!(validate_representation(&inst, &wrong_tree), Err(ModelError::DerivationMismatch));
    }
}
