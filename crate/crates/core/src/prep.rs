//! Preprocessing shared by every solver: pruning indistinguishable vertices,
//! splitting into located/unlocated components, and ordering located
//! components along a path host.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::model::{Graph, HostTree, Instance, Node, PartialRepresentation, Representation, Solution, Subtree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrepError {
    #[error("host tree is not a path")]
    NotPathHost,
    #[error("pre-drawn parts of components {0:?} and {1:?} interleave")]
    InterleavedComponents(Vec<Vertex>, Vec<Vertex>),
}

/// Outcome of collapsing indistinguishable vertices.
#[derive(Clone, Debug)]
pub struct PruneResult {
    pub pruned_graph: Graph,
    pub pruned_partial: PartialRepresentation,
    /// original vertex -> pruned vertex whose subtree it copies
    pub representative: Vec<Vertex>,
    /// pruned vertex -> original vertex
    pub kept: Vec<Vertex>,
    /// groups of original vertices with equal closed neighbourhoods
    pub groups: Vec<Vec<Vertex>>,
}

impl PruneResult {
    /// Lifts a representation of the pruned graph back to the original graph.
    pub fn unprune(&self, solution: Solution) -> Solution {
        let rep = self
            .representative
            .iter()
            .map(|&p| solution.rep.0[p].clone())
            .collect();
        Solution {
            rep: Representation(rep),
            ..solution
        }
    }

    pub fn pruned_instance(&self, original: &Instance) -> Instance {
        Instance {
            graph: self.pruned_graph.clone(),
            class: original.class,
            mod_type: original.mod_type,
            partial: self.pruned_partial.clone(),
        }
    }
}

/// Groups of vertices with equal closed neighbourhoods, ordered by smallest member.
pub fn indistinguishable_groups(graph: &Graph) -> Vec<Vec<Vertex>> {
    let mut by_signature: HashMap<Vec<Vertex>, usize> = HashMap::new();
    let mut groups: Vec<Vec<Vertex>> = Vec::new();
    for v in 0..graph.n() {
        let sig = graph.closed_neighborhood(v);
        match by_signature.get(&sig) {
            Some(&g) => groups[g].push(v),
            None => {
                by_signature.insert(sig, groups.len());
                groups.push(vec![v]);
            }
        }
    }
    groups
}

/// Keeps one vertex per group of indistinguishable vertices, except that
/// pre-drawn vertices with distinct subtrees all survive.
pub fn prune(graph: &Graph, partial: &PartialRepresentation) -> PruneResult {
    let groups = indistinguishable_groups(graph);
    let mut survivor_of = vec![usize::MAX; graph.n()];
    for group in &groups {
        let mut by_subtree: BTreeMap<&Subtree, Vertex> = BTreeMap::new();
        let mut first_survivor = None;
        for &v in group {
            if let Some(sub) = partial.predrawn.get(&v) {
                let keep = *by_subtree.entry(sub).or_insert(v);
                survivor_of[v] = keep;
                first_survivor.get_or_insert(keep);
            }
        }
        let fallback = first_survivor.unwrap_or(group[0]);
        for &v in group {
            if survivor_of[v] == usize::MAX {
                survivor_of[v] = fallback;
            }
        }
    }
    let kept: Vec<Vertex> = (0..graph.n()).filter(|&v| survivor_of[v] == v).collect();
    let mut new_id = vec![usize::MAX; graph.n()];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v] = i;
    }
    let representative = survivor_of.iter().map(|&s| new_id[s]).collect();
    let pruned_graph = graph.induced(&kept);
    let predrawn = partial
        .predrawn
        .iter()
        .filter(|(&v, _)| new_id[v] != usize::MAX)
        .map(|(&v, s)| (new_id[v], s.clone()))
        .collect();
    PruneResult {
        pruned_graph,
        pruned_partial: PartialRepresentation {
            tree: partial.tree.clone(),
            predrawn,
        },
        representative,
        kept,
        groups,
    }
}

/// Node order and position lookup of a path host.
#[derive(Clone, Debug)]
pub struct PathCoords {
    pub order: Vec<Node>,
    pub pos: Vec<usize>,
}

impl PathCoords {
    pub fn new(tree: &HostTree) -> Result<Self, PrepError> {
        let order = tree.path_order().ok_or(PrepError::NotPathHost)?;
        let mut pos = vec![0; order.len()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        Ok(PathCoords { order, pos })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Leftmost and rightmost position of a subpath.
    pub fn span(&self, sub: &Subtree) -> (usize, usize) {
        let lo = sub.nodes().iter().map(|&x| self.pos[x]).min().expect("nonempty");
        let hi = sub.nodes().iter().map(|&x| self.pos[x]).max().expect("nonempty");
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocatedComponent {
    pub vertices: Vec<Vertex>,
    /// leftmost and rightmost taken path position
    pub taken: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLayout {
    /// located components, left to right
    pub located: Vec<LocatedComponent>,
    pub unlocated: Vec<Vec<Vertex>>,
}

/// Components split by whether they contain a pre-drawn vertex.
pub fn split_components(graph: &Graph, partial: &PartialRepresentation) -> (Vec<Vec<Vertex>>, Vec<Vec<Vertex>>) {
    graph
        .components()
        .into_iter()
        .partition(|c| c.iter().any(|v| partial.predrawn.contains_key(v)))
}

/// Orders located components by their taken nodes on a path host.
pub fn layout_components(graph: &Graph, partial: &PartialRepresentation) -> Result<ComponentLayout, PrepError> {
    let coords = PathCoords::new(&partial.tree)?;
    let (located, unlocated) = split_components(graph, partial);
    let mut located: Vec<LocatedComponent> = located
        .into_iter()
        .map(|vertices| {
            let spans = vertices
                .iter()
                .filter_map(|v| partial.predrawn.get(v))
                .map(|s| coords.span(s));
            let lo = spans.clone().map(|s| s.0).min().unwrap();
            let hi = spans.map(|s| s.1).max().unwrap();
            LocatedComponent {
                vertices,
                taken: (lo, hi),
            }
        })
        .collect();
    located.sort_by_key(|c| c.taken);
    for w in located.windows(2) {
        if w[0].taken.1 >= w[1].taken.0 {
            return Err(PrepError::InterleavedComponents(w[0].vertices.clone(), w[1].vertices.clone()));
        }
    }
    Ok(ComponentLayout { located, unlocated })
}

/// Path edges `(p_i, p_{i+1})` not straddled by the taken nodes of any located component.
pub fn expandable_edges(graph: &Graph, partial: &PartialRepresentation) -> Result<Vec<(Node, Node)>, PrepError> {
    let coords = PathCoords::new(&partial.tree)?;
    let (located, _) = split_components(graph, partial);
    let spans: Vec<(usize, usize)> = located
        .iter()
        .map(|c| {
            let spans = c.iter().filter_map(|v| partial.predrawn.get(v)).map(|s| coords.span(s));
            (spans.clone().map(|s| s.0).min().unwrap(), spans.map(|s| s.1).max().unwrap())
        })
        .collect();
    Ok((0..coords.len().saturating_sub(1))
        .filter(|&i| !spans.iter().any(|&(lo, hi)| lo <= i && i < hi))
        .map(|i| (coords.order[i], coords.order[i + 1]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GraphClass, ModType};

    fn partial(nodes: usize, drawn: &[(Vertex, &[Node])]) -> PartialRepresentation {
        PartialRepresentation {
            tree: HostTree::path(nodes),
            predrawn: drawn.iter().map(|&(v, s)| (v, Subtree::new(s.to_vec()))).collect(),
        }
    }

    #[test]
    fn triangle_collapses() {
        let r = prune(&Graph::complete(3), &partial(1, &[]));
        assert_eq!(r.pruned_graph.n(), 1);
        assert_eq!(r.groups, vec![vec![0, 1, 2]]);
        assert_eq!(r.representative, vec![0, 0, 0]);
    }

    #[test]
    fn path_is_already_pruned() {
        let r = prune(&Graph::path(2), &partial(1, &[]));
        assert_eq!(r.pruned_graph, Graph::path(2));
        assert_eq!(r.kept, vec![0, 1, 2]);
    }

    #[test]
    fn distinct_predrawn_twins_survive() {
        let p = partial(3, &[(0, &[0, 1]), (1, &[1, 2])]);
        let r = prune(&Graph::complete(3), &p);
        assert_eq!(r.pruned_graph.n(), 2);
        assert_eq!(r.kept, vec![0, 1]);
        assert_eq!(r.representative, vec![0, 1, 0]);
        let same = partial(3, &[(0, &[1]), (1, &[1])]);
        assert_eq!(prune(&Graph::complete(3), &same).pruned_graph.n(), 1);
    }

    #[test]
    fn prune_is_idempotent() {
        let g = Graph::new(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap();
        let p = partial(4, &[(4, &[3])]);
        let once = prune(&g, &p);
        let twice = prune(&once.pruned_graph, &once.pruned_partial);
        assert_eq!(twice.pruned_graph, once.pruned_graph);
        assert_eq!(twice.kept, (0..once.pruned_graph.n()).collect::<Vec<_>>());
    }

    #[test]
    fn layout_orders_located_components() {
        let g = Graph::empty(3);
        let p = partial(3, &[(0, &[0]), (1, &[1]), (2, &[2])]);
        let layout = layout_components(&g, &p).unwrap();
        let order: Vec<_> = layout.located.iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(order, vec![vec![0], vec![1], vec![2]]);
        assert!(layout.unlocated.is_empty());
    }

    #[test]
    fn interleaved_components_rejected() {
        // component {0,1,2} (path 0-1-2) drawn at 0 and 4, component {3} drawn at 2
        let g = Graph::new(4, &[(0, 1), (1, 2)]).unwrap();
        let p = partial(5, &[(0, &[0]), (2, &[4]), (3, &[2])]);
        let inst = Instance::new(g.clone(), GraphClass::Interval, ModType::Fixed, p.clone()).unwrap();
        assert!(matches!(
            layout_components(&inst.graph, &inst.partial),
            Err(PrepError::InterleavedComponents(..))
        ));
    }

    #[test]
    fn expandable_edges_follow_taken_spans() {
        let g = Graph::empty(1);
        assert_eq!(expandable_edges(&g, &partial(3, &[])).unwrap(), vec![(0, 1), (1, 2)]);
        let g = Graph::path(1);
        let p = partial(5, &[(0, &[1, 2]), (1, &[2, 3])]);
        assert_eq!(expandable_edges(&g, &p).unwrap(), vec![(0, 1), (3, 4)]);
        let g = Graph::empty(2);
        let p = partial(5, &[(0, &[0]), (1, &[4])]);
        assert_eq!(expandable_edges(&g, &p).unwrap().len(), 4);
    }
}
