//! Recognition without a given host: interval classes on a long enough path,
//! chordal graphs on a clique tree, path graphs on a clique tree whose
//! vertex sets are all paths.

use crate::intg::chordal_cliques;
use crate::model::{Graph, GraphClass, HostTree, Representation, Solution, Subtree, TreeDerivation, Verdict};

use super::recog_fixed;

/// Decides membership in `class` and returns a representation on a host of
/// its own choosing.
pub fn recog_standard(class: GraphClass, graph: &Graph) -> Verdict {
    match class {
        // total span is at most two positions per vertex
        GraphClass::ProperInterval | GraphClass::Interval => {
            recog_fixed(class, graph, &HostTree::path((2 * graph.n()).max(1)))
        }
        GraphClass::Path | GraphClass::Chordal => {
            let Some(cliques) = chordal_cliques(graph) else { return Verdict::NotExtendible };
            let cliques = cliques.cliques;
            let c = cliques.len();
            if c == 0 {
                return Verdict::Extendible(Box::new(Solution {
                    tree: HostTree::path(1),
                    derivation: TreeDerivation::default(),
                    rep: Representation(Vec::new()),
                }));
            }
            let weight = |a: usize, b: usize| cliques[a].iter().filter(|v| cliques[b].binary_search(v).is_ok()).count();
            let mut edges: Vec<(usize, usize, usize)> = Vec::new();
            for a in 0..c {
                for b in a + 1..c {
                    edges.push((weight(a, b), a, b));
                }
            }
            edges.sort_by(|x, y| y.0.cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));
            let tree_edges = if class == GraphClass::Chordal {
                Some(kruskal(c, &edges))
            } else {
                path_clique_tree(graph.n(), &cliques, &edges)
            };
            let Some(tree_edges) = tree_edges else { return Verdict::NotExtendible };
            let tree = HostTree::new(c, &tree_edges).expect("spanning tree");
            let rep = (0..graph.n())
                .map(|v| Subtree::new((0..c).filter(|&k| cliques[k].binary_search(&v).is_ok()).collect()))
                .collect();
            Verdict::Extendible(Box::new(Solution {
                tree,
                derivation: TreeDerivation::default(),
                rep: Representation(rep),
            }))
        }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Maximum-weight spanning tree of the clique graph, which is a clique tree.
fn kruskal(c: usize, edges: &[(usize, usize, usize)]) -> Vec<(usize, usize)> {
    let mut parent: Vec<usize> = (0..c).collect();
    let mut out = Vec::new();
    for &(_, a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            out.push((a, b));
        }
    }
    out
}

/// Searches the maximum-weight spanning trees of the clique graph for one in
/// which the cliques of every vertex induce a path.
fn path_clique_tree(n: usize, cliques: &[Vec<usize>], edges: &[(usize, usize, usize)]) -> Option<Vec<(usize, usize)>> {
    let c = cliques.len();
    let target: usize = kruskal(c, edges)
        .iter()
        .map(|&(a, b)| edges.iter().find(|e| (e.1, e.2) == (a, b)).unwrap().0)
        .sum();
    struct State<'a> {
        cliques: &'a [Vec<usize>],
        edges: &'a [(usize, usize, usize)],
        target: usize,
        need: usize,
        /// degree of each clique within each vertex's clique set
        degree: Vec<Vec<u8>>,
        chosen: Vec<(usize, usize)>,
    }
    fn rec(s: &mut State, i: usize, weight: usize, parent: &[usize]) -> bool {
        if s.chosen.len() == s.need {
            return weight == s.target;
        }
        if i == s.edges.len() {
            return false;
        }
        // the remaining edges are sorted by weight, so this bounds any completion
        let left = s.need - s.chosen.len();
        let bound: usize = s.edges[i..].iter().take(left).map(|e| e.0).sum();
        if weight + bound < s.target {
            return false;
        }
        let (w, a, b) = s.edges[i];
        let mut p = parent.to_vec();
        let (ra, rb) = (find(&mut p, a), find(&mut p, b));
        if ra != rb {
            let shared: Vec<usize> = s.cliques[a].iter().copied().filter(|v| s.cliques[b].binary_search(v).is_ok()).collect();
            if shared.iter().all(|&v| s.degree[v][a] < 2 && s.degree[v][b] < 2) {
                for &v in &shared {
                    s.degree[v][a] += 1;
                    s.degree[v][b] += 1;
                }
                s.chosen.push((a, b));
                p[ra] = rb;
                if rec(s, i + 1, weight + w, &p) {
                    return true;
                }
                s.chosen.pop();
                for &v in &shared {
                    s.degree[v][a] -= 1;
                    s.degree[v][b] -= 1;
                }
            }
        }
        rec(s, i + 1, weight, parent)
    }
    let mut state = State {
        cliques,
        edges,
        target,
        need: c - 1,
        degree: vec![vec![0; c]; n],
        chosen: Vec::new(),
    };
    let parent: Vec<usize> = (0..c).collect();
    rec(&mut state, 0, 0, &parent).then_some(state.chosen)
}
