//! Brute-force ground truth: every subtree (or subpath) per vertex on every
//! candidate host, checked pairwise. Deliberately shares no search code with
//! the solvers.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use crate::model::{
    replay_tracking, Graph, GraphClass, HostTree, Instance, ModType, Node, Representation, Solution, Subtree,
    TreeDerivation, TreeOp, Verdict, Vertex,
};

#[derive(Clone, Debug)]
pub struct OracleBudget {
    pub extra_nodes: usize,
    pub time_limit: Option<Duration>,
}

impl OracleBudget {
    pub fn new(extra_nodes: usize) -> Self {
        OracleBudget {
            extra_nodes,
            time_limit: None,
        }
    }
}

/// Largest host the oracle accepts (node sets are `u64` masks).
pub const ORACLE_MAX_NODES: usize = 64;

/// Maximal cliques as bit masks, by checking every vertex subset.
pub fn maximal_cliques(graph: &Graph) -> Vec<u32> {
    let n = graph.n();
    assert!(n <= 20, "oracle graphs are small");
    let is_clique = |m: u32| {
        (0..n).all(|u| m >> u & 1 == 0 || (u + 1..n).all(|v| m >> v & 1 == 0 || graph.has_edge(u, v)))
    };
    (1u32..1 << n)
        .filter(|&m| is_clique(m) && (0..n).all(|w| m >> w & 1 == 1 || !is_clique(m | 1 << w)))
        .collect()
}

fn count_maximal_cliques(graph: &Graph) -> usize {
    maximal_cliques(graph).len()
}

/// Fewest branch nodes (degree at least 3) of any host tree on which `graph`
/// has a representation by subtrees, or by subpaths unless `class` is CHOR.
/// `None` when there is no such representation at all.
///
/// Contracting a host edge whose one end carries a subset of the other end's
/// vertices keeps a representation valid and never adds a branch node, and
/// it can be repeated until the nodes are exactly the maximal cliques. So it
/// is enough to try every spanning tree of the clique intersection graph.
pub fn min_branch_nodes(graph: &Graph, class: GraphClass) -> Option<usize> {
    let mut total = 0;
    for comp in graph.components() {
        total += component_min_branch(&graph.induced(&comp), class != GraphClass::Chordal)?;
    }
    Some(total)
}

fn component_min_branch(graph: &Graph, paths: bool) -> Option<usize> {
    let cliques = maximal_cliques(graph);
    let c = cliques.len();
    let edges: Vec<(usize, usize)> =
        (0..c).flat_map(|a| (a + 1..c).map(move |b| (a, b))).filter(|&(a, b)| cliques[a] & cliques[b] != 0).collect();
    let mut best = None;
    let mut chosen = Vec::new();
    spanning_trees(&edges, 0, &mut (0..c).collect(), c, &mut chosen, &mut |tree: &[(usize, usize)]| {
        let mut degree = vec![0; c];
        for &(a, b) in tree {
            degree[a] += 1;
            degree[b] += 1;
        }
        for v in 0..graph.n() {
            let holds = |k: usize| cliques[k] >> v & 1 == 1;
            let count = (0..c).filter(|&k| holds(k)).count();
            let inner: Vec<&(usize, usize)> = tree.iter().filter(|&&(a, b)| holds(a) && holds(b)).collect();
            // a forest on `count` nodes is connected iff it has count - 1 edges
            if inner.len() + 1 != count {
                return;
            }
            if paths && (0..c).any(|k| inner.iter().filter(|&&&(a, b)| a == k || b == k).count() > 2) {
                return;
            }
        }
        let branches = degree.iter().filter(|&&d| d >= 3).count();
        if best.is_none_or(|b| branches < b) {
            best = Some(branches);
        }
    });
    best
}

fn spanning_trees(
    edges: &[(usize, usize)],
    from: usize,
    parent: &mut Vec<usize>,
    nodes: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if chosen.len() + 1 == nodes || nodes == 0 {
        visit(chosen);
        return;
    }
    fn root(parent: &[usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    for i in from..edges.len() {
        let (a, b) = edges[i];
        let (ra, rb) = (root(parent, a), root(parent, b));
        if ra == rb {
            continue;
        }
        parent[ra] = rb;
        chosen.push((a, b));
        spanning_trees(edges, i + 1, parent, nodes, chosen, visit);
        chosen.pop();
        parent[ra] = ra;
    }
}

/// Extra nodes that always suffice, when such a bound is known: a node that
/// no subtree ends at can be smoothed away, intervals have two ends, and
/// subtrees reduced to their clique nodes end only at clique nodes.
fn sufficient_extra(instance: &Instance) -> Option<usize> {
    let free = (0..instance.graph.n()).filter(|&v| !instance.is_predrawn(v)).count();
    match (instance.class.needs_path_host(), instance.mod_type) {
        (_, ModType::Fixed) => Some(0),
        _ if free == 0 => Some(0),
        (true, _) => Some(2 * free),
        (false, ModType::Sub) => Some(count_maximal_cliques(&instance.graph)),
        (false, _) => None,
    }
}

/// Exhaustive decision. Complete for Fixed; for the other types complete
/// whenever the budget reaches a known sufficient number of extra nodes,
/// otherwise `Inconclusive` when nothing is found.
pub fn brute_force(instance: &Instance, budget: &OracleBudget) -> Verdict {
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let enough = sufficient_extra(instance);
    let top = match enough {
        Some(e) => e.min(budget.extra_nodes),
        None => budget.extra_nodes,
    };
    let mut timed_out = false;
    for extra in 0..=top {
        for d in derivations(&instance.partial.tree, instance.class, instance.mod_type, extra) {
            if deadline.is_some_and(|t| Instant::now() >= t) {
                return Verdict::Inconclusive;
            }
            match fixed_tree(instance, &d, deadline) {
                Attempt::Found(s) => return Verdict::Extendible(Box::new(s)),
                Attempt::TimedOut => timed_out = true,
                Attempt::None => {}
            }
        }
    }
    match enough {
        Some(e) if e <= budget.extra_nodes && !timed_out => Verdict::NotExtendible,
        _ => Verdict::Inconclusive,
    }
}

enum Attempt {
    Found(Solution),
    None,
    TimedOut,
}

fn fixed_tree(instance: &Instance, d: &TreeDerivation, deadline: Option<Instant>) -> Attempt {
    let tree = &instance.partial.tree;
    let drawn: Vec<Vertex> = instance.partial.predrawn.keys().copied().collect();
    let mut sets: Vec<Vec<Node>> = drawn.iter().map(|v| instance.partial.predrawn[v].nodes().to_vec()).collect();
    let Ok(host) = replay_tracking(tree, d, &mut sets) else { return Attempt::None };
    if host.node_count() > ORACLE_MAX_NODES {
        return Attempt::TimedOut;
    }
    let candidates = candidate_sets(&host, instance.class);
    let n = instance.graph.n();
    let mut domains: Vec<Vec<u64>> = vec![candidates.clone(); n];
    for (v, s) in drawn.iter().zip(&sets) {
        domains[*v] = vec![s.iter().fold(0u64, |m, &x| m | 1 << x)];
    }
    let mut chosen = vec![0u64; n];
    let mut steps = 0u64;
    let proper = instance.class == GraphClass::ProperInterval;
    match assign(&instance.graph, proper, domains, &mut vec![false; n], &mut chosen, deadline, &mut steps) {
        Some(true) => {
            let rep = chosen
                .iter()
                .map(|&m| Subtree::new((0..64).filter(|&x| m >> x & 1 == 1).collect()))
                .collect();
            Attempt::Found(Solution {
                tree: host,
                derivation: d.clone(),
                rep: Representation(rep),
            })
        }
        Some(false) => Attempt::None,
        None => Attempt::TimedOut,
    }
}

fn compatible(adjacent: bool, proper: bool, m: u64, o: u64) -> bool {
    (m & o != 0) == adjacent && !(proper && m != o && (m & o == m || m & o == o))
}

/// Backtracking with forward checking: the unassigned vertex with the fewest
/// remaining candidates goes next.
fn assign(
    graph: &Graph,
    proper: bool,
    domains: Vec<Vec<u64>>,
    done: &mut [bool],
    chosen: &mut [u64],
    deadline: Option<Instant>,
    steps: &mut u64,
) -> Option<bool> {
    let Some(v) = (0..done.len()).filter(|&v| !done[v]).min_by_key(|&v| (domains[v].len(), v)) else {
        return Some(true);
    };
    *steps += 1;
    if *steps % 1024 == 0 && deadline.is_some_and(|t| Instant::now() >= t) {
        return None;
    }
    done[v] = true;
    'next: for &m in &domains[v] {
        let mut narrowed = domains.clone();
        for u in 0..done.len() {
            if done[u] {
                continue;
            }
            let adjacent = graph.has_edge(u, v);
            narrowed[u].retain(|&o| compatible(adjacent, proper, m, o));
            if narrowed[u].is_empty() {
                continue 'next;
            }
        }
        chosen[v] = m;
        if assign(graph, proper, narrowed, done, chosen, deadline, steps)? {
            return Some(true);
        }
    }
    done[v] = false;
    Some(false)
}

/// All node sets a vertex may take: connected sets, restricted to paths for
/// every class but CHOR. Ordered by smallest node, then size.
fn candidate_sets(host: &HostTree, class: GraphClass) -> Vec<u64> {
    let n = host.node_count();
    let adj: Vec<u64> = (0..n).map(|a| host.neighbors(a).iter().fold(0, |m, &b| m | 1 << b)).collect();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut stack: Vec<u64> = (0..n).map(|a| 1u64 << a).collect();
    while let Some(m) = stack.pop() {
        if !seen.insert(m) {
            continue;
        }
        let mut border = 0u64;
        for a in 0..n {
            if m >> a & 1 == 1 {
                border |= adj[a];
            }
        }
        border &= !m;
        for b in 0..n {
            if border >> b & 1 == 1 && !seen.contains(&(m | 1 << b)) {
                stack.push(m | 1 << b);
            }
        }
    }
    let is_path = |m: u64| (0..n).all(|a| m >> a & 1 == 0 || (adj[a] & m).count_ones() <= 2);
    let mut out: Vec<u64> = seen
        .into_iter()
        .filter(|&m| class == GraphClass::Chordal || is_path(m))
        .collect();
    out.sort_by_key(|&m| (m.trailing_zeros(), m.count_ones(), m));
    out
}

/// Candidate derivations with exactly `extra` new nodes.
fn derivations(tree: &HostTree, class: GraphClass, mod_type: ModType, extra: usize) -> Vec<TreeDerivation> {
    let edges = tree.edges();
    let ends: Vec<Node> = match tree.path_order() {
        Some(order) if class.needs_path_host() => vec![order[0], *order.last().unwrap()],
        _ => Vec::new(),
    };
    let mut out = Vec::new();
    for sub in 0..=extra {
        if sub > 0 && !mod_type.allows_subdivision() {
            break;
        }
        let add = extra - sub;
        if add > 0 && !mod_type.allows_attachment() {
            continue;
        }
        for split in weak_compositions(sub, edges.len()) {
            let attach: Vec<Vec<(Node, Vec<usize>)>> = if class.needs_path_host() {
                weak_compositions(add, ends.len())
                    .into_iter()
                    .map(|c| ends.iter().zip(c).filter(|p| p.1 > 0).map(|(&a, k)| (a, chain(k))).collect())
                    .collect()
            } else {
                hangings(tree.node_count(), add)
            };
            for hang in attach {
                let mut ops = Vec::new();
                let mut next = tree.node_count();
                for (&(a, b), &k) in edges.iter().zip(&split) {
                    if k > 0 {
                        ops.push(TreeOp::SubdivideEdge { edge: (a, b), inserted: (next..next + k).collect() });
                        next += k;
                    }
                }
                for (anchor, parents) in hang {
                    // parents[i] is the parent of fresh node i, usize::MAX for the anchor
                    let edges = parents
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| (if p == usize::MAX { anchor } else { next + p }, next + i))
                        .collect();
                    next += parents.len();
                    ops.push(TreeOp::AttachBranch { anchor, edges });
                }
                out.push(TreeDerivation { ops });
            }
        }
    }
    out
}

fn chain(k: usize) -> Vec<usize> {
    (0..k).map(|i| if i == 0 { usize::MAX } else { i - 1 }).collect()
}

fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in weak_compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Rooted trees on 1 to 3 nodes as parent lists.
fn small_trees() -> Vec<Vec<usize>> {
    vec![vec![usize::MAX], chain(2), chain(3), vec![usize::MAX, 0, 0]]
}

/// Multisets of small trees hung off original nodes, `total` nodes overall.
fn hangings(nodes: usize, total: usize) -> Vec<Vec<(Node, Vec<usize>)>> {
    let shapes = small_trees();
    let items: Vec<(Node, usize)> = (0..nodes).flat_map(|a| (0..shapes.len()).map(move |s| (a, s))).collect();
    let mut out: BTreeSet<Vec<(Node, usize)>> = BTreeSet::new();
    fn grow(items: &[(Node, usize)], shapes: &[Vec<usize>], left: usize, from: usize, cur: &mut Vec<(Node, usize)>, out: &mut BTreeSet<Vec<(Node, usize)>>) {
        if left == 0 {
            out.insert(cur.clone());
            return;
        }
        for i in from..items.len() {
            let size = shapes[items[i].1].len();
            if size <= left {
                cur.push(items[i]);
                grow(items, shapes, left - size, i, cur, out);
                cur.pop();
            }
        }
    }
    grow(&items, &shapes, total, 0, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|picks| picks.into_iter().map(|(a, s)| (a, shapes[s].clone())).collect())
        .collect()
}

/// Least number of path nodes any representation of the component occupies,
/// found by recognition on growing paths.
pub fn enumerate_min_span(component: &Graph, class: GraphClass) -> Option<usize> {
    assert!(class.needs_path_host(), "spans are defined on paths");
    (1..=2 * component.n().max(1)).find(|&t| {
        let inst = Instance::recognition(component.clone(), class, ModType::Fixed, HostTree::path(t)).expect("valid");
        brute_force(&inst, &OracleBudget::new(0)).is_extendible()
    })
}
