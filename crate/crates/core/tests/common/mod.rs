#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use repext::prep::prune;
use repext::{validate_representation, Graph, GraphClass, HostTree, Instance, ModType, Node, PartialRepresentation, Subtree, Verdict};

pub fn random_tree(rng: &mut StdRng, nodes: usize, path: bool) -> HostTree {
    if path {
        return HostTree::path(nodes);
    }
    let edges: Vec<(Node, Node)> = (1..nodes).map(|b| (rng.gen_range(0..b), b)).collect();
    HostTree::new(nodes, &edges).unwrap()
}

fn tree_path(tree: &HostTree, a: Node, b: Node) -> Vec<Node> {
    let n = tree.node_count();
    let mut parent = vec![usize::MAX; n];
    parent[a] = a;
    let mut queue = std::collections::VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        for &y in tree.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut out = vec![b];
    let mut x = b;
    while x != a {
        x = parent[x];
        out.push(x);
    }
    out
}

/// A random subtree of the class's shape.
fn random_set(rng: &mut StdRng, tree: &HostTree, class: GraphClass) -> Vec<Node> {
    let n = tree.node_count();
    let a = rng.gen_range(0..n);
    if class != GraphClass::Chordal || rng.gen_bool(0.5) {
        let b = if rng.gen_bool(0.3) { a } else { rng.gen_range(0..n) };
        return tree_path(tree, a, b);
    }
    // grow a connected set
    let mut set = vec![a];
    for _ in 0..rng.gen_range(0..4) {
        let x = *set.choose(rng).unwrap();
        let y = *tree.neighbors(x).choose(rng).unwrap_or(&x);
        if !set.contains(&y) {
            set.push(y);
        }
    }
    set
}

fn intersection_graph(sets: &[Subtree]) -> Graph {
    let mut edges = Vec::new();
    for u in 0..sets.len() {
        for v in u + 1..sets.len() {
            if sets[u].intersects(&sets[v]) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(sets.len(), &edges).unwrap()
}

fn nested(sets: &[Subtree]) -> bool {
    sets.iter().enumerate().any(|(i, a)| sets.iter().enumerate().any(|(j, b)| i != j && a.is_strict_subset(b)))
}

/// A random pruned instance with `n ≤ max_n` vertices on a host of at most
/// `max_host` nodes. It starts from a representation on a larger host and
/// then may lose host nodes, edges or gain edges, so both answers occur.
pub fn random_instance(rng: &mut StdRng, class: GraphClass, mod_type: ModType, max_n: usize, max_host: usize) -> Instance {
    loop {
        let host_nodes = rng.gen_range(2..=max_host);
        let big_nodes = host_nodes + rng.gen_range(0..5);
        let big = random_tree(rng, big_nodes, class.needs_path_host());
        let n = rng.gen_range(1..=max_n);
        let sets: Vec<Subtree> = (0..n).map(|_| Subtree::new(random_set(rng, &big, class))).collect();
        if class == GraphClass::ProperInterval && nested(&sets) {
            continue;
        }
        let mut graph = intersection_graph(&sets);
        for _ in 0..rng.gen_range(0..3) {
            // flip one pair
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                let mut edges: Vec<(usize, usize)> = graph.edges().filter(|&(a, b)| (a, b) != (u.min(v), u.max(v))).collect();
                if !graph.has_edge(u, v) {
                    edges.push((u, v));
                }
                graph = Graph::new(n, &edges).unwrap();
            }
        }
        // keep the first host_nodes nodes in BFS order from node 0
        let keep = bfs_prefix(&big, host_nodes);
        let mut index = vec![usize::MAX; big.node_count()];
        for (i, &x) in keep.iter().enumerate() {
            index[x] = i;
        }
        let edges: Vec<(Node, Node)> = big
            .edges()
            .into_iter()
            .filter(|&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|(a, b)| (index[a], index[b]))
            .collect();
        let tree = HostTree::new(host_nodes, &edges).unwrap();
        if class.needs_path_host() && !tree.is_path() {
            continue;
        }
        let mut partial = PartialRepresentation::empty(tree);
        let p_drawn = rng.gen_range(0.0..0.8);
        for (v, s) in sets.iter().enumerate() {
            if rng.gen_bool(p_drawn) && s.nodes().iter().all(|&x| index[x] != usize::MAX) {
                partial.predrawn.insert(v, Subtree::new(s.nodes().iter().map(|&x| index[x]).collect()));
            }
        }
        if rng.gen_bool(0.3) {
            // redraw one pre-drawn subtree elsewhere
            if let Some(&v) = partial.predrawn.keys().collect::<Vec<_>>().choose(rng) {
                let v = *v;
                let moved = Subtree::new(random_set(rng, &partial.tree, class));
                partial.predrawn.insert(v, moved);
            }
        }
        let Ok(inst) = Instance::new(graph, class, mod_type, partial) else { continue };
        let pruned = prune(&inst.graph, &inst.partial);
        return pruned.pruned_instance(&inst);
    }
}

fn bfs_prefix(tree: &HostTree, count: usize) -> Vec<Node> {
    let mut seen = vec![false; tree.node_count()];
    let mut order = vec![0];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in tree.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                order.push(y);
            }
        }
    }
    order.truncate(count);
    order
}

/// Panics unless an extendible verdict carries a valid solution.
pub fn assert_valid(instance: &Instance, verdict: &Verdict) {
    if let Some(s) = verdict.solution() {
        let violations = validate_representation(instance, s).unwrap();
        assert!(violations.is_empty(), "{violations:?} for {instance:?}");
    }
}

/// Two verdicts contradict when one is extendible and the other not.
pub fn contradict(a: &Verdict, b: &Verdict) -> bool {
    matches!(
        (a, b),
        (Verdict::Extendible(_), Verdict::NotExtendible) | (Verdict::NotExtendible, Verdict::Extendible(_))
    )
}
