//! Chordal and interval machinery: perfect elimination orderings, maximal
//! cliques, consecutive clique orderings and interval minimum spans.

use std::collections::VecDeque;

use crate::model::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elimination {
    /// `order[i]` is eliminated `i`-th; later neighbours of each vertex form a clique.
    Peo(Vec<Vertex>),
    /// A chordless cycle of length at least four.
    NotChordal(Vec<Vertex>),
}

/// Maximum cardinality search; returns the visit order reversed.
fn mcs_order(graph: &Graph) -> Vec<Vertex> {
    let n = graph.n();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut buckets: Vec<Vec<Vertex>> = vec![(0..n).rev().collect()];
    let mut top = 0usize;
    let mut visit = Vec::with_capacity(n);
    while visit.len() < n {
        let v = loop {
            match buckets[top].pop() {
                Some(v) if !done[v] && weight[v] == top => break v,
                Some(_) => {}
                None => top -= 1,
            }
        };
        done[v] = true;
        visit.push(v);
        for &w in graph.neighbors(v) {
            if !done[w] {
                weight[w] += 1;
                if buckets.len() <= weight[w] {
                    buckets.push(Vec::new());
                }
                buckets[weight[w]].push(w);
                top = top.max(weight[w]);
            }
        }
    }
    visit.reverse();
    visit
}

fn index_of(order: &[Vertex]) -> Vec<usize> {
    let mut idx = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        idx[v] = i;
    }
    idx
}

/// Vertices adjacent to `v` eliminated after it, sorted by elimination index.
fn later(graph: &Graph, idx: &[usize], v: Vertex) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = graph.neighbors(v).iter().copied().filter(|&w| idx[w] > idx[v]).collect();
    out.sort_unstable_by_key(|&w| idx[w]);
    out
}

/// Shortest `x`-`y` path avoiding `N[v]` except for `x` and `y`.
fn detour(graph: &Graph, v: Vertex, x: Vertex, y: Vertex) -> Option<Vec<Vertex>> {
    let mut blocked = vec![false; graph.n()];
    blocked[v] = true;
    for &w in graph.neighbors(v) {
        blocked[w] = w != x && w != y;
    }
    let mut prev = vec![usize::MAX; graph.n()];
    prev[x] = x;
    let mut queue = VecDeque::from([x]);
    while let Some(a) = queue.pop_front() {
        if a == y {
            let mut path = vec![y];
            while *path.last().unwrap() != x {
                path.push(prev[*path.last().unwrap()]);
            }
            path.reverse();
            return Some(path);
        }
        for &b in graph.neighbors(a) {
            if !blocked[b] && prev[b] == usize::MAX {
                prev[b] = a;
                queue.push_back(b);
            }
        }
    }
    None
}

fn chordless_cycle_through(graph: &Graph, v: Vertex, x: Vertex, y: Vertex) -> Option<Vec<Vertex>> {
    detour(graph, v, x, y).map(|mut p| {
        p.insert(0, v);
        p
    })
}

/// Perfect elimination ordering, or a chordless cycle witnessing that none exists.
pub fn peo(graph: &Graph) -> Elimination {
    let order = mcs_order(graph);
    let idx = index_of(&order);
    for &v in &order {
        let lv = later(graph, &idx, v);
        let Some((&p, rest)) = lv.split_first() else { continue };
        if let Some(&w) = rest.iter().find(|&&w| !graph.has_edge(p, w)) {
            if let Some(cycle) = chordless_cycle_through(graph, v, p, w) {
                return Elimination::NotChordal(cycle);
            }
            return Elimination::NotChordal(any_chordless_cycle(graph).expect("graph is not chordal"));
        }
    }
    Elimination::Peo(order)
}

fn any_chordless_cycle(graph: &Graph) -> Option<Vec<Vertex>> {
    for v in 0..graph.n() {
        let nb = graph.neighbors(v);
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if !graph.has_edge(x, y) {
                    if let Some(c) = chordless_cycle_through(graph, v, x, y) {
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

pub fn is_chordless_cycle(graph: &Graph, cycle: &[Vertex]) -> bool {
    let k = cycle.len();
    if k < 4 {
        return false;
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return false;
    }
    (0..k).all(|i| {
        (i + 1..k).all(|j| {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            graph.has_edge(cycle[i], cycle[j]) == consecutive
        })
    })
}

/// The maximal cliques of a chordal graph, each sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSet {
    pub cliques: Vec<Vec<Vertex>>,
}

impl CliqueSet {
    pub fn count(&self) -> usize {
        self.cliques.len()
    }

    /// For each vertex, indices of the cliques containing it.
    pub fn memberships(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); n];
        for (i, k) in self.cliques.iter().enumerate() {
            for &v in k {
                out[v].push(i);
            }
        }
        out
    }
}

/// Maximal cliques harvested from a perfect elimination ordering: `{v} ∪ later(v)`
/// is dropped when some `u` has `v` as its first later neighbour and exactly one
/// more later neighbour than `v`.
pub fn maximal_cliques(graph: &Graph, order: &[Vertex]) -> CliqueSet {
    let idx = index_of(order);
    let laters: Vec<Vec<Vertex>> = (0..graph.n()).map(|v| later(graph, &idx, v)).collect();
    let mut covered = vec![false; graph.n()];
    for u in 0..graph.n() {
        if let Some(&p) = laters[u].first() {
            if laters[u].len() == laters[p].len() + 1 {
                covered[p] = true;
            }
        }
    }
    let cliques = order
        .iter()
        .filter(|&&v| !covered[v])
        .map(|&v| {
            let mut k = laters[v].clone();
            k.push(v);
            k.sort_unstable();
            k
        })
        .collect();
    CliqueSet { cliques }
}

/// What a clique-order search should do with the current prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Prune,
    Stop,
}

/// Enumerates orderings of `cliques` in which the cliques containing each
/// vertex are consecutive, calling `visit` on every consecutive prefix.
/// Returns whether `visit` stopped the search.
pub fn search_clique_orders(
    cliques: &CliqueSet,
    n: usize,
    mut visit: impl FnMut(&[usize]) -> Visit,
) -> bool {
    let c = cliques.count();
    let member = cliques.memberships(n);
    let mut remaining: Vec<usize> = member.iter().map(Vec::len).collect();
    let mut placed = vec![false; c];
    let mut order: Vec<usize> = Vec::with_capacity(c);
    let mut open_counts: Vec<usize> = vec![0];

    // ends first: fewest vertices shared with other cliques
    let mut starts: Vec<usize> = (0..c).collect();
    starts.sort_by_key(|&k| cliques.cliques[k].iter().filter(|&&v| member[v].len() > 1).count());

    let candidates = |order: &[usize], placed: &[bool], remaining: &[usize]| -> Vec<usize> {
        let Some(&last) = order.last() else { return starts.clone() };
        let pivot = cliques.cliques[last]
            .iter()
            .filter(|&&v| remaining[v] > 0)
            .min_by_key(|&&v| remaining[v]);
        match pivot {
            Some(&v) => member[v].iter().copied().filter(|&k| !placed[k]).collect(),
            None => (0..c).filter(|&k| !placed[k]).collect(),
        }
    };

    let mut stack: Vec<(Vec<usize>, usize)> = vec![(candidates(&order, &placed, &remaining), 0)];
    while let Some((cands, next)) = stack.last_mut() {
        if *next == cands.len() {
            stack.pop();
            if let Some(k) = order.pop() {
                placed[k] = false;
                open_counts.pop();
                for &v in &cliques.cliques[k] {
                    remaining[v] += 1;
                }
            }
            continue;
        }
        let k = cands[*next];
        *next += 1;
        let open = *open_counts.last().unwrap();
        let open_in_k = cliques.cliques[k]
            .iter()
            .filter(|&&v| remaining[v] > 0 && remaining[v] < member[v].len())
            .count();
        if open_in_k != open {
            continue;
        }
        placed[k] = true;
        order.push(k);
        let mut now_open = 0;
        for &v in &cliques.cliques[k] {
            remaining[v] -= 1;
            if remaining[v] > 0 {
                now_open += 1;
            }
        }
        open_counts.push(now_open);
        let verdict = visit(&order);
        if verdict == Visit::Stop {
            return true;
        }
        if verdict == Visit::Continue && order.len() < c {
            let next_cands = candidates(&order, &placed, &remaining);
            stack.push((next_cands, 0));
        } else {
            order.pop();
            placed[k] = false;
            open_counts.pop();
            for &v in &cliques.cliques[k] {
                remaining[v] += 1;
            }
        }
    }
    false
}

/// Some consecutive clique ordering, if one exists.
pub fn clique_order(cliques: &CliqueSet, n: usize) -> Option<Vec<usize>> {
    let mut found = None;
    search_clique_orders(cliques, n, |prefix| {
        if prefix.len() == cliques.count() {
            found = Some(prefix.to_vec());
            Visit::Stop
        } else {
            Visit::Continue
        }
    });
    found
}

/// Smallest interval placement of an unlocated component: clique `K_i` at
/// position `i`, `R_v` the positions of the cliques containing `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPlacement {
    pub clique_order: Vec<Vec<Vertex>>,
    pub intervals: Vec<(usize, usize)>,
}

impl IntPlacement {
    pub fn span(&self) -> usize {
        self.clique_order.len()
    }
}

pub fn placement_from_order(cliques: &CliqueSet, order: &[usize], n: usize) -> IntPlacement {
    let mut intervals = vec![(usize::MAX, 0); n];
    for (pos, &k) in order.iter().enumerate() {
        for &v in &cliques.cliques[k] {
            intervals[v].0 = intervals[v].0.min(pos);
            intervals[v].1 = intervals[v].1.max(pos);
        }
    }
    IntPlacement {
        clique_order: order.iter().map(|&k| cliques.cliques[k].clone()).collect(),
        intervals,
    }
}

/// Maximal cliques of a graph, or `None` when it is not chordal.
pub fn chordal_cliques(graph: &Graph) -> Option<CliqueSet> {
    match peo(graph) {
        Elimination::Peo(order) => Some(maximal_cliques(graph, &order)),
        Elimination::NotChordal(_) => None,
    }
}

/// Minimum span `cl(C)` of an unlocated component with a smallest placement;
/// `None` when the component is not an interval graph.
pub fn minspan_int(graph: &Graph) -> Option<IntPlacement> {
    let cliques = chordal_cliques(graph)?;
    let order = clique_order(&cliques, graph.n())?;
    Some(placement_from_order(&cliques, &order, graph.n()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spider() -> Graph {
        // centre 0, legs 0-1-2, 0-3-4, 0-5-6
        Graph::new(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap()
    }

    fn brute_maximal_cliques(g: &Graph) -> Vec<Vec<Vertex>> {
        let n = g.n();
        let cliques: Vec<Vec<Vertex>> = (1u32..1 << n)
            .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>())
            .filter(|s| g.is_clique(s))
            .collect();
        let mut out: Vec<_> = cliques
            .iter()
            .filter(|s| !cliques.iter().any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v))))
            .cloned()
            .collect();
        out.sort();
        out
    }

    fn brute_has_consecutive_order(g: &Graph, cliques: &[Vec<Vertex>]) -> bool {
        fn permute(k: usize, idx: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
            if k == idx.len() {
                return f(idx);
            }
            for i in k..idx.len() {
                idx.swap(k, i);
                if permute(k + 1, idx, f) {
                    return true;
                }
                idx.swap(k, i);
            }
            false
        }
        let mut idx: Vec<usize> = (0..cliques.len()).collect();
        permute(0, &mut idx, &mut |order| {
            (0..g.n()).all(|v| {
                let pos: Vec<usize> = (0..order.len()).filter(|&p| cliques[order[p]].contains(&v)).collect();
                pos.is_empty() || pos.last().unwrap() - pos[0] + 1 == pos.len()
            })
        })
    }

    fn random_graph(rng: &mut impl rand::Rng, n: usize, p: f64) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn small_peo_cases() {
        assert!(matches!(peo(&Graph::complete(3)), Elimination::Peo(_)));
        assert!(matches!(peo(&spider()), Elimination::Peo(_)));
        match peo(&Graph::cycle(4)) {
            Elimination::NotChordal(c) => {
                assert_eq!(c.len(), 4);
                assert!(is_chordless_cycle(&Graph::cycle(4), &c));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cliques_of_small_graphs() {
        let p = chordal_cliques(&Graph::path(2)).unwrap();
        let mut k = p.cliques.clone();
        k.sort();
        assert_eq!(k, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(chordal_cliques(&Graph::complete(5)).unwrap().cliques, vec![vec![0, 1, 2, 3, 4]]);
        // two triangles on edge 1-2, pendant 4 on 3
        let g = Graph::new(5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let mut k = chordal_cliques(&g).unwrap().cliques;
        k.sort();
        assert_eq!(k, brute_maximal_cliques(&g));
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn spider_has_no_clique_order() {
        let g = spider();
        let cliques = chordal_cliques(&g).unwrap();
        assert!(!brute_has_consecutive_order(&g, &cliques.cliques));
        assert_eq!(clique_order(&cliques, g.n()), None);
        assert_eq!(minspan_int(&g), None);
    }

    #[test]
    fn interval_minspans() {
        for n in 1..20 {
            assert_eq!(minspan_int(&Graph::path(n)).unwrap().span(), n);
        }
        assert_eq!(minspan_int(&Graph::complete(4)).unwrap().span(), 1);
        let bowtie = Graph::new(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(minspan_int(&bowtie).unwrap().span(), 2);
        let diamond = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(chordal_cliques(&diamond).unwrap().count(), 2);
    }

    #[test]
    fn long_path_orders_quickly() {
        let g = Graph::path(100_000);
        let p = minspan_int(&g).unwrap();
        assert_eq!(p.span(), 100_000);
    }

    #[test]
    fn random_graphs_agree_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.gen_range(1..8);
            let g = random_graph(&mut rng, n, 0.4);
            match peo(&g) {
                Elimination::NotChordal(c) => assert!(is_chordless_cycle(&g, &c)),
                Elimination::Peo(order) => {
                    let mut k = maximal_cliques(&g, &order).cliques;
                    k.sort();
                    let brute = brute_maximal_cliques(&g);
                    assert_eq!(k, brute);
                    let cs = CliqueSet { cliques: brute.clone() };
                    let found = clique_order(&cs, n);
                    assert_eq!(found.is_some(), brute_has_consecutive_order(&g, &brute));
                    if let Some(o) = found {
                        let p = placement_from_order(&cs, &o, n);
                        for u in 0..n {
                            for v in u + 1..n {
                                let (a, b) = (p.intervals[u], p.intervals[v]);
                                assert_eq!(a.0 <= b.1 && b.0 <= a.1, g.has_edge(u, v));
                            }
                        }
                    }
                }
            }
        }
    }

}
