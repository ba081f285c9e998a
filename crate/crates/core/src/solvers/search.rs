//! Exact search over candidate host trees: clique anchors for chordal
//! classes, interval assignment for proper interval graphs.

use std::collections::{BTreeMap, VecDeque};
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use crate::intg::{chordal_cliques, clique_order, CliqueSet};
use crate::model::{
    replay_tracking, Graph, GraphClass, HostTree, Instance, ModType, Node, Representation, Solution, Subtree,
    TreeDerivation, Verdict, Vertex,
};
use crate::pint::proper_order;
use crate::prep::prune;

use super::derive::for_each_derivation;
use super::standard::recog_standard;

#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// extra host nodes a derivation may create
    pub node_budget: usize,
    pub time_limit: Option<Duration>,
}

impl SearchLimits {
    pub fn new(node_budget: usize) -> Self {
        SearchLimits {
            node_budget,
            time_limit: None,
        }
    }
}

const WORDS: usize = 4;
/// Largest host the search handles.
pub(crate) const MAX_NODES: usize = 64 * WORDS;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Mask([u64; WORDS]);

impl Mask {
    fn single(x: Node) -> Mask {
        let mut m = Mask::default();
        m.insert(x);
        m
    }
    fn insert(&mut self, x: Node) {
        self.0[x / 64] |= 1 << (x % 64);
    }
    fn has(&self, x: Node) -> bool {
        self.0[x / 64] >> (x % 64) & 1 == 1
    }
    fn or(&self, o: &Mask) -> Mask {
        Mask(std::array::from_fn(|i| self.0[i] | o.0[i]))
    }
    fn and_not(&self, o: &Mask) -> Mask {
        Mask(std::array::from_fn(|i| self.0[i] & !o.0[i]))
    }
    fn meets(&self, o: &Mask) -> bool {
        (0..WORDS).any(|i| self.0[i] & o.0[i] != 0)
    }
    fn and(&self, o: &Mask) -> Mask {
        Mask(std::array::from_fn(|i| self.0[i] & o.0[i]))
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn first(&self) -> Option<Node> {
        (0..WORDS).find(|&i| self.0[i] != 0).map(|i| i * 64 + self.0[i].trailing_zeros() as usize)
    }
    fn nodes(&self) -> Vec<Node> {
        (0..WORDS * 64).filter(|&x| self.has(x)).collect()
    }
    fn from_nodes(nodes: &[Node]) -> Mask {
        let mut m = Mask::default();
        for &x in nodes {
            m.insert(x);
        }
        m
    }
}

struct Clock {
    deadline: Option<Instant>,
    ticks: u32,
    expired: bool,
}

impl Clock {
    fn new(limit: Option<Duration>) -> Clock {
        Clock {
            deadline: limit.map(|d| Instant::now() + d),
            ticks: 0,
            expired: false,
        }
    }
    fn expired(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        if !self.expired && self.ticks % 256 == 0 {
            self.expired = self.deadline.is_some_and(|d| Instant::now() >= d);
        }
        self.expired
    }
}

/// Whether the graph belongs to the class at all, with no host constraint.
fn in_class(class: GraphClass, graph: &Graph) -> bool {
    match class {
        GraphClass::ProperInterval => graph
            .components()
            .iter()
            .all(|c| proper_order(&graph.induced(c), &BTreeMap::new()).is_ok()),
        GraphClass::Interval => graph.components().iter().all(|c| {
            let g = graph.induced(c);
            chordal_cliques(&g).is_some_and(|k| clique_order(&k, g.n()).is_some())
        }),
        GraphClass::Path => recog_standard(class, graph).is_extendible(),
        GraphClass::Chordal => chordal_cliques(graph).is_some(),
    }
}

/// Searches candidate derivations of `T'` within the node budget and a
/// representation on each. Fixed instances and, given a large enough budget,
/// subdivision instances and path-host instances get a definite answer;
/// attachment to general trees is only searched over small shapes.
pub fn exact_search(instance: &Instance, limits: &SearchLimits) -> Verdict {
    let pruned = prune(&instance.graph, &instance.partial);
    let graph = &pruned.pruned_graph;
    let partial = &pruned.pruned_partial;
    let (class, mod_type) = (instance.class, instance.mod_type);
    if !in_class(class, graph) {
        return Verdict::NotExtendible;
    }
    let cliques = chordal_cliques(graph).expect("class members are chordal");
    let free = (0..graph.n()).filter(|v| !partial.predrawn.contains_key(v)).count();
    // extra nodes that suffice whenever any derivation works
    let enough = match (class, mod_type) {
        (_, ModType::Fixed) => Some(0),
        (GraphClass::ProperInterval, _) => Some(2 * free),
        (GraphClass::Interval, _) | (_, ModType::Sub) => Some(cliques.count().min(2 * free)),
        _ => None,
    };
    let enough = if free == 0 { Some(0) } else { enough };
    let (budgets, complete): (Vec<usize>, bool) = match enough {
        // any witness with fewer nodes survives adding more
        Some(e) if e <= limits.node_budget => (if e == 0 { vec![0] } else { vec![0, e] }, true),
        Some(_) => (vec![0, limits.node_budget], false),
        None => ((0..=limits.node_budget.min(2 * cliques.count())).collect(), false),
    };
    let mut clock = Clock::new(limits.time_limit);
    let tree = &partial.tree;
    let drawn: Vec<(Vertex, Vec<Node>)> =
        partial.predrawn.iter().map(|(&v, s)| (v, s.nodes().to_vec())).collect();
    for extra in budgets {
        if tree.node_count() + extra > MAX_NODES {
            return Verdict::Inconclusive;
        }
        let flow = for_each_derivation(tree, class, mod_type, extra, &mut |d: &TreeDerivation| {
            if clock.expired() {
                return ControlFlow::Break(None);
            }
            let mut sets: Vec<Vec<Node>> = drawn.iter().map(|(_, s)| s.clone()).collect();
            let host = replay_tracking(tree, d, &mut sets).expect("candidate derivations replay");
            let fixed: BTreeMap<Vertex, Vec<Node>> = drawn.iter().map(|(v, _)| *v).zip(sets).collect();
            match fixed_search(class, graph, &cliques, &host, &fixed, &mut clock) {
                Some(rep) => ControlFlow::Break(Some(Solution {
                    tree: host,
                    derivation: d.clone(),
                    rep: Representation(rep),
                })),
                None => ControlFlow::Continue(()),
            }
        });
        match flow {
            ControlFlow::Break(Some(solution)) => {
                return Verdict::Extendible(Box::new(pruned.unprune(solution)));
            }
            ControlFlow::Break(None) => return Verdict::Inconclusive,
            ControlFlow::Continue(()) => {}
        }
    }
    if complete && !clock.expired {
        Verdict::NotExtendible
    } else {
        Verdict::Inconclusive
    }
}

/// A representation on exactly `host` keeping the pre-drawn node sets.
/// `None` also when the clock runs out.
fn fixed_search(
    class: GraphClass,
    graph: &Graph,
    cliques: &CliqueSet,
    host: &HostTree,
    fixed: &BTreeMap<Vertex, Vec<Node>>,
    clock: &mut Clock,
) -> Option<Vec<Subtree>> {
    if class == GraphClass::ProperInterval {
        return proper_search(graph, host, fixed, clock);
    }
    AnchorSearch::new(class, graph, cliques, host, fixed).run(clock)
}

/// Node sets of all tree paths, indexed `[a * N + b]`.
fn path_masks(host: &HostTree) -> Vec<Mask> {
    let n = host.node_count();
    let mut out = vec![Mask::default(); n * n];
    for a in 0..n {
        let mut parent = vec![usize::MAX; n];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            out[a * n + x] = if x == a { Mask::single(a) } else { out[a * n + parent[x]].or(&Mask::single(x)) };
            for &y in host.neighbors(x) {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
    }
    out
}

/// Each maximal clique gets a host node inside exactly the pre-drawn sets of
/// its members; a free vertex takes the smallest subtree spanning its
/// cliques' nodes.
struct AnchorSearch<'a> {
    graph: &'a Graph,
    cliques: &'a CliqueSet,
    n_nodes: usize,
    paths: Vec<Mask>,
    need_path: bool,
    drawn: Vec<Option<Mask>>,
    domain: Vec<Mask>,
    order: Vec<usize>,
    hull: Vec<Mask>,
    /// ends of each hull when subtrees must be paths
    ends: Vec<(Node, Node)>,
    used: Mask,
    /// clique anchored at each node
    owner: Vec<usize>,
    adj: Vec<Vec<Node>>,
    all: Mask,
    /// unanchored cliques per vertex
    left: Vec<usize>,
    /// graph component of each clique, and per component the clique count,
    /// how many are anchored and whether it has a pre-drawn vertex
    comp_of: Vec<usize>,
    comp_size: Vec<usize>,
    comp_placed: Vec<usize>,
    comp_drawn: Vec<bool>,
}

impl<'a> AnchorSearch<'a> {
    fn new(
        class: GraphClass,
        graph: &'a Graph,
        cliques: &'a CliqueSet,
        host: &HostTree,
        fixed: &BTreeMap<Vertex, Vec<Node>>,
    ) -> Self {
        let n = graph.n();
        let mut drawn = vec![None; n];
        for (&v, s) in fixed {
            drawn[v] = Some(Mask::from_nodes(s));
        }
        let all = Mask::from_nodes(&(0..host.node_count()).collect::<Vec<_>>());
        let domain: Vec<Mask> = cliques
            .cliques
            .iter()
            .map(|k| {
                let mut d = all;
                for (v, m) in drawn.iter().enumerate() {
                    if let Some(m) = m {
                        d = if k.binary_search(&v).is_ok() { d.and(m) } else { d.and_not(m) };
                    }
                }
                d
            })
            .collect();
        let c = cliques.count();
        // a vertex drawn on the whole host meets everything and is ignored
        // when splitting into components
        let rest: Vec<Vertex> = (0..n).filter(|&v| drawn[v] != Some(all)).collect();
        let mut components: Vec<Vec<Vertex>> = graph
            .induced(&rest)
            .components()
            .into_iter()
            .map(|comp| comp.into_iter().map(|i| rest[i]).collect())
            .collect();
        let mut comp_of_vertex = vec![components.len(); n];
        for (i, comp) in components.iter().enumerate() {
            for &v in comp {
                comp_of_vertex[v] = i;
            }
        }
        components.push(Vec::new());
        let comp_of: Vec<usize> =
            cliques.cliques.iter().map(|k| k.iter().map(|&v| comp_of_vertex[v]).min().unwrap()).collect();
        let mut comp_size = vec![0; components.len()];
        for &i in &comp_of {
            comp_size[i] += 1;
        }
        let comp_drawn = components.iter().map(|comp| comp.iter().any(|&v| drawn[v].is_some())).collect();
        let mut left = vec![0; n];
        for k in &cliques.cliques {
            for &v in k {
                left[v] += 1;
            }
        }
        // overlap with chosen cliques first, then the most constrained, then
        // the largest component
        let mut order: Vec<usize> = Vec::with_capacity(c);
        let mut taken = vec![false; c];
        let size = |k: usize| domain[k].nodes().len();
        while order.len() < c {
            let best = (0..c)
                .filter(|&k| !taken[k])
                .max_by_key(|&k| {
                    let shared = order
                        .iter()
                        .map(|&q| cliques.cliques[k].iter().filter(|v| cliques.cliques[q].binary_search(v).is_ok()).count())
                        .sum::<usize>();
                    (shared, std::cmp::Reverse(size(k)), comp_size[comp_of[k]], std::cmp::Reverse(k))
                })
                .unwrap();
            taken[best] = true;
            order.push(best);
        }
        AnchorSearch {
            graph,
            cliques,
            n_nodes: host.node_count(),
            paths: path_masks(host),
            need_path: class.needs_path_subtrees(),
            drawn,
            domain,
            order,
            hull: vec![Mask::default(); n],
            ends: vec![(usize::MAX, usize::MAX); n],
            used: Mask::default(),
            owner: vec![usize::MAX; host.node_count()],
            adj: (0..host.node_count()).map(|x| host.neighbors(x).to_vec()).collect(),
            all,
            left,
            comp_placed: vec![0; comp_size.len()],
            comp_of,
            comp_size,
            comp_drawn,
        }
    }

    fn path(&self, a: Node, b: Node) -> &Mask {
        &self.paths[a * self.n_nodes + b]
    }

    fn run(mut self, clock: &mut Clock) -> Option<Vec<Subtree>> {
        if self.domain.iter().any(Mask::is_empty) {
            return None;
        }
        if !self.assign(0, clock) {
            return None;
        }
        Some(
            (0..self.graph.n())
                .map(|v| Subtree::new(self.drawn[v].unwrap_or(self.hull[v]).nodes()))
                .collect(),
        )
    }

    fn assign(&mut self, depth: usize, clock: &mut Clock) -> bool {
        if depth == self.order.len() {
            return true;
        }
        if clock.expired() || !self.room(self.order.len() - depth) {
            return false;
        }
        let k = self.order[depth];
        let members = &self.cliques.cliques[k];
        for x in self.domain[k].and_not(&self.used).nodes() {
            // an anchor lies in the subtrees of its members only
            let covered = (0..self.graph.n()).any(|u| self.hull[u].has(x) && members.binary_search(&u).is_err());
            if covered {
                continue;
            }
            let saved: Vec<(Mask, (Node, Node))> = members.iter().map(|&v| (self.hull[v], self.ends[v])).collect();
            if self.extend(members, x) {
                self.used.insert(x);
                self.owner[x] = k;
                self.comp_placed[self.comp_of[k]] += 1;
                for &v in members {
                    self.left[v] -= 1;
                }
                if self.assign(depth + 1, clock) {
                    return true;
                }
                for &v in members {
                    self.left[v] += 1;
                }
                self.comp_placed[self.comp_of[k]] -= 1;
                self.used = self.used.and_not(&Mask::single(x));
                self.owner[x] = usize::MAX;
            }
            for (&v, &(h, e)) in members.iter().zip(&saved) {
                self.hull[v] = h;
                self.ends[v] = e;
            }
            if clock.expired {
                return false;
            }
        }
        false
    }

    /// Necessary room for `remaining` more anchors: enough nodes outside
    /// finished subtrees, and untouched components packing into the regions
    /// no subtree has reached yet.
    fn room(&self, remaining: usize) -> bool {
        let mut dead = self.used;
        let mut touched = self.used;
        for v in 0..self.graph.n() {
            let set = self.drawn[v].as_ref().unwrap_or(&self.hull[v]);
            if *set == self.all {
                continue;
            }
            touched = touched.or(set);
            if self.left[v] == 0 {
                dead = dead.or(set);
            }
        }
        if self.all.and_not(&dead).count() < remaining {
            return false;
        }
        let mut sizes: Vec<usize> = (0..self.comp_size.len())
            .filter(|&i| self.comp_size[i] > 0 && self.comp_placed[i] == 0 && !self.comp_drawn[i])
            .map(|i| self.comp_size[i])
            .collect();
        if sizes.is_empty() {
            return true;
        }
        let mut free = self.all.and_not(&touched);
        let mut regions = Vec::new();
        while let Some(start) = free.first() {
            free = free.and_not(&Mask::single(start));
            let mut stack = vec![start];
            let mut size = 0;
            while let Some(x) = stack.pop() {
                size += 1;
                for &y in &self.adj[x] {
                    if free.has(y) {
                        free = free.and_not(&Mask::single(y));
                        stack.push(y);
                    }
                }
            }
            regions.push(size);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        fn pack(sizes: &[usize], regions: &mut [usize]) -> bool {
            let Some((&s, rest)) = sizes.split_first() else { return true };
            for i in 0..regions.len() {
                if regions[i] >= s && !regions[..i].contains(&regions[i]) {
                    regions[i] -= s;
                    let ok = pack(rest, regions);
                    regions[i] += s;
                    if ok {
                        return true;
                    }
                }
            }
            false
        }
        pack(&sizes, &mut regions)
    }

    /// Grows the hulls of the free members of a clique by node `x`; false
    /// when some grown hull breaks a constraint.
    fn extend(&mut self, members: &[Vertex], x: Node) -> bool {
        for &v in members {
            if self.drawn[v].is_some() {
                continue;
            }
            let old = self.hull[v];
            let grown = match old.first() {
                None => {
                    self.ends[v] = (x, x);
                    Mask::single(x)
                }
                Some(_) if old.has(x) => continue,
                Some(s) => {
                    let grown = old.or(self.path(x, s));
                    if self.need_path {
                        let (e1, e2) = self.ends[v];
                        if self.path(x, e1).has(e2) {
                            self.ends[v] = (x, e1);
                        } else if self.path(x, e2).has(e1) {
                            self.ends[v] = (x, e2);
                        } else {
                            return false;
                        }
                    }
                    grown
                }
            };
            let added = grown.and_not(&old);
            let foreign = added
                .and(&self.used)
                .nodes()
                .into_iter()
                .any(|y| self.cliques.cliques[self.owner[y]].binary_search(&v).is_err());
            if foreign {
                return false;
            }
            for u in 0..self.graph.n() {
                if u == v || self.graph.has_edge(u, v) {
                    continue;
                }
                let other = self.drawn[u].as_ref().unwrap_or(&self.hull[u]);
                if other.meets(&added) {
                    return false;
                }
            }
            self.hull[v] = grown;
        }
        true
    }
}

/// Subpath assignment on a path host, checking intersections and strict
/// containment against every assigned vertex.
fn proper_search(
    graph: &Graph,
    host: &HostTree,
    fixed: &BTreeMap<Vertex, Vec<Node>>,
    clock: &mut Clock,
) -> Option<Vec<Subtree>> {
    let order = host.path_order()?;
    let mut pos = vec![0; order.len()];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let n = graph.n();
    let mut iv: Vec<Option<(usize, usize)>> = vec![None; n];
    for (&v, s) in fixed {
        let ps: Vec<usize> = s.iter().map(|&x| pos[x]).collect();
        iv[v] = Some((*ps.iter().min()?, *ps.iter().max()?));
    }
    // free vertices in BFS order from the drawn ones
    let mut seq = Vec::new();
    let mut seen: Vec<bool> = iv.iter().map(Option::is_some).collect();
    let mut queue: VecDeque<Vertex> = fixed.keys().copied().collect();
    loop {
        while let Some(v) = queue.pop_front() {
            for &u in graph.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    seq.push(u);
                    queue.push_back(u);
                }
            }
        }
        match (0..n).find(|&v| !seen[v]) {
            Some(v) => {
                seen[v] = true;
                seq.push(v);
                queue.push_back(v);
            }
            None => break,
        }
    }
    let t = order.len();
    fn fits(graph: &Graph, iv: &[Option<(usize, usize)>], v: Vertex, (l, r): (usize, usize)) -> bool {
        iv.iter().enumerate().all(|(u, other)| match other {
            &Some((a, b)) if u != v => {
                let meet = l <= b && a <= r;
                let nested = (a <= l && r <= b || l <= a && b <= r) && (a, b) != (l, r);
                meet == graph.has_edge(u, v) && !nested
            }
            _ => true,
        })
    }
    fn rec(
        graph: &Graph,
        iv: &mut Vec<Option<(usize, usize)>>,
        seq: &[Vertex],
        t: usize,
        clock: &mut Clock,
    ) -> bool {
        let Some((&v, rest)) = seq.split_first() else { return true };
        if clock.expired() {
            return false;
        }
        for l in 0..t {
            for r in l..t {
                if fits(graph, iv, v, (l, r)) {
                    iv[v] = Some((l, r));
                    if rec(graph, iv, rest, t, clock) {
                        return true;
                    }
                    iv[v] = None;
                }
            }
        }
        false
    }
    if !rec(graph, &mut iv, &seq, t, clock) {
        return None;
    }
    Some(
        iv.into_iter()
            .map(|s| {
                let (l, r) = s.expect("assigned");
                Subtree::new(order[l..=r].to_vec())
            })
            .collect(),
    )
}
