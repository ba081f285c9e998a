//! Instance generators for the 3-Partition and bin packing reductions, and
//! decoders that read a partition back off an extending representation.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Graph, GraphClass, HostTree, Instance, ModType, Node, PartialRepresentation, Solution, Subtree, TreeOp, Vertex,
};
use crate::packing::BinPackingInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("invalid 3-Partition input: {0}")]
    InvalidThreePartition(String),
    #[error("invalid bin packing input: {0}")]
    InvalidBinPacking(String),
    #[error("generated instance would have {0} host nodes")]
    TooLarge(u64),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
}

/// `3k` sizes strictly between `M/4` and `M/2` summing to `kM`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePartition {
    pub k: usize,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "A")]
    pub a: Vec<u64>,
}

impl ThreePartition {
    pub fn new(k: usize, m: u64, a: Vec<u64>) -> Result<Self, HardnessError> {
        let tp = ThreePartition { k, m, a };
        tp.validate()?;
        Ok(tp)
    }

    pub fn validate(&self) -> Result<(), HardnessError> {
        let bad = |s: String| Err(HardnessError::InvalidThreePartition(s));
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        if self.a.len() != 3 * self.k {
            return bad(format!("expected {} sizes, got {}", 3 * self.k, self.a.len()));
        }
        if let Some(x) = self.a.iter().find(|&&x| 4 * x <= self.m || 2 * x >= self.m) {
            return bad(format!("size {x} not strictly between M/4 and M/2"));
        }
        let sum: u64 = self.a.iter().sum();
        if sum != self.k as u64 * self.m {
            return bad(format!("sizes sum to {sum}, expected {}", self.k as u64 * self.m));
        }
        Ok(())
    }

    pub fn scaled(&self, s: u64) -> ThreePartition {
        ThreePartition {
            k: self.k,
            m: self.m * s,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    /// Triples of indices summing to `M`, by exhaustive search.
    pub fn solve(&self) -> Option<Vec<[usize; 3]>> {
        fn rec(a: &[u64], m: u64, used: &mut [bool], out: &mut Vec<[usize; 3]>) -> bool {
            let Some(i) = used.iter().position(|u| !u) else { return true };
            used[i] = true;
            for j in i + 1..a.len() {
                if used[j] {
                    continue;
                }
                used[j] = true;
                for l in j + 1..a.len() {
                    if !used[l] && a[i] + a[j] + a[l] == m {
                        used[l] = true;
                        out.push([i, j, l]);
                        if rec(a, m, used, out) {
                            return true;
                        }
                        out.pop();
                        used[l] = false;
                    }
                }
                used[j] = false;
            }
            used[i] = false;
            false
        }
        let mut out = Vec::new();
        rec(&self.a, self.m, &mut vec![false; self.a.len()], &mut out).then_some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionKind {
    IntFixed,
    PintFixed,
    IntAdd,
    PathAdd,
    PathChorFixed,
    PathChorSub,
    ChorAdd,
    ChorBoth,
    PintBinPacking,
}

/// How a generated instance maps back to its source problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMeta {
    pub kind: ReductionKind,
    /// factor applied to all sizes before construction
    pub scale: u64,
    /// gap length after scaling (`M` or `V`)
    pub gap: u64,
    /// main path nodes `p_0, p_1, ...`
    pub path: Vec<Node>,
    /// the nodes `p_{(gap+1)i}` separating the gaps
    pub split_nodes: Vec<Node>,
    pub split_gadgets: Vec<Vec<Vertex>>,
    /// vertices of the take gadget for source item `i`
    pub take_gadgets: Vec<Vec<Vertex>>,
    /// source item sizes before scaling
    pub sizes: Vec<u64>,
    pub universal: Option<Vertex>,
}

/// Incrementally built graph.
#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl Builder {
    fn vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }
    fn edge(&mut self, u: Vertex, v: Vertex) {
        self.edges.push((u, v));
    }
    /// Path with `len` edges.
    fn path(&mut self, len: usize) -> Vec<Vertex> {
        let vs: Vec<Vertex> = (0..=len).map(|_| self.vertex()).collect();
        for w in vs.windows(2) {
            self.edge(w[0], w[1]);
        }
        vs
    }
    fn graph(&self) -> Graph {
        Graph::new(self.n, &self.edges).expect("generated graph is simple")
    }
}

/// Host tree under construction: a main path plus decorations.
struct TreeBuilder {
    count: usize,
    edges: Vec<(Node, Node)>,
}

impl TreeBuilder {
    fn path(len: usize) -> (TreeBuilder, Vec<Node>) {
        let nodes: Vec<Node> = (0..=len).collect();
        let edges = nodes.windows(2).map(|w| (w[0], w[1])).collect();
        (TreeBuilder { count: len + 1, edges }, nodes)
    }
    fn hang(&mut self, at: Node) -> Node {
        self.edges.push((at, self.count));
        self.count += 1;
        self.count - 1
    }
    fn tree(&self) -> HostTree {
        HostTree::new(self.count, &self.edges).expect("generated host is a tree")
    }
}

fn main_path_len(k: usize, gap: u64) -> Result<usize, HardnessError> {
    let len = (gap + 1) * k as u64;
    if len > 1_000_000 {
        return Err(HardnessError::TooLarge(len + 1));
    }
    Ok(len as usize)
}

/// Smallest factor making every size at least 4.
fn pint_scale(sizes: &[u64]) -> u64 {
    let min = sizes.iter().copied().min().unwrap_or(4).max(1);
    4u64.div_ceil(min).max(1)
}

/// Split vertices pinned at every `(gap+1)`-th node of a path, take gadgets
/// as unlocated paths. Shared by the interval and bin packing reductions.
fn pinned_gaps(
    k: usize,
    gap: u64,
    sizes: &[u64],
    pint_take: bool,
) -> Result<(Graph, PartialRepresentation, ReductionMeta), HardnessError> {
    let len = main_path_len(k, gap)?;
    let (tb, path) = TreeBuilder::path(len);
    let mut g = Builder::default();
    let mut partial = PartialRepresentation::empty(tb.tree());
    let split_nodes: Vec<Node> = (0..=k).map(|i| path[(gap as usize + 1) * i]).collect();
    let split_gadgets: Vec<Vec<Vertex>> = split_nodes
        .iter()
        .map(|&p| {
            let v = g.vertex();
            partial.predrawn.insert(v, Subtree::single(p));
            vec![v]
        })
        .collect();
    let take_gadgets = sizes
        .iter()
        .map(|&a| g.path(if pint_take { a as usize - 2 } else { a as usize }))
        .collect();
    let meta = ReductionMeta {
        kind: ReductionKind::IntFixed,
        scale: 1,
        gap,
        path,
        split_nodes,
        split_gadgets,
        take_gadgets,
        sizes: sizes.to_vec(),
        universal: None,
    };
    Ok((g.graph(), partial, meta))
}

fn finish(graph: Graph, class: GraphClass, mod_type: ModType, partial: PartialRepresentation) -> Instance {
    Instance::new(graph, class, mod_type, partial).expect("generated partial representation is valid")
}

/// Fixed-type interval reduction: `k + 1` pinned singletons split a path into
/// `k` gaps of `M` nodes; item `i` becomes a path of span `A_i`.
pub fn gen_int_fixed(tp: &ThreePartition, class: GraphClass) -> Result<(Instance, ReductionMeta), HardnessError> {
    tp.validate()?;
    if tp.m < 4 {
        return Err(HardnessError::InvalidThreePartition("M must be at least 4".into()));
    }
    let (scale, kind) = match class {
        GraphClass::ProperInterval => (pint_scale(&tp.a), ReductionKind::PintFixed),
        GraphClass::Interval => (1, ReductionKind::IntFixed),
        _ => return Err(HardnessError::InvalidThreePartition(format!("class {class} has its own reduction"))),
    };
    let s = tp.scaled(scale);
    let (graph, partial, mut meta) = pinned_gaps(s.k, s.m, &s.a, class == GraphClass::ProperInterval)?;
    meta.kind = kind;
    meta.scale = scale;
    meta.sizes = tp.a.clone();
    Ok((finish(graph, class, ModType::Fixed, partial), meta))
}

/// Adds a pre-drawn vertex adjacent to everything and drawn on all of `T'`.
fn add_universal(instance: Instance, mod_type: ModType, meta: &mut ReductionMeta) -> Instance {
    let mut graph = instance.graph.clone();
    let all: Vec<Vertex> = (0..graph.n()).collect();
    let u = graph.add_vertex(&all);
    let mut partial = instance.partial.clone();
    let nodes: Vec<Node> = (0..partial.tree.node_count()).collect();
    partial.predrawn.insert(u, Subtree::new(nodes));
    meta.universal = Some(u);
    finish(graph, instance.class, mod_type, partial)
}

/// The interval reduction with a universal pre-drawn vertex, Add type.
pub fn gen_int_add(tp: &ThreePartition) -> Result<(Instance, ReductionMeta), HardnessError> {
    let (inst, mut meta) = gen_int_fixed(tp, GraphClass::Interval)?;
    meta.kind = ReductionKind::IntAdd;
    Ok((add_universal(inst, ModType::Add, &mut meta), meta))
}

/// Path graphs, Add type: the interval reduction plus a universal vertex.
pub fn gen_path_add(tp: &ThreePartition) -> Result<(Instance, ReductionMeta), HardnessError> {
    let (inst, mut meta) = gen_int_fixed(tp, GraphClass::Interval)?;
    meta.kind = ReductionKind::PathAdd;
    let inst = Instance { class: GraphClass::Path, ..inst };
    Ok((add_universal(inst, ModType::Add, &mut meta), meta))
}

fn check_tree_class(class: GraphClass, tp: &ThreePartition) -> Result<(), HardnessError> {
    tp.validate()?;
    if !matches!(class, GraphClass::Path | GraphClass::Chordal) {
        return Err(HardnessError::InvalidThreePartition(format!("class {class} has its own reduction")));
    }
    if tp.m < 8 {
        return Err(HardnessError::InvalidThreePartition("M must be at least 8".into()));
    }
    Ok(())
}

/// Recognition on a fixed tree: the path carries three pendant 2-edge paths
/// at every split position; each split gadget is a spider with three legs of
/// length two; take gadgets are paths.
pub fn gen_pathchor_fixed(tp: &ThreePartition, class: GraphClass) -> Result<(Instance, ReductionMeta), HardnessError> {
    check_tree_class(class, tp)?;
    let len = main_path_len(tp.k, tp.m)?;
    let (mut tb, path) = TreeBuilder::path(len);
    let split_nodes: Vec<Node> = (0..=tp.k).map(|i| path[(tp.m as usize + 1) * i]).collect();
    for &p in &split_nodes {
        for _ in 0..3 {
            let a = tb.hang(p);
            tb.hang(a);
        }
    }
    let mut g = Builder::default();
    let split_gadgets = split_nodes.iter().map(|_| spider(&mut g)).collect();
    let take_gadgets = tp.a.iter().map(|&a| g.path(a as usize)).collect();
    let meta = ReductionMeta {
        kind: ReductionKind::PathChorFixed,
        scale: 1,
        gap: tp.m,
        path,
        split_nodes,
        split_gadgets,
        take_gadgets,
        sizes: tp.a.clone(),
        universal: None,
    };
    let partial = PartialRepresentation::empty(tb.tree());
    Ok((finish(g.graph(), class, ModType::Fixed, partial), meta))
}

/// Spider `S(2,2,2)`: centre first, then the legs.
fn spider(g: &mut Builder) -> Vec<Vertex> {
    let c = g.vertex();
    let mut out = vec![c];
    for _ in 0..3 {
        let leg = g.path(1);
        g.edge(c, leg[0]);
        out.extend(leg);
    }
    out
}

/// Triangle chain with `a` triangles: path `w_1..w_{a+1}`, `x_j` adjacent to
/// `w_j, w_{j+1}`, a pendant on every `x_j` and on both ends of the path.
/// Every member of a triangle then has a neighbour the other two miss, which
/// forces a branch node into each triangle.
pub fn triangle_chain(g: &mut Graph, a: usize) -> Vec<Vertex> {
    let mut b = Builder { n: g.n(), edges: g.edges().collect() };
    let out = triangle_chain_into(&mut b, a);
    *g = b.graph();
    out
}

fn triangle_chain_into(g: &mut Builder, a: usize) -> Vec<Vertex> {
    let w = g.path(a);
    let mut out = w.clone();
    for j in 0..a {
        let x = g.vertex();
        g.edge(x, w[j]);
        g.edge(x, w[j + 1]);
        let y = g.vertex();
        g.edge(x, y);
        out.extend([x, y]);
    }
    for end in [w[0], w[a]] {
        let leaf = g.vertex();
        g.edge(leaf, end);
        out.push(leaf);
    }
    out
}

/// Split gadget for the subdivision reduction: a centre adjacent to one
/// corner of each of three triangles, with a pendant on both other corners.
pub fn sub_split_gadget(g: &mut Graph) -> Vec<Vertex> {
    let mut b = Builder { n: g.n(), edges: g.edges().collect() };
    let out = sub_split_into(&mut b);
    *g = b.graph();
    out
}

fn sub_split_into(g: &mut Builder) -> Vec<Vertex> {
    let c = g.vertex();
    let mut out = vec![c];
    for _ in 0..3 {
        let t: Vec<Vertex> = (0..3).map(|_| g.vertex()).collect();
        g.edge(t[0], t[1]);
        g.edge(t[1], t[2]);
        g.edge(t[0], t[2]);
        g.edge(c, t[0]);
        out.extend(&t);
        for &corner in &t[1..] {
            let d = g.vertex();
            g.edge(corner, d);
            out.push(d);
        }
    }
    out
}

/// Recognition under subdivision: triangle chains as take gadgets, the
/// triangle split gadget, a pendant leaf on every gap node and, at each split
/// position, three children with two leaves each (four branch nodes).
pub fn gen_pathchor_sub(tp: &ThreePartition, class: GraphClass) -> Result<(Instance, ReductionMeta), HardnessError> {
    check_tree_class(class, tp)?;
    let len = main_path_len(tp.k, tp.m)?;
    let (mut tb, path) = TreeBuilder::path(len);
    let period = tp.m as usize + 1;
    let split_nodes: Vec<Node> = (0..=tp.k).map(|i| path[period * i]).collect();
    for (i, &p) in path.iter().enumerate() {
        if i % period == 0 {
            for _ in 0..3 {
                let c = tb.hang(p);
                tb.hang(c);
                tb.hang(c);
            }
        } else {
            tb.hang(p);
        }
    }
    let mut g = Builder::default();
    let split_gadgets = split_nodes.iter().map(|_| sub_split_into(&mut g)).collect();
    let take_gadgets = tp.a.iter().map(|&a| triangle_chain_into(&mut g, a as usize)).collect();
    let meta = ReductionMeta {
        kind: ReductionKind::PathChorSub,
        scale: 1,
        gap: tp.m,
        path,
        split_nodes,
        split_gadgets,
        take_gadgets,
        sizes: tp.a.clone(),
        universal: None,
    };
    let partial = PartialRepresentation::empty(tb.tree());
    Ok((finish(g.graph(), class, ModType::Sub, partial), meta))
}

/// Chordal graphs with one pre-drawn universal vertex: the fixed-tree
/// reduction for Add, the subdivision reduction for Both.
pub fn gen_chor_universal(tp: &ThreePartition, mod_type: ModType) -> Result<(Instance, ReductionMeta), HardnessError> {
    let (inst, mut meta, kind) = match mod_type {
        ModType::Add => {
            let (i, m) = gen_pathchor_fixed(tp, GraphClass::Chordal)?;
            (i, m, ReductionKind::ChorAdd)
        }
        ModType::Both => {
            let (i, m) = gen_pathchor_sub(tp, GraphClass::Chordal)?;
            (i, m, ReductionKind::ChorBoth)
        }
        _ => return Err(HardnessError::InvalidThreePartition(format!("no universal-vertex reduction for {mod_type}"))),
    };
    meta.kind = kind;
    Ok((add_universal(inst, mod_type, &mut meta), meta))
}

/// Proper interval graphs, Fixed type, from bin packing: bins become gaps of
/// `V` nodes, item `i` a path with span `A_i`.
pub fn gen_pint_fixed_from_binpacking(bp: &BinPackingInstance) -> Result<(Instance, ReductionMeta), HardnessError> {
    if bp.k == 0 || bp.volume == 0 || bp.items.contains(&0) {
        return Err(HardnessError::InvalidBinPacking("k, V and all items must be positive".into()));
    }
    let scale = pint_scale(&bp.items);
    let items: Vec<u64> = bp.items.iter().map(|x| x * scale).collect();
    let (graph, partial, mut meta) = pinned_gaps(bp.k, bp.volume * scale, &items, true)?;
    meta.kind = ReductionKind::PintBinPacking;
    meta.scale = scale;
    meta.sizes = bp.items.clone();
    Ok((finish(graph, GraphClass::ProperInterval, ModType::Fixed, partial), meta))
}

/// Item indices per gap, read from where each take gadget sits along the
/// main path. For 3-Partition reductions every group is a triple summing to
/// `M`; for bin packing every group fits its bin.
pub fn decode(meta: &ReductionMeta, solution: &Solution) -> Result<Vec<Vec<usize>>, HardnessError> {
    let tree = &solution.tree;
    let malformed = |s: String| Err(HardnessError::MalformedWitness(s));
    let (first, last) = (meta.path[0], *meta.path.last().unwrap());
    if first >= tree.node_count() || last >= tree.node_count() {
        return malformed("main path nodes missing from the host".into());
    }
    // the main path after subdivision, and each node's foot on it
    let main = tree_path(tree, first, last);
    let mut index = vec![usize::MAX; tree.node_count()];
    for (i, &x) in main.iter().enumerate() {
        index[x] = i;
    }
    let mut foot = index.clone();
    let mut queue: VecDeque<Node> = main.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for &y in tree.neighbors(x) {
            if foot[y] == usize::MAX {
                foot[y] = foot[x];
                queue.push_back(y);
            }
        }
    }
    let attached: HashSet<Node> = solution
        .derivation
        .ops
        .iter()
        .flat_map(|op| match op {
            TreeOp::AttachBranch { edges, anchor } => {
                edges.iter().flat_map(|&(a, b)| [a, b]).filter(|x| x != anchor).collect()
            }
            TreeOp::SubdivideEdge { .. } => Vec::new(),
        })
        .collect();
    let splits: Vec<usize> = meta.split_nodes.iter().map(|&p| index[p]).collect();
    if splits.iter().any(|&s| s == usize::MAX) || splits.windows(2).any(|w| w[0] >= w[1]) {
        return malformed("split nodes are not in order along the main path".into());
    }
    let mut groups = vec![Vec::new(); splits.len() - 1];
    for (item, gadget) in meta.take_gadgets.iter().enumerate() {
        let mut nodes: Vec<Node> = gadget.iter().flat_map(|&v| solution.rep.0[v].nodes().to_vec()).collect();
        // the part inside T' decides, as in the restriction argument
        if nodes.iter().any(|x| !attached.contains(x)) {
            nodes.retain(|x| !attached.contains(x));
        }
        let lo = nodes.iter().map(|&x| foot[x]).min().unwrap_or(usize::MAX);
        let hi = nodes.iter().map(|&x| foot[x]).max().unwrap_or(usize::MAX);
        let Some(g) = (0..groups.len()).find(|&g| splits[g] < lo && hi < splits[g + 1]) else {
            return malformed(format!("take gadget {item} is not inside one gap"));
        };
        groups[g].push(item);
    }
    Ok(groups)
}

fn tree_path(tree: &HostTree, a: Node, b: Node) -> Vec<Node> {
    let mut parent: BTreeMap<Node, Node> = BTreeMap::new();
    parent.insert(a, a);
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        for &y in tree.neighbors(x) {
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(y) {
                e.insert(x);
                queue.push_back(y);
            }
        }
    }
    let mut out = vec![b];
    let mut x = b;
    while x != a {
        x = parent[&x];
        out.push(x);
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ThreePartition {
        ThreePartition::new(2, 7, vec![2, 2, 2, 2, 3, 3]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ThreePartition::new(1, 9, vec![3, 3, 3]).is_ok());
        assert!(ThreePartition::new(0, 9, vec![]).is_err());
        assert!(ThreePartition::new(1, 8, vec![2, 3, 3]).is_err());
        assert!(ThreePartition::new(1, 9, vec![3, 3, 4]).is_err());
        assert_eq!(sample().solve().unwrap().len(), 2);
    }

    #[test]
    fn sample_shape() {
        let (inst, meta) = gen_int_fixed(&sample(), GraphClass::Interval).unwrap();
        assert_eq!(inst.partial.tree.node_count(), 17);
        assert_eq!(inst.partial.predrawn.len(), 3);
        assert_eq!(inst.graph.n(), 3 + 4 * 3 + 2 * 4);
        assert_eq!(meta.split_nodes, vec![0, 8, 16]);
        let (pint, meta) = gen_int_fixed(&sample(), GraphClass::ProperInterval).unwrap();
        assert_eq!(meta.scale, 2);
        assert_eq!(pint.partial.tree.node_count(), 2 * 15 + 1);
    }

    #[test]
    fn gadget_sizes() {
        let mut g = Graph::empty(0);
        let chain = triangle_chain(&mut g, 2);
        assert_eq!(chain.len(), 3 * 2 + 3);
        assert_eq!(g.edge_count(), 2 + 4 + 2 + 2);
        let split = sub_split_gadget(&mut g);
        assert_eq!(split.len(), 16);
        let tp = ThreePartition::new(1, 9, vec![3, 3, 3]).unwrap();
        let (inst, _) = gen_pathchor_fixed(&tp, GraphClass::Path).unwrap();
        assert_eq!(inst.partial.tree.node_count(), 11 + 12);
        assert_eq!(inst.partial.tree.branch_nodes().len(), 2);
        let (sub, _) = gen_pathchor_sub(&tp, GraphClass::Path).unwrap();
        // 4 branch nodes per split position, one per gap node
        assert_eq!(sub.partial.tree.branch_nodes().len(), 2 * 4 + 9);
        assert!(gen_chor_universal(&tp, ModType::Sub).is_err());
    }

    #[test]
    fn gadgets_force_branch_nodes() {
        use crate::oracle::min_branch_nodes;
        for a in 1..=4 {
            let mut g = Graph::empty(0);
            triangle_chain(&mut g, a);
            assert_eq!(min_branch_nodes(&g, GraphClass::Path), Some(a));
        }
        let mut g = Graph::empty(0);
        sub_split_gadget(&mut g);
        assert_eq!(min_branch_nodes(&g, GraphClass::Path), Some(4));
    }
}
