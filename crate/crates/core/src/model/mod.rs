//! Graphs, host trees, subtree representations and the derivations that
//! turn an input tree `T'` into the output tree `T`.

mod graph;
mod tree;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use graph::{Graph, Vertex};
pub use tree::{HostTree, Node};
pub use validate::{validate_representation, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("vertex {0} out of range for a graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("host tree must have at least one node")]
    EmptyTree,
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("node {0} out of range for a tree on {1} nodes")]
    NodeOutOfRange(usize, usize),
    #[error("empty subtree for vertex {0}")]
    EmptySubtree(usize),
    #[error("subtree of vertex {0} is not connected in the host tree")]
    DisconnectedSubtree(usize),
    #[error("subtree of vertex {0} is not a path")]
    SubtreeNotPath(usize),
    #[error("class {0} requires a path host")]
    HostNotPath(GraphClass),
    #[error("pre-drawn vertices {0} and {1}: {2}")]
    InvalidPartial(usize, usize, &'static str),
    #[error("derivation op {index}: {reason}")]
    Derivation { index: usize, reason: String },
    #[error("derivation does not reproduce the claimed tree")]
    DerivationMismatch,
    #[error("representation covers {got} vertices, graph has {expected}")]
    RepresentationSize { got: usize, expected: usize },
}

/// Graph classes, ordered by inclusion `PINT ⊂ INT ⊂ PATH ⊂ CHOR`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphClass {
    #[serde(rename = "PINT")]
    ProperInterval,
    #[serde(rename = "INT")]
    Interval,
    #[serde(rename = "PATH")]
    Path,
    #[serde(rename = "CHOR")]
    Chordal,
}

impl GraphClass {
    pub const ALL: [GraphClass; 4] = [
        GraphClass::ProperInterval,
        GraphClass::Interval,
        GraphClass::Path,
        GraphClass::Chordal,
    ];

    /// Classes whose host must be a path.
    pub fn needs_path_host(self) -> bool {
        matches!(self, GraphClass::ProperInterval | GraphClass::Interval)
    }

    /// Classes whose subtrees must be paths.
    pub fn needs_path_subtrees(self) -> bool {
        self != GraphClass::Chordal
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphClass::ProperInterval => "PINT",
            GraphClass::Interval => "INT",
            GraphClass::Path => "PATH",
            GraphClass::Chordal => "CHOR",
        })
    }
}

impl std::str::FromStr for GraphClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "PINT" => Ok(GraphClass::ProperInterval),
            "INT" => Ok(GraphClass::Interval),
            "PATH" => Ok(GraphClass::Path),
            "CHOR" => Ok(GraphClass::Chordal),
            _ => Err(format!("unknown class `{s}`")),
        }
    }
}

/// How the output tree may differ from the input tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModType {
    Fixed,
    Sub,
    Add,
    Both,
}

impl ModType {
    pub const ALL: [ModType; 4] = [ModType::Fixed, ModType::Sub, ModType::Add, ModType::Both];

    pub fn allows_subdivision(self) -> bool {
        matches!(self, ModType::Sub | ModType::Both)
    }

    pub fn allows_attachment(self) -> bool {
        matches!(self, ModType::Add | ModType::Both)
    }
}

impl fmt::Display for ModType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for ModType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "fixed" => Ok(ModType::Fixed),
            "sub" => Ok(ModType::Sub),
            "add" => Ok(ModType::Add),
            "both" => Ok(ModType::Both),
            _ => Err(format!("unknown modification type `{s}`")),
        }
    }
}

/// A nonempty set of host nodes, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subtree(Vec<Node>);

impl Subtree {
    pub fn new(mut nodes: Vec<Node>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        Subtree(nodes)
    }

    pub fn single(node: Node) -> Self {
        Subtree(vec![node])
    }

    pub fn nodes(&self) -> &[Node] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: Node) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn intersects(&self, other: &Subtree) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn is_subset(&self, other: &Subtree) -> bool {
        self.0.iter().all(|x| other.contains(*x))
    }

    pub fn is_strict_subset(&self, other: &Subtree) -> bool {
        self.0.len() < other.0.len() && self.is_subset(other)
    }
}

impl FromIterator<Node> for Subtree {
    fn from_iter<I: IntoIterator<Item = Node>>(iter: I) -> Self {
        Subtree::new(iter.into_iter().collect())
    }
}

/// The input tree `T'` together with the pre-drawn subtrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRepresentation {
    pub tree: HostTree,
    pub predrawn: BTreeMap<Vertex, Subtree>,
}

impl PartialRepresentation {
    pub fn empty(tree: HostTree) -> Self {
        PartialRepresentation {
            tree,
            predrawn: BTreeMap::new(),
        }
    }
}

/// One step turning `T'` into `T`. Fresh nodes take the next unused ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum TreeOp {
    /// Replace edge `a-b` by the path `a, inserted.., b`.
    SubdivideEdge {
        edge: (Node, Node),
        inserted: Vec<Node>,
    },
    /// Hang a tree of fresh nodes off `anchor`.
    AttachBranch {
        anchor: Node,
        edges: Vec<(Node, Node)>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeDerivation {
    pub ops: Vec<TreeOp>,
}

impl TreeDerivation {
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn extra_nodes(&self) -> usize {
        self.ops
            .iter()
            .map(|op| match op {
                TreeOp::SubdivideEdge { inserted, .. } => inserted.len(),
                TreeOp::AttachBranch { edges, .. } => edges.len(),
            })
            .sum()
    }

    /// Whether every op is permitted under `mod_type`.
    pub fn legal_for(&self, mod_type: ModType) -> bool {
        self.ops.iter().all(|op| match op {
            TreeOp::SubdivideEdge { .. } => mod_type.allows_subdivision(),
            TreeOp::AttachBranch { .. } => mod_type.allows_attachment(),
        })
    }
}

/// Replays `derivation` on `tree`. Returns the derived tree and the embedding
/// of the original nodes, which is the identity since ids are never reused.
pub fn replay_derivation(
    tree: &HostTree,
    derivation: &TreeDerivation,
) -> Result<(HostTree, Vec<Node>), ModelError> {
    let mut sets: [Vec<Node>; 0] = [];
    let out = replay_tracking(tree, derivation, &mut sets)?;
    let map = (0..tree.node_count()).collect();
    Ok((out, map))
}

/// Replays `derivation` and grows each node set by the nodes that subdivide
/// an edge with both ends already in the set.
pub fn replay_tracking(
    tree: &HostTree,
    derivation: &TreeDerivation,
    sets: &mut [Vec<Node>],
) -> Result<HostTree, ModelError> {
    let mut t = tree.clone();
    for (index, op) in derivation.ops.iter().enumerate() {
        let fail = |reason: String| ModelError::Derivation { index, reason };
        match op {
            TreeOp::SubdivideEdge { edge: (a, b), inserted } => {
                if !t.has_edge(*a, *b) {
                    return Err(fail(format!("edge {a}-{b} does not exist")));
                }
                if inserted.is_empty() {
                    return Err(fail("no nodes inserted".into()));
                }
                let base = t.node_count();
                if inserted.iter().enumerate().any(|(i, &x)| x != base + i) {
                    return Err(fail(format!("inserted nodes must be fresh ids from {base}")));
                }
                t.remove_edge(*a, *b);
                let mut prev = *a;
                for _ in inserted {
                    let x = t.push_node();
                    t.add_edge(prev, x);
                    prev = x;
                }
                t.add_edge(prev, *b);
                for set in sets.iter_mut() {
                    if set.contains(a) && set.contains(b) {
                        set.extend(inserted.iter().copied());
                    }
                }
            }
            TreeOp::AttachBranch { anchor, edges } => {
                let base = t.node_count();
                if *anchor >= base {
                    return Err(fail(format!("anchor {anchor} does not exist")));
                }
                let k = edges.len();
                if k == 0 {
                    return Err(fail("empty branch".into()));
                }
                let valid = |x: Node| x == *anchor || (base..base + k).contains(&x);
                if edges.iter().any(|&(x, y)| !valid(x) || !valid(y) || x == y) {
                    return Err(fail(format!(
                        "branch edges must join anchor {anchor} and fresh ids {base}..{}",
                        base + k
                    )));
                }
                // union-find over anchor + fresh nodes
                let idx = |x: Node| if x == *anchor { 0 } else { x - base + 1 };
                let mut parent: Vec<usize> = (0..=k).collect();
                fn find(p: &mut [usize], x: usize) -> usize {
                    let mut r = x;
                    while p[r] != r {
                        r = p[r];
                    }
                    p[x] = r;
                    r
                }
                for &(x, y) in edges {
                    let (rx, ry) = (find(&mut parent, idx(x)), find(&mut parent, idx(y)));
                    if rx == ry {
                        return Err(fail("branch contains a cycle".into()));
                    }
                    parent[rx] = ry;
                }
                for _ in 0..k {
                    t.push_node();
                }
                for &(x, y) in edges {
                    t.add_edge(x, y);
                }
            }
        }
    }
    for set in sets.iter_mut() {
        set.sort_unstable();
        set.dedup();
    }
    Ok(t)
}

/// Full representation: one subtree per graph vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Representation(pub Vec<Subtree>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub tree: HostTree,
    pub derivation: TreeDerivation,
    pub rep: Representation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Extendible(Box<Solution>),
    NotExtendible,
    /// A budget-bounded search found no witness.
    Inconclusive,
}

impl Verdict {
    pub fn is_extendible(&self) -> bool {
        matches!(self, Verdict::Extendible(_))
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Verdict::Extendible(s) => Some(s),
            _ => None,
        }
    }

    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Extendible(_) => VerdictKind::Extendible,
            Verdict::NotExtendible => VerdictKind::NotExtendible,
            Verdict::Inconclusive => VerdictKind::Inconclusive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Extendible,
    NotExtendible,
    Inconclusive,
}

/// A graph, a class, a modification type and a partial representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub class: GraphClass,
    pub mod_type: ModType,
    pub partial: PartialRepresentation,
}

impl Instance {
    /// Builds an instance, checking that the partial representation is a
    /// valid representation of the pre-drawn induced subgraph.
    pub fn new(
        graph: Graph,
        class: GraphClass,
        mod_type: ModType,
        partial: PartialRepresentation,
    ) -> Result<Self, ModelError> {
        let tree = &partial.tree;
        if class.needs_path_host() && !tree.is_path() {
            return Err(ModelError::HostNotPath(class));
        }
        for (&v, sub) in &partial.predrawn {
            if v >= graph.n() {
                return Err(ModelError::VertexOutOfRange(v, graph.n()));
            }
            if sub.is_empty() {
                return Err(ModelError::EmptySubtree(v));
            }
            if let Some(&x) = sub.nodes().iter().find(|&&x| x >= tree.node_count()) {
                return Err(ModelError::NodeOutOfRange(x, tree.node_count()));
            }
            if !tree.is_connected_set(sub.nodes()) {
                return Err(ModelError::DisconnectedSubtree(v));
            }
            if class.needs_path_subtrees() && !tree.is_path_set(sub.nodes()) {
                return Err(ModelError::SubtreeNotPath(v));
            }
        }
        let drawn: Vec<_> = partial.predrawn.iter().collect();
        for (i, &(&u, su)) in drawn.iter().enumerate() {
            for &(&v, sv) in &drawn[i + 1..] {
                let adjacent = graph.has_edge(u, v);
                let meet = su.intersects(sv);
                if adjacent && !meet {
                    return Err(ModelError::InvalidPartial(u, v, "adjacent but disjoint"));
                }
                if !adjacent && meet {
                    return Err(ModelError::InvalidPartial(u, v, "non-adjacent but intersecting"));
                }
                if class == GraphClass::ProperInterval
                    && (su.is_strict_subset(sv) || sv.is_strict_subset(su))
                {
                    return Err(ModelError::InvalidPartial(u, v, "strictly nested"));
                }
            }
        }
        Ok(Instance {
            graph,
            class,
            mod_type,
            partial,
        })
    }

    /// Instance with no pre-drawn vertex.
    pub fn recognition(
        graph: Graph,
        class: GraphClass,
        mod_type: ModType,
        tree: HostTree,
    ) -> Result<Self, ModelError> {
        Instance::new(graph, class, mod_type, PartialRepresentation::empty(tree))
    }

    pub fn with_mod_type(&self, mod_type: ModType) -> Instance {
        Instance {
            mod_type,
            ..self.clone()
        }
    }

    pub fn is_predrawn(&self, v: Vertex) -> bool {
        self.partial.predrawn.contains_key(&v)
    }
}
