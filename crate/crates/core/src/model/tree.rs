use std::collections::VecDeque;

use super::ModelError;

pub type Node = usize;

/// A host tree on nodes `0..node_count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HostTree {
    adj: Vec<Vec<Node>>,
}

impl HostTree {
    pub fn new(node_count: usize, edges: &[(Node, Node)]) -> Result<Self, ModelError> {
        if node_count == 0 {
            return Err(ModelError::EmptyTree);
        }
        if edges.len() + 1 != node_count {
            return Err(ModelError::NotATree(format!(
                "{} nodes need {} edges, got {}",
                node_count,
                node_count - 1,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); node_count];
        for &(a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(ModelError::NodeOutOfRange(a.max(b), node_count));
            }
            if a == b {
                return Err(ModelError::NotATree(format!("loop at node {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let tree = HostTree { adj };
        if tree.reachable_from(0).iter().any(|&r| !r) {
            return Err(ModelError::NotATree("disconnected".into()));
        }
        Ok(tree)
    }

    /// Path on `nodes` nodes, node `i` adjacent to `i + 1`.
    pub fn path(nodes: usize) -> Self {
        assert!(nodes > 0, "a host path needs at least one node");
        let edges: Vec<_> = (1..nodes).map(|i| (i - 1, i)).collect();
        HostTree::new(nodes, &edges).expect("path is a tree")
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, a: Node) -> &[Node] {
        &self.adj[a]
    }

    pub fn degree(&self, a: Node) -> usize {
        self.adj[a].len()
    }

    pub fn has_edge(&self, a: Node, b: Node) -> bool {
        a < self.adj.len() && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(Node, Node)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_path(&self) -> bool {
        self.max_degree() <= 2
    }

    pub fn branch_nodes(&self) -> Vec<Node> {
        (0..self.node_count()).filter(|&a| self.degree(a) > 2).collect()
    }

    /// Nodes in path order, starting from the end with the smaller id.
    pub fn path_order(&self) -> Option<Vec<Node>> {
        if !self.is_path() {
            return None;
        }
        if self.node_count() == 1 {
            return Some(vec![0]);
        }
        let start = (0..self.node_count()).find(|&a| self.degree(a) == 1)?;
        let mut order = Vec::with_capacity(self.node_count());
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            order.push(cur);
            match self.adj[cur].iter().find(|&&b| b != prev) {
                Some(&next) => {
                    prev = cur;
                    cur = next;
                }
                None => break,
            }
        }
        Some(order)
    }

    fn reachable_from(&self, start: Node) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(a) = queue.pop_front() {
            for &b in &self.adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    /// Whether `nodes` (sorted, in range) induces a connected subgraph.
    pub fn is_connected_set(&self, nodes: &[Node]) -> bool {
        if nodes.is_empty() {
            return false;
        }
        let mut seen = vec![false; nodes.len()];
        let index = |x: Node| nodes.binary_search(&x).ok();
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &b in &self.adj[nodes[i]] {
                if let Some(j) = index(b) {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
        }
        count == nodes.len()
    }

    /// Whether a connected node set induces a path in the tree.
    pub fn is_path_set(&self, nodes: &[Node]) -> bool {
        self.is_connected_set(nodes)
            && nodes.iter().all(|&a| {
                self.adj[a]
                    .iter()
                    .filter(|b| nodes.binary_search(b).is_ok())
                    .count()
                    <= 2
            })
    }

    pub(crate) fn push_node(&mut self) -> Node {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub(crate) fn add_edge(&mut self, a: Node, b: Node) {
        let pa = self.adj[a].binary_search(&b).unwrap_or_else(|e| e);
        self.adj[a].insert(pa, b);
        let pb = self.adj[b].binary_search(&a).unwrap_or_else(|e| e);
        self.adj[b].insert(pb, a);
    }

    pub(crate) fn remove_edge(&mut self, a: Node, b: Node) {
        self.adj[a].retain(|&x| x != b);
        self.adj[b].retain(|&x| x != a);
    }
}
