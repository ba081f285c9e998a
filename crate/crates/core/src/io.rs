//! JSON files for instances, solutions and reduction metadata. Every file
//! carries `"format": 1`; parse errors name the offending JSON pointer.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::hardness::{ReductionMeta, ThreePartition};
use crate::model::{
    Graph, GraphClass, HostTree, Instance, ModType, ModelError, Node, PartialRepresentation, Representation,
    Solution, Subtree, TreeDerivation, TreeOp, Vertex,
};
use crate::packing::{BinPackingInstance, GenBinPackingInstance};

pub const FORMAT: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}: {message}", if pointer.is_empty() { "(root)" } else { pointer })]
pub struct SchemaError {
    /// JSON pointer to the offending value, empty for the whole document
    pub pointer: String,
    pub message: String,
}

type Result<T> = std::result::Result<T, SchemaError>;

fn fail<T>(pointer: &str, message: impl Into<String>) -> Result<T> {
    Err(SchemaError {
        pointer: pointer.to_string(),
        message: message.into(),
    })
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

/// A value together with its JSON pointer.
struct Doc<'a> {
    value: &'a Value,
    pointer: String,
}

impl<'a> Doc<'a> {
    fn root(value: &'a Value) -> Self {
        Doc { value, pointer: String::new() }
    }
    fn key(&self, key: &str) -> Result<Doc<'a>> {
        let obj = self.object()?;
        match obj.get(key) {
            Some(v) => Ok(Doc { value: v, pointer: format!("{}/{}", self.pointer, escape(key)) }),
            None => fail(&self.pointer, format!("missing field `{key}`")),
        }
    }
    fn opt(&self, key: &str) -> Result<Option<Doc<'a>>> {
        Ok(self.object()?.get(key).map(|v| Doc { value: v, pointer: format!("{}/{}", self.pointer, escape(key)) }))
    }
    fn object(&self) -> Result<&'a Map<String, Value>> {
        match self.value.as_object() {
            Some(o) => Ok(o),
            None => fail(&self.pointer, "expected an object"),
        }
    }
    fn entries(&self) -> Result<Vec<(&'a str, Doc<'a>)>> {
        Ok(self
            .object()?
            .iter()
            .map(|(k, v)| (k.as_str(), Doc { value: v, pointer: format!("{}/{}", self.pointer, escape(k)) }))
            .collect())
    }
    fn items(&self) -> Result<Vec<Doc<'a>>> {
        match self.value.as_array() {
            Some(a) => Ok(a
                .iter()
                .enumerate()
                .map(|(i, v)| Doc { value: v, pointer: format!("{}/{i}", self.pointer) })
                .collect()),
            None => fail(&self.pointer, "expected an array"),
        }
    }
    fn uint(&self) -> Result<u64> {
        match self.value.as_u64() {
            Some(x) => Ok(x),
            None => fail(&self.pointer, "expected a non-negative integer"),
        }
    }
    fn index(&self) -> Result<usize> {
        let x = self.uint()?;
        usize::try_from(x).or_else(|_| fail(&self.pointer, "integer too large"))
    }
    fn str(&self) -> Result<&'a str> {
        match self.value.as_str() {
            Some(s) => Ok(s),
            None => fail(&self.pointer, "expected a string"),
        }
    }
    fn pair(&self) -> Result<(usize, usize)> {
        let items = self.items()?;
        if items.len() != 2 {
            return fail(&self.pointer, "expected a pair");
        }
        Ok((items[0].index()?, items[1].index()?))
    }
    fn uints(&self) -> Result<Vec<u64>> {
        self.items()?.iter().map(Doc::uint).collect()
    }
}

fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).or_else(|e| fail("", format!("invalid JSON: {e}")))
}

fn check_format(doc: &Doc) -> Result<()> {
    if let Some(f) = doc.opt("format")? {
        if f.uint()? != FORMAT {
            return fail(&f.pointer, format!("unsupported format {}, expected {FORMAT}", f.value));
        }
    }
    Ok(())
}

fn read_graph(doc: &Doc) -> Result<Graph> {
    let n = doc.key("n")?.index()?;
    let edges_doc = doc.key("edges")?;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for e in edges_doc.items()? {
        let (u, v) = e.pair()?;
        if u >= n || v >= n {
            return fail(&e.pointer, format!("vertex {} out of range for n = {n}", u.max(v)));
        }
        if u == v {
            return fail(&e.pointer, format!("loop at vertex {u}"));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return fail(&e.pointer, format!("duplicate edge {u}-{v}"));
        }
        edges.push((u, v));
    }
    Graph::new(n, &edges).or_else(|e| fail(&doc.pointer, e.to_string()))
}

fn read_tree(doc: &Doc) -> Result<HostTree> {
    if let Some(p) = doc.opt("path")? {
        let t = p.index()?;
        if t == 0 {
            return fail(&p.pointer, "a host needs at least one node");
        }
        return Ok(HostTree::path(t));
    }
    let nodes = doc.key("nodes")?.index()?;
    let edges_doc = doc.key("edges")?;
    let mut edges = Vec::new();
    for e in edges_doc.items()? {
        let (a, b) = e.pair()?;
        if a >= nodes || b >= nodes {
            return fail(&e.pointer, format!("node {} out of range for {nodes} nodes", a.max(b)));
        }
        edges.push((a, b));
    }
    HostTree::new(nodes, &edges).or_else(|e| fail(&doc.pointer, e.to_string()))
}

fn read_sets(doc: &Doc, node_count: usize) -> Result<BTreeMap<Vertex, (String, Vec<Node>)>> {
    let mut out = BTreeMap::new();
    for (key, d) in doc.entries()? {
        let Ok(v) = key.parse::<Vertex>() else {
            return fail(&d.pointer, format!("key `{key}` is not a vertex number"));
        };
        let mut nodes = Vec::new();
        for x in d.items()? {
            let node = x.index()?;
            if node >= node_count {
                return fail(&x.pointer, format!("node {node} out of range for {node_count} nodes"));
            }
            nodes.push(node);
        }
        if nodes.is_empty() {
            return fail(&d.pointer, "empty node set");
        }
        out.insert(v, (d.pointer.clone(), nodes));
    }
    Ok(out)
}

/// Reads an instance: class, modification type, graph, host tree and the
/// pre-drawn subtrees.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let value = parse(text)?;
    let doc = Doc::root(&value);
    check_format(&doc)?;
    let class_doc = doc.key("class")?;
    let class: GraphClass = class_doc.str()?.parse().or_else(|e: String| fail(&class_doc.pointer, e))?;
    let mod_doc = doc.key("mod")?;
    let mod_type: ModType = mod_doc.str()?.parse().or_else(|e: String| fail(&mod_doc.pointer, e))?;
    let graph = read_graph(&doc.key("graph")?)?;
    let tree_doc = doc.key("tree")?;
    let tree = read_tree(&tree_doc)?;
    let mut partial = PartialRepresentation::empty(tree);
    let mut pointers = BTreeMap::new();
    if let Some(p) = doc.opt("partial")? {
        for (v, (pointer, nodes)) in read_sets(&p, partial.tree.node_count())? {
            if v >= graph.n() {
                return fail(&pointer, format!("vertex {v} out of range for n = {}", graph.n()));
            }
            pointers.insert(v, pointer);
            partial.predrawn.insert(v, Subtree::new(nodes));
        }
    }
    Instance::new(graph, class, mod_type, partial).or_else(|e| {
        let at = |v: &Vertex| pointers.get(v).cloned().unwrap_or_default();
        let pointer = match &e {
            ModelError::HostNotPath(_) => tree_doc.pointer.clone(),
            ModelError::VertexOutOfRange(v, _)
            | ModelError::EmptySubtree(v)
            | ModelError::DisconnectedSubtree(v)
            | ModelError::SubtreeNotPath(v)
            | ModelError::InvalidPartial(v, _, _) => at(v),
            _ => String::new(),
        };
        fail(&pointer, e.to_string())
    })
}

/// A graph file `{"n", "edges"}`, or the graph of an instance file.
pub fn graph_from_json(text: &str) -> Result<Graph> {
    let value = parse(text)?;
    let doc = Doc::root(&value);
    check_format(&doc)?;
    match doc.opt("graph")? {
        Some(g) => read_graph(&g),
        None => read_graph(&doc),
    }
}

fn tree_json(tree: &HostTree, allow_path: bool) -> Value {
    if allow_path && *tree == HostTree::path(tree.node_count()) {
        return json!({ "path": tree.node_count() });
    }
    json!({ "nodes": tree.node_count(), "edges": tree.edges() })
}

fn sets_json<'a>(sets: impl Iterator<Item = (Vertex, &'a Subtree)>) -> Value {
    let map: Map<String, Value> = sets.map(|(v, s)| (v.to_string(), json!(s.nodes()))).collect();
    Value::Object(map)
}

pub fn instance_to_json(instance: &Instance) -> Value {
    json!({
        "format": FORMAT,
        "class": instance.class.to_string(),
        "mod": instance.mod_type.to_string(),
        "graph": { "n": instance.graph.n(), "edges": instance.graph.edges().collect::<Vec<_>>() },
        "tree": tree_json(&instance.partial.tree, true),
        "partial": sets_json(instance.partial.predrawn.iter().map(|(&v, s)| (v, s))),
    })
}

pub fn solution_to_json(solution: &Solution) -> Value {
    json!({
        "format": FORMAT,
        "tree": tree_json(&solution.tree, false),
        "derivation": serde_json::to_value(&solution.derivation).expect("derivations serialize"),
        "rep": sets_json(solution.rep.0.iter().enumerate()),
    })
}

/// Reads a solution for a graph on `n` vertices. Consistency with an
/// instance is left to `validate_representation`.
pub fn solution_from_json(text: &str, n: usize) -> Result<Solution> {
    let value = parse(text)?;
    let doc = Doc::root(&value);
    check_format(&doc)?;
    let tree = read_tree(&doc.key("tree")?)?;
    let mut ops = Vec::new();
    for op in doc.key("derivation")?.items()? {
        let parsed: TreeOp = serde_json::from_value(op.value.clone()).or_else(|e| fail(&op.pointer, e.to_string()))?;
        ops.push(parsed);
    }
    let rep_doc = doc.key("rep")?;
    let sets = read_sets(&rep_doc, tree.node_count())?;
    let mut rep = Vec::with_capacity(n);
    for v in 0..n {
        match sets.get(&v) {
            Some((_, nodes)) => rep.push(Subtree::new(nodes.clone())),
            None => return fail(&rep_doc.pointer, format!("no subtree for vertex {v}")),
        }
    }
    if let Some((&v, (pointer, _))) = sets.range(n..).next() {
        return fail(pointer, format!("vertex {v} out of range for n = {n}"));
    }
    Ok(Solution {
        tree,
        derivation: TreeDerivation { ops },
        rep: Representation(rep),
    })
}

/// `{"k", "V", "items"}`, or `"volumes"` in place of `"V"` for bins of
/// differing sizes.
pub enum PackingInput {
    Uniform(BinPackingInstance),
    General(GenBinPackingInstance),
}

pub fn packing_from_json(text: &str) -> Result<PackingInput> {
    let value = parse(text)?;
    let doc = Doc::root(&value);
    check_format(&doc)?;
    let k = doc.key("k")?.index()?;
    let items = doc.key("items")?.uints()?;
    if let Some(v) = doc.opt("V")? {
        return Ok(PackingInput::Uniform(BinPackingInstance { k, volume: v.uint()?, items }));
    }
    let vols = doc.key("volumes").map_err(|_| SchemaError {
        pointer: String::new(),
        message: "missing field `V` or `volumes`".into(),
    })?;
    let volumes = vols.uints()?;
    if volumes.len() != k {
        return fail(&vols.pointer, format!("expected {k} volumes, got {}", volumes.len()));
    }
    Ok(PackingInput::General(GenBinPackingInstance { k, volumes, items }))
}

pub fn three_partition_from_json(text: &str) -> Result<ThreePartition> {
    let value = parse(text)?;
    let doc = Doc::root(&value);
    check_format(&doc)?;
    let tp = ThreePartition {
        k: doc.key("k")?.index()?,
        m: doc.key("M")?.uint()?,
        a: doc.key("A")?.uints()?,
    };
    tp.validate().or_else(|e| fail("", e.to_string()))?;
    Ok(tp)
}

/// Sidecar for generated instances: the source problem and the gadget map.
pub fn meta_to_json(meta: &ReductionMeta, source: Value) -> Value {
    let mut out = Map::new();
    out.insert("format".into(), json!(FORMAT));
    out.insert("source".into(), source);
    if let Value::Object(m) = serde_json::to_value(meta).expect("metadata serializes") {
        out.extend(m);
    }
    Value::Object(out)
}

pub fn meta_from_json(text: &str) -> Result<ReductionMeta> {
    let value = parse(text)?;
    let doc = Doc::root(&value);
    check_format(&doc)?;
    serde_json::from_value(value.clone()).or_else(|e| fail("", e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}
