//! Candidate derivations of `T'` with an exact number of extra nodes.

use std::ops::ControlFlow;

use crate::model::{GraphClass, HostTree, ModType, Node, TreeDerivation, TreeOp};

/// Where extra nodes may go.
#[derive(Clone, Copy, Debug)]
enum Slot {
    Edge(Node, Node),
    /// a chain hanging off a node
    Chain(Node),
}

/// Small rooted trees hung off an original node: leaf, 2-chain, 3-chain, cherry.
const SHAPES: [(usize, &[(usize, usize)]); 4] = [
    (1, &[]),
    (2, &[(0, 1)]),
    (3, &[(0, 1), (1, 2)]),
    (3, &[(0, 1), (0, 2)]),
];

/// Calls `visit` on every candidate derivation with exactly `extra` new
/// nodes. Path-host classes keep the host a path; other classes hang small
/// trees off original nodes.
pub(crate) fn for_each_derivation<B>(
    tree: &HostTree,
    class: GraphClass,
    mod_type: ModType,
    extra: usize,
    visit: &mut dyn FnMut(&TreeDerivation) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if extra == 0 {
        return visit(&TreeDerivation::default());
    }
    let mut slots = Vec::new();
    if mod_type.allows_subdivision() {
        slots.extend(tree.edges().into_iter().map(|(a, b)| Slot::Edge(a, b)));
    }
    let shapes = mod_type.allows_attachment() && !class.needs_path_host();
    if mod_type.allows_attachment() && class.needs_path_host() {
        let order = tree.path_order().expect("path host");
        slots.push(Slot::Chain(order[0]));
        slots.push(Slot::Chain(*order.last().unwrap()));
    }
    let mut counts = vec![0usize; slots.len()];
    compositions(&mut counts, 0, extra, shapes, &mut |counts, rest| {
        let mut ops = slot_ops(tree.node_count(), &slots, counts);
        if rest == 0 {
            return visit(&TreeDerivation { ops });
        }
        let base = tree.node_count() + counts.iter().sum::<usize>();
        let mut picks = Vec::new();
        attachments(tree.node_count(), rest, 0, &mut picks, &mut |picks| {
            let len = ops.len();
            let mut next = base;
            for &(node, shape) in picks.iter() {
                let (size, inner) = SHAPES[shape];
                let mut edges = vec![(node, next)];
                edges.extend(inner.iter().map(|&(x, y)| (next + x, next + y)));
                ops.push(TreeOp::AttachBranch { anchor: node, edges });
                next += size;
            }
            let flow = visit(&TreeDerivation { ops: ops.clone() });
            ops.truncate(len);
            flow
        })
    })
}

/// Distributes up to `left` nodes over the slots from `i` on; when `shapes`
/// is set the remainder goes to attachments, otherwise all must be placed.
fn compositions<B>(
    counts: &mut Vec<usize>,
    i: usize,
    left: usize,
    shapes: bool,
    emit: &mut dyn FnMut(&[usize], usize) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if i == counts.len() {
        if left == 0 || shapes {
            return emit(counts, left);
        }
        return ControlFlow::Continue(());
    }
    for k in 0..=left {
        counts[i] = k;
        compositions(counts, i + 1, left - k, shapes, emit)?;
    }
    counts[i] = 0;
    ControlFlow::Continue(())
}

fn slot_ops(node_count: usize, slots: &[Slot], counts: &[usize]) -> Vec<TreeOp> {
    let mut next = node_count;
    let mut ops = Vec::new();
    for (&slot, &k) in slots.iter().zip(counts) {
        if k == 0 {
            continue;
        }
        let fresh: Vec<Node> = (next..next + k).collect();
        next += k;
        ops.push(match slot {
            Slot::Edge(a, b) => TreeOp::SubdivideEdge { edge: (a, b), inserted: fresh },
            Slot::Chain(anchor) => {
                let mut edges = vec![(anchor, fresh[0])];
                edges.extend(fresh.windows(2).map(|w| (w[0], w[1])));
                TreeOp::AttachBranch { anchor, edges }
            }
        });
    }
    ops
}

/// Multisets of (original node, shape) with total size `left`, items in
/// nondecreasing order starting from item `from`.
fn attachments<B>(
    nodes: usize,
    left: usize,
    from: usize,
    picks: &mut Vec<(Node, usize)>,
    emit: &mut dyn FnMut(&[(Node, usize)]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if left == 0 {
        return emit(picks);
    }
    for item in from..nodes * SHAPES.len() {
        let (node, shape) = (item / SHAPES.len(), item % SHAPES.len());
        let size = SHAPES[shape].0;
        if size > left {
            continue;
        }
        picks.push((node, shape));
        attachments(nodes, left - size, item, picks, emit)?;
        picks.pop();
    }
    ControlFlow::Continue(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::replay_derivation;

    fn collect(tree: &HostTree, class: GraphClass, mod_type: ModType, extra: usize) -> Vec<TreeDerivation> {
        let mut out = Vec::new();
        let _ = for_each_derivation::<()>(tree, class, mod_type, extra, &mut |d| {
            out.push(d.clone());
            ControlFlow::Continue(())
        });
        out
    }

    #[test]
    fn counts_and_validity() {
        let path = HostTree::path(3);
        // 2 edges, 3 nodes: weak compositions of 3 into 2 parts
        assert_eq!(collect(&path, GraphClass::Interval, ModType::Sub, 3).len(), 4);
        assert_eq!(collect(&path, GraphClass::Interval, ModType::Add, 2).len(), 3);
        assert_eq!(collect(&path, GraphClass::Interval, ModType::Both, 1).len(), 4);
        let star = HostTree::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        for mod_type in [ModType::Sub, ModType::Add, ModType::Both] {
            for extra in 0..=4 {
                for d in collect(&star, GraphClass::Chordal, mod_type, extra) {
                    let (t, _) = replay_derivation(&star, &d).unwrap();
                    assert_eq!(t.node_count(), 4 + extra);
                    assert!(d.legal_for(mod_type));
                }
            }
        }
        // one extra node on a single-node path under Add: either side
        assert_eq!(collect(&HostTree::path(1), GraphClass::ProperInterval, ModType::Add, 1).len(), 2);
    }
}
