//! Turns intervals over path coordinates into a derived host path: fractional
//! coordinates become subdivision nodes, coordinates past either end become
//! attached branches.

use std::collections::{BTreeMap, BTreeSet};

use crate::coord::Coord;
use crate::model::{replay_derivation, HostTree, Node, Representation, Solution, Subtree, TreeDerivation, TreeOp};
use crate::prep::PathCoords;

/// Builds a solution on a derivation of the path `tree`. Original node at
/// path position `i` sits at coordinate `i`; every other endpoint coordinate
/// gets a fresh node.
pub fn realize_on_path(tree: &HostTree, intervals: &[(Coord, Coord)]) -> Solution {
    let coords = PathCoords::new(tree).expect("path host");
    let t = coords.len() as i64;
    let used: BTreeSet<Coord> = intervals.iter().flat_map(|&(l, r)| [l, r]).collect();
    let mut at: BTreeMap<Coord, Node> = (0..t).map(|i| (Coord::int(i), coords.order[i as usize])).collect();
    let mut next = tree.node_count();
    let mut ops = Vec::new();

    for i in 0..t - 1 {
        let inner: Vec<Coord> = used.range(Coord::new(i, 1)..Coord::int(i + 1)).copied().collect();
        if inner.is_empty() {
            continue;
        }
        let inserted: Vec<Node> = (next..next + inner.len()).collect();
        next += inner.len();
        for (&c, &x) in inner.iter().zip(&inserted) {
            at.insert(c, x);
        }
        ops.push(TreeOp::SubdivideEdge {
            edge: (coords.order[i as usize], coords.order[i as usize + 1]),
            inserted,
        });
    }
    let left: Vec<Coord> = used.range(..Coord::int(0)).rev().copied().collect();
    let right: Vec<Coord> = used.range(Coord::new(t - 1, 1)..).copied().collect();
    for (side, anchor) in [(left, coords.order[0]), (right, coords.order[t as usize - 1])] {
        if side.is_empty() {
            continue;
        }
        let mut edges = Vec::with_capacity(side.len());
        let mut prev = anchor;
        for c in side {
            at.insert(c, next);
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        ops.push(TreeOp::AttachBranch { anchor, edges });
    }

    let derivation = TreeDerivation { ops };
    let (derived, _) = replay_derivation(tree, &derivation).expect("derivation built from fresh ids");
    let rep = intervals
        .iter()
        .map(|&(l, r)| Subtree::new(at.range(l..=r).map(|(_, &x)| x).collect()))
        .collect();
    Solution {
        tree: derived,
        derivation,
        rep: Representation(rep),
    }
}
