mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use repext::hardness::*;
use repext::packing::BinPackingInstance;
use repext::solvers::{exact_search, solve, SearchLimits, SolveOptions, Strategy};
use repext::{
    replay_derivation, validate_representation, GraphClass, Instance, ModType, Node, Representation, Solution, Subtree,
    TreeDerivation, TreeOp, Verdict,
};

use common::assert_valid;

fn sample() -> ThreePartition {
    ThreePartition::new(2, 7, vec![2, 2, 2, 2, 3, 3]).unwrap()
}

fn no_instance() -> ThreePartition {
    let tp = ThreePartition::new(2, 15, vec![4, 4, 4, 6, 6, 6]).unwrap();
    assert!(tp.solve().is_none());
    tp
}

fn triples_ok(tp: &ThreePartition, groups: &[Vec<usize>]) {
    assert_eq!(groups.len(), tp.k);
    for g in groups {
        assert_eq!(g.len(), 3, "{groups:?}");
        assert_eq!(g.iter().map(|&i| tp.a[i]).sum::<u64>(), tp.m);
    }
}

fn check_yes(tp: &ThreePartition, inst: &Instance, meta: &ReductionMeta, verdict: &Verdict) {
    assert_valid(inst, verdict);
    let Verdict::Extendible(sol) = verdict else { panic!("expected extendible, got {verdict:?}") };
    triples_ok(tp, &decode(meta, sol).unwrap());
}

#[test]
fn interval_fixed_round_trip() {
    let tp = sample();
    for class in [GraphClass::Interval, GraphClass::ProperInterval] {
        let (inst, meta) = gen_int_fixed(&tp, class).unwrap();
        let v = solve(&inst, &SolveOptions::default()).unwrap();
        check_yes(&tp, &inst, &meta, &v);
        let (inst, _) = gen_int_fixed(&no_instance(), class).unwrap();
        assert_eq!(solve(&inst, &SolveOptions::default()).unwrap(), Verdict::NotExtendible);
    }
}

#[test]
fn pint_fixed_strategies_agree() {
    let tp = sample();
    let (inst, meta) = gen_int_fixed(&tp, GraphClass::ProperInterval).unwrap();
    for strategy in [Strategy::Orderings, Strategy::BinPacking] {
        let opts = SolveOptions { strategy, ..Default::default() };
        check_yes(&tp, &inst, &meta, &solve(&inst, &opts).unwrap());
    }
}

#[test]
fn interval_add_round_trip() {
    let (inst, meta) = gen_int_add(&sample()).unwrap();
    assert_eq!(meta.universal, Some(inst.graph.n() - 1));
    check_yes(&sample(), &inst, &meta, &solve(&inst, &SolveOptions::default()).unwrap());
    let (inst, _) = gen_int_add(&no_instance()).unwrap();
    assert_eq!(solve(&inst, &SolveOptions::default()).unwrap(), Verdict::NotExtendible);
}

#[test]
fn fixed_tree_round_trip() {
    let tp = ThreePartition::new(1, 9, vec![3, 3, 3]).unwrap();
    for class in [GraphClass::Path, GraphClass::Chordal] {
        let (inst, meta) = gen_pathchor_fixed(&tp, class).unwrap();
        let limits = SearchLimits { node_budget: 0, time_limit: Some(Duration::from_secs(20)) };
        let v = exact_search(&inst, &limits);
        check_yes(&tp, &inst, &meta, &v);
        assert_eq!(decode(&meta, v.solution().unwrap()).unwrap(), vec![vec![0, 1, 2]]);
    }
}

#[test]
fn fixed_tree_rejects_short_gap() {
    // gap of 9 with sizes summing to 10 cannot fit
    let tp = ThreePartition { k: 1, m: 9, a: vec![3, 3, 4] };
    assert!(gen_pathchor_fixed(&tp, GraphClass::Path).is_err());
    let (mut inst, _) = gen_pathchor_fixed(&ThreePartition::new(1, 9, vec![3, 3, 3]).unwrap(), GraphClass::Path).unwrap();
    let extra = inst.graph.n() - 1;
    inst.graph.add_vertex(&[extra]);
    inst = Instance::new(inst.graph, inst.class, inst.mod_type, inst.partial).unwrap();
    let limits = SearchLimits { node_budget: 0, time_limit: Some(Duration::from_secs(20)) };
    assert_eq!(exact_search(&inst, &limits), Verdict::NotExtendible);
}

#[test]
fn subdivision_reduction_is_bounded() {
    let tp = ThreePartition::new(1, 9, vec![3, 3, 3]).unwrap();
    let (inst, meta) = gen_pathchor_sub(&tp, GraphClass::Path).unwrap();
    let start = Instant::now();
    let limits = SearchLimits { node_budget: 12, time_limit: Some(Duration::from_secs(3)) };
    match exact_search(&inst, &limits) {
        Verdict::Inconclusive => assert!(start.elapsed() < Duration::from_secs(10)),
        v => check_yes(&tp, &inst, &meta, &v),
    }
}

#[test]
fn universal_chordal_shapes() {
    let tp = ThreePartition::new(1, 9, vec![3, 3, 3]).unwrap();
    let (add, meta) = gen_chor_universal(&tp, ModType::Add).unwrap();
    assert_eq!(add.mod_type, ModType::Add);
    let u = meta.universal.unwrap();
    assert_eq!(add.graph.degree(u), add.graph.n() - 1);
    assert_eq!(add.partial.predrawn[&u].len(), add.partial.tree.node_count());
    let (both, _) = gen_chor_universal(&tp, ModType::Both).unwrap();
    assert_eq!(both.mod_type, ModType::Both);
    let (path_add, meta) = gen_path_add(&sample()).unwrap();
    assert_eq!((path_add.class, meta.kind), (GraphClass::Path, ReductionKind::PathAdd));
}

#[test]
fn universal_chordal_add_solves() {
    let tp = ThreePartition::new(1, 9, vec![3, 3, 3]).unwrap();
    let (inst, meta) = gen_chor_universal(&tp, ModType::Add).unwrap();
    let limits = SearchLimits { node_budget: 0, time_limit: Some(Duration::from_secs(20)) };
    check_yes(&tp, &inst, &meta, &exact_search(&inst, &limits));
}

#[test]
fn binpacking_round_trip() {
    let bp = BinPackingInstance { k: 1, volume: 4, items: vec![4] };
    let (inst, meta) = gen_pint_fixed_from_binpacking(&bp).unwrap();
    assert_eq!(meta.scale, 1);
    let v = solve(&inst, &SolveOptions::default()).unwrap();
    assert_valid(&inst, &v);
    assert_eq!(decode(&meta, v.solution().unwrap()).unwrap(), vec![vec![0]]);

    let bp = BinPackingInstance { k: 2, volume: 5, items: vec![3, 3, 3] };
    let (inst, meta) = gen_pint_fixed_from_binpacking(&bp).unwrap();
    assert_eq!(meta.scale, 2);
    assert_eq!(solve(&inst, &SolveOptions::default()).unwrap(), Verdict::NotExtendible);

    let bp = BinPackingInstance { k: 2, volume: 6, items: vec![3, 3, 2, 4] };
    let (inst, meta) = gen_pint_fixed_from_binpacking(&bp).unwrap();
    let v = solve(&inst, &SolveOptions::default()).unwrap();
    assert_valid(&inst, &v);
    for bin in decode(&meta, v.solution().unwrap()).unwrap() {
        assert!(bin.iter().map(|&i| bp.items[i]).sum::<u64>() <= bp.volume);
    }
}

/// The representation the subdivision reduction's forward direction builds
/// from a 3-Partition solution.
fn sub_witness(inst: &Instance, meta: &ReductionMeta, triples: &[[usize; 3]]) -> Solution {
    let tree = &inst.partial.tree;
    let on_path = |x: Node| meta.path.contains(&x);
    let off_path = |x: Node| -> Vec<Node> { tree.neighbors(x).iter().copied().filter(|&y| !on_path(y)).collect() };
    let mut ops = Vec::new();
    let mut next = tree.node_count();
    let mut fresh = |count: usize| -> Vec<Node> {
        next += count;
        (next - count..next).collect()
    };
    let mut rep: Vec<Vec<Node>> = vec![Vec::new(); inst.graph.n()];
    for (&p, gadget) in meta.split_nodes.iter().zip(&meta.split_gadgets) {
        // the centre runs through p between the first two corners; the
        // third corner reaches p itself
        let mut centre = vec![p];
        for (j, c) in off_path(p).into_iter().enumerate() {
            let t = &gadget[1 + 5 * j..6 + 5 * j];
            if j < 2 {
                let m = fresh(1)[0];
                ops.push(TreeOp::SubdivideEdge { edge: (p, c), inserted: vec![m] });
                centre.push(m);
                rep[t[0]] = vec![m, c];
            } else {
                rep[t[0]] = vec![p, c];
            }
            let leaves: Vec<Node> = tree.neighbors(c).iter().copied().filter(|&y| y != p).collect();
            rep[t[1]] = vec![c, leaves[0]];
            rep[t[2]] = vec![c, leaves[1]];
            rep[t[3]] = vec![leaves[0]];
            rep[t[4]] = vec![leaves[1]];
        }
        rep[gadget[0]] = centre;
    }
    // gadget spans along the main path, then the edges to subdivide
    let mut spans = Vec::new();
    for (g, triple) in triples.iter().enumerate() {
        let mut pos = g * (meta.gap as usize + 1) + 1;
        for &item in triple {
            let a = meta.sizes[item] as usize;
            spans.push((item, pos, pos + a - 1));
            pos += a;
        }
    }
    let mut cuts: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
    let mut ends = BTreeMap::new();
    for &(item, lo, hi) in &spans {
        ends.insert(item, (fresh(1)[0], fresh(1)[0]));
        cuts.entry(lo - 1).or_default().push(ends[&item].0);
        cuts.entry(hi).or_default().insert(0, ends[&item].1);
    }
    // inserted ids must be consecutive per edge
    let mut renamed = BTreeMap::new();
    let mut next_id = next - 2 * spans.len();
    for (&left, nodes) in &cuts {
        let ids: Vec<Node> = nodes.iter().map(|&x| {
            renamed.insert(x, next_id);
            next_id += 1;
            next_id - 1
        }).collect();
        ops.push(TreeOp::SubdivideEdge { edge: (meta.path[left], meta.path[left + 1]), inserted: ids });
    }
    for &(item, lo, hi) in &spans {
        let a = hi - lo + 1;
        let g = &meta.take_gadgets[item];
        let q: Vec<Node> = (lo..=hi).map(|i| meta.path[i]).collect();
        let (sl, sr) = (renamed[&ends[&item].0], renamed[&ends[&item].1]);
        rep[g[0]] = vec![sl, q[0]];
        for j in 1..a {
            rep[g[j]] = vec![q[j - 1], q[j]];
        }
        rep[g[a]] = vec![q[a - 1], sr];
        for j in 0..a {
            let leaf = off_path(q[j])[0];
            rep[g[a + 1 + 2 * j]] = vec![q[j], leaf];
            rep[g[a + 2 + 2 * j]] = vec![leaf];
        }
        rep[g[3 * a + 1]] = vec![sl];
        rep[g[3 * a + 2]] = vec![sr];
    }
    let derivation = TreeDerivation { ops };
    let (host, _) = replay_derivation(tree, &derivation).unwrap();
    if let Some(u) = meta.universal {
        rep[u] = (0..host.node_count()).collect();
    }
    Solution { tree: host, derivation, rep: Representation(rep.into_iter().map(Subtree::new).collect()) }
}

#[test]
fn subdivision_forward_direction() {
    for tp in [
        ThreePartition::new(1, 9, vec![3, 3, 3]).unwrap(),
        ThreePartition::new(2, 13, vec![4, 4, 4, 4, 5, 5]).unwrap(),
    ] {
        let triples = tp.solve().unwrap();
        for (inst, meta) in [
            gen_pathchor_sub(&tp, GraphClass::Path).unwrap(),
            gen_pathchor_sub(&tp, GraphClass::Chordal).unwrap(),
            gen_chor_universal(&tp, ModType::Both).unwrap(),
        ] {
            let sol = sub_witness(&inst, &meta, &triples);
            assert_eq!(validate_representation(&inst, &sol).unwrap(), vec![]);
            triples_ok(&tp, &decode(&meta, &sol).unwrap());
        }
    }
}
