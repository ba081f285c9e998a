//! Proper interval machinery: the endpoint ordering ◁, the common ordering
//! of left and right endpoints, and smallest placements of components.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::coord::Coord;
use crate::model::{Graph, Vertex};
use crate::prep::indistinguishable_groups;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PintError {
    #[error("component is not a proper interval graph")]
    NotProperInterval,
    #[error("no endpoint ordering matches the pre-drawn intervals")]
    OrderConflict,
}

/// Candidate orderings ◁ of a component, at most two (a reversal pair).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointOrdering {
    pub alternatives: Vec<Vec<Vertex>>,
}

impl EndpointOrdering {
    pub fn order(&self) -> &[Vertex] {
        &self.alternatives[0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Left(Vertex),
    Right(Vertex),
}

impl Endpoint {
    pub fn vertex(self) -> Vertex {
        match self {
            Endpoint::Left(v) | Endpoint::Right(v) => v,
        }
    }
}

/// The ordering ⋖ of all endpoints from left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonOrdering {
    pub seq: Vec<Endpoint>,
}

impl CommonOrdering {
    /// Number of left-to-right token changes.
    pub fn left_right_changes(&self) -> usize {
        self.seq
            .windows(2)
            .filter(|w| matches!(w, [Endpoint::Left(_), Endpoint::Right(_)]))
            .count()
    }
}

/// One placement of a component: endpoint ordering used and `[left, right]` per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub order: Vec<Vertex>,
    pub intervals: Vec<(Coord, Coord)>,
}

impl Placement {
    pub fn leftmost(&self) -> Coord {
        self.intervals.iter().map(|i| i.0).min().expect("nonempty component")
    }

    pub fn rightmost(&self) -> Coord {
        self.intervals.iter().map(|i| i.1).max().expect("nonempty component")
    }

    /// Width in whole nodes; meaningful for integral placements.
    pub fn width(&self) -> usize {
        (self.rightmost().a - self.leftmost().a + 1) as usize
    }

    pub fn shifted(&self, by: Coord) -> Placement {
        Placement {
            order: self.order.clone(),
            intervals: self.intervals.iter().map(|&(l, r)| (l + by, r + by)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanResult {
    /// `None` when no placement exists.
    pub span: Option<usize>,
    pub placements: Vec<Placement>,
}

fn is_umbrella(graph: &Graph, order: &[Vertex]) -> bool {
    let mut pos = vec![0usize; graph.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order.iter().all(|&v| {
        let (lo, hi) = graph
            .neighbors(v)
            .iter()
            .fold((pos[v], pos[v]), |(lo, hi), &w| (lo.min(pos[w]), hi.max(pos[w])));
        hi - lo == graph.degree(v)
    })
}

fn bfs_layers(graph: &Graph, start: Vertex) -> Vec<usize> {
    let mut dist = vec![usize::MAX; graph.n()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in graph.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Layered ordering from `start`: by distance, then more neighbours in the
/// previous layer first, then fewer in the next layer first. In a twin-free
/// connected proper interval graph started at an end vertex this is the
/// umbrella ordering.
fn layered_order(graph: &Graph, start: Vertex) -> Vec<Vertex> {
    let dist = bfs_layers(graph, start);
    let mut keyed: Vec<(usize, usize, usize, Vertex)> = (0..graph.n())
        .map(|v| {
            let d = dist[v];
            let prev = graph.neighbors(v).iter().filter(|&&w| dist[w] + 1 == d).count();
            let next = graph.neighbors(v).iter().filter(|&&w| dist[w] == d + 1).count();
            (d, usize::MAX - prev, next, v)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|k| k.3).collect()
}

/// Umbrella ordering of a connected twin-free graph, if any.
fn twin_free_order(graph: &Graph) -> Option<Vec<Vertex>> {
    if graph.n() == 1 {
        return Some(vec![0]);
    }
    let dist = bfs_layers(graph, 0);
    if dist.contains(&usize::MAX) {
        return None;
    }
    let far = *dist.iter().max().unwrap();
    let end = (0..graph.n())
        .filter(|&v| dist[v] == far)
        .min_by_key(|&v| (graph.degree(v), v))
        .unwrap();
    let order = layered_order(graph, end);
    if is_umbrella(graph, &order) {
        return Some(order);
    }
    if graph.n() <= 12 {
        return (0..graph.n())
            .map(|s| layered_order(graph, s))
            .find(|o| is_umbrella(graph, o));
    }
    None
}

/// Endpoint orderings of a connected component, filtered by the pre-drawn
/// intervals (given as `(left, right)` path positions of local vertices).
pub fn proper_order(graph: &Graph, predrawn: &BTreeMap<Vertex, (usize, usize)>) -> Result<EndpointOrdering, PintError> {
    let groups = indistinguishable_groups(graph);
    let mut class_of = vec![0; graph.n()];
    for (c, group) in groups.iter().enumerate() {
        for &v in group {
            class_of[v] = c;
        }
    }
    let mut quotient_edges = Vec::new();
    for (c, group) in groups.iter().enumerate() {
        for &w in graph.neighbors(group[0]) {
            if class_of[w] > c {
                quotient_edges.push((c, class_of[w]));
            }
        }
    }
    quotient_edges.sort_unstable();
    quotient_edges.dedup();
    let quotient = Graph::new(groups.len(), &quotient_edges).expect("quotient is simple");
    let mut q_order = twin_free_order(&quotient).ok_or(PintError::NotProperInterval)?;
    if q_order.first() > q_order.last() {
        q_order.reverse();
    }

    let expand = |q: &[usize]| -> Vec<Vertex> {
        q.iter()
            .flat_map(|&c| {
                let mut members = groups[c].clone();
                members.sort_by_key(|v| match predrawn.get(v) {
                    Some(&(l, r)) => (0, l, r, *v),
                    None => (1, 0, 0, *v),
                });
                members
            })
            .collect()
    };
    let forward = expand(&q_order);
    q_order.reverse();
    let backward = expand(&q_order);

    let consistent = |order: &[Vertex]| {
        let drawn: Vec<(usize, usize)> = order.iter().filter_map(|v| predrawn.get(v).copied()).collect();
        drawn.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1)
    };
    let mut alternatives = vec![forward];
    if backward != alternatives[0] {
        alternatives.push(backward);
    }
    alternatives.retain(|o| consistent(o));
    if alternatives.is_empty() {
        return Err(PintError::OrderConflict);
    }
    Ok(EndpointOrdering { alternatives })
}

/// Inserts each right endpoint right before the left endpoint of the
/// leftmost non-neighbour to its right, or at the end.
pub fn common_order(order: &[Vertex], graph: &Graph) -> CommonOrdering {
    let n = order.len();
    let mut pos = vec![0usize; graph.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut before: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    for (i, &v) in order.iter().enumerate() {
        let last = graph.neighbors(v).iter().map(|&w| pos[w]).fold(i, usize::max);
        before[last + 1].push(v);
    }
    let mut seq = Vec::with_capacity(2 * n);
    for (j, &v) in order.iter().enumerate() {
        seq.extend(before[j].iter().map(|&u| Endpoint::Right(u)));
        seq.push(Endpoint::Left(v));
    }
    seq.extend(before[n].iter().map(|&u| Endpoint::Right(u)));
    CommonOrdering { seq }
}

/// Gap required between consecutive tokens of ⋖: a right endpoint may share
/// the position of the left endpoint just before it.
fn gap(prev: Endpoint, cur: Endpoint, step: Coord) -> Coord {
    match (prev, cur) {
        (Endpoint::Left(_), Endpoint::Right(_)) => Coord::default(),
        _ => step,
    }
}

/// Smallest placement along ⋖ with prescribed endpoints. Unconstrained
/// placements start at position zero. Tokens before the first prescribed
/// one are packed backwards from it, the rest forwards. Returns `None` when
/// a prescribed endpoint lies left of its forced position.
pub fn place(
    common: &CommonOrdering,
    n: usize,
    fixed: &BTreeMap<Vertex, (Coord, Coord)>,
    step: Coord,
) -> Option<Vec<(Coord, Coord)>> {
    let seq = &common.seq;
    let prescribed = |t: Endpoint| {
        fixed.get(&t.vertex()).map(|&(l, r)| match t {
            Endpoint::Left(_) => l,
            Endpoint::Right(_) => r,
        })
    };
    let anchor = seq.iter().position(|&t| prescribed(t).is_some());
    let mut at = vec![Coord::default(); seq.len()];
    let start = match anchor {
        Some(k) => {
            at[k] = prescribed(seq[k]).unwrap();
            for i in (0..k).rev() {
                at[i] = at[i + 1] - gap(seq[i], seq[i + 1], step);
            }
            k
        }
        None => 0,
    };
    for i in start + 1..seq.len() {
        let forced = at[i - 1] + gap(seq[i - 1], seq[i], step);
        at[i] = match prescribed(seq[i]) {
            Some(q) if q < forced => return None,
            Some(q) => q,
            None => forced,
        };
    }
    let mut intervals = vec![(Coord::default(), Coord::default()); n];
    for (i, &t) in seq.iter().enumerate() {
        match t {
            Endpoint::Left(v) => intervals[v].0 = at[i],
            Endpoint::Right(v) => intervals[v].1 = at[i],
        }
    }
    Some(intervals)
}

/// Minimum span of a connected component and its smallest placements, one
/// per surviving endpoint ordering. Pre-drawn intervals are path positions.
pub fn minspan_pint(graph: &Graph, predrawn: &BTreeMap<Vertex, (usize, usize)>) -> Result<SpanResult, PintError> {
    let orders = proper_order(graph, predrawn)?;
    let fixed: BTreeMap<Vertex, (Coord, Coord)> = predrawn
        .iter()
        .map(|(&v, &(l, r))| (v, (Coord::int(l as i64), Coord::int(r as i64))))
        .collect();
    let placements: Vec<Placement> = orders
        .alternatives
        .iter()
        .filter_map(|order| {
            let common = common_order(order, graph);
            place(&common, graph.n(), &fixed, Coord::UNIT).map(|intervals| Placement {
                order: order.clone(),
                intervals,
            })
        })
        .collect();
    let span = placements.iter().map(Placement::width).min();
    let placements = placements.into_iter().filter(|p| Some(p.width()) == span).collect();
    Ok(SpanResult { span, placements })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Six-vertex component, vertices 0..5 standing for v1..v6.
    fn six_vertex() -> Graph {
        Graph::new(6, &[(0, 1), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap()
    }

    fn tokens(c: &CommonOrdering) -> String {
        c.seq
            .iter()
            .map(|t| match t {
                Endpoint::Left(v) => format!("l{}", v + 1),
                Endpoint::Right(v) => format!("r{}", v + 1),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// All permutations with the umbrella property, by brute force.
    fn umbrella_orders(g: &Graph) -> Vec<Vec<Vertex>> {
        fn rec(g: &Graph, cur: &mut Vec<Vertex>, used: &mut [bool], out: &mut Vec<Vec<Vertex>>) {
            if cur.len() == g.n() {
                if is_umbrella(g, cur) {
                    out.push(cur.clone());
                }
                return;
            }
            for v in 0..g.n() {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(g, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(g, &mut Vec::new(), &mut vec![false; g.n()], &mut out);
        out
    }

    #[test]
    fn path_orders_both_ways() {
        let o = proper_order(&Graph::path(2), &BTreeMap::new()).unwrap();
        assert_eq!(o.alternatives, vec![vec![0, 1, 2], vec![2, 1, 0]]);
    }

    #[test]
    fn claw_is_not_proper() {
        let claw = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(umbrella_orders(&claw).is_empty());
        assert_eq!(proper_order(&claw, &BTreeMap::new()), Err(PintError::NotProperInterval));
    }

    #[test]
    fn six_vertex_ordering_and_span() {
        let g = six_vertex();
        let o = proper_order(&g, &BTreeMap::new()).unwrap();
        assert_eq!(o.order(), &[0, 1, 2, 3, 4, 5]);
        let c = common_order(o.order(), &g);
        assert_eq!(tokens(&c), "l1 l2 r1 l3 l4 r2 r3 l5 r4 l6 r5 r6");
        let s = minspan_pint(&g, &BTreeMap::new()).unwrap();
        assert_eq!(s.span, Some(8));
        assert_eq!(2 * 6 - c.left_right_changes(), 8);
    }

    #[test]
    fn path_common_order_and_span() {
        let g = Graph::path(3);
        let c = common_order(&[0, 1, 2, 3], &g);
        assert_eq!(tokens(&c), "l1 l2 r1 l3 r2 l4 r3 r4");
        for n in 1..10 {
            let s = minspan_pint(&Graph::path(n), &BTreeMap::new()).unwrap();
            assert_eq!(s.span, Some(n + 2));
        }
    }

    #[test]
    fn single_predrawn_vertex() {
        let s = minspan_pint(&Graph::empty(1), &BTreeMap::from([(0, (3, 3))])).unwrap();
        assert_eq!(s.span, Some(1));
        assert_eq!(s.placements.len(), 1);
        assert_eq!(s.placements[0].intervals, vec![(Coord::int(3), Coord::int(3))]);
    }

    #[test]
    fn fully_predrawn_edge() {
        let s = minspan_pint(&Graph::path(1), &BTreeMap::from([(0, (0, 1)), (1, (1, 2))])).unwrap();
        assert_eq!(s.span, Some(3));
        assert_eq!(s.placements.len(), 1);
    }

    #[test]
    fn conflicting_predrawn_order() {
        // middle vertex of P_2 drawn left of both ends' positions
        let drawn = BTreeMap::from([(0, (2, 2)), (1, (0, 0)), (2, (4, 4))]);
        assert_eq!(proper_order(&Graph::path(2), &drawn), Err(PintError::OrderConflict));
    }

    #[test]
    fn predrawn_endpoint_too_close_is_infinite() {
        // ends of P_2 drawn at distance 1: the middle interval cannot fit
        let drawn = BTreeMap::from([(0, (0, 0)), (2, (1, 1))]);
        let s = minspan_pint(&Graph::path(2), &drawn).unwrap();
        assert_eq!(s.span, None);
        // the middle interval would strictly contain both points
        let drawn = BTreeMap::from([(0, (0, 0)), (2, (2, 2))]);
        assert_eq!(minspan_pint(&Graph::path(2), &drawn).unwrap().span, None);
        let drawn = BTreeMap::from([(0, (0, 1)), (2, (2, 3))]);
        assert_eq!(minspan_pint(&Graph::path(2), &drawn).unwrap().span, Some(4));
    }

    #[test]
    fn located_placement_is_packed_around_anchor() {
        // P_3 with vertex 2 drawn at [5,6]: v0,v1 packed leftwards, v3 rightwards
        let drawn = BTreeMap::from([(2, (5, 6))]);
        let s = minspan_pint(&Graph::path(3), &drawn).unwrap();
        let p = &s.placements[0];
        assert_eq!(p.intervals[1].1, Coord::int(5));
        assert_eq!(p.intervals[3].0, Coord::int(6));
        assert_eq!(s.span, Some(5));
    }

    #[test]
    fn layered_order_matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=7);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.45))
                .collect();
            let g = Graph::new(n, &edges).unwrap();
            if g.components().len() != 1 {
                continue;
            }
            let expected = !umbrella_orders(&g).is_empty();
            let got = proper_order(&g, &BTreeMap::new());
            assert_eq!(got.is_ok(), expected, "{edges:?}");
            if let Ok(o) = got {
                assert!(o.alternatives.iter().all(|a| is_umbrella(&g, a)));
            }
        }
    }
}
