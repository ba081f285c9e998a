//! Components of a pruned path-class instance, prepared for left-to-right
//! placement over path coordinates.

use std::collections::BTreeMap;

use crate::coord::Coord;
use crate::intg::{chordal_cliques, clique_order, search_clique_orders, CliqueSet, Visit};
use crate::model::{Graph, GraphClass, PartialRepresentation, Vertex};
use crate::pint::{common_order, place, proper_order, CommonOrdering};
use crate::prep::{layout_components, PathCoords};

pub(crate) const FAR_LEFT: Coord = Coord::new(i64::MIN / 4, 0);
pub(crate) const FAR_RIGHT: Coord = Coord::new(i64::MAX / 4, 0);

pub(crate) type Intervals = Vec<(Coord, Coord)>;

#[derive(Clone, Debug)]
pub(crate) enum Shape {
    Proper(Vec<CommonOrdering>),
    /// maximal cliques, plus one consecutive order when unlocated
    Cliques(CliqueSet, Option<Vec<usize>>),
}

#[derive(Clone, Debug)]
pub(crate) struct Piece {
    /// pruned-instance ids; local vertex `i` is `vertices[i]`
    pub vertices: Vec<Vertex>,
    pub graph: Graph,
    pub fixed: BTreeMap<Vertex, (Coord, Coord)>,
    pub shape: Shape,
}

/// Located pieces in left-to-right order and unlocated pieces, or `None`
/// when some component has no representation of the class at all.
pub(crate) struct Pieces {
    pub located: Vec<Piece>,
    pub unlocated: Vec<Piece>,
}

impl Pieces {
    pub fn build(class: GraphClass, graph: &Graph, partial: &PartialRepresentation) -> Option<Pieces> {
        let coords = PathCoords::new(&partial.tree).ok()?;
        let layout = layout_components(graph, partial).ok()?;
        let make = |vertices: &Vec<Vertex>| Piece::build(class, graph, partial, &coords, vertices.clone());
        let located = layout.located.iter().map(|c| make(&c.vertices)).collect::<Option<Vec<_>>>()?;
        let unlocated = layout.unlocated.iter().map(make).collect::<Option<Vec<_>>>()?;
        Some(Pieces { located, unlocated })
    }
}

impl Piece {
    fn build(
        class: GraphClass,
        graph: &Graph,
        partial: &PartialRepresentation,
        coords: &PathCoords,
        vertices: Vec<Vertex>,
    ) -> Option<Piece> {
        let local = graph.induced(&vertices);
        let spans: BTreeMap<Vertex, (usize, usize)> = vertices
            .iter()
            .enumerate()
            .filter_map(|(i, v)| partial.predrawn.get(v).map(|s| (i, coords.span(s))))
            .collect();
        let fixed = spans
            .iter()
            .map(|(&i, &(l, r))| (i, (Coord::int(l as i64), Coord::int(r as i64))))
            .collect();
        let shape = match class {
            GraphClass::ProperInterval => {
                let orders = proper_order(&local, &spans).ok()?;
                Shape::Proper(orders.alternatives.iter().map(|o| common_order(o, &local)).collect())
            }
            GraphClass::Interval => {
                let cliques = chordal_cliques(&local)?;
                if spans.is_empty() {
                    let order = clique_order(&cliques, local.n())?;
                    Shape::Cliques(cliques, Some(order))
                } else {
                    Shape::Cliques(cliques, None)
                }
            }
            _ => unreachable!("path classes only"),
        };
        Some(Piece {
            vertices,
            graph: local,
            fixed,
            shape,
        })
    }

    pub fn is_located(&self) -> bool {
        !self.fixed.is_empty()
    }

    /// Width in steps of an unlocated piece.
    pub fn width(&self) -> usize {
        match &self.shape {
            Shape::Proper(commons) => 2 * self.graph.n() - commons[0].left_right_changes(),
            Shape::Cliques(cliques, _) => cliques.count(),
        }
    }

    /// Candidate placements of a located piece that do not depend on the
    /// frontier: the smallest placement per endpoint ordering.
    pub fn proper_placements(&self, step: Coord) -> Vec<Intervals> {
        let Shape::Proper(commons) = &self.shape else { return Vec::new() };
        commons
            .iter()
            .filter_map(|c| place(c, self.graph.n(), &self.fixed, step))
            .collect()
    }

    /// Placement with every coordinate above `frontier` and at most `upper`
    /// that minimizes the rightmost coordinate. Unlocated pieces start right
    /// after the frontier, or at zero.
    pub fn place_after(&self, frontier: Option<Coord>, upper: Option<Coord>, step: Coord) -> Option<Intervals> {
        let start = frontier.map_or(Coord::default(), |f| f + step);
        let upper = upper.unwrap_or(FAR_RIGHT);
        let candidates: Vec<Intervals> = match (&self.shape, self.is_located()) {
            (Shape::Proper(commons), false) => {
                let base = place(&commons[0], self.graph.n(), &BTreeMap::new(), step)?;
                vec![base.into_iter().map(|(l, r)| (l + start, r + start)).collect()]
            }
            (Shape::Proper(_), true) => self.proper_placements(step),
            (Shape::Cliques(cliques, Some(order)), false) => {
                let anchors: Vec<Coord> = (0..order.len()).map(|j| start + mul(step, j)).collect();
                vec![clique_intervals(cliques, order, &anchors, self.graph.n(), &self.fixed)]
            }
            (Shape::Cliques(cliques, _), _) => {
                int_located(cliques, self.graph.n(), &self.fixed, frontier, upper, step)
                    .into_iter()
                    .collect()
            }
        };
        candidates
            .into_iter()
            .filter(|iv| {
                let lo = iv.iter().map(|i| i.0).min().unwrap();
                let hi = iv.iter().map(|i| i.1).max().unwrap();
                frontier.map_or(true, |f| lo > f) && hi <= upper
            })
            .min_by_key(|iv| iv.iter().map(|i| i.1).max().unwrap())
    }
}

pub(crate) fn mul(step: Coord, k: usize) -> Coord {
    Coord::new(step.a * k as i64, step.e * k as i64)
}

pub(crate) fn leftmost(iv: &Intervals) -> Coord {
    iv.iter().map(|i| i.0).min().expect("nonempty")
}

pub(crate) fn rightmost(iv: &Intervals) -> Coord {
    iv.iter().map(|i| i.1).max().expect("nonempty")
}

fn clique_intervals(
    cliques: &CliqueSet,
    order: &[usize],
    anchors: &[Coord],
    n: usize,
    fixed: &BTreeMap<Vertex, (Coord, Coord)>,
) -> Intervals {
    let mut iv = vec![(FAR_RIGHT, FAR_LEFT); n];
    for (&k, &x) in order.iter().zip(anchors) {
        for &v in &cliques.cliques[k] {
            iv[v].0 = iv[v].0.min(x);
            iv[v].1 = iv[v].1.max(x);
        }
    }
    for (&v, &span) in fixed {
        iv[v] = span;
    }
    iv
}

/// Clique order and anchors of a located interval component minimizing the
/// last anchor. Anchor `x_j` of clique `K_j` lies inside every pre-drawn
/// interval of `K_j`, left of pre-drawn vertices still to come and right of
/// finished ones.
fn int_located(
    cliques: &CliqueSet,
    n: usize,
    fixed: &BTreeMap<Vertex, (Coord, Coord)>,
    frontier: Option<Coord>,
    upper: Coord,
    step: Coord,
) -> Option<Intervals> {
    if fixed.values().any(|&(a, b)| frontier.map_or(false, |f| a <= f) || b > upper) {
        return None;
    }
    let c = cliques.count();
    let member = cliques.memberships(n);
    let drawn: Vec<(Vertex, Coord, Coord)> = fixed.iter().map(|(&v, &(a, b))| (v, a, b)).collect();
    let mut slot = vec![usize::MAX; c];
    let mut anchors: Vec<Coord> = Vec::with_capacity(c);
    let mut highs: Vec<Coord> = Vec::with_capacity(c);
    let mut best: Option<(Coord, Vec<usize>, Vec<Coord>, Vec<Coord>)> = None;
    search_clique_orders(cliques, n, |prefix| {
        let j = prefix.len() - 1;
        let k = prefix[j];
        slot[k] = j;
        anchors.truncate(j);
        highs.truncate(j);
        let placed = |q: usize| slot[q] < j && prefix[slot[q]] == q;
        let mut lo = match anchors.last() {
            Some(&x) => x + step,
            None => frontier.map_or(FAR_LEFT, |f| f + step),
        };
        let mut hi = upper;
        for &(w, a, b) in &drawn {
            if cliques.cliques[k].binary_search(&w).is_ok() {
                lo = lo.max(a);
                hi = hi.min(b);
            } else if member[w].iter().any(|&q| placed(q)) {
                lo = lo.max(b + step);
            } else {
                hi = hi.min(a - step);
            }
        }
        if lo > hi || best.as_ref().map_or(false, |b| lo >= b.0) {
            return Visit::Prune;
        }
        anchors.push(lo);
        highs.push(hi);
        if j + 1 == c {
            best = Some((lo, prefix.to_vec(), anchors.clone(), highs.clone()));
            Visit::Prune
        } else {
            Visit::Continue
        }
    });
    let (_, order, mut anchors, highs) = best?;
    // pull earlier anchors right, keeping the last one
    for j in (0..c.saturating_sub(1)).rev() {
        anchors[j] = highs[j].min(anchors[j + 1] - step);
    }
    Some(clique_intervals(cliques, &order, &anchors, n, fixed))
}
