//! Placement of path-class components left to right: the Fixed type by
//! interleaving search or bin packing, the other types greedily.

use std::collections::HashMap;

use crate::coord::Coord;
use crate::model::{ModType, PartialRepresentation};
use crate::packing::{solve_genbinpacking, GenBinPackingInstance, PackingError};
use crate::prep::{expandable_edges, PathCoords};

use super::pieces::{leftmost, mul, rightmost, Intervals, Piece, Pieces};

/// Intervals per pruned vertex, assembled from placed pieces.
pub(crate) fn assemble(n: usize, placed: &[(&Piece, Intervals)]) -> Vec<(Coord, Coord)> {
    let mut out = vec![(Coord::default(), Coord::default()); n];
    for (piece, iv) in placed {
        for (&v, &span) in piece.vertices.iter().zip(iv) {
            out[v] = span;
        }
    }
    out
}

fn shift_to(iv: &Intervals, start: Coord) -> Intervals {
    let by = start - leftmost(iv);
    iv.iter().map(|&(l, r)| (l + by, r + by)).collect()
}

/// Fixed type: search over interleavings of unlocated pieces (grouped by
/// width) into the located order, keeping the smallest frontier per state.
pub(crate) fn fixed_orderings<'a>(pieces: &'a Pieces, t: usize) -> Option<Vec<(&'a Piece, Intervals)>> {
    let upper = Coord::int(t as i64 - 1);
    let mut widths: Vec<usize> = pieces.unlocated.iter().map(Piece::width).collect();
    widths.sort_unstable();
    widths.dedup();
    let mut by_width: Vec<Vec<&Piece>> = vec![Vec::new(); widths.len()];
    for p in &pieces.unlocated {
        by_width[widths.binary_search(&p.width()).unwrap()].push(p);
    }
    let full: Vec<usize> = by_width.iter().map(Vec::len).collect();
    let c = pieces.located.len();

    #[derive(Clone, Copy)]
    enum Step {
        Located,
        Unlocated(usize),
    }
    type State = (usize, Vec<usize>);
    let mut cache: HashMap<(usize, Coord), Option<Intervals>> = HashMap::new();
    let mut locate = |j: usize, f: Coord| {
        cache
            .entry((j, f))
            .or_insert_with(|| pieces.located[j].place_after(Some(f), Some(upper), Coord::UNIT))
            .clone()
    };

    let start: State = (0, vec![0; widths.len()]);
    let mut best: HashMap<State, (Coord, Option<(State, Step)>)> = HashMap::new();
    best.insert(start.clone(), (Coord::int(-1), None));
    let mut layer = vec![start];
    let total = c + pieces.unlocated.len();
    for _ in 0..total {
        let mut next: Vec<State> = Vec::new();
        for state in &layer {
            let f = best[state].0;
            let mut relax = |to: State, f2: Coord, step: Step| match best.get(&to) {
                Some(&(g, _)) if g <= f2 => {}
                Some(_) => {
                    best.insert(to, (f2, Some((state.clone(), step))));
                }
                None => {
                    best.insert(to.clone(), (f2, Some((state.clone(), step))));
                    next.push(to);
                }
            };
            if state.0 < c {
                if let Some(iv) = locate(state.0, f) {
                    relax((state.0 + 1, state.1.clone()), rightmost(&iv), Step::Located);
                }
            }
            for (w, &used) in state.1.iter().enumerate() {
                if used < full[w] {
                    let f2 = f + mul(Coord::UNIT, widths[w]);
                    if f2 <= upper {
                        let mut counts = state.1.clone();
                        counts[w] += 1;
                        relax((state.0, counts), f2, Step::Unlocated(w));
                    }
                }
            }
        }
        layer = next;
    }

    let goal: State = (c, full);
    best.get(&goal)?;
    let mut steps = Vec::new();
    let mut cur = goal;
    while let Some((prev, step)) = best[&cur].1.clone() {
        steps.push(step);
        cur = prev;
    }
    steps.reverse();
    let mut out = Vec::new();
    let mut f = Coord::int(-1);
    let (mut j, mut taken) = (0, vec![0; widths.len()]);
    for step in steps {
        let (piece, iv) = match step {
            Step::Located => {
                let iv = locate(j, f).expect("replayed step is feasible");
                j += 1;
                (&pieces.located[j - 1], iv)
            }
            Step::Unlocated(w) => {
                let piece = by_width[w][taken[w]];
                taken[w] += 1;
                (piece, piece.place_after(Some(f), None, Coord::UNIT).expect("unlocated piece"))
            }
        };
        f = rightmost(&iv);
        out.push((piece, iv));
    }
    Some(out)
}

/// Fixed type for proper interval pieces: try every combination of smallest
/// placements of the located pieces and pack the unlocated pieces into the gaps.
pub(crate) fn fixed_binpacking<'a>(pieces: &'a Pieces, t: usize) -> Result<Option<Vec<(&'a Piece, Intervals)>>, PackingError> {
    let options: Vec<Vec<Intervals>> = pieces.located.iter().map(|p| p.proper_placements(Coord::UNIT)).collect();
    if options.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let items: Vec<u64> = pieces.unlocated.iter().map(|p| p.width() as u64).collect();
    let mut choice = vec![0usize; options.len()];
    loop {
        if let Some(found) = try_combination(pieces, &options, &choice, &items, t)? {
            return Ok(Some(found));
        }
        // next combination, last index fastest
        let mut i = choice.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn try_combination<'a>(
    pieces: &'a Pieces,
    options: &[Vec<Intervals>],
    choice: &[usize],
    items: &[u64],
    t: usize,
) -> Result<Option<Vec<(&'a Piece, Intervals)>>, PackingError> {
    let chosen: Vec<&Intervals> = options.iter().zip(choice).map(|(o, &i)| &o[i]).collect();
    // bins as (first free position, volume)
    let mut bins: Vec<(i64, u64)> = Vec::new();
    let mut free = 0i64;
    for iv in &chosen {
        let (lo, hi) = (leftmost(iv), rightmost(iv));
        if lo.a < free {
            return Ok(None);
        }
        bins.push((free, (lo.a - free) as u64));
        free = hi.a + 1;
    }
    if free > t as i64 {
        return Ok(None);
    }
    bins.push((free, (t as i64 - free) as u64));
    bins.retain(|b| b.1 > 0);

    let mut placed: Vec<(&Piece, Intervals)> = pieces.located.iter().zip(chosen).map(|(p, iv)| (p, iv.clone())).collect();
    if items.is_empty() {
        return Ok(Some(placed));
    }
    if bins.is_empty() || items.iter().sum::<u64>() > bins.iter().map(|b| b.1).sum() {
        return Ok(None);
    }
    let inst = GenBinPackingInstance {
        k: bins.len(),
        volumes: bins.iter().map(|b| b.1).collect(),
        items: items.to_vec(),
    };
    let Some(partition) = solve_genbinpacking(&inst)? else { return Ok(None) };
    for (bin, part) in bins.iter().zip(partition) {
        let mut at = bin.0;
        for i in part {
            let piece = &pieces.unlocated[i];
            let iv = piece
                .place_after(Some(Coord::int(at - 1)), None, Coord::UNIT)
                .expect("unlocated piece");
            at = rightmost(&iv).a + 1;
            placed.push((piece, iv));
        }
    }
    Ok(Some(placed))
}

/// Add, Both and Sub types: located pieces greedily left to right with the
/// smallest possible right end, unlocated pieces where the type leaves room.
pub(crate) fn sequential<'a>(
    pieces: &'a Pieces,
    mod_type: ModType,
    partial: &PartialRepresentation,
    graph: &crate::model::Graph,
) -> Option<Vec<(&'a Piece, Intervals)>> {
    let t = PathCoords::new(&partial.tree).ok()?.len() as i64;
    let (step, mut frontier, upper) = match mod_type {
        ModType::Add => (Coord::UNIT, None, None),
        ModType::Both => (Coord::EPS, None, None),
        ModType::Sub => (Coord::EPS, Some(Coord::new(0, -1)), Some(Coord::int(t - 1))),
        ModType::Fixed => unreachable!("fixed type uses the interleaving search"),
    };
    // Sub inserts unlocated pieces into the first expandable edge
    let gate = if mod_type == ModType::Sub && !pieces.unlocated.is_empty() {
        let coords = PathCoords::new(&partial.tree).ok()?;
        let (a, _) = *expandable_edges(graph, partial).ok()?.first()?;
        Some(coords.pos[a] as i64)
    } else {
        None
    };
    let mut placed: Vec<(&Piece, Intervals)> = Vec::new();
    let mut unlocated_done = false;
    for piece in &pieces.located {
        if let Some(e) = gate {
            let left_of_gate = piece.fixed.values().all(|&(_, b)| b.a <= e);
            if !left_of_gate && !unlocated_done {
                frontier = Some(insert_unlocated(pieces, &mut placed, frontier, e));
                unlocated_done = true;
            }
        }
        let iv = piece.place_after(frontier, upper, step)?;
        frontier = Some(rightmost(&iv));
        placed.push((piece, iv));
    }
    match mod_type {
        ModType::Sub => {
            if let (Some(e), false) = (gate, unlocated_done) {
                insert_unlocated(pieces, &mut placed, frontier, e);
            }
        }
        ModType::Both => {
            let mut f = frontier.map_or(Coord::int(t - 1), |f| f.max(Coord::int(t - 1)));
            for piece in &pieces.unlocated {
                let iv = piece.place_after(Some(f), None, Coord::UNIT)?;
                f = rightmost(&iv);
                placed.push((piece, iv));
            }
        }
        ModType::Add => {
            let left = placed.iter().map(|(_, iv)| leftmost(iv)).min().unwrap_or(Coord::int(0));
            let mut f = left - Coord::UNIT;
            for piece in pieces.unlocated.iter().rev() {
                let iv = piece.place_after(Some(Coord::int(0)), None, Coord::UNIT)?;
                let iv = shift_to(&iv, f - mul(Coord::UNIT, piece.width() - 1));
                f = leftmost(&iv) - Coord::UNIT;
                placed.push((piece, iv));
            }
        }
        ModType::Fixed => {}
    }
    Some(placed)
}

/// Places all unlocated pieces inside edge `(e, e+1)` after `frontier`.
fn insert_unlocated<'a>(
    pieces: &'a Pieces,
    placed: &mut Vec<(&'a Piece, Intervals)>,
    frontier: Option<Coord>,
    e: i64,
) -> Coord {
    let mut f = frontier.map_or(Coord::int(e), |f| f.max(Coord::int(e)));
    for piece in &pieces.unlocated {
        let iv = piece.place_after(Some(f), None, Coord::EPS).expect("unlocated piece");
        f = rightmost(&iv);
        placed.push((piece, iv));
    }
    f
}
