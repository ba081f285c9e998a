//! Decision and construction procedures for every class and modification type.

mod derive;
mod path;
pub(crate) mod pieces;
mod search;
mod standard;

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::model::{Graph, GraphClass, HostTree, Instance, ModType, PartialRepresentation, Representation, Solution, Subtree, TreeDerivation, Verdict};
use crate::packing::PackingError;
use crate::prep::{prune, PathCoords};
use crate::realize::realize_on_path;

pub use search::{exact_search, SearchLimits};
pub use standard::recog_standard;

use path::{assemble, fixed_binpacking, fixed_orderings, sequential};
use pieces::Pieces;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    #[default]
    Auto,
    Orderings,
    BinPacking,
    Search,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Strategy::Auto),
            "orderings" => Ok(Strategy::Orderings),
            "binpack" | "binpacking" => Ok(Strategy::BinPacking),
            "search" => Ok(Strategy::Search),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// extra host nodes the exact search may create; `None` uses `2n + |T'|`
    pub node_budget: Option<usize>,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("strategy {strategy} does not apply to {class} {mod_type}")]
    StrategyNotApplicable {
        strategy: Strategy,
        class: GraphClass,
        mod_type: ModType,
    },
    #[error(transparent)]
    Packing(#[from] PackingError),
}

/// Default extra-node budget: one fresh node per interval endpoint.
pub fn default_budget(instance: &Instance) -> usize {
    2 * instance.graph.n() + instance.partial.tree.node_count()
}

/// Decides an instance with the requested strategy.
pub fn solve(instance: &Instance, options: &SolveOptions) -> Result<Verdict, SolveError> {
    let Instance { graph, class, mod_type, partial } = instance;
    let (class, mod_type) = (*class, *mod_type);
    let not_applicable = Err(SolveError::StrategyNotApplicable {
        strategy: options.strategy,
        class,
        mod_type,
    });
    let search = || {
        let limits = SearchLimits {
            node_budget: options.node_budget.unwrap_or_else(|| default_budget(instance)),
            time_limit: options.time_limit,
        };
        Ok(exact_search(instance, &limits))
    };
    match options.strategy {
        Strategy::Search => search(),
        Strategy::BinPacking => match (class, mod_type) {
            (GraphClass::ProperInterval, ModType::Fixed) => Ok(repext_pint_fixed(graph, partial, Strategy::BinPacking)?),
            _ => not_applicable,
        },
        Strategy::Orderings => match (class, mod_type) {
            (GraphClass::ProperInterval, ModType::Fixed) => Ok(repext_pint_fixed(graph, partial, Strategy::Orderings)?),
            _ if class.needs_path_host() => Ok(path_class(class, mod_type, graph, partial, Strategy::Orderings)?),
            _ => not_applicable,
        },
        Strategy::Auto => {
            if class.needs_path_host() {
                return Ok(path_class(class, mod_type, graph, partial, Strategy::Orderings)?);
            }
            if partial.predrawn.is_empty() && mod_type.allows_attachment() {
                return Ok(attach_standard(class, graph, &partial.tree));
            }
            search()
        }
    }
}

/// Recognition on a fixed path: components side by side with smallest spans.
pub fn recog_fixed(class: GraphClass, graph: &Graph, tree: &HostTree) -> Verdict {
    let partial = PartialRepresentation::empty(tree.clone());
    path_class(class, ModType::Fixed, graph, &partial, Strategy::Orderings).expect("no packing involved")
}

pub fn repext_pint_add(graph: &Graph, partial: &PartialRepresentation) -> Verdict {
    path_class(GraphClass::ProperInterval, ModType::Add, graph, partial, Strategy::Auto).expect("no packing involved")
}

/// `strategy` is `Orderings` or `BinPacking`; anything else means `Orderings`.
pub fn repext_pint_fixed(graph: &Graph, partial: &PartialRepresentation, strategy: Strategy) -> Result<Verdict, PackingError> {
    path_class(GraphClass::ProperInterval, ModType::Fixed, graph, partial, strategy)
}

pub fn repext_both(class: GraphClass, graph: &Graph, partial: &PartialRepresentation) -> Verdict {
    path_class(class, ModType::Both, graph, partial, Strategy::Auto).expect("no packing involved")
}

pub fn repext_sub(class: GraphClass, graph: &Graph, partial: &PartialRepresentation) -> Verdict {
    path_class(class, ModType::Sub, graph, partial, Strategy::Auto).expect("no packing involved")
}

fn path_class(
    class: GraphClass,
    mod_type: ModType,
    graph: &Graph,
    partial: &PartialRepresentation,
    strategy: Strategy,
) -> Result<Verdict, PackingError> {
    assert!(class.needs_path_host(), "path classes only");
    if PathCoords::new(&partial.tree).is_err() {
        return Ok(Verdict::NotExtendible);
    }
    // nothing to subdivide on a single node
    if mod_type == ModType::Sub && partial.tree.node_count() == 1 {
        if graph.is_clique(&(0..graph.n()).collect::<Vec<_>>()) {
            let rep = vec![Subtree::single(0); graph.n()];
            return Ok(Verdict::Extendible(Box::new(Solution {
                tree: partial.tree.clone(),
                derivation: TreeDerivation::default(),
                rep: Representation(rep),
            })));
        }
        return Ok(Verdict::NotExtendible);
    }
    let pruned = prune(graph, partial);
    let (pg, pp) = (&pruned.pruned_graph, &pruned.pruned_partial);
    let Some(pieces) = Pieces::build(class, pg, pp) else {
        return Ok(Verdict::NotExtendible);
    };
    let t = pp.tree.node_count();
    let placed = match mod_type {
        ModType::Fixed if strategy == Strategy::BinPacking && class == GraphClass::ProperInterval => {
            fixed_binpacking(&pieces, t)?
        }
        ModType::Fixed => fixed_orderings(&pieces, t),
        _ => sequential(&pieces, mod_type, pp, pg),
    };
    Ok(match placed {
        Some(placed) => {
            let intervals = assemble(pg.n(), &placed);
            let solution = realize_on_path(&pp.tree, &intervals);
            Verdict::Extendible(Box::new(pruned.unprune(solution)))
        }
        None => Verdict::NotExtendible,
    })
}

/// Standard recognition, with the resulting host hung off `tree`.
fn attach_standard(class: GraphClass, graph: &Graph, tree: &HostTree) -> Verdict {
    let Verdict::Extendible(found) = recog_standard(class, graph) else {
        return Verdict::NotExtendible;
    };
    if graph.n() == 0 {
        return Verdict::Extendible(Box::new(Solution {
            tree: tree.clone(),
            derivation: TreeDerivation::default(),
            rep: Representation(Vec::new()),
        }));
    }
    let base = tree.node_count();
    let mut edges = vec![(0, base)];
    edges.extend(found.tree.edges().into_iter().map(|(a, b)| (a + base, b + base)));
    let derivation = TreeDerivation {
        ops: vec![crate::model::TreeOp::AttachBranch { anchor: 0, edges }],
    };
    let (host, _) = crate::model::replay_derivation(tree, &derivation).expect("fresh ids");
    let rep = found
        .rep
        .0
        .iter()
        .map(|s| Subtree::new(s.nodes().iter().map(|&x| x + base).collect()))
        .collect();
    Verdict::Extendible(Box::new(Solution {
        tree: host,
        derivation,
        rep: Representation(rep),
    }))
}
