//! Candidate-walk hypergraph and its greedy matching.
//!
//! [`build_h`] enumerates every alternating, applicable multi-walk up to a
//! length bound and stores each as a hyperedge on its touched vertices,
//! weighted by its gain. [`greedy_hypergraph_matching`] then picks a
//! vertex-disjoint subset by repeatedly taking the best positive gain.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::Signed;

use crate::graph::WeightedGraph;
use crate::weight::{ratio_int, Ratio};

use super::walk::{gain, is_applicable, MultiWalk, Profile};

/// A candidate walk: the vertices it touches, its exact gain, and the walk.
#[derive(Debug, Clone)]
pub struct HyperEdge {
    pub vertices: Vec<usize>,
    pub gain: Ratio,
    pub walk: MultiWalk,
}

/// All stored candidate walks, in deterministic discovery order.
#[derive(Debug, Clone)]
pub struct GainHypergraph {
    pub hyperedges: Vec<HyperEdge>,
    /// Set when enumeration stopped at the walk cap.
    pub truncated: bool,
}

impl GainHypergraph {
    pub fn empty() -> Self {
        GainHypergraph {
            hyperedges: Vec::new(),
            truncated: false,
        }
    }

    /// Exact sum of positive gains.
    pub fn positive_gain_total(&self) -> Ratio {
        self.hyperedges
            .iter()
            .filter(|h| h.gain.is_positive())
            .map(|h| h.gain.clone())
            .sum()
    }

    /// Largest vertex-set size among positive-gain hyperedges.
    pub fn positive_rank(&self) -> usize {
        self.hyperedges
            .iter()
            .filter(|h| h.gain.is_positive())
            .map(|h| h.vertices.len())
            .max()
            .unwrap_or(0)
    }

    /// Largest number of positive-gain hyperedges meeting at one vertex.
    pub fn positive_max_degree(&self) -> usize {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for h in self.hyperedges.iter().filter(|h| h.gain.is_positive()) {
            for &v in &h.vertices {
                *counts.entry(v).or_insert(0) += 1;
            }
        }
        counts.values().copied().max().unwrap_or(0)
    }
}

/// Depth-first enumeration of alternating, applicable multi-walks of length
/// at most `l`, from every (entry, edge) start, in ascending order.
///
/// The search prunes on conditions that are prefix-monotone (indicator
/// alternation, walk threading, element distinctness, length) and defers the
/// rest (matching validity after application, saturated-degree checks) to
/// emission time, because a walk can repair a conflict its prefix created.
/// Walks identical up to reversal are stored once. Enumeration stops once
/// `walk_cap` walks are stored, flagging truncation.
pub fn build_h(
    g: &WeightedGraph,
    prof: &Profile,
    saturated: &[bool],
    l: usize,
    walk_cap: usize,
) -> GainHypergraph {
    assert!(l >= 1, "walk length bound must be at least 1");
    assert!(walk_cap >= 1);
    let alpha = prof.alpha();
    let mut seen: HashSet<Vec<(usize, usize)>> = HashSet::new();
    let mut out = GainHypergraph::empty();

    struct Dfs<'a> {
        g: &'a WeightedGraph,
        prof: &'a Profile,
        saturated: &'a [bool],
        l: usize,
        walk_cap: usize,
        seen: &'a mut HashSet<Vec<(usize, usize)>>,
        out: &'a mut GainHypergraph,
    }

    impl Dfs<'_> {
        /// Returns true when the cap is hit and enumeration must stop.
        fn visit(&mut self, elements: &mut Vec<(usize, usize)>, currents: &[usize]) -> bool {
            let walk = MultiWalk::new(elements.clone());
            let key = walk.canonical_key();
            if !self.seen.contains(&key) {
                self.seen.insert(key);
                if is_applicable(&walk, self.prof, self.g, self.saturated) {
                    let vertices = walk.touched_vertices(self.g);
                    let gain = gain(&walk, self.prof, self.g);
                    self.out.hyperedges.push(HyperEdge {
                        vertices,
                        gain,
                        walk,
                    });
                    if self.out.hyperedges.len() >= self.walk_cap {
                        self.out.truncated = true;
                        return true;
                    }
                }
            }
            if elements.len() >= self.l {
                return false;
            }
            let &(last_s, last_e) = elements.last().unwrap();
            let last_ind = self.prof.entries[last_s].matching.contains(last_e);
            // Candidates keyed (entry, edge) ascending; value collects the
            // walk ends reachable after appending that element.
            let mut cands: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
            for s in 0..self.prof.alpha() {
                for &cur in currents {
                    for &e in self.g.adjacency(cur) {
                        if !self.prof.entries[s].subgraph.contains(e) {
                            continue;
                        }
                        let ind = self.prof.entries[s].matching.contains(e);
                        if ind == last_ind {
                            continue;
                        }
                        if elements.contains(&(s, e)) {
                            continue;
                        }
                        cands
                            .entry((s, e))
                            .or_default()
                            .insert(self.g.edge(e).other(cur));
                    }
                }
            }
            for ((s, e), next) in cands {
                elements.push((s, e));
                let next: Vec<usize> = next.into_iter().collect();
                let stop = self.visit(elements, &next);
                elements.pop();
                if stop {
                    return true;
                }
            }
            false
        }
    }

    let mut dfs = Dfs {
        g,
        prof,
        saturated,
        l,
        walk_cap,
        seen: &mut seen,
        out: &mut out,
    };
    'starts: for s in 0..alpha {
        let start_edges: Vec<usize> = prof.entries[s].subgraph.iter().collect();
        for e in start_edges {
            let ed = g.edge(e);
            let mut currents = vec![ed.u, ed.v];
            currents.sort_unstable();
            let mut elements = vec![(s, e)];
            if dfs.visit(&mut elements, &currents) {
                break 'starts;
            }
        }
    }
    out
}

/// Exhaustive reference enumeration over all element sequences of length up
/// to `l`. Exponential; test-sized profiles only.
pub fn build_h_bruteforce(
    g: &WeightedGraph,
    prof: &Profile,
    saturated: &[bool],
    l: usize,
) -> GainHypergraph {
    use super::walk::is_valid_multiwalk;
    let mut universe: Vec<(usize, usize)> = Vec::new();
    for (s, entry) in prof.entries.iter().enumerate() {
        for e in entry.subgraph.iter() {
            universe.push((s, e));
        }
    }
    let mut out = GainHypergraph::empty();
    let mut seen: HashSet<Vec<(usize, usize)>> = HashSet::new();
    let mut stack: Vec<Vec<(usize, usize)>> = universe.iter().map(|&el| vec![el]).collect();
    stack.reverse();
    while let Some(elements) = stack.pop() {
        let walk = MultiWalk::new(elements.clone());
        if is_valid_multiwalk(&walk, prof, g) {
            let key = walk.canonical_key();
            if seen.insert(key) && is_applicable(&walk, prof, g, saturated) {
                out.hyperedges.push(HyperEdge {
                    vertices: walk.touched_vertices(g),
                    gain: gain(&walk, prof, g),
                    walk,
                });
            }
        }
        if elements.len() < l {
            for &el in universe.iter().rev() {
                if !elements.contains(&el) {
                    let mut ext = elements.clone();
                    ext.push(el);
                    stack.push(ext);
                }
            }
        }
    }
    out
}

/// Greedy vertex-disjoint selection over positive gains: repeatedly take
/// the hyperedge with the largest gain (ties to the lowest index) and
/// discard everything sharing a vertex with it. Returns selected indices
/// ascending.
///
/// The selection is guaranteed a total gain of at least the positive gain
/// mass divided by (rank × max degree), both measured over positive-gain
/// hyperedges.
pub fn greedy_hypergraph_matching(h: &GainHypergraph) -> Vec<usize> {
    let mut alive: Vec<bool> = h
        .hyperedges
        .iter()
        .map(|e| e.gain.is_positive())
        .collect();
    let mut selected = Vec::new();
    loop {
        let mut best: Option<usize> = None;
        for (i, he) in h.hyperedges.iter().enumerate() {
            if alive[i] && best.is_none_or(|b| he.gain > h.hyperedges[b].gain) {
                best = Some(i);
            }
        }
        let Some(pick) = best else { break };
        selected.push(pick);
        let pick_vs: HashSet<usize> = h.hyperedges[pick].vertices.iter().copied().collect();
        for (i, he) in h.hyperedges.iter().enumerate() {
            if alive[i] && he.vertices.iter().any(|v| pick_vs.contains(v)) {
                alive[i] = false;
            }
        }
    }
    selected.sort_unstable();
    debug_assert!(selection_meets_bound(h, &selected));
    selected
}

/// Exact check of the greedy guarantee:
/// `selected gain × rank × maxdeg ≥ total positive gain`.
pub fn selection_meets_bound(h: &GainHypergraph, selected: &[usize]) -> bool {
    let total = h.positive_gain_total();
    if !total.is_positive() {
        return selected.is_empty();
    }
    let rank = h.positive_rank();
    let maxdeg = h.positive_max_degree();
    let picked: Ratio = selected
        .iter()
        .map(|&i| h.hyperedges[i].gain.clone())
        .sum();
    picked * ratio_int((rank * maxdeg) as i64) >= total
}
