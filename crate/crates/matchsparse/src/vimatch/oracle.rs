//! Independent hypergraph construction used only by tests.
//!
//! Where `build_h` enumerates candidate walks directly, this oracle derives
//! them from the disagreement between the profile's matchings and a set of
//! reference matchings: symmetric-difference components are peeled into
//! multi-walks, chained while they stay alternating, then cut at random
//! offsets into short pieces. Every emitted walk must be one `build_h`
//! could have found, which is exactly what the acceptance tests check.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::Error;
use crate::graph::{Matching, WeightedGraph};
use crate::rng::{streams, RngStream};
use crate::Result;

use super::hypergraph::{GainHypergraph, HyperEdge};
use super::walk::{gain, is_alternating, is_applicable, is_valid_multiwalk, MultiWalk, Profile};

/// A maximal path or cycle inside one entry's disagreement graph.
#[derive(Debug, Clone)]
struct Component {
    /// Edge ids in traversal order.
    edges: Vec<usize>,
    is_cycle: bool,
}

/// Splits an edge set of maximum degree two into its maximal paths and
/// cycles, ordered by smallest member edge id.
fn components(g: &WeightedGraph, edges: &BTreeSet<usize>) -> Vec<Component> {
    let mut degree = vec![0usize; g.n()];
    for &e in edges {
        degree[g.edge(e).u] += 1;
        degree[g.edge(e).v] += 1;
    }
    debug_assert!(degree.iter().all(|&d| d <= 2), "disagreement degree > 2");

    let mut unused: BTreeSet<usize> = edges.clone();
    let mut out = Vec::new();
    while let Some(&seed) = unused.iter().next() {
        // Gather the connected component of `seed`.
        let mut comp_edges: BTreeSet<usize> = BTreeSet::new();
        let mut frontier = vec![seed];
        while let Some(e) = frontier.pop() {
            if !comp_edges.insert(e) {
                continue;
            }
            unused.remove(&e);
            let ed = g.edge(e);
            for v in [ed.u, ed.v] {
                for &f in g.adjacency(v) {
                    if unused.contains(&f) {
                        frontier.push(f);
                    }
                }
            }
        }
        // Order the component as a walk. Paths start at the smaller-id
        // endpoint of degree one; cycles start at their smallest edge.
        let mut local_degree: std::collections::HashMap<usize, Vec<usize>> =
            std::collections::HashMap::new();
        for &e in &comp_edges {
            let ed = g.edge(e);
            local_degree.entry(ed.u).or_default().push(e);
            local_degree.entry(ed.v).or_default().push(e);
        }
        let path_ends: Vec<usize> = {
            let mut ends: Vec<usize> = local_degree
                .iter()
                .filter(|(_, es)| es.len() == 1)
                .map(|(&v, _)| v)
                .collect();
            ends.sort_unstable();
            ends
        };
        let is_cycle = path_ends.is_empty();
        let (start_vertex, first_edge) = if is_cycle {
            let first = *comp_edges.iter().next().unwrap();
            (g.edge(first).u, first)
        } else {
            let v = path_ends[0];
            (v, local_degree[&v][0])
        };
        let mut ordered = vec![first_edge];
        let mut prev_vertex = start_vertex;
        let mut cur_vertex = g.edge(first_edge).other(start_vertex);
        loop {
            let next = local_degree[&cur_vertex]
                .iter()
                .copied()
                .find(|&f| f != *ordered.last().unwrap() && !ordered.contains(&f));
            match next {
                Some(f) => {
                    ordered.push(f);
                    let ed = g.edge(f);
                    prev_vertex = cur_vertex;
                    cur_vertex = ed.other(cur_vertex);
                }
                None => break,
            }
        }
        let _ = prev_vertex;
        debug_assert_eq!(ordered.len(), comp_edges.len());
        out.push(Component {
            edges: ordered,
            is_cycle,
        });
    }
    // Deterministic order: by smallest edge id in the component.
    out.sort_by_key(|c| c.edges.iter().copied().min());
    out
}

/// All traversal orders of a component: two directions for a path, every
/// rotation in both directions for a cycle.
fn traversals(c: &Component) -> Vec<Vec<usize>> {
    let k = c.edges.len();
    let mut out = Vec::new();
    if c.is_cycle && k > 1 {
        for start in 0..k {
            let mut fwd = Vec::with_capacity(k);
            for j in 0..k {
                fwd.push(c.edges[(start + j) % k]);
            }
            out.push(fwd);
        }
        for start in 0..k {
            let mut rev = Vec::with_capacity(k);
            for j in 0..k {
                rev.push(c.edges[(start + k - j) % k]);
            }
            out.push(rev);
        }
    } else {
        out.push(c.edges.clone());
        if k > 1 {
            let mut rev = c.edges.clone();
            rev.reverse();
            out.push(rev);
        }
    }
    out
}

/// Concatenates `w` with `ext` in either order, returning the first
/// combination that is a valid alternating multi-walk.
fn expand(
    w: &MultiWalk,
    ext: &[(usize, usize)],
    prof: &Profile,
    g: &WeightedGraph,
) -> Option<MultiWalk> {
    let after: Vec<(usize, usize)> = w
        .elements
        .iter()
        .copied()
        .chain(ext.iter().copied())
        .collect();
    let before: Vec<(usize, usize)> = ext
        .iter()
        .copied()
        .chain(w.elements.iter().copied())
        .collect();
    for candidate in [after, before] {
        let cand = MultiWalk::new(candidate);
        if is_valid_multiwalk(&cand, prof, g) && is_alternating(&cand, prof, g) {
            return Some(cand);
        }
    }
    None
}

/// Tries every traversal of `comp` (tagged with entry `entry`) against `w`.
fn expand_with_component(
    w: &MultiWalk,
    entry: usize,
    comp: &Component,
    prof: &Profile,
    g: &WeightedGraph,
) -> Option<MultiWalk> {
    for trav in traversals(comp) {
        let ext: Vec<(usize, usize)> = trav.into_iter().map(|e| (entry, e)).collect();
        if let Some(expanded) = expand(w, &ext, prof, g) {
            return Some(expanded);
        }
    }
    None
}

/// Derives candidate walks from profile-versus-reference disagreements.
///
/// `reference[i]` plays the role of the benchmark matching for entry `i`.
/// Steps: per-entry symmetric differences; removal of reference edges at
/// saturated vertices the reference matches more often than the profile
/// does; greedy chaining of maximal paths and cycles into long alternating
/// multi-walks; random-offset decomposition into pieces of bounded length
/// with a wrap-around merge of the first and last piece.
///
/// Every output walk is asserted alternating, applicable, and of length at
/// most `l`, and the output hypergraph has maximum degree at most
/// `2 * alpha`.
pub fn construct_h_prime(
    g: &WeightedGraph,
    prof: &Profile,
    saturated: &[bool],
    reference: &[Matching],
    l: usize,
    stream: &RngStream,
) -> Result<GainHypergraph> {
    if l < 4 || l % 4 != 0 {
        return Err(Error::invalid("l must be a positive multiple of 4"));
    }
    let alpha = prof.alpha();
    if reference.len() != alpha {
        return Err(Error::invalid(format!(
            "expected {alpha} reference matchings, got {}",
            reference.len()
        )));
    }
    prof.validate(g)?;
    for (i, m) in reference.iter().enumerate() {
        for &e in m.edges() {
            if !prof.entries[i].subgraph.contains(e) {
                return Err(Error::invalid(format!(
                    "reference matching {i}: edge {e} outside its subgraph"
                )));
            }
        }
    }

    // Disagreement edge sets: edges in exactly one of M_i and reference_i.
    let mut disagree: Vec<BTreeSet<usize>> = Vec::with_capacity(alpha);
    for (entry, m_ref) in prof.entries.iter().zip(reference) {
        let m = &entry.matching;
        let mut set = BTreeSet::new();
        for &e in m.edges() {
            if !m_ref.contains(e) {
                set.insert(e);
            }
        }
        for &e in m_ref.edges() {
            if !m.contains(e) {
                set.insert(e);
            }
        }
        disagree.push(set);
    }

    // Saturated vertices the reference matches strictly more often lose
    // their incident reference edges.
    let mut over_matched = vec![false; g.n()];
    for v in 0..g.n() {
        if !saturated[v] {
            continue;
        }
        let in_ref = reference
            .iter()
            .filter(|m| m.edges().iter().any(|&e| g.edge(e).touches(v)))
            .count();
        let in_prof = prof.matched_count(g, v);
        if in_ref > in_prof {
            over_matched[v] = true;
        }
    }
    for (i, set) in disagree.iter_mut().enumerate() {
        set.retain(|&e| {
            let ed = g.edge(e);
            !(reference[i].contains(e) && (over_matched[ed.u] || over_matched[ed.v]))
        });
    }

    // Phase 1: peel maximal paths/cycles and chain them while alternation
    // allows. Whole components always extend an empty walk; a nonempty walk
    // only absorbs components that keep it alternating.
    let mut walks: Vec<MultiWalk> = Vec::new();
    loop {
        let Some(i) = (0..alpha).find(|&i| !disagree[i].is_empty()) else {
            break;
        };
        let mut w = MultiWalk::empty();
        let comps = components(g, &disagree[i]);
        let first = &comps[0];
        let expanded = expand_with_component(&w, i, first, prof, g)
            .expect("a maximal disagreement component is itself alternating");
        w = expanded;
        for &e in &first.edges {
            disagree[i].remove(&e);
        }
        loop {
            let mut progressed = false;
            'scan: for j in 0..alpha {
                for comp in components(g, &disagree[j]) {
                    if let Some(expanded) = expand_with_component(&w, j, &comp, prof, g) {
                        w = expanded;
                        for &e in &comp.edges {
                            disagree[j].remove(&e);
                        }
                        progressed = true;
                        break 'scan;
                    }
                }
            }
            if !progressed {
                break;
            }
        }
        walks.push(w);
    }

    // Phase 2: random-offset decomposition into short pieces.
    let quarter = l / 4;
    let mut out = GainHypergraph::empty();
    for (w_idx, w) in walks.iter().enumerate() {
        let x = stream
            .derive_idx(streams::DECOMP_OFFSET, w_idx as u64)
            .rng()
            .gen_range(0..quarter as u64) as usize;
        // Drop unmatched elements at 1-based positions congruent to x or
        // x+1 (cyclically) modulo l/4; alternation guarantees at least one
        // drop per window, bounding every surviving run by l/4.
        let keep: Vec<bool> = w
            .elements
            .iter()
            .enumerate()
            .map(|(pos0, &(s, e))| {
                let unmatched = !prof.entries[s].matching.contains(e);
                let r = (pos0 + 1) % quarter;
                !(unmatched && (r == x || r == (x + 1) % quarter))
            })
            .collect();
        let mut pieces: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut run: Vec<(usize, usize)> = Vec::new();
        for (el, &k) in w.elements.iter().zip(&keep) {
            if k {
                run.push(*el);
            } else if !run.is_empty() {
                pieces.push(std::mem::take(&mut run));
            }
        }
        if !run.is_empty() {
            pieces.push(run);
        }
        if pieces.len() >= 2 {
            let first = MultiWalk::new(pieces[0].clone());
            let last = pieces.last().unwrap().clone();
            if let Some(merged) = expand(&first, &last, prof, g) {
                pieces[0] = merged.elements;
                pieces.pop();
            }
        }
        for piece in pieces {
            let walk = MultiWalk::new(piece);
            assert!(
                walk.len() <= l,
                "decomposed piece longer than l: {} > {l}",
                walk.len()
            );
            assert!(
                is_applicable(&walk, prof, g, saturated),
                "oracle emitted a non-applicable walk"
            );
            out.hyperedges.push(HyperEdge {
                vertices: walk.touched_vertices(g),
                gain: gain(&walk, prof, g),
                walk,
            });
        }
    }

    // Contract: bounded hypergraph degree.
    let mut degree = vec![0usize; g.n()];
    for he in &out.hyperedges {
        for &v in &he.vertices {
            degree[v] += 1;
        }
    }
    for (v, &d) in degree.iter().enumerate() {
        assert!(
            d <= 2 * alpha,
            "hypergraph degree {d} at vertex {v} exceeds 2*alpha = {}",
            2 * alpha
        );
    }
    Ok(out)
}
