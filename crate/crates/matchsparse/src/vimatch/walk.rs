//! Profiles and alternating multi-walks.
//!
//! A [`Profile`] bundles `alpha` (subgraph, matching) pairs over the same
//! base graph. A [`MultiWalk`] threads a walk through the base graph while
//! tagging each edge with the profile entry it acts on; applying a walk
//! toggles each tagged edge in its entry's matching. Alternation and
//! applicability are the two gates every candidate walk must pass before it
//! becomes a hyperedge.

use crate::error::Error;
use crate::graph::{EdgeSet, Matching, WeightedGraph};
use crate::weight::{ratio_int, Ratio};
use crate::Result;

/// One (subgraph, matching) pair of a profile.
#[derive(Debug, Clone)]
pub struct ProfileEntry {
    pub subgraph: EdgeSet,
    pub matching: Matching,
}

/// An ordered list of (subgraph, matching) pairs. Entry 0 is the caller's
/// realization; the rest are fresh draws.
#[derive(Debug, Clone)]
pub struct Profile {
    pub entries: Vec<ProfileEntry>,
}

impl Profile {
    pub fn alpha(&self) -> usize {
        self.entries.len()
    }

    /// Checks that every matching lies inside its own subgraph. Matchings
    /// are vertex-disjoint by construction.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        for (i, entry) in self.entries.iter().enumerate() {
            for &e in entry.matching.edges() {
                if !entry.subgraph.contains(e) {
                    return Err(Error::invalid(format!(
                        "entry {i}: matching edge {e} not in its subgraph"
                    )));
                }
            }
            if entry.subgraph.universe() != g.m() {
                return Err(Error::invalid(format!(
                    "entry {i}: subgraph universe mismatch"
                )));
            }
        }
        Ok(())
    }

    /// Exact total matching weight across entries.
    pub fn total_weight(&self) -> Ratio {
        self.entries
            .iter()
            .map(|en| en.matching.weight().clone())
            .sum()
    }

    /// Number of entries whose matching covers `v`.
    pub fn matched_count(&self, g: &WeightedGraph, v: usize) -> usize {
        self.entries
            .iter()
            .filter(|en| en.matching.edges().iter().any(|&e| g.edge(e).touches(v)))
            .count()
    }
}

/// A walk through the base graph whose elements name both a profile entry
/// and an edge: element `(s, e)` toggles edge `e` in entry `s`'s matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiWalk {
    pub elements: Vec<(usize, usize)>,
}

impl MultiWalk {
    pub fn new(elements: Vec<(usize, usize)>) -> Self {
        MultiWalk { elements }
    }

    pub fn empty() -> Self {
        MultiWalk { elements: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn reversed(&self) -> MultiWalk {
        let mut elements = self.elements.clone();
        elements.reverse();
        MultiWalk { elements }
    }

    /// A walk and its reverse apply identically; the canonical key is the
    /// lexicographically smaller of the two element lists.
    pub fn canonical_key(&self) -> Vec<(usize, usize)> {
        let fwd = self.elements.clone();
        let mut rev = self.elements.clone();
        rev.reverse();
        fwd.min(rev)
    }

    /// Sorted distinct vertices touched by the walk's edges.
    pub fn touched_vertices(&self, g: &WeightedGraph) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .elements
            .iter()
            .flat_map(|&(_, e)| [g.edge(e).u, g.edge(e).v])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

/// Structural validity: elements pairwise distinct, each edge inside its
/// entry's subgraph, and the projected edge sequence threadable as a walk.
pub fn is_valid_multiwalk(w: &MultiWalk, prof: &Profile, g: &WeightedGraph) -> bool {
    let mut seen = std::collections::HashSet::new();
    for &(s, e) in &w.elements {
        if s >= prof.alpha() || e >= g.m() {
            return false;
        }
        if !prof.entries[s].subgraph.contains(e) {
            return false;
        }
        if !seen.insert((s, e)) {
            return false;
        }
    }
    let edges: Vec<usize> = w.elements.iter().map(|&(_, e)| e).collect();
    threads_as_walk(g, &edges)
}

/// Whether consecutive edges can be threaded through shared vertices.
pub fn threads_as_walk(g: &WeightedGraph, edges: &[usize]) -> bool {
    if edges.len() <= 1 {
        return true;
    }
    let first = g.edge(edges[0]);
    let mut currents = vec![first.u, first.v];
    for &e in &edges[1..] {
        let ed = g.edge(e);
        let mut next: Vec<usize> = currents
            .iter()
            .filter(|&&c| ed.touches(c))
            .map(|&c| ed.other(c))
            .collect();
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            return false;
        }
        currents = next;
    }
    true
}

/// All vertex sequences `v_0, ..., v_k` consistent with the walk's edges.
/// Small walks only; each step can branch at most twofold.
pub fn vertex_sequences(g: &WeightedGraph, edges: &[usize]) -> Vec<Vec<usize>> {
    if edges.is_empty() {
        return Vec::new();
    }
    let first = g.edge(edges[0]);
    let mut seqs: Vec<Vec<usize>> = vec![
        vec![first.u, first.v],
        vec![first.v, first.u],
    ];
    for &e in &edges[1..] {
        let ed = g.edge(e);
        let mut next = Vec::new();
        for seq in seqs {
            let cur = *seq.last().unwrap();
            if ed.touches(cur) {
                let mut ext = seq;
                ext.push(ed.other(cur));
                next.push(ext);
            }
        }
        seqs = next;
    }
    seqs.sort_unstable();
    seqs.dedup();
    seqs
}

fn per_entry_toggles(w: &MultiWalk, alpha: usize) -> Vec<Vec<usize>> {
    let mut toggles = vec![Vec::new(); alpha];
    for &(s, e) in &w.elements {
        toggles[s].push(e);
    }
    toggles
}

/// Matching edge lists after toggling, or `None` if some entry stops being
/// a matching.
fn toggled_matchings(
    w: &MultiWalk,
    prof: &Profile,
    g: &WeightedGraph,
) -> Option<Vec<Vec<usize>>> {
    let toggles = per_entry_toggles(w, prof.alpha());
    let mut out = Vec::with_capacity(prof.alpha());
    for (entry, tog) in prof.entries.iter().zip(&toggles) {
        let mut edges: Vec<usize> = entry.matching.edges().to_vec();
        for &e in tog {
            match edges.iter().position(|&x| x == e) {
                Some(pos) => {
                    edges.swap_remove(pos);
                }
                None => edges.push(e),
            }
        }
        let mut used = std::collections::HashSet::new();
        for &e in &edges {
            let ed = g.edge(e);
            if !used.insert(ed.u) || !used.insert(ed.v) {
                return None;
            }
        }
        edges.sort_unstable();
        out.push(edges);
    }
    Some(out)
}

/// `true` iff consecutive membership indicators alternate and applying the
/// walk leaves every entry with a valid matching. The empty walk passes.
///
/// Assumes `w` is structurally valid (see [`is_valid_multiwalk`]).
pub fn is_alternating(w: &MultiWalk, prof: &Profile, g: &WeightedGraph) -> bool {
    let ind: Vec<bool> = w
        .elements
        .iter()
        .map(|&(s, e)| prof.entries[s].matching.contains(e))
        .collect();
    if ind.windows(2).any(|p| p[0] == p[1]) {
        return false;
    }
    toggled_matchings(w, prof, g).is_some()
}

/// Matched and unmatched incidence counts of `v` along the walk:
/// `d` counts elements `(s, e)` with `v ∈ e` and `e ∈ M_s`, `d_bar` the rest.
pub fn walk_degrees(
    w: &MultiWalk,
    prof: &Profile,
    g: &WeightedGraph,
    v: usize,
) -> (usize, usize) {
    let mut d = 0;
    let mut d_bar = 0;
    for &(s, e) in &w.elements {
        if g.edge(e).touches(v) {
            if prof.entries[s].matching.contains(e) {
                d += 1;
            } else {
                d_bar += 1;
            }
        }
    }
    (d, d_bar)
}

/// Alternating, and no saturated vertex gains matched incidences:
/// every saturated `v` must satisfy `d >= d_bar` along the walk.
pub fn is_applicable(
    w: &MultiWalk,
    prof: &Profile,
    g: &WeightedGraph,
    saturated: &[bool],
) -> bool {
    if !is_alternating(w, prof, g) {
        return false;
    }
    w.touched_vertices(g).into_iter().all(|v| {
        if saturated[v] {
            let (d, d_bar) = walk_degrees(w, prof, g, v);
            d >= d_bar
        } else {
            true
        }
    })
}

/// Exact gain: toggled-on edges add their weight, toggled-off edges
/// subtract it.
pub fn gain(w: &MultiWalk, prof: &Profile, g: &WeightedGraph) -> Ratio {
    let mut total = ratio_int(0);
    for &(s, e) in &w.elements {
        if prof.entries[s].matching.contains(e) {
            total -= g.weight(e);
        } else {
            total += g.weight(e);
        }
    }
    total
}

/// Applies an alternating walk, returning the new profile. Subgraphs are
/// untouched; matchings are toggled. The total weight moves by exactly
/// [`gain`].
pub fn apply_walk(prof: &Profile, w: &MultiWalk, g: &WeightedGraph) -> Result<Profile> {
    if !is_alternating(w, prof, g) {
        return Err(Error::InvalidWalk {
            reason: "walk is not alternating on this profile".to_string(),
        });
    }
    let matchings = toggled_matchings(w, prof, g).expect("validated by is_alternating");
    let mut entries = Vec::with_capacity(prof.alpha());
    for (entry, edges) in prof.entries.iter().zip(matchings) {
        entries.push(ProfileEntry {
            subgraph: entry.subgraph.clone(),
            matching: Matching::new(g, edges)?,
        });
    }
    let out = Profile { entries };
    debug_assert_eq!(
        out.total_weight() - prof.total_weight(),
        gain(w, prof, g),
        "weight delta must equal the walk gain"
    );
    Ok(out)
}
