//! Shared builders for the integration suites: proptest graph strategies and
//! seeded random profiles, matchings, and alternating walks.

#![allow(dead_code)]

use matchsparse::graph::{gen, EdgeSet, Matching, WeightedGraph};
use matchsparse::rng::RngStream;
use matchsparse::vimatch::{
    is_alternating, is_applicable, is_valid_multiwalk, vertex_sequences, walk_degrees, MultiWalk,
    Profile, ProfileEntry,
};
use matchsparse::weight::ratio_int;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected-or-not simple graph: `2..=max_n` vertices, a nonempty
/// subsequence of the vertex pairs, integer weights in `[1, 100]`.
pub fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = WeightedGraph> {
    (2usize..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        let hi = pairs.len().min(max_m);
        proptest::sample::subsequence(pairs, 1..=hi)
            .prop_flat_map(|chosen| {
                let k = chosen.len();
                (Just(chosen), proptest::collection::vec(1i64..=100, k))
            })
            .prop_map(move |(chosen, ws)| {
                let edges = chosen
                    .into_iter()
                    .zip(ws)
                    .map(|((u, v), w)| (u, v, ratio_int(w)))
                    .collect();
                WeightedGraph::new(n, edges).expect("strategy emits valid edge lists")
            })
    })
}

/// Keeps each edge independently with the given per-mille probability.
pub fn random_subgraph(g: &WeightedGraph, keep_per_mille: u32, stream: &RngStream) -> EdgeSet {
    let mut rng = stream.rng();
    let mut set = g.empty_edge_set();
    for e in 0..g.m() {
        if rng.gen_range(0..1000) < keep_per_mille {
            set.insert(e);
        }
    }
    set
}

/// Greedy matching over a shuffled edge order, dropping each candidate with
/// probability 1/4 so the result is usually not maximal.
pub fn random_matching(g: &WeightedGraph, within: &EdgeSet, stream: &RngStream) -> Matching {
    let mut rng = stream.rng();
    let mut order: Vec<usize> = within.iter().collect();
    order.shuffle(&mut rng);
    let mut used = vec![false; g.n()];
    let mut edges = Vec::new();
    for e in order {
        let ed = g.edge(e);
        if !used[ed.u] && !used[ed.v] && rng.gen_range(0..4) < 3 {
            used[ed.u] = true;
            used[ed.v] = true;
            edges.push(e);
        }
    }
    Matching::new(g, edges).expect("greedy construction is vertex-disjoint")
}

/// Profile of `alpha` entries with random subgraphs and random matchings.
pub fn random_profile(g: &WeightedGraph, alpha: usize, stream: &RngStream) -> Profile {
    let entries = (0..alpha)
        .map(|i| {
            let sub = stream.derive_idx(0xA1, i as u64);
            let subgraph = random_subgraph(g, 700, &sub);
            let matching = random_matching(g, &subgraph, &stream.derive_idx(0xA2, i as u64));
            ProfileEntry { subgraph, matching }
        })
        .collect();
    Profile { entries }
}

/// Grows an alternating multi-walk by random incident extensions. Returns
/// `None` when the grown walk fails the full alternation check (the
/// indicator sequence alternates by construction; matching validity after
/// application can still fail and is only decidable on the whole walk).
pub fn random_alternating_walk(
    g: &WeightedGraph,
    prof: &Profile,
    target_len: usize,
    stream: &RngStream,
) -> Option<MultiWalk> {
    let mut rng = stream.rng();
    let starts: Vec<(usize, usize)> = (0..prof.alpha())
        .flat_map(|s| {
            let sub = &prof.entries[s].subgraph;
            (0..g.m())
                .filter(|&e| sub.contains(e))
                .map(move |e| (s, e))
        })
        .collect();
    if starts.is_empty() {
        return None;
    }
    let first = starts[rng.gen_range(0..starts.len())];
    let mut elements = vec![first];
    while elements.len() < target_len {
        let walk_now = MultiWalk::new(elements.clone());
        if !is_valid_multiwalk(&walk_now, prof, g) {
            return None;
        }
        let last_matched = {
            let (s, e) = *elements.last().expect("nonempty");
            prof.entries[s].matching.contains(e)
        };
        let mut extensions: Vec<(usize, usize)> = Vec::new();
        for s in 0..prof.alpha() {
            for e in 0..g.m() {
                if !prof.entries[s].subgraph.contains(e) {
                    continue;
                }
                if prof.entries[s].matching.contains(e) == last_matched {
                    continue;
                }
                if elements.contains(&(s, e)) {
                    continue;
                }
                let mut cand = elements.clone();
                cand.push((s, e));
                if is_valid_multiwalk(&MultiWalk::new(cand), prof, g) {
                    extensions.push((s, e));
                }
            }
        }
        if extensions.is_empty() {
            break;
        }
        elements.push(extensions[rng.gen_range(0..extensions.len())]);
    }
    let walk = MultiWalk::new(elements);
    if is_alternating(&walk, prof, g) {
        Some(walk)
    } else {
        None
    }
}

/// Degree algebra every alternating multi-walk obeys, checked against every
/// consistent vertex threading:
///
/// 1. vertices that are not walk terminals have equal matched and unmatched
///    incidence counts;
/// 2. a terminal whose end element is matched has `d >= d_bar` there, and
///    `d <= d_bar` when that element is unmatched;
/// 3. if both end elements are matched, the walk is applicable no matter
///    which vertices are saturated.
///
/// Returns whether the third item's hypothesis held, or a description of the
/// first violated fact.
pub fn check_walk_algebra(
    g: &WeightedGraph,
    prof: &Profile,
    walk: &MultiWalk,
) -> Result<bool, String> {
    let edges: Vec<usize> = walk.elements.iter().map(|&(_, e)| e).collect();
    let threadings = vertex_sequences(g, &edges);
    if threadings.is_empty() {
        return Err("alternating walk does not thread".to_string());
    }
    let matched_at = |pos: usize| {
        let (s, e) = walk.elements[pos];
        prof.entries[s].matching.contains(e)
    };
    let first_matched = matched_at(0);
    let last_matched = matched_at(walk.len() - 1);

    for seq in &threadings {
        let head = seq[0];
        let tail = *seq.last().expect("threading has k+1 vertices");
        for v in walk.touched_vertices(g) {
            let (d, d_bar) = walk_degrees(walk, prof, g, v);
            if v != head && v != tail {
                if d != d_bar {
                    return Err(format!("non-terminal {v}: d={d} d_bar={d_bar}"));
                }
                continue;
            }
            if v == head && ((first_matched && d < d_bar) || (!first_matched && d > d_bar)) {
                return Err(format!(
                    "head {v}: d={d} d_bar={d_bar} first_matched={first_matched}"
                ));
            }
            if v == tail && ((last_matched && d < d_bar) || (!last_matched && d > d_bar)) {
                return Err(format!(
                    "tail {v}: d={d} d_bar={d_bar} last_matched={last_matched}"
                ));
            }
        }
    }

    if first_matched && last_matched {
        let all = vec![true; g.n()];
        if !is_applicable(walk, prof, g, &all) {
            return Err("matched-ended walk not applicable for all-saturated".to_string());
        }
        return Ok(true);
    }
    Ok(false)
}

/// Random graph, profile, saturated flags, and per-entry reference
/// matchings, sized for the disagreement-decomposition contract checks.
pub fn random_oracle_instance(seed: u64) -> (WeightedGraph, Profile, Vec<bool>, Vec<Matching>) {
    let stream = RngStream::from_root(seed);
    let mut rng = stream.derive(0xB0).rng();
    let n = rng.gen_range(4..=9);
    let max_m = n * (n - 1) / 2;
    let m = rng.gen_range(3..=max_m.min(12));
    let g = gen::erdos_renyi(n, m, 1, 10, 1, &stream).expect("sizes fit");
    let alpha = rng.gen_range(2..=3);
    let prof = random_profile(&g, alpha, &stream.derive(0xB1));
    let reference: Vec<Matching> = (0..alpha)
        .map(|i| {
            random_matching(
                &g,
                &prof.entries[i].subgraph,
                &stream.derive_idx(0xB2, i as u64),
            )
        })
        .collect();
    let saturated: Vec<bool> = (0..g.n()).map(|_| rng.gen_range(0..4) == 0).collect();
    (g, prof, saturated, reference)
}
