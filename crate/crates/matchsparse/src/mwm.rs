//! Exact maximum-weight matching with a canonical tie-break.
//!
//! Both solvers return, among all maximum-weight matchings of the active
//! edge subset, the one whose sorted edge-index sequence is
//! lexicographically smallest. That canonical choice makes every Monte
//! Carlo estimate in this crate a deterministic function of the realized
//! edge set, so repeated runs with equal seeds agree bit for bit.
//!
//! [`maximum_weight_matching`] handles up to [`SOLVER_VERTEX_CAP`] touched
//! vertices with a subset dynamic program; [`mwm_bruteforce`] enumerates all
//! subsets of up to [`BRUTEFORCE_EDGE_CAP`] active edges and exists purely
//! as an independent cross-check.

use crate::error::Error;
use crate::graph::{EdgeSet, Matching, WeightedGraph};
use crate::Result;

/// Most touched vertices the subset dynamic program accepts.
pub const SOLVER_VERTEX_CAP: usize = 22;

/// Most active edges the brute-force enumerator accepts.
pub const BRUTEFORCE_EDGE_CAP: usize = 16;

/// Maximum-weight matching of the subgraph spanned by `active`, with the
/// canonical lexicographic tie-break on sorted edge indices.
///
/// Fails with [`Error::CapExceeded`] when the active subgraph touches more
/// than [`SOLVER_VERTEX_CAP`] vertices.
pub fn maximum_weight_matching(g: &WeightedGraph, active: &EdgeSet) -> Result<Matching> {
    let edge_ids: Vec<usize> = active.iter().collect();
    if edge_ids.is_empty() {
        return Ok(Matching::empty());
    }
    let touched = g.touched_vertices(active);
    if touched.len() > SOLVER_VERTEX_CAP {
        return Err(Error::CapExceeded {
            touched: touched.len(),
            cap: SOLVER_VERTEX_CAP,
        });
    }
    let chosen = if edge_ids.iter().any(|&e| g.scaled_weight(e) == 0) {
        // Zero-weight edges break the prefix argument behind the vertex
        // subset tie-break, so fall back to the edge-indexed search.
        zero_aware_canonical(g, &edge_ids, &touched)
    } else {
        vertex_subset_dp(g, &edge_ids, &touched)
    };
    Matching::new(g, chosen)
}

/// Subset DP over touched vertices. Correct tie-breaking relies on all
/// weights being strictly positive: two distinct matchings of equal weight
/// then never relate as prefix and extension, so lexicographic comparison
/// of materialized edge sequences picks the canonical one.
fn vertex_subset_dp(g: &WeightedGraph, edge_ids: &[usize], touched: &[usize]) -> Vec<usize> {
    let k = touched.len();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in touched.iter().enumerate() {
        local[v] = i;
    }
    // incident[i]: (edge id, other local endpoint, scaled weight), ascending ids.
    let mut incident: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); k];
    for &e in edge_ids {
        let ed = g.edge(e);
        let (lu, lv) = (local[ed.u], local[ed.v]);
        let w = g.scaled_weight(e);
        incident[lu].push((e, lv, w));
        incident[lv].push((e, lu, w));
    }

    const SKIP: u32 = u32::MAX;
    let full = 1usize << k;
    let mut best_w = vec![0i64; full];
    let mut choice = vec![SKIP; full];
    // Edge sequence for the matching encoded at `mask`, sorted ascending.
    let reconstruct = |mask: usize, choice: &[u32]| -> Vec<usize> {
        let mut m = mask;
        let mut seq = Vec::new();
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            let c = choice[m];
            if c == SKIP {
                m &= !(1 << v);
            } else {
                let e = c as usize;
                let ed = g.edge(e);
                seq.push(e);
                m &= !(1 << local[ed.u]);
                m &= !(1 << local[ed.v]);
            }
        }
        seq.sort_unstable();
        seq
    };

    for mask in 1..full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut bw = best_w[rest];
        let mut bc = SKIP;
        for &(e, u, w) in &incident[v] {
            if u == v || mask >> u & 1 == 0 {
                continue;
            }
            let cw = w + best_w[rest & !(1 << u)];
            let better = if cw > bw {
                true
            } else if cw == bw {
                let mut cand = reconstruct(rest & !(1 << u), &choice);
                cand.push(e);
                cand.sort_unstable();
                let cur = if bc == SKIP {
                    reconstruct(rest, &choice)
                } else {
                    let ed = g.edge(bc as usize);
                    let sub = rest & !(1 << local[ed.u]) & !(1 << local[ed.v]);
                    let mut c = reconstruct(sub, &choice);
                    c.push(bc as usize);
                    c.sort_unstable();
                    c
                };
                cand < cur
            } else {
                false
            };
            if better {
                bw = cw;
                bc = e as u32;
            }
        }
        best_w[mask] = bw;
        choice[mask] = bc;
    }
    reconstruct(full - 1, &choice)
}

/// Canonical solver tolerating zero-weight edges: memoize the best weight
/// attainable from each (edge position, free-vertex set) state, then greedily
/// take the smallest-index edge that still reaches the optimum. The result
/// stops as soon as the remaining optimum is zero, which is exactly the
/// lexicographic minimum because appending zero-weight edges only produces
/// lexicographically larger sequences.
fn zero_aware_canonical(g: &WeightedGraph, edge_ids: &[usize], touched: &[usize]) -> Vec<usize> {
    let k = touched.len();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in touched.iter().enumerate() {
        local[v] = i;
    }
    let pairs: Vec<(u32, i64)> = edge_ids
        .iter()
        .map(|&e| {
            let ed = g.edge(e);
            (
                (1u32 << local[ed.u]) | (1u32 << local[ed.v]),
                g.scaled_weight(e),
            )
        })
        .collect();

    struct Search<'a> {
        pairs: &'a [(u32, i64)],
        memo: std::collections::HashMap<(usize, u32), i64>,
    }
    impl Search<'_> {
        fn best(&mut self, pos: usize, free: u32) -> i64 {
            if pos == self.pairs.len() {
                return 0;
            }
            if let Some(&v) = self.memo.get(&(pos, free)) {
                return v;
            }
            let mut best = self.best(pos + 1, free);
            let (mask, w) = self.pairs[pos];
            if free & mask == mask {
                best = best.max(w + self.best(pos + 1, free & !mask));
            }
            self.memo.insert((pos, free), best);
            best
        }
    }

    let full = (1u32 << k) - 1;
    let mut search = Search {
        pairs: &pairs,
        memo: std::collections::HashMap::new(),
    };
    let mut target = search.best(0, full);
    let mut free = full;
    let mut pos = 0;
    let mut seq = Vec::new();
    while target > 0 {
        let mut advanced = false;
        for j in pos..pairs.len() {
            let (mask, w) = pairs[j];
            if free & mask == mask && w + search.best(j + 1, free & !mask) == target {
                seq.push(edge_ids[j]);
                free &= !mask;
                target -= w;
                pos = j + 1;
                advanced = true;
                break;
            }
        }
        assert!(advanced, "optimum unreachable during reconstruction");
    }
    seq
}

/// Brute-force cross-check: enumerates every subset of the active edges.
/// Same value and same canonical tie-break as [`maximum_weight_matching`].
///
/// Fails with [`Error::BruteForceCapExceeded`] above
/// [`BRUTEFORCE_EDGE_CAP`] active edges.
pub fn mwm_bruteforce(g: &WeightedGraph, active: &EdgeSet) -> Result<Matching> {
    let edge_ids: Vec<usize> = active.iter().collect();
    let k = edge_ids.len();
    if k > BRUTEFORCE_EDGE_CAP {
        return Err(Error::BruteForceCapExceeded {
            edges: k,
            cap: BRUTEFORCE_EDGE_CAP,
        });
    }
    // conflict[j]: positions sharing a vertex with position j.
    let mut conflict = vec![0u32; k];
    for a in 0..k {
        for b in a + 1..k {
            let (ea, eb) = (g.edge(edge_ids[a]), g.edge(edge_ids[b]));
            if ea.touches(eb.u) || ea.touches(eb.v) {
                conflict[a] |= 1 << b;
                conflict[b] |= 1 << a;
            }
        }
    }
    let mut best_w = 0i64;
    let mut best_seq: Vec<usize> = Vec::new();
    'subset: for mask in 0u32..1 << k {
        let mut w = 0i64;
        let mut rest = mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            if conflict[j] & mask != 0 {
                continue 'subset;
            }
            w += g.scaled_weight(edge_ids[j]);
            rest &= rest - 1;
        }
        let seq: Vec<usize> = (0..k).filter(|&j| mask >> j & 1 == 1).map(|j| edge_ids[j]).collect();
        if w > best_w || (w == best_w && seq < best_seq) {
            best_w = w;
            best_seq = seq;
        }
    }
    Matching::new(g, best_seq)
}
