//! Graph model, realization sampling, and matchings.
//!
//! A [`WeightedGraph`] is an immutable simple graph with indexed edges and
//! exact rational weights. Subsets of edges are [`EdgeSet`] bitsets; a
//! [`Realization`] is an edge subset drawn by keeping each edge independently
//! with probability `p`. Weight comparisons inside solvers use per-graph
//! scaled integer weights (a common denominator fixed at construction), so
//! every tie-break is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use crate::error::Error;
use crate::rng::RngStream;
use crate::weight::{ratio_int, Ratio};
use crate::Result;

/// Dense, ordered set of edge indices over a fixed universe `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    universe: usize,
    words: Vec<u64>,
}

impl EdgeSet {
    /// Empty set over `0..universe`.
    pub fn new(universe: usize) -> Self {
        EdgeSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    /// Set containing the given indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut s = EdgeSet::new(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Full set `0..universe`.
    pub fn full(universe: usize) -> Self {
        EdgeSet::from_indices(universe, 0..universe)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.universe);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    fn check_same_universe(&self, other: &EdgeSet) {
        assert_eq!(
            self.universe, other.universe,
            "edge sets over different universes"
        );
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        self.check_same_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        self.check_same_universe(other);
        EdgeSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        self.check_same_universe(other);
        EdgeSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.check_same_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset_of(&self, other: &EdgeSet) -> bool {
        self.check_same_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Members as a sorted vector.
    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// One edge of a [`WeightedGraph`].
#[derive(Debug, Clone)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Ratio,
}

impl Edge {
    /// The endpoint that is not `x`.
    pub fn other(&self, x: usize) -> usize {
        debug_assert!(x == self.u || x == self.v);
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// Immutable simple graph with exact rational edge weights.
///
/// Edge indices are stable: edge `i` is always the `i`-th entry of the
/// constructor list. Weights are nonnegative; a per-graph common denominator
/// gives every edge an exact scaled integer weight for solver arithmetic.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    scaled: Vec<i64>,
    scale: BigInt,
}

/// Largest common denominator accepted for a graph's weights.
const MAX_WEIGHT_SCALE: u64 = 1 << 32;

impl WeightedGraph {
    /// Builds and validates a graph. Rejects self-loops, duplicate unordered
    /// pairs, out-of-range endpoints, and negative weights.
    pub fn new(n: usize, edge_list: Vec<(usize, usize, Ratio)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut adjacency = vec![Vec::new(); n];
        for (idx, (u, v, w)) in edge_list.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge {idx} endpoint out of range: ({u}, {v}) with n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("edge {idx} is a self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::invalid(format!(
                    "duplicate edge {idx}: ({u}, {v}) already present"
                )));
            }
            if w.is_negative() {
                return Err(Error::invalid(format!("edge {idx} has negative weight")));
            }
            adjacency[u].push(idx);
            adjacency[v].push(idx);
            edges.push(Edge { u, v, w });
        }

        let mut scale = BigInt::from(1);
        for e in &edges {
            scale = scale.lcm(e.w.denom());
        }
        if scale > BigInt::from(MAX_WEIGHT_SCALE) {
            return Err(Error::invalid(format!(
                "weight denominators too fine: common denominator {scale} exceeds {MAX_WEIGHT_SCALE}"
            )));
        }
        let mut scaled = Vec::with_capacity(edges.len());
        let mut total = BigInt::from(0);
        for e in &edges {
            let s = (&e.w * &scale).to_integer();
            total += &s;
            scaled.push(s.to_i64().ok_or_else(|| {
                Error::invalid("scaled edge weight exceeds 64-bit solver range")
            })?);
        }
        if total > BigInt::from(i64::MAX / 4) {
            return Err(Error::invalid(
                "total scaled weight exceeds 64-bit solver range",
            ));
        }

        Ok(WeightedGraph {
            n,
            edges,
            adjacency,
            scaled,
            scale,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, e: usize) -> &Ratio {
        &self.edges[e].w
    }

    /// Integer weight `w_e * scale()`, exact.
    pub fn scaled_weight(&self, e: usize) -> i64 {
        self.scaled[e]
    }

    /// The common denominator used for scaled weights.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// Incident edge indices of `v`.
    pub fn adjacency(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Empty edge set over this graph's edges.
    pub fn empty_edge_set(&self) -> EdgeSet {
        EdgeSet::new(self.m())
    }

    /// All edges of this graph as a set.
    pub fn full_edge_set(&self) -> EdgeSet {
        EdgeSet::full(self.m())
    }

    /// Degree of `v` counting only edges in `within`.
    pub fn degree_in(&self, v: usize, within: &EdgeSet) -> usize {
        self.adjacency[v]
            .iter()
            .filter(|&&e| within.contains(e))
            .count()
    }

    /// Maximum degree over all vertices counting only edges in `within`.
    pub fn max_degree_in(&self, within: &EdgeSet) -> usize {
        (0..self.n)
            .map(|v| self.degree_in(v, within))
            .max()
            .unwrap_or(0)
    }

    /// Sorted vertices incident to at least one edge of `within`.
    pub fn touched_vertices(&self, within: &EdgeSet) -> Vec<usize> {
        let mut mark = vec![false; self.n];
        for e in within.iter() {
            mark[self.edges[e].u] = true;
            mark[self.edges[e].v] = true;
        }
        (0..self.n).filter(|&v| mark[v]).collect()
    }

    /// Exact sum of weights over an edge set.
    pub fn weight_of_set(&self, set: &EdgeSet) -> Ratio {
        set.iter().map(|e| self.edges[e].w.clone()).sum()
    }

    /// Unweighted hop distances from `src`, walking only edges in `within`.
    /// `None` means unreachable.
    pub fn hop_distances(&self, within: &EdgeSet, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &e in &self.adjacency[v] {
                if !within.contains(e) {
                    continue;
                }
                let u = self.edges[e].other(v);
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Serializes to the text format parsed by [`WeightedGraph::parse`].
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.m());
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, crate::weight::ratio_str(&e.w));
        }
        out
    }

    /// Parses the text graph format: first line `n m`, then `m` lines
    /// `u v w` with 0-based vertex ids and decimal (or `num/den`) weights.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::invalid("empty graph file"))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::invalid("bad header: expected `n m`"))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::invalid("bad header: expected `n m`"))?;
        if it.next().is_some() {
            return Err(Error::invalid("bad header: trailing tokens"));
        }
        let mut edge_list = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            if i >= m {
                return Err(Error::invalid(format!("more than {m} edge lines")));
            }
            let mut t = line.split_whitespace();
            let (u, v, w) = match (t.next(), t.next(), t.next(), t.next()) {
                (Some(u), Some(v), Some(w), None) => (u, v, w),
                _ => {
                    return Err(Error::invalid(format!(
                        "edge line {i}: expected `u v w`, got {line:?}"
                    )))
                }
            };
            let u: usize = u
                .parse()
                .map_err(|_| Error::invalid(format!("edge line {i}: bad vertex {u:?}")))?;
            let v: usize = v
                .parse()
                .map_err(|_| Error::invalid(format!("edge line {i}: bad vertex {v:?}")))?;
            let w = crate::weight::parse_ratio(w)?;
            edge_list.push((u, v, w));
        }
        if edge_list.len() != m {
            return Err(Error::invalid(format!(
                "expected {m} edges, found {}",
                edge_list.len()
            )));
        }
        WeightedGraph::new(n, edge_list)
    }

    /// Reads a graph file from disk.
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse(&text)
    }
}

/// A sampled subgraph: each edge kept independently with probability `p`.
#[derive(Debug, Clone)]
pub struct Realization {
    pub realized: EdgeSet,
    /// Stream id that produced this realization (provenance for reports).
    pub seed: u64,
}

/// Draws a realization of the whole graph.
pub fn sample_realization(g: &WeightedGraph, p: &Ratio, stream: &RngStream) -> Realization {
    sample_realization_within(g, &g.full_edge_set(), p, stream)
}

/// Draws a realization restricted to `within`: each edge of `within` is kept
/// independently with probability `p`; edges outside never appear.
///
/// The Bernoulli draw is exact: with `p = num/den`, an integer below `den`
/// is drawn uniformly and compared against `num`.
pub fn sample_realization_within(
    g: &WeightedGraph,
    within: &EdgeSet,
    p: &Ratio,
    stream: &RngStream,
) -> Realization {
    assert!(
        crate::weight::is_probability(p),
        "p must lie in [0, 1], got {p}"
    );
    let num = p.numer().to_u64().expect("probability numerator fits u64");
    let den = p.denom().to_u64().expect("probability denominator fits u64");
    let mut realized = EdgeSet::new(g.m());
    if num == 0 {
        return Realization {
            realized,
            seed: stream.id(),
        };
    }
    let mut rng = stream.rng();
    for e in within.iter() {
        if num == den || rng.gen_range(0..den) < num {
            realized.insert(e);
        }
    }
    Realization {
        realized,
        seed: stream.id(),
    }
}

/// A vertex-disjoint edge set with its exact total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<usize>,
    weight: Ratio,
}

impl Matching {
    /// The empty matching.
    pub fn empty() -> Self {
        Matching {
            edges: Vec::new(),
            weight: ratio_int(0),
        }
    }

    /// Builds a matching from edge indices, validating vertex-disjointness.
    pub fn new(g: &WeightedGraph, mut edges: Vec<usize>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let mut used = std::collections::HashSet::new();
        let mut weight = ratio_int(0);
        for &e in &edges {
            if e >= g.m() {
                return Err(Error::invalid(format!("matching edge {e} out of range")));
            }
            let ed = g.edge(e);
            if !used.insert(ed.u) || !used.insert(ed.v) {
                return Err(Error::invalid(format!(
                    "edges share a vertex: {e} conflicts at ({}, {})",
                    ed.u, ed.v
                )));
            }
            weight += &ed.w;
        }
        Ok(Matching { edges, weight })
    }

    /// Sorted member edge indices.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn weight(&self) -> &Ratio {
        &self.weight
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Per-vertex coverage flags.
    pub fn covered_vertices(&self, g: &WeightedGraph) -> Vec<bool> {
        let mut cov = vec![false; g.n()];
        for &e in &self.edges {
            cov[g.edge(e).u] = true;
            cov[g.edge(e).v] = true;
        }
        cov
    }

    /// Member edges as an [`EdgeSet`].
    pub fn to_edge_set(&self, g: &WeightedGraph) -> EdgeSet {
        EdgeSet::from_indices(g.m(), self.edges.iter().copied())
    }
}

/// Deterministic graph generators for experiments and tests.
pub mod gen {
    use super::*;
    use crate::rng::streams;
    use crate::weight::ratio;

    /// Uniform weight in `[w_min, w_max]` with `decimals` decimal places.
    fn random_weight(
        rng: &mut rand_chacha::ChaCha8Rng,
        w_min: i64,
        w_max: i64,
        decimals: u32,
    ) -> Ratio {
        let scale = 10i64.pow(decimals);
        ratio(rng.gen_range(w_min * scale..=w_max * scale), scale)
    }

    /// Erdős–Rényi G(n, m): `m` distinct unordered pairs chosen uniformly,
    /// weights uniform in `[w_min, w_max]` at the given decimal granularity.
    pub fn erdos_renyi(
        n: usize,
        m: usize,
        w_min: i64,
        w_max: i64,
        decimals: u32,
        stream: &RngStream,
    ) -> Result<WeightedGraph> {
        let max_m = n * n.saturating_sub(1) / 2;
        if m > max_m {
            return Err(Error::invalid(format!(
                "requested {m} edges but K_{n} has only {max_m}"
            )));
        }
        let mut rng = stream.derive(streams::GRAPH_GEN).rng();
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        // Partial Fisher-Yates: the first m entries are a uniform sample.
        for i in 0..m {
            let j = rng.gen_range(i..pairs.len());
            pairs.swap(i, j);
        }
        let edges = pairs[..m]
            .iter()
            .map(|&(u, v)| (u, v, random_weight(&mut rng, w_min, w_max, decimals)))
            .collect();
        WeightedGraph::new(n, edges)
    }

    /// Path on `n` vertices with random weights.
    pub fn path(
        n: usize,
        w_min: i64,
        w_max: i64,
        decimals: u32,
        stream: &RngStream,
    ) -> Result<WeightedGraph> {
        let mut rng = stream.derive(streams::GRAPH_GEN).rng();
        let edges = (0..n.saturating_sub(1))
            .map(|u| (u, u + 1, random_weight(&mut rng, w_min, w_max, decimals)))
            .collect();
        WeightedGraph::new(n, edges)
    }

    /// Cycle on `n >= 3` vertices with random weights.
    pub fn cycle(
        n: usize,
        w_min: i64,
        w_max: i64,
        decimals: u32,
        stream: &RngStream,
    ) -> Result<WeightedGraph> {
        if n < 3 {
            return Err(Error::invalid("cycle needs n >= 3"));
        }
        let mut rng = stream.derive(streams::GRAPH_GEN).rng();
        let edges = (0..n)
            .map(|u| (u, (u + 1) % n, random_weight(&mut rng, w_min, w_max, decimals)))
            .collect();
        WeightedGraph::new(n, edges)
    }

    /// Complete graph on `n` vertices with random weights.
    pub fn clique(
        n: usize,
        w_min: i64,
        w_max: i64,
        decimals: u32,
        stream: &RngStream,
    ) -> Result<WeightedGraph> {
        let mut rng = stream.derive(streams::GRAPH_GEN).rng();
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| (u, v, random_weight(&mut rng, w_min, w_max, decimals)))
            .collect();
        WeightedGraph::new(n, edges)
    }

    /// `count` disjoint paths, each on `len` vertices: a multi-component
    /// graph for independence experiments.
    pub fn disjoint_paths(
        count: usize,
        len: usize,
        w_min: i64,
        w_max: i64,
        decimals: u32,
        stream: &RngStream,
    ) -> Result<WeightedGraph> {
        if len < 2 {
            return Err(Error::invalid("disjoint paths need len >= 2"));
        }
        let mut rng = stream.derive(streams::GRAPH_GEN).rng();
        let mut edges = Vec::new();
        for c in 0..count {
            let base = c * len;
            for off in 0..len - 1 {
                let w = random_weight(&mut rng, w_min, w_max, decimals);
                edges.push((base + off, base + off + 1, w));
            }
        }
        WeightedGraph::new(count * len, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{parse_ratio, ratio};

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(
            3,
            vec![
                (0, 1, ratio_int(4)),
                (1, 2, ratio_int(5)),
                (0, 2, ratio_int(6)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn edge_set_basics() {
        let mut s = EdgeSet::new(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.len(), 3);
        assert!(s.contains(64));
        assert!(!s.contains(63));
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        s.remove(64);
        assert_eq!(s.to_vec(), vec![0, 129]);
        let t = EdgeSet::from_indices(130, [0, 1]);
        assert_eq!(s.union(&t).to_vec(), vec![0, 1, 129]);
        assert_eq!(s.intersection(&t).to_vec(), vec![0]);
        assert_eq!(s.difference(&t).to_vec(), vec![129]);
        assert!(EdgeSet::new(130).is_empty());
        assert!(t.is_subset_of(&EdgeSet::full(130)));
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(WeightedGraph::new(2, vec![(0, 0, ratio_int(1))]).is_err());
        assert!(WeightedGraph::new(2, vec![(0, 2, ratio_int(1))]).is_err());
        assert!(WeightedGraph::new(
            2,
            vec![(0, 1, ratio_int(1)), (1, 0, ratio_int(2))],
        )
        .is_err());
        assert!(WeightedGraph::new(2, vec![(0, 1, ratio_int(-1))]).is_err());
    }

    #[test]
    fn adjacency_round_trip() {
        let g = triangle();
        for v in 0..3 {
            for &e in g.adjacency(v) {
                assert!(g.edge(e).touches(v));
            }
        }
        for (i, e) in g.edges().iter().enumerate() {
            assert!(g.adjacency(e.u).contains(&i));
            assert!(g.adjacency(e.v).contains(&i));
        }
    }

    #[test]
    fn scaled_weights_exact() {
        let g = WeightedGraph::new(
            2,
            vec![(0, 1, parse_ratio("3.25").unwrap())],
        )
        .unwrap();
        assert_eq!(g.scale(), &BigInt::from(4));
        assert_eq!(g.scaled_weight(0), 13);
    }

    #[test]
    fn parse_round_trip() {
        let g = triangle();
        let text = g.to_text();
        let h = WeightedGraph::parse(&text).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.m(), 3);
        assert_eq!(h.weight(2), &ratio_int(6));
        assert_eq!(h.to_text(), text);
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(WeightedGraph::parse("").is_err());
        assert!(WeightedGraph::parse("2").is_err());
        assert!(WeightedGraph::parse("2 1\n0 1").is_err());
        assert!(WeightedGraph::parse("2 2\n0 1 1").is_err());
        assert!(WeightedGraph::parse("2 1\n0 1 1\n1 0 2").is_err());
    }

    #[test]
    fn realization_extremes() {
        let g = triangle();
        let s = RngStream::from_root(5);
        assert_eq!(
            sample_realization(&g, &ratio_int(1), &s).realized.len(),
            3
        );
        assert!(sample_realization(&g, &ratio_int(0), &s)
            .realized
            .is_empty());
    }

    #[test]
    fn realization_reproducible_and_frequency() {
        let g = WeightedGraph::new(2, vec![(0, 1, ratio_int(10))]).unwrap();
        let p = ratio(1, 2);
        let s = RngStream::from_root(99);
        let a = sample_realization(&g, &p, &s);
        let b = sample_realization(&g, &p, &s);
        assert_eq!(a.realized, b.realized);

        let mut hits = 0u32;
        let trials = 10_000;
        for k in 0..trials {
            let sk = RngStream::from_root(1234).derive_idx(crate::rng::streams::REALIZATION, k);
            if sample_realization(&g, &p, &sk).realized.contains(0) {
                hits += 1;
            }
        }
        let freq = f64::from(hits) / f64::from(trials as u32);
        assert!((freq - 0.5).abs() <= 0.02, "frequency {freq}");
    }

    #[test]
    fn matching_validation() {
        let g = triangle();
        assert!(Matching::new(&g, vec![0, 1]).is_err());
        let m = Matching::new(&g, vec![2]).unwrap();
        assert_eq!(m.weight(), &ratio_int(6));
        assert!(m.contains(2));
        assert_eq!(m.covered_vertices(&g), vec![true, false, true]);
    }

    #[test]
    fn hop_distance_within_subset() {
        let g = WeightedGraph::new(
            4,
            vec![
                (0, 1, ratio_int(1)),
                (1, 2, ratio_int(1)),
                (2, 3, ratio_int(1)),
            ],
        )
        .unwrap();
        let within = EdgeSet::from_indices(3, [0, 2]);
        let d = g.hop_distances(&within, 0);
        assert_eq!(d[1], Some(1));
        assert_eq!(d[2], None);
        assert_eq!(d[3], None);
    }

    #[test]
    fn generators_deterministic() {
        let s = RngStream::from_root(7);
        let a = gen::erdos_renyi(10, 15, 1, 10, 2, &s).unwrap();
        let b = gen::erdos_renyi(10, 15, 1, 10, 2, &s).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.m(), 15);

        let p = gen::disjoint_paths(2, 5, 1, 10, 2, &s).unwrap();
        assert_eq!(p.n(), 10);
        assert_eq!(p.m(), 8);
        assert_eq!(p.hop_distances(&p.full_edge_set(), 0)[5], None);
    }
}
