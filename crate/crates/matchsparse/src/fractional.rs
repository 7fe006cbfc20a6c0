//! Certificate fractional matchings over the sparsifier's output.
//!
//! The pipeline turns the sampler's round matchings into a fractional
//! matching on the realized sparsifier in four steps: `f` records matching
//! frequencies on non-crucial edges, `g` truncates values that deviate too
//! far, `h` rescales onto the realization conditioned on the crucial
//! matching `Z`, and `x` caps vertex loads and pins `Z` edges to one.
//! [`check_fractional`] then verifies the fractional-matching and blossom
//! constraints exactly.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{Matching, Realization, WeightedGraph};
use crate::rng::{streams, RngStream};
use crate::sparsifier::{
    compare_to_threshold, EdgeStats, Partition, SamplingOutput, SparsifierConfig,
};
use crate::vimatch::{ExtensionReference, RunStats, VimatchParams, VimatchRunner};
use crate::weight::{ratio_f64, ratio_int, ratio_str, Ratio};
use crate::Result;

/// Largest odd-set size the blossom check enumerates by default.
pub const DEFAULT_BLOSSOM_CAP: usize = 7;

/// Which pipeline stage an assignment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignmentKind {
    F,
    G,
    H,
    X,
}

/// Edge-indexed nonnegative rational values.
#[derive(Debug, Clone)]
pub struct Assignment {
    pub kind: AssignmentKind,
    values: Vec<Ratio>,
}

impl Assignment {
    pub fn zeros(kind: AssignmentKind, m: usize) -> Self {
        Assignment {
            kind,
            values: vec![Ratio::zero(); m],
        }
    }

    pub fn value(&self, e: usize) -> &Ratio {
        &self.values[e]
    }

    pub fn set(&mut self, e: usize, v: Ratio) {
        assert!(!v.is_negative(), "assignment values must be nonnegative");
        self.values[e] = v;
    }

    /// Edges with a nonzero value, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&e| !self.values[e].is_zero())
            .collect()
    }

    /// Exact vertex load `a_v = Σ_{e ∋ v} a_e`.
    pub fn vertex_load(&self, g: &WeightedGraph, v: usize) -> Ratio {
        g.adjacency(v).iter().map(|&e| self.values[e].clone()).sum()
    }
}

/// Exact weighted value `w(a) = Σ_e a_e · w_e`.
pub fn assignment_weight(a: &Assignment, g: &WeightedGraph) -> Ratio {
    (0..g.m()).map(|e| a.value(e) * g.weight(e)).sum()
}

/// The crucial-edge matching and the per-vertex statistics the rescaling
/// steps divide by.
#[derive(Debug, Clone)]
pub struct ZContext {
    /// Matching on the realized crucial edges, after the per-edge drop.
    pub z: Matching,
    /// Estimated `Pr[v ∈ Z]`, capped at `1 − ε` by construction.
    pub prob_in_z: Vec<Ratio>,
    /// `q̂` mass of crucial edges at each vertex.
    pub q_p: Vec<Ratio>,
    /// Reruns behind the probability estimates.
    pub k_z: usize,
}

fn exact_bernoulli<R: Rng>(rng: &mut R, prob: &Ratio) -> bool {
    use num_traits::ToPrimitive;
    let num = prob
        .numer()
        .to_u64()
        .expect("bernoulli numerator out of range");
    let den = prob
        .denom()
        .to_u64()
        .expect("bernoulli denominator out of range");
    num == den || (num > 0 && rng.gen_range(0..den) < num)
}

/// Builds the crucial-edge matching `Z` and estimates its per-vertex hit
/// probabilities.
///
/// The matcher runs at the configured recursion depth on the realized
/// crucial edges; its reference extends any candidate subgraph with
/// non-crucial edges kept at rate `p`, takes a maximum-weight matching, and
/// intersects back. Each matched edge is then dropped independently with
/// probability `ε`. `prob_in_z` multiplies the pre-drop matched frequency
/// over `k_z` fresh reruns by `1 − ε`; the drop is independent of the rest,
/// so this factorization is exact and keeps every estimate at most `1 − ε`.
///
/// Saturation tables are built once and shared by the actual run and all
/// reruns. The returned [`RunStats`] belong to the run that produced `Z`.
pub fn build_z(
    g: &WeightedGraph,
    partition: &Partition,
    stats: &EdgeStats,
    realization: &Realization,
    params: &VimatchParams,
    p: &Ratio,
    epsilon: &Ratio,
    stream: &RngStream,
) -> Result<(ZContext, RunStats)> {
    let reference = ExtensionReference {
        crucial: partition.p_set.clone(),
        p: p.clone(),
    };
    let runner = VimatchRunner::new(
        g,
        partition.p_set.clone(),
        p.clone(),
        params.clone(),
        &reference,
    )?;
    let depth = params.t;
    let tables = runner.build_tables(depth, &stream.derive(streams::TABLES))?;

    let realized_crucial = Realization {
        realized: realization.realized.intersection(&partition.p_set),
        seed: realization.seed,
    };
    let (pre_drop, run_stats) = runner.find_matching(
        depth,
        &realized_crucial,
        &tables,
        &stream.derive_idx(streams::Z_RUN, 0),
    )?;
    let keep_prob = Ratio::one() - epsilon;
    let mut drop_rng = stream.derive(streams::Z_DROP).rng();
    let kept: Vec<usize> = pre_drop
        .edges()
        .iter()
        .copied()
        .filter(|_| exact_bernoulli(&mut drop_rng, &keep_prob))
        .collect();
    let z = Matching::new(g, kept)?;
    debug_assert!(z
        .edges()
        .iter()
        .all(|&e| realized_crucial.realized.contains(e)));

    let mut counts = vec![0u64; g.n()];
    for k in 0..params.k_z {
        let fresh = runner.sample_crucial(&stream.derive_idx(streams::REALIZATION, k as u64));
        let (m_k, _) = runner.find_matching(
            depth,
            &fresh,
            &tables,
            &stream.derive_idx(streams::Z_RUN, k as u64 + 1),
        )?;
        for (v, hit) in m_k.covered_vertices(g).into_iter().enumerate() {
            if hit {
                counts[v] += 1;
            }
        }
    }
    let prob_in_z: Vec<Ratio> = counts
        .iter()
        .map(|&c| &keep_prob * Ratio::new(c.into(), (params.k_z as u64).into()))
        .collect();

    let q_p: Vec<Ratio> = (0..g.n())
        .map(|v| stats.vertex_q_sum(g, v, &partition.p_set))
        .collect();

    Ok((
        ZContext {
            z,
            prob_in_z,
            q_p,
            k_z: params.k_z,
        },
        run_stats,
    ))
}

/// Matching frequency of each non-crucial edge over the sampling rounds.
pub fn compute_f(g: &WeightedGraph, sampling: &SamplingOutput, partition: &Partition) -> Assignment {
    let mut f = Assignment::zeros(AssignmentKind::F, g.m());
    let r = sampling.r_used;
    assert_eq!(r as usize, sampling.rounds.len());
    for e in partition.n_set.iter() {
        let count = sampling.rounds.iter().filter(|m| m.contains(e)).count() as u64;
        if count > 0 {
            f.set(e, Ratio::new(count.into(), r.into()));
        }
    }
    f
}

/// Truncates `f`: an edge keeps its value only if it stays below the
/// deviation cap `p²ε⁷Δ^{−λ}` and both endpoint loads stay below
/// `1 − q̂^P_v + ε³`.
pub fn compute_g(
    g: &WeightedGraph,
    f: &Assignment,
    zctx: &ZContext,
    partition: &Partition,
    cfg: &SparsifierConfig,
) -> Assignment {
    let eps3 = crate::weight::ratio_pow(&cfg.epsilon, 3);
    let vertex_cap: Vec<Ratio> = (0..g.n())
        .map(|v| Ratio::one() - &zctx.q_p[v] + &eps3)
        .collect();
    let mut out = Assignment::zeros(AssignmentKind::G, g.m());
    for e in f.support() {
        let edge = g.edge(e);
        let edge_ok = compare_to_threshold(
            f.value(e),
            &cfg.p,
            &cfg.epsilon,
            7,
            partition.delta,
            partition.lambda,
        ) != std::cmp::Ordering::Greater;
        let ends_ok = f.vertex_load(g, edge.u) <= vertex_cap[edge.u]
            && f.vertex_load(g, edge.v) <= vertex_cap[edge.v];
        if edge_ok && ends_ok {
            out.set(e, f.value(e).clone());
        }
    }
    out
}

/// Rescales `g` onto the realization: supported edges must be realized with
/// both endpoints unmatched by `Z`, and each value is divided by
/// `p · Pr[u ∉ Z] · Pr[v ∉ Z]`.
pub fn compute_h(
    g: &WeightedGraph,
    g_assign: &Assignment,
    zctx: &ZContext,
    realization: &Realization,
    p: &Ratio,
    epsilon: &Ratio,
) -> Result<Assignment> {
    let covered = zctx.z.covered_vertices(g);
    let mut out = Assignment::zeros(AssignmentKind::H, g.m());
    for e in g_assign.support() {
        let edge = g.edge(e);
        if !realization.realized.contains(e) || covered[edge.u] || covered[edge.v] {
            continue;
        }
        let mut denom = p.clone();
        for v in [edge.u, edge.v] {
            let pr_out = Ratio::one() - &zctx.prob_in_z[v];
            if &pr_out < epsilon {
                return Err(Error::DegenerateDenominator { vertex: v });
            }
            denom *= pr_out;
        }
        if denom.is_zero() {
            return Err(Error::invalid(
                "p = 0 while a realized supported edge needs rescaling",
            ));
        }
        out.set(e, g_assign.value(e) / denom);
    }
    Ok(out)
}

/// Final fractional matching: `h/(1+3ε)` on non-crucial edges whose endpoint
/// loads fit under `1+3ε`, one on `Z` edges, zero elsewhere.
pub fn compute_x(
    g: &WeightedGraph,
    h: &Assignment,
    zctx: &ZContext,
    partition: &Partition,
    epsilon: &Ratio,
) -> Assignment {
    let cap = Ratio::one() + ratio_int(3) * epsilon;
    let loads: Vec<Ratio> = (0..g.n()).map(|v| h.vertex_load(g, v)).collect();
    let mut out = Assignment::zeros(AssignmentKind::X, g.m());
    for e in h.support() {
        let edge = g.edge(e);
        if partition.n_set.contains(e) && loads[edge.u] <= cap && loads[edge.v] <= cap {
            out.set(e, h.value(e) / &cap);
        }
    }
    for &e in zctx.z.edges() {
        debug_assert!(partition.p_set.contains(e));
        out.set(e, Ratio::one());
    }
    out
}

/// Outcome of the exact constraint check, with witnesses for every failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalReport {
    /// Vertices whose load exceeds one, with the load.
    pub vertex_load_violations: Vec<(usize, String)>,
    /// Edges carrying a negative value.
    pub negative_values: Vec<usize>,
    /// Supported edges outside the realized sparsifier.
    pub support_violations: Vec<usize>,
    /// Odd sets breaking `x(U) ≤ (|U|−1)/2`, with `x(U)`.
    pub blossom_violations: Vec<(Vec<usize>, String)>,
    /// Size limit the enumeration actually used.
    pub blossom_limit: usize,
}

impl FractionalReport {
    pub fn pass(&self) -> bool {
        self.vertex_load_violations.is_empty()
            && self.negative_values.is_empty()
            && self.support_violations.is_empty()
            && self.blossom_violations.is_empty()
    }
}

/// Verifies vertex loads, nonnegativity, support containment, and the
/// blossom inequalities for odd sets up to `min(⌈1/ε⌉, blossom_cap)`.
pub fn check_fractional(
    x: &Assignment,
    g: &WeightedGraph,
    q: &crate::graph::EdgeSet,
    realization: &Realization,
    epsilon: &Ratio,
    blossom_cap: usize,
) -> FractionalReport {
    let inv_eps = crate::weight::ceil_inverse(epsilon) as usize;
    check_fractional_with_limit(x, g, q, realization, inv_eps.min(blossom_cap))
}

/// Same checks with the odd-set size limit given directly.
pub fn check_fractional_with_limit(
    x: &Assignment,
    g: &WeightedGraph,
    q: &crate::graph::EdgeSet,
    realization: &Realization,
    limit: usize,
) -> FractionalReport {
    let mut report = FractionalReport {
        vertex_load_violations: Vec::new(),
        negative_values: Vec::new(),
        support_violations: Vec::new(),
        blossom_violations: Vec::new(),
        blossom_limit: 0,
    };
    let one = Ratio::one();
    for v in 0..g.n() {
        let load = x.vertex_load(g, v);
        if load > one {
            report.vertex_load_violations.push((v, ratio_str(&load)));
        }
    }
    for e in 0..g.m() {
        if x.value(e).is_negative() {
            report.negative_values.push(e);
        }
    }
    let support = x.support();
    for &e in &support {
        if !(q.contains(e) && realization.realized.contains(e)) {
            report.support_violations.push(e);
        }
    }

    report.blossom_limit = limit;
    // A violating odd set cannot contain a zero-load vertex: stripping one
    // keeps x(U) while shrinking the bound only via parity, and x(U) is
    // already at most half the positive-load count. So enumerating
    // positive-load vertices is exhaustive.
    let mut candidates: Vec<usize> = support
        .iter()
        .flat_map(|&e| [g.edge(e).u, g.edge(e).v])
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates.retain(|&v| !x.vertex_load(g, v).is_zero());
    let mut size = 3;
    while size <= limit {
        for subset in candidates.iter().copied().combinations(size) {
            let inside: Ratio = support
                .iter()
                .filter(|&&e| {
                    let ed = g.edge(e);
                    subset.binary_search(&ed.u).is_ok() && subset.binary_search(&ed.v).is_ok()
                })
                .map(|&e| x.value(e).clone())
                .sum();
            let bound = Ratio::new(((size - 1) as u64 / 2).into(), 1.into());
            if inside > bound {
                report
                    .blossom_violations
                    .push((subset.clone(), ratio_str(&inside)));
            }
        }
        size += 2;
    }
    report
}

/// Structured text dump: one row per edge with all four assignment values,
/// then one row per vertex with its `f`, `h`, and `x` loads.
pub fn certificate_text(
    g: &WeightedGraph,
    f: &Assignment,
    g_assign: &Assignment,
    h: &Assignment,
    x: &Assignment,
) -> String {
    let mut out = String::new();
    out.push_str("edge u v w f g h x\n");
    for e in 0..g.m() {
        let ed = g.edge(e);
        out.push_str(&format!(
            "{e} {} {} {} {} {} {} {}\n",
            ed.u,
            ed.v,
            ratio_str(g.weight(e)),
            ratio_str(f.value(e)),
            ratio_str(g_assign.value(e)),
            ratio_str(h.value(e)),
            ratio_str(x.value(e)),
        ));
    }
    out.push_str("vertex f_v h_v x_v\n");
    for v in 0..g.n() {
        out.push_str(&format!(
            "{v} {} {} {}\n",
            ratio_str(&f.vertex_load(g, v)),
            ratio_str(&h.vertex_load(g, v)),
            ratio_str(&x.vertex_load(g, v)),
        ));
    }
    out
}

/// Convenience view of an assignment for reports.
pub fn assignment_summary(a: &Assignment, g: &WeightedGraph) -> (usize, f64) {
    (a.support().len(), ratio_f64(&assignment_weight(a, g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSet;
    use crate::weight::{parse_ratio, ratio};

    fn path3() -> WeightedGraph {
        WeightedGraph::new(
            4,
            vec![
                (0, 1, ratio_int(2)),
                (1, 2, ratio_int(4)),
                (2, 3, ratio_int(3)),
            ],
        )
        .unwrap()
    }

    fn all_n_partition(g: &WeightedGraph) -> Partition {
        Partition {
            p_set: g.empty_edge_set(),
            i_prime: g.empty_edge_set(),
            n_set: g.full_edge_set(),
            delta: 1,
            lambda: 1,
            iterations: 0,
        }
    }

    fn zero_zctx(g: &WeightedGraph) -> ZContext {
        ZContext {
            z: Matching::empty(),
            prob_in_z: vec![Ratio::zero(); g.n()],
            q_p: vec![Ratio::zero(); g.n()],
            k_z: 1,
        }
    }

    #[test]
    fn weight_examples() {
        let g = path3();
        let mut a = Assignment::zeros(AssignmentKind::X, g.m());
        assert!(assignment_weight(&a, &g).is_zero());
        a.set(0, ratio(1, 2));
        a.set(1, ratio(1, 2));
        assert_eq!(assignment_weight(&a, &g), ratio_int(3));
    }

    #[test]
    fn f_counts_round_hits_on_n_edges_only() {
        let g = path3();
        let mut part = all_n_partition(&g);
        part.n_set.remove(2);
        part.p_set.insert(2);
        let rounds = vec![
            Matching::new(&g, vec![0, 2]).unwrap(),
            Matching::new(&g, vec![1]).unwrap(),
            Matching::new(&g, vec![1]).unwrap(),
            Matching::new(&g, vec![0, 2]).unwrap(),
        ];
        let s_set = EdgeSet::from_indices(g.m(), [0, 1, 2]);
        let sampling = SamplingOutput {
            rounds,
            s_set,
            r_used: 4,
            lambda: 1,
        };
        let f = compute_f(&g, &sampling, &part);
        assert_eq!(f.value(0), &ratio(1, 2));
        assert_eq!(f.value(1), &ratio(1, 2));
        assert!(f.value(2).is_zero(), "crucial edges carry no f value");
        for v in 0..g.n() {
            assert!(f.vertex_load(&g, v) <= Ratio::one());
        }
    }

    #[test]
    fn g_truncates_on_edge_cap_and_vertex_cap() {
        let g = path3();
        let part = all_n_partition(&g);
        let cfg = SparsifierConfig::new(ratio(1, 2), ratio(1, 2)).unwrap();
        let mut f = Assignment::zeros(AssignmentKind::F, g.m());
        // Edge cap: p²ε⁷ = (1/4)(1/128) = 1/512 with Δ=1.
        f.set(0, ratio(1, 512));
        f.set(2, ratio(1, 256));
        let zctx = zero_zctx(&g);
        let out = compute_g(&g, &f, &zctx, &part, &cfg);
        assert_eq!(out.value(0), &ratio(1, 512), "at the cap passes through");
        assert!(out.value(2).is_zero(), "above the cap truncates");

        // Vertex cap: with ε=9/10, p=1 the edge cap is ε⁷ ≈ 0.478, but a
        // fully crucial-loaded endpoint only allows ε³ = 0.729 of f-load.
        let loose = SparsifierConfig::new(ratio(9, 10), Ratio::one()).unwrap();
        let mut f2 = Assignment::zeros(AssignmentKind::F, g.m());
        f2.set(0, ratio(2, 5));
        f2.set(1, ratio(2, 5));
        let mut tight = zero_zctx(&g);
        tight.q_p[1] = Ratio::one();
        let out2 = compute_g(&g, &f2, &tight, &part, &loose);
        assert!(out2.value(0).is_zero(), "endpoint 1 over its allowance");
        assert!(out2.value(1).is_zero());
        let out3 = compute_g(&g, &f2, &zero_zctx(&g), &part, &loose);
        assert_eq!(out3.value(0), &ratio(2, 5), "relaxed allowance passes");
    }

    #[test]
    fn h_rescales_realized_uncovered_edges() {
        let g = path3();
        let mut ga = Assignment::zeros(AssignmentKind::G, g.m());
        ga.set(0, parse_ratio("0.1").unwrap());
        ga.set(1, parse_ratio("0.1").unwrap());
        ga.set(2, parse_ratio("0.1").unwrap());
        let mut zctx = zero_zctx(&g);
        for v in 0..g.n() {
            zctx.prob_in_z[v] = ratio(1, 5);
        }
        let realization = Realization {
            realized: EdgeSet::from_indices(g.m(), [0, 2]),
            seed: 0,
        };
        let h = compute_h(
            &g,
            &ga,
            &zctx,
            &realization,
            &ratio(1, 2),
            &ratio(1, 10),
        )
        .unwrap();
        // 0.1 / (0.5 · 0.8 · 0.8) = 0.3125; edge 1 is unrealized.
        assert_eq!(h.value(0), &parse_ratio("0.3125").unwrap());
        assert!(h.value(1).is_zero());
        assert_eq!(h.value(2), &parse_ratio("0.3125").unwrap());

        // A Z edge covers vertices 2 and 3: edge 2 drops out.
        let mut with_z = zctx.clone();
        with_z.z = Matching::new(&g, vec![2]).unwrap();
        let h2 = compute_h(
            &g,
            &ga,
            &with_z,
            &realization,
            &ratio(1, 2),
            &ratio(1, 10),
        )
        .unwrap();
        assert_eq!(h2.value(0), &parse_ratio("0.3125").unwrap());
        assert!(h2.value(2).is_zero(), "covered endpoints block rescaling");
    }

    #[test]
    fn h_degenerates_when_z_probability_estimate_is_too_large() {
        let g = path3();
        let mut ga = Assignment::zeros(AssignmentKind::G, g.m());
        ga.set(0, ratio(1, 10));
        let mut zctx = zero_zctx(&g);
        zctx.prob_in_z[1] = ratio(99, 100);
        let realization = Realization {
            realized: g.full_edge_set(),
            seed: 0,
        };
        let err = compute_h(&g, &ga, &zctx, &realization, &ratio(1, 2), &ratio(1, 10))
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateDenominator { vertex: 1 }));
    }

    #[test]
    fn x_caps_loads_and_pins_z_edges() {
        let g = path3();
        let mut part = all_n_partition(&g);
        part.n_set.remove(2);
        part.p_set.insert(2);
        let mut h = Assignment::zeros(AssignmentKind::H, g.m());
        h.set(0, parse_ratio("0.31").unwrap());
        let mut zctx = zero_zctx(&g);
        zctx.z = Matching::new(&g, vec![2]).unwrap();
        let eps = ratio(1, 10);
        let x = compute_x(&g, &h, &zctx, &part, &eps);
        assert_eq!(x.value(0), &ratio(31, 130));
        assert_eq!(x.value(2), &Ratio::one());

        // An overloaded endpoint zeroes every incident candidate.
        let mut h2 = Assignment::zeros(AssignmentKind::H, g.m());
        h2.set(0, ratio_int(2));
        let x2 = compute_x(&g, &h2, &zctx, &part, &eps);
        assert!(x2.value(0).is_zero());
    }

    #[test]
    fn check_passes_zero_and_flags_violations() {
        let g = path3();
        let realization = Realization {
            realized: g.full_edge_set(),
            seed: 0,
        };
        let q = g.full_edge_set();
        let eps = ratio(3, 10);
        let zero = Assignment::zeros(AssignmentKind::X, g.m());
        assert!(check_fractional(&zero, &g, &q, &realization, &eps, 7).pass());

        // Two unit edges sharing vertex 1: load violation with witness 1.
        let mut bad = Assignment::zeros(AssignmentKind::X, g.m());
        bad.set(0, Ratio::one());
        bad.set(1, Ratio::one());
        let report = check_fractional(&bad, &g, &q, &realization, &eps, 7);
        assert!(!report.pass());
        assert!(report
            .vertex_load_violations
            .iter()
            .any(|(v, _)| *v == 1));

        // Support outside the realization.
        let thin = Realization {
            realized: EdgeSet::from_indices(g.m(), [1, 2]),
            seed: 0,
        };
        let mut stray = Assignment::zeros(AssignmentKind::X, g.m());
        stray.set(0, ratio(1, 2));
        let report = check_fractional(&stray, &g, &q, &thin, &eps, 7);
        assert_eq!(report.support_violations, vec![0]);
    }

    #[test]
    fn blossom_violation_on_a_triangle() {
        let g = WeightedGraph::new(
            3,
            vec![
                (0, 1, ratio_int(1)),
                (1, 2, ratio_int(1)),
                (0, 2, ratio_int(1)),
            ],
        )
        .unwrap();
        let realization = Realization {
            realized: g.full_edge_set(),
            seed: 0,
        };
        let mut x = Assignment::zeros(AssignmentKind::X, g.m());
        for e in 0..3 {
            x.set(e, parse_ratio("0.4").unwrap());
        }
        let report = check_fractional(&x, &g, &g.full_edge_set(), &realization, &ratio(3, 10), 7);
        assert_eq!(report.blossom_violations.len(), 1);
        let (u, total) = &report.blossom_violations[0];
        assert_eq!(u, &vec![0, 1, 2]);
        assert_eq!(parse_ratio(total).unwrap(), parse_ratio("1.2").unwrap());
        // Vertex loads 0.8 each stay legal; only the odd-set bound trips.
        assert!(report.vertex_load_violations.is_empty());
    }

    #[test]
    fn empty_crucial_set_gives_empty_z() {
        let g = path3();
        let part = all_n_partition(&g);
        let stream = RngStream::from_root(11);
        let stats = crate::sparsifier::estimate_edge_stats(
            &g,
            &ratio(1, 2),
            50,
            &stream.derive(streams::Q_STATS),
        )
        .unwrap();
        let realization = crate::graph::sample_realization(&g, &ratio(1, 2), &stream);
        let params = VimatchParams::desk(ratio(3, 10));
        let (zctx, _) = build_z(
            &g,
            &part,
            &stats,
            &realization,
            &params,
            &ratio(1, 2),
            &ratio(3, 10),
            &stream,
        )
        .unwrap();
        assert!(zctx.z.is_empty());
        assert!(zctx.prob_in_z.iter().all(|p| p.is_zero()));
        assert!(zctx.q_p.iter().all(|q| q.is_zero()));
    }

    #[test]
    fn full_drop_empties_z_and_probabilities() {
        let g = path3();
        let mut part = all_n_partition(&g);
        for e in 0..g.m() {
            part.n_set.remove(e);
            part.p_set.insert(e);
        }
        let stream = RngStream::from_root(5);
        let stats = crate::sparsifier::estimate_edge_stats(
            &g,
            &Ratio::one(),
            50,
            &stream.derive(streams::Q_STATS),
        )
        .unwrap();
        let realization = crate::graph::sample_realization(&g, &Ratio::one(), &stream);
        let params = VimatchParams::desk(ratio(3, 10));
        let (zctx, _) = build_z(
            &g,
            &part,
            &stats,
            &realization,
            &params,
            &Ratio::one(),
            &Ratio::one(),
            &stream,
        )
        .unwrap();
        assert!(zctx.z.is_empty());
        assert!(zctx.prob_in_z.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn single_crucial_edge_probability_tracks_rerun_frequency() {
        let g = WeightedGraph::new(2, vec![(0, 1, ratio_int(5))]).unwrap();
        let mut part = all_n_partition(&g);
        part.n_set.remove(0);
        part.p_set.insert(0);
        let stream = RngStream::from_root(23);
        let stats = crate::sparsifier::estimate_edge_stats(
            &g,
            &Ratio::one(),
            50,
            &stream.derive(streams::Q_STATS),
        )
        .unwrap();
        let realization = crate::graph::sample_realization(&g, &Ratio::one(), &stream);
        let params = VimatchParams::desk(ratio(3, 10));
        let eps = ratio(3, 10);
        let (zctx, _) = build_z(
            &g,
            &part,
            &stats,
            &realization,
            &params,
            &Ratio::one(),
            &eps,
            &stream,
        )
        .unwrap();
        let cap = Ratio::one() - &eps;
        for v in 0..2 {
            assert!(zctx.prob_in_z[v] <= cap);
        }
        // p = 1 and a single edge: the matcher should match it every rerun,
        // so the estimate is exactly (1−ε)·1.
        assert_eq!(zctx.prob_in_z[0], cap);
        assert_eq!(zctx.q_p[0], stats.q_hat(0).clone());
    }
}
