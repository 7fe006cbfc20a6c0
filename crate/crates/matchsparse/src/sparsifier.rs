//! Non-adaptive matching sparsifier.
//!
//! Given a weighted graph whose edges survive independently with probability
//! `p`, the pipeline picks a bounded-degree subgraph `Q` ahead of time so
//! that the expected maximum-weight matching of `Q` intersected with a
//! random realization stays close to that of the full graph.
//!
//! Stages, in order:
//!
//! 1. [`estimate_edge_stats`]: one shared Monte Carlo pass estimates each
//!    edge's probability of appearing in the canonical maximum-weight
//!    matching of a realization (`q_hat`), together with the expected
//!    matching weight (`opt_hat`). Sharing the pass makes
//!    `sum(q_hat_e * w_e) == opt_hat` an exact identity, not an
//!    approximation.
//! 2. [`greedy_subgraph`]: grows a protected edge set `P` in rounds, each
//!    round pulling in edges that either carry enough estimated matching
//!    mass or sit within a few hops of `P`. Output is a partition of the
//!    edges into `P`, the final rejected candidate set `I'`, and the rest
//!    `N`.
//! 3. [`sampling_subgraph`] and [`build_q`]: a union of matchings of `R`
//!    fresh realizations covers the `N` side; `Q = S ∪ P` with a per-vertex
//!    degree bound of `R + deg_P(v)`.

use num_traits::{Pow, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{sample_realization, EdgeSet, Matching, WeightedGraph};
use crate::mwm::maximum_weight_matching;
use crate::rng::{streams, RngStream};
use crate::weight::{ceil_inverse, ratio_f64, ratio_int, ratio_pow, Ratio};
use crate::Result;

/// Parameters shared by every sparsifier stage.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparsifierConfig {
    /// Target relative loss, in (0, 1).
    #[serde(with = "crate::weight::ratio_serde")]
    pub epsilon: Ratio,
    /// Edge survival probability, in [0, 1].
    #[serde(with = "crate::weight::ratio_serde")]
    pub p: Ratio,
    /// Exponent of the log-log factor inside the hop-radius formula.
    pub lambda_constant_c: u32,
    /// Cap applied to the hop radius; keeps desk-scale runs finite.
    pub lambda_cap: u32,
    /// Monte Carlo samples for the shared edge-statistics pass.
    pub n_q: usize,
    /// Documented sample knob for the expected-matching estimate. The shared
    /// pass ties it to `n_q`; the value is echoed into reports unchanged.
    pub n_opt: usize,
    /// Overrides the sampling round count formula when set.
    pub r_override: Option<u64>,
    /// Largest round count the formula may produce before erroring.
    pub r_hard_cap: u64,
}

impl SparsifierConfig {
    /// Defaults tuned for small experiment graphs.
    pub fn new(epsilon: Ratio, p: Ratio) -> Result<Self> {
        let cfg = SparsifierConfig {
            epsilon,
            p,
            lambda_constant_c: 1,
            lambda_cap: 8,
            n_q: 1000,
            n_opt: 1000,
            r_override: None,
            r_hard_cap: 4096,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_positive() || self.epsilon >= ratio_int(1) {
            return Err(Error::invalid("epsilon must lie in (0, 1)"));
        }
        if !crate::weight::is_probability(&self.p) {
            return Err(Error::invalid("p must lie in [0, 1]"));
        }
        if self.n_q == 0 {
            return Err(Error::invalid("n_q must be positive"));
        }
        if self.lambda_cap == 0 {
            return Err(Error::invalid("lambda_cap must be positive"));
        }
        if self.r_hard_cap == 0 {
            return Err(Error::invalid("r_hard_cap must be positive"));
        }
        Ok(())
    }

    /// Largest number of greedy growth rounds the loss budget admits.
    pub fn max_growth_rounds(&self) -> u64 {
        ceil_inverse(&self.epsilon)
    }
}

/// Hop radius as a function of the current maximum degree.
///
/// `max(1, ceil(eps^-24 * log2(delta) * max(1, log2(log2(delta)))^c))`,
/// clamped to `cap`. Degrees of at most one give radius one.
pub fn lambda_fn(delta: u64, epsilon: &Ratio, c: u32, cap: u32) -> u32 {
    assert!(cap >= 1);
    if delta <= 1 {
        return 1;
    }
    let eps = ratio_f64(epsilon);
    let log2d = (delta as f64).log2();
    let loglog = log2d.log2().max(1.0);
    let raw = eps.powi(-24) * log2d * loglog.powi(c as i32);
    if !raw.is_finite() {
        return cap;
    }
    let v = raw.ceil().max(1.0);
    if v >= cap as f64 {
        cap
    } else {
        v as u32
    }
}

/// Compares `value` against `p^2 * eps^eps_exp / delta^lambda` exactly when
/// the power fits in a few thousand bits, in log space otherwise.
pub fn compare_to_threshold(
    value: &Ratio,
    p: &Ratio,
    epsilon: &Ratio,
    eps_exp: u32,
    delta: u64,
    lambda: u32,
) -> std::cmp::Ordering {
    let delta = delta.max(1);
    let bits = f64::from(lambda) * (delta as f64).log2();
    if bits <= 4096.0 {
        let pow = num_bigint::BigInt::from(delta).pow(lambda);
        let lhs = value * Ratio::from_integer(pow);
        let rhs = ratio_pow(p, 2) * ratio_pow(epsilon, eps_exp);
        return lhs.cmp(&rhs);
    }
    // Log-space fallback for astronomically large hop powers.
    let log_rhs =
        2.0 * ratio_f64(p).log2() + f64::from(eps_exp) * ratio_f64(epsilon).log2() - bits;
    if value.is_positive() {
        ratio_f64(value)
            .log2()
            .partial_cmp(&log_rhs)
            .unwrap_or(std::cmp::Ordering::Less)
    } else {
        std::cmp::Ordering::Less
    }
}

/// Per-edge matching statistics from one shared Monte Carlo pass.
#[derive(Debug, Clone)]
pub struct EdgeStats {
    q_hat: Vec<Ratio>,
    chi_hat: Vec<Ratio>,
    opt_hat: Ratio,
    samples: usize,
}

impl EdgeStats {
    /// Estimated probability that edge `e` joins the canonical
    /// maximum-weight matching of a realization.
    pub fn q_hat(&self, e: usize) -> &Ratio {
        &self.q_hat[e]
    }

    /// `q_hat(e) * w_e`.
    pub fn chi_hat(&self, e: usize) -> &Ratio {
        &self.chi_hat[e]
    }

    /// Estimated expected maximum matching weight of a realization.
    pub fn opt_hat(&self) -> &Ratio {
        &self.opt_hat
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Exact sum of `chi_hat` over an edge set.
    pub fn chi_of_set(&self, set: &EdgeSet) -> Ratio {
        set.iter().map(|e| self.chi_hat[e].clone()).sum()
    }

    /// Exact sum of `q_hat` over edges at `v` lying in `within`.
    pub fn vertex_q_sum(&self, g: &WeightedGraph, v: usize, within: &EdgeSet) -> Ratio {
        g.adjacency(v)
            .iter()
            .filter(|&&e| within.contains(e))
            .map(|&e| self.q_hat[e].clone())
            .sum()
    }
}

/// Runs the shared estimation pass: `n_q` realizations, one canonical
/// maximum-weight matching each. Per-edge hit counts give `q_hat`; the same
/// matchings give `opt_hat`, so `sum_e q_hat_e * w_e == opt_hat` holds as an
/// identity of rationals.
pub fn estimate_edge_stats(
    g: &WeightedGraph,
    p: &Ratio,
    n_q: usize,
    stream: &RngStream,
) -> Result<EdgeStats> {
    assert!(n_q > 0);
    let mut counts = vec![0u64; g.m()];
    let mut weight_sum = ratio_int(0);
    for k in 0..n_q {
        let real = sample_realization(g, p, &stream.derive_idx(streams::Q_STATS, k as u64));
        let m = maximum_weight_matching(g, &real.realized)?;
        for &e in m.edges() {
            counts[e] += 1;
        }
        weight_sum += m.weight();
    }
    let denom = ratio_int(n_q as i64);
    let q_hat: Vec<Ratio> = counts
        .iter()
        .map(|&c| ratio_int(c as i64) / &denom)
        .collect();
    let chi_hat: Vec<Ratio> = q_hat
        .iter()
        .enumerate()
        .map(|(e, q)| q * g.weight(e))
        .collect();
    let opt_hat = weight_sum / &denom;
    debug_assert_eq!(
        chi_hat.iter().cloned().sum::<Ratio>(),
        opt_hat,
        "shared-pass identity must be exact"
    );
    Ok(EdgeStats {
        q_hat,
        chi_hat,
        opt_hat,
        samples: n_q,
    })
}

/// Output of the greedy stage: a disjoint cover of the edge set.
#[derive(Debug, Clone)]
pub struct Partition {
    /// Protected edges, grown round by round.
    pub p_set: EdgeSet,
    /// The final candidate set whose matching mass fell below the budget.
    pub i_prime: EdgeSet,
    /// Everything else.
    pub n_set: EdgeSet,
    /// `max(1, max degree of p_set)` at termination.
    pub delta: u64,
    /// Hop radius in force at termination.
    pub lambda: u32,
    /// Number of growth rounds that actually added edges.
    pub iterations: u64,
}

/// Grows the protected set `P`.
///
/// Each round recomputes the degree bound and hop radius, then collects
/// candidates outside `P` that pass the `q_hat` threshold or sit within
/// `lambda` hops of each other through `P`. The round commits the candidates
/// only while their total matching mass is positive and at least
/// `epsilon * opt_hat`; the first round that falls short stops with `I'` as
/// its candidate set. An empty candidate set also stops (with empty `I'`).
/// Requiring positive mass keeps the degenerate `opt_hat = 0` case (for
/// example `p = 0`, where every threshold is trivially met) from committing
/// useless rounds forever.
pub fn greedy_subgraph(
    g: &WeightedGraph,
    stats: &EdgeStats,
    cfg: &SparsifierConfig,
) -> Result<Partition> {
    cfg.validate()?;
    let max_rounds = cfg.max_growth_rounds();
    let mut p_set = g.empty_edge_set();
    let mut iterations = 0u64;
    let budget = &cfg.epsilon * stats.opt_hat();
    loop {
        if iterations > max_rounds {
            return Err(Error::IterationOverflow {
                max_iterations: max_rounds,
            });
        }
        let delta = g.max_degree_in(&p_set).max(1) as u64;
        let lambda = lambda_fn(delta, &cfg.epsilon, cfg.lambda_constant_c, cfg.lambda_cap);
        let candidates = collect_candidates(g, stats, cfg, &p_set, delta, lambda);
        let finish = |i_prime: EdgeSet| {
            let n_set = g.full_edge_set().difference(&p_set).difference(&i_prime);
            Partition {
                p_set: p_set.clone(),
                i_prime,
                n_set,
                delta,
                lambda,
                iterations,
            }
        };
        if candidates.is_empty() {
            return Ok(finish(g.empty_edge_set()));
        }
        let mass = stats.chi_of_set(&candidates);
        if !mass.is_positive() || mass < budget {
            return Ok(finish(candidates));
        }
        p_set.union_with(&candidates);
        iterations += 1;
    }
}

/// Candidates outside `P`: edges meeting the `q_hat` threshold plus edges
/// whose endpoints already lie within `lambda` hops of each other inside `P`.
fn collect_candidates(
    g: &WeightedGraph,
    stats: &EdgeStats,
    cfg: &SparsifierConfig,
    p_set: &EdgeSet,
    delta: u64,
    lambda: u32,
) -> EdgeSet {
    let mut candidates = g.empty_edge_set();
    let mut hops_from: std::collections::HashMap<usize, Vec<Option<u32>>> =
        std::collections::HashMap::new();
    for e in 0..g.m() {
        if p_set.contains(e) {
            continue;
        }
        let passes_q = compare_to_threshold(
            stats.q_hat(e),
            &cfg.p,
            &cfg.epsilon,
            10,
            delta,
            lambda,
        )
        .is_ge();
        if passes_q {
            candidates.insert(e);
            continue;
        }
        let ed = g.edge(e);
        let dist = hops_from
            .entry(ed.u)
            .or_insert_with(|| g.hop_distances(p_set, ed.u))[ed.v];
        if dist.is_some_and(|d| d < lambda) {
            candidates.insert(e);
        }
    }
    candidates
}

/// Checks the partition contract: the three parts cover the edges exactly
/// once, and every edge of `N` fails both candidate rules at the recorded
/// final degree bound and hop radius. Returns human-readable violations.
pub fn verify_partition(
    g: &WeightedGraph,
    stats: &EdgeStats,
    cfg: &SparsifierConfig,
    part: &Partition,
) -> Vec<String> {
    let mut violations = Vec::new();
    let mut covered = part.p_set.union(&part.i_prime);
    covered.union_with(&part.n_set);
    if covered != g.full_edge_set() {
        violations.push("parts do not cover the edge set".to_string());
    }
    if !part.p_set.is_disjoint(&part.i_prime)
        || !part.p_set.is_disjoint(&part.n_set)
        || !part.i_prime.is_disjoint(&part.n_set)
    {
        violations.push("parts overlap".to_string());
    }
    if part.delta != g.max_degree_in(&part.p_set).max(1) as u64 {
        violations.push(format!(
            "recorded delta {} differs from recomputed {}",
            part.delta,
            g.max_degree_in(&part.p_set).max(1)
        ));
    }
    for e in part.n_set.iter() {
        if compare_to_threshold(stats.q_hat(e), &cfg.p, &cfg.epsilon, 10, part.delta, part.lambda)
            .is_ge()
        {
            violations.push(format!("edge {e} in N passes the q_hat threshold"));
        }
        let ed = g.edge(e);
        let dist = g.hop_distances(&part.p_set, ed.u)[ed.v];
        if dist.is_some_and(|d| d < part.lambda) {
            violations.push(format!("edge {e} in N lies within the hop radius"));
        }
    }
    violations
}

/// Output of the sampling stage.
#[derive(Debug, Clone)]
pub struct SamplingOutput {
    /// Canonical maximum-weight matchings of the `R` sampling realizations,
    /// in draw order.
    pub rounds: Vec<Matching>,
    /// Union of the round matchings.
    pub s_set: EdgeSet,
    /// Rounds actually drawn.
    pub r_used: u64,
    /// Hop radius used when evaluating the round-count formula.
    pub lambda: u32,
}

/// Determines the round count: the override when present, otherwise the
/// formula `ceil(p^-2 * eps^-10 * delta^lambda)`, which must stay within
/// the hard cap.
pub fn sampling_rounds(cfg: &SparsifierConfig, delta: u64, lambda: u32) -> Result<u64> {
    if let Some(r) = cfg.r_override {
        return Ok(r);
    }
    if !cfg.p.is_positive() {
        return Err(Error::invalid("round formula undefined at p = 0"));
    }
    let delta = delta.max(1);
    let log2_r = -2.0 * ratio_f64(&cfg.p).log2() - 10.0 * ratio_f64(&cfg.epsilon).log2()
        + f64::from(lambda) * (delta as f64).log2();
    if log2_r > 63.0 {
        return Err(Error::ParameterOverflow {
            formula: if log2_r < 1024.0 { log2_r.exp2() } else { f64::INFINITY },
            cap: cfg.r_hard_cap,
        });
    }
    let exact = ratio_pow(&cfg.p, 2).recip()
        * ratio_pow(&cfg.epsilon, 10).recip()
        * Ratio::from_integer(num_bigint::BigInt::from(delta).pow(lambda));
    let r = exact
        .ceil()
        .to_integer()
        .to_u64()
        .expect("bounded by the log2 guard");
    if r > cfg.r_hard_cap {
        return Err(Error::ParameterOverflow {
            formula: ratio_f64(&exact),
            cap: cfg.r_hard_cap,
        });
    }
    Ok(r)
}

/// Draws `R` fresh realizations and keeps the canonical maximum-weight
/// matching of each. Realization `i` always uses sub-stream `i`, so
/// extending `R` preserves earlier rounds.
pub fn sampling_subgraph(
    g: &WeightedGraph,
    cfg: &SparsifierConfig,
    delta: u64,
    stream: &RngStream,
) -> Result<SamplingOutput> {
    cfg.validate()?;
    let lambda = lambda_fn(delta, &cfg.epsilon, cfg.lambda_constant_c, cfg.lambda_cap);
    let r_used = sampling_rounds(cfg, delta, lambda)?;
    let mut rounds = Vec::with_capacity(r_used as usize);
    let mut s_set = g.empty_edge_set();
    for i in 0..r_used {
        let real = sample_realization(g, &cfg.p, &stream.derive_idx(streams::SAMPLER, i));
        let m = maximum_weight_matching(g, &real.realized)?;
        for &e in m.edges() {
            s_set.insert(e);
        }
        rounds.push(m);
    }
    Ok(SamplingOutput {
        rounds,
        s_set,
        r_used,
        lambda,
    })
}

/// `Q = S ∪ P`, checking the per-vertex degree bound
/// `deg_Q(v) <= R + deg_P(v)`.
pub fn build_q(g: &WeightedGraph, part: &Partition, sampling: &SamplingOutput) -> EdgeSet {
    let q = sampling.s_set.union(&part.p_set);
    for v in 0..g.n() {
        let dq = g.degree_in(v, &q);
        let dp = g.degree_in(v, &part.p_set);
        assert!(
            dq as u64 <= sampling.r_used + dp as u64,
            "degree bound violated at vertex {v}: {dq} > {} + {dp}",
            sampling.r_used
        );
    }
    q
}
