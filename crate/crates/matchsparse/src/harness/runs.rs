//! The five experiment runners. Each takes an [`ExperimentSpec`], drives
//! the pipeline with streams derived from the root seed, and returns a
//! [`Report`] whose `hard_pass` reflects the run's hard invariants.

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::fractional::{
    assignment_weight, build_z, check_fractional_with_limit, compute_f, compute_g, compute_h,
    compute_x,
};
use crate::graph::{sample_realization, WeightedGraph};
use crate::mwm::maximum_weight_matching;
use crate::rng::{streams, RngStream};
use crate::sparsifier::{
    build_q, estimate_edge_stats, greedy_subgraph, sampling_subgraph, verify_partition,
};
use crate::vimatch::{ExtensionReference, VimatchRunner};
use crate::weight::{ratio_f64, ratio_int, ratio_str};
use crate::Result;

use super::report::{IndependenceSummary, RatioPoint, Report, TrialRow};
use super::stats::{chi_square_2x2, mean, paired_ratio, standard_error};
use super::ExperimentSpec;

/// Knobs for the validity audit.
#[derive(Debug, Clone, Copy)]
pub struct AuditOptions {
    /// Largest odd-set size checked exhaustively, used as-is.
    pub blossom_limit: usize,
    /// Test hook: corrupt the final assignment so the check must fail.
    pub corrupt_x: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            blossom_limit: 5,
            corrupt_x: false,
        }
    }
}

fn add_degrees(histogram: &mut Vec<u64>, g: &WeightedGraph, q: &crate::graph::EdgeSet) {
    for v in 0..g.n() {
        let d = g.degree_in(v, q);
        if histogram.len() <= d {
            histogram.resize(d + 1, 0);
        }
        histogram[d] += 1;
    }
}

/// Runs `trials` full pipeline passes and aggregates every hard invariant:
/// partition contract, degree and iteration bounds, fractional-matching
/// validity, and the exact gain residual.
pub fn run_validity_audit(
    spec: &ExperimentSpec,
    opts: AuditOptions,
    timestamps: bool,
) -> Result<Report> {
    spec.validate()?;
    let root = RngStream::from_root(spec.seed);
    let mut report = Report::new("audit", spec.seed, spec.config_echo(), timestamps);

    let mut frac_failures = 0usize;
    let mut residual_failures = 0usize;
    let mut degree_failures = 0usize;
    let mut iteration_failures = 0usize;
    let mut partition_failures = 0usize;

    for trial in 0..spec.trials {
        let tstream = root.derive_idx(streams::TRIAL, trial as u64);
        let g = spec.source.load(&tstream)?;
        let cfg = &spec.cfg;

        let stats = estimate_edge_stats(&g, &cfg.p, cfg.n_q, &tstream.derive(streams::Q_STATS))?;
        let partition = greedy_subgraph(&g, &stats, cfg)?;
        let part_violations = verify_partition(&g, &stats, cfg, &partition);
        if !part_violations.is_empty() {
            partition_failures += 1;
        }
        if partition.iterations > cfg.max_growth_rounds() {
            iteration_failures += 1;
        }

        let sampling = sampling_subgraph(&g, cfg, partition.delta, &tstream)?;
        let q = build_q(&g, &partition, &sampling);
        let degree_ok = (0..g.n())
            .all(|v| g.degree_in(v, &q) <= sampling.r_used as usize + g.degree_in(v, &partition.p_set));
        if !degree_ok {
            degree_failures += 1;
        }
        add_degrees(&mut report.degree_histogram, &g, &q);

        let realization = sample_realization(&g, &cfg.p, &tstream.derive(streams::REALIZATION));
        let (zctx, run_stats) = build_z(
            &g,
            &partition,
            &stats,
            &realization,
            &spec.vparams,
            &cfg.p,
            &cfg.epsilon,
            &tstream,
        )?;
        if !run_stats.residual.is_zero() {
            residual_failures += 1;
        }

        let f = compute_f(&g, &sampling, &partition);
        let g_assign = compute_g(&g, &f, &zctx, &partition, cfg);
        let h = compute_h(&g, &g_assign, &zctx, &realization, &cfg.p, &cfg.epsilon)?;
        let mut x = compute_x(&g, &h, &zctx, &partition, &cfg.epsilon);
        if opts.corrupt_x && g.m() > 0 {
            x.set(0, ratio_int(2));
        }

        let frac = check_fractional_with_limit(&x, &g, &q, &realization, opts.blossom_limit);
        let pass = frac.pass();
        if !pass {
            frac_failures += 1;
        }

        let realized_q = q.intersection(&realization.realized);
        let matched = maximum_weight_matching(&g, &realized_q)?;

        report.trials.push(TrialRow {
            trial,
            seed: spec.seed,
            q_size: q.len(),
            q_max_degree: (0..g.n()).map(|v| g.degree_in(v, &q)).max().unwrap_or(0),
            matched_weight: ratio_str(matched.weight()),
            w_f: ratio_str(&assignment_weight(&f, &g)),
            w_g: ratio_str(&assignment_weight(&g_assign, &g)),
            w_h: ratio_str(&assignment_weight(&h, &g)),
            w_x: ratio_str(&assignment_weight(&x, &g)),
            fractional_pass: pass,
            violations: if pass { None } else { Some(frac) },
            gain_residual: ratio_str(&run_stats.residual),
        });
    }

    let t = spec.trials;
    report.push_criterion(
        "partition_invariants",
        partition_failures == 0,
        format!("{}/{t} trials clean", t - partition_failures),
    );
    report.push_criterion(
        "iteration_bound",
        iteration_failures == 0,
        format!("{}/{t} trials within ceil(1/epsilon) rounds", t - iteration_failures),
    );
    report.push_criterion(
        "degree_bound",
        degree_failures == 0,
        format!("{}/{t} trials with deg_Q <= R + deg_P", t - degree_failures),
    );
    report.push_criterion(
        "fractional_validity",
        frac_failures == 0,
        format!("{}/{t} trials pass all constraints", t - frac_failures),
    );
    report.push_criterion(
        "gain_residual_zero",
        residual_failures == 0,
        format!("{}/{t} trials with exact zero residual", t - residual_failures),
    );
    Ok(report)
}

/// Builds the sparsifier once per requested round count and estimates the
/// approximation ratio over shared paired realizations.
///
/// The same `t_eval` realizations evaluate every `R`, and the numerator of
/// each pair is the matched weight inside the sparsifier while the
/// denominator is the matched weight of the whole realization, so each
/// paired sample has numerator ≤ denominator.
pub fn run_ratio_sweep(
    spec: &ExperimentSpec,
    r_values: &[u64],
    timestamps: bool,
) -> Result<Report> {
    spec.validate()?;
    if r_values.is_empty() {
        return Err(Error::invalid("ratio sweep needs at least one R value"));
    }
    let root = RngStream::from_root(spec.seed);
    let mut report = Report::new("ratio-sweep", spec.seed, spec.config_echo(), timestamps);
    let g = spec.source.load(&root)?;
    let cfg = &spec.cfg;

    let stats = estimate_edge_stats(&g, &cfg.p, cfg.n_q, &root.derive(streams::Q_STATS))?;
    let partition = greedy_subgraph(&g, &stats, cfg)?;

    let evals: Vec<_> = (0..spec.t_eval)
        .map(|j| sample_realization(&g, &cfg.p, &root.derive_idx(streams::EVAL, j as u64)))
        .collect();
    let mut denominators = Vec::with_capacity(evals.len());
    for r in &evals {
        denominators.push(ratio_f64(
            maximum_weight_matching(&g, &r.realized)?.weight(),
        ));
    }

    let mut curve = Vec::with_capacity(r_values.len());
    for &rounds in r_values {
        let mut cfg_r = cfg.clone();
        cfg_r.r_override = Some(rounds);
        let sampling = sampling_subgraph(&g, &cfg_r, partition.delta, &root)
            .map_err(|e| Error::invalid(format!("R={rounds}: {e}")))?;
        let q = build_q(&g, &partition, &sampling);
        add_degrees(&mut report.degree_histogram, &g, &q);

        let mut numerators = Vec::with_capacity(evals.len());
        for (j, real) in evals.iter().enumerate() {
            let inside = q.intersection(&real.realized);
            let num = maximum_weight_matching(&g, &inside)?;
            let w = ratio_f64(num.weight());
            assert!(
                w <= denominators[j] + 1e-9,
                "paired numerator exceeded its denominator"
            );
            numerators.push(w);
        }
        let est = paired_ratio(&numerators, &denominators);
        curve.push(RatioPoint {
            rounds,
            ratio: est.ratio,
            se: est.se,
            num_mean: est.num_mean,
            den_mean: est.den_mean,
            q_size: q.len(),
            q_max_degree: (0..g.n()).map(|v| g.degree_in(v, &q)).max().unwrap_or(0),
        });
    }
    report.ratio_curve = Some(curve);
    Ok(report)
}

/// Records matched indicators for every vertex pair at hop distance at
/// least `lambda_hops` over repeated matcher runs, then chi-square-tests
/// each pair for independence at significance 0.01.
pub fn run_independence_test(
    spec: &ExperimentSpec,
    lambda_hops: u32,
    runs: usize,
    timestamps: bool,
) -> Result<Report> {
    spec.validate()?;
    if runs < 2 {
        return Err(Error::invalid("independence test needs at least 2 runs"));
    }
    let root = RngStream::from_root(spec.seed);
    let mut report = Report::new("independence", spec.seed, spec.config_echo(), timestamps);
    let g = spec.source.load(&root)?;
    let crucial = g.full_edge_set();

    let mut pairs = Vec::new();
    for u in 0..g.n() {
        let dist = g.hop_distances(&crucial, u);
        for v in (u + 1)..g.n() {
            if dist[v].is_none_or(|d| d >= lambda_hops) {
                pairs.push((u, v));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoEligiblePairs { lambda_hops });
    }

    let reference = ExtensionReference {
        crucial: crucial.clone(),
        p: spec.cfg.p.clone(),
    };
    let runner = VimatchRunner::new(
        &g,
        crucial,
        spec.cfg.p.clone(),
        spec.vparams.clone(),
        &reference,
    )?;
    let depth = spec.vparams.t;
    let tables = runner.build_tables(depth, &root.derive(streams::TABLES))?;

    let mut counts = vec![[[0u64; 2]; 2]; pairs.len()];
    for k in 0..runs {
        let realization = runner.sample_crucial(&root.derive_idx(streams::REALIZATION, k as u64));
        let (m, _) = runner.find_matching(
            depth,
            &realization,
            &tables,
            &root.derive_idx(streams::TRIAL, k as u64),
        )?;
        let covered = m.covered_vertices(&g);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            counts[i][usize::from(covered[u])][usize::from(covered[v])] += 1;
        }
    }

    let significance = 0.01;
    let mut p_values = Vec::with_capacity(pairs.len());
    let mut rejections = 0usize;
    let mut degenerate = 0usize;
    for c in &counts {
        match chi_square_2x2(*c) {
            Some(p) => {
                if p < significance {
                    rejections += 1;
                }
                p_values.push(p);
            }
            None => {
                degenerate += 1;
                p_values.push(1.0);
            }
        }
    }
    let fraction = rejections as f64 / pairs.len() as f64;
    report.independence = Some(IndependenceSummary {
        lambda_hops,
        runs,
        pairs: pairs.len(),
        rejections,
        degenerate_pairs: degenerate,
        rejection_fraction: fraction,
        significance,
        p_values,
    });
    // Shared saturation tables can induce correlation beyond the idealized
    // setting, so the fraction is reported as a soft criterion.
    report.push_criterion(
        "independence_rejections",
        fraction <= 0.05,
        format!(
            "{rejections}/{} pairs rejected at {significance} ({degenerate} degenerate)",
            pairs.len()
        ),
    );
    Ok(report)
}

/// Builds the sparsifier once and reports its shape and partition health.
pub fn run_sparsify(spec: &ExperimentSpec, timestamps: bool) -> Result<Report> {
    spec.validate()?;
    let root = RngStream::from_root(spec.seed);
    let mut report = Report::new("sparsify", spec.seed, spec.config_echo(), timestamps);
    let g = spec.source.load(&root)?;
    let cfg = &spec.cfg;

    let stats = estimate_edge_stats(&g, &cfg.p, cfg.n_q, &root.derive(streams::Q_STATS))?;
    let partition = greedy_subgraph(&g, &stats, cfg)?;
    let violations = verify_partition(&g, &stats, cfg, &partition);
    let sampling = sampling_subgraph(&g, cfg, partition.delta, &root)?;
    let q = build_q(&g, &partition, &sampling);
    add_degrees(&mut report.degree_histogram, &g, &q);

    report.push_criterion(
        "partition_invariants",
        violations.is_empty(),
        if violations.is_empty() {
            "clean".to_string()
        } else {
            violations.join("; ")
        },
    );
    report.push_criterion(
        "iteration_bound",
        partition.iterations <= cfg.max_growth_rounds(),
        format!(
            "{} rounds of at most {}",
            partition.iterations,
            cfg.max_growth_rounds()
        ),
    );
    report.push_criterion(
        "sparsifier_shape",
        true,
        format!(
            "|Q|={} |P|={} |I'|={} |N|={} R={} delta={} lambda={} opt_hat={}",
            q.len(),
            partition.p_set.len(),
            partition.i_prime.len(),
            partition.n_set.len(),
            sampling.r_used,
            partition.delta,
            partition.lambda,
            ratio_str(stats.opt_hat()),
        ),
    );
    Ok(report)
}

/// Runs the recursive matcher at depths `0..=depth` over fresh
/// realizations, reporting the mean matched weight per depth and the trace
/// of the deepest run.
pub fn run_vimatch_demo(
    spec: &ExperimentSpec,
    depth: usize,
    runs: usize,
    timestamps: bool,
) -> Result<Report> {
    spec.validate()?;
    if runs == 0 {
        return Err(Error::invalid("demo needs at least 1 run"));
    }
    let root = RngStream::from_root(spec.seed);
    let mut report = Report::new("vimatch-demo", spec.seed, spec.config_echo(), timestamps);
    let g = spec.source.load(&root)?;
    let crucial = g.full_edge_set();
    let reference = ExtensionReference {
        crucial: crucial.clone(),
        p: spec.cfg.p.clone(),
    };
    let runner = VimatchRunner::new(
        &g,
        crucial,
        spec.cfg.p.clone(),
        spec.vparams.clone(),
        &reference,
    )?;
    let tables = runner.build_tables(depth, &root.derive(streams::TABLES))?;

    let mut last_trace = String::new();
    let mut means = Vec::with_capacity(depth + 1);
    for r in 0..=depth {
        let mut weights = Vec::with_capacity(runs);
        for k in 0..runs {
            let realization =
                runner.sample_crucial(&root.derive_idx(streams::REALIZATION, k as u64));
            let (m, stats) = runner.find_matching(
                r,
                &realization,
                &tables,
                &root.derive_idx(streams::TRIAL, k as u64),
            )?;
            debug_assert!(!m.weight().is_negative());
            weights.push(ratio_f64(m.weight()));
            if r == depth && k == 0 {
                last_trace = stats.render_trace();
            }
        }
        let m = mean(&weights);
        let se = standard_error(&weights);
        means.push(m);
        report.push_criterion(
            &format!("mean_weight_depth_{r}"),
            true,
            format!("mean={m:.4} se={se:.4} over {runs} runs"),
        );
    }
    let nondecreasing = means.windows(2).all(|w| w[1] >= w[0] - 1e-9);
    report.push_criterion(
        "depth_monotonicity_observed",
        true,
        format!("means {means:?} nondecreasing={nondecreasing}"),
    );
    if !last_trace.is_empty() {
        report.push_criterion("trace_depth_top", true, last_trace.trim_end().to_string());
    }
    Ok(report)
}
