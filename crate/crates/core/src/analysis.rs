//! Error-pattern sweeps, minimal uncorrectable pattern search, failure
//! configurations, and the bad-variable lower bounds for incorrect messages.
//!
//! All sweeps assume the all-zero codeword was sent, so a pattern is
//! corrected iff the decoder's final estimate is all-zero. Converging to a
//! nonzero codeword counts as a failure.

use std::collections::HashSet;
use std::ops::RangeInclusive;
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colex::{self, ColexRange};
use crate::decoder::{message_trace, DecodeOutcome, Decoder, TraceStep, UpdateRule};
use crate::graph::{
    count_bad, cycles_of_length, directed_neighborhood, girth, DirectedEdge, EdgeKind, Girth, Node, TannerGraph,
};
use crate::seed::rng_for;
use crate::word::Word;

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_FAILURE_CAP: usize = 100;
pub const DEFAULT_PATTERN_BUDGET: u64 = 2_000_000_000;

/// Patterns per parallel work item.
const CHUNK: u64 = 1 << 14;
const CYCLE_LIMIT: usize = 20_000;
const HEURISTIC_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("exhaustive sweep needs {patterns} patterns, above the budget of {budget}; use sampled mode")]
    BudgetExceeded { patterns: u128, budget: u64 },
    #[error("pattern length {got} does not match n = {n}")]
    LengthMismatch { got: usize, n: usize },
    #[error("the outcome corrected the pattern; there is no failure to extract")]
    NotAFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepMode {
    Exhaustive,
    /// `count` uniformly random patterns per weight.
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub max_weight: usize,
    pub max_iterations: usize,
    pub mode: SweepMode,
    /// Inclusive weight range; defaults to `0..=max_weight`.
    pub weight_range: Option<(usize, usize)>,
    pub failure_cap: usize,
    /// Refuse exhaustive sweeps with more patterns than this.
    pub pattern_budget: u64,
}

impl SweepSpec {
    pub fn exhaustive(max_weight: usize, max_iterations: usize) -> Self {
        SweepSpec {
            max_weight,
            max_iterations,
            mode: SweepMode::Exhaustive,
            weight_range: None,
            failure_cap: DEFAULT_FAILURE_CAP,
            pattern_budget: DEFAULT_PATTERN_BUDGET,
        }
    }

    pub fn sampled(max_weight: usize, max_iterations: usize, count: u64, seed: u64) -> Self {
        SweepSpec { mode: SweepMode::Sampled { count, seed }, ..Self::exhaustive(max_weight, max_iterations) }
    }

    pub fn with_weight_range(mut self, lo: usize, hi: usize) -> Self {
        self.weight_range = Some((lo, hi));
        self
    }

    pub fn weights(&self) -> RangeInclusive<usize> {
        let (lo, hi) = self.weight_range.unwrap_or((0, self.max_weight));
        lo..=hi
    }

    fn validate(&self, n: usize) -> Result<(), AnalysisError> {
        if self.max_iterations == 0 {
            return Err(AnalysisError::InvalidSpec("max_iterations must be at least 1".into()));
        }
        if self.max_weight > n {
            return Err(AnalysisError::InvalidSpec(format!(
                "max_weight {} exceeds n = {n}",
                self.max_weight
            )));
        }
        if let Some((lo, hi)) = self.weight_range {
            if lo > hi || hi > self.max_weight {
                return Err(AnalysisError::InvalidSpec(format!(
                    "weight range [{lo}, {hi}] must satisfy lo <= hi <= max_weight = {}",
                    self.max_weight
                )));
            }
        }
        if let SweepMode::Sampled { count: 0, .. } = self.mode {
            return Err(AnalysisError::InvalidSpec("sample count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFingerprint {
    pub n: usize,
    pub m: usize,
    pub girth: Girth,
}

impl GraphFingerprint {
    pub fn of(g: &TannerGraph) -> Self {
        GraphFingerprint { n: g.n(), m: g.m(), girth: girth(g) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightStats {
    pub weight: usize,
    pub tested: u64,
    pub corrected: u64,
    pub failed: u64,
    /// Most iterations any corrected pattern of this weight needed.
    pub max_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub support: Vec<usize>,
    /// The decoder stopped on a nonzero codeword rather than running out of iterations.
    pub wrong_codeword: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub graph: GraphFingerprint,
    pub mode: SweepMode,
    pub max_iterations: usize,
    pub weights: Vec<WeightStats>,
    pub max_iterations_observed: usize,
    pub failures_total: u64,
    pub failure_cap: usize,
    /// First `failure_cap` failures in enumeration order.
    pub failures: Vec<FailureRecord>,
    pub wall_time_secs: f64,
}

impl VerificationReport {
    pub fn total_tested(&self) -> u64 {
        self.weights.iter().map(|w| w.tested).sum()
    }

    pub fn total_failed(&self) -> u64 {
        self.weights.iter().map(|w| w.failed).sum()
    }

    pub fn weight(&self, w: usize) -> Option<&WeightStats> {
        self.weights.iter().find(|s| s.weight == w)
    }

    /// Combines reports over disjoint pattern sets. `other`'s failures are
    /// appended after `self`'s, so merging consecutive enumeration ranges in
    /// order reproduces the single-run failure list.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        for row in other.weights {
            match self.weights.iter_mut().find(|s| s.weight == row.weight) {
                Some(s) => {
                    s.tested += row.tested;
                    s.corrected += row.corrected;
                    s.failed += row.failed;
                    s.max_iters = s.max_iters.max(row.max_iters);
                }
                None => self.weights.push(row),
            }
        }
        self.weights.sort_by_key(|s| s.weight);
        self.max_iterations_observed = self.max_iterations_observed.max(other.max_iterations_observed);
        self.failures_total += other.failures_total;
        self.failures.extend(other.failures);
        self.failures.truncate(self.failure_cap);
        self.wall_time_secs += other.wall_time_secs;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Per-weight CSV: `weight,tested,corrected,failed,max_iters`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,tested,corrected,failed,max_iters\n");
        for s in &self.weights {
            out.push_str(&format!("{},{},{},{},{}\n", s.weight, s.tested, s.corrected, s.failed, s.max_iters));
        }
        out
    }
}

#[derive(Debug, Default)]
struct Tally {
    tested: u64,
    corrected: u64,
    failed: u64,
    max_iters: usize,
    failures: Vec<FailureRecord>,
}

impl Tally {
    fn record(&mut self, dec: &Decoder<'_>, support: &[usize], summary: crate::decoder::RunSummary, cap: usize) {
        self.tested += 1;
        if dec.estimate_is_zero() {
            self.corrected += 1;
            self.max_iters = self.max_iters.max(summary.iterations);
        } else {
            self.failed += 1;
            if self.failures.len() < cap {
                self.failures.push(FailureRecord {
                    support: support.to_vec(),
                    wrong_codeword: summary.converged,
                    iterations: summary.iterations,
                });
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Job {
    weight: usize,
    start: u64,
    end: u64,
}

/// Decodes every pattern the spec selects and tallies the outcomes.
///
/// Exhaustive mode visits each weight's patterns in colex order; sampled
/// mode draws `count` uniform patterns per weight, the `i`-th keyed by
/// `(seed, weight, i)`. Work is split into fixed chunks over the rayon pool,
/// so the report (apart from `wall_time_secs`) is independent of the thread
/// count.
pub fn exhaustive_verify(g: &TannerGraph, spec: &SweepSpec) -> Result<VerificationReport, AnalysisError> {
    spec.validate(g.n())?;
    let started = Instant::now();
    let n = g.n();

    let per_weight = |w: usize| -> u128 {
        match spec.mode {
            SweepMode::Exhaustive => colex::binomial(n as u64, w as u64).unwrap_or(u128::MAX),
            SweepMode::Sampled { count, .. } => count as u128,
        }
    };
    if spec.mode == SweepMode::Exhaustive {
        let total: u128 = spec.weights().map(per_weight).fold(0u128, |a, b| a.saturating_add(b));
        if total > spec.pattern_budget as u128 {
            return Err(AnalysisError::BudgetExceeded { patterns: total, budget: spec.pattern_budget });
        }
    }

    let mut jobs = Vec::new();
    for w in spec.weights() {
        let total = per_weight(w) as u64;
        let mut start = 0;
        while start < total {
            let end = (start + CHUNK).min(total);
            jobs.push(Job { weight: w, start, end });
            start = end;
        }
    }

    let tallies: Vec<Tally> = jobs.par_iter().map(|job| run_job(g, spec, *job)).collect();

    let mut weights: Vec<WeightStats> = spec
        .weights()
        .map(|w| WeightStats { weight: w, tested: 0, corrected: 0, failed: 0, max_iters: 0 })
        .collect();
    let mut failures = Vec::new();
    let mut failures_total = 0;
    for (job, t) in jobs.iter().zip(tallies) {
        let row = weights.iter_mut().find(|s| s.weight == job.weight).expect("weight row");
        row.tested += t.tested;
        row.corrected += t.corrected;
        row.failed += t.failed;
        row.max_iters = row.max_iters.max(t.max_iters);
        failures_total += t.failed;
        for f in t.failures {
            if failures.len() < spec.failure_cap {
                failures.push(f);
            }
        }
    }

    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        graph: GraphFingerprint::of(g),
        mode: spec.mode,
        max_iterations: spec.max_iterations,
        max_iterations_observed: weights.iter().map(|s| s.max_iters).max().unwrap_or(0),
        weights,
        failures_total,
        failure_cap: spec.failure_cap,
        failures,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

fn run_job(g: &TannerGraph, spec: &SweepSpec, job: Job) -> Tally {
    let mut dec = Decoder::new(g, UpdateRule::GallagerA);
    let mut tally = Tally::default();
    match spec.mode {
        SweepMode::Exhaustive => {
            ColexRange::new(g.n(), job.weight, job.start as u128, job.end as u128).for_each_while(|s| {
                let summary = dec.decode_support(s, spec.max_iterations);
                tally.record(&dec, s, summary, spec.failure_cap);
                true
            });
        }
        SweepMode::Sampled { seed, .. } => {
            for i in job.start..job.end {
                let support = sample_support(g.n(), job.weight, seed, i);
                let summary = dec.decode_support(&support, spec.max_iterations);
                tally.record(&dec, &support, summary, spec.failure_cap);
            }
        }
    }
    tally
}

/// The `index`-th sampled weight-`weight` support for `seed`, sorted.
pub fn sample_support(n: usize, weight: usize, seed: u64, index: u64) -> Vec<usize> {
    let mut rng = rng_for(seed, weight as u64, index);
    let mut s = sample(&mut rng, n, weight).into_vec();
    s.sort_unstable();
    s
}

/// Variables, checks and edges spanned by an error support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedSubgraph {
    pub variables: Vec<usize>,
    pub checks: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl InducedSubgraph {
    pub fn of(g: &TannerGraph, support: &[usize]) -> Self {
        let mut variables = support.to_vec();
        variables.sort_unstable();
        variables.dedup();
        let mut checks: Vec<usize> = variables.iter().flat_map(|&v| g.var_neighbors(v).iter().copied()).collect();
        checks.sort_unstable();
        checks.dedup();
        let edges = variables
            .iter()
            .flat_map(|&v| g.var_neighbors(v).iter().map(move |&c| (v, c)))
            .collect();
        InducedSubgraph { variables, checks, edges }
    }

    /// The subgraph relabelled to `0..variables.len()` and `0..checks.len()`.
    pub fn to_graph(&self) -> TannerGraph {
        let edges = self.edges.iter().map(|&(v, c)| {
            (
                self.variables.binary_search(&v).expect("edge variable in support"),
                self.checks.binary_search(&c).expect("edge check adjacent"),
            )
        });
        TannerGraph::from_edges(self.variables.len(), self.checks.len(), edges).expect("subgraph of a simple graph")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureConfiguration {
    pub support: Vec<usize>,
    pub induced_subgraph: InducedSubgraph,
    pub shortest_cycle_in_support: Girth,
    /// Earliest iteration from which the set of variables receiving at least
    /// two incorrect messages stays equal to its value at the last iteration.
    pub first_stuck_iteration: usize,
    pub wrong_codeword: bool,
    pub iterations_used: usize,
}

/// Variables receiving at least two incorrect check messages in `step`.
pub fn overloaded_variables(g: &TannerGraph, step: &TraceStep) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| {
            g.var_edge_range(v).filter(|&e| step.messages.chk_to_var[e] == 1).count() >= 2
        })
        .collect()
}

/// Describes a pattern the decoder did not correct.
///
/// Uses `outcome.trace` when present, otherwise replays the decoder for
/// `outcome.iterations_used` iterations.
pub fn extract_failure_configuration(
    g: &TannerGraph,
    pattern: &Word,
    outcome: &DecodeOutcome,
) -> Result<FailureConfiguration, AnalysisError> {
    if pattern.len() != g.n() {
        return Err(AnalysisError::LengthMismatch { got: pattern.len(), n: g.n() });
    }
    if outcome.estimate.is_zero() {
        return Err(AnalysisError::NotAFailure);
    }
    let support = pattern.support();
    let induced = InducedSubgraph::of(g, &support);
    let shortest = girth(&induced.to_graph());

    let replay;
    let trace: &[TraceStep] = match &outcome.trace {
        Some(t) => t,
        None => {
            replay = message_trace(g, pattern, outcome.iterations_used);
            &replay
        }
    };
    let sets: Vec<Vec<usize>> = trace.iter().map(|s| overloaded_variables(g, s)).collect();
    let first_stuck_iteration = match sets.last() {
        None => 0,
        Some(last) => {
            let mut j = sets.len();
            while j > 1 && sets[j - 2] == *last {
                j -= 1;
            }
            trace[j - 1].messages.iteration
        }
    };

    Ok(FailureConfiguration {
        support,
        induced_subgraph: induced,
        shortest_cycle_in_support: shortest,
        first_stuck_iteration,
        wrong_codeword: outcome.converged,
        iterations_used: outcome.iterations_used,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum MinSearchResult {
    Found {
        weight: usize,
        configuration: FailureConfiguration,
        patterns_tried: u64,
        /// Found among the cycle-concentrated candidates rather than the colex sweep.
        from_heuristic: bool,
    },
    NoneWithinBudget {
        patterns_tried: u64,
        /// Largest weight whose patterns were all decoded successfully.
        exhausted_through_weight: Option<usize>,
    },
}

/// Searches weights `start_weight, start_weight + 1, ...` for a pattern the
/// decoder fails to correct within `max_iterations`.
///
/// Each weight first tries supports concentrated on shortest cycles (subsets
/// of a shortest cycle's variables, or a whole cycle plus variables sharing a
/// check with it), then every pattern in colex order. At most `budget`
/// patterns are decoded in total.
pub fn find_min_uncorrectable(
    g: &TannerGraph,
    max_iterations: usize,
    start_weight: usize,
    budget: u64,
) -> Result<MinSearchResult, AnalysisError> {
    if start_weight == 0 {
        return Err(AnalysisError::InvalidSpec("start weight must be at least 1".into()));
    }
    if max_iterations == 0 {
        return Err(AnalysisError::InvalidSpec("max_iterations must be at least 1".into()));
    }
    let n = g.n();
    let cycles: Vec<Vec<usize>> = match girth(g) {
        Girth::Finite(len) => cycles_of_length(g, len, CYCLE_LIMIT)
            .into_iter()
            .map(|cycle| {
                let mut vars: Vec<usize> = cycle
                    .into_iter()
                    .filter_map(|node| match node {
                        Node::Var(v) => Some(v),
                        Node::Check(_) => None,
                    })
                    .collect();
                vars.sort_unstable();
                vars
            })
            .collect(),
        Girth::Infinite => Vec::new(),
    };

    let mut tried: u64 = 0;
    let mut exhausted = None;
    let mut dec = Decoder::new(g, UpdateRule::GallagerA);

    let found = |support: &[usize], tried: u64, from_heuristic: bool| -> MinSearchResult {
        let pattern = Word::from_support(n, support);
        let cfg = crate::decoder::DecoderConfig::new(max_iterations).with_trace();
        let outcome = crate::decoder::decode(g, &pattern, &cfg);
        let configuration = extract_failure_configuration(g, &pattern, &outcome).expect("pattern failed when searched");
        MinSearchResult::Found { weight: support.len(), configuration, patterns_tried: tried, from_heuristic }
    };

    for w in start_weight..=n {
        let mut seen = HashSet::new();
        for cand in heuristic_candidates(g, &cycles, w) {
            if tried >= budget {
                return Ok(MinSearchResult::NoneWithinBudget { patterns_tried: tried, exhausted_through_weight: exhausted });
            }
            if !seen.insert(cand.clone()) {
                continue;
            }
            tried += 1;
            dec.decode_support(&cand, max_iterations);
            if !dec.estimate_is_zero() {
                return Ok(found(&cand, tried, true));
            }
        }

        let total = colex::binomial(n as u64, w as u64).unwrap_or(u128::MAX);
        let mut start: u128 = 0;
        while start < total {
            if tried >= budget {
                return Ok(MinSearchResult::NoneWithinBudget { patterns_tried: tried, exhausted_through_weight: exhausted });
            }
            let block = (CHUNK as u128 * 64).min((budget - tried) as u128);
            let end = (start + block).min(total);
            let mut chunks = Vec::new();
            let mut s = start;
            while s < end {
                let e = (s + CHUNK as u128).min(end);
                chunks.push((s, e));
                s = e;
            }
            let results: Vec<(u64, Option<Vec<usize>>)> = chunks
                .par_iter()
                .map(|&(s, e)| {
                    let mut dec = Decoder::new(g, UpdateRule::GallagerA);
                    let mut decoded = 0;
                    let mut failure = None;
                    ColexRange::new(n, w, s, e).for_each_while(|sub| {
                        if seen.contains(sub) {
                            return true;
                        }
                        decoded += 1;
                        dec.decode_support(sub, max_iterations);
                        if dec.estimate_is_zero() {
                            true
                        } else {
                            failure = Some(sub.to_vec());
                            false
                        }
                    });
                    (decoded, failure)
                })
                .collect();
            for (decoded, failure) in results {
                tried += decoded;
                if let Some(support) = failure {
                    return Ok(found(&support, tried, false));
                }
            }
            start = end;
        }
        exhausted = Some(w);
    }
    Ok(MinSearchResult::NoneWithinBudget { patterns_tried: tried, exhausted_through_weight: exhausted })
}

fn heuristic_candidates<'a>(
    g: &'a TannerGraph,
    cycles: &'a [Vec<usize>],
    w: usize,
) -> impl Iterator<Item = Vec<usize>> + 'a {
    cycles
        .iter()
        .flat_map(move |vars| -> Box<dyn Iterator<Item = Vec<usize>>> {
            if w <= vars.len() {
                Box::new(ColexRange::new(vars.len(), w, 0, u128::MAX).map(move |idx| {
                    idx.iter().map(|&i| vars[i]).collect::<Vec<_>>()
                }))
            } else {
                let mut extra: Vec<usize> = vars
                    .iter()
                    .flat_map(|&v| g.var_neighbors(v).iter())
                    .flat_map(|&c| g.check_neighbors(c).iter().copied())
                    .filter(|u| vars.binary_search(u).is_err())
                    .collect();
                extra.sort_unstable();
                extra.dedup();
                let extra_k = w - vars.len();
                Box::new(ColexRange::new(extra.len(), extra_k, 0, u128::MAX).map(move |idx| {
                    let mut s: Vec<usize> = vars.clone();
                    s.extend(idx.iter().map(|&i| extra[i]));
                    s.sort_unstable();
                    s
                }))
            }
        })
        .take(HEURISTIC_CAP)
}

/// Outcome of checking one (pattern, edge, iteration) triple against the
/// lower bounds on bad variables near a variable sending an incorrect message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Lemma2Check {
    NotApplicable { reason: String },
    Holds(Lemma2Evidence),
    Violated(Lemma2Evidence),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Evidence {
    pub k: usize,
    pub tail_bad: bool,
    /// Bad variables in the depth-`2k` directed neighborhood.
    pub bad_total: usize,
    /// Bad variables in the depth-`2k - 2` directed neighborhood.
    pub bad_previous: usize,
    pub required: usize,
}

/// Least number of bad variables in the depth-`2k` directed neighborhood of
/// an edge whose tail sends an incorrect message in iteration `k + 1`.
/// `None` for the impossible case of a bad tail with `bad_previous == 0`.
pub fn lemma2_required(tail_bad: bool, k: usize, bad_previous: usize) -> Option<usize> {
    assert!(k >= 1);
    let pow = |e: usize| 1usize << e;
    if tail_bad {
        let base = k + 1;
        let refined = match bad_previous {
            0 => return None,
            1 => pow(k - 1) + 1,
            2 if k >= 2 => pow(k - 2) + 2,
            _ => 0,
        };
        Some(base.max(refined))
    } else {
        let base = 2 * k;
        let refined = match bad_previous {
            0 => pow(k),
            1 if k >= 2 => pow(k - 1) + pow(k - 2) + 1,
            2 => pow(k - 1) + 2,
            _ => 0,
        };
        Some(base.max(refined))
    }
}

/// Checks the bad-variable bound for edge `e = (v, c)` at iteration `k + 1`.
///
/// Applicable only when `e` runs from a variable to a check, `k >= 1`, the
/// depth-`2k` directed neighborhood of `e` is a tree, and `v` actually sends
/// an incorrect message on `e` in iteration `k + 1`.
pub fn check_lemma2_bounds(g: &TannerGraph, pattern: &Word, e: DirectedEdge, k: usize) -> Lemma2Check {
    let na = |reason: &str| Lemma2Check::NotApplicable { reason: reason.to_string() };
    if e.kind != EdgeKind::VarToCheck {
        return na("edge must run from a variable to a check");
    }
    if k == 0 {
        return na("k must be at least 1");
    }
    if pattern.len() != g.n() {
        return na("pattern length does not match the graph");
    }
    let Some(edge_id) = g.edge_id(e.tail, e.head) else {
        return na("edge is not in the graph");
    };
    let tree = directed_neighborhood(g, e, 2 * k);
    if !tree.is_tree {
        return na("directed neighborhood is not a tree");
    }
    let trace = message_trace(g, pattern, k + 1);
    if trace[k].messages.var_to_chk[edge_id] != 1 {
        return na("message on the edge is correct at iteration k + 1");
    }

    let stats = count_bad(&tree, pattern);
    let tail_bad = pattern.get(e.tail);
    let bad_previous = stats.bad_up_to(2 * k - 2);
    let Some(required) = lemma2_required(tail_bad, k, bad_previous) else {
        return na("bad tail with no bad variable at depth up to 2k - 2");
    };
    let evidence = Lemma2Evidence { k, tail_bad, bad_total: stats.bad_total, bad_previous, required };
    if stats.bad_total >= required {
        Lemma2Check::Holds(evidence)
    } else {
        Lemma2Check::Violated(evidence)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2SweepReport {
    pub checked: u64,
    pub attempts: u64,
    pub tail_bad_checked: u64,
    pub tail_good_checked: u64,
    pub violations: Vec<(Vec<usize>, DirectedEdge, Lemma2Evidence)>,
}

/// Draws random (pattern, edge, k) triples until `target` of them satisfy
/// the checker's preconditions (or `max_attempts` draws), and records every
/// bound violation.
///
/// Edges and `k <= max_k` are uniform; the pattern places a random number of
/// bad variables (up to `2k + 3`) inside the edge's depth-`2k` neighborhood,
/// plus up to two elsewhere.
pub fn lemma2_sweep(g: &TannerGraph, target: u64, max_k: usize, seed: u64, max_attempts: u64) -> Lemma2SweepReport {
    let mut report = Lemma2SweepReport {
        checked: 0,
        attempts: 0,
        tail_bad_checked: 0,
        tail_good_checked: 0,
        violations: Vec::new(),
    };
    if g.num_edges() == 0 || max_k == 0 {
        return report;
    }
    while report.checked < target && report.attempts < max_attempts {
        let mut rng = rng_for(seed, 0x4c32, report.attempts);
        report.attempts += 1;
        let (v, c) = g.edge(rng.gen_range(0..g.num_edges()));
        let k = rng.gen_range(1..=max_k);
        let e = DirectedEdge::var_to_check(v, c);
        let tree = directed_neighborhood(g, e, 2 * k);
        if !tree.is_tree {
            continue;
        }
        let inside = tree.variables();
        let mut bad: Vec<usize> = Vec::new();
        let b = rng.gen_range(1..=(2 * k + 3).min(inside.len()));
        bad.extend(sample(&mut rng, inside.len(), b).into_iter().map(|i| inside[i]));
        match rng.gen_range(0..3) {
            0 => bad.retain(|&u| u != v),
            1 => bad.push(v),
            _ => {}
        }
        for _ in 0..rng.gen_range(0..=2) {
            bad.push(rng.gen_range(0..g.n()));
        }
        bad.sort_unstable();
        bad.dedup();
        let pattern = Word::from_support(g.n(), &bad);
        match check_lemma2_bounds(g, &pattern, e, k) {
            Lemma2Check::NotApplicable { .. } => {}
            Lemma2Check::Holds(ev) => {
                report.checked += 1;
                if ev.tail_bad {
                    report.tail_bad_checked += 1;
                } else {
                    report.tail_good_checked += 1;
                }
            }
            Lemma2Check::Violated(ev) => {
                report.checked += 1;
                if ev.tail_bad {
                    report.tail_bad_checked += 1;
                } else {
                    report.tail_good_checked += 1;
                }
                report.violations.push((bad, e, ev));
            }
        }
    }
    report
}
