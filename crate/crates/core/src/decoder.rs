//! Gallager A hard-decision message passing with a flooding schedule.
//!
//! Iteration `j` computes every variable-to-check message, then every
//! check-to-variable message, then the majority estimate of each variable.
//! Decoding stops at the first iteration whose estimate has zero syndrome,
//! or after `max_iterations`. A received word that is already a codeword is
//! returned without message passing.
//!
//! Messages live in flat arrays indexed by the graph's dense edge ids.

use serde::{Deserialize, Serialize};

use crate::graph::TannerGraph;
use crate::word::Word;

/// Variable-node update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateRule {
    /// Forward the received bit unless all extrinsic check messages agree.
    #[default]
    GallagerA,
    /// Send the complement of the received bit when at least `threshold`
    /// extrinsic check messages disagree with it. For column weight three
    /// `threshold = 2` coincides with Gallager A.
    GallagerB { threshold: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub max_iterations: usize,
    pub trace: bool,
    #[serde(default)]
    pub rule: UpdateRule,
}

impl DecoderConfig {
    pub fn new(max_iterations: usize) -> Self {
        assert!(max_iterations >= 1, "max_iterations must be at least 1");
        DecoderConfig { max_iterations, trace: false, rule: UpdateRule::GallagerA }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }
}

/// Messages of one iteration, indexed by edge id. Under all-zero
/// transmission a 1 is an incorrect message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageState {
    pub iteration: usize,
    pub var_to_chk: Vec<u8>,
    pub chk_to_var: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub messages: MessageState,
    pub estimate: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// The final estimate is a codeword (not necessarily the transmitted one).
    pub converged: bool,
    pub iterations_used: usize,
    pub estimate: Word,
    pub trace: Option<Vec<TraceStep>>,
}

/// Outgoing variable-to-check message under Gallager A.
///
/// `incoming` holds the check messages from every neighbor except the target.
pub fn variable_update(received_bit: u8, incoming: &[u8], first_iteration: bool) -> u8 {
    if first_iteration || incoming.is_empty() {
        return received_bit;
    }
    if incoming.iter().all(|&b| b == 1) {
        1
    } else if incoming.iter().all(|&b| b == 0) {
        0
    } else {
        received_bit
    }
}

/// Outgoing variable-to-check message under Gallager B with the given threshold.
pub fn variable_update_threshold(
    received_bit: u8,
    incoming: &[u8],
    first_iteration: bool,
    threshold: usize,
) -> u8 {
    if first_iteration || incoming.is_empty() {
        return received_bit;
    }
    let disagree = incoming.iter().filter(|&&b| b != received_bit).count();
    if disagree >= threshold.max(1) {
        received_bit ^ 1
    } else {
        received_bit
    }
}

/// Outgoing check-to-variable message: parity of the extrinsic inputs.
pub fn check_update(incoming: &[u8]) -> u8 {
    incoming.iter().fold(0, |acc, &b| acc ^ b)
}

/// Majority of all incoming check messages; an exact tie keeps the received bit.
pub fn estimate(received_bit: u8, incoming: &[u8]) -> u8 {
    let ones = incoming.iter().filter(|&&b| b == 1).count();
    match (2 * ones).cmp(&incoming.len()) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => 0,
        std::cmp::Ordering::Equal => received_bit,
    }
}

/// Parity of every check under `w`.
///
/// # Panics
///
/// Panics if `w.len() != g.n()`.
pub fn syndrome(g: &TannerGraph, w: &Word) -> Vec<u8> {
    assert_eq!(w.len(), g.n(), "word length does not match the graph");
    let bits = w.bits();
    (0..g.m())
        .map(|c| g.check_neighbors(c).iter().fold(0, |acc, &v| acc ^ bits[v]))
        .collect()
}

/// True iff `w` satisfies every check.
pub fn is_codeword(g: &TannerGraph, w: &Word) -> bool {
    assert_eq!(w.len(), g.n(), "word length does not match the graph");
    bits_are_codeword(g, w.bits())
}

fn bits_are_codeword(g: &TannerGraph, bits: &[u8]) -> bool {
    (0..g.m()).all(|c| g.check_neighbors(c).iter().fold(0, |acc, &v| acc ^ bits[v]) == 0)
}

/// Summary of one decoder run without the estimate copied out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub converged: bool,
    pub iterations: usize,
}

/// Reusable decoder state for one graph.
///
/// Holding a `Decoder` across many calls avoids reallocating the message
/// arrays, which dominates the cost of exhaustive sweeps.
#[derive(Debug, Clone)]
pub struct Decoder<'g> {
    graph: &'g TannerGraph,
    rule: UpdateRule,
    received: Vec<u8>,
    v2c: Vec<u8>,
    c2v: Vec<u8>,
    estimate: Vec<u8>,
    scratch_support: Vec<usize>,
}

impl<'g> Decoder<'g> {
    pub fn new(graph: &'g TannerGraph, rule: UpdateRule) -> Self {
        let e = graph.num_edges();
        Decoder {
            graph,
            rule,
            received: vec![0; graph.n()],
            v2c: vec![0; e],
            c2v: vec![0; e],
            estimate: vec![0; graph.n()],
            scratch_support: Vec::new(),
        }
    }

    pub fn graph(&self) -> &'g TannerGraph {
        self.graph
    }

    /// Estimate left by the last run.
    pub fn estimate(&self) -> &[u8] {
        &self.estimate
    }

    pub fn estimate_is_zero(&self) -> bool {
        self.estimate.iter().all(|&b| b == 0)
    }

    pub fn estimate_weight(&self) -> usize {
        self.estimate.iter().filter(|&&b| b != 0).count()
    }

    /// Decodes the word with ones at `support` (all other bits zero).
    pub fn decode_support(&mut self, support: &[usize], max_iterations: usize) -> RunSummary {
        for &i in &self.scratch_support {
            self.received[i] = 0;
        }
        self.scratch_support.clear();
        for &i in support {
            self.received[i] = 1;
            self.scratch_support.push(i);
        }
        self.run_loaded(max_iterations, true, None)
    }

    pub fn decode(&mut self, r: &Word, cfg: &DecoderConfig) -> DecodeOutcome {
        assert!(cfg.max_iterations >= 1, "max_iterations must be at least 1");
        self.rule = cfg.rule;
        self.load(r);
        let mut trace = cfg.trace.then(Vec::new);
        let summary = self.run_loaded(cfg.max_iterations, true, trace.as_mut());
        DecodeOutcome {
            converged: summary.converged,
            iterations_used: summary.iterations,
            estimate: Word::from_bits(self.estimate.clone()),
            trace,
        }
    }

    /// Runs exactly `iterations` iterations, ignoring the stopping rule, and
    /// returns every iteration's messages and estimate.
    pub fn run_fixed(&mut self, r: &Word, iterations: usize) -> Vec<TraceStep> {
        self.load(r);
        let mut trace = Vec::with_capacity(iterations);
        self.run_loaded(iterations, false, Some(&mut trace));
        trace
    }

    fn load(&mut self, r: &Word) {
        assert_eq!(r.len(), self.graph.n(), "received word length does not match the graph");
        self.received.copy_from_slice(r.bits());
        self.scratch_support = r.support();
    }

    fn run_loaded(
        &mut self,
        max_iterations: usize,
        stop_on_codeword: bool,
        mut trace: Option<&mut Vec<TraceStep>>,
    ) -> RunSummary {
        if stop_on_codeword && bits_are_codeword(self.graph, &self.received) {
            self.estimate.copy_from_slice(&self.received);
            return RunSummary { converged: true, iterations: 0 };
        }

        let mut converged = false;
        let mut iterations = 0;
        for j in 1..=max_iterations {
            self.variable_phase(j == 1);
            self.check_phase();
            self.estimate_phase();
            iterations = j;
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceStep {
                    messages: MessageState {
                        iteration: j,
                        var_to_chk: self.v2c.clone(),
                        chk_to_var: self.c2v.clone(),
                    },
                    estimate: Word::from_bits(self.estimate.clone()),
                });
            }
            converged = bits_are_codeword(self.graph, &self.estimate);
            if stop_on_codeword && converged {
                break;
            }
        }
        RunSummary { converged, iterations }
    }

    fn variable_phase(&mut self, first: bool) {
        let g = self.graph;
        if first {
            for v in 0..g.n() {
                let r = self.received[v];
                self.v2c[g.var_edge_range(v)].fill(r);
            }
            return;
        }
        for v in 0..g.n() {
            let range = g.var_edge_range(v);
            let r = self.received[v];
            let ext = range.len().saturating_sub(1);
            let ones: usize = self.c2v[range.clone()].iter().map(|&b| b as usize).sum();
            for e in range {
                let others = ones - self.c2v[e] as usize;
                self.v2c[e] = match self.rule {
                    _ if ext == 0 => r,
                    UpdateRule::GallagerA => {
                        if others == ext {
                            1
                        } else if others == 0 {
                            0
                        } else {
                            r
                        }
                    }
                    UpdateRule::GallagerB { threshold } => {
                        let disagree = if r == 1 { ext - others } else { others };
                        if disagree >= threshold.max(1) {
                            r ^ 1
                        } else {
                            r
                        }
                    }
                };
            }
        }
    }

    fn check_phase(&mut self) {
        let g = self.graph;
        for c in 0..g.m() {
            let ids = g.check_edge_ids(c);
            let parity = ids.iter().fold(0, |acc, &e| acc ^ self.v2c[e]);
            for &e in ids {
                self.c2v[e] = parity ^ self.v2c[e];
            }
        }
    }

    fn estimate_phase(&mut self) {
        let g = self.graph;
        for v in 0..g.n() {
            let range = g.var_edge_range(v);
            let deg = range.len();
            let ones: usize = self.c2v[range].iter().map(|&b| b as usize).sum();
            self.estimate[v] = match (2 * ones).cmp(&deg) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => self.received[v],
            };
        }
    }
}

/// Decodes `r` on `g`. Equivalent to a fresh [`Decoder`].
pub fn decode(g: &TannerGraph, r: &Word, cfg: &DecoderConfig) -> DecodeOutcome {
    Decoder::new(g, cfg.rule).decode(r, cfg)
}

/// Like [`decode`], always retaining the per-iteration trace.
pub fn decode_with_trace(g: &TannerGraph, r: &Word, cfg: &DecoderConfig) -> DecodeOutcome {
    decode(g, r, &cfg.with_trace())
}

/// Messages of exactly `iterations` Gallager A iterations, with no early stop.
pub fn message_trace(g: &TannerGraph, r: &Word, iterations: usize) -> Vec<TraceStep> {
    Decoder::new(g, UpdateRule::GallagerA).run_fixed(r, iterations)
}

#[derive(Serialize)]
struct TraceRecord<'a> {
    j: usize,
    incorrect_v2c_edges: Vec<usize>,
    incorrect_c2v_edges: Vec<usize>,
    estimate_support: &'a [usize],
}

/// One JSON object per iteration, newline separated.
pub fn trace_to_jsonl(trace: &[TraceStep]) -> String {
    let ones = |bits: &[u8]| -> Vec<usize> {
        bits.iter().enumerate().filter_map(|(i, &b)| (b == 1).then_some(i)).collect()
    };
    let mut out = String::new();
    for step in trace {
        let support = step.estimate.support();
        let rec = TraceRecord {
            j: step.messages.iteration,
            incorrect_v2c_edges: ones(&step.messages.var_to_chk),
            incorrect_c2v_edges: ones(&step.messages.chk_to_var),
            estimate_support: &support,
        };
        out.push_str(&serde_json::to_string(&rec).expect("trace record serializes"));
        out.push('\n');
    }
    out
}
