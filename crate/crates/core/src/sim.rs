//! Monte Carlo simulation of Gallager A over the binary symmetric channel.
//!
//! The all-zero codeword is sent; a frame is in error iff the final estimate
//! is nonzero. Frame `i` at the `j`-th crossover probability draws its flips
//! from its own generator keyed by `(master_seed, j, i)`, and frames are
//! processed in fixed-size batches whose tallies are added in batch order,
//! so results do not depend on the thread count.

use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoder::{Decoder, UpdateRule};
use crate::graph::TannerGraph;
use crate::seed::rng_for;

pub const DEFAULT_TARGET_FRAME_ERRORS: u64 = 100;
pub const BATCH_FRAMES: u64 = 4096;
const BATCHES_PER_ROUND: u64 = 16;
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),
    #[error("slope fit needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("slope fit needs positive p and FER, got p = {p}, FER = {fer}")]
    NonPositive { p: f64, fer: f64 },
    #[error("slope fit needs at least two distinct p values")]
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub crossover_probabilities: Vec<f64>,
    /// Upper bound on frames per point.
    pub frames_per_point: u64,
    /// Stop a point early once this many frame errors are seen.
    pub target_frame_errors: Option<u64>,
    pub max_iterations: usize,
    pub master_seed: u64,
    /// Inclusive p-range used for the slope fit; all points when absent.
    pub fit_range: Option<(f64, f64)>,
}

impl SimSpec {
    pub fn new(crossover_probabilities: Vec<f64>, frames_per_point: u64, max_iterations: usize, master_seed: u64) -> Self {
        SimSpec {
            crossover_probabilities,
            frames_per_point,
            target_frame_errors: Some(DEFAULT_TARGET_FRAME_ERRORS),
            max_iterations,
            master_seed,
            fit_range: None,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.crossover_probabilities.is_empty() {
            return Err(SimError::InvalidSpec("no crossover probabilities".into()));
        }
        if let Some(p) = self.crossover_probabilities.iter().find(|&&p| !(p > 0.0 && p < 0.5)) {
            return Err(SimError::InvalidSpec(format!("crossover probability {p} outside (0, 0.5)")));
        }
        if self.frames_per_point == 0 {
            return Err(SimError::InvalidSpec("frames_per_point must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(SimError::InvalidSpec("max_iterations must be at least 1".into()));
        }
        if self.target_frame_errors == Some(0) {
            return Err(SimError::InvalidSpec("target_frame_errors must be at least 1".into()));
        }
        if let Some((lo, hi)) = self.fit_range {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(SimError::InvalidSpec(format!("fit range [{lo}, {hi}] is empty")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub p: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    /// Half-width of the normal-approximation 95% interval on FER.
    pub ci_half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub points: Vec<SimPoint>,
    /// Log-log FER slope over the fit range; absent when fewer than two
    /// points there have a frame error.
    pub slope: Option<f64>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,frames,frame_errors,bit_errors,fer,ber,ci\n");
        for pt in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                pt.p, pt.frames, pt.frame_errors, pt.bit_errors, pt.fer, pt.ber, pt.ci_half_width
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sim result serializes")
    }
}

/// Positions flipped in frame `frame` at probability index `p_index`, sorted.
pub fn frame_error_pattern(n: usize, p: f64, master_seed: u64, p_index: u64, frame: u64) -> Vec<usize> {
    let mut rng = rng_for(master_seed, p_index, frame);
    let gaps = Geometric::new(p).expect("p in (0, 1]");
    let mut out = Vec::new();
    let mut pos: u64 = 0;
    loop {
        pos = pos.saturating_add(gaps.sample(&mut rng));
        if pos >= n as u64 {
            return out;
        }
        out.push(pos as usize);
        pos += 1;
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
}

fn run_batch(g: &TannerGraph, spec: &SimSpec, p_index: usize, start: u64, end: u64) -> Tally {
    let p = spec.crossover_probabilities[p_index];
    let mut dec = Decoder::new(g, UpdateRule::GallagerA);
    let mut t = Tally::default();
    for frame in start..end {
        let flips = frame_error_pattern(g.n(), p, spec.master_seed, p_index as u64, frame);
        t.frames += 1;
        if flips.is_empty() {
            continue;
        }
        dec.decode_support(&flips, spec.max_iterations);
        let wrong = dec.estimate_weight() as u64;
        if wrong > 0 {
            t.frame_errors += 1;
            t.bit_errors += wrong;
        }
    }
    t
}

fn simulate_point(g: &TannerGraph, spec: &SimSpec, p_index: usize) -> SimPoint {
    let target = spec.target_frame_errors.unwrap_or(u64::MAX);
    let mut total = Tally::default();
    let mut next = 0u64;
    'rounds: while next < spec.frames_per_point && total.frame_errors < target {
        let mut batches = Vec::new();
        for _ in 0..BATCHES_PER_ROUND {
            if next >= spec.frames_per_point {
                break;
            }
            let end = (next + BATCH_FRAMES).min(spec.frames_per_point);
            batches.push((next, end));
            next = end;
        }
        let tallies: Vec<Tally> =
            batches.par_iter().map(|&(s, e)| run_batch(g, spec, p_index, s, e)).collect();
        for t in tallies {
            total.frames += t.frames;
            total.frame_errors += t.frame_errors;
            total.bit_errors += t.bit_errors;
            if total.frame_errors >= target {
                break 'rounds;
            }
        }
    }

    let p = spec.crossover_probabilities[p_index];
    let frames = total.frames as f64;
    let fer = total.frame_errors as f64 / frames;
    SimPoint {
        p,
        frames: total.frames,
        frame_errors: total.frame_errors,
        bit_errors: total.bit_errors,
        fer,
        ber: total.bit_errors as f64 / (frames * g.n().max(1) as f64),
        ci_half_width: Z95 * (fer * (1.0 - fer) / frames).sqrt(),
    }
}

/// Simulates every crossover probability of `spec` and fits the FER slope.
pub fn simulate(g: &TannerGraph, spec: &SimSpec) -> Result<SimResult, SimError> {
    spec.validate()?;
    let points: Vec<SimPoint> =
        (0..spec.crossover_probabilities.len()).map(|j| simulate_point(g, spec, j)).collect();
    let fit: Vec<(f64, f64)> = points
        .iter()
        .filter(|pt| spec.fit_range.is_none_or(|(lo, hi)| pt.p >= lo && pt.p <= hi))
        .filter(|pt| pt.frame_errors > 0)
        .map(|pt| (pt.p, pt.fer))
        .collect();
    let slope = fit_slope(&fit).ok();
    Ok(SimResult { points, slope })
}

/// Least-squares slope of `ln FER` against `ln p`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64, SimError> {
    if points.len() < 2 {
        return Err(SimError::TooFewPoints(points.len()));
    }
    if let Some(&(p, fer)) = points.iter().find(|&&(p, fer)| !(p > 0.0 && fer > 0.0)) {
        return Err(SimError::NonPositive { p, fer });
    }
    let xs: Vec<f64> = points.iter().map(|&(p, _)| p.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, f)| f.ln()).collect();
    let k = points.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(SimError::Degenerate);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Geometrically spaced probabilities from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (points - 1) as f64).exp())
            .collect(),
    }
}
