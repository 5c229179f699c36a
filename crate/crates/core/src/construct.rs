//! Progressive edge growth and the weight-four codeword control graph.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{girth, Girth, TannerGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("invalid construction spec: {0}")]
    InvalidSpec(String),
    #[error("cannot place edge {edge} of variable {var} without a parallel edge")]
    Infeasible { var: usize, edge: usize },
    #[error("cannot embed a weight-four codeword: {0}")]
    EmbedInfeasible(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub n: usize,
    pub m: usize,
    pub dv: usize,
    pub target_girth: usize,
    pub seed: u64,
}

impl ConstructionSpec {
    pub fn validate(&self) -> Result<(), ConstructError> {
        if self.n == 0 || self.m == 0 {
            return Err(ConstructError::InvalidSpec("n and m must be positive".into()));
        }
        if self.dv == 0 {
            return Err(ConstructError::InvalidSpec("dv must be positive".into()));
        }
        if self.target_girth < 4 || self.target_girth % 2 == 1 {
            return Err(ConstructError::InvalidSpec(format!(
                "target girth {} must be even and at least 4",
                self.target_girth
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PegOutcome {
    pub graph: TannerGraph,
    pub achieved_girth: Girth,
}

/// Builds a column-weight-`dv` graph by progressive edge growth.
///
/// Variables are processed in ascending order and their edges placed one at
/// a time. A candidate check closes a cycle of length `dist + 1`, where
/// `dist` is its current distance from the variable (unreachable checks close
/// no cycle). Candidates reaching `target_girth` are preferred, otherwise
/// those closing the longest cycle. Ties go to the lowest current check
/// degree, then to a seeded random order of the checks.
pub fn peg_construct(spec: &ConstructionSpec) -> Result<PegOutcome, ConstructError> {
    spec.validate()?;
    let (n, m) = (spec.n, spec.m);

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
    let mut priority = vec![0; m];
    for (rank, &c) in order.iter().enumerate() {
        priority[c] = rank;
    }

    let mut var_adj: Vec<Vec<usize>> = vec![Vec::with_capacity(spec.dv); n];
    let mut chk_adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    // BFS scratch over variables [0, n) and checks [n, n + m)
    let mut dist = vec![usize::MAX; n + m];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();

    for v in 0..n {
        for k in 0..spec.dv {
            for &i in &touched {
                dist[i] = usize::MAX;
            }
            touched.clear();
            if k > 0 {
                queue.clear();
                dist[v] = 0;
                touched.push(v);
                queue.push_back(v);
                while let Some(x) = queue.pop_front() {
                    let d = dist[x];
                    let nbrs: &[usize] = if x < n { &var_adj[x] } else { &chk_adj[x - n] };
                    for &y in nbrs {
                        let idx = if x < n { n + y } else { y };
                        if dist[idx] == usize::MAX {
                            dist[idx] = d + 1;
                            touched.push(idx);
                            queue.push_back(idx);
                        }
                    }
                }
            }

            // cycle length closed by connecting v to c; usize::MAX = none
            let cycle_len = |c: usize| dist[n + c].saturating_add(1);
            let candidates = (0..m).filter(|&c| !var_adj[v].contains(&c));
            let best = candidates
                .map(|c| {
                    let len = cycle_len(c);
                    let meets = len >= spec.target_girth;
                    // lower key wins
                    let key = if meets { 0 } else { usize::MAX - len };
                    (key, chk_adj[c].len(), priority[c], c)
                })
                .min()
                .ok_or(ConstructError::Infeasible { var: v, edge: k })?;
            let c = best.3;
            var_adj[v].push(c);
            chk_adj[c].push(v);
        }
    }

    let graph = TannerGraph::from_var_adjacency(m, var_adj).expect("PEG never creates parallel edges");
    let achieved_girth = girth(&graph);
    Ok(PegOutcome { graph, achieved_girth })
}

/// Runs [`peg_construct`] with seeds `spec.seed, spec.seed + 1, ...` for up
/// to `attempts` tries, returning the first outcome meeting the target girth
/// or else the one with the largest girth (earliest seed on ties), together
/// with the seed used.
pub fn peg_search(spec: &ConstructionSpec, attempts: usize) -> Result<(PegOutcome, u64), ConstructError> {
    let mut best: Option<(PegOutcome, u64)> = None;
    for i in 0..attempts.max(1) as u64 {
        let seed = spec.seed.wrapping_add(i);
        let out = peg_construct(&ConstructionSpec { seed, ..spec.clone() })?;
        let hit = out.achieved_girth.is_at_least(spec.target_girth);
        if best.as_ref().is_none_or(|(b, _)| out.achieved_girth > b.achieved_girth) {
            best = Some((out, seed));
        }
        if hit {
            break;
        }
    }
    Ok(best.expect("at least one attempt"))
}

/// Rewires four variables of `g` so that they form a weight-four codeword.
///
/// Variables `0..4` lose their edges and are reconnected through six checks,
/// one per pair of the four, so every chosen check holds exactly two of them.
/// The checks are picked greedily (lowest degree, then lowest index) so that
/// no other variable touches two of them, which keeps the result free of
/// 4-cycles. The six checks then close 6-cycles, so the girth is exactly 6.
///
/// Requires `g` to have girth at least 6, `n >= 4` and `m >= 6`.
pub fn embed_weight4_codeword(g: &TannerGraph) -> Result<TannerGraph, ConstructError> {
    if g.n() < 4 || g.m() < 6 {
        return Err(ConstructError::EmbedInfeasible(format!(
            "need at least 4 variables and 6 checks, got n = {}, m = {}",
            g.n(),
            g.m()
        )));
    }
    if !girth(g).is_at_least(6) {
        return Err(ConstructError::EmbedInfeasible("input graph has 4-cycles".into()));
    }

    let gadget = [0usize, 1, 2, 3];
    let mut var_adj = g.clone().into_var_adjacency();
    for &v in &gadget {
        var_adj[v].clear();
    }
    let mut chk_adj: Vec<Vec<usize>> = vec![Vec::new(); g.m()];
    for (v, checks) in var_adj.iter().enumerate() {
        for &c in checks {
            chk_adj[c].push(v);
        }
    }

    let mut by_degree: Vec<usize> = (0..g.m()).collect();
    by_degree.sort_by_key(|&c| (chk_adj[c].len(), c));
    let mut used_vars = vec![false; g.n()];
    let mut chosen = Vec::with_capacity(6);
    for c in by_degree {
        if chk_adj[c].iter().any(|&v| used_vars[v]) {
            continue;
        }
        for &v in &chk_adj[c] {
            used_vars[v] = true;
        }
        chosen.push(c);
        if chosen.len() == 6 {
            break;
        }
    }
    if chosen.len() < 6 {
        return Err(ConstructError::EmbedInfeasible(
            "fewer than six checks with pairwise disjoint neighborhoods".into(),
        ));
    }

    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for (&(a, b), &c) in pairs.iter().zip(&chosen) {
        var_adj[gadget[a]].push(c);
        var_adj[gadget[b]].push(c);
    }
    Ok(TannerGraph::from_var_adjacency(g.m(), var_adj).expect("gadget checks are distinct"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::is_codeword;
    use crate::graph::validate_column_weight;
    use crate::word::Word;

    fn spec(n: usize, m: usize, dv: usize, target_girth: usize, seed: u64) -> ConstructionSpec {
        ConstructionSpec { n, m, dv, target_girth, seed }
    }

    #[test]
    fn three_by_three_ring() {
        for seed in 0..5 {
            let out = peg_construct(&spec(3, 3, 2, 6, seed)).unwrap();
            assert_eq!(out.achieved_girth, Girth::Finite(6));
            assert!(validate_column_weight(&out.graph, 2));
            assert!((0..3).all(|c| out.graph.check_degree(c) == 2));
        }
    }

    #[test]
    fn pigeonhole_infeasible() {
        assert_eq!(
            peg_construct(&spec(5, 2, 3, 10, 0)),
            Err(ConstructError::Infeasible { var: 0, edge: 2 })
        );
    }

    #[test]
    fn rejects_odd_target() {
        assert!(matches!(peg_construct(&spec(10, 5, 3, 7, 0)), Err(ConstructError::InvalidSpec(_))));
    }

    #[test]
    fn deterministic_given_seed() {
        let a = peg_construct(&spec(40, 30, 3, 8, 11)).unwrap();
        let b = peg_construct(&spec(40, 30, 3, 8, 11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn minimal_weight4_instance() {
        let base = TannerGraph::from_edges(4, 6, []).unwrap();
        let g = embed_weight4_codeword(&base).unwrap();
        assert!(validate_column_weight(&g, 3));
        assert_eq!(girth(&g), Girth::Finite(6));
        assert!(is_codeword(&g, &Word::from_support(4, &[0, 1, 2, 3])));
        assert!(is_codeword(&g, &Word::zeros(4)));
        for a in 0..4 {
            for b in a + 1..4 {
                let shared = g.var_neighbors(a).iter().filter(|c| g.var_neighbors(b).contains(c)).count();
                assert_eq!(shared, 1);
            }
        }
    }

    #[test]
    fn embed_rejects_small_or_four_cycle_graphs() {
        let small = TannerGraph::from_edges(3, 6, []).unwrap();
        assert!(embed_weight4_codeword(&small).is_err());
        let four_cycle =
            TannerGraph::from_edges(4, 6, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(embed_weight4_codeword(&four_cycle).is_err());
    }
}
