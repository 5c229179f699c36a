//! Reading and writing the alist sparse parity-check format.
//!
//! Layout: `n m`, `dv_max dc_max`, the `n` variable degrees, the `m` check
//! degrees, then one line of 1-based check indices per variable and one line
//! of 1-based variable indices per check, each zero-padded to the maximum
//! degree. Output uses single spaces and LF line endings. Input accepts any
//! whitespace within a line, blank lines anywhere, and unpadded lists.

use thiserror::Error;

use crate::graph::{GraphError, TannerGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlistError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    DegreeMismatch { line: usize, expected: usize, found: usize },
    #[error("line {line}: index {index} out of range 1..={max}")]
    OutOfRange { line: usize, index: usize, max: usize },
    #[error("line {line}: duplicate edge between variable {var} and check {check}")]
    DuplicateEdge { line: usize, var: usize, check: usize },
    #[error("line {line}: check lists disagree with variable lists")]
    Inconsistent { line: usize },
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-blank line as (1-based line number, tokens).
    fn next_tokens(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), AlistError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !toks.is_empty() {
                return Ok((i + 1, toks));
            }
        }
        Err(AlistError::Malformed {
            line: self.last + 1,
            msg: format!("unexpected end of input, expected {what}"),
        })
    }

    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), AlistError> {
        let (line, toks) = self.next_tokens(what)?;
        let nums = toks
            .iter()
            .map(|t| {
                t.parse::<usize>().map_err(|_| AlistError::Malformed {
                    line,
                    msg: format!("invalid integer {t:?} in {what}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((line, nums))
    }

    fn next_exact(&mut self, count: usize, what: &str) -> Result<(usize, Vec<usize>), AlistError> {
        let (line, nums) = self.next_numbers(what)?;
        if nums.len() != count {
            return Err(AlistError::Malformed {
                line,
                msg: format!("{what}: expected {count} values, found {}", nums.len()),
            });
        }
        Ok((line, nums))
    }
}

/// Reads one adjacency line: `degree` 1-based indices followed by optional zero padding.
fn adjacency_line(
    line: usize,
    nums: &[usize],
    degree: usize,
    max_degree: usize,
    range: usize,
) -> Result<Vec<usize>, AlistError> {
    let entries: Vec<usize> = nums.iter().copied().take_while(|&x| x != 0).collect();
    let padding_ok = nums[entries.len()..].iter().all(|&x| x == 0);
    if entries.len() != degree || !padding_ok || nums.len() > max_degree.max(degree) {
        return Err(AlistError::DegreeMismatch { line, expected: degree, found: entries.len() });
    }
    entries
        .into_iter()
        .map(|x| {
            if x > range {
                Err(AlistError::OutOfRange { line, index: x, max: range })
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

pub fn from_alist(text: &str) -> Result<TannerGraph, AlistError> {
    let mut lines = Lines::new(text);

    let (_, dims) = lines.next_exact(2, "header `n m`")?;
    let (n, m) = (dims[0], dims[1]);
    let (max_line, maxes) = lines.next_exact(2, "header `dv_max dc_max`")?;
    let (dv_max, dc_max) = (maxes[0], maxes[1]);

    let var_deg = if n == 0 { (max_line, Vec::new()) } else { lines.next_exact(n, "variable degrees")? };
    let chk_deg = if m == 0 { (max_line, Vec::new()) } else { lines.next_exact(m, "check degrees")? };
    for (line, degs, max) in [(var_deg.0, &var_deg.1, dv_max), (chk_deg.0, &chk_deg.1, dc_max)] {
        if let Some(&d) = degs.iter().find(|&&d| d > max) {
            return Err(AlistError::Malformed {
                line,
                msg: format!("degree {d} exceeds declared maximum {max}"),
            });
        }
    }
    let var_sum: usize = var_deg.1.iter().sum();
    let chk_sum: usize = chk_deg.1.iter().sum();
    if var_sum != chk_sum {
        return Err(AlistError::Malformed {
            line: chk_deg.0,
            msg: format!("variable degrees sum to {var_sum} but check degrees sum to {chk_sum}"),
        });
    }

    let mut var_adj = Vec::with_capacity(n);
    if dv_max > 0 {
        for v in 0..n {
            let (line, nums) = lines.next_numbers("variable adjacency")?;
            let checks = adjacency_line(line, &nums, var_deg.1[v], dv_max, m)?;
            let mut sorted = checks.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(AlistError::DuplicateEdge { line, var: v, check: w[0] });
            }
            var_adj.push(checks);
        }
    } else {
        var_adj.resize(n, Vec::new());
    }

    let mut last_line = lines.last;
    if dc_max > 0 {
        for c in 0..m {
            let (line, nums) = lines.next_numbers("check adjacency")?;
            let mut vars = adjacency_line(line, &nums, chk_deg.1[c], dc_max, n)?;
            vars.sort_unstable();
            if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
                return Err(AlistError::DuplicateEdge { line, var: w[0], check: c });
            }
            for &v in &vars {
                if !var_adj[v].contains(&c) {
                    return Err(AlistError::Inconsistent { line });
                }
            }
            last_line = line;
        }
    }

    TannerGraph::from_var_adjacency(m, var_adj).map_err(|e| match e {
        GraphError::DuplicateEdge { var, check } => {
            AlistError::DuplicateEdge { line: last_line, var, check }
        }
        _ => AlistError::Inconsistent { line: last_line },
    })
}

pub fn to_alist(g: &TannerGraph) -> String {
    use std::fmt::Write;

    let dv_max = g.max_var_degree();
    let dc_max = g.max_check_degree();
    let mut out = String::new();
    let join = |xs: &mut dyn Iterator<Item = usize>| {
        xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };

    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    writeln!(out, "{dv_max} {dc_max}").unwrap();
    writeln!(out, "{}", join(&mut (0..g.n()).map(|v| g.var_degree(v)))).unwrap();
    writeln!(out, "{}", join(&mut (0..g.m()).map(|c| g.check_degree(c)))).unwrap();
    for v in 0..g.n() {
        let padded = g.var_neighbors(v).iter().map(|&c| c + 1).chain(std::iter::repeat(0));
        writeln!(out, "{}", join(&mut padded.take(dv_max))).unwrap();
    }
    for c in 0..g.m() {
        let padded = g.check_neighbors(c).iter().map(|&v| v + 1).chain(std::iter::repeat(0));
        writeln!(out, "{}", join(&mut padded.take(dc_max))).unwrap();
    }
    out
}
