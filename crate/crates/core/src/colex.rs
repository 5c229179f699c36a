//! k-subsets of `0..n` in colexicographic order, with ranking.
//!
//! A sorted subset `c_0 < c_1 < ... < c_{k-1}` has rank
//! `sum_i C(c_i, i + 1)`, so the rank range `[0, C(n, k))` can be cut into
//! independent chunks, each resumed from `unrank(start)`.

/// Binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at each step: acc * (n - i) / (i + 1) = C(n, i + 1)
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

fn choose(n: usize, k: usize) -> u128 {
    binomial(n as u64, k as u64).expect("binomial overflow")
}

pub fn rank(subset: &[usize]) -> u128 {
    subset.iter().enumerate().map(|(i, &c)| choose(c, i + 1)).sum()
}

/// The `k`-subset with colex rank `r`.
pub fn unrank(mut r: u128, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for i in (0..k).rev() {
        // largest c with C(c, i + 1) <= r
        let mut c = i;
        while choose(c + 1, i + 1) <= r {
            c += 1;
        }
        r -= choose(c, i + 1);
        out[i] = c;
    }
    out
}

/// Advances `subset` to its colex successor among subsets of `0..n`.
/// Returns `false` (leaving `subset` unspecified) past the last one.
pub fn next(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in 0..k {
        let limit = if i + 1 < k { subset[i + 1] } else { n };
        if subset[i] + 1 < limit {
            subset[i] += 1;
            for (j, s) in subset.iter_mut().enumerate().take(i) {
                *s = j;
            }
            return true;
        }
    }
    false
}

/// Iterator over the subsets with ranks in `[start, end)`.
pub struct ColexRange {
    current: Vec<usize>,
    n: usize,
    remaining: u128,
}

impl ColexRange {
    pub fn new(n: usize, k: usize, start: u128, end: u128) -> Self {
        let end = end.min(choose(n, k));
        let remaining = end.saturating_sub(start);
        let current = if remaining > 0 { unrank(start, k) } else { Vec::new() };
        ColexRange { current, n, remaining }
    }

    /// Calls `f` on each subset in order; stops early when `f` returns `false`.
    pub fn for_each_while(mut self, mut f: impl FnMut(&[usize]) -> bool) {
        while self.remaining > 0 {
            if !f(&self.current) {
                return;
            }
            self.remaining -= 1;
            if self.remaining > 0 {
                next(&mut self.current, self.n);
            }
        }
    }
}

impl Iterator for ColexRange {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.current.clone();
        self.remaining -= 1;
        if self.remaining > 0 {
            next(&mut self.current, self.n);
        }
        Some(out)
    }
}
