//! Entropy from counting closed non-backtracking cycles.

use super::EdgeWeighting;
use crate::error::{Error, Result};
use crate::graph::DirectedEdgeSystem;
use crate::numeric::fit::fit_line;

const WINDOW_SAMPLES: usize = 32;

/// Periodic points of the directed-edge shift with period length below `T`.
#[derive(Clone, Debug)]
pub struct CountingOracle {
    lengths: Vec<f64>,
    horizon: f64,
    rate: f64,
}

impl CountingOracle {
    /// Number of periodic points with length `< t`, for `t <= horizon`.
    pub fn count_below(&self, t: f64) -> usize {
        self.lengths.partition_point(|&x| x < t)
    }

    /// `N(T)` at the horizon.
    pub fn count(&self) -> usize {
        self.lengths.len()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Least-squares slope of `log N(t)` against `t` over `[T/2, T]`.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Sorted lengths of all enumerated periodic points.
    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }
}

/// Enumerates every closed admissible word `w_0 .. w_{n-1}` (with
/// `w_{n-1} -> w_0` admissible) whose total length is below `t_max`, and fits
/// the exponential growth rate of the count. `budget` caps the number of
/// search nodes.
pub fn entropy_counting_oracle(
    sys: &DirectedEdgeSystem,
    l: &EdgeWeighting,
    t_max: f64,
    budget: u64,
) -> Result<CountingOracle> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {t_max}")));
    }
    let lifted = sys.lift(l.lengths())?;
    let mut lengths = Vec::new();
    let mut visited = 0u64;

    struct Search<'a> {
        sys: &'a DirectedEdgeSystem,
        lifted: &'a [f64],
        t_max: f64,
        budget: u64,
    }

    fn dfs(
        s: &Search,
        start: usize,
        last: usize,
        total: f64,
        visited: &mut u64,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        *visited += 1;
        if *visited > s.budget {
            return Err(Error::BudgetExceeded { needed: *visited as u128, budget: s.budget as u128 });
        }
        if s.sys.allows(last, start) {
            out.push(total);
        }
        for j in s.sys.successors(last) {
            let next = total + s.lifted[j];
            if next < s.t_max {
                dfs(s, start, j, next, visited, out)?;
            }
        }
        Ok(())
    }

    let search = Search { sys, lifted: &lifted, t_max, budget };
    for start in 0..sys.num_states() {
        if lifted[start] < t_max {
            dfs(&search, start, start, lifted[start], &mut visited, &mut lengths)?;
        }
    }
    lengths.sort_by(f64::total_cmp);

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..WINDOW_SAMPLES {
        let t = t_max * (0.5 + 0.5 * i as f64 / (WINDOW_SAMPLES - 1) as f64);
        let c = lengths.partition_point(|&x| x < t);
        if c > 0 {
            xs.push(t);
            ys.push((c as f64).ln());
        }
    }
    let rate = fit_line(&xs, &ys).map(|f| f.slope).unwrap_or(f64::NAN);
    Ok(CountingOracle { lengths, horizon: t_max, rate })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure8() -> DirectedEdgeSystem {
        DirectedEdgeSystem::new("edge e1 a a\nedge e2 a a".parse().unwrap()).unwrap()
    }

    #[test]
    fn integer_lengths_follow_traces() {
        let sys = figure8();
        let l = EdgeWeighting::new(vec![1.0, 1.0]).unwrap();
        let oracle = entropy_counting_oracle(&sys, &l, 9.5, 1 << 24).unwrap();
        let mut expected = 0usize;
        for n in 1..=9u32 {
            let a = sys.adjacency().pow(n);
            expected += a.trace() as usize;
            assert_eq!(oracle.count_below(n as f64 + 0.5), expected);
        }
    }

    #[test]
    fn rate_near_topological_entropy() {
        let sys = figure8();
        let l = EdgeWeighting::new(vec![1.0, 1.0]).unwrap();
        let oracle = entropy_counting_oracle(&sys, &l, 14.0, 1 << 26).unwrap();
        assert!((oracle.rate() / 3f64.ln() - 1.0).abs() < 0.05, "{}", oracle.rate());
    }

    #[test]
    fn budget_is_enforced() {
        let sys = figure8();
        let l = EdgeWeighting::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(entropy_counting_oracle(&sys, &l, 14.0, 1000), Err(Error::BudgetExceeded { .. })));
    }
}
