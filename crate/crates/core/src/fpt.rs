//! First-passage times of finite discrete-time Markov chains.
//!
//! For a chain with transition probabilities `p[i][j]`, the probability
//! `f_ij(n)` that the chain started in `i` reaches `j` for the first time at
//! step `n` obeys
//!
//! ```text
//! f_ij(1) = p[i][j]
//! f_ij(n) = Σ_{k ≠ j} p[i][k] · f_kj(n - 1)
//! ```
//!
//! which is evaluated for every origin at once as a matrix-vector product
//! with column `j` of the transition matrix removed. The expected first
//! passage time `μ_ij = Σ n · f_ij(n)` is available both as a truncated
//! series ([`efpt_series`]) and as the solution of the first-step equations
//! `μ_kj = 1 + Σ_{l ≠ j} p[k][l] μ_lj` ([`efpt_linear`]). The mean is only
//! meaningful when `Σ f_ij(n) = 1`, which [`check_well_defined`] diagnoses.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row sums must be within this distance of one.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;

/// Pivots smaller than this make the first-step system singular.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const DEFAULT_MAX_HORIZON: usize = 4000;

/// Square row-stochastic matrix with optional state labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticMatrix {
    size: usize,
    data: Vec<f64>,
    labels: Vec<String>,
}

impl StochasticMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::with_labels(rows, labels)
    }

    pub fn with_labels(rows: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if labels.len() != size {
            return Err(Error::InvalidArgument(format!(
                "{} labels for a {size}-state matrix",
                labels.len()
            )));
        }
        let mut data = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::NotStochastic {
                    row: i,
                    reason: format!("has {} entries, expected {size}", row.len()),
                });
            }
            if let Some(x) = row.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::NotStochastic {
                    row: i,
                    reason: format!("entry {x} outside [0, 1]"),
                });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
                return Err(Error::NotStochastic {
                    row: i,
                    reason: format!("sums to {sum}"),
                });
            }
            data.extend(row);
        }
        Ok(Self { size, data, labels })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn check_state(&self, index: usize) -> Result<()> {
        if index < self.size {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                index,
                size: self.size,
            })
        }
    }

    fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(s)
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(l, _)| l)
    }

    /// States reachable from `from` in one or more steps. When `avoid` is
    /// given, paths may end at it but not pass through it.
    fn reach(&self, from: usize, avoid: Option<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.size];
        let mut queue: VecDeque<usize> = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            for l in self.successors(s) {
                if !seen[l] {
                    seen[l] = true;
                    if Some(l) != avoid {
                        queue.push_back(l);
                    }
                }
            }
        }
        seen
    }

    /// Whether `to` can be reached from `from` in at least one step.
    pub fn reachable(&self, from: usize, to: usize) -> bool {
        self.reach(from, None)[to]
    }

    /// A closed communicating class reachable from `from`. Used to name the
    /// trap when a target cannot be reached.
    fn closed_class_from(&self, from: usize) -> Vec<usize> {
        let mut candidates = self.reach(from, None);
        candidates[from] = true;
        let reach_sets: Vec<Option<Vec<bool>>> = (0..self.size)
            .map(|s| candidates[s].then(|| self.reach(s, None)))
            .collect();
        for s in 0..self.size {
            let Some(rs) = &reach_sets[s] else { continue };
            // s lies in a closed class iff every state it reaches leads back to it.
            let closed = (0..self.size).all(|t| !rs[t] || t == s || self.reach(t, None)[s]);
            if closed && rs[s] {
                return (0..self.size).filter(|&t| rs[t]).collect();
            }
        }
        // A finite chain always has a closed class below any state.
        unreachable!("no closed class reachable from state {from}")
    }
}

/// Runs the first-passage recursion for all origins simultaneously.
struct FirstPassage<'a> {
    m: &'a StochasticMatrix,
    target: usize,
    current: Vec<f64>,
    next: Vec<f64>,
    step: usize,
}

impl<'a> FirstPassage<'a> {
    fn new(m: &'a StochasticMatrix, target: usize) -> Self {
        Self {
            m,
            target,
            current: vec![0.0; m.size()],
            next: vec![0.0; m.size()],
            step: 0,
        }
    }

    /// Advances to the next step; returns `f_kj(step)` for every origin `k`.
    fn advance(&mut self) -> &[f64] {
        let k = self.m.size();
        if self.step == 0 {
            for s in 0..k {
                self.current[s] = self.m.get(s, self.target);
            }
        } else {
            for s in 0..k {
                let row = self.m.row(s);
                self.next[s] = (0..k)
                    .filter(|&l| l != self.target)
                    .map(|l| row[l] * self.current[l])
                    .sum();
            }
            std::mem::swap(&mut self.current, &mut self.next);
        }
        self.step += 1;
        &self.current
    }
}

/// Distribution of the first passage time from `source` to `target`,
/// truncated at `horizon` steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FptDistribution {
    pub source: usize,
    pub target: usize,
    /// `f[n - 1]` is the probability of first arrival at step `n`.
    pub f: Vec<f64>,
    pub horizon: usize,
    pub covered_mass: f64,
    pub residual: f64,
}

impl FptDistribution {
    pub fn cdf(&self) -> Vec<f64> {
        fpt_cdf(self)
    }

    /// Probability of not having arrived by step `n`.
    pub fn survival(&self) -> Vec<f64> {
        self.cdf().into_iter().map(|c| 1.0 - c).collect()
    }
}

pub fn fpt_distribution(
    m: &StochasticMatrix,
    source: usize,
    target: usize,
    horizon: usize,
) -> Result<FptDistribution> {
    m.check_state(source)?;
    m.check_state(target)?;
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let mut rec = FirstPassage::new(m, target);
    let f: Vec<f64> = (0..horizon).map(|_| rec.advance()[source]).collect();
    let covered_mass: f64 = f.iter().sum();
    Ok(FptDistribution {
        source,
        target,
        f,
        horizon,
        covered_mass,
        residual: 1.0 - covered_mass,
    })
}

/// Cumulative probability of having arrived by each step.
pub fn fpt_cdf(d: &FptDistribution) -> Vec<f64> {
    d.f.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EfptMethod {
    Series,
    LinearSystem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfptResult {
    pub efpt_quarters: f64,
    pub efpt_years: f64,
    pub covered_mass: f64,
    pub converged: bool,
    pub method: EfptMethod,
    /// Number of series terms summed; zero for the linear solve.
    pub terms: usize,
}

impl EfptResult {
    fn new(quarters: f64, covered_mass: f64, converged: bool, method: EfptMethod, terms: usize) -> Self {
        Self {
            efpt_quarters: quarters,
            efpt_years: quarters / 4.0,
            covered_mass,
            converged,
            method,
            terms,
        }
    }
}

fn check_series_args(epsilon: f64, max_horizon: usize) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if max_horizon == 0 {
        return Err(Error::InvalidArgument("max_horizon must be >= 1".into()));
    }
    Ok(())
}

/// Relative size of the neglected tail at which series summation stops.
const TAIL_TOLERANCE: f64 = 1e-14;

/// Expected first passage time as the truncated sum `Σ n · f(n)`.
///
/// The result is flagged `converged` once the uncovered mass drops below
/// `epsilon`. Summation then continues until the remaining tail
/// `Σ_{n>N} n · f(n)` is negligible in double precision, estimated from the
/// decay of the survival probability; otherwise the truncation error would
/// be roughly `epsilon · (N + μ)`. If the mass criterion is not met within
/// `max_horizon` steps the partial sum is returned with `converged = false`.
pub fn efpt_series(
    m: &StochasticMatrix,
    source: usize,
    target: usize,
    epsilon: f64,
    max_horizon: usize,
) -> Result<EfptResult> {
    m.check_state(source)?;
    m.check_state(target)?;
    check_series_args(epsilon, max_horizon)?;
    let mut rec = FirstPassage::new(m, target);
    let mut survival = Survival::new(m, target);
    let (mut mass, mut mean) = (0.0, 0.0);
    let mut prev_surv = 1.0;
    let mut terms = max_horizon;
    for n in 1..=max_horizon {
        let f = rec.advance()[source];
        let surv = survival.advance()[source];
        mass += f;
        mean += n as f64 * f;
        if surv < epsilon {
            let ratio = if prev_surv > 0.0 { surv / prev_surv } else { 0.0 };
            let tail = if ratio < 1.0 {
                surv * (n as f64 + 1.0 / (1.0 - ratio))
            } else {
                f64::INFINITY
            };
            if tail <= TAIL_TOLERANCE * mean.max(1.0) {
                terms = n;
                break;
            }
        }
        prev_surv = surv;
    }
    let converged = mass >= 1.0 - epsilon;
    Ok(EfptResult::new(mean, mass, converged, EfptMethod::Series, terms))
}

/// Probability of not having reached the target after each step, for every
/// origin: `s_0 = 1`, `s_n(k) = Σ_{l ≠ j} p[k][l] s_{n-1}(l)`. Tracked apart
/// from `f` so the residual mass carries no cancellation error.
struct Survival<'a> {
    m: &'a StochasticMatrix,
    target: usize,
    current: Vec<f64>,
    next: Vec<f64>,
}

impl<'a> Survival<'a> {
    fn new(m: &'a StochasticMatrix, target: usize) -> Self {
        Self {
            m,
            target,
            current: vec![1.0; m.size()],
            next: vec![0.0; m.size()],
        }
    }

    fn advance(&mut self) -> &[f64] {
        let k = self.m.size();
        for s in 0..k {
            let row = self.m.row(s);
            self.next[s] = (0..k)
                .filter(|&l| l != self.target)
                .map(|l| row[l] * self.current[l])
                .sum();
        }
        std::mem::swap(&mut self.current, &mut self.next);
        &self.current
    }
}

/// Expected first passage time from the first-step equations.
///
/// Only states reachable from `source` without passing through `target`
/// enter the system; if any of them cannot reach `target` the expectation is
/// infinite and the error names the closed class that traps the chain.
pub fn efpt_linear(m: &StochasticMatrix, source: usize, target: usize) -> Result<EfptResult> {
    m.check_state(source)?;
    m.check_state(target)?;
    let k = m.size();

    let mut transient = m.reach(source, Some(target));
    transient[target] = false;
    if source != target {
        transient[source] = true;
    }
    let states: Vec<usize> = (0..k).filter(|&s| transient[s]).collect();

    if let Some(&stuck) = states.iter().find(|&&s| !m.reachable(s, target)) {
        return Err(Error::InfiniteEfpt {
            source_state: m.label(source).to_string(),
            target: m.label(target).to_string(),
            trapped_class: m
                .closed_class_from(stuck)
                .into_iter()
                .map(|s| m.label(s).to_string())
                .collect(),
        });
    }

    // (I - Q) μ = 1 over the transient states.
    let n = states.len();
    let mut a = vec![vec![0.0; n]; n];
    for (r, &s) in states.iter().enumerate() {
        for (c, &l) in states.iter().enumerate() {
            a[r][c] = f64::from(u8::from(r == c)) - m.get(s, l);
        }
    }
    let mu = solve_dense(a, vec![1.0; n])?;

    let quarters = if source == target {
        1.0 + states
            .iter()
            .zip(&mu)
            .map(|(&l, x)| m.get(source, l) * x)
            .sum::<f64>()
    } else {
        let pos = states.iter().position(|&s| s == source).expect("source is transient");
        mu[pos]
    };
    Ok(EfptResult::new(quarters, 1.0, true, EfptMethod::LinearSystem, 0))
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty range");
        let pivot = a[pivot_row][col];
        if pivot.abs() < PIVOT_THRESHOLD {
            return Err(Error::Singular { pivot });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for (r, row) in lower.iter_mut().enumerate() {
            let factor = row[col] / pivot_row[col];
            if factor == 0.0 {
                continue;
            }
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
            b[col + 1 + r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WellDefined,
    Suspect,
    Divergent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::WellDefined => "well_defined",
            Verdict::Suspect => "suspect",
            Verdict::Divergent => "divergent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellDefinedness {
    pub mass_at_horizon: f64,
    pub reachable: bool,
    pub verdict: Verdict,
    /// Steps actually run before the mass criterion was met or the cap hit.
    pub horizon: usize,
}

/// Checks whether the first-passage mass sums to one, i.e. whether the
/// expected first passage time exists.
pub fn check_well_defined(
    m: &StochasticMatrix,
    source: usize,
    target: usize,
    epsilon: f64,
    max_horizon: usize,
) -> Result<WellDefinedness> {
    m.check_state(source)?;
    m.check_state(target)?;
    check_series_args(epsilon, max_horizon)?;
    if !m.reachable(source, target) {
        return Ok(WellDefinedness {
            mass_at_horizon: 0.0,
            reachable: false,
            verdict: Verdict::Divergent,
            horizon: 0,
        });
    }
    let mut rec = FirstPassage::new(m, target);
    let mut mass = 0.0;
    let mut horizon = 0;
    while horizon < max_horizon {
        mass += rec.advance()[source];
        horizon += 1;
        if mass >= 1.0 - epsilon {
            break;
        }
    }
    let verdict = if mass >= 1.0 - epsilon {
        Verdict::WellDefined
    } else {
        Verdict::Suspect
    };
    Ok(WellDefinedness {
        mass_at_horizon: mass,
        reachable: true,
        verdict,
        horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn chain(rows: &[&[f64]]) -> StochasticMatrix {
        StochasticMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn geometric(q: f64) -> StochasticMatrix {
        chain(&[&[1.0 - q, q], &[0.0, 1.0]])
    }

    /// Sum over all length-n paths from i whose first visit to j is at step n.
    fn path_sum(m: &StochasticMatrix, i: usize, j: usize, n: usize) -> f64 {
        fn walk(m: &StochasticMatrix, s: usize, j: usize, left: usize, prob: f64) -> f64 {
            if left == 1 {
                return prob * m.get(s, j);
            }
            (0..m.size())
                .filter(|&l| l != j)
                .map(|l| walk(m, l, j, left - 1, prob * m.get(s, l)))
                .sum()
        }
        walk(m, i, j, n, 1.0)
    }

    #[test]
    fn rejects_non_stochastic() {
        let err = StochasticMatrix::new(vec![vec![0.5, 0.5], vec![0.3, 0.6]]).unwrap_err();
        assert!(matches!(err, Error::NotStochastic { row: 1, .. }));
        let err = StochasticMatrix::new(vec![vec![1.2, -0.2], vec![0.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotStochastic { row: 0, .. }));
        assert!(StochasticMatrix::new(vec![vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn first_step_is_direct_probability() {
        let m = chain(&[&[0.5, 0.3, 0.2], &[0.1, 0.6, 0.3], &[0.0, 0.0, 1.0]]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(fpt_distribution(&m, i, j, 1).unwrap().f[0], m.get(i, j));
            }
        }
    }

    #[test]
    fn direct_absorption() {
        let m = chain(&[&[0.0, 1.0], &[0.5, 0.5]]);
        let d = fpt_distribution(&m, 0, 1, 5).unwrap();
        assert_eq!(d.f, [1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(d.cdf(), [1.0; 5]);
        assert_eq!(d.residual, 0.0);
    }

    #[test]
    fn three_state_matches_path_enumeration() {
        let m = chain(&[&[0.5, 0.3, 0.2], &[0.1, 0.6, 0.3], &[0.0, 0.0, 1.0]]);
        let d = fpt_distribution(&m, 0, 2, 6).unwrap();
        for n in 1..=6 {
            assert!((d.f[n - 1] - path_sum(&m, 0, 2, n)).abs() <= 1e-12);
        }
    }

    #[test]
    fn geometric_cdf_closed_form() {
        let d = fpt_distribution(&geometric(0.25), 0, 1, 30).unwrap();
        assert_eq!(d.f[0], 0.25);
        assert_eq!(d.f[1], 0.1875);
        for (n, c) in d.cdf().iter().enumerate() {
            assert_relative_eq!(*c, 1.0 - 0.75f64.powi(n as i32 + 1), max_relative = 1e-12);
        }
    }

    #[test]
    fn geometric_efpt() {
        for q in [0.1, 0.25, 0.5, 1.0] {
            let m = geometric(q);
            let s = efpt_series(&m, 0, 1, DEFAULT_EPSILON, DEFAULT_MAX_HORIZON).unwrap();
            let l = efpt_linear(&m, 0, 1).unwrap();
            assert!(s.converged);
            assert!((s.efpt_quarters - 1.0 / q).abs() <= 1e-9, "series q={q}: {}", s.efpt_quarters);
            assert!((l.efpt_quarters - 1.0 / q).abs() <= 1e-9, "linear q={q}");
            assert_eq!(s.efpt_years * 4.0, s.efpt_quarters);
        }
        assert_eq!(efpt_linear(&geometric(0.25), 0, 1).unwrap().efpt_years, 1.0);
    }

    #[test]
    fn series_not_converged_is_flagged() {
        let m = geometric(0.001);
        let r = efpt_series(&m, 0, 1, 1e-9, 10).unwrap();
        assert!(!r.converged);
        let expected: f64 = (1..=10).map(|n| n as f64 * 0.001 * 0.999f64.powi(n - 1)).sum();
        assert!((r.efpt_quarters - expected).abs() < 1e-15);
        assert_eq!(r.terms, 10);
        assert!(r.covered_mass < 0.02);
    }

    #[test]
    fn identity_is_divergent() {
        let m = chain(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let w = check_well_defined(&m, 0, 2, 1e-9, 100).unwrap();
        assert_eq!(w.verdict, Verdict::Divergent);
        assert_eq!(w.mass_at_horizon, 0.0);
        assert!(!w.reachable);
        match efpt_linear(&m, 0, 2).unwrap_err() {
            Error::InfiniteEfpt { trapped_class, .. } => assert_eq!(trapped_class, ["0"]),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn trap_gives_suspect_with_absorption_mass() {
        // state 1 is an absorbing trap, state 2 the target
        let m = chain(&[&[0.5, 0.3, 0.2], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let w = check_well_defined(&m, 0, 2, 1e-9, 4000).unwrap();
        assert_eq!(w.verdict, Verdict::Suspect);
        // absorption probability by iterating the chain's powers
        let mut dist = vec![1.0, 0.0, 0.0];
        for _ in 0..200 {
            dist = (0..3).map(|c| (0..3).map(|r| dist[r] * m.get(r, c)).sum()).collect();
        }
        assert!((w.mass_at_horizon - dist[2]).abs() < 1e-12);
        assert!((w.mass_at_horizon - 0.4).abs() < 1e-12);
        let err = efpt_linear(&m, 0, 2).unwrap_err();
        assert!(err.to_string().contains("{1}"), "{err}");
    }

    #[test]
    fn trapped_class_with_two_states() {
        let m = chain(&[
            &[0.2, 0.4, 0.0, 0.4],
            &[0.0, 0.5, 0.5, 0.0],
            &[0.0, 0.7, 0.3, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        match efpt_linear(&m, 0, 3).unwrap_err() {
            Error::InfiniteEfpt { trapped_class, .. } => assert_eq!(trapped_class, ["1", "2"]),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unrelated_absorbing_state_does_not_block() {
        // state 3 is absorbing but unreachable from 0
        let m = chain(&[
            &[0.5, 0.5, 0.0, 0.0],
            &[0.25, 0.25, 0.5, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        let l = efpt_linear(&m, 0, 2).unwrap();
        let s = efpt_series(&m, 0, 2, 1e-12, 10_000).unwrap();
        assert!((l.efpt_quarters - s.efpt_quarters).abs() / l.efpt_quarters < 1e-9);
    }

    #[test]
    fn mean_return_time() {
        // two-state chain: stationary π = (2/3, 1/3); mean return to 1 is 3
        let m = chain(&[&[0.75, 0.25], &[0.5, 0.5]]);
        let l = efpt_linear(&m, 1, 1).unwrap();
        let s = efpt_series(&m, 1, 1, 1e-12, 10_000).unwrap();
        assert!((l.efpt_quarters - 3.0).abs() < 1e-12);
        assert!((s.efpt_quarters - 3.0).abs() < 1e-9);
    }

    #[test]
    fn singular_system_detected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(solve_dense(a, vec![1.0, 1.0]), Err(Error::Singular { .. })));
        let x = solve_dense(vec![vec![0.0, 2.0], vec![3.0, 1.0]], vec![4.0, 5.0]).unwrap();
        assert_relative_eq!(x[0], 1.0);
        assert_relative_eq!(x[1], 2.0);
    }

    #[test]
    fn bad_arguments() {
        let m = geometric(0.5);
        assert!(matches!(fpt_distribution(&m, 0, 5, 3), Err(Error::StateOutOfRange { .. })));
        assert!(fpt_distribution(&m, 0, 1, 0).is_err());
        assert!(efpt_series(&m, 0, 1, 0.0, 10).is_err());
        assert!(efpt_series(&m, 0, 1, 1e-9, 0).is_err());
        assert!(check_well_defined(&m, 0, 1, 1.5, 10).is_err());
    }
}
