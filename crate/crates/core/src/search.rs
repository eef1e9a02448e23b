//! Empirical lower bounds on `rho(M_f, M_g)` by worst-case search over
//! samples `(a, w)`, and a sampled convergence diagnostic for sequences of
//! generators.
//!
//! The search has two phases. Phase 1 scans, for each sample size `n`,
//! strictly increasing point tuples from a uniform axis grid against all
//! interior points of a barycentric weight grid. Phase 2 takes the best grid
//! cells plus a few seeded random samples and polishes each with a
//! coordinate descent whose steps halve every round. Every evaluated sample
//! is admissible, so the best value found never exceeds `rho`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QamError, Result};
use crate::generators::{Generator, Interval};
use crate::means::{qa_mean, qa_mean_unchecked, WeightedSample};
use crate::norms::b_diff_grid;
use crate::scalar::{neumaier_sum, Scalar};

/// Incumbents per sample size handed to the refinement phase.
pub const TOP_INCUMBENTS: usize = 5;
/// Largest supported sample size.
pub const MAX_POINTS: usize = 8;
const MAX_SWEEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Sample sizes `n` to search.
    pub n_points: Vec<usize>,
    /// Axis grid size for `n = 2`; it halves (in cells) for every extra point.
    pub grid_per_axis: usize,
    /// Coordinate-descent rounds; the step halves after each.
    pub refine_rounds: usize,
    /// Seed of the random-restart phase.
    pub seed: u64,
    /// Random starting samples per sample size.
    pub random_restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n_points: vec![2, 3],
            grid_per_axis: 33,
            refine_rounds: 3,
            seed: 0,
            random_restarts: 8,
        }
    }
}

impl SearchConfig {
    /// Small budget used by diagnostics.
    pub fn quick() -> Self {
        Self {
            n_points: vec![2],
            grid_per_axis: 17,
            refine_rounds: 2,
            seed: 0,
            random_restarts: 2,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.n_points.iter().find(|&&n| !(2..=MAX_POINTS).contains(&n)) {
            return Err(QamError::Argument(format!("sample size must be in 2..={MAX_POINTS}, got {n}")));
        }
        if self.grid_per_axis < 3 {
            return Err(QamError::Argument(format!("grid_per_axis must be >= 3, got {}", self.grid_per_axis)));
        }
        Ok(())
    }

    /// Axis nodes used for sample size `n`.
    pub fn axis_points(&self, n: usize) -> usize {
        let cells = (self.grid_per_axis - 1) >> (n.saturating_sub(2)).min(16);
        cells.max(2) + 1
    }
}

/// Lower bound on `rho` with the sample that attains it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RhoEstimate<T> {
    /// `|M_f(witness) - M_g(witness)|`.
    pub value: T,
    pub witness_points: Vec<T>,
    pub witness_weights: Vec<T>,
    /// Number of objective evaluations spent.
    pub evaluations: u64,
}

impl<T: Scalar> RhoEstimate<T> {
    /// Re-evaluates the gap at the witness.
    pub fn recompute(&self, f: &Generator<T>, g: &Generator<T>) -> Result<T> {
        let s = WeightedSample::new(self.witness_points.clone(), self.witness_weights.clone())?;
        Ok((qa_mean(f, &s)? - qa_mean(g, &s)?).abs())
    }
}

#[inline]
fn gap<T: Scalar>(f: &Generator<T>, g: &Generator<T>, a: &[T], w: &[T]) -> T {
    let d = (qa_mean_unchecked(f, a, w) - qa_mean_unchecked(g, a, w)).abs();
    if d.is_finite() {
        d
    } else {
        T::zero()
    }
}

/// Best `|M_f - M_g|` found by grid scan plus coordinate-descent refinement.
/// Deterministic for a given `cfg.seed`, and symmetric in `(f, g)`.
pub fn rho_lower_bound<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    u: Interval<T>,
    cfg: &SearchConfig,
) -> Result<RhoEstimate<T>> {
    cfg.validate()?;
    for gen in [f, g] {
        if !gen.domain().contains_interval(&u) {
            return Err(QamError::Argument(format!("{u} is not inside the domain of {gen}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut evaluations = 0u64;
    let mut best: Option<Candidate<T>> = None;

    for &n in &cfg.n_points {
        let m = cfg.axis_points(n);
        let axis = u.grid(m - 1);
        let tuples = increasing_tuples(m, n);
        let weights = simplex_interior(m - 1, n);

        let total = tuples.len() * weights.len();
        let values: Vec<T> = (0..total)
            .into_par_iter()
            .map(|k| {
                let a: Vec<T> = tuples[k / weights.len()].iter().map(|&i| axis[i]).collect();
                gap(f, g, &a, &weights[k % weights.len()])
            })
            .collect();
        evaluations += total as u64;

        let mut order: Vec<usize> = (0..total).collect();
        order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));
        let mut starts: Vec<(Vec<T>, Vec<T>)> = order
            .iter()
            .take(TOP_INCUMBENTS)
            .map(|&k| {
                let a = tuples[k / weights.len()].iter().map(|&i| axis[i]).collect();
                (a, weights[k % weights.len()].clone())
            })
            .collect();
        for _ in 0..cfg.random_restarts {
            starts.push(random_sample(&mut rng, u, n));
        }

        let a_step = u.length() / T::from_count(2 * (m - 1));
        let w_step = T::one() / T::from_count(2 * (m - 1));
        let refined: Vec<(Candidate<T>, u64)> = starts
            .into_par_iter()
            .map(|(a, w)| refine(f, g, u, a, w, a_step, w_step, cfg.refine_rounds))
            .collect();
        for (c, evals) in refined {
            evaluations += evals;
            if best.as_ref().is_none_or(|b| c.value > b.value) {
                best = Some(c);
            }
        }
    }

    let Some(best) = best.filter(|b| b.value > T::zero()) else {
        let n = cfg.n_points.first().copied().unwrap_or(2);
        let s = WeightedSample::uniform(vec![u.midpoint(); n])?;
        return Ok(RhoEstimate {
            value: T::zero(),
            witness_points: s.points().to_vec(),
            witness_weights: s.weights().to_vec(),
            evaluations,
        });
    };
    let s = WeightedSample::new(best.points, best.weights)?;
    let value = (qa_mean(f, &s)? - qa_mean(g, &s)?).abs();
    Ok(RhoEstimate {
        value,
        witness_points: s.points().to_vec(),
        witness_weights: s.weights().to_vec(),
        evaluations,
    })
}

#[derive(Debug, Clone)]
struct Candidate<T> {
    value: T,
    points: Vec<T>,
    weights: Vec<T>,
}

/// Coordinate descent on the points and on pairwise weight transfers.
#[allow(clippy::too_many_arguments)]
fn refine<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    u: Interval<T>,
    mut a: Vec<T>,
    mut w: Vec<T>,
    mut a_step: T,
    mut w_step: T,
    rounds: usize,
) -> (Candidate<T>, u64) {
    let n = a.len();
    let mut value = gap(f, g, &a, &w);
    let mut evals = 1u64;
    for _ in 0..rounds {
        for _ in 0..MAX_SWEEPS {
            let mut improved = false;
            for i in 0..n {
                for dir in [T::one(), -T::one()] {
                    let mut trial = a.clone();
                    trial[i] = u.clamp(a[i] + dir * a_step);
                    if trial[i] == a[i] {
                        continue;
                    }
                    let v = gap(f, g, &trial, &w);
                    evals += 1;
                    if v > value {
                        value = v;
                        a = trial;
                        improved = true;
                    }
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for dir in [T::one(), -T::one()] {
                        let delta = dir * w_step;
                        let (wi, wj) = (w[i] + delta, w[j] - delta);
                        if wi <= T::zero() || wj <= T::zero() {
                            continue;
                        }
                        let mut trial = w.clone();
                        trial[i] = wi;
                        trial[j] = wj;
                        let total = neumaier_sum(trial.iter().copied());
                        trial.iter_mut().for_each(|x| *x = *x / total);
                        let v = gap(f, g, &a, &trial);
                        evals += 1;
                        if v > value {
                            value = v;
                            w = trial;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        a_step = a_step / T::lit(2.0);
        w_step = w_step / T::lit(2.0);
    }
    (
        Candidate {
            value,
            points: a,
            weights: w,
        },
        evals,
    )
}

/// Strictly increasing `n`-tuples of indices below `m`, in lexicographic order.
fn increasing_tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 || n > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        out.push(idx.clone());
        let mut k = n;
        while k > 0 && idx[k - 1] == m - n + (k - 1) {
            k -= 1;
        }
        if k == 0 {
            return out;
        }
        idx[k - 1] += 1;
        for t in k..n {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Weight vectors `c / r` with positive integer parts `c` summing to `r`;
/// the uniform vector when `r < n`.
fn simplex_interior<T: Scalar>(r: usize, n: usize) -> Vec<Vec<T>> {
    if r < n {
        return vec![vec![T::one() / T::from_count(n); n]];
    }
    let mut out = Vec::new();
    let mut parts = vec![1usize; n];
    fn rec<T: Scalar>(k: usize, left: usize, r: usize, parts: &mut Vec<usize>, out: &mut Vec<Vec<T>>) {
        let n = parts.len();
        if k == n - 1 {
            parts[k] = left;
            out.push(parts.iter().map(|&c| T::from_count(c) / T::from_count(r)).collect());
            return;
        }
        let remaining = n - 1 - k;
        for c in 1..=(left - remaining) {
            parts[k] = c;
            rec(k + 1, left - c, r, parts, out);
        }
    }
    rec(0, r, r, &mut parts, &mut out);
    out
}

fn random_sample<T: Scalar>(rng: &mut ChaCha8Rng, u: Interval<T>, n: usize) -> (Vec<T>, Vec<T>) {
    let mut a: Vec<T> = (0..n).map(|_| u.lo() + u.length() * T::lit(rng.gen::<f64>())).collect();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    // Dirichlet(1, ..., 1) via normalized exponentials.
    let e: Vec<f64> = (0..n).map(|_| 1e-6 - (1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    (a, e.into_iter().map(|x| T::lit(x / total)).collect())
}

/// One generator of a sequence compared against the limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ConvergenceRow<T> {
    pub index: usize,
    pub generator: String,
    /// Max of `|B_{f_n} - B_f|` over the grid with `|x - z| >= |U| / grid`.
    pub b_deviation: T,
    pub rho: RhoEstimate<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ConvergenceReport<T> {
    pub limit: String,
    pub interval: Interval<T>,
    pub grid: usize,
    pub rows: Vec<ConvergenceRow<T>>,
}

/// Sampled `B` deviations and `rho` lower bounds of each `f_n` against `f`,
/// using [`SearchConfig::quick`]. The report does not certify convergence.
pub fn convergence_diagnostic<T: Scalar>(
    seq: &[Generator<T>],
    f: &Generator<T>,
    u: Interval<T>,
    grid: usize,
) -> Result<ConvergenceReport<T>> {
    convergence_diagnostic_with(seq, f, u, grid, &SearchConfig::quick())
}

pub fn convergence_diagnostic_with<T: Scalar>(
    seq: &[Generator<T>],
    f: &Generator<T>,
    u: Interval<T>,
    grid: usize,
    cfg: &SearchConfig,
) -> Result<ConvergenceReport<T>> {
    if grid < 2 {
        return Err(QamError::Argument(format!("diagnostic grid must be >= 2, got {grid}")));
    }
    if !f.domain().contains_interval(&u) {
        return Err(QamError::Argument(format!("{u} is not inside the domain of {f}")));
    }
    if let Some(bad) = seq.iter().find(|g| g.domain() != f.domain()) {
        return Err(QamError::Argument(format!(
            "{bad} does not share the domain {} of the limit",
            f.domain()
        )));
    }
    let min_sep = u.length() / T::from_count(grid);
    let rows = seq
        .iter()
        .enumerate()
        .map(|(index, g)| {
            Ok(ConvergenceRow {
                index,
                generator: g.kind().to_string(),
                b_deviation: b_diff_grid(g, f, min_sep, u, grid, false).value,
                rho: rho_lower_bound(g, f, u, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        limit: f.kind().to_string(),
        interval: u,
        grid,
        rows,
    })
}
