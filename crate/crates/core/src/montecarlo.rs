//! Trajectory simulation, and the projection that exposes slow mixing when
//! `T` has a root-of-unity eigenvalue.
//!
//! If `1` is an eigenvalue of `T^m`, pick `v` with `(T^m)^t v = v (mod p)`
//! and set `pi(x) = v . x`. Then
//!
//! ```text
//! pi(X_{(k+1)m}) = pi(X_{km}) + pi(T^{m-1} B_{km} + ... + B_{(k+1)m-1})
//! ```
//!
//! so `pi(X_{km})` is a random walk on `Z/pZ` with increments supported on at
//! most `(d+1)^m` residues, which needs on the order of `p^2` blocks to
//! spread out.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactdist::{WalkConfig, DEFAULT_STATE_CAP};
use crate::fourier::{mixing_time, Budgets, MixingMethod, MixingTime};
use crate::modmath::{center, int_det, int_rank, is_prime, nullspace_mod_prime, residue_pow, IntMatrix, ModVector};
use crate::spectral::{classify, Classification, DEFAULT_TOLERANCE};

/// Seed used by callers that were not given one.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// One trajectory of the walk, driven by its own ChaCha8 stream.
///
/// Stream `index` of key `seed` is independent of every other stream, so a
/// batch gives the same trajectories no matter how it is split across threads.
pub struct Walker<'a> {
    cfg: &'a WalkConfig,
    rng: ChaCha8Rng,
    state: Vec<u64>,
    scratch: Vec<u64>,
}

impl<'a> Walker<'a> {
    pub fn new(cfg: &'a WalkConfig, seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { cfg, rng, state: vec![0; cfg.dim()], scratch: vec![0; cfg.dim()] }
    }

    pub fn state(&self) -> &[u64] {
        &self.state
    }

    /// Applies `x <- T x + B` and returns the chosen increment: 0 for the
    /// zero vector, `r` for `e_r`.
    pub fn step(&mut self) -> usize {
        let d = self.cfg.dim();
        self.cfg.step_matrix().apply_into(&self.state, &mut self.scratch);
        std::mem::swap(&mut self.state, &mut self.scratch);
        let b = self.rng.random_range(0..=d);
        if b > 0 {
            let x = &mut self.state[b - 1];
            *x = (*x + 1) % self.cfg.modulus();
        }
        b
    }
}

/// Final states of independent trajectories started at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryBatch {
    pub cfg: WalkConfig,
    pub n: u64,
    pub seed: u64,
    pub final_states: Vec<ModVector>,
}

impl TrajectoryBatch {
    pub fn samples(&self) -> usize {
        self.final_states.len()
    }

    /// Header `x1,...,xd`, then one final state per line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = (1..=self.cfg.dim()).map(|r| format!("x{r}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for s in &self.final_states {
            let row: Vec<String> = s.entries().iter().map(u64::to_string).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

pub fn simulate(cfg: &WalkConfig, n: u64, samples: u64, seed: u64) -> TrajectoryBatch {
    let p = cfg.modulus();
    let final_states = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut w = Walker::new(cfg, seed, i);
            for _ in 0..n {
                w.step();
            }
            ModVector::from_residues(p, w.state).expect("valid modulus")
        })
        .collect();
    TrajectoryBatch { cfg: cfg.clone(), n, seed, final_states }
}

/// Total variation between the empirical histogram of the batch and uniform.
///
/// This plug-in estimate is biased upward by roughly `sqrt(p^d / samples)`
/// when the true distance is small.
pub fn empirical_tv(batch: &TrajectoryBatch) -> Result<f64> {
    empirical_tv_with_cap(batch, DEFAULT_STATE_CAP)
}

pub fn empirical_tv_with_cap(batch: &TrajectoryBatch, cap: u64) -> Result<f64> {
    let states = batch.cfg.num_states();
    if states > cap as u128 {
        return Err(Error::StateBudget { states, cap });
    }
    if batch.final_states.is_empty() {
        return Err(Error::InvalidArgument("empirical distance needs at least one sample".into()));
    }
    let p = batch.cfg.modulus();
    let mut counts = vec![0u64; states as usize];
    for s in &batch.final_states {
        let idx = s.entries().iter().rev().fold(0u64, |acc, &x| acc * p + x);
        counts[idx as usize] += 1;
    }
    // sum of positive parts of c/N - 1/S, kept as an integer numerator over N S
    let total = batch.samples() as u128;
    let excess: u128 = counts.iter().map(|&c| (c as u128 * states).saturating_sub(total)).sum();
    Ok(excess as f64 / (total * states) as f64)
}

/// Projection onto an eigenvalue-1 direction of `(T^m)^t` and the exact law
/// of one `m`-step increment under it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub m: u32,
    pub p: u64,
    pub v: ModVector,
    /// `v` with entries in `(-p/2, p/2]`.
    pub v_centered: Vec<i64>,
    /// `(residue, probability)` in increasing residue order.
    pub increment_support: Vec<(u64, f64)>,
    /// Exact counts behind `increment_support`, out of `(d+1)^m` tuples.
    pub increment_counts: Vec<(u64, u128)>,
    pub u: usize,
    /// Dimension of the eigenvalue-1 space of `(T^m)^t` over `Z/pZ`.
    pub nullity_mod_p: usize,
    /// The same dimension over the rationals.
    pub nullity_rational: usize,
    /// True when reduction mod `p` enlarged the eigenspace.
    pub degenerate: bool,
}

/// Builds the projection for `(T, p)` using `T^m`.
///
/// Needs `p` prime, `(T, p)` admissible and `det(T^m - I) = 0` over the
/// integers. `v` is the first vector of the reduced-echelon nullspace basis.
pub fn projection_functional(t: &IntMatrix, p: u64, m: u32) -> Result<ProjectionReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("block length m must be positive".into()));
    }
    let cfg = WalkConfig::new(t.clone(), p)?;
    let d = cfg.dim();
    let shifted = t.pow(m).add_scaled_identity(&-BigInt::one());
    if int_det(&shifted) != BigInt::from(0) {
        return Err(Error::NoUnitEigenvalue { m });
    }
    let nullity_rational = d - int_rank(&shifted);
    let dual_m = residue_pow(cfg.dual_matrix(), m as u64);
    let basis = nullspace_mod_prime(&dual_m.minus_identity())?;
    let Some(v) = basis.first().cloned() else {
        return Err(Error::DegeneratePrime { p, m });
    };

    // pi(T^k b) = ((T^k)^t v) . b, so block k contributes 0 or ((T^k)^t v)_r
    let mut counts: BTreeMap<u64, u128> = BTreeMap::from([(0, 1)]);
    let mut w = v.clone();
    for _ in 0..m {
        let mut next: BTreeMap<u64, u128> = BTreeMap::new();
        for (&res, &count) in &counts {
            *next.entry(res).or_default() += count;
            for &wr in w.entries() {
                *next.entry((res + wr) % p).or_default() += count;
            }
        }
        counts = next;
        w = cfg.dual_matrix().apply(&w);
    }
    let total = (d as u128 + 1).pow(m);
    let increment_counts: Vec<(u64, u128)> = counts.into_iter().collect();
    let increment_support = increment_counts.iter().map(|&(r, c)| (r, c as f64 / total as f64)).collect();
    Ok(ProjectionReport {
        m,
        p,
        v_centered: center(&v).entries().to_vec(),
        v,
        u: increment_counts.len(),
        increment_support,
        increment_counts,
        nullity_mod_p: basis.len(),
        nullity_rational,
        degenerate: basis.len() > nullity_rational,
    })
}

/// Applies `v` to a state.
pub fn project(report: &ProjectionReport, x: &[u64]) -> u64 {
    report.v.dot(x)
}

/// One block of the projected walk: `dist <- dist * increments` on `Z/pZ`.
fn convolve_block(dist: &[f64], report: &ProjectionReport) -> Vec<f64> {
    let p = report.p as usize;
    let mut out = vec![0.0; p];
    for (s, &mass) in dist.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        for &(r, prob) in &report.increment_support {
            out[(s + r as usize) % p] += mass * prob;
        }
    }
    out
}

/// Exact law of `pi(X_{blocks * m})`, indexed by residue.
pub fn projected_walk_dist(report: &ProjectionReport, blocks: u64) -> Vec<f64> {
    let mut dist = vec![0.0; report.p as usize];
    dist[0] = 1.0;
    for _ in 0..blocks {
        dist = convolve_block(&dist, report);
    }
    dist
}

/// Total variation from uniform of a distribution on `Z/pZ`.
pub fn tv_to_uniform_1d(dist: &[f64]) -> f64 {
    let u = 1.0 / dist.len() as f64;
    dist.iter().map(|&x| (x - u).max(0.0)).sum::<f64>()
}

/// Least number of blocks (scaled to steps) at which the projected walk is
/// within `eps` of uniform, searching up to `n_cap` steps.
pub fn projected_mixing_time(report: &ProjectionReport, eps: f64, n_cap: u64) -> Result<MixingTime> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let m = report.m as u64;
    let mut dist = projected_walk_dist(report, 0);
    let mut blocks = 0u64;
    loop {
        if tv_to_uniform_1d(&dist) <= eps {
            return Ok(MixingTime::Mixed { n: blocks * m });
        }
        if (blocks + 1) * m > n_cap {
            return Ok(MixingTime::NotMixed { n_max: n_cap });
        }
        dist = convolve_block(&dist, report);
        blocks += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    Ub,
    Exact,
    Projected,
}

impl SweepMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Ub => "ub",
            Self::Exact => "exact",
            Self::Projected => "projected",
        }
    }
}

/// Matrix under study in a sweep, with the label used in its output rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaggedMatrix {
    pub tag: String,
    pub matrix: IntMatrix,
}

impl TaggedMatrix {
    /// Tags must fit in an unquoted CSV field.
    pub fn new(tag: impl Into<String>, matrix: IntMatrix) -> Result<Self> {
        let tag = tag.into();
        if tag.is_empty() || tag.contains([',', '"', '\n', '\r']) {
            return Err(Error::InvalidArgument(format!("matrix tag {tag:?} must be nonempty without commas, quotes or newlines")));
        }
        Ok(Self { tag, matrix })
    }

    /// Tag `2 1;1 1` for `[[2,1],[1,1]]`.
    pub fn untagged(matrix: IntMatrix) -> Self {
        let tag = matrix
            .rows()
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join(";");
        Self { tag, matrix }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub matrix_tag: String,
    pub p: u64,
    /// `None` when the cell failed or did not mix within the step cap.
    pub n_mix: Option<u64>,
    pub method: SweepMethod,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// `n_mix ~ C (ln p)^2`; `value` is `C`.
    LogSquaredConstant,
    /// `n_mix ~ a p^b`; `value` is `b`.
    PowerExponent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub matrix_tag: String,
    pub classification: String,
    pub kind: FitKind,
    pub value: f64,
    /// For the power fit, the intercept `ln a`.
    pub intercept: Option<f64>,
    /// Log-scale residuals, one per mixed cell in input order.
    pub residuals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub epsilon: f64,
    pub method: SweepMethod,
    pub cells: Vec<SweepCell>,
    pub fits: Vec<Fit>,
}

impl ScalingReport {
    pub const CSV_HEADER: &'static str = "matrix_tag,p,n_mix,method";

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for c in &self.cells {
            let n = c.n_mix.map(|n| n.to_string()).unwrap_or_default();
            writeln!(w, "{},{},{},{}", c.matrix_tag, c.p, n, c.method.tag())?;
        }
        Ok(())
    }
}

fn cell_mixing_time(
    m: &TaggedMatrix,
    p: u64,
    eps: f64,
    method: SweepMethod,
    n_cap: u64,
    budgets: &Budgets,
) -> Result<MixingTime> {
    match method {
        SweepMethod::Ub | SweepMethod::Exact => {
            let cfg = WalkConfig::new(m.matrix.clone(), p)?;
            let mm = if method == SweepMethod::Ub { MixingMethod::Ub } else { MixingMethod::Exact };
            mixing_time(&cfg, eps, mm, n_cap, budgets)
        }
        SweepMethod::Projected => {
            let report = classify(&m.matrix, DEFAULT_TOLERANCE)?;
            let Some(order) = report.classification.root_of_unity_order() else {
                return Err(Error::InvalidArgument(format!(
                    "projection needs a root-of-unity eigenvalue, matrix {} is {}",
                    m.tag,
                    report.classification.tag()
                )));
            };
            projected_mixing_time(&projection_functional(&m.matrix, p, order)?, eps, n_cap)
        }
    }
}

/// Least-squares fits on log-transformed `(p, n_mix)` pairs.
fn fit_cells(tag: &str, class: &Classification, cells: &[&SweepCell]) -> Option<Fit> {
    let points: Vec<(f64, f64)> = cells
        .iter()
        .filter_map(|c| c.n_mix.filter(|&n| n > 0).map(|n| (c.p as f64, n as f64)))
        .collect();
    match class {
        Classification::AllOffUnitCircle if !points.is_empty() => {
            // slope fixed at 2 against ln ln p, so only the offset ln C is fitted
            let offsets: Vec<f64> = points.iter().map(|&(p, n)| n.ln() - 2.0 * p.ln().ln()).collect();
            let ln_c = offsets.iter().sum::<f64>() / offsets.len() as f64;
            Some(Fit {
                matrix_tag: tag.to_string(),
                classification: class.tag().to_string(),
                kind: FitKind::LogSquaredConstant,
                value: ln_c.exp(),
                intercept: None,
                residuals: offsets.iter().map(|o| o - ln_c).collect(),
            })
        }
        Classification::RootOfUnity { .. } if points.len() >= 2 => {
            let xs: Vec<f64> = points.iter().map(|&(p, _)| p.ln()).collect();
            let ys: Vec<f64> = points.iter().map(|&(_, n)| n.ln()).collect();
            let k = xs.len() as f64;
            let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            if sxx == 0.0 {
                return None;
            }
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let b = sxy / sxx;
            let a = my - b * mx;
            Some(Fit {
                matrix_tag: tag.to_string(),
                classification: class.tag().to_string(),
                kind: FitKind::PowerExponent,
                value: b,
                intercept: Some(a),
                residuals: xs.iter().zip(&ys).map(|(x, y)| y - (a + b * x)).collect(),
            })
        }
        _ => None,
    }
}

/// Mixing times for every `(matrix, p)` cell. Failing cells keep their error
/// message and the sweep moves on.
pub fn scaling_sweep(
    matrices: &[TaggedMatrix],
    ps: &[u64],
    eps: f64,
    method: SweepMethod,
    n_cap: u64,
    budgets: &Budgets,
) -> Result<ScalingReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let grid: Vec<(&TaggedMatrix, u64)> = matrices.iter().flat_map(|m| ps.iter().map(move |&p| (m, p))).collect();
    let cells: Vec<SweepCell> = grid
        .par_iter()
        .map(|&(m, p)| {
            let outcome = cell_mixing_time(m, p, eps, method, n_cap, budgets);
            SweepCell {
                matrix_tag: m.tag.clone(),
                p,
                n_mix: outcome.as_ref().ok().and_then(MixingTime::steps),
                method,
                error: outcome.err().map(|e| e.to_string()),
            }
        })
        .collect();
    let mut fits = Vec::new();
    for m in matrices {
        let Ok(report) = classify(&m.matrix, DEFAULT_TOLERANCE) else { continue };
        let mine: Vec<&SweepCell> = cells.iter().filter(|c| c.matrix_tag == m.tag).collect();
        fits.extend(fit_cells(&m.tag, &report.classification, &mine));
    }
    Ok(ScalingReport { epsilon: eps, method, cells, fits })
}
