//! Character-side analysis of the walk.
//!
//! The characters of `(Z/pZ)^d` are `rho_c(b) = q^{b . c}` with
//! `q = exp(2 pi i / p)`, all of degree one. Because the increments are
//! independent of the state, the Fourier transform of `P_n` factorizes along
//! the orbit of `c` under `T^t`:
//!
//! ```text
//! P_n^(c) = prod_{j=0}^{n-1} f((T^t)^j c),   f(c) = (1 + sum_r q^{c_r}) / (d + 1)
//! ```
//!
//! Everything else here is built on that identity: the upper bound
//! `||P_n - U|| <= (1/2) sqrt(sum_{c != 0} |P_n^(c)|^2)`, witness lower bounds
//! `|P_n^(c)| / 2`, and the orbit statistics that explain why the upper
//! bound collapses after `O((log p)^2)` steps when no eigenvalue of `T` lies
//! on the unit circle.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactdist::{character_table, Evolution, WalkConfig, DEFAULT_STATE_CAP};
use crate::modmath::{center, center_residue, ModVector};

/// Default threshold: a coordinate is "large" once its
/// centered length reaches `p / 8`.
pub const DEFAULT_C1: f64 = 0.125;
pub const DEFAULT_CHARACTER_CAP: u64 = 1_000_000;
/// Characters per block in the deterministic parallel reduction.
const BLOCK: usize = 1024;
/// Blocks reduced per parallel wave; bounds the memory of partial sums.
const WAVE: usize = 256;

/// `ceil(10 log2 p)`.
pub fn default_ell_max(p: u64) -> u64 {
    (10.0 * (p as f64).log2()).ceil() as u64
}

/// Resource limits shared by the bound calculators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub state_cap: u64,
    pub character_cap: u64,
    /// Orbit length limit; `None` means `default_ell_max(p)`.
    pub ell_max: Option<u64>,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { state_cap: DEFAULT_STATE_CAP, character_cap: DEFAULT_CHARACTER_CAP, ell_max: None }
    }
}

/// Index `c` of the character `rho_c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacterIndex(ModVector);

impl CharacterIndex {
    pub fn new(p: u64, entries: impl IntoIterator<Item = i64>) -> Result<Self> {
        ModVector::new(p, entries).map(Self)
    }

    pub fn vector(&self) -> &ModVector {
        &self.0
    }

    pub fn entries(&self) -> &[u64] {
        self.0.entries()
    }

    pub fn modulus(&self) -> u64 {
        self.0.modulus()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }

    /// `T^t c`.
    pub fn advance(&self, cfg: &WalkConfig) -> Self {
        Self(cfg.dual_matrix().apply(&self.0))
    }
}

impl From<ModVector> for CharacterIndex {
    fn from(v: ModVector) -> Self {
        Self(v)
    }
}

fn check_character(c: &CharacterIndex, cfg: &WalkConfig) -> Result<()> {
    if c.modulus() != cfg.modulus() || c.dim() != cfg.dim() {
        return Err(Error::ShapeMismatch { p1: c.modulus(), d1: c.dim(), p2: cfg.modulus(), d2: cfg.dim() });
    }
    Ok(())
}

/// Precomputed `q^k` for fast step factors.
#[derive(Clone, Debug)]
struct FactorTable {
    d: usize,
    table: Vec<Complex64>,
}

impl FactorTable {
    fn new(p: u64, d: usize) -> Self {
        Self { d, table: character_table(p) }
    }

    #[inline]
    fn factor(&self, c: &[u64]) -> Complex64 {
        let sum = c.iter().fold(Complex64::one(), |acc, &x| acc + self.table[x as usize]);
        sum / (self.d as f64 + 1.0)
    }
}

/// Single-step multiplier `f(c) = (1 + sum_r q^{c_r}) / (d + 1)`.
pub fn step_factor(c: &CharacterIndex) -> Complex64 {
    let p = c.modulus() as f64;
    let sum = c
        .entries()
        .iter()
        .fold(Complex64::one(), |acc, &x| acc + Complex64::from_polar(1.0, TAU * x as f64 / p));
    sum / (c.dim() as f64 + 1.0)
}

/// Complex product kept as log-modulus and argument, so long products of
/// factors below one in modulus never underflow before the final exponentiation.
#[derive(Clone, Copy, Debug)]
struct LogProduct {
    zero: bool,
    ln_mod: f64,
    arg: f64,
}

impl LogProduct {
    const ONE: Self = Self { zero: false, ln_mod: 0.0, arg: 0.0 };

    fn times(self, z: Complex64) -> Self {
        if self.zero || z.is_zero() {
            return Self { zero: true, ..Self::ONE };
        }
        Self { zero: false, ln_mod: self.ln_mod + z.norm().ln(), arg: (self.arg + z.arg()) % TAU }
    }

    fn combine(self, other: Self) -> Self {
        if self.zero || other.zero {
            return Self { zero: true, ..Self::ONE };
        }
        Self { zero: false, ln_mod: self.ln_mod + other.ln_mod, arg: (self.arg + other.arg) % TAU }
    }

    fn powu(self, k: u64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.zero {
            return self;
        }
        let k = k as f64;
        Self { zero: false, ln_mod: self.ln_mod * k, arg: (self.arg * k) % TAU }
    }

    fn to_complex(self) -> Complex64 {
        if self.zero {
            Complex64::zero()
        } else {
            Complex64::from_polar(self.ln_mod.exp(), self.arg)
        }
    }
}

/// `P_n^(c)` by the product formula.
///
/// The orbit of `c` under the invertible `T^t` is purely periodic; once it
/// closes after `L` steps, `P_n^(c) = (P_L^(c))^{n div L} P_{n mod L}^(c)`.
pub fn fourier_n(c: &CharacterIndex, n: u64, cfg: &WalkConfig) -> Result<Complex64> {
    check_character(c, cfg)?;
    let table = FactorTable::new(cfg.modulus(), cfg.dim());
    let dual = cfg.dual_matrix();
    let start = c.entries();
    let mut cur = start.to_vec();
    let mut next = vec![0u64; cur.len()];
    let mut prefix = vec![LogProduct::ONE];
    for j in 0..n {
        let acc = prefix[j as usize].times(table.factor(&cur));
        prefix.push(acc);
        dual.apply_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        if cur == start {
            let period = j + 1;
            let whole = prefix[period as usize].powu(n / period);
            return Ok(whole.combine(prefix[(n % period) as usize]).to_complex());
        }
    }
    Ok(prefix[n as usize].to_complex())
}

/// Per-`n` character statistics over all nontrivial characters.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterSums {
    /// `sum_{c != 0} |P_n^(c)|^2` for `n = 0..=n_max`.
    pub sum_sq: Vec<f64>,
    /// `max_{c != 0} |P_n^(c)|` for `n = 0..=n_max`.
    pub max_abs: Vec<f64>,
}

impl CharacterSums {
    pub fn upper_bound(&self, n: usize) -> f64 {
        0.5 * self.sum_sq[n].sqrt()
    }

    pub fn lower_bound(&self, n: usize) -> f64 {
        0.5 * self.max_abs[n]
    }
}

fn nontrivial_characters(cfg: &WalkConfig, cap: u64) -> Result<usize> {
    let characters = cfg.num_states() - 1;
    if characters > cap as u128 {
        return Err(Error::CharacterBudget { characters, cap });
    }
    Ok(characters as usize)
}

/// Sums `|P_n^(c)|^2` and maxima of `|P_n^(c)|` over every `c != 0`, for all
/// `n <= n_max` in one pass along each orbit.
///
/// Characters are split into fixed blocks that are summed sequentially and
/// then folded in index order, so the result is bit-identical for any
/// number of worker threads.
pub fn character_sums(cfg: &WalkConfig, n_max: u64, character_cap: u64) -> Result<CharacterSums> {
    let count = nontrivial_characters(cfg, character_cap)?;
    let (p, d) = (cfg.modulus(), cfg.dim());
    let table = FactorTable::new(p, d);
    let dual = cfg.dual_matrix();
    let len = n_max as usize + 1;

    let block_sums = |block: usize| -> (Vec<f64>, Vec<f64>) {
        let mut sum_sq = vec![0.0; len];
        let mut max_abs = vec![0.0f64; len];
        let mut cur = vec![0u64; d];
        let mut next = vec![0u64; d];
        let lo = 1 + block * BLOCK;
        let hi = (lo + BLOCK).min(count + 1);
        for idx in lo..hi {
            let mut rest = idx;
            for x in cur.iter_mut() {
                *x = (rest % p as usize) as u64;
                rest /= p as usize;
            }
            let mut sq = 1.0f64;
            for n in 0..len {
                sum_sq[n] += sq;
                if sq > max_abs[n] {
                    max_abs[n] = sq;
                }
                if sq == 0.0 {
                    break;
                }
                sq *= table.factor(&cur).norm_sqr();
                dual.apply_into(&cur, &mut next);
                std::mem::swap(&mut cur, &mut next);
            }
        }
        (sum_sq, max_abs)
    };

    let blocks = count.div_ceil(BLOCK);
    let mut sum_sq = vec![0.0; len];
    let mut max_sq = vec![0.0f64; len];
    for wave in (0..blocks).step_by(WAVE) {
        let partials: Vec<(Vec<f64>, Vec<f64>)> =
            (wave..(wave + WAVE).min(blocks)).into_par_iter().map(block_sums).collect();
        for (s, m) in partials {
            for n in 0..len {
                sum_sq[n] += s[n];
                max_sq[n] = max_sq[n].max(m[n]);
            }
        }
    }
    Ok(CharacterSums { sum_sq, max_abs: max_sq.into_iter().map(f64::sqrt).collect() })
}

/// Upper bound `(1/2) sqrt(sum_{c != 0} |P_n^(c)|^2)` on `||P_n - U||`.
pub fn ub_bound(n: u64, cfg: &WalkConfig) -> Result<f64> {
    ub_bound_with_cap(n, cfg, DEFAULT_CHARACTER_CAP)
}

pub fn ub_bound_with_cap(n: u64, cfg: &WalkConfig, character_cap: u64) -> Result<f64> {
    Ok(character_sums(cfg, n, character_cap)?.upper_bound(n as usize))
}

/// `max_c |P_n^(c)| / 2` over the candidates, a lower bound on `||P_n - U||`
/// because `|P_n^(c)| = |E_{P_n} rho_c - E_U rho_c| <= 2 ||P_n - U||` for `c != 0`.
pub fn char_lower_bound(n: u64, cfg: &WalkConfig, candidates: &[CharacterIndex]) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let mut best = 0.0f64;
    for c in candidates {
        if c.is_trivial() {
            return Err(Error::InvalidArgument("the trivial character is not a witness".into()));
        }
        best = best.max(fourier_n(c, n, cfg)?.norm() / 2.0);
    }
    Ok(best)
}

/// Bounds on `||P_n - U||` over a list of step counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSeries {
    pub n: Vec<u64>,
    pub ub: Vec<f64>,
    pub lb: Vec<f64>,
    pub tv_exact: Option<Vec<f64>>,
}

impl BoundSeries {
    pub const CSV_HEADER: &'static str = "n,ub,lb,tv_exact";

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// One row per `n`; `tv_exact` is left empty when it was not computed.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for i in 0..self.n.len() {
            let tv = self.tv_exact.as_ref().map(|t| t[i].to_string()).unwrap_or_default();
            writeln!(w, "{},{},{},{}", self.n[i], self.ub[i], self.lb[i], tv)?;
        }
        Ok(())
    }

    /// Parses the output of [`BoundSeries::write_csv`]; `#` lines are skipped.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut out = BoundSeries { n: Vec::new(), ub: Vec::new(), lb: Vec::new(), tv_exact: Some(Vec::new()) };
        let mut saw_header = false;
        let mut any_missing = false;
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !saw_header {
                if line != Self::CSV_HEADER {
                    return Err(Error::Parse(format!("unexpected header {line:?}")));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let [n, ub, lb, tv] = fields[..] else {
                return Err(Error::Parse(format!("expected 4 fields in {line:?}")));
            };
            let float = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
            out.n.push(n.parse().map_err(|e| Error::Parse(format!("{n:?}: {e}")))?);
            out.ub.push(float(ub)?);
            out.lb.push(float(lb)?);
            if tv.is_empty() {
                any_missing = true;
            } else if let Some(t) = out.tv_exact.as_mut() {
                t.push(float(tv)?);
            }
        }
        if !saw_header {
            return Err(Error::Parse("missing header".into()));
        }
        if any_missing {
            out.tv_exact = None;
        }
        Ok(out)
    }
}

/// Upper bound, all-character lower bound, and (when the dense state space
/// fits the budget) the exact distance, for every `n` in `ns`.
pub fn bound_series(cfg: &WalkConfig, ns: &[u64], budgets: &Budgets) -> Result<BoundSeries> {
    let Some(&n_max) = ns.iter().max() else {
        return Ok(BoundSeries { n: vec![], ub: vec![], lb: vec![], tv_exact: None });
    };
    let sums = character_sums(cfg, n_max, budgets.character_cap)?;
    let ub = ns.iter().map(|&n| sums.upper_bound(n as usize)).collect();
    let lb = ns.iter().map(|&n| sums.lower_bound(n as usize)).collect();
    let tv_exact = if cfg.num_states() <= budgets.state_cap as u128 {
        let mut ev = Evolution::new(cfg, budgets.state_cap)?;
        let mut tv_at = vec![ev.current().tv_to_uniform()];
        for _ in 0..n_max {
            tv_at.push(ev.advance()?.tv_to_uniform());
        }
        Some(ns.iter().map(|&n| tv_at[n as usize]).collect())
    } else {
        None
    };
    Ok(BoundSeries { n: ns.to_vec(), ub, lb, tv_exact })
}

/// Orbit of a character under `T^t`, with the first step at which some
/// centered coordinate reaches `c1 * p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub c: CharacterIndex,
    pub orbit: Vec<ModVector>,
    pub cycle_start: Option<u64>,
    pub cycle_length: Option<u64>,
    pub first_large_ell: Option<u64>,
    pub c1: f64,
    pub max_centered_magnitudes: Vec<u64>,
}

fn check_c1(c1: f64) -> Result<()> {
    if !(c1 > 0.0 && c1 <= 0.5) {
        return Err(Error::InvalidArgument(format!("C1 must lie in (0, 1/2], got {c1}")));
    }
    Ok(())
}

/// Walks `c, T^t c, (T^t)^2 c, ...` for `ell <= ell_max` steps or until a
/// state repeats.
pub fn orbit_analysis(c: &CharacterIndex, cfg: &WalkConfig, c1: f64, ell_max: u64) -> Result<OrbitRecord> {
    check_character(c, cfg)?;
    check_c1(c1)?;
    if c.is_trivial() {
        return Err(Error::InvalidArgument("orbit analysis needs a nontrivial character".into()));
    }
    let threshold = c1 * cfg.modulus() as f64;
    let mut seen: HashMap<ModVector, u64> = HashMap::new();
    let mut orbit = Vec::new();
    let mut mags = Vec::new();
    let (mut cycle_start, mut cycle_length, mut first_large) = (None, None, None);
    let mut cur = c.vector().clone();
    for ell in 0..=ell_max {
        if let Some(&first) = seen.get(&cur) {
            cycle_start = Some(first);
            cycle_length = Some(ell - first);
            break;
        }
        let mag = center(&cur).max_abs();
        if first_large.is_none() && mag as f64 >= threshold {
            first_large = Some(ell);
        }
        seen.insert(cur.clone(), ell);
        mags.push(mag);
        orbit.push(cur.clone());
        cur = cfg.dual_matrix().apply(&cur);
    }
    Ok(OrbitRecord {
        c: c.clone(),
        orbit,
        cycle_start,
        cycle_length,
        first_large_ell: first_large,
        c1,
        max_centered_magnitudes: mags,
    })
}

/// Allocation-light form of `orbit_analysis(..).first_large_ell`.
pub fn first_large_ell(c: &[u64], cfg: &WalkConfig, c1: f64, ell_max: u64) -> Option<u64> {
    let p = cfg.modulus();
    let threshold = c1 * p as f64;
    let mut cur = c.to_vec();
    let mut next = vec![0u64; cur.len()];
    for ell in 0..=ell_max {
        let mag = cur.iter().map(|&x| center_residue(x, p).unsigned_abs()).max().unwrap_or(0);
        if mag as f64 >= threshold {
            return Some(ell);
        }
        cfg.dual_matrix().apply_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    None
}

/// Empirical fit of the orbit constants over a set of characters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSurvey {
    pub p: u64,
    pub c1: f64,
    pub ell_max: u64,
    pub characters: u64,
    /// Largest `first_large_ell` among characters that reached the threshold.
    pub max_first_large_ell: Option<u64>,
    /// Characters that never reached `c1 * p` within `ell_max` steps.
    pub failures: u64,
    /// `max_first_large_ell / ln p`, the fitted `C2` in `ell <= C2 log p`.
    pub fitted_c2: Option<f64>,
}

pub fn survey_orbits(cfg: &WalkConfig, characters: &[CharacterIndex], c1: f64, ell_max: u64) -> Result<OrbitSurvey> {
    check_c1(c1)?;
    for c in characters {
        check_character(c, cfg)?;
    }
    let results: Vec<Option<u64>> =
        characters.par_iter().map(|c| first_large_ell(c.entries(), cfg, c1, ell_max)).collect();
    let failures = results.iter().filter(|r| r.is_none()).count() as u64;
    let max_first = results.iter().flatten().copied().max();
    let p = cfg.modulus();
    Ok(OrbitSurvey {
        p,
        c1,
        ell_max,
        characters: characters.len() as u64,
        max_first_large_ell: max_first,
        failures,
        fitted_c2: max_first.map(|m| m as f64 / (p as f64).ln()),
    })
}

/// Every nontrivial character, in index order.
pub fn all_characters(cfg: &WalkConfig, character_cap: u64) -> Result<Vec<CharacterIndex>> {
    let count = nontrivial_characters(cfg, character_cap)?;
    let (p, d) = (cfg.modulus(), cfg.dim());
    Ok((1..=count)
        .map(|mut idx| {
            let entries = (0..d)
                .map(|_| {
                    let x = (idx % p as usize) as u64;
                    idx /= p as usize;
                    x
                })
                .collect();
            CharacterIndex(ModVector::from_residues(p, entries).expect("valid modulus"))
        })
        .collect())
}

/// `count` uniformly random nontrivial characters from a seeded stream.
pub fn sample_characters(p: u64, d: usize, count: usize, seed: u64) -> Result<Vec<CharacterIndex>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let entries: Vec<u64> = (0..d).map(|_| rng.random_range(0..p)).collect();
        let c = CharacterIndex(ModVector::from_residues(p, entries)?);
        if !c.is_trivial() {
            out.push(c);
        }
    }
    Ok(out)
}

/// Certified gap `delta = (1 - cos(2 pi c1)) / (2 (d + 1))`: any `c` with a
/// centered coordinate of length at least `c1 * p` has `|f(c)| <= 1 - delta`.
pub fn contraction_gap(d: usize, c1: f64) -> f64 {
    (1.0 - (TAU * c1).cos()) / (2.0 * (d as f64 + 1.0))
}

/// `C9 = (d + 1) max |f(c)|` over characters with some centered coordinate
/// of length at least `c1 * p`, found by enumeration.
pub fn fitted_c9(p: u64, d: usize, c1: f64, character_cap: u64) -> Result<f64> {
    check_c1(c1)?;
    let count = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if count > character_cap as u128 {
        return Err(Error::CharacterBudget { characters: count, cap: character_cap });
    }
    let table = FactorTable::new(p, d);
    let threshold = c1 * p as f64;
    let best = (0..count as usize)
        .into_par_iter()
        .map(|mut idx| {
            let c: Vec<u64> = (0..d)
                .map(|_| {
                    let x = (idx % p as usize) as u64;
                    idx /= p as usize;
                    x
                })
                .collect();
            let large = c.iter().any(|&x| center_residue(x, p).unsigned_abs() as f64 >= threshold);
            if large {
                table.factor(&c).norm()
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max);
    Ok(best * (d as f64 + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingMethod {
    /// Dense evolution and exact total variation.
    Exact,
    /// The character upper bound.
    Ub,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MixingTime {
    Mixed { n: u64 },
    NotMixed { n_max: u64 },
}

impl MixingTime {
    pub fn steps(&self) -> Option<u64> {
        match self {
            Self::Mixed { n } => Some(*n),
            Self::NotMixed { .. } => None,
        }
    }
}

/// Least `n <= n_cap` at which the chosen distance measure is at most `eps`.
///
/// At `n = 0` the distance is exactly `1 - p^{-d}`, so any `eps` at least
/// that large yields 0 under either method.
pub fn mixing_time(cfg: &WalkConfig, eps: f64, method: MixingMethod, n_cap: u64, budgets: &Budgets) -> Result<MixingTime> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let initial = 1.0 - 1.0 / cfg.num_states() as f64;
    if eps >= initial {
        return Ok(MixingTime::Mixed { n: 0 });
    }
    match method {
        MixingMethod::Exact => {
            let mut ev = Evolution::new(cfg, budgets.state_cap)?;
            while ev.steps() < n_cap {
                if ev.advance()?.tv_to_uniform() <= eps {
                    return Ok(MixingTime::Mixed { n: ev.steps() });
                }
            }
            Ok(MixingTime::NotMixed { n_max: n_cap })
        }
        MixingMethod::Ub => {
            let mut window = 64u64.min(n_cap);
            loop {
                let sums = character_sums(cfg, window, budgets.character_cap)?;
                if let Some(n) = (0..=window as usize).find(|&n| sums.upper_bound(n) <= eps) {
                    return Ok(MixingTime::Mixed { n: n as u64 });
                }
                if window >= n_cap {
                    return Ok(MixingTime::NotMixed { n_max: n_cap });
                }
                window = (window * 2).min(n_cap);
            }
        }
    }
}
