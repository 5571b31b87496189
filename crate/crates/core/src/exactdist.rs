//! Dense, exact evolution of the walk's distribution.
//!
//! States of `(Z/pZ)^d` are indexed in mixed radix with coordinate 0 least
//! significant. Everything here is the ground truth the Fourier and Monte
//! Carlo layers are checked against.

use std::f64::consts::TAU;
use std::io::{BufRead, Read, Write};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modmath::{check_modulus, int_det, is_admissible, IntMatrix, ModVector, ResidueMatrix};

/// Default cap on the number of dense states.
pub const DEFAULT_STATE_CAP: u64 = 10_000_000;

/// The walk `X_{n+1} = T X_n + B_n (mod p)`, `X_0 = 0`, with `B_n` uniform
/// on `{0, e_1, ..., e_d}`. Construction fails unless `(T, p)` is admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    matrix: IntMatrix,
    p: u64,
    step: ResidueMatrix,
    dual: ResidueMatrix,
    inverse: ResidueMatrix,
}

impl WalkConfig {
    pub fn new(matrix: IntMatrix, p: u64) -> Result<Self> {
        check_modulus(p)?;
        if !is_admissible(&matrix, p) {
            return Err(Error::Inadmissible { det: int_det(&matrix).to_string(), p });
        }
        let step = matrix.reduce_mod(p)?;
        let dual = step.transpose();
        let inverse = inverse_mod(&matrix, p)?;
        Ok(Self { matrix, p, step, dual, inverse })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], p: u64) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?, p)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `T mod p`.
    pub fn step_matrix(&self) -> &ResidueMatrix {
        &self.step
    }

    /// `T^t mod p`, which acts on character indices.
    pub fn dual_matrix(&self) -> &ResidueMatrix {
        &self.dual
    }

    pub fn num_states(&self) -> u128 {
        (self.p as u128).saturating_pow(self.dim() as u32)
    }
}

/// `T^{-1} mod p` as `adj(T) * det(T)^{-1}`; `det(T)` is a unit mod `p`.
fn inverse_mod(t: &IntMatrix, p: u64) -> Result<ResidueMatrix> {
    let d = t.dim();
    let bp = BigInt::from(p);
    let det = int_det(t).mod_floor(&bp);
    let eg = det.extended_gcd(&bp);
    if !eg.gcd.is_one() {
        return Err(Error::Inadmissible { det: int_det(t).to_string(), p });
    }
    let det_inv = eg.x.mod_floor(&bp);
    let rows = t.rows();
    let mut adj = vec![vec![BigInt::zero(); d]; d];
    for (i, adj_row) in adj.iter_mut().enumerate() {
        for (j, entry) in adj_row.iter_mut().enumerate() {
            // adj(T)_{ij} = (-1)^{i+j} det(minor_{ji})
            let cof = if d == 1 {
                BigInt::one()
            } else {
                let minor: Vec<Vec<BigInt>> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != j)
                    .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, x)| x.clone()).collect())
                    .collect();
                int_det(&IntMatrix::from_big_rows(minor)?)
            };
            let signed = if (i + j) % 2 == 0 { cof } else { -cof };
            *entry = (signed * &det_inv).mod_floor(&bp);
        }
    }
    IntMatrix::from_big_rows(adj)?.reduce_mod(p)
}

/// `q^k = exp(2 pi i k / p)` for `k = 0..p`.
pub fn character_table(p: u64) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / p as f64))
        .collect()
}

/// Probability vector over all `p^d` states.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseDistribution {
    p: u64,
    d: usize,
    masses: Vec<f64>,
}

fn dense_len(p: u64, d: usize, cap: u64) -> Result<usize> {
    check_modulus(p)?;
    let states = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if states > cap as u128 {
        return Err(Error::StateBudget { states, cap });
    }
    Ok(states as usize)
}

impl DenseDistribution {
    /// All mass on the zero vector.
    pub fn delta_at_zero(p: u64, d: usize) -> Result<Self> {
        Self::delta_at_zero_with_cap(p, d, DEFAULT_STATE_CAP)
    }

    pub fn delta_at_zero_with_cap(p: u64, d: usize, cap: u64) -> Result<Self> {
        let len = dense_len(p, d, cap)?;
        let mut masses = vec![0.0; len];
        masses[0] = 1.0;
        Ok(Self { p, d, masses })
    }

    pub fn uniform(p: u64, d: usize) -> Result<Self> {
        let len = dense_len(p, d, DEFAULT_STATE_CAP)?;
        Ok(Self { p, d, masses: vec![1.0 / len as f64; len] })
    }

    /// Wraps raw masses; they must be nonnegative and sum to 1 within 1e-12.
    pub fn from_masses(p: u64, d: usize, masses: Vec<f64>) -> Result<Self> {
        let len = dense_len(p, d, u64::MAX)?;
        if masses.len() != len {
            return Err(Error::DimensionMismatch { expected: len, got: masses.len() });
        }
        if masses.iter().any(|m| !(*m >= 0.0)) {
            return Err(Error::Parse("masses must be nonnegative".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parse(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { p, d, masses })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn index_of(&self, coords: &[u64]) -> usize {
        coords.iter().rev().fold(0usize, |acc, &x| acc * self.p as usize + x as usize)
    }

    pub fn coords_of(&self, mut index: usize) -> Vec<u64> {
        let p = self.p as usize;
        (0..self.d)
            .map(|_| {
                let c = index % p;
                index /= p;
                c as u64
            })
            .collect()
    }

    pub fn mass_at(&self, coords: &[u64]) -> f64 {
        self.masses[self.index_of(coords)]
    }

    fn check_config(&self, cfg: &WalkConfig) -> Result<()> {
        if cfg.modulus() != self.p || cfg.dim() != self.d {
            return Err(Error::ShapeMismatch { p1: self.p, d1: self.d, p2: cfg.modulus(), d2: cfg.dim() });
        }
        Ok(())
    }

    /// One step of the chain:
    /// `P'(s) = (1/(d+1)) sum_{b in {0, e_1..e_d}} P(T^{-1}(s - b))`.
    ///
    /// Each target is computed independently, so the parallel result is
    /// identical to a sequential pass.
    pub fn step_exact(&self, cfg: &WalkConfig) -> Result<Self> {
        self.check_config(cfg)?;
        let (p, d) = (self.p, self.d);
        let inv = &cfg.inverse;
        let inv_cols: Vec<Vec<u64>> = (0..d).map(|r| (0..d).map(|i| inv.get(i, r)).collect()).collect();
        let strides: Vec<usize> = (0..d).map(|i| (p as usize).pow(i as u32)).collect();
        let weight = 1.0 / (d as f64 + 1.0);
        let src = &self.masses;

        let mut out = vec![0.0; src.len()];
        out.par_chunks_mut(4096).enumerate().for_each(|(chunk, block)| {
            let mut s = vec![0u64; d];
            let mut u = vec![0u64; d];
            let mut w = vec![0u64; d];
            for (offset, slot) in block.iter_mut().enumerate() {
                let mut idx = chunk * 4096 + offset;
                for x in s.iter_mut() {
                    *x = (idx % p as usize) as u64;
                    idx /= p as usize;
                }
                inv.apply_into(&s, &mut u);
                let encode = |v: &[u64]| v.iter().zip(&strides).map(|(&x, &st)| x as usize * st).sum::<usize>();
                let mut acc = src[encode(&u)];
                for col in &inv_cols {
                    for ((wi, &ui), &ci) in w.iter_mut().zip(&u).zip(col) {
                        *wi = (ui + p - ci) % p;
                    }
                    acc += src[encode(&w)];
                }
                *slot = acc * weight;
            }
        });
        Ok(Self { p, d, masses: out })
    }

    /// Total variation distance to the uniform distribution, summed as the
    /// excess `sum_s max(P(s) - 1/N, 0)` so a point mass gives `1 - 1/N`
    /// up to a single rounding.
    pub fn tv_to_uniform(&self) -> f64 {
        let u = 1.0 / self.masses.len() as f64;
        self.masses.iter().map(|m| (m - u).max(0.0)).sum::<f64>()
    }

    /// `P^(c) = sum_s P(s) q^{s . c}` for every `c`, indexed like states.
    ///
    /// One length-`p` transform per axis, `d p^{d+1}` operations in all.
    pub fn dft(&self) -> Vec<Complex64> {
        let p = self.p as usize;
        let table = character_table(self.p);
        let mut cur: Vec<Complex64> = self.masses.iter().map(|&m| Complex64::new(m, 0.0)).collect();
        let mut stride = 1usize;
        for _ in 0..self.d {
            let prev = &cur;
            let next: Vec<Complex64> = (0..prev.len())
                .into_par_iter()
                .map(|idx| {
                    let c = (idx / stride) % p;
                    let base = idx - c * stride;
                    (0..p).fold(Complex64::zero(), |acc, s| acc + prev[base + s * stride] * table[(s * c) % p])
                })
                .collect();
            cur = next;
            stride *= p;
        }
        cur
    }

    /// Distribution of `v . X` on `Z/pZ`.
    pub fn pushforward(&self, v: &ModVector) -> Result<Vec<f64>> {
        if v.modulus() != self.p || v.dim() != self.d {
            return Err(Error::ShapeMismatch { p1: self.p, d1: self.d, p2: v.modulus(), d2: v.dim() });
        }
        let mut out = vec![0.0; self.p as usize];
        for (idx, &m) in self.masses.iter().enumerate() {
            if m != 0.0 {
                out[v.dot(&self.coords_of(idx)) as usize] += m;
            }
        }
        Ok(out)
    }

    /// Text form: `p,d,n` header, its values, then one mass per line in index order.
    pub fn write_csv<W: Write>(&self, n: u64, mut w: W) -> Result<()> {
        writeln!(w, "p,d,n")?;
        writeln!(w, "{},{},{}", self.p, self.d, n)?;
        for m in &self.masses {
            writeln!(w, "{m}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<(u64, Self)> {
        let mut lines = r.lines();
        let mut next = || -> Result<String> {
            lines.next().ok_or_else(|| Error::Parse("unexpected end of distribution file".into()))?.map_err(Error::from)
        };
        if next()?.trim() != "p,d,n" {
            return Err(Error::Parse("missing `p,d,n` header".into()));
        }
        let header = next()?;
        let fields: Vec<&str> = header.trim().split(',').collect();
        let [p, d, n] = fields[..] else {
            return Err(Error::Parse(format!("bad header values {header:?}")));
        };
        let parse = |s: &str| s.parse::<u64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        let (p, d, n) = (parse(p)?, parse(d)? as usize, parse(n)?);
        let len = dense_len(p, d, u64::MAX)?;
        let mut masses = Vec::with_capacity(len);
        for _ in 0..len {
            let line = next()?;
            masses.push(line.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{line:?}: {e}")))?);
        }
        Ok((n, Self::from_masses(p, d, masses)?))
    }

    const MAGIC: &'static [u8; 8] = b"AWDIST01";

    /// Binary form: magic, `p`, `d`, `n` as little-endian u64, then f64 masses.
    pub fn write_binary<W: Write>(&self, n: u64, mut w: W) -> Result<()> {
        w.write_all(Self::MAGIC)?;
        for x in [self.p, self.d as u64, n] {
            w.write_all(&x.to_le_bytes())?;
        }
        for m in &self.masses {
            w.write_all(&m.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<(u64, Self)> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != Self::MAGIC {
            return Err(Error::Parse("not a distribution file".into()));
        }
        let mut word = [0u8; 8];
        let mut header = [0u64; 3];
        for h in header.iter_mut() {
            r.read_exact(&mut word)?;
            *h = u64::from_le_bytes(word);
        }
        let [p, d, n] = header;
        let len = dense_len(p, d as usize, u64::MAX)?;
        let mut masses = Vec::with_capacity(len);
        for _ in 0..len {
            r.read_exact(&mut word)?;
            masses.push(f64::from_le_bytes(word));
        }
        Ok((n, Self::from_masses(p, d as usize, masses)?))
    }
}

/// `(1/2) sum_s |P(s) - Q(s)|`.
pub fn tv_distance(a: &DenseDistribution, b: &DenseDistribution) -> Result<f64> {
    if a.p != b.p || a.d != b.d {
        return Err(Error::ShapeMismatch { p1: a.p, d1: a.d, p2: b.p, d2: b.d });
    }
    Ok(0.5 * a.masses.iter().zip(&b.masses).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// `P_n`: `n` steps from the origin.
pub fn evolve(cfg: &WalkConfig, n: u64) -> Result<DenseDistribution> {
    evolve_with_cap(cfg, n, DEFAULT_STATE_CAP)
}

pub fn evolve_with_cap(cfg: &WalkConfig, n: u64, cap: u64) -> Result<DenseDistribution> {
    let mut ev = Evolution::new(cfg, cap)?;
    for _ in 0..n {
        ev.advance()?;
    }
    Ok(ev.into_current())
}

/// Successive distributions `P_0, P_1, ...` of one walk.
#[derive(Clone, Debug)]
pub struct Evolution<'a> {
    cfg: &'a WalkConfig,
    steps: u64,
    current: DenseDistribution,
}

impl<'a> Evolution<'a> {
    pub fn new(cfg: &'a WalkConfig, cap: u64) -> Result<Self> {
        let current = DenseDistribution::delta_at_zero_with_cap(cfg.modulus(), cfg.dim(), cap)?;
        Ok(Self { cfg, steps: 0, current })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn current(&self) -> &DenseDistribution {
        &self.current
    }

    pub fn into_current(self) -> DenseDistribution {
        self.current
    }

    pub fn advance(&mut self) -> Result<&DenseDistribution> {
        self.current = self.current.step_exact(self.cfg)?;
        self.steps += 1;
        Ok(&self.current)
    }
}
