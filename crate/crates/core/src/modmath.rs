//! Exact integer and modular linear algebra.
//!
//! Integer matrices carry arbitrary-precision entries. Everything reduced
//! mod `p` lives in `u64` residues with `u128` intermediate products, which
//! is exact for any modulus that fits in a machine word.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square integer matrix with exact entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, row, len: r.len() });
            }
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, row, len: r.len() });
            }
            entries.extend(r);
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        Self { dim, entries }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Rows as machine integers, if every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .chunks(self.dim)
            .map(|r| r.iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.get(j, i).clone());
            }
        }
        Self { dim: d, entries }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = BigInt::zero();
                for k in 0..d {
                    acc += self.get(i, k) * other.get(k, j);
                }
                entries.push(acc);
            }
        }
        Self { dim: d, entries }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn add_scaled_identity(&self, scale: &BigInt) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.entries[i * self.dim + i] += scale;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Entrywise reduction into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Result<ResidueMatrix> {
        check_modulus(p)?;
        let bp = BigInt::from(p);
        let entries = self
            .entries
            .iter()
            .map(|x| x.mod_floor(&bp).to_u64().expect("residue fits in u64"))
            .collect();
        Ok(ResidueMatrix { p, dim: self.dim, entries })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.dim).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Parses rows separated by `;` with entries separated by `,`, e.g. `2,1;1,1`.
/// The bracketed form printed by `Display` is accepted too.
impl std::str::FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let rows: Vec<&str> = if let Some(inner) = t.strip_prefix("[[").and_then(|r| r.strip_suffix("]]")) {
            inner.split("],[").collect()
        } else {
            t.split(';').collect()
        };
        let rows = rows
            .iter()
            .map(|row| {
                row.split(',')
                    .map(|x| x.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("matrix entry {:?}: {e}", x.trim()))))
                    .collect::<Result<Vec<BigInt>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_big_rows(rows)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<JsonInt>> = self
            .entries
            .chunks(self.dim)
            .map(|r| r.iter().map(|x| JsonInt(x.clone())).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<JsonInt>> = Vec::deserialize(d)?;
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
        IntMatrix::from_big_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Big integer that serializes as a JSON number when it fits in `i64`
/// and as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Repr::Text(t) => t.parse().map(JsonInt).map_err(serde::de::Error::custom),
        }
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn int_det(t: &IntMatrix) -> BigInt {
    let n = t.dim;
    let mut m: Vec<Vec<BigInt>> = t.rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Rank over the rationals.
pub fn int_rank(t: &IntMatrix) -> usize {
    let n = t.dim;
    let mut m: Vec<Vec<BigRational>> = t
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for i in rank + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] / &m[rank][col];
            for j in col..n {
                let delta = &factor * &m[rank][j];
                m[i][j] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// `det(T) != 0` and `gcd(|det T|, p) = 1`.
pub fn is_admissible(t: &IntMatrix, p: u64) -> bool {
    let det = int_det(t);
    !det.is_zero() && det.abs().gcd(&BigInt::from(p)).is_one()
}

pub(crate) fn check_modulus(p: u64) -> Result<()> {
    if p < 2 {
        Err(Error::InvalidModulus(p))
    } else {
        Ok(())
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `p` (Fermat).
fn inv_mod_prime(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Square matrix of residues mod `p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueMatrix {
    p: u64,
    dim: usize,
    entries: Vec<u64>,
}

impl ResidueMatrix {
    pub fn identity(dim: usize, p: u64) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % p;
        }
        Self { p, dim, entries }
    }

    pub fn zero(dim: usize, p: u64) -> Self {
        Self { p, dim, entries: vec![0; dim * dim] }
    }

    /// Reduces arbitrary signed rows mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], p: u64) -> Result<Self> {
        IntMatrix::from_rows(rows)?.reduce_mod(p)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.get(j, i));
            }
        }
        Self { p: self.p, dim: d, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        assert_eq!(self.p, other.p, "moduli differ");
        let (d, p) = (self.dim, self.p);
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc: u128 = 0;
                for k in 0..d {
                    acc += self.get(i, k) as u128 * other.get(k, j) as u128;
                    acc %= p as u128;
                }
                entries.push(acc as u64);
            }
        }
        Self { p, dim: d, entries }
    }

    /// `self - I` mod p.
    pub fn minus_identity(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            let e = &mut out.entries[i * self.dim + i];
            *e = (*e + self.p - 1) % self.p;
        }
        out
    }

    /// Writes `self * x` into `out`; both slices hold residues.
    #[inline]
    pub fn apply_into(&self, x: &[u64], out: &mut [u64]) {
        let d = self.dim;
        for i in 0..d {
            let row = &self.entries[i * d..(i + 1) * d];
            let mut acc: u128 = 0;
            for (a, b) in row.iter().zip(x) {
                acc += *a as u128 * *b as u128;
            }
            out[i] = (acc % self.p as u128) as u64;
        }
    }

    pub fn apply(&self, v: &ModVector) -> ModVector {
        assert_eq!(v.p, self.p, "moduli differ");
        let mut out = vec![0; self.dim];
        self.apply_into(&v.entries, &mut out);
        ModVector { p: self.p, entries: out }
    }

    /// Rank over Z/pZ; `p` must be prime.
    pub fn rank_mod_prime(&self) -> Result<usize> {
        Ok(self.dim - nullspace_mod_prime(self)?.len())
    }
}

/// `T^k` reduced mod `p` by binary exponentiation.
pub fn mat_pow_mod(t: &IntMatrix, k: u64, p: u64) -> Result<ResidueMatrix> {
    let base = t.reduce_mod(p)?;
    Ok(residue_pow(&base, k))
}

pub fn residue_pow(base: &ResidueMatrix, mut k: u64) -> ResidueMatrix {
    let mut base = base.clone();
    let mut acc = ResidueMatrix::identity(base.dim, base.p);
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(&base);
        }
        k >>= 1;
        if k > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

/// Vector over Z/pZ with every entry in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModVector {
    p: u64,
    entries: Vec<u64>,
}

impl ModVector {
    /// Reduces signed integers into `[0, p)`.
    pub fn new(p: u64, entries: impl IntoIterator<Item = i64>) -> Result<Self> {
        check_modulus(p)?;
        let pi = p as i128;
        let entries = entries
            .into_iter()
            .map(|x| (x as i128).rem_euclid(pi) as u64)
            .collect();
        Ok(Self { p, entries })
    }

    pub fn from_residues(p: u64, entries: Vec<u64>) -> Result<Self> {
        check_modulus(p)?;
        Ok(Self { p, entries: entries.into_iter().map(|x| x % p).collect() })
    }

    pub fn zero(p: u64, d: usize) -> Self {
        Self { p, entries: vec![0; d] }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// `self · x` mod p.
    pub fn dot(&self, x: &[u64]) -> u64 {
        let mut acc: u128 = 0;
        for (a, b) in self.entries.iter().zip(x) {
            acc = (acc + *a as u128 * *b as u128) % self.p as u128;
        }
        acc as u64
    }
}

impl fmt::Display for ModVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ") mod {}", self.p)
    }
}

/// Representatives in `(-p/2, p/2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenteredVector {
    p: u64,
    entries: Vec<i64>,
}

impl CenteredVector {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// Largest coordinate length.
    pub fn max_abs(&self) -> u64 {
        self.entries.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }
}

#[inline]
pub fn center_residue(r: u64, p: u64) -> i64 {
    if r > p / 2 {
        -((p - r) as i64)
    } else {
        r as i64
    }
}

/// Maps each residue to its representative in `(-p/2, p/2]`; for even `p`
/// the residue `p/2` stays positive.
pub fn center(v: &ModVector) -> CenteredVector {
    CenteredVector {
        p: v.p,
        entries: v.entries.iter().map(|&r| center_residue(r, v.p)).collect(),
    }
}

/// Basis of `{v : A v = 0 mod p}` for prime `p`.
///
/// One vector per free column of the reduced row echelon form, in increasing
/// column order, each scaled so its first nonzero entry is 1.
pub fn nullspace_mod_prime(a: &ResidueMatrix) -> Result<Vec<ModVector>> {
    let p = a.p;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = a.dim;
    let mut m = a.rows();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(piv) = (row..n).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let inv = inv_mod_prime(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..n {
            if i == row || m[i][col] == 0 {
                continue;
            }
            let factor = m[i][col];
            for j in 0..n {
                let sub = mul_mod(factor, m[row][j], p);
                m[i][j] = (m[i][j] + p - sub) % p;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }

    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - m[r][free]) % p;
        }
        let lead = *v.iter().find(|&&x| x != 0).expect("free variable is nonzero");
        let inv = inv_mod_prime(lead, p);
        for x in v.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        basis.push(ModVector { p, entries: v });
    }
    Ok(basis)
}
