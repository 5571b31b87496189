//! Spectral classification of the step matrix.
//!
//! Whether the walk mixes in `O((log p)^2)` steps or needs a power of `p`
//! depends on where the complex eigenvalues of `T` sit relative to the unit
//! circle. Root-of-unity detection is exact (trial division by cyclotomic
//! polynomials); only the off-circle test uses floating point.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modmath::{int_det, IntMatrix, JsonInt};
use crate::poly::{self, IntPoly};

/// Default tolerance for the numeric unit-circle test.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Characteristic polynomial `det(xI - T)`, coefficients from the leading term down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn from_descending(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.first().map_or(true, |c| !c.is_one()) {
            return Err(Error::InvalidArgument("characteristic polynomial must be monic".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients from `x^d` down to the constant term.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub(crate) fn ascending(&self) -> IntPoly {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// `cp(T)` evaluated exactly by Horner's scheme.
    pub fn eval_matrix(&self, t: &IntMatrix) -> IntMatrix {
        let mut acc = IntMatrix::zero(t.dim());
        for c in &self.coeffs {
            acc = acc.mul(t).add_scaled_identity(c);
        }
        acc
    }
}

impl Serialize for CharPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<JsonInt> = self.coeffs.iter().cloned().map(JsonInt).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<JsonInt> = Vec::deserialize(d)?;
        CharPoly::from_descending(v.into_iter().map(|x| x.0).collect()).map_err(serde::de::Error::custom)
    }
}

/// Characteristic polynomial by Berkowitz's division-free algorithm.
pub fn char_poly(t: &IntMatrix) -> CharPoly {
    let n = t.dim();
    let a = |i: usize, j: usize| t.get(i, j);
    let mut v: Vec<BigInt> = vec![BigInt::one()];
    for r in 1..=n {
        let k = r - 1; // index of the new row/column
        // column of the Toeplitz matrix: 1, -a_kk, -R S, -R A S, ..., -R A^{k-1} S
        let mut col = Vec::with_capacity(r + 1);
        col.push(BigInt::one());
        col.push(-a(k, k).clone());
        let mut s: Vec<BigInt> = (0..k).map(|i| a(i, k).clone()).collect();
        for _ in 0..k {
            let rs: BigInt = (0..k).map(|j| a(k, j) * &s[j]).sum();
            col.push(-rs);
            s = (0..k).map(|i| (0..k).map(|j| a(i, j) * &s[j]).sum()).collect();
        }
        let mut next = vec![BigInt::zero(); r + 1];
        for (i, out) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    *out += &col[i - j] * vj;
                }
            }
        }
        v = next;
    }
    CharPoly { coeffs: v }
}

/// Complex root with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

const ROOT_ATTEMPTS: u32 = 4;

/// All complex roots of `cp`, with multiplicities.
///
/// Multiplicities come from an exact square-free decomposition, so each
/// numeric solve only sees simple roots. Roots closer than `tol` are merged.
pub fn complex_roots(cp: &CharPoly, tol: f64) -> Result<Vec<Eigenvalue>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let rat = poly::to_rat(&cp.ascending());
    let mut roots: Vec<Eigenvalue> = Vec::new();
    for (factor, multiplicity) in poly::square_free_decomposition(&rat) {
        let coeffs = poly::rat_to_f64(&factor);
        for z in simple_roots(&coeffs)? {
            roots.push(Eigenvalue { value: z, multiplicity });
        }
    }
    let mut merged: Vec<Eigenvalue> = Vec::new();
    for r in roots {
        match merged.iter_mut().find(|m| (m.value - r.value).norm() < tol) {
            Some(m) => {
                let total = (m.multiplicity + r.multiplicity) as f64;
                m.value = (m.value * m.multiplicity as f64 + r.value * r.multiplicity as f64) / total;
                m.multiplicity += r.multiplicity;
            }
            None => merged.push(r),
        }
    }
    merged.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(merged)
}

/// Aberth–Ehrlich iteration on a square-free polynomial (ascending `f64`
/// coefficients), followed by a residual check against a running error bound.
fn simple_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]),
        _ => {}
    }
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let deriv: Vec<f64> = monic.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    // Cauchy bound on root moduli
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));

    let mut max_iter = 200;
    for attempt in 0..ROOT_ATTEMPTS {
        let offset = 0.4 + 0.7 * attempt as f64;
        let start_r = 0.5 * radius;
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(start_r, offset + std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        let mut certified_sweeps = 0;
        for _ in 0..max_iter {
            let mut finite = true;
            for k in 0..n {
                let pz = poly::eval_complex(&monic, z[k]);
                if pz.norm() == 0.0 {
                    continue;
                }
                let w = pz / poly::eval_complex(&deriv, z[k]);
                let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
                let step = w / (Complex64::one() - w * s);
                if !step.is_finite() {
                    finite = false;
                    break;
                }
                z[k] -= step;
            }
            if !finite {
                break;
            }
            // one polishing sweep after the residuals first certify
            if z.iter().all(|&r| residual_certified(&monic, r)) {
                certified_sweeps += 1;
                if certified_sweeps == 2 {
                    return Ok(z);
                }
            }
        }
        max_iter *= 2;
    }
    Err(Error::RootsDidNotConverge { attempts: ROOT_ATTEMPTS })
}

fn residual_certified(monic: &[f64], z: Complex64) -> bool {
    let n = monic.len() - 1;
    let r = z.norm();
    let scale: f64 = monic.iter().rev().fold(0.0, |acc, c| acc * r + c.abs());
    poly::eval_complex(monic, z).norm() <= 16.0 * (n as f64 + 1.0) * f64::EPSILON * scale
}

/// Smallest `m` whose cyclotomic polynomial divides `cp` exactly over Z.
///
/// Only orders with `phi(m) <= d` can occur, and `phi(m) >= sqrt(m/2)`
/// bounds the search by `2 d^2`.
pub fn cyclotomic_order(cp: &CharPoly) -> Option<u32> {
    let d = cp.degree() as u32;
    let f = cp.ascending();
    (1..=(2 * d * d).max(2))
        .filter(|&k| poly::euler_phi(k) <= d)
        .find(|&k| poly::exact_div_monic(&f, &poly::cyclotomic(k)).is_some())
}

/// True when `cp` has a nonconstant common factor with its reciprocal `x^d cp(1/x)`.
pub fn shares_reciprocal_factor(cp: &CharPoly) -> bool {
    let f = poly::to_rat(&cp.ascending());
    let rev = poly::to_rat(&cp.coefficients().to_vec());
    poly::degree(&poly::gcd(&f, &rev)).unwrap_or(0) > 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Classification {
    Singular,
    AllOffUnitCircle,
    RootOfUnity { m: u32 },
    UnitModulusNonCyclotomic,
    Borderline,
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Singular => "Singular",
            Self::AllOffUnitCircle => "AllOffUnitCircle",
            Self::RootOfUnity { .. } => "RootOfUnity",
            Self::UnitModulusNonCyclotomic => "UnitModulusNonCyclotomic",
            Self::Borderline => "Borderline",
        }
    }

    pub fn root_of_unity_order(&self) -> Option<u32> {
        match self {
            Self::RootOfUnity { m } => Some(*m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "ReportJson", try_from = "ReportJson")]
pub struct SpectrumReport {
    pub charpoly: CharPoly,
    pub eigenvalues: Vec<Eigenvalue>,
    pub moduli: Vec<f64>,
    pub classification: Classification,
    pub tolerance: f64,
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    charpoly: CharPoly,
    eigenvalues: Vec<(f64, f64, usize)>,
    moduli: Vec<f64>,
    classification: String,
    m: Option<u32>,
    tolerance: f64,
}

impl From<SpectrumReport> for ReportJson {
    fn from(r: SpectrumReport) -> Self {
        ReportJson {
            eigenvalues: r.eigenvalues.iter().map(|e| (e.value.re, e.value.im, e.multiplicity)).collect(),
            moduli: r.moduli,
            classification: r.classification.tag().to_string(),
            m: r.classification.root_of_unity_order(),
            tolerance: r.tolerance,
            charpoly: r.charpoly,
        }
    }
}

impl TryFrom<ReportJson> for SpectrumReport {
    type Error = String;

    fn try_from(j: ReportJson) -> std::result::Result<Self, String> {
        let classification = match (j.classification.as_str(), j.m) {
            ("Singular", _) => Classification::Singular,
            ("AllOffUnitCircle", _) => Classification::AllOffUnitCircle,
            ("RootOfUnity", Some(m)) => Classification::RootOfUnity { m },
            ("RootOfUnity", None) => return Err("RootOfUnity classification without m".into()),
            ("UnitModulusNonCyclotomic", _) => Classification::UnitModulusNonCyclotomic,
            ("Borderline", _) => Classification::Borderline,
            (other, _) => return Err(format!("unknown classification {other:?}")),
        };
        Ok(SpectrumReport {
            charpoly: j.charpoly,
            eigenvalues: j
                .eigenvalues
                .into_iter()
                .map(|(re, im, multiplicity)| Eigenvalue { value: Complex64::new(re, im), multiplicity })
                .collect(),
            moduli: j.moduli,
            classification,
            tolerance: j.tolerance,
        })
    }
}

/// Places `T` in the fast/slow mixing dichotomy.
pub fn classify(t: &IntMatrix, tol: f64) -> Result<SpectrumReport> {
    let charpoly = char_poly(t);
    let eigenvalues = complex_roots(&charpoly, tol)?;
    let moduli: Vec<f64> = eigenvalues.iter().map(Eigenvalue::modulus).collect();
    let near_unit = moduli.iter().any(|&r| (r - 1.0).abs() < tol);

    let classification = if int_det(t).is_zero() {
        Classification::Singular
    } else if let Some(m) = cyclotomic_order(&charpoly) {
        Classification::RootOfUnity { m }
    } else if !near_unit {
        Classification::AllOffUnitCircle
    } else if shares_reciprocal_factor(&charpoly) {
        Classification::UnitModulusNonCyclotomic
    } else {
        Classification::Borderline
    };
    Ok(SpectrumReport { charpoly, eigenvalues, moduli, classification, tolerance: tol })
}

/// A Jordan block `a I + N` of the given size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanBlockSpec {
    pub eigenvalue: Complex64,
    pub size: usize,
}

impl JordanBlockSpec {
    pub fn matrix(&self) -> Vec<Vec<Complex64>> {
        let c = self.size;
        (0..c)
            .map(|i| {
                (0..c)
                    .map(|j| match j.wrapping_sub(i) {
                        0 => self.eigenvalue,
                        1 => Complex64::one(),
                        _ => Complex64::zero(),
                    })
                    .collect()
            })
            .collect()
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Closed form for `J^l`: `binom(l, j-i) a^(l-(j-i))` on and above the
/// diagonal, zero below. `binom(l, k) = 0` for `k > l`.
pub fn jordan_power(block: &JordanBlockSpec, ell: u64) -> Vec<Vec<Complex64>> {
    let c = block.size;
    (0..c)
        .map(|i| {
            (0..c)
                .map(|j| {
                    if j < i {
                        return Complex64::zero();
                    }
                    let k = (j - i) as u64;
                    if k > ell {
                        return Complex64::zero();
                    }
                    let b = binomial(ell, k).to_f64().expect("finite binomial");
                    let e = u32::try_from(ell - k).expect("exponent fits in u32");
                    block.eigenvalue.powu(e) * b
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn coeffs(cp: &CharPoly) -> Vec<i64> {
        cp.coefficients().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(coeffs(&char_poly(&mat(&[&[2, 1], &[1, 1]]))), vec![1, -3, 1]);
        assert_eq!(coeffs(&char_poly(&IntMatrix::identity(2))), vec![1, -2, 1]);
        assert_eq!(coeffs(&char_poly(&mat(&[&[0, -1], &[1, 0]]))), vec![1, 0, 1]);
        assert_eq!(coeffs(&char_poly(&mat(&[&[7]]))), vec![1, -7]);
        // companion matrix of x^3 - 2x + 5
        let companion = mat(&[&[0, 0, -5], &[1, 0, 2], &[0, 1, 0]]);
        assert_eq!(coeffs(&char_poly(&companion)), vec![1, 0, -2, 5]);
    }

    #[test]
    fn roots_of_reference_polynomials() {
        let golden = char_poly(&mat(&[&[2, 1], &[1, 1]]));
        let r = complex_roots(&golden, DEFAULT_TOLERANCE).unwrap();
        let s5 = 5f64.sqrt();
        assert_eq!(r.len(), 2);
        assert!((r[0].value - Complex64::new((3.0 - s5) / 2.0, 0.0)).norm() < 1e-14);
        assert!((r[1].value - Complex64::new((3.0 + s5) / 2.0, 0.0)).norm() < 1e-14);

        let rot = complex_roots(&char_poly(&mat(&[&[0, -1], &[1, 0]])), DEFAULT_TOLERANCE).unwrap();
        assert!((rot[0].value - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((rot[1].value - Complex64::new(0.0, 1.0)).norm() < 1e-14);

        let double = complex_roots(&char_poly(&IntMatrix::identity(2)), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(double.len(), 1);
        assert_eq!(double[0].multiplicity, 2);
        assert!((double[0].value - Complex64::one()).norm() < 1e-14);
    }

    #[test]
    fn repeated_complex_roots() {
        // (x^2 + 1)^2 (x - 3)
        let cp = CharPoly::from_descending([1, -3, 2, -6, 1, -3].map(BigInt::from).to_vec()).unwrap();
        let r = complex_roots(&cp, DEFAULT_TOLERANCE).unwrap();
        let total: usize = r.iter().map(|e| e.multiplicity).sum();
        assert_eq!(total, 5);
        assert_eq!(r.len(), 3);
        assert!(r.iter().any(|e| e.multiplicity == 2 && (e.value - Complex64::i()).norm() < 1e-12));
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let cp = char_poly(&IntMatrix::identity(2));
        assert!(complex_roots(&cp, 0.0).is_err());
        assert!(complex_roots(&cp, f64::NAN).is_err());
    }

    #[test]
    fn cyclotomic_orders() {
        let order = |rows: &[&[i64]]| cyclotomic_order(&char_poly(&mat(rows)));
        assert_eq!(order(&[&[0, -1], &[1, 0]]), Some(4));
        assert_eq!(order(&[&[1, 0], &[0, 1]]), Some(1));
        assert_eq!(order(&[&[2, 1], &[1, 1]]), None);
        assert_eq!(order(&[&[-1, 0], &[0, 3]]), Some(2));
        // x^2 - x + 1
        assert_eq!(order(&[&[0, -1], &[1, 1]]), Some(6));
        // x^2 + x + 1
        assert_eq!(order(&[&[0, -1], &[1, -1]]), Some(3));
    }

    #[test]
    fn classification_examples() {
        let class = |rows: &[&[i64]]| classify(&mat(rows), DEFAULT_TOLERANCE).unwrap().classification;
        assert_eq!(class(&[&[2, 1], &[1, 1]]), Classification::AllOffUnitCircle);
        assert_eq!(class(&[&[0, -1], &[1, 0]]), Classification::RootOfUnity { m: 4 });
        assert_eq!(class(&[&[1, 1], &[1, 1]]), Classification::Singular);
        assert_eq!(class(&[&[1, 1], &[0, 2]]), Classification::RootOfUnity { m: 1 });
    }

    #[test]
    fn salem_polynomial_is_unit_modulus_non_cyclotomic() {
        // companion of x^4 - x^3 - x^2 - x + 1, a Salem polynomial: two
        // conjugate roots on the unit circle that are not roots of unity
        let c = mat(&[&[0, 0, 0, -1], &[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 1]]);
        let report = classify(&c, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(report.classification, Classification::UnitModulusNonCyclotomic);
        assert_eq!(report.moduli.iter().filter(|r| (*r - 1.0).abs() < 1e-9).count(), 2);
    }

    #[test]
    fn report_json_shape() {
        let report = classify(&mat(&[&[0, -1], &[1, 0]]), DEFAULT_TOLERANCE).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["classification"], "RootOfUnity");
        assert_eq!(v["m"], 4);
        assert_eq!(v["charpoly"], serde_json::json!([1, 0, 1]));
        assert_eq!(v["eigenvalues"][0][2], 1);
        let back: SpectrumReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, report);
    }

    fn iterated_power(block: &JordanBlockSpec, ell: u64) -> Vec<Vec<Complex64>> {
        let j = block.matrix();
        let c = block.size;
        let mut acc: Vec<Vec<Complex64>> =
            (0..c).map(|i| (0..c).map(|k| if i == k { Complex64::one() } else { Complex64::zero() }).collect()).collect();
        for _ in 0..ell {
            acc = (0..c)
                .map(|i| (0..c).map(|k| (0..c).map(|m| acc[i][m] * j[m][k]).sum()).collect())
                .collect();
        }
        acc
    }

    #[test]
    fn jordan_power_examples() {
        let b = JordanBlockSpec { eigenvalue: Complex64::new(2.0, 0.0), size: 2 };
        let p = jordan_power(&b, 3);
        assert_eq!(p, vec![vec![8.0.into(), 12.0.into()], vec![0.0.into(), 8.0.into()]]);
        assert_eq!(p, iterated_power(&b, 3));

        let b = JordanBlockSpec { eigenvalue: Complex64::i(), size: 2 };
        let p = jordan_power(&b, 2);
        assert_eq!(p[0][0], Complex64::new(-1.0, 0.0));
        assert_eq!(p[0][1], Complex64::new(0.0, 2.0));
        assert_eq!(p[1][0], Complex64::zero());
        assert_eq!(p[1][1], Complex64::new(-1.0, 0.0));

        let b = JordanBlockSpec { eigenvalue: Complex64::new(0.3, -1.7), size: 4 };
        let id = jordan_power(&b, 0);
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, if i == j { Complex64::one() } else { Complex64::zero() });
            }
        }
    }

    proptest! {
        #[test]
        fn cayley_hamilton(rows in (1usize..=4).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-5i64..=5, d), d))) {
            let t = IntMatrix::from_rows(&rows).unwrap();
            let cp = char_poly(&t);
            prop_assert!(cp.eval_matrix(&t).is_zero());
            prop_assert_eq!(cp.degree(), t.dim());
            let sign = if t.dim() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(cp.constant_term().clone(), sign * int_det(&t));
        }

        #[test]
        fn root_sum_and_product(rows in (1usize..=4).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-5i64..=5, d), d))) {
            let t = IntMatrix::from_rows(&rows).unwrap();
            let cp = char_poly(&t);
            let roots = complex_roots(&cp, DEFAULT_TOLERANCE).unwrap();
            prop_assert_eq!(roots.iter().map(|e| e.multiplicity).sum::<usize>(), t.dim());
            let mut sum = Complex64::zero();
            let mut prod = Complex64::one();
            for e in &roots {
                sum += e.value * e.multiplicity as f64;
                prod *= e.value.powu(e.multiplicity as u32);
            }
            let trace = t.trace().to_f64().unwrap();
            let det = int_det(&t).to_f64().unwrap();
            prop_assert!((sum - trace).norm() <= 1e-8 * (1.0 + trace.abs()), "sum {} vs trace {}", sum, trace);
            prop_assert!((prod - det).norm() <= 1e-8 * (1.0 + det.abs()), "prod {} vs det {}", prod, det);
        }

        #[test]
        fn root_of_unity_verdict_is_exact(rows in (1usize..=4).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-3i64..=3, d), d))) {
            let t = IntMatrix::from_rows(&rows).unwrap();
            let cp = char_poly(&t);
            for tol in [1e-6, 1e-12] {
                let report = classify(&t, tol).unwrap();
                if let Classification::RootOfUnity { m } = report.classification {
                    prop_assert!(poly::exact_div_monic(&cp.ascending(), &poly::cyclotomic(m)).is_some());
                }
                prop_assert_eq!(
                    report.classification.root_of_unity_order().is_some(),
                    report.classification != Classification::Singular && cyclotomic_order(&cp).is_some()
                );
            }
        }

        #[test]
        fn jordan_power_matches_iteration(
            size in 1usize..=4,
            ell in 0u64..=64,
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
        ) {
            let block = JordanBlockSpec { eigenvalue: Complex64::new(re, im), size };
            let closed = jordan_power(&block, ell);
            let iter = iterated_power(&block, ell);
            for i in 0..size {
                for j in 0..size {
                    let scale = iter[i][j].norm().max(f64::MIN_POSITIVE);
                    prop_assert!((closed[i][j] - iter[i][j]).norm() <= 1e-10 * scale || (closed[i][j] - iter[i][j]).norm() < 1e-300);
                }
            }
        }
    }
}
