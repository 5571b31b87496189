//! Dense univariate polynomials over Z and Q, coefficients in ascending order.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) type IntPoly = Vec<BigInt>;
pub(crate) type RatPoly = Vec<BigRational>;

pub(crate) fn trim_int(p: &mut IntPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn trim_rat(p: &mut RatPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Exact quotient of `num` by the monic `den`, or `None` when the remainder is nonzero.
pub(crate) fn exact_div_monic(num: &IntPoly, den: &IntPoly) -> Option<IntPoly> {
    debug_assert!(den.last().is_some_and(One::is_one), "divisor must be monic");
    let dn = den.len() - 1;
    if num.len() < den.len() {
        return num.iter().all(Zero::is_zero).then(|| vec![BigInt::zero()]);
    }
    let mut rem = num.clone();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for k in (0..quot.len()).rev() {
        let lead = rem[k + dn].clone();
        if lead.is_zero() {
            continue;
        }
        for (j, c) in den.iter().enumerate() {
            rem[k + j] -= &lead * c;
        }
        quot[k] = lead;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).take_while(|i| i * i <= n).filter(|i| n % i == 0).collect();
    let mut hi: Vec<u32> = out.iter().rev().map(|i| n / i).filter(|&q| q * q != n).collect();
    out.append(&mut hi);
    out
}

pub(crate) fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            while n % q == 0 {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `k`-th cyclotomic polynomial, from `x^k - 1 = prod_{j | k} Phi_j`.
pub(crate) fn cyclotomic(k: u32) -> IntPoly {
    assert!(k > 0);
    let mut phi = vec![BigInt::zero(); k as usize + 1];
    phi[0] = -BigInt::one();
    phi[k as usize] = BigInt::one();
    for j in divisors(k) {
        if j < k {
            phi = exact_div_monic(&phi, &cyclotomic(j)).expect("Phi_j divides x^k - 1");
        }
    }
    trim_int(&mut phi);
    phi
}

pub(crate) fn eval_complex(p: &[f64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
}

pub(crate) fn to_rat(p: &IntPoly) -> RatPoly {
    let mut out: RatPoly = p.iter().cloned().map(BigRational::from_integer).collect();
    trim_rat(&mut out);
    out
}

pub(crate) fn rat_to_f64(p: &RatPoly) -> Vec<f64> {
    p.iter().map(|c| c.to_f64().expect("finite coefficient")).collect()
}

fn make_monic(mut p: RatPoly) -> RatPoly {
    if let Some(lead) = p.last().cloned() {
        for c in p.iter_mut() {
            *c /= &lead;
        }
    }
    p
}

fn derivative(p: &RatPoly) -> RatPoly {
    let mut out: RatPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim_rat(&mut out);
    out
}

fn sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let mut out: RatPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    trim_rat(&mut out);
    out
}

fn divrem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = a.clone();
    trim_rat(&mut rem);
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b[db].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let q = &rem[k + db] / &lead;
        if q.is_zero() {
            continue;
        }
        for (j, c) in b.iter().enumerate() {
            rem[k + j] -= &q * c;
        }
        quot[k] = q;
    }
    trim_rat(&mut rem);
    trim_rat(&mut quot);
    (quot, rem)
}

/// Monic gcd over Q; the gcd of two zero polynomials is zero (empty).
pub(crate) fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim_rat(&mut x);
    trim_rat(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(x)
}

pub(crate) fn degree(p: &RatPoly) -> Option<usize> {
    (!p.is_empty()).then(|| p.len() - 1)
}

/// Yun's square-free decomposition: returns `(factor, multiplicity)` with
/// monic, square-free, pairwise coprime factors whose product (with
/// multiplicity) is the monic associate of `f`.
pub(crate) fn square_free_decomposition(f: &RatPoly) -> Vec<(RatPoly, usize)> {
    let f = make_monic(f.clone());
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut mult = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        let next_b = divrem(&b, &a).0;
        let c = divrem(&d, &a).0;
        d = sub(&c, &derivative(&next_b));
        if degree(&a).unwrap_or(0) > 0 {
            out.push((a, mult));
        }
        b = next_b;
        mult += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::Signed;

    /// Content-free integer associate of a rational polynomial, with positive leading coefficient.
    fn primitive_part(p: &RatPoly) -> IntPoly {
        let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: IntPoly = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !content.is_zero() {
            for c in ints.iter_mut() {
                *c /= &content;
            }
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in ints.iter_mut() {
                *c = -c.clone();
            }
        }
        ints
    }

    fn ip(c: &[i64]) -> IntPoly {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ip(&[-1, 1]));
        assert_eq!(cyclotomic(2), ip(&[1, 1]));
        assert_eq!(cyclotomic(3), ip(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), ip(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ip(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ip(&[1, 0, -1, 0, 1]));
        // first cyclotomic with a coefficient other than 0, +-1
        assert!(cyclotomic(105).iter().any(|c| c == &BigInt::from(-2)));
        for k in 1..40 {
            assert_eq!(cyclotomic(k).len() - 1, euler_phi(k) as usize);
        }
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(16), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn exact_division() {
        // x^2 - 1 = (x - 1)(x + 1)
        assert_eq!(exact_div_monic(&ip(&[-1, 0, 1]), &ip(&[-1, 1])), Some(ip(&[1, 1])));
        assert_eq!(exact_div_monic(&ip(&[1, -3, 1]), &ip(&[-1, 1])), None);
    }

    #[test]
    fn yun_decomposition() {
        // (x - 1)^2 (x + 2)
        let f = to_rat(&ip(&[2, -3, 0, 1]));
        let parts = square_free_decomposition(&f);
        assert_eq!(parts.len(), 2);
        assert_eq!(primitive_part(&parts[0].0), ip(&[2, 1]));
        assert_eq!(parts[0].1, 1);
        assert_eq!(primitive_part(&parts[1].0), ip(&[-1, 1]));
        assert_eq!(parts[1].1, 2);
    }
}
