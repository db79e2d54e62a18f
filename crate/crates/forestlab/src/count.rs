//! Exact arbitrary-precision counting of trees and forests, truncated EGF
//! algebra with exact rational coefficients, and numeric evaluation at the
//! singularity.
//!
//! All counts are exact big integers, all series coefficients exact
//! rationals; only evaluation produces approximate output, and even that goes
//! through exact rational arithmetic against a rational approximation of the
//! evaluation point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

pub type BigCount = BigUint;

/// `n^(n-1)`, the number of rooted labeled trees (Cayley).
pub fn cayley_rooted(n: u64) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::Empty("n must be >= 1".into()));
    }
    Ok(BigUint::from(n).pow(n as u32 - 1))
}

/// `n^(n-2)`, the number of labeled trees; `u_1 = 1` by convention.
pub fn count_trees(n: u64) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::Empty("n must be >= 1".into()));
    }
    if n == 1 {
        return Ok(BigUint::one());
    }
    Ok(BigUint::from(n).pow(n as u32 - 2))
}

pub fn factorial(n: u64) -> BigCount {
    let mut f = BigUint::one();
    for k in 2..=n {
        f *= BigUint::from(k);
    }
    f
}

pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
    }
    num / factorial(k)
}

/// `f_0..f_n`: forest counts via the component-of-vertex-1 recurrence
/// `f_n = sum_m C(n-1, m-1) m^(m-2) f_(n-m)`, `f_0 = 1`.
pub fn forest_counts_up_to(n: u64) -> Vec<BigCount> {
    let mut f: Vec<BigUint> = Vec::with_capacity(n as usize + 1);
    f.push(BigUint::one());
    let trees: Vec<BigUint> = (0..=n)
        .map(|m| if m == 0 { BigUint::zero() } else { count_trees(m).unwrap() })
        .collect();
    // binomials C(n-1, m-1) computed row by row
    for nn in 1..=n {
        let mut acc = BigUint::zero();
        let mut binom = BigUint::one(); // C(nn-1, 0)
        for m in 1..=nn {
            acc += &binom * &trees[m as usize] * &f[(nn - m) as usize];
            // C(nn-1, m) from C(nn-1, m-1)
            if m < nn {
                binom = binom * BigUint::from(nn - m) / BigUint::from(m);
            }
        }
        f.push(acc);
    }
    f
}

pub fn count_forests(n: u64) -> BigCount {
    forest_counts_up_to(n).pop().unwrap()
}

/// Forest counts split by component count: entry `[k]` of the result is the
/// number of forests on `[1..n]` with exactly `k` components, for
/// `k = 0..=k_max`. Entry 0 is nonzero only for `n = 0`.
pub fn forests_by_component_count(n: u64, k_max: u64) -> Vec<BigCount> {
    let n = n as usize;
    let k_max = k_max as usize;
    let trees: Vec<BigUint> = (0..=n as u64)
        .map(|m| if m == 0 { BigUint::zero() } else { count_trees(m).unwrap() })
        .collect();
    // w[j][k] built layer by layer in k to bound memory at two rows
    let mut prev: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    prev[0] = BigUint::one(); // k = 0
    let mut out: Vec<BigUint> = Vec::with_capacity(k_max + 1);
    out.push(if n == 0 { BigUint::one() } else { BigUint::zero() });
    for _k in 1..=k_max {
        let mut cur: Vec<BigUint> = vec![BigUint::zero(); n + 1];
        for j in 1..=n {
            let mut acc = BigUint::zero();
            let mut binom = BigUint::one(); // C(j-1, 0)
            for m in 1..=j {
                if !prev[j - m].is_zero() {
                    acc += &binom * &trees[m] * &prev[j - m];
                }
                if m < j {
                    binom = binom * BigUint::from((j - m) as u64) / BigUint::from(m as u64);
                }
            }
            cur[j] = acc;
        }
        out.push(cur[n].clone());
        prev = cur;
    }
    out
}

/// Number of forests on `[1..n]` with exactly `k` components.
pub fn count_forests_with_components(n: u64, k: u64) -> Result<BigCount> {
    if k > n {
        return Err(Error::TooLarge(format!("k = {k} exceeds n = {n}")));
    }
    Ok(forests_by_component_count(n, k).pop().unwrap())
}

/// Number of rooted forests on `[1..i]` with `k` components rooted at
/// `1..k`: `k * i^(i-k-1)` (equal to 1 when `i = k`).
pub fn count_rooted_forests(i: u64, k: u64) -> Result<BigCount> {
    if k < 1 || k > i {
        return Err(Error::TooLarge(format!("need 1 <= k <= i, got k={k} i={i}")));
    }
    if i == k {
        return Ok(BigUint::one());
    }
    Ok(BigUint::from(k) * BigUint::from(i).pow((i - k - 1) as u32))
}

/// Exact connectivity probability of a uniform forest: `n^(n-2) / f_n`.
pub fn connectivity_probability_exact(n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Empty("n must be >= 1".into()));
    }
    let u = count_trees(n)?;
    let f = count_forests(n);
    Ok(BigRational::new(
        BigInt::from(u),
        BigInt::from(f),
    ))
}

/// Every acyclic simple graph on `[1..n]`, each exactly once. Guarded to
/// n <= 7 (brute-force oracle scale).
pub fn enumerate_forests(n: u32) -> Result<Vec<LabeledGraph>> {
    if n > 7 {
        return Err(Error::TooLarge(format!(
            "forest enumeration capped at 7 vertices, got {n}"
        )));
    }
    let pairs: Vec<(u32, u32)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1 << m) {
        // incremental union-find with cycle abort
        let mut parent: Vec<u32> = (0..=n).collect();
        fn find(p: &mut [u32], mut v: u32) -> u32 {
            while p[v as usize] != v {
                p[v as usize] = p[p[v as usize] as usize];
                v = p[v as usize];
            }
            v
        }
        let mut edges = Vec::new();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru == rv {
                    continue 'mask;
                }
                parent[ru as usize] = rv;
                edges.push((u, v));
            }
        }
        out.push(LabeledGraph::from_edges(n, &edges).unwrap());
    }
    Ok(out)
}

/// A truncated exponential generating function: exact rational coefficients
/// `c_0..c_N` of `z^0..z^N` (so `c_n = a_n / n!`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedEgf {
    coeffs: Vec<BigRational>,
}

impl TruncatedEgf {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    /// Coefficient times n!: the underlying count `a_n` as a rational.
    pub fn count_at(&self, n: usize) -> BigRational {
        self.coefficient(n) * BigRational::from(BigInt::from(factorial(n as u64)))
    }

    fn mul_truncated(&self, other: &TruncatedEgf) -> TruncatedEgf {
        let n = self.order();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        TruncatedEgf { coeffs }
    }

    /// `exp` of a series with zero constant term, via the standard
    /// recurrence `F_n = (1/n) sum_k k U_k F_(n-k)`.
    fn exp(&self) -> TruncatedEgf {
        assert!(self.coeffs[0].is_zero(), "exp needs zero constant term");
        let n = self.order();
        let mut f = vec![BigRational::zero(); n + 1];
        f[0] = BigRational::one();
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += BigRational::from(BigInt::from(k)) * &self.coeffs[k] * &f[m - k];
                }
            }
            f[m] = acc / BigRational::from(BigInt::from(m));
        }
        TruncatedEgf { coeffs: f }
    }

    /// Partial sum at a rational point. All coefficients of the series in
    /// this crate are nonnegative, so partial sums are monotone in the order.
    pub fn eval_at(&self, z: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        // Horner over descending powers keeps the rational sizes tame.
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_at_f64(&self, z: &BigRational) -> f64 {
        self.eval_at(z).to_f64().expect("value fits f64")
    }
}

/// `T(z) = sum n^(n-1) z^n / n!`, rooted labeled trees.
pub fn series_t(order: usize) -> TruncatedEgf {
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for n in 1..=order {
        coeffs[n] = BigRational::new(
            BigInt::from(cayley_rooted(n as u64).unwrap()),
            BigInt::from(factorial(n as u64)),
        );
    }
    TruncatedEgf { coeffs }
}

/// `U(z) = T(z) - T(z)^2 / 2`, unrooted labeled trees (dissymmetry route).
pub fn series_u(order: usize) -> TruncatedEgf {
    let t = series_t(order);
    let t2 = t.mul_truncated(&t);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let coeffs = t
        .coeffs
        .iter()
        .zip(t2.coeffs.iter())
        .map(|(a, b)| a - b * &half)
        .collect();
    TruncatedEgf { coeffs }
}

/// `F(z) = exp U(z)`, labeled forests.
pub fn series_f(order: usize) -> TruncatedEgf {
    series_u(order).exp()
}

/// Exact rational approximation of `e^(-1)` within `1/(terms+1)!`.
pub fn e_inv_rational() -> BigRational {
    let terms = 60u64;
    let mut acc = BigRational::zero();
    let mut term = BigRational::one();
    for k in 0..=terms {
        if k > 0 {
            term = term / BigRational::from(BigInt::from(k));
        }
        if k % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

/// Exact rational approximation of `e^(-x)` for small integer / half-integer
/// use: returns `e_inv^m * sqrt_e_inv^h` would lose exactness, so only the
/// integer power is provided here.
pub fn e_inv_pow(m: u64) -> BigRational {
    let e = e_inv_rational();
    let mut acc = BigRational::one();
    for _ in 0..m {
        acc *= &e;
    }
    acc
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_small() {
        assert_eq!(cayley_rooted(4).unwrap(), BigUint::from(64u32));
        assert_eq!(count_trees(1).unwrap(), BigUint::one());
        assert_eq!(count_trees(4).unwrap(), BigUint::from(16u32));
        assert!(cayley_rooted(0).is_err());
    }

    #[test]
    fn forest_counts_small() {
        let f = forest_counts_up_to(6);
        assert_eq!(f[0], BigUint::one());
        assert_eq!(f[3], BigUint::from(7u32));
        assert_eq!(f[4], BigUint::from(38u32));
        assert_eq!(f[5], BigUint::from(291u32));
        assert_eq!(f[6], BigUint::from(2932u32));
    }

    #[test]
    fn forest_counts_match_enumeration() {
        for n in 0..=6u32 {
            let listed = enumerate_forests(n).unwrap();
            assert_eq!(
                BigUint::from(listed.len()),
                count_forests(n as u64),
                "n = {n}"
            );
            assert!(listed.iter().all(|g| g.is_forest()));
        }
        assert!(enumerate_forests(8).is_err());
    }

    #[test]
    fn forests_by_components_small() {
        let w4 = forests_by_component_count(4, 4);
        assert_eq!(
            w4[1..].to_vec(),
            vec![
                BigUint::from(16u32),
                BigUint::from(15u32),
                BigUint::from(6u32),
                BigUint::from(1u32)
            ]
        );
        assert!(count_forests_with_components(4, 5).is_err());
        // sizes (3,1) give 12, (2,2) give 3
        assert_eq!(
            count_forests_with_components(4, 2).unwrap(),
            BigUint::from(15u32)
        );
    }

    #[test]
    fn components_sum_to_forest_count() {
        for n in 1..=12u64 {
            let by_k = forests_by_component_count(n, n);
            let total: BigUint = by_k.iter().sum();
            assert_eq!(total, count_forests(n), "n = {n}");
        }
    }

    #[test]
    fn component_counts_match_enumeration() {
        for n in 1..=6u64 {
            let by_k = forests_by_component_count(n, n);
            let listed = enumerate_forests(n as u32).unwrap();
            for k in 1..=n as usize {
                let observed = listed
                    .iter()
                    .filter(|g| g.component_count() == k)
                    .count();
                assert_eq!(BigUint::from(observed), by_k[k], "n={n} k={k}");
            }
        }
    }

    #[test]
    fn rooted_forest_counts() {
        assert_eq!(count_rooted_forests(3, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(count_rooted_forests(5, 5).unwrap(), BigUint::one());
        assert_eq!(count_rooted_forests(4, 1).unwrap(), BigUint::from(16u32));
        assert!(count_rooted_forests(3, 4).is_err());
        assert!(count_rooted_forests(3, 0).is_err());
    }

    #[test]
    fn rooted_forest_binomial_identity() {
        // C(i,k) * a(i,k) = C(i-1, i-k) * i^(i-k)
        for i in 1..=10u64 {
            for k in 1..=i {
                let lhs = binomial(i, k) * count_rooted_forests(i, k).unwrap();
                let rhs = binomial(i - 1, i - k) * BigUint::from(i).pow((i - k) as u32);
                assert_eq!(lhs, rhs, "i={i} k={k}");
            }
        }
    }

    #[test]
    fn series_coefficients() {
        let t = series_t(9);
        assert_eq!(
            t.coefficient(3),
            &BigRational::new(BigInt::from(9), BigInt::from(6))
        );
        let f = series_f(9);
        assert_eq!(
            f.coefficient(4),
            &BigRational::new(BigInt::from(38), BigInt::from(24))
        );
        // U via dissymmetry equals u_n / n! for n <= 9
        let u = series_u(9);
        for n in 1..=9usize {
            let expected = BigRational::new(
                BigInt::from(count_trees(n as u64).unwrap()),
                BigInt::from(factorial(n as u64)),
            );
            assert_eq!(u.coefficient(n), &expected, "n = {n}");
        }
        // n! * [z^n] F = f_n
        let fs = forest_counts_up_to(9);
        for n in 0..=9usize {
            assert_eq!(
                f.count_at(n),
                BigRational::from(BigInt::from(fs[n].clone())),
                "n = {n}"
            );
        }
    }

    #[test]
    fn eval_partial_sums_monotone() {
        let z = e_inv_rational();
        let t = series_t(40);
        let mut prev = BigRational::zero();
        for order in [10usize, 20, 30, 40] {
            let val = series_t(order).eval_at(&z);
            assert!(val > prev);
            prev = val;
        }
        assert!(t.eval_at(&z) < BigRational::one());
    }

    #[test]
    fn connectivity_probability_small() {
        assert_eq!(
            connectivity_probability_exact(2).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert_eq!(
            connectivity_probability_exact(4).unwrap(),
            BigRational::new(BigInt::from(8), BigInt::from(19))
        );
    }

    #[test]
    fn e_inv_accuracy() {
        let approx = rational_to_f64(&e_inv_rational());
        assert!((approx - (-1.0f64).exp()).abs() < 1e-15);
    }
}
