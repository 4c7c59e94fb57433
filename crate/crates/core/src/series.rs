//! Truncated formal power series with arbitrary-precision integer coefficients.
//!
//! A series of order `N` holds the coefficients of `q^0..=q^N`; everything of
//! degree above `N` is discarded. Binary operations require both operands to
//! carry the same order and never re-truncate implicitly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::FunctionTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Stores `coeffs` verbatim; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "a truncated series needs at least one coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// Convenience constructor for small literal series.
    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// `c * q^degree`, or the zero series if `degree > order`.
    pub fn monomial(c: BigInt, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*q")?,
                _ => write!(f, "{c}*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// Generalized pentagonal numbers `k(3k-1)/2` for `k = 1, -1, 2, -2, ...`,
/// paired with the sign `(-1)^k`, up to `limit`.
fn pentagonal_terms(limit: usize) -> impl Iterator<Item = (usize, bool)> {
    (1usize..)
        .flat_map(|k| {
            let negative = k % 2 == 1;
            [(k * (3 * k - 1) / 2, negative), (k * (3 * k + 1) / 2, negative)]
        })
        .take_while(move |&(g, _)| g <= limit)
}

/// `(q;q)_inf` mod `q^{N+1}` via the pentagonal number theorem.
pub fn euler_product_series(n: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(n);
    for (g, negative) in pentagonal_terms(n) {
        s.coeffs[g] = if negative { -BigInt::one() } else { BigInt::one() };
    }
    s
}

/// `p(0), ..., p(n)` by Euler's pentagonal recurrence.
pub fn partition_numbers(n: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
    p.push(BigInt::one());
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for (g, negative) in pentagonal_terms(m) {
            // p(m) = sum over pentagonal g of -(sign of q^g) * p(m - g)
            if negative {
                acc += &p[m - g];
            } else {
                acc -= &p[m - g];
            }
        }
        p.push(acc);
    }
    p
}

/// `1/(q;q)_inf` mod `q^{N+1}`; coefficient `n` is `p(n)`.
pub fn partition_gf_series(n: usize) -> TruncatedSeries {
    TruncatedSeries {
        coeffs: partition_numbers(n),
    }
}

/// `sum_{n=1}^{N} f(n) q^n / (1 - q^n)` mod `q^{N+1}`.
///
/// Coefficient `m` is the divisor sum of `f` at `m`. Built by adding `f(n)` at
/// every multiple of `n`.
pub fn lambert_series(f: &FunctionTable, n: usize) -> Result<TruncatedSeries> {
    f.require(n)?;
    let mut s = TruncatedSeries::zero(n);
    for d in 1..=n {
        let v = f.get(d);
        if v.is_zero() {
            continue;
        }
        for m in (d..=n).step_by(d) {
            s.coeffs[m] += v;
        }
    }
    Ok(s)
}

/// `sum_{n=1}^{N} f(n) q^n`, the plain power series of a table.
pub fn plain_series(f: &FunctionTable, n: usize) -> Result<TruncatedSeries> {
    f.require(n)?;
    let mut s = TruncatedSeries::zero(n);
    for k in 1..=n {
        s.coeffs[k] = f.get(k).clone();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Brute-force product of (1 - q^k) for k = 1..=n, in i128.
    fn naive_euler_product(n: usize) -> Vec<i128> {
        let mut poly = vec![0i128; n + 1];
        poly[0] = 1;
        for k in 1..=n {
            for m in (k..=n).rev() {
                poly[m] -= poly[m - k];
            }
        }
        poly
    }

    #[test]
    fn from_coeffs_examples() {
        let one = TruncatedSeries::from_i64s(&[1]).unwrap();
        assert_eq!(one.order(), 0);
        assert_eq!(one, TruncatedSeries::one(0));

        let q = TruncatedSeries::from_i64s(&[0, 1]).unwrap();
        assert_eq!(q.order(), 1);
        assert_eq!(q, TruncatedSeries::monomial(BigInt::one(), 1, 1));

        let fib = TruncatedSeries::from_i64s(&[1, 1, 2, 3, 5]).unwrap();
        assert_eq!(fib.order(), 4);
        assert_eq!(*fib.coeff(4), BigInt::from(5));
    }

    #[test]
    fn from_coeffs_rejects_empty() {
        assert!(matches!(
            TruncatedSeries::from_coeffs(vec![]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = TruncatedSeries::from_i64s(&[1, 1, 0]).unwrap();
        let b = TruncatedSeries::from_i64s(&[1, -1, 0]).unwrap();
        assert_eq!(a.mul(&b).unwrap().coeffs(), ints(&[1, 0, -1]).as_slice());
    }

    #[test]
    fn mul_order_mismatch() {
        let a = TruncatedSeries::one(2);
        let b = TruncatedSeries::one(3);
        assert_eq!(a.mul(&b), Err(Error::OrderMismatch { left: 2, right: 3 }));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn euler_product_small() {
        assert_eq!(euler_product_series(0).coeffs(), ints(&[1]).as_slice());
        let naive: Vec<BigInt> = naive_euler_product(7).into_iter().map(BigInt::from).collect();
        assert_eq!(naive, ints(&[1, -1, -1, 0, 0, 1, 0, 1]));
        assert_eq!(euler_product_series(7).coeffs(), naive.as_slice());
    }

    #[test]
    fn euler_product_matches_naive_to_120() {
        let naive: Vec<BigInt> = naive_euler_product(120).into_iter().map(BigInt::from).collect();
        assert_eq!(euler_product_series(120).coeffs(), naive.as_slice());
    }

    #[test]
    fn partition_numbers_small() {
        let p = partition_numbers(10);
        assert_eq!(p, ints(&[1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]));
        // p(100), p(200): classical values
        let p = partition_numbers(200);
        assert_eq!(p[100], BigInt::from(190_569_292u64));
        assert_eq!(p[200].to_string(), "3972999029388");
    }

    #[test]
    fn product_and_inverse_cancel() {
        for n in [0, 1, 10, 50] {
            let prod = partition_gf_series(n).mul(&euler_product_series(n)).unwrap();
            assert_eq!(prod, TruncatedSeries::one(n), "n = {n}");
        }
    }

    #[test]
    fn lambert_sigma1_and_geometric() {
        let id = FunctionTable::from_fn("identity", 6, BigInt::from);
        let s = lambert_series(&id, 6).unwrap();
        assert_eq!(s.coeffs(), ints(&[0, 1, 3, 4, 7, 6, 12]).as_slice());

        let e1 = FunctionTable::from_fn("indicator_one", 8, |k| BigInt::from((k == 1) as i64));
        let s = lambert_series(&e1, 8).unwrap();
        assert_eq!(s.coeffs(), ints(&[0, 1, 1, 1, 1, 1, 1, 1, 1]).as_slice());
    }

    #[test]
    fn partition_times_lambert_identity_at_4() {
        let id = FunctionTable::from_fn("identity", 4, BigInt::from);
        let prod = partition_gf_series(4).mul(&lambert_series(&id, 4).unwrap()).unwrap();
        assert_eq!(*prod.coeff(4), BigInt::from(20));
    }

    #[test]
    fn lambert_table_too_short() {
        let id = FunctionTable::from_fn("identity", 3, BigInt::from);
        assert!(matches!(lambert_series(&id, 4), Err(Error::TableTooShort { .. })));
    }

    #[test]
    fn display() {
        let s = TruncatedSeries::from_i64s(&[1, -1, 0, 2]).unwrap();
        assert_eq!(s.to_string(), "1 + -1*q + 2*q^3 + O(q^4)");
        assert_eq!(TruncatedSeries::zero(1).to_string(), "0 + O(q^2)");
    }
}
