//! Arithmetic functions on `1..=N`, evaluated exactly from a smallest prime
//! factor sieve.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Smallest-prime-factor table for `2..=N`, built with a linear sieve.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfSieve {
    pub fn new(n: usize) -> Self {
        let n = n.max(1);
        assert!(n < u32::MAX as usize, "sieve bound too large");
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Self { spf, primes }
    }

    pub fn bound(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Least prime dividing `k`, for `2 <= k <= bound`.
    pub fn smallest_prime_factor(&self, k: usize) -> u32 {
        assert!(
            k >= 2 && k <= self.bound(),
            "{k} outside sieve range 2..={}",
            self.bound()
        );
        self.spf[k]
    }

    pub fn is_prime(&self, k: usize) -> bool {
        k >= 2 && self.spf[k] as usize == k
    }

    /// Prime factorization as `(p, exponent)` pairs in increasing order of `p`.
    pub fn factorize(&self, mut k: usize) -> Vec<(u64, u32)> {
        assert!(
            k >= 1 && k <= self.bound(),
            "{k} outside sieve range 1..={}",
            self.bound()
        );
        let mut out: Vec<(u64, u32)> = Vec::new();
        while k > 1 {
            let p = self.spf[k] as usize;
            let mut e = 0;
            while k.is_multiple_of(p) {
                k /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    pub fn prime_log_vector(&self, k: usize) -> PrimeLogVector {
        let mut v = PrimeLogVector::zero();
        for (p, e) in self.factorize(k) {
            v.entries.insert(p, BigInt::from(e));
        }
        v
    }

    /// `{p: 1}` when `k` is a power of the prime `p`, the zero vector otherwise.
    pub fn von_mangoldt_vector(&self, k: usize) -> PrimeLogVector {
        match self.factorize(k).as_slice() {
            [(p, _)] => PrimeLogVector::prime(*p),
            _ => PrimeLogVector::zero(),
        }
    }
}

/// Exact value of `log k` as an exponent vector over the primes.
pub fn prime_log_vector(k: usize) -> PrimeLogVector {
    assert!(k >= 1, "log is only defined for positive integers");
    SpfSieve::new(k).prime_log_vector(k)
}

/// Exact value of the von Mangoldt function at `k`.
pub fn von_mangoldt_vector(k: usize) -> PrimeLogVector {
    assert!(k >= 1, "von Mangoldt is only defined for positive integers");
    SpfSieve::new(k).von_mangoldt_vector(k)
}

/// An element `sum a_p log p` of the free abelian group on the primes.
///
/// Zero exponents are never stored, so structural equality is equality of
/// the represented real numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PrimeLogVector {
    entries: BTreeMap<u64, BigInt>,
}

impl PrimeLogVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `log p`. The caller guarantees `p` is prime.
    pub fn prime(p: u64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(p, BigInt::one());
        Self { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: u64) -> BigInt {
        self.entries.get(&p).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.entries.iter().map(|(&p, a)| (p, a))
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|(&p, a)| (p, a * factor)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for (&p, a) in &other.entries {
            let slot = self.entries.entry(p).or_default();
            *slot += a * factor;
            if slot.is_zero() {
                self.entries.remove(&p);
            }
        }
    }

    /// `exp` of the vector, i.e. `prod p^{a_p}`. `None` if some exponent is
    /// negative or too large to materialise.
    pub fn exponentiate(&self) -> Option<BigInt> {
        let mut acc = BigInt::one();
        for (&p, a) in &self.entries {
            if a.is_negative() {
                return None;
            }
            let e: u32 = a.try_into().ok()?;
            acc *= BigInt::from(p).pow(e);
        }
        Some(acc)
    }
}

impl AddAssign<&PrimeLogVector> for PrimeLogVector {
    fn add_assign(&mut self, rhs: &PrimeLogVector) {
        self.add_scaled(rhs, &BigInt::one());
    }
}

impl Add for &PrimeLogVector {
    type Output = PrimeLogVector;

    fn add(self, rhs: &PrimeLogVector) -> PrimeLogVector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for PrimeLogVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, a)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}:{a}")?;
        }
        f.write_str("}")
    }
}

/// Dense values `f(1), ..., f(N)` of an integer-valued arithmetic function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    name: String,
    values: Vec<BigInt>,
}

impl FunctionTable {
    /// `values[0]` is `f(1)`.
    pub fn new(name: impl Into<String>, values: Vec<BigInt>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }

    pub fn from_fn(name: impl Into<String>, n: usize, mut f: impl FnMut(usize) -> BigInt) -> Self {
        Self::new(name, (1..=n).map(&mut f).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Largest `k` with `f(k)` defined.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `f(k)` for `1 <= k <= len`.
    pub fn get(&self, k: usize) -> &BigInt {
        assert!(k >= 1, "arithmetic tables start at 1");
        &self.values[k - 1]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// The first `n` values, or an error if the table is shorter.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        self.require(n)?;
        Ok(Self::new(self.name.clone(), self.values[..n].to_vec()))
    }

    pub fn require(&self, n: usize) -> Result<()> {
        if self.values.len() < n {
            return Err(Error::TableTooShort {
                name: self.name.clone(),
                len: self.values.len(),
                needed: n,
            });
        }
        Ok(())
    }
}

/// The built-in catalog of arithmetic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionSpec {
    Zero,
    /// The constant function 1.
    One,
    /// The indicator of `n = 1`.
    IndicatorOne,
    Identity,
    Power(u32),
    Sigma(u32),
    Jordan(u32),
    Moebius,
    /// `mu^2`, the squarefree indicator.
    MoebiusSquared,
    Omega,
    TwoPowOmega,
    Liouville,
    SquareIndicator,
}

impl FunctionSpec {
    pub const NAMES: &'static [&'static str] = &[
        "zero",
        "one",
        "indicator_one",
        "identity",
        "power:A",
        "sigma:A",
        "jordan:A",
        "moebius",
        "moebius_sq",
        "omega",
        "two_pow_omega",
        "liouville",
        "square_indicator",
    ];

    /// Looks up `name` with an optional parameter.
    pub fn new(name: &str, alpha: Option<i64>) -> Result<Self> {
        let unsupported = |reason: &str| Error::UnsupportedParameter {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        let exponent = |alpha: Option<i64>| -> Result<u32> {
            let a = alpha.ok_or_else(|| unsupported("an exponent is required"))?;
            if a < 0 {
                return Err(unsupported("negative exponents are not supported"));
            }
            u32::try_from(a).map_err(|_| unsupported("exponent too large"))
        };
        let plain = |spec: FunctionSpec| -> Result<FunctionSpec> {
            match alpha {
                Some(_) => Err(unsupported("this function takes no parameter")),
                None => Ok(spec),
            }
        };
        match name {
            "zero" => plain(Self::Zero),
            "one" | "constant" => plain(Self::One),
            "indicator_one" | "e1" => plain(Self::IndicatorOne),
            "identity" | "n" => plain(Self::Identity),
            "power" | "pow" => Ok(Self::Power(exponent(alpha)?)),
            "sigma" => Ok(Self::Sigma(exponent(alpha)?)),
            "jordan" => Ok(Self::Jordan(exponent(alpha)?)),
            "totient" | "phi" => plain(Self::Jordan(1)),
            "moebius" | "mu" => plain(Self::Moebius),
            "moebius_sq" | "mu2" | "squarefree" => plain(Self::MoebiusSquared),
            "omega" => plain(Self::Omega),
            "two_pow_omega" => plain(Self::TwoPowOmega),
            "liouville" => plain(Self::Liouville),
            "square_indicator" | "squares" => plain(Self::SquareIndicator),
            _ => Err(Error::UnknownFunction(name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::One => "one",
            Self::IndicatorOne => "indicator_one",
            Self::Identity => "identity",
            Self::Power(_) => "power",
            Self::Sigma(_) => "sigma",
            Self::Jordan(_) => "jordan",
            Self::Moebius => "moebius",
            Self::MoebiusSquared => "moebius_sq",
            Self::Omega => "omega",
            Self::TwoPowOmega => "two_pow_omega",
            Self::Liouville => "liouville",
            Self::SquareIndicator => "square_indicator",
        }
    }

    pub fn alpha(&self) -> Option<u32> {
        match *self {
            Self::Power(a) | Self::Sigma(a) | Self::Jordan(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha() {
            Some(a) => write!(f, "{}:{a}", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    /// Grammar: `name` or `name:alpha`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once(':') {
            None => Self::new(s, None),
            Some((name, alpha)) => {
                let alpha: i64 = alpha.trim().parse().map_err(|_| Error::UnsupportedParameter {
                    name: name.to_string(),
                    reason: format!("`{alpha}` is not an integer"),
                })?;
                Self::new(name.trim(), Some(alpha))
            }
        }
    }
}

/// Evaluates a catalog function on `1..=n`.
pub fn build_table(spec: FunctionSpec, n: usize) -> FunctionTable {
    build_table_with(spec, n, &SpfSieve::new(n))
}

/// As [`build_table`], reusing a sieve whose bound covers `n`.
pub fn build_table_with(spec: FunctionSpec, n: usize, sieve: &SpfSieve) -> FunctionTable {
    assert!(n == 0 || sieve.bound() >= n, "sieve bound {} below {n}", sieve.bound());
    let name = spec.to_string();
    let sign = |negative: bool| if negative { -BigInt::one() } else { BigInt::one() };
    match spec {
        FunctionSpec::Zero => FunctionTable::from_fn(name, n, |_| BigInt::zero()),
        FunctionSpec::One => FunctionTable::from_fn(name, n, |_| BigInt::one()),
        FunctionSpec::IndicatorOne => FunctionTable::from_fn(name, n, |k| BigInt::from((k == 1) as u8)),
        FunctionSpec::Identity => FunctionTable::from_fn(name, n, BigInt::from),
        FunctionSpec::Power(a) => FunctionTable::from_fn(name, n, |k| BigInt::from(k).pow(a)),
        FunctionSpec::Sigma(a) => {
            let mut values = vec![BigInt::zero(); n];
            for d in 1..=n {
                let term = BigInt::from(d).pow(a);
                for m in (d..=n).step_by(d) {
                    values[m - 1] += &term;
                }
            }
            FunctionTable::new(name, values)
        }
        FunctionSpec::Jordan(a) => FunctionTable::from_fn(name, n, |k| {
            sieve
                .factorize(k)
                .into_iter()
                .map(|(p, m)| {
                    let p = BigInt::from(p);
                    p.clone().pow(a * m) - p.pow(a * (m - 1))
                })
                .product()
        }),
        FunctionSpec::Moebius => FunctionTable::from_fn(name, n, |k| {
            let f = sieve.factorize(k);
            if f.iter().any(|&(_, e)| e > 1) {
                BigInt::zero()
            } else {
                sign(f.len() % 2 == 1)
            }
        }),
        FunctionSpec::MoebiusSquared => FunctionTable::from_fn(name, n, |k| {
            BigInt::from(sieve.factorize(k).iter().all(|&(_, e)| e == 1) as u8)
        }),
        FunctionSpec::Omega => FunctionTable::from_fn(name, n, |k| BigInt::from(sieve.factorize(k).len())),
        FunctionSpec::TwoPowOmega => FunctionTable::from_fn(name, n, |k| BigInt::one() << sieve.factorize(k).len()),
        FunctionSpec::Liouville => FunctionTable::from_fn(name, n, |k| {
            let big_omega: u32 = sieve.factorize(k).iter().map(|&(_, e)| e).sum();
            sign(big_omega % 2 == 1)
        }),
        FunctionSpec::SquareIndicator => FunctionTable::from_fn(name, n, |k| {
            let r = k.isqrt();
            BigInt::from((r * r == k) as u8)
        }),
    }
}

/// `F(m) = sum_{d | m} f(d)` for every `m` the table covers.
pub fn divisor_sum_transform(f: &FunctionTable) -> FunctionTable {
    let n = f.len();
    let mut values = vec![BigInt::zero(); n];
    for d in 1..=n {
        let v = f.get(d);
        if v.is_zero() {
            continue;
        }
        for m in (d..=n).step_by(d) {
            values[m - 1] += v;
        }
    }
    FunctionTable::new(format!("divsum({})", f.name()), values)
}
