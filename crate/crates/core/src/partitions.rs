//! Integer partitions and the two additive partition statistics.
//!
//! For an arithmetic function `f`, the all-parts statistic of `n` is
//! `sum_{lambda |- n} sum_{parts} f(part)` and the distinct-parts statistic
//! counts each distinct part value once per partition. Both are available by
//! brute-force enumeration and by convolution against `p(n - k)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{divisor_sum_transform, FunctionTable};
use crate::error::{Error, Result};
use crate::series::partition_numbers;

/// Nonincreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts `parts` into nonincreasing order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.parts.iter().all(|&p| p >= 1) && self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    /// Distinct part values, largest first.
    pub fn distinct_parts(&self) -> impl Iterator<Item = u32> + '_ {
        distinct(&self.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

fn distinct(parts: &[u32]) -> impl Iterator<Item = u32> + '_ {
    parts
        .iter()
        .enumerate()
        .filter(|&(i, p)| i == 0 || parts[i - 1] != *p)
        .map(|(_, &p)| p)
}

/// Streaming enumeration of the partitions of `n` in reverse-lexicographic
/// order, starting from `[n]` and ending at `[1; n]`.
///
/// [`Partitions::advance`] lends the current part list without allocating;
/// the [`Iterator`] impl clones it into a [`Partition`].
#[derive(Debug, Clone)]
pub struct Partitions {
    parts: Vec<u32>,
    started: bool,
    done: bool,
}

impl Partitions {
    pub fn new(n: u32) -> Self {
        let parts = if n == 0 { Vec::new() } else { vec![n] };
        Self {
            parts,
            started: false,
            done: false,
        }
    }

    pub fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.parts);
        }
        // strip trailing ones; they are redistributed below
        let mut rest = 0u32;
        while self.parts.last() == Some(&1) {
            self.parts.pop();
            rest += 1;
        }
        let Some(last) = self.parts.last_mut() else {
            self.done = true;
            return None;
        };
        *last -= 1;
        let cap = *last;
        rest += 1;
        while rest > 0 {
            let take = rest.min(cap);
            self.parts.push(take);
            rest -= take;
        }
        Some(&self.parts)
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.advance().map(|parts| Partition { parts: parts.to_vec() })
    }
}

pub fn enumerate_partitions(n: u32) -> Partitions {
    Partitions::new(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    AllParts,
    DistinctParts,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::AllParts => "all-parts",
            Mode::DistinctParts => "distinct-parts",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-parts" | "all" => Ok(Mode::AllParts),
            "distinct-parts" | "distinct" => Ok(Mode::DistinctParts),
            _ => Err(Error::InvalidInput(format!("unknown mode `{s}`"))),
        }
    }
}

/// Entry `n` holds the statistic summed over all partitions of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatisticVector {
    values: Vec<BigInt>,
    mode: Mode,
    f_name: String,
}

impl StatisticVector {
    /// `values[0]` must be zero.
    pub fn new(values: Vec<BigInt>, mode: Mode, f_name: impl Into<String>) -> Result<Self> {
        match values.first() {
            None => Err(Error::InvalidInput("statistic vector needs entry 0".into())),
            Some(v) if !v.is_zero() => Err(Error::InvalidInput(
                "statistic entry 0 must vanish (the empty partition has no parts)".into(),
            )),
            Some(_) => Ok(Self {
                values,
                mode,
                f_name: f_name.into(),
            }),
        }
    }

    pub fn entry(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Largest `n` covered.
    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn f_name(&self) -> &str {
        &self.f_name
    }
}

fn statistic_of(parts: &[u32], f: &FunctionTable, mode: Mode) -> BigInt {
    match mode {
        Mode::AllParts => parts.iter().map(|&p| f.get(p as usize)).sum(),
        Mode::DistinctParts => distinct(parts).map(|p| f.get(p as usize)).sum(),
    }
}

/// Brute-force statistic of `n`, visiting every partition of `n`.
pub fn stat_oracle(f: &FunctionTable, mode: Mode, n: u32) -> Result<BigInt> {
    f.require(n as usize)?;
    let mut stream = Partitions::new(n);
    let mut acc = BigInt::zero();
    while let Some(parts) = stream.advance() {
        acc += statistic_of(parts, f, mode);
    }
    Ok(acc)
}

/// Aggregate enumeration counts for every `n <= bound`.
///
/// `multiplicity(n, k)` is the number of parts equal to `k` across all
/// partitions of `n`; `containing(n, k)` is the number of partitions of `n`
/// having `k` as a part. Every oracle statistic is a linear combination of
/// these counts, so one enumeration pass serves any number of functions.
#[derive(Debug, Clone)]
pub struct PartitionCensus {
    bound: usize,
    count: Vec<u64>,
    multiplicity: Vec<Vec<u64>>,
    containing: Vec<Vec<u64>>,
}

impl PartitionCensus {
    pub fn new(bound: u32) -> Self {
        let b = bound as usize;
        let mut count = vec![0u64; b + 1];
        let mut multiplicity = Vec::with_capacity(b + 1);
        let mut containing = Vec::with_capacity(b + 1);
        for n in 0..=bound {
            let mut mult = vec![0u64; n as usize + 1];
            let mut cont = vec![0u64; n as usize + 1];
            let mut stream = Partitions::new(n);
            while let Some(parts) = stream.advance() {
                count[n as usize] += 1;
                for (i, &p) in parts.iter().enumerate() {
                    mult[p as usize] += 1;
                    if i == 0 || parts[i - 1] != p {
                        cont[p as usize] += 1;
                    }
                }
            }
            multiplicity.push(mult);
            containing.push(cont);
        }
        Self {
            bound: b,
            count,
            multiplicity,
            containing,
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of partitions of `n` found by enumeration.
    pub fn count(&self, n: usize) -> u64 {
        self.count[n]
    }

    pub fn multiplicity(&self, n: usize, k: usize) -> u64 {
        self.multiplicity[n][k]
    }

    pub fn containing(&self, n: usize, k: usize) -> u64 {
        self.containing[n][k]
    }

    pub fn statistic(&self, f: &FunctionTable, mode: Mode, n: usize) -> BigInt {
        let weights = match mode {
            Mode::AllParts => &self.multiplicity[n],
            Mode::DistinctParts => &self.containing[n],
        };
        (1..=n)
            .filter(|&k| weights[k] != 0)
            .map(|k| f.get(k) * weights[k])
            .sum()
    }

    /// The oracle statistic for every `n <= bound`.
    pub fn statistic_vector(&self, f: &FunctionTable, mode: Mode) -> Result<StatisticVector> {
        f.require(self.bound)?;
        let values = (0..=self.bound).map(|n| self.statistic(f, mode, n)).collect();
        StatisticVector::new(values, mode, f.name())
    }
}

/// `sum_{k=1}^{n} p(n-k) w(k)` for `n = 0..=bound`, given `p(0..=bound)`.
pub fn partition_convolution(p: &[BigInt], w: &FunctionTable, bound: usize) -> Result<Vec<BigInt>> {
    w.require(bound)?;
    assert!(p.len() > bound, "partition table too short");
    let mut out = vec![BigInt::zero(); bound + 1];
    for k in 1..=bound {
        let wk = w.get(k);
        if wk.is_zero() {
            continue;
        }
        for n in k..=bound {
            out[n] += &p[n - k] * wk;
        }
    }
    Ok(out)
}

/// All-parts statistic to `n` via `sum_k p(n-k) F(k)` with `F` the divisor sum of `f`.
pub fn stat_all_parts_fast(f: &FunctionTable, n: usize) -> Result<StatisticVector> {
    let f = f.truncated(n)?;
    let big_f = divisor_sum_transform(&f);
    let values = partition_convolution(&partition_numbers(n), &big_f, n)?;
    StatisticVector::new(values, Mode::AllParts, f.name())
}

/// Distinct-parts statistic to `n` via `sum_k p(n-k) f(k)`.
pub fn stat_distinct_parts_fast(f: &FunctionTable, n: usize) -> Result<StatisticVector> {
    let values = partition_convolution(&partition_numbers(n), f, n)?;
    StatisticVector::new(values, Mode::DistinctParts, f.name())
}

pub fn stat_fast(f: &FunctionTable, mode: Mode, n: usize) -> Result<StatisticVector> {
    match mode {
        Mode::AllParts => stat_all_parts_fast(f, n),
        Mode::DistinctParts => stat_distinct_parts_fast(f, n),
    }
}
