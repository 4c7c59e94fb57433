//! The q-bracket operator and the identity verification engine.
//!
//! `<g>_q = (q;q)_inf * sum_n q^n sum_{lambda |- n} g(lambda)`. For additive
//! statistics the bracket collapses to a Lambert series (all parts) or to the
//! plain power series of `f` (distinct parts), and the two statistics are
//! linked through the divisor-sum transform. The engine checks each of these
//! facts and their arithmetic consequences by exact comparison, usually along
//! two or three independent routes: brute-force enumeration, convolution
//! against `p(n - k)`, and power series products.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{build_table_with, divisor_sum_transform, FunctionSpec, FunctionTable, PrimeLogVector, SpfSieve};
use crate::error::{Error, Result};
use crate::partitions::{
    partition_convolution, stat_all_parts_fast, stat_distinct_parts_fast, Mode, PartitionCensus, Partitions,
    StatisticVector,
};
use crate::series::{euler_product_series, lambert_series, partition_numbers, plain_series, TruncatedSeries};

/// Attached to every report that relies on the distinct-parts convolution.
pub const DISTINCT_PARTS_NOTE: &str = "distinct-parts convolution is evaluated as sum_{k=1}^{n} p(n-k) f(k); \
the commonly printed summand f(n) is inconsistent with the Cauchy product of sum p(n) q^n and sum f(n) q^n \
and with the divisor-sum link to the all-parts statistic";

/// Attached to jordan_dual reports.
pub const JORDAN_NOTE: &str = "the convolution side is sum_{k=1}^{n} k^alpha p(n-k), the divisor sum of J_alpha \
convolved with p; the form sum_{k=1}^{n} J_alpha(k) p(n-k) does not hold (n=2, alpha=1 gives 2 instead of 3)";

/// `(q;q)_inf * sum_{n<=N} stat(n) q^n`, truncated at `q^N`.
pub fn q_bracket(stat: &StatisticVector, n: usize) -> Result<TruncatedSeries> {
    if stat.bound() < n {
        return Err(Error::InvalidInput(format!(
            "statistic is defined up to {}, but the bracket needs {n}",
            stat.bound()
        )));
    }
    let weighted = TruncatedSeries::from_coeffs(stat.values()[..=n].to_vec())?;
    euler_product_series(n).mul(&weighted)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Theorem1,
    Theorem3,
    Multcor,
    Stanley,
    ContainingOne,
    EulerMoment,
    JordanDual,
    SquarefreeParity,
    DistinctSquares,
    MangoldtProduct,
    EisensteinMoment,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        IdentityId::Theorem1,
        IdentityId::Theorem3,
        IdentityId::Multcor,
        IdentityId::Stanley,
        IdentityId::ContainingOne,
        IdentityId::EulerMoment,
        IdentityId::JordanDual,
        IdentityId::SquarefreeParity,
        IdentityId::DistinctSquares,
        IdentityId::MangoldtProduct,
        IdentityId::EisensteinMoment,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Theorem1 => "theorem1",
            IdentityId::Theorem3 => "theorem3",
            IdentityId::Multcor => "multcor",
            IdentityId::Stanley => "stanley",
            IdentityId::ContainingOne => "containing_one",
            IdentityId::EulerMoment => "euler_moment",
            IdentityId::JordanDual => "jordan_dual",
            IdentityId::SquarefreeParity => "squarefree_parity",
            IdentityId::DistinctSquares => "distinct_squares",
            IdentityId::MangoldtProduct => "mangoldt_product",
            IdentityId::EisensteinMoment => "eisenstein_moment",
        }
    }

    /// Identities parameterised by a catalog function.
    pub fn takes_function(&self) -> bool {
        matches!(self, IdentityId::Theorem1 | IdentityId::Theorem3 | IdentityId::Multcor)
    }

    pub fn takes_alpha(&self) -> bool {
        matches!(
            self,
            IdentityId::EulerMoment | IdentityId::JordanDual | IdentityId::EisensteinMoment
        )
    }

    fn uses_distinct_parts(&self) -> bool {
        !matches!(
            self,
            IdentityId::Theorem1 | IdentityId::SquarefreeParity | IdentityId::EisensteinMoment
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// The function an identity is instantiated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseFunction {
    Catalog(FunctionSpec),
    /// `tables` random tables with values in `[-9, 9]`, drawn from `seed`.
    Random {
        seed: u64,
        tables: usize,
    },
}

impl fmt::Display for CaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseFunction::Catalog(spec) => spec.fmt(f),
            CaseFunction::Random { seed, tables } => write!(f, "random(seed={seed},tables={tables})"),
        }
    }
}

impl Serialize for CaseFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One identity instantiated with its function, parameter and bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IdentityCase {
    pub identity: IdentityId,
    pub f: Option<CaseFunction>,
    pub alpha: Option<u32>,
    pub n_fast: usize,
    pub n_oracle: usize,
    /// Bound for the big-integer product check of mangoldt_product.
    pub n_product: usize,
}

impl IdentityCase {
    pub fn new(identity: IdentityId, n_fast: usize, n_oracle: usize) -> Self {
        Self {
            identity,
            f: None,
            alpha: None,
            n_fast,
            n_oracle,
            n_product: 25,
        }
    }

    pub fn with_function(mut self, spec: FunctionSpec) -> Self {
        self.f = Some(CaseFunction::Catalog(spec));
        self
    }

    pub fn with_random(mut self, seed: u64, tables: usize) -> Self {
        self.f = Some(CaseFunction::Random { seed, tables });
        self
    }

    pub fn with_alpha(mut self, alpha: u32) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_product_bound(mut self, n_product: usize) -> Self {
        self.n_product = n_product;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_oracle > self.n_fast {
            return Err(Error::InvalidCase(format!(
                "oracle bound {} exceeds fast bound {}",
                self.n_oracle, self.n_fast
            )));
        }
        if self.identity.takes_function() && self.f.is_none() {
            return Err(Error::InvalidCase(format!("{} needs a function", self.identity)));
        }
        if let Some(CaseFunction::Random { .. }) = self.f {
            if self.identity != IdentityId::Multcor {
                return Err(Error::InvalidCase(format!(
                    "{} does not accept random tables",
                    self.identity
                )));
            }
        }
        if self.identity.takes_alpha() && self.alpha.is_none() {
            return Err(Error::InvalidCase(format!("{} needs alpha", self.identity)));
        }
        if self.identity == IdentityId::EisensteinMoment && self.alpha == Some(0) {
            return Err(Error::InvalidCase("eisenstein_moment needs k >= 1".into()));
        }
        Ok(())
    }
}

/// Functions the bracket-level identities are checked against by default.
pub const CATALOG_FUNCTIONS: [FunctionSpec; 8] = [
    FunctionSpec::One,
    FunctionSpec::Identity,
    FunctionSpec::Power(2),
    FunctionSpec::Power(3),
    FunctionSpec::Moebius,
    FunctionSpec::MoebiusSquared,
    FunctionSpec::Liouville,
    FunctionSpec::Jordan(1),
];

pub const RANDOM_TABLES: usize = 100;

/// The full verification suite in catalog order.
pub fn catalog(n_fast: usize, n_oracle: usize, n_product: usize, seed: u64) -> Vec<IdentityCase> {
    let base = |id| IdentityCase::new(id, n_fast, n_oracle).with_product_bound(n_product);
    let mut cases = Vec::new();
    for id in [IdentityId::Theorem1, IdentityId::Theorem3, IdentityId::Multcor] {
        for spec in CATALOG_FUNCTIONS {
            cases.push(base(id).with_function(spec));
        }
    }
    cases.push(base(IdentityId::Multcor).with_random(seed, RANDOM_TABLES));
    cases.push(base(IdentityId::Stanley));
    cases.push(base(IdentityId::ContainingOne));
    for a in 1..=3 {
        cases.push(base(IdentityId::EulerMoment).with_alpha(a));
    }
    for a in 1..=3 {
        cases.push(base(IdentityId::JordanDual).with_alpha(a));
    }
    cases.push(base(IdentityId::SquarefreeParity));
    cases.push(base(IdentityId::DistinctSquares));
    cases.push(base(IdentityId::MangoldtProduct));
    for k in 1..=3 {
        cases.push(base(IdentityId::EisensteinMoment).with_alpha(k));
    }
    cases
}

/// A compared value: an integer or an exact logarithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Int(BigInt),
    Log(PrimeLogVector),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Int(v) => v.fmt(f),
            Witness::Log(v) => v.fmt(f),
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<BigInt> for Witness {
    fn from(v: BigInt) -> Self {
        Witness::Int(v)
    }
}

impl From<&BigInt> for Witness {
    fn from(v: &BigInt) -> Self {
        Witness::Int(v.clone())
    }
}

impl From<u64> for Witness {
    fn from(v: u64) -> Self {
        Witness::Int(BigInt::from(v))
    }
}

impl From<PrimeLogVector> for Witness {
    fn from(v: PrimeLogVector) -> Self {
        Witness::Log(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub n: usize,
    pub check: String,
    pub lhs: Witness,
    pub rhs: Witness,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub case: IdentityCase,
    pub per_n: Vec<CheckRow>,
    pub overall: bool,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.per_n.iter().filter(|r| !r.pass)
    }
}

#[derive(Default)]
struct Rows(Vec<CheckRow>);

impl Rows {
    fn eq(&mut self, n: usize, check: impl Into<String>, lhs: impl Into<Witness>, rhs: impl Into<Witness>) {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let pass = lhs == rhs;
        self.0.push(CheckRow {
            n,
            check: check.into(),
            lhs,
            rhs,
            pass,
        });
    }
}

/// Shared precomputation for a batch of cases: partition numbers, a sieve,
/// and the enumeration census. Immutable once built, so cases can run in
/// parallel against one engine.
pub struct Engine {
    p: Vec<BigInt>,
    sieve: SpfSieve,
    census: PartitionCensus,
}

impl Engine {
    pub fn new(n_fast: usize, n_oracle: usize) -> Self {
        Self {
            p: partition_numbers(n_fast),
            sieve: SpfSieve::new(n_fast),
            census: PartitionCensus::new(n_oracle as u32),
        }
    }

    /// An engine large enough for every case in `cases`.
    pub fn for_cases(cases: &[IdentityCase]) -> Self {
        let fast = cases.iter().map(|c| c.n_fast.max(c.n_product)).max().unwrap_or(0);
        let oracle = cases.iter().map(|c| c.n_oracle).max().unwrap_or(0);
        Self::new(fast, oracle)
    }

    fn table(&self, spec: FunctionSpec, n: usize) -> FunctionTable {
        build_table_with(spec, n, &self.sieve)
    }

    fn oracle_vector(&self, f: &FunctionTable, mode: Mode, n: usize) -> Result<StatisticVector> {
        let values = (0..=n).map(|m| self.census.statistic(f, mode, m)).collect();
        StatisticVector::new(values, mode, f.name())
    }

    fn check_capacity(&self, case: &IdentityCase) -> Result<()> {
        if case.n_fast.max(case.n_product) >= self.p.len() || case.n_oracle > self.census.bound() {
            return Err(Error::InvalidCase(
                "engine bounds are smaller than the case bounds".into(),
            ));
        }
        Ok(())
    }

    pub fn verify(&self, case: &IdentityCase) -> Result<VerificationReport> {
        case.validate()?;
        self.check_capacity(case)?;
        let start = Instant::now();
        let mut rows = Rows::default();
        let mut notes = Vec::new();
        let (nf, no) = (case.n_fast, case.n_oracle);
        match case.identity {
            IdentityId::Theorem1 | IdentityId::Theorem3 => {
                let Some(CaseFunction::Catalog(spec)) = case.f else {
                    return Err(Error::InvalidCase(format!(
                        "{} needs a catalog function",
                        case.identity
                    )));
                };
                let mode = if case.identity == IdentityId::Theorem1 {
                    Mode::AllParts
                } else {
                    Mode::DistinctParts
                };
                self.bracket_closed_form(&self.table(spec, nf), mode, nf, no, &mut rows)?;
            }
            IdentityId::Multcor => match case.f {
                Some(CaseFunction::Catalog(spec)) => {
                    self.multcor(&self.table(spec, nf), nf, no, "", &mut rows)?;
                }
                Some(CaseFunction::Random { seed, tables }) => {
                    for (i, f) in random_tables(seed, tables, no).iter().enumerate() {
                        self.multcor(f, no, no, &format!("table {i}: "), &mut rows)?;
                    }
                }
                None => unreachable!("validated"),
            },
            IdentityId::Stanley => self.stanley(nf, no, &mut rows)?,
            IdentityId::ContainingOne => self.containing_one(nf, no, &mut rows)?,
            IdentityId::EulerMoment => self.euler_moment(case.alpha.unwrap(), nf, no, &mut rows)?,
            IdentityId::JordanDual => {
                self.jordan_dual(case.alpha.unwrap(), nf, no, &mut rows)?;
                notes.push(JORDAN_NOTE.to_string());
            }
            IdentityId::SquarefreeParity => self.squarefree_parity(nf, no, &mut rows)?,
            IdentityId::DistinctSquares => self.distinct_squares(nf, no, &mut rows)?,
            IdentityId::MangoldtProduct => self.mangoldt_product(no, case.n_product, &mut rows)?,
            IdentityId::EisensteinMoment => self.eisenstein_moment(case.alpha.unwrap(), nf, no, &mut rows)?,
        }
        if case.identity.uses_distinct_parts() {
            notes.insert(0, DISTINCT_PARTS_NOTE.to_string());
        }
        let per_n = rows.0;
        let overall = per_n.iter().all(|r| r.pass);
        Ok(VerificationReport {
            case: case.clone(),
            per_n,
            overall,
            notes,
            elapsed: start.elapsed(),
        })
    }

    /// Runs `cases` concurrently; reports come back in input order.
    pub fn verify_all(&self, cases: &[IdentityCase]) -> Vec<Result<VerificationReport>> {
        cases.par_iter().map(|c| self.verify(c)).collect()
    }

    /// Bracket of the statistic against its closed form (Lambert series for
    /// all parts, plain series for distinct parts), with the statistic built
    /// both by convolution (to `nf`) and by enumeration (to `no`).
    fn bracket_closed_form(&self, f: &FunctionTable, mode: Mode, nf: usize, no: usize, rows: &mut Rows) -> Result<()> {
        let (closed, label) = match mode {
            Mode::AllParts => (lambert_series(f, nf)?, "lambert"),
            Mode::DistinctParts => (plain_series(f, nf)?, "series(f)"),
        };
        let fast = match mode {
            Mode::AllParts => stat_all_parts_fast(f, nf)?,
            Mode::DistinctParts => stat_distinct_parts_fast(f, nf)?,
        };
        let bracket = q_bracket(&fast, nf)?;
        for n in 0..=nf {
            rows.eq(
                n,
                format!("bracket(convolution) = {label}"),
                bracket.coeff(n),
                closed.coeff(n),
            );
        }
        let oracle = self.oracle_vector(f, mode, no)?;
        let bracket = q_bracket(&oracle, no)?;
        for n in 0..=no {
            rows.eq(
                n,
                format!("bracket(enumeration) = {label}"),
                bracket.coeff(n),
                closed.coeff(n),
            );
        }
        for n in 0..=no {
            rows.eq(n, "enumeration = convolution", oracle.entry(n), fast.entry(n));
        }
        Ok(())
    }

    /// Three-way identity: all parts of `f`, distinct parts of `F`, and
    /// `sum p(n-k) F(k)`, where `F` is the divisor sum of `f`.
    fn multcor(&self, f: &FunctionTable, nf: usize, no: usize, prefix: &str, rows: &mut Rows) -> Result<()> {
        let f = f.truncated(nf)?;
        let big_f = divisor_sum_transform(&f);
        let conv = partition_convolution(&self.p, &big_f, nf)?;
        for n in 1..=no {
            let all = self.census.statistic(&f, Mode::AllParts, n);
            let distinct = self.census.statistic(&big_f, Mode::DistinctParts, n);
            rows.eq(
                n,
                format!("{prefix}enum all-parts f = enum distinct-parts F"),
                &all,
                &distinct,
            );
            rows.eq(
                n,
                format!("{prefix}enum distinct-parts F = sum p(n-k) F(k)"),
                &distinct,
                &conv[n],
            );
        }
        let via_series = TruncatedSeries::from_coeffs(self.p[..=nf].to_vec())?.mul(&lambert_series(&f, nf)?)?;
        let distinct_fast = stat_distinct_parts_fast(&big_f, nf)?;
        for n in 1..=nf {
            rows.eq(
                n,
                format!("{prefix}[q^n] P(q) L_f(q) = fast distinct-parts F"),
                via_series.coeff(n),
                distinct_fast.entry(n),
            );
        }
        Ok(())
    }

    fn prefix_sums_of_p(&self, n: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n + 1];
        for m in 1..=n {
            out[m] = &out[m - 1] + &self.p[m - 1];
        }
        out
    }

    fn stanley(&self, nf: usize, no: usize, rows: &mut Rows) -> Result<()> {
        let sum_p = self.prefix_sums_of_p(nf);
        for n in 1..=no {
            let ones = self.census.multiplicity(n, 1);
            let distinct: u64 = (1..=n).map(|k| self.census.containing(n, k)).sum();
            rows.eq(n, "number of 1s = number of distinct parts", ones, distinct);
            rows.eq(n, "number of distinct parts = sum p(n-k)", distinct, &sum_p[n]);
        }
        let e1 = self.table(FunctionSpec::IndicatorOne, nf);
        let fast = stat_all_parts_fast(&e1, nf)?;
        let one = self.table(FunctionSpec::One, nf);
        let distinct_fast = stat_distinct_parts_fast(&one, nf)?;
        for n in 1..=nf {
            rows.eq(n, "fast number of 1s = sum p(n-k)", fast.entry(n), &sum_p[n]);
            rows.eq(n, "fast distinct parts = sum p(n-k)", distinct_fast.entry(n), &sum_p[n]);
        }
        Ok(())
    }

    fn containing_one(&self, nf: usize, no: usize, rows: &mut Rows) -> Result<()> {
        let mu = self.table(FunctionSpec::Moebius, nf);
        for n in 1..=no {
            rows.eq(
                n,
                "partitions containing 1 = p(n-1)",
                self.census.containing(n, 1),
                &self.p[n - 1],
            );
            rows.eq(
                n,
                "enum sum of mu over all parts = p(n-1)",
                self.census.statistic(&mu, Mode::AllParts, n),
                &self.p[n - 1],
            );
        }
        let fast = stat_all_parts_fast(&mu, nf)?;
        for n in 1..=nf {
            rows.eq(
                n,
                "fast sum of mu over all parts = p(n-1)",
                fast.entry(n),
                &self.p[n - 1],
            );
        }
        Ok(())
    }

    fn euler_moment(&self, alpha: u32, nf: usize, no: usize, rows: &mut Rows) -> Result<()> {
        let power = self.table(FunctionSpec::Power(alpha), nf);
        let sigma = self.table(FunctionSpec::Sigma(alpha), nf);
        let conv = partition_convolution(&self.p, &sigma, nf)?;
        for n in 1..=no {
            rows.eq(
                n,
                "enum all-parts n^a = sum sigma_a(k) p(n-k)",
                self.census.statistic(&power, Mode::AllParts, n),
                &conv[n],
            );
            rows.eq(
                n,
                "enum distinct-parts sigma_a = sum sigma_a(k) p(n-k)",
                self.census.statistic(&sigma, Mode::DistinctParts, n),
                &conv[n],
            );
        }
        let via_series = TruncatedSeries::from_coeffs(self.p[..=nf].to_vec())?.mul(&lambert_series(&power, nf)?)?;
        for n in 1..=nf {
            rows.eq(
                n,
                "[q^n] P(q) L_{n^a}(q) = sum sigma_a(k) p(n-k)",
                via_series.coeff(n),
                &conv[n],
            );
            if alpha == 1 {
                rows.eq(
                    n,
                    "n p(n) = sum sigma_1(k) p(n-k)",
                    &self.p[n] * BigInt::from(n),
                    &conv[n],
                );
            }
        }
        Ok(())
    }

    fn jordan_dual(&self, alpha: u32, nf: usize, no: usize, rows: &mut Rows) -> Result<()> {
        let jordan = self.table(FunctionSpec::Jordan(alpha), nf);
        let power = self.table(FunctionSpec::Power(alpha), nf);
        let conv_power = partition_convolution(&self.p, &power, nf)?;
        for n in 1..=no {
            let all = self.census.statistic(&jordan, Mode::AllParts, n);
            let distinct = self.census.statistic(&power, Mode::DistinctParts, n);
            rows.eq(n, "enum all-parts J_a = enum distinct-parts n^a", &all, &distinct);
            rows.eq(n, "enum distinct-parts n^a = sum k^a p(n-k)", &distinct, &conv_power[n]);
        }
        let all_fast = stat_all_parts_fast(&jordan, nf)?;
        for n in 1..=nf {
            rows.eq(
                n,
                "fast all-parts J_a = sum k^a p(n-k)",
                all_fast.entry(n),
                &conv_power[n],
            );
        }
        Ok(())
    }

    fn squarefree_parity(&self, nf: usize, no: usize, rows: &mut Rows) -> Result<()> {
        let squarefree = self.table(FunctionSpec::MoebiusSquared, nf);
        let two_omega = self.table(FunctionSpec::TwoPowOmega, nf);
        let conv = partition_convolution(&self.p, &two_omega, nf)?;
        for n in 1..=no {
            rows.eq(
                n,
                "Q(n) by enumeration = sum p(n-k) 2^omega(k)",
                self.census.statistic(&squarefree, Mode::AllParts, n),
                &conv[n],
            );
        }
        let q = stat_all_parts_fast(&squarefree, nf)?;
        for n in 1..=nf {
            rows.eq(n, "fast Q(n) = sum p(n-k) 2^omega(k)", q.entry(n), &conv[n]);
            let parity = |v: &BigInt| BigInt::from(v.is_odd() as u8);
            rows.eq(
                n,
                "Q(n) mod 2 = p(n-1) mod 2",
                parity(q.entry(n)),
                parity(&self.p[n - 1]),
            );
        }
        Ok(())
    }

    fn distinct_squares(&self, nf: usize, no: usize, rows: &mut Rows) -> Result<()> {
        let squares_sum = |n: usize| -> BigInt { (1..).take_while(|k| k * k <= n).map(|k| &self.p[n - k * k]).sum() };
        let indicator = self.table(FunctionSpec::SquareIndicator, nf);
        for n in 1..=no {
            rows.eq(
                n,
                "distinct squares by enumeration = sum p(n-k^2)",
                self.census.statistic(&indicator, Mode::DistinctParts, n),
                squares_sum(n),
            );
        }
        let liouville = self.table(FunctionSpec::Liouville, nf);
        let all_fast = stat_all_parts_fast(&liouville, nf)?;
        let distinct_fast = stat_distinct_parts_fast(&indicator, nf)?;
        for n in 1..=nf {
            rows.eq(
                n,
                "fast all-parts liouville = sum p(n-k^2)",
                all_fast.entry(n),
                squares_sum(n),
            );
            rows.eq(
                n,
                "fast distinct squares = sum p(n-k^2)",
                distinct_fast.entry(n),
                squares_sum(n),
            );
        }
        Ok(())
    }

    fn mangoldt_product(&self, no: usize, n_product: usize, rows: &mut Rows) -> Result<()> {
        let sieve = &self.sieve;
        let log_of = |k: usize| sieve.prime_log_vector(k);
        let conv = |n: usize| {
            let mut acc = PrimeLogVector::zero();
            for k in 2..=n {
                acc.add_scaled(&log_of(k), &self.p[n - k]);
            }
            acc
        };
        for n in 1..=no {
            let mut lambda_all = PrimeLogVector::zero();
            let mut log_distinct = PrimeLogVector::zero();
            let mut stream = Partitions::new(n as u32);
            while let Some(parts) = stream.advance() {
                for (i, &part) in parts.iter().enumerate() {
                    lambda_all += &sieve.von_mangoldt_vector(part as usize);
                    if i == 0 || parts[i - 1] != part {
                        log_distinct += &log_of(part as usize);
                    }
                }
            }
            let rhs = conv(n);
            rows.eq(
                n,
                "enum all-parts Lambda = enum distinct-parts log",
                lambda_all,
                log_distinct.clone(),
            );
            rows.eq(n, "enum distinct-parts log = sum p(n-k) log k", log_distinct, rhs);
        }
        for n in 1..=n_product {
            let mut lhs = BigInt::one();
            for k in 2..=n {
                let e: u32 = (&self.p[n - k])
                    .try_into()
                    .map_err(|_| Error::InvalidCase(format!("product bound {n} is too large")))?;
                lhs *= BigInt::from(k).pow(e);
            }
            let mut rhs = BigInt::one();
            let mut stream = Partitions::new(n as u32);
            while let Some(parts) = stream.advance() {
                for (i, &part) in parts.iter().enumerate() {
                    if part > 1 && (i == 0 || parts[i - 1] != part) {
                        rhs *= part;
                    }
                }
            }
            rows.eq(n, "prod k^p(n-k) = product of distinct parts", lhs, rhs);
        }
        Ok(())
    }

    fn eisenstein_moment(&self, k: u32, nf: usize, no: usize, rows: &mut Rows) -> Result<()> {
        let alpha = 2 * k - 1;
        let power = self.table(FunctionSpec::Power(alpha), nf);
        let sigma = self.table(FunctionSpec::Sigma(alpha), nf);
        let bracket = q_bracket(&stat_all_parts_fast(&power, nf)?, nf)?;
        for n in 1..=nf {
            rows.eq(
                n,
                "[q^n] bracket(convolution) = sigma_{2k-1}(n)",
                bracket.coeff(n),
                sigma.get(n),
            );
        }
        let bracket = q_bracket(&self.oracle_vector(&power, Mode::AllParts, no)?, no)?;
        for n in 1..=no {
            rows.eq(
                n,
                "[q^n] bracket(enumeration) = sigma_{2k-1}(n)",
                bracket.coeff(n),
                sigma.get(n),
            );
        }
        Ok(())
    }
}

/// `count` tables on `1..=n` with values uniform in `[-9, 9]`.
pub fn random_tables(seed: u64, count: usize, n: usize) -> Vec<FunctionTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| FunctionTable::from_fn(format!("random[{i}]"), n, |_| BigInt::from(rng.gen_range(-9i32..=9))))
        .collect()
}

pub fn verify(case: &IdentityCase) -> Result<VerificationReport> {
    Engine::for_cases(std::slice::from_ref(case)).verify(case)
}

/// Bracket check for an arbitrary table: the bracket of the
/// all-parts statistic against the Lambert series of `f`.
pub fn verify_theorem1(f: &FunctionTable, n_fast: usize, n_oracle: usize) -> Result<VerificationReport> {
    verify_closed_form(IdentityId::Theorem1, f, n_fast, n_oracle)
}

/// Distinct-parts counterpart of [`verify_theorem1`]: the bracket against the
/// plain power series of `f`.
pub fn verify_theorem3(f: &FunctionTable, n_fast: usize, n_oracle: usize) -> Result<VerificationReport> {
    verify_closed_form(IdentityId::Theorem3, f, n_fast, n_oracle)
}

fn verify_closed_form(id: IdentityId, f: &FunctionTable, n_fast: usize, n_oracle: usize) -> Result<VerificationReport> {
    if n_oracle > n_fast {
        return Err(Error::InvalidCase(format!(
            "oracle bound {n_oracle} exceeds fast bound {n_fast}"
        )));
    }
    let start = Instant::now();
    let engine = Engine::new(n_fast, n_oracle);
    let mode = if id == IdentityId::Theorem1 {
        Mode::AllParts
    } else {
        Mode::DistinctParts
    };
    let mut rows = Rows::default();
    engine.bracket_closed_form(f, mode, n_fast, n_oracle, &mut rows)?;
    let per_n = rows.0;
    let overall = per_n.iter().all(|r| r.pass);
    let mut notes = Vec::new();
    if mode == Mode::DistinctParts {
        notes.push(DISTINCT_PARTS_NOTE.to_string());
    }
    Ok(VerificationReport {
        case: IdentityCase {
            identity: id,
            f: f.name().parse().ok().map(CaseFunction::Catalog),
            alpha: None,
            n_fast,
            n_oracle,
            n_product: 0,
        },
        per_n,
        overall,
        notes,
        elapsed: start.elapsed(),
    })
}

/// Runs a single case on a freshly sized engine. Same as [`verify`].
pub fn verify_corollary(case: &IdentityCase) -> Result<VerificationReport> {
    verify(case)
}
