//! Exact q-bracket computations on additive partition statistics.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`]: truncated power series over big integers, the Euler product,
//!   the partition generating function and Lambert series.
//! * [`arith`]: sieve-backed arithmetic functions, the divisor-sum transform
//!   and exact prime-logarithm vectors.
//! * [`partitions`]: streaming partition enumeration and the all-parts /
//!   distinct-parts statistics, both by brute force and by convolution.
//! * [`bracket`]: the q-bracket operator and the identity verification engine.
//! * [`cli`]: command-line configuration and report encoders.
//!
//! Everything is exact. There are no tolerances anywhere.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod bracket;
pub mod cli;
pub mod error;
pub mod partitions;
pub mod series;

pub use arith::{build_table, divisor_sum_transform, FunctionSpec, FunctionTable, PrimeLogVector, SpfSieve};
pub use bracket::{q_bracket, IdentityCase, IdentityId, VerificationReport};
pub use error::{Error, Result};
pub use partitions::{enumerate_partitions, Mode, Partition, StatisticVector};
pub use series::TruncatedSeries;
