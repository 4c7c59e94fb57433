//! Command-line front end: argument parsing, command execution and the
//! CSV / JSON / text encoders.
//!
//! Commands are pure: [`run`] turns a [`RunConfig`] into the bytes to emit and
//! an exit status. Writing them out is left to the binary.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{build_table, FunctionSpec};
use crate::bracket::{
    catalog, q_bracket, CaseFunction, Engine, IdentityCase, IdentityId, VerificationReport, CATALOG_FUNCTIONS,
    RANDOM_TABLES,
};
use crate::partitions::{stat_fast, Mode};
use crate::series::{lambert_series, partition_numbers, plain_series};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Relative `--output` paths are resolved against this directory when set.
pub const OUTPUT_DIR_ENV: &str = "QBRACKET_OUTPUT_DIR";

pub const DEFAULT_N_FAST: usize = 200;
pub const DEFAULT_N_ORACLE: usize = 30;
pub const DEFAULT_N_PRODUCT: usize = 25;
pub const DEFAULT_SEED: u64 = 20170101;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    AllParts,
    DistinctParts,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::AllParts => Mode::AllParts,
            ModeArg::DistinctParts => Mode::DistinctParts,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qbracket",
    version,
    about = "Exact q-brackets of partition statistics and identity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Emit q-bracket coefficients next to their closed form.
    Compute(ComputeArgs),
    /// Run identity verifications.
    Verify(VerifyArgs),
    /// Emit derived integer sequences.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Catalog function, `name` or `name:alpha` (e.g. identity, moebius, sigma:2).
    #[arg(long = "f")]
    pub f: String,
    #[arg(long, value_enum, default_value_t = ModeArg::AllParts)]
    pub mode: ModeArg,
    #[arg(long = "n", default_value_t = DEFAULT_N_FAST)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Identity name, or `all`.
    #[arg(long, default_value = "all")]
    pub identity: String,
    /// Restrict function-parameterised identities to one function (`random` for multcor).
    #[arg(long = "f")]
    pub f: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<i64>,
    /// Bound for the convolution / series checks.
    #[arg(long = "n", default_value_t = DEFAULT_N_FAST)]
    pub n: usize,
    /// Bound for the enumeration checks; defaults to min(30, n).
    #[arg(long)]
    pub oracle: Option<usize>,
    /// Bound for the big-integer product check.
    #[arg(long, default_value_t = DEFAULT_N_PRODUCT)]
    pub product_bound: usize,
    /// Seed for the randomized tables.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated sequence names: p, Q, distinct_squares, stat.
    #[arg(long, default_value = "p")]
    pub seq: String,
    #[arg(long = "n", default_value_t = DEFAULT_N_FAST)]
    pub n: usize,
    /// Function for the `stat` sequence.
    #[arg(long = "f")]
    pub f: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::AllParts)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Compute,
    Verify,
    Table,
}

/// Fully resolved run configuration; echoed into JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seq: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    pub mode: Mode,
    pub n_fast: usize,
    pub n_oracle: usize,
    pub n_product: usize,
    pub format: Format,
    pub seed: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn base(command: Command, n_fast: usize, common: &Common) -> Self {
        Self {
            command,
            f_spec: None,
            identity: None,
            seq: None,
            alpha: None,
            mode: Mode::AllParts,
            n_fast,
            n_oracle: DEFAULT_N_ORACLE.min(n_fast),
            n_product: DEFAULT_N_PRODUCT,
            format: common.format,
            seed: DEFAULT_SEED,
            output: common.output.clone(),
        }
    }

    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let config = match &cli.command {
            CommandArgs::Compute(a) => Self {
                f_spec: Some(a.f.clone()),
                mode: a.mode.into(),
                ..Self::base(Command::Compute, a.n, &a.common)
            },
            CommandArgs::Verify(a) => Self {
                f_spec: a.f.clone(),
                identity: Some(a.identity.clone()),
                alpha: a.alpha,
                n_oracle: a.oracle.unwrap_or(DEFAULT_N_ORACLE.min(a.n)),
                n_product: a.product_bound,
                seed: a.seed,
                ..Self::base(Command::Verify, a.n, &a.common)
            },
            CommandArgs::Table(a) => Self {
                f_spec: a.f.clone(),
                seq: Some(a.seq.clone()),
                mode: a.mode.into(),
                ..Self::base(Command::Table, a.n, &a.common)
            },
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_oracle > self.n_fast {
            return Err(CliError::Usage(format!(
                "oracle bound {} exceeds fast bound {}",
                self.n_oracle, self.n_fast
            )));
        }
        Ok(())
    }

    /// Where to write, honouring [`OUTPUT_DIR_ENV`] for relative paths.
    pub fn output_path(&self) -> Option<PathBuf> {
        let out = self.output.as_ref()?;
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if out.is_relative() => Some(Path::new(&dir).join(out)),
            _ => Some(out.clone()),
        }
    }
}

/// Result of a command: the bytes to emit, the exit status, and timing
/// information that is reported on stderr only.
#[derive(Debug)]
pub struct RunOutcome {
    pub payload: Vec<u8>,
    pub status: i32,
    pub timings: Vec<(String, Duration)>,
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    match config.command {
        Command::Compute => cmd_compute(config),
        Command::Verify => cmd_verify(config),
        Command::Table => cmd_table(config),
    }
}

fn parse_spec(s: &str) -> Result<FunctionSpec, CliError> {
    s.parse::<FunctionSpec>()
        .map_err(|e| CliError::Usage(format!("{e}; known functions: {}", FunctionSpec::NAMES.join(", "))))
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
    version: &'static str,
}

fn to_json<T: Serialize>(config: &RunConfig, body: T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&Envelope {
        config,
        body,
        version: VERSION,
    })
    .expect("serialisable");
    out.push(b'\n');
    out
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

#[derive(Serialize)]
struct ComputeRow {
    n: usize,
    qbracket_coeff: String,
    closed_form_coeff: String,
}

pub fn cmd_compute(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let spec = parse_spec(config.f_spec.as_deref().unwrap_or_default())?;
    let n = config.n_fast;
    let f = build_table(spec, n);
    let stat = stat_fast(&f, config.mode, n)?;
    let bracket = q_bracket(&stat, n)?;
    let closed = match config.mode {
        Mode::AllParts => lambert_series(&f, n)?,
        Mode::DistinctParts => plain_series(&f, n)?,
    };
    let rows: Vec<ComputeRow> = (0..=n)
        .map(|m| ComputeRow {
            n: m,
            qbracket_coeff: bracket.coeff(m).to_string(),
            closed_form_coeff: closed.coeff(m).to_string(),
        })
        .collect();
    let payload = match config.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                rows: &'a [ComputeRow],
            }
            to_json(config, Body { rows: &rows })
        }
        Format::Csv => to_csv(
            &["n", "qbracket_coeff", "closed_form_coeff"],
            rows.iter()
                .map(|r| vec![r.n.to_string(), r.qbracket_coeff.clone(), r.closed_form_coeff.clone()]),
        ),
        Format::Text => {
            let mut s = format!("# f = {spec}, mode = {}, n <= {n}\n", config.mode);
            s.push_str("n\tqbracket\tclosed_form\n");
            for r in &rows {
                s.push_str(&format!("{}\t{}\t{}\n", r.n, r.qbracket_coeff, r.closed_form_coeff));
            }
            s.into_bytes()
        }
    };
    Ok(RunOutcome {
        payload,
        status: EXIT_OK,
        timings: Vec::new(),
    })
}

/// Expands the verify flags into concrete cases, in catalog order.
pub fn verify_cases(config: &RunConfig) -> Result<Vec<IdentityCase>, CliError> {
    let name = config.identity.as_deref().unwrap_or("all");
    let (nf, no, np, seed) = (config.n_fast, config.n_oracle, config.n_product, config.seed);
    if name == "all" {
        if config.f_spec.is_some() || config.alpha.is_some() {
            return Err(CliError::Usage("--f and --alpha need a specific --identity".into()));
        }
        return Ok(catalog(nf, no, np, seed));
    }
    let id: IdentityId = name.parse()?;
    let base = IdentityCase::new(id, nf, no).with_product_bound(np);

    if !id.takes_function() && config.f_spec.is_some() {
        return Err(CliError::Usage(format!("{id} does not take --f")));
    }
    if !id.takes_alpha() && config.alpha.is_some() {
        return Err(CliError::Usage(format!("{id} does not take --alpha")));
    }
    let alphas: Vec<u32> =
        match config.alpha {
            Some(a) => vec![u32::try_from(a)
                .map_err(|_| CliError::Usage(format!("alpha must be a nonnegative integer, got {a}")))?],
            None if id.takes_alpha() => vec![1, 2, 3],
            None => vec![],
        };

    let mut cases = Vec::new();
    if id.takes_function() {
        match config.f_spec.as_deref() {
            Some("random") if id == IdentityId::Multcor => cases.push(base.with_random(seed, RANDOM_TABLES)),
            Some(s) => cases.push(base.with_function(parse_spec(s)?)),
            None => {
                cases.extend(CATALOG_FUNCTIONS.iter().map(|&spec| base.clone().with_function(spec)));
                if id == IdentityId::Multcor {
                    cases.push(base.with_random(seed, RANDOM_TABLES));
                }
            }
        }
    } else if id.takes_alpha() {
        cases.extend(alphas.into_iter().map(|a| base.clone().with_alpha(a)));
    } else {
        cases.push(base);
    }
    for case in &cases {
        case.validate()?;
    }
    Ok(cases)
}

struct CaseLabel<'a>(&'a IdentityCase);

impl fmt::Display for CaseLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "{}", c.identity)?;
        if let Some(func) = &c.f {
            write!(f, " f={func}")?;
        }
        if let Some(a) = c.alpha {
            write!(f, " alpha={a}")?;
        }
        Ok(())
    }
}

fn encode_reports(config: &RunConfig, reports: &[VerificationReport]) -> Vec<u8> {
    match config.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                reports: &'a [VerificationReport],
            }
            to_json(config, Body { reports })
        }
        Format::Csv => {
            let opt = |v: Option<String>| v.unwrap_or_default();
            let rows = reports.iter().flat_map(|r| {
                r.per_n.iter().map(move |row| {
                    vec![
                        r.case.identity.to_string(),
                        opt(r.case.f.as_ref().map(CaseFunction::to_string)),
                        opt(r.case.alpha.map(|a| a.to_string())),
                        row.n.to_string(),
                        row.check.clone(),
                        row.lhs.to_string(),
                        row.rhs.to_string(),
                        row.pass.to_string(),
                    ]
                })
            });
            to_csv(&["identity", "f", "alpha", "n", "check", "lhs", "rhs", "pass"], rows)
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let status = if r.overall { "PASS" } else { "FAIL" };
                s.push_str(&format!(
                    "{status} {} (n_fast={}, n_oracle={}, {} checks)\n",
                    CaseLabel(&r.case),
                    r.case.n_fast,
                    r.case.n_oracle,
                    r.per_n.len()
                ));
                for row in r.failures() {
                    s.push_str(&format!("  n={} {}: {} != {}\n", row.n, row.check, row.lhs, row.rhs));
                }
                for note in &r.notes {
                    s.push_str(&format!("  note: {note}\n"));
                }
            }
            let passed = reports.iter().filter(|r| r.overall).count();
            s.push_str(&format!("{passed}/{} cases passed\n", reports.len()));
            s.into_bytes()
        }
    }
}

pub fn cmd_verify(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let cases = verify_cases(config)?;
    let engine = Engine::for_cases(&cases);
    let reports = engine
        .verify_all(&cases)
        .into_iter()
        .collect::<crate::Result<Vec<_>>>()?;
    let status = if reports.iter().all(|r| r.overall) {
        EXIT_OK
    } else {
        EXIT_IDENTITY_FAILURE
    };
    let timings = reports
        .iter()
        .map(|r| (CaseLabel(&r.case).to_string(), r.elapsed))
        .collect();
    Ok(RunOutcome {
        payload: encode_reports(config, &reports),
        status,
        timings,
    })
}

#[derive(Serialize)]
struct Sequence {
    name: String,
    values: Vec<String>,
}

fn sequence(name: &str, config: &RunConfig) -> Result<Sequence, CliError> {
    let n = config.n_fast;
    let values: Vec<BigInt> = match name {
        "p" => partition_numbers(n),
        "Q" => stat_fast(&build_table(FunctionSpec::MoebiusSquared, n), Mode::AllParts, n)?
            .values()
            .to_vec(),
        "distinct_squares" => stat_fast(&build_table(FunctionSpec::SquareIndicator, n), Mode::DistinctParts, n)?
            .values()
            .to_vec(),
        "stat" => {
            let f = config
                .f_spec
                .as_deref()
                .ok_or_else(|| CliError::Usage("the stat sequence needs --f".into()))?;
            stat_fast(&build_table(parse_spec(f)?, n), config.mode, n)?
                .values()
                .to_vec()
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown sequence `{other}`; known: p, Q, distinct_squares, stat"
            )))
        }
    };
    let name = if name == "stat" {
        format!("stat[{},{}]", config.f_spec.as_deref().unwrap_or_default(), config.mode)
    } else {
        name.to_string()
    };
    Ok(Sequence {
        name,
        values: values.iter().map(BigInt::to_string).collect(),
    })
}

pub fn cmd_table(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let names = config.seq.as_deref().unwrap_or("p");
    let seqs = names
        .split(',')
        .map(|s| sequence(s.trim(), config))
        .collect::<Result<Vec<_>, _>>()?;
    let payload = match config.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                sequences: &'a [Sequence],
            }
            to_json(config, Body { sequences: &seqs })
        }
        Format::Csv => {
            let mut header = vec!["n"];
            header.extend(seqs.iter().map(|s| s.name.as_str()));
            let rows = (0..=config.n_fast).map(|m| {
                let mut row = vec![m.to_string()];
                row.extend(seqs.iter().map(|s| s.values[m].clone()));
                row
            });
            to_csv(&header, rows)
        }
        Format::Text => {
            let mut s = String::new();
            for seq in &seqs {
                if seqs.len() > 1 {
                    s.push_str(&seq.name);
                    s.push_str(": ");
                }
                s.push_str(&seq.values.join(","));
                s.push('\n');
            }
            s.into_bytes()
        }
    };
    Ok(RunOutcome {
        payload,
        status: EXIT_OK,
        timings: Vec::new(),
    })
}
