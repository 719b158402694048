//! Command-line front end: build codes, encode/decode share files, run the
//! exhaustive verifier, and compute rate-region reports.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::codec::{self, CodeSpec, CodecError, Scheme};
use crate::descriptor::CodeDescriptor;
use crate::mds::derive_seed;
use crate::rat::{format_rational, parse_rational, to_f64};
use crate::region::{
    self, check_superposition_optimal, ds_sum_rate, eta_star_rational, g_eta, pseudo_message_sizes,
    star_lambda_samples, sup_sum_rate, PairwiseCondition, Verdict,
};
use crate::verify::{self, SystemView};
use crate::wire;

/// Exit codes: 0 success, 1 verification failure, 2 precondition or
/// condition failure, 3 I/O or format failure.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "smdc",
    about = "Weakly secure multilevel diversity coding laboratory",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for all randomness (generator draws, key sampling, direction
    /// sampling). Identical seeds give byte-identical outputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// State-count budget for exhaustive verification.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_BUDGET)]
    budget: u64,
    /// Output format for region tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Primary output path of the subcommand (defaults to stdout where
    /// that makes sense).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a code from a spec file and write its descriptor.
    Gen(GenArgs),
    /// Encode a message file into a share container.
    Encode(EncodeArgs),
    /// Decode a share container from an access set.
    Decode(DecodeArgs),
    /// Exhaustively verify reconstruction and security of a code.
    Verify(VerifyArgs),
    /// Rate-region computations for a spec.
    Region(RegionArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Code spec JSON: {"p": .., "m": [..], "n": [..]}.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum, default_value_t = SchemeArg::Superposition)]
    scheme: SchemeArg,
    /// Protected-prefix length for group-pairwise.
    #[arg(long)]
    r: Option<usize>,
    /// Lower level of a pairwise scheme.
    #[arg(long)]
    alpha: Option<usize>,
    /// Higher level of a pairwise scheme.
    #[arg(long)]
    beta: Option<usize>,
    /// Fail instead of scaling when the layout is fractional.
    #[arg(long)]
    unit_blocklength: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Superposition,
    PairwiseA,
    PairwiseB,
    GroupPairwise,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    /// Code descriptor produced by `gen`.
    #[arg(long)]
    code: PathBuf,
    /// Message file (JSON header line + raw symbols).
    #[arg(long)]
    message: PathBuf,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// Share container produced by `encode`.
    #[arg(long)]
    shares: PathBuf,
    /// Comma-separated 1-based encoders the decoder can access.
    #[arg(long, value_delimiter = ',')]
    access: Vec<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    code: PathBuf,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Analyze the differential profile with this protected-prefix length.
    #[arg(long)]
    ds_r: Option<usize>,
    /// Extra random sampling directions beyond the structured ones.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    /// Rate tuples to classify: JSON array of arrays of rationals.
    #[arg(long)]
    rates: Option<PathBuf>,
    /// Write the sampled boundary table (CSV) here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn io_err<E: std::fmt::Display>(e: E) -> Failure {
    Failure::new(EXIT_IO, e.to_string())
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Failure {
        let code = match &e {
            CodecError::LengthMismatch(_) | CodecError::InsufficientShares { .. } => EXIT_IO,
            _ => EXIT_PRECONDITION,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<verify::VerifyError> for Failure {
    fn from(e: verify::VerifyError) -> Failure {
        Failure::new(EXIT_PRECONDITION, e.to_string())
    }
}

impl From<wire::WireError> for Failure {
    fn from(e: wire::WireError) -> Failure {
        Failure::new(EXIT_IO, e.to_string())
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Gen(args) => cmd_gen(cli, args),
        Command::Encode(args) => cmd_encode(cli, args),
        Command::Decode(args) => cmd_decode(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Region(args) => cmd_region(cli, args),
    }
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(format!("{}: {}", path.display(), e)))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| io_err(format!("{}: {}", path.display(), e)))
}

fn write_output(cli: &Cli, bytes: &[u8], what: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| io_err(format!("{}: {}", path.display(), e)))?;
            eprintln!("{} written to {}", what, path.display());
            Ok(())
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(io_err)?;
            Ok(())
        }
    }
}

fn load_spec(path: &Path) -> Result<CodeSpec, Failure> {
    let text = read_to_string(path)?;
    let spec: CodeSpec =
        serde_json::from_str(&text).map_err(|e| io_err(format!("{}: {}", path.display(), e)))?;
    spec.validate()?;
    Ok(spec)
}

fn load_code(path: &Path) -> Result<codec::SmdcCode, Failure> {
    let text = read_to_string(path)?;
    let desc = CodeDescriptor::from_json(&text)
        .map_err(|e| io_err(format!("{}: {}", path.display(), e)))?;
    desc.into_code()
        .map_err(|e| io_err(format!("{}: {}", path.display(), e)))
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<i32, Failure> {
    let spec = load_spec(&args.spec)?;
    let need = |opt: Option<usize>, name: &str| {
        opt.ok_or_else(|| Failure::new(EXIT_PRECONDITION, format!("--{name} is required")))
    };
    let scheme = match args.scheme {
        SchemeArg::Superposition => Scheme::Superposition,
        SchemeArg::PairwiseA => Scheme::PairwiseA {
            alpha: need(args.alpha, "alpha")?,
            beta: need(args.beta, "beta")?,
        },
        SchemeArg::PairwiseB => Scheme::PairwiseB {
            alpha: need(args.alpha, "alpha")?,
            beta: need(args.beta, "beta")?,
        },
        SchemeArg::GroupPairwise => Scheme::GroupPairwise {
            r: need(args.r, "r")?,
        },
    };
    let blocklength = if args.unit_blocklength {
        codec::Blocklength::Unit
    } else {
        codec::Blocklength::Auto
    };
    let code = match scheme {
        Scheme::Superposition => codec::build_superposition_with(
            &spec,
            cli.seed,
            blocklength,
            &codec::GeneratorSource::Seeded,
        )?,
        Scheme::PairwiseA { alpha, beta } => codec::build_pairwise_a_with(
            &spec,
            alpha,
            beta,
            cli.seed,
            blocklength,
            &codec::GeneratorSource::Seeded,
        )?,
        Scheme::PairwiseB { alpha, beta } => codec::build_pairwise_b_with(
            &spec,
            alpha,
            beta,
            cli.seed,
            blocklength,
            &codec::GeneratorSource::Seeded,
        )?,
        Scheme::GroupPairwise { r } => codec::build_group_pairwise_with(
            &spec,
            r,
            cli.seed,
            blocklength,
            &codec::GeneratorSource::Seeded,
        )?,
    };
    let rate_strings: Vec<String> = code
        .rate_tuple()
        .values
        .iter()
        .map(format_rational)
        .collect();
    eprintln!(
        "scheme {} blocklength {} rates [{}] symbols {:?} key symbols {}",
        code.scheme.name(),
        code.blocklength,
        rate_strings.join(", "),
        code.rates,
        code.key_len
    );
    let text = CodeDescriptor::of(&code).to_json();
    write_output(cli, text.as_bytes(), "code descriptor")?;
    Ok(EXIT_OK)
}

fn sample_symbol(rng: &mut rand_chacha::ChaCha12Rng, p: u64) -> u64 {
    // rejection sampling keeps the draw exactly uniform
    let bound = u64::MAX - u64::MAX % p;
    loop {
        let v = rng.next_u64();
        if v < bound {
            return v % p;
        }
    }
}

fn cmd_encode(cli: &Cli, args: &EncodeArgs) -> Result<i32, Failure> {
    let code = load_code(&args.code)?;
    let bytes = read_bytes(&args.message)?;
    let (header, messages) = wire::decode_messages(&bytes)?;
    if header.p != code.spec.p {
        return Err(io_err(format!(
            "message file modulus {} does not match code modulus {}",
            header.p, code.spec.p
        )));
    }
    if header.m != code.scaled_m {
        return Err(io_err(format!(
            "message sizes {:?} do not match the code's scaled sizes {:?}",
            header.m, code.scaled_m
        )));
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(derive_seed(cli.seed, 0x6b6579));
    let key: Vec<u64> = (0..code.key_len)
        .map(|_| sample_symbol(&mut rng, code.spec.p))
        .collect();
    let shares = code.encode(&messages, &key)?;
    let container = wire::encode_shares(&code, &shares)?;
    write_output(cli, &container, "share container")?;
    Ok(EXIT_OK)
}

fn cmd_decode(cli: &Cli, args: &DecodeArgs) -> Result<i32, Failure> {
    let code = load_code(&args.code)?;
    let bytes = read_bytes(&args.shares)?;
    let (_, all_shares) = wire::decode_shares(&code, &bytes)?;
    if args.access.is_empty() {
        return Err(Failure::new(EXIT_PRECONDITION, "--access must be nonempty"));
    }
    let picked: Vec<Vec<u64>> = args
        .access
        .iter()
        .map(|&e| {
            all_shares
                .shares
                .get(e.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Failure::new(EXIT_PRECONDITION, format!("no encoder {e}")))
        })
        .collect::<Result<_, _>>()?;
    let messages = code.decode(&args.access, &picked)?;
    let out = wire::encode_messages(code.spec.p, &messages)?;
    write_output(cli, &out, "recovered messages")?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyReportJson {
    states: u64,
    reconstruction_pass: bool,
    security_pass: bool,
    pass: bool,
    reconstruction: verify::ReconstructionReport,
    security: verify::SecurityReport,
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<i32, Failure> {
    let code = load_code(&args.code)?;
    let view = SystemView::of(&code);
    let reconstruction = verify::check_reconstruction(&view, cli.budget)?;
    let security = verify::check_security(&view, &code.spec.n, cli.budget)?;
    let report = VerifyReportJson {
        states: reconstruction.states,
        reconstruction_pass: reconstruction.passed(),
        security_pass: security.passed(),
        pass: reconstruction.passed() && security.passed(),
        reconstruction,
        security,
    };
    let text = serde_json::to_string_pretty(&report).map_err(io_err)?;
    write_output(cli, text.as_bytes(), "verification report")?;
    if report.pass {
        eprintln!("verification passed over {} states", report.states);
        Ok(EXIT_OK)
    } else {
        for r in &report.reconstruction.results {
            if !r.pass {
                eprintln!("reconstruction FAILED for access set {:?}", r.access);
            }
        }
        for r in &report.security.results {
            if let Some(leak) = &r.leak {
                eprintln!(
                    "security FAILED: level {} vs encoders {:?}: message {:?} with shares {:?} seen {} times; factorization needs {} = {}",
                    r.level,
                    r.eavesdrop,
                    leak.message_value,
                    leak.share_value,
                    leak.joint_count,
                    leak.joint_times_total,
                    leak.marginal_product,
                );
            }
        }
        eprintln!("verification FAILED");
        Ok(EXIT_VERIFY_FAILED)
    }
}

#[derive(Serialize)]
struct OptimalityJson {
    verdict: &'static str,
    pair: Option<(usize, usize)>,
    condition: Option<&'static str>,
    threshold: Option<usize>,
}

#[derive(Serialize)]
struct DsJson {
    r: usize,
    eta_star: usize,
    aux_message: String,
    ds_sum_rate: String,
    pseudo_sizes: Vec<String>,
}

#[derive(Serialize)]
struct MembershipJson {
    rates: Vec<String>,
    sup_region: bool,
    gp_region: Option<bool>,
    star_directions: Option<bool>,
}

#[derive(Serialize)]
struct RegionReportJson {
    p: u64,
    m: Vec<u64>,
    n: Vec<usize>,
    normalized_m: Vec<String>,
    sup_sum_rate: String,
    optimality: OptimalityJson,
    ds: Option<DsJson>,
    memberships: Vec<MembershipJson>,
}

fn cmd_region(cli: &Cli, args: &RegionArgs) -> Result<i32, Failure> {
    let spec = load_spec(&args.spec)?;
    let m_hat = spec.normalized_sizes();
    let witness = check_superposition_optimal(&m_hat, &spec.n);
    let optimality = OptimalityJson {
        verdict: match witness.verdict {
            Verdict::Optimal => "optimal",
            Verdict::Suboptimal => "suboptimal",
        },
        pair: witness.pair,
        condition: witness.condition.map(|c| match c {
            PairwiseCondition::A => "coded-key-replacement",
            PairwiseCondition::B => "message-key-replacement",
        }),
        threshold: witness.threshold,
    };
    let l = spec.levels();
    let ds = match args.ds_r {
        Some(r) => {
            if !spec.is_ds_profile(r) {
                return Err(Failure::new(
                    EXIT_PRECONDITION,
                    format!("profile is not differential with r = {r}"),
                ));
            }
            let (eta, aux) = eta_star_rational(r, &m_hat);
            Some(DsJson {
                r,
                eta_star: eta,
                aux_message: format_rational(&aux),
                ds_sum_rate: format_rational(&ds_sum_rate(l, r, &m_hat)),
                pseudo_sizes: pseudo_message_sizes(r, &m_hat)
                    .iter()
                    .map(format_rational)
                    .collect(),
            })
        }
        None => None,
    };

    let lambdas = star_lambda_samples(l, args.samples, cli.seed);
    let mut memberships = Vec::new();
    if let Some(path) = &args.rates {
        let text = read_to_string(path)?;
        let raw: Vec<Vec<String>> = serde_json::from_str(&text)
            .map_err(|e| io_err(format!("{}: {}", path.display(), e)))?;
        for tuple in raw {
            if tuple.len() != l {
                return Err(Failure::new(
                    EXIT_PRECONDITION,
                    format!("rate tuple needs {l} entries"),
                ));
            }
            let rates: Vec<BigRational> = tuple
                .iter()
                .map(|s| parse_rational(s).map_err(|e| Failure::new(EXIT_IO, e)))
                .collect::<Result<_, _>>()?;
            let sup = region::sup_region_contains(&rates, &m_hat, &spec.n);
            let (gp, star) = match args.ds_r {
                Some(r) => (
                    Some(region::gp_region_contains(&rates, r, &m_hat)),
                    Some(region::star_region_contains(&rates, r, &m_hat, &lambdas)),
                ),
                None => (None, None),
            };
            memberships.push(MembershipJson {
                rates: tuple,
                sup_region: sup,
                gp_region: gp,
                star_directions: star,
            });
        }
    }

    if let (Some(path), Some(r)) = (&args.csv, args.ds_r) {
        let mut csv = String::new();
        for i in 1..=l {
            csv.push_str(&format!("lambda_{i},"));
        }
        csv.push_str("g_eta_star\n");
        let (eta, _) = eta_star_rational(r, &m_hat);
        for lambda in &lambdas {
            for v in lambda {
                csv.push_str(&format!("{},", to_f64(v)));
            }
            csv.push_str(&format!("{}\n", to_f64(&g_eta(eta, lambda, &m_hat, r))));
        }
        fs::write(path, csv).map_err(|e| io_err(format!("{}: {}", path.display(), e)))?;
        eprintln!("boundary table written to {}", path.display());
    }

    let report = RegionReportJson {
        p: spec.p,
        m: spec.m.clone(),
        n: spec.n.clone(),
        normalized_m: m_hat.iter().map(format_rational).collect(),
        sup_sum_rate: format_rational(&sup_sum_rate(&m_hat, &spec.n)),
        optimality,
        ds,
        memberships,
    };
    let bytes = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report)
            .map_err(io_err)?
            .into_bytes(),
        Format::Csv => {
            // compact single-row summary for spreadsheets
            let mut s = String::from("sup_sum_rate,verdict,eta_star,ds_sum_rate\n");
            s.push_str(&format!(
                "{},{},{},{}\n",
                report.sup_sum_rate,
                report.optimality.verdict,
                report
                    .ds
                    .as_ref()
                    .map_or(String::new(), |d| d.eta_star.to_string()),
                report
                    .ds
                    .as_ref()
                    .map_or(String::new(), |d| d.ds_sum_rate.clone()),
            ));
            s.into_bytes()
        }
    };
    write_output(cli, &bytes, "region report")?;
    Ok(EXIT_OK)
}
