//! Command-line front end. `run` takes its streams as arguments so tests can
//! drive it without a subprocess.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::error::{FactorizeError, FormatError, RleError};
use crate::factor::Factor;
use crate::format::{decode, FactorWriter, OutputFormat};
use crate::oracle::check_against_oracle;
use crate::packed::{PackedConfig, PackedFactorizer};
use crate::rle::RleFactorizer;

pub const EXIT_IO: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

const CHUNK: usize = 1 << 16;

#[derive(Parser, Debug)]
#[command(name = "lzdawg", version, about = "Online s-factorization of byte streams")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factorize a file (or stdin) and stream the factors.
    Factorize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
        /// Check the result against the naive factorizer.
        #[arg(long)]
        verify: bool,
    },
    /// Rebuild the original bytes from a factor stream of any format.
    Decode {
        input: Option<PathBuf>,
    },
    /// Report sizes and timing for a factorization.
    Stats {
        #[command(flatten)]
        common: Common,
        /// Print one JSON object.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Input file; stdin when absent or `-`.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Packed)]
    mode: Mode,
    /// Characters per meta-character, or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_block_chars)]
    block_chars: BlockChars,
    /// Width of the dense character codes; limits the alphabet to 2^b values.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=8))]
    alphabet_bits: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Packed,
    Rle,
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Jsonl,
    Binary,
}

impl From<Output> for OutputFormat {
    fn from(o: Output) -> Self {
        match o {
            Output::Text => OutputFormat::Text,
            Output::Jsonl => OutputFormat::Jsonl,
            Output::Binary => OutputFormat::Binary,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct BlockChars(Option<u32>);

fn parse_block_chars(s: &str) -> Result<BlockChars, String> {
    if s == "auto" {
        return Ok(BlockChars(None));
    }
    match s.parse::<u32>() {
        Ok(k) if (1..=64).contains(&k) => Ok(BlockChars(Some(k))),
        _ => Err(format!("expected `auto` or an integer in 1..=64, got {s:?}")),
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Factorize(FactorizeError),
    #[error(transparent)]
    Rle(#[from] RleError),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl From<FactorizeError> for CliError {
    fn from(e: FactorizeError) -> Self {
        match e {
            FactorizeError::MemoryBudget { .. } | FactorizeError::Alphabet(_) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Factorize(e),
        }
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verify(_) => EXIT_VERIFY,
            _ => EXIT_IO,
        }
    }
}

enum Backend {
    Packed(Box<PackedFactorizer>),
    Rle(Box<RleFactorizer>),
    Naive(Vec<u8>),
}

impl Backend {
    fn new(c: &Common) -> Result<Self, CliError> {
        Ok(match c.mode {
            Mode::Packed => {
                let config = PackedConfig {
                    sigma: 1 << c.alphabet_bits.unwrap_or(8),
                    block_chars: c.block_chars.0,
                    ..PackedConfig::default()
                };
                Backend::Packed(Box::new(PackedFactorizer::new(config)?))
            }
            Mode::Rle => Backend::Rle(Box::new(RleFactorizer::new())),
            Mode::Naive => Backend::Naive(Vec::new()),
        })
    }

    fn push(&mut self, bytes: &[u8]) -> Result<Vec<Factor>, CliError> {
        Ok(match self {
            Backend::Packed(p) => p.push(bytes)?,
            Backend::Rle(r) => r.push_chars(bytes)?,
            Backend::Naive(buf) => {
                buf.extend_from_slice(bytes);
                Vec::new()
            }
        })
    }

    fn finish(&mut self) -> Result<Vec<Factor>, CliError> {
        Ok(match self {
            Backend::Packed(p) => p.finish()?,
            Backend::Rle(r) => r.finish()?,
            Backend::Naive(buf) => crate::oracle::naive_factorize(buf),
        })
    }
}

fn open_input<'a>(path: &Option<PathBuf>, stdin: &'a mut dyn Read) -> io::Result<Box<dyn Read + 'a>> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(File::open(p)?)),
        _ => Ok(Box::new(stdin)),
    }
}

/// Drives a backend over the input, handing each committed batch to `sink`.
/// Returns the input when `keep` is set.
fn drive(
    backend: &mut Backend,
    input: &mut dyn Read,
    keep: bool,
    mut sink: impl FnMut(&[u8], &[Factor]) -> Result<(), CliError>,
) -> Result<Vec<u8>, CliError> {
    let mut kept = Vec::new();
    let mut buf = vec![0u8; CHUNK];
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        };
        if keep {
            kept.extend_from_slice(&buf[..n]);
        }
        let fs = backend.push(&buf[..n])?;
        sink(&buf[..n], &fs)?;
    }
    let fs = backend.finish()?;
    sink(&[], &fs)?;
    Ok(kept)
}

fn cmd_factorize(
    common: &Common,
    output: Output,
    verify: bool,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut backend = Backend::new(common)?;
    let mut input = open_input(&common.input, stdin)?;
    let mut writer = FactorWriter::new(BufWriter::new(stdout), output.into());
    let mut all = Vec::new();
    let text = drive(&mut backend, &mut input, verify, |_, fs| {
        writer.write_all(fs)?;
        if verify {
            all.extend_from_slice(fs);
        }
        Ok(())
    })?;
    writer.finish()?;
    if verify {
        check_against_oracle(&text, &all).map_err(CliError::Verify)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsReport {
    mode: &'static str,
    n: u64,
    z: u64,
    m: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    block_chars: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dawg_states: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dawg_edges: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rebuilds: Option<u32>,
    wall_ms: f64,
}

fn cmd_stats(common: &Common, json: bool, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut backend = Backend::new(common)?;
    let mut input = open_input(&common.input, stdin)?;
    let (mut n, mut z, mut m) = (0u64, 0u64, 0u64);
    let mut last: Option<u8> = None;
    drive(&mut backend, &mut input, false, |bytes, fs| {
        n += bytes.len() as u64;
        z += fs.len() as u64;
        for &b in bytes {
            if last != Some(b) {
                m += 1;
                last = Some(b);
            }
        }
        Ok(())
    })?;
    let mut rep = StatsReport {
        mode: "naive",
        n,
        z,
        m,
        block_chars: None,
        dawg_states: None,
        dawg_edges: None,
        points: None,
        rebuilds: None,
        wall_ms: 0.0,
    };
    match &backend {
        Backend::Packed(p) => {
            let s = p.stats();
            rep.mode = "packed";
            rep.block_chars = Some(s.r);
            rep.dawg_states = Some(s.dawg_states);
            rep.dawg_edges = Some(s.dawg_edges);
            rep.points = Some(s.points);
            rep.rebuilds = Some(s.rebuilds);
        }
        Backend::Rle(r) => {
            let s = r.stats();
            rep.mode = "rle";
            rep.dawg_states = Some(s.dawg_states);
            rep.dawg_edges = Some(s.dawg_edges);
            rep.points = Some(s.dom_points);
        }
        Backend::Naive(_) => {}
    }
    rep.wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    if json {
        serde_json::to_writer(&mut *stdout, &rep).map_err(io::Error::from)?;
        writeln!(stdout)?;
    } else {
        writeln!(stdout, "mode: {}", rep.mode)?;
        writeln!(stdout, "N: {}", rep.n)?;
        writeln!(stdout, "z: {}", rep.z)?;
        writeln!(stdout, "m: {}", rep.m)?;
        let opt = [
            ("block_chars", rep.block_chars.map(u64::from)),
            ("dawg_states", rep.dawg_states),
            ("dawg_edges", rep.dawg_edges),
            ("points", rep.points),
            ("rebuilds", rep.rebuilds.map(u64::from)),
        ];
        for (k, v) in opt {
            if let Some(v) = v {
                writeln!(stdout, "{k}: {v}")?;
            }
        }
        writeln!(stdout, "wall_ms: {:.3}", rep.wall_ms)?;
    }
    Ok(())
}

fn cmd_decode(input: &Option<PathBuf>, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let input = open_input(input, stdin)?;
    let out = decode(input)?;
    stdout.write_all(&out)?;
    stdout.flush()?;
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let res = match &cli.cmd {
        Command::Factorize {
            common,
            output,
            verify,
        } => cmd_factorize(common, *output, *verify, stdin, stdout),
        Command::Decode { input } => cmd_decode(input, stdin, stdout),
        Command::Stats { common, json } => cmd_stats(common, *json, stdin, stdout),
    };
    match res {
        Ok(()) => 0,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(stderr, "lzdawg: {e}");
            e.code()
        }
    }
}
