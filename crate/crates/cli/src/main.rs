//! `golay`: decode frames, run simulations, check and print the code tables.

use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use chained_golay::channel::{self, Execution, SimConfig, StopRule};
use chained_golay::golay::golay;
use chained_golay::tables::{self, VerifyInputs};
use chained_golay::{Algorithm, LlrVector};

#[derive(Parser)]
#[command(name = "golay", version, about = "Chained polar decoding of the extended Golay code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoName {
    Block,
    Seq,
    List,
    Sc,
    Ml,
}

#[derive(clap::Args)]
struct DecoderArgs {
    #[arg(long, value_enum, default_value = "block")]
    algo: AlgoName,
    /// List size for `seq` and `list`.
    #[arg(long, default_value_t = 16)]
    list_size: usize,
    /// Hard-decision shortcut of the block decoder.
    #[arg(long)]
    shortcut: bool,
}

impl DecoderArgs {
    fn algorithm(&self) -> Result<Algorithm, Failure> {
        let name = match self.algo {
            AlgoName::Block => "block",
            AlgoName::Seq => "seq",
            AlgoName::List => "list",
            AlgoName::Sc => "sc",
            AlgoName::Ml => "ml",
        };
        Algorithm::from_name(name, self.list_size, self.shortcut).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decode frames of 24 whitespace-separated LLRs, one per line.
    Decode {
        #[command(flatten)]
        decoder: DecoderArgs,
        /// LLR file; `-` or absent reads standard input.
        #[arg(long)]
        llr: Option<PathBuf>,
    },
    /// Monte-Carlo frame error rate and complexity over BPSK/AWGN, as CSV.
    Simulate {
        #[command(flatten)]
        decoder: DecoderArgs,
        /// Eb/N0 range in dB, `a:step:b` (inclusive) or a single value.
        #[arg(long, default_value = "1:1:4")]
        snr_db: String,
        /// Minimum frames per point.
        #[arg(long, default_value_t = 100_000)]
        frames: u64,
        /// Minimum frame errors per point.
        #[arg(long, default_value_t = 200)]
        errors: u64,
        /// Hard cap on frames per point.
        #[arg(long)]
        max_frames: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Decode frames on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Run the structural self-checks.
    Verify {
        /// Replacement generator-matrix fixture.
        #[arg(long)]
        g: Option<PathBuf>,
        /// Replacement constraint-matrix fixture.
        #[arg(long)]
        v: Option<PathBuf>,
        /// Replacement schedule fixture.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Print G, H, V, the frozen set, the constraints and the schedule.
    Tables,
}

enum Failure {
    Usage(String),
    Verify(Vec<String>),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verify(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

fn io_err(what: &str) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{what}: {e}"))
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn decode(decoder: &DecoderArgs, llr: Option<PathBuf>) -> Result<(), Failure> {
    let algo = decoder.algorithm()?;
    let input: Box<dyn BufRead> = match llr {
        Some(p) if p.as_os_str() != "-" => {
            let f = fs::File::open(&p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            Box::new(io::BufReader::new(f))
        }
        _ => Box::new(io::stdin().lock()),
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let spec = golay();
    for (n, line) in input.lines().enumerate() {
        let line = line.map_err(io_err("reading LLRs"))?;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let values = line
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Usage(format!("line {}: {e}", n + 1)))?;
        if values.len() != spec.n {
            return Err(Failure::Usage(format!("line {}: {} values, expected {}", n + 1, values.len(), spec.n)));
        }
        let y = LlrVector::new(values).map_err(|e| Failure::Usage(format!("line {}: {e}", n + 1)))?;
        let r = algo.decode(spec, &y);
        writeln!(out, "{} {} {:.6} {} {}", r.codeword, r.info, r.score, r.ops.summations, r.ops.comparisons)
            .map_err(io_err("writing output"))?;
    }
    out.flush().map_err(io_err("writing output"))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    decoder: &DecoderArgs,
    snr_db: &str,
    frames: u64,
    errors: u64,
    max_frames: Option<u64>,
    seed: u64,
    out: Option<PathBuf>,
    serial: bool,
) -> Result<(), Failure> {
    let algorithm = decoder.algorithm()?;
    let snrs = channel::parse_snr_range(snr_db).map_err(|e| Failure::Usage(e.to_string()))?;
    if frames == 0 || max_frames == Some(0) {
        return Err(Failure::Usage("frame counts must be positive".into()));
    }
    // Open the output first so an unwritable path fails before any work.
    let sink: Box<dyn Write> = match &out {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout()),
    };
    let cfg = SimConfig {
        algorithm,
        stop: StopRule { min_frames: frames, min_errors: errors, max_frames },
        seed,
        execution: if serial { Execution::Serial } else { Execution::Parallel },
    };
    let records = channel::run_fer(golay(), &snrs, &cfg);
    channel::write_csv(BufWriter::new(sink), &records).map_err(io_err("writing CSV"))
}

fn verify(g: Option<PathBuf>, v: Option<PathBuf>, schedule: Option<PathBuf>) -> Result<(), Failure> {
    let mut inputs = VerifyInputs::default();
    if let Some(p) = g {
        inputs.g = read_text(&p)?;
    }
    if let Some(p) = v {
        inputs.v = read_text(&p)?;
    }
    if let Some(p) = schedule {
        inputs.schedule = read_text(&p)?;
    }
    let mut failed = Vec::new();
    for r in tables::run_verify(&inputs) {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        if !r.passed {
            failed.push(r.name.to_string());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(failed))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decode { decoder, llr } => decode(&decoder, llr),
        Command::Simulate { decoder, snr_db, frames, errors, max_frames, seed, out, serial } => {
            simulate(&decoder, &snr_db, frames, errors, max_frames, seed, out, serial)
        }
        Command::Verify { g, v, schedule } => verify(g, v, schedule),
        Command::Tables => {
            print!("{}", tables::render_tables(golay()));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("I/O error: {m}"),
                Failure::Verify(names) => eprintln!("verification failed: {}", names.join(", ")),
            }
            ExitCode::from(f.code())
        }
    }
}
