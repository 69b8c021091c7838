use std::fs;
use std::io::{Read as _, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use katanlab::bench::{self, BenchConfig};
use katanlab::cipher::Key80;
use katanlab::engine;
use katanlab::error::Error;
use katanlab::hex;
use katanlab::metrics::{self, ReportFormat};
use katanlab::pipeline::{self, Architecture};
use katanlab::variant::{make_variant, VariantName};
use katanlab::{kat, Result};

#[derive(Parser)]
#[command(name = "katanlab", version, about = "KATAN/KTANTAN cipher laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt hex blocks (one per line, processed independently)
    Encrypt(CryptArgs),
    /// Decrypt hex blocks (one per line, processed independently)
    Decrypt(CryptArgs),
    /// Run a known-answer test file through encrypt and decrypt
    Kat {
        /// KAT file path; defaults to the bundled vectors
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Measure software throughput of an execution engine
    Bench {
        #[arg(long, default_value = "katan32")]
        variant: String,
        /// reference | reference-rekey | bitsliced
        #[arg(long, default_value = "bitsliced")]
        engine: String,
        #[arg(long, default_value_t = 65536)]
        blocks: usize,
        #[arg(long, default_value_t = 1)]
        warmup: u32,
        #[arg(long, default_value_t = 3)]
        reps: u32,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = bench::DEFAULT_SEED)]
        seed: u64,
        /// Append the JSON result record to this file
        #[arg(long)]
        log: Option<PathBuf>,
        /// Also print ratios against the embedded baselines
        #[arg(long)]
        compare_baseline: bool,
    },
    /// Simulate the timing of a built-in hardware design point
    Simulate {
        #[arg(long)]
        variant: String,
        /// behavioural | pipelined
        #[arg(long)]
        arch: String,
        #[arg(long, default_value_t = 1)]
        blocks: u64,
        /// Write a per-cycle stage-occupancy CSV (pipelined only)
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Audit every derivable cell of the embedded result tables
    VerifyPaper,
    /// Emit a reconstruction/audit document
    Report {
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct CryptArgs {
    #[arg(long)]
    variant: String,
    /// 20 hex digits
    #[arg(long)]
    key: String,
    /// Hex block, a file of hex blocks, or `-` for stdin
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_input(spec: &str) -> Result<String> {
    if spec == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        return Ok(buf);
    }
    let path = std::path::Path::new(spec);
    if path.is_file() {
        return Ok(fs::read_to_string(path)?);
    }
    Ok(spec.to_string())
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn run_crypt(args: &CryptArgs, decrypt: bool) -> Result<i32> {
    let variant = make_variant(args.variant.parse()?);
    let key = Key80::from_hex(&args.key)?;
    let input = read_input(&args.input)?;
    let mut lines = Vec::new();
    for line in input.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let block = hex::parse_block(line, variant.block_bits)?;
        let result = if decrypt {
            katanlab::decrypt(&variant, &key, block)?
        } else {
            katanlab::encrypt(&variant, &key, block)?
        };
        lines.push(hex::format_block(result, variant.block_bits));
    }
    lines.push(String::new());
    write_output(&args.out, &lines.join("\n"))?;
    Ok(0)
}

fn run_kat(file: &Option<PathBuf>) -> Result<i32> {
    let data = match file {
        Some(path) => fs::read_to_string(path)?,
        None => kat::BUNDLED_KAT.to_string(),
    };
    let records = kat::parse(&data)?;
    let summary = kat::run(&records);
    for f in &summary.failures {
        println!(
            "FAIL line {} {} {}: expected {}, got {}",
            f.line, f.variant, f.direction, f.expected, f.got
        );
    }
    println!(
        "{}: {} records, {} failures",
        if summary.passed() { "pass" } else { "fail" },
        summary.records,
        summary.failures.len()
    );
    Ok(if summary.passed() { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn run_bench_cmd(
    variant: &str,
    engine_name: &str,
    blocks: usize,
    warmup: u32,
    reps: u32,
    workers: usize,
    seed: u64,
    log: &Option<PathBuf>,
    compare_baseline: bool,
) -> Result<i32> {
    let variant: VariantName = variant.parse()?;
    engine::engine(engine_name)?;
    let config = BenchConfig {
        variant,
        engine: engine_name.to_string(),
        n_blocks: blocks,
        warmup_iterations: warmup,
        measured_repetitions: reps,
        worker_count: workers,
        lane_width: katanlab::bitslice::LANES,
        seed,
    };
    let result = bench::run_bench(&config)?;
    println!(
        "{} {}: {} blocks, {} workers: {:.4} us/block (median), {:.4} us/block (min), {:.3} Mbit/s, checksum {:#018x}",
        result.config.variant,
        result.config.engine,
        result.config.n_blocks,
        result.config.worker_count,
        result.per_block_us_median,
        result.per_block_us_min,
        result.throughput_mbps,
        result.ciphertext_checksum
    );
    if compare_baseline {
        for row in bench::compare_to_baseline(&result) {
            println!(
                "  vs {}: {:.3} Mbit/s -> ratio {:.2} ({})",
                row.baseline, row.baseline_mbps, row.ratio, row.note
            );
        }
    }
    if let Some(path) = log {
        let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
        writeln!(f, "{}", bench::log_line(&result))?;
    }
    Ok(0)
}

fn run_simulate(variant: &str, arch: &str, blocks: u64, trace: &Option<PathBuf>) -> Result<i32> {
    let name: VariantName = variant.parse()?;
    let architecture = match arch.to_ascii_lowercase().as_str() {
        "behavioural" | "behavioral" => Architecture::Behavioural,
        "pipelined" => Architecture::Pipelined,
        other => {
            return Err(Error::InvalidDesign(format!(
                "unknown architecture `{other}`; accepted: behavioural, pipelined"
            )))
        }
    };
    let point = pipeline::builtin_design_point(name, architecture)?;
    let result = pipeline::simulate_timing(&point, blocks)?;
    println!(
        "{} {} x{} blocks: {} total cycles (latency {}), {:.4} us/block, {:.3} Mbit/s @ {:.3} MHz",
        name,
        architecture.as_str(),
        result.n_blocks,
        result.total_cycles,
        result.latency_cycles,
        result.exec_time_us,
        result.throughput_mbps,
        point.fmax_mhz.unwrap_or(0.0)
    );
    if let Some(path) = trace {
        if architecture != Architecture::Pipelined {
            return Err(Error::InvalidDesign(
                "stage traces exist only for the pipelined architecture".into(),
            ));
        }
        let v = make_variant(name);
        let mask = if v.block_bits >= 64 {
            u64::MAX
        } else {
            (1u64 << v.block_bits) - 1
        };
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(bench::DEFAULT_SEED);
        let key = Key80::new(rng.gen::<u128>());
        let pts: Vec<u64> = (0..blocks).map(|_| rng.gen::<u64>() & mask).collect();
        let (_, stage_trace) = pipeline::pipeline_encrypt_stream(&v, &key, &pts)?;
        fs::write(path, stage_trace.to_csv())?;
    }
    Ok(0)
}

fn run_verify_paper() -> Result<i32> {
    let findings = metrics::audit_tables();
    let mut counts = (0usize, 0usize, 0usize);
    for f in &findings {
        match f.verdict {
            metrics::Verdict::Match => counts.0 += 1,
            metrics::Verdict::Rounding => counts.1 += 1,
            metrics::Verdict::Inconsistent => counts.2 += 1,
        }
        if f.verdict != metrics::Verdict::Match {
            println!(
                "{} {} {} {}: printed {} vs recomputed {:.4} ({:+.2}%)",
                f.verdict.as_str(),
                f.table.as_str(),
                f.algorithm,
                f.column,
                f.printed,
                f.recomputed,
                f.rel_delta * 100.0
            );
        }
    }
    let clean = metrics::audit_is_clean(&findings);
    println!(
        "{}: {} findings ({} match, {} rounding, {} inconsistent; {} anomalies expected)",
        if clean { "pass" } else { "fail" },
        findings.len(),
        counts.0,
        counts.1,
        counts.2,
        metrics::expected_inconsistent().len()
    );
    Ok(if clean { 0 } else { 1 })
}

fn dispatch(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Encrypt(args) => run_crypt(args, false),
        Command::Decrypt(args) => run_crypt(args, true),
        Command::Kat { file } => run_kat(file),
        Command::Bench {
            variant,
            engine,
            blocks,
            warmup,
            reps,
            workers,
            seed,
            log,
            compare_baseline,
        } => run_bench_cmd(
            variant,
            engine,
            *blocks,
            *warmup,
            *reps,
            *workers,
            *seed,
            log,
            *compare_baseline,
        ),
        Command::Simulate {
            variant,
            arch,
            blocks,
            trace,
        } => run_simulate(variant, arch, *blocks, trace),
        Command::VerifyPaper => run_verify_paper(),
        Command::Report { format, out } => {
            let format: ReportFormat = format.parse()?;
            write_output(out, &metrics::emit_report(format))?;
            Ok(0)
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        // bad invocations and malformed inputs are usage errors
        Error::UnknownVariant(_)
        | Error::BadHex { .. }
        | Error::BadHexLength { .. }
        | Error::SizeMismatch { .. }
        | Error::UnknownFormat(_)
        | Error::UnknownEngine(_)
        | Error::InvalidBenchConfig(_)
        | Error::InvalidDesign(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
