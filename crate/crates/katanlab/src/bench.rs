//! Software throughput measurement of the execution engines, with the
//! embedded hardware/software rows as informational baselines.

use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cipher::Key80;
use crate::engine::{self, Engine};
use crate::error::{Error, Result};
use crate::paperdata::{tables, TableId};
use crate::variant::{make_variant, VariantName};

pub const DEFAULT_SEED: u64 = 0x4b41_5441_4e32_3030;

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct BenchConfig {
    pub variant: VariantName,
    pub engine: String,
    pub n_blocks: usize,
    pub warmup_iterations: u32,
    pub measured_repetitions: u32,
    pub worker_count: usize,
    pub lane_width: usize,
    pub seed: u64,
}

impl BenchConfig {
    pub fn new(variant: VariantName, engine: &str) -> Self {
        BenchConfig {
            variant,
            engine: engine.to_string(),
            n_blocks: 4096,
            warmup_iterations: 1,
            measured_repetitions: 3,
            worker_count: 1,
            lane_width: crate::bitslice::LANES,
            seed: DEFAULT_SEED,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_blocks < 1 {
            return Err(Error::InvalidBenchConfig("n_blocks must be >= 1".into()));
        }
        if self.measured_repetitions < 3 {
            return Err(Error::InvalidBenchConfig(
                "measured_repetitions must be >= 3 (median of runs)".into(),
            ));
        }
        if self.worker_count < 1 {
            return Err(Error::InvalidBenchConfig("worker_count must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct BenchResult {
    pub config: BenchConfig,
    pub per_block_us_median: f64,
    pub per_block_us_min: f64,
    /// block_bits * n_blocks / median total time; computed, never entered.
    pub throughput_mbps: f64,
    pub ciphertext_checksum: u64,
    pub host: String,
    pub timestamp_unix_s: u64,
}

fn fnv1a(acc: u64, word: u64) -> u64 {
    let mut h = acc;
    for byte in word.to_le_bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn checksum(words: &[u64]) -> u64 {
    words.iter().fold(0xcbf2_9ce4_8422_2325, |acc, &w| fnv1a(acc, w))
}

/// Deterministic plaintext stream and key for a seed.
pub fn bench_inputs(config: &BenchConfig) -> (Key80, Vec<u64>) {
    let v = make_variant(config.variant);
    let mask = if v.block_bits >= 64 {
        u64::MAX
    } else {
        (1u64 << v.block_bits) - 1
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let key = Key80::new(rng.gen::<u128>());
    let blocks = (0..config.n_blocks).map(|_| rng.next_u64() & mask).collect();
    (key, blocks)
}

fn encrypt_parallel(
    eng: &dyn Engine,
    config: &BenchConfig,
    key: &Key80,
    blocks: &[u64],
    out: &mut [u64],
) -> Result<()> {
    let v = make_variant(config.variant);
    if config.worker_count == 1 {
        return eng.encrypt_blocks(&v, key, blocks, out);
    }
    // workers own disjoint block ranges; results land in disjoint
    // slices of the output buffer
    let chunk = blocks.len().div_ceil(config.worker_count);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (inp, outp) in blocks.chunks(chunk).zip(out.chunks_mut(chunk)) {
            handles.push(scope.spawn(move || eng.encrypt_blocks(&v, key, inp, outp)));
        }
        for h in handles {
            h.join().expect("bench worker panicked")?;
        }
        Ok(())
    })
}

fn host_descriptor() -> String {
    format!(
        "{}-{} ({} cpus)",
        std::env::consts::ARCH,
        std::env::consts::OS,
        std::thread::available_parallelism().map_or(0, |n| n.get())
    )
}

/// Encrypts the configured block stream, timing on the coordinating
/// thread only, and verifies every run against a single-threaded
/// reference checksum.
pub fn run_bench(config: &BenchConfig) -> Result<BenchResult> {
    config.validate()?;
    let eng = engine::engine(&config.engine)?;
    let v = make_variant(config.variant);
    let (key, blocks) = bench_inputs(config);

    // reference pass: correctness side-condition for all timed runs
    let mut reference_out = vec![0u64; blocks.len()];
    engine::engine("reference")?.encrypt_blocks(&v, &key, &blocks, &mut reference_out)?;
    let reference_sum = checksum(&reference_out);

    let mut out = vec![0u64; blocks.len()];
    for _ in 0..config.warmup_iterations {
        encrypt_parallel(eng, config, &key, &blocks, &mut out)?;
    }

    let mut times: Vec<Duration> = Vec::with_capacity(config.measured_repetitions as usize);
    for run in 0..config.measured_repetitions {
        out.fill(0);
        let start = Instant::now();
        encrypt_parallel(eng, config, &key, &blocks, &mut out)?;
        times.push(start.elapsed());
        let got = checksum(&out);
        if got != reference_sum {
            return Err(Error::ChecksumMismatch {
                run,
                got,
                reference: reference_sum,
            });
        }
    }
    times.sort();
    let median = times[times.len() / 2];
    let min = times[0];
    let n = config.n_blocks as f64;
    let median_total_us = median.as_secs_f64() * 1e6;
    let per_block_us_median = median_total_us / n;
    let throughput_mbps = v.block_bits as f64 * n / median_total_us;

    Ok(BenchResult {
        config: config.clone(),
        per_block_us_median,
        per_block_us_min: min.as_secs_f64() * 1e6 / n,
        throughput_mbps,
        ciphertext_checksum: reference_sum,
        host: host_descriptor(),
        timestamp_unix_s: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BaselineComparison {
    pub baseline: String,
    pub baseline_mbps: f64,
    pub measured_mbps: f64,
    pub ratio: f64,
    pub note: &'static str,
}

/// Ratios of a measured result against the embedded software and
/// hardware rows. Cross-machine and informational only.
pub fn compare_to_baseline(result: &BenchResult) -> Vec<BaselineComparison> {
    let alg = result.config.variant.table_name();
    let t = tables();
    let mut rows = Vec::new();
    let mut push = |label: String, mbps: Option<f64>| {
        if let Some(b) = mbps {
            rows.push(BaselineComparison {
                baseline: label,
                baseline_mbps: b,
                measured_mbps: result.throughput_mbps,
                ratio: result.throughput_mbps / b,
                note: "informational, cross-machine",
            });
        }
    };
    push(
        format!("{alg} published C software baseline"),
        t.cell(TableId::T4, alg, "throughput_mbps"),
    );
    push(
        format!("{alg} behavioural core (published hardware)"),
        t.cell(TableId::T1, alg, "throughput_mbps"),
    );
    push(
        format!("{alg} pipelined core (published hardware)"),
        t.cell(TableId::T2, alg, "throughput_mbps"),
    );
    rows
}

/// One self-contained JSON record per run, for append-only logs.
pub fn log_line(result: &BenchResult) -> String {
    serde_json::to_string(result).expect("bench result serializes")
}
