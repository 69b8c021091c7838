//! Functional and cycle-accounting models of the hardware designs: the
//! behavioural single-core design and the three-stage pipeline
//! (Initialization, Key Scheduler and Round, ciphertext Generation).

use std::fmt::Write as _;

use crate::cipher::{self, Key80, RegisterState, RoundKeys};
use crate::error::{Error, Result};
use crate::paperdata::{tables, TableId};
use crate::variant::{make_variant, CipherVariant, VariantName, ROUNDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Architecture {
    OriginalSerial,
    Behavioural,
    Pipelined,
}

impl Architecture {
    pub fn as_str(self) -> &'static str {
        match self {
            Architecture::OriginalSerial => "original",
            Architecture::Behavioural => "behavioural",
            Architecture::Pipelined => "pipelined",
        }
    }
}

/// Cycle structure of a design point.
#[derive(Debug, Clone, PartialEq)]
pub enum CycleModel {
    /// Whole-block cycle cost (behavioural/original cores).
    WholeBlock(u64),
    /// Per-stage latencies; one modeled cycle is one stage transfer.
    Staged(Vec<u64>),
    /// Baseline rows carried as reported throughput only.
    ReportedOnly,
}

/// A hardware design configuration and its reporting data.
#[derive(Debug, Clone)]
pub struct DesignPoint {
    pub variant: VariantName,
    pub architecture: Architecture,
    pub label: String,
    pub fmax_mhz: Option<f64>,
    pub cycles: CycleModel,
    /// Reported throughput for baselines with no cycle structure.
    pub reported_mbps: Option<f64>,
    pub aluts: Option<u64>,
    pub logic_elements: Option<u64>,
}

impl DesignPoint {
    fn validate(&self) -> Result<()> {
        match &self.cycles {
            CycleModel::WholeBlock(c) if *c >= 1 => {}
            CycleModel::WholeBlock(_) => {
                return Err(Error::InvalidDesign("cycles_per_block must be >= 1".into()))
            }
            CycleModel::Staged(ls) if !ls.is_empty() && ls.iter().all(|&l| l >= 1) => {}
            CycleModel::Staged(_) => {
                return Err(Error::InvalidDesign(
                    "pipelined points need >= 1 stage, each latency >= 1".into(),
                ))
            }
            CycleModel::ReportedOnly => {
                return Err(Error::InvalidDesign(format!(
                    "{} `{}` carries reported throughput only, no cycle structure",
                    self.variant, self.label
                )))
            }
        }
        match self.fmax_mhz {
            Some(f) if f > 0.0 => Ok(()),
            _ => Err(Error::InvalidDesign("fmax_mhz must be positive".into())),
        }
    }
}

/// Simulated timing outcome.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SimulationResult {
    pub n_blocks: u64,
    pub total_cycles: u64,
    /// First block in to first block out.
    pub latency_cycles: u64,
    /// Per-block execution time; equals latency/fmax at n = 1.
    pub exec_time_us: f64,
    pub throughput_mbps: f64,
}

/// Cycle/time arithmetic for a design point.
///
/// Non-pipelined: total = n * cycles_per_block. Pipelined: latency is
/// the stage-latency sum, the initiation interval the stage maximum,
/// total = latency + (n-1) * II.
pub fn simulate_timing(design: &DesignPoint, n_blocks: u64) -> Result<SimulationResult> {
    if n_blocks < 1 {
        return Err(Error::InvalidDesign("n_blocks must be >= 1".into()));
    }
    design.validate()?;
    let fmax = design.fmax_mhz.unwrap();
    let (latency, total) = match &design.cycles {
        CycleModel::WholeBlock(c) => (*c, n_blocks * c),
        CycleModel::Staged(ls) => {
            let latency: u64 = ls.iter().sum();
            let ii: u64 = *ls.iter().max().unwrap();
            (latency, latency + (n_blocks - 1) * ii)
        }
        CycleModel::ReportedOnly => unreachable!(),
    };
    let exec_time_us = total as f64 / (n_blocks as f64 * fmax);
    let block_bits = make_variant(design.variant).block_bits as f64;
    Ok(SimulationResult {
        n_blocks,
        total_cycles: total,
        latency_cycles: latency,
        exec_time_us,
        throughput_mbps: block_bits / exec_time_us,
    })
}

/// The embedded design points: behavioural and pipelined cores plus the
/// Org.1/Org.2 throughput-only baselines.
pub fn builtin_design_points() -> Vec<DesignPoint> {
    let t = tables();
    let mut points = Vec::new();
    for name in VariantName::ALL {
        let alg = name.table_name();
        if let Some(row) = t.row(TableId::T1, alg) {
            points.push(DesignPoint {
                variant: name,
                architecture: Architecture::Behavioural,
                label: "Behavioural".into(),
                fmax_mhz: row.get("fmax_mhz"),
                cycles: CycleModel::WholeBlock(row.get("cycles").unwrap() as u64),
                reported_mbps: row.get("throughput_mbps"),
                aluts: row.get("aluts").map(|v| v as u64),
                logic_elements: row.get("les").map(|v| v as u64),
            });
        }
        if let Some(row) = t.row(TableId::T2, alg) {
            let stages = row.get("cycles").unwrap() as usize;
            points.push(DesignPoint {
                variant: name,
                architecture: Architecture::Pipelined,
                label: "Pipelined".into(),
                fmax_mhz: row.get("fmax_mhz"),
                cycles: CycleModel::Staged(vec![1; stages]),
                reported_mbps: row.get("throughput_mbps"),
                aluts: row.get("aluts").map(|v| v as u64),
                logic_elements: row.get("les").map(|v| v as u64),
            });
        }
        if let Some(row) = t.row(TableId::T5, alg) {
            for (col, label) in [("org1_mbps", "Org.1"), ("org2_mbps", "Org.2")] {
                points.push(DesignPoint {
                    variant: name,
                    architecture: Architecture::OriginalSerial,
                    label: label.into(),
                    fmax_mhz: None,
                    cycles: CycleModel::ReportedOnly,
                    reported_mbps: row.get(col),
                    aluts: None,
                    logic_elements: None,
                });
            }
        }
    }
    points
}

/// Looks up the built-in point for a (variant, architecture) pair;
/// original baselines resolve to Org.1.
pub fn builtin_design_point(
    variant: VariantName,
    architecture: Architecture,
) -> Result<DesignPoint> {
    builtin_design_points()
        .into_iter()
        .find(|p| {
            p.variant == variant
                && p.architecture == architecture
                && (architecture != Architecture::OriginalSerial || p.label == "Org.1")
        })
        .ok_or_else(|| {
            Error::InvalidDesign(format!(
                "no built-in {} design for {}",
                architecture.as_str(),
                variant
            ))
        })
}

/// Pipeline stage names, in order.
pub const STAGE_NAMES: [&str; 3] = ["Initialization", "KeySchedulerAndRound", "Generation"];

/// Per-cycle record of which block occupies each stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageTrace {
    /// rows[cycle] = occupying block index per stage, None when empty.
    pub rows: Vec<[Option<usize>; 3]>,
}

impl StageTrace {
    /// CSV export: `cycle,stage1_block,stage2_block,stage3_block`,
    /// `-` for empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cycle,stage1_block,stage2_block,stage3_block\n");
        for (cycle, row) in self.rows.iter().enumerate() {
            let cell = |s: Option<usize>| s.map_or("-".to_string(), |b| b.to_string());
            writeln!(out, "{cycle},{},{},{}", cell(row[0]), cell(row[1]), cell(row[2])).unwrap();
        }
        out
    }

    /// Number of distinct blocks in flight at the given cycle.
    pub fn in_flight(&self, cycle: usize) -> usize {
        self.rows[cycle].iter().flatten().count()
    }
}

// Stage 1: load the plaintext into (L1, L2) and latch the key.
fn stage_init(variant: &CipherVariant, key: &Key80, plaintext: u64) -> Result<(RegisterState, Key80)> {
    Ok((cipher::load_plaintext(variant, plaintext)?, *key))
}

// Stage 2: run the key scheduler and all 254 rounds.
fn stage_rounds(variant: &CipherVariant, state: RegisterState, key: &Key80) -> RegisterState {
    let keys: RoundKeys = cipher::round_keys(variant, key);
    let ir = cipher::ir_schedule();
    let mut s = state;
    for r in 0..ROUNDS {
        for _ in 0..variant.steps_per_round {
            s = cipher::round_step(s, keys.ka(r), keys.kb(r), ir.bit(r), variant);
        }
    }
    s
}

// Stage 3: assemble the ciphertext bits.
fn stage_generate(variant: &CipherVariant, state: RegisterState) -> u64 {
    cipher::extract_block(variant, state)
}

/// Executes the cipher as three communicating stages with buffer
/// registers between them; up to three blocks are in flight per cycle.
/// Output is bit-identical to the reference encryption per block.
pub fn pipeline_encrypt_stream(
    variant: &CipherVariant,
    key: &Key80,
    plaintexts: &[u64],
) -> Result<(Vec<u64>, StageTrace)> {
    let n = plaintexts.len();
    let mut ciphertexts = Vec::with_capacity(n);
    let mut rows = Vec::new();

    // inter-stage buffer registers (block index + carried data)
    let mut reg12: Option<(usize, RegisterState, Key80)> = None;
    let mut reg23: Option<(usize, RegisterState)> = None;

    let total_cycles = if n == 0 { 0 } else { n + 2 };
    #[allow(clippy::needless_range_loop)] // iterates cycles, not blocks
    for cycle in 0..total_cycles {
        let mut row = [None; 3];

        // stage 3 consumes the stage-2 output register
        if let Some((idx, state)) = reg23.take() {
            row[2] = Some(idx);
            ciphertexts.push(stage_generate(variant, state));
            debug_assert_eq!(ciphertexts.len() - 1, idx);
        }
        // stage 2 consumes the stage-1 output register
        if let Some((idx, state, k)) = reg12.take() {
            row[1] = Some(idx);
            reg23 = Some((idx, stage_rounds(variant, state, &k)));
        }
        // stage 1 ingests the next plaintext
        if cycle < n {
            row[0] = Some(cycle);
            let (state, k) = stage_init(variant, key, plaintexts[cycle])?;
            reg12 = Some((cycle, state, k));
        }

        rows.push(row);
    }
    Ok((ciphertexts, StageTrace { rows }))
}
