//! Acceptance gate: one test per acceptance criterion, each printing a
//! single pass/fail line. Run with `cargo test --test acceptance`.
//!
//! Use `-- --nocapture` to see the per-criterion lines for passing
//! tests as well.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use katanlab::bench::{self, BenchConfig};
use katanlab::bitslice::{self, KeyMode, LANES};
use katanlab::cipher::{self, Key80};
use katanlab::kat;
use katanlab::metrics::{self, Verdict};
use katanlab::paperdata::TableId;
use katanlab::pipeline::{self, Architecture};
use katanlab::variant::{make_variant, CipherVariant, VariantName};

fn criterion(id: u32, name: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("criterion {id} ({name}): PASS"),
        Err(cause) => {
            println!("criterion {id} ({name}): FAIL");
            resume_unwind(cause);
        }
    }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_97ed ^ salt)
}

fn block_mask(v: &CipherVariant) -> u64 {
    if v.block_bits >= 64 {
        u64::MAX
    } else {
        (1u64 << v.block_bits) - 1
    }
}

fn assert_within(elapsed: Duration, limit: Duration, what: &str) {
    assert!(
        elapsed <= limit,
        "{what} took {elapsed:?}, limit {limit:?}"
    );
}

#[test]
fn criterion_1_known_answer_gate() {
    criterion(1, "known-answer gate", || {
        let start = Instant::now();
        let records = kat::parse(kat::BUNDLED_KAT).expect("bundled KAT parses");
        assert_eq!(records.len(), 36, "6 vectors per variant expected");
        let summary = kat::run(&records);
        assert!(
            summary.passed(),
            "KAT failures: {:?}",
            summary.failures
        );
        assert_within(start.elapsed(), Duration::from_secs(1), "KAT gate");
    });
}

#[test]
fn criterion_2_round_trip_property() {
    criterion(2, "round-trip property", || {
        let start = Instant::now();
        for name in VariantName::ALL {
            let v = make_variant(name);
            let mask = block_mask(&v);
            let mut r = rng(name as u64);
            for _ in 0..10_000 {
                let key = Key80::new(r.gen::<u128>());
                let pt = r.gen::<u64>() & mask;
                let ct = cipher::encrypt(&v, &key, pt).unwrap();
                assert_eq!(
                    cipher::decrypt(&v, &key, ct).unwrap(),
                    pt,
                    "{name}: decrypt(encrypt(pt)) != pt"
                );
            }
        }
        assert_within(start.elapsed(), Duration::from_secs(30), "round trips");
    });
}

#[test]
fn criterion_3_bitslice_equivalence() {
    criterion(3, "bitslice equivalence", || {
        let start = Instant::now();
        const N: usize = 10_048; // multiple of 64 lanes, >= 10,000
        for name in VariantName::ALL {
            let v = make_variant(name);
            let mask = block_mask(&v);
            let mut r = rng(0x511ce ^ name as u64);
            let blocks: Vec<u64> = (0..N).map(|_| r.gen::<u64>() & mask).collect();

            // shared-key mode against the scalar reference
            let shared_key = Key80::new(r.gen::<u128>());
            let mut out = vec![0u64; N];
            bitslice::encrypt_blocks_shared(&v, &shared_key, &blocks, &mut out).unwrap();
            for (i, (&pt, &ct)) in blocks.iter().zip(out.iter()).enumerate() {
                assert_eq!(
                    ct,
                    cipher::encrypt(&v, &shared_key, pt).unwrap(),
                    "{name}: shared-key lane {i} diverges"
                );
            }

            // per-lane-key mode, one independent key per lane
            for chunk in blocks.chunks(LANES) {
                let keys: Vec<Key80> =
                    (0..chunk.len()).map(|_| Key80::new(r.gen::<u128>())).collect();
                let batch = bitslice::transpose_in(chunk, &v).unwrap();
                let enc = bitslice::encrypt_batch(&batch, KeyMode::PerLane(&keys)).unwrap();
                let cts = bitslice::transpose_out(&enc);
                for (lane, (&pt, key)) in chunk.iter().zip(keys.iter()).enumerate() {
                    assert_eq!(
                        cts[lane],
                        cipher::encrypt(&v, key, pt).unwrap(),
                        "{name}: per-lane-key lane {lane} diverges"
                    );
                }
            }
        }
        assert_within(start.elapsed(), Duration::from_secs(60), "bitslice check");
    });
}

#[test]
fn criterion_4_pipeline_functional_equivalence() {
    criterion(4, "pipeline functional equivalence", || {
        for name in VariantName::ALL {
            let v = make_variant(name);
            let mask = block_mask(&v);
            let mut r = rng(0x919e ^ name as u64);
            let key = Key80::new(r.gen::<u128>());
            let n = 10_000usize;
            let pts: Vec<u64> = (0..n).map(|_| r.gen::<u64>() & mask).collect();

            let (cts, trace) = pipeline::pipeline_encrypt_stream(&v, &key, &pts).unwrap();
            assert_eq!(cts.len(), n);
            let keys = cipher::round_keys(&v, &key);
            for (i, (&pt, &ct)) in pts.iter().zip(cts.iter()).enumerate() {
                assert_eq!(
                    ct,
                    cipher::encrypt_with_keys(&v, &keys, pt).unwrap(),
                    "{name}: pipeline output {i} diverges from reference"
                );
            }
            // fill, steady state with exactly 3 in flight, drain
            assert_eq!(trace.rows.len(), n + 2);
            for cycle in 2..n {
                assert_eq!(
                    trace.in_flight(cycle),
                    3,
                    "{name}: cycle {cycle} not in steady state"
                );
            }
        }
    });
}

#[test]
fn criterion_5_table_reproduction() {
    criterion(5, "table reproduction", || {
        let start = Instant::now();
        let findings = metrics::audit_tables();

        // throughput <-> exec-time for every row of Tables 1, 2 and 4,
        // and every speedup column of Tables 1, 3, 4 and 5, reproduce
        // within 0.5%. Single documented exception: the Table 4
        // KTANTAN-32 throughput cell is printed with one significant
        // digit (0.04 Mbit/s) and reproduces only to the 2% tier.
        for f in findings
            .iter()
            .filter(|f| f.column != "exec_time_us")
        {
            let loose = f.table == TableId::T4
                && f.algorithm == "KTANTAN-32"
                && f.column == "throughput_mbps";
            let tol = if loose { 0.02 } else { 0.005 };
            assert!(
                f.rel_delta.abs() <= tol,
                "{} {} {}: printed {} vs recomputed {} ({:+.3}%) exceeds {}%",
                f.table.as_str(),
                f.algorithm,
                f.column,
                f.printed,
                f.recomputed,
                f.rel_delta * 100.0,
                tol * 100.0
            );
        }

        // spot-check the arithmetic itself against hand-computed values
        assert!((metrics::throughput(48, 1.890).unwrap() - 25.397).abs() < 0.001);
        assert!((metrics::throughput(64, 0.150).unwrap() - 426.667).abs() < 0.001);
        assert!((metrics::speedup(24975.6, 1.0).unwrap() - 24975.6).abs() < 1e-9);
        assert_within(start.elapsed(), Duration::from_secs(1), "table audit");
    });
}

#[test]
fn criterion_6_audit_findings() {
    criterion(6, "audit anomaly set", || {
        let findings = metrics::audit_tables();

        // Table 1 KATAN exec times: consistent with cycles/fmax to 2%
        for f in findings.iter().filter(|f| {
            f.table == TableId::T1
                && f.column == "exec_time_us"
                && f.algorithm.starts_with("KATAN-")
        }) {
            assert_ne!(
                f.verdict,
                Verdict::Inconsistent,
                "{} exec time should be match/rounding, got {:+.2}%",
                f.algorithm,
                f.rel_delta * 100.0
            );
        }

        // the expected anomaly set, exactly: Table 1 KTANTAN exec
        // times and all three Table 2 exec times
        let flagged: Vec<_> = findings
            .iter()
            .filter(|f| f.verdict == Verdict::Inconsistent)
            .map(|f| (f.table, f.algorithm.clone(), f.column.clone()))
            .collect();
        let expected = metrics::expected_inconsistent();
        assert_eq!(flagged.len(), 6, "anomaly set must be exactly 6 cells");
        for cell in &expected {
            assert!(flagged.contains(cell), "missing expected anomaly {cell:?}");
        }
        assert!(metrics::audit_is_clean(&findings));

        // the documented magnitudes: ~9-19% on T1 KTANTAN rows,
        // ~17-21% on T2 rows
        for f in findings.iter().filter(|f| f.verdict == Verdict::Inconsistent) {
            let d = f.rel_delta.abs();
            assert!(
                (0.05..0.25).contains(&d),
                "{} {} anomaly magnitude {:.2}% outside documented band",
                f.algorithm,
                f.column,
                d * 100.0
            );
        }
    });
}

#[test]
fn criterion_7_cycle_model() {
    criterion(7, "cycle model", || {
        // behavioural KATAN-32: 35 cycles per block
        let beh = pipeline::builtin_design_point(VariantName::Katan32, Architecture::Behavioural)
            .unwrap();
        let r = pipeline::simulate_timing(&beh, 1000).unwrap();
        assert_eq!(r.total_cycles, 35_000);

        // pipelined stages [1,1,1]: latency 3, initiation interval 1
        let pip = pipeline::builtin_design_point(VariantName::Katan32, Architecture::Pipelined)
            .unwrap();
        let r = pipeline::simulate_timing(&pip, 1000).unwrap();
        assert_eq!(r.total_cycles, 1_002);
        assert_eq!(r.latency_cycles, 3);

        // asymptotic throughput approaches block_bits * fmax
        for name in VariantName::ALL {
            let Ok(p) = pipeline::builtin_design_point(name, Architecture::Pipelined) else {
                continue; // pipelined cores exist for the KATAN set only
            };
            let v = make_variant(name);
            let r = pipeline::simulate_timing(&p, 1_000_000).unwrap();
            let asymptote = v.block_bits as f64 * p.fmax_mhz.unwrap();
            let rel = (r.throughput_mbps - asymptote).abs() / asymptote;
            assert!(
                rel < 1e-4,
                "{name}: throughput {:.3} vs asymptote {asymptote:.3} off by {:.5}%",
                r.throughput_mbps,
                rel * 100.0
            );
        }
    });
}

#[test]
fn criterion_8_diffusion_sanity() {
    criterion(8, "diffusion sanity", || {
        for name in VariantName::ALL {
            let v = make_variant(name);
            let mask = block_mask(&v);
            let mut r = rng(0xd1ff ^ name as u64);
            let trials = 1_000;
            let mut flipped_bits = 0u64;
            for _ in 0..trials {
                let key = Key80::new(r.gen::<u128>());
                let pt = r.gen::<u64>() & mask;
                let bit = r.gen_range(0..v.block_bits);
                let keys = cipher::round_keys(&v, &key);
                let a = cipher::encrypt_with_keys(&v, &keys, pt).unwrap();
                let b = cipher::encrypt_with_keys(&v, &keys, pt ^ (1 << bit)).unwrap();
                flipped_bits += (a ^ b).count_ones() as u64;
            }
            let mean = flipped_bits as f64 / (trials as f64 * v.block_bits as f64);
            assert!(
                (0.45..=0.55).contains(&mean),
                "{name}: mean avalanche fraction {mean:.4} outside [0.45, 0.55]"
            );
        }
    });
}

#[test]
fn criterion_9_bench_integrity() {
    criterion(9, "bench integrity", || {
        let mut reference_cfg = BenchConfig::new(VariantName::Katan32, "reference");
        reference_cfg.n_blocks = 65_536;
        let reference = bench::run_bench(&reference_cfg).unwrap();

        let mut bitsliced_cfg = BenchConfig::new(VariantName::Katan32, "bitsliced");
        bitsliced_cfg.n_blocks = 65_536;
        let bitsliced = bench::run_bench(&bitsliced_cfg).unwrap();

        // run_bench verifies every timed run against the reference
        // checksum internally; the two engines must also agree
        assert_eq!(reference.ciphertext_checksum, bitsliced.ciphertext_checksum);

        let ratio = bitsliced.throughput_mbps / reference.throughput_mbps;
        println!(
            "criterion 9 detail: bitsliced {:.1} Mbit/s vs looped reference {:.1} Mbit/s, ratio {ratio:.2}x",
            bitsliced.throughput_mbps, reference.throughput_mbps
        );
        assert!(
            ratio >= 2.0,
            "bitsliced engine only {ratio:.2}x the looped reference (floor 2.0x)"
        );
    });
}
