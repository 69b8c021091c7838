//! Bitsliced encryption: bit j of up to 64 blocks lives in one u64
//! plane, so one pass of word-wide boolean operations encrypts the
//! whole batch.

use crate::cipher::{ir_schedule, katan_round_keys, ktantan_selection, Key80};
use crate::error::{Error, Result};
use crate::variant::{CipherVariant, KeyScheduleKind, ROUNDS};

/// Lane width: one u64 word, fixed at build time.
pub const LANES: usize = 64;

const MAX_L1: usize = 25;
const MAX_L2: usize = 39;

/// Up to 64 blocks in bit-plane form: plane j, bit t = bit j of block t.
#[derive(Debug, Clone)]
pub struct SliceBatch {
    pub variant: CipherVariant,
    planes: Vec<u64>,
    valid_lanes: usize,
}

impl SliceBatch {
    pub fn planes(&self) -> &[u64] {
        &self.planes
    }

    pub fn valid_lanes(&self) -> usize {
        self.valid_lanes
    }
}

fn block_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Transposes ≤64 blocks into bit planes; unused lanes are zero-filled.
pub fn transpose_in(blocks: &[u64], variant: &CipherVariant) -> Result<SliceBatch> {
    assert!(blocks.len() <= LANES, "at most {LANES} blocks per batch");
    for &b in blocks {
        if b & !block_mask(variant.block_bits) != 0 {
            return Err(Error::SizeMismatch {
                what: "batch block",
                expected: variant.block_bits,
                got: 64 - b.leading_zeros(),
            });
        }
    }
    let mut planes = vec![0u64; variant.block_bits as usize];
    for (lane, &block) in blocks.iter().enumerate() {
        for (j, plane) in planes.iter_mut().enumerate() {
            *plane |= ((block >> j) & 1) << lane;
        }
    }
    Ok(SliceBatch {
        variant: *variant,
        planes,
        valid_lanes: blocks.len(),
    })
}

/// Exact inverse of [`transpose_in`]; padding lanes are discarded.
pub fn transpose_out(batch: &SliceBatch) -> Vec<u64> {
    let mut blocks = vec![0u64; batch.valid_lanes];
    for (j, &plane) in batch.planes.iter().enumerate() {
        for (lane, block) in blocks.iter_mut().enumerate() {
            *block |= ((plane >> lane) & 1) << j;
        }
    }
    blocks
}

/// Key material for a batch: one schedule broadcast to every lane, or
/// an independent key per lane.
pub enum KeyMode<'a> {
    Shared(&'a Key80),
    PerLane(&'a [Key80]),
}

fn broadcast(bit: bool) -> u64 {
    if bit {
        u64::MAX
    } else {
        0
    }
}

/// Per-round (ka, kb) planes for the whole batch.
fn subkey_planes(variant: &CipherVariant, keys: &KeyMode<'_>) -> Vec<(u64, u64)> {
    match (variant.key_schedule_kind, keys) {
        (KeyScheduleKind::LfsrExpansion, KeyMode::Shared(key)) => {
            let rk = katan_round_keys(key);
            rk.pairs()
                .iter()
                .map(|&(a, b)| (broadcast(a), broadcast(b)))
                .collect()
        }
        (KeyScheduleKind::LfsrExpansion, KeyMode::PerLane(keys)) => {
            // the linear expansion bitslices directly: run the
            // recurrence on key-bit planes
            let mut k = vec![0u64; 2 * ROUNDS];
            for (lane, key) in keys.iter().enumerate() {
                for (i, plane) in k.iter_mut().take(80).enumerate() {
                    *plane |= (key.bit(i) as u64) << lane;
                }
            }
            for i in 80..2 * ROUNDS {
                k[i] = k[i - 80] ^ k[i - 61] ^ k[i - 50] ^ k[i - 13];
            }
            (0..ROUNDS).map(|i| (k[2 * i], k[2 * i + 1])).collect()
        }
        (KeyScheduleKind::CounterSelection, keys) => {
            let mut key_planes = [0u64; 80];
            match keys {
                KeyMode::Shared(key) => {
                    for (i, plane) in key_planes.iter_mut().enumerate() {
                        *plane = broadcast(key.bit(i));
                    }
                }
                KeyMode::PerLane(keys) => {
                    for (lane, key) in keys.iter().enumerate() {
                        for (i, plane) in key_planes.iter_mut().enumerate() {
                            *plane |= (key.bit(i) as u64) << lane;
                        }
                    }
                }
            }
            ktantan_selection()
                .iter()
                .map(|&(a, b)| (key_planes[a as usize], key_planes[b as usize]))
                .collect()
        }
    }
}

/// Encrypts every lane; lane t of the output equals the reference
/// encryption of block t under its key.
pub fn encrypt_batch(batch: &SliceBatch, keys: KeyMode<'_>) -> Result<SliceBatch> {
    if let KeyMode::PerLane(ks) = &keys {
        if ks.len() != batch.valid_lanes {
            return Err(Error::KeyCountMismatch {
                lanes: batch.valid_lanes,
                keys: ks.len(),
            });
        }
    }
    let v = &batch.variant;
    let (l1n, l2n) = (v.l1_len as usize, v.l2_len as usize);
    let mut l1 = [0u64; MAX_L1];
    let mut l2 = [0u64; MAX_L2];
    l2[..l2n].copy_from_slice(&batch.planes[..l2n]);
    l1[..l1n].copy_from_slice(&batch.planes[l2n..l2n + l1n]);

    let subkeys = subkey_planes(v, &keys);
    let ir = ir_schedule();
    let [x1, x2, x3, x4, x5] = v.taps_x.map(|t| t as usize);
    let [y1, y2, y3, y4, y5, y6] = v.taps_y.map(|t| t as usize);
    let steps = v.steps_per_round;

    for (r, &(ka, kb)) in subkeys.iter().enumerate() {
        let irm = broadcast(ir.bit(r));
        for _ in 0..steps {
            let fa = l1[x1] ^ l1[x2] ^ (l1[x3] & l1[x4]) ^ (l1[x5] & irm) ^ ka;
            let fb = l2[y1] ^ l2[y2] ^ (l2[y3] & l2[y4]) ^ (l2[y5] & l2[y6]) ^ kb;
            l1.copy_within(0..l1n - 1, 1);
            l2.copy_within(0..l2n - 1, 1);
            l1[0] = fb;
            l2[0] = fa;
        }
    }

    let mut planes = vec![0u64; v.block_bits as usize];
    planes[..l2n].copy_from_slice(&l2[..l2n]);
    planes[l2n..l2n + l1n].copy_from_slice(&l1[..l1n]);
    Ok(SliceBatch {
        variant: *v,
        planes,
        valid_lanes: batch.valid_lanes,
    })
}

/// Convenience wrapper: encrypts an arbitrary number of blocks under a
/// shared key, batching internally.
pub fn encrypt_blocks_shared(
    variant: &CipherVariant,
    key: &Key80,
    blocks: &[u64],
    out: &mut [u64],
) -> Result<()> {
    debug_assert_eq!(blocks.len(), out.len());
    for (chunk, out_chunk) in blocks.chunks(LANES).zip(out.chunks_mut(LANES)) {
        let batch = transpose_in(chunk, variant)?;
        let enc = encrypt_batch(&batch, KeyMode::Shared(key))?;
        out_chunk.copy_from_slice(&transpose_out(&enc));
    }
    Ok(())
}
