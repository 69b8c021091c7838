//! The two key schedules: LFSR expansion (KATAN) and counter-driven
//! selection from the unmodified key (KTANTAN).

use std::sync::OnceLock;

use crate::cipher::ir::ir_schedule;
use crate::cipher::Key80;
use crate::variant::ROUNDS;

pub const EXPANDED_BITS: usize = 2 * ROUNDS;

/// The 254 per-round subkey pairs (ka_i, kb_i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundKeys {
    pairs: [(bool, bool); ROUNDS],
}

impl RoundKeys {
    pub fn new(pairs: [(bool, bool); ROUNDS]) -> Self {
        RoundKeys { pairs }
    }

    pub fn ka(&self, round: usize) -> bool {
        self.pairs[round].0
    }

    pub fn kb(&self, round: usize) -> bool {
        self.pairs[round].1
    }

    pub fn pairs(&self) -> &[(bool, bool); ROUNDS] {
        &self.pairs
    }
}

/// KATAN key schedule: the 80 key bits seed a linear recurrence
/// k_i = k_{i-80} ^ k_{i-61} ^ k_{i-50} ^ k_{i-13} producing 508 bits;
/// round i consumes (ka_i, kb_i) = (k_{2i}, k_{2i+1}).
pub fn katan_round_keys(key: &Key80) -> RoundKeys {
    let mut k = [false; EXPANDED_BITS];
    for (i, slot) in k.iter_mut().take(80).enumerate() {
        *slot = key.bit(i);
    }
    for i in 80..EXPANDED_BITS {
        k[i] = k[i - 80] ^ k[i - 61] ^ k[i - 50] ^ k[i - 13];
    }
    let mut pairs = [(false, false); ROUNDS];
    for (i, pair) in pairs.iter_mut().enumerate() {
        *pair = (k[2 * i], k[2 * i + 1]);
    }
    RoundKeys::new(pairs)
}

/// Precomputed KTANTAN selection table: for each round, the indices of
/// the two key bits routed to (ka, kb).
///
/// The key is viewed as five 16-bit words w0..w4 (w_j = k_{16j+15..16j}).
/// With T_i the round-counter state, the bit within each word is picked
/// by the counter's high nibble (MUX16), and the word feeding each
/// subkey by MUX trees over t3/t2/t1:
///   ka <- w0 if !t3 && !t2, else w1 if !t1, else w2
///   kb <- w4 if  t3 &&  t2, else w3 if  t1, else w4
/// Every subkey bit is a pure selection of one key bit, so the key is
/// never shifted or modified.
pub fn ktantan_selection() -> &'static [(u8, u8); ROUNDS] {
    static TABLE: OnceLock<[(u8, u8); ROUNDS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let ir = ir_schedule();
        let mut table = [(0u8, 0u8); ROUNDS];
        for (i, entry) in table.iter_mut().enumerate() {
            let t = ir.state(i);
            let nib = (t >> 4) & 0xF;
            let (t3, t2, t1) = ((t >> 3) & 1 == 1, (t >> 2) & 1 == 1, (t >> 1) & 1 == 1);
            let wa = if !t3 && !t2 {
                0
            } else if !t1 {
                1
            } else {
                2
            };
            let wb = if t3 && t2 {
                4
            } else if t1 {
                3
            } else {
                4
            };
            *entry = (16 * wa + nib, 16 * wb + nib);
        }
        table
    })
}

/// KTANTAN key schedule: per-round combinational selection from the
/// unmodified key.
pub fn ktantan_round_keys(key: &Key80) -> RoundKeys {
    let table = ktantan_selection();
    let mut pairs = [(false, false); ROUNDS];
    for (i, pair) in pairs.iter_mut().enumerate() {
        let (a, b) = table[i];
        *pair = (key.bit(a as usize), key.bit(b as usize));
    }
    RoundKeys::new(pairs)
}
