//! Bit-exact reference implementation of the six-member cipher family.
//!
//! The block state lives in two shift registers L1/L2 (lengths summing
//! to the block size). Each round computes two nonlinear feedbacks
//!   fa = L1[x1] ^ L1[x2] ^ (L1[x3] & L1[x4]) ^ (L1[x5] & IR) ^ ka
//!   fb = L2[y1] ^ L2[y2] ^ (L2[y3] & L2[y4]) ^ (L2[y5] & L2[y6]) ^ kb
//! on the pre-shift contents, shifts both registers up by one and
//! cross-loads L1[0] <- fb, L2[0] <- fa. 254 rounds; the 48/64-bit
//! variants clock the registers 2/3 times per round under the same
//! (ka, kb, IR) triple.

pub mod ir;
pub mod schedule;

pub use ir::{ir_schedule, IrSchedule};
pub use schedule::{katan_round_keys, ktantan_round_keys, ktantan_selection, RoundKeys};

use crate::error::{Error, Result};
use crate::hex;
use crate::variant::{CipherVariant, KeyScheduleKind, ROUNDS};

/// An 80-bit key; bit k0 is the least significant bit of the canonical
/// 20-hex-digit encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Key80(u128);

const KEY_MASK: u128 = (1u128 << 80) - 1;

impl Key80 {
    pub fn new(bits: u128) -> Self {
        Key80(bits & KEY_MASK)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        Ok(Key80::new(hex::parse_key_bits(s)?))
    }

    pub fn to_hex(self) -> String {
        hex::format_key(self.0)
    }

    pub fn bit(self, i: usize) -> bool {
        debug_assert!(i < 80);
        (self.0 >> i) & 1 == 1
    }

    pub fn value(self) -> u128 {
        self.0
    }
}

/// The L1/L2 shift-register pair holding the evolving block.
/// Bit index 0 is the least recently shifted position in each register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterState {
    pub l1: u64,
    pub l2: u64,
}

fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn check_block(variant: &CipherVariant, block: u64, what: &'static str) -> Result<()> {
    if block & !mask(variant.block_bits) != 0 {
        return Err(Error::SizeMismatch {
            what,
            expected: variant.block_bits,
            got: 64 - block.leading_zeros(),
        });
    }
    Ok(())
}

/// Fills L2 with plaintext bits 0..l2_len-1 and L1 with the rest.
pub fn load_plaintext(variant: &CipherVariant, block: u64) -> Result<RegisterState> {
    check_block(variant, block, "plaintext block")?;
    Ok(RegisterState {
        l2: block & mask(variant.l2_len),
        l1: (block >> variant.l2_len) & mask(variant.l1_len),
    })
}

/// Inverse of the loading map.
pub fn extract_block(variant: &CipherVariant, state: RegisterState) -> u64 {
    state.l2 | (state.l1 << variant.l2_len)
}

#[inline]
fn bit(word: u64, i: u32) -> bool {
    (word >> i) & 1 == 1
}

/// One register clocking.
#[inline]
pub fn round_step(
    state: RegisterState,
    ka: bool,
    kb: bool,
    ir: bool,
    variant: &CipherVariant,
) -> RegisterState {
    let [x1, x2, x3, x4, x5] = variant.taps_x;
    let [y1, y2, y3, y4, y5, y6] = variant.taps_y;
    let l1 = state.l1;
    let l2 = state.l2;
    let fa = bit(l1, x1) ^ bit(l1, x2) ^ (bit(l1, x3) & bit(l1, x4)) ^ (bit(l1, x5) & ir) ^ ka;
    let fb = bit(l2, y1) ^ bit(l2, y2) ^ (bit(l2, y3) & bit(l2, y4)) ^ (bit(l2, y5) & bit(l2, y6)) ^ kb;
    RegisterState {
        l1: ((l1 << 1) | fb as u64) & mask(variant.l1_len),
        l2: ((l2 << 1) | fa as u64) & mask(variant.l2_len),
    }
}

/// Exact algebraic inverse of [`round_step`]. The dropped MSBs are
/// solved from the feedback equations, in which every other operand is
/// one of the shifted-down (known) bits.
#[inline]
pub fn round_unstep(
    state: RegisterState,
    ka: bool,
    kb: bool,
    ir: bool,
    variant: &CipherVariant,
) -> RegisterState {
    let [x1, x2, x3, x4, x5] = variant.taps_x;
    let [y1, y2, y3, y4, y5, y6] = variant.taps_y;
    let fb = bit(state.l1, 0);
    let fa = bit(state.l2, 0);
    let l1 = state.l1 >> 1; // old L1 with bit x1 still missing
    let l2 = state.l2 >> 1;
    let x1_bit = fa ^ bit(l1, x2) ^ (bit(l1, x3) & bit(l1, x4)) ^ (bit(l1, x5) & ir) ^ ka;
    let y1_bit = fb ^ bit(l2, y2) ^ (bit(l2, y3) & bit(l2, y4)) ^ (bit(l2, y5) & bit(l2, y6)) ^ kb;
    RegisterState {
        l1: l1 | (x1_bit as u64) << x1,
        l2: l2 | (y1_bit as u64) << y1,
    }
}

/// Expands a key with the variant's key-schedule kind.
pub fn round_keys(variant: &CipherVariant, key: &Key80) -> RoundKeys {
    match variant.key_schedule_kind {
        KeyScheduleKind::LfsrExpansion => katan_round_keys(key),
        KeyScheduleKind::CounterSelection => ktantan_round_keys(key),
    }
}

/// Encrypts one block with a precomputed subkey schedule.
pub fn encrypt_with_keys(variant: &CipherVariant, keys: &RoundKeys, plaintext: u64) -> Result<u64> {
    let mut state = load_plaintext(variant, plaintext)?;
    let ir = ir_schedule();
    for r in 0..ROUNDS {
        let (ka, kb) = (keys.ka(r), keys.kb(r));
        let irb = ir.bit(r);
        for _ in 0..variant.steps_per_round {
            state = round_step(state, ka, kb, irb, variant);
        }
    }
    Ok(extract_block(variant, state))
}

/// Decrypts one block with a precomputed subkey schedule.
pub fn decrypt_with_keys(variant: &CipherVariant, keys: &RoundKeys, ciphertext: u64) -> Result<u64> {
    check_block(variant, ciphertext, "ciphertext block")?;
    let mut state = RegisterState {
        l2: ciphertext & mask(variant.l2_len),
        l1: (ciphertext >> variant.l2_len) & mask(variant.l1_len),
    };
    let ir = ir_schedule();
    for r in (0..ROUNDS).rev() {
        let (ka, kb) = (keys.ka(r), keys.kb(r));
        let irb = ir.bit(r);
        for _ in 0..variant.steps_per_round {
            state = round_unstep(state, ka, kb, irb, variant);
        }
    }
    Ok(extract_block(variant, state))
}

/// 254-round encryption of a single block.
pub fn encrypt(variant: &CipherVariant, key: &Key80, plaintext: u64) -> Result<u64> {
    encrypt_with_keys(variant, &round_keys(variant, key), plaintext)
}

/// Exact inverse of [`encrypt`].
pub fn decrypt(variant: &CipherVariant, key: &Key80, ciphertext: u64) -> Result<u64> {
    decrypt_with_keys(variant, &round_keys(variant, key), ciphertext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variant::{make_variant, VariantName};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v32() -> CipherVariant {
        make_variant(VariantName::Katan32)
    }

    #[test]
    fn load_conventions() {
        let v = v32();
        let s = load_plaintext(&v, 0).unwrap();
        assert_eq!((s.l1, s.l2), (0, 0));
        let s = load_plaintext(&v, 1).unwrap();
        assert_eq!((s.l1, s.l2), (0, 1)); // bit 0 -> L2[0]
        let s = load_plaintext(&v, 1 << 19).unwrap();
        assert_eq!((s.l1, s.l2), (1, 0)); // bit 19 -> L1[0]
    }

    #[test]
    fn oversized_block_is_rejected() {
        let v = v32();
        assert!(load_plaintext(&v, 1 << 32).is_err());
        assert!(encrypt(&v, &Key80::new(0), 1 << 40).is_err());
    }

    #[test]
    fn round_step_examples() {
        let v = v32();
        let zero = RegisterState { l1: 0, l2: 0 };
        // all-zero state, all-zero inputs: fixed point
        assert_eq!(round_step(zero, false, false, false, &v), zero);
        // ka alone reaches L2[0] via fa
        let s = round_step(zero, true, false, false, &v);
        assert_eq!((s.l1, s.l2), (0, 1));
        // L1[x5]·IR with x5 = 3: only L1[3] set, ir = 1
        let s = round_step(
            RegisterState { l1: 1 << 3, l2: 0 },
            false,
            false,
            true,
            &v,
        );
        assert_eq!((s.l1, s.l2), (1 << 4, 1));
    }

    #[test]
    fn shift_semantics() {
        let v = v32();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let before = RegisterState {
                l1: rng.gen::<u64>() & ((1 << 13) - 1),
                l2: rng.gen::<u64>() & ((1 << 19) - 1),
            };
            let after = round_step(before, rng.gen(), rng.gen(), rng.gen(), &v);
            for j in 0..12 {
                assert_eq!((after.l1 >> (j + 1)) & 1, (before.l1 >> j) & 1);
            }
            for j in 0..18 {
                assert_eq!((after.l2 >> (j + 1)) & 1, (before.l2 >> j) & 1);
            }
        }
    }

    #[test]
    fn unstep_inverts_step_all_variants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in VariantName::ALL {
            let v = make_variant(name);
            for ka in [false, true] {
                for kb in [false, true] {
                    for irb in [false, true] {
                        let s = RegisterState {
                            l1: rng.gen::<u64>() & mask(v.l1_len),
                            l2: rng.gen::<u64>() & mask(v.l2_len),
                        };
                        let stepped = round_step(s, ka, kb, irb, &v);
                        assert_eq!(round_unstep(stepped, ka, kb, irb, &v), s);
                    }
                }
            }
        }
    }

    #[test]
    fn published_katan32_vectors() {
        let v = v32();
        let ones = Key80::from_hex("ffffffffffffffffffff").unwrap();
        let zero = Key80::from_hex("00000000000000000000").unwrap();
        assert_eq!(encrypt(&v, &ones, 0).unwrap(), 0x7e1f_f945);
        assert_eq!(encrypt(&v, &zero, 0xffff_ffff).unwrap(), 0x432e_61da);
        assert_eq!(decrypt(&v, &ones, 0x7e1f_f945).unwrap(), 0);
    }

    #[test]
    fn zero_key_zero_plaintext_is_a_fixed_point() {
        // IR enters only ANDed with L1[x5], so the all-zero state with
        // zero subkeys never leaves zero.
        let zero = Key80::new(0);
        for name in VariantName::ALL {
            let v = make_variant(name);
            assert_eq!(encrypt(&v, &zero, 0).unwrap(), 0);
        }
    }

    #[test]
    fn roundtrip_all_variants() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for name in VariantName::ALL {
            let v = make_variant(name);
            for _ in 0..50 {
                let key = Key80::new(rng.gen::<u128>());
                let p = rng.gen::<u64>() & mask(v.block_bits);
                let c = encrypt(&v, &key, p).unwrap();
                assert_eq!(decrypt(&v, &key, c).unwrap(), p);
            }
        }
    }

    #[test]
    fn wrong_key_does_not_decrypt() {
        let v = v32();
        let k1 = Key80::new(0x1234_5678_9abc_def0_1234);
        let k2 = Key80::new(0x1234_5678_9abc_def0_1235);
        let c = encrypt(&v, &k1, 0xdead_beef).unwrap();
        assert_ne!(decrypt(&v, &k2, c).unwrap(), 0xdead_beef);
    }
}
