//! Fixed-width lowercase hex encodings for keys and blocks.
//!
//! Most-significant digit first; bit 0 of a value is the least
//! significant bit of its encoding.

use crate::error::{Error, Result};

fn parse_digits(s: &str, expected: usize) -> Result<u128> {
    let digits = s.trim();
    if digits.chars().count() != expected {
        return Err(Error::BadHexLength {
            expected,
            got: digits.chars().count(),
        });
    }
    let mut v: u128 = 0;
    for (pos, c) in digits.chars().enumerate() {
        let d = c.to_digit(16).ok_or_else(|| Error::BadHex {
            pos,
            msg: format!("invalid hex digit `{c}`"),
        })?;
        v = (v << 4) | d as u128;
    }
    Ok(v)
}

/// Parses a block of `block_bits` bits from fixed-width hex.
pub fn parse_block(s: &str, block_bits: u32) -> Result<u64> {
    let width = (block_bits / 4) as usize;
    Ok(parse_digits(s, width)? as u64)
}

/// Parses an 80-bit key from 20 hex digits.
pub fn parse_key_bits(s: &str) -> Result<u128> {
    parse_digits(s, 20)
}

pub fn format_block(v: u64, block_bits: u32) -> String {
    format!("{:0>width$x}", v, width = (block_bits / 4) as usize)
}

pub fn format_key(v: u128) -> String {
    format!("{v:020x}")
}
