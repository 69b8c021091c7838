//! Per-variant cipher parameters.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub const ROUNDS: usize = 254;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum VariantName {
    Katan32,
    Katan48,
    Katan64,
    Ktantan32,
    Ktantan48,
    Ktantan64,
}

impl VariantName {
    pub const ALL: [VariantName; 6] = [
        VariantName::Katan32,
        VariantName::Katan48,
        VariantName::Katan64,
        VariantName::Ktantan32,
        VariantName::Ktantan48,
        VariantName::Ktantan64,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VariantName::Katan32 => "katan32",
            VariantName::Katan48 => "katan48",
            VariantName::Katan64 => "katan64",
            VariantName::Ktantan32 => "ktantan32",
            VariantName::Ktantan48 => "ktantan48",
            VariantName::Ktantan64 => "ktantan64",
        }
    }

    /// Name as printed in the result tables, e.g. "KATAN-32".
    pub fn table_name(self) -> &'static str {
        match self {
            VariantName::Katan32 => "KATAN-32",
            VariantName::Katan48 => "KATAN-48",
            VariantName::Katan64 => "KATAN-64",
            VariantName::Ktantan32 => "KTANTAN-32",
            VariantName::Ktantan48 => "KTANTAN-48",
            VariantName::Ktantan64 => "KTANTAN-64",
        }
    }
}

impl FromStr for VariantName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "katan32" => Ok(VariantName::Katan32),
            "katan48" => Ok(VariantName::Katan48),
            "katan64" => Ok(VariantName::Katan64),
            "ktantan32" => Ok(VariantName::Ktantan32),
            "ktantan48" => Ok(VariantName::Ktantan48),
            "ktantan64" => Ok(VariantName::Ktantan64),
            _ => Err(Error::UnknownVariant(s.to_string())),
        }
    }
}

impl fmt::Display for VariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyScheduleKind {
    /// 80-bit LFSR expansion to 508 bits (KATAN).
    LfsrExpansion,
    /// Combinational selection from the unmodified key, driven by the
    /// round counter (KTANTAN).
    CounterSelection,
}

/// Full parameter record for one member of the cipher family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CipherVariant {
    pub name: VariantName,
    pub block_bits: u32,
    pub l1_len: u32,
    pub l2_len: u32,
    /// fa taps x1..x5 into L1 (x1 is the MSB).
    pub taps_x: [u32; 5],
    /// fb taps y1..y6 into L2 (y1 is the MSB).
    pub taps_y: [u32; 6],
    /// Register clockings per round sharing one (ka, kb, IR) triple.
    pub steps_per_round: u32,
    pub key_schedule_kind: KeyScheduleKind,
}

const KATAN32_GEOMETRY: (u32, u32, [u32; 5], [u32; 6], u32) =
    (13, 19, [12, 7, 8, 5, 3], [18, 7, 12, 10, 8, 3], 1);
const KATAN48_GEOMETRY: (u32, u32, [u32; 5], [u32; 6], u32) =
    (19, 29, [18, 12, 15, 7, 6], [28, 19, 21, 13, 15, 6], 2);
const KATAN64_GEOMETRY: (u32, u32, [u32; 5], [u32; 6], u32) =
    (25, 39, [24, 15, 20, 11, 9], [38, 25, 33, 21, 14, 9], 3);

/// Returns the fully populated parameter record for a variant.
pub fn make_variant(name: VariantName) -> CipherVariant {
    let (geom, kind) = match name {
        VariantName::Katan32 => (KATAN32_GEOMETRY, KeyScheduleKind::LfsrExpansion),
        VariantName::Katan48 => (KATAN48_GEOMETRY, KeyScheduleKind::LfsrExpansion),
        VariantName::Katan64 => (KATAN64_GEOMETRY, KeyScheduleKind::LfsrExpansion),
        VariantName::Ktantan32 => (KATAN32_GEOMETRY, KeyScheduleKind::CounterSelection),
        VariantName::Ktantan48 => (KATAN48_GEOMETRY, KeyScheduleKind::CounterSelection),
        VariantName::Ktantan64 => (KATAN64_GEOMETRY, KeyScheduleKind::CounterSelection),
    };
    let (l1_len, l2_len, taps_x, taps_y, steps_per_round) = geom;
    CipherVariant {
        name,
        block_bits: l1_len + l2_len,
        l1_len,
        l2_len,
        taps_x,
        taps_y,
        steps_per_round,
        key_schedule_kind: kind,
    }
}

/// Parses a variant name and returns its parameter record.
pub fn parse_variant(s: &str) -> Result<CipherVariant, Error> {
    Ok(make_variant(s.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn katan32_geometry() {
        let v = make_variant(VariantName::Katan32);
        assert_eq!(v.block_bits, 32);
        assert_eq!(v.l1_len, 13);
        assert_eq!(v.l2_len, 19);
        assert_eq!(v.steps_per_round, 1);
        assert_eq!(v.key_schedule_kind, KeyScheduleKind::LfsrExpansion);
    }

    #[test]
    fn katan64_geometry() {
        let v = make_variant(VariantName::Katan64);
        assert_eq!(v.block_bits, 64);
        assert_eq!(v.l1_len, 25);
        assert_eq!(v.l2_len, 39);
        assert_eq!(v.steps_per_round, 3);
    }

    #[test]
    fn unknown_variant_is_rejected() {
        let err = parse_variant("KATAN96").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("KATAN96"));
        assert!(msg.contains("katan32"));
    }

    #[test]
    fn name_parsing_is_case_and_dash_insensitive() {
        assert_eq!(
            "KATAN-32".parse::<VariantName>().unwrap(),
            VariantName::Katan32
        );
        assert_eq!(
            "KtAnTaN_64".parse::<VariantName>().unwrap(),
            VariantName::Ktantan64
        );
    }

    #[test]
    fn geometry_invariants_hold_for_all_variants() {
        for name in VariantName::ALL {
            let v = make_variant(name);
            assert_eq!(v.l1_len + v.l2_len, v.block_bits);
            // 1, 2 and 3 register clocks per round for 32/48/64-bit blocks
            assert_eq!(v.steps_per_round, v.block_bits / 16 - 1);
            assert_eq!(v.taps_x[0], v.l1_len - 1, "x1 must be the L1 MSB");
            assert_eq!(v.taps_y[0], v.l2_len - 1, "y1 must be the L2 MSB");
            assert!(v.taps_x.iter().all(|&t| t < v.l1_len));
            assert!(v.taps_y.iter().all(|&t| t < v.l2_len));
            // all non-MSB taps strictly below the MSB, needed for inversion
            assert!(v.taps_x[1..].iter().all(|&t| t < v.taps_x[0]));
            assert!(v.taps_y[1..].iter().all(|&t| t < v.taps_y[0]));
        }
    }
}
