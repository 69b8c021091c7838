//! Known-answer test files: `<variant> <key-hex:20> <plaintext-hex>
//! <ciphertext-hex>`, one record per line, `#` comments.

use crate::cipher::{self, Key80};
use crate::error::{Error, Result};
use crate::hex;
use crate::variant::{make_variant, CipherVariant};

/// The vectors bundled with the crate.
pub const BUNDLED_KAT: &str = include_str!("../data/katan_kat.txt");

#[derive(Debug, Clone)]
pub struct KatRecord {
    pub line: usize,
    pub variant: CipherVariant,
    pub key: Key80,
    pub plaintext: u64,
    pub ciphertext: u64,
}

pub fn parse(data: &str) -> Result<Vec<KatRecord>> {
    let mut records = Vec::new();
    for (idx, raw) in data.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::KatParse {
                line,
                msg: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let variant = make_variant(fields[0].parse().map_err(|e| Error::KatParse {
            line,
            msg: format!("{e}"),
        })?);
        let key = Key80::from_hex(fields[1]).map_err(|e| Error::KatParse {
            line,
            msg: format!("key: {e}"),
        })?;
        let plaintext = hex::parse_block(fields[2], variant.block_bits).map_err(|e| {
            Error::KatParse {
                line,
                msg: format!("plaintext: {e}"),
            }
        })?;
        let ciphertext = hex::parse_block(fields[3], variant.block_bits).map_err(|e| {
            Error::KatParse {
                line,
                msg: format!("ciphertext: {e}"),
            }
        })?;
        records.push(KatRecord {
            line,
            variant,
            key,
            plaintext,
            ciphertext,
        });
    }
    Ok(records)
}

#[derive(Debug, Clone)]
pub struct KatFailure {
    pub line: usize,
    pub variant: String,
    pub direction: &'static str,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Default)]
pub struct KatSummary {
    pub records: usize,
    pub failures: Vec<KatFailure>,
}

impl KatSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every record through both encrypt and decrypt.
pub fn run(records: &[KatRecord]) -> KatSummary {
    let mut summary = KatSummary {
        records: records.len(),
        ..Default::default()
    };
    for r in records {
        let bits = r.variant.block_bits;
        match cipher::encrypt(&r.variant, &r.key, r.plaintext) {
            Ok(c) if c == r.ciphertext => {}
            Ok(c) => summary.failures.push(KatFailure {
                line: r.line,
                variant: r.variant.name.to_string(),
                direction: "encrypt",
                expected: hex::format_block(r.ciphertext, bits),
                got: hex::format_block(c, bits),
            }),
            Err(e) => summary.failures.push(KatFailure {
                line: r.line,
                variant: r.variant.name.to_string(),
                direction: "encrypt",
                expected: hex::format_block(r.ciphertext, bits),
                got: format!("error: {e}"),
            }),
        }
        match cipher::decrypt(&r.variant, &r.key, r.ciphertext) {
            Ok(p) if p == r.plaintext => {}
            Ok(p) => summary.failures.push(KatFailure {
                line: r.line,
                variant: r.variant.name.to_string(),
                direction: "decrypt",
                expected: hex::format_block(r.plaintext, bits),
                got: hex::format_block(p, bits),
            }),
            Err(e) => summary.failures.push(KatFailure {
                line: r.line,
                variant: r.variant.name.to_string(),
                direction: "decrypt",
                expected: hex::format_block(r.plaintext, bits),
                got: format!("error: {e}"),
            }),
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_vectors_pass() {
        let records = parse(BUNDLED_KAT).unwrap();
        assert_eq!(records.len(), 36);
        let summary = run(&records);
        assert!(summary.passed(), "failures: {:?}", summary.failures);
    }

    #[test]
    fn empty_file_passes_with_zero_records() {
        let summary = run(&parse("# only comments\n\n").unwrap());
        assert_eq!(summary.records, 0);
        assert!(summary.passed());
    }

    #[test]
    fn corrupted_ciphertext_names_the_line() {
        let data = "katan32 ffffffffffffffffffff 00000000 7e1ff944\n";
        let summary = run(&parse(data).unwrap());
        assert!(!summary.passed());
        assert_eq!(summary.failures[0].line, 1);
        assert_eq!(summary.failures[0].direction, "encrypt");
    }

    #[test]
    fn parse_errors_report_line_numbers() {
        match parse("katan32 ffffffffffffffffffff 00000000\n") {
            Err(Error::KatParse { line: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match parse("# ok\nkatan96 ffffffffffffffffffff 00000000 00000000\n") {
            Err(Error::KatParse { line: 2, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }
}
