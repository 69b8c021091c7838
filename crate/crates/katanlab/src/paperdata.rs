//! Embedded result-table data: the single source of truth for every
//! published number used by the timing models, audits, and reports.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const TABLE_DATA: &str = include_str!("../data/paper_tables.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl TableId {
    pub fn as_str(self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::T5 => "T5",
        }
    }

    fn parse(s: &str) -> Option<TableId> {
        match s {
            "T1" => Some(TableId::T1),
            "T2" => Some(TableId::T2),
            "T3" => Some(TableId::T3),
            "T4" => Some(TableId::T4),
            "T5" => Some(TableId::T5),
            _ => None,
        }
    }
}

/// One table row as printed: algorithm name plus its raw columns.
#[derive(Debug, Clone)]
pub struct PaperRecord {
    pub table: TableId,
    pub algorithm: String,
    pub columns: BTreeMap<String, f64>,
}

impl PaperRecord {
    pub fn get(&self, column: &str) -> Option<f64> {
        self.columns.get(column).copied()
    }

    /// Block size in bits, from the algorithm-name suffix.
    pub fn block_bits(&self) -> u32 {
        self.algorithm
            .rsplit('-')
            .next()
            .and_then(|s| s.parse().ok())
            .expect("table algorithm names end in the block size")
    }
}

#[derive(Debug)]
pub struct PaperTables {
    records: Vec<PaperRecord>,
}

impl PaperTables {
    pub fn records(&self) -> &[PaperRecord] {
        &self.records
    }

    pub fn table(&self, id: TableId) -> impl Iterator<Item = &PaperRecord> {
        self.records.iter().filter(move |r| r.table == id)
    }

    pub fn row(&self, id: TableId, algorithm: &str) -> Option<&PaperRecord> {
        self.records
            .iter()
            .find(|r| r.table == id && r.algorithm == algorithm)
    }

    pub fn cell(&self, id: TableId, algorithm: &str, column: &str) -> Option<f64> {
        self.row(id, algorithm).and_then(|r| r.get(column))
    }
}

fn parse(data: &str) -> Result<PaperTables> {
    let mut declared_sha: Option<String> = None;
    let mut payload = String::new();
    let mut records: Vec<PaperRecord> = Vec::new();

    for (lineno, line) in data.lines().enumerate() {
        let line = line.trim_end();
        if let Some(rest) = line.strip_prefix("# sha256:") {
            declared_sha = Some(rest.trim().to_string());
            continue;
        }
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        payload.push_str(line);
        payload.push('\n');

        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::CorruptTableData(format!(
                "line {}: expected 4 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let table = TableId::parse(fields[0]).ok_or_else(|| {
            Error::CorruptTableData(format!("line {}: bad table id {}", lineno + 1, fields[0]))
        })?;
        let value: f64 = fields[3].parse().map_err(|_| {
            Error::CorruptTableData(format!("line {}: bad value {}", lineno + 1, fields[3]))
        })?;
        let algorithm = fields[1].to_string();
        let column = fields[2].to_string();

        match records
            .iter_mut()
            .find(|r| r.table == table && r.algorithm == algorithm)
        {
            Some(rec) => {
                if rec.columns.insert(column.clone(), value).is_some() {
                    return Err(Error::CorruptTableData(format!(
                        "duplicate cell {},{algorithm},{column}",
                        table.as_str()
                    )));
                }
            }
            None => {
                let mut columns = BTreeMap::new();
                columns.insert(column, value);
                records.push(PaperRecord {
                    table,
                    algorithm,
                    columns,
                });
            }
        }
    }

    let declared = declared_sha
        .ok_or_else(|| Error::CorruptTableData("missing sha256 header".to_string()))?;
    let actual = format!("{:x}", Sha256::digest(payload.as_bytes()));
    if declared != actual {
        return Err(Error::CorruptTableData(format!(
            "checksum mismatch: header {declared}, payload {actual}"
        )));
    }
    Ok(PaperTables { records })
}

/// The embedded tables, parsed and checksum-verified once.
pub fn tables() -> &'static PaperTables {
    static TABLES: OnceLock<PaperTables> = OnceLock::new();
    TABLES.get_or_init(|| parse(TABLE_DATA).expect("embedded table data is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_and_verifies_checksum() {
        let t = tables();
        assert_eq!(t.table(TableId::T1).count(), 6);
        assert_eq!(t.table(TableId::T2).count(), 3);
        assert_eq!(t.table(TableId::T5).count(), 6);
    }

    #[test]
    fn spot_values() {
        let t = tables();
        assert_eq!(t.cell(TableId::T1, "KATAN-32", "fmax_mhz"), Some(23.970));
        assert_eq!(t.cell(TableId::T1, "KATAN-32", "aluts"), Some(2145.0));
        assert_eq!(t.cell(TableId::T2, "KATAN-64", "throughput_mbps"), Some(426.667));
        assert_eq!(t.cell(TableId::T5, "KATAN-32", "org1_mbps"), Some(0.0125));
        // "-" cells are absent
        assert_eq!(t.cell(TableId::T4, "KTANTAN-32", "speedup2"), None);
    }

    #[test]
    fn tampered_payload_fails_checksum() {
        let tampered = TABLE_DATA.replace("21.769", "21.770");
        assert!(parse(&tampered).is_err());
    }

    #[test]
    fn block_bits_from_name() {
        let t = tables();
        let row = t.row(TableId::T1, "KTANTAN-48").unwrap();
        assert_eq!(row.block_bits(), 48);
    }
}
