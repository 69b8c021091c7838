//! Execution-engine registry: each encryption strategy sits behind a
//! common trait and is selected by name at runtime.

use crate::bitslice;
use crate::cipher::{self, Key80};
use crate::error::{Error, Result};
use crate::variant::CipherVariant;

pub trait Engine: Sync {
    fn name(&self) -> &'static str;

    /// Encrypts `blocks` under one shared key into `out` (same length).
    fn encrypt_blocks(
        &self,
        variant: &CipherVariant,
        key: &Key80,
        blocks: &[u64],
        out: &mut [u64],
    ) -> Result<()>;
}

/// Scalar reference engine; the key schedule is computed once and
/// amortized over all blocks.
struct ReferenceEngine;

impl Engine for ReferenceEngine {
    fn name(&self) -> &'static str {
        "reference"
    }

    fn encrypt_blocks(
        &self,
        variant: &CipherVariant,
        key: &Key80,
        blocks: &[u64],
        out: &mut [u64],
    ) -> Result<()> {
        let keys = cipher::round_keys(variant, key);
        for (p, o) in blocks.iter().zip(out.iter_mut()) {
            *o = cipher::encrypt_with_keys(variant, &keys, *p)?;
        }
        Ok(())
    }
}

/// Scalar engine that recomputes the key schedule for every block,
/// exposing the cost the amortized engine hides.
struct ReferenceRekeyEngine;

impl Engine for ReferenceRekeyEngine {
    fn name(&self) -> &'static str {
        "reference-rekey"
    }

    fn encrypt_blocks(
        &self,
        variant: &CipherVariant,
        key: &Key80,
        blocks: &[u64],
        out: &mut [u64],
    ) -> Result<()> {
        for (p, o) in blocks.iter().zip(out.iter_mut()) {
            *o = cipher::encrypt(variant, key, *p)?;
        }
        Ok(())
    }
}

/// 64-lane bitsliced engine.
struct BitslicedEngine;

impl Engine for BitslicedEngine {
    fn name(&self) -> &'static str {
        "bitsliced"
    }

    fn encrypt_blocks(
        &self,
        variant: &CipherVariant,
        key: &Key80,
        blocks: &[u64],
        out: &mut [u64],
    ) -> Result<()> {
        bitslice::encrypt_blocks_shared(variant, key, blocks, out)
    }
}

static ENGINES: &[&dyn Engine] = &[&ReferenceEngine, &ReferenceRekeyEngine, &BitslicedEngine];

pub fn engines() -> &'static [&'static dyn Engine] {
    ENGINES
}

pub fn engine_names() -> Vec<&'static str> {
    ENGINES.iter().map(|e| e.name()).collect()
}

pub fn engine(name: &str) -> Result<&'static dyn Engine> {
    ENGINES
        .iter()
        .find(|e| e.name() == name)
        .copied()
        .ok_or_else(|| Error::UnknownEngine(name.to_string()))
}
