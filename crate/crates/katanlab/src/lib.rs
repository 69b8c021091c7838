//! A performance laboratory for the KATAN/KTANTAN family of
//! lightweight block ciphers: a bit-exact reference implementation of
//! all six variants, a 64-lane bitsliced engine, functional and
//! cycle-accounting models of behavioural and 3-stage pipelined
//! hardware cores, and an audit of the published result tables.

pub mod bench;
pub mod bitslice;
pub mod cipher;
pub mod engine;
pub mod error;
pub mod hex;
pub mod kat;
pub mod metrics;
pub mod paperdata;
pub mod pipeline;
pub mod variant;

pub use cipher::{decrypt, encrypt, ir_schedule, Key80, RegisterState, RoundKeys};
pub use error::{Error, Result};
pub use variant::{make_variant, parse_variant, CipherVariant, VariantName, ROUNDS};
