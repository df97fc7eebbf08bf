//! Next-bit predictability of pseudo-random 0/1 sequences.
//!
//! The crate builds binary sequences from decimal digits of π, e and √2 or
//! from MT19937, trains a small feed-forward network to predict each bit from
//! the six before it, and compares the result with chance-level statistics
//! and with the ideal per-prefix majority predictor.
//!
//! - [`constdigits`] for digit generation, with an independent oracle, and caches
//! - [`mtprng`] for MT19937
//! - [`bitseq`] for binarization, window datasets, pattern census
//! - [`mlp`] for the network and its momentum back-propagation trainer
//! - [`stats`] for σ levels, subgroup confidence limits, normality test
//! - [`harness`] for the three experiments, configuration and reports

pub mod bitseq;
pub mod constdigits;
pub mod error;
pub mod harness;
pub mod mlp;
pub mod mtprng;
pub mod stats;

pub use error::{Error, Result};
