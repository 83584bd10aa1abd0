//! Sudoku-keyed scrambling cipher for images, audio and video.
//!
//! A solved Sudoku grid, derived deterministically from a timestamp, drives
//! a staged transposition cipher: an additive threshold shift, a seeded row
//! shuffle, a per-tile block permutation taken from a grid row, and a
//! quarter-turn rotation. Audio can instead be block-shuffled or
//! XOR-substituted against the grid. Every stage is bijective and every
//! shuffle is reproducible from the recorded key file, so decryption is
//! lossless and portable.
//!
//! The [`analysis`] module provides the usual evaluation metrics (NPCR,
//! UACI, Shannon entropy, SNR/PSNR/MSE, ZCR, RMS) for judging how thoroughly
//! a ciphertext diverges from its plaintext.
//!
//! This is a scrambler built around a puzzle, useful for obfuscation and
//! tamper-evident keying; it is not a substitute for vetted cryptography.

pub mod analysis;
pub mod audio_cipher;
pub mod error;
pub mod image_cipher;
pub mod keymat;
pub mod media;
pub mod prng;
pub mod sudoku;
pub mod video_cipher;

pub use error::{Error, Result};
