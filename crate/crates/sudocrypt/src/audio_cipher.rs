//! Audio encryption: Sudoku-row block shuffling, or Sudoku XOR substitution
//! with a global block transpose.
//!
//! Both modes treat interleaved stereo as one flat sample stream. Shuffle
//! mode leaves a partial trailing block unencrypted (that leakage comes with
//! the algorithm and is documented, not hidden); XOR mode zero-pads to a
//! whole number of blocks instead.

use crate::error::{Error, Result};
use crate::keymat::{KeyMaterial, MediaShape};
use crate::media::AudioClip;
use crate::prng::Permutation;
use crate::sudoku::SudokuGrid;

/// How a sample stream divides into cipher blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    pub block_size: usize,
    pub num_full_blocks: usize,
    pub tail_length: usize,
}

impl BlockLayout {
    pub fn for_samples(total_samples: usize, block_size: usize) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::InvalidArgument("block size must be positive".into()));
        }
        Ok(Self {
            block_size,
            num_full_blocks: total_samples / block_size,
            tail_length: total_samples % block_size,
        })
    }

    pub fn total_samples(&self) -> usize {
        self.num_full_blocks * self.block_size + self.tail_length
    }

    /// Stream length after zero-padding the tail to a whole block.
    pub fn padded_length(&self) -> usize {
        if self.tail_length == 0 {
            self.num_full_blocks * self.block_size
        } else {
            (self.num_full_blocks + 1) * self.block_size
        }
    }
}

/// Reorders each full block of `perm.len()` samples by the permutation;
/// the trailing partial block is copied unchanged.
pub fn shuffle_encrypt(clip: &AudioClip, perm: &Permutation) -> AudioClip {
    apply_blockwise(clip, perm)
}

/// Exact inverse of [`shuffle_encrypt`]: the inverse permutation applied
/// blockwise.
pub fn shuffle_decrypt(clip: &AudioClip, perm: &Permutation) -> AudioClip {
    apply_blockwise(clip, &perm.invert())
}

fn apply_blockwise(clip: &AudioClip, perm: &Permutation) -> AudioClip {
    let n = perm.len();
    let src = clip.samples();
    let mut out = Vec::with_capacity(src.len());
    let full = src.len() / n;
    for b in 0..full {
        let block = &src[b * n..(b + 1) * n];
        out.extend(perm.map().iter().map(|&j| block[j]));
    }
    out.extend_from_slice(&src[full * n..]);
    AudioClip::new(clip.sample_rate(), clip.channels(), out).expect("length unchanged")
}

/// XOR substitution: zero-pad to whole blocks, XOR each sample's 16-bit
/// pattern with the grid value at `(row mod n, col mod n)` of the
/// `rows x n` block matrix, then transpose that matrix and flatten.
///
/// The ciphertext is a flat (single-channel) stream: padding is
/// sample-granular, so the padded length need not divide by the original
/// channel count.
pub fn xor_encrypt(clip: &AudioClip, grid: &SudokuGrid) -> (AudioClip, BlockLayout) {
    let n = grid.n();
    let layout = BlockLayout::for_samples(clip.len(), n).expect("n >= 4");
    let padded_len = layout.padded_length();
    let mut padded = clip.samples().to_vec();
    padded.resize(padded_len, 0);

    let rows = padded_len / n;
    for (idx, v) in padded.iter_mut().enumerate() {
        *v = xor_mask(*v, grid, idx / n, idx % n);
    }
    // transpose rows x n -> n x rows
    let mut out = vec![0i16; padded_len];
    for i in 0..rows {
        for j in 0..n {
            out[j * rows + i] = padded[i * n + j];
        }
    }
    let cipher = AudioClip::new(clip.sample_rate(), 1, out).expect("flat stream");
    (cipher, layout)
}

/// Exact inverse of [`xor_encrypt`]: transpose back, XOR the same masks,
/// truncate the padding recorded in `layout`.
pub fn xor_decrypt(clip: &AudioClip, grid: &SudokuGrid, layout: &BlockLayout) -> Result<AudioClip> {
    let n = grid.n();
    if layout.block_size != n {
        return Err(Error::KeyMismatch(format!(
            "layout block size {} does not match grid size {n}",
            layout.block_size
        )));
    }
    if clip.len() != layout.padded_length() {
        return Err(Error::KeyMismatch(format!(
            "ciphertext holds {} samples, layout expects {}",
            clip.len(),
            layout.padded_length()
        )));
    }
    let rows = clip.len() / n;
    let src = clip.samples();
    let mut restored = vec![0i16; clip.len()];
    for i in 0..rows {
        for j in 0..n {
            restored[i * n + j] = xor_mask(src[j * rows + i], grid, i, j);
        }
    }
    restored.truncate(layout.total_samples());
    AudioClip::new(clip.sample_rate(), 1, restored)
}

/// XOR on the unsigned 16-bit reinterpretation of a signed sample;
/// self-inverse at a fixed position.
fn xor_mask(sample: i16, grid: &SudokuGrid, row: usize, col: usize) -> i16 {
    let n = grid.n();
    (sample as u16 ^ grid.get(row % n, col % n) as u16) as i16
}

/// The two audio modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AudioMode {
    Shuffle,
    Xor,
}

/// Encrypts a clip under the key, recording the plaintext shape (length,
/// channels, rate) into it. Shuffle mode keeps the clip's channel count;
/// XOR mode emits a flat stream of padded length.
pub fn encrypt_audio(clip: &AudioClip, key: &mut KeyMaterial, mode: AudioMode) -> Result<AudioClip> {
    if clip.is_empty() {
        return Err(Error::InvalidArgument("cannot encrypt an empty clip".into()));
    }
    let shape = match mode {
        AudioMode::Shuffle => MediaShape::AudioShuffle {
            samples: clip.len(),
            channels: clip.channels(),
            sample_rate: clip.sample_rate(),
        },
        AudioMode::Xor => MediaShape::AudioXor {
            samples: clip.len(),
            channels: clip.channels(),
            sample_rate: clip.sample_rate(),
        },
    };
    match &key.shape {
        None => key.shape = Some(shape),
        Some(existing) if *existing == shape => {}
        Some(existing) => {
            return Err(Error::KeyMismatch(format!(
                "key already bound to {existing:?}, input is {shape:?}"
            )))
        }
    }
    match mode {
        AudioMode::Shuffle => {
            let perm = key.grid.row_permutation(key.perm_row)?;
            Ok(shuffle_encrypt(clip, &perm))
        }
        AudioMode::Xor => Ok(xor_encrypt(clip, &key.grid).0),
    }
}

/// Decrypts a clip; the mode, sample count, channel count and rate all come
/// from the key's recorded shape.
pub fn decrypt_audio(clip: &AudioClip, key: &KeyMaterial) -> Result<AudioClip> {
    match key.shape {
        Some(MediaShape::AudioShuffle {
            samples,
            channels,
            sample_rate,
        }) => {
            if clip.len() != samples || clip.sample_rate() != sample_rate {
                return Err(Error::KeyMismatch(format!(
                    "ciphertext is {} samples at {} Hz, key expects {samples} at {sample_rate}",
                    clip.len(),
                    clip.sample_rate()
                )));
            }
            let perm = key.grid.row_permutation(key.perm_row)?;
            shuffle_decrypt(clip, &perm).with_channels(channels)
        }
        Some(MediaShape::AudioXor {
            samples,
            channels,
            sample_rate,
        }) => {
            if clip.sample_rate() != sample_rate {
                return Err(Error::KeyMismatch(format!(
                    "ciphertext rate {} Hz, key expects {sample_rate} Hz",
                    clip.sample_rate()
                )));
            }
            let layout = BlockLayout::for_samples(samples, key.grid.n())?;
            xor_decrypt(clip, &key.grid, &layout)?.with_channels(channels)
        }
        _ => Err(Error::KeyMismatch(
            "key carries no audio shape; encrypt must record it first".into(),
        )),
    }
}
