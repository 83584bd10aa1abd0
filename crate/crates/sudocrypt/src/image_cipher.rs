//! Four-stage image cipher: threshold shift, pad + row shuffle, per-tile
//! Sudoku block transform, quarter-turn rotation. Decryption applies the
//! exact inverses in reverse order and crops the padding away at the end.
//!
//! Every stage is a bijection on padded images, so the multiset of sample
//! values of a ciphertext is the plaintext multiset cyclically shifted by
//! `threshold * iterations` (mod 256) whenever no padding was added.

use crate::error::{Error, Result};
use crate::keymat::{KeyMaterial, MediaShape};
use crate::media::Image;
use crate::prng::{mix_seed, Permutation};
use std::time::{Duration, Instant};

/// Adds `r` to every sample, mod 256. Bijective for any `r`; with `r != 0`
/// every sample changes, which is what makes the stage-level NPCR exact.
pub fn threshold_encrypt(img: &Image, r: u8) -> Image {
    shift_samples(img, r)
}

/// Subtracts `r` from every sample, mod 256. Exact inverse of
/// [`threshold_encrypt`].
pub fn threshold_decrypt(img: &Image, r: u8) -> Image {
    shift_samples(img, r.wrapping_neg())
}

fn shift_samples(img: &Image, delta: u8) -> Image {
    let samples = img.samples().iter().map(|s| s.wrapping_add(delta)).collect();
    Image::new(img.width(), img.height(), img.channels(), samples).expect("shape unchanged")
}

/// Pads right and bottom with zero samples up to the next multiples of `n`.
/// No-op when both dimensions already are multiples.
pub fn pad_image(img: &Image, n: usize) -> Image {
    let pw = next_multiple(img.width(), n);
    let ph = next_multiple(img.height(), n);
    if (pw, ph) == (img.width(), img.height()) {
        return img.clone();
    }
    let ch = img.channels();
    let mut samples = vec![0u8; pw * ph * ch];
    let src_stride = img.width() * ch;
    let dst_stride = pw * ch;
    for y in 0..img.height() {
        samples[y * dst_stride..y * dst_stride + src_stride].copy_from_slice(img.row(y));
    }
    Image::new(pw, ph, ch, samples).expect("padded shape is valid")
}

fn next_multiple(d: usize, n: usize) -> usize {
    if d % n == 0 {
        d
    } else {
        (d / n + 1) * n
    }
}

/// Crops to the top-left `width` x `height` region (the unpad step).
pub fn crop_image(img: &Image, width: usize, height: usize) -> Result<Image> {
    if width > img.width() || height > img.height() {
        return Err(Error::Dimension(format!(
            "cannot crop {}x{} to {width}x{height}",
            img.width(),
            img.height()
        )));
    }
    let ch = img.channels();
    let mut samples = Vec::with_capacity(width * height * ch);
    for y in 0..height {
        samples.extend_from_slice(&img.row(y)[..width * ch]);
    }
    Image::new(width, height, ch, samples)
}

/// Reorders whole rows by the permutation derived from `seed`:
/// output row `i` is input row `perm[i]`.
pub fn row_shuffle(img: &Image, seed: u64) -> Image {
    apply_row_permutation(img, &Permutation::derive(seed, img.height()).expect("height >= 1"))
}

/// Exact inverse of [`row_shuffle`] for the same seed.
pub fn row_unshuffle(img: &Image, seed: u64) -> Image {
    let perm = Permutation::derive(seed, img.height()).expect("height >= 1");
    apply_row_permutation(img, &perm.invert())
}

fn apply_row_permutation(img: &Image, perm: &Permutation) -> Image {
    let mut samples = Vec::with_capacity(img.samples().len());
    for &src in perm.map() {
        samples.extend_from_slice(img.row(src));
    }
    Image::new(img.width(), img.height(), img.channels(), samples).expect("shape unchanged")
}

/// Per-tile transform: within every `n` x `n` tile, permute the columns of
/// each row by `perm`, then permute the rows by `perm`. The two moves
/// compose to `out[i][j] = in[perm[i]][perm[j]]` per tile; whole pixels move
/// together.
pub fn block_transform(img: &Image, perm: &Permutation) -> Result<Image> {
    tile_gather(img, perm.map())
}

/// Exact inverse of [`block_transform`]: the inverse permutation applied in
/// reverse stage order, i.e. `out[i][j] = in[inv[i]][inv[j]]` per tile.
pub fn block_untransform(img: &Image, perm: &Permutation) -> Result<Image> {
    tile_gather(img, perm.invert().map())
}

fn tile_gather(img: &Image, map: &[usize]) -> Result<Image> {
    let n = map.len();
    if n == 0 || img.width() % n != 0 || img.height() % n != 0 {
        return Err(Error::InvalidArgument(format!(
            "image {}x{} is not tiled by block size {n}",
            img.width(),
            img.height()
        )));
    }
    let ch = img.channels();
    let stride = img.width() * ch;
    let mut out = vec![0u8; img.samples().len()];
    let src = img.samples();
    for ty in (0..img.height()).step_by(n) {
        for tx in (0..img.width()).step_by(n) {
            for i in 0..n {
                let dst_row = (ty + i) * stride;
                let src_row = (ty + map[i]) * stride;
                for j in 0..n {
                    let dst = dst_row + (tx + j) * ch;
                    let from = src_row + (tx + map[j]) * ch;
                    out[dst..dst + ch].copy_from_slice(&src[from..from + ch]);
                }
            }
        }
    }
    Image::new(img.width(), img.height(), ch, out)
}

/// Rotates 90 degrees clockwise: source pixel `(x, y)` lands at
/// `(H-1-y, x)`; a `W` x `H` image becomes `H` x `W`.
pub fn rotate_cw(img: &Image) -> Image {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let mut out = vec![0u8; img.samples().len()];
    let src = img.samples();
    for y in 0..h {
        for x in 0..w {
            let from = (y * w + x) * ch;
            let to = (x * h + (h - 1 - y)) * ch;
            out[to..to + ch].copy_from_slice(&src[from..from + ch]);
        }
    }
    Image::new(h, w, ch, out).expect("rotated shape is valid")
}

/// Rotates 90 degrees counter-clockwise; exact inverse of [`rotate_cw`].
pub fn rotate_ccw(img: &Image) -> Image {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let mut out = vec![0u8; img.samples().len()];
    let src = img.samples();
    for y in 0..h {
        for x in 0..w {
            let from = (y * w + x) * ch;
            let to = ((w - 1 - x) * h + y) * ch;
            out[to..to + ch].copy_from_slice(&src[from..from + ch]);
        }
    }
    Image::new(h, w, ch, out).expect("rotated shape is valid")
}

/// The seed for round `t`'s row shuffle, derived from the key's shuffle
/// seed. Part of the cipher format: decrypt must derive the same values.
fn round_seed(shuffle_seed: u64, round: u32) -> u64 {
    mix_seed(shuffle_seed.wrapping_add(round as u64))
}

/// Pipeline stages in fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Threshold,
    PadShuffle,
    BlockTransform,
    Rotate,
}

impl Stage {
    pub const ALL: [Stage; 4] = [
        Stage::Threshold,
        Stage::PadShuffle,
        Stage::BlockTransform,
        Stage::Rotate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Threshold => "threshold",
            Stage::PadShuffle => "pad_shuffle",
            Stage::BlockTransform => "block_transform",
            Stage::Rotate => "rotate",
        }
    }
}

/// One stage execution: duration, plus the stage output when retained.
#[derive(Debug, Clone)]
pub struct StageRecord {
    pub stage: Stage,
    pub duration: Duration,
    pub output: Option<Image>,
}

/// Wall-clock trace of an encryption run, one record per stage per round.
#[derive(Debug, Clone, Default)]
pub struct StageTrace {
    pub records: Vec<StageRecord>,
}

impl StageTrace {
    /// Total duration per stage across all rounds, in fixed stage order.
    pub fn totals(&self) -> [(Stage, Duration); 4] {
        let mut totals = Stage::ALL.map(|s| (s, Duration::ZERO));
        for rec in &self.records {
            let slot = totals
                .iter_mut()
                .find(|(s, _)| *s == rec.stage)
                .expect("stage is one of the four");
            slot.1 += rec.duration;
        }
        totals
    }
}

/// Runs the full encryption pipeline. Records the plaintext shape into the
/// key (the caller persists the updated key file); errors if the key
/// already carries a different shape.
pub fn encrypt_image(img: &Image, key: &mut KeyMaterial) -> Result<Image> {
    record_image_shape(img, key)?;
    Ok(run_encrypt_rounds_traced(img, key, false)?.0)
}

/// [`encrypt_image`] with a per-stage wall-clock trace; `retain_outputs`
/// additionally keeps each stage's output image in the trace.
pub fn encrypt_image_traced(
    img: &Image,
    key: &mut KeyMaterial,
    retain_outputs: bool,
) -> Result<(Image, StageTrace)> {
    record_image_shape(img, key)?;
    run_encrypt_rounds_traced(img, key, retain_outputs)
}

/// Reverses the pipeline and crops back to the original dimensions held in
/// the key.
pub fn decrypt_image(img: &Image, key: &KeyMaterial) -> Result<Image> {
    let Some(MediaShape::Image {
        width,
        height,
        channels,
    }) = key.shape
    else {
        return Err(Error::KeyMismatch(
            "key carries no image shape; encrypt must record it first".into(),
        ));
    };
    run_decrypt_rounds(img, key, width, height, channels)
}

/// The encryption rounds without shape bookkeeping; the per-frame worker
/// for video.
pub(crate) fn run_encrypt_rounds(img: &Image, key: &KeyMaterial) -> Result<Image> {
    Ok(run_encrypt_rounds_traced(img, key, false)?.0)
}

fn run_encrypt_rounds_traced(
    img: &Image,
    key: &KeyMaterial,
    retain_outputs: bool,
) -> Result<(Image, StageTrace)> {
    let perm = key.grid.row_permutation(key.perm_row)?;
    let n = key.grid.n();

    let mut trace = StageTrace::default();
    let mut record = |stage: Stage, started: Instant, out: &Image| {
        trace.records.push(StageRecord {
            stage,
            duration: started.elapsed(),
            output: retain_outputs.then(|| out.clone()),
        });
    };

    let mut current = img.clone();
    for round in 0..key.iterations {
        let t0 = Instant::now();
        current = threshold_encrypt(&current, key.threshold);
        record(Stage::Threshold, t0, &current);

        let t0 = Instant::now();
        if round == 0 {
            current = pad_image(&current, n);
        }
        current = row_shuffle(&current, round_seed(key.shuffle_seed, round));
        record(Stage::PadShuffle, t0, &current);

        let t0 = Instant::now();
        current = block_transform(&current, &perm)?;
        record(Stage::BlockTransform, t0, &current);

        let t0 = Instant::now();
        current = rotate_cw(&current);
        record(Stage::Rotate, t0, &current);
    }
    Ok((current, trace))
}

/// The decryption rounds plus dimension checks against the stated
/// plaintext shape; the per-frame worker for video.
pub(crate) fn run_decrypt_rounds(
    img: &Image,
    key: &KeyMaterial,
    width: usize,
    height: usize,
    channels: usize,
) -> Result<Image> {
    let n = key.grid.n();
    let perm = key.grid.row_permutation(key.perm_row)?;

    let (pw, ph) = (next_multiple(width, n), next_multiple(height, n));
    let expected = if key.iterations % 2 == 1 {
        (ph, pw)
    } else {
        (pw, ph)
    };
    if (img.width(), img.height()) != expected || img.channels() != channels {
        return Err(Error::KeyMismatch(format!(
            "ciphertext is {}x{}x{}, key expects {}x{}x{channels}",
            img.width(),
            img.height(),
            img.channels(),
            expected.0,
            expected.1,
        )));
    }

    let mut current = img.clone();
    for round in (0..key.iterations).rev() {
        current = rotate_ccw(&current);
        current = block_untransform(&current, &perm)?;
        current = row_unshuffle(&current, round_seed(key.shuffle_seed, round));
        current = threshold_decrypt(&current, key.threshold);
    }
    crop_image(&current, width, height)
}

fn record_image_shape(img: &Image, key: &mut KeyMaterial) -> Result<()> {
    let shape = MediaShape::Image {
        width: img.width(),
        height: img.height(),
        channels: img.channels(),
    };
    match &key.shape {
        None => {
            key.shape = Some(shape);
            Ok(())
        }
        Some(existing) if *existing == shape => Ok(()),
        Some(existing) => Err(Error::KeyMismatch(format!(
            "key already bound to {existing:?}, input is {shape:?}"
        ))),
    }
}
