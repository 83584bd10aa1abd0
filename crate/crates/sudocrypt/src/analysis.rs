//! Evaluation metrics: NPCR, UACI, Shannon entropy and channel means for
//! images; MSE, SNR, PSNR, zero-crossing rate and RMS energy for audio.
//!
//! All operations are pure. Identical audio signals report an infinite SNR
//! sentinel rather than an error.

use crate::error::{Error, Result};
use crate::media::{AudioClip, Image};

/// Image comparison plus per-image statistics, one row of the report table.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageMetricsReport {
    pub npcr: f64,
    pub uaci: f64,
    pub entropy_original: f64,
    pub entropy_encrypted: f64,
    pub channel_means_original: Vec<f64>,
    pub channel_means_encrypted: Vec<f64>,
}

/// Audio comparison plus per-clip features.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioMetricsReport {
    pub snr_db: f64,
    pub psnr_db: f64,
    pub mse: f64,
    pub zcr_original: f64,
    pub zcr_encrypted: f64,
    pub rms_original: f64,
    pub rms_encrypted: f64,
}

fn check_same_shape(a: &Image, b: &Image) -> Result<()> {
    if (a.width(), a.height(), a.channels()) != (b.width(), b.height(), b.channels()) {
        return Err(Error::Dimension(format!(
            "images differ in shape: {}x{}x{} vs {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    Ok(())
}

/// Number of Pixels Change Rate, in percent. A pixel counts as changed if
/// it differs in any channel; the denominator is the pixel count.
pub fn npcr(a: &Image, b: &Image) -> Result<f64> {
    check_same_shape(a, b)?;
    let ch = a.channels();
    let changed = a
        .samples()
        .chunks_exact(ch)
        .zip(b.samples().chunks_exact(ch))
        .filter(|(pa, pb)| pa != pb)
        .count();
    Ok(changed as f64 / (a.width() * a.height()) as f64 * 100.0)
}

/// Unified Average Changing Intensity, in percent: mean absolute sample
/// difference normalized by 255.
pub fn uaci(a: &Image, b: &Image) -> Result<f64> {
    check_same_shape(a, b)?;
    let total: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&sa, &sb)| (sa as i32 - sb as i32).unsigned_abs() as u64)
        .sum();
    Ok(total as f64 / (255.0 * a.samples().len() as f64) * 100.0)
}

/// Shannon entropy in bits over the 256-bin histogram of all samples,
/// channels pooled. 8.0 is the maximum for 8-bit data.
pub fn shannon_entropy(img: &Image) -> f64 {
    let mut hist = [0u64; 256];
    for &s in img.samples() {
        hist[s as usize] += 1;
    }
    let total = img.samples().len() as f64;
    hist.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Arithmetic mean of each channel's samples.
pub fn channel_means(img: &Image) -> Vec<f64> {
    let ch = img.channels();
    let mut sums = vec![0u64; ch];
    for pixel in img.samples().chunks_exact(ch) {
        for (c, &s) in pixel.iter().enumerate() {
            sums[c] += s as u64;
        }
    }
    let count = (img.width() * img.height()) as f64;
    sums.into_iter().map(|s| s as f64 / count).collect()
}

pub fn image_report(original: &Image, encrypted: &Image) -> Result<ImageMetricsReport> {
    Ok(ImageMetricsReport {
        npcr: npcr(original, encrypted)?,
        uaci: uaci(original, encrypted)?,
        entropy_original: shannon_entropy(original),
        entropy_encrypted: shannon_entropy(encrypted),
        channel_means_original: channel_means(original),
        channel_means_encrypted: channel_means(encrypted),
    })
}

fn check_same_length(a: &AudioClip, b: &AudioClip) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "clips differ in length: {} vs {} samples",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

fn normalized(clip: &AudioClip) -> impl Iterator<Item = f64> + '_ {
    clip.samples().iter().map(|&s| s as f64 / 32768.0)
}

/// Mean squared error over samples normalized to [-1, 1).
pub fn mse(a: &AudioClip, b: &AudioClip) -> Result<f64> {
    check_same_length(a, b)?;
    if a.is_empty() {
        return Err(Error::Dimension("clips are empty".into()));
    }
    let sum: f64 = normalized(a)
        .zip(normalized(b))
        .map(|(xa, xb)| (xa - xb) * (xa - xb))
        .sum();
    Ok(sum / a.len() as f64)
}

/// Signal-to-noise ratio in dB: `10 log10(sum(x_a^2) / sum((x_a - x_b)^2))`.
/// Identical signals report `+inf`.
pub fn snr(a: &AudioClip, b: &AudioClip) -> Result<f64> {
    check_same_length(a, b)?;
    if a.is_empty() {
        return Err(Error::Dimension("clips are empty".into()));
    }
    let signal: f64 = normalized(a).map(|x| x * x).sum();
    let noise: f64 = normalized(a)
        .zip(normalized(b))
        .map(|(xa, xb)| (xa - xb) * (xa - xb))
        .sum();
    if noise == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (signal / noise).log10())
}

/// Peak signal-to-noise ratio in dB: `10 log10(max(x_a^2) / MSE)`.
/// Identical signals report `+inf`.
pub fn psnr(a: &AudioClip, b: &AudioClip) -> Result<f64> {
    let err = mse(a, b)?;
    let peak = normalized(a).map(|x| x * x).fold(0.0, f64::max);
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak / err).log10())
}

/// Zero-crossing rate: sign changes between consecutive samples divided by
/// `len - 1`. Zero samples count as nonnegative.
pub fn zcr(clip: &AudioClip) -> Result<f64> {
    if clip.len() < 2 {
        return Err(Error::Dimension(
            "zero-crossing rate needs at least 2 samples".into(),
        ));
    }
    let crossings = clip
        .samples()
        .windows(2)
        .filter(|w| (w[0] < 0) != (w[1] < 0))
        .count();
    Ok(crossings as f64 / (clip.len() - 1) as f64)
}

/// Root-mean-square amplitude of the normalized signal.
pub fn rms(clip: &AudioClip) -> Result<f64> {
    if clip.is_empty() {
        return Err(Error::Dimension("RMS needs at least 1 sample".into()));
    }
    let sum: f64 = normalized(clip).map(|x| x * x).sum();
    Ok((sum / clip.len() as f64).sqrt())
}

/// Fraction of sample positions whose values differ (the audio analog of
/// NPCR), in [0, 1].
pub fn sample_difference_fraction(a: &AudioClip, b: &AudioClip) -> Result<f64> {
    check_same_length(a, b)?;
    if a.is_empty() {
        return Err(Error::Dimension("clips are empty".into()));
    }
    let diff = a
        .samples()
        .iter()
        .zip(b.samples())
        .filter(|(sa, sb)| sa != sb)
        .count();
    Ok(diff as f64 / a.len() as f64)
}

pub fn audio_report(original: &AudioClip, encrypted: &AudioClip) -> Result<AudioMetricsReport> {
    Ok(AudioMetricsReport {
        snr_db: snr(original, encrypted)?,
        psnr_db: psnr(original, encrypted)?,
        mse: mse(original, encrypted)?,
        zcr_original: zcr(original)?,
        zcr_encrypted: zcr(encrypted)?,
        rms_original: rms(original)?,
        rms_encrypted: rms(encrypted)?,
    })
}
