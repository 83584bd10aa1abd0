//! Minimal RIFF/WAVE codec: PCM format 1, 16 bits per sample, 1-2 channels.
//!
//! The reader skips unknown chunks; the writer emits the canonical minimal
//! layout (`fmt ` then `data`) so encryption output bytes are stable.

use super::AudioClip;
use crate::error::{Error, Result};

pub fn read_wav(bytes: &[u8]) -> Result<AudioClip> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::Format("not a RIFF/WAVE file".into()));
    }
    let mut fmt: Option<(u16, u32)> = None; // (channels, sample_rate)
    let mut data: Option<&[u8]> = None;
    let mut cursor = 12;
    while cursor + 8 <= bytes.len() {
        let id = &bytes[cursor..cursor + 4];
        let size = u32::from_le_bytes(bytes[cursor + 4..cursor + 8].try_into().unwrap()) as usize;
        cursor += 8;
        let body = bytes
            .get(cursor..cursor + size)
            .ok_or_else(|| Error::Format(format!("truncated `{}` chunk", String::from_utf8_lossy(id))))?;
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(Error::Format("fmt chunk too short".into()));
                }
                let format_code = u16::from_le_bytes(body[0..2].try_into().unwrap());
                let channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
                let sample_rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
                let bits = u16::from_le_bytes(body[14..16].try_into().unwrap());
                if format_code != 1 {
                    return Err(Error::Format(format!(
                        "unsupported WAV format code {format_code}, only PCM (1) supported"
                    )));
                }
                if bits != 16 {
                    return Err(Error::Format(format!(
                        "unsupported bit depth {bits}, only 16-bit PCM supported"
                    )));
                }
                if channels == 0 || channels > 2 {
                    return Err(Error::Format(format!(
                        "unsupported channel count {channels}, only 1-2 supported"
                    )));
                }
                fmt = Some((channels, sample_rate));
            }
            b"data" => data = Some(body),
            _ => {} // skip LIST, fact, cue, ...
        }
        cursor += size + size % 2; // chunks are word-aligned
    }
    let (channels, sample_rate) =
        fmt.ok_or_else(|| Error::Format("missing fmt chunk".into()))?;
    let payload = data.ok_or_else(|| Error::Format("missing data chunk".into()))?;
    if payload.len() % 2 != 0 {
        return Err(Error::Format("data chunk holds a partial 16-bit sample".into()));
    }
    let samples: Vec<i16> = payload
        .chunks_exact(2)
        .map(|pair| i16::from_le_bytes([pair[0], pair[1]]))
        .collect();
    if samples.len() % channels as usize != 0 {
        return Err(Error::Format(format!(
            "sample count {} not divisible by channel count {channels}",
            samples.len()
        )));
    }
    AudioClip::new(sample_rate, channels, samples)
}

pub fn write_wav(clip: &AudioClip) -> Vec<u8> {
    let data_size = clip.len() * 2;
    let block_align = clip.channels() as u32 * 2;
    let mut out = Vec::with_capacity(44 + data_size);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_size as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&clip.channels().to_le_bytes());
    out.extend_from_slice(&clip.sample_rate().to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate() * block_align).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_size as u32).to_le_bytes());
    for s in clip.samples() {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}
