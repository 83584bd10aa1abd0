//! Bit-exact media containers: binary netpbm images, 16-bit PCM WAV audio
//! and a lossless frame-directory video container.
//!
//! All three are lossless by construction; write-then-read is the identity
//! on the in-memory value. Decryptability depends on that.

mod netpbm;
mod video;
mod wav;

pub use netpbm::{read_image, write_image};
pub use video::{read_video, write_video, MANIFEST_NAME};
pub use wav::{read_wav, write_wav};

use crate::error::{Error, Result};
use std::path::Path;

/// Row-major raster of 8-bit samples, 1 (gray) or 3 (RGB) channels,
/// channel-interleaved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidArgument(format!(
                "image must have 1 or 3 channels, got {channels}"
            )));
        }
        if samples.len() != width * height * channels {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples for {width}x{height}x{channels}, got {}",
                width * height * channels,
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    /// All-zero (black) image.
    pub fn blank(width: usize, height: usize, channels: usize) -> Result<Self> {
        Self::new(width, height, channels, vec![0; width * height * channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    /// Byte offset of the first sample of pixel `(x, y)`.
    pub fn pixel_offset(&self, x: usize, y: usize) -> usize {
        (y * self.width + x) * self.channels
    }

    /// One row of samples.
    pub fn row(&self, y: usize) -> &[u8] {
        let stride = self.width * self.channels;
        &self.samples[y * stride..(y + 1) * stride]
    }
}

/// PCM audio: interleaved signed 16-bit samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AudioClip {
    sample_rate: u32,
    channels: u16,
    samples: Vec<i16>,
}

impl AudioClip {
    pub fn new(sample_rate: u32, channels: u16, samples: Vec<i16>) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidArgument("sample rate must be positive".into()));
        }
        if channels != 1 && channels != 2 {
            return Err(Error::InvalidArgument(format!(
                "audio must have 1 or 2 channels, got {channels}"
            )));
        }
        if samples.len() % channels as usize != 0 {
            return Err(Error::InvalidArgument(format!(
                "sample count {} not divisible by channel count {channels}",
                samples.len()
            )));
        }
        Ok(Self {
            sample_rate,
            channels,
            samples,
        })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn channels(&self) -> u16 {
        self.channels
    }

    pub fn samples(&self) -> &[i16] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Reinterprets the flat sample stream with a different channel count.
    pub fn with_channels(self, channels: u16) -> Result<Self> {
        Self::new(self.sample_rate, channels, self.samples)
    }
}

/// Ordered lossless frames plus a rational frame rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VideoSequence {
    fps_num: u32,
    fps_den: u32,
    frames: Vec<Image>,
}

impl VideoSequence {
    pub fn new(fps_num: u32, fps_den: u32, frames: Vec<Image>) -> Result<Self> {
        if fps_num == 0 || fps_den == 0 {
            return Err(Error::InvalidArgument(format!(
                "frame rate must be a positive rational, got {fps_num}/{fps_den}"
            )));
        }
        if let Some(first) = frames.first() {
            let shape = (first.width(), first.height(), first.channels());
            for (i, f) in frames.iter().enumerate() {
                if (f.width(), f.height(), f.channels()) != shape {
                    return Err(Error::Format(format!(
                        "frame {i} is {}x{}x{}, expected {}x{}x{}",
                        f.width(),
                        f.height(),
                        f.channels(),
                        shape.0,
                        shape.1,
                        shape.2
                    )));
                }
            }
        }
        Ok(Self {
            fps_num,
            fps_den,
            frames,
        })
    }

    pub fn fps(&self) -> (u32, u32) {
        (self.fps_num, self.fps_den)
    }

    pub fn frames(&self) -> &[Image] {
        &self.frames
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }
}

pub fn load_image(path: &Path) -> Result<Image> {
    read_image(&std::fs::read(path)?)
}

pub fn save_image(path: &Path, img: &Image) -> Result<()> {
    Ok(std::fs::write(path, write_image(img))?)
}

pub fn load_wav(path: &Path) -> Result<AudioClip> {
    read_wav(&std::fs::read(path)?)
}

pub fn save_wav(path: &Path, clip: &AudioClip) -> Result<()> {
    Ok(std::fs::write(path, write_wav(clip))?)
}
