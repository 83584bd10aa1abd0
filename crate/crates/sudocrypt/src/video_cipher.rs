//! Per-frame video encryption: every frame runs through the full image
//! pipeline under one shared key.
//!
//! Frames are independent jobs — encrypting frame `i` never reads frame
//! `j` — so they are processed in parallel; output order is the input
//! order regardless of scheduling.

use crate::error::{Error, Result};
use crate::image_cipher;
use crate::keymat::{KeyMaterial, MediaShape};
use crate::media::{Image, VideoSequence};
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Encrypts every frame, recording frame count, dimensions and frame rate
/// into the key.
pub fn encrypt_video(video: &VideoSequence, key: &mut KeyMaterial) -> Result<VideoSequence> {
    Ok(encrypt_video_timed(video, key)?.0)
}

/// [`encrypt_video`] plus per-frame wall-clock durations.
pub fn encrypt_video_timed(
    video: &VideoSequence,
    key: &mut KeyMaterial,
) -> Result<(VideoSequence, Vec<Duration>)> {
    let Some(first) = video.frames().first() else {
        return Err(Error::InvalidArgument("cannot encrypt an empty video".into()));
    };
    let (fps_num, fps_den) = video.fps();
    let shape = MediaShape::Video {
        frames: video.frame_count(),
        fps_num,
        fps_den,
        width: first.width(),
        height: first.height(),
        channels: first.channels(),
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

    let jobs: Vec<(Image, Duration)> = video
        .frames()
        .par_iter()
        .map(|frame| {
            let t0 = Instant::now();
            let out = image_cipher::run_encrypt_rounds(frame, key)?;
            Ok((out, t0.elapsed()))
        })
        .collect::<Result<_>>()?;
    let (frames, durations) = jobs.into_iter().unzip();
    Ok((VideoSequence::new(fps_num, fps_den, frames)?, durations))
}

/// Decrypts every frame; frame count, dimensions and rate are checked
/// against the key's recorded shape.
pub fn decrypt_video(video: &VideoSequence, key: &KeyMaterial) -> Result<VideoSequence> {
    let Some(MediaShape::Video {
        frames,
        fps_num,
        fps_den,
        width,
        height,
        channels,
    }) = key.shape
    else {
        return Err(Error::KeyMismatch(
            "key carries no video shape; encrypt must record it first".into(),
        ));
    };
    if video.frame_count() != frames {
        return Err(Error::KeyMismatch(format!(
            "ciphertext has {} frames, key expects {frames}",
            video.frame_count()
        )));
    }
    if video.fps() != (fps_num, fps_den) {
        return Err(Error::KeyMismatch(format!(
            "ciphertext frame rate {:?}, key expects {fps_num}/{fps_den}",
            video.fps()
        )));
    }
    let decrypted: Vec<Image> = video
        .frames()
        .par_iter()
        .map(|frame| image_cipher::run_decrypt_rounds(frame, key, width, height, channels))
        .collect::<Result<_>>()?;
    VideoSequence::new(fps_num, fps_den, decrypted)
}
