//! Frame-directory video container.
//!
//! A video is a directory of numbered netpbm frames plus `manifest.txt`
//! naming them in display order. The manifest is written last so a complete
//! manifest implies complete frames.

use super::{load_image, save_image, Image, VideoSequence};
use crate::error::{Error, Result};
use std::path::{Component, Path};

pub const MANIFEST_NAME: &str = "manifest.txt";
const MANIFEST_MAGIC: &str = "SUDOCRYPT-VIDEO v1";

pub fn read_video(dir: &Path) -> Result<VideoSequence> {
    let manifest_path = dir.join(MANIFEST_NAME);
    let text = std::fs::read_to_string(&manifest_path).map_err(|e| {
        Error::Format(format!("cannot read {}: {e}", manifest_path.display()))
    })?;
    let mut lines = text.lines().enumerate();

    let magic = next_line(&mut lines, "magic")?;
    if magic.1 != MANIFEST_MAGIC {
        return Err(manifest_err(magic.0, format!("bad magic `{}`", magic.1)));
    }
    let fps_line = next_line(&mut lines, "fps")?;
    let (fps_num, fps_den) = parse_fps(fps_line)?;
    let count_line = next_line(&mut lines, "frames")?;
    let count: usize = count_line
        .1
        .strip_prefix("frames ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| manifest_err(count_line.0, "expected `frames <count>`".into()))?;

    let mut frames: Vec<Image> = Vec::with_capacity(count);
    for _ in 0..count {
        let (lineno, name) = next_line(&mut lines, "frame filename")?;
        check_relative(lineno, name)?;
        let frame = load_image(&dir.join(name)).map_err(|e| {
            Error::Format(format!("frame `{name}` (manifest line {}): {e}", lineno + 1))
        })?;
        frames.push(frame);
    }
    VideoSequence::new(fps_num, fps_den, frames)
}

/// Writes frames first, manifest last (the commit point).
pub fn write_video(video: &VideoSequence, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::with_capacity(video.frame_count());
    for (i, frame) in video.frames().iter().enumerate() {
        let ext = if frame.channels() == 1 { "pgm" } else { "ppm" };
        let name = format!("frame_{i:06}.{ext}");
        save_image(&dir.join(&name), frame)?;
        names.push(name);
    }
    let (fps_num, fps_den) = video.fps();
    let mut manifest = format!(
        "{MANIFEST_MAGIC}\nfps {fps_num} {fps_den}\nframes {}\n",
        video.frame_count()
    );
    for name in names {
        manifest.push_str(&name);
        manifest.push('\n');
    }
    Ok(std::fs::write(dir.join(MANIFEST_NAME), manifest)?)
}

fn next_line<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    what: &str,
) -> Result<(usize, &'a str)> {
    lines
        .next()
        .ok_or_else(|| Error::Format(format!("manifest ended early, missing {what}")))
}

fn parse_fps((lineno, line): (usize, &str)) -> Result<(u32, u32)> {
    let mut it = line
        .strip_prefix("fps ")
        .unwrap_or("")
        .split_whitespace()
        .map(|t| t.parse::<u32>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(num)), Some(Ok(den)), None) if num > 0 && den > 0 => Ok((num, den)),
        _ => Err(manifest_err(lineno, "expected `fps <num> <den>`".into())),
    }
}

fn check_relative(lineno: usize, name: &str) -> Result<()> {
    let path = Path::new(name);
    let plain = path
        .components()
        .all(|c| matches!(c, Component::Normal(_)));
    if name.is_empty() || !plain {
        return Err(manifest_err(
            lineno,
            format!("frame filename `{name}` must be a plain relative path"),
        ));
    }
    Ok(())
}

fn manifest_err(lineno: usize, msg: String) -> Error {
    Error::Format(format!("manifest line {}: {msg}", lineno + 1))
}
