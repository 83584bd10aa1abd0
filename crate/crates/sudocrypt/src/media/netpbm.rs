//! Binary netpbm codec: P5 (grayscale) and P6 (RGB), maxval 255 only.
//!
//! Reads accept `#` comments between header tokens; writes emit a fixed
//! canonical header so identical images always produce identical bytes.

use super::Image;
use crate::error::{Error, Result};

/// Decodes a binary PGM (P5) or PPM (P6) image.
pub fn read_image(bytes: &[u8]) -> Result<Image> {
    let channels = match bytes.get(0..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        Some(magic) => {
            return Err(Error::Format(format!(
                "bad netpbm magic {:?} (only binary P5/P6 supported)",
                String::from_utf8_lossy(magic)
            )))
        }
        None => return Err(Error::Format("file too short for a netpbm header".into())),
    };
    let mut cursor = 2;
    let width = read_header_int(bytes, &mut cursor)?;
    let height = read_header_int(bytes, &mut cursor)?;
    let maxval = read_header_int(bytes, &mut cursor)?;
    if maxval != 255 {
        return Err(Error::Format(format!(
            "unsupported maxval {maxval}, only 255 (8-bit) supported"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("bad dimensions {width}x{height}")));
    }
    // Exactly one whitespace byte separates the header from the payload.
    match bytes.get(cursor) {
        Some(b) if b.is_ascii_whitespace() => cursor += 1,
        _ => return Err(Error::Format("missing whitespace before pixel payload".into())),
    }
    let expected = width * height * channels;
    let payload = bytes
        .get(cursor..cursor + expected)
        .ok_or_else(|| {
            Error::Format(format!(
                "truncated payload: expected {expected} bytes, found {}",
                bytes.len().saturating_sub(cursor)
            ))
        })?
        .to_vec();
    Image::new(width, height, channels, payload)
}

/// Encodes to canonical binary netpbm: P5 for 1 channel, P6 for 3.
pub fn write_image(img: &Image) -> Vec<u8> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.samples());
    out
}

/// Reads one ASCII decimal integer, skipping whitespace and `#` comments.
fn read_header_int(bytes: &[u8], cursor: &mut usize) -> Result<usize> {
    loop {
        match bytes.get(*cursor) {
            Some(b) if b.is_ascii_whitespace() => *cursor += 1,
            Some(b'#') => {
                while let Some(&b) = bytes.get(*cursor) {
                    *cursor += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            }
            Some(b) if b.is_ascii_digit() => break,
            Some(&b) => {
                return Err(Error::Format(format!(
                    "unexpected byte 0x{b:02x} in netpbm header"
                )))
            }
            None => return Err(Error::Format("truncated netpbm header".into())),
        }
    }
    let start = *cursor;
    while let Some(b) = bytes.get(*cursor) {
        if !b.is_ascii_digit() {
            break;
        }
        *cursor += 1;
    }
    std::str::from_utf8(&bytes[start..*cursor])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Format("invalid integer in netpbm header".into()))
}
