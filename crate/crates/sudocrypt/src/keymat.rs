//! Key material: everything a decryptor needs, bound to a timestamp.
//!
//! A key file carries the grid, the threshold shift, the shuffle seed, the
//! permutation row, the round count and the plaintext shape metadata. The
//! shape is recorded by the cipher at encryption time; freshly generated
//! keys carry `unset` placeholders until then.
//!
//! Tampering is detected structurally: a key whose grid violates a Sudoku
//! constraint is rejected, and an unsolved grid that cannot be completed is
//! rejected.

use crate::error::{Error, Result};
use crate::prng::mix_seed;
use crate::sudoku::SudokuGrid;
use std::path::Path;

const KEY_MAGIC: &str = "SUDOCRYPT-KEY v1";

/// Grid sizes covered by timestamp key derivation.
pub const SUPPORTED_SIZES: [usize; 4] = [4, 9, 16, 25];

/// Media type plus the plaintext shape needed to invert the cipher.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MediaShape {
    Image {
        width: usize,
        height: usize,
        channels: usize,
    },
    AudioShuffle {
        samples: usize,
        channels: u16,
        sample_rate: u32,
    },
    AudioXor {
        samples: usize,
        channels: u16,
        sample_rate: u32,
    },
    Video {
        frames: usize,
        fps_num: u32,
        fps_den: u32,
        width: usize,
        height: usize,
        channels: usize,
    },
}

impl MediaShape {
    pub fn media_name(&self) -> &'static str {
        match self {
            MediaShape::Image { .. } => "image",
            MediaShape::AudioShuffle { .. } => "audio-shuffle",
            MediaShape::AudioXor { .. } => "audio-xor",
            MediaShape::Video { .. } => "video",
        }
    }

    fn shape_line(&self) -> String {
        match self {
            MediaShape::Image {
                width,
                height,
                channels,
            } => format!("dims {width} {height} {channels}"),
            MediaShape::AudioShuffle {
                samples,
                channels,
                sample_rate,
            }
            | MediaShape::AudioXor {
                samples,
                channels,
                sample_rate,
            } => format!("samples {samples} {channels} {sample_rate}"),
            MediaShape::Video {
                frames,
                fps_num,
                fps_den,
                width,
                height,
                channels,
            } => format!("frames {frames} {fps_num} {fps_den} {width} {height} {channels}"),
        }
    }
}

/// The complete decryption bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    pub timestamp: u64,
    pub grid: SudokuGrid,
    /// Additive shift applied by the threshold stage, never zero.
    pub threshold: u8,
    pub shuffle_seed: u64,
    /// Grid row used as the block permutation.
    pub perm_row: usize,
    /// Encryption rounds for the image/video pipeline.
    pub iterations: u32,
    /// Plaintext shape, filled in by the cipher on first use.
    pub shape: Option<MediaShape>,
}

impl KeyMaterial {
    /// Derives all cipher parameters from a unix timestamp.
    ///
    /// threshold = (ts mod 254) + 1 so the shift is never zero and the
    /// threshold stage always changes every sample; the grid seed is the
    /// timestamp itself; the shuffle seed is the timestamp mixed once
    /// through SplitMix64.
    pub fn derive_from_timestamp(timestamp: u64, n: usize, iterations: u32) -> Result<Self> {
        if !SUPPORTED_SIZES.contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "grid size must be one of {SUPPORTED_SIZES:?}, got {n}"
            )));
        }
        if iterations == 0 {
            return Err(Error::InvalidArgument("iterations must be at least 1".into()));
        }
        Ok(Self {
            timestamp,
            grid: SudokuGrid::generate(n, timestamp)?,
            threshold: (timestamp % 254) as u8 + 1,
            shuffle_seed: mix_seed(timestamp),
            perm_row: (timestamp % n as u64) as usize,
            iterations,
            shape: None,
        })
    }

    /// Checks every key invariant; `parse` calls this, and callers mutating
    /// a key directly can re-check before serializing.
    pub fn validate(&self) -> Result<()> {
        if self.threshold == 0 {
            return Err(Error::TamperedKey("threshold must be in 1..=255".into()));
        }
        if self.perm_row >= self.grid.n() {
            return Err(Error::TamperedKey(format!(
                "perm_row {} out of range for a {}x{} grid",
                self.perm_row,
                self.grid.n(),
                self.grid.n()
            )));
        }
        if self.iterations == 0 {
            return Err(Error::TamperedKey("iterations must be at least 1".into()));
        }
        if !self.grid.is_solved() {
            return Err(Error::TamperedKey("grid is not solved".into()));
        }
        match &self.shape {
            None => Ok(()),
            Some(MediaShape::Image {
                width,
                height,
                channels,
            }) => {
                if *width == 0 || *height == 0 || !matches!(channels, 1 | 3) {
                    return Err(Error::TamperedKey(format!(
                        "bad image shape {width}x{height}x{channels}"
                    )));
                }
                Ok(())
            }
            Some(
                MediaShape::AudioShuffle {
                    samples,
                    channels,
                    sample_rate,
                }
                | MediaShape::AudioXor {
                    samples,
                    channels,
                    sample_rate,
                },
            ) => {
                if *samples == 0
                    || !matches!(channels, 1 | 2)
                    || *sample_rate == 0
                    || samples % *channels as usize != 0
                {
                    return Err(Error::TamperedKey(format!(
                        "bad audio shape: {samples} samples, {channels} channels, {sample_rate} Hz"
                    )));
                }
                Ok(())
            }
            Some(MediaShape::Video {
                frames,
                fps_num,
                fps_den,
                width,
                height,
                channels,
            }) => {
                if *frames == 0
                    || *fps_num == 0
                    || *fps_den == 0
                    || *width == 0
                    || *height == 0
                    || !matches!(channels, 1 | 3)
                {
                    return Err(Error::TamperedKey(format!(
                        "bad video shape: {frames} frames {width}x{height}x{channels} at {fps_num}/{fps_den} fps"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Emits the canonical key file: fixed field order, LF line endings,
    /// ASCII decimal integers. Byte-stable for equal keys.
    pub fn serialize(&self) -> Vec<u8> {
        let media = self
            .shape
            .as_ref()
            .map_or("unset", |s| s.media_name());
        let shape_line = self
            .shape
            .as_ref()
            .map_or_else(|| "unset".to_string(), |s| s.shape_line());
        format!(
            "{KEY_MAGIC}\ntimestamp {}\nmedia {media}\nthreshold {}\nshuffle_seed {}\nperm_row {}\niterations {}\n{shape_line}\n{}",
            self.timestamp,
            self.threshold,
            self.shuffle_seed,
            self.perm_row,
            self.iterations,
            self.grid.to_text(),
        )
        .into_bytes()
    }

    /// Parses and validates a key file. Unsolved grids are solved here;
    /// grids that violate a constraint or cannot be completed are reported
    /// as tampered.
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes)
            .map_err(|_| Error::KeyParse { line: 1, msg: "key file is not UTF-8".into() })?;
        let lines: Vec<&str> = text.lines().collect();
        let line = |idx: usize| -> Result<&str> {
            lines.get(idx).copied().ok_or(Error::KeyParse {
                line: idx + 1,
                msg: "unexpected end of file".into(),
            })
        };

        if line(0)? != KEY_MAGIC {
            return Err(Error::KeyParse {
                line: 1,
                msg: format!("expected `{KEY_MAGIC}`"),
            });
        }
        let timestamp = parse_field::<u64>(line(1)?, "timestamp", 2)?;
        let media = field_value(line(2)?, "media", 3)?;
        let threshold_raw = parse_field::<u32>(line(3)?, "threshold", 4)?;
        let shuffle_seed = parse_field::<u64>(line(4)?, "shuffle_seed", 5)?;
        let perm_row = parse_field::<usize>(line(5)?, "perm_row", 6)?;
        let iterations = parse_field::<u32>(line(6)?, "iterations", 7)?;
        let shape = parse_shape(media, line(7)?)?;

        if !(1..=255).contains(&threshold_raw) {
            return Err(Error::TamperedKey(format!(
                "threshold {threshold_raw} out of range 1..=255"
            )));
        }

        let grid_start = 8;
        if lines.len() <= grid_start {
            return Err(Error::KeyParse {
                line: grid_start + 1,
                msg: "missing grid block".into(),
            });
        }
        let grid_text = lines[grid_start..].join("\n");
        let grid = SudokuGrid::from_text(&grid_text).map_err(|e| Error::KeyParse {
            line: grid_start + 1,
            msg: e.to_string(),
        })?;
        if !grid.is_valid() {
            return Err(Error::TamperedKey(
                "grid violates a row, column or box constraint".into(),
            ));
        }
        let grid = if grid.is_solved() {
            grid
        } else {
            grid.solve().ok_or_else(|| {
                Error::TamperedKey("unsolved grid has no completion".into())
            })?
        };

        let key = KeyMaterial {
            timestamp,
            grid,
            threshold: threshold_raw as u8,
            shuffle_seed,
            perm_row,
            iterations,
            shape,
        };
        key.validate()?;
        Ok(key)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.serialize())?)
    }
}

fn field_value<'a>(line: &'a str, name: &str, lineno: usize) -> Result<&'a str> {
    line.strip_prefix(name)
        .and_then(|rest| rest.strip_prefix(' '))
        .map(str::trim)
        .ok_or_else(|| Error::KeyParse {
            line: lineno,
            msg: format!("expected `{name} <value>`"),
        })
}

fn parse_field<T: std::str::FromStr>(line: &str, name: &str, lineno: usize) -> Result<T> {
    field_value(line, name, lineno)?.parse().map_err(|_| Error::KeyParse {
        line: lineno,
        msg: format!("bad {name} value"),
    })
}

fn parse_shape(media: &str, shape_line: &str) -> Result<Option<MediaShape>> {
    const SHAPE_LINENO: usize = 8;
    let nums = |prefix: &str, count: usize| -> Result<Vec<u64>> {
        let rest = shape_line.strip_prefix(prefix).ok_or(Error::KeyParse {
            line: SHAPE_LINENO,
            msg: format!("media `{media}` requires a `{prefix}...` shape line"),
        })?;
        let vals: Vec<u64> = rest
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::KeyParse {
                line: SHAPE_LINENO,
                msg: "bad shape value".into(),
            })?;
        if vals.len() != count {
            return Err(Error::KeyParse {
                line: SHAPE_LINENO,
                msg: format!("expected {count} values after `{prefix}`"),
            });
        }
        Ok(vals)
    };

    match media {
        "unset" => {
            if shape_line != "unset" {
                return Err(Error::KeyParse {
                    line: SHAPE_LINENO,
                    msg: "media `unset` requires shape line `unset`".into(),
                });
            }
            Ok(None)
        }
        "image" => {
            let v = nums("dims ", 3)?;
            Ok(Some(MediaShape::Image {
                width: v[0] as usize,
                height: v[1] as usize,
                channels: v[2] as usize,
            }))
        }
        "audio-shuffle" | "audio-xor" => {
            let v = nums("samples ", 3)?;
            let (samples, channels, sample_rate) = (v[0] as usize, v[1] as u16, v[2] as u32);
            Ok(Some(if media == "audio-shuffle" {
                MediaShape::AudioShuffle {
                    samples,
                    channels,
                    sample_rate,
                }
            } else {
                MediaShape::AudioXor {
                    samples,
                    channels,
                    sample_rate,
                }
            }))
        }
        "video" => {
            let v = nums("frames ", 6)?;
            Ok(Some(MediaShape::Video {
                frames: v[0] as usize,
                fps_num: v[1] as u32,
                fps_den: v[2] as u32,
                width: v[3] as usize,
                height: v[4] as usize,
                channels: v[5] as usize,
            }))
        }
        other => Err(Error::KeyParse {
            line: 3,
            msg: format!("unknown media `{other}`"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::SplitMix64;

    #[test]
    fn threshold_derivation_golden() {
        // 1700000000 mod 254 = 98, so the shift is 99.
        let k = KeyMaterial::derive_from_timestamp(1_700_000_000, 9, 1).unwrap();
        assert_eq!(k.threshold, 99);
        assert_eq!(k.perm_row, 8); // 1700000000 mod 9
        assert_eq!(k.shuffle_seed, 12062050396800291869); // SplitMix64(ts)
        assert!(k.grid.is_solved());
        assert!(k.shape.is_none());
    }

    #[test]
    fn derivation_is_deterministic() {
        let a = KeyMaterial::derive_from_timestamp(42, 4, 2).unwrap();
        let b = KeyMaterial::derive_from_timestamp(42, 4, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn adjacent_timestamps_differ() {
        // threshold = (ts mod 254) + 1 changes on every step, including the
        // wrap at 253 -> 0, so adjacent keys can never be identical.
        let base = 1_600_000_000u64;
        let mut prev = KeyMaterial::derive_from_timestamp(base, 9, 1).unwrap();
        for ts in base + 1..base + 1001 {
            let next = KeyMaterial::derive_from_timestamp(ts, 9, 1).unwrap();
            assert_ne!(prev, next, "keys for ts {} and {ts} identical", ts - 1);
            prev = next;
        }
    }

    #[test]
    fn rejects_bad_sizes_and_iterations() {
        assert!(KeyMaterial::derive_from_timestamp(1, 7, 1).is_err());
        assert!(KeyMaterial::derive_from_timestamp(1, 36, 1).is_err());
        assert!(KeyMaterial::derive_from_timestamp(1, 9, 0).is_err());
    }

    #[test]
    fn serialize_is_stable_and_round_trips() {
        for ts in [0u64, 5, 1_700_000_000, u64::MAX] {
            let mut k = KeyMaterial::derive_from_timestamp(ts, 9, 3).unwrap();
            assert_eq!(k.serialize(), k.serialize());
            assert_eq!(KeyMaterial::parse(&k.serialize()).unwrap(), k);

            k.shape = Some(MediaShape::Image {
                width: 504,
                height: 504,
                channels: 3,
            });
            assert_eq!(KeyMaterial::parse(&k.serialize()).unwrap(), k);

            k.shape = Some(MediaShape::AudioXor {
                samples: 132300,
                channels: 2,
                sample_rate: 22050,
            });
            assert_eq!(KeyMaterial::parse(&k.serialize()).unwrap(), k);

            k.shape = Some(MediaShape::Video {
                frames: 10,
                fps_num: 30,
                fps_den: 1,
                width: 96,
                height: 96,
                channels: 3,
            });
            assert_eq!(KeyMaterial::parse(&k.serialize()).unwrap(), k);
        }
    }

    #[test]
    fn serialized_grid_matches_grid_text_format() {
        let k = KeyMaterial::derive_from_timestamp(7, 4, 1).unwrap();
        let text = String::from_utf8(k.serialize()).unwrap();
        assert!(text.ends_with(&k.grid.to_text()));
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(
            KeyMaterial::parse(b""),
            Err(Error::KeyParse { line: 1, .. })
        ));
    }

    #[test]
    fn corrupted_grid_cell_is_tampered() {
        let k = KeyMaterial::derive_from_timestamp(1_700_000_000, 9, 1).unwrap();
        let mut text = String::from_utf8(k.serialize()).unwrap();
        // Flip the first grid cell to a different value, breaking its row.
        let grid_pos = text.find("sudoku n=9\n").unwrap() + "sudoku n=9\n".len();
        let old = text[grid_pos..grid_pos + 1].parse::<u8>().unwrap();
        let new = if old == 9 { 1 } else { old + 1 };
        text.replace_range(grid_pos..grid_pos + 1, &new.to_string());
        assert!(matches!(
            KeyMaterial::parse(text.as_bytes()),
            Err(Error::TamperedKey(_))
        ));
    }

    #[test]
    fn unsolved_solvable_grid_is_completed() {
        let k = KeyMaterial::derive_from_timestamp(123, 9, 1).unwrap();
        let mut blanked = k.clone();
        // Any <= 3 blanked cells keep the completion unique: two distinct
        // solutions differ in at least 4 cells.
        let mut rng = SplitMix64::new(5);
        for _ in 0..3 {
            let (r, c) = (rng.next_index(9), rng.next_index(9));
            blanked.grid.set(r, c, 0);
        }
        let parsed = KeyMaterial::parse(&blanked.serialize()).unwrap();
        assert_eq!(parsed.grid, k.grid);
    }

    #[test]
    fn invariant_violations_are_tampered() {
        let k = KeyMaterial::derive_from_timestamp(55, 4, 1).unwrap();
        let text = String::from_utf8(k.serialize()).unwrap();

        let bad_threshold = text.replace(&format!("threshold {}", k.threshold), "threshold 0");
        assert!(matches!(
            KeyMaterial::parse(bad_threshold.as_bytes()),
            Err(Error::TamperedKey(_))
        ));

        let bad_row = text.replace(&format!("perm_row {}", k.perm_row), "perm_row 4");
        assert!(matches!(
            KeyMaterial::parse(bad_row.as_bytes()),
            Err(Error::TamperedKey(_))
        ));
    }

    #[test]
    fn malformed_syntax_reports_line() {
        let k = KeyMaterial::derive_from_timestamp(55, 4, 1).unwrap();
        let text = String::from_utf8(k.serialize()).unwrap();
        let broken = text.replace("shuffle_seed", "shuffleseed");
        match KeyMaterial::parse(broken.as_bytes()) {
            Err(Error::KeyParse { line: 5, .. }) => {}
            other => panic!("expected parse error at line 5, got {other:?}"),
        }
    }
}
