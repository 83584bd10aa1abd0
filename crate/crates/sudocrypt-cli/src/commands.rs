use crate::MediaArg;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};
use sudocrypt::analysis;
use sudocrypt::audio_cipher::{self, AudioMode};
use sudocrypt::error::{Error, Result};
use sudocrypt::image_cipher;
use sudocrypt::keymat::{KeyMaterial, MediaShape, SUPPORTED_SIZES};
use sudocrypt::media::{self, AudioClip, Image, MANIFEST_NAME};
use sudocrypt::video_cipher;

/// What kind of container a path holds, sniffed from magic bytes (files)
/// or the manifest (directories).
enum Container {
    Image,
    Wav,
    Video,
}

fn sniff(path: &Path) -> Result<Container> {
    if path.is_dir() {
        if path.join(MANIFEST_NAME).is_file() {
            return Ok(Container::Video);
        }
        return Err(Error::Format(format!(
            "directory {} has no {MANIFEST_NAME}",
            path.display()
        )));
    }
    let mut magic = [0u8; 4];
    let n = {
        use std::io::Read;
        let mut f = std::fs::File::open(path)?;
        f.read(&mut magic)?
    };
    match &magic[..n] {
        [b'P', b'5', ..] | [b'P', b'6', ..] => Ok(Container::Image),
        b"RIFF" => Ok(Container::Wav),
        _ => Err(Error::Format(format!(
            "{} is not a supported container (binary netpbm, PCM WAV or frame directory)",
            path.display()
        ))),
    }
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn keygen(size: usize, timestamp: Option<u64>, iterations: u32, out: &Path) -> Result<()> {
    if !SUPPORTED_SIZES.contains(&size) {
        return Err(Error::InvalidArgument(format!(
            "--size must be one of {SUPPORTED_SIZES:?}, got {size}"
        )));
    }
    let ts = match timestamp {
        Some(t) => t,
        None => SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .expect("system clock before 1970")
            .as_secs(),
    };
    let t0 = Instant::now();
    let key = KeyMaterial::derive_from_timestamp(ts, size, iterations)?;
    let elapsed = t0.elapsed();
    key.save(out)?;
    println!(
        "generated {size}x{size} grid from timestamp {ts} in {:.3} ms; key written to {}",
        ms(elapsed),
        out.display()
    );
    Ok(())
}

pub fn encrypt(
    input: &Path,
    key_path: &Path,
    out: &Path,
    media: Option<MediaArg>,
    frozen_key: bool,
) -> Result<()> {
    let mut key = KeyMaterial::load(key_path)?;
    if frozen_key && key.shape.is_none() {
        return Err(Error::KeyMismatch(
            "--frozen-key requires a key whose shape fields are already set".into(),
        ));
    }
    let container = sniff(input)?;

    match container {
        Container::Image => {
            require_media(media, MediaArg::Image, "an image")?;
            let img = media::load_image(input)?;
            let (cipher, trace) = image_cipher::encrypt_image_traced(&img, &mut key, false)?;
            media::save_image(out, &cipher)?;
            println!("stage,milliseconds");
            for (stage, duration) in trace.totals() {
                println!("{},{:.3}", stage.name(), ms(duration));
            }
        }
        Container::Wav => {
            let mode = audio_mode(&key, media)?;
            let clip = media::load_wav(input)?;
            let t0 = Instant::now();
            let cipher = audio_cipher::encrypt_audio(&clip, &mut key, mode)?;
            let elapsed = t0.elapsed();
            media::save_wav(out, &cipher)?;
            println!(
                "encrypted {} samples in {:.3} ms",
                clip.len(),
                ms(elapsed)
            );
        }
        Container::Video => {
            require_media(media, MediaArg::Video, "a video")?;
            let video = media::read_video(input)?;
            let (cipher, durations) = video_cipher::encrypt_video_timed(&video, &mut key)?;
            media::write_video(&cipher, out)?;
            let total: f64 = durations.iter().map(|d| ms(*d)).sum();
            let slowest = durations.iter().map(|d| ms(*d)).fold(0.0, f64::max);
            println!(
                "encrypted {} frames, {total:.3} ms frame work (slowest {slowest:.3} ms)",
                cipher.frame_count()
            );
        }
    }

    if frozen_key {
        // shape was set before and the cipher verified it matches
        println!("key left untouched (--frozen-key)");
    } else {
        key.save(key_path)?;
    }
    Ok(())
}

/// A `--media` override on a non-audio input must agree with the sniffed
/// container.
fn require_media(media: Option<MediaArg>, expected: MediaArg, what: &str) -> Result<()> {
    match media {
        None => Ok(()),
        Some(m) if m == expected => Ok(()),
        Some(_) => Err(Error::InvalidArgument(format!(
            "--media contradicts the input, which is {what}"
        ))),
    }
}

/// Audio mode precedence: shape already recorded in the key, then the
/// `--media` flag, then the shuffle default.
fn audio_mode(key: &KeyMaterial, media: Option<MediaArg>) -> Result<AudioMode> {
    let from_key = match &key.shape {
        Some(MediaShape::AudioShuffle { .. }) => Some(AudioMode::Shuffle),
        Some(MediaShape::AudioXor { .. }) => Some(AudioMode::Xor),
        Some(other) => {
            return Err(Error::KeyMismatch(format!(
                "key is bound to {}, input is audio",
                other.media_name()
            )))
        }
        None => None,
    };
    let from_flag = match media {
        Some(MediaArg::AudioShuffle) => Some(AudioMode::Shuffle),
        Some(MediaArg::AudioXor) => Some(AudioMode::Xor),
        Some(_) => {
            return Err(Error::InvalidArgument(
                "--media contradicts the input, which is audio".into(),
            ))
        }
        None => None,
    };
    match (from_key, from_flag) {
        (Some(k), Some(f)) if k != f => Err(Error::KeyMismatch(
            "--media contradicts the mode recorded in the key".into(),
        )),
        (Some(k), _) => Ok(k),
        (None, Some(f)) => Ok(f),
        (None, None) => Ok(AudioMode::Shuffle),
    }
}

pub fn decrypt(input: &Path, key_path: &Path, out: &Path) -> Result<()> {
    let key = KeyMaterial::load(key_path)?;
    let t0 = Instant::now();
    match &key.shape {
        Some(MediaShape::Image { .. }) => {
            let cipher = media::load_image(input)?;
            let plain = image_cipher::decrypt_image(&cipher, &key)?;
            media::save_image(out, &plain)?;
        }
        Some(MediaShape::AudioShuffle { .. } | MediaShape::AudioXor { .. }) => {
            let cipher = media::load_wav(input)?;
            let plain = audio_cipher::decrypt_audio(&cipher, &key)?;
            media::save_wav(out, &plain)?;
        }
        Some(MediaShape::Video { .. }) => {
            let cipher = media::read_video(input)?;
            let plain = video_cipher::decrypt_video(&cipher, &key)?;
            media::write_video(&plain, out)?;
        }
        None => {
            return Err(Error::KeyMismatch(
                "key carries no shape metadata; it has not encrypted anything yet".into(),
            ))
        }
    }
    println!("decrypted in {:.3} ms", ms(t0.elapsed()));
    Ok(())
}

pub fn analyze(original: &Path, encrypted: &Path, crop: bool, csv: Option<&Path>) -> Result<()> {
    match (sniff(original)?, sniff(encrypted)?) {
        (Container::Image, Container::Image) => {
            let a = media::load_image(original)?;
            let b = media::load_image(encrypted)?;
            analyze_images(original, encrypted, &a, &b, crop, csv)
        }
        (Container::Wav, Container::Wav) => {
            let a = media::load_wav(original)?;
            let b = media::load_wav(encrypted)?;
            analyze_audio(original, encrypted, &a, &b, crop, csv)
        }
        _ => Err(Error::Format(
            "analyze needs two images or two WAV clips of the same media type".into(),
        )),
    }
}

fn analyze_images(
    orig_path: &Path,
    enc_path: &Path,
    a: &Image,
    b: &Image,
    crop: bool,
    csv: Option<&Path>,
) -> Result<()> {
    let (a, b) = if crop {
        let w = a.width().min(b.width());
        let h = a.height().min(b.height());
        (
            image_cipher::crop_image(a, w, h)?,
            image_cipher::crop_image(b, w, h)?,
        )
    } else {
        (a.clone(), b.clone())
    };
    let report = analysis::image_report(&a, &b)?;

    println!("{:<22}{:>14}{:>14}", "metric", "original", "encrypted");
    println!("{:<22}{:>28.4}", "npcr (%)", report.npcr);
    println!("{:<22}{:>28.4}", "uaci (%)", report.uaci);
    println!(
        "{:<22}{:>14.4}{:>14.4}",
        "entropy (bits)", report.entropy_original, report.entropy_encrypted
    );
    let channel_names: &[&str] = if a.channels() == 3 {
        &["mean red", "mean green", "mean blue"]
    } else {
        &["mean gray"]
    };
    for (c, name) in channel_names.iter().enumerate() {
        println!(
            "{name:<22}{:>14.2}{:>14.2}",
            report.channel_means_original[c], report.channel_means_encrypted[c]
        );
    }

    if let Some(path) = csv {
        let mean_cols: Vec<String> = if a.channels() == 3 {
            ["r", "g", "b"]
                .iter()
                .flat_map(|c| [format!("mean_{c}_original"), format!("mean_{c}_encrypted")])
                .collect()
        } else {
            vec!["mean_original".into(), "mean_encrypted".into()]
        };
        let mut csv_text = format!(
            "original,encrypted,npcr_pct,uaci_pct,entropy_original,entropy_encrypted,{}\n",
            mean_cols.join(",")
        );
        let mut row = format!(
            "{},{},{},{},{},{}",
            orig_path.display(),
            enc_path.display(),
            report.npcr,
            report.uaci,
            report.entropy_original,
            report.entropy_encrypted
        );
        for c in 0..a.channels() {
            row.push_str(&format!(
                ",{},{}",
                report.channel_means_original[c], report.channel_means_encrypted[c]
            ));
        }
        csv_text.push_str(&row);
        csv_text.push('\n');
        std::fs::write(path, csv_text)?;
    }
    Ok(())
}

fn analyze_audio(
    orig_path: &Path,
    enc_path: &Path,
    a: &AudioClip,
    b: &AudioClip,
    crop: bool,
    csv: Option<&Path>,
) -> Result<()> {
    let (a, b) = if crop && a.len() != b.len() {
        let len = a.len().min(b.len());
        (
            AudioClip::new(a.sample_rate(), 1, a.samples()[..len].to_vec())?,
            AudioClip::new(b.sample_rate(), 1, b.samples()[..len].to_vec())?,
        )
    } else {
        (a.clone(), b.clone())
    };
    let report = analysis::audio_report(&a, &b)?;

    println!("{:<22}{:>14}{:>14}", "metric", "original", "encrypted");
    println!("{:<22}{:>28.4}", "snr (dB)", report.snr_db);
    println!("{:<22}{:>28.4}", "psnr (dB)", report.psnr_db);
    println!("{:<22}{:>28.6}", "mse", report.mse);
    println!(
        "{:<22}{:>14.4}{:>14.4}",
        "zcr (per sample)", report.zcr_original, report.zcr_encrypted
    );
    println!(
        "{:<22}{:>14.4}{:>14.4}",
        "rms", report.rms_original, report.rms_encrypted
    );

    if let Some(path) = csv {
        let csv_text = format!(
            "original,encrypted,snr_db,psnr_db,mse,zcr_original,zcr_encrypted,rms_original,rms_encrypted\n{},{},{},{},{},{},{},{},{}\n",
            orig_path.display(),
            enc_path.display(),
            report.snr_db,
            report.psnr_db,
            report.mse,
            report.zcr_original,
            report.zcr_encrypted,
            report.rms_original,
            report.rms_encrypted
        );
        std::fs::write(path, csv_text)?;
    }
    Ok(())
}
