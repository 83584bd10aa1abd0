//! `sudocrypt` command line: key generation, encrypt/decrypt for images,
//! audio and video, metric analysis, and timing benchmarks.
//!
//! Exit codes are a stable scripting contract:
//! 0 success, 1 usage, 2 format or I/O error, 3 key/tamper error.

mod bench;
mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use sudocrypt::Error;

#[derive(Parser)]
#[command(name = "sudocrypt", version, about = "Sudoku-keyed multimedia scrambling cipher")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key file from a timestamp (current time by default).
    Keygen {
        /// Grid size: 4, 9, 16 or 25.
        #[arg(long)]
        size: usize,
        /// Unix timestamp to derive from; defaults to now.
        #[arg(long)]
        timestamp: Option<u64>,
        /// Encryption rounds for the image/video pipeline.
        #[arg(long, default_value_t = 1)]
        iterations: u32,
        /// Key file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt an image (.pgm/.ppm), audio clip (.wav) or frame directory.
    Encrypt {
        /// Plaintext input: file, or directory with a video manifest.
        #[arg(long = "in")]
        input: PathBuf,
        /// Key file; shape metadata is written back after encryption.
        #[arg(long)]
        key: PathBuf,
        /// Ciphertext output path (directory for video).
        #[arg(long)]
        out: PathBuf,
        /// Force the media type; mainly selects the audio mode for WAV
        /// input (default audio-shuffle).
        #[arg(long)]
        media: Option<MediaArg>,
        /// Never mutate the key file; error if its shape fields are unset.
        #[arg(long)]
        frozen_key: bool,
    },
    /// Decrypt a ciphertext back to the original bytes.
    Decrypt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare an original and an encrypted file and report metrics.
    Analyze {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        encrypted: PathBuf,
        /// When shapes differ, compare the top-left common region (images)
        /// or the common prefix (audio) instead of failing.
        #[arg(long)]
        crop: bool,
        /// Also write the report as a CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a timing sweep and write a CSV table.
    Bench {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MediaArg {
    Image,
    AudioShuffle,
    AudioXor,
    Video,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Key generation time for 10..100 keys (9x9).
    Keygen,
    /// Image encryption time at 25..100 rounds.
    Iterations,
    /// Image encryption time across resolutions, 100 rounds each.
    Images,
    /// Grid generation time for sizes 4, 9, 16, 25.
    SudokuSizes,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    if let Err(err) = run(cli) {
        match &err {
            Error::TamperedKey(msg) => eprintln!("error: key validation failed: {msg}"),
            other => eprintln!("error: {other}"),
        }
        std::process::exit(exit_code(&err));
    }
}

fn run(cli: Cli) -> sudocrypt::Result<()> {
    match cli.command {
        Command::Keygen {
            size,
            timestamp,
            iterations,
            out,
        } => commands::keygen(size, timestamp, iterations, &out),
        Command::Encrypt {
            input,
            key,
            out,
            media,
            frozen_key,
        } => commands::encrypt(&input, &key, &out, media, frozen_key),
        Command::Decrypt { input, key, out } => commands::decrypt(&input, &key, &out),
        Command::Analyze {
            original,
            encrypted,
            crop,
            csv,
        } => commands::analyze(&original, &encrypted, crop, csv.as_deref()),
        Command::Bench { suite, out } => bench::run(suite, &out),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) => 1,
        Error::Format(_) | Error::Io(_) | Error::Dimension(_) | Error::KeyParse { .. } => 2,
        Error::TamperedKey(_) | Error::KeyMismatch(_) | Error::InvalidKey(_) => 3,
    }
}
