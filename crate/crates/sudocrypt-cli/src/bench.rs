//! Timing sweeps. These reproduce table *shapes* (row sets, monotone
//! growth), never absolute numbers from any particular machine.

use crate::Suite;
use std::path::Path;
use std::time::Instant;
use sudocrypt::error::Result;
use sudocrypt::image_cipher;
use sudocrypt::keymat::KeyMaterial;
use sudocrypt::media::Image;
use sudocrypt::prng::SplitMix64;
use sudocrypt::sudoku::SudokuGrid;

/// Fixed derivation timestamp so benchmark work is reproducible.
const BASE_TS: u64 = 1_700_000_000;

/// Repetitions per row; the minimum is reported. A descheduled run inflates
/// one repetition, not the minimum.
const REPS: usize = 3;

fn min_time_s(mut work: impl FnMut()) -> f64 {
    (0..REPS)
        .map(|_| {
            let t0 = Instant::now();
            work();
            t0.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn run(suite: Suite, out: &Path) -> Result<()> {
    let csv = match suite {
        Suite::Keygen => keygen_suite(),
        Suite::Iterations => iterations_suite()?,
        Suite::Images => images_suite()?,
        Suite::SudokuSizes => sudoku_sizes_suite(),
    };
    print!("{csv}");
    std::fs::write(out, csv)?;
    Ok(())
}

fn keygen_suite() -> String {
    let mut csv = String::from("num_keys,time_s\n");
    for count in [10u64, 25, 50, 75, 100] {
        let secs = min_time_s(|| {
            for i in 0..count {
                KeyMaterial::derive_from_timestamp(BASE_TS + i, 9, 1).expect("9 is supported");
            }
        });
        csv.push_str(&format!("{count},{secs:.6}\n"));
    }
    csv
}

fn iterations_suite() -> Result<String> {
    let img = noise_image(256, 256);
    let mut csv = String::from("iterations,time_s\n");
    for rounds in [25u32, 50, 75, 100] {
        let key = KeyMaterial::derive_from_timestamp(BASE_TS, 9, rounds)?;
        let secs = min_time_s(|| {
            let mut key = key.clone();
            image_cipher::encrypt_image(&img, &mut key).expect("encryption succeeds");
        });
        csv.push_str(&format!("{rounds},{secs:.6}\n"));
    }
    Ok(csv)
}

fn images_suite() -> Result<String> {
    let mut csv = String::from("image,width,height,sudoku,time_s\n");
    for (w, h) in [(256usize, 256usize), (512, 512), (800, 1210), (1024, 1024)] {
        let img = noise_image(w, h);
        let key = KeyMaterial::derive_from_timestamp(BASE_TS, 9, 100)?;
        let secs = min_time_s(|| {
            let mut key = key.clone();
            image_cipher::encrypt_image(&img, &mut key).expect("encryption succeeds");
        });
        csv.push_str(&format!("noise-{w}x{h},{w},{h},9x9,{secs:.6}\n"));
    }
    Ok(csv)
}

fn sudoku_sizes_suite() -> String {
    // a small batch per measurement so single-grid jitter cannot break
    // the monotone shape
    const GRIDS_PER_BATCH: u64 = 5;
    let mut csv = String::from("size,time_s\n");
    for n in [4usize, 9, 16, 25] {
        let secs = min_time_s(|| {
            for i in 0..GRIDS_PER_BATCH {
                SudokuGrid::generate(n, BASE_TS + i).expect("supported size");
            }
        });
        csv.push_str(&format!("{n},{:.6}\n", secs / GRIDS_PER_BATCH as f64));
    }
    csv
}

fn noise_image(w: usize, h: usize) -> Image {
    let mut rng = SplitMix64::new(0xBEEF ^ (w as u64) << 20 ^ h as u64);
    Image::new(w, h, 3, (0..w * h * 3).map(|_| rng.next_u64() as u8).collect())
        .expect("well-formed image")
}
