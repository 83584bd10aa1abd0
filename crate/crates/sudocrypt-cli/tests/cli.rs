//! End-to-end tests driving the built binary. Every scenario runs in its
//! own temp directory; decryption always happens in a separate process
//! from encryption, so a key file plus a ciphertext really is everything
//! needed.

use std::path::Path;
use std::process::{Command, Output};
use sudocrypt::media::{self, AudioClip, Image, VideoSequence};
use sudocrypt::prng::SplitMix64;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sudocrypt")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn random_image(w: usize, h: usize, ch: usize, seed: u64) -> Image {
    let mut rng = SplitMix64::new(seed);
    Image::new(w, h, ch, (0..w * h * ch).map(|_| rng.next_u64() as u8).collect()).unwrap()
}

fn random_clip(len: usize, channels: u16, seed: u64) -> AudioClip {
    let mut rng = SplitMix64::new(seed);
    AudioClip::new(22050, channels, (0..len).map(|_| rng.next_u64() as i16).collect()).unwrap()
}

#[test]
fn keygen_is_deterministic_and_validates_size() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_ok(&run(d, &["keygen", "--size", "9", "--timestamp", "1700000000", "--out", "a.key"]));
    assert_ok(&run(d, &["keygen", "--size", "9", "--timestamp", "1700000000", "--out", "b.key"]));
    assert_eq!(
        std::fs::read(d.join("a.key")).unwrap(),
        std::fs::read(d.join("b.key")).unwrap()
    );

    let bad = run(d, &["keygen", "--size", "7", "--out", "c.key"]);
    assert_exit(&bad, 1);
}

#[test]
fn image_files_round_trip_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    media::save_image(&d.join("orig.ppm"), &random_image(97, 53, 3, 1)).unwrap();

    assert_ok(&run(d, &["keygen", "--size", "9", "--timestamp", "5", "--out", "k.key"]));
    let enc = run(d, &["encrypt", "--in", "orig.ppm", "--key", "k.key", "--out", "enc.ppm"]);
    assert_ok(&enc);
    let stdout = String::from_utf8_lossy(&enc.stdout);
    assert!(stdout.contains("stage,milliseconds"), "stage CSV missing: {stdout}");
    assert!(stdout.contains("threshold,"));
    assert!(stdout.contains("block_transform,"));

    assert_ok(&run(d, &["decrypt", "--in", "enc.ppm", "--key", "k.key", "--out", "dec.ppm"]));
    assert_eq!(
        std::fs::read(d.join("orig.ppm")).unwrap(),
        std::fs::read(d.join("dec.ppm")).unwrap()
    );
}

#[test]
fn encryption_is_byte_reproducible_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    media::save_image(&d.join("orig.pgm"), &random_image(40, 30, 1, 2)).unwrap();
    assert_ok(&run(d, &["keygen", "--size", "4", "--timestamp", "123", "--out", "k.key"]));
    let pristine = std::fs::read(d.join("k.key")).unwrap();

    for name in ["one.pgm", "two.pgm"] {
        std::fs::write(d.join("k.key"), &pristine).unwrap();
        assert_ok(&run(d, &["encrypt", "--in", "orig.pgm", "--key", "k.key", "--out", name]));
    }
    assert_eq!(
        std::fs::read(d.join("one.pgm")).unwrap(),
        std::fs::read(d.join("two.pgm")).unwrap()
    );
}

#[test]
fn corrupted_key_is_rejected_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    media::save_image(&d.join("orig.pgm"), &random_image(8, 8, 1, 3)).unwrap();
    assert_ok(&run(d, &["keygen", "--size", "9", "--timestamp", "7", "--out", "k.key"]));

    // flip the first grid cell to a different value
    let text = std::fs::read_to_string(d.join("k.key")).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let grid_row = lines.iter().position(|l| l.starts_with("sudoku n=")).unwrap() + 1;
    let mut cells: Vec<u32> = lines[grid_row].split_whitespace().map(|v| v.parse().unwrap()).collect();
    cells[0] = if cells[0] == 9 { 1 } else { cells[0] + 1 };
    lines[grid_row] = cells.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    std::fs::write(d.join("k.key"), lines.join("\n") + "\n").unwrap();

    let out = run(d, &["encrypt", "--in", "orig.pgm", "--key", "k.key", "--out", "e.pgm"]);
    assert_exit(&out, 3);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("key validation failed"),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn decrypt_with_unused_key_is_a_key_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    media::save_image(&d.join("enc.pgm"), &random_image(8, 8, 1, 4)).unwrap();
    assert_ok(&run(d, &["keygen", "--size", "4", "--timestamp", "9", "--out", "k.key"]));
    let out = run(d, &["decrypt", "--in", "enc.pgm", "--key", "k.key", "--out", "dec.pgm"]);
    assert_exit(&out, 3);
}

#[test]
fn frozen_key_is_never_mutated() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    media::save_image(&d.join("orig.pgm"), &random_image(12, 12, 1, 5)).unwrap();
    assert_ok(&run(d, &["keygen", "--size", "4", "--timestamp", "11", "--out", "k.key"]));

    // fresh key: --frozen-key must refuse
    let out = run(d, &["encrypt", "--in", "orig.pgm", "--key", "k.key", "--out", "e.pgm", "--frozen-key"]);
    assert_exit(&out, 3);

    // bind the shape, then a frozen re-encryption must leave the key bytes alone
    assert_ok(&run(d, &["encrypt", "--in", "orig.pgm", "--key", "k.key", "--out", "e.pgm"]));
    let bound = std::fs::read(d.join("k.key")).unwrap();
    assert_ok(&run(d, &["encrypt", "--in", "orig.pgm", "--key", "k.key", "--out", "e2.pgm", "--frozen-key"]));
    assert_eq!(std::fs::read(d.join("k.key")).unwrap(), bound);
}

#[test]
fn wav_round_trips_in_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    media::save_wav(&d.join("orig.wav"), &random_clip(20, 2, 6)).unwrap();

    for (mode, key, enc, dec) in [
        ("audio-shuffle", "s.key", "s_enc.wav", "s_dec.wav"),
        ("audio-xor", "x.key", "x_enc.wav", "x_dec.wav"),
    ] {
        assert_ok(&run(d, &["keygen", "--size", "9", "--timestamp", "13", "--out", key]));
        assert_ok(&run(d, &["encrypt", "--in", "orig.wav", "--key", key, "--out", enc, "--media", mode]));
        assert_ok(&run(d, &["decrypt", "--in", enc, "--key", key, "--out", dec]));
        assert_eq!(
            std::fs::read(d.join("orig.wav")).unwrap(),
            std::fs::read(d.join(dec)).unwrap(),
            "{mode} did not round trip"
        );
    }
}

#[test]
fn video_directory_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let frames = (0..4).map(|i| random_image(24, 16, 3, 100 + i)).collect();
    let video = VideoSequence::new(30, 1, frames).unwrap();
    media::write_video(&video, &d.join("vid")).unwrap();

    assert_ok(&run(d, &["keygen", "--size", "4", "--timestamp", "17", "--out", "v.key"]));
    assert_ok(&run(d, &["encrypt", "--in", "vid", "--key", "v.key", "--out", "vid_enc"]));
    assert_ok(&run(d, &["decrypt", "--in", "vid_enc", "--key", "v.key", "--out", "vid_dec"]));
    let restored = media::read_video(&d.join("vid_dec")).unwrap();
    assert_eq!(restored, video);
}

#[test]
fn analyze_reports_and_checks_media_types() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    media::save_image(&d.join("img.ppm"), &random_image(27, 27, 3, 7)).unwrap();
    media::save_wav(&d.join("clip.wav"), &random_clip(50, 1, 8)).unwrap();

    let self_cmp = run(d, &["analyze", "--original", "img.ppm", "--encrypted", "img.ppm"]);
    assert_ok(&self_cmp);
    let stdout = String::from_utf8_lossy(&self_cmp.stdout);
    assert!(stdout.contains("npcr"), "{stdout}");
    assert!(stdout.contains("0.0000"), "{stdout}");

    let clip_cmp = run(d, &["analyze", "--original", "clip.wav", "--encrypted", "clip.wav"]);
    assert_ok(&clip_cmp);
    let stdout = String::from_utf8_lossy(&clip_cmp.stdout);
    assert!(stdout.contains("inf"), "identical clips report the inf sentinel: {stdout}");
    assert!(stdout.contains("mse"), "{stdout}");

    let mixed = run(d, &["analyze", "--original", "img.ppm", "--encrypted", "clip.wav"]);
    assert_exit(&mixed, 2);

    // differing dims: refused without --crop, accepted with it
    media::save_image(&d.join("small.ppm"), &random_image(20, 20, 3, 9)).unwrap();
    let no_crop = run(d, &["analyze", "--original", "img.ppm", "--encrypted", "small.ppm"]);
    assert_exit(&no_crop, 2);
    let cropped = run(d, &["analyze", "--original", "img.ppm", "--encrypted", "small.ppm", "--crop"]);
    assert_ok(&cropped);

    // CSV export
    assert_ok(&run(d, &[
        "analyze", "--original", "img.ppm", "--encrypted", "img.ppm", "--csv", "rep.csv",
    ]));
    let csv = std::fs::read_to_string(d.join("rep.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("original,encrypted,npcr_pct,uaci_pct"));
    assert_eq!(lines.next().unwrap().split(',').nth(2), Some("0"));
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_ok(&run(d, &["keygen", "--size", "4", "--timestamp", "1", "--out", "k.key"]));
    let out = run(d, &["encrypt", "--in", "nope.ppm", "--key", "k.key", "--out", "e.ppm"]);
    assert_exit(&out, 2);
}

#[test]
fn bench_keygen_suite_emits_expected_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_ok(&run(d, &["bench", "--suite", "keygen", "--out", "keygen.csv"]));
    let csv = std::fs::read_to_string(d.join("keygen.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "num_keys,time_s");
    let counts: Vec<&str> = rows[1..].iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(counts, ["10", "25", "50", "75", "100"]);
}
