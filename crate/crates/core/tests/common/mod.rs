//! Brute-force reference implementations used by the integration tests.
//! Each one follows the textbook definition directly and shares no code
//! with the library kernels it checks.
#![allow(dead_code)]

use manuscript_lines::raster::{BinaryImage, GrayImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_gray(w: usize, h: usize, rng: &mut ChaCha8Rng) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.gen()).unwrap()
}

pub fn random_binary(w: usize, h: usize, density: f64, rng: &mut ChaCha8Rng) -> BinaryImage {
    BinaryImage::from_fn(w, h, |_, _| rng.gen_bool(density)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gathers the nine replicated-border samples, sorts them, takes the fifth.
pub fn median_oracle(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width() as isize, img.height() as isize);
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let mut v = Vec::with_capacity(9);
        for dy in -1..=1isize {
            for dx in -1..=1isize {
                let sx = (x as isize + dx).clamp(0, w - 1) as usize;
                let sy = (y as isize + dy).clamp(0, h - 1) as usize;
                v.push(img.get(sx, sy));
            }
        }
        v.sort();
        v[4]
    })
    .unwrap()
}

/// Flood fill from each unlabeled ink pixel in raster order.
pub fn flood_fill_labels(img: &BinaryImage, eight: bool) -> Vec<u32> {
    let (w, h) = (img.width(), img.height());
    let mut labels = vec![0u32; w * h];
    let mut next = 0;
    for sy in 0..h {
        for sx in 0..w {
            if !img.is_ink(sx, sy) || labels[sy * w + sx] != 0 {
                continue;
            }
            next += 1;
            let mut stack = vec![(sx, sy)];
            labels[sy * w + sx] = next;
            while let Some((x, y)) = stack.pop() {
                for dy in -1..=1isize {
                    for dx in -1..=1isize {
                        if (dx, dy) == (0, 0) || (!eight && dx != 0 && dy != 0) {
                            continue;
                        }
                        let (nx, ny) = (x as isize + dx, y as isize + dy);
                        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                            continue;
                        }
                        let (nx, ny) = (nx as usize, ny as usize);
                        if img.is_ink(nx, ny) && labels[ny * w + nx] == 0 {
                            labels[ny * w + nx] = next;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
        }
    }
    labels
}

pub fn row_counts_oracle(img: &BinaryImage) -> Vec<u32> {
    let mut counts = Vec::new();
    for y in 0..img.height() {
        let mut n = 0;
        for x in 0..img.width() {
            if img.is_ink(x, y) {
                n += 1;
            }
        }
        counts.push(n);
    }
    counts
}

/// Recounts every W-wide block of every row independently.
pub fn smear_oracle(img: &BinaryImage, w_block: usize, t: usize) -> BinaryImage {
    BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        let start = (x / w_block) * w_block;
        let end = (start + w_block).min(img.width());
        let n = (start..end).filter(|&xx| img.is_ink(xx, y)).count();
        img.is_ink(x, y) || n > t
    })
    .unwrap()
}

pub fn clean_oracle(img: &BinaryImage) -> BinaryImage {
    let (w, h) = (img.width() as isize, img.height() as isize);
    BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        if !img.is_ink(x, y) {
            return false;
        }
        let mut neighbours = 0;
        for dy in -1..=1isize {
            for dx in -1..=1isize {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if (dx, dy) != (0, 0) && nx >= 0 && ny >= 0 && nx < w && ny < h && img.is_ink(nx as usize, ny as usize) {
                    neighbours += 1;
                }
            }
        }
        neighbours > 0
    })
    .unwrap()
}

/// Thresholds (ink iff value < t) with minimum total within-class squared
/// deviation; when the minimum is a plateau the plateau's centre is returned.
pub fn variance_threshold_oracle(samples: &[u8]) -> f64 {
    let mut best = f64::INFINITY;
    let mut argmins = Vec::new();
    for t in 1..=255u32 {
        let (a, b): (Vec<f64>, Vec<f64>) = {
            let a: Vec<f64> = samples.iter().filter(|&&s| (s as u32) < t).map(|&s| s as f64).collect();
            let b: Vec<f64> = samples.iter().filter(|&&s| (s as u32) >= t).map(|&s| s as f64).collect();
            (a, b)
        };
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let ssd = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|x| (x - m) * (x - m)).sum::<f64>()
        };
        let total = ssd(&a) + ssd(&b);
        if total < best - 1e-9 {
            best = total;
            argmins = vec![t];
        } else if (total - best).abs() <= 1e-9 {
            argmins.push(t);
        }
    }
    let lo = *argmins.first().unwrap() as f64;
    let hi = *argmins.last().unwrap() as f64;
    (lo + hi) / 2.0
}

/// Box–Muller normal samples, rounded and clipped to [0,255].
pub fn clipped_normal(n: usize, mean: f64, sd: f64, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..n)
        .map(|_| {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen();
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            (mean + sd * z).round().clamp(0.0, 255.0) as u8
        })
        .collect()
}
