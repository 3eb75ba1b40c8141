//! Two-cluster fuzzy C-means over scalar intensity.
//!
//! Pixels with equal intensity have equal memberships, so every FCM step is
//! evaluated over the 256-bin intensity histogram with each bin weighted by
//! its pixel count. This is the same objective and the same fixed-point
//! iteration as the per-pixel formulation, summed in a fixed order.

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::raster::{BinaryImage, GrayImage};

#[derive(Debug, Clone, PartialEq)]
pub struct FcmParams {
    /// Number of clusters; binarization requires exactly 2.
    pub cluster_count: usize,
    /// Membership exponent `m > 1`.
    pub fuzzifier: f64,
    /// Stop once no center moves by this many gray levels or more.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FcmParams {
    fn default() -> Self {
        FcmParams {
            cluster_count: 2,
            fuzzifier: 2.0,
            tolerance: 1e-3,
            max_iterations: 100,
        }
    }
}

impl FcmParams {
    pub fn validate(&self) -> Result<()> {
        if self.cluster_count != 2 {
            return Err(Error::InvalidParameter(format!(
                "fcm cluster_count must be 2, got {}",
                self.cluster_count
            )));
        }
        if !(self.fuzzifier > 1.0 && self.fuzzifier.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "fcm fuzzifier must be > 1, got {}",
                self.fuzzifier
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "fcm tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "fcm max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Result of running FCM to convergence.
#[derive(Debug, Clone, PartialEq)]
pub struct FcmOutcome {
    /// Final centers, in the order of the initial centers.
    pub centers: [f64; 2],
    pub iterations: usize,
    pub converged: bool,
    /// Objective `J = Σ_c Σ_k u_ck^m d_ck²` after each center update.
    pub objective: Vec<f64>,
}

/// Membership of intensity `x` in each of the two clusters.
///
/// A sample sitting exactly on a center belongs fully to it.
pub fn memberships(x: f64, centers: [f64; 2], fuzzifier: f64) -> [f64; 2] {
    let d = [(x - centers[0]).abs(), (x - centers[1]).abs()];
    if d[0] == 0.0 && d[1] == 0.0 {
        return [0.5, 0.5];
    }
    if d[0] == 0.0 {
        return [1.0, 0.0];
    }
    if d[1] == 0.0 {
        return [0.0, 1.0];
    }
    let p = 2.0 / (fuzzifier - 1.0);
    let mut u = [0.0; 2];
    for c in 0..2 {
        let s: f64 = (0..2).map(|j| (d[c] / d[j]).powf(p)).sum();
        u[c] = 1.0 / s;
    }
    u
}

fn objective(hist: &[u64; 256], centers: [f64; 2], u: &[[f64; 2]; 256], m: f64) -> f64 {
    let mut j = 0.0;
    for (x, &n) in hist.iter().enumerate() {
        if n == 0 {
            continue;
        }
        for c in 0..2 {
            let d = x as f64 - centers[c];
            j += n as f64 * u[x][c].powf(m) * d * d;
        }
    }
    j
}

/// Runs FCM on an intensity histogram from the given initial centers.
pub fn fcm_cluster(hist: &[u64; 256], params: &FcmParams, init: [f64; 2]) -> Result<FcmOutcome> {
    params.validate()?;
    let m = params.fuzzifier;
    let mut centers = init;
    let mut u = [[0.0f64; 2]; 256];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < params.max_iterations {
        for (x, row) in u.iter_mut().enumerate() {
            *row = memberships(x as f64, centers, m);
        }
        let mut next = centers;
        for (c, center) in next.iter_mut().enumerate() {
            let (mut num, mut den) = (0.0, 0.0);
            for (x, &n) in hist.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let w = n as f64 * u[x][c].powf(m);
                num += w * x as f64;
                den += w;
            }
            if den > 0.0 {
                *center = num / den;
            }
        }
        iterations += 1;
        let shift = (next[0] - centers[0]).abs().max((next[1] - centers[1]).abs());
        centers = next;
        trace.push(objective(hist, centers, &u, m));
        if shift < params.tolerance {
            converged = true;
            break;
        }
    }

    Ok(FcmOutcome {
        centers,
        iterations,
        converged,
        objective: trace,
    })
}

/// Which of the 256 intensities are ink for the given final centers.
///
/// The cluster with the lower center is ink; a level is ink only when its
/// ink membership strictly exceeds its background membership.
pub fn ink_levels(centers: [f64; 2], fuzzifier: f64) -> [bool; 256] {
    let mut ink = [false; 256];
    if centers[0] == centers[1] {
        return ink;
    }
    let lo = if centers[0] < centers[1] { 0 } else { 1 };
    for (x, flag) in ink.iter_mut().enumerate() {
        let u = memberships(x as f64, centers, fuzzifier);
        *flag = u[lo] > u[1 - lo];
    }
    ink
}

/// FCM binarization initialised at the image's min and max intensity.
pub fn fcm_binarize(img: &GrayImage, params: &FcmParams) -> Result<BinaryImage> {
    fcm_binarize_with(img, params, Execution::default())
}

pub fn fcm_binarize_with(img: &GrayImage, params: &FcmParams, exec: Execution) -> Result<BinaryImage> {
    params.validate()?;
    let (w, h) = (img.width(), img.height());
    let hist = intensity_histogram(img, exec);
    let lo = hist.iter().position(|&n| n > 0).unwrap_or(0);
    let hi = hist.iter().rposition(|&n| n > 0).unwrap_or(0);
    if lo == hi {
        return Ok(BinaryImage::from_raw(w, h, vec![0; w * h]));
    }
    let outcome = fcm_cluster(&hist, params, [lo as f64, hi as f64])?;
    let ink = ink_levels(outcome.centers, params.fuzzifier);
    let mut out = vec![0u8; w * h];
    exec::for_each_row_mut(exec, &mut out, w, |y, row| {
        for (dst, &v) in row.iter_mut().zip(img.row(y)) {
            *dst = ink[v as usize] as u8;
        }
    });
    Ok(BinaryImage::from_raw(w, h, out))
}

fn intensity_histogram(img: &GrayImage, exec: Execution) -> [u64; 256] {
    let w = img.width();
    let partial = exec::map_range(exec, img.height(), |y| {
        let mut hist = [0u64; 256];
        for &v in &img.data()[y * w..(y + 1) * w] {
            hist[v as usize] += 1;
        }
        hist
    });
    let mut hist = [0u64; 256];
    for p in partial {
        for (a, b) in hist.iter_mut().zip(p) {
            *a += b;
        }
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_delta() -> GrayImage {
        GrayImage::from_fn(10, 10, |_, y| if y < 5 { 0 } else { 255 }).unwrap()
    }

    #[test]
    fn two_delta_is_a_fixed_point() {
        let img = two_delta();
        let out = fcm_cluster(&img.intensity_histogram(), &FcmParams::default(), [0.0, 255.0]).unwrap();
        assert_eq!(out.centers, [0.0, 255.0]);
        assert!(out.converged);
        let bin = fcm_binarize(&img, &FcmParams::default()).unwrap();
        for y in 0..10 {
            for x in 0..10 {
                assert_eq!(bin.is_ink(x, y), y < 5);
            }
        }
    }

    #[test]
    fn constant_image_is_background() {
        let img = GrayImage::filled(8, 8, 128).unwrap();
        assert!(fcm_binarize(&img, &FcmParams::default()).unwrap().is_blank());
    }

    #[test]
    fn memberships_handle_coincident_center() {
        assert_eq!(memberships(10.0, [10.0, 200.0], 2.0), [1.0, 0.0]);
        assert_eq!(memberships(200.0, [10.0, 200.0], 2.0), [0.0, 1.0]);
        let u = memberships(105.0, [10.0, 200.0], 2.0);
        assert!((u[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn midpoint_tie_goes_to_background() {
        let ink = ink_levels([100.0, 200.0], 2.0);
        assert!(ink[149]);
        assert!(!ink[150]);
        assert!(!ink[151]);
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = [
            FcmParams { cluster_count: 3, ..FcmParams::default() },
            FcmParams { fuzzifier: 1.0, ..FcmParams::default() },
            FcmParams { tolerance: 0.0, ..FcmParams::default() },
            FcmParams { max_iterations: 0, ..FcmParams::default() },
        ];
        for p in bad {
            assert!(fcm_binarize(&two_delta(), &p).is_err());
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let img = GrayImage::from_fn(37, 29, |x, y| ((x * 31 + y * 17) % 256) as u8).unwrap();
        let p = FcmParams::default();
        assert_eq!(
            fcm_binarize_with(&img, &p, Execution::Sequential).unwrap(),
            fcm_binarize_with(&img, &p, Execution::Parallel).unwrap()
        );
    }

    fn hist_from(samples: &[u8]) -> [u64; 256] {
        let mut h = [0u64; 256];
        for &s in samples {
            h[s as usize] += 1;
        }
        h
    }

    proptest! {
        #[test]
        fn objective_never_increases(samples in prop::collection::vec(any::<u8>(), 2..200),
                                     m in 1.2f64..4.0) {
            let hist = hist_from(&samples);
            let lo = *samples.iter().min().unwrap() as f64;
            let hi = *samples.iter().max().unwrap() as f64;
            prop_assume!(lo < hi);
            let p = FcmParams { fuzzifier: m, ..FcmParams::default() };
            let out = fcm_cluster(&hist, &p, [lo, hi]).unwrap();
            for pair in out.objective.windows(2) {
                prop_assert!(pair[1] <= pair[0] + 1e-9, "{:?}", out.objective);
            }
            for c in out.centers {
                prop_assert!((0.0..=255.0).contains(&c));
            }
        }

        #[test]
        fn memberships_sum_to_one(x in 0.0f64..=255.0, a in 0.0f64..=255.0, b in 0.0f64..=255.0, m in 1.1f64..5.0) {
            prop_assume!(a != b);
            let u = memberships(x, [a, b], m);
            prop_assert!((u[0] + u[1] - 1.0).abs() < 1e-9);
        }

        #[test]
        fn swapped_initialisation_gives_same_image(samples in prop::collection::vec(any::<u8>(), 4..64)) {
            let img = GrayImage::new(samples.len(), 1, samples.clone()).unwrap();
            let hist = img.intensity_histogram();
            let lo = *samples.iter().min().unwrap() as f64;
            let hi = *samples.iter().max().unwrap() as f64;
            prop_assume!(lo < hi);
            let p = FcmParams::default();
            let a = fcm_cluster(&hist, &p, [lo, hi]).unwrap();
            let b = fcm_cluster(&hist, &p, [hi, lo]).unwrap();
            prop_assert_eq!(ink_levels(a.centers, 2.0), ink_levels(b.centers, 2.0));
        }
    }
}
