use super::SmearParams;
use crate::exec::{self, Execution};
use crate::raster::BinaryImage;

/// Normalized 1-D Gaussian weights for offsets `-r..=r`, `r = ceil(3σ)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let r = (3.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-r..=r)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Gaussian blur of the ink indicator, re-binarized at 0.5.
///
/// The 2-D kernel is the outer product of [`gaussian_kernel`] with itself,
/// applied separably with edge-replicated borders.
pub fn gaussian_smooth(img: &BinaryImage, sigma: f64) -> BinaryImage {
    gaussian_smooth_with(img, sigma, Execution::default())
}

pub fn gaussian_smooth_with(img: &BinaryImage, sigma: f64, exec: Execution) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let kernel = gaussian_kernel(sigma);
    let r = (kernel.len() / 2) as isize;
    let clamp = |i: isize, n: usize| i.clamp(0, n as isize - 1) as usize;

    let mut horizontal = vec![0f64; w * h];
    exec::for_each_row_mut(exec, &mut horizontal, w, |y, row| {
        let src = img.row(y);
        for (x, out) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &wt) in kernel.iter().enumerate() {
                let sx = clamp(x as isize + k as isize - r, w);
                acc += wt * src[sx] as f64;
            }
            *out = acc;
        }
    });

    let mut out = vec![0u8; w * h];
    exec::for_each_row_mut(exec, &mut out, w, |y, row| {
        for (x, px) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &wt) in kernel.iter().enumerate() {
                let sy = clamp(y as isize + k as isize - r, h);
                acc += wt * horizontal[sy * w + x];
            }
            *px = (acc >= 0.5) as u8;
        }
    });
    BinaryImage::from_raw(w, h, out)
}

/// Black run-length smearing over non-overlapping 1×W blocks.
///
/// Each row is tiled left to right into blocks of width W (the last block
/// may be narrower); a block holding more than T ink pixels is filled.
pub fn smear(img: &BinaryImage, params: &SmearParams) -> BinaryImage {
    smear_with(img, params, Execution::default())
}

pub fn smear_with(img: &BinaryImage, params: &SmearParams, exec: Execution) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let mut out = img.data().to_vec();
    let bw = params.block_width.max(1);
    let t = params.block_ink_threshold;
    exec::for_each_row_mut(exec, &mut out, w, |_, row| {
        for block in row.chunks_mut(bw) {
            let n = block.iter().filter(|&&v| v != 0).count();
            if n > t {
                block.fill(1);
            }
        }
    });
    BinaryImage::from_raw(w, h, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_normalized_and_symmetric() {
        for sigma in [0.3, 1.0, 2.5] {
            let k = gaussian_kernel(sigma);
            assert_eq!(k.len() as f64, 2.0 * (3.0 * sigma).ceil() + 1.0);
            assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for i in 0..k.len() {
                assert_eq!(k[i], k[k.len() - 1 - i]);
            }
        }
    }

    #[test]
    fn blank_and_solid_are_fixed() {
        let blank = BinaryImage::blank(12, 9).unwrap();
        assert_eq!(gaussian_smooth(&blank, 1.7), blank);
        let solid = BinaryImage::from_fn(12, 9, |_, _| true).unwrap();
        assert_eq!(gaussian_smooth(&solid, 1.7), solid);
    }

    #[test]
    fn single_pixel_vanishes() {
        let img = BinaryImage::from_fn(15, 15, |x, y| (x, y) == (7, 7)).unwrap();
        // oracle: response at the pixel itself is the squared central 1-D weight
        let k = gaussian_kernel(1.0);
        let peak = k[k.len() / 2] * k[k.len() / 2];
        assert!((peak - 0.1592).abs() < 1e-3 && peak < 0.5);
        assert!(gaussian_smooth(&img, 1.0).is_blank());
    }

    #[test]
    fn smear_respects_strict_threshold() {
        let p = SmearParams { block_width: 5, block_ink_threshold: 2, ..SmearParams::default() };
        let exactly_t = BinaryImage::new(5, 1, vec![1, 0, 1, 0, 0]).unwrap();
        assert_eq!(smear(&exactly_t, &p), exactly_t);
        let above = BinaryImage::new(7, 1, vec![1, 1, 0, 1, 0, 1, 0]).unwrap();
        // first block fills; trailing 2-wide block holds 1 <= T
        assert_eq!(smear(&above, &p).data(), &[1, 1, 1, 1, 1, 1, 0]);
        let blank = BinaryImage::blank(9, 3).unwrap();
        assert_eq!(smear(&blank, &p), blank);
    }
}
