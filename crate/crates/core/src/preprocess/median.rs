use crate::exec::{self, Execution};
use crate::raster::GrayImage;

/// 3×3 median filter with edge-replicated borders.
pub fn median_filter_3x3(img: &GrayImage) -> GrayImage {
    median_filter_3x3_with(img, Execution::default())
}

pub fn median_filter_3x3_with(img: &GrayImage, exec: Execution) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let mut out = vec![0u8; w * h];
    exec::for_each_row_mut(exec, &mut out, w, |y, row| {
        let rows = [img.row(y.saturating_sub(1)), img.row(y), img.row((y + 1).min(h - 1))];
        for (x, px) in row.iter_mut().enumerate() {
            let cols = [x.saturating_sub(1), x, (x + 1).min(w - 1)];
            let mut win = [0u8; 9];
            for (i, r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    win[i * 3 + j] = r[c];
                }
            }
            *px = median9(win);
        }
    });
    GrayImage::new(w, h, out).expect("dimensions preserved")
}

#[inline]
fn median9(mut v: [u8; 9]) -> u8 {
    let (_, m, _) = v.select_nth_unstable(4);
    *m
}
