//! Splitting a binarized page into text and doodle layers.
//!
//! Long straight runs (strike-throughs) are erased first, then every
//! 8-connected component is classified as doodle when it is large or when
//! enough of it is covered by dense 5×5 windows.

use crate::components::{label_components, Connectivity, LabelMap};
use crate::error::{Error, Result};
use crate::raster::BinaryImage;

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationParams {
    /// Side of the density window; only 5 is supported.
    pub density_window: usize,
    /// A window is dense when its ink count exceeds this (T1, out of 25).
    pub density_threshold: usize,
    /// Components with more pixels than this are doodles.
    pub doodle_area_threshold: usize,
    /// Components with at least this fraction of dense pixels are doodles.
    pub doodle_density_fraction: f64,
    /// Straight runs at least this long are treated as strike-throughs.
    pub strike_min_run: usize,
    pub connectivity: Connectivity,
}

impl Default for SeparationParams {
    fn default() -> Self {
        SeparationParams {
            density_window: 5,
            density_threshold: 20,
            doodle_area_threshold: 3000,
            doodle_density_fraction: 0.10,
            strike_min_run: 120,
            connectivity: Connectivity::Eight,
        }
    }
}

impl SeparationParams {
    pub fn validate(&self) -> Result<()> {
        if self.density_window != 5 {
            return Err(Error::InvalidParameter(format!(
                "density_window must be 5, got {}",
                self.density_window
            )));
        }
        if self.density_threshold > 25 {
            return Err(Error::InvalidParameter(format!(
                "density_threshold must be in 0..=25, got {}",
                self.density_threshold
            )));
        }
        if self.doodle_area_threshold < 1 {
            return Err(Error::InvalidParameter(
                "doodle_area_threshold must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.doodle_density_fraction) {
            return Err(Error::InvalidParameter(format!(
                "doodle_density_fraction must be in [0,1], got {}",
                self.doodle_density_fraction
            )));
        }
        if self.strike_min_run < 2 {
            return Err(Error::InvalidParameter(
                "strike_min_run must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// Marks the center of every 5×5 window holding more than T1 ink pixels.
///
/// Only centers at least 2 pixels from the border are examined.
pub fn density_mask(img: &BinaryImage, params: &SeparationParams) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let mut out = vec![0u8; w * h];
    if w < 5 || h < 5 {
        return BinaryImage::from_raw(w, h, out);
    }
    // summed-area table with a zero guard row/column
    let sw = w + 1;
    let mut sat = vec![0u32; sw * (h + 1)];
    for y in 0..h {
        let mut run = 0u32;
        for x in 0..w {
            run += img.is_ink(x, y) as u32;
            sat[(y + 1) * sw + x + 1] = sat[y * sw + x + 1] + run;
        }
    }
    let t1 = params.density_threshold as u32;
    for cy in 2..h - 2 {
        for cx in 2..w - 2 {
            let (x0, y0, x1, y1) = (cx - 2, cy - 2, cx + 3, cy + 3);
            let count = sat[y1 * sw + x1] + sat[y0 * sw + x0] - sat[y0 * sw + x1] - sat[y1 * sw + x0];
            if count > t1 {
                out[cy * w + cx] = 1;
            }
        }
    }
    BinaryImage::from_raw(w, h, out)
}

/// Component ids split into text and doodle, each ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Partition {
    pub text: Vec<u32>,
    pub doodle: Vec<u32>,
}

pub fn classify_components(labels: &LabelMap, mask: &BinaryImage, params: &SeparationParams) -> Result<Partition> {
    if (labels.width, labels.height) != (mask.width(), mask.height()) {
        return Err(Error::InvalidParameter(format!(
            "label map {}x{} and mask {}x{} differ in size",
            labels.width,
            labels.height,
            mask.width(),
            mask.height()
        )));
    }
    let mut dense = vec![0usize; labels.components.len() + 1];
    for (&l, &m) in labels.labels.iter().zip(mask.data()) {
        if l != 0 && m != 0 {
            dense[l as usize] += 1;
        }
    }
    let mut partition = Partition::default();
    for c in &labels.components {
        let fraction = dense[c.id as usize] as f64 / c.area as f64;
        if c.area > params.doodle_area_threshold || fraction >= params.doodle_density_fraction {
            partition.doodle.push(c.id);
        } else {
            partition.text.push(c.id);
        }
    }
    Ok(partition)
}

const DIRECTIONS: [(isize, isize); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];

/// Erases every maximal straight ink run (horizontal, vertical, or either
/// diagonal) of length at least `strike_min_run`. Runs are measured on the
/// input only.
pub fn remove_struck_lines(img: &BinaryImage, params: &SeparationParams) -> BinaryImage {
    let (w, h) = (img.width() as isize, img.height() as isize);
    let min_run = params.strike_min_run.max(1);
    let mut erase = vec![false; img.data().len()];
    let ink = |x: isize, y: isize| x >= 0 && y >= 0 && x < w && y < h && img.is_ink(x as usize, y as usize);

    for (dx, dy) in DIRECTIONS {
        for y in 0..h {
            for x in 0..w {
                // start only at the first pixel of a maximal run
                if !ink(x, y) || ink(x - dx, y - dy) {
                    continue;
                }
                let mut len = 0usize;
                let (mut cx, mut cy) = (x, y);
                while ink(cx, cy) {
                    len += 1;
                    cx += dx;
                    cy += dy;
                }
                if len >= min_run {
                    let (mut cx, mut cy) = (x, y);
                    for _ in 0..len {
                        erase[(cy * w + cx) as usize] = true;
                        cx += dx;
                        cy += dy;
                    }
                }
            }
        }
    }

    let data = img
        .data()
        .iter()
        .zip(&erase)
        .map(|(&v, &e)| if e { 0 } else { v })
        .collect();
    BinaryImage::from_raw(img.width(), img.height(), data)
}

/// Text and doodle layers of a page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub text: BinaryImage,
    pub doodle: BinaryImage,
}

pub fn separate(img: &BinaryImage, params: &SeparationParams) -> Result<Separation> {
    params.validate()?;
    let cleaned = remove_struck_lines(img, params);
    let labels = label_components(&cleaned, params.connectivity);
    let mask = density_mask(&cleaned, params);
    let partition = classify_components(&labels, &mask, params)?;

    let n = labels.components.len() + 1;
    let mut is_text = vec![false; n];
    let mut is_doodle = vec![false; n];
    for &id in &partition.text {
        is_text[id as usize] = true;
    }
    for &id in &partition.doodle {
        is_doodle[id as usize] = true;
    }
    Ok(Separation {
        text: labels.select(&is_text),
        doodle: labels.select(&is_doodle),
    })
}
