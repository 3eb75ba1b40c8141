//! Text line detection on the text layer.
//!
//! Gaussian smoothing, 1×W block smearing, removal of isolated points and
//! small smears, then one line per 8-connected smear component, with
//! unusually tall components cut at deep minima of their row histogram.

mod profile;
mod smooth;

pub use profile::{classify_rows, horizontal_histogram, split_overlapping, Histogram, RowClass, RowInterval};
pub use smooth::{gaussian_kernel, gaussian_smooth, gaussian_smooth_with, smear, smear_with};

use crate::components::{clean_isolated, label_components, remove_small, Component, Connectivity, LabelMap};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::raster::BinaryImage;

#[derive(Debug, Clone, PartialEq)]
pub struct SmearParams {
    /// Block width W.
    pub block_width: usize,
    /// A block is filled when it holds more than T ink pixels.
    pub block_ink_threshold: usize,
    pub gaussian_sigma: f64,
    /// Smear components below this many pixels are discarded.
    pub min_smear_area: usize,
    /// Rows with fewer than T2 ink pixels are valleys.
    pub valley_threshold: usize,
    /// Components taller than this multiple of the median height are
    /// candidates for splitting.
    pub overlap_height_ratio: f64,
    /// Adjacency used for smear components.
    pub connectivity: Connectivity,
}

impl Default for SmearParams {
    fn default() -> Self {
        SmearParams {
            block_width: 20,
            block_ink_threshold: 2,
            gaussian_sigma: 1.0,
            min_smear_area: 150,
            valley_threshold: 5,
            overlap_height_ratio: 1.6,
            connectivity: Connectivity::Eight,
        }
    }
}

impl SmearParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.block_width < 2 {
            return bad(format!("block_width must be >= 2, got {}", self.block_width));
        }
        if self.block_ink_threshold < 1 || self.block_ink_threshold >= self.block_width {
            return bad(format!(
                "block_ink_threshold must be in 1..block_width, got {}",
                self.block_ink_threshold
            ));
        }
        if !(self.gaussian_sigma > 0.0 && self.gaussian_sigma.is_finite()) {
            return bad(format!("gaussian_sigma must be > 0, got {}", self.gaussian_sigma));
        }
        if self.min_smear_area < 1 {
            return bad("min_smear_area must be at least 1".into());
        }
        if !(self.overlap_height_ratio > 1.0 && self.overlap_height_ratio.is_finite()) {
            return bad(format!(
                "overlap_height_ratio must be > 1, got {}",
                self.overlap_height_ratio
            ));
        }
        Ok(())
    }
}

/// Axis-aligned line rectangle, origin top-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineBox {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl LineBox {
    pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        LineBox { x, y, width, height }
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }
}

/// Everything [`detect_lines`] computes along the way.
#[derive(Debug, Clone)]
pub struct LineDetection {
    /// Sorted by top edge, then left edge.
    pub boxes: Vec<LineBox>,
    /// Smeared image after isolated-point and small-component removal.
    pub smeared: BinaryImage,
    /// Row histogram of `smeared`.
    pub histogram: Histogram,
}

pub fn detect_lines(text: &BinaryImage, params: &SmearParams) -> Result<Vec<LineBox>> {
    Ok(detect_lines_with(text, params, Execution::default())?.boxes)
}

pub fn detect_lines_with(text: &BinaryImage, params: &SmearParams, exec: Execution) -> Result<LineDetection> {
    params.validate()?;
    let smoothed = gaussian_smooth_with(text, params.gaussian_sigma, exec);
    let smeared = smear_with(&smoothed, params, exec);
    let cleaned = remove_small(&clean_isolated(&smeared), params.min_smear_area, params.connectivity);
    let labels = label_components(&cleaned, params.connectivity);
    let median = median_height(&labels.components);

    let per_component = exec::map_slice(exec, &labels.components, |comp| {
        let counts = component_histogram(&labels, comp);
        split_overlapping(comp, &counts, median, params)
            .into_iter()
            .map(|rows| interval_box(&labels, comp, rows))
            .collect::<Vec<_>>()
    });
    let mut boxes: Vec<LineBox> = per_component.into_iter().flatten().collect();
    boxes.sort_by_key(|b| (b.y, b.x, b.height, b.width));

    let histogram = horizontal_histogram(&cleaned);
    Ok(LineDetection {
        boxes,
        smeared: cleaned,
        histogram,
    })
}

/// Median component height; the mean of the two middle values for even counts.
pub fn median_height(components: &[Component]) -> f64 {
    let mut heights: Vec<usize> = components.iter().map(Component::height).collect();
    if heights.is_empty() {
        return 1.0;
    }
    heights.sort_unstable();
    let n = heights.len();
    if n % 2 == 1 {
        heights[n / 2] as f64
    } else {
        (heights[n / 2 - 1] + heights[n / 2]) as f64 / 2.0
    }
}

/// Row histogram of one component's own pixels over its row extent.
fn component_histogram(labels: &LabelMap, comp: &Component) -> Vec<u32> {
    let b = comp.bbox;
    (b.y..=b.bottom())
        .map(|y| {
            (b.x..=b.right())
                .filter(|&x| labels.label(x, y) == comp.id)
                .count() as u32
        })
        .collect()
}

/// Box spanning `rows` and the columns the component occupies within them.
fn interval_box(labels: &LabelMap, comp: &Component, rows: RowInterval) -> LineBox {
    let b = comp.bbox;
    let (mut x0, mut x1) = (usize::MAX, 0);
    for y in rows.top..=rows.bottom {
        for x in b.x..=b.right() {
            if labels.label(x, y) == comp.id {
                x0 = x0.min(x);
                x1 = x1.max(x);
            }
        }
    }
    if x0 == usize::MAX {
        (x0, x1) = (b.x, b.right());
    }
    LineBox::new(x0, rows.top, x1 - x0 + 1, rows.height())
}
