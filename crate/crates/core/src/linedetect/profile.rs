//! Horizontal histogram analysis and splitting of merged lines.

use super::SmearParams;
use crate::components::Component;
use crate::raster::BinaryImage;

/// Per-row ink counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u32>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// `row,count` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,count\n");
        for (r, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("{r},{c}\n"));
        }
        s
    }
}

pub fn horizontal_histogram(img: &BinaryImage) -> Histogram {
    Histogram {
        counts: (0..img.height())
            .map(|y| img.row(y).iter().filter(|&&v| v != 0).count() as u32)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowClass {
    Peak,
    Valley,
}

/// A row is a valley when it holds fewer than T2 ink pixels.
pub fn classify_rows(h: &Histogram, params: &SmearParams) -> Vec<RowClass> {
    h.counts
        .iter()
        .map(|&c| {
            if (c as usize) < params.valley_threshold {
                RowClass::Valley
            } else {
                RowClass::Peak
            }
        })
        .collect()
}

/// Inclusive range of image rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowInterval {
    pub top: usize,
    pub bottom: usize,
}

impl RowInterval {
    pub fn height(&self) -> usize {
        self.bottom - self.top + 1
    }
}

/// Splits a component's row extent into one interval per text line.
///
/// `counts` is the component's own histogram over its row extent
/// (`counts[0]` is the component's top row). A component no taller than
/// `overlap_height_ratio × median_height` is one line. Otherwise the
/// minimum-count row `m` of the middle half is a cut when the peaks on
/// both sides exceed `max(2·counts[m], T2)` and each side keeps at least
/// `min_smear_area` pixels; both halves are then examined again.
pub fn split_overlapping(
    comp: &Component,
    counts: &[u32],
    median_height: f64,
    params: &SmearParams,
) -> Vec<RowInterval> {
    debug_assert_eq!(counts.len(), comp.height());
    let mut local = Vec::new();
    split_range(counts, 0, counts.len() - 1, median_height, params, &mut local);
    let top = comp.bbox.y;
    local
        .into_iter()
        .map(|(a, b)| RowInterval {
            top: top + a,
            bottom: top + b,
        })
        .collect()
}

fn split_range(
    counts: &[u32],
    lo: usize,
    hi: usize,
    median_height: f64,
    params: &SmearParams,
    out: &mut Vec<(usize, usize)>,
) {
    match find_cut(counts, lo, hi, median_height, params) {
        Some(m) => {
            split_range(counts, lo, m, median_height, params, out);
            split_range(counts, m + 1, hi, median_height, params, out);
        }
        None => out.push((lo, hi)),
    }
}

fn find_cut(counts: &[u32], lo: usize, hi: usize, median_height: f64, params: &SmearParams) -> Option<usize> {
    let len = hi - lo + 1;
    if (len as f64) <= params.overlap_height_ratio * median_height || len < 3 {
        return None;
    }
    let margin = (len / 4).max(1);
    let (first, last) = (lo + margin, hi - margin);
    if first > last {
        return None;
    }
    let min = *counts[first..=last].iter().min()?;
    let start = first + counts[first..=last].iter().position(|&c| c == min)?;
    let mut end = start;
    while end < last && counts[end + 1] == min {
        end += 1;
    }
    // centre of the flat bottom of the first valley
    let m = (start + end) / 2;

    let above = &counts[lo..m];
    let below = &counts[m + 1..=hi];
    let floor = (2 * min as u64).max(params.valley_threshold as u64);
    let drastic = |side: &[u32]| side.iter().max().is_some_and(|&p| p as u64 > floor);
    let mass = |side: &[u32]| side.iter().map(|&c| c as u64).sum::<u64>();
    let upper_mass = mass(above) + counts[m] as u64;
    if drastic(above)
        && drastic(below)
        && upper_mass >= params.min_smear_area as u64
        && mass(below) >= params.min_smear_area as u64
    {
        Some(m)
    } else {
        None
    }
}
