//! Synthetic handwritten-like pages with exact line ground truth.
//!
//! Each line is a horizontal band of glyph cells; every glyph is a handful
//! of 3 px wide pen strokes drawn until the cell reaches `ink_fill`;
//! strokes that would crowd a 5×5 window are dropped.
//! Optional extras: one filled disc (a doodle), one horizontal strike
//! through a line, and a vertical shear that tilts every line.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::read_entries;
use crate::error::{Error, Result};
use crate::linedetect::LineBox;
use crate::raster::GrayImage;

const MARGIN: usize = 20;
const PEN_HALF: isize = 1;
/// Strokes may not push any 5×5 window to this many ink pixels.
const DENSE_LIMIT: usize = 17;
const STEM_PITCH: f64 = 7.0;
const MAX_STROKE_ATTEMPTS: usize = 24;
const PAPER: u8 = 255;
const DOODLE: u16 = u16::MAX;
const STRIKE: u16 = u16::MAX - 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub page_width: usize,
    pub page_height: usize,
    /// Inclusive range.
    pub line_count: (usize, usize),
    /// Inclusive range, pixels.
    pub line_height: (usize, usize),
    /// Inclusive range of blank rows between consecutive bands, pixels.
    pub gap: (usize, usize),
    /// Target ink fraction of each glyph cell.
    pub ink_fill: f64,
    pub doodle_radius: Option<usize>,
    pub strike_length: Option<usize>,
    /// Line tilt produced by shearing columns vertically.
    pub skew_degrees: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            page_width: 640,
            page_height: 1100,
            line_count: (5, 12),
            line_height: (24, 40),
            gap: (24, 40),
            ink_fill: 0.25,
            doodle_radius: None,
            strike_length: None,
            skew_degrees: 0.0,
            seed: 0,
        }
    }
}

impl SynthSpec {
    fn shear_extent(&self) -> usize {
        let tan = self.skew_degrees.to_radians().tan().abs();
        (self.page_width as f64 / 2.0 * tan).ceil() as usize + 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        let range_ok = |(a, b): (usize, usize)| a <= b;
        if self.page_width < 2 * MARGIN + 80 || self.page_height < 2 * MARGIN + 10 {
            return bad(format!(
                "page {}x{} is too small",
                self.page_width, self.page_height
            ));
        }
        if !range_ok(self.line_count) || !range_ok(self.line_height) || !range_ok(self.gap) {
            return bad("ranges must satisfy min <= max".into());
        }
        if self.line_height.0 < 4 || self.gap.0 < 1 {
            return bad("line heights must be >= 4 and gaps >= 1".into());
        }
        if !(self.ink_fill > 0.0 && self.ink_fill <= 1.0) {
            return bad(format!("ink_fill must be in (0,1], got {}", self.ink_fill));
        }
        if !(-10.0..=10.0).contains(&self.skew_degrees) {
            return bad(format!("skew_degrees must be in [-10,10], got {}", self.skew_degrees));
        }
        let extent = self.shear_extent();
        let (n, h, g) = (self.line_count.1, self.line_height.1, self.gap.1);
        let worst = 2 * (MARGIN + extent) + n * h + n.saturating_sub(1) * g;
        if worst > self.page_height {
            return bad(format!(
                "page height {} cannot hold {n} lines of height {h} with gaps {g} (needs {worst})",
                self.page_height
            ));
        }
        if let Some(r) = self.doodle_radius {
            if 2 * (r + MARGIN + extent) > self.page_height || 2 * (r + MARGIN) > self.page_width {
                return bad(format!("doodle radius {r} does not fit the page"));
            }
        }
        if let Some(l) = self.strike_length {
            if l == 0 || l > self.page_width - 2 * MARGIN - 60 {
                return bad(format!("strike length {l} does not fit a line"));
            }
        }
        Ok(())
    }
}

pub fn parse_synth_spec(text: &str) -> Result<SynthSpec> {
    let mut s = SynthSpec::default();
    for e in read_entries(text)? {
        let nonzero = |v: usize| if v == 0 { None } else { Some(v) };
        match e.key.as_str() {
            "page_width" => s.page_width = e.parse()?,
            "page_height" => s.page_height = e.parse()?,
            "line_count_min" => s.line_count.0 = e.parse()?,
            "line_count_max" => s.line_count.1 = e.parse()?,
            "line_height_min" => s.line_height.0 = e.parse()?,
            "line_height_max" => s.line_height.1 = e.parse()?,
            "gap_min" => s.gap.0 = e.parse()?,
            "gap_max" => s.gap.1 = e.parse()?,
            "ink_fill" => s.ink_fill = e.parse()?,
            "doodle_radius" => s.doodle_radius = nonzero(e.parse()?),
            "strike_length" => s.strike_length = nonzero(e.parse()?),
            "skew_degrees" => s.skew_degrees = e.parse()?,
            "seed" => s.seed = e.parse()?,
            _ => return Err(e.unknown()),
        }
    }
    s.validate()?;
    Ok(s)
}

pub fn load_synth_spec(path: impl AsRef<Path>) -> Result<SynthSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_synth_spec(&text)
}

pub fn format_synth_spec(s: &SynthSpec) -> String {
    format!(
        "page_width = {}\npage_height = {}\nline_count_min = {}\nline_count_max = {}\n\
         line_height_min = {}\nline_height_max = {}\ngap_min = {}\ngap_max = {}\nink_fill = {}\n\
         doodle_radius = {}\nstrike_length = {}\nskew_degrees = {}\nseed = {}\n",
        s.page_width,
        s.page_height,
        s.line_count.0,
        s.line_count.1,
        s.line_height.0,
        s.line_height.1,
        s.gap.0,
        s.gap.1,
        s.ink_fill,
        s.doodle_radius.unwrap_or(0),
        s.strike_length.unwrap_or(0),
        s.skew_degrees,
        s.seed
    )
}

/// A generated page and the tight bounding box of every text line's ink.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthPage {
    pub image: GrayImage,
    /// Top to bottom.
    pub lines: Vec<LineBox>,
    /// Band rows `(top, height)` before shearing.
    pub bands: Vec<(usize, usize)>,
}

struct Canvas {
    width: usize,
    height: usize,
    labels: Vec<u16>,
}

impl Canvas {
    /// Paints a segment with a pen 3 px wide across its minor axis; returns
    /// the indices of newly inked pixels.
    fn stroke(&mut self, a: (f64, f64), b: (f64, f64), label: u16) -> Vec<usize> {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let steep = dy.abs() >= dx.abs();
        let (from, to) = if steep { (a.1, b.1) } else { (a.0, b.0) };
        let (lo, hi) = (from.min(to).round() as isize, from.max(to).round() as isize);
        let mut painted = Vec::new();
        for major in lo..=hi {
            let t = if hi == lo { 0.0 } else { (major as f64 - from) / (to - from) };
            let t = t.clamp(0.0, 1.0);
            let minor = if steep { a.0 + t * dx } else { a.1 + t * dy }.round() as isize;
            for m in minor - PEN_HALF..=minor + PEN_HALF {
                let (x, y) = if steep { (m, major) } else { (major, m) };
                if x < 0 || y < 0 || x >= self.width as isize || y >= self.height as isize {
                    continue;
                }
                let l = &mut self.labels[y as usize * self.width + x as usize];
                if *l == 0 {
                    *l = label;
                    painted.push(y as usize * self.width + x as usize);
                }
            }
        }
        painted
    }

    /// Like `stroke`, but undone if it would leave a 5×5 window around the
    /// new pixels holding `DENSE_LIMIT` or more ink pixels.
    fn thin_stroke(&mut self, a: (f64, f64), b: (f64, f64), label: u16) -> usize {
        let painted = self.stroke(a, b, label);
        if painted.iter().any(|&i| self.crowded_near(i % self.width, i / self.width)) {
            for &i in &painted {
                self.labels[i] = 0;
            }
            return 0;
        }
        painted.len()
    }

    fn crowded_near(&self, x: usize, y: usize) -> bool {
        let (w, h) = (self.width as isize, self.height as isize);
        let ink = |x: isize, y: isize| x >= 0 && y >= 0 && x < w && y < h && self.labels[(y * w + x) as usize] != 0;
        let (x, y) = (x as isize, y as isize);
        (-2..=2).any(|cy| {
            (-2..=2).any(|cx| {
                let n = (-2..=2)
                    .flat_map(|dy| (-2..=2).map(move |dx| (dx, dy)))
                    .filter(|&(dx, dy)| ink(x + cx + dx, y + cy + dy))
                    .count();
                n >= DENSE_LIMIT
            })
        })
    }
}

/// Draws one glyph into the cell `[x0, x1) × [y0, y1)`.
fn glyph(canvas: &mut Canvas, rng: &mut ChaCha8Rng, cell: (usize, usize, usize, usize), label: u16, fill: f64) {
    let (x0, y0, x1, y1) = cell;
    // stroke endpoints stay half a pen width inside the cell
    let (lx, hx) = (x0 as f64 + PEN_HALF as f64, (x1 - 1) as f64 - PEN_HALF as f64);
    let (ly, hy) = (y0 as f64 + PEN_HALF as f64, (y1 - 1) as f64 - PEN_HALF as f64);
    let target = (fill * ((x1 - x0) * (y1 - y0)) as f64).ceil() as usize;
    let mid = (ly + hy) / 2.0;

    // downstrokes 7 to 14 px apart, the outer ones near the cell edges
    let (sl, sh) = (lx + 1.0, (hx - 1.0).max(lx + 1.0));
    let stems = ((sh - sl) / STEM_PITCH) as usize + 1;
    let pitch = if stems > 1 { (sh - sl) / (stems - 1) as f64 } else { 0.0 };
    let mut ink = 0;
    for i in 0..stems {
        let base = if stems > 1 { sl + pitch * i as f64 } else { (sl + sh) / 2.0 };
        let sx = base + rng.gen_range(-0.5..=0.5);
        let ex = sx + rng.gen_range(-1.0..=1.0);
        let top = rng.gen_range(ly..=ly + (mid - ly) * 0.3);
        let bottom = rng.gen_range(hy - (hy - mid) * 0.3..=hy);
        ink += canvas.stroke((sx, top), (ex, bottom), label).len();
    }

    let mut attempts = 0;
    while ink < target && attempts < MAX_STROKE_ATTEMPTS {
        let a = (rng.gen_range(lx..=hx), rng.gen_range(ly..=hy));
        let b = (rng.gen_range(lx..=hx), rng.gen_range(ly..=hy));
        ink += canvas.thin_stroke(a, b, label);
        attempts += 1;
    }
}

pub fn generate(spec: &SynthSpec) -> Result<SynthPage> {
    spec.validate()?;
    let (w, h) = (spec.page_width, spec.page_height);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut canvas = Canvas {
        width: w,
        height: h,
        labels: vec![0; w * h],
    };
    let extent = spec.shear_extent();

    let n = rng.gen_range(spec.line_count.0..=spec.line_count.1);
    let mut bands = Vec::with_capacity(n);
    let mut y = MARGIN + extent;
    for i in 0..n {
        if i > 0 {
            y += rng.gen_range(spec.gap.0..=spec.gap.1);
        }
        let lh = rng.gen_range(spec.line_height.0..=spec.line_height.1);
        bands.push((y, lh));
        y += lh;
    }

    let mut spans = Vec::with_capacity(n);
    for (i, &(top, lh)) in bands.iter().enumerate() {
        let label = i as u16 + 1;
        let start = MARGIN + rng.gen_range(0..=20);
        let end = w - MARGIN - rng.gen_range(0..=40);
        spans.push((start, end));
        let (min_cell, max_cell) = ((lh * 2 / 5).max(4), (lh * 4 / 5).max(5));
        let mut x = start;
        while x + min_cell <= end {
            let cw = rng.gen_range(min_cell..=max_cell).min(end - x);
            glyph(&mut canvas, &mut rng, (x, top, x + cw, top + lh), label, spec.ink_fill);
            let space = if rng.gen_bool(0.2) {
                rng.gen_range(6..=9)
            } else {
                rng.gen_range(2..=5)
            };
            x += cw + space;
        }
    }

    if let Some(r) = spec.doodle_radius {
        let cx = rng.gen_range(r + MARGIN..=w - r - MARGIN - 1) as f64;
        let cy = rng.gen_range(r + MARGIN + extent..=h - r - MARGIN - extent - 1) as f64;
        let r2 = (r * r) as f64;
        for y in 0..h {
            for x in 0..w {
                let (dx, dy) = (x as f64 - cx, y as f64 - cy);
                if dx * dx + dy * dy <= r2 && canvas.labels[y * w + x] == 0 {
                    canvas.labels[y * w + x] = DOODLE;
                }
            }
        }
    }

    if let (Some(len), false) = (spec.strike_length, bands.is_empty()) {
        let i = rng.gen_range(0..bands.len());
        let (top, lh) = bands[i];
        let (start, end) = spans[i];
        let x0 = rng.gen_range(start..=end.saturating_sub(len).max(start));
        let row = top + lh / 2;
        for yy in row..row + 2 {
            for x in x0..(x0 + len).min(w) {
                canvas.labels[yy * w + x] = STRIKE;
            }
        }
    }

    // vertical shear: column x moves down by (x - w/2)·tan(skew)
    let tan = spec.skew_degrees.to_radians().tan();
    let mut labels = vec![0u16; w * h];
    for x in 0..w {
        let shift = ((x as f64 - w as f64 / 2.0) * tan).round() as isize;
        for y in 0..h {
            let src = y as isize - shift;
            if src >= 0 && (src as usize) < h {
                labels[y * w + x] = canvas.labels[src as usize * w + x];
            }
        }
    }

    let mut extents = vec![(usize::MAX, usize::MAX, 0usize, 0usize); n];
    for y in 0..h {
        for x in 0..w {
            let l = labels[y * w + x];
            if l != 0 && (l as usize) <= n {
                let e = &mut extents[l as usize - 1];
                e.0 = e.0.min(x);
                e.1 = e.1.min(y);
                e.2 = e.2.max(x);
                e.3 = e.3.max(y);
            }
        }
    }
    let lines = extents
        .into_iter()
        .filter(|e| e.0 != usize::MAX)
        .map(|(x0, y0, x1, y1)| LineBox::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1))
        .collect();

    let data = labels
        .iter()
        .map(|&l| if l == 0 { PAPER } else { rng.gen_range(20..=60) })
        .collect();
    Ok(SynthPage {
        image: GrayImage::new(w, h, data)?,
        lines,
        bands,
    })
}
