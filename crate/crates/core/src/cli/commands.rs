use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::synth::{generate, SynthSpec};
use crate::error::{Error, Result};
use crate::evaluate::{format_boxes, load_boxes, match_lines, EvalCounts, EvalReport};
use crate::exec::{self, Execution};
use crate::linedetect::LineBox;
use crate::pipeline::{process_page, PipelineConfig};
use crate::raster::{
    encode_binary_pgm, encode_pgm, encode_ppm, load_gray, rotate_quarter, GrayImage, RgbImage,
};
use crate::textsep::separate;
use crate::preprocess::binarize_pipeline_with;

const GREEN: [u8; 3] = [0, 255, 0];
const BORDER: usize = 2;

/// Paints a 2-px green frame along the inside edge of every box.
pub fn draw_overlay(page: &GrayImage, boxes: &[LineBox]) -> RgbImage {
    let mut out = RgbImage::from_gray(page);
    for b in boxes {
        let x1 = (b.x + b.width).min(page.width());
        let y1 = (b.y + b.height).min(page.height());
        for y in b.y..y1 {
            for x in b.x..x1 {
                let edge = x < b.x + BORDER || y < b.y + BORDER || x + BORDER >= x1 || y + BORDER >= y1;
                if edge {
                    out.put(x, y, GREEN);
                }
            }
        }
    }
    out
}

/// Encoded files produced by `segment` for one page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentOutputs {
    pub boxes: String,
    pub overlay: Vec<u8>,
    pub text: Vec<u8>,
    pub doodle: Vec<u8>,
    pub histogram: String,
}

pub fn segment_outputs(page: &GrayImage, config: &PipelineConfig, exec: Execution) -> Result<SegmentOutputs> {
    let result = process_page(page, config, exec)?;
    let boxes = &result.detection.boxes;
    Ok(SegmentOutputs {
        boxes: format_boxes(boxes),
        overlay: encode_ppm(&draw_overlay(page, boxes)),
        text: encode_binary_pgm(&result.separation.text),
        doodle: encode_binary_pgm(&result.separation.doodle),
        histogram: result.detection.histogram.to_csv(),
    })
}

fn stem(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_owned)
        .ok_or_else(|| Error::InvalidParameter(format!("cannot derive a name from {}", path.display())))
}

fn load_rotated(path: &Path, turns: u32) -> Result<GrayImage> {
    rotate_quarter(&load_gray(path)?, turns)
}

fn write(path: PathBuf, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(&path, bytes).map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Segments every input; nothing is written unless all inputs succeed.
///
/// For input `NAME.pgm` the output directory receives `NAME.txt` (boxes),
/// `NAME.overlay.ppm`, `NAME.text.pgm`, `NAME.doodle.pgm` and `NAME.hist.csv`.
pub fn cmd_segment(inputs: &[PathBuf], config: &PipelineConfig, out_dir: &Path, turns: u32, exec: Execution) -> Result<()> {
    config.validate()?;
    let names = inputs.iter().map(|p| stem(p)).collect::<Result<Vec<_>>>()?;
    let results = exec::map_slice(exec, inputs, |path| {
        let page = load_rotated(path, turns)?;
        segment_outputs(&page, config, exec)
    });
    let outputs = results.into_iter().collect::<Result<Vec<_>>>()?;

    create_dir(out_dir)?;
    for (name, o) in names.iter().zip(outputs) {
        write(out_dir.join(format!("{name}.txt")), o.boxes)?;
        write(out_dir.join(format!("{name}.overlay.ppm")), o.overlay)?;
        write(out_dir.join(format!("{name}.text.pgm")), o.text)?;
        write(out_dir.join(format!("{name}.doodle.pgm")), o.doodle)?;
        write(out_dir.join(format!("{name}.hist.csv")), o.histogram)?;
    }
    Ok(())
}

/// Binarization and text/doodle separation only.
pub fn cmd_separate(inputs: &[PathBuf], config: &PipelineConfig, out_dir: &Path, turns: u32, exec: Execution) -> Result<()> {
    config.validate()?;
    let names = inputs.iter().map(|p| stem(p)).collect::<Result<Vec<_>>>()?;
    let results = exec::map_slice(exec, inputs, |path| {
        let page = load_rotated(path, turns)?;
        let binary = binarize_pipeline_with(&page, &config.fcm, exec)?;
        separate(&binary, &config.separation)
    });
    let layers = results.into_iter().collect::<Result<Vec<_>>>()?;

    create_dir(out_dir)?;
    for (name, sep) in names.iter().zip(layers) {
        write(out_dir.join(format!("{name}.text.pgm")), encode_binary_pgm(&sep.text))?;
        write(out_dir.join(format!("{name}.doodle.pgm")), encode_binary_pgm(&sep.doodle))?;
    }
    Ok(())
}

fn box_files(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut files = BTreeMap::new();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            files.insert(stem(&path)?, path);
        }
    }
    Ok(files)
}

/// Scores every `*.txt` box file in `pred_dir` against its namesake in
/// `gt_dir`. A document present on one side only is scored with an empty
/// other side.
pub fn evaluate_dirs(pred_dir: &Path, gt_dir: &Path, config: &PipelineConfig) -> Result<EvalReport> {
    config.validate()?;
    let preds = box_files(pred_dir)?;
    let gts = box_files(gt_dir)?;
    if !preds.keys().any(|k| gts.contains_key(k)) {
        return Err(Error::Evaluation(format!(
            "no box files in common between {} and {}",
            pred_dir.display(),
            gt_dir.display()
        )));
    }
    let mut ids: Vec<&String> = preds.keys().chain(gts.keys()).collect();
    ids.sort();
    ids.dedup();

    let mut docs: Vec<(String, EvalCounts)> = Vec::with_capacity(ids.len());
    for id in ids {
        let load = |m: &BTreeMap<String, PathBuf>| m.get(id).map(load_boxes).transpose();
        let pred = load(&preds)?.unwrap_or_default();
        let gt = load(&gts)?.unwrap_or_default();
        docs.push((id.clone(), match_lines(&pred, &gt, config.iou_min)));
    }
    EvalReport::from_counts(docs)
}

/// Returns the CSV report.
pub fn cmd_eval(pred_dir: &Path, gt_dir: &Path, config: &PipelineConfig) -> Result<String> {
    Ok(evaluate_dirs(pred_dir, gt_dir, config)?.to_csv())
}

/// Writes `count` pages `page_NNNN.pgm` with ground truth `page_NNNN.txt`,
/// page `i` using seed `spec.seed + i`.
pub fn cmd_synth(spec: &SynthSpec, out_dir: &Path, count: usize) -> Result<()> {
    spec.validate()?;
    let pages = (0..count as u64)
        .map(|i| {
            let s = SynthSpec {
                seed: spec.seed.wrapping_add(i),
                ..spec.clone()
            };
            generate(&s)
        })
        .collect::<Result<Vec<_>>>()?;
    create_dir(out_dir)?;
    for (i, page) in pages.iter().enumerate() {
        write(out_dir.join(format!("page_{i:04}.pgm")), encode_pgm(&page.image))?;
        write(out_dir.join(format!("page_{i:04}.txt")), format_boxes(&page.lines))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_frames_are_two_pixels_wide() {
        let page = GrayImage::filled(20, 12, 200).unwrap();
        let o = draw_overlay(&page, &[LineBox::new(2, 2, 10, 6)]);
        assert_eq!(o.get(2, 2), GREEN);
        assert_eq!(o.get(3, 4), GREEN);
        assert_eq!(o.get(4, 4), [200; 3]);
        assert_eq!(o.get(11, 7), GREEN);
        assert_eq!(o.get(12, 7), [200; 3]);
        assert_eq!(o.get(0, 0), [200; 3]);
    }

    #[test]
    fn blank_overlay_is_the_page_in_colour() {
        let page = GrayImage::from_fn(5, 4, |x, y| (x * 40 + y) as u8).unwrap();
        let o = draw_overlay(&page, &[]);
        for y in 0..4 {
            for x in 0..5 {
                let v = page.get(x, y);
                assert_eq!(o.get(x, y), [v, v, v]);
            }
        }
    }
}
