//! Line-level precision, recall and F-measure.
//!
//! A prediction counts as a correct line when it is matched one-to-one with
//! a ground-truth box at IoU ≥ `iou_min`; per-document scores are then
//! averaged arithmetically over the corpus.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linedetect::LineBox;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl EvalCounts {
    pub fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        EvalCounts { tp, fp, fn_ }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentResult {
    pub id: String,
    pub counts: EvalCounts,
    pub scores: Scores,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_document: Vec<DocumentResult>,
    pub mean: Scores,
}

impl EvalReport {
    /// Builds a report from per-document counts; fails on an empty corpus.
    pub fn from_counts(docs: Vec<(String, EvalCounts)>) -> Result<Self> {
        let per_document: Vec<DocumentResult> = docs
            .into_iter()
            .map(|(id, counts)| DocumentResult {
                id,
                counts,
                scores: prf(counts),
            })
            .collect();
        let scores: Vec<Scores> = per_document.iter().map(|d| d.scores).collect();
        let mean = aggregate(&scores)?;
        Ok(EvalReport { per_document, mean })
    }

    /// CSV with one row per document and a final `MEAN` row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("document,tp,fp,fn,precision,recall,f_measure\n");
        for d in &self.per_document {
            s.push_str(&format!(
                "{},{},{},{},{:.4},{:.4},{:.4}\n",
                d.id, d.counts.tp, d.counts.fp, d.counts.fn_, d.scores.precision, d.scores.recall, d.scores.f_measure
            ));
        }
        s.push_str(&format!(
            "MEAN,,,,{:.4},{:.4},{:.4}\n",
            self.mean.precision, self.mean.recall, self.mean.f_measure
        ));
        s
    }
}

pub fn iou(a: &LineBox, b: &LineBox) -> f64 {
    let ix = (a.x + a.width).min(b.x + b.width).saturating_sub(a.x.max(b.x));
    let iy = (a.y + a.height).min(b.y + b.height).saturating_sub(a.y.max(b.y));
    let inter = ix * iy;
    if inter == 0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    inter as f64 / union as f64
}

/// Greedy one-to-one matching in descending IoU order.
///
/// Ties are broken by lower ground-truth index, then lower prediction index.
pub fn match_lines(pred: &[LineBox], gt: &[LineBox], iou_min: f64) -> EvalCounts {
    let mut pairs = Vec::new();
    for (g, gb) in gt.iter().enumerate() {
        for (p, pb) in pred.iter().enumerate() {
            let v = iou(pb, gb);
            if v >= iou_min && v > 0.0 {
                pairs.push((v, g, p));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut gt_used = vec![false; gt.len()];
    let mut pred_used = vec![false; pred.len()];
    let mut tp = 0;
    for (_, g, p) in pairs {
        if !gt_used[g] && !pred_used[p] {
            gt_used[g] = true;
            pred_used[p] = true;
            tp += 1;
        }
    }
    EvalCounts::new(tp, pred.len() - tp, gt.len() - tp)
}

/// Precision, recall and their harmonic mean, zero where undefined.
pub fn prf(c: EvalCounts) -> Scores {
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    Scores {
        precision,
        recall,
        f_measure: f_measure(precision, recall),
    }
}

pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Column-wise arithmetic mean of per-document scores.
pub fn aggregate(per_doc: &[Scores]) -> Result<Scores> {
    if per_doc.is_empty() {
        return Err(Error::Evaluation("cannot average an empty corpus".into()));
    }
    let n = per_doc.len() as f64;
    let sum = per_doc.iter().fold(Scores::default(), |acc, s| Scores {
        precision: acc.precision + s.precision,
        recall: acc.recall + s.recall,
        f_measure: acc.f_measure + s.f_measure,
    });
    Ok(Scores {
        precision: sum.precision / n,
        recall: sum.recall / n,
        f_measure: sum.f_measure / n,
    })
}

/// Parses a box file: one `x y width height` per line, `#` comments and
/// blank lines ignored.
pub fn parse_boxes(text: &str) -> Result<Vec<LineBox>> {
    let mut boxes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::BoxFile { line: i + 1, message };
        let fields: Vec<usize> = line
            .split_whitespace()
            .map(|f| f.parse::<usize>().map_err(|_| err(format!("not a non-negative integer: {f:?}"))))
            .collect::<Result<_>>()?;
        if fields.len() != 4 {
            return Err(err(format!("expected 4 fields, got {}", fields.len())));
        }
        if fields[2] == 0 || fields[3] == 0 {
            return Err(err("box width and height must be positive".into()));
        }
        boxes.push(LineBox::new(fields[0], fields[1], fields[2], fields[3]));
    }
    Ok(boxes)
}

pub fn format_boxes(boxes: &[LineBox]) -> String {
    boxes
        .iter()
        .map(|b| format!("{} {} {} {}\n", b.x, b.y, b.width, b.height))
        .collect()
}

pub fn load_boxes(path: impl AsRef<Path>) -> Result<Vec<LineBox>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_boxes(&text)
}
