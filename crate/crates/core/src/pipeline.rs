//! End-to-end page processing: binarize, separate, detect.

use crate::components::Connectivity;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::linedetect::{detect_lines_with, LineDetection, SmearParams};
use crate::preprocess::{binarize_pipeline_with, FcmParams};
use crate::raster::{BinaryImage, GrayImage};
use crate::textsep::{separate, Separation, SeparationParams};

/// Every tunable of the pipeline and the evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub fcm: FcmParams,
    pub separation: SeparationParams,
    pub smear: SmearParams,
    /// Minimum IoU for a predicted line to match a ground-truth line.
    pub iou_min: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            fcm: FcmParams::default(),
            separation: SeparationParams::default(),
            smear: SmearParams::default(),
            iou_min: 0.5,
        }
    }
}

impl PipelineConfig {
    pub fn connectivity(&self) -> Connectivity {
        self.smear.connectivity
    }

    pub fn set_connectivity(&mut self, c: Connectivity) {
        self.separation.connectivity = c;
        self.smear.connectivity = c;
    }

    pub fn validate(&self) -> Result<()> {
        self.fcm.validate()?;
        self.separation.validate()?;
        self.smear.validate()?;
        if !(self.iou_min > 0.0 && self.iou_min <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "iou_min must be in (0,1], got {}",
                self.iou_min
            )));
        }
        if self.separation.connectivity != self.smear.connectivity {
            return Err(Error::InvalidParameter(
                "separation and smearing must use the same connectivity".into(),
            ));
        }
        Ok(())
    }
}

/// Intermediate and final products for one page.
#[derive(Debug, Clone)]
pub struct PageResult {
    pub binary: BinaryImage,
    pub separation: Separation,
    pub detection: LineDetection,
}

pub fn process_page(page: &GrayImage, config: &PipelineConfig, exec: Execution) -> Result<PageResult> {
    config.validate()?;
    let binary = binarize_pipeline_with(page, &config.fcm, exec)?;
    let separation = separate(&binary, &config.separation)?;
    let detection = detect_lines_with(&separation.text, &config.smear, exec)?;
    Ok(PageResult {
        binary,
        separation,
        detection,
    })
}

/// Processes pages independently; results keep input order.
pub fn process_batch(pages: &[GrayImage], config: &PipelineConfig, exec: Execution) -> Vec<Result<PageResult>> {
    exec::map_slice(exec, pages, |page| process_page(page, config, exec))
}
