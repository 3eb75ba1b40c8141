//! `key = value` configuration files.
//!
//! One entry per line, `#` starts a comment line, blank lines are ignored.
//! Unknown and repeated keys are errors.

use std::collections::HashSet;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::components::Connectivity;
use crate::error::{Error, Result};
use crate::pipeline::PipelineConfig;

pub(crate) struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

impl Entry {
    pub fn parse<T: FromStr>(&self) -> Result<T> {
        self.value.parse().map_err(|_| Error::Config {
            line: self.line,
            message: format!("invalid value {:?} for {}", self.value, self.key),
        })
    }

    pub fn unknown(&self) -> Error {
        Error::Config {
            line: self.line,
            message: format!("unknown key {:?}", self.key),
        }
    }
}

pub(crate) fn read_entries(text: &str) -> Result<Vec<Entry>> {
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: i + 1,
            message: format!("expected key=value, got {line:?}"),
        })?;
        let key = key.trim().to_string();
        if !seen.insert(key.clone()) {
            return Err(Error::Config {
                line: i + 1,
                message: format!("duplicate key {key:?}"),
            });
        }
        entries.push(Entry {
            line: i + 1,
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(entries)
}

pub fn parse_config(text: &str) -> Result<PipelineConfig> {
    let mut c = PipelineConfig::default();
    for e in read_entries(text)? {
        match e.key.as_str() {
            "fcm_cluster_count" => c.fcm.cluster_count = e.parse()?,
            "fcm_fuzzifier" => c.fcm.fuzzifier = e.parse()?,
            "fcm_tolerance" => c.fcm.tolerance = e.parse()?,
            "fcm_max_iterations" => c.fcm.max_iterations = e.parse()?,
            "density_window" => c.separation.density_window = e.parse()?,
            "density_threshold" => c.separation.density_threshold = e.parse()?,
            "doodle_area_threshold" => c.separation.doodle_area_threshold = e.parse()?,
            "doodle_density_fraction" => c.separation.doodle_density_fraction = e.parse()?,
            "strike_min_run" => c.separation.strike_min_run = e.parse()?,
            "block_width" => c.smear.block_width = e.parse()?,
            "block_ink_threshold" => c.smear.block_ink_threshold = e.parse()?,
            "gaussian_sigma" => c.smear.gaussian_sigma = e.parse()?,
            "min_smear_area" => c.smear.min_smear_area = e.parse()?,
            "valley_threshold" => c.smear.valley_threshold = e.parse()?,
            "overlap_height_ratio" => c.smear.overlap_height_ratio = e.parse()?,
            "iou_min" => c.iou_min = e.parse()?,
            "connectivity" => {
                let n: u32 = e.parse()?;
                let conn = Connectivity::from_number(n).map_err(|err| Error::Config {
                    line: e.line,
                    message: err.to_string(),
                })?;
                c.set_connectivity(conn);
            }
            _ => return Err(e.unknown()),
        }
    }
    c.validate()?;
    Ok(c)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<PipelineConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Serializes every key; `parse_config` reads it back exactly.
pub fn format_config(c: &PipelineConfig) -> String {
    let mut s = String::new();
    let mut put = |k: &str, v: &dyn Display| s.push_str(&format!("{k} = {v}\n"));
    put("fcm_cluster_count", &c.fcm.cluster_count);
    put("fcm_fuzzifier", &c.fcm.fuzzifier);
    put("fcm_tolerance", &c.fcm.tolerance);
    put("fcm_max_iterations", &c.fcm.max_iterations);
    put("density_window", &c.separation.density_window);
    put("density_threshold", &c.separation.density_threshold);
    put("doodle_area_threshold", &c.separation.doodle_area_threshold);
    put("doodle_density_fraction", &c.separation.doodle_density_fraction);
    put("strike_min_run", &c.separation.strike_min_run);
    put("block_width", &c.smear.block_width);
    put("block_ink_threshold", &c.smear.block_ink_threshold);
    put("gaussian_sigma", &c.smear.gaussian_sigma);
    put("min_smear_area", &c.smear.min_smear_area);
    put("valley_threshold", &c.smear.valley_threshold);
    put("overlap_height_ratio", &c.smear.overlap_height_ratio);
    put("iou_min", &c.iou_min);
    put("connectivity", &c.connectivity().as_number());
    s
}
