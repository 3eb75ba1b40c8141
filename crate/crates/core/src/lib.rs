//! Text line segmentation for handwritten manuscript pages.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`preprocess`]: 3×3 median smoothing and two-cluster fuzzy C-means
//!    binarization into ink and paper.
//! 2. [`textsep`]: strike-through removal and component-level separation of
//!    doodles (large or dense components) from text.
//! 3. [`linedetect`]: Gaussian smoothing, 1×W block smearing, cleanup and
//!    one box per smear component, with tall components split at deep
//!    minima of their row histogram.
//! 4. [`evaluate`]: IoU matching against ground truth and precision,
//!    recall and F-measure per page and averaged over a corpus.
//!
//! [`pipeline::process_page`] chains the first three stages. Row-parallel
//! kernels accept an [`Execution`]; the `parallel` cargo feature (on by
//! default) backs [`Execution::Parallel`] with rayon.

pub mod cli;
pub mod components;
pub mod error;
pub mod evaluate;
pub mod exec;
pub mod linedetect;
pub mod pipeline;
pub mod preprocess;
pub mod raster;
pub mod textsep;

pub use error::{Error, Result};
pub use exec::Execution;
pub use linedetect::LineBox;
pub use pipeline::{process_page, PipelineConfig};
