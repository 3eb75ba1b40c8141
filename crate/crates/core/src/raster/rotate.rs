use super::GrayImage;
use crate::error::{Error, Result};

/// Rotates by `turns` quarter turns clockwise.
///
/// One turn maps input `(x, y)` to output `(H - 1 - y, x)`; equivalently
/// `out(x, y) = in(y, H - 1 - x)` with output width equal to input height.
pub fn rotate_quarter(img: &GrayImage, turns: u32) -> Result<GrayImage> {
    let (w, h) = (img.width(), img.height());
    match turns {
        0 => Ok(img.clone()),
        1 => GrayImage::from_fn(h, w, |x, y| img.get(y, h - 1 - x)),
        2 => GrayImage::from_fn(w, h, |x, y| img.get(w - 1 - x, h - 1 - y)),
        3 => GrayImage::from_fn(h, w, |x, y| img.get(w - 1 - y, x)),
        _ => Err(Error::InvalidParameter(format!(
            "rotation must be 0..=3 quarter turns, got {turns}"
        ))),
    }
}
