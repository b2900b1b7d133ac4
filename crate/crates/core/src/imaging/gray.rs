use super::{GrayImage, RgbImage};
use crate::error::{Error, Result};

/// Channel weights of the luma transform. Must be nonnegative and sum to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LumaWeights {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl LumaWeights {
    /// ITU-R BT.601.
    pub const BT601: LumaWeights = LumaWeights {
        r: 0.299,
        g: 0.587,
        b: 0.114,
    };

    fn validate(&self) -> Result<()> {
        let ok = [self.r, self.g, self.b]
            .iter()
            .all(|w| w.is_finite() && *w >= 0.0)
            && ((self.r + self.g + self.b) - 1.0).abs() < 1e-9;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "luma weights {self:?} must be >= 0 and sum to 1"
            )))
        }
    }
}

impl Default for LumaWeights {
    fn default() -> Self {
        Self::BT601
    }
}

pub fn to_grayscale(image: &RgbImage) -> Result<GrayImage> {
    to_grayscale_with(image, LumaWeights::BT601)
}

pub fn to_grayscale_with(image: &RgbImage, weights: LumaWeights) -> Result<GrayImage> {
    if image.is_empty() {
        return Err(Error::InvalidInput("cannot convert an empty image".into()));
    }
    weights.validate()?;
    let data = image
        .pixels()
        .iter()
        .map(|&[r, g, b]| {
            let y = weights.r * r as f64 + weights.g * g as f64 + weights.b * b as f64;
            y.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage::from_vec(image.width(), image.height(), data)
}
