use super::GrayImage;
use crate::error::{Error, Result};

/// Square integer mask applied as `sum(weight * pixel) / normalizer`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionMask {
    size: usize,
    weights: Vec<i32>,
    normalizer: u32,
}

#[rustfmt::skip]
const LOW_PASS_7X7: [i32; 49] = [
    2, 1, 1, 2, 1, 1, 2,
    1, 3, 2, 3, 2, 3, 1,
    1, 2, 4, 4, 4, 2, 1,
    2, 3, 4, 5, 4, 3, 2,
    1, 2, 4, 4, 4, 2, 1,
    1, 3, 2, 3, 2, 3, 1,
    2, 1, 1, 2, 1, 1, 2,
];

impl ConvolutionMask {
    pub fn new(size: usize, weights: Vec<i32>, normalizer: u32) -> Result<Self> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "mask size {size} must be odd"
            )));
        }
        if weights.len() != size * size {
            return Err(Error::InvalidParams(format!(
                "mask of size {size} needs {} weights, got {}",
                size * size,
                weights.len()
            )));
        }
        if normalizer == 0 {
            return Err(Error::InvalidParams(
                "mask normalizer must be positive".into(),
            ));
        }
        Ok(ConvolutionMask {
            size,
            weights,
            normalizer,
        })
    }

    /// The 7x7 low-pass mask: heavier along the horizontal, vertical and
    /// diagonal lines through the center, normalized by 1/109.
    pub fn low_pass_7x7() -> Self {
        ConvolutionMask {
            size: 7,
            weights: LOW_PASS_7X7.to_vec(),
            normalizer: 109,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &[i32] {
        &self.weights
    }

    pub fn normalizer(&self) -> u32 {
        self.normalizer
    }

    pub fn weight_sum(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum()
    }
}

impl Default for ConvolutionMask {
    fn default() -> Self {
        Self::low_pass_7x7()
    }
}

/// Unnormalized weighted sums with replicate-edge padding, row-major.
pub fn convolve_raw(img: &GrayImage, mask: &ConvolutionMask) -> Result<Vec<i64>> {
    let (w, h) = (img.width(), img.height());
    if mask.size > w.min(h) {
        return Err(Error::InvalidInput(format!(
            "mask of size {} does not fit a {w}x{h} image",
            mask.size
        )));
    }
    let r = (mask.size / 2) as isize;
    let src = img.as_slice();

    // Column index lookup with replicated borders, shared by every row.
    let col_idx: Vec<Vec<usize>> = (0..w as isize)
        .map(|x| {
            (-r..=r)
                .map(|dx| (x + dx).clamp(0, w as isize - 1) as usize)
                .collect()
        })
        .collect();

    let mut out = vec![0i64; w * h];
    for y in 0..h as isize {
        let rows: Vec<&[u8]> = (-r..=r)
            .map(|dy| {
                let yy = (y + dy).clamp(0, h as isize - 1) as usize;
                &src[yy * w..(yy + 1) * w]
            })
            .collect();
        let out_row = &mut out[y as usize * w..(y as usize + 1) * w];
        for (x, acc) in out_row.iter_mut().enumerate() {
            let cols = &col_idx[x];
            let mut sum = 0i64;
            for (mrow, row) in mask.weights.chunks_exact(mask.size).zip(&rows) {
                for (&m, &cx) in mrow.iter().zip(cols) {
                    sum += m as i64 * row[cx] as i64;
                }
            }
            *acc = sum;
        }
    }
    Ok(out)
}

/// Applies `mask`, rounding each normalized sum half away from zero and
/// clamping to `[0, 255]`.
pub fn convolve(img: &GrayImage, mask: &ConvolutionMask) -> Result<GrayImage> {
    let raw = convolve_raw(img, mask)?;
    let n = mask.normalizer as i64;
    let data = raw
        .into_iter()
        .map(|s| {
            let q = if s >= 0 {
                (2 * s + n) / (2 * n)
            } else {
                -((-2 * s + n) / (2 * n))
            };
            q.clamp(0, 255) as u8
        })
        .collect();
    GrayImage::from_vec(img.width(), img.height(), data)
}
