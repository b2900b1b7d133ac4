use super::{BinaryImage, GrayImage};
use crate::error::{Error, Result};

/// Minimum gray-level separation between the background and object peaks.
pub const DEFAULT_MIN_PEAK_DISTANCE: u8 = 32;

/// Pixel counts per gray level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    bins: [u64; 256],
}

impl Histogram {
    pub fn from_bins(bins: [u64; 256]) -> Self {
        Histogram { bins }
    }

    pub fn bins(&self) -> &[u64; 256] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    /// Sum of counts over the inclusive range `[lo, hi]`.
    pub fn count_between(&self, lo: u8, hi: u8) -> u64 {
        if lo > hi {
            return 0;
        }
        self.bins[lo as usize..=hi as usize].iter().sum()
    }
}

pub fn histogram(img: &GrayImage) -> Histogram {
    let mut bins = [0u64; 256];
    for &v in img.as_slice() {
        bins[v as usize] += 1;
    }
    Histogram { bins }
}

/// Inclusive gray-level band that binarizes to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThresholdPair {
    low: u8,
    high: u8,
    degenerate: bool,
}

impl ThresholdPair {
    pub fn new(low: u8, high: u8) -> Result<Self> {
        if low > high {
            return Err(Error::InvalidParams(format!(
                "threshold low {low} exceeds high {high}"
            )));
        }
        Ok(ThresholdPair {
            low,
            high,
            degenerate: false,
        })
    }

    pub fn low(&self) -> u8 {
        self.low
    }

    pub fn high(&self) -> u8 {
        self.high
    }

    /// Set when the histogram has no object peak; the image is treated as
    /// defect-free downstream.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }
}

/// Histogram peak technique.
///
/// The background peak is the most populated gray level. The object peak is
/// the most populated level at least `min_distance` away from it. One threshold
/// sits halfway between the peaks; the other is 0 when the object is darker
/// than the background and 255 when it is brighter. Ties pick the lower gray
/// level. Without an object peak the pair collapses to the background level
/// and is flagged degenerate.
pub fn peak_thresholds(hist: &Histogram, min_distance: u8) -> Result<ThresholdPair> {
    let bins = hist.bins();
    let background = argmax(bins.iter().enumerate().map(|(v, &c)| (v, c)))
        .ok_or_else(|| Error::InvalidInput("histogram has no pixels".into()))?;

    let far = bins
        .iter()
        .enumerate()
        .filter(|&(v, _)| v.abs_diff(background) >= min_distance.max(1) as usize)
        .map(|(v, &c)| (v, c));
    let Some(object) = argmax(far) else {
        let v = background as u8;
        return Ok(ThresholdPair {
            low: v,
            high: v,
            degenerate: true,
        });
    };

    let mid = ((background + object) / 2) as u8;
    let (low, high) = if object < background {
        (0, mid)
    } else {
        (mid, 255)
    };
    Ok(ThresholdPair {
        low,
        high,
        degenerate: false,
    })
}

fn argmax(it: impl Iterator<Item = (usize, u64)>) -> Option<usize> {
    let mut best: Option<(usize, u64)> = None;
    for (v, c) in it {
        if c > 0 && best.is_none_or(|(_, bc)| c > bc) {
            best = Some((v, c));
        }
    }
    best.map(|(v, _)| v)
}

/// `b = 1` iff `low <= p <= high`.
pub fn binarize(img: &GrayImage, t: ThresholdPair) -> BinaryImage {
    let data = img
        .as_slice()
        .iter()
        .map(|&p| (t.low <= p && p <= t.high) as u8)
        .collect();
    BinaryImage::from_vec(img.width(), img.height(), data).expect("same dimensions")
}
