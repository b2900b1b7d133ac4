//! The four geometric defect features and their scaling.

use crate::imaging::{DefectRegion, DefectWindow, PipelineStages};

/// Side length, in pixels, that the height and width features are scaled by.
pub const REFERENCE_SIDE: f64 = 512.0;

/// Defect-window height and width, their ratio, and the region count.
/// All zero when no defect is present.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RawFeatures {
    pub height: usize,
    pub width: usize,
    pub ratio: f64,
    pub regions: usize,
}

/// Network-facing features.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScaledFeatures {
    pub height: f64,
    pub width: f64,
    pub ratio: f64,
    pub regions: f64,
}

impl ScaledFeatures {
    pub fn to_array(&self) -> [f64; 4] {
        [self.height, self.width, self.ratio, self.regions]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        ScaledFeatures {
            height: v[0],
            width: v[1],
            ratio: v[2],
            regions: v[3],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.to_array().iter().all(|&v| v == 0.0)
    }
}

pub fn extract_raw(regions: &[DefectRegion], window: &DefectWindow) -> RawFeatures {
    let Some(b) = window.bbox() else {
        return RawFeatures::default();
    };
    let (height, width) = (b.height(), b.width());
    RawFeatures {
        height,
        width,
        ratio: height as f64 / width as f64,
        regions: regions.len(),
    }
}

/// Scaled region count: the 500th root of `(n - 1) * 10^999`, evaluated as
/// `exp((ln(n - 1) + 999 ln 10) / 500)` since `10^999` overflows `f64`.
/// Zero for `n <= 1`.
pub fn scale_region_count(n: usize) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    ((((n - 1) as f64).ln() + 999.0 * std::f64::consts::LN_10) / 500.0).exp()
}

pub fn scale(raw: &RawFeatures) -> ScaledFeatures {
    let ratio = if raw.width == 0 { 0.0 } else { raw.ratio };
    ScaledFeatures {
        height: raw.height as f64 / REFERENCE_SIDE * 100.0,
        width: raw.width as f64 / REFERENCE_SIDE * 100.0,
        ratio: 100.0 * ratio,
        regions: scale_region_count(raw.regions),
    }
}

/// Raw and scaled features of a finished pipeline run.
pub fn from_stages(stages: &PipelineStages) -> (RawFeatures, ScaledFeatures) {
    let raw = extract_raw(&stages.regions, &stages.window);
    (raw, scale(&raw))
}
