use std::path::Path;

use super::pnm::{self, AnyImage};
use super::*;
use crate::error::{Error, Result};

/// Tunables of the segmentation stages.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub luma: LumaWeights,
    pub mask: ConvolutionMask,
    pub min_peak_distance: u8,
    /// Components smaller than this many pixels are noise.
    pub min_defect_size: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            luma: LumaWeights::BT601,
            mask: ConvolutionMask::low_pass_7x7(),
            min_peak_distance: DEFAULT_MIN_PEAK_DISTANCE,
            min_defect_size: 12,
        }
    }
}

/// Every intermediate product of one inspection.
#[derive(Clone, Debug)]
pub struct PipelineStages {
    pub gray: GrayImage,
    pub filtered: GrayImage,
    pub histogram: Histogram,
    pub thresholds: ThresholdPair,
    pub binary: BinaryImage,
    pub denoised: BinaryImage,
    pub regions: Vec<DefectRegion>,
    pub window: DefectWindow,
}

impl PipelineStages {
    /// Writes `<stem>-{gray,filtered,binary,denoised}.pgm` into `dir`.
    pub fn write_debug(&self, dir: &Path, stem: &str) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let stages = [
            ("gray", self.gray.clone()),
            ("filtered", self.filtered.clone()),
            ("binary", self.binary.to_gray()),
            ("denoised", self.denoised.to_gray()),
        ];
        for (name, img) in stages {
            pnm::write_pgm(&img, &dir.join(format!("{stem}-{name}.pgm")))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct InspectionPipeline {
    config: PipelineConfig,
}

impl InspectionPipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        if config.min_defect_size == 0 {
            return Err(Error::InvalidParams(
                "minimum defect size must be at least 1 pixel".into(),
            ));
        }
        Ok(InspectionPipeline { config })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn run_rgb(&self, image: &RgbImage) -> Result<PipelineStages> {
        let gray = to_grayscale_with(image, self.config.luma)?;
        self.run_gray(gray)
    }

    pub fn run(&self, image: &AnyImage) -> Result<PipelineStages> {
        match image {
            AnyImage::Rgb(c) => self.run_rgb(c),
            AnyImage::Gray(g) => self.run_gray(g.clone()),
        }
    }

    pub fn run_gray(&self, gray: GrayImage) -> Result<PipelineStages> {
        let filtered = convolve(&gray, &self.config.mask)?;
        let hist = histogram(&filtered);
        let thresholds = peak_thresholds(&hist, self.config.min_peak_distance)?;
        let binary = if thresholds.is_degenerate() {
            BinaryImage::new(filtered.width(), filtered.height())
        } else {
            binarize(&filtered, thresholds)
        };
        let denoised = remove_noise(&binary, self.config.min_defect_size);
        let regions = connected_regions(&denoised);
        let window = defect_window(&regions);
        Ok(PipelineStages {
            gray,
            filtered,
            histogram: hist,
            thresholds,
            binary,
            denoised,
            regions,
            window,
        })
    }
}
