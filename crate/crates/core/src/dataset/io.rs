//! Corpus directories and feature CSV files.
//!
//! A corpus directory holds the images plus `labels.csv` (`filename,class`)
//! and, when written by the generator, `features.csv` (`label,h,w,r,n`, rows
//! in `labels.csv` order).

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{DefectClass, LabeledImage};
use crate::error::{Error, Result};
use crate::features::{self, RawFeatures, ScaledFeatures};
use crate::gann::Sample;
use crate::imaging::pnm::{self, AnyImage};
use crate::imaging::InspectionPipeline;

pub const LABELS_FILE: &str = "labels.csv";
pub const FEATURES_FILE: &str = "features.csv";

/// Scaled feature vector of one image with its class.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledFeatures {
    pub class: DefectClass,
    pub raw: Option<RawFeatures>,
    pub scaled: ScaledFeatures,
}

impl LabeledFeatures {
    pub fn sample(&self) -> Sample {
        Sample::labeled(self.scaled.to_array(), self.class)
    }
}

/// Runs the pipeline over every image.
pub fn extract_features(
    images: &[LabeledImage],
    pipeline: &InspectionPipeline,
) -> Result<Vec<LabeledFeatures>> {
    images
        .par_iter()
        .map(|img| {
            let stages = pipeline.run_rgb(&img.image)?;
            let (raw, scaled) = features::from_stages(&stages);
            Ok(LabeledFeatures {
                class: img.class,
                raw: Some(raw),
                scaled,
            })
        })
        .collect()
}

pub fn write_labels(dir: &Path, entries: &[(String, DefectClass)]) -> Result<()> {
    let path = dir.join(LABELS_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
    w.write_record(["filename", "class"])
        .map_err(|e| csv_error(&path, e))?;
    for (name, class) in entries {
        w.write_record([name.as_str(), class.name()])
            .map_err(|e| csv_error(&path, e))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

pub fn read_labels(dir: &Path) -> Result<Vec<(String, DefectClass)>> {
    let path = dir.join(LABELS_FILE);
    let mut r = csv::Reader::from_path(&path).map_err(|e| csv_error(&path, e))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(&path, e))?;
        if rec.len() != 2 {
            return Err(Error::format(
                &path,
                format!("expected 2 columns, got {}", rec.len()),
            ));
        }
        let class = rec[1]
            .parse()
            .map_err(|e: Error| Error::format(&path, e.to_string()))?;
        out.push((rec[0].to_string(), class));
    }
    Ok(out)
}

/// Writes images and `labels.csv` into `dir`, creating it.
pub fn write_corpus(dir: &Path, images: &[LabeledImage]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    images
        .par_iter()
        .try_for_each(|img| pnm::write_ppm(&img.image, &dir.join(&img.name)))?;
    let entries: Vec<(String, DefectClass)> =
        images.iter().map(|i| (i.name.clone(), i.class)).collect();
    write_labels(dir, &entries)
}

/// Loads every labeled image of a corpus directory.
pub fn read_corpus(dir: &Path) -> Result<Vec<(PathBuf, DefectClass, AnyImage)>> {
    read_labels(dir)?
        .into_par_iter()
        .map(|(name, class)| {
            let path = dir.join(&name);
            let img = pnm::read(&path)?;
            Ok((path, class, img))
        })
        .collect()
}

/// Loads a corpus directory and extracts its features with `pipeline`.
pub fn corpus_features(dir: &Path, pipeline: &InspectionPipeline) -> Result<Vec<LabeledFeatures>> {
    read_corpus(dir)?
        .par_iter()
        .map(|(_, class, img)| {
            let stages = pipeline.run(img)?;
            let (raw, scaled) = features::from_stages(&stages);
            Ok(LabeledFeatures {
                class: *class,
                raw: Some(raw),
                scaled,
            })
        })
        .collect()
}

pub fn write_features(path: &Path, rows: &[LabeledFeatures]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["label", "h", "w", "r", "n"])
        .map_err(|e| csv_error(path, e))?;
    for row in rows {
        let s = row.scaled;
        w.write_record([
            row.class.name().to_string(),
            s.height.to_string(),
            s.width.to_string(),
            s.ratio.to_string(),
            s.regions.to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_features(path: &Path) -> Result<Vec<LabeledFeatures>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        if rec.len() != 5 {
            return Err(Error::format(
                path,
                format!("expected 5 columns, got {}", rec.len()),
            ));
        }
        let class = rec[0]
            .parse()
            .map_err(|e: Error| Error::format(path, e.to_string()))?;
        let mut v = [0.0; 4];
        for (slot, field) in v.iter_mut().zip(rec.iter().skip(1)) {
            *slot = field
                .parse()
                .map_err(|_| Error::format(path, format!("bad feature value {field:?}")))?;
        }
        out.push(LabeledFeatures {
            class,
            raw: None,
            scaled: ScaledFeatures::from_array(v),
        });
    }
    Ok(out)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!("checked io kind"),
        }
    } else {
        Error::format(path, e.to_string())
    }
}
