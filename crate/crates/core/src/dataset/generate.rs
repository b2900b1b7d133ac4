//! Seeded synthetic knitted-fabric images.
//!
//! Each image is a flat fabric color modulated by a loop texture and bounded
//! uniform noise. Defective images carry one defect whose gray level differs
//! from the fabric by at least [`MIN_CONTRAST`] levels:
//!
//! * color yarn: a partial horizontal band in another yarn color
//! * vertical / horizontal missing yarn: a thin light stripe across the image
//! * hole: a dark ellipse
//! * spot: a cluster of two to four separated blobs

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::DefectClass;
use crate::error::{Error, Result};
use crate::imaging::RgbImage;
use crate::seed;

/// Guaranteed gray-level separation between a defect and its fabric.
pub const MIN_CONTRAST: f64 = 40.0;

const FABRIC_COLORS: [[u8; 3]; 7] = [
    [200, 80, 80],
    [80, 150, 90],
    [90, 110, 190],
    [190, 170, 120],
    [120, 120, 130],
    [170, 100, 160],
    [60, 140, 150],
];

/// Corpus composition and rendering settings.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSpec {
    /// Images per class, in class order.
    pub counts: [usize; 6],
    /// Side length of the square images.
    pub size: usize,
    /// Peak amplitude of the loop texture, in gray levels.
    pub texture: u8,
    /// Bound of the uniform per-pixel noise, in gray levels.
    pub noise: u8,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            counts: [6, 16, 16, 11, 18, 33],
            size: 512,
            texture: 5,
            noise: 8,
            seed: 0,
        }
    }
}

impl CorpusSpec {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.total() == 0 {
            return Err(Error::InvalidSpec(
                "corpus must contain at least one image".into(),
            ));
        }
        if self.size < 64 {
            return Err(Error::InvalidSpec(format!(
                "image size {} below 64 pixels",
                self.size
            )));
        }
        // Keeps fabric-only gray levels within 32 of each other, so defect-free
        // histograms have no second peak.
        if self.texture as u32 + self.noise as u32 > 15 {
            return Err(Error::InvalidSpec(format!(
                "texture {} + noise {} exceeds 15 gray levels",
                self.texture, self.noise
            )));
        }
        Ok(())
    }

    /// Class label of each image index.
    pub fn labels(&self) -> Vec<DefectClass> {
        DefectClass::ALL
            .iter()
            .zip(self.counts)
            .flat_map(|(&c, n)| std::iter::repeat_n(c, n))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledImage {
    pub name: String,
    pub class: DefectClass,
    pub image: RgbImage,
}

/// All images of `spec`, ordered by class; image `i` depends only on the
/// corpus seed and `i`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<LabeledImage>> {
    spec.validate()?;
    let labels = spec.labels();
    labels
        .par_iter()
        .enumerate()
        .map(|(i, &class)| {
            Ok(LabeledImage {
                name: format!("img_{i:03}.ppm"),
                class,
                image: generate_image(spec, class, i as u64)?,
            })
        })
        .collect()
}

fn luma(c: [f64; 3]) -> f64 {
    0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]
}

fn shift(c: [u8; 3], delta: f64) -> [f64; 3] {
    c.map(|v| (v as f64 + delta).clamp(0.0, 255.0))
}

/// Defect color at least `MIN_CONTRAST` from `base` in gray level, moved in
/// direction `sign` when that leaves enough room.
fn defect_color(base: [u8; 3], sign: f64, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let magnitude = rng.gen_range(70.0..100.0);
    let base_y = luma(base.map(f64::from));
    let preferred = shift(base, sign * magnitude);
    if (luma(preferred) - base_y).abs() >= MIN_CONTRAST + 20.0 {
        preferred
    } else {
        shift(base, -sign * magnitude)
    }
}

/// A new yarn color: a permuted fabric color moved to a gray level offset
/// from the fabric.
fn yarn_color(base: [u8; 3], rng: &mut ChaCha8Rng) -> [f64; 3] {
    let base_y = luma(base.map(f64::from));
    let hue = FABRIC_COLORS[rng.gen_range(0..FABRIC_COLORS.len())];
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let target = base_y + sign * rng.gen_range(70.0..100.0);
    let target = if (0.0..=255.0).contains(&target) {
        target
    } else {
        base_y - sign * (target - base_y).abs()
    };
    let delta = target - luma(hue.map(f64::from));
    let c = shift(hue, delta);
    if (luma(c) - base_y).abs() >= MIN_CONTRAST + 20.0 {
        c
    } else {
        defect_color(base, sign, rng)
    }
}

struct Canvas {
    size: usize,
    mask: Vec<bool>,
}

impl Canvas {
    fn new(size: usize) -> Self {
        Canvas {
            size,
            mask: vec![false; size * size],
        }
    }

    fn rect(&mut self, top: usize, left: usize, height: usize, width: usize) {
        for r in top..(top + height).min(self.size) {
            for c in left..(left + width).min(self.size) {
                self.mask[r * self.size + c] = true;
            }
        }
    }

    fn ellipse(&mut self, cy: f64, cx: f64, ry: f64, rx: f64) {
        let (r0, r1) = (
            (cy - ry).floor().max(0.0) as usize,
            ((cy + ry).ceil() as usize).min(self.size - 1),
        );
        let (c0, c1) = (
            (cx - rx).floor().max(0.0) as usize,
            ((cx + rx).ceil() as usize).min(self.size - 1),
        );
        for r in r0..=r1 {
            for c in c0..=c1 {
                let (dy, dx) = ((r as f64 - cy) / ry, (c as f64 - cx) / rx);
                if dy * dy + dx * dx <= 1.0 {
                    self.mask[r * self.size + c] = true;
                }
            }
        }
    }
}

/// Lays out the defect of `class` on the canvas and returns its color.
fn draw_defect(
    class: DefectClass,
    canvas: &mut Canvas,
    base: [u8; 3],
    rng: &mut ChaCha8Rng,
) -> Option<[f64; 3]> {
    let s = canvas.size;
    let k = s as f64 / 512.0;
    let len = |lo: f64, hi: f64| ((lo * k).max(1.0) as usize, (hi * k).max(2.0) as usize);
    let margin = (24.0 * k).max(8.0) as usize;
    match class {
        DefectClass::DefectFree => None,
        DefectClass::VerticalMissingYarn | DefectClass::HorizontalMissingYarn => {
            let thickness = rng.gen_range(5..=8);
            let at = rng.gen_range(margin..s - margin - thickness);
            if class == DefectClass::VerticalMissingYarn {
                canvas.rect(0, at, s, thickness);
            } else {
                canvas.rect(at, 0, thickness, s);
            }
            Some(defect_color(base, 1.0, rng))
        }
        DefectClass::ColorYarn => {
            let thickness = rng.gen_range(8..=14);
            let (lo, hi) = len(150.0, 350.0);
            let length = rng.gen_range(lo..=hi).min(s - 2 * margin);
            let top = rng.gen_range(margin..s - margin - thickness);
            let left = rng.gen_range(margin..=s - margin - length);
            canvas.rect(top, left, thickness, length);
            Some(yarn_color(base, rng))
        }
        DefectClass::Hole => {
            let (lo, hi) = len(10.0, 22.0);
            let (lo, hi) = (lo.max(4), hi.max(5));
            let ry = rng.gen_range(lo..=hi) as f64;
            let rx = rng.gen_range(lo..=hi) as f64;
            let cy = rng.gen_range(margin as f64 + ry..s as f64 - margin as f64 - ry);
            let cx = rng.gen_range(margin as f64 + rx..s as f64 - margin as f64 - rx);
            canvas.ellipse(cy, cx, ry, rx);
            Some(defect_color(base, -1.0, rng))
        }
        DefectClass::Spot => {
            let main_r = rng.gen_range(6.0..10.0f64).max(4.0);
            let satellites = rng.gen_range(1..=3);
            let reach = main_r + 2.0 * 7.0 + 16.0;
            let cy = rng.gen_range(margin as f64 + reach..s as f64 - margin as f64 - reach);
            let cx = rng.gen_range(margin as f64 + reach..s as f64 - margin as f64 - reach);
            canvas.ellipse(cy, cx, main_r, main_r);
            let mut placed: Vec<(f64, f64, f64)> = vec![(cy, cx, main_r)];
            let mut attempts = 0;
            while placed.len() < 1 + satellites && attempts < 200 {
                attempts += 1;
                let r = rng.gen_range(5.0..7.0);
                let gap = rng.gen_range(8.0..16.0);
                let angle = rng.gen_range(0.0..2.0 * PI);
                let d = main_r + r + gap;
                let (y, x) = (cy + d * angle.sin(), cx + d * angle.cos());
                // Blobs stay apart after blurring so they remain separate regions.
                if placed.iter().all(|&(py, px, pr)| {
                    ((py - y).powi(2) + (px - x).powi(2)).sqrt() >= pr + r + 8.0
                }) {
                    canvas.ellipse(y, x, r, r);
                    placed.push((y, x, r));
                }
            }
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            Some(defect_color(base, sign, rng))
        }
    }
}

/// Renders image `index` of class `class` for `spec`.
pub fn generate_image(spec: &CorpusSpec, class: DefectClass, index: u64) -> Result<RgbImage> {
    spec.validate()?;
    let mut rng = seed::stream(spec.seed, index);
    let s = spec.size;
    let base = FABRIC_COLORS[rng.gen_range(0..FABRIC_COLORS.len())];
    let period_x = rng.gen_range(5.0..9.0);
    let period_y = rng.gen_range(5.0..9.0);
    let mut canvas = Canvas::new(s);
    let color = draw_defect(class, &mut canvas, base, &mut rng);

    let tex = spec.texture as f64;
    let noise = spec.noise as i32;
    let mut img = RgbImage::filled(s, s, base);
    for r in 0..s {
        let sy = (2.0 * PI * r as f64 / period_y).sin();
        for c in 0..s {
            let t = tex * sy * (2.0 * PI * c as f64 / period_x).sin()
                + rng.gen_range(-noise..=noise) as f64;
            let px = match color {
                Some(dc) if canvas.mask[r * s + c] => dc,
                _ => base.map(f64::from),
            };
            img.set(r, c, px.map(|v| (v + t).round().clamp(0.0, 255.0) as u8));
        }
    }
    Ok(img)
}

/// Gray-level contrast between the fabric and defect colors of an image, for
/// diagnostics; `None` for defect-free classes.
pub fn nominal_contrast(spec: &CorpusSpec, class: DefectClass, index: u64) -> Option<f64> {
    let mut rng = seed::stream(spec.seed, index);
    let base = FABRIC_COLORS[rng.gen_range(0..FABRIC_COLORS.len())];
    let _ = (rng.gen_range(5.0..9.0f64), rng.gen_range(5.0..9.0f64));
    let mut canvas = Canvas::new(spec.size);
    let color = draw_defect(class, &mut canvas, base, &mut rng)?;
    Some((luma(color) - luma(base.map(f64::from))).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> CorpusSpec {
        CorpusSpec {
            counts: [1, 1, 1, 1, 1, 1],
            size: 128,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn default_counts() {
        let spec = CorpusSpec::default();
        assert_eq!(spec.total(), 100);
        let labels = spec.labels();
        for (c, n) in DefectClass::ALL.iter().zip([6, 16, 16, 11, 18, 33]) {
            assert_eq!(labels.iter().filter(|l| *l == c).count(), n);
        }
    }

    #[test]
    fn seeded_corpus_is_reproducible() {
        let a = generate_corpus(&small(3)).unwrap();
        let b = generate_corpus(&small(3)).unwrap();
        let c = generate_corpus(&small(4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn contrast_is_guaranteed() {
        let spec = CorpusSpec::default();
        for (i, class) in spec.labels().into_iter().enumerate() {
            match nominal_contrast(&spec, class, i as u64) {
                Some(c) => assert!(c >= MIN_CONTRAST, "image {i} contrast {c}"),
                None => assert_eq!(class, DefectClass::DefectFree),
            }
        }
    }

    #[test]
    fn invalid_specs() {
        let empty = CorpusSpec {
            counts: [0; 6],
            ..Default::default()
        };
        assert!(matches!(
            generate_corpus(&empty),
            Err(Error::InvalidSpec(_))
        ));
        let tiny = CorpusSpec {
            size: 32,
            ..Default::default()
        };
        assert!(tiny.validate().is_err());
        let noisy = CorpusSpec {
            noise: 20,
            ..Default::default()
        };
        assert!(noisy.validate().is_err());
    }
}
