//! Binary portable anymap I/O: 8-bit graymaps (`P5`) and 24-bit pixmaps (`P6`).

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{GrayImage, RgbImage};
use crate::error::{Error, Result};

/// A decoded anymap, either single-channel or color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyImage {
    Gray(GrayImage),
    Rgb(RgbImage),
}

impl AnyImage {
    pub fn width(&self) -> usize {
        match self {
            AnyImage::Gray(g) => g.width(),
            AnyImage::Rgb(c) => c.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            AnyImage::Gray(g) => g.height(),
            AnyImage::Rgb(c) => c.height(),
        }
    }
}

struct Header {
    magic: u8,
    width: usize,
    height: usize,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> std::result::Result<Header, String> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err("not a portable anymap".into());
    }
    let magic = bytes[1];
    if magic != b'5' && magic != b'6' {
        return Err(format!("unsupported anymap type P{}", magic as char));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // Whitespace and `#` comments may separate header fields.
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err("truncated header".into()),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err("malformed header".into());
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text
            .parse()
            .map_err(|_| format!("header value {text} out of range"))?;
    }
    // Exactly one whitespace byte precedes the raster.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err("truncated header".into()),
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(format!(
            "maxval {maxval} unsupported, only 8-bit (255) rasters are read"
        ));
    }
    if width == 0 || height == 0 {
        return Err("zero-sized image".into());
    }
    Ok(Header {
        magic,
        width,
        height,
        data_start: pos,
    })
}

pub fn decode(bytes: &[u8]) -> std::result::Result<AnyImage, String> {
    let h = parse_header(bytes)?;
    let channels = if h.magic == b'5' { 1 } else { 3 };
    let need = h.width * h.height * channels;
    let raster = &bytes[h.data_start..];
    if raster.len() < need {
        return Err(format!(
            "truncated raster: expected {need} bytes, found {}",
            raster.len()
        ));
    }
    let raster = &raster[..need];
    Ok(if channels == 1 {
        AnyImage::Gray(
            GrayImage::from_vec(h.width, h.height, raster.to_vec()).map_err(|e| e.to_string())?,
        )
    } else {
        let px = raster.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        AnyImage::Rgb(RgbImage::from_vec(h.width, h.height, px).map_err(|e| e.to_string())?)
    })
}

pub fn read(path: &Path) -> Result<AnyImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes).map_err(|m| Error::format(path, m))
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.as_slice());
    out
}

pub fn encode_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.pixels().iter().flatten());
    out
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(bytes).map_err(|e| Error::io(path, e))
}

pub fn write_pgm(img: &GrayImage, path: &Path) -> Result<()> {
    write_bytes(path, &encode_pgm(img))
}

pub fn write_ppm(img: &RgbImage, path: &Path) -> Result<()> {
    write_bytes(path, &encode_ppm(img))
}
