//! Raster files: a JSON header `<name>.json` next to a raw band-sequential
//! little-endian payload `<name>.bin`.
//!
//! Element `(r, c, b)` of an `H × W × D` raster lives at payload index
//! `b·H·W + r·W + c`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{BinaryMask, HyperCube};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DType {
    F32,
    U8,
}

impl DType {
    fn size(self) -> usize {
        match self {
            DType::F32 => 4,
            DType::U8 => 1,
        }
    }
}

/// Contents of a raster header file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RasterHeader {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    pub dtype: DType,
    pub interleave: String,
    pub byte_order: String,
}

impl RasterHeader {
    pub fn new(height: usize, width: usize, bands: usize, dtype: DType) -> Self {
        Self {
            height,
            width,
            bands,
            dtype,
            interleave: "bsq".into(),
            byte_order: "little".into(),
        }
    }

    fn payload_len(&self) -> usize {
        self.height * self.width * self.bands * self.dtype.size()
    }
}

/// Header and payload paths for `path`, which may name either file or the
/// shared stem.
pub fn raster_paths(path: &Path) -> (PathBuf, PathBuf) {
    (path.with_extension("json"), path.with_extension("bin"))
}

fn read_header(path: &Path, expect: DType) -> Result<RasterHeader> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let header: RasterHeader = serde_json::from_str(&text).map_err(|e| Error::Header {
        path: path.to_owned(),
        msg: e.to_string(),
    })?;
    let bad = |msg: String| Error::Header {
        path: path.to_owned(),
        msg,
    };
    if header.interleave != "bsq" {
        return Err(bad(format!(
            "unsupported interleave `{}`",
            header.interleave
        )));
    }
    if header.byte_order != "little" {
        return Err(bad(format!(
            "unsupported byte order `{}`",
            header.byte_order
        )));
    }
    if header.dtype != expect {
        return Err(bad(format!(
            "expected dtype {:?}, found {:?}",
            expect, header.dtype
        )));
    }
    if header.height == 0 || header.width == 0 || header.bands == 0 {
        return Err(bad("zero-sized dimension".into()));
    }
    Ok(header)
}

fn read_payload(path: &Path, header: &RasterHeader) -> Result<Vec<u8>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() != header.payload_len() {
        return Err(Error::PayloadSize {
            expected: header.payload_len(),
            found: bytes.len(),
        });
    }
    Ok(bytes)
}

fn write_raster(path: &Path, header: &RasterHeader, payload: &[u8]) -> Result<()> {
    let (hdr_path, bin_path) = raster_paths(path);
    let text = serde_json::to_string(header).expect("header serializes");
    fs::write(&hdr_path, text).map_err(|e| Error::io(&hdr_path, e))?;
    fs::write(&bin_path, payload).map_err(|e| Error::io(&bin_path, e))?;
    Ok(())
}

/// Reads an `f32` cube.
pub fn load_cube(path: impl AsRef<Path>) -> Result<HyperCube> {
    let (hdr_path, bin_path) = raster_paths(path.as_ref());
    let header = read_header(&hdr_path, DType::F32)?;
    let bytes = read_payload(&bin_path, &header)?;
    let (h, w, d) = (header.height, header.width, header.bands);
    let plane = h * w;
    let mut values = vec![0.0f64; plane * d];
    for (i, chunk) in bytes.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        let (b, p) = (i / plane, i % plane);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                row: p / w,
                col: p % w,
                band: b,
            });
        }
        values[p * d + b] = v as f64;
    }
    HyperCube::new(h, w, d, values)
}

/// Writes `cube` as `f32`. Values are narrowed from `f64`, so only cubes
/// holding `f32`-representable values round-trip exactly.
pub fn save_cube(cube: &HyperCube, path: impl AsRef<Path>) -> Result<()> {
    let (h, w, d) = cube.dims();
    let mut payload = Vec::with_capacity(h * w * d * 4);
    for b in 0..d {
        for r in 0..h {
            for c in 0..w {
                let v = cube.get(r, c, b) as f32;
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        row: r,
                        col: c,
                        band: b,
                    });
                }
                payload.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    write_raster(
        path.as_ref(),
        &RasterHeader::new(h, w, d, DType::F32),
        &payload,
    )
}

/// Reads a single-band `u8` mask.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let (hdr_path, bin_path) = raster_paths(path.as_ref());
    let header = read_header(&hdr_path, DType::U8)?;
    if header.bands != 1 {
        return Err(Error::Header {
            path: hdr_path,
            msg: format!("mask must have 1 band, found {}", header.bands),
        });
    }
    let bytes = read_payload(&bin_path, &header)?;
    BinaryMask::new(header.height, header.width, bytes)
}

pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    let header = RasterHeader::new(mask.height(), mask.width(), 1, DType::U8);
    write_raster(path.as_ref(), &header, mask.labels())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_f32(dir: &Path, name: &str, h: usize, w: usize, d: usize, vals: &[f32]) -> PathBuf {
        let path = dir.join(name);
        let payload: Vec<u8> = vals.iter().flat_map(|v| v.to_le_bytes()).collect();
        write_raster(&path, &RasterHeader::new(h, w, d, DType::F32), &payload).unwrap();
        path
    }

    #[test]
    fn zero_cube_loads() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_f32(dir.path(), "z", 2, 2, 1, &[0.0; 4]);
        let cube = load_cube(&p).unwrap();
        assert_eq!(cube.dims(), (2, 2, 1));
        assert!(cube.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn band_sequential_index_mapping() {
        let dir = tempfile::tempdir().unwrap();
        let vals: Vec<f32> = (0..12).map(|v| v as f32).collect();
        let p = write_f32(dir.path(), "bsq", 2, 2, 3, &vals);
        let cube = load_cube(p.with_extension("json")).unwrap();
        for b in 0..3 {
            for r in 0..2 {
                for c in 0..2 {
                    assert_eq!(cube.get(r, c, b), (b * 4 + r * 2 + c) as f64);
                }
            }
        }
    }

    #[test]
    fn wrong_payload_length() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_f32(dir.path(), "short", 2, 2, 3, &[1.0; 11]);
        assert!(matches!(
            load_cube(&p),
            Err(Error::PayloadSize {
                expected: 48,
                found: 44
            })
        ));
    }

    #[test]
    fn non_finite_names_first_index() {
        let dir = tempfile::tempdir().unwrap();
        let mut vals = vec![0.0f32; 8];
        vals[5] = f32::NAN; // band 1, pixel 1
        vals[7] = f32::INFINITY;
        let p = write_f32(dir.path(), "nan", 2, 2, 2, &vals);
        match load_cube(&p) {
            Err(Error::NonFinite { row, col, band }) => assert_eq!((row, col, band), (0, 1, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn save_encodes_little_endian() {
        let dir = tempfile::tempdir().unwrap();
        let cube = HyperCube::new(1, 1, 1, vec![3.5]).unwrap();
        let p = dir.path().join("one");
        save_cube(&cube, &p).unwrap();
        assert_eq!(
            fs::read(p.with_extension("bin")).unwrap(),
            [0x00, 0x00, 0x60, 0x40]
        );
        assert_eq!(
            fs::read_to_string(p.with_extension("json")).unwrap(),
            r#"{"height":1,"width":1,"bands":1,"dtype":"f32","interleave":"bsq","byte_order":"little"}"#
        );
    }

    #[test]
    fn missing_and_garbled_headers() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_cube(dir.path().join("nothing")),
            Err(Error::Io { .. })
        ));
        fs::write(dir.path().join("bad.json"), "{\"height\": 2").unwrap();
        assert!(matches!(
            load_cube(dir.path().join("bad")),
            Err(Error::Header { .. })
        ));
        fs::write(
            dir.path().join("bip.json"),
            r#"{"height":1,"width":1,"bands":1,"dtype":"f32","interleave":"bip","byte_order":"little"}"#,
        )
        .unwrap();
        assert!(matches!(
            load_cube(dir.path().join("bip")),
            Err(Error::Header { .. })
        ));
    }

    #[test]
    fn zero_band_cube_rejected() {
        assert!(HyperCube::zeros(2, 2, 0).is_err());
    }

    #[test]
    fn mask_counts_and_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let mask = BinaryMask::new(3, 2, vec![0, 1, 255, 0, 1, 1]).unwrap();
        assert_eq!(mask.changed_count(), 3);
        assert_eq!(mask.ignore_count(), 1);
        let p = dir.path().join("m");
        save_mask(&mask, &p).unwrap();
        assert_eq!(load_mask(&p).unwrap(), mask);

        let zeros = BinaryMask::zeros(4, 4).unwrap();
        save_mask(&zeros, &p).unwrap();
        assert_eq!(load_mask(&p).unwrap().changed_count(), 0);

        fs::write(p.with_extension("bin"), [0u8, 7, 0, 0, 0, 0]).unwrap();
        fs::write(
            p.with_extension("json"),
            serde_json::to_string(&RasterHeader::new(3, 2, 1, DType::U8)).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            load_mask(&p),
            Err(Error::InvalidLabel {
                label: 7,
                row: 0,
                col: 1
            })
        ));
    }

    #[test]
    fn dtype_mismatch_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_f32(dir.path(), "f", 1, 1, 1, &[1.0]);
        assert!(matches!(load_mask(&p), Err(Error::Header { .. })));
    }
}
