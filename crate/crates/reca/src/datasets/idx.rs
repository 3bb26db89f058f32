//! IDX container parsing (the MNIST distribution format).
//!
//! IDX is a big-endian binary format: a 4-byte magic encoding the element
//! type and rank, one 4-byte big-endian size per dimension, then raw data.
//! Image files use magic `0x00000803` (unsigned byte, rank 3); label files
//! use `0x00000801` (unsigned byte, rank 1). Files ending in `.gz` are
//! decompressed transparently.

use std::io::Read;
use std::path::Path;

use crate::datasets::{DatasetKind, GrayImage, LabeledDataset, SampleData};
use crate::{Error, Result};

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

fn read_maybe_gz(path: &Path) -> Result<Vec<u8>> {
    let raw = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|e| e == "gz") {
        let mut out = Vec::new();
        flate2::read::GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| Error::io(path, e))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

fn be_u32(data: &[u8], offset: usize, path: &Path) -> Result<u32> {
    let end = offset + 4;
    if data.len() < end {
        return Err(Error::IdxTruncated {
            path: path.to_path_buf(),
            expected: end,
            found: data.len(),
        });
    }
    Ok(u32::from_be_bytes(data[offset..end].try_into().unwrap()))
}

fn parse_images(data: &[u8], path: &Path) -> Result<Vec<GrayImage>> {
    let magic = be_u32(data, 0, path)?;
    if magic != IMAGES_MAGIC {
        return Err(Error::IdxMagic {
            path: path.to_path_buf(),
            expected: IMAGES_MAGIC,
            found: magic,
        });
    }
    let n = be_u32(data, 4, path)? as usize;
    let height = be_u32(data, 8, path)? as usize;
    let width = be_u32(data, 12, path)? as usize;
    let body = &data[16..];
    let expected = n * height * width;
    if body.len() < expected {
        return Err(Error::IdxTruncated {
            path: path.to_path_buf(),
            expected: expected + 16,
            found: data.len(),
        });
    }
    Ok((0..n)
        .map(|i| GrayImage {
            height,
            width,
            pixels: body[i * height * width..(i + 1) * height * width].to_vec(),
        })
        .collect())
}

fn parse_labels(data: &[u8], path: &Path) -> Result<Vec<u8>> {
    let magic = be_u32(data, 0, path)?;
    if magic != LABELS_MAGIC {
        return Err(Error::IdxMagic {
            path: path.to_path_buf(),
            expected: LABELS_MAGIC,
            found: magic,
        });
    }
    let n = be_u32(data, 4, path)? as usize;
    let body = &data[8..];
    if body.len() < n {
        return Err(Error::IdxTruncated {
            path: path.to_path_buf(),
            expected: n + 8,
            found: data.len(),
        });
    }
    Ok(body[..n].to_vec())
}

/// Loads a paired IDX image file and label file into an image dataset.
/// The dataset is named after the image file's stem.
pub fn load_mnist_idx(
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
) -> Result<LabeledDataset> {
    let images_path = images_path.as_ref();
    let labels_path = labels_path.as_ref();
    let images = parse_images(&read_maybe_gz(images_path)?, images_path)?;
    let labels = parse_labels(&read_maybe_gz(labels_path)?, labels_path)?;
    if images.len() != labels.len() {
        return Err(Error::IdxCountMismatch {
            images: images.len(),
            labels: labels.len(),
        });
    }
    if images.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let kind = DatasetKind::Image {
        height: images[0].height,
        width: images[0].width,
    };
    let name = images_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "idx".to_string());
    let samples = images
        .into_iter()
        .zip(labels)
        .map(|(img, label)| (SampleData::Image(img), label as i32))
        .collect();
    Ok(LabeledDataset::new(name, kind, samples))
}
