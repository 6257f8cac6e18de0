//! MNIST IDX loader.
//!
//! Big-endian IDX with magic `0x00000803` for image files and `0x00000801`
//! for label files. Pixels are scaled to `[0, 1]` and flattened; labels come
//! back one-hot over 10 classes.

use std::fs;
use std::path::Path;

use super::{one_hot, Dataset, DatasetMeta};
use crate::complex::ComplexTensor;
use crate::error::{Error, Result};

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

pub const MNIST_CLASSES: usize = 10;

/// One parsed split: features with a zero imaginary plane plus labels.
#[derive(Clone, Debug)]
pub struct MnistSplit {
    pub features: ComplexTensor,
    pub labels: Vec<usize>,
    pub targets: ndarray::Array2<f64>,
}

struct Reader<'a> {
    bytes: &'a [u8],
    offset: usize,
    path: String,
}

impl<'a> Reader<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::IdxFormat {
            path: self.path.clone(),
            offset: self.offset as u64,
            message: message.into(),
        }
    }

    fn read_u32(&mut self) -> Result<u32> {
        let end = self.offset + 4;
        if end > self.bytes.len() {
            return Err(self.err("truncated while reading a u32"));
        }
        let value = u32::from_be_bytes(self.bytes[self.offset..end].try_into().unwrap());
        self.offset = end;
        Ok(value)
    }

    fn read_bytes(&mut self, count: usize) -> Result<&'a [u8]> {
        let end = self.offset + count;
        if end > self.bytes.len() {
            return Err(self.err(format!(
                "truncated: wanted {count} bytes, file has {} left",
                self.bytes.len() - self.offset
            )));
        }
        let slice = &self.bytes[self.offset..end];
        self.offset = end;
        Ok(slice)
    }

    fn expect_consumed(&self) -> Result<()> {
        if self.offset != self.bytes.len() {
            return Err(self.err(format!(
                "{} trailing bytes after the expected payload",
                self.bytes.len() - self.offset
            )));
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::IdxFormat {
        path: path.display().to_string(),
        offset: 0,
        message: e.to_string(),
    })
}

/// Parses one images/labels pair into a split.
pub fn load_mnist(images: &Path, labels: &Path) -> Result<MnistSplit> {
    let image_bytes = read_file(images)?;
    let mut reader = Reader {
        bytes: &image_bytes,
        offset: 0,
        path: images.display().to_string(),
    };
    let magic = reader.read_u32()?;
    if magic != IMAGES_MAGIC {
        return Err(Error::IdxFormat {
            path: reader.path.clone(),
            offset: 0,
            message: format!("bad magic {magic:#010x}, expected {IMAGES_MAGIC:#010x}"),
        });
    }
    let count = reader.read_u32()? as usize;
    let rows = reader.read_u32()? as usize;
    let cols = reader.read_u32()? as usize;
    let pixels_per_image = rows * cols;
    let pixels = reader.read_bytes(count * pixels_per_image)?;
    reader.expect_consumed()?;

    let mut re = ndarray::Array2::zeros((count, pixels_per_image));
    for (i, px) in pixels.iter().enumerate() {
        re[[i / pixels_per_image, i % pixels_per_image]] = *px as f64 / 255.0;
    }

    let label_bytes = read_file(labels)?;
    let mut reader = Reader {
        bytes: &label_bytes,
        offset: 0,
        path: labels.display().to_string(),
    };
    let magic = reader.read_u32()?;
    if magic != LABELS_MAGIC {
        return Err(Error::IdxFormat {
            path: reader.path.clone(),
            offset: 0,
            message: format!("bad magic {magic:#010x}, expected {LABELS_MAGIC:#010x}"),
        });
    }
    let label_count = reader.read_u32()? as usize;
    if label_count != count {
        return Err(Error::IdxFormat {
            path: reader.path.clone(),
            offset: 4,
            message: format!("{label_count} labels for {count} images"),
        });
    }
    let raw_labels = reader.read_bytes(label_count)?;
    reader.expect_consumed()?;
    let labels_vec: Vec<usize> = raw_labels.iter().map(|&b| b as usize).collect();
    let targets = one_hot(&labels_vec, MNIST_CLASSES)?;

    Ok(MnistSplit {
        features: ComplexTensor::from_real(re),
        labels: labels_vec,
        targets,
    })
}

/// Loads the standard four files (`train-*`, `t10k-*`) from a directory.
pub fn load_mnist_dir(dir: &Path) -> Result<Dataset> {
    let train = load_mnist(
        &dir.join("train-images-idx3-ubyte"),
        &dir.join("train-labels-idx1-ubyte"),
    )?;
    let test = load_mnist(
        &dir.join("t10k-images-idx3-ubyte"),
        &dir.join("t10k-labels-idx1-ubyte"),
    )?;
    let n_features = train.features.cols();
    Ok(Dataset {
        x_train: train.features,
        y_train: train.targets,
        x_test: test.features,
        y_test: test.targets,
        n_features,
        n_classes: MNIST_CLASSES,
        metadata: DatasetMeta::Mnist {
            name: "mnist".into(),
            dir: dir.display().to_string(),
        },
    })
}
