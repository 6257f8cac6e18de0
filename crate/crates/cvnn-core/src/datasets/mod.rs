//! Dataset containers, the synthetic generators and the MNIST IDX loader.

mod mnist;
mod synthetic;

pub use mnist::{load_mnist, load_mnist_dir, MnistSplit};
pub use synthetic::{gen_synthetic, SyntheticMode, SyntheticSpec};

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::complex::ComplexTensor;
use crate::error::{Error, Result};

/// A classification dataset with disjoint train/test splits. Real-valued
/// data keeps an all-zero imaginary plane.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub x_train: ComplexTensor,
    pub y_train: Array2<f64>,
    pub x_test: ComplexTensor,
    pub y_test: Array2<f64>,
    pub n_features: usize,
    pub n_classes: usize,
    pub metadata: DatasetMeta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DatasetMeta {
    Synthetic { name: String, spec: SyntheticSpec },
    Mnist { name: String, dir: String },
}

impl DatasetMeta {
    pub fn name(&self) -> &str {
        match self {
            DatasetMeta::Synthetic { name, .. } => name,
            DatasetMeta::Mnist { name, .. } => name,
        }
    }
}

/// Exact one-hot encoding; every index must be below `classes`.
pub fn one_hot(labels: &[usize], classes: usize) -> Result<Array2<f64>> {
    let mut out = Array2::zeros((labels.len(), classes));
    for (row, &label) in labels.iter().enumerate() {
        if label >= classes {
            return Err(Error::LabelOutOfRange {
                index: label,
                classes,
            });
        }
        out[[row, label]] = 1.0;
    }
    Ok(out)
}

/// Writes one split as CSV: real features, imaginary features, label index.
pub fn write_split_csv<W: Write>(x: &ComplexTensor, y: &Array2<f64>, mut out: W) -> Result<()> {
    let d = x.cols();
    let mut header = Vec::with_capacity(2 * d + 1);
    for j in 0..d {
        header.push(format!("re_{j}"));
    }
    for j in 0..d {
        header.push(format!("im_{j}"));
    }
    header.push("label".into());
    writeln!(out, "{}", header.join(","))?;

    for i in 0..x.rows() {
        let mut fields = Vec::with_capacity(2 * d + 1);
        for j in 0..d {
            fields.push(format!("{}", x.re()[[i, j]]));
        }
        for j in 0..d {
            fields.push(format!("{}", x.im()[[i, j]]));
        }
        let label = y
            .row(i)
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(idx, _)| idx)
            .unwrap_or(0);
        fields.push(format!("{label}"));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_hot_encodes_rows() {
        let y = one_hot(&[0, 2], 3).unwrap();
        assert_eq!(y, ndarray::arr2(&[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]));
    }

    #[test]
    fn one_hot_rows_sum_to_one_and_round_trip() {
        let labels = vec![3, 1, 4, 1, 5, 0, 2];
        let y = one_hot(&labels, 6).unwrap();
        for (row, &label) in y.rows().into_iter().zip(&labels) {
            assert_eq!(row.sum(), 1.0);
            let argmax = row
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            assert_eq!(argmax, label);
        }
    }

    #[test]
    fn one_hot_rejects_out_of_range() {
        assert!(matches!(
            one_hot(&[0, 7], 3),
            Err(Error::LabelOutOfRange { index: 7, classes: 3 })
        ));
    }

    #[test]
    fn csv_export_layout() {
        let x = ComplexTensor::from_fn(2, 2, |i, j| {
            crate::complex::ComplexScalar::new((i + j) as f64, (i * 2 + j) as f64)
        });
        let y = one_hot(&[1, 0], 2).unwrap();
        let mut buffer = Vec::new();
        write_split_csv(&x, &y, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "re_0,re_1,im_0,im_1,label");
        assert_eq!(lines.next().unwrap(), "0,1,0,1,1");
        assert_eq!(lines.next().unwrap(), "1,2,2,3,0");
    }
}
