use ndarray::{Array2, ArrayView2, Axis};

use super::scalar::ComplexScalar;
use crate::error::{Error, Result};

/// A complex matrix stored as two real planes of identical shape.
///
/// The split-plane layout keeps the real and imaginary components addressable
/// as independent real parameters, which is what the backward pass and the
/// optimiser operate on. A tensor whose imaginary plane is all zero behaves
/// exactly like a real matrix under every operation here.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTensor {
    re: Array2<f64>,
    im: Array2<f64>,
}

impl ComplexTensor {
    pub fn from_planes(re: Array2<f64>, im: Array2<f64>) -> Result<Self> {
        if re.dim() != im.dim() {
            return Err(Error::DimensionMismatch {
                op: "from_planes",
                left_rows: re.nrows(),
                left_cols: re.ncols(),
                right_rows: im.nrows(),
                right_cols: im.ncols(),
            });
        }
        Ok(Self { re, im })
    }

    /// A real matrix lifted into the complex domain (zero imaginary plane).
    pub fn from_real(re: Array2<f64>) -> Self {
        let im = Array2::zeros(re.dim());
        Self { re, im }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            re: Array2::zeros((rows, cols)),
            im: Array2::zeros((rows, cols)),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Self {
        let mut re = Array2::zeros((rows, cols));
        let mut im = Array2::zeros((rows, cols));
        for i in 0..rows {
            for j in 0..cols {
                let z = f(i, j);
                re[[i, j]] = z.re;
                im[[i, j]] = z.im;
            }
        }
        Self { re, im }
    }

    pub fn from_scalar(z: ComplexScalar) -> Self {
        Self::from_fn(1, 1, |_, _| z)
    }

    pub fn rows(&self) -> usize {
        self.re.nrows()
    }

    pub fn cols(&self) -> usize {
        self.re.ncols()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.re.dim()
    }

    pub fn re(&self) -> &Array2<f64> {
        &self.re
    }

    pub fn im(&self) -> &Array2<f64> {
        &self.im
    }

    pub fn re_mut(&mut self) -> &mut Array2<f64> {
        &mut self.re
    }

    pub fn im_mut(&mut self) -> &mut Array2<f64> {
        &mut self.im
    }

    pub fn get(&self, i: usize, j: usize) -> ComplexScalar {
        ComplexScalar::new(self.re[[i, j]], self.im[[i, j]])
    }

    pub fn set(&mut self, i: usize, j: usize, z: ComplexScalar) {
        self.re[[i, j]] = z.re;
        self.im[[i, j]] = z.im;
    }

    pub fn is_finite(&self) -> bool {
        self.re.iter().all(|v| v.is_finite()) && self.im.iter().all(|v| v.is_finite())
    }

    pub fn has_zero_im(&self) -> bool {
        self.im.iter().all(|&v| v == 0.0)
    }

    /// Entrywise map over `(re, im)` pairs.
    pub fn map(&self, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> ComplexTensor {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        ndarray::Zip::from(&mut re).and(&mut im).for_each(|r, i| {
            let (nr, ni) = f(*r, *i);
            *r = nr;
            *i = ni;
        });
        ComplexTensor { re, im }
    }

    /// Entrywise sum; shapes must match.
    pub fn add(&self, other: &ComplexTensor) -> Result<ComplexTensor> {
        self.check_same_shape(other, "add")?;
        Ok(ComplexTensor {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        })
    }

    /// Adds a `1 x cols` row tensor to every row.
    pub fn add_row(&self, row: &ComplexTensor) -> Result<ComplexTensor> {
        if row.rows() != 1 || row.cols() != self.cols() {
            return Err(Error::DimensionMismatch {
                op: "add_row",
                left_rows: self.rows(),
                left_cols: self.cols(),
                right_rows: row.rows(),
                right_cols: row.cols(),
            });
        }
        Ok(ComplexTensor {
            re: &self.re + &row.re.row(0),
            im: &self.im + &row.im.row(0),
        })
    }

    /// Complex matrix product via four real products and two additions:
    /// `Re(xW) = Re(x)Re(W) - Im(x)Im(W)`, `Im(xW) = Im(x)Re(W) + Re(x)Im(W)`.
    pub fn matmul(&self, rhs: &ComplexTensor) -> Result<ComplexTensor> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left_rows: self.rows(),
                left_cols: self.cols(),
                right_rows: rhs.rows(),
                right_cols: rhs.cols(),
            });
        }
        let re = self.re.dot(&rhs.re) - self.im.dot(&rhs.im);
        let im = self.im.dot(&rhs.re) + self.re.dot(&rhs.im);
        Ok(ComplexTensor { re, im })
    }

    /// Row subset in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> ComplexTensor {
        ComplexTensor {
            re: self.re.select(Axis(0), indices),
            im: self.im.select(Axis(0), indices),
        }
    }

    fn check_same_shape(&self, other: &ComplexTensor, op: &'static str) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                op,
                left_rows: self.rows(),
                left_cols: self.cols(),
                right_rows: other.rows(),
                right_cols: other.cols(),
            });
        }
        Ok(())
    }
}

/// The real `2r x 2c` matrix holding one `[[a, -b], [b, a]]` block per
/// complex entry `a + ib`. Products of augmented matrices mirror complex
/// matrix products.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedMatrix(Array2<f64>);

impl AugmentedMatrix {
    pub fn from_tensor(t: &ComplexTensor) -> Self {
        let (rows, cols) = t.dim();
        let mut out = Array2::zeros((2 * rows, 2 * cols));
        for i in 0..rows {
            for j in 0..cols {
                let a = t.re()[[i, j]];
                let b = t.im()[[i, j]];
                out[[2 * i, 2 * j]] = a;
                out[[2 * i, 2 * j + 1]] = -b;
                out[[2 * i + 1, 2 * j]] = b;
                out[[2 * i + 1, 2 * j + 1]] = a;
            }
        }
        AugmentedMatrix(out)
    }

    pub fn as_array(&self) -> ArrayView2<'_, f64> {
        self.0.view()
    }

    /// Plain real matrix product of the augmented representations.
    pub fn product(&self, rhs: &AugmentedMatrix) -> Result<Array2<f64>> {
        if self.0.ncols() != rhs.0.nrows() {
            return Err(Error::DimensionMismatch {
                op: "augmented product",
                left_rows: self.0.nrows(),
                left_cols: self.0.ncols(),
                right_rows: rhs.0.nrows(),
                right_cols: rhs.0.ncols(),
            });
        }
        Ok(self.0.dot(&rhs.0))
    }

    /// Largest deviation from the `[[a, -b], [b, a]]` block structure.
    pub fn structure_residual(&self) -> f64 {
        let rows = self.0.nrows() / 2;
        let cols = self.0.ncols() / 2;
        let mut worst = 0.0_f64;
        for i in 0..rows {
            for j in 0..cols {
                let d1 = (self.0[[2 * i, 2 * j]] - self.0[[2 * i + 1, 2 * j + 1]]).abs();
                let d2 = (self.0[[2 * i, 2 * j + 1]] + self.0[[2 * i + 1, 2 * j]]).abs();
                worst = worst.max(d1).max(d2);
            }
        }
        worst
    }
}

/// Builds the augmented representation of a complex tensor.
pub fn to_augmented(t: &ComplexTensor) -> AugmentedMatrix {
    AugmentedMatrix::from_tensor(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force complex matmul over scalars, the oracle for the
    // four-real-product implementation.
    fn naive_matmul(a: &ComplexTensor, b: &ComplexTensor) -> ComplexTensor {
        let (n, k) = a.dim();
        let m = b.cols();
        ComplexTensor::from_fn(n, m, |i, j| {
            let mut acc = ComplexScalar::ZERO;
            for l in 0..k {
                acc = acc + a.get(i, l) * b.get(l, j);
            }
            acc
        })
    }

    fn rand_tensor(rows: usize, cols: usize, seed: u64) -> ComplexTensor {
        // xorshift-ish fill, good enough for structural tests
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state as f64 / u64::MAX as f64) * 4.0 - 2.0
        };
        ComplexTensor::from_fn(rows, cols, |_, _| ComplexScalar::new(next(), next()))
    }

    #[test]
    fn scalar_augmented_blocks() {
        let aug_i = to_augmented(&ComplexTensor::from_scalar(ComplexScalar::I));
        assert_eq!(
            aug_i.as_array().to_owned(),
            ndarray::arr2(&[[0.0, -1.0], [1.0, 0.0]])
        );
        let aug_one = to_augmented(&ComplexTensor::from_scalar(ComplexScalar::ONE));
        assert_eq!(
            aug_one.as_array().to_owned(),
            ndarray::arr2(&[[1.0, 0.0], [0.0, 1.0]])
        );
    }

    #[test]
    fn augmented_product_matches_complex_product() {
        let a = rand_tensor(2, 2, 11);
        let b = rand_tensor(2, 2, 23);
        let complex = a.matmul(&b).unwrap();
        let augmented = to_augmented(&a).product(&to_augmented(&b)).unwrap();
        let expected = to_augmented(&complex);
        let diff = &augmented - &expected.as_array();
        assert!(diff.iter().all(|d| d.abs() < 1e-10));
    }

    #[test]
    fn matmul_matches_naive_oracle() {
        let a = rand_tensor(3, 4, 5);
        let b = rand_tensor(4, 2, 9);
        let fast = a.matmul(&b).unwrap();
        let slow = naive_matmul(&a, &b);
        for i in 0..3 {
            for j in 0..2 {
                let d = fast.get(i, j) - slow.get(i, j);
                assert!(d.magnitude() < 1e-12, "entry ({i},{j}) differs by {d}");
            }
        }
    }

    #[test]
    fn one_by_one_matmul_reduces_to_scalar_mul() {
        let a = ComplexTensor::from_scalar(ComplexScalar::new(1.0, 2.0));
        let b = ComplexTensor::from_scalar(ComplexScalar::new(3.0, 4.0));
        let p = a.matmul(&b).unwrap();
        assert_eq!(p.get(0, 0), ComplexScalar::new(-5.0, 10.0));
    }

    #[test]
    fn real_input_simplification_is_exact() {
        // With Im(x) = 0 the dropped products multiply a zero plane, so
        // Re(xW) == Re(x)Re(W) and Im(xW) == Re(x)Im(W) hold exactly.
        let x = ComplexTensor::from_real(rand_tensor(3, 4, 17).re().clone());
        let w = rand_tensor(4, 5, 31);
        let product = x.matmul(&w).unwrap();
        let re_only = x.re().dot(w.re());
        let im_only = x.re().dot(w.im());
        assert_eq!(product.re(), &re_only);
        assert_eq!(product.im(), &im_only);
    }

    #[test]
    fn zero_imaginary_closure() {
        let x = ComplexTensor::from_real(rand_tensor(2, 3, 41).re().clone());
        let w = ComplexTensor::from_real(rand_tensor(3, 2, 43).re().clone());
        let product = x.matmul(&w).unwrap();
        assert!(product.has_zero_im());
    }

    #[test]
    fn matmul_shape_mismatch_names_both_shapes() {
        let a = ComplexTensor::zeros(2, 3);
        let b = ComplexTensor::zeros(4, 2);
        let err = a.matmul(&b).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2x3") && msg.contains("4x2"), "message was {msg}");
    }

    #[test]
    fn select_rows_keeps_order() {
        let t = ComplexTensor::from_fn(4, 1, |i, _| ComplexScalar::new(i as f64, -(i as f64)));
        let s = t.select_rows(&[2, 0]);
        assert_eq!(s.get(0, 0), ComplexScalar::new(2.0, -2.0));
        assert_eq!(s.get(1, 0), ComplexScalar::new(0.0, 0.0));
    }
}
