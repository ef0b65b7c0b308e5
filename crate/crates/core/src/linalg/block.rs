use std::ops::Deref;

use serde::Serialize;

use super::DenseMatrix;
use crate::error::{Error, Result};

/// A dense matrix partitioned into a grid of `block_size x block_size` blocks.
///
/// Block indices are 0-based; block `(i, j)` occupies rows `i*s..(i+1)*s` and
/// columns `j*s..(j+1)*s` of the inner matrix.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct BlockMatrix {
    block_rows: usize,
    block_cols: usize,
    block_size: usize,
    inner: DenseMatrix,
}

impl BlockMatrix {
    pub fn zeros(block_rows: usize, block_cols: usize, block_size: usize) -> Self {
        Self {
            block_rows,
            block_cols,
            block_size,
            inner: DenseMatrix::zeros(block_rows * block_size, block_cols * block_size),
        }
    }

    /// Wraps `inner`, which must have dimensions divisible by `block_size`.
    pub fn from_dense(inner: DenseMatrix, block_size: usize) -> Result<Self> {
        let (r, c) = inner.shape();
        if block_size == 0 || r % block_size != 0 || c % block_size != 0 {
            return Err(Error::Shape {
                expected: (
                    r / block_size.max(1) * block_size,
                    c / block_size.max(1) * block_size,
                ),
                found: (r, c),
            });
        }
        Ok(Self {
            block_rows: r / block_size,
            block_cols: c / block_size,
            block_size,
            inner,
        })
    }

    #[inline]
    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    #[inline]
    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    #[inline]
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn block(&self, i: usize, j: usize) -> DenseMatrix {
        assert!(i < self.block_rows && j < self.block_cols, "block index out of range");
        let s = self.block_size;
        self.inner.submatrix(i * s, j * s, s, s)
    }

    pub fn set_block(&mut self, i: usize, j: usize, block: &DenseMatrix) {
        assert_eq!(block.shape(), (self.block_size, self.block_size));
        let s = self.block_size;
        self.inner.set_submatrix(i * s, j * s, block);
    }

    /// Adds `factor * block` into block `(i, j)`.
    pub fn add_to_block(&mut self, i: usize, j: usize, block: &DenseMatrix, factor: f64) {
        assert_eq!(block.shape(), (self.block_size, self.block_size));
        let s = self.block_size;
        self.inner.add_submatrix(i * s, j * s, block, factor);
    }

    /// Sum of the blocks in block row `i`.
    pub fn block_row_sum(&self, i: usize) -> DenseMatrix {
        let mut acc = DenseMatrix::zeros(self.block_size, self.block_size);
        for j in 0..self.block_cols {
            let s = self.block_size;
            acc.add_submatrix(0, 0, &self.inner.submatrix(i * s, j * s, s, s), 1.0);
        }
        acc
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.inner
    }
}

impl Deref for BlockMatrix {
    type Target = DenseMatrix;
    fn deref(&self) -> &DenseMatrix {
        &self.inner
    }
}
