//! Dense row-major coefficient arrays.

use crate::error::{Error, Result};

/// A dense `k`-dimensional array stored row-major (last axis fastest).
///
/// Axis `r` has length `deg_r + 1`, so the entry at multi-index `i` holds the
/// coefficient of `X_1^{i_1} ... X_k^{i_k}`. A tensor with zero axes is a
/// scalar with exactly one entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTensor<T> {
    shape: Vec<usize>,
    data: Vec<T>,
}

impl<T> CoefficientTensor<T> {
    pub fn new(shape: Vec<usize>, data: Vec<T>) -> Result<Self> {
        if shape.iter().any(|&s| s == 0) {
            return Err(Error::InvalidPolynomial(
                "tensor axes must have positive length".into(),
            ));
        }
        let expected: usize = shape.iter().product();
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: data.len(),
            });
        }
        Ok(Self { shape, data })
    }

    pub fn scalar(value: T) -> Self {
        Self {
            shape: Vec::new(),
            data: vec![value],
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    /// Flat offset of a multi-index, or `None` when it lies outside the shape.
    pub fn offset(&self, index: &[usize]) -> Option<usize> {
        if index.len() != self.shape.len() {
            return None;
        }
        let mut offset = 0;
        for (&i, &n) in index.iter().zip(&self.shape) {
            if i >= n {
                return None;
            }
            offset = offset * n + i;
        }
        Some(offset)
    }

    pub fn get(&self, index: &[usize]) -> Option<&T> {
        self.offset(index).map(|o| &self.data[o])
    }

    /// Multi-index of a flat offset.
    pub fn unravel(&self, mut offset: usize) -> Vec<usize> {
        let mut index = vec![0; self.shape.len()];
        for (slot, &n) in index.iter_mut().zip(&self.shape).rev() {
            *slot = offset % n;
            offset /= n;
        }
        index
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> CoefficientTensor<U> {
        CoefficientTensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Evaluates the last axis as a polynomial by Horner's rule.
    ///
    /// `step(acc, c)` must return `c + u * acc` for the evaluation point `u`;
    /// the result has one axis fewer. Coefficients along the last axis are
    /// consumed from the highest index down.
    pub fn horner_last_axis_with(&self, mut step: impl FnMut(&T, &T) -> T) -> Self
    where
        T: Clone,
    {
        let (&last, outer) = self
            .shape
            .split_last()
            .expect("horner evaluation needs at least one axis");
        let data = self
            .data
            .chunks_exact(last)
            .map(|chunk| {
                let (top, rest) = chunk.split_last().expect("non-empty axis");
                rest.iter().rev().fold(top.clone(), |acc, c| step(&acc, c))
            })
            .collect();
        Self {
            shape: outer.to_vec(),
            data,
        }
    }
}

impl<T: Clone> CoefficientTensor<T> {
    pub fn filled(shape: Vec<usize>, value: T) -> Result<Self> {
        let len = shape.iter().product();
        Self::new(shape, vec![value; len])
    }
}
