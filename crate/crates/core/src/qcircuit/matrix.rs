// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Small dense complex matrices.
//!
//! Gates here are at most 8×8, so a flat row-major `Vec` beats pulling in a
//! linear-algebra crate.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be a square.
    pub fn from_rows(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Matrix { dim, data })
    }

    /// Row-major real entries.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must all have length {dim}");
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn dagger(&self) -> Matrix {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let d = self.dim * other.dim;
        let mut out = Self::zeros(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out[(i * other.dim + k, j * other.dim + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Matrix {
        (0..exp).fold(Self::identity(self.dim), |acc, _| &acc * self)
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max-abs entry of `M†M − I`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.dagger() * self;
        prod.max_abs_diff(&Self::identity(self.dim))
            .expect("square product keeps its dimension")
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_abs_diff(&Self::identity(self.dim))
            .map(|d| d <= tol)
            .unwrap_or(false)
    }

    /// `self · v` for a column vector.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix product needs equal dimensions");
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Applies `m` (dimension `2^targets.len()`) to the listed qubits of an
/// `n`-qubit amplitude vector. Qubit 0 is the most significant bit and the
/// first target is the most significant bit of the gate's local index.
///
/// `m` need not be unitary; the oracle uses this with projectors and blocks.
pub fn apply_to_amplitudes(amps: &mut [C64], n: usize, m: &Matrix, targets: &[usize]) {
    let k = targets.len();
    debug_assert_eq!(m.dim(), 1 << k);
    debug_assert_eq!(amps.len(), 1 << n);
    let masks: Vec<usize> = targets.iter().map(|&q| 1usize << (n - 1 - q)).collect();
    let target_mask: usize = masks.iter().sum();
    let sub = 1usize << k;
    let offsets: Vec<usize> = (0..sub)
        .map(|s| {
            (0..k)
                .filter(|&j| s & (1 << (k - 1 - j)) != 0)
                .map(|j| masks[j])
                .sum()
        })
        .collect();
    let mut gathered = vec![ZERO; sub];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (s, off) in offsets.iter().enumerate() {
            gathered[s] = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            amps[base | off] = (0..sub).map(|c| m[(r, c)] * gathered[c]).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_orders_left_factor_as_high_bits() {
        let x = Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let i = Matrix::identity(2);
        let xi = x.kron(&i);
        // X⊗I maps |00⟩ (index 0) to |10⟩ (index 2).
        assert_eq!(xi[(2, 0)], ONE);
        assert_eq!(xi[(1, 1)], ZERO);
    }

    #[test]
    fn from_rows_rejects_non_square_lengths() {
        assert!(Matrix::from_rows(vec![ONE; 3]).is_err());
        assert_eq!(Matrix::from_rows(vec![ONE; 4]).unwrap().dim(), 2);
    }

    #[test]
    fn apply_matches_kron_embedding() {
        let y = Matrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let full = Matrix::identity(2).kron(&y).kron(&Matrix::identity(2));
        let v: Vec<C64> = (0..8)
            .map(|i| C64::new(i as f64, -(i as f64) / 3.0))
            .collect();
        let expected = full.apply_vec(&v);
        let mut got = v.clone();
        apply_to_amplitudes(&mut got, 3, &y, &[1]);
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn reversed_targets_swap_roles() {
        // CX with control on qubit 1 and target on qubit 0.
        let cx = Matrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        let mut v = vec![ZERO; 4];
        v[1] = ONE; // |01⟩
        apply_to_amplitudes(&mut v, 2, &cx, &[1, 0]);
        assert_eq!(v[3], ONE); // |11⟩
    }
}
