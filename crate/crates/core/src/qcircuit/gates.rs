// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Named gate constants.
//!
//! Two-qubit gates put the control on the left (more significant) qubit, so
//! `W` acting on `|10⟩` rotates the target: `(|10⟩ + |11⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use super::matrix::{Matrix, C64};
use crate::error::{Error, Result};

/// Tolerance for unitarity checks on gate construction.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct Gate {
    label: String,
    arity: usize,
    matrix: Matrix,
}

impl Gate {
    /// Wraps a matrix as a gate after checking its dimension and unitarity.
    pub fn new(label: impl Into<String>, matrix: Matrix) -> Result<Self> {
        let label = label.into();
        let dim = matrix.dim();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                found: dim,
            });
        }
        if matrix.unitarity_defect() > UNITARY_TOL {
            return Err(Error::NotUnitary(label));
        }
        Ok(Gate {
            label,
            arity: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    fn constant(label: &str, matrix: Matrix) -> Self {
        Gate::new(label, matrix).expect("built-in gate constants are unitary")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dagger(&self) -> Gate {
        Gate {
            label: format!("{}†", self.label),
            arity: self.arity,
            matrix: self.matrix.dagger(),
        }
    }

    pub fn pow(&self, exp: u32) -> Gate {
        Gate {
            label: format!("{}^{exp}", self.label),
            arity: self.arity,
            matrix: self.matrix.pow(exp),
        }
    }

    /// A one-qubit gate `U` promoted to `U ⊗ I` on a nearest-neighbour pair;
    /// two-qubit gates are returned unchanged.
    pub fn promote_to_pair(&self) -> Result<Gate> {
        match self.arity {
            1 => Ok(Gate {
                label: self.label.clone(),
                arity: 2,
                matrix: self.matrix.kron(&Matrix::identity(2)),
            }),
            2 => Ok(self.clone()),
            _ => Err(Error::InvalidTarget {
                targets: vec![0, 1],
                arity: self.arity,
                qubits: 2,
            }),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity(1e-12)
    }

    pub fn i() -> Gate {
        Self::constant("I", Matrix::identity(2))
    }

    pub fn i2() -> Gate {
        Self::constant("I", Matrix::identity(4))
    }

    /// Controlled 45° rotation.
    pub fn w() -> Gate {
        let s = FRAC_1_SQRT_2;
        Self::constant(
            "W",
            Matrix::from_real(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, s, -s],
                &[0.0, 0.0, s, s],
            ]),
        )
    }

    /// Swap.
    pub fn s() -> Gate {
        Self::constant(
            "S",
            Matrix::from_real(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 1.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
            ]),
        )
    }

    /// Target block of `W`, i.e. `W` with its control held at `|1⟩`.
    pub fn hy() -> Gate {
        let s = FRAC_1_SQRT_2;
        Self::constant("Hy", Matrix::from_real(&[&[s, -s], &[s, s]]))
    }

    pub fn h() -> Gate {
        let s = FRAC_1_SQRT_2;
        Self::constant("H", Matrix::from_real(&[&[s, s], &[s, -s]]))
    }

    pub fn x() -> Gate {
        Self::constant("X", Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]))
    }

    pub fn z() -> Gate {
        Self::constant("Z", Matrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]))
    }

    /// Real Pauli Y, `XZ` (the usual Y up to a factor of i).
    pub fn y() -> Gate {
        Self::constant("Y", Matrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]))
    }

    pub fn y_inv() -> Gate {
        Self::constant("Y⁻¹", Matrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]))
    }

    pub fn cx() -> Gate {
        Self::constant(
            "CX",
            Matrix::from_real(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0],
            ]),
        )
    }

    /// Controlled phase `diag(1, 1, 1, i)`. Kept for reference only: no
    /// identity in this crate synthesizes it.
    pub fn lambda_phase_i() -> Gate {
        let mut m = Matrix::identity(4);
        m[(3, 3)] = C64::new(0.0, 1.0);
        Self::constant("Λ(P(i))", m)
    }

    /// Toffoli (controlled-controlled-NOT).
    pub fn toffoli() -> Gate {
        let mut m = Matrix::identity(8);
        m[(6, 6)] = C64::new(0.0, 0.0);
        m[(7, 7)] = C64::new(0.0, 0.0);
        m[(6, 7)] = C64::new(1.0, 0.0);
        m[(7, 6)] = C64::new(1.0, 0.0);
        Self::constant("T", m)
    }

    /// Controlled-controlled real Y.
    pub fn lambda2_y() -> Gate {
        let mut m = Matrix::identity(8);
        m[(6, 6)] = C64::new(0.0, 0.0);
        m[(7, 7)] = C64::new(0.0, 0.0);
        m[(6, 7)] = C64::new(-1.0, 0.0);
        m[(7, 6)] = C64::new(1.0, 0.0);
        Self::constant("Λ²(Y)", m)
    }

    /// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U` for a one-qubit `U`.
    pub fn controlled(u: &Gate) -> Result<Gate> {
        if u.arity != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: u.matrix.dim(),
            });
        }
        let mut m = Matrix::identity(4);
        for r in 0..2 {
            for c in 0..2 {
                m[(2 + r, 2 + c)] = u.matrix[(r, c)];
            }
        }
        Gate::new(format!("C{}", u.label), m)
    }

    /// Looks up a gate by the names used in circuit files.
    pub fn by_name(name: &str) -> Option<Gate> {
        Some(match name {
            "I" => Gate::i(),
            "W" => Gate::w(),
            "S" => Gate::s(),
            "H" => Gate::h(),
            "Hy" => Gate::hy(),
            "X" => Gate::x(),
            "Z" => Gate::z(),
            "Y" => Gate::y(),
            "CX" => Gate::cx(),
            "T" => Gate::toffoli(),
            _ => return None,
        })
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gate({}, arity {})", self.label, self.arity)
    }
}
