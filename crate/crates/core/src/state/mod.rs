//! Exact 4x4 state algebra.
//!
//! Coordinate ordering is fixed crate-wide: the three free diagonal entries
//! `(G11, G22, G33)` of the Cholesky factor come first, followed by the
//! strictly lower entries in row-major order `(G21, G31, G32, G41, G42, G43)`.
//! For qubits each off-diagonal entry contributes its real and imaginary
//! parts adjacently, giving 15 coordinates; rebits give 9.

mod cholesky;
mod hypersphere;
mod matrix;

pub use cholesky::{cholesky_compose, cholesky_decompose, determinant_cholesky, CholeskyFactor};
pub use hypersphere::{
    ball_to_factor, det_pt_on_radial_ray, pt_sign_changes_on_ray, unit_direction, HyperspherePoint,
};
pub use matrix::{
    det4, eigenvalues4, is_separable_ppt, max_concurrence, partial_transpose, DensityMatrix, Mat4,
    Spectrum, PPT_TOLERANCE, PSD_TOLERANCE,
};

use serde::{Deserialize, Serialize};

/// Scalar field of the density-matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    /// Real entries: two-rebit states, 9 free parameters.
    Rebit,
    /// Complex entries: two-qubit states, 15 free parameters.
    Qubit,
}

impl Field {
    /// Dimension of the parameter ball.
    pub const fn dim(self) -> usize {
        match self {
            Field::Rebit => 9,
            Field::Qubit => 15,
        }
    }

    /// Exponents of `(G11, G22, G33)` in the Jacobian of `G -> rho`.
    pub const fn jacobian_exponents(self) -> [i32; 3] {
        match self {
            Field::Rebit => [4, 3, 2],
            Field::Qubit => [7, 5, 3],
        }
    }

    /// Power of `r` in the composite volume element: `dim + sum(exponents) - 1`.
    pub const fn radial_exponent(self) -> i32 {
        match self {
            Field::Rebit => 17,
            Field::Qubit => 29,
        }
    }

    /// Hilbert-Schmidt volume of the state space.
    pub fn hs_volume(self) -> f64 {
        use std::f64::consts::PI;
        match self {
            Field::Rebit => PI.powi(4) / 967_680.0,
            Field::Qubit => PI.powi(6) / 108_972_864_000.0,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Field::Rebit => "rebit",
            Field::Qubit => "qubit",
        }
    }

    pub(crate) const fn tag(self) -> u8 {
        match self {
            Field::Rebit => 1,
            Field::Qubit => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(Field::Rebit),
            2 => Some(Field::Qubit),
            _ => None,
        }
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Field {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rebit" | "real" => Ok(Field::Rebit),
            "qubit" | "complex" => Ok(Field::Qubit),
            other => Err(crate::Error::Input(format!("unknown field `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_exponent_is_dim_plus_jacobian_degree_minus_one() {
        for field in [Field::Rebit, Field::Qubit] {
            let deg: i32 = field.jacobian_exponents().iter().sum();
            assert_eq!(field.radial_exponent(), field.dim() as i32 + deg - 1);
        }
    }

    #[test]
    fn tags_round_trip() {
        for field in [Field::Rebit, Field::Qubit] {
            assert_eq!(Field::from_tag(field.tag()), Some(field));
            assert_eq!(field.name().parse::<Field>().unwrap(), field);
        }
        assert!(Field::from_tag(0).is_none());
    }
}
