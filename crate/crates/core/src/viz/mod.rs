//! Pauli-diagonal states, local conjugation and pushforward measures.
//!
//! Every two-qubit state is locally equivalent to a Pauli-diagonal one
//! `(I + sum_k d_k s_k (x) s_k) / 4`. In `d`-space the states fill a
//! tetrahedron, the separable states the inscribed octahedron, and the
//! surrounding cube holds the entanglement witnesses. The functions here
//! push parameter-space measure through `rho -> (A (x) B) rho (A (x) B)^dag`
//! and tally it by region.

mod group;
mod jacobian;
mod pauli;
mod qubit;
mod rebit;

pub use group::{
    bargmann_complex, bargmann_su11, bargmann_to_sl2r, conjugate_state, conjugation_normalizer, Mat2, Sl2cParam,
    Sl2rParam, NORMALIZER_FLOOR, SL2C_MIN_A,
};
pub use jacobian::{gram_volume, jacobian_det, numerical_jacobian, DEFAULT_STEP};
pub use pauli::{
    classify_region, det_pt_formula, det_rho_formula, pauli_eigenvalues, pauli_state, DPoint, Region, REGION_TOLERANCE,
};
pub use qubit::{qubit_map, qubit_measure_bins, QubitVizConfig, QubitVizCounts, QubitVizResult, SeparabilityEstimate, SINGULAR_DET};
pub use rebit::{
    rebit_map, rebit_measure_map, rebit_point_measure, rebit_point_measure_fast, RebitMeasure, RebitRatios,
    RebitVizConfig, RebitVizResult,
};

use serde::{Deserialize, Serialize};

/// Accumulated measure per region of the cube.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegionTally {
    pub measure_octahedron: f64,
    pub measure_tetra_minus_octa: f64,
    pub measure_cube_minus_tetra: f64,
    pub count_octahedron: u64,
    pub count_tetra_minus_octa: u64,
    pub count_cube_minus_tetra: u64,
}

impl RegionTally {
    pub fn add(&mut self, region: Region, measure: f64) {
        match region {
            Region::Separable => {
                self.measure_octahedron += measure;
                self.count_octahedron += 1;
            }
            Region::Entangled => {
                self.measure_tetra_minus_octa += measure;
                self.count_tetra_minus_octa += 1;
            }
            Region::Witness => {
                self.measure_cube_minus_tetra += measure;
                self.count_cube_minus_tetra += 1;
            }
        }
    }

    pub fn merge(&mut self, o: &Self) {
        self.measure_octahedron += o.measure_octahedron;
        self.measure_tetra_minus_octa += o.measure_tetra_minus_octa;
        self.measure_cube_minus_tetra += o.measure_cube_minus_tetra;
        self.count_octahedron += o.count_octahedron;
        self.count_tetra_minus_octa += o.count_tetra_minus_octa;
        self.count_cube_minus_tetra += o.count_cube_minus_tetra;
    }

    pub fn total(&self) -> f64 {
        self.measure_octahedron + self.measure_tetra_minus_octa + self.measure_cube_minus_tetra
    }
}

/// Values on a square lattice, row-major with the first axis outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSurface {
    pub axes: [String; 2],
    /// Shared abscissae of both axes.
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
}

impl GridSurface {
    pub fn side(&self) -> usize {
        self.abscissae.len()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.side() + j]
    }
}
