//! Many-body models over sum-free placements: a basis of values spread over
//! `K` levels, constrained creation and annihilation operators, the
//! Hamiltonian `H0 + He + Hi`, and permanent-symmetrized registers.

mod algebra;
mod basis;
mod hamiltonian;
mod operator;
mod permanent;
mod state;

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde_json::json;
use thiserror::Error;

pub use algebra::{algebra_report, AlgebraReport, Deviation, DeviationKind, Mode, Relation};
pub use basis::{Basis, BasisState, DEFAULT_BASIS_CAP};
pub use hamiltonian::{ground_state, hamiltonian, GroundState, Hamiltonian, DEFAULT_TOLERANCE, MAX_DENSE_DIM};
pub use operator::{annihilation, creation, number, ExactOp};
pub use permanent::{permanent_register, SymmetrizedRegister, MAX_REGISTER};
pub use state::StateVector;

#[derive(Debug, Error, PartialEq)]
pub enum ManybodyError {
    #[error("basis exceeds the cap of {cap} states")]
    BasisTooLarge { cap: usize },
    #[error("level count must be in 1..=255, got {0}")]
    InvalidLevels(usize),
    #[error("values must be positive and strictly increasing: {0:?}")]
    InvalidValues(Vec<u32>),
    #[error("operators need a basis with absent states")]
    NeedsAbsentStates,
    #[error("level {level} out of range for {k} levels")]
    LevelOutOfRange { level: usize, k: usize },
    #[error("value {0} is not in the basis")]
    ValueNotInBasis(u32),
    #[error("state {0} is not in the basis")]
    StateNotInBasis(String),
    #[error("expected {expected} level energies, got {got}")]
    EnergyCount { expected: usize, got: usize },
    #[error("matrix is {rows}x{cols}, not square and nonempty")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSelfAdjoint { asymmetry: f64 },
    #[error("dimension {dim} exceeds the dense eigensolver limit {max}")]
    TooLargeForDense { dim: usize, max: usize },
    #[error("eigensolver failed on a {dim}x{dim} matrix: {detail}")]
    NumericalFailure { dim: usize, detail: String },
    #[error("a register holds at most {max} values, got {got}")]
    TooManyValues { max: usize, got: usize },
    #[error("a register needs at least one value")]
    EmptyRegister,
    #[error("value {0} repeated in register")]
    DuplicateValue(u32),
}

/// Basis as JSON: one entry per state with its level registers and the
/// absent values.
pub fn basis_json(basis: &Basis) -> serde_json::Value {
    let states: Vec<serde_json::Value> = basis
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let levels: Vec<Vec<u32>> = (0..basis.k()).map(|k| basis.level_values(s, k)).collect();
            let absent: Vec<u32> =
                basis.values().iter().zip(s.placement()).filter(|(_, p)| p.is_none()).map(|(&v, _)| v).collect();
            json!({ "index": i, "label": basis.label(s), "levels": levels, "absent": absent })
        })
        .collect();
    json!({
        "K": basis.k(),
        "values": basis.values(),
        "constraint": basis.constraint().to_string(),
        "allow_absent": basis.allows_absent(),
        "dim": basis.dim(),
        "states": states,
    })
}

/// Dense text: a `dim N` header, then one row per line.
pub fn matrix_text(label: &str, m: &DMatrix<f64>) -> String {
    let mut out = format!("# {label}\ndim {}\n", m.nrows());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format!("{}", m[(r, c)])).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

/// Ground state as JSON with an amplitude table per eigenvector.
pub fn ground_state_json(basis: &Basis, ground: &GroundState) -> serde_json::Value {
    let vectors: Vec<serde_json::Value> = ground
        .eigenvectors
        .iter()
        .map(|v| {
            let sv = StateVector { amplitudes: v.iter().copied().collect() };
            let rows: Vec<serde_json::Value> = sv
                .table(basis, 1e-12)
                .into_iter()
                .map(|(label, a)| json!({ "state": label, "amplitude": a }))
                .collect();
            json!(rows)
        })
        .collect();
    json!({
        "energy": ground.energy,
        "degeneracy": ground.degeneracy,
        "eigenvectors": vectors,
    })
}
