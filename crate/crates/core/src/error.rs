use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("energy scale {name} must be strictly positive and finite, got {value}")]
    NonPositiveEnergy { name: &'static str, value: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid too narrow: boundary potential {boundary:.4} GHz does not exceed level {level:.4} GHz")]
    GridTooNarrow { boundary: f64, level: f64 },

    #[error("grid too narrow: state {state} keeps {ratio:.2e} of its peak amplitude next to the boundary")]
    BoundaryAmplitude { state: usize, ratio: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error(
        "not converging: eigenvalue change {change:.3e} GHz still above {target:.3e} GHz at resolution cap {points}"
    )]
    NotConverging { change: f64, target: f64, points: usize },

    #[error(
        "ambiguous classification: density centroid is {distance:.3} rad from the nearest well (limit {limit:.3})"
    )]
    AmbiguousClassification { distance: f64, limit: f64 },

    #[error("no double well at flux difference {phi_delta} Φ₀")]
    NoDoubleWell { phi_delta: f64 },

    #[error("not a well: curvature {curvature:.4} GHz is not positive")]
    NotAWell { curvature: f64 },

    #[error("level {level:.4} GHz lies above the barrier top {barrier:.4} GHz")]
    LevelAboveBarrier { level: f64, barrier: f64 },

    #[error("wells are asymmetric at flux difference {phi_delta} Φ₀")]
    AsymmetricWells { phi_delta: f64 },

    #[error("invalid β = {0}: must exceed 1")]
    InvalidBeta(f64),

    #[error("flux offset {offset} Φ₀ is outside the linearization window ±{window} Φ₀")]
    OutsideLinearWindow { offset: f64, window: f64 },

    #[error("missing states: {0}")]
    MissingStates(String),

    #[error("no commensurate delay: best n = {n} leaves residual {residual:.3e}")]
    NoCommensurateDelay { n: u64, residual: f64 },
}
