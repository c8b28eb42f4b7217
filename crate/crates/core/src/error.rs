use thiserror::Error;

/// Errors produced by the analytic layer.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// A parameter violated its documented domain.
    #[error("invalid parameter {name}: {value} ({constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The interference integral diverges (requires a path-loss exponent > 2).
    #[error("integral diverges for path-loss exponent alpha = {alpha} (requires alpha > 2)")]
    DivergentIntegral { alpha: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not converge: value ~ {value}, error estimate {error_estimate} \
         after {subdivisions} subdivisions"
    )]
    QuadratureNonConvergence {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    /// Bias solve requested for a target on the simplex boundary.
    #[error("association target A[{index}] = {value} lies on the simplex boundary; bias factors are defined only for interior targets")]
    BoundaryAssociation { index: usize, value: f64 },

    /// The linear system produced a non-positive B^(2/alpha); no bias vector realizes the target.
    #[error("bias solve infeasible: solved x = {solution:?} contains non-positive entries")]
    InfeasibleBias { solution: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    /// True for failures of the numerical machinery (as opposed to bad inputs).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            CoreError::QuadratureNonConvergence { .. } | CoreError::InfeasibleBias { .. }
        )
    }
}
