use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The zeta <-> energy map is only defined for the quartic family with omega > 0.
    #[error("unsupported map: {0}")]
    UnsupportedMap(String),

    /// Quadrature or finite differencing could not reach the requested accuracy.
    /// Carries the best estimate together with its error bound.
    #[error("requested accuracy not reached: best estimate {estimate} with bound {error_bound}")]
    AccuracyNotReached { estimate: f64, error_bound: f64 },

    /// First-order stationarity has no admissible solution with lambda^2 >= 0.
    #[error("PMS failure: {0}")]
    PmsFailure(String),

    /// The requested (kind, family) expansion is not implemented.
    #[error("not implemented: {0}")]
    NotImplemented(String),

    /// The level solver failed to bracket or converge on a root.
    #[error("solver error for level {n}: {message} (last bracket [{lo}, {hi}])")]
    Solver {
        n: usize,
        message: String,
        lo: f64,
        hi: f64,
    },

    /// The basis-doubling loop hit its cap before every requested level converged.
    /// `converged` holds the levels that did converge, in order.
    #[error("oracle did not converge within basis cap {basis_cap}: {} of {requested} levels converged", converged.len())]
    OracleConvergence {
        basis_cap: usize,
        requested: usize,
        converged: Vec<f64>,
    },

    /// Z(s) diverges at or below the convergence abscissa.
    #[error("zeta divergence: s = {s} is at or below the abscissa {abscissa}")]
    ZetaDivergence { s: f64, abscissa: f64 },

    /// The closed-form spectrum formula left its validity range at this level.
    #[error("closed-form formula out of range at n = {n}: {message}")]
    FormulaOutOfRange { n: usize, message: String },

    /// A serialized series could not be parsed back.
    #[error("malformed series JSON: {0}")]
    SeriesJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
