/// Default absolute slack for every bound comparison.
pub const DEFAULT_BOUND_TOLERANCE: f64 = 1e-9;

/// Default admission window: a vector is accepted as unit when `|‖v‖ − 1| ≤ 1e-6`.
pub const DEFAULT_UNIT_TOLERANCE: f64 = 1e-6;

/// Numerical tolerances shared by the balancers and verifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute slack `τ` added to every claimed bound.
    pub bound: f64,
    /// Admission window for unit vectors.
    pub unit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bound: DEFAULT_BOUND_TOLERANCE,
            unit: DEFAULT_UNIT_TOLERANCE,
        }
    }
}

impl Tolerances {
    pub fn with_bound(bound: f64) -> Self {
        Tolerances {
            bound,
            ..Default::default()
        }
    }
}
