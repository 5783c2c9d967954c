//! Pass/fail records shared by the verification suites and the CLI.

/// Outcome of one named check: two computed sides of an inequality or
/// identity, the tolerance used, and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub scenario_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub steps: usize,
    /// Grid descriptor such as "256x256", or "-" when no grid is involved.
    pub grid: String,
    pub seed: u64,
}

impl VerificationReport {
    /// Check lhs <= rhs + tolerance.
    pub fn inequality(id: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        VerificationReport {
            scenario_id: id.into(),
            lhs,
            rhs,
            tolerance,
            pass: lhs <= rhs + tolerance,
            steps: 0,
            grid: "-".into(),
            seed: 0,
        }
    }

    /// Check |lhs - rhs| <= tolerance.
    pub fn equality(id: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        VerificationReport {
            scenario_id: id.into(),
            lhs,
            rhs,
            tolerance,
            pass: (lhs - rhs).abs() <= tolerance,
            steps: 0,
            grid: "-".into(),
            seed: 0,
        }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_grid(mut self, grid: impl Into<String>) -> Self {
        self.grid = grid.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_passes_within_tolerance() {
        assert!(VerificationReport::inequality("a", 1.0, 0.999999, 1e-5).pass);
        assert!(!VerificationReport::inequality("a", 1.0, 0.9, 1e-5).pass);
        assert!(VerificationReport::inequality("a", 0.5, 1.0, 0.0).pass);
    }

    #[test]
    fn equality_is_two_sided() {
        assert!(VerificationReport::equality("a", 1.0, 1.0 + 5e-6, 1e-5).pass);
        assert!(!VerificationReport::equality("a", 1.0, 1.1, 1e-5).pass);
        assert!(!VerificationReport::equality("a", 1.1, 1.0, 1e-5).pass);
    }

    #[test]
    fn slack_is_rhs_minus_lhs() {
        let r = VerificationReport::inequality("a", 0.25, 1.0, 0.0);
        assert_eq!(r.slack(), 0.75);
    }
}
