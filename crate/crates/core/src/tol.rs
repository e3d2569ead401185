//! Tolerance policy threaded through every verification routine.

use crate::error::{Error, Result};

/// Numerical tolerances for feasibility, equality and rank decisions.
///
/// All arithmetic is f64. `eps_feas` bounds one-sided feasibility slack
/// (dual norms, containment margins), `eps_eq` bounds two-sided equation
/// residuals (reconstruction identities), and `eps_rank` is the relative
/// singular-value cutoff for rank decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub eps_feas: f64,
    pub eps_eq: f64,
    pub eps_rank: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            eps_feas: 1e-9,
            eps_eq: 1e-9,
            eps_rank: 1e-10,
        }
    }
}

impl TolerancePolicy {
    pub fn new(eps_feas: f64, eps_eq: f64, eps_rank: f64) -> Result<Self> {
        let pol = TolerancePolicy {
            eps_feas,
            eps_eq,
            eps_rank,
        };
        pol.validate()?;
        Ok(pol)
    }

    /// Feasibility slack must dominate equation slack: a point that satisfies
    /// an equation within eps_eq must never fail a feasibility test derived
    /// from the same data.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_feas", self.eps_feas),
            ("eps_eq", self.eps_eq),
            ("eps_rank", self.eps_rank),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if self.eps_feas < self.eps_eq {
            return Err(Error::invalid(format!(
                "eps_feas ({}) must be >= eps_eq ({})",
                self.eps_feas, self.eps_eq
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        TolerancePolicy::default().validate().unwrap();
    }

    #[test]
    fn rejects_inverted_slacks() {
        assert!(TolerancePolicy::new(1e-12, 1e-9, 1e-10).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(TolerancePolicy::new(f64::NAN, 1e-9, 1e-10).is_err());
        assert!(TolerancePolicy::new(0.0, 1e-9, 1e-10).is_err());
    }
}
